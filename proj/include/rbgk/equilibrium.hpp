#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rbgk/phase_space.hpp"
#include "rbgk/root_finding.hpp"
#include "rbgk/tensor.hpp"

namespace rbgk {

/// Attractor parameters of one spatial cell.
///
/// The attractor of species i is
///   J_i(p) = head_i * exp(-beta_tilde (U_tilde.p - m_i c^2)),
/// i.e. head_i already carries the factor exp(-beta_tilde m_i c^2) so that it
/// stays representable when beta_tilde m_i c^2 is large. log_head_i is the
/// logarithm of the unscaled prefactor, ln(head_i) + beta_tilde m_i c^2.
struct EquilibriumState {
  double beta_tilde = 0.0;
  FourVector U_tilde;
  double T_tilde = 0.0;  // k T_tilde = 1 / beta_tilde
  std::vector<double> head;
  std::vector<double> log_head;
  std::vector<double> mu_tilde;
  int iterations = 0;
  double residual = 0.0;  // |LHS - RHS| / RHS of the beta relation
};

/// Left side of the beta relation, sum_i (m_i/tau_i) (M_i/M_tilde_i)(bt) rho_i.
/// Strictly decreasing in bt.
double beta_relation_lhs(double beta_tilde, std::span<const double> rho,
                         std::span<const SpeciesParams> species, const PhysicalConstants& consts);

/// d(LHS)/d(bt).
double beta_relation_lhs_slope(double beta_tilde, std::span<const double> rho,
                               std::span<const SpeciesParams> species,
                               const PhysicalConstants& consts);

/// Right side of the beta relation, |sum_i (m_i/tau_i) n_i U_i| / c.
double beta_relation_rhs(std::span<const MomentSet> moments, std::span<const SpeciesParams> species,
                         const PhysicalConstants& consts);

/// Bracket guaranteed by the sandwich bounds
///   1/(c bt) <= M/M_tilde <= c m + 2/(c bt):
/// LHS(bt_lo) >= RHS at bt_lo = S/(c RHS) and LHS(bt_hi) <= RHS at
/// bt_hi = 2S/(c (RHS - A)), with S = sum (m/tau) rho and A = sum c m^2 rho / tau.
std::pair<double, double> beta_bracket(std::span<const double> rho,
                                       std::span<const SpeciesParams> species,
                                       const PhysicalConstants& consts, double rhs);

struct BetaSolveOptions {
  double tol = 1e-12;  // relative residual |LHS - RHS| / RHS
  // Start from this bracket instead of the analytic one. It is widened
  // geometrically until the residuals straddle zero.
  std::optional<std::pair<double, double>> bracket;
  bool record_history = false;

  bool operator==(const BetaSolveOptions&) const = default;
};

struct BetaSolveResult {
  double beta_tilde = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  // relative
  int iterations = 0;
  std::pair<double, double> bracket;
  std::vector<BracketRecord> history;  // in ln(bt)
};

/// Solves the beta relation for one cell from per-species rho_i and the
/// weighted flow. Throws cold_input when RHS does not exceed the infimum
/// sum c m_i^2 rho_i / tau_i of the left side (momentum-concentrated data).
BetaSolveResult solve_beta_tilde(std::span<const MomentSet> moments,
                                 std::span<const SpeciesParams> species,
                                 const PhysicalConstants& consts,
                                 const BetaSolveOptions& options = {});

/// U_tilde = c G / |G| with G the weighted four-flow sum.
FourVector compute_U_tilde(std::span<const MomentSet> moments,
                           std::span<const SpeciesParams> species, const PhysicalConstants& consts);

/// exp(-bt (U.p - m c^2)) at every node of the grid.
std::vector<double> juttner_exponentials(const MomentumGrid& grid, double beta_tilde,
                                         const FourVector& U, const PhysicalConstants& consts);

/// Discrete int exp(-bt (U.p - m c^2)) dp/p0 with the grid quadrature.
double discrete_scaled_M_tilde(std::span<const double> exponentials, const MomentumGrid& grid);

/// The whole cell solve: moments, beta_tilde, U_tilde, then the head factors
/// head_i = rho_i / (discrete M_tilde_i) and chemical potentials.
EquilibriumState solve_equilibrium(std::span<const MomentSet> moments,
                                   std::span<const SpeciesParams> species,
                                   std::span<const MomentumGrid> grids,
                                   const PhysicalConstants& consts,
                                   const BetaSolveOptions& options = {});

/// Attractors J_i on each species grid. Head factors are recomputed from the
/// rho of f with the same quadrature as the exponentials, so
/// int J_i dp/p0 = int f_i dp/p0 holds to rounding.
std::vector<std::vector<double>> build_attractor(std::span<const std::span<const double>> f,
                                                 const EquilibriumState& eq,
                                                 std::span<const MomentumGrid> grids,
                                                 std::span<const SpeciesParams> species,
                                                 const PhysicalConstants& consts);

/// mu_i = ln(h^3 head_i / g_i) / bt with the unscaled head.
std::vector<double> recover_chemical_potentials(const EquilibriumState& eq,
                                                std::span<const SpeciesParams> species,
                                                const PhysicalConstants& consts);

/// Attractor rebuilt from (mu_i, bt, U) as g/h^3 exp(bt mu_i) exp(-bt U.p).
std::vector<double> juttner_from_chemical_potential(const MomentumGrid& grid, double mu,
                                                    double beta_tilde, const FourVector& U,
                                                    const SpeciesParams& species,
                                                    const PhysicalConstants& consts);

}  // namespace rbgk
