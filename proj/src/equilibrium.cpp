#include "rbgk/equilibrium.hpp"

#include <cmath>
#include <sstream>

#include "rbgk/error.hpp"
#include "rbgk/special_functions.hpp"
#include "rbgk/summation.hpp"

namespace rbgk {
namespace {

void check_sizes(std::size_t a, std::size_t b, const char* what) {
  if (a != b || a == 0) fail(ErrorCategory::internal, std::string(what) + ": species count mismatch");
}

std::vector<double> rho_of(std::span<const MomentSet> moments) {
  std::vector<double> rho(moments.size());
  for (std::size_t i = 0; i < moments.size(); ++i) rho[i] = moments[i].rho;
  return rho;
}

}  // namespace

double beta_relation_lhs(double beta_tilde, std::span<const double> rho,
                         std::span<const SpeciesParams> species, const PhysicalConstants& consts) {
  check_sizes(rho.size(), species.size(), "beta_relation_lhs");
  double sum = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i)
    sum += species[i].mass / species[i].tau * moment_ratio(species[i].mass, beta_tilde, consts.c) *
           rho[i];
  return sum;
}

double beta_relation_lhs_slope(double beta_tilde, std::span<const double> rho,
                               std::span<const SpeciesParams> species,
                               const PhysicalConstants& consts) {
  check_sizes(rho.size(), species.size(), "beta_relation_lhs_slope");
  double sum = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i)
    sum += species[i].mass / species[i].tau *
           moment_ratio_derivative(species[i].mass, beta_tilde, consts.c) * rho[i];
  return sum;
}

double beta_relation_rhs(std::span<const MomentSet> moments, std::span<const SpeciesParams> species,
                         const PhysicalConstants& consts) {
  return weighted_flow_sum(moments, species).norm / consts.c;
}

std::pair<double, double> beta_bracket(std::span<const double> rho,
                                       std::span<const SpeciesParams> species,
                                       const PhysicalConstants& consts, double rhs) {
  check_sizes(rho.size(), species.size(), "beta_bracket");
  const double c = consts.c;
  double S = 0.0, A = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const double a = species[i].mass / species[i].tau * rho[i];
    S += a;
    A += a * c * species[i].mass;
  }
  if (!(rhs - A > 1e-13 * rhs)) {
    std::ostringstream os;
    os << "beta relation has no root: RHS = " << rhs << " does not exceed the infimum "
       << A << " of the left side (momentum-concentrated distribution)";
    fail(ErrorCategory::cold_input, os.str());
  }
  return {S / (c * rhs), 2.0 * S / (c * (rhs - A))};
}

BetaSolveResult solve_beta_tilde(std::span<const MomentSet> moments,
                                 std::span<const SpeciesParams> species,
                                 const PhysicalConstants& consts,
                                 const BetaSolveOptions& options) {
  check_sizes(moments.size(), species.size(), "solve_beta_tilde");
  const std::vector<double> rho = rho_of(moments);
  const double rhs = beta_relation_rhs(moments, species, consts);
  const std::pair<double, double> analytic = beta_bracket(rho, species, consts, rhs);

  auto g = [&](double y) -> ValueSlope {
    const double bt = std::exp(y);
    return {beta_relation_lhs(bt, rho, species, consts) - rhs,
            bt * beta_relation_lhs_slope(bt, rho, species, consts)};
  };

  double lo = std::log(analytic.first);
  double hi = std::log(analytic.second);
  if (options.bracket) {
    const auto [blo, bhi] = *options.bracket;
    if (!(blo > 0.0 && bhi > blo)) fail(ErrorCategory::domain, "beta bracket must satisfy 0 < lo < hi");
    lo = std::log(blo);
    hi = std::log(bhi);
    // LHS decreases: g(lo) must be positive and g(hi) negative.
    for (int expand = 0; g(lo).value < 0.0; ++expand) {
      if (expand == 60) fail(ErrorCategory::bracket_failure, "cannot expand beta bracket downward");
      lo -= std::log(4.0);
    }
    for (int expand = 0; g(hi).value > 0.0; ++expand) {
      if (expand == 60) fail(ErrorCategory::bracket_failure, "cannot expand beta bracket upward");
      hi += std::log(4.0);
    }
  }

  RootOptions ro;
  ro.value_tol = options.tol * rhs;
  ro.x_tol = 1e-15;
  ro.x_floor = 1.0;
  ro.record_history = options.record_history;
  RootResult root = find_root_bracketed(g, lo, hi, ro);

  BetaSolveResult out;
  out.beta_tilde = std::exp(root.x);
  out.rhs = rhs;
  out.residual = std::abs(beta_relation_lhs(out.beta_tilde, rho, species, consts) - rhs) / rhs;
  out.iterations = root.iterations;
  out.bracket = {std::exp(lo), std::exp(hi)};
  out.history = std::move(root.history);
  if (!(out.residual <= options.tol)) {
    std::ostringstream os;
    os << "beta solve stopped with relative residual " << out.residual << " > " << options.tol;
    fail(ErrorCategory::bracket_failure, os.str());
  }
  return out;
}

FourVector compute_U_tilde(std::span<const MomentSet> moments,
                           std::span<const SpeciesParams> species, const PhysicalConstants& consts) {
  const WeightedFlow w = weighted_flow_sum(moments, species);
  FourVector U = (consts.c / w.norm) * w.G;
  // Re-project the time component onto the hyperboloid.
  U[0] = std::sqrt(consts.c * consts.c + U.spatial_norm2());
  return U;
}

std::vector<double> juttner_exponentials(const MomentumGrid& grid, double beta_tilde,
                                         const FourVector& U, const PhysicalConstants& consts) {
  const RestFrameExcess excess(U, grid.mass(), consts.c);
  std::vector<double> e(grid.size());
  for (std::size_t k = 0; k < e.size(); ++k) e[k] = std::exp(-beta_tilde * excess(grid.momentum(k)));
  return e;
}

double discrete_scaled_M_tilde(std::span<const double> exponentials, const MomentumGrid& grid) {
  CompensatedSum s;
  for (std::size_t k = 0; k < exponentials.size(); ++k) s += exponentials[k] / grid.p0(k);
  return s.value() * grid.cell_volume();
}

EquilibriumState solve_equilibrium(std::span<const MomentSet> moments,
                                   std::span<const SpeciesParams> species,
                                   std::span<const MomentumGrid> grids,
                                   const PhysicalConstants& consts,
                                   const BetaSolveOptions& options) {
  check_sizes(moments.size(), species.size(), "solve_equilibrium");
  check_sizes(grids.size(), species.size(), "solve_equilibrium");
  const BetaSolveResult beta = solve_beta_tilde(moments, species, consts, options);
  EquilibriumState eq;
  eq.beta_tilde = beta.beta_tilde;
  eq.T_tilde = 1.0 / beta.beta_tilde;
  eq.U_tilde = compute_U_tilde(moments, species, consts);
  eq.iterations = beta.iterations;
  eq.residual = beta.residual;
  const std::size_t n = species.size();
  eq.head.resize(n);
  eq.log_head.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<double> e = juttner_exponentials(grids[i], eq.beta_tilde, eq.U_tilde, consts);
    eq.head[i] = moments[i].rho / discrete_scaled_M_tilde(e, grids[i]);
    eq.log_head[i] = std::log(eq.head[i]) + eq.beta_tilde * species[i].mass * consts.c * consts.c;
  }
  eq.mu_tilde = recover_chemical_potentials(eq, species, consts);
  return eq;
}

std::vector<std::vector<double>> build_attractor(std::span<const std::span<const double>> f,
                                                 const EquilibriumState& eq,
                                                 std::span<const MomentumGrid> grids,
                                                 std::span<const SpeciesParams> species,
                                                 const PhysicalConstants& consts) {
  check_sizes(f.size(), species.size(), "build_attractor");
  check_sizes(grids.size(), species.size(), "build_attractor");
  std::vector<std::vector<double>> J(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::vector<double> e = juttner_exponentials(grids[i], eq.beta_tilde, eq.U_tilde, consts);
    CompensatedSum rho;
    for (std::size_t k = 0; k < e.size(); ++k) rho += f[i][k] / grids[i].p0(k);
    const double head = rho.value() * grids[i].cell_volume() / discrete_scaled_M_tilde(e, grids[i]);
    for (double& v : e) v *= head;
    J[i] = std::move(e);
  }
  return J;
}

std::vector<double> recover_chemical_potentials(const EquilibriumState& eq,
                                                std::span<const SpeciesParams> species,
                                                const PhysicalConstants& consts) {
  check_sizes(eq.log_head.size(), species.size(), "recover_chemical_potentials");
  std::vector<double> mu(species.size());
  const double log_h3 = 3.0 * std::log(consts.h);
  for (std::size_t i = 0; i < species.size(); ++i)
    mu[i] = (log_h3 + eq.log_head[i] - std::log(species[i].degeneracy)) / eq.beta_tilde;
  return mu;
}

std::vector<double> juttner_from_chemical_potential(const MomentumGrid& grid, double mu,
                                                    double beta_tilde, const FourVector& U,
                                                    const SpeciesParams& species,
                                                    const PhysicalConstants& consts) {
  const double log_prefactor =
      std::log(species.degeneracy) - 3.0 * std::log(consts.h) + beta_tilde * mu;
  std::vector<double> J(grid.size());
  for (std::size_t k = 0; k < J.size(); ++k)
    J[k] = std::exp(log_prefactor - beta_tilde * minkowski_dot(U, grid.momentum(k)));
  return J;
}

}  // namespace rbgk
