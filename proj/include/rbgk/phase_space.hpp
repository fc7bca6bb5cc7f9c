#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rbgk/tensor.hpp"

namespace rbgk {

/// Per-species physical parameters.
struct SpeciesParams {
  std::string name;
  double mass = 1.0;        // rest mass m_i > 0
  double tau = 1.0;         // relaxation time tau_i > 0
  double spin = 0.0;        // s_i >= 0
  double degeneracy = 1.0;  // g_{s_i} = 2 s_i + 1

  static SpeciesParams make(std::string name, double mass, double tau, double spin = 0.0);

  /// Throws a domain error on m <= 0, tau <= 0, s < 0 or g != 2s + 1.
  void validate() const;
};

/// Uniform Cartesian momentum grid [-p_max, p_max]^3 with n_cells nodes per
/// axis placed at cell midpoints. Quadrature is the midpoint rule with
/// weight dp^3 at every node.
///
/// Node index k = (ix * n + iy) * n + iz, so consecutive k vary p_z fastest.
class MomentumGrid {
 public:
  MomentumGrid(int n_cells, double p_max, double mass, double c);

  /// Grid wide enough that a Juttner distribution at temperature kT drifting
  /// with speed drift_speed (same units as c) has boundary weight below
  /// tail_tol relative to its peak.
  static MomentumGrid for_juttner(int n_cells, double mass, double c, double kT,
                                  double drift_speed = 0.0, double tail_tol = 1e-12);

  int n_cells() const { return n_; }
  std::size_t size() const { return p0_.size(); }
  double p_max() const { return p_max_; }
  double dp() const { return dp_; }
  double cell_volume() const { return dp_ * dp_ * dp_; }
  double mass() const { return mass_; }
  double c() const { return c_; }

  double axis(int i) const { return axis_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& axis_nodes() const { return axis_; }

  std::array<int, 3> coords(std::size_t k) const;
  std::size_t index(int ix, int iy, int iz) const;

  double p0(std::size_t k) const { return p0_[k]; }
  double px(std::size_t k) const { return axis_[k / (static_cast<std::size_t>(n_) * n_)]; }
  double py(std::size_t k) const { return axis_[(k / n_) % n_]; }
  double pz(std::size_t k) const { return axis_[k % n_]; }
  FourVector momentum(std::size_t k) const { return {p0_[k], px(k), py(k), pz(k)}; }

  /// Lab-frame speed c p_x / p0 along the transport axis.
  double velocity_x(std::size_t k) const { return c_ * px(k) / p0_[k]; }

 private:
  int n_;
  double p_max_;
  double dp_;
  double mass_;
  double c_;
  std::vector<double> axis_;
  std::vector<double> p0_;
};

/// Evaluates U.p - m c^2 = c (P^0 - m c) for on-shell momenta, where P is the
/// momentum seen from the rest frame of U. Computed as c |P|^2 / (P^0 + m c),
/// which stays accurate when the exponent beta (U.p - m c^2) is small but
/// beta itself is large.
class RestFrameExcess {
 public:
  RestFrameExcess(const FourVector& U, double mass, double c);
  double operator()(const FourVector& p) const;

 private:
  LorentzBoost boost_;
  double mc_;
  double c_;
};

/// Distribution values per (species, spatial cell, momentum node). Values
/// are nonnegative number densities per unit volume and momentum^3.
class DistributionField {
 public:
  DistributionField() = default;
  DistributionField(std::vector<std::size_t> nodes_per_species, std::size_t n_cells_x);

  std::size_t species_count() const { return nodes_.size(); }
  std::size_t cell_count() const { return cells_; }
  std::size_t node_count(std::size_t s) const { return nodes_[s]; }

  std::span<double> cell(std::size_t s, std::size_t x);
  std::span<const double> cell(std::size_t s, std::size_t x) const;
  std::vector<double>& species_values(std::size_t s) { return values_[s]; }
  const std::vector<double>& species_values(std::size_t s) const { return values_[s]; }

 private:
  std::vector<std::size_t> nodes_;
  std::size_t cells_ = 0;
  std::vector<std::vector<double>> values_;
};

using Tensor4 = std::array<std::array<double, 4>, 4>;

/// Moments of one species in one spatial cell.
struct MomentSet {
  double number = 0.0;  // int f dp = N^0 / c
  double n = 0.0;       // Eckart number density
  FourVector U;         // Eckart four-velocity, U.U = c^2
  FourVector N;         // particle four-flow n U
  Tensor4 T{};          // energy-momentum tensor c int p^mu p^nu f dp/p0
  double rho = 0.0;     // int f dp/p0
  FourVector S;         // entropy four-flow contribution
  double entropy_density = 0.0;  // S^0
  FourVector momentum;  // int p^mu f dp = T^{0 mu} / c
};

/// Midpoint-rule moments of f on the grid.
///
/// n is computed as sqrt((int f dp)^2 - |int p f dp/p0|^2). Throws
/// vacuum_cell if int f dp < 1e-300 and superluminal_flux if the radicand
/// is not positive.
MomentSet compute_moments(std::span<const double> f, const SpeciesParams& species,
                          const MomentumGrid& grid, const PhysicalConstants& consts);

/// S^mu = -k c sum_i int p^mu f_i ln(f_i h^3 / g_i) dp/p0, with nodes where
/// f = 0 contributing zero.
FourVector entropy_four_flow(std::span<const std::span<const double>> f,
                             std::span<const SpeciesParams> species,
                             std::span<const MomentumGrid> grids, const PhysicalConstants& consts);

/// Entropy four-flow of one species.
FourVector species_entropy_flow(std::span<const double> f, const SpeciesParams& species,
                                const MomentumGrid& grid, const PhysicalConstants& consts);

/// G^mu = sum_i (m_i / tau_i) n_i U_i^mu and its Minkowski norm.
struct WeightedFlow {
  FourVector G;
  double norm = 0.0;
};

/// Throws degenerate_flow if G.G <= 0.
WeightedFlow weighted_flow_sum(std::span<const MomentSet> moments,
                               std::span<const SpeciesParams> species);

enum class JuttnerSampling {
  point,         // value of the distribution at each node
  cell_average,  // 3x3x3 Gauss-Legendre average over each momentum cell
};

/// Juttner distribution with rest-frame density n, four-velocity U and
/// temperature kT, normalised with the closed-form rest-frame integral so
/// that its continuum Eckart density is exactly n:
///   f = n / M(1/kT) exp(-(U.p)/kT).
std::vector<double> sample_juttner(const MomentumGrid& grid, double density, const FourVector& U,
                                   double kT, const PhysicalConstants& consts,
                                   JuttnerSampling mode = JuttnerSampling::point);

}  // namespace rbgk
