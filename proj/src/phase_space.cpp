#include "rbgk/phase_space.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "rbgk/error.hpp"
#include "rbgk/special_functions.hpp"
#include "rbgk/summation.hpp"

namespace rbgk {

SpeciesParams SpeciesParams::make(std::string name, double mass, double tau, double spin) {
  SpeciesParams p;
  p.name = std::move(name);
  p.mass = mass;
  p.tau = tau;
  p.spin = spin;
  p.degeneracy = 2.0 * spin + 1.0;
  return p;
}

void SpeciesParams::validate() const {
  std::ostringstream os;
  if (!(mass > 0.0)) os << "mass must be > 0 (got " << mass << "); ";
  if (!(tau > 0.0)) os << "tau must be > 0 (got " << tau << "); ";
  if (!(spin >= 0.0)) os << "spin must be >= 0 (got " << spin << "); ";
  if (!(std::abs(degeneracy - (2.0 * spin + 1.0)) <= 1e-12 * degeneracy))
    os << "degeneracy must equal 2*spin+1 (got " << degeneracy << "); ";
  if (!os.str().empty()) fail(ErrorCategory::domain, "species '" + name + "': " + os.str());
}

MomentumGrid::MomentumGrid(int n_cells, double p_max, double mass, double c)
    : n_(n_cells), p_max_(p_max), dp_(2.0 * p_max / n_cells), mass_(mass), c_(c) {
  if (n_cells < 1) fail(ErrorCategory::domain, "momentum grid needs at least one cell per axis");
  if (!(p_max > 0.0)) fail(ErrorCategory::domain, "momentum grid extent must be positive");
  if (!(mass > 0.0)) fail(ErrorCategory::domain, "species mass must be positive");
  if (!(c > 0.0)) fail(ErrorCategory::domain, "speed of light must be positive");
  axis_.resize(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) axis_[static_cast<std::size_t>(i)] = -p_max_ + (i + 0.5) * dp_;
  const std::size_t n = static_cast<std::size_t>(n_);
  p0_.resize(n * n * n);
  const double cm2 = (c * mass) * (c * mass);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t l = 0; l < n; ++l, ++k)
        p0_[k] = std::sqrt(cm2 + axis_[i] * axis_[i] + axis_[j] * axis_[j] + axis_[l] * axis_[l]);
}

MomentumGrid MomentumGrid::for_juttner(int n_cells, double mass, double c, double kT,
                                       double drift_speed, double tail_tol) {
  if (!(kT > 0.0)) fail(ErrorCategory::domain, "temperature must be positive");
  if (!(tail_tol > 0.0 && tail_tol < 1.0)) fail(ErrorCategory::domain, "tail tolerance in (0,1)");
  if (!(std::abs(drift_speed) < c)) fail(ErrorCategory::domain, "drift speed must be below c");
  const double cm = c * mass;
  // Rest-frame shell where (U.p - mc^2)/kT reaches ln(1/tail_tol).
  const double P0 = cm + std::log(1.0 / tail_tol) * kT / c;
  const double P = std::sqrt(P0 * P0 - cm * cm);
  const double v = std::abs(drift_speed) / c;
  const double gamma = 1.0 / std::sqrt(1.0 - v * v);
  return MomentumGrid(n_cells, gamma * (P + v * P0), mass, c);
}

std::array<int, 3> MomentumGrid::coords(std::size_t k) const {
  const std::size_t n = static_cast<std::size_t>(n_);
  return {static_cast<int>(k / (n * n)), static_cast<int>((k / n) % n), static_cast<int>(k % n)};
}

std::size_t MomentumGrid::index(int ix, int iy, int iz) const {
  const std::size_t n = static_cast<std::size_t>(n_);
  return (static_cast<std::size_t>(ix) * n + static_cast<std::size_t>(iy)) * n +
         static_cast<std::size_t>(iz);
}

RestFrameExcess::RestFrameExcess(const FourVector& U, double mass, double c)
    : boost_(boost_to_rest_frame(U, c)), mc_(mass * c), c_(c) {}

double RestFrameExcess::operator()(const FourVector& p) const {
  const auto& m = boost_.matrix;
  double P2 = 0.0;
  for (std::size_t j = 1; j < 4; ++j) {
    const double Pj = m[j][0] * p[0] + m[j][1] * p[1] + m[j][2] * p[2] + m[j][3] * p[3];
    P2 += Pj * Pj;
  }
  return c_ * P2 / (std::sqrt(mc_ * mc_ + P2) + mc_);
}

DistributionField::DistributionField(std::vector<std::size_t> nodes_per_species,
                                     std::size_t n_cells_x)
    : nodes_(std::move(nodes_per_species)), cells_(n_cells_x) {
  values_.reserve(nodes_.size());
  for (std::size_t nodes : nodes_) values_.emplace_back(nodes * cells_, 0.0);
}

std::span<double> DistributionField::cell(std::size_t s, std::size_t x) {
  return std::span<double>(values_[s]).subspan(x * nodes_[s], nodes_[s]);
}

std::span<const double> DistributionField::cell(std::size_t s, std::size_t x) const {
  return std::span<const double>(values_[s]).subspan(x * nodes_[s], nodes_[s]);
}

MomentSet compute_moments(std::span<const double> f, const SpeciesParams& species,
                          const MomentumGrid& grid, const PhysicalConstants& consts) {
  if (f.size() != grid.size()) fail(ErrorCategory::internal, "distribution/grid size mismatch");
  const double c = consts.c;
  const double log_scale = std::log(consts.h * consts.h * consts.h / species.degeneracy);

  CompensatedSum number, rho, energy;
  std::array<CompensatedSum, 3> flux, mom;
  std::array<CompensatedSum, 6> stress;  // xx xy xz yy yz zz
  CompensatedSum s0;
  std::array<CompensatedSum, 3> sflux;

  for (std::size_t k = 0; k < f.size(); ++k) {
    const double fk = f[k];
    if (fk == 0.0) continue;
    const double p0 = grid.p0(k);
    const double inv = 1.0 / p0;
    const std::array<double, 3> p{grid.px(k), grid.py(k), grid.pz(k)};
    number += fk;
    rho += fk * inv;
    energy += fk * p0;
    for (std::size_t j = 0; j < 3; ++j) {
      flux[j] += p[j] * fk * inv;
      mom[j] += p[j] * fk;
    }
    stress[0] += p[0] * p[0] * fk * inv;
    stress[1] += p[0] * p[1] * fk * inv;
    stress[2] += p[0] * p[2] * fk * inv;
    stress[3] += p[1] * p[1] * fk * inv;
    stress[4] += p[1] * p[2] * fk * inv;
    stress[5] += p[2] * p[2] * fk * inv;
    const double eta = fk * (std::log(fk) + log_scale);
    s0 += eta;
    for (std::size_t j = 0; j < 3; ++j) sflux[j] += p[j] * eta * inv;
  }

  const double dv = grid.cell_volume();
  MomentSet m;
  m.number = number.value() * dv;
  if (!(m.number >= 1e-300)) {
    fail(ErrorCategory::vacuum_cell,
         "species '" + species.name + "': distribution vanishes identically in a cell");
  }
  const std::array<double, 3> fl{flux[0].value() * dv, flux[1].value() * dv, flux[2].value() * dv};
  const double n2 = m.number * m.number - (fl[0] * fl[0] + fl[1] * fl[1] + fl[2] * fl[2]);
  if (!(n2 > 0.0)) {
    std::ostringstream os;
    os << "species '" << species.name << "': spacelike particle flux (n^2 = " << n2 << ")";
    fail(ErrorCategory::superluminal_flux, os.str());
  }
  m.n = std::sqrt(n2);
  m.N = FourVector(c * m.number, c * fl[0], c * fl[1], c * fl[2]);
  m.U = m.N / m.n;
  m.rho = rho.value() * dv;
  m.momentum = FourVector(energy.value() * dv, mom[0].value() * dv, mom[1].value() * dv,
                          mom[2].value() * dv);

  auto& T = m.T;
  T[0][0] = c * m.momentum[0];
  for (std::size_t j = 0; j < 3; ++j) T[0][j + 1] = T[j + 1][0] = c * m.momentum[j + 1];
  const std::array<std::array<std::size_t, 3>, 3> slot{{{0, 1, 2}, {1, 3, 4}, {2, 4, 5}}};
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) T[a + 1][b + 1] = c * stress[slot[a][b]].value() * dv;

  const double kc = consts.k * c;
  m.S = FourVector(-kc * s0.value() * dv, -kc * sflux[0].value() * dv, -kc * sflux[1].value() * dv,
                   -kc * sflux[2].value() * dv);
  m.entropy_density = m.S[0];
  return m;
}

FourVector species_entropy_flow(std::span<const double> f, const SpeciesParams& species,
                                const MomentumGrid& grid, const PhysicalConstants& consts) {
  const double log_scale = std::log(consts.h * consts.h * consts.h / species.degeneracy);
  CompensatedSum s0;
  std::array<CompensatedSum, 3> sflux;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double fk = f[k];
    if (fk == 0.0) continue;  // x ln x -> 0
    const double eta = fk * (std::log(fk) + log_scale);
    s0 += eta;
    const double inv = 1.0 / grid.p0(k);
    sflux[0] += grid.px(k) * eta * inv;
    sflux[1] += grid.py(k) * eta * inv;
    sflux[2] += grid.pz(k) * eta * inv;
  }
  const double scale = -consts.k * consts.c * grid.cell_volume();
  return {scale * s0.value(), scale * sflux[0].value(), scale * sflux[1].value(),
          scale * sflux[2].value()};
}

FourVector entropy_four_flow(std::span<const std::span<const double>> f,
                             std::span<const SpeciesParams> species,
                             std::span<const MomentumGrid> grids, const PhysicalConstants& consts) {
  if (f.size() != species.size() || f.size() != grids.size())
    fail(ErrorCategory::internal, "entropy_four_flow: species count mismatch");
  FourVector S;
  for (std::size_t i = 0; i < f.size(); ++i)
    S += species_entropy_flow(f[i], species[i], grids[i], consts);
  return S;
}

WeightedFlow weighted_flow_sum(std::span<const MomentSet> moments,
                               std::span<const SpeciesParams> species) {
  if (moments.empty() || moments.size() != species.size())
    fail(ErrorCategory::internal, "weighted_flow_sum needs one moment set per species");
  WeightedFlow w;
  for (std::size_t i = 0; i < moments.size(); ++i)
    w.G += (species[i].mass / species[i].tau) * moments[i].N;
  const double g2 = minkowski_dot(w.G, w.G);
  if (!(g2 > 0.0) || !(w.G[0] > 0.0)) {
    std::ostringstream os;
    os << "weighted four-flow is not timelike (G.G = " << g2 << ")";
    fail(ErrorCategory::degenerate_flow, os.str());
  }
  w.norm = std::sqrt(g2);
  return w;
}

std::vector<double> sample_juttner(const MomentumGrid& grid, double density, const FourVector& U,
                                   double kT, const PhysicalConstants& consts,
                                   JuttnerSampling mode) {
  if (!(density > 0.0)) fail(ErrorCategory::domain, "Juttner density must be positive");
  if (!(kT > 0.0)) fail(ErrorCategory::domain, "Juttner temperature must be positive");
  const double c = consts.c;
  const double m = grid.mass();
  const double beta = 1.0 / kT;
  const double x = m * c * c * beta;
  const double cm = c * m;
  // n / M with the factor exp(-x) of M moved into the exponent below.
  const double prefactor =
      density * x / (4.0 * std::numbers::pi * cm * cm * cm * scaled_bessel_k(x).k2);
  const RestFrameExcess excess(U, m, c);

  std::vector<double> f(grid.size());
  if (mode == JuttnerSampling::point) {
    for (std::size_t k = 0; k < f.size(); ++k)
      f[k] = prefactor * std::exp(-beta * excess(grid.momentum(k)));
    return f;
  }

  const double a = std::sqrt(0.6) * 0.5 * grid.dp();
  const std::array<double, 3> off{-a, 0.0, a};
  const std::array<double, 3> wt{5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double px = grid.px(k), py = grid.py(k), pz = grid.pz(k);
    double acc = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t l = 0; l < 3; ++l) {
          const FourVector p = on_shell_momentum(px + off[i], py + off[j], pz + off[l], m, c);
          acc += wt[i] * wt[j] * wt[l] * std::exp(-beta * excess(p));
        }
    f[k] = prefactor * acc;
  }
  return f;
}

}  // namespace rbgk
