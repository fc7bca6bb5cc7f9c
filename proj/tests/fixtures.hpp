#pragma once

// Small multi-species phase-space fixtures shared by the tests.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "rbgk/equilibrium.hpp"
#include "rbgk/phase_space.hpp"

namespace fixture {

struct Component {
  double density;
  double vx, vy, vz;  // ordinary velocity
  double kT;
};

struct SpeciesSpec {
  double mass;
  double tau;
  std::vector<Component> components;
};

struct Mixture {
  rbgk::PhysicalConstants consts;
  std::vector<rbgk::SpeciesParams> species;
  std::vector<rbgk::MomentumGrid> grids;
  std::vector<std::vector<double>> f;

  std::vector<std::span<const double>> views() const {
    return {f.begin(), f.end()};
  }
  std::vector<rbgk::MomentSet> moments() const {
    std::vector<rbgk::MomentSet> m;
    for (std::size_t i = 0; i < f.size(); ++i)
      m.push_back(rbgk::compute_moments(f[i], species[i], grids[i], consts));
    return m;
  }
};

// Every grid is sized for the hottest and fastest component of the whole
// mixture, so it also holds the attractor at the common temperature.
inline Mixture make_mixture(const std::vector<SpeciesSpec>& specs, int cells, double tail_tol = 1e-12,
                            rbgk::PhysicalConstants consts = {},
                            rbgk::JuttnerSampling mode = rbgk::JuttnerSampling::point) {
  Mixture mix;
  mix.consts = consts;
  const double c = consts.c;
  double kT = 0.0, v = 0.0;
  for (const SpeciesSpec& s : specs)
    for (const auto& comp : s.components) {
      kT = std::max(kT, comp.kT);
      v = std::max(v, std::sqrt(comp.vx * comp.vx + comp.vy * comp.vy + comp.vz * comp.vz));
    }
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const SpeciesSpec& s = specs[i];
    mix.species.push_back(rbgk::SpeciesParams::make("s" + std::to_string(i), s.mass, s.tau, 0.5));
    mix.grids.push_back(rbgk::MomentumGrid::for_juttner(cells, s.mass, c, kT, v, tail_tol));
    std::vector<double> f(mix.grids.back().size(), 0.0);
    for (const auto& comp : s.components) {
      const rbgk::FourVector U = rbgk::four_velocity_from_velocity(comp.vx, comp.vy, comp.vz, c);
      const std::vector<double> part = rbgk::sample_juttner(mix.grids.back(), comp.density, U, comp.kT, consts, mode);
      for (std::size_t k = 0; k < f.size(); ++k) f[k] += part[k];
    }
    mix.f.push_back(std::move(f));
  }
  return mix;
}

}  // namespace fixture
