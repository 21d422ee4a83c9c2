#pragma once

#include <cmath>
#include <random>

#include "nflab/lattice.hpp"

namespace testutil {

// Real band-limited field with Gaussian coefficients damped by exp(-|Xi|^2 / (2 width^2)).
inline nflab::SpectralField random_field(const nflab::Grid& g, nflab::FieldKind kind, std::uint64_t seed,
                                         double width = 1e9) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  nflab::PhysicalField p = nflab::sample(g, kind, [&](double, const std::array<double, 3>&) {
    return nflab::cd(gauss(rng), 0.0);
  });
  nflab::SpectralField u = nflab::transform(p);
  nflab::project_band(u);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double r = u.point(i).norm();
    u.coeffs[i] *= std::exp(-0.5 * r * r / (width * width));
  }
  return u;
}

inline double max_diff(const std::vector<nflab::cd>& a, const std::vector<nflab::cd>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace testutil
