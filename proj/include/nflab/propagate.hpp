#pragma once

#include <utility>

#include "nflab/lattice.hpp"

namespace nflab {

// Position and velocity data on a common grid.
struct CauchyData {
  SpectralField f;
  SpectralField g;
};

void validate(const CauchyData& d);

// e^{sign i t D} f
SpectralField half_wave(int sign, double t, const SpectralField& f);

// Solution of the free wave equation (box = -d_t^2 + Delta) at time t and its
// time derivative. The xi = 0 mode evolves as f + t g.
SpectralField homogeneous(const CauchyData& d, double t);
SpectralField homogeneous_velocity(const CauchyData& d, double t);
// Samples at every grid time, packed as a spacetime field.
SpectralField homogeneous_spacetime(const CauchyData& d);

// Solution of box u = F with zero data at t = 0, integrated forward on t >= 0
// and backward on t < 0. Trapezoid rule on the two running sums
// int cos(|xi| s) F ds and int sin(|xi| s) F ds; kernel (t - s) at xi = 0.
// Only the values at sample times are meaningful.
SpectralField duhamel(const SpectralField& F);

// Split by the sign of tau; the tau = 0 plane goes to the first part.
std::pair<SpectralField, SpectralField> pm_decompose(const SpectralField& u);

struct Step1Report {
  double t = 0.0;             // sample time actually used
  long modes = 0;             // spatial modes with nonzero forcing
  double max_ratio_t2 = 0.0;  // max |u(t)| / (t^2 int |F|)
  long violations_t2 = 0;     // modes with ratio > 1
  double fitted_Ct = 0.0;     // max |u(t)| |xi| / int |F| / (1 + ||tau| - |xi||), xi != 0
};

// Both sides of the pointwise Duhamel bounds at the sample time nearest t.
// F is cut off to |t| < width first; int dtau means T^{-1/2} sum over tau.
Step1Report step1_bound_check(const SpectralField& F, double t, double width);

}  // namespace nflab
