#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nflab/lattice.hpp"

namespace nflab {

enum class Form { Q0, Qij, Qtilde, Ralpha, Splus, Sminus, product };

struct BilinearFormSpec {
  Form form = Form::product;
  double alpha = 1.0;
  int i = 1;
  int j = 2;
};

Form parse_form(const std::string& name);
std::string form_name(Form f);

// Pointwise product with 3/2 zero padding on every axis (time included for
// spacetime fields). Inputs are projected to the band first; the result lives
// in the band.
SpectralField dealiased_product(const SpectralField& u, const SpectralField& v);

// Q0, Qij, Qtilde and product go through derivatives and dealiased products.
// Ralpha, Splus and Sminus are direct double sums over occupied modes; sums
// landing outside the band are dropped. *projected reports Riesz zeroing.
SpectralField apply_form(const BilinearFormSpec& spec, const SpectralField& u, const SpectralField& v,
                         bool* projected = nullptr);

// Symbol or kernel at the pair (p, q): p is the frequency of the first
// argument, q of the second.
//   Q0:     <p,q> = -tau lambda + xi.eta
//   Qij:    xi_i eta_j - xi_j eta_i
//   Qtilde: sum_j i(xi_j + eta_j)(-tau xi_j/|xi|^2 + lambda eta_j/|eta|^2)
//   Ralpha: r(p;q)^alpha, Splus: Delta_+^alpha, Sminus: Delta_-^alpha
// apply_form multiplies Q0 and Qij by i^2 = -1 relative to these symbols.
cd kernel_value(const BilinearFormSpec& spec, const FrequencyPoint& p, const FrequencyPoint& q);

// Delta_+ = |xi| + |eta| - |xi + eta|,  Delta_- = |xi + eta| - ||xi| - |eta||
double delta_plus(const FrequencyPoint& p, const FrequencyPoint& q);
double delta_minus(const FrequencyPoint& p, const FrequencyPoint& q);
// r(tau, xi; lambda, eta): Delta_+ when tau lambda >= 0, Delta_- otherwise.
double r_kernel(const FrequencyPoint& p, const FrequencyPoint& q);

// S+/S- applied at every sample time of two spacetime fields; the time
// product is padded by 3/2.
SpectralField apply_slicewise(const BilinearFormSpec& spec, const SpectralField& u, const SpectralField& v);

// D_-^alpha(e^{itD} f . e^{sign itD} g) at time t, by grouping modes into
// spheres |xi| = rho and applying ||tau| - |xi||^alpha to each product with
// tau = rho_f + sign rho_g.
SpectralField dminus_half_wave_product(double alpha, int sign, const SpectralField& f, const SpectralField& g,
                                       double t);

// Pointwise symbol inequalities.
struct InequalitySides {
  double lhs = 0.0;
  double rhs = 0.0;
  double scale = 0.0;
};

struct InequalityParams {
  double alpha = 0.5;
  double beta = 0.5;
  double delta = 0.5;
};

struct InequalityInfo {
  std::string name;
  std::string statement;
  std::string constant;
  int min_dim = 1;
};

struct InequalityReport {
  std::string name;
  long samples = 0;
  long checks = 0;
  long violations = 0;
  double worst_margin = 0.0;  // min over checks of (rhs - lhs) / scale
  std::string constant;
};

const std::vector<InequalityInfo>& inequality_registry();
std::vector<InequalitySides> evaluate_inequality(const std::string& name, const FrequencyPoint& Xi,
                                                 const FrequencyPoint& Theta, const InequalityParams& prm);
InequalityReport check_symbol_inequality(const std::string& name, long samples, std::uint64_t seed);

}  // namespace nflab
