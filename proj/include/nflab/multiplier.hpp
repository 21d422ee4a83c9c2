#pragma once

#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "nflab/lattice.hpp"

namespace nflab {

enum class Family { elliptic, full, hyperbolic, hom_D, hom_Dplus, hom_Dminus, riesz, identity };

// Lambda^a, Lambda_+^a, Lambda_-^a, D^a, D_+^a, D_-^a, R_mu (axis 0 is time), identity.
struct MultiplierSpec {
  Family family = Family::identity;
  double alpha = 1.0;
  int axis = 0;
};

inline MultiplierSpec elliptic(double a) { return {Family::elliptic, a, 0}; }
inline MultiplierSpec full(double a) { return {Family::full, a, 0}; }
inline MultiplierSpec hyperbolic(double a) { return {Family::hyperbolic, a, 0}; }
inline MultiplierSpec hom_D(double a) { return {Family::hom_D, a, 0}; }
inline MultiplierSpec hom_Dplus(double a) { return {Family::hom_Dplus, a, 0}; }
inline MultiplierSpec hom_Dminus(double a) { return {Family::hom_Dminus, a, 0}; }
inline MultiplierSpec riesz(int axis) { return {Family::riesz, 1.0, axis}; }

Family parse_family(const std::string& name);
std::string family_name(Family f);

// Base quantity b(Xi) whose power is the symbol (Riesz excluded).
double symbol_base(Family f, const FrequencyPoint& p);
// Symbol value; singular points (zero base with negative power, xi = 0 for Riesz) give 0.
cd symbol(const MultiplierSpec& spec, const FrequencyPoint& p, bool* singular = nullptr);
bool is_real_symbol(const MultiplierSpec& spec);
bool requires_spacetime(const MultiplierSpec& spec);

// Coefficientwise product with the symbol (or the product of several symbols).
// *projected is set when a singular mode was zeroed.
SpectralField apply(const MultiplierSpec& spec, const SpectralField& u, bool* projected = nullptr);
SpectralField apply(const std::vector<MultiplierSpec>& specs, const SpectralField& u,
                    bool* projected = nullptr);

// d/dt on a spacetime field (symbol i tau, Nyquist plane zeroed).
SpectralField time_derivative(const SpectralField& u);

struct SpaceIndex {
  double s = 0.0;
  double theta = 0.0;
};

// ||Lambda^s Lambda_-^theta u||_2
double ws_norm(const SpectralField& u, const SpaceIndex& idx);
// H^s norm of a spatial field.
double sobolev_norm(const SpectralField& f, double s);

struct CalNorm {
  double single = 0.0;    // ||Lambda^{s-1} Lambda_+ Lambda_-^theta u||
  double two_term = -1.0; // ||u||_{s,theta} + ||u_t||_{s-1,theta}; -1 when u_t is absent
};
CalNorm cal_norm(const SpectralField& u, const SpectralField* du_dt, const SpaceIndex& idx);

// Strichartz exponents. q or r may be +infinity.
bool is_wave_admissible(double q, double r, int n);
double strichartz_s(double q, double r, int n);
bool check_thmB(double q, double r, int n, double sigma, double s1, double s2);
bool check_thmC(int n, double gamma, double gamma_p, double gamma_m, double s1, double s2);

// Exact variants. Exponents enter through their reciprocals (0 means infinity).
using Rational = boost::rational<long long>;
Rational parse_rational(const std::string& text);
// "inf" -> 0, otherwise 1/q.
Rational parse_inverse_exponent(const std::string& text);
bool is_wave_admissible_exact(Rational q_inv, Rational r_inv, int n);
Rational strichartz_s_exact(Rational q_inv, Rational r_inv, int n);
bool check_thmB_exact(Rational q_inv, Rational r_inv, int n, Rational sigma, Rational s1, Rational s2);
bool check_thmC_exact(int n, Rational gamma, Rational gamma_p, Rational gamma_m, Rational s1, Rational s2);

}  // namespace nflab
