#pragma once

#include <cstdint>
#include <vector>

namespace nflab {

// Indicator spectra u_L = 1_A, v_L = 1_B and the output set C, for Q_{1j}:
//   A: |lambda - eta_1| <= 1, L/2 <= eta_1 <= L, L/2 <= |eta'| <= L
//   B: |tau - |xi|| <= 8, L^2/2 <= xi_1 <= 4 L^2, |xi'| <= 2L
//   C: |tau - |xi|| <= 1, L^2 <= xi_1 <= 2 L^2, |xi'| <= L
struct CounterexampleParams {
  double L = 8.0;
  double s = 0.4;
  double theta = 0.6;
  int n = 3;
  int j = 2;
};

void validate(const CounterexampleParams& p);

struct CounterexampleNorms {
  double measure_A = 0.0;
  double measure_B = 0.0;
  double measure_C = 0.0;
  double norm_u = 0.0;     // ||Lambda^{s-1} Lambda_+ Lambda_-^theta u_L||_2
  double norm_v = 0.0;     // same for v_L
  double lhs_lower = 0.0;  // H^{s-1,theta-1} norm of the positive-weight product, restricted to C
  double ratio = 0.0;      // lhs_lower / (norm_u norm_v)
};

// Continuum quadrature over the sets. The left side is
// Lambda^{1/2}(Lambda^{-1/2} Lambda_-^{1/2} u . Lambda^{1/2} v), whose transform on C
// is an integral over all of A because Xi - Theta lies in B there.
CounterexampleNorms counterexample_norms(const CounterexampleParams& p);

bool in_set_A(double L, int n, const double* Theta);  // Theta = (lambda, eta_1..eta_n)
bool in_set_B(double L, int n, const double* Xi);
bool in_set_C(double L, int n, const double* Xi);

struct MembershipReport {
  long samples = 0;
  long failures = 0;
};

// Uniform samples Theta in A, Xi in C; counts Xi - Theta outside B.
MembershipReport membership_check(double L, int n, long samples, std::uint64_t seed);

}  // namespace nflab
