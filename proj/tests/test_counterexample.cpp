#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "nflab/counterexample.hpp"
#include "nflab/probe.hpp"

using namespace nflab;

namespace {

// Test-side weights: Lambda^{s-1} Lambda_+ Lambda_-^theta.
double cal_weight(double tau, double x, double s, double th) {
  const double lam = std::sqrt(1.0 + x * x);
  const double lp = std::sqrt(1.0 + tau * tau + x * x);
  const double q = x * x - tau * tau;
  const double lm = std::sqrt(1.0 + q * q / (1.0 + tau * tau + x * x));
  return std::pow(lam, s - 1) * lp * std::pow(lm, th);
}

double slope_of(const std::vector<double>& Ls, const std::vector<double>& ys) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < Ls.size(); ++i) pts.emplace_back(Ls[i], ys[i]);
  return scaling_fit(pts).slope;
}

}  // namespace

TEST_CASE("set measures match their closed forms") {
  for (double L : {8.0, 20.0}) {
    const auto r = counterexample_norms({L, 0.4, 0.6, 3, 2});
    CHECK(r.measure_A == doctest::Approx(0.75 * M_PI * L * L * L).epsilon(1e-8));
    CHECK(r.measure_B == doctest::Approx(16.0 * 3.5 * L * L * M_PI * 4.0 * L * L).epsilon(1e-8));
    CHECK(r.measure_C == doctest::Approx(2.0 * L * L * M_PI * L * L).epsilon(1e-8));
  }
}

TEST_CASE("norms agree with Monte Carlo over the sets") {
  const double L = 16.0, s = 0.4, th = 0.6;
  const auto r = counterexample_norms({L, s, th, 3, 2});
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const int M = 200000;

  // A: eta_1 uniform, eta' uniform on the annulus, lambda in the slab
  double acc = 0.0;
  for (int i = 0; i < M; ++i) {
    const double e1 = L / 2 + U(rng) * L / 2;
    const double rr = std::sqrt(L * L / 4 + U(rng) * (L * L - L * L / 4));
    const double lam = e1 + (2.0 * U(rng) - 1.0);
    const double w = cal_weight(lam, std::hypot(e1, rr), s, th);
    acc += w * w;
  }
  CHECK(std::sqrt(acc / M * r.measure_A) == doctest::Approx(r.norm_u).epsilon(0.01));

  // B: tau = |xi| + d with d uniform in [-8, 8]
  acc = 0.0;
  for (int i = 0; i < M; ++i) {
    const double x1 = L * L / 2 + U(rng) * 3.5 * L * L;
    const double rr = 2.0 * L * std::sqrt(U(rng));
    const double x = std::hypot(x1, rr);
    const double w = cal_weight(x + 16.0 * U(rng) - 8.0, x, s, th);
    acc += w * w;
  }
  CHECK(std::sqrt(acc / M * r.measure_B) == doctest::Approx(r.norm_v).epsilon(0.01));
}

TEST_CASE("scaling exponents in n = 3") {
  const std::vector<double> Ls{8, 16, 32, 64};
  for (auto [s, th] : {std::pair{0.4, 0.6}, std::pair{1.0, 0.6}}) {
    CAPTURE(s);
    std::vector<double> A, nu, nv, ratio;
    for (double L : Ls) {
      const auto r = counterexample_norms({L, s, th, 3, 2});
      A.push_back(r.measure_A);
      nu.push_back(r.norm_u);
      nv.push_back(r.norm_v);
      ratio.push_back(r.ratio);
      CHECK(r.ratio == doctest::Approx(r.lhs_lower / (r.norm_u * r.norm_v)));
    }
    CHECK(slope_of(Ls, A) == doctest::Approx(3.0).epsilon(0.05 / 3.0));
    CHECK(std::abs(slope_of(Ls, nu) - (s + th + 1.5)) <= 0.1);
    CHECK(std::abs(slope_of(Ls, nv) - (2 * s + 2.0)) <= 0.1);
    CHECK(std::abs(slope_of(Ls, ratio) - (1.5 - s - th)) <= 0.15);
  }
}

TEST_CASE("ratio sign flips across s = n/2 - theta") {
  const std::vector<double> Ls{8, 16, 32, 64};
  std::vector<double> lo, hi;
  for (double L : Ls) {
    lo.push_back(counterexample_norms({L, 0.4, 0.6, 3, 2}).ratio);
    hi.push_back(counterexample_norms({L, 1.0, 0.6, 3, 2}).ratio);
  }
  CHECK(slope_of(Ls, lo) > 0.0);
  CHECK(slope_of(Ls, hi) < 0.0);
}

TEST_CASE("membership chain holds on samples") {
  for (double L : {8.0, 64.0}) {
    const auto m = membership_check(L, 3, 100000, 11);
    CHECK(m.samples == 100000);
    CHECK(m.failures == 0);
  }
  const auto m2 = membership_check(16.0, 2, 50000, 3);
  CHECK(m2.failures == 0);
}

TEST_CASE("set predicates on hand points") {
  const double L = 8.0;
  const double a_in[4] = {6.5, 6.0, 5.0, 0.0};
  const double a_out[4] = {8.5, 6.0, 5.0, 0.0};  // slab violated
  CHECK(in_set_A(L, 3, a_in));
  CHECK_FALSE(in_set_A(L, 3, a_out));
  const double b_in[4] = {100.0, 100.0, 0.0, 0.0};
  const double b_out[4] = {109.0, 100.0, 0.0, 0.0};
  CHECK(in_set_B(L, 3, b_in));
  CHECK_FALSE(in_set_B(L, 3, b_out));
  const double c_in[4] = {100.5, 100.0, 3.0, 0.0};
  CHECK(in_set_C(L, 3, c_in));
}

TEST_CASE("counterexample parameter validation") {
  CHECK_THROWS_AS(validate(CounterexampleParams{8.0, 0.4, 0.6, 1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(validate(CounterexampleParams{2.0, 0.4, 0.6, 3, 2}), std::invalid_argument);
  CHECK_NOTHROW(validate(CounterexampleParams{}));
}
