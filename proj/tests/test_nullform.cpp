#include <chrono>
#include <cmath>
#include <random>

#include "doctest.h"
#include "nflab/multiplier.hpp"
#include "nflab/nullform.hpp"
#include "testutil.hpp"

using namespace nflab;

namespace {

// Naive oracle: c(K) = V^{-1/2} sum_{P+Q=K} m(P,Q) u(P) v(Q), in-band inputs and outputs only.
template <typename Sym>
SpectralField naive(const SpectralField& u, const SpectralField& v, Sym sym) {
  SpectralField out = zeros(u.grid, u.kind, false);
  const double V = u.kind == FieldKind::spacetime ? u.grid.volume() : u.grid.spatial_volume();
  for (std::size_t a = 0; a < u.size(); ++a) {
    if (!in_band(u, a) || u.coeffs[a] == 0.0) continue;
    for (std::size_t b = 0; b < v.size(); ++b) {
      if (!in_band(v, b) || v.coeffs[b] == 0.0) continue;
      auto ka = u.lattice_index(a), kb = v.lattice_index(b);
      std::array<int, 4> k{};
      bool ok = true;
      for (int c = 0; c < 4; ++c) {
        k[c] = ka[c] + kb[c];
        const int N = c == 0 ? u.grid.N_t : u.grid.N_x;
        if ((c == 0 && u.kind == FieldKind::spacetime) || (c >= 1 && c <= u.grid.n)) ok = ok && std::abs(k[c]) < N / 2;
      }
      if (!ok) continue;
      out.coeffs[out.flat_index(k)] += sym(u.point(a), v.point(b)) * u.coeffs[a] * v.coeffs[b] / std::sqrt(V);
    }
  }
  return out;
}

double rel_err(const SpectralField& a, const SpectralField& b) {
  return testutil::max_diff(a.coeffs, b.coeffs) / std::max(1e-300, l2_norm(b));
}

// Real spatial field supported on |m| <= kmax.
SpectralField low_spatial(const Grid& g, int kmax, std::uint64_t seed) {
  SpectralField f = testutil::random_field(g, FieldKind::spatial, seed);
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto k = f.lattice_index(i);
    long m2 = 0;
    for (int a = 1; a <= g.n; ++a) m2 += long(k[a]) * k[a];
    if (m2 > long(kmax) * kmax) f.coeffs[i] = 0.0;
  }
  return f;
}

// Real spacetime field with |m| <= kmax, 0 < |k_t| <= kt_max.
SpectralField low_spacetime(const Grid& g, int kmax, int kt_max, std::uint64_t seed) {
  SpectralField u = testutil::random_field(g, FieldKind::spacetime, seed);
  for (std::size_t i = 0; i < u.size(); ++i) {
    auto k = u.lattice_index(i);
    long m2 = 0;
    for (int a = 1; a <= g.n; ++a) m2 += long(k[a]) * k[a];
    if (m2 > long(kmax) * kmax || k[0] == 0 || std::abs(k[0]) > kt_max) u.coeffs[i] = 0.0;
  }
  return u;
}

SpectralField half_wave_spatial(const SpectralField& f, int sign, double t) {
  SpectralField out = f;
  for (std::size_t i = 0; i < f.size(); ++i) out.coeffs[i] *= std::exp(cd(0.0, sign * t * f.point(i).xi_norm()));
  return out;
}

SpectralField sign_part(const SpectralField& u, int sign) {
  SpectralField out = u;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const int k = u.lattice_index(i)[0];
    if ((sign > 0 && k < 0) || (sign < 0 && k >= 0)) out.coeffs[i] = 0.0;
  }
  return out;
}

SpectralField sum(std::initializer_list<SpectralField> parts) {
  SpectralField out = *parts.begin();
  for (auto it = parts.begin() + 1; it != parts.end(); ++it)
    for (std::size_t i = 0; i < out.size(); ++i) out.coeffs[i] += it->coeffs[i];
  return out;
}

}  // namespace

TEST_CASE("dealiased product is exact for band-limited data") {
  const Grid g = make_grid(2, 16, 16, 3.0, 5.0);
  SpectralField u = low_spacetime(g, 3, 3, 1), v = low_spacetime(g, 3, 3, 2);
  SpectralField p = dealiased_product(u, v);
  CHECK(rel_err(p, naive(u, v, [](auto, auto) { return 1.0; })) < 1e-12);
  PhysicalField pu = inverse_transform(u), pv = inverse_transform(v), pp = inverse_transform(p);
  for (std::size_t i = 0; i < pu.values.size(); ++i) CHECK(std::abs(pp.values[i] - pu.values[i] * pv.values[i]) < 1e-10);
  CHECK(p.real_flag);
}

TEST_CASE("derivative route matches the symbol double sum") {
  const Grid g = make_grid(2, 8, 8, 3.0, 5.0);
  SpectralField u = testutil::random_field(g, FieldKind::spacetime, 3);
  SpectralField v = testutil::random_field(g, FieldKind::spacetime, 4);
  const BilinearFormSpec q0{Form::Q0};
  const BilinearFormSpec q12{Form::Qij, 1.0, 1, 2};
  const BilinearFormSpec qt{Form::Qtilde};
  CHECK(rel_err(apply_form(q0, u, v), naive(u, v, [&](auto p, auto q) { return -kernel_value(q0, p, q); })) < 1e-11);
  CHECK(rel_err(apply_form(q12, u, v), naive(u, v, [&](auto p, auto q) { return -kernel_value(q12, p, q); })) <
        1e-11);
  bool flag = false;
  SpectralField t = apply_form(qt, u, v, &flag);
  CHECK(flag);
  CHECK(rel_err(t, naive(u, v, [&](auto p, auto q) { return kernel_value(qt, p, q); })) < 1e-11);
}

TEST_CASE("null forms vanish where they should") {
  const Grid g = make_grid(2, 16, 16, 2 * M_PI, 2 * M_PI);
  PhysicalField c = sample(g, FieldKind::spacetime, [](double, const std::array<double, 3>&) { return cd(0.7); });
  SpectralField k = transform(c);
  CHECK(l2_norm(apply_form({Form::Q0}, k, k)) < 1e-12);
  PhysicalField cone = sample(g, FieldKind::spacetime, [](double t, const std::array<double, 3>& x) {
    return cd(std::cos(3 * t + 3 * x[1]));
  });
  SpectralField w = transform(cone);
  CHECK(l2_norm(apply_form({Form::Q0}, w, w)) < 1e-12);
  SpectralField u = testutil::random_field(g, FieldKind::spacetime, 9);
  CHECK(l2_norm(apply_form({Form::Qij, 1.0, 1, 2}, u, u)) < 1e-12);
}

TEST_CASE("symmetry and antisymmetry") {
  const Grid g = make_grid(2, 8, 8, 3.0, 5.0);
  SpectralField u = low_spacetime(g, 2, 2, 5), v = low_spacetime(g, 2, 2, 6);
  auto swap_diff = [&](const BilinearFormSpec& s, double sgn) {
    SpectralField a = apply_form(s, u, v), b = apply_form(s, v, u);
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.coeffs[i] - sgn * b.coeffs[i]));
    return m / std::max(1e-300, l2_norm(a));
  };
  CHECK(swap_diff({Form::Q0}, 1.0) < 1e-12);
  CHECK(swap_diff({Form::Qij, 1.0, 1, 2}, -1.0) < 1e-12);
  CHECK(swap_diff({Form::Ralpha, 0.7}, 1.0) < 1e-12);
  const Grid gs = make_grid(2, 2, 16, 1.0, 2 * M_PI);
  SpectralField f = low_spatial(gs, 4, 7), h = low_spatial(gs, 4, 8);
  for (Form fm : {Form::Splus, Form::Sminus}) {
    SpectralField a = apply_form({fm, 0.6}, f, h), b = apply_form({fm, 0.6}, h, f);
    CHECK(rel_err(a, b) < 1e-12);
  }
}

TEST_CASE("bilinearity") {
  const Grid g = make_grid(1, 8, 16, 3.0, 5.0);
  SpectralField u = low_spacetime(g, 4, 3, 10), v = low_spacetime(g, 4, 3, 11), w = low_spacetime(g, 4, 3, 12);
  for (Form fm : {Form::Q0, Form::Ralpha, Form::product}) {
    const BilinearFormSpec s{fm, 0.8};
    SpectralField lhs = apply_form(s, sum({u, w}), v);
    SpectralField rhs = sum({apply_form(s, u, v), apply_form(s, w, v)});
    CHECK(rel_err(lhs, rhs) < 1e-12);
  }
}

TEST_CASE("Q0 polarization identity") {
  const Grid g = make_grid(2, 8, 8, 3.0, 5.0);
  SpectralField u = testutil::random_field(g, FieldKind::spacetime, 13);
  SpectralField v = testutil::random_field(g, FieldKind::spacetime, 14);
  auto box = [](SpectralField w) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      const auto p = w.point(i);
      w.coeffs[i] *= in_band(w, i) ? p.tau * p.tau - p.xi_norm() * p.xi_norm() : 0.0;
    }
    return w;
  };
  SpectralField lhs = apply_form({Form::Q0}, u, v);
  SpectralField rhs = box(dealiased_product(u, v));
  const SpectralField a = dealiased_product(box(u), v), b = dealiased_product(u, box(v));
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs.coeffs[i] = 0.5 * (rhs.coeffs[i] - a.coeffs[i] - b.coeffs[i]);
  CHECK(rel_err(lhs, rhs) < 1e-10);
}

TEST_CASE("kernel values") {
  FrequencyPoint e1{1.0, {1, 0, 0}, 2}, me1{-1.0, {-1, 0, 0}, 2};
  CHECK(kernel_value({Form::Ralpha, 1.0}, e1, e1).real() == doctest::Approx(0.0));
  CHECK(kernel_value({Form::Ralpha, 1.0}, e1, me1).real() == doctest::Approx(0.0));
  FrequencyPoint x{0.0, {1, 0, 0}, 2}, y{0.0, {0, 1, 0}, 2};
  CHECK(delta_plus(x, y) == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-12));
  CHECK(delta_minus(x, y) == doctest::Approx(std::sqrt(2.0)));
  CHECK(kernel_value({Form::Q0}, FrequencyPoint{2, {1, 3, 0}, 2}, FrequencyPoint{-1, {2, -1, 0}, 2}).real() ==
        doctest::Approx(2 + 2 - 3));
  CHECK(kernel_value({Form::Qij, 1, 1, 2}, FrequencyPoint{0, {1, 3, 0}, 2}, FrequencyPoint{0, {2, -1, 0}, 2}).real() ==
        doctest::Approx(-1 - 6));
  CHECK_THROWS(kernel_value({Form::Splus, 0.0}, x, y));
  CHECK_THROWS(kernel_value({Form::Ralpha, -1.0}, x, y));
}

TEST_CASE("half-wave product identity, multiplier route vs S route") {
  const auto start = std::chrono::steady_clock::now();
  const Grid g = make_grid(2, 2, 16, 2 * M_PI, 2 * M_PI);
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> tdist(-3.0, 3.0);
  double worst = 0.0;
  for (int trial = 0; trial < 6; ++trial) {
    SpectralField f = low_spatial(g, 4, 100 + trial), h = low_spatial(g, 4, 200 + trial);
    const double t = tdist(rng);
    const double alpha = trial % 3 == 0 ? 0.5 : trial % 3 == 1 ? 1.0 : 1.7;
    for (int sign : {+1, -1}) {
      SpectralField mult = dminus_half_wave_product(alpha, sign, f, h, t);
      SpectralField conv =
          apply_form({sign > 0 ? Form::Splus : Form::Sminus, alpha}, half_wave_spatial(f, 1, t), half_wave_spatial(h, sign, t));
      worst = std::max(worst, rel_err(mult, conv));
    }
  }
  CHECK(worst <= 1e-8);
  CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() < 5.0);
}

TEST_CASE("R equals the four-term S sum over the sign split") {
  const Grid g = make_grid(2, 16, 16, 2 * M_PI, 2 * M_PI);
  for (double alpha : {0.6, 1.0}) {
    SpectralField u = low_spacetime(g, 4, 4, 300), v = low_spacetime(g, 4, 4, 301);
    SpectralField up = sign_part(u, 1), um = sign_part(u, -1), vp = sign_part(v, 1), vm = sign_part(v, -1);
    const BilinearFormSpec sp{Form::Splus, alpha}, sm{Form::Sminus, alpha};
    SpectralField lhs = apply_form({Form::Ralpha, alpha}, u, v);
    SpectralField rhs = sum({apply_slicewise(sp, up, vp), apply_slicewise(sm, up, vm), apply_slicewise(sm, um, vp),
                             apply_slicewise(sp, um, vm)});
    CHECK(rel_err(lhs, rhs) <= 1e-8);
  }
}

TEST_CASE("registry names are stable and fuzzing finds no violations") {
  const char* names[] = {"DeltaEstimate",      "HyperbolicLambda",      "EllipticLambda",
                         "Q0Estimate",         "QijEstimate",           "WedgeFootnote",
                         "TrivialLambdaMinus", "YetAnotherLambdaMinus", "NegativePowerLambdaMinus",
                         "CFWMEstimateForR"};
  CHECK(inequality_registry().size() == 10);
  for (const std::string n : names) {
    const InequalityReport r = check_symbol_inequality(n, 20000, 17);
    CAPTURE(n);
    CAPTURE(r.worst_margin);
    CHECK(r.checks > 0);
    CHECK(r.violations == 0);
  }
  CHECK_THROWS(check_symbol_inequality("NoSuchLemma", 10, 1));
}

TEST_CASE("degenerate inequality instances") {
  FrequencyPoint e1{1.0, {1, 0, 0}, 2};
  auto s = evaluate_inequality("HyperbolicLambda", e1, e1, {});
  REQUIRE(s.size() == 1);
  CHECK(s[0].lhs == 0.0);
  CHECK(s[0].rhs == 0.0);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gd;
  for (int k = 0; k < 1000; ++k) {
    FrequencyPoint X{gd(rng), {gd(rng), gd(rng), gd(rng)}, 3}, T{gd(rng), {gd(rng), gd(rng), gd(rng)}, 3};
    auto q = evaluate_inequality("Q0Estimate", X, T, {1.0, 0, 0});
    CHECK(q[0].rhs == doctest::Approx(X.norm() * T.norm()));
    CHECK(q[0].lhs <= q[0].rhs * (1 + 1e-12));
  }
}

TEST_CASE("triangle product bound behind the wedge constant") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 100000; ++k) {
    const double a = u(rng), b = u(rng);
    const double c = std::abs(a - b) + (a + b - std::abs(a - b)) * u(rng);
    const double lhs = (a + b + c) * (b + c - a) * (c + a - b);
    CHECK(lhs <= 8 * a * b * c * (1 + 1e-12) + 1e-300);
    const double w2 = (a + b + c) * (b + c - a) * (c + a - b) * (a + b - c) / 4;
    CHECK(w2 <= 2 * a * b * c * std::min(a + b - c, c - std::abs(a - b)) * (1 + 1e-9) + 1e-300);
  }
}
