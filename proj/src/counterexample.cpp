#include "nflab/counterexample.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

namespace nflab {

namespace {

using Fn = std::function<double(double)>;
using boost::math::quadrature::gauss;

// Composite 15-point Gauss-Legendre on [a, b], with an optional breakpoint.
double integrate(const Fn& f, double a, double b, int pieces = 1, double brk = NAN) {
  if (!(b > a)) return 0.0;
  if (std::isfinite(brk) && brk > a && brk < b)
    return integrate(f, a, brk, pieces) + integrate(f, brk, b, pieces);
  double s = 0.0;
  const double h = (b - a) / pieces;
  for (int k = 0; k < pieces; ++k) s += gauss<double, 15>::integrate(f, a + k * h, a + (k + 1) * h);
  return s;
}

// Surface measure of the unit sphere in R^m.
double sphere_area(int m) { return 2.0 * std::pow(M_PI, 0.5 * m) / std::tgamma(0.5 * m); }

// Integral over the unit sphere of R^m of g(cos of the angle to a fixed axis).
double sphere_integral(int m, const Fn& g) {
  if (m == 1) return g(1.0) + g(-1.0);
  if (m == 2) return integrate([&](double phi) { return g(std::cos(phi)); }, 0.0, M_PI, 2) * 2.0;
  const double c = sphere_area(m - 1);
  return c * integrate([&](double phi) { return g(std::cos(phi)) * std::pow(std::sin(phi), m - 2); }, 0.0, M_PI, 2);
}

double jb(double r2) { return std::sqrt(1.0 + r2); }  // Lambda and Lambda_+ symbols from |.|^2

// Lambda_- symbol (1 + <Xi,Xi>^2 / (1 + |Xi|^2))^{1/2} from tau and |xi|.
double lam_minus(double tau, double x) {
  const double t = std::abs(tau);
  const double l = (x - t) * (x + t);
  return std::sqrt(1.0 + l * l / (1.0 + t * t + x * x));
}

// Integral over an (n-1)-dimensional shell rho in [r0, r1] of a radial function.
double shell(int n, double r0, double r1, const Fn& f, int pieces = 1) {
  const int m = n - 1;
  const double area = m == 1 ? 2.0 : sphere_area(m);
  return area * integrate([&](double r) { return std::pow(r, m - 1) * f(r); }, r0, r1, pieces);
}

}  // namespace

void validate(const CounterexampleParams& p) {
  if (p.n < 2) throw std::invalid_argument("counterexample needs n >= 2");
  if (!(p.L >= 4.0)) throw std::invalid_argument("counterexample needs L >= 4");
  if (p.j < 2 || p.j > p.n) throw std::invalid_argument("counterexample index j must satisfy 1 < j <= n");
}

CounterexampleNorms counterexample_norms(const CounterexampleParams& p) {
  validate(p);
  const double L = p.L, s = p.s, th = p.theta;
  const int n = p.n;
  CounterexampleNorms out;

  // A: eta_1 in [L/2, L], rho = |eta'| in [L/2, L], lambda in [eta_1 - 1, eta_1 + 1].
  auto over_A = [&](const std::function<double(double, double, double)>& w) {
    return integrate(
        [&](double e1) {
          return shell(n, 0.5 * L, L, [&](double rho) {
            const double en = std::hypot(e1, rho);
            return integrate([&](double lam) { return w(lam, e1, rho); }, e1 - 1.0, e1 + 1.0, 1, en);
          });
        },
        0.5 * L, L, 1);
  };
  // Sets around the cone: xi_1 in [x0, x1], |xi'| <= r1, tau = |xi| + d with |d| <= dm.
  auto over_cone = [&](double x0, double x1, double r1, double dm, const std::function<double(double, double, double)>& w) {
    return integrate(
        [&](double x) {
          return shell(n, 0.0, r1, [&](double rho) {
            return integrate([&](double d) { return w(x, rho, d); }, -dm, dm, 1, 0.0);
          });
        },
        x0, x1, 4);
  };

  out.measure_A = over_A([](double, double, double) { return 1.0; });
  out.measure_B = over_cone(0.5 * L * L, 4 * L * L, 2 * L, 8.0, [](double, double, double) { return 1.0; });
  out.measure_C = over_cone(L * L, 2 * L * L, L, 1.0, [](double, double, double) { return 1.0; });

  const double nu2 = over_A([&](double lam, double e1, double rho) {
    const double e2 = e1 * e1 + rho * rho;
    const double w = std::pow(jb(e2), s - 1) * jb(lam * lam + e2) * std::pow(lam_minus(lam, std::sqrt(e2)), th);
    return w * w;
  });
  const double nv2 = over_cone(0.5 * L * L, 4 * L * L, 2 * L, 8.0, [&](double x, double rho, double d) {
    const double x2 = x * x + rho * rho;
    const double tau = std::sqrt(x2) + d;
    const double w = std::pow(jb(x2), s - 1) * jb(tau * tau + x2) * std::pow(lam_minus(tau, std::sqrt(x2)), th);
    return w * w;
  });
  out.norm_u = std::sqrt(nu2);
  out.norm_v = std::sqrt(nv2);

  // G(xi) = <xi>^{1/2} int_A <eta>^{-1/2} (1 + ||lambda| - |eta||)^{1/2} <xi - eta>^{1/2}.
  auto G = [&](double x, double r) {
    const double inner = integrate(
        [&](double e1) {
          return shell(n, 0.5 * L, L, [&](double rho) {
            const double en = std::hypot(e1, rho);
            const double hl = integrate([&](double lam) { return std::sqrt(lam_minus(lam, en)); },
                                        e1 - 1.0, e1 + 1.0, 1, en);
            const double ang = n == 2 ? 0.5 * sphere_integral(1, [&](double c) {
              return std::sqrt(jb((x - e1) * (x - e1) + r * r + rho * rho - 2 * r * rho * c));
            }) : sphere_integral(n - 1, [&](double c) {
              return std::sqrt(jb((x - e1) * (x - e1) + r * r + rho * rho - 2 * r * rho * c));
            }) / sphere_area(n - 1);
            return std::pow(jb(en * en), -0.5) * hl * ang;
          });
        },
        0.5 * L, L, 1);
    return std::sqrt(jb(x * x + r * r)) * inner;
  };
  const double lhs2 = integrate(
      [&](double x) {
        return shell(n, 0.0, L, [&](double r) {
          const double g = G(x, r);
          const double xn = std::hypot(x, r);
          const double dfac = integrate(
              [&](double d) { return std::pow(lam_minus(xn + d, xn), 2 * (th - 1)); }, -1.0, 1.0, 1, 0.0);
          return std::pow(jb(x * x + r * r), 2 * (s - 1)) * g * g * dfac;
        });
      },
      L * L, 2 * L * L, 1);
  out.lhs_lower = std::sqrt(lhs2);
  out.ratio = out.lhs_lower / (out.norm_u * out.norm_v);
  return out;
}

namespace {

double tail_norm(int n, const double* v) {
  double s = 0.0;
  for (int i = 2; i <= n; ++i) s += v[i] * v[i];
  return std::sqrt(s);
}

double spatial_norm(int n, const double* v) { return std::hypot(v[1], tail_norm(n, v)); }

}  // namespace

bool in_set_A(double L, int n, const double* T) {
  const double r = tail_norm(n, T);
  return std::abs(T[0] - T[1]) <= 1.0 && T[1] >= 0.5 * L && T[1] <= L && r >= 0.5 * L && r <= L;
}

bool in_set_B(double L, int n, const double* X) {
  return std::abs(X[0] - spatial_norm(n, X)) <= 8.0 && X[1] >= 0.5 * L * L && X[1] <= 4 * L * L &&
         tail_norm(n, X) <= 2 * L;
}

bool in_set_C(double L, int n, const double* X) {
  return std::abs(X[0] - spatial_norm(n, X)) <= 1.0 && X[1] >= L * L && X[1] <= 2 * L * L && tail_norm(n, X) <= L;
}

MembershipReport membership_check(double L, int n, long samples, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("counterexample needs n >= 2");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  MembershipReport rep;
  std::vector<double> T(static_cast<std::size_t>(n + 1)), X(T.size()), D(T.size());
  auto ball = [&](double* v, double r0, double r1) {
    for (;;) {
      double s = 0.0;
      for (int i = 2; i <= n; ++i) {
        v[i] = r1 * U(rng);
        s += v[i] * v[i];
      }
      if (s <= r1 * r1 && s >= r0 * r0) return;
    }
  };
  for (long k = 0; k < samples; ++k) {
    T[1] = 0.75 * L + 0.25 * L * U(rng);
    ball(T.data(), 0.5 * L, L);
    T[0] = T[1] + U(rng);
    X[1] = 1.5 * L * L + 0.5 * L * L * U(rng);
    ball(X.data(), 0.0, L);
    X[0] = spatial_norm(n, X.data()) + U(rng);
    for (std::size_t i = 0; i < T.size(); ++i) D[i] = X[i] - T[i];
    ++rep.samples;
    if (!in_set_B(L, n, D.data())) ++rep.failures;
  }
  return rep;
}

}  // namespace nflab
