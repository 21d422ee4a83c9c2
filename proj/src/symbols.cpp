// Registry of pointwise frequency inequalities and a seeded fuzzer.
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "nflab/multiplier.hpp"
#include "nflab/nullform.hpp"

namespace nflab {

namespace {

const double kSqrt2 = std::sqrt(2.0);

double dminus(const FrequencyPoint& p) { return std::abs(std::abs(p.tau) - p.xi_norm()); }
double dplus(const FrequencyPoint& p) { return std::abs(p.tau) + p.xi_norm(); }
double lam(const FrequencyPoint& p) { return std::sqrt(1.0 + p.xi_norm() * p.xi_norm()); }
double lam_plus(const FrequencyPoint& p) { return std::sqrt(1.0 + p.norm() * p.norm()); }
double lam_minus(const FrequencyPoint& p) { return symbol_base(Family::hyperbolic, p); }

double wedge(const FrequencyPoint& p, const FrequencyPoint& q) {
  double s = 0.0;
  for (int i = 0; i < p.n; ++i)
    for (int j = i + 1; j < p.n; ++j) {
      const double w = p.xi[i] * q.xi[j] - p.xi[j] * q.xi[i];
      s += w * w;
    }
  return std::sqrt(s);
}

// ||tau| - |xi|| of a + s*b in extended precision; square roots amplify cancellation near the cone.
long double dminus_ext(const FrequencyPoint& a, const FrequencyPoint& b, int s) {
  const long double tau = static_cast<long double>(a.tau) + s * static_cast<long double>(b.tau);
  long double r2 = 0.0L;
  for (int i = 0; i < a.n; ++i) {
    const long double x = static_cast<long double>(a.xi[i]) + s * static_cast<long double>(b.xi[i]);
    r2 += x * x;
  }
  return std::fabs(std::fabs(tau) - std::sqrt(r2));
}

InequalitySides sides(double lhs, double rhs, double extra = 0.0) {
  return {lhs, rhs, std::abs(lhs) + std::abs(rhs) + extra};
}

const std::vector<InequalityInfo> kRegistry = {
    {"DeltaEstimate", "min(|xi|,|eta|)(1 +- cos) <= 2 Delta_-+", "1", 1},
    {"HyperbolicLambda", "||tau+lambda|-|xi+eta|| <= ||tau|-|xi|| + ||lambda|-|eta|| + r", "1", 1},
    {"EllipticLambda", "s(Xi+Theta)^a <= K (s(Xi)^a + s(Theta)^a) for s in Lambda, D, D+, Lambda+",
     "max(1, 2^(a-1))", 1},
    {"Q0Estimate",
     "|<Xi,Theta>| <= (S/2)^(1-a) (|Xi||Theta|)^a and <= K sum S_i^(1-a) (D+(Xi) D+(Theta))^a, a in [0,1]",
     "1 and 2^(a-1)", 1},
    {"QijEstimate", "|xi_i eta_j - xi_j eta_i| <= K (|xi||eta||xi+eta|)^(1/2) (A^(1/2) + B^(1/2) + C^(1/2))",
     "sqrt(2)", 2},
    {"WedgeFootnote", "|Qij| <= |xi^eta| <= min(|xi||eta|, |xi||xi+eta|, |xi+eta||eta|)", "1", 2},
    {"TrivialLambdaMinus", "Lambda_-(Xi+Theta)^a <= K (Lambda_+(Xi) Lambda_+(Theta))^a", "2^(a/2)", 1},
    {"YetAnotherLambdaMinus", "Lambda_-(Xi+Theta)^a <= K (Lambda_+(Xi)^a + Lambda(xi)^-b Lambda_-(Theta)^(a+b))",
     "(6+6 sqrt2)^a (1+sqrt2)^b", 1},
    {"NegativePowerLambdaMinus",
     "(a) Lambda_-^-b(Z) <= K Lambda_-^(-a-b)(Z) (Lambda_+ Lambda_+)^a; "
     "(b) Lambda_-^-b(Z) <= K (Lambda_-^(-a-b)(Z) Lambda(eta)^a + Lambda(eta)^-b)",
     "2^(a/2) and (1+sqrt2)^max(a,b)", 1},
    {"CFWMEstimateForR",
     "r <= A + B + C and r <= K (Lambda_-(Z)^(1-a) r^a + Lambda_-(Xi) + Lambda_-(Z)^-d Lambda(xi)^d Lambda_-(Theta))",
     "1 and 3 (1+sqrt2)^(1+d)", 1},
};

const InequalityInfo& lookup(const std::string& name) {
  for (const auto& e : kRegistry)
    if (e.name == name) return e;
  throw std::invalid_argument("unknown inequality: " + name);
}

}  // namespace

const std::vector<InequalityInfo>& inequality_registry() { return kRegistry; }

std::vector<InequalitySides> evaluate_inequality(const std::string& name, const FrequencyPoint& X,
                                                 const FrequencyPoint& T, const InequalityParams& prm) {
  lookup(name);
  const FrequencyPoint Z = X + T;
  const double a = prm.alpha, b = prm.beta, d = prm.delta;
  const double mag = X.norm() + T.norm();
  std::vector<InequalitySides> out;

  if (name == "DeltaEstimate") {
    const double x = X.xi_norm(), y = T.xi_norm();
    if (x == 0.0 || y == 0.0) return out;
    double dot = 0.0;
    for (int i = 0; i < X.n; ++i) dot += X.xi[i] * T.xi[i];
    const double c = std::clamp(dot / (x * y), -1.0, 1.0);
    const double m = std::min(x, y);
    out.push_back(sides(m * (1.0 + c), 2.0 * delta_minus(X, T), x + y));
    out.push_back(sides(m * (1.0 - c), 2.0 * delta_plus(X, T), x + y));
  } else if (name == "HyperbolicLambda") {
    const double r = r_kernel(X, T);
    out.push_back(sides(dminus(Z), dminus(X) + dminus(T) + r, mag));
  } else if (name == "EllipticLambda") {
    const double K = std::max(1.0, std::pow(2.0, a - 1.0));
    using Fn = double (*)(const FrequencyPoint&);
    const Fn fns[] = {lam, [](const FrequencyPoint& p) { return p.xi_norm(); }, dplus, lam_plus};
    for (Fn s : fns) out.push_back(sides(std::pow(s(Z), a), K * (std::pow(s(X), a) + std::pow(s(T), a))));
  } else if (name == "Q0Estimate") {
    const double q = std::abs(minkowski(X, T));
    const double s1 = std::abs(X.lorentz()), s2 = std::abs(T.lorentz()), s3 = std::abs(Z.lorentz());
    const double ext = X.norm() * T.norm();
    out.push_back(sides(q, std::pow(0.5 * (s1 + s2 + s3), 1.0 - a) * std::pow(ext, a), ext));
    const double K = std::pow(2.0, a - 1.0);
    const double sum = std::pow(s1, 1.0 - a) + std::pow(s2, 1.0 - a) + std::pow(s3, 1.0 - a);
    out.push_back(sides(q, K * sum * std::pow(dplus(X) * dplus(T), a), ext));
  } else if (name == "QijEstimate") {
    const double x = X.xi_norm(), y = T.xi_norm(), z = Z.xi_norm();
    const double rhs = kSqrt2 * std::sqrt(x * y * z) *
                       static_cast<double>(std::sqrt(dminus_ext(X, T, 1)) + std::sqrt(dminus_ext(X, T, 0)) +
                                           std::sqrt(dminus_ext(T, X, 0)));
    for (int i = 1; i <= X.n; ++i)
      for (int j = i + 1; j <= X.n; ++j) {
        const double q = std::abs(kernel_value({Form::Qij, 1.0, i, j}, X, T).real());
        out.push_back(sides(q, rhs, x * y));
      }
  } else if (name == "WedgeFootnote") {
    const double x = X.xi_norm(), y = T.xi_norm(), z = Z.xi_norm();
    const double w = wedge(X, T);
    for (int i = 1; i <= X.n; ++i)
      for (int j = i + 1; j <= X.n; ++j)
        out.push_back(sides(std::abs(kernel_value({Form::Qij, 1.0, i, j}, X, T).real()), w, x * y));
    out.push_back(sides(w, std::min({x * y, x * z, z * y}), x * y));
  } else if (name == "TrivialLambdaMinus") {
    out.push_back(sides(std::pow(lam_minus(Z), a), std::pow(2.0, a / 2) * std::pow(lam_plus(X) * lam_plus(T), a)));
  } else if (name == "YetAnotherLambdaMinus") {
    const double K = std::pow(6.0 + 6.0 * kSqrt2, a) * std::pow(1.0 + kSqrt2, b);
    out.push_back(sides(std::pow(lam_minus(Z), a),
                        K * (std::pow(lam_plus(X), a) + std::pow(lam(X), -b) * std::pow(lam_minus(T), a + b))));
  } else if (name == "NegativePowerLambdaMinus") {
    const double lz = lam_minus(Z);
    out.push_back(sides(std::pow(lz, -b),
                        std::pow(2.0, a / 2) * std::pow(lz, -a - b) * std::pow(lam_plus(X) * lam_plus(T), a)));
    const double K = std::pow(1.0 + kSqrt2, std::max(a, b));
    out.push_back(sides(std::pow(lz, -b), K * (std::pow(lz, -a - b) * std::pow(lam(T), a) + std::pow(lam(T), -b))));
  } else if (name == "CFWMEstimateForR") {
    const double r = r_kernel(X, T);
    out.push_back(sides(r, dminus(Z) + dminus(X) + dminus(T), mag));
    const double K = 3.0 * std::pow(1.0 + kSqrt2, 1.0 + d);
    const double lz = lam_minus(Z);
    const double rhs = K * (std::pow(lz, 1.0 - a) * std::pow(std::max(r, 0.0), a) + lam_minus(X) +
                            std::pow(lz, -d) * std::pow(lam(X), d) * lam_minus(T));
    out.push_back(sides(r, rhs, mag));
  }
  return out;
}

namespace {

struct Sampler {
  std::mt19937_64 rng;
  std::normal_distribution<double> gauss{0.0, 1.0};
  std::uniform_real_distribution<double> unif{0.0, 1.0};

  explicit Sampler(std::uint64_t seed) : rng(seed) {}

  double heavy() { return std::exp(2.5 * gauss(rng)); }
  double sign() { return unif(rng) < 0.5 ? -1.0 : 1.0; }
  double tiny() { return unif(rng) < 0.2 ? 0.0 : sign() * std::pow(10.0, -1.0 - 9.0 * unif(rng)); }

  std::array<double, 3> direction(int n) {
    std::array<double, 3> v{0, 0, 0};
    double s = 0.0;
    do {
      s = 0.0;
      for (int i = 0; i < n; ++i) {
        v[i] = gauss(rng);
        s += v[i] * v[i];
      }
    } while (s == 0.0);
    for (int i = 0; i < n; ++i) v[i] /= std::sqrt(s);
    return v;
  }

  FrequencyPoint generic(int n) {
    FrequencyPoint p;
    p.n = n;
    const double r = heavy();
    double v[4], s2 = 0.0;
    do {
      s2 = 0.0;
      for (int i = 0; i <= n; ++i) {
        v[i] = gauss(rng);
        s2 += v[i] * v[i];
      }
    } while (s2 == 0.0);
    const double k = r / std::sqrt(s2);
    p.tau = k * v[0];
    for (int i = 0; i < n; ++i) p.xi[i] = k * v[i + 1];
    return p;
  }

  FrequencyPoint near_cone(int n) {
    FrequencyPoint p;
    p.n = n;
    const double r = heavy();
    const auto d = direction(n);
    for (int i = 0; i < n; ++i) p.xi[i] = r * d[i];
    p.tau = sign() * r * (1.0 + tiny());
    return p;
  }

  FrequencyPoint near_multiple(const FrequencyPoint& base) {
    FrequencyPoint q;
    q.n = base.n;
    const double c = sign() * std::exp(1.5 * gauss(rng));
    const double eps = std::pow(10.0, -2.0 - 8.0 * unif(rng));
    const auto d = direction(base.n);
    const double x = base.xi_norm();
    for (int i = 0; i < base.n; ++i) q.xi[i] = c * base.xi[i] + eps * x * d[i];
    const double y = q.xi_norm();
    q.tau = unif(rng) < 0.5 ? sign() * y * (1.0 + tiny()) : heavy() * gauss(rng);
    return q;
  }

  std::pair<FrequencyPoint, FrequencyPoint> pair(int n, long k) {
    switch (k % 4) {
      case 0: return {generic(n), generic(n)};
      case 1: return {near_cone(n), near_cone(n)};
      case 2: {
        const FrequencyPoint p = unif(rng) < 0.5 ? near_cone(n) : generic(n);
        return {p, near_multiple(p)};
      }
      default: return {near_cone(n), generic(n)};
    }
  }
};

}  // namespace

InequalityReport check_symbol_inequality(const std::string& name, long samples, std::uint64_t seed) {
  const InequalityInfo& info = lookup(name);
  InequalityReport rep;
  rep.name = name;
  rep.samples = samples;
  rep.constant = info.constant;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  const bool unit_alpha = name == "Q0Estimate" || name == "CFWMEstimateForR";
  Sampler s(seed);
  for (long k = 0; k < samples; ++k) {
    const int n = info.min_dim + static_cast<int>(s.rng() % static_cast<std::uint64_t>(4 - info.min_dim));
    const auto [X, T] = s.pair(n, k);
    InequalityParams prm;
    const double u = s.unif(s.rng);
    if (unit_alpha)
      prm.alpha = u < 0.05 ? 0.0 : u > 0.95 ? 1.0 : s.unif(s.rng);
    else
      prm.alpha = 0.01 + 3.0 * s.unif(s.rng);
    prm.beta = 3.0 * s.unif(s.rng);
    prm.delta = 3.0 * s.unif(s.rng);
    for (const auto& sd : evaluate_inequality(name, X, T, prm)) {
      ++rep.checks;
      const double margin = sd.scale > 0.0 ? (sd.rhs - sd.lhs) / sd.scale : 0.0;
      if (!(margin >= -1e-9)) ++rep.violations;
      rep.worst_margin = std::min(rep.worst_margin, margin);
    }
  }
  if (rep.checks == 0) rep.worst_margin = 0.0;
  return rep;
}

}  // namespace nflab
