#include "nflab/probe.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

#include "nflab/counterexample.hpp"
#include "nflab/parallel.hpp"

namespace nflab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double dot(const double* a, const double* b, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double norm(const double* a, int n) { return std::sqrt(dot(a, a, n)); }

// |a ^ b|^2 as a sum of squared 2x2 minors.
double wedge2(const double* a, const double* b, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double m = a[i] * b[j] - a[j] * b[i];
      s += m * m;
    }
  return s;
}

double sphere_area(int m) { return 2.0 * std::pow(M_PI, 0.5 * m) / std::tgamma(0.5 * m); }

double bracket(double r) { return 1.0 + r; }

void require_dim(int n) {
  if (n < 1 || n > 3) throw std::invalid_argument("dimension must be 1, 2 or 3");
}

}  // namespace

// ---------------------------------------------------------------- fitting

ScalingFit scaling_fit(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw std::invalid_argument("scaling_fit: need at least 3 points");
  const double m = static_cast<double>(points.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0)) throw std::invalid_argument("scaling_fit: nonpositive value");
    sx += std::log(x);
    sy += std::log(y);
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : points) {
    const double dx = std::log(x) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y) - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("scaling_fit: scales must differ");
  ScalingFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rr = 0.0;
  for (const auto& [x, y] : points) {
    const double e = std::log(y) - (f.intercept + f.slope * std::log(x));
    rr += e * e;
  }
  f.residual = std::sqrt(rr / m);
  return f;
}

// ---------------------------------------------------------------- kernels

void validate(const KernelSpec& k) {
  if (!(k.a >= 0.0) || !(k.b >= 0.0) || !(k.c >= 0.0)) throw std::invalid_argument("kernel: a, b, c must be >= 0");
}

DeltaSign parse_delta_sign(const std::string& name) {
  if (name == "plus" || name == "+") return DeltaSign::plus;
  if (name == "minus" || name == "-") return DeltaSign::minus;
  throw std::invalid_argument("unknown sign: " + name);
}

KernelVariant parse_kernel_variant(const std::string& name) {
  if (name == "homogeneous") return KernelVariant::homogeneous;
  if (name == "inhomogeneous") return KernelVariant::inhomogeneous;
  throw std::invalid_argument("unknown kernel variant: " + name);
}

std::string delta_sign_name(DeltaSign s) { return s == DeltaSign::plus ? "plus" : "minus"; }
std::string kernel_variant_name(KernelVariant v) {
  return v == KernelVariant::homogeneous ? "homogeneous" : "inhomogeneous";
}

double spatial_delta(DeltaSign sign, const double* xi, const double* eta, int n) {
  const double r1 = norm(xi, n), r2 = norm(eta, n);
  double sum[3];
  for (int i = 0; i < n; ++i) sum[i] = xi[i] + eta[i];
  const double rs = norm(sum, n);
  const double d = dot(xi, eta, n);
  const double w = wedge2(xi, eta, n);
  // r1 r2 -+ xi.eta without cancellation
  const double pr = r1 * r2;
  const double minus_part = d > 0.0 ? w / (pr + d) : pr - d;
  const double plus_part = d < 0.0 ? w / (pr - d) : pr + d;
  if (sign == DeltaSign::plus) {
    const double den = r1 + r2 + rs;
    return den > 0.0 ? 2.0 * minus_part / den : 0.0;
  }
  const double den = rs + std::abs(r1 - r2);
  return den > 0.0 ? 2.0 * plus_part / den : 0.0;
}

double spatial_delta_polar(DeltaSign sign, double r_xi, double r_eta, double angle) {
  const double pr = r_xi * r_eta;
  const double sh = std::sin(0.5 * angle), ch = std::cos(0.5 * angle);
  const double rs2 = (r_xi - r_eta) * (r_xi - r_eta) + 4.0 * pr * ch * ch;
  const double rs = std::sqrt(std::max(0.0, rs2));
  if (sign == DeltaSign::plus) {
    const double den = r_xi + r_eta + rs;
    return den > 0.0 ? 4.0 * pr * sh * sh / den : 0.0;
  }
  const double den = rs + std::abs(r_xi - r_eta);
  return den > 0.0 ? 4.0 * pr * ch * ch / den : 0.0;
}

namespace {

double weight_pow(KernelVariant v, double r, double e) {
  if (e == 0.0) return 1.0;
  const double w = v == KernelVariant::homogeneous ? r : bracket(r);
  return w == 0.0 ? kInf : std::pow(w, -e);
}

}  // namespace

double kernel_value(const KernelSpec& k, const double* xi, const double* eta, int n) {
  const double d = spatial_delta(k.sign, xi, eta, n);
  return weight_pow(k.variant, norm(xi, n), k.a) * weight_pow(k.variant, norm(eta, n), k.b) *
         weight_pow(k.variant, d, k.c);
}

bool proposition_region(double a, double b, double c, int n) {
  return a >= 0.0 && b >= 0.0 && c >= 0.0 && a + b + c > 0.5 * n && c < 0.25 * (n - 1);
}

SchurParts schur_parts(const KernelSpec& k, int n, double R, double h) {
  validate(k);
  if (n < 2) throw std::invalid_argument("schur_bound: n >= 2 required");
  if (!(R > 0.0) || !(h > 0.0)) throw std::invalid_argument("schur_bound: R and h must be positive");
  SchurParts out;
  int m = 1;
  while (M_PI / m > h * (1.0 + 1e-9) && m < (1 << 20)) m *= 2;
  out.angular_cells = m;
  const double cell = M_PI / m;
  std::vector<double> ang(m + 1), sinp(m + 1);
  for (int i = 0; i <= m; ++i) {
    ang[i] = i * cell;
    sinp[i] = n == 2 ? 1.0 : std::pow(std::max(0.0, std::sin(ang[i])), n - 2);
  }
  const double area = sphere_area(n - 1);

  // Radial nodes on (0, 1]: geometric pieces [2^{-j-1}, 2^{-j}], Gauss-Legendre on each.
  using GL = boost::math::quadrature::gauss<double, 10>;
  std::vector<double> xs, ws;
  const int levels = 40;
  for (int j = 0; j < levels; ++j) {
    const double lo = std::ldexp(1.0, -j - 1), hi = std::ldexp(1.0, -j);
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    const auto& abs = GL::abscissa();
    const auto& wts = GL::weights();
    for (std::size_t q = 0; q < abs.size(); ++q) {
      const double nodes[2] = {abs[q], -abs[q]};
      for (int sgn = 0; sgn < (abs[q] == 0.0 ? 1 : 2); ++sgn) {
        xs.push_back(mid + half * nodes[sgn]);
        ws.push_back(half * wts[q]);
      }
    }
  }

  std::vector<double> radii;
  for (int kk = 0;; ++kk) {
    const double r = std::ldexp(std::exp2(0.25 * kk), -6);
    if (r > R) break;
    radii.push_back(r);
  }
  out.radii = static_cast<int>(radii.size());
  std::vector<double> s1(radii.size()), s2(radii.size());

  parallel_for(radii.size(), [&](std::size_t idx) {
    const double rho = radii[idx];
    std::vector<double> f(m + 1);
    double acc1 = 0.0, acc2 = 0.0;
    for (std::size_t q = 0; q < xs.size(); ++q) {
      const double r = rho * xs[q];
      for (int i = 0; i <= m; ++i) f[i] = weight_pow(k.variant, spatial_delta_polar(k.sign, rho, r, ang[i]), 2.0 * k.c);
      double sum = 0.0;
      for (int i = 0; i < m; ++i) sum += std::min(f[i], f[i + 1]) * std::min(sinp[i], sinp[i + 1]);
      const double a_int = area * cell * sum;
      const double base = ws[q] * rho * std::pow(r, n - 1) * a_int;
      acc1 += base * weight_pow(k.variant, r, 2.0 * k.b);
      acc2 += base * weight_pow(k.variant, r, 2.0 * k.a);
    }
    s1[idx] = weight_pow(k.variant, rho, 2.0 * k.a) * acc1;
    s2[idx] = weight_pow(k.variant, rho, 2.0 * k.b) * acc2;
  });
  for (std::size_t i = 0; i < radii.size(); ++i) {
    out.s1 = std::max(out.s1, s1[i]);
    out.s2 = std::max(out.s2, s2[i]);
  }
  const double b = std::sqrt(out.s1) + std::sqrt(out.s2);
  out.bound = b * b;
  return out;
}

double schur_bound(const KernelSpec& k, int n, double R, double h) { return schur_parts(k, n, R, h).bound; }

namespace {

struct LatticeMode {
  std::array<int, 3> m{};
  std::array<double, 3> x{};
  long r2 = 0;
};

std::vector<LatticeMode> band_modes(const Grid& g) {
  require_dim(g.n);
  std::vector<LatticeMode> out;
  const int lo = -(g.N_x / 2) + 1, hi = (g.N_x - 1) / 2;
  const double d = g.dxi();
  std::array<int, 3> m{0, 0, 0};
  std::function<void(int)> rec = [&](int axis) {
    if (axis == g.n) {
      LatticeMode lm;
      lm.m = m;
      for (int i = 0; i < g.n; ++i) {
        lm.x[i] = d * m[i];
        lm.r2 += static_cast<long>(m[i]) * m[i];
      }
      out.push_back(lm);
      return;
    }
    for (int k = lo; k <= hi; ++k) {
      m[axis] = k;
      rec(axis + 1);
    }
  };
  rec(0);
  return out;
}

bool in_lattice_band(const std::array<int, 3>& m, const Grid& g) {
  const int lo = -(g.N_x / 2) + 1, hi = (g.N_x - 1) / 2;
  for (int i = 0; i < g.n; ++i)
    if (m[i] < lo || m[i] > hi) return false;
  return true;
}

void require_nonnegative(const SpectralField& f, const char* what) {
  if (f.kind != FieldKind::spatial) throw std::invalid_argument(std::string(what) + ": spatial field required");
  for (const auto& c : f.coeffs)
    if (c.real() < 0.0 || c.imag() != 0.0)
      throw std::invalid_argument(std::string(what) + ": nonnegative real spectrum required");
}

}  // namespace

double schur_bound_lattice(const KernelSpec& k, const Grid& g) {
  validate(k);
  const auto modes = band_modes(g);
  const double meas = std::pow(g.dxi(), g.n);
  std::vector<double> s1(modes.size(), 0.0), s2(modes.size(), 0.0);
  parallel_for(modes.size(), [&](std::size_t i) {
    double a1 = 0.0, a2 = 0.0;
    for (const auto& o : modes) {
      if (o.r2 <= modes[i].r2) {
        const double v = kernel_value(k, modes[i].x.data(), o.x.data(), g.n);
        if (std::isfinite(v)) a1 += v * v;
      }
      if (o.r2 < modes[i].r2) {
        const double v = kernel_value(k, o.x.data(), modes[i].x.data(), g.n);
        if (std::isfinite(v)) a2 += v * v;
      }
    }
    s1[i] = meas * a1;
    s2[i] = meas * a2;
  });
  const double b = std::sqrt(*std::max_element(s1.begin(), s1.end())) + std::sqrt(*std::max_element(s2.begin(), s2.end()));
  return b * b;
}

double trilinear_form(const KernelSpec& k, const SpectralField& f, const SpectralField& g, const SpectralField& h) {
  validate(k);
  require_nonnegative(f, "trilinear_form");
  require_nonnegative(g, "trilinear_form");
  require_nonnegative(h, "trilinear_form");
  if (!(f.grid == g.grid) || !(f.grid == h.grid)) throw std::invalid_argument("trilinear_form: grid mismatch");
  const Grid& gr = f.grid;
  const auto modes = band_modes(gr);
  auto coeff = [&](const SpectralField& u, const std::array<int, 3>& m) {
    return u.coeffs[u.flat_index({0, m[0], m[1], m[2]})].real();
  };
  std::vector<double> fv(modes.size()), gv(modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) {
    fv[i] = coeff(f, modes[i].m);
    gv[i] = coeff(g, modes[i].m);
  }
  std::vector<double> part(modes.size(), 0.0);
  parallel_for(modes.size(), [&](std::size_t i) {
    if (fv[i] == 0.0) return;
    double acc = 0.0;
    for (std::size_t j = 0; j < modes.size(); ++j) {
      if (gv[j] == 0.0) continue;
      std::array<int, 3> s{};
      for (int a = 0; a < gr.n; ++a) s[a] = modes[i].m[a] + modes[j].m[a];
      if (!in_lattice_band(s, gr)) continue;
      const double hv = coeff(h, s);
      if (hv == 0.0) continue;
      const double kv = kernel_value(k, modes[i].x.data(), modes[j].x.data(), gr.n);
      if (!std::isfinite(kv)) continue;
      acc += kv * gv[j] * hv;
    }
    part[i] = fv[i] * acc;
  });
  double total = 0.0;
  for (double p : part) total += p;
  return std::pow(gr.dxi(), 2 * gr.n) * total;
}

double continuum_l2(const SpectralField& f) {
  double s = 0.0;
  for (const auto& c : f.coeffs) s += std::norm(c);
  return std::sqrt(std::pow(f.grid.dxi(), f.grid.n) * s);
}

// ---------------------------------------------------------------- first iterate

Preset parse_preset(const std::string& name) {
  if (name == "example1") return Preset::example1;
  if (name == "example2") return Preset::example2;
  if (name == "example3") return Preset::example3;
  throw std::invalid_argument("unknown preset: " + name);
}

std::string preset_name(Preset p) {
  switch (p) {
    case Preset::example1: return "example1";
    case Preset::example2: return "example2";
    case Preset::example3: return "example3";
  }
  return "?";
}

double first_iterate_kernel(Preset p, double s, DeltaSign sign, const double* xi, const double* eta, int n) {
  require_dim(n);
  const double rx = norm(xi, n), re = norm(eta, n);
  const double d = spatial_delta(sign, xi, eta, n);
  switch (p) {
    case Preset::example1: {
      double sum[3];
      for (int i = 0; i < n; ++i) sum[i] = xi[i] + eta[i];
      return std::pow(bracket(norm(sum, n)), s - 1) /
             (std::pow(bracket(rx), s - 1) * std::pow(bracket(re), s - 1) * (1.0 + d));
    }
    case Preset::example2: return std::pow(bracket(rx), -s) + std::pow(bracket(re), -s);
    case Preset::example3:
      return (std::pow(bracket(rx), 0.5 - s) + std::pow(bracket(re), 0.5 - s)) / std::sqrt(1.0 + d);
  }
  return 0.0;
}

double k_pm(Preset p, DeltaSign sign, const double* xi, const double* eta, int n) {
  require_dim(n);
  const double sg = sign == DeltaSign::plus ? 1.0 : -1.0;
  const double pr = norm(xi, n) * norm(eta, n);
  switch (p) {
    case Preset::example1: return sg * pr;
    case Preset::example2: {
      const double d = dot(xi, eta, n);
      const double w = wedge2(xi, eta, n);
      // +|xi||eta| - xi.eta and -|xi||eta| - xi.eta without cancellation
      if (sign == DeltaSign::plus) return d > 0.0 ? w / (pr + d) : pr - d;
      return d < 0.0 ? -w / (pr - d) : -(pr + d);
    }
    case Preset::example3: return std::sqrt(wedge2(xi, eta, n));
  }
  return 0.0;
}

double step3_kernel(Preset p, double s, DeltaSign sign, const double* xi, const double* eta, int n) {
  double sum[3];
  for (int i = 0; i < n; ++i) sum[i] = xi[i] + eta[i];
  const double rs = norm(sum, n);
  const double d = spatial_delta(sign, xi, eta, n);
  const double lead = std::pow(bracket(rs), s) * std::abs(k_pm(p, sign, xi, eta, n)) /
                      (std::pow(bracket(norm(xi, n)), s) * std::pow(bracket(norm(eta, n)), s));
  const double den = rs * (1.0 + d);
  return lead * (den > 1.0 ? 1.0 / den : 1.0);
}

namespace {

// (shift, largest usable c) with a = s - shift, b = 0.
std::pair<double, double> preset_shape(Preset p) {
  switch (p) {
    case Preset::example1: return {1.0, 1.0};
    case Preset::example2: return {0.0, 0.0};
    case Preset::example3: return {0.5, 0.5};
  }
  return {0.0, 0.0};
}

}  // namespace

double first_iterate_threshold(Preset p, int n) {
  const auto [shift, cmax] = preset_shape(p);
  const double cstar = std::min(cmax, 0.25 * (n - 1));
  return 0.5 * n - cstar + shift;
}

bool first_iterate_admits(Preset p, double s, int n) {
  const auto [shift, cmax] = preset_shape(p);
  const double a = s - shift;
  if (a < 0.0) return false;
  if (cmax < 0.25 * (n - 1)) return proposition_region(a, 0.0, cmax, n);
  // c ranges over [0, (n-1)/4): the region is open in c
  return a + 0.25 * (n - 1) > 0.5 * n;
}

// ---------------------------------------------------------------- embeddings

Ensemble parse_ensemble(const std::string& name) {
  if (name == "random-gaussian") return Ensemble::random_gaussian;
  if (name == "cone-concentrated") return Ensemble::cone_concentrated;
  if (name == "counterexample-family") return Ensemble::counterexample_family;
  throw std::invalid_argument("unknown ensemble: " + name);
}

std::string ensemble_name(Ensemble e) {
  switch (e) {
    case Ensemble::random_gaussian: return "random-gaussian";
    case Ensemble::cone_concentrated: return "cone-concentrated";
    case Ensemble::counterexample_family: return "counterexample-family";
  }
  return "?";
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::bounded_consistent: return "bounded-consistent";
    case Verdict::growth_detected: return "growth-detected";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

std::optional<double> embedding_ratio(const EmbeddingSpec& spec, const SpectralField& u, const SpectralField& v) {
  if (u.grid.n != spec.n || v.grid.n != spec.n) throw std::invalid_argument("embedding: dimension mismatch");
  const double nu = ws_norm(u, spec.source_u);
  const double nv = ws_norm(v, spec.source_v);
  if (nu == 0.0 || nv == 0.0) return std::nullopt;
  const SpectralField b = apply_form(spec.form, u, v);
  double top;
  if (spec.target_q > 0.0) {
    const SpectralField w = apply({elliptic(spec.target.s), hyperbolic(spec.target.theta)}, b);
    top = modified_mixed_norm(w, spec.target_q, spec.target_r, ModifiedMode::upper).value;
  } else {
    top = ws_norm(b, spec.target);
  }
  return top / (nu * nv);
}

Verdict decide_verdict(const ScalingFit& fit, double drift) {
  if (!std::isfinite(fit.slope)) return Verdict::inconclusive;
  if (fit.slope > kGrowthSlope && fit.residual < kGrowthResidual) return Verdict::growth_detected;
  if (fit.slope <= kGrowthSlope && drift >= 0.0 && drift <= kDriftLimit) return Verdict::bounded_consistent;
  return Verdict::inconclusive;
}

ProbeReport summarize_probe(const std::vector<double>& scales, const std::vector<MemberRatio>& members,
                            double drift) {
  ProbeReport rep;
  rep.points.resize(scales.size());
  for (std::size_t k = 0; k < scales.size(); ++k) rep.points[k].scale = scales[k];
  for (const auto& m : members) {
    ++rep.members;
    if (!m.ratio) {
      ++rep.excluded;
      continue;
    }
    auto& pt = rep.points.at(m.scale_index);
    if (pt.witness < 0 || *m.ratio > pt.sup_ratio) {
      pt.sup_ratio = *m.ratio;
      pt.witness = m.id;
    }
    if (rep.witness < 0 || *m.ratio > rep.sup_ratio) {
      rep.sup_ratio = *m.ratio;
      rep.witness = m.id;
    }
  }
  rep.refinement_drift = drift;
  std::vector<std::pair<double, double>> pts;
  bool ok = true;
  for (const auto& p : rep.points) {
    if (!(p.sup_ratio > 0.0)) ok = false;
    pts.emplace_back(p.scale, p.sup_ratio);
  }
  if (ok && pts.size() >= 3) {
    rep.fit = scaling_fit(pts);
  } else {
    rep.fit.slope = rep.fit.intercept = rep.fit.residual = std::numeric_limits<double>::quiet_NaN();
  }
  rep.verdict = decide_verdict(rep.fit, drift);
  return rep;
}

Member draw_member(Ensemble e, const ProbeOptions& opt, int n, double scale, int scale_index, int trial) {
  require_dim(n);
  if (e == Ensemble::counterexample_family) throw std::invalid_argument("draw_member: family members are not drawn");
  std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                    static_cast<std::uint32_t>(static_cast<int>(e)), static_cast<std::uint32_t>(scale_index),
                    static_cast<std::uint32_t>(trial)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double alpha = 1.5;  // Pareto tail index
  auto draw = [&](std::vector<Bump>& out) {
    for (int b = 0; b < opt.bumps; ++b) {
      Bump bump;
      if (e == Ensemble::random_gaussian) {
        for (int a = 0; a <= n; ++a) bump.center[a] = std::clamp(0.5 * scale * normal(rng), -scale, scale);
        bump.amplitude = cd(normal(rng), normal(rng));
      } else {
        double dir[3], len = 0.0;
        do {
          len = 0.0;
          for (int a = 0; a < n; ++a) {
            dir[a] = normal(rng);
            len += dir[a] * dir[a];
          }
        } while (len == 0.0);
        len = std::sqrt(len);
        const double rho = std::min(scale, std::pow(1.0 - unit(rng), -1.0 / alpha));
        for (int a = 0; a < n; ++a) bump.center[a + 1] = rho * dir[a] / len;
        const double side = unit(rng) < 0.5 ? -1.0 : 1.0;
        bump.center[0] = side * rho + (2.0 * unit(rng) - 1.0);
        const double mag = std::pow(1.0 - unit(rng), -1.0 / alpha);
        bump.amplitude = std::polar(mag, 2.0 * M_PI * unit(rng));
      }
      out.push_back(bump);
    }
  };
  Member m;
  draw(m.u);
  draw(m.v);
  return m;
}

SpectralField realize(const std::vector<Bump>& bumps, double width, const Grid& g) {
  SpectralField u = zeros(g, FieldKind::spacetime, false);
  const double inv = 1.0 / (2.0 * width * width);
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!in_band(u, i)) continue;
    const FrequencyPoint p = u.point(i);
    cd acc = 0.0;
    for (const auto& b : bumps) {
      double r2 = (p.tau - b.center[0]) * (p.tau - b.center[0]);
      for (int a = 0; a < g.n; ++a) r2 += (p.xi[a] - b.center[a + 1]) * (p.xi[a] - b.center[a + 1]);
      acc += b.amplitude * std::exp(-r2 * inv);
    }
    u.coeffs[i] = acc;
  }
  return u;
}

Grid refined_grid(const Grid& g) {
  return make_grid(g.n, 2 * g.N_t, 2 * g.N_x, 2.0 * g.T_per, 2.0 * g.L_per);
}

std::optional<double> family_ratio(const EmbeddingSpec& spec, double L) {
  if (spec.n != 2) throw std::invalid_argument("counterexample-family: n = 2 required");
  if (spec.form.form != Form::product) throw std::invalid_argument("counterexample-family: plain product required");
  if (!(L >= 4.0)) throw std::invalid_argument("counterexample-family: L >= 4 required");
  const int n = 2;
  auto weight = [](const SpaceIndex& idx, double tau, double x1, double x2) {
    FrequencyPoint p;
    p.n = 2;
    p.tau = tau;
    p.xi = {x1, x2, 0.0};
    return std::pow(symbol_base(Family::elliptic, p), idx.s) * std::pow(symbol_base(Family::hyperbolic, p), idx.theta);
  };

  // A on the integer lattice.
  struct P3 {
    int t, a, b;
  };
  std::vector<P3> A;
  const int Li = static_cast<int>(std::ceil(L));
  for (int e1 = 0; e1 <= Li; ++e1)
    for (int e2 = -Li; e2 <= Li; ++e2)
      for (int lam = e1 - 2; lam <= e1 + 2; ++lam) {
        const double th[3] = {double(lam), double(e1), double(e2)};
        if (in_set_A(L, n, th)) A.push_back({lam, e1, e2});
      }
  double nu2 = 0.0;
  for (const auto& p : A) {
    const double w = weight(spec.source_u, p.t, p.a, p.b);
    nu2 += w * w;
  }

  // B as runs of tau over each spatial point.
  const int x1lo = static_cast<int>(std::ceil(0.5 * L * L)), x1hi = static_cast<int>(std::floor(4.0 * L * L));
  const int x2m = static_cast<int>(std::floor(2.0 * L));
  struct Run {
    int x1, x2, tlo, thi;
  };
  std::vector<Run> B;
  double nv2 = 0.0;
  for (int x1 = x1lo; x1 <= x1hi; ++x1)
    for (int x2 = -x2m; x2 <= x2m; ++x2) {
      const double r = std::hypot(double(x1), double(x2));
      int lo = static_cast<int>(std::floor(r - 8.0)) - 1, hi = static_cast<int>(std::ceil(r + 8.0)) + 1;
      auto inside = [&](int t) {
        const double xi[3] = {double(t), double(x1), double(x2)};
        return in_set_B(L, n, xi);
      };
      while (lo <= hi && !inside(lo)) ++lo;
      while (hi >= lo && !inside(hi)) --hi;
      if (lo > hi) continue;
      B.push_back({x1, x2, lo, hi});
      for (int t = lo; t <= hi; ++t) {
        const double w = weight(spec.source_v, t, x1, x2);
        nv2 += w * w;
      }
    }
  if (nu2 == 0.0 || nv2 == 0.0 || A.empty() || B.empty()) return std::nullopt;

  // Product support: offsets tau - floor(|xi|) stay in a narrow band.
  int a1lo = A[0].a, a1hi = A[0].a, a2lo = A[0].b, a2hi = A[0].b;
  for (const auto& p : A) {
    a1lo = std::min(a1lo, p.a), a1hi = std::max(a1hi, p.a);
    a2lo = std::min(a2lo, p.b), a2hi = std::max(a2hi, p.b);
  }
  const int y1lo = x1lo + a1lo, y2lo = -x2m + a2lo;
  const int n1 = (x1hi + a1hi) - y1lo + 1, n2 = (x2m + a2hi) - y2lo + 1;
  std::vector<int> base(static_cast<std::size_t>(n1) * n2);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j)
      base[static_cast<std::size_t>(i) * n2 + j] = static_cast<int>(std::floor(std::hypot(double(y1lo + i), double(y2lo + j))));
  int dlo = 0, dhi = 0;
  bool first = true;
  for (const auto& p : A)
    for (const auto& r : B) {
      const int b0 = base[static_cast<std::size_t>(r.x1 + p.a - y1lo) * n2 + (r.x2 + p.b - y2lo)];
      const int lo = r.tlo + p.t - b0, hi = r.thi + p.t - b0;
      if (first) dlo = lo, dhi = hi, first = false;
      dlo = std::min(dlo, lo), dhi = std::max(dhi, hi);
    }
  const int nd = dhi - dlo + 1;
  std::vector<std::uint32_t> count(static_cast<std::size_t>(n1) * n2 * nd, 0);
  for (const auto& p : A)
    for (const auto& r : B) {
      const std::size_t cell = static_cast<std::size_t>(r.x1 + p.a - y1lo) * n2 + (r.x2 + p.b - y2lo);
      const int lo = r.tlo + p.t - base[cell] - dlo;
      std::uint32_t* row = count.data() + cell * nd;
      for (int d = lo; d <= lo + (r.thi - r.tlo); ++d) ++row[d];
    }
  double top2 = 0.0;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) {
      const std::size_t cell = static_cast<std::size_t>(i) * n2 + j;
      for (int d = 0; d < nd; ++d) {
        const std::uint32_t c = count[cell * nd + d];
        if (c == 0) continue;
        const double w = weight(spec.target, base[cell] + dlo + d, y1lo + i, y2lo + j);
        top2 += double(c) * double(c) * w * w;
      }
    }
  return std::sqrt(top2) / std::sqrt(nu2 * nv2);
}

ProbeReport probe_embedding(const EmbeddingSpec& spec, Ensemble e, const Grid& g, const ProbeOptions& opt) {
  if (opt.trials < 1) throw std::invalid_argument("probe_embedding: trials >= 1 required");
  if (opt.scales.empty()) throw std::invalid_argument("probe_embedding: no scales");
  const int ns = static_cast<int>(opt.scales.size());

  if (e == Ensemble::counterexample_family) {
    std::vector<MemberRatio> members(ns);
    parallel_for(ns, [&](std::size_t k) {
      members[k] = {static_cast<int>(k), static_cast<int>(k), family_ratio(spec, opt.scales[k])};
    });
    ProbeReport rep = summarize_probe(opt.scales, members, -1.0);
    rep.ensemble = ensemble_name(e);
    return rep;
  }

  if (g.n != spec.n) throw std::invalid_argument("probe_embedding: grid dimension differs from the embedding");
  if (opt.bumps < 1 || !(opt.bump_width > 0.0)) throw std::invalid_argument("probe_embedding: bad bump settings");
  const double kmax = std::min((g.N_x / 2 - 1) * g.dxi(), (g.N_t / 2 - 1) * g.dtau());
  const double smax = *std::max_element(opt.scales.begin(), opt.scales.end());
  if (2.0 * (smax + 1.0) + 4.0 * opt.bump_width > kmax)
    throw std::invalid_argument("probe_embedding: ensemble scales exceed the grid band");
  for (double s : opt.scales)
    if (!(s > 0.0)) throw std::invalid_argument("probe_embedding: scales must be positive");

  const int total = ns * opt.trials;
  std::vector<Member> draws(total);
  for (int k = 0; k < ns; ++k)
    for (int t = 0; t < opt.trials; ++t) draws[k * opt.trials + t] = draw_member(e, opt, g.n, opt.scales[k], k, t);

  auto run = [&](const Grid& grid) {
    std::vector<MemberRatio> out(total);
    parallel_for(total, [&](std::size_t i) {
      const SpectralField u = realize(draws[i].u, opt.bump_width, grid);
      const SpectralField v = realize(draws[i].v, opt.bump_width, grid);
      out[i] = {static_cast<int>(i), static_cast<int>(i) / opt.trials, embedding_ratio(spec, u, v)};
    });
    return out;
  };

  const auto coarse = run(g);
  double drift = -1.0;
  if (opt.refine) {
    const ProbeReport c = summarize_probe(opt.scales, coarse, -1.0);
    const ProbeReport f = summarize_probe(opt.scales, run(refined_grid(g)), -1.0);
    drift = 0.0;
    for (int k = 0; k < ns; ++k) {
      const double a = c.points[k].sup_ratio, b = f.points[k].sup_ratio;
      if (a > 0.0) drift = std::max(drift, std::abs(b - a) / a);
    }
  }
  ProbeReport rep = summarize_probe(opt.scales, coarse, drift);
  rep.ensemble = ensemble_name(e);
  return rep;
}

}  // namespace nflab
