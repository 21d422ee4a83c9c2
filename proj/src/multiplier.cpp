#include "nflab/multiplier.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nflab/kernels.hpp"

namespace nflab {

namespace {

constexpr double kTol = 1e-12;

bool lt(double a, double b) { return a < b - kTol; }
bool le(double a, double b) { return a <= b + kTol; }
bool eq(double a, double b) { return std::abs(a - b) <= kTol; }

bool odd_symbol(const MultiplierSpec& s) { return s.family == Family::riesz; }

}  // namespace

Family parse_family(const std::string& name) {
  if (name == "elliptic" || name == "Lambda") return Family::elliptic;
  if (name == "full" || name == "Lambda+") return Family::full;
  if (name == "hyperbolic" || name == "Lambda-") return Family::hyperbolic;
  if (name == "D") return Family::hom_D;
  if (name == "D+") return Family::hom_Dplus;
  if (name == "D-") return Family::hom_Dminus;
  if (name == "riesz") return Family::riesz;
  if (name == "identity") return Family::identity;
  throw std::invalid_argument("unknown multiplier family: " + name);
}

std::string family_name(Family f) {
  switch (f) {
    case Family::elliptic: return "Lambda";
    case Family::full: return "Lambda+";
    case Family::hyperbolic: return "Lambda-";
    case Family::hom_D: return "D";
    case Family::hom_Dplus: return "D+";
    case Family::hom_Dminus: return "D-";
    case Family::riesz: return "riesz";
    case Family::identity: return "identity";
  }
  return "?";
}

double symbol_base(Family f, const FrequencyPoint& p) {
  const double x = p.xi_norm();
  const double t = std::abs(p.tau);
  switch (f) {
    case Family::elliptic: return std::sqrt(1.0 + x * x);
    case Family::full: return std::sqrt(1.0 + t * t + x * x);
    case Family::hyperbolic: {
      const double l = p.lorentz();
      return std::sqrt(1.0 + l * l / (1.0 + t * t + x * x));
    }
    case Family::hom_D: return x;
    case Family::hom_Dplus: return t + x;
    case Family::hom_Dminus: return std::abs(t - x);
    case Family::riesz:
    case Family::identity: return 1.0;
  }
  return 1.0;
}

cd symbol(const MultiplierSpec& spec, const FrequencyPoint& p, bool* singular) {
  if (spec.family == Family::identity) return 1.0;
  if (spec.family == Family::riesz) {
    if (spec.axis < 0 || spec.axis > p.n) throw std::invalid_argument("riesz: axis out of range");
    const double x = p.xi_norm();
    if (x == 0.0) {
      if (singular) *singular = true;
      return 0.0;
    }
    const double c = spec.axis == 0 ? p.tau : p.xi[spec.axis - 1];
    return cd(0.0, c / x);
  }
  const double b = symbol_base(spec.family, p);
  if (b == 0.0) {
    if (spec.alpha < 0.0) {
      if (singular) *singular = true;
      return 0.0;
    }
    return spec.alpha == 0.0 ? 1.0 : 0.0;
  }
  return std::pow(b, spec.alpha);
}

bool is_real_symbol(const MultiplierSpec& spec) { return spec.family != Family::riesz; }

bool requires_spacetime(const MultiplierSpec& spec) {
  switch (spec.family) {
    case Family::full:
    case Family::hyperbolic:
    case Family::hom_Dplus:
    case Family::hom_Dminus: return true;
    case Family::riesz: return spec.axis == 0;
    default: return false;
  }
}

SpectralField apply(const std::vector<MultiplierSpec>& specs, const SpectralField& u, bool* projected) {
  bool odd = false;
  for (const auto& s : specs) {
    if (requires_spacetime(s) && u.kind != FieldKind::spacetime)
      throw std::invalid_argument("apply: " + family_name(s.family) + " needs a spacetime field");
    odd = odd || odd_symbol(s);
  }
  SpectralField out = u;
  bool flag = false;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (odd && !in_band(out, i)) {
      out.coeffs[i] = 0.0;
      continue;
    }
    const FrequencyPoint p = out.point(i);
    cd m = 1.0;
    bool singular = false;
    for (const auto& s : specs) m *= symbol(s, p, &singular);
    flag = flag || (singular && out.coeffs[i] != 0.0);
    out.coeffs[i] *= m;
  }
  if (projected) *projected = flag;
  return out;
}

SpectralField apply(const MultiplierSpec& spec, const SpectralField& u, bool* projected) {
  return apply(std::vector<MultiplierSpec>{spec}, u, projected);
}

SpectralField time_derivative(const SpectralField& u) {
  if (u.kind != FieldKind::spacetime) throw std::invalid_argument("time_derivative: spacetime field required");
  SpectralField out = u;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!in_band(out, i)) {
      out.coeffs[i] = 0.0;
      continue;
    }
    out.coeffs[i] *= cd(0.0, out.point(i).tau);
  }
  return out;
}

namespace {

double weighted_norm(const SpectralField& u, const std::vector<MultiplierSpec>& specs) {
  std::vector<double> w(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const FrequencyPoint p = u.point(i);
    double m = 1.0;
    for (const auto& s : specs) m *= std::abs(symbol(s, p));
    w[i] = m;
  }
  return std::sqrt(kernels::active().weighted_norm2(u.coeffs.data(), w.data(), u.size()));
}

}  // namespace

double ws_norm(const SpectralField& u, const SpaceIndex& idx) {
  if (u.kind != FieldKind::spacetime) throw std::invalid_argument("ws_norm: spacetime field required");
  return weighted_norm(u, {elliptic(idx.s), hyperbolic(idx.theta)});
}

double sobolev_norm(const SpectralField& f, double s) { return weighted_norm(f, {elliptic(s)}); }

CalNorm cal_norm(const SpectralField& u, const SpectralField* du_dt, const SpaceIndex& idx) {
  if (u.kind != FieldKind::spacetime) throw std::invalid_argument("cal_norm: spacetime field required");
  CalNorm out;
  out.single = weighted_norm(u, {elliptic(idx.s - 1.0), full(1.0), hyperbolic(idx.theta)});
  if (du_dt) out.two_term = ws_norm(u, idx) + ws_norm(*du_dt, {idx.s - 1.0, idx.theta});
  return out;
}

bool is_wave_admissible(double q, double r, int n) {
  if (!(q >= 2.0) || !(r >= 2.0) || std::isinf(r)) return false;
  const double qi = std::isinf(q) ? 0.0 : 1.0 / q;
  return le(2.0 * qi, (n - 1) * (0.5 - 1.0 / r));
}

double strichartz_s(double q, double r, int n) {
  const double qi = std::isinf(q) ? 0.0 : 1.0 / q;
  const double ri = std::isinf(r) ? 0.0 : 1.0 / r;
  return n / 2.0 - n * ri - qi;
}

bool check_thmB(double q, double r, int n, double sigma, double s1, double s2) {
  if (n < 2 || !is_wave_admissible(q, r, n)) return false;
  const double qi = std::isinf(q) ? 0.0 : 1.0 / q;
  const double ri = 1.0 / r;
  const double top = n - 2.0 * n * ri - 4.0 * qi;
  const double s = n / 2.0 - n * ri - qi;
  return lt(0.0, sigma) && lt(sigma, top) && lt(s1, s) && lt(s2, s) &&
         eq(s1 + s2 + sigma, n - 2.0 * n * ri - 2.0 * qi);
}

bool check_thmC(int n, double g, double gp, double gm, double s1, double s2) {
  if (n < 2) return false;
  const double gm0 = -(n - 3) / 4.0;
  const double half = (n - 1) / 2.0;
  const double corner = (n + 1) / 4.0;
  return eq(g + gp + gm, s1 + s2 - half) && le(gm0, gm) && lt(-half, g) && le(s1, gm + half) &&
         le(s2, gm + half) && le(0.5, s1 + s2) && !(eq(s1, corner) && eq(gm, gm0)) &&
         !(eq(s2, corner) && eq(gm, gm0)) && !(eq(s1 + s2, 0.5) && eq(gm, gm0));
}

Rational parse_rational(const std::string& text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw std::invalid_argument("empty rational");
  const auto slash = t.find('/');
  if (slash != std::string::npos) {
    const Rational a = parse_rational(t.substr(0, slash));
    const Rational b = parse_rational(t.substr(slash + 1));
    if (b == Rational(0)) throw std::invalid_argument("zero denominator: " + text);
    return a / b;
  }
  bool neg = false;
  std::size_t i = 0;
  if (t[0] == '+' || t[0] == '-') {
    neg = t[0] == '-';
    ++i;
  }
  long long num = 0, den = 1;
  bool digits = false, dot = false;
  for (; i < t.size(); ++i) {
    const char c = t[i];
    if (c == '.' && !dot) {
      dot = true;
      continue;
    }
    if (c < '0' || c > '9') throw std::invalid_argument("not a rational: " + text);
    digits = true;
    if (num > 100000000000000000LL || den > 100000000000000000LL)
      throw std::invalid_argument("rational too long: " + text);
    num = num * 10 + (c - '0');
    if (dot) den *= 10;
  }
  if (!digits) throw std::invalid_argument("not a rational: " + text);
  return Rational(neg ? -num : num, den);
}

Rational parse_inverse_exponent(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "oo") return Rational(0);
  const Rational q = parse_rational(text);
  if (q <= Rational(0)) throw std::invalid_argument("exponent must be positive: " + text);
  return Rational(1) / q;
}

bool is_wave_admissible_exact(Rational qi, Rational ri, int n) {
  // q >= 2 and r >= 2 with r finite.
  const Rational zero(0), half(1, 2);
  if (qi < zero || qi > half || ri <= zero || ri > half) return false;
  return 2 * qi <= (n - 1) * (Rational(1, 2) - ri);
}

Rational strichartz_s_exact(Rational qi, Rational ri, int n) { return Rational(n, 2) - n * ri - qi; }

bool check_thmB_exact(Rational qi, Rational ri, int n, Rational sigma, Rational s1, Rational s2) {
  if (n < 2 || !is_wave_admissible_exact(qi, ri, n)) return false;
  const Rational top = n - 2 * n * ri - 4 * qi;
  const Rational s = strichartz_s_exact(qi, ri, n);
  return Rational(0) < sigma && sigma < top && s1 < s && s2 < s && s1 + s2 + sigma == n - 2 * n * ri - 2 * qi;
}

bool check_thmC_exact(int n, Rational g, Rational gp, Rational gm, Rational s1, Rational s2) {
  if (n < 2) return false;
  const Rational gm0(-(n - 3), 4);
  const Rational half(n - 1, 2);
  const Rational corner(n + 1, 4);
  return g + gp + gm == s1 + s2 - half && gm >= gm0 && g > -half && s1 <= gm + half && s2 <= gm + half &&
         s1 + s2 >= Rational(1, 2) && !(s1 == corner && gm == gm0) && !(s2 == corner && gm == gm0) &&
         !(s1 + s2 == Rational(1, 2) && gm == gm0);
}

}  // namespace nflab
