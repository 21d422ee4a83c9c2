#include "nflab/nullform.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "nflab/fft.hpp"
#include "nflab/kernels.hpp"
#include "nflab/multiplier.hpp"
#include "nflab/parallel.hpp"

namespace nflab {

namespace {

constexpr double kSnap = 1e-12;

void require_same_grid(const SpectralField& u, const SpectralField& v, const char* who) {
  if (!(u.grid == v.grid) || u.kind != v.kind) throw std::invalid_argument(std::string(who) + ": grid mismatch");
}

double field_volume(const SpectralField& u) {
  return u.kind == FieldKind::spacetime ? u.grid.volume() : u.grid.spatial_volume();
}

std::vector<int> axis_sizes(const SpectralField& u) {
  std::vector<int> d;
  if (u.kind == FieldKind::spacetime) d.push_back(u.grid.N_t);
  for (int a = 0; a < u.grid.n; ++a) d.push_back(u.grid.N_x);
  return d;
}

// Band index -> position in the 3/2-padded array (npos when outside the band).
struct Padding {
  std::vector<int> dims;
  std::vector<std::size_t> map;
  std::size_t total = 1;
};

constexpr std::size_t npos = static_cast<std::size_t>(-1);

Padding make_padding(const SpectralField& u) {
  Padding p;
  const std::vector<int> d = axis_sizes(u);
  for (int n : d) {
    p.dims.push_back(3 * n / 2);
    p.total *= static_cast<std::size_t>(3 * n / 2);
  }
  p.map.assign(u.size(), npos);
  const bool st = u.kind == FieldKind::spacetime;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!in_band(u, i)) continue;
    const auto k = u.lattice_index(i);
    std::size_t pos = 0;
    std::size_t ax = 0;
    if (st) pos = static_cast<std::size_t>(wrap_index(k[0], p.dims[ax++]));
    for (int a = 1; a <= u.grid.n; ++a, ++ax)
      pos = pos * p.dims[ax] + static_cast<std::size_t>(wrap_index(k[a], p.dims[ax]));
    p.map[i] = pos;
  }
  return p;
}

std::vector<cd> to_padded_physical(const SpectralField& u, const Padding& p) {
  std::vector<cd> buf(p.total);
  for (std::size_t i = 0; i < u.size(); ++i)
    if (p.map[i] != npos) buf[p.map[i]] = u.coeffs[i];
  fft::transform_nd(buf, p.dims, +1);
  return buf;
}

// Multiplies a field by i xi_a (a = 1..n); out-of-band modes are zeroed.
SpectralField spatial_derivative(const SpectralField& u, int a) {
  SpectralField out = u;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!in_band(out, i)) {
      out.coeffs[i] = 0.0;
      continue;
    }
    out.coeffs[i] *= cd(0.0, out.point(i).xi[a - 1]);
  }
  return out;
}

SpectralField add(SpectralField a, const SpectralField& b, double s = 1.0) {
  for (std::size_t i = 0; i < a.size(); ++i) a.coeffs[i] += s * b.coeffs[i];
  return a;
}

double snap(double base, double scale) { return base <= kSnap * scale ? 0.0 : base; }

bool inside(int k, int N) { return k > -N / 2 && k < N / 2; }

template <typename Kernel>
SpectralField double_sum(const SpectralField& u, const SpectralField& v, Kernel&& kernel) {
  SpectralField out = zeros(u.grid, u.kind, u.real_flag && v.real_flag);
  std::vector<std::size_t> mu, mv;
  for (std::size_t i : occupied_modes(u))
    if (in_band(u, i)) mu.push_back(i);
  for (std::size_t i : occupied_modes(v))
    if (in_band(v, i)) mv.push_back(i);
  if (mu.empty() || mv.empty()) return out;

  const bool st = u.kind == FieldKind::spacetime;
  const int n = u.grid.n;
  std::vector<std::array<int, 4>> ku(mu.size()), kv(mv.size());
  std::vector<FrequencyPoint> pu(mu.size()), pv(mv.size());
  for (std::size_t a = 0; a < mu.size(); ++a) {
    ku[a] = u.lattice_index(mu[a]);
    pu[a] = u.point(mu[a]);
  }
  for (std::size_t b = 0; b < mv.size(); ++b) {
    kv[b] = v.lattice_index(mv[b]);
    pv[b] = v.point(mv[b]);
  }
  const double norm = 1.0 / std::sqrt(field_volume(u));
  // Each worker owns a contiguous block of output indices; every output sums
  // its pairs in the same global order regardless of the partition.
  const std::size_t parts = std::max<std::size_t>(1, worker_count());
  const std::size_t block = (out.size() + parts - 1) / parts;
  parallel_for(parts, [&](std::size_t w) {
    const std::size_t lo = w * block, hi = std::min(out.size(), lo + block);
    for (std::size_t a = 0; a < mu.size(); ++a) {
      for (std::size_t b = 0; b < mv.size(); ++b) {
        std::array<int, 4> k{0, 0, 0, 0};
        bool ok = true;
        if (st) {
          k[0] = ku[a][0] + kv[b][0];
          ok = inside(k[0], u.grid.N_t);
        }
        for (int c = 1; c <= n && ok; ++c) {
          k[c] = ku[a][c] + kv[b][c];
          ok = inside(k[c], u.grid.N_x);
        }
        if (!ok) continue;
        const std::size_t o = out.flat_index(k);
        if (o < lo || o >= hi) continue;
        out.coeffs[o] += kernel(pu[a], pv[b]) * u.coeffs[mu[a]] * v.coeffs[mv[b]];
      }
    }
  });
  for (auto& c : out.coeffs) c *= norm;
  return out;
}

void check_alpha(const BilinearFormSpec& s) {
  if (!(s.alpha > 0.0)) throw std::invalid_argument(form_name(s.form) + ": alpha must be positive");
}

}  // namespace

Form parse_form(const std::string& name) {
  if (name == "Q0") return Form::Q0;
  if (name == "Qij") return Form::Qij;
  if (name == "Qtilde") return Form::Qtilde;
  if (name == "Ralpha") return Form::Ralpha;
  if (name == "Splus") return Form::Splus;
  if (name == "Sminus") return Form::Sminus;
  if (name == "product") return Form::product;
  throw std::invalid_argument("unknown bilinear form: " + name);
}

std::string form_name(Form f) {
  switch (f) {
    case Form::Q0: return "Q0";
    case Form::Qij: return "Qij";
    case Form::Qtilde: return "Qtilde";
    case Form::Ralpha: return "Ralpha";
    case Form::Splus: return "Splus";
    case Form::Sminus: return "Sminus";
    case Form::product: return "product";
  }
  return "?";
}

SpectralField dealiased_product(const SpectralField& u, const SpectralField& v) {
  require_same_grid(u, v, "dealiased_product");
  const Padding p = make_padding(u);
  std::vector<cd> a = to_padded_physical(u, p);
  const std::vector<cd> b = to_padded_physical(v, p);
  kernels::active().multiply(a.data(), b.data(), a.data(), a.size());
  fft::transform_nd(a, p.dims, -1);
  SpectralField out = zeros(u.grid, u.kind, u.real_flag && v.real_flag);
  const double scale = 1.0 / (std::sqrt(field_volume(u)) * static_cast<double>(p.total));
  for (std::size_t i = 0; i < out.size(); ++i)
    if (p.map[i] != npos) out.coeffs[i] = a[p.map[i]] * scale;
  return out;
}

double delta_plus(const FrequencyPoint& p, const FrequencyPoint& q) {
  const FrequencyPoint s = p + q;
  return p.xi_norm() + q.xi_norm() - s.xi_norm();
}

double delta_minus(const FrequencyPoint& p, const FrequencyPoint& q) {
  const FrequencyPoint s = p + q;
  return s.xi_norm() - std::abs(p.xi_norm() - q.xi_norm());
}

double r_kernel(const FrequencyPoint& p, const FrequencyPoint& q) {
  return p.tau * q.tau >= 0.0 ? delta_plus(p, q) : delta_minus(p, q);
}

cd kernel_value(const BilinearFormSpec& spec, const FrequencyPoint& p, const FrequencyPoint& q) {
  switch (spec.form) {
    case Form::product: return 1.0;
    case Form::Q0: return minkowski(p, q);
    case Form::Qij: return p.xi[spec.i - 1] * q.xi[spec.j - 1] - p.xi[spec.j - 1] * q.xi[spec.i - 1];
    case Form::Qtilde: {
      const double a = p.xi_norm(), b = q.xi_norm();
      cd s = 0.0;
      for (int j = 0; j < p.n; ++j) {
        const double left = a > 0.0 ? -p.tau * p.xi[j] / (a * a) : 0.0;
        const double right = b > 0.0 ? q.tau * q.xi[j] / (b * b) : 0.0;
        s += cd(0.0, p.xi[j] + q.xi[j]) * (left + right);
      }
      return s;
    }
    case Form::Ralpha:
    case Form::Splus:
    case Form::Sminus: {
      check_alpha(spec);
      const double base = spec.form == Form::Ralpha  ? r_kernel(p, q)
                          : spec.form == Form::Splus ? delta_plus(p, q)
                                                     : delta_minus(p, q);
      return std::pow(snap(base, p.xi_norm() + q.xi_norm()), spec.alpha);
    }
  }
  return 0.0;
}

SpectralField apply_form(const BilinearFormSpec& spec, const SpectralField& u, const SpectralField& v,
                         bool* projected) {
  require_same_grid(u, v, "apply_form");
  const int n = u.grid.n;
  if (projected) *projected = false;
  switch (spec.form) {
    case Form::product: return dealiased_product(u, v);
    case Form::Q0: {
      if (u.kind != FieldKind::spacetime) throw std::invalid_argument("Q0: spacetime fields required");
      SpectralField out = dealiased_product(time_derivative(u), time_derivative(v));
      for (auto& c : out.coeffs) c = -c;
      for (int a = 1; a <= n; ++a)
        out = add(out, dealiased_product(spatial_derivative(u, a), spatial_derivative(v, a)));
      return out;
    }
    case Form::Qij: {
      if (spec.i < 1 || spec.j > n || spec.i >= spec.j) throw std::invalid_argument("Qij: need 1 <= i < j <= n");
      SpectralField a = dealiased_product(spatial_derivative(u, spec.i), spatial_derivative(v, spec.j));
      return add(a, dealiased_product(spatial_derivative(u, spec.j), spatial_derivative(v, spec.i)), -1.0);
    }
    case Form::Qtilde: {
      if (u.kind != FieldKind::spacetime) throw std::invalid_argument("Qtilde: spacetime fields required");
      SpectralField out = zeros(u.grid, u.kind, u.real_flag && v.real_flag);
      bool flag = false;
      for (int j = 1; j <= n; ++j) {
        bool f1 = false, f2 = false;
        const SpectralField ru = apply({riesz(0), riesz(j)}, u, &f1);
        const SpectralField rv = apply({riesz(0), riesz(j)}, v, &f2);
        flag = flag || f1 || f2;
        SpectralField inner = add(dealiased_product(ru, v), dealiased_product(u, rv), -1.0);
        out = add(out, spatial_derivative(inner, j));
      }
      if (projected) *projected = flag;
      return out;
    }
    case Form::Ralpha: {
      check_alpha(spec);
      if (u.kind != FieldKind::spacetime) throw std::invalid_argument("Ralpha: spacetime fields required");
      return double_sum(u, v, [&](const FrequencyPoint& p, const FrequencyPoint& q) {
        return kernel_value(spec, p, q).real();
      });
    }
    case Form::Splus:
    case Form::Sminus: {
      check_alpha(spec);
      if (u.kind != FieldKind::spatial) throw std::invalid_argument("S+/S-: spatial fields required");
      return double_sum(u, v, [&](const FrequencyPoint& p, const FrequencyPoint& q) {
        return kernel_value(spec, p, q).real();
      });
    }
  }
  return u;
}

SpectralField apply_slicewise(const BilinearFormSpec& spec, const SpectralField& u, const SpectralField& v) {
  require_same_grid(u, v, "apply_slicewise");
  if (u.kind != FieldKind::spacetime) throw std::invalid_argument("apply_slicewise: spacetime fields required");
  if (spec.form != Form::Splus && spec.form != Form::Sminus)
    throw std::invalid_argument("apply_slicewise: S+ or S- required");
  const Grid& g = u.grid;
  const int Nt = g.N_t, Mt = 3 * Nt / 2;
  const std::size_t S = g.spatial_size();

  auto padded_series = [&](const SpectralField& w) {
    std::vector<cd> buf(static_cast<std::size_t>(Mt) * S);
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (!in_band(w, i)) continue;
      const int k = w.lattice_index(i)[0];
      buf[static_cast<std::size_t>(wrap_index(k, Mt)) * S + i % S] = w.coeffs[i];
    }
    fft::transform_slow_axis(buf, Mt, S, +1);
    const double sc = 1.0 / std::sqrt(g.T_per);
    for (auto& c : buf) c *= sc;
    return buf;
  };
  const std::vector<cd> us = padded_series(u), vs = padded_series(v);
  std::vector<cd> ws(us.size());
  parallel_for(static_cast<std::size_t>(Mt), [&](std::size_t j) {
    SpectralField a{g, FieldKind::spatial, std::vector<cd>(us.begin() + j * S, us.begin() + (j + 1) * S), false};
    SpectralField b{g, FieldKind::spatial, std::vector<cd>(vs.begin() + j * S, vs.begin() + (j + 1) * S), false};
    SpectralField c = double_sum(a, b, [&](const FrequencyPoint& p, const FrequencyPoint& q) {
      return kernel_value(spec, p, q).real();
    });
    std::copy(c.coeffs.begin(), c.coeffs.end(), ws.begin() + j * S);
  });
  fft::transform_slow_axis(ws, Mt, S, -1);
  SpectralField out = zeros(g, FieldKind::spacetime, u.real_flag && v.real_flag);
  const double sc = std::sqrt(g.T_per) / Mt;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!in_band(out, i)) continue;
    const int k = out.lattice_index(i)[0];
    out.coeffs[i] = ws[static_cast<std::size_t>(wrap_index(k, Mt)) * S + i % S] * sc;
  }
  return out;
}

SpectralField dminus_half_wave_product(double alpha, int sign, const SpectralField& f, const SpectralField& g,
                                       double t) {
  require_same_grid(f, g, "dminus_half_wave_product");
  if (f.kind != FieldKind::spatial) throw std::invalid_argument("dminus_half_wave_product: spatial fields required");
  if (!(alpha > 0.0)) throw std::invalid_argument("dminus_half_wave_product: alpha must be positive");
  auto shells = [](const SpectralField& w) {
    std::map<long, std::vector<std::size_t>> out;
    for (std::size_t i : occupied_modes(w)) {
      if (!in_band(w, i)) continue;
      const auto k = w.lattice_index(i);
      long m2 = 0;
      for (int a = 1; a <= w.grid.n; ++a) m2 += static_cast<long>(k[a]) * k[a];
      out[m2].push_back(i);
    }
    return out;
  };
  const auto sf = shells(f), sg = shells(g);
  const double dxi = f.grid.dxi();
  SpectralField out = zeros(f.grid, FieldKind::spatial, false);
  std::vector<double> xi(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) xi[i] = out.point(i).xi_norm();
  for (const auto& [ma, ia] : sf) {
    SpectralField fa = zeros(f.grid, FieldKind::spatial, false);
    for (std::size_t i : ia) fa.coeffs[i] = f.coeffs[i];
    const double ra = dxi * std::sqrt(static_cast<double>(ma));
    for (const auto& [mb, ib] : sg) {
      SpectralField gb = zeros(f.grid, FieldKind::spatial, false);
      for (std::size_t i : ib) gb.coeffs[i] = g.coeffs[i];
      const double rb = dxi * std::sqrt(static_cast<double>(mb));
      const double tau = ra + sign * rb;
      const cd phase = std::exp(cd(0.0, t * tau));
      const SpectralField prod = dealiased_product(fa, gb);
      for (std::size_t i = 0; i < out.size(); ++i) {
        if (prod.coeffs[i] == 0.0) continue;
        const double base = snap(std::abs(std::abs(tau) - xi[i]), ra + rb);
        out.coeffs[i] += phase * std::pow(base, alpha) * prod.coeffs[i];
      }
    }
  }
  return out;
}

}  // namespace nflab
