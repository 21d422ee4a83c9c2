#include "nflab/iterate.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace nflab {

SystemKind parse_system(const std::string& name) {
  if (name == "WM") return SystemKind::WM;
  if (name == "YM" || name == "YMmodel") return SystemKind::YM;
  if (name == "MKG" || name == "MKGmodel") return SystemKind::MKG;
  if (name == "WMM") return SystemKind::WMM;
  if (name == "scalarQ0" || name == "Q0") return SystemKind::scalarQ0;
  throw std::invalid_argument("unknown system: " + name);
}

std::string system_name(SystemKind k) {
  switch (k) {
    case SystemKind::WM: return "WM";
    case SystemKind::YM: return "YM";
    case SystemKind::MKG: return "MKG";
    case SystemKind::WMM: return "WMM";
    case SystemKind::scalarQ0: return "scalarQ0";
  }
  return "?";
}

int SystemSpec::components() const {
  switch (kind) {
    case SystemKind::MKG: return N1 + N2;
    case SystemKind::scalarQ0: return 1;
    default: return N;
  }
}

SystemSpec make_system(SystemKind kind, int N, int N1, int N2, int n) {
  SystemSpec s;
  s.kind = kind;
  s.N = kind == SystemKind::scalarQ0 ? 1 : N;
  s.N1 = N1;
  s.N2 = N2;
  if (kind == SystemKind::WM)
    for (int I = 0; I < N; ++I)
      for (int J = 0; J < N; ++J)
        for (int K = 0; K < N; ++K) s.gamma.push_back({I, J, K, 1.0, {}});
  std::size_t cells = 0;
  if (kind == SystemKind::WMM || kind == SystemKind::YM) cells = static_cast<std::size_t>(N) * N * N;
  if (kind == SystemKind::MKG) cells = static_cast<std::size_t>(N1) * N2 * N2 + static_cast<std::size_t>(N2) * N1 * N2;
  s.table.assign(cells, 1.0);
  if (kind == SystemKind::YM || kind == SystemKind::MKG) s.pair_weights.assign(static_cast<std::size_t>(n * (n - 1) / 2), 1.0);
  return s;
}

void validate(const SystemSpec& s, int n) {
  if (s.N < 1 || s.N1 < 1 || s.N2 < 1) throw std::invalid_argument("component counts must be positive");
  for (const auto& t : s.gamma) {
    if (t.I < 0 || t.I >= s.N || t.J < 0 || t.J >= s.N || t.K < 0 || t.K >= s.N)
      throw std::invalid_argument("Gamma index out of range");
    if (!t.powers.empty() && static_cast<int>(t.powers.size()) != s.N)
      throw std::invalid_argument("Gamma monomial needs one power per component");
    int deg = 0;
    for (int p : t.powers) {
      if (p < 0) throw std::invalid_argument("negative power in Gamma");
      deg += p;
    }
    if (deg > 4) throw std::invalid_argument("Gamma monomial degree above 4");
  }
  std::size_t cells = 0;
  if (s.kind == SystemKind::WMM || s.kind == SystemKind::YM) cells = static_cast<std::size_t>(s.N) * s.N * s.N;
  if (s.kind == SystemKind::MKG)
    cells = static_cast<std::size_t>(s.N1) * s.N2 * s.N2 + static_cast<std::size_t>(s.N2) * s.N1 * s.N2;
  if (s.table.size() != cells) throw std::invalid_argument("coefficient table has the wrong shape");
  if ((s.kind == SystemKind::YM || s.kind == SystemKind::MKG) &&
      s.pair_weights.size() != static_cast<std::size_t>(n * (n - 1) / 2))
    throw std::invalid_argument("pair weights need one entry per i < j");
}

namespace {

void axpy(SpectralField& y, double a, const SpectralField& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y.coeffs[i] += a * x.coeffs[i];
}

SpectralField zero_like(const SpectralField& u) { return zeros(u.grid, u.kind, u.real_flag); }

// sum_{i<j} w_ij Q_ij(a, b)
SpectralField q_combo(const std::vector<double>& w, const SpectralField& a, const SpectralField& b) {
  SpectralField out = zero_like(a);
  const int n = a.grid.n;
  std::size_t p = 0;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j, ++p)
      if (w[p] != 0.0) axpy(out, w[p], apply_form({Form::Qij, 1.0, i, j}, a, b));
  out.real_flag = a.real_flag && b.real_flag;
  return out;
}

// Q^I(a, b) = sum_{J,K} c[I][J][K] q_combo(a^J, b^K) for I < nI.
Components q_system(const double* c, int nI, const std::vector<double>& w, const Components& a,
                    const Components& b) {
  Components out(static_cast<std::size_t>(nI), zero_like(a[0]));
  const int nJ = static_cast<int>(a.size()), nK = static_cast<int>(b.size());
  for (int J = 0; J < nJ; ++J)
    for (int K = 0; K < nK; ++K) {
      bool any = false;
      for (int I = 0; I < nI; ++I) any = any || c[(I * nJ + J) * nK + K] != 0.0;
      if (!any) continue;
      const SpectralField q = q_combo(w, a[static_cast<std::size_t>(J)], b[static_cast<std::size_t>(K)]);
      for (int I = 0; I < nI; ++I) axpy(out[static_cast<std::size_t>(I)], c[(I * nJ + J) * nK + K], q);
    }
  return out;
}

Components apply_each(const MultiplierSpec& m, const Components& u, bool* projected) {
  Components out;
  for (const auto& c : u) out.push_back(apply(m, c, projected));
  return out;
}

SpectralField monomial(const Components& u, const std::vector<int>& powers) {
  SpectralField acc = zero_like(u[0]);
  bool started = false;
  for (std::size_t L = 0; L < powers.size(); ++L)
    for (int p = 0; p < powers[L]; ++p) {
      acc = started ? dealiased_product(acc, u[L]) : u[L];
      started = true;
    }
  return acc;
}

}  // namespace

Components apply_nonlinearity(const SystemSpec& sys, const Components& u, bool* projected) {
  if (static_cast<int>(u.size()) != sys.components())
    throw std::invalid_argument("component mismatch: expected " + std::to_string(sys.components()) + ", got " +
                                std::to_string(u.size()));
  for (const auto& c : u)
    if (c.kind != FieldKind::spacetime || !(c.grid == u[0].grid))
      throw std::invalid_argument("components must be spacetime fields on one grid");
  validate(sys, u[0].grid.n);
  bool real = true;
  for (const auto& c : u) real = real && c.real_flag;
  Components out(u.size(), zero_like(u[0]));

  switch (sys.kind) {
    case SystemKind::scalarQ0: out[0] = apply_form({Form::Q0}, u[0], u[0]); break;
    case SystemKind::WM: {
      std::vector<std::vector<SpectralField>> q0(u.size(), std::vector<SpectralField>(u.size()));
      std::vector<std::vector<bool>> have(u.size(), std::vector<bool>(u.size(), false));
      for (const auto& t : sys.gamma) {
        if (t.coeff == 0.0) continue;
        const std::size_t J = static_cast<std::size_t>(t.J), K = static_cast<std::size_t>(t.K);
        if (!have[J][K]) {
          q0[J][K] = apply_form({Form::Q0}, u[J], u[K]);
          have[J][K] = true;
        }
        bool constant = true;
        for (int p : t.powers) constant = constant && p == 0;
        SpectralField term = constant ? q0[J][K] : dealiased_product(monomial(u, t.powers), q0[J][K]);
        axpy(out[static_cast<std::size_t>(t.I)], -t.coeff, term);
      }
      break;
    }
    case SystemKind::WMM: {
      const int N = sys.N;
      for (int J = 0; J < N; ++J)
        for (int K = 0; K < N; ++K) {
          bool any = false;
          for (int I = 0; I < N; ++I) any = any || sys.table[static_cast<std::size_t>((I * N + J) * N + K)] != 0.0;
          if (!any) continue;
          const SpectralField q =
              apply_form({Form::Qtilde}, u[static_cast<std::size_t>(J)], u[static_cast<std::size_t>(K)], projected);
          for (int I = 0; I < N; ++I)
            axpy(out[static_cast<std::size_t>(I)], sys.table[static_cast<std::size_t>((I * N + J) * N + K)], q);
        }
      break;
    }
    case SystemKind::YM: {
      const MultiplierSpec dinv = hom_D(-1.0);
      Components quu = q_system(sys.table.data(), sys.N, sys.pair_weights, u, u);
      Components du = apply_each(dinv, u, projected);
      Components qdu = q_system(sys.table.data(), sys.N, sys.pair_weights, du, u);
      for (std::size_t I = 0; I < u.size(); ++I) {
        out[I] = apply(dinv, quu[I], projected);
        axpy(out[I], 1.0, qdu[I]);
      }
      break;
    }
    case SystemKind::MKG: {
      const MultiplierSpec dinv = hom_D(-1.0);
      const Components uu(u.begin(), u.begin() + sys.N1), vv(u.begin() + sys.N1, u.end());
      const double* c1 = sys.table.data();
      const double* c2 = c1 + static_cast<std::size_t>(sys.N1) * sys.N2 * sys.N2;
      Components a = q_system(c1, sys.N1, sys.pair_weights, vv, vv);
      Components b = q_system(c2, sys.N2, sys.pair_weights, apply_each(dinv, uu, projected), vv);
      for (int I = 0; I < sys.N1; ++I) out[static_cast<std::size_t>(I)] = apply(dinv, a[static_cast<std::size_t>(I)], projected);
      for (int I = 0; I < sys.N2; ++I) out[static_cast<std::size_t>(sys.N1 + I)] = b[static_cast<std::size_t>(I)];
      break;
    }
  }
  for (auto& c : out) c.real_flag = real;
  return out;
}

namespace {

// H^s norms of all components combined, at every sample time.
std::vector<double> hs_profile(const Components& u, double s) {
  const Grid& g = u[0].grid;
  std::vector<double> acc(static_cast<std::size_t>(g.N_t), 0.0);
  for (const auto& c : u) {
    const TimeSeries ts = to_time_series(c);
    for (int j = 0; j < g.N_t; ++j) {
      const double v = sobolev_norm(time_slice(ts, j, false), s);
      acc[static_cast<std::size_t>(j)] += v * v;
    }
  }
  for (auto& a : acc) a = std::sqrt(a);
  return acc;
}

double window_sup(const std::vector<double>& prof, const Grid& g, double width) {
  double m = 0.0;
  for (int j = 0; j < g.N_t; ++j)
    if (std::abs(g.time_at(j)) <= 0.5 * width + 1e-12) m = std::max(m, prof[static_cast<std::size_t>(j)]);
  return m;
}

}  // namespace

IterationTrace picard_run(const SystemSpec& sys, const std::vector<CauchyData>& data, int iterations,
                          const SpaceIndex& idx, double cutoff_width) {
  if (iterations < 1) throw std::invalid_argument("picard_run: at least one iteration");
  if (static_cast<int>(data.size()) != sys.components()) throw std::invalid_argument("component mismatch in data");
  for (const auto& d : data) validate(d);
  const Grid& g = data[0].f.grid;
  if (!(cutoff_width > 0.0) || !(cutoff_width < 0.5 * g.T_per))
    throw std::invalid_argument("cutoff width must lie in (0, T_per/2)");
  validate(sys, g.n);

  Components u0;
  for (const auto& d : data) u0.push_back(homogeneous_spacetime(d));
  IterationTrace tr;
  Components u = u0;
  double prev_d = 0.0;
  for (int j = 0; j < iterations; ++j) {
    IterateRow row;
    row.j = j;
    row.hs_samples = hs_profile(u, idx.s);
    row.sup_Hs = window_sup(row.hs_samples, g, cutoff_width);
    Components cut;
    double ws2 = 0.0;
    for (const auto& c : u) {
      cut.push_back(time_cutoff(c, cutoff_width));
      const double w = ws_norm(cut.back(), idx);
      ws2 += w * w;
    }
    row.ws = std::sqrt(ws2);
    if (!std::isfinite(row.sup_Hs) || row.sup_Hs > 1e8) {
      row.flag = "diverged";
      tr.diverged_at = j;
      tr.rows.push_back(row);
      break;
    }
    bool proj = false;
    Components nl = apply_nonlinearity(sys, cut, &proj);
    tr.projected = tr.projected || proj;
    Components next;
    for (std::size_t c = 0; c < u.size(); ++c) {
      SpectralField v = duhamel(nl[c]);
      axpy(v, 1.0, u0[c]);
      v.real_flag = u0[c].real_flag && nl[c].real_flag;
      next.push_back(std::move(v));
    }
    Components diff = next;
    for (std::size_t c = 0; c < u.size(); ++c) axpy(diff[c], -1.0, u[c]);
    row.d = window_sup(hs_profile(diff, idx.s), g, cutoff_width);
    row.ratio = j == 0 || prev_d == 0.0 ? 0.0 : row.d / prev_d;
    if (!std::isfinite(row.d) || row.d > 1e8) {
      row.flag = "diverged";
      tr.diverged_at = j;
    } else {
      row.flag = j > 0 && row.ratio >= 1.0 ? "stalled" : "converged";
    }
    prev_d = row.d;
    tr.rows.push_back(row);
    u = std::move(next);
    if (tr.diverged_at >= 0) break;
  }
  tr.final_iterate = u;
  return tr;
}

void write_trace_csv(std::ostream& os, const IterationTrace& tr) {
  os << "j,sup_Hs,d_j,ratio_j,flag\n";
  os.precision(12);
  for (const auto& r : tr.rows) os << r.j << ',' << r.sup_Hs << ',' << r.d << ',' << r.ratio << ',' << r.flag << '\n';
}

SpectralField q0_closed_form(const CauchyData& data, double t) {
  validate(data);
  PhysicalField f = inverse_transform(data.f), g = inverse_transform(data.g);
  PhysicalField w0 = f, w1 = g;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    const double e = std::exp(-f.values[i].real());
    w0.values[i] = e;
    w1.values[i] = -g.values[i].real() * e;
  }
  SpectralField a = transform(w0), b = transform(w1);
  a.real_flag = b.real_flag = true;
  PhysicalField w = inverse_transform(homogeneous({a, b}, t));
  for (auto& v : w.values) {
    if (!(v.real() > 0.5)) throw std::domain_error("q0_closed_form: w drops to 1/2; data too large");
    v = -std::log(v.real());
  }
  SpectralField u = transform(w);
  u.real_flag = true;
  return u;
}

}  // namespace nflab
