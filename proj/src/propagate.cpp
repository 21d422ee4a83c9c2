#include "nflab/propagate.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "nflab/parallel.hpp"

namespace nflab {

void validate(const CauchyData& d) {
  if (d.f.kind != FieldKind::spatial || d.g.kind != FieldKind::spatial)
    throw std::invalid_argument("Cauchy data must be spatial fields");
  if (!(d.f.grid == d.g.grid)) throw std::invalid_argument("Cauchy data on different grids");
}

SpectralField half_wave(int sign, double t, const SpectralField& f) {
  if (f.kind != FieldKind::spatial) throw std::invalid_argument("half_wave: spatial field required");
  SpectralField out = f;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double ph = sign * t * f.point(i).xi_norm();
    out.coeffs[i] *= cd(std::cos(ph), std::sin(ph));
  }
  out.real_flag = f.real_flag && t == 0.0;
  return out;
}

SpectralField homogeneous(const CauchyData& d, double t) {
  validate(d);
  SpectralField out = d.f;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double w = d.f.point(i).xi_norm();
    const double s = w == 0.0 ? t : std::sin(w * t) / w;
    out.coeffs[i] = std::cos(w * t) * d.f.coeffs[i] + s * d.g.coeffs[i];
  }
  out.real_flag = d.f.real_flag && d.g.real_flag;
  return out;
}

SpectralField homogeneous_velocity(const CauchyData& d, double t) {
  validate(d);
  SpectralField out = d.f;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double w = d.f.point(i).xi_norm();
    out.coeffs[i] = -w * std::sin(w * t) * d.f.coeffs[i] + std::cos(w * t) * d.g.coeffs[i];
  }
  out.real_flag = d.f.real_flag && d.g.real_flag;
  return out;
}

SpectralField homogeneous_spacetime(const CauchyData& d) {
  validate(d);
  const Grid& g = d.f.grid;
  const std::size_t S = g.spatial_size();
  TimeSeries ts{g, std::vector<cd>(g.total_size())};
  for (int j = 0; j < g.N_t; ++j) {
    const SpectralField s = homogeneous(d, g.time_at(j));
    std::copy(s.coeffs.begin(), s.coeffs.end(), ts.data.begin() + static_cast<std::ptrdiff_t>(j * S));
  }
  return from_time_series(ts, d.f.real_flag && d.g.real_flag);
}

namespace {

// Running trapezoid sums along one time direction for a single mode.
// idx lists rows in order of increasing |t|, starting at t = 0.
void duhamel_sweep(const std::vector<cd>& F, std::vector<cd>& U, const std::vector<int>& idx,
                   const std::vector<double>& times, std::size_t S, std::size_t s, double w) {
  cd C = 0.0, Sn = 0.0, M0 = 0.0, M1 = 0.0;
  U[static_cast<std::size_t>(idx[0]) * S + s] = 0.0;
  for (std::size_t k = 1; k < idx.size(); ++k) {
    const int a = idx[k - 1], b = idx[k];
    const double ta = times[static_cast<std::size_t>(a)], tb = times[static_cast<std::size_t>(b)];
    const double h = 0.5 * (tb - ta);
    const cd fa = F[static_cast<std::size_t>(a) * S + s], fb = F[static_cast<std::size_t>(b) * S + s];
    cd u;
    if (w == 0.0) {
      M0 += h * (fa + fb);
      M1 += h * (ta * fa + tb * fb);
      u = -(tb * M0 - M1);
    } else {
      C += h * (std::cos(w * ta) * fa + std::cos(w * tb) * fb);
      Sn += h * (std::sin(w * ta) * fa + std::sin(w * tb) * fb);
      u = -(std::sin(w * tb) * C - std::cos(w * tb) * Sn) / w;
    }
    U[static_cast<std::size_t>(b) * S + s] = u;
  }
}

}  // namespace

SpectralField duhamel(const SpectralField& F) {
  if (F.kind != FieldKind::spacetime) throw std::invalid_argument("duhamel: spacetime field required");
  const Grid& g = F.grid;
  const std::size_t S = g.spatial_size();
  const TimeSeries ts = to_time_series(F);
  TimeSeries out{g, std::vector<cd>(ts.data.size())};
  std::vector<double> times(static_cast<std::size_t>(g.N_t));
  for (int j = 0; j < g.N_t; ++j) times[static_cast<std::size_t>(j)] = g.time_at(j);
  std::vector<int> fwd, bwd;
  for (int j = 0; j < g.N_t / 2; ++j) fwd.push_back(j);
  bwd.push_back(0);
  for (int j = g.N_t - 1; j >= g.N_t / 2; --j) bwd.push_back(j);
  const SpectralField probe = zeros(g, FieldKind::spatial);
  parallel_for(S, [&](std::size_t s) {
    const double w = probe.point(s).xi_norm();
    duhamel_sweep(ts.data, out.data, fwd, times, S, s, w);
    duhamel_sweep(ts.data, out.data, bwd, times, S, s, w);
  });
  return from_time_series(out, F.real_flag);
}

std::pair<SpectralField, SpectralField> pm_decompose(const SpectralField& u) {
  if (u.kind != FieldKind::spacetime) throw std::invalid_argument("pm_decompose: spacetime field required");
  SpectralField plus = u, minus = u;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u.lattice_index(i)[0] >= 0)
      minus.coeffs[i] = 0.0;
    else
      plus.coeffs[i] = 0.0;
  }
  plus.real_flag = minus.real_flag = false;
  return {plus, minus};
}

Step1Report step1_bound_check(const SpectralField& F, double t, double width) {
  const SpectralField Fc = time_cutoff(F, width);
  const Grid& g = F.grid;
  int jbest = 0;
  for (int j = 1; j < g.N_t; ++j)
    if (std::abs(g.time_at(j) - t) < std::abs(g.time_at(jbest) - t)) jbest = j;
  Step1Report rep;
  rep.t = g.time_at(jbest);
  const SpectralField u = time_slice(to_time_series(duhamel(Fc)), jbest, false);
  const std::size_t S = g.spatial_size();
  const double norm = 1.0 / std::sqrt(g.T_per);
  std::vector<double> plain(S, 0.0), weighted(S, 0.0);
  double top = 0.0;
  for (std::size_t s = 0; s < S; ++s) {
    const double w = u.point(s).xi_norm();
    for (int k = 0; k < g.N_t; ++k) {
      const std::size_t i = static_cast<std::size_t>(k) * S + s;
      const double a = std::abs(Fc.coeffs[i]) * norm;
      plain[s] += a;
      weighted[s] += a / (1.0 + std::abs(std::abs(Fc.point(i).tau) - w));
    }
    top = std::max(top, plain[s]);
  }
  // Modes at round-off level relative to the strongest one are not counted.
  for (std::size_t s = 0; s < S; ++s) {
    if (plain[s] <= 1e-13 * top) continue;
    ++rep.modes;
    const double w = u.point(s).xi_norm();
    const double lhs = std::abs(u.coeffs[s]);
    if (rep.t != 0.0) {
      const double ratio = lhs / (rep.t * rep.t * plain[s]);
      rep.max_ratio_t2 = std::max(rep.max_ratio_t2, ratio);
      if (ratio > 1.0) ++rep.violations_t2;
    } else if (lhs > 0.0) {
      ++rep.violations_t2;
    }
    if (w > 0.0) rep.fitted_Ct = std::max(rep.fitted_Ct, lhs * w / weighted[s]);
  }
  return rep;
}

}  // namespace nflab
