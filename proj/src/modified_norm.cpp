// Duality-defined mixed norm: sup of sum |u^| v^ over v^ >= 0 with ||v||_{q',r'} = 1.
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nflab/kernels.hpp"
#include "nflab/lattice.hpp"

namespace nflab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSmoothCap = 64.0;

double conjugate(double p) {
  if (std::isinf(p)) return 1.0;
  if (p == 1.0) return kInf;
  return p / (p - 1.0);
}

SpectralField as_field(const Grid& g, const std::vector<double>& w) {
  SpectralField f = zeros(g, FieldKind::spacetime, false);
  for (std::size_t i = 0; i < w.size(); ++i) f.coeffs[i] = w[i];
  return f;
}

double pairing(const std::vector<double>& a, const std::vector<double>& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * w[i];
  return s;
}

std::vector<std::vector<double>> witness_dictionary(const Grid& g) {
  static const double widths[] = {0.5, 1.0, 2.0, 4.0, 1e9};
  const SpectralField shape = zeros(g, FieldKind::spacetime, false);
  std::vector<std::vector<double>> dict;
  for (double st : widths)
    for (double sx : widths) {
      std::vector<double> w(shape.size());
      for (std::size_t i = 0; i < w.size(); ++i) {
        const auto k = shape.lattice_index(i);
        double m2 = 0.0;
        for (int a = 1; a <= g.n; ++a) m2 += static_cast<double>(k[a]) * k[a];
        w[i] = std::exp(-0.5 * (static_cast<double>(k[0]) * k[0]) / (st * st) - 0.5 * m2 / (sx * sx));
      }
      dict.push_back(std::move(w));
    }
  return dict;
}

class Ascent {
 public:
  Ascent(const Grid& g, const std::vector<double>& a, double qc, double rc)
      : g_(g), a_(a), qc_(qc), rc_(rc), P_(std::min(qc, kSmoothCap)), R_(std::min(rc, kSmoothCap)) {}

  double true_norm(const std::vector<double>& w) const {
    return mixed_norm(inverse_transform(as_field(g_, w)), qc_, rc_);
  }

  // Smoothed norm and its gradient with respect to the real weights.
  double smooth_norm(const std::vector<double>& w, std::vector<double>* grad) const {
    PhysicalField W = inverse_transform(as_field(g_, w));
    const std::size_t S = g_.spatial_size();
    const double cell_x = std::pow(g_.dx(), g_.n);
    std::vector<double> gt(g_.N_t, 0.0);
    for (int j = 0; j < g_.N_t; ++j) {
      double s = 0.0;
      for (std::size_t x = 0; x < S; ++x) s += std::pow(std::abs(W.values[j * S + x]), R_);
      gt[j] = s * cell_x;
    }
    double np = 0.0;
    for (int j = 0; j < g_.N_t; ++j) np += g_.dt() * std::pow(gt[j], P_ / R_);
    const double N = std::pow(np, 1.0 / P_);
    if (grad) {
      for (int j = 0; j < g_.N_t; ++j) {
        const double tf = gt[j] > 0.0 ? std::pow(N, 1.0 - P_) * std::pow(gt[j], P_ / R_ - 1.0) : 0.0;
        for (std::size_t x = 0; x < S; ++x) {
          cd& v = W.values[j * S + x];
          const double m = std::max(std::abs(v), 1e-300);
          v *= tf * std::pow(m, R_ - 2.0);
        }
      }
      const SpectralField G = transform(W);
      grad->resize(w.size());
      for (std::size_t i = 0; i < w.size(); ++i) (*grad)[i] = G.coeffs[i].real();
    }
    return N;
  }

  // Stops on a failed line search, a gap below 1e-3 to the upper bound, or less
  // than 1e-4 relative gain over 50 steps.
  ModifiedNormResult run(std::vector<double> w, double start_value, int max_iter, double upper) const {
    ModifiedNormResult res{start_value, false, 0};
    const bool smoothed = P_ != qc_ || R_ != rc_;
    double N = smooth_norm(w, nullptr);
    if (!(N > 0.0)) return res;
    for (auto& v : w) v /= N;
    double A = pairing(a_, w);
    double f = A;
    std::vector<double> gN, gf(w.size()), trial(w.size());
    double step = -1.0;
    int quiet = 0;
    std::vector<double> history;
    for (int it = 0; it < max_iter; ++it) {
      res.iterations = it + 1;
      N = smooth_norm(w, &gN);
      double gnorm = 0.0, wnorm = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) {
        gf[i] = a_[i] / N - A / (N * N) * gN[i];
        gnorm += gf[i] * gf[i];
        wnorm += w[i] * w[i];
      }
      gnorm = std::sqrt(gnorm);
      wnorm = std::sqrt(wnorm);
      if (gnorm <= 1e-300) {
        res.converged = true;
        break;
      }
      if (step < 0.0) step = 0.1 * wnorm / gnorm;
      bool accepted = false;
      while (step * gnorm > 1e-13 * wnorm) {
        for (std::size_t i = 0; i < w.size(); ++i) trial[i] = std::max(0.0, w[i] + step * gf[i]);
        const double Nt = smooth_norm(trial, nullptr);
        if (Nt > 0.0) {
          const double ft = pairing(a_, trial) / Nt;
          if (ft > f * (1.0 + 1e-15)) {
            const double gain = (ft - f) / f;
            for (std::size_t i = 0; i < w.size(); ++i) w[i] = trial[i] / Nt;
            A = pairing(a_, w);
            f = ft;
            step *= 1.5;
            accepted = true;
            quiet = gain < 1e-8 ? quiet + 1 : 0;
            break;
          }
        }
        step *= 0.5;
      }
      if (accepted) {
        const double fv = smoothed ? pairing(a_, w) / true_norm(w) : f;
        res.value = std::max(res.value, fv);
      }
      history.push_back(f);
      const bool stalled = history.size() > 50 && f - history[history.size() - 51] < 1e-4 * f;
      const bool closed = res.value >= upper * (1.0 - 1e-3);
      if (!accepted || quiet >= 3 || stalled || closed) {
        res.converged = true;
        break;
      }
    }
    return res;
  }

 private:
  const Grid& g_;
  const std::vector<double>& a_;
  double qc_, rc_, P_, R_;
};

}  // namespace

ModifiedNormResult modified_mixed_norm(const SpectralField& u, double q, double r, ModifiedMode mode) {
  if (u.kind != FieldKind::spacetime)
    throw std::invalid_argument("modified_mixed_norm: spacetime field required");
  if (!(q >= 1.0) || !(r >= 1.0)) throw std::invalid_argument("modified_mixed_norm: exponents must be >= 1");
  const Grid& g = u.grid;
  std::vector<double> a(u.size());
  kernels::active().magnitude(u.coeffs.data(), a.data(), a.size());

  const double upper = mixed_norm(inverse_transform(as_field(g, a)), q, r);
  if (mode == ModifiedMode::upper) return {upper, true, 0};

  double a_norm = 0.0;
  for (double v : a) a_norm += v * v;
  a_norm = std::sqrt(a_norm);
  if (a_norm == 0.0) return {0.0, true, 0};

  const double qc = conjugate(q), rc = conjugate(r);
  Ascent solver(g, a, qc, rc);

  // On L^2 the supremum is attained at v^ = |u^| and equals ||u^||.
  const bool hilbert = q == 2.0 && r == 2.0;
  double lower = hilbert ? a_norm : 0.0;
  std::vector<double> best_w;
  if (!hilbert) {
    for (auto& w : witness_dictionary(g)) {
      const double v = pairing(a, w) / solver.true_norm(w);
      if (v > lower) {
        lower = v;
        best_w = std::move(w);
      }
    }
  }
  const auto clamp = [upper](double v) {
    return (v > upper && v <= upper * (1.0 + 1e-10)) ? upper : v;
  };
  if (mode == ModifiedMode::lower) return {clamp(lower), true, 0};
  if (hilbert) return {clamp(lower), true, 0};

  // Two starts: the best dictionary witness and |u^| itself.
  ModifiedNormResult r1 = solver.run(best_w, lower, 400, upper);
  const double self_val = pairing(a, a) / solver.true_norm(a);
  ModifiedNormResult r2 = solver.run(a, std::max(lower, self_val), 400, upper);
  ModifiedNormResult out = r1.value >= r2.value ? r1 : r2;
  out.value = clamp(std::max({lower, r1.value, r2.value}));
  out.converged = r1.converged && r2.converged;
  out.iterations = r1.iterations + r2.iterations;
  return out;
}

}  // namespace nflab
