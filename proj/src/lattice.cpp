#include "nflab/lattice.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "nflab/fft.hpp"
#include "nflab/kernels.hpp"

namespace nflab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_pow2(int v) { return v >= 2 && (v & (v - 1)) == 0; }

std::vector<int> dims_of(const Grid& g, FieldKind kind) {
  std::vector<int> d;
  if (kind == FieldKind::spacetime) d.push_back(g.N_t);
  for (int a = 0; a < g.n; ++a) d.push_back(g.N_x);
  return d;
}

double field_volume(const Grid& g, FieldKind kind) {
  return kind == FieldKind::spacetime ? g.volume() : g.spatial_volume();
}

std::size_t expected_size(const Grid& g, FieldKind kind) {
  return kind == FieldKind::spacetime ? g.total_size() : g.spatial_size();
}

}  // namespace

std::size_t Grid::spatial_size() const {
  std::size_t s = 1;
  for (int a = 0; a < n; ++a) s *= static_cast<std::size_t>(N_x);
  return s;
}

double Grid::dtau() const { return kTwoPi / T_per; }
double Grid::dxi() const { return kTwoPi / L_per; }
double Grid::spatial_volume() const { return std::pow(L_per, n); }
double Grid::time_at(int j) const { return signed_index(j, N_t) * dt(); }

Grid make_grid(int n, int N_t, int N_x, double T_per, double L_per) {
  if (n < 1 || n > 3) throw std::invalid_argument("make_grid: n must be 1, 2 or 3");
  if (!is_pow2(N_t) || !is_pow2(N_x))
    throw std::invalid_argument("make_grid: sizes must be even powers of two");
  if (!(T_per > 0.0) || !(L_per > 0.0) || !std::isfinite(T_per) || !std::isfinite(L_per))
    throw std::invalid_argument("make_grid: periods must be positive");
  return Grid{n, N_t, N_x, T_per, L_per};
}

double FrequencyPoint::xi_norm() const {
  double s = 0.0;
  for (int a = 0; a < n; ++a) s += xi[a] * xi[a];
  return std::sqrt(s);
}

double FrequencyPoint::norm() const {
  const double x = xi_norm();
  return std::sqrt(tau * tau + x * x);
}

double FrequencyPoint::lorentz() const {
  const double x = xi_norm();
  const double t = std::abs(tau);
  return (x - t) * (x + t);
}

FrequencyPoint FrequencyPoint::operator+(const FrequencyPoint& o) const {
  FrequencyPoint r{tau + o.tau, {}, n};
  for (int a = 0; a < 3; ++a) r.xi[a] = xi[a] + o.xi[a];
  return r;
}

FrequencyPoint FrequencyPoint::operator-(const FrequencyPoint& o) const { return *this + (-o); }

FrequencyPoint FrequencyPoint::operator-() const {
  return FrequencyPoint{-tau, {-xi[0], -xi[1], -xi[2]}, n};
}

double minkowski(const FrequencyPoint& a, const FrequencyPoint& b) {
  double s = -a.tau * b.tau;
  for (int k = 0; k < a.n; ++k) s += a.xi[k] * b.xi[k];
  return s;
}

std::array<int, 4> SpectralField::lattice_index(std::size_t flat) const {
  std::array<int, 4> idx{0, 0, 0, 0};
  const std::size_t S = grid.spatial_size();
  std::size_t s = flat;
  if (kind == FieldKind::spacetime) {
    idx[0] = signed_index(static_cast<int>(flat / S), grid.N_t);
    s = flat % S;
  }
  for (int a = grid.n; a >= 1; --a) {
    idx[a] = signed_index(static_cast<int>(s % grid.N_x), grid.N_x);
    s /= grid.N_x;
  }
  return idx;
}

std::size_t SpectralField::flat_index(const std::array<int, 4>& k) const {
  std::size_t s = 0;
  for (int a = 1; a <= grid.n; ++a) s = s * grid.N_x + wrap_index(k[a], grid.N_x);
  if (kind == FieldKind::spacetime)
    s += static_cast<std::size_t>(wrap_index(k[0], grid.N_t)) * grid.spatial_size();
  return s;
}

FrequencyPoint SpectralField::point(std::size_t flat) const {
  const auto k = lattice_index(flat);
  FrequencyPoint p;
  p.n = grid.n;
  p.tau = kind == FieldKind::spacetime ? k[0] * grid.dtau() : 0.0;
  for (int a = 0; a < grid.n; ++a) p.xi[a] = k[a + 1] * grid.dxi();
  return p;
}

SpectralField zeros(const Grid& g, FieldKind kind, bool real_flag) {
  return SpectralField{g, kind, std::vector<cd>(expected_size(g, kind)), real_flag};
}

PhysicalField sample(const Grid& g, FieldKind kind,
                     const std::function<cd(double, const std::array<double, 3>&)>& fn) {
  PhysicalField u{g, kind, std::vector<cd>(expected_size(g, kind))};
  const std::size_t S = g.spatial_size();
  const int nt = kind == FieldKind::spacetime ? g.N_t : 1;
  for (int j = 0; j < nt; ++j) {
    const double t = kind == FieldKind::spacetime ? g.time_at(j) : 0.0;
    for (std::size_t s = 0; s < S; ++s) {
      std::array<double, 3> x{0.0, 0.0, 0.0};
      std::size_t rem = s;
      for (int a = g.n - 1; a >= 0; --a) {
        x[a] = static_cast<double>(rem % g.N_x) * g.dx();
        rem /= g.N_x;
      }
      u.values[static_cast<std::size_t>(j) * S + s] = fn(t, x);
    }
  }
  return u;
}

SpectralField transform(const PhysicalField& u) {
  if (u.values.size() != expected_size(u.grid, u.kind))
    throw std::invalid_argument("transform: shape does not match grid");
  SpectralField out{u.grid, u.kind, u.values, false};
  fft::transform_nd(out.coeffs, dims_of(u.grid, u.kind), -1);
  const double scale = std::sqrt(field_volume(u.grid, u.kind)) / static_cast<double>(out.size());
  for (auto& c : out.coeffs) c *= scale;
  bool real = true;
  for (const auto& v : u.values)
    if (v.imag() != 0.0) {
      real = false;
      break;
    }
  out.real_flag = real;
  return out;
}

PhysicalField inverse_transform(const SpectralField& u) {
  if (u.coeffs.size() != expected_size(u.grid, u.kind))
    throw std::invalid_argument("inverse_transform: shape does not match grid");
  PhysicalField out{u.grid, u.kind, u.coeffs};
  fft::transform_nd(out.values, dims_of(u.grid, u.kind), +1);
  const double scale = 1.0 / std::sqrt(field_volume(u.grid, u.kind));
  for (auto& v : out.values) v *= scale;
  return out;
}

bool in_band(const SpectralField& u, std::size_t flat) {
  const auto k = u.lattice_index(flat);
  if (u.kind == FieldKind::spacetime && k[0] == -u.grid.N_t / 2) return false;
  for (int a = 1; a <= u.grid.n; ++a)
    if (k[a] == -u.grid.N_x / 2) return false;
  return true;
}

void project_band(SpectralField& u) {
  for (std::size_t i = 0; i < u.size(); ++i)
    if (!in_band(u, i)) u.coeffs[i] = 0.0;
}

double hermitian_defect(const SpectralField& u) {
  double worst = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!in_band(u, i)) continue;
    auto k = u.lattice_index(i);
    for (auto& v : k) v = -v;
    const std::size_t j = u.flat_index(k);
    worst = std::max(worst, std::abs(u.coeffs[j] - std::conj(u.coeffs[i])));
  }
  return worst;
}

double l2_norm(const SpectralField& u) {
  const std::vector<double> ones(u.size(), 1.0);
  return std::sqrt(kernels::active().weighted_norm2(u.coeffs.data(), ones.data(), u.size()));
}

namespace {

double lp_combine(const std::vector<double>& vals, double p, double weight) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : vals) m = std::max(m, v);
    return m;
  }
  double s = 0.0;
  for (double v : vals) s += std::pow(v, p);
  return std::pow(s * weight, 1.0 / p);
}

}  // namespace

double mixed_norm(const PhysicalField& u, double q, double r) {
  if (!(q >= 1.0) || !(r >= 1.0)) throw std::invalid_argument("mixed_norm: exponents must be >= 1");
  const Grid& g = u.grid;
  const std::size_t S = g.spatial_size();
  const double cell_x = std::pow(g.dx(), g.n);
  const int nt = u.kind == FieldKind::spacetime ? g.N_t : 1;
  std::vector<double> mags(S);
  std::vector<double> slice_norms(nt);
  for (int j = 0; j < nt; ++j) {
    for (std::size_t s = 0; s < S; ++s) mags[s] = std::abs(u.values[static_cast<std::size_t>(j) * S + s]);
    slice_norms[j] = lp_combine(mags, r, cell_x);
  }
  if (u.kind == FieldKind::spatial) return slice_norms[0];
  return lp_combine(slice_norms, q, g.dt());
}

double mixed_norm(const SpectralField& u, double q, double r) {
  if (u.kind != FieldKind::spacetime) throw std::invalid_argument("mixed_norm: spacetime field required");
  return mixed_norm(inverse_transform(u), q, r);
}

TimeSeries to_time_series(const SpectralField& u) {
  if (u.kind != FieldKind::spacetime) throw std::invalid_argument("to_time_series: spacetime field required");
  TimeSeries ts{u.grid, u.coeffs};
  fft::transform_slow_axis(ts.data, u.grid.N_t, u.grid.spatial_size(), +1);
  const double scale = 1.0 / std::sqrt(u.grid.T_per);
  for (auto& c : ts.data) c *= scale;
  return ts;
}

SpectralField from_time_series(const TimeSeries& ts, bool real_flag) {
  SpectralField u{ts.grid, FieldKind::spacetime, ts.data, real_flag};
  fft::transform_slow_axis(u.coeffs, ts.grid.N_t, ts.grid.spatial_size(), -1);
  const double scale = std::sqrt(ts.grid.T_per) / ts.grid.N_t;
  for (auto& c : u.coeffs) c *= scale;
  return u;
}

SpectralField time_slice(const TimeSeries& ts, int j, bool real_flag) {
  const std::size_t S = ts.grid.spatial_size();
  SpectralField f{ts.grid, FieldKind::spatial, std::vector<cd>(S), real_flag};
  std::copy_n(ts.data.begin() + static_cast<std::ptrdiff_t>(j * S), S, f.coeffs.begin());
  return f;
}

double cutoff_bump(double t, double width) {
  const double d = std::abs(t);
  if (d <= 0.5 * width) return 1.0;
  if (d >= width) return 0.0;
  const double x = (width - d) / (0.5 * width);
  const double a = std::exp(-1.0 / x);
  const double b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

SpectralField time_cutoff(const SpectralField& u, double width) {
  if (u.kind != FieldKind::spacetime) throw std::invalid_argument("time_cutoff: spacetime field required");
  if (!(width > 0.0) || !(width < u.grid.T_per))
    throw std::invalid_argument("time_cutoff: width must lie in (0, T_per)");
  TimeSeries ts = to_time_series(u);
  const std::size_t S = u.grid.spatial_size();
  for (int j = 0; j < u.grid.N_t; ++j) {
    const double phi = cutoff_bump(u.grid.time_at(j), width);
    cd* row = ts.data.data() + static_cast<std::size_t>(j) * S;
    for (std::size_t s = 0; s < S; ++s) row[s] *= phi;
  }
  return from_time_series(ts, u.real_flag);
}

std::vector<std::size_t> occupied_modes(const SpectralField& u, double tol) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (std::abs(u.coeffs[i]) > tol) out.push_back(i);
  return out;
}

// ---------------------------------------------------------------------------
// Binary container

namespace {

constexpr char kMagic[5] = {'N', 'F', 'L', 'B', '1'};

template <typename T>
void put(std::ostream& os, T v) {
  if constexpr (std::endian::native == std::endian::big) {
    char* p = reinterpret_cast<char*>(&v);
    std::reverse(p, p + sizeof(T));
  }
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("read_field: truncated stream");
  if constexpr (std::endian::native == std::endian::big) {
    char* p = reinterpret_cast<char*>(&v);
    std::reverse(p, p + sizeof(T));
  }
  return v;
}

}  // namespace

void write_field(std::ostream& os, const SpectralField& u) {
  os.write(kMagic, sizeof(kMagic));
  put<std::int32_t>(os, u.grid.n);
  put<std::int32_t>(os, u.kind == FieldKind::spacetime ? 0 : 1);
  put<std::int32_t>(os, u.grid.N_t);
  put<std::int32_t>(os, u.grid.N_x);
  put<double>(os, u.grid.T_per);
  put<double>(os, u.grid.L_per);
  for (const auto& c : u.coeffs) {
    put<double>(os, c.real());
    put<double>(os, c.imag());
  }
}

SpectralField read_field(std::istream& is) {
  char magic[5];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("read_field: bad magic");
  const int n = get<std::int32_t>(is);
  const int kind = get<std::int32_t>(is);
  const int nt = get<std::int32_t>(is);
  const int nx = get<std::int32_t>(is);
  const double tp = get<double>(is);
  const double lp = get<double>(is);
  if (kind != 0 && kind != 1) throw std::runtime_error("read_field: bad kind");
  SpectralField u = zeros(make_grid(n, nt, nx, tp, lp),
                          kind == 0 ? FieldKind::spacetime : FieldKind::spatial, false);
  for (auto& c : u.coeffs) {
    const double re = get<double>(is);
    const double im = get<double>(is);
    c = cd(re, im);
  }
  double scale = 0.0;
  for (const auto& c : u.coeffs) scale = std::max(scale, std::abs(c));
  u.real_flag = hermitian_defect(u) <= 1e-12 * std::max(scale, 1.0);
  return u;
}

void save_field(const std::string& path, const SpectralField& u) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("save_field: cannot open " + path);
  write_field(os, u);
}

SpectralField load_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("load_field: cannot open " + path);
  return read_field(is);
}

}  // namespace nflab
