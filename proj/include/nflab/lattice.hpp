#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace nflab {

using cd = std::complex<double>;

struct Grid {
  int n = 1;
  int N_t = 2;
  int N_x = 2;
  double T_per = 1.0;
  double L_per = 1.0;

  std::size_t spatial_size() const;
  std::size_t total_size() const { return static_cast<std::size_t>(N_t) * spatial_size(); }
  double dt() const { return T_per / N_t; }
  double dx() const { return L_per / N_x; }
  double dtau() const;
  double dxi() const;
  double spatial_volume() const;
  double volume() const { return T_per * spatial_volume(); }
  // Sample times live on [-T/2, T/2): index j maps to j*dt or (j - N_t)*dt.
  double time_at(int j) const;

  bool operator==(const Grid&) const = default;
};

Grid make_grid(int n, int N_t, int N_x, double T_per, double L_per);

// FFT-native ordering: index i < N/2 is frequency i, otherwise i - N.
inline int signed_index(int i, int N) { return i < N / 2 ? i : i - N; }
inline int wrap_index(int k, int N) { return k >= 0 ? k : k + N; }

struct FrequencyPoint {
  double tau = 0.0;
  std::array<double, 3> xi{0.0, 0.0, 0.0};
  int n = 1;

  double xi_norm() const;
  double norm() const;  // Euclidean |Xi| on R^{1+n}
  // <Xi,Xi> with signature (-,+,...,+)
  double lorentz() const;
  FrequencyPoint operator+(const FrequencyPoint& o) const;
  FrequencyPoint operator-(const FrequencyPoint& o) const;
  FrequencyPoint operator-() const;
};

// <Xi,Theta> = -tau*lambda + xi.eta
double minkowski(const FrequencyPoint& a, const FrequencyPoint& b);

enum class FieldKind { spacetime, spatial };

struct SpectralField {
  Grid grid;
  FieldKind kind = FieldKind::spacetime;
  std::vector<cd> coeffs;
  bool real_flag = false;

  std::size_t size() const { return coeffs.size(); }
  // Signed lattice indices (k_t, m_1, m_2, m_3); k_t = 0 for spatial fields.
  std::array<int, 4> lattice_index(std::size_t flat) const;
  std::size_t flat_index(const std::array<int, 4>& signed_idx) const;
  FrequencyPoint point(std::size_t flat) const;
};

SpectralField zeros(const Grid& g, FieldKind kind, bool real_flag = true);

struct PhysicalField {
  Grid grid;
  FieldKind kind = FieldKind::spacetime;
  std::vector<cd> values;
};

PhysicalField sample(const Grid& g, FieldKind kind,
                     const std::function<cd(double, const std::array<double, 3>&)>& fn);

SpectralField transform(const PhysicalField& u);
PhysicalField inverse_transform(const SpectralField& u);

// max |c(-Xi) - conj c(Xi)| over pairs that both lie strictly inside the band.
double hermitian_defect(const SpectralField& u);
// True when no index sits on a Nyquist plane.
bool in_band(const SpectralField& u, std::size_t flat);
void project_band(SpectralField& u);

double l2_norm(const SpectralField& u);
double mixed_norm(const PhysicalField& u, double q, double r);
double mixed_norm(const SpectralField& u, double q, double r);

// Time samples with spatial coefficients: data[j * spatial_size + s].
struct TimeSeries {
  Grid grid;
  std::vector<cd> data;
};
TimeSeries to_time_series(const SpectralField& u);
SpectralField from_time_series(const TimeSeries& ts, bool real_flag);
SpectralField time_slice(const TimeSeries& ts, int j, bool real_flag);

// Smooth bump: 1 on |t| <= width/2, 0 on |t| >= width.
double cutoff_bump(double t, double width);
SpectralField time_cutoff(const SpectralField& u, double width);

enum class ModifiedMode { upper, lower, ascent };

struct ModifiedNormResult {
  double value = 0.0;
  bool converged = true;
  int iterations = 0;
};

ModifiedNormResult modified_mixed_norm(const SpectralField& u, double q, double r,
                                       ModifiedMode mode);

std::vector<std::size_t> occupied_modes(const SpectralField& u, double tol = 0.0);

void write_field(std::ostream& os, const SpectralField& u);
SpectralField read_field(std::istream& is);
void save_field(const std::string& path, const SpectralField& u);
SpectralField load_field(const std::string& path);

}  // namespace nflab
