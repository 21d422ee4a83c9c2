#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nflab/lattice.hpp"
#include "nflab/multiplier.hpp"
#include "nflab/nullform.hpp"

namespace nflab {

// ---------------------------------------------------------------- fitting

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS of the log residuals
};

// Least squares on (log scale, log value). Needs >= 3 points, positive entries.
ScalingFit scaling_fit(const std::vector<std::pair<double, double>>& points);

// ---------------------------------------------------------------- kernels

enum class DeltaSign { plus, minus };
enum class KernelVariant { homogeneous, inhomogeneous };

// K = w(xi)^{-a} w(eta)^{-b} D(xi,eta)^{-c} with
//   homogeneous:   w = |.|,     D = Delta_{sign}
//   inhomogeneous: w = 1 + |.|, D = 1 + Delta_{sign}
struct KernelSpec {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  DeltaSign sign = DeltaSign::plus;
  KernelVariant variant = KernelVariant::inhomogeneous;
};

void validate(const KernelSpec& k);
DeltaSign parse_delta_sign(const std::string& name);
KernelVariant parse_kernel_variant(const std::string& name);
std::string delta_sign_name(DeltaSign s);
std::string kernel_variant_name(KernelVariant v);

// Delta_+ and Delta_- for spatial vectors in R^n.
double spatial_delta(DeltaSign sign, const double* xi, const double* eta, int n);
// Same from |xi|, |eta| and the angle between them.
double spatial_delta_polar(DeltaSign sign, double r_xi, double r_eta, double angle);

// +infinity at singular points of the homogeneous variant.
double kernel_value(const KernelSpec& k, const double* xi, const double* eta, int n);

// a + b + c > n/2 and c < (n-1)/4.
bool proposition_region(double a, double b, double c, int n);

struct SchurParts {
  double s1 = 0.0;        // sup over |xi| of int_{|eta| <= |xi|} K^2 d eta
  double s2 = 0.0;        // sup over |eta| of int_{|xi| < |eta|} K^2 d xi
  double bound = 0.0;     // (sqrt(s1) + sqrt(s2))^2
  int angular_cells = 0;  // pi / h rounded up to a power of two
  int radii = 0;          // sampled radii 2^{-6} 2^{k/4} <= R
};

// Polar quadrature: Gauss-Legendre in the radius, lower Darboux sum in the
// angle, so the value is nondecreasing in R and under halving of h.
SchurParts schur_parts(const KernelSpec& k, int n, double R, double h);
double schur_bound(const KernelSpec& k, int n, double R, double h);

// Lattice analogue on the band of a spatial grid, with measure dxi^n:
// trilinear_form <= sqrt(schur_bound_lattice) ||f|| ||g|| ||h|| holds exactly.
// Singular lattice pairs of the homogeneous variant are left out of both sums.
double schur_bound_lattice(const KernelSpec& k, const Grid& g);

// dxi^{2n} sum_{xi,eta} K(xi,eta) f(xi) g(eta) h(xi+eta) over the band of
// spatial fields with nonnegative real coefficients.
double trilinear_form(const KernelSpec& k, const SpectralField& f, const SpectralField& g,
                      const SpectralField& h);
// (dxi^n sum |f|^2)^{1/2}
double continuum_l2(const SpectralField& f);

// ---------------------------------------------------------------- first iterate

enum class Preset { example1, example2, example3 };
Preset parse_preset(const std::string& name);
std::string preset_name(Preset p);

// Kernels of the three model equations with <.> = 1 + |.|:
//   example1: <xi+eta>^{s-1} / (<xi>^{s-1} <eta>^{s-1} (1 + Delta))
//   example2: <xi>^{-s} + <eta>^{-s}
//   example3: (<xi>^{1/2-s} + <eta>^{1/2-s}) (1 + Delta)^{-1/2}
double first_iterate_kernel(Preset p, double s, DeltaSign sign, const double* xi, const double* eta, int n);

// k_+- of each bilinear form on the cone:
//   example1: +-|xi||eta|,  example2: +-|xi||eta| - xi.eta,  example3: |xi ^ eta|
double k_pm(Preset p, DeltaSign sign, const double* xi, const double* eta, int n);

// <xi+eta>^s |k_+-| / (<xi>^s <eta>^s) min(1, 1 / (|xi+eta| (1 + Delta)))
double step3_kernel(Preset p, double s, DeltaSign sign, const double* xi, const double* eta, int n);

// Smallest s for which the model kernel fits the proposition region:
//   example1: max(n/2, (n+5)/4), example2: n/2, example3: max(n/2, (n+3)/4)
double first_iterate_threshold(Preset p, int n);
// Exists c in the admissible range with (a, b, c) = (s - shift, 0, c) in the region.
bool first_iterate_admits(Preset p, double s, int n);

// ---------------------------------------------------------------- embeddings

struct EmbeddingSpec {
  BilinearFormSpec form;   // Form::product for the plain product
  SpaceIndex source_u;     // H^{a,alpha}
  SpaceIndex source_v;     // H^{b,beta}
  SpaceIndex target;       // H^{-c,-gamma}, stored with its signs
  int n = 2;
  // Mixed target |||Lambda^s Lambda_-^theta B|||_{q,r} (upper) when q > 0.
  double target_q = 0.0;
  double target_r = 0.0;
};

enum class Ensemble { random_gaussian, cone_concentrated, counterexample_family };
Ensemble parse_ensemble(const std::string& name);
std::string ensemble_name(Ensemble e);

enum class Verdict { bounded_consistent, growth_detected, inconclusive };
std::string verdict_name(Verdict v);

inline constexpr double kGrowthSlope = 0.1;
inline constexpr double kGrowthResidual = 0.05;
inline constexpr double kDriftLimit = 0.2;

struct ProbeOptions {
  int trials = 8;                            // members per scale
  std::uint64_t seed = 1;
  std::vector<double> scales{1.5, 3.0, 6.0};  // envelope widths, radial caps or L values
  int bumps = 3;                             // Gaussian bumps per member
  double bump_width = 1.0;
  bool refine = true;                        // repeat on the grid with doubled periods
};

struct ScalePoint {
  double scale = 0.0;
  double sup_ratio = 0.0;
  int witness = -1;
};

struct ProbeReport {
  double sup_ratio = 0.0;
  int witness = -1;          // member id: scale_index * trials + trial
  std::string ensemble;
  double refinement_drift = -1.0;  // -1 when not measured
  Verdict verdict = Verdict::inconclusive;
  ScalingFit fit;
  std::vector<ScalePoint> points;
  int excluded = 0;          // members with a zero source norm
  int members = 0;
};

// target(B(u, v)) / (source_u(u) source_v(v)); nullopt when a source norm is 0.
std::optional<double> embedding_ratio(const EmbeddingSpec& spec, const SpectralField& u, const SpectralField& v);

struct MemberRatio {
  int id = 0;
  int scale_index = 0;
  std::optional<double> ratio;
};

// Sup per scale, fit, verdict. drift < 0 means not measured.
ProbeReport summarize_probe(const std::vector<double>& scales, const std::vector<MemberRatio>& members,
                            double drift);
Verdict decide_verdict(const ScalingFit& fit, double drift);

// Members of the lattice ensembles, realized on any grid of matching dimension.
struct Bump {
  std::array<double, 4> center{};  // (tau, xi_1, .., xi_n)
  cd amplitude{};
};
struct Member {
  std::vector<Bump> u;
  std::vector<Bump> v;
};
Member draw_member(Ensemble e, const ProbeOptions& opt, int n, double scale, int scale_index, int trial);
SpectralField realize(const std::vector<Bump>& bumps, double width, const Grid& g);

// Grid doubled in periods and sample counts: same band, half the spacing.
Grid refined_grid(const Grid& g);

// Counterexample family on the integer lattice (n = 2): u = 1_A, v = 1_B with
// the slab and shell sets at scale L; the product is accumulated exactly.
std::optional<double> family_ratio(const EmbeddingSpec& spec, double L);

ProbeReport probe_embedding(const EmbeddingSpec& spec, Ensemble e, const Grid& g, const ProbeOptions& opt);

}  // namespace nflab
