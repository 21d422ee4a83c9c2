#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nflab/multiplier.hpp"
#include "nflab/nullform.hpp"
#include "nflab/propagate.hpp"

namespace nflab {

enum class SystemKind { WM, YM, MKG, WMM, scalarQ0 };

SystemKind parse_system(const std::string& name);
std::string system_name(SystemKind k);

// One monomial of Gamma^I_{JK}(u): coeff * prod_L (u^L)^powers[L].
struct GammaTerm {
  int I = 0, J = 0, K = 0;
  double coeff = 0.0;
  std::vector<int> powers;  // empty means constant
};

struct SystemSpec {
  SystemKind kind = SystemKind::scalarQ0;
  int N = 1;   // WM, WMM, YM components
  int N1 = 1;  // MKG: u components
  int N2 = 1;  // MKG: v components
  std::vector<GammaTerm> gamma;  // WM
  // WMM: a^I_{JK} (N^3). YM: c^I_{JK} (N^3). MKG: first N1*N2*N2 entries for
  // D^{-1}Q(v,v), then N2*N1*N2 for Q(D^{-1}u, v). Index [I][J][K] row major.
  std::vector<double> table;
  // Weights w_ij of Q_ij, i < j, in lexicographic order; Q = sum w_ij Q_ij.
  std::vector<double> pair_weights;

  int components() const;
};

// Defaults: constant Gamma, tables and pair weights all ones.
SystemSpec make_system(SystemKind kind, int N = 1, int N1 = 1, int N2 = 1, int n = 2);
void validate(const SystemSpec& sys, int n);

using Components = std::vector<SpectralField>;

// Right-hand side of box u = N(u). *projected reports Riesz or D^{-1} zeroing.
Components apply_nonlinearity(const SystemSpec& sys, const Components& u, bool* projected = nullptr);

struct IterateRow {
  int j = 0;
  double sup_Hs = 0.0;  // sup over |t| <= width/2 of the H^s norm of u_j
  double ws = 0.0;      // ws_norm of the cut-off iterate
  double d = 0.0;       // sup over |t| <= width/2 of ||u_{j+1} - u_j||_{H^s}
  double ratio = 0.0;   // d_j / d_{j-1}; 0 on the first row
  std::string flag;     // converged | diverged | stalled
  std::vector<double> hs_samples;  // ||u_j(t_k)||_{H^s} at every sample time
};

struct IterationTrace {
  std::vector<IterateRow> rows;
  int diverged_at = -1;
  bool projected = false;
  Components final_iterate;
};

IterationTrace picard_run(const SystemSpec& sys, const std::vector<CauchyData>& data, int iterations,
                          const SpaceIndex& idx, double cutoff_width);

void write_trace_csv(std::ostream& os, const IterationTrace& tr);

// Exact solution of box u = Q0(u,u): u = -log w with box w = 0 and data
// (e^{-f}, -g e^{-f}). Refuses when w <= 1/2 at some sample point.
SpectralField q0_closed_form(const CauchyData& data, double t);

}  // namespace nflab
