#include "nflab/cli.hpp"

#include <CLI11.hpp>
#include <boost/rational.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <random>
#include <sstream>

#include "nflab/config.hpp"
#include "nflab/counterexample.hpp"
#include "nflab/iterate.hpp"
#include "nflab/multiplier.hpp"
#include "nflab/nullform.hpp"
#include "nflab/parallel.hpp"
#include "nflab/probe.hpp"
#include "nflab/propagate.hpp"

namespace nflab::cli {

namespace {

constexpr int kOk = 0;
constexpr int kConfig = 2;
constexpr int kNumeric = 3;

// Thrown for divergence, ascent non-convergence and similar flags.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  for (std::size_t p = 0; (p = s.find('"', p)) != std::string::npos; p += 2) s.replace(p, 1, "\\\"");
  return s;
}

void error_record(int code, const std::string& kind, const std::string& msg) {
  std::cerr << "nflab-error code=" << code << " kind=" << kind << " message=\"" << one_line(msg) << "\"\n";
}

// Main output (file or stdout) and the optional plot file.
class Output {
 public:
  explicit Output(const Settings& st) {
    const std::string out = st.str("out");
    if (out != "-") {
      file_ = std::make_unique<std::ofstream>(out);
      if (!*file_) throw ConfigError("cannot open output " + out);
    }
    plot_path_ = st.str("plot");
    if (plot_path_.empty() && out != "-") {
      const auto dot = out.find_last_of('.');
      const auto slash = out.find_last_of('/');
      plot_path_ = (dot != std::string::npos && (slash == std::string::npos || dot > slash) ? out.substr(0, dot) : out) +
                   ".plot";
    }
    header_ = st.header();
    os() << header_ << "\n";
  }

  std::ostream& os() { return file_ ? *file_ : std::cout; }

  void plot(const std::vector<std::pair<double, double>>& pts, const std::string& xname, const std::string& yname) {
    if (plot_path_.empty()) return;
    std::ofstream p(plot_path_);
    if (!p) throw ConfigError("cannot open plot file " + plot_path_);
    p << header_ << "\n# " << xname << " " << yname << "\n";
    for (auto [x, y] : pts) p << fmt(x) << " " << fmt(y) << "\n";
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::string plot_path_;
  std::string header_;
};

Grid grid_from(const Settings& st) {
  try {
    return make_grid(st.integer("n"), st.integer("Nt"), st.integer("Nx"), st.num("T"), st.num("L"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

KeyMap with_common(KeyMap m) {
  m.emplace("out", "-");
  m.emplace("plot", "");
  return m;
}

KeyMap grid_keys(int n, int Nt, int Nx, double T, double L) {
  return {{"n", std::to_string(n)}, {"Nt", std::to_string(Nt)}, {"Nx", std::to_string(Nx)}, {"T", fmt(T)},
          {"L", fmt(L)}};
}

KeyMap merge(KeyMap a, const KeyMap& b) {
  a.insert(b.begin(), b.end());
  return a;
}

// Seeded real field with Gaussian coefficients damped by exp(-|Xi|^2 / (2 width^2)).
SpectralField random_field(const Grid& g, FieldKind kind, std::uint64_t seed, double width) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  SpectralField u = transform(sample(g, kind, [&](double, const std::array<double, 3>&) { return cd(gauss(rng)); }));
  project_band(u);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double r = u.point(i).norm();
    u.coeffs[i] *= std::exp(-0.5 * r * r / (width * width));
  }
  u.real_flag = true;
  return u;
}

// Real spatial field on |m|_inf <= modes with physical sup-norm amp.
SpectralField low_mode_data(const Grid& g, int modes, double amp, std::uint64_t seed) {
  SpectralField f = zeros(g, FieldKind::spatial, true);
  if (amp == 0.0) return f;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto k = f.lattice_index(i);
    bool low = true;
    for (int a = 1; a <= g.n; ++a) low = low && std::abs(k[a]) <= modes;
    if (low && in_band(f, i)) f.coeffs[i] = cd(gauss(rng), gauss(rng));
  }
  PhysicalField p = inverse_transform(f);
  double sup = 0.0;
  for (auto& v : p.values) {
    v = cd(v.real(), 0.0);
    sup = std::max(sup, std::abs(v.real()));
  }
  if (sup == 0.0) return zeros(g, FieldKind::spatial, true);
  for (auto& v : p.values) v *= amp / sup;
  SpectralField out = transform(p);
  project_band(out);
  out.real_flag = true;
  return out;
}

// ---------------------------------------------------------------- subcommands

int cmd_norms(const Settings& st) {
  const Grid g = grid_from(st);
  const double q = st.num("q"), r = st.num("r");
  const int count = st.integer("fields");
  if (count < 1) throw ConfigError("fields >= 1 required");
  const double width = st.num("width");
  const std::uint64_t seed = st.seed("seed");

  struct Row {
    double l2, mixed, upper, lower, ascent;
    int iterations;
    bool converged;
  };
  std::vector<Row> rows(count);
  parallel_for(count, [&](std::size_t k) {
    const SpectralField u = random_field(g, FieldKind::spacetime, seed + k, width);
    const auto as = modified_mixed_norm(u, q, r, ModifiedMode::ascent);
    rows[k] = {l2_norm(u),
               mixed_norm(u, q, r),
               modified_mixed_norm(u, q, r, ModifiedMode::upper).value,
               modified_mixed_norm(u, q, r, ModifiedMode::lower).value,
               as.value,
               as.iterations,
               as.converged};
  });

  Output out(st);
  out.os() << "field,q,r,l2,mixed,upper,lower,ascent,ascent_iterations,ascent_converged\n";
  bool all_converged = true;
  std::vector<std::pair<double, double>> pts;
  for (int k = 0; k < count; ++k) {
    const Row& w = rows[k];
    out.os() << k << "," << fmt(q) << "," << fmt(r) << "," << fmt(w.l2) << "," << fmt(w.mixed) << "," << fmt(w.upper)
             << "," << fmt(w.lower) << "," << fmt(w.ascent) << "," << w.iterations << ","
             << (w.converged ? "true" : "false") << "\n";
    all_converged = all_converged && w.converged;
    pts.emplace_back(w.l2, w.ascent);
  }
  out.plot(pts, "l2", "ascent");
  if (!all_converged) throw NumericalFailure("norms: ascent did not converge");
  return kOk;
}

int cmd_admissible(const Settings& st) {
  const int n = st.integer("n");
  Rational qi, ri;
  try {
    qi = parse_inverse_exponent(st.str("q"));
    ri = parse_inverse_exponent(st.str("r"));
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  Output out(st);
  if (is_wave_admissible_exact(qi, ri, n)) {
    const Rational s = strichartz_s_exact(qi, ri, n);
    out.os() << "admissible s=" << fmt(boost::rational_cast<double>(s)) << "\n";
  } else {
    out.os() << "not-admissible\n";
  }
  return kOk;
}

int cmd_symbol_check(const Settings& st) {
  const std::string which = st.str("name");
  const long samples = static_cast<long>(st.count("samples"));
  const std::uint64_t seed = st.seed("seed");
  std::vector<std::string> names;
  for (const auto& info : inequality_registry())
    if (which == "all" || which == info.name) names.push_back(info.name);
  if (names.empty()) throw ConfigError("unknown inequality " + which);

  Output out(st);
  out.os() << "name,samples,checks,violations,worst_margin,constant\n";
  long violations = 0;
  for (const auto& nm : names) {
    const InequalityReport r = check_symbol_inequality(nm, samples, seed);
    out.os() << r.name << "," << r.samples << "," << r.checks << "," << r.violations << "," << fmt(r.worst_margin)
             << ",\"" << r.constant << "\"\n";
    violations += r.violations;
  }
  if (violations > 0) throw NumericalFailure("symbol-check: " + std::to_string(violations) + " violations");
  return kOk;
}

int cmd_iterate(const Settings& st) {
  const Grid g = grid_from(st);
  SystemSpec sys;
  try {
    sys = make_system(parse_system(st.str("system")), st.integer("N"), st.integer("N1"), st.integer("N2"), g.n);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const double amp = st.num("amp");
  const int modes = st.integer("modes");
  const std::uint64_t seed = st.seed("seed");
  std::vector<CauchyData> data;
  for (int c = 0; c < sys.components(); ++c)
    data.push_back({low_mode_data(g, modes, amp, seed + 2 * c), low_mode_data(g, modes, amp, seed + 2 * c + 1)});

  const IterationTrace tr =
      picard_run(sys, data, st.integer("J"), {st.num("s"), st.num("theta")}, st.num("width"));
  Output out(st);
  write_trace_csv(out.os(), tr);
  std::vector<std::pair<double, double>> pts;
  for (const auto& row : tr.rows) pts.emplace_back(row.j, row.d);
  out.plot(pts, "j", "d_j");
  if (tr.diverged_at >= 0) throw NumericalFailure("iterate: diverged at j=" + std::to_string(tr.diverged_at));
  return kOk;
}

void write_probe_rows(Output& out, const std::string& id, const nlohmann::json& params,
                      const std::vector<ScalePoint>& points, const ScalingFit& fit, const std::string& verdict) {
  out.os() << "probe_id,param_json,scale,value,slope,residual,verdict\n";
  std::string js = params.dump();
  std::string quoted;
  for (char c : js) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : points) {
    out.os() << id << ",\"" << quoted << "\"," << fmt(p.scale) << "," << fmt(p.sup_ratio) << "," << fmt(fit.slope)
             << "," << fmt(fit.residual) << "," << verdict << "\n";
    pts.emplace_back(p.scale, p.sup_ratio);
  }
  out.plot(pts, "scale", "value");
}

int cmd_probe_embedding(const Settings& st) {
  EmbeddingSpec spec;
  Ensemble ens;
  try {
    spec.form.form = parse_form(st.str("form"));
    ens = parse_ensemble(st.str("ensemble"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  spec.form.alpha = st.num("alpha");
  spec.form.i = st.integer("i");
  spec.form.j = st.integer("j");
  spec.n = st.integer("n");
  spec.source_u = {st.num("u_s"), st.num("u_theta")};
  spec.source_v = {st.num("v_s"), st.num("v_theta")};
  spec.target = {st.num("target_s"), st.num("target_theta")};
  spec.target_q = st.num("target_q");
  spec.target_r = st.num("target_r");

  ProbeOptions opt;
  opt.trials = st.integer("trials");
  opt.seed = st.seed("seed");
  opt.scales = st.list("scales");
  opt.bumps = st.integer("bumps");
  opt.bump_width = st.num("bump_width");
  opt.refine = st.flag("refine");
  const Grid g = ens == Ensemble::counterexample_family ? Grid{} : grid_from(st);

  const ProbeReport rep = probe_embedding(spec, ens, g, opt);
  nlohmann::json p = {{"form", form_name(spec.form.form)},
                      {"u", {spec.source_u.s, spec.source_u.theta}},
                      {"v", {spec.source_v.s, spec.source_v.theta}},
                      {"target", {spec.target.s, spec.target.theta}},
                      {"n", spec.n},
                      {"ensemble", rep.ensemble},
                      {"drift", rep.refinement_drift},
                      {"sup_ratio", rep.sup_ratio},
                      {"witness", rep.witness},
                      {"members", rep.members},
                      {"excluded", rep.excluded}};
  Output out(st);
  write_probe_rows(out, "embedding", p, rep.points, rep.fit, verdict_name(rep.verdict));
  return kOk;
}

int cmd_probe_kernel(const Settings& st) {
  KernelSpec k;
  try {
    k.sign = parse_delta_sign(st.str("sign"));
    k.variant = parse_kernel_variant(st.str("variant"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  k.a = st.num("a");
  k.b = st.num("b");
  k.c = st.num("c");
  const int n = st.integer("n");
  const double R = st.num("R");
  const std::vector<double> hs = st.list("h");
  if (hs.size() < 3) throw ConfigError("h needs at least three values");

  std::vector<double> bounds(hs.size() + 1);
  parallel_for(hs.size() + 1, [&](std::size_t i) {
    bounds[i] = i < hs.size() ? schur_bound(k, n, R, hs[i]) : schur_bound(k, n, 2.0 * R, hs.back());
  });
  std::vector<ScalePoint> points;
  std::vector<std::pair<double, double>> fit_pts;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    points.push_back({hs[i], bounds[i], -1});
    fit_pts.emplace_back(1.0 / hs[i], bounds[i]);
  }
  const ScalingFit fit = scaling_fit(fit_pts);
  const double drift = std::abs(bounds.back() - bounds[hs.size() - 1]) / bounds[hs.size() - 1];
  const bool inside = proposition_region(k.a, k.b, k.c, n);
  nlohmann::json p = {{"a", k.a},
                      {"b", k.b},
                      {"c", k.c},
                      {"n", n},
                      {"R", R},
                      {"sign", delta_sign_name(k.sign)},
                      {"variant", kernel_variant_name(k.variant)},
                      {"region", inside ? "inside" : "unproven-direction"},
                      {"R_doubling_change", drift},
                      {"fit_variable", "1/h"}};
  Output out(st);
  write_probe_rows(out, "kernel", p, points, fit, verdict_name(decide_verdict(fit, drift)));
  return kOk;
}

int cmd_counterexample(const Settings& st) {
  CounterexampleParams base;
  base.n = st.integer("n");
  base.s = st.num("s");
  base.theta = st.num("theta");
  base.j = st.integer("j");
  const std::vector<double> Ls = st.list("L");
  const long samples = static_cast<long>(st.count("samples"));
  const std::uint64_t seed = st.seed("seed");
  for (double L : Ls) {
    CounterexampleParams p = base;
    p.L = L;
    try {
      validate(p);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }

  std::vector<CounterexampleNorms> res(Ls.size());
  std::vector<MembershipReport> mem(Ls.size());
  parallel_for(Ls.size(), [&](std::size_t i) {
    CounterexampleParams p = base;
    p.L = Ls[i];
    res[i] = counterexample_norms(p);
    if (samples > 0) mem[i] = membership_check(Ls[i], base.n, samples, seed + i);
  });

  Output out(st);
  out.os() << "L,measure_A,measure_B,measure_C,norm_u,norm_v,lhs,ratio,membership_samples,membership_failures\n";
  long failures = 0;
  for (std::size_t i = 0; i < Ls.size(); ++i) {
    const auto& r = res[i];
    out.os() << fmt(Ls[i]) << "," << fmt(r.measure_A) << "," << fmt(r.measure_B) << "," << fmt(r.measure_C) << ","
             << fmt(r.norm_u) << "," << fmt(r.norm_v) << "," << fmt(r.lhs_lower) << "," << fmt(r.ratio) << ","
             << mem[i].samples << "," << mem[i].failures << "\n";
    failures += mem[i].failures;
  }
  if (Ls.size() >= 3) {
    auto slope = [&](auto get) {
      std::vector<std::pair<double, double>> pts;
      for (std::size_t i = 0; i < Ls.size(); ++i) pts.emplace_back(Ls[i], get(res[i]));
      return fmt(scaling_fit(pts).slope);
    };
    out.os() << "slope," << slope([](auto& r) { return r.measure_A; }) << ","
             << slope([](auto& r) { return r.measure_B; }) << "," << slope([](auto& r) { return r.measure_C; }) << ","
             << slope([](auto& r) { return r.norm_u; }) << "," << slope([](auto& r) { return r.norm_v; }) << ","
             << slope([](auto& r) { return r.lhs_lower; }) << "," << slope([](auto& r) { return r.ratio; }) << ",,\n";
  }
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < Ls.size(); ++i) pts.emplace_back(Ls[i], res[i].ratio);
  out.plot(pts, "L", "ratio");
  if (failures > 0) throw NumericalFailure("counterexample: membership failures " + std::to_string(failures));
  return kOk;
}

int cmd_selftest(const Settings& st) {
  Output out(st);
  int failed = 0;
  auto report = [&](const std::string& name, bool ok) {
    out.os() << (ok ? "pass " : "fail ") << name << "\n";
    failed += !ok;
  };

  {
    const Grid g = make_grid(2, 8, 8, 3.0, 5.0);
    const SpectralField u = random_field(g, FieldKind::spacetime, 1, 1e9);
    const SpectralField back = transform(inverse_transform(u));
    double d = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) d = std::max(d, std::abs(back.coeffs[i] - u.coeffs[i]));
    double phys = 0.0;
    for (auto v : inverse_transform(u).values) phys += std::norm(v);
    phys = std::sqrt(phys * g.volume() / g.total_size());
    report("transform-roundtrip", d < 1e-12);
    report("plancherel", std::abs(phys - l2_norm(u)) <= 1e-10 * l2_norm(u));
  }
  report("strichartz-443", is_wave_admissible_exact(Rational(1, 4), Rational(1, 4), 3) &&
                               strichartz_s_exact(Rational(1, 4), Rational(1, 4), 3) == Rational(1, 2));
  report("strichartz-rinf", !is_wave_admissible_exact(Rational(1, 4), Rational(0), 3));
  {
    long v = 0;
    for (const auto& info : inequality_registry()) v += check_symbol_inequality(info.name, 10000, 1).violations;
    report("symbol-registry", v == 0);
  }
  {
    const Grid g = make_grid(1, 64, 4, 6.0, 2 * M_PI);
    const SpectralField F =
        transform(sample(g, FieldKind::spacetime, [](double, const std::array<double, 3>&) { return cd(1.0); }));
    const TimeSeries ts = to_time_series(duhamel(F));
    const double amp = std::sqrt(g.spatial_volume());
    double err = 0.0;
    for (int j = 0; j < g.N_t; ++j) {
      const double t = g.time_at(j);
      err = std::max(err, std::abs(ts.data[static_cast<std::size_t>(j) * g.spatial_size()] / amp + 0.5 * t * t));
    }
    report("duhamel-unit-forcing", err < 1e-10);
  }
  {
    const double lo = counterexample_norms({8.0, 0.4, 0.6, 3, 2}).ratio;
    const double hi = counterexample_norms({32.0, 0.4, 0.6, 3, 2}).ratio;
    report("counterexample-growth", hi > lo);
  }
  if (failed) throw NumericalFailure("selftest: " + std::to_string(failed) + " checks failed");
  return kOk;
}

struct Command {
  std::string name;
  std::string help;
  KeyMap defaults;
  std::function<int(const Settings&)> fn;
};

std::vector<Command> commands() {
  const double two_pi = 2 * M_PI;
  return {
      {"norms", "Plancherel, mixed and modified mixed norms on seeded random fields",
       with_common(merge(grid_keys(1, 8, 8, 2.0, 2.0),
                         {{"q", "4"}, {"r", "4"}, {"fields", "4"}, {"width", "4"}, {"seed", "1"}})),
       cmd_norms},
      {"admissible", "Wave admissibility and Strichartz exponent", with_common({{"q", "4"}, {"r", "4"}, {"n", "3"}}),
       cmd_admissible},
      {"symbol-check", "Fuzz the pointwise symbol inequalities",
       with_common({{"name", "all"}, {"samples", "1000000"}, {"seed", "1"}}), cmd_symbol_check},
      {"iterate", "Picard iteration for a model system",
       with_common(merge(grid_keys(2, 64, 16, 6.0, two_pi),
                         {{"system", "scalarQ0"},
                          {"J", "8"},
                          {"s", "1.5"},
                          {"theta", "0.6"},
                          {"width", "2"},
                          {"amp", "0"},
                          {"modes", "2"},
                          {"N", "1"},
                          {"N1", "1"},
                          {"N2", "1"},
                          {"seed", "1"}})),
       cmd_iterate},
      {"probe-embedding", "Worst-case ratio search for a bilinear embedding",
       with_common(merge(grid_keys(2, 32, 32, two_pi, two_pi),
                         {{"form", "product"},
                          {"alpha", "1"},
                          {"i", "1"},
                          {"j", "2"},
                          {"u_s", "1.2"},
                          {"u_theta", "0.6"},
                          {"v_s", "1.2"},
                          {"v_theta", "0.6"},
                          {"target_s", "1.2"},
                          {"target_theta", "0.6"},
                          {"target_q", "0"},
                          {"target_r", "0"},
                          {"ensemble", "random-gaussian"},
                          {"scales", "1.5,3,4.5"},
                          {"trials", "8"},
                          {"seed", "1"},
                          {"bumps", "3"},
                          {"bump_width", "1"},
                          {"refine", "true"}})),
       cmd_probe_embedding},
      {"probe-kernel", "Schur bound of a bilinear kernel under angular refinement",
       with_common({{"a", "1.2"},
                    {"b", "0.2"},
                    {"c", "0.3"},
                    {"sign", "plus"},
                    {"variant", "inhomogeneous"},
                    {"n", "3"},
                    {"R", "64"},
                    {"h", fmt(M_PI / 16) + "," + fmt(M_PI / 32) + "," + fmt(M_PI / 64) + "," + fmt(M_PI / 128)}}),
       cmd_probe_kernel},
      {"counterexample", "Norms of the slab/shell indicator family across L",
       with_common({{"n", "3"},
                    {"s", "0.4"},
                    {"theta", "0.6"},
                    {"L", "8,16,32,64"},
                    {"j", "2"},
                    {"samples", "0"},
                    {"seed", "1"}}),
       cmd_counterexample},
      {"selftest", "Quick consistency checks", with_common({}), cmd_selftest},
  };
}

}  // namespace

int run(int argc, char** argv) {
  const std::vector<Command> cmds = commands();
  CLI::App app{"nflab: null-form wave-Sobolev laboratory"};
  app.require_subcommand(1);

  std::vector<std::map<std::string, std::string>> flag_values(cmds.size());
  std::vector<std::string> config_paths(cmds.size());
  std::vector<std::map<std::string, CLI::Option*>> opts(cmds.size());
  std::vector<CLI::App*> subs;
  for (std::size_t c = 0; c < cmds.size(); ++c) {
    CLI::App* sub = app.add_subcommand(cmds[c].name, cmds[c].help);
    sub->set_help_flag("--help", "Print this help message and exit");
    sub->add_option("--config", config_paths[c], "key = value file; flags override it");
    for (const auto& [key, def] : cmds[c].defaults) {
      flag_values[c][key] = def;
      opts[c][key] = sub->add_option("--" + key, flag_values[c][key], "default: " + (def.empty() ? "none" : def));
    }
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    error_record(kConfig, "config", e.what());
    return kConfig;
  }

  for (std::size_t c = 0; c < cmds.size(); ++c) {
    if (!subs[c]->parsed()) continue;
    try {
      KeyMap file;
      if (!config_paths[c].empty()) file = read_config_file(config_paths[c]);
      KeyMap flags;
      for (const auto& [key, opt] : opts[c])
        if (opt->count() > 0) flags[key] = flag_values[c][key];
      const Settings st = resolve(cmds[c].name, cmds[c].defaults, file, flags);
      return cmds[c].fn(st);
    } catch (const ConfigError& e) {
      error_record(kConfig, "config", e.what());
      return kConfig;
    } catch (const std::invalid_argument& e) {
      error_record(kConfig, "config", e.what());
      return kConfig;
    } catch (const NumericalFailure& e) {
      error_record(kNumeric, "numerical", e.what());
      return kNumeric;
    } catch (const std::exception& e) {
      error_record(kNumeric, "numerical", e.what());
      return kNumeric;
    }
  }
  return kConfig;
}

}  // namespace nflab::cli
