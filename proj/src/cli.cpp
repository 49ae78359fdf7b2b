#include "quermass/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "quermass/csv.hpp"
#include "quermass/error.hpp"
#include "quermass/flow.hpp"
#include "quermass/lagrangian.hpp"

namespace quermass::cli {

namespace fs = std::filesystem;

void write_file_atomic(const std::string& path,
                       const std::function<void(std::ostream&)>& body) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot write '" + tmp.string() + "'");
    body(os);
    os.flush();
    if (!os) throw Error("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

namespace {

// Runs fn(0..count-1) on up to `jobs` threads. Results are indexed, so the
// caller's merge order does not depend on scheduling.
void parallel_for(std::size_t count, int jobs,
                  const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::optional<RunConfig> load(const std::string& path, const Options& opt,
                              std::ostream& err) {
  try {
    return load_config(path, opt.overrides);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return std::nullopt;
  }
}

std::string monitored_column(int n, int k) {
  return "I" + std::to_string(monitored_ratio(n, k));
}

double last_or_nan(const TrajectoryRecord& rec, const std::string& col) {
  if (rec.rows.empty()) return std::nan("");
  return rec.rows.back()[rec.column(col)];
}

}  // namespace

// ---------------------------------------------------------------------------
// run

int cmd_run(const std::string& config_path, const Options& opt,
            std::ostream& out, std::ostream& err) {
  const auto cfg = load(config_path, opt, err);
  if (!cfg) return kConfig;
  const FlowConfig& f = cfg->flow;
  const RadialGraph initial = make_shape(cfg->shape, f.n, f.grid);

  SampleObserver observer;
  std::size_t snapshots = 0;
  if (cfg->output.snapshot_every > 0) {
    const auto every = static_cast<std::size_t>(cfg->output.snapshot_every);
    observer = [&](std::size_t row, const FlowState&,
                   const PointwiseGeometry& monitored) {
      if (row % every != 0) return;
      std::ostringstream name;
      name << "snapshot_" << std::setw(6) << std::setfill('0') << row << ".csv";
      write_file_atomic((fs::path(cfg->output.snapshot_dir) / name.str()).string(),
                        [&](std::ostream& os) {
                          write_snapshot_csv(os, monitored, f.k);
                        });
      ++snapshots;
    };
  }

  std::optional<RunResult> result;
  try {
    result = run(f, initial, observer);
  } catch (const InvalidInput& e) {
    err << "precondition: shape: " << e.what() << '\n';
    return kConfig;
  }
  const RunResult& res = *result;

  write_file_atomic(cfg->output.trajectory_path,
                    [&](std::ostream& os) { res.record.write_csv(os); });

  const std::string icol = monitored_column(f.n, f.k);
  out << "status=" << to_string(res.status)
      << " t=" << csv::format(res.final_state.t) << ' ' << icol << '='
      << csv::format(last_or_nan(res.record, icol)) << " roundness="
      << csv::format(roundness(rescale_state(res.final_state)))
      << " steps=" << res.final_state.diag.accepted;
  if (!opt.quiet) {
    out << " rows=" << res.record.rows.size() << " snapshots=" << snapshots
        << " trajectory=" << cfg->output.trajectory_path;
  }
  out << '\n';
  if (!res.ok()) {
    err << "numerical failure: " << res.message << '\n';
    return kNumerical;
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// verify suites

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{
      "symfunc", "geometry", "prop1", "lemma", "variation", "af", "monotone"};
  return names;
}

namespace {

using Reports = std::vector<IdentityReport>;

Reports prefixed(const std::string& prefix, Reports rs) {
  for (auto& r : rs) r.name = prefix + "/" + r.name;
  return rs;
}

std::string label_of(const ShapeSpec& s, int n) {
  std::ostringstream os;
  os << shape_name(s) << "_n" << n;
  if (const auto* p = std::get_if<shape::PerturbedSphere>(&s)) {
    os << "_eps" << csv::format(p->eps);
    if (p->mode) {
      os << "_mode" << *p->mode;
    } else {
      os << "_seed" << p->seed;
    }
  }
  return os.str();
}

std::vector<double> cos_profile(const RadialGraph& g, int freq) {
  std::vector<double> rho(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    rho[i] = std::cos(freq * g.coordinate(i));
  }
  return rho;
}

LagrangianCurve curve_for(const ShapeSpec& s, int n, std::size_t points) {
  const std::size_t intervals = n == 1 ? points : points / 2;
  return LagrangianCurve::from_radial(make_shape(s, n, intervals));
}

Reports richardson(const ShapeSpec& s, int n, int k, const RichardsonSpec& spec) {
  return check_prop1_richardson(
      [s, n](std::size_t m) { return curve_for(s, n, m); }, k,
      Stencil::central2, spec);
}

Reports lemma_all(const ShapeSpec& s, int n, int k, std::size_t grid,
                  double dt) {
  Reports out;
  const auto g = make_shape(s, n, grid);
  for (int l = 0; l <= n; ++l) {
    LemmaSpec spec;
    spec.k = k;
    spec.l = l;
    spec.dt = dt;
    out.push_back(check_lemma_integral(g, spec));
  }
  return out;
}

// Sphere slots of the chain must be equalities, not just inequalities.
Reports af_with_equality(const RadialGraph& g, int k, bool sphere) {
  const int n = g.dim();
  Reports out = check_af_chain(compute_geometry(g), k, n);
  if (sphere) {
    const std::size_t count = out.size();
    for (std::size_t i = 0; i < count; ++i) {
      auto eq = make_report(out[i].name + ".equality", out[i].lhs, out[i].rhs,
                            std::abs(out[i].rhs), 1e-10);
      out.push_back(eq);
    }
  }
  return out;
}

// Worst-case AF ratio over `samples` random strictly k-convex perturbed
// spheres with eps in [0.05, 0.3].
IdentityReport af_random(int n, int k, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> eps_dist(0.05, 0.3);
  int accepted = 0, tried = 0;
  double worst = 0.0;
  bool ok = true;
  while (accepted < samples && tried < 50 * samples) {
    ++tried;
    shape::PerturbedSphere ps{1.0, eps_dist(rng), std::nullopt, rng()};
    const auto geo = compute_geometry(make_shape(ps, n, 256));
    if (kconvex_report(geo, k).status != Convexity::strict) continue;
    ++accepted;
    for (const auto& r : check_af_chain(geo, k, n)) {
      worst = std::max(worst, r.lhs / r.rhs);
      ok = ok && r.pass;
    }
  }
  IdentityReport r;
  r.name = "af.random_n" + std::to_string(n) + "_k" + std::to_string(k);
  r.lhs = worst;
  r.rhs = 1.0;
  r.abs_residual = std::max(0.0, worst - 1.0);
  r.rel_residual = r.abs_residual;
  r.tolerance = 1e-6;
  r.pass = ok && accepted == samples;
  r.resolution = 256;
  r.note = std::to_string(accepted) + " shapes accepted of " +
           std::to_string(tried) + " drawn; lhs = worst ratio";
  return r;
}

Reports monotone_run(FlowConfig f, const ShapeSpec& s) {
  if (f.mode == FlowMode::raw) f.mode = FlowMode::rescaled_raw;
  const auto res = run(f, make_shape(s, f.n, f.grid));
  if (!res.ok()) {
    throw NumericalError("flow stopped with " + to_string(res.status) + ": " +
                         res.message);
  }
  return check_monotone_series(res.record, MonotoneSpec{});
}

FlowConfig reference_flow(int n, int k, FlowMode mode, double t_max) {
  FlowConfig f;
  f.n = n;
  f.k = k;
  f.mode = mode;
  f.grid = 256;
  f.t_max = t_max;
  f.dt_init = 1e-4;
  f.dt_max = 1e-2;
  f.tol_round = 1e-3;
  f.sample_every = 100;
  return f;
}

void add(std::vector<Task>& tasks, std::string label,
         std::function<Reports()> fn) {
  tasks.push_back({label, [label, fn] { return prefixed(label, fn()); }});
}

// Built-in reference cases.
void reference_tasks(const std::string& suite, std::vector<Task>& t) {
  using namespace shape;
  const ShapeSpec sphere = Sphere{1.0};
  const ShapeSpec ellipse = Ellipse{2.0, 1.0};
  const ShapeSpec ellipsoid = EllipsoidOfRevolution{1.5, 1.0};

  if (suite == "symfunc") {
    add(t, "random_1e5", [] { return check_symfunc_identities(100000, 1); });
  } else if (suite == "geometry") {
    const std::vector<std::pair<ShapeSpec, int>> cases{
        {sphere, 1},
        {ellipse, 1},
        {PerturbedSphere{1.0, 0.3, 3, 0}, 1},
        {PerturbedSphere{1.0, 0.3, std::nullopt, 7}, 1},
        {sphere, 2},
        {ellipsoid, 2},
        {PerturbedSphere{1.0, 0.3, 3, 0}, 2},
        {PerturbedSphere{1.0, 0.3, std::nullopt, 7}, 2}};
    for (const auto& [s, n] : cases) {
      add(t, label_of(s, n), [s = s, n = n] {
        const auto g = make_shape(s, n, 512);
        Reports out = check_minkowski(compute_geometry(g));
        for (auto& r : check_round_trip(g)) out.push_back(r);
        for (auto& r : check_curvature_oracle(make_shape(s, n, n == 1 ? 512 : 128))) {
          out.push_back(r);
        }
        return out;
      });
    }
  } else if (suite == "prop1") {
    add(t, "circle", [] {
      const auto c = curve_for(Sphere{1.0}, 1, 128);
      return check_prop1_pointwise(c, 1, 2e-5, Stencil::central2, 1e-8);
    });
    add(t, "ellipse_k1", [=] { return richardson(ellipse, 1, 1, {}); });
    add(t, "ellipsoid_k1", [=] { return richardson(ellipsoid, 2, 1, {}); });
    add(t, "ellipsoid_k2", [=] { return richardson(ellipsoid, 2, 2, {}); });
  } else if (suite == "lemma") {
    add(t, "ellipse_k1", [=] { return lemma_all(ellipse, 1, 1, 256, 1e-3); });
    add(t, "ellipsoid_k1", [=] { return lemma_all(ellipsoid, 2, 1, 256, 1e-3); });
    add(t, "ellipsoid_k2", [=] { return lemma_all(ellipsoid, 2, 2, 256, 1e-3); });
  } else if (suite == "variation") {
    add(t, "circle_rho1", [] {
      const auto g = make_shape(Sphere{1.0}, 1, 256);
      const std::vector<double> rho(g.size(), 1.0);
      return Reports{check_first_variation(g, rho, 0)};
    });
    add(t, "sphere_rho1", [] {
      const auto g = make_shape(Sphere{1.0}, 2, 128);
      const std::vector<double> rho(g.size(), 1.0);
      return Reports{check_first_variation(g, rho, 1)};
    });
    add(t, "ellipse_cos2", [=] {
      const auto g = make_shape(ellipse, 1, 256);
      return Reports{check_first_variation(g, cos_profile(g, 2), 0)};
    });
    add(t, "ellipsoid_cos2", [=] {
      const auto g = make_shape(ellipsoid, 2, 128);
      Reports out;
      for (int l = 0; l <= 1; ++l) {
        out.push_back(check_first_variation(g, cos_profile(g, 2), l));
      }
      return out;
    });
  } else if (suite == "af") {
    add(t, "sphere_n1_k1", [] { return af_with_equality(make_shape(Sphere{1.0}, 1, 256), 1, true); });
    add(t, "sphere_n2_k1", [] { return af_with_equality(make_shape(Sphere{1.0}, 2, 256), 1, true); });
    add(t, "sphere_n2_k2", [] { return af_with_equality(make_shape(Sphere{1.0}, 2, 256), 2, true); });
    add(t, "ellipse_k1", [=] { return af_with_equality(make_shape(ellipse, 1, 512), 1, false); });
    add(t, "ellipsoid_k2", [=] { return af_with_equality(make_shape(ellipsoid, 2, 256), 2, false); });
    add(t, "random", [] { return Reports{af_random(1, 1, 100, 11)}; });
    add(t, "random", [] { return Reports{af_random(2, 1, 100, 12)}; });
    add(t, "random", [] { return Reports{af_random(2, 2, 100, 13)}; });
  } else if (suite == "monotone") {
    add(t, "sphere_n2_k1_normalized", [=] {
      auto f = reference_flow(2, 1, FlowMode::normalized, 1.0);
      f.tol_round = 0.0;
      return monotone_run(f, sphere);
    });
    add(t, "ellipse_k1", [=] {
      return monotone_run(reference_flow(1, 1, FlowMode::rescaled_raw, 20.0), ellipse);
    });
    add(t, "ellipsoid_k1", [=] {
      return monotone_run(reference_flow(2, 1, FlowMode::rescaled_raw, 40.0), ellipsoid);
    });
  }
}

// Cases taken from a config: its shape, n, k, grid and initial step.
void config_tasks(const std::string& suite, const RunConfig& cfg,
                  std::vector<Task>& t) {
  const FlowConfig f = cfg.flow;
  const ShapeSpec s = cfg.shape;
  const std::string label = label_of(s, f.n) + "_k" + std::to_string(f.k);

  if (suite == "symfunc") {
    add(t, "random_1e5", [] { return check_symfunc_identities(100000, 1); });
  } else if (suite == "geometry") {
    add(t, label, [=] {
      const auto g = make_shape(s, f.n, f.grid);
      Reports out = check_minkowski(compute_geometry(g));
      for (auto& r : check_round_trip(g)) out.push_back(r);
      for (auto& r : check_curvature_oracle(g)) out.push_back(r);
      return out;
    });
  } else if (suite == "prop1") {
    add(t, label, [=] {
      const std::size_t points = f.n == 1 ? f.grid : 2 * f.grid;
      if (std::holds_alternative<shape::Sphere>(s)) {
        return check_prop1_pointwise(curve_for(s, f.n, points), f.k, f.dt_init,
                                     Stencil::central2, 1e-8);
      }
      RichardsonSpec spec;
      spec.m0 = points;
      spec.dt0 = f.dt_init;
      return richardson(s, f.n, f.k, spec);
    });
  } else if (suite == "lemma") {
    add(t, label, [=] { return lemma_all(s, f.n, f.k, f.grid, f.dt_init); });
  } else if (suite == "variation") {
    add(t, label, [=] {
      const auto g = make_shape(s, f.n, f.grid);
      Reports out;
      for (int l = 0; l < f.n; ++l) {
        out.push_back(check_first_variation(g, std::vector<double>(g.size(), 1.0), l));
        out.push_back(check_first_variation(g, cos_profile(g, 2), l));
      }
      return out;
    });
  } else if (suite == "af") {
    add(t, label, [=] {
      return af_with_equality(make_shape(s, f.n, f.grid), f.k,
                              std::holds_alternative<shape::Sphere>(s));
    });
  } else if (suite == "monotone") {
    add(t, label, [=] { return monotone_run(f, s); });
  }
}

}  // namespace

std::vector<Task> suite_tasks(const std::string& suite,
                              const std::optional<RunConfig>& cfg) {
  std::vector<std::string> suites;
  if (suite == "all") {
    suites = suite_names();
  } else if (std::find(suite_names().begin(), suite_names().end(), suite) !=
             suite_names().end()) {
    suites = {suite};
  } else {
    throw ConfigError("suite", "unknown suite '" + suite + "'");
  }
  std::vector<Task> tasks;
  for (const auto& s : suites) {
    std::vector<Task> part;
    if (cfg) {
      config_tasks(s, *cfg, part);
    } else {
      reference_tasks(s, part);
    }
    for (auto& p : part) {
      p.label = s + ":" + p.label;
      tasks.push_back(std::move(p));
    }
  }
  return tasks;
}

int cmd_verify(const std::string& suite,
               const std::optional<std::string>& config_path,
               const Options& opt, std::ostream& out, std::ostream& err) {
  std::optional<RunConfig> cfg;
  if (config_path) {
    cfg = load(*config_path, opt, err);
    if (!cfg) return kConfig;
  }
  std::vector<Task> tasks;
  try {
    tasks = suite_tasks(suite, cfg);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfig;
  }

  struct Outcome {
    Reports reports;
    int code = kOk;
    std::string error;
  };
  std::vector<Outcome> outcomes(tasks.size());
  parallel_for(tasks.size(), opt.jobs, [&](std::size_t i) {
    auto& o = outcomes[i];
    try {
      o.reports = tasks[i].run();
    } catch (const ConfigError& e) {
      o.code = kConfig;
      o.error = e.what();
    } catch (const InvalidInput& e) {
      o.code = kConfig;
      o.error = std::string("precondition: ") + e.what();
    } catch (const NumericalError& e) {
      o.code = kNumerical;
      o.error = std::string("numerical failure: ") + e.what();
    }
  });

  Reports merged;
  bool config_fail = false, numeric_fail = false;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto& o = outcomes[i];
    if (o.code != kOk) {
      err << "ERROR " << tasks[i].label << ": " << o.error << '\n';
      config_fail = config_fail || o.code == kConfig;
      numeric_fail = numeric_fail || o.code == kNumerical;
    }
    merged.insert(merged.end(), o.reports.begin(), o.reports.end());
  }

  std::size_t failed = 0;
  for (const auto& r : merged) {
    if (!r.pass) ++failed;
    if (!r.pass || !opt.quiet) print_reports(out, std::span(&r, 1));
  }

  if (cfg && !cfg->output.report_path.empty()) {
    write_file_atomic(cfg->output.report_path,
                      [&](std::ostream& os) { write_report_csv(os, merged); });
  }

  const int code = config_fail    ? kConfig
                   : numeric_fail ? kNumerical
                   : failed > 0   ? kViolation
                                  : kOk;
  out << "verify " << suite << ": " << merged.size() << " checks, " << failed
      << " failed";
  if (config_fail || numeric_fail) out << ", some checks could not run";
  out << " (exit " << code << ")\n";
  return code;
}

// ---------------------------------------------------------------------------
// sweep

namespace {

struct Combo {
  ShapeSpec shape;
  int k = 1;
};

std::string params_cell(const ShapeSpec& s) {
  std::ostringstream os;
  const auto p = shape_to_json(s)["params"];
  bool first = true;
  for (const auto& [key, value] : p.items()) {
    if (!first) os << ';';
    first = false;
    os << key << '=';
    if (value.is_number_integer()) {
      os << value.get<long long>();
    } else {
      os << csv::format(value.get<double>());
    }
  }
  return os.str();
}

std::string seed_cell(const ShapeSpec& s) {
  const auto* p = std::get_if<shape::PerturbedSphere>(&s);
  return p && !p->mode ? std::to_string(p->seed) : "";
}

std::vector<Combo> expand(const SweepConfig& sw) {
  std::vector<Combo> out;
  for (const auto& s : sw.shapes) {
    std::vector<ShapeSpec> variants;
    if (const auto* p = std::get_if<shape::PerturbedSphere>(&s)) {
      for (double eps : sw.eps) {
        for (int mode : sw.modes) {
          variants.push_back(shape::PerturbedSphere{p->R, eps, mode, 0});
        }
        for (std::uint64_t i = 0; i < sw.seed_count; ++i) {
          variants.push_back(
              shape::PerturbedSphere{p->R, eps, std::nullopt, sw.seed_first + i});
        }
      }
    } else {
      variants.push_back(s);
    }
    for (const auto& v : variants) {
      for (int k : sw.k) out.push_back({v, k});
    }
  }
  return out;
}

const char* flag(std::optional<bool> v) {
  if (!v) return "na";
  return *v ? "1" : "0";
}

}  // namespace

int cmd_sweep(const std::string& config_path, const Options& opt,
              std::ostream& out, std::ostream& err) {
  const auto cfg = load(config_path, opt, err);
  if (!cfg) return kConfig;
  if (!cfg->sweep) {
    err << "config error: sweep: required key is missing\n";
    return kConfig;
  }
  const SweepConfig& sw = *cfg->sweep;
  const auto combos = expand(sw);
  const int width = std::max<int>(4, std::to_string(combos.size()).size());

  struct Row {
    std::string status;
    double t = std::nan(""), ratio = std::nan(""), round = std::nan("");
    std::optional<bool> monotone, conserve, terminal;
    bool pass = false;
    std::string file;
  };
  std::vector<Row> rows(combos.size());

  parallel_for(combos.size(), opt.jobs, [&](std::size_t i) {
    Row& row = rows[i];
    FlowConfig f = cfg->flow;
    f.k = combos[i].k;
    std::ostringstream name;
    name << "traj_" << std::setw(width) << std::setfill('0') << i << ".csv";
    row.file = name.str();
    std::optional<RunResult> result;
    try {
      result = run(f, make_shape(combos[i].shape, f.n, f.grid));
    } catch (const InvalidInput&) {
      row.status = "not_k_convex";
      return;
    }
    const RunResult& res = *result;
    write_file_atomic((fs::path(sw.output_dir) / row.file).string(),
                      [&](std::ostream& os) { res.record.write_csv(os); });
    row.status = to_string(res.status);
    row.t = res.final_state.t;
    row.ratio = last_or_nan(res.record, monitored_column(f.n, f.k));
    row.round = roundness(rescale_state(res.final_state));
    row.pass = res.ok();
    if (row.pass && f.mode != FlowMode::raw) {
      for (const auto& r : check_monotone_series(res.record, MonotoneSpec{})) {
        std::optional<bool>* slot =
            r.name.starts_with("monotone.terminal") ? &row.terminal
            : r.name.starts_with("monotone.I")      ? &row.monotone
                                                    : &row.conserve;
        *slot = r.pass;
        row.pass = row.pass && r.pass;
      }
    }
  });

  const fs::path index = fs::path(sw.output_dir) / "index.csv";
  std::size_t failed = 0;
  write_file_atomic(index.string(), [&](std::ostream& os) {
    const std::vector<std::string> header{
        "id",        "shape",    "params",        "seed",       "n",
        "k",         "mode",     "status",        "t_final",    "I_final",
        "roundness", "monotone", "conserved",     "terminal",   "pass",
        "trajectory"};
    csv::write_row(os, header);
    for (std::size_t i = 0; i < combos.size(); ++i) {
      const Row& r = rows[i];
      if (!r.pass) ++failed;
      const bool ran = r.status != "not_k_convex";
      const std::vector<std::string> cells{
          std::to_string(i),
          shape_name(combos[i].shape),
          params_cell(combos[i].shape),
          seed_cell(combos[i].shape),
          std::to_string(cfg->flow.n),
          std::to_string(combos[i].k),
          to_string(cfg->flow.mode),
          r.status,
          csv::format(r.t),
          csv::format(r.ratio),
          csv::format(r.round),
          flag(r.monotone),
          flag(r.conserve),
          flag(r.terminal),
          r.pass ? "1" : "0",
          ran ? r.file : ""};
      csv::write_row(os, cells);
    }
  });

  out << "sweep: " << combos.size() << " combinations, " << failed
      << " failed, index " << index.string() << '\n';
  return failed == 0 ? kOk : kViolation;
}

}  // namespace quermass::cli
