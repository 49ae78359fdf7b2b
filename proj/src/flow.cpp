#include "quermass/flow.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "quermass/csv.hpp"
#include "quermass/symfunc.hpp"

namespace quermass {

ConeExit::ConeExit(std::size_t node, double value)
    : NumericalError("cone exit: sigma_k = " + csv::format(value) +
                     " at node " + std::to_string(node)),
      node_(node),
      value_(value) {}

std::string to_string(FlowMode m) {
  switch (m) {
    case FlowMode::raw:
      return "raw";
    case FlowMode::normalized:
      return "normalized";
    case FlowMode::rescaled_raw:
      return "rescaled_raw";
  }
  return "?";
}

FlowMode parse_flow_mode(const std::string& s) {
  if (s == "raw") return FlowMode::raw;
  if (s == "normalized") return FlowMode::normalized;
  if (s == "rescaled_raw") return FlowMode::rescaled_raw;
  throw ConfigError("problem.mode",
                    "unknown mode '" + s +
                        "' (expected raw, normalized or rescaled_raw)");
}

void FlowConfig::validate() const {
  if (n != 1 && n != 2) throw ConfigError("problem.n", "must be 1 or 2");
  if (k < 1 || k > n) {
    throw ConfigError("problem.k", "must satisfy 1 <= k <= n (n = " +
                                       std::to_string(n) + ")");
  }
  if (mode == FlowMode::normalized && k > n - 1) {
    throw ConfigError("problem.mode",
                      "normalized flow needs k <= n-1; use rescaled_raw");
  }
  if (grid < RadialGraph::kMinIntervals || grid % 2 != 0) {
    throw ConfigError("grid.N", "must be even and >= 16");
  }
  if (!(t_max > 0.0)) throw ConfigError("stepping.t_max", "must be positive");
  if (!(dt_init > 0.0)) {
    throw ConfigError("stepping.dt_init", "must be positive");
  }
  if (!(dt_max >= dt_init)) {
    throw ConfigError("stepping.dt_max", "must be >= stepping.dt_init");
  }
  if (sample_every < 1) {
    throw ConfigError("stepping.sample_every", "must be >= 1");
  }
  if (!(cfl_coefficient > 0.0)) {
    throw ConfigError("stepping.cfl_coefficient", "must be positive");
  }
  if (!(tol_conserve > 0.0)) {
    throw ConfigError("tolerances.tol_conserve", "must be positive");
  }
  if (!(tol_round >= 0.0)) {
    throw ConfigError("tolerances.tol_round", "must be >= 0");
  }
  if (!(cone_tol >= 0.0)) {
    throw ConfigError("tolerances.cone_tol", "must be >= 0");
  }
}

// ---------------------------------------------------------------------------
// Right-hand side

std::vector<double> speed_raw(const PointwiseGeometry& geo, int k) {
  if (k < 1 || k > geo.dim) throw InvalidInput("speed_raw: need 1 <= k <= n");
  std::vector<double> f(geo.size());
  for (std::size_t i = 0; i < geo.size(); ++i) {
    const double sk = geo.sigma[i][k];
    if (!(sk > 0.0)) throw ConeExit(i, sk);
    f[i] = geo.sigma[i][k - 1] / sk;
  }
  return f;
}

double normalization_rt(const PointwiseGeometry& geo, int k, int n) {
  if (n != geo.dim) throw InvalidInput("normalization_rt: n != geometry dim");
  if (k < 1 || k > n - 1) {
    throw InvalidInput(
        "normalization_rt: need 1 <= k <= n-1 (sigma_{n+1} = 0 at k = n)");
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < geo.size(); ++i) {
    const auto& s = geo.sigma[i];
    if (!(s[k] > 0.0)) throw ConeExit(i, s[k]);
    num += geo.sigma_at(i, k + 1) * s[k - 1] / s[k] * geo.dmu[i];
    den += s[k] * geo.dmu[i];
  }
  return num / (cnk(n, k + 1) * den);
}

double rescale_rate(const PointwiseGeometry& geo, int k, int n) {
  if (k < n) return normalization_rt(geo, k, n);
  const auto f = speed_raw(geo, k);
  return geo.integrate(f) / quermass_minkowski(geo, 0, n);
}

int conserved_index(int n, int k) { return k < n ? k + 1 : 0; }

int monitored_ratio(int n, int k) { return k < n ? k : 0; }

bool monotonicity_applies(int n, int k) {
  return k <= n - 1 || (n == 1 && k == 1);
}

std::vector<double> radial_rhs(const PointwiseGeometry& geo, FlowMode mode,
                               int k) {
  auto rhs = speed_raw(geo, k);
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] *= geo.w[i] / geo.r[i];
  if (mode == FlowMode::normalized) {
    const double rt = normalization_rt(geo, k, geo.dim);
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] -= rt * geo.r[i];
  }
  return rhs;
}

double stable_dt(const PointwiseGeometry& geo, int k, double cfl) {
  double dmax = 0.0;
  for (std::size_t i = 0; i < geo.size(); ++i) {
    const auto kap = geo.curvatures(i);
    const auto gk = elem_sym_gradient(kap, k);
    const double sk = geo.sigma[i][k];
    const double skm1 = geo.sigma[i][k - 1];
    double sum = 0.0;
    for (std::size_t j = 0; j < kap.size(); ++j) {
      double gkm1 = 0.0;
      if (k >= 2) gkm1 = elem_sym_gradient(kap, k - 1)[j];
      sum += std::abs((gkm1 * sk - skm1 * gk[j]) / (sk * sk));
    }
    dmax = std::max(dmax, sum / (geo.w[i] * geo.w[i]));
  }
  return cfl * geo.h * geo.h / dmax;
}

// ---------------------------------------------------------------------------
// Stepping

namespace {

struct Stage {
  std::vector<double> rhs;
  double rate;
};

Stage evaluate(const RadialGraph& g, const FlowConfig& cfg) {
  const auto geo = compute_geometry(g);
  Stage s;
  s.rhs = radial_rhs(geo, cfg.mode, cfg.k);
  s.rate = rescale_rate(geo, cfg.k, cfg.n);
  return s;
}

// Builds the graph y + a * dy, or returns nullopt if some radius is not
// positive.
std::optional<RadialGraph> advance(const RadialGraph& g,
                                   const std::vector<double>& dy, double a) {
  std::vector<double> r(g.radii().begin(), g.radii().end());
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] += a * dy[i];
    if (!(r[i] > 0.0) || !std::isfinite(r[i])) return std::nullopt;
  }
  return RadialGraph(g.dim(), std::move(r));
}

// Monitored value of the conserved quermassintegral.
double conserved_value(const PointwiseGeometry& geo, const FlowState& s,
                       const FlowConfig& cfg) {
  const int m = conserved_index(cfg.n, cfg.k);
  double v = quermass(geo, m);
  if (cfg.mode == FlowMode::rescaled_raw) {
    v *= std::exp(-(cfg.n + 1 - m) * s.log_scale);
  }
  return v;
}

StepOutcome reject(const FlowState& state, std::string reason) {
  StepOutcome out{false, state, std::move(reason)};
  out.state.diag.rejections += 1;
  return out;
}

}  // namespace

StepOutcome step(const FlowState& state, double dt, const FlowConfig& cfg) {
  if (!(dt > 0.0)) throw InvalidInput("step: dt must be positive");
  const RadialGraph& g0 = state.graph;
  Stage k1, k2, k3, k4;
  try {
    k1 = evaluate(g0, cfg);
    auto g1 = advance(g0, k1.rhs, 0.5 * dt);
    if (!g1) return reject(state, "non-positive radius in stage 2");
    k2 = evaluate(*g1, cfg);
    auto g2 = advance(g0, k2.rhs, 0.5 * dt);
    if (!g2) return reject(state, "non-positive radius in stage 3");
    k3 = evaluate(*g2, cfg);
    auto g3 = advance(g0, k3.rhs, dt);
    if (!g3) return reject(state, "non-positive radius in stage 4");
    k4 = evaluate(*g3, cfg);
  } catch (const Error& e) {
    return reject(state, e.what());
  }

  std::vector<double> incr(k1.rhs.size());
  for (std::size_t i = 0; i < incr.size(); ++i) {
    incr[i] = (k1.rhs[i] + 2.0 * k2.rhs[i] + 2.0 * k3.rhs[i] + k4.rhs[i]) / 6.0;
  }
  auto g_new = advance(g0, incr, dt);
  if (!g_new) return reject(state, "non-positive radius after step");

  FlowState next = state;
  next.graph = *g_new;
  next.t = state.t + dt;
  next.log_scale = state.log_scale +
                   dt * (k1.rate + 2.0 * k2.rate + 2.0 * k3.rate + k4.rate) / 6.0;

  PointwiseGeometry geo_new;
  try {
    geo_new = compute_geometry(next.graph);
  } catch (const Error& e) {
    return reject(state, e.what());
  }
  const auto conv = kconvex_report(geo_new, cfg.k, cfg.cone_tol);
  if (conv.status != Convexity::strict) {
    return reject(state, "cone exit: min sigma_" + std::to_string(cfg.k) +
                             " = " + csv::format(conv.min_sigma.back()) +
                             " at node " + std::to_string(conv.worst_node));
  }
  if (cfg.mode != FlowMode::raw) {
    const auto geo_old = compute_geometry(g0);
    const double before = conserved_value(geo_old, state, cfg);
    const double after = conserved_value(geo_new, next, cfg);
    const double drift = std::abs(after - before) / std::abs(before);
    if (drift > cfg.tol_conserve * dt) {
      return reject(state, "conservation drift " + csv::format(drift) +
                               " exceeds tol_conserve * dt");
    }
  }
  next.diag.last_dt = dt;
  next.diag.accepted += 1;
  return {true, std::move(next), {}};
}

FlowState integrate_to(const FlowState& state, double t_target,
                       const FlowConfig& cfg) {
  FlowState s = state;
  double dt = cfg.dt_init;
  int streak = 0;
  while (s.t < t_target) {
    const auto geo = compute_geometry(s.graph);
    dt = std::min({dt, cfg.dt_max, stable_dt(geo, cfg.k, cfg.cfl_coefficient)});
    const double remaining = t_target - s.t;
    const bool last = dt >= remaining;
    auto out = step(s, last ? remaining : dt, cfg);
    if (!out.accepted) {
      dt *= 0.5;
      streak = 0;
      if (dt < 1e-12 * cfg.dt_init) {
        throw NumericalError("integrate_to: step size underflow: " +
                             out.reason);
      }
      continue;
    }
    s = std::move(out.state);
    if (last) s.t = t_target;
    if (++streak >= 10) {
      dt *= 2.0;
      streak = 0;
    }
  }
  return s;
}

RadialGraph rescale_state(const FlowState& state) {
  return state.graph.scaled(std::exp(-state.log_scale));
}

// ---------------------------------------------------------------------------
// Trajectories

std::vector<std::string> trajectory_columns(int n, int k) {
  std::vector<std::string> cols{"t", "dt", "log_scale"};
  const int m_top = std::min(k + 1, n);
  for (int m = 0; m <= m_top; ++m) {
    cols.push_back("V" + std::to_string(n + 1 - m));
  }
  for (int m = 0; m <= std::min(k, n - 1); ++m) {
    cols.push_back("I" + std::to_string(m));
  }
  cols.insert(cols.end(), {"r_t", "roundness_rescaled", "min_sigma_k"});
  return cols;
}

std::size_t TrajectoryRecord::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw InvalidInput("TrajectoryRecord: no column '" + name + "'");
}

std::vector<double> TrajectoryRecord::series(const std::string& name) const {
  const auto c = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row[c]);
  return out;
}

void TrajectoryRecord::write_csv(std::ostream& os) const {
  csv::write_row(os, columns);
  for (const auto& row : rows) csv::write_row(os, row);
}

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::reached_t_max:
      return "reached_t_max";
    case RunStatus::converged:
      return "converged";
    case RunStatus::cone_exit:
      return "cone_exit";
    case RunStatus::dt_underflow:
      return "dt_underflow";
  }
  return "?";
}

namespace {

std::vector<double> make_row(const FlowState& s, const PointwiseGeometry& raw,
                             const FlowConfig& cfg, double dt,
                             PointwiseGeometry& monitored) {
  const int n = cfg.n;
  const int k = cfg.k;
  const double scale = cfg.mode == FlowMode::rescaled_raw
                           ? std::exp(-s.log_scale)
                           : 1.0;
  monitored = scale == 1.0 ? raw : compute_geometry(s.graph.scaled(scale));

  std::vector<double> row{s.t, dt, s.log_scale};
  std::vector<double> v;
  const int m_top = std::min(k + 1, n);
  for (int m = 0; m <= m_top; ++m) {
    v.push_back(quermass(raw, m) * std::pow(scale, n + 1 - m));
  }
  row.insert(row.end(), v.begin(), v.end());
  for (int m = 0; m <= std::min(k, n - 1); ++m) {
    row.push_back(std::pow(v[m], 1.0 / (n + 1 - m)) /
                  std::pow(v[m + 1], 1.0 / (n - m)));
  }
  row.push_back(rescale_rate(raw, k, n));
  row.push_back(roundness(s.graph));
  double min_sk = raw.sigma[0][k];
  for (std::size_t i = 1; i < raw.size(); ++i) {
    min_sk = std::min(min_sk, raw.sigma[i][k]);
  }
  row.push_back(min_sk * std::pow(scale, -k));
  return row;
}

}  // namespace

RunResult run(const FlowConfig& cfg, const RadialGraph& initial,
              const SampleObserver& observer) {
  cfg.validate();
  if (initial.dim() != cfg.n) {
    throw InvalidInput("run: initial surface has dim " +
                       std::to_string(initial.dim()) + ", config n = " +
                       std::to_string(cfg.n));
  }
  const auto geo0 = compute_geometry(initial);
  const auto conv = kconvex_report(geo0, cfg.k, cfg.cone_tol);
  if (conv.status != Convexity::strict) {
    throw InvalidInput("run: initial surface is not strictly " +
                       std::to_string(cfg.k) + "-convex (min sigma_k = " +
                       csv::format(conv.min_sigma.back()) + ")");
  }

  RunResult result{{cfg.n, cfg.k, cfg.mode, trajectory_columns(cfg.n, cfg.k), {}},
                   FlowState(initial),
                   RunStatus::reached_t_max,
                   {}};
  FlowState& state = result.final_state;

  auto record = [&](const PointwiseGeometry& raw, double dt) {
    PointwiseGeometry monitored;
    result.record.rows.push_back(make_row(state, raw, cfg, dt, monitored));
    if (observer) observer(result.record.rows.size() - 1, state, monitored);
  };
  record(geo0, 0.0);

  double dt = cfg.dt_init;
  const double dt_floor = 1e-12 * cfg.dt_init;
  int streak = 0;
  std::size_t since_sample = 0;
  PointwiseGeometry geo = geo0;
  bool recorded_last = true;

  while (state.t < cfg.t_max) {
    if (cfg.tol_round > 0.0 && roundness(state.graph) < cfg.tol_round) {
      result.status = RunStatus::converged;
      break;
    }
    const double cap = stable_dt(geo, cfg.k, cfg.cfl_coefficient);
    dt = std::min(dt, cap);
    const double remaining = cfg.t_max - state.t;
    const bool last = dt >= remaining;
    const double dt_try = last ? remaining : dt;

    auto out = step(state, dt_try, cfg);
    if (!out.accepted) {
      state.diag.rejections = out.state.diag.rejections;
      dt = 0.5 * dt_try;
      streak = 0;
      if (dt < dt_floor) {
        result.status = out.reason.rfind("cone exit", 0) == 0
                            ? RunStatus::cone_exit
                            : RunStatus::dt_underflow;
        result.message = "step size underflow at t = " + csv::format(state.t) +
                         ": " + out.reason;
        break;
      }
      continue;
    }
    const auto rejections = state.diag.rejections;
    state = std::move(out.state);
    state.diag.rejections = rejections;
    if (last) state.t = cfg.t_max;
    geo = compute_geometry(state.graph);
    recorded_last = false;
    if (++since_sample >= static_cast<std::size_t>(cfg.sample_every)) {
      record(geo, dt_try);
      since_sample = 0;
      recorded_last = true;
    }
    if (++streak >= 10) {
      dt = std::min({2.0 * dt, cfg.dt_max,
                     stable_dt(geo, cfg.k, cfg.cfl_coefficient)});
      streak = 0;
    }
  }
  if (!recorded_last) record(geo, state.diag.last_dt);
  return result;
}

}  // namespace quermass
