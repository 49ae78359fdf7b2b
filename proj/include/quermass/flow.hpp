#pragma once

// Inverse curvature flow X_t = (sigma_{k-1}/sigma_k) nu on radial graphs, raw
// and normalized, with RK4 stepping and accept/reject control.

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "quermass/error.hpp"
#include "quermass/geometry.hpp"

namespace quermass {

/// sigma_k <= 0 somewhere: the speed sigma_{k-1}/sigma_k is undefined.
class ConeExit : public NumericalError {
 public:
  ConeExit(std::size_t node, double value);
  std::size_t node() const noexcept { return node_; }
  double value() const noexcept { return value_; }

 private:
  std::size_t node_;
  double value_;
};

enum class FlowMode {
  raw,           // X_t = F nu
  normalized,    // X_t = (F - r(t) u) nu, keeps V_{n-k} fixed; k <= n-1
  rescaled_raw,  // raw flow, monitored through exp(-int r) X
};

std::string to_string(FlowMode m);
FlowMode parse_flow_mode(const std::string& s);

struct FlowConfig {
  int n = 1;
  int k = 1;
  FlowMode mode = FlowMode::raw;
  std::size_t grid = 256;
  double t_max = 1.0;
  double dt_init = 1e-3;
  double dt_max = 1e-2;
  int sample_every = 1;
  double tol_conserve = 1e-6;
  double tol_round = 0.0;  // 0 disables the roundness stop
  double cfl_coefficient = 0.4;
  double cone_tol = 1e-10;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

struct StepDiagnostics {
  double last_dt = 0.0;
  std::size_t rejections = 0;
  std::size_t accepted = 0;
};

struct FlowState {
  double t = 0.0;
  RadialGraph graph;
  double log_scale = 0.0;  // int_0^t r(s) ds
  StepDiagnostics diag;

  explicit FlowState(RadialGraph g) : graph(std::move(g)) {}
};

/// sigma_{k-1}/sigma_k per node. Throws ConeExit if some sigma_k <= 0.
std::vector<double> speed_raw(const PointwiseGeometry& geo, int k);

/// int sigma_{k+1} sigma_{k-1}/sigma_k dmu / (C_{n,k+1} int sigma_k dmu);
/// the rate that keeps V_{n-k} of exp(-int r) X constant. 1 <= k <= n-1.
double normalization_rt(const PointwiseGeometry& geo, int k, int n);

/// Rate used for the rescaling exp(-int r): normalization_rt for k < n, and
/// int F dmu / V_{n+1} (holding V_{n+1}) for k == n.
double rescale_rate(const PointwiseGeometry& geo, int k, int n);

/// Index m of the quermassintegral V_{n+1-m} held fixed by the rescaling:
/// k + 1 for k < n, 0 for k == n.
int conserved_index(int n, int k);

/// Index of the isoperimetric ratio shown monotone along the flow: k for
/// k < n, 0 for k == n.
int monitored_ratio(int n, int k);

/// True when monotonicity of the monitored ratio is established: k <= n-1,
/// or n == k == 1.
bool monotonicity_applies(int n, int k);

/// dr/dt on the radial grid: F w / r, minus r(t) r in normalized mode.
std::vector<double> radial_rhs(const PointwiseGeometry& geo, FlowMode mode,
                               int k);

/// Heuristic explicit-stability bound cfl * h^2 / max_i D_i with
/// D_i = sum_j |dF/dkappa_j| / w_i^2, the leading diffusion coefficient of
/// the linearized radial equation in grid coordinates.
double stable_dt(const PointwiseGeometry& geo, int k, double cfl);

struct StepOutcome {
  bool accepted = false;
  FlowState state;
  std::string reason;  // why a step was rejected
};

/// One classical RK4 step with geometry recomputed at every stage.
StepOutcome step(const FlowState& state, double dt, const FlowConfig& config);

/// Steps with the same controller as run() until exactly t_target, without
/// recording. Throws NumericalError on step-size underflow.
FlowState integrate_to(const FlowState& state, double t_target,
                       const FlowConfig& config);

/// exp(-log_scale) times the state's graph.
RadialGraph rescale_state(const FlowState& state);

struct TrajectoryRecord {
  int n = 1;
  int k = 1;
  FlowMode mode = FlowMode::raw;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const;
  std::vector<double> series(const std::string& name) const;
  void write_csv(std::ostream& os) const;
};

/// Column names for a trajectory of the given (n, k).
std::vector<std::string> trajectory_columns(int n, int k);

enum class RunStatus { reached_t_max, converged, cone_exit, dt_underflow };
std::string to_string(RunStatus s);

struct RunResult {
  TrajectoryRecord record;
  FlowState final_state;
  RunStatus status = RunStatus::reached_t_max;
  std::string message;
  bool ok() const noexcept {
    return status == RunStatus::reached_t_max ||
           status == RunStatus::converged;
  }
};

/// Called for every recorded row with the state and the geometry of the
/// monitored surface (rescaled in rescaled_raw mode).
using SampleObserver = std::function<void(
    std::size_t row, const FlowState&, const PointwiseGeometry& monitored)>;

/// Integrates to t_max, or until the roundness drops below tol_round.
/// Throws InvalidInput when the initial surface is not strictly k-convex;
/// numerical breakdown is reported through RunResult::status.
RunResult run(const FlowConfig& config, const RadialGraph& initial,
              const SampleObserver& observer = {});

}  // namespace quermass
