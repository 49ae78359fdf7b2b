#pragma once

// Numerical checks of the evolution identities, the integral identities and
// the quermassintegral inequalities, each producing IdentityReport rows.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "quermass/flow.hpp"
#include "quermass/geometry.hpp"
#include "quermass/lagrangian.hpp"

namespace quermass {

struct IdentityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_residual = 0.0;
  double rel_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::size_t resolution = 0;  // grid points, 0 if not applicable
  double dt = 0.0;             // time resolution, 0 if not applicable
  std::string note;
};

/// Fills abs/rel residuals from lhs, rhs and `scale` (the denominator of the
/// relative residual) and sets pass = rel_residual <= tolerance.
IdentityReport make_report(std::string name, double lhs, double rhs,
                           double scale, double tolerance);

/// check,lhs,rhs,abs_residual,rel_residual,tolerance,pass
void write_report_csv(std::ostream& os, std::span<const IdentityReport> rows);
/// One line per report: PASS/FAIL, name, residuals.
void print_reports(std::ostream& os, std::span<const IdentityReport> rows);
bool all_pass(std::span<const IdentityReport> rows);

// -- pointwise evolution laws -------------------------------------------------

/// Residuals of the pointwise evolution laws under X_t = (sigma_{k-1} /
/// sigma_k) nu. The curve is advanced to dt and 2 dt and the time
/// derivatives at dt are centered differences at fixed material points.
/// Report names:
///   prop1.metric, prop1.area_element, prop1.second_form, prop1.weingarten,
///   prop1.sigma_<m> for 1 <= m <= dim, prop1.normal
/// and in dim 2 additionally prop1.metric_rot, prop1.second_form_rot,
/// prop1.weingarten_rot for the rotational direction. Each rel_residual is
/// the sup over nodes (poles excluded in dim 2) divided by the sup of the
/// right-hand side. Throws InvalidInput unless every node is strictly
/// k-convex.
std::vector<IdentityReport> check_prop1_pointwise(const LagrangianCurve& curve,
                                                  int k, double dt,
                                                  Stencil stencil,
                                                  double tolerance);

/// Empirical order under simultaneous halving of dt and h: for each identity
/// of check_prop1_pointwise, the residual ratios between successive levels.
/// `make_curve(M)` builds the curve with M points; levels use M0, 2 M0, ...
/// and dt0, dt0/2, .... Reports carry lhs = first ratio, rhs = last ratio;
/// pass iff every ratio lies in [lo, hi].
struct RichardsonSpec {
  std::size_t m0 = 256;
  double dt0 = 1e-3;
  int levels = 3;
  double lo = 3.5;
  double hi = 4.5;
};
std::vector<IdentityReport> check_prop1_richardson(
    const std::function<LagrangianCurve(std::size_t)>& make_curve, int k,
    Stencil stencil, const RichardsonSpec& spec);

// -- integral identities ------------------------------------------------------

/// d/dt int sigma_l dmu against (l+1) int sigma_{l+1} sigma_{k-1}/sigma_k dmu
/// along the raw flow, sampled at t = 0, dt, ..., (samples-1) dt, with the
/// time derivative by centered differences. For l = n the report instead
/// compares int sigma_n dmu at every sample with |S^n|.
struct LemmaSpec {
  int k = 1;
  int l = 0;
  double dt = 1e-3;
  int samples = 5;
  double tolerance = 1e-3;        // relative, l < n
  double topo_tolerance = 1e-6;   // relative, l = n
  double cfl_coefficient = 0.4;
};
IdentityReport check_lemma_integral(const RadialGraph& initial,
                                    const LemmaSpec& spec);

/// d/ds int sigma_l(X + s rho nu) dmu at s = 0 by centered differences with
/// s = probe * curve scale, against (l+1) int sigma_{l+1} rho dmu, on the
/// Lagrangian representation with spectral stencils. rho has one value per
/// curve node. Throws InvalidInput if a probe curve is not strictly
/// starshaped.
IdentityReport check_first_variation(const LagrangianCurve& curve,
                                     std::span<const double> rho, int l,
                                     double probe = 1e-4,
                                     double tolerance = 1e-3);
/// Same with rho given on the radial grid (N values in dim 1, N + 1 in dim 2).
IdentityReport check_first_variation(const RadialGraph& g,
                                     std::span<const double> rho, int l,
                                     double probe = 1e-4,
                                     double tolerance = 1e-3);

// -- inequalities and monotonicity ---------------------------------------------

/// For 0 <= m <= min(k, n-1): (V_{n+1-m}/V_{n+1-m}(B))^{1/(n+1-m)} against
/// (V_{n-m}/V_{n-m}(B))^{1/(n-m)}; pass iff lhs <= rhs (1 + tolerance).
/// Throws InvalidInput if the surface is not (non-strictly) k-convex.
std::vector<IdentityReport> check_af_chain(const PointwiseGeometry& geo, int k,
                                           int n, double tolerance = 1e-6,
                                           double cone_tol = 1e-10);

/// Monitored ratio nondecreasing (slack), conserved quermassintegral drift
/// per unit time, and terminal ratio against the ball. The ratio report is
/// omitted when monotonicity is not established for (n, k). Throws
/// InvalidInput for raw-mode records.
struct MonotoneSpec {
  double slack = 1e-10;
  double drift_per_time = 1e-6;
  double terminal = 1e-4;
};
std::vector<IdentityReport> check_monotone_series(const TrajectoryRecord& rec,
                                                  const MonotoneSpec& spec);

// -- algebra and discretization --------------------------------------------------

/// Newton gap, Euler identity sum lambda_i d sigma_m/d lambda_i = m sigma_m
/// and the polarization identity on `samples` random vectors (dimension
/// 2..8, entries uniform in [-1, 1]), plus the MacLaurin power bound on the
/// members of Gamma_k among them.
std::vector<IdentityReport> check_symfunc_identities(std::size_t samples,
                                                     std::uint64_t seed,
                                                     double tolerance = 1e-12);

/// quermass_sigma(m) against quermass_minkowski(m) for 1 <= m <= n.
std::vector<IdentityReport> check_minkowski(const PointwiseGeometry& geo,
                                            double tolerance = 1e-6);

/// Curvatures from the radial formulas against the shape operator of the
/// embedded points (second-order stencils), on g and on its 2x refinement.
/// The report's lhs is the observed order of the sup difference, which must
/// be at least min_order; when both agree to rounding it compares the gap
/// with zero instead.
std::vector<IdentityReport> check_curvature_oracle(const RadialGraph& g,
                                                   double min_order = 1.8);

/// Quermassintegrals before and after a radial -> Lagrangian -> radial round
/// trip at the same resolution.
std::vector<IdentityReport> check_round_trip(const RadialGraph& g,
                                             double tolerance = 1e-8);

}  // namespace quermass
