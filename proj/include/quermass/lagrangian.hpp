#pragma once

// Closed planar curves sampled at material points, moved by pure normal
// motion. dim 1: the curve itself. dim 2: the full meridian section of an
// axisymmetric surface, drawn in the (z, rho) half-plane and mirrored, so
// that the polar angle p of the profile runs over [0, 2pi).

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "quermass/geometry.hpp"

namespace quermass {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

enum class Stencil {
  central2,  // second-order centered, second derivative as D(D(.))
  spectral,  // trigonometric differentiation
};

class LagrangianCurve {
 public:
  /// Points in counterclockwise order. dim 2 needs an even count and mirror
  /// symmetry y -> -y between nodes i and M - i.
  LagrangianCurve(int dim, std::vector<Point2> points);

  /// Samples the graph at its own grid angles (M = N for dim 1, 2N for
  /// dim 2).
  static LagrangianCurve from_radial(const RadialGraph& g);

  /// Radial function at the uniform grid with the given number of intervals,
  /// found by root finding on the trigonometric interpolant.
  /// Throws InvalidInput if the curve is not strictly starshaped.
  RadialGraph to_radial(std::size_t intervals) const;

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return pts_.size(); }
  double spacing() const noexcept;
  std::span<const Point2> points() const noexcept { return pts_; }
  const Point2& operator[](std::size_t i) const { return pts_[i]; }

  /// Maximum distance from the origin.
  double scale() const noexcept;

  /// min over nodes of x y_p - y x_p; positive iff strictly starshaped and
  /// positively oriented (up to the stencil).
  double min_star_cross(Stencil s) const;

  /// Positive star cross product, and the node polygon turns exactly once
  /// around the origin with every node ahead of the previous one.
  bool is_starshaped() const;

 private:
  int dim_;
  std::vector<Point2> pts_;
};

/// Per-node geometry of a Lagrangian curve. Index 0 of kappa is the
/// in-plane curvature; index 1 (dim 2) is the rotational one nu_y / y,
/// continued to the poles.
struct CurveGeometry {
  int dim = 1;
  double h = 0.0;
  std::vector<Point2> xp, xpp, normal;
  std::vector<double> g;    // |X_p|^2
  std::vector<double> h11;  // -<X_pp, nu>
  std::vector<std::array<double, 2>> kappa;
  std::vector<double> dmu;  // quadrature weight times area density
  std::vector<bool> pole;   // dim 2: y = 0 nodes

  std::size_t size() const noexcept { return g.size(); }
  std::span<const double> curvatures(std::size_t i) const noexcept {
    return {kappa[i].data(), static_cast<std::size_t>(dim)};
  }
  double integrate(std::span<const double> f) const;
};

CurveGeometry curve_geometry(const LagrangianCurve& c, Stencil s);

/// First and second derivative in the material parameter.
std::vector<double> curve_derivative(std::span<const double> f, double h,
                                     Stencil s, int order);

/// sum sigma_l dmu; sigma_0 gives length (dim 1) or area (dim 2).
double curve_sigma_integral(const CurveGeometry& geo, int l);

/// X + s rho nu per node.
LagrangianCurve displace_normal(const LagrangianCurve& c,
                                const CurveGeometry& geo,
                                std::span<const double> rho, double s);

/// One classical RK4 step of X_t = (sigma_{k-1}/sigma_k) nu. dt may be
/// negative. Throws ConeExit where sigma_k <= 0.
LagrangianCurve normal_flow_step(const LagrangianCurve& c, int k, double dt,
                                 Stencil s);

/// Explicit stability bound cfl * h^2 / max_i (sum_j |dF/dkappa_j| / g_i),
/// divided further by pi^2 for spectral stencils.
double curve_stable_dt(const CurveGeometry& geo, int k, Stencil s, double cfl);

/// Advances by dt (either sign) in equal RK4 substeps no longer than
/// curve_stable_dt at the start.
LagrangianCurve normal_flow_advance(const LagrangianCurve& c, int k, double dt,
                                    Stencil s, double cfl = 0.4);

}  // namespace quermass
