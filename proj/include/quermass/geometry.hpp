#pragma once

// Starshaped hypersurfaces as radial graphs over S^n (n = 1, or n = 2 with
// axial symmetry), their pointwise geometry, and quermassintegrals.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace quermass {

/// Positive radial function sampled on S^1 (dim 1: N points on [0, 2pi),
/// periodic) or on a meridian of S^2 (dim 2: N + 1 points on [0, pi],
/// axisymmetric, even at both poles).
class RadialGraph {
 public:
  static constexpr std::size_t kMinIntervals = 16;

  RadialGraph(int dim, std::vector<double> radii);

  int dim() const noexcept { return dim_; }
  /// Number of grid intervals N.
  std::size_t intervals() const noexcept;
  std::size_t size() const noexcept { return r_.size(); }
  double spacing() const noexcept;
  /// theta_i (dim 1) or phi_i (dim 2).
  double coordinate(std::size_t i) const noexcept;
  std::span<const double> radii() const noexcept { return r_; }
  double operator[](std::size_t i) const { return r_[i]; }

  /// Returns a copy with every radius multiplied by s > 0.
  RadialGraph scaled(double s) const;

 private:
  int dim_;
  std::vector<double> r_;
};

namespace shape {
struct Sphere {
  double R = 1.0;
};
/// x^2/a^2 + y^2/b^2 = 1, dim 1 only.
struct Ellipse {
  double a = 2.0;
  double b = 1.0;
};
/// (x^2 + y^2)/a^2 + z^2/c^2 = 1, dim 2 only.
struct EllipsoidOfRevolution {
  double a = 1.5;
  double c = 1.0;
};
/// R (1 + eps cos(l t)) for a fixed mode l, or, when mode is empty, a random
/// combination of modes 2..5 drawn from `seed` with sup-norm <= eps.
struct PerturbedSphere {
  double R = 1.0;
  double eps = 0.1;
  std::optional<int> mode;
  std::uint64_t seed = 0;
};
}  // namespace shape

using ShapeSpec = std::variant<shape::Sphere, shape::Ellipse,
                               shape::EllipsoidOfRevolution,
                               shape::PerturbedSphere>;

std::string shape_name(const ShapeSpec& spec);

RadialGraph make_shape(const ShapeSpec& spec, int dim, std::size_t intervals);

/// Per-node geometric data of a radial graph.
struct PointwiseGeometry {
  int dim = 1;
  double h = 0.0;
  std::vector<double> coord;
  std::vector<double> r, dr, d2r;
  std::vector<double> w;  // sqrt(r^2 + r'^2)
  std::vector<std::array<double, 2>> kappa;
  std::vector<double> u;    // support function r^2 / w
  std::vector<double> dmu;  // quadrature weight times area density
  std::vector<std::array<double, 3>> sigma;  // sigma_0 .. sigma_dim

  std::size_t size() const noexcept { return r.size(); }
  std::span<const double> curvatures(std::size_t i) const noexcept {
    return {kappa[i].data(), static_cast<std::size_t>(dim)};
  }
  double sigma_at(std::size_t i, int m) const {
    return m <= dim ? sigma[i][m] : 0.0;
  }
  /// sum_i f_i dmu_i
  double integrate(std::span<const double> f) const;
};

/// Fourth-order centered differences (periodic in dim 1, even reflection at
/// the poles in dim 2). Throws NumericalError on NaN.
PointwiseGeometry compute_geometry(const RadialGraph& g);

/// Quadrature weights on the interior nodes phi_i = i pi / N of [0, pi] for
/// integrands that are odd about both poles (area density times sin phi).
/// Exact for sin-polynomials up to degree N - 1. Pole entries are zero.
const std::vector<double>& odd_pole_weights(std::size_t intervals);

/// C_{n,m} sum sigma_{m-1} dmu = V_{n+1-m}; 1 <= m <= n.
double quermass_sigma(const PointwiseGeometry& geo, int m, int n);
/// sum u sigma_m dmu = V_{n+1-m}; 0 <= m <= n.
double quermass_minkowski(const PointwiseGeometry& geo, int m, int n);
/// V_{n+1-m} by the sigma form for m >= 1, Minkowski form for m = 0.
double quermass(const PointwiseGeometry& geo, int m);

/// V_{n+1-k}^{1/(n+1-k)} / V_{n-k}^{1/(n-k)}, 0 <= k <= n-1.
double iso_ratio(const PointwiseGeometry& geo, int k, int n);
/// The same ratio for the unit ball.
double iso_ratio_ball(int n, int k);
/// V_{n+1-m}(B) = binom(n, m) |S^n|.
double quermass_ball(int n, int m);
/// |S^n| for n in {1, 2}.
double unit_sphere_area(int n);

enum class Convexity { strict, nonstrict, violated };

struct KConvexReport {
  int k = 0;
  std::vector<double> min_sigma;  // min_sigma[m-1] = min over nodes of sigma_m
  std::size_t worst_node = 0;     // argmin of sigma_k
  Convexity status = Convexity::strict;
};

/// Minimum of sigma_1..sigma_k over the grid. Non-strict admits
/// sigma_m >= -cone_tol * max|kappa|^m.
KConvexReport kconvex_report(const PointwiseGeometry& geo, int k,
                             double cone_tol = 1e-10);
std::string to_string(Convexity c);

/// (max r - min r) / mean r, the mean taken over the sphere measure.
double roundness(const RadialGraph& g);
/// Mean radius over the sphere measure.
double mean_radius(const RadialGraph& g);

/// Trigonometric resampling to factor * N intervals.
RadialGraph refine(const RadialGraph& g, int factor);

/// CSV with header grid_coordinate,r,kappa_1[,kappa_2],u,sigma_k.
void write_snapshot_csv(std::ostream& os, const PointwiseGeometry& geo, int k);

}  // namespace quermass
