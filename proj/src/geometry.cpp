#include "quermass/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <random>

#include "quermass/csv.hpp"
#include "quermass/error.hpp"
#include "quermass/spectral.hpp"
#include "quermass/symfunc.hpp"

namespace quermass {

using std::numbers::pi;

// ---------------------------------------------------------------------------
// RadialGraph

RadialGraph::RadialGraph(int dim, std::vector<double> radii)
    : dim_(dim), r_(std::move(radii)) {
  if (dim_ != 1 && dim_ != 2) {
    throw InvalidInput("RadialGraph: dim must be 1 or 2");
  }
  const std::size_t n = intervals();
  if (r_.size() < (dim_ == 1 ? 1u : 2u) || n < kMinIntervals) {
    throw InvalidInput("RadialGraph: need N >= 16 grid intervals");
  }
  if (n % 2 != 0) {
    throw InvalidInput("RadialGraph: N must be even");
  }
  for (double v : r_) {
    if (!std::isfinite(v) || !(v > 0.0)) {
      throw InvalidInput("RadialGraph: radius must be positive and finite");
    }
  }
  if (dim_ == 2) {
    // One-sided slope at each pole; an even profile has zero slope.
    const double h = spacing();
    const double rmax = *std::max_element(r_.begin(), r_.end());
    auto slope = [&](std::size_t i0, int dir) {
      const auto at = [&](int j) { return r_[i0 + dir * j]; };
      return (-25 * at(0) + 48 * at(1) - 36 * at(2) + 16 * at(3) - 3 * at(4)) /
             (12 * h);
    };
    // The one-sided stencil is itself inexact on coarse grids, so the
    // tolerance grows with the largest slope of the profile.
    double dmax = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      dmax = std::max(dmax, std::abs(r_[i + 1] - r_[i - 1]) / (2 * h));
    }
    const double tol = 1e-2 * rmax + 0.25 * dmax;
    if (std::abs(slope(0, 1)) > tol || std::abs(slope(n, -1)) > tol) {
      throw InvalidInput(
          "RadialGraph: dim-2 profile must be even at the poles (r'(0) = "
          "r'(pi) = 0)");
    }
  }
}

std::size_t RadialGraph::intervals() const noexcept {
  return dim_ == 1 ? r_.size() : r_.size() - 1;
}

double RadialGraph::spacing() const noexcept {
  const double span = dim_ == 1 ? 2.0 * pi : pi;
  return span / static_cast<double>(intervals());
}

double RadialGraph::coordinate(std::size_t i) const noexcept {
  return static_cast<double>(i) * spacing();
}

RadialGraph RadialGraph::scaled(double s) const {
  std::vector<double> r(r_);
  for (auto& v : r) v *= s;
  return RadialGraph(dim_, std::move(r));
}

// ---------------------------------------------------------------------------
// Shapes

std::string shape_name(const ShapeSpec& spec) {
  struct Visitor {
    std::string operator()(const shape::Sphere&) const { return "sphere"; }
    std::string operator()(const shape::Ellipse&) const { return "ellipse"; }
    std::string operator()(const shape::EllipsoidOfRevolution&) const {
      return "ellipsoid_of_revolution";
    }
    std::string operator()(const shape::PerturbedSphere&) const {
      return "perturbed_sphere";
    }
  };
  return std::visit(Visitor{}, spec);
}

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidInput(std::string("make_shape: ") + what +
                       " must be positive");
  }
}

}  // namespace

RadialGraph make_shape(const ShapeSpec& spec, int dim, std::size_t intervals) {
  if (dim != 1 && dim != 2) {
    throw InvalidInput("make_shape: dim must be 1 or 2");
  }
  const std::size_t count = dim == 1 ? intervals : intervals + 1;
  const double h = (dim == 1 ? 2.0 * pi : pi) / static_cast<double>(intervals);
  std::vector<double> r(count);

  if (const auto* s = std::get_if<shape::Sphere>(&spec)) {
    require_positive(s->R, "R");
    std::fill(r.begin(), r.end(), s->R);
  } else if (const auto* e = std::get_if<shape::Ellipse>(&spec)) {
    if (dim != 1) throw InvalidInput("make_shape: ellipse needs dim 1");
    require_positive(e->a, "a");
    require_positive(e->b, "b");
    for (std::size_t i = 0; i < count; ++i) {
      const double t = static_cast<double>(i) * h;
      const double c = std::cos(t), s = std::sin(t);
      r[i] = e->a * e->b /
             std::sqrt(e->b * e->b * c * c + e->a * e->a * s * s);
    }
  } else if (const auto* q = std::get_if<shape::EllipsoidOfRevolution>(&spec)) {
    if (dim != 2) throw InvalidInput("make_shape: ellipsoid needs dim 2");
    require_positive(q->a, "a");
    require_positive(q->c, "c");
    for (std::size_t i = 0; i < count; ++i) {
      const double phi = static_cast<double>(i) * h;
      const double c = std::cos(phi), s = std::sin(phi);
      r[i] = q->a * q->c /
             std::sqrt(q->c * q->c * s * s + q->a * q->a * c * c);
    }
  } else {
    const auto& p = std::get<shape::PerturbedSphere>(spec);
    require_positive(p.R, "R");
    if (!(p.eps >= 0.0) || !(p.eps < 1.0)) {
      throw InvalidInput("make_shape: perturbation eps must lie in [0, 1)");
    }
    std::vector<int> modes;
    std::vector<double> amps, phases;
    if (p.mode) {
      if (*p.mode < 0) throw InvalidInput("make_shape: negative mode");
      modes = {*p.mode};
      amps = {1.0};
      phases = {0.0};
    } else {
      std::mt19937_64 rng(p.seed);
      double total = 0.0;
      for (int l = 2; l <= 5; ++l) {
        const double a = (2.0 * uniform01(rng) - 1.0) / l;
        const double ph = 2.0 * pi * uniform01(rng);
        modes.push_back(l);
        amps.push_back(a);
        // Axisymmetric profiles must stay even about the poles.
        phases.push_back(dim == 1 ? ph : 0.0);
        total += std::abs(a);
      }
      for (auto& a : amps) a /= total;
    }
    for (std::size_t i = 0; i < count; ++i) {
      const double t = static_cast<double>(i) * h;
      double pert = 0.0;
      for (std::size_t j = 0; j < modes.size(); ++j) {
        pert += amps[j] * std::cos(modes[j] * t + phases[j]);
      }
      r[i] = p.R * (1.0 + p.eps * pert);
    }
    if (*std::min_element(r.begin(), r.end()) <= 0.0) {
      throw InvalidInput("make_shape: perturbation makes min r <= 0");
    }
  }
  return RadialGraph(dim, std::move(r));
}

// ---------------------------------------------------------------------------
// Pointwise geometry

const std::vector<double>& odd_pole_weights(std::size_t intervals) {
  static std::mutex mutex;
  static std::map<std::size_t, std::vector<double>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(intervals);
  if (it != cache.end()) return it->second;

  const std::size_t n = intervals;
  std::vector<double> w(n + 1, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 1; j < n; j += 2) {
      acc += std::sin(static_cast<double>(j * i) * pi / n) * (2.0 / j);
    }
    w[i] = 2.0 / n * acc;
  }
  return cache.emplace(n, std::move(w)).first->second;
}

double PointwiseGeometry::integrate(std::span<const double> f) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += f[i] * dmu[i];
  return acc;
}

PointwiseGeometry compute_geometry(const RadialGraph& g) {
  PointwiseGeometry geo;
  geo.dim = g.dim();
  geo.h = g.spacing();
  const std::size_t count = g.size();
  const std::size_t n = g.intervals();
  const auto r = g.radii();
  const double h = geo.h;

  auto at = [&](long j) -> double {
    if (g.dim() == 1) {
      const long m = static_cast<long>(n);
      return r[static_cast<std::size_t>(((j % m) + m) % m)];
    }
    if (j < 0) j = -j;
    if (j > static_cast<long>(n)) j = 2 * static_cast<long>(n) - j;
    return r[static_cast<std::size_t>(j)];
  };

  geo.coord.resize(count);
  geo.r.assign(r.begin(), r.end());
  geo.dr.resize(count);
  geo.d2r.resize(count);
  geo.w.resize(count);
  geo.kappa.resize(count);
  geo.u.resize(count);
  geo.dmu.resize(count);
  geo.sigma.resize(count);

  const std::vector<double>* weights =
      g.dim() == 2 ? &odd_pole_weights(n) : nullptr;

  for (std::size_t i = 0; i < count; ++i) {
    const long j = static_cast<long>(i);
    const double rm2 = at(j - 2), rm1 = at(j - 1), r0 = at(j);
    const double rp1 = at(j + 1), rp2 = at(j + 2);
    // Written as differences so that a constant profile differentiates to 0
    // exactly.
    const double d1 = ((rm2 - rp2) + 8.0 * (rp1 - rm1)) / (12.0 * h);
    const double d2 =
        (16.0 * (rp1 + rm1) - (rp2 + rm2) - 30.0 * r0) / (12.0 * h * h);
    const double w2 = r0 * r0 + d1 * d1;
    const double w = std::sqrt(w2);
    const double k1 = (r0 * r0 + 2.0 * d1 * d1 - r0 * d2) / (w2 * w);

    const double t = g.coordinate(i);
    geo.coord[i] = t;
    geo.dr[i] = d1;
    geo.d2r[i] = d2;
    geo.w[i] = w;
    geo.u[i] = r0 * r0 / w;

    auto& kap = geo.kappa[i];
    auto& sig = geo.sigma[i];
    if (g.dim() == 1) {
      kap = {k1, 0.0};
      sig = {1.0, k1, 0.0};
      geo.dmu[i] = w * h;
    } else {
      double k2 = k1;  // limit value on the axis
      if (i != 0 && i != n) {
        k2 = (1.0 - d1 / r0 * std::cos(t) / std::sin(t)) / w;
      }
      kap = {k1, k2};
      sig = {1.0, k1 + k2, k1 * k2};
      geo.dmu[i] = (*weights)[i] * 2.0 * pi * r0 * std::sin(t) * w;
    }
    if (!std::isfinite(k1) || !std::isfinite(kap[1]) ||
        !std::isfinite(geo.dmu[i])) {
      throw NumericalError("compute_geometry: non-finite value at node " +
                           std::to_string(i));
    }
  }
  return geo;
}

// ---------------------------------------------------------------------------
// Quermassintegrals

double quermass_sigma(const PointwiseGeometry& geo, int m, int n) {
  if (n != geo.dim) throw InvalidInput("quermass_sigma: n != geometry dim");
  if (m < 1 || m > n) {
    throw InvalidInput(
        "quermass_sigma: need 1 <= m <= n (V_{n+1} only has the Minkowski "
        "form)");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < geo.size(); ++i) {
    acc += geo.sigma[i][m - 1] * geo.dmu[i];
  }
  return cnk(n, m) * acc;
}

double quermass_minkowski(const PointwiseGeometry& geo, int m, int n) {
  if (n != geo.dim) throw InvalidInput("quermass_minkowski: n != geometry dim");
  if (m < 0 || m > n) throw InvalidInput("quermass_minkowski: need 0 <= m <= n");
  double acc = 0.0;
  for (std::size_t i = 0; i < geo.size(); ++i) {
    acc += geo.u[i] * geo.sigma[i][m] * geo.dmu[i];
  }
  return acc;
}

double quermass(const PointwiseGeometry& geo, int m) {
  return m == 0 ? quermass_minkowski(geo, 0, geo.dim)
                : quermass_sigma(geo, m, geo.dim);
}

double iso_ratio(const PointwiseGeometry& geo, int k, int n) {
  if (n != geo.dim) throw InvalidInput("iso_ratio: n != geometry dim");
  if (k < 0 || k > n - 1) {
    throw InvalidInput("iso_ratio: need 0 <= k <= n-1 (k = n has exponent 1/0)");
  }
  const double upper = quermass(geo, k);
  const double lower = quermass(geo, k + 1);
  return std::pow(upper, 1.0 / (n + 1 - k)) / std::pow(lower, 1.0 / (n - k));
}

double unit_sphere_area(int n) {
  if (n == 1) return 2.0 * pi;
  if (n == 2) return 4.0 * pi;
  throw InvalidInput("unit_sphere_area: n must be 1 or 2");
}

double quermass_ball(int n, int m) {
  if (m < 0 || m > n) throw InvalidInput("quermass_ball: need 0 <= m <= n");
  return binomial(n, m) * unit_sphere_area(n);
}

double iso_ratio_ball(int n, int k) {
  if (k < 0 || k > n - 1) {
    throw InvalidInput("iso_ratio_ball: need 0 <= k <= n-1");
  }
  return std::pow(quermass_ball(n, k), 1.0 / (n + 1 - k)) /
         std::pow(quermass_ball(n, k + 1), 1.0 / (n - k));
}

// ---------------------------------------------------------------------------
// Convexity and shape diagnostics

KConvexReport kconvex_report(const PointwiseGeometry& geo, int k,
                             double cone_tol) {
  if (k < 1 || k > geo.dim) {
    throw InvalidInput("kconvex_report: need 1 <= k <= n");
  }
  KConvexReport rep;
  rep.k = k;
  rep.min_sigma.assign(static_cast<std::size_t>(k),
                       std::numeric_limits<double>::infinity());
  double scale = 0.0;
  for (std::size_t i = 0; i < geo.size(); ++i) {
    for (int m = 1; m <= k; ++m) {
      const double s = geo.sigma[i][m];
      if (s < rep.min_sigma[m - 1]) {
        rep.min_sigma[m - 1] = s;
        if (m == k) rep.worst_node = i;
      }
    }
    for (int d = 0; d < geo.dim; ++d) {
      scale = std::max(scale, std::abs(geo.kappa[i][d]));
    }
  }
  rep.status = Convexity::strict;
  for (int m = 1; m <= k; ++m) {
    const double v = rep.min_sigma[m - 1];
    if (v > 0.0) continue;
    if (v >= -cone_tol * std::pow(scale, m)) {
      rep.status = Convexity::nonstrict;
    } else {
      rep.status = Convexity::violated;
      break;
    }
  }
  return rep;
}

std::string to_string(Convexity c) {
  switch (c) {
    case Convexity::strict:
      return "strict";
    case Convexity::nonstrict:
      return "nonstrict";
    case Convexity::violated:
      return "violated";
  }
  return "?";
}

double mean_radius(const RadialGraph& g) {
  const auto r = g.radii();
  if (g.dim() == 1) {
    double acc = 0.0;
    for (double v : r) acc += v;
    return acc / static_cast<double>(r.size());
  }
  const auto& w = odd_pole_weights(g.intervals());
  double acc = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    acc += w[i] * r[i] * std::sin(g.coordinate(i));
  }
  return 0.5 * acc;
}

double roundness(const RadialGraph& g) {
  const auto r = g.radii();
  const auto [lo, hi] = std::minmax_element(r.begin(), r.end());
  return (*hi - *lo) / mean_radius(g);
}

RadialGraph refine(const RadialGraph& g, int factor) {
  if (factor < 2) throw InvalidInput("refine: factor must be >= 2");
  const auto r = g.radii();
  const std::size_t n = g.intervals();
  const auto f = static_cast<std::size_t>(factor);
  std::vector<double> out;
  if (g.dim() == 1) {
    out = spectral::resample(r, n * f);
  } else {
    // Even extension over the full meridian circle.
    std::vector<double> ext(2 * n);
    for (std::size_t j = 0; j < 2 * n; ++j) ext[j] = j <= n ? r[j] : r[2 * n - j];
    auto fine = spectral::resample(ext, 2 * n * f);
    out.assign(fine.begin(), fine.begin() + static_cast<long>(n * f + 1));
  }
  if (*std::min_element(out.begin(), out.end()) <= 0.0) {
    throw InvalidInput("refine: interpolation produced r <= 0");
  }
  return RadialGraph(g.dim(), std::move(out));
}

void write_snapshot_csv(std::ostream& os, const PointwiseGeometry& geo, int k) {
  std::vector<std::string> header{"grid_coordinate", "r", "kappa_1"};
  if (geo.dim == 2) header.emplace_back("kappa_2");
  header.emplace_back("u");
  header.emplace_back("sigma_k");
  csv::write_row(os, header);
  std::vector<double> row;
  for (std::size_t i = 0; i < geo.size(); ++i) {
    row = {geo.coord[i], geo.r[i], geo.kappa[i][0]};
    if (geo.dim == 2) row.push_back(geo.kappa[i][1]);
    row.push_back(geo.u[i]);
    row.push_back(geo.sigma_at(i, k));
    csv::write_row(os, row);
  }
}

}  // namespace quermass
