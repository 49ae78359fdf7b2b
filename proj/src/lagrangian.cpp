#include "quermass/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "quermass/error.hpp"
#include "quermass/flow.hpp"
#include "quermass/spectral.hpp"
#include "quermass/symfunc.hpp"

namespace quermass {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) {
  a = std::fmod(a + std::numbers::pi, kTwoPi);
  if (a < 0) a += kTwoPi;
  return a - std::numbers::pi;
}

std::vector<double> xs(std::span<const Point2> p) {
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = p[i].x;
  return out;
}

std::vector<double> ys(std::span<const Point2> p) {
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = p[i].y;
  return out;
}

std::vector<double> central(std::span<const double> f, double h) {
  const std::size_t m = f.size();
  std::vector<double> d(m);
  for (std::size_t i = 0; i < m; ++i) {
    d[i] = (f[(i + 1) % m] - f[(i + m - 1) % m]) / (2.0 * h);
  }
  return d;
}

}  // namespace

LagrangianCurve::LagrangianCurve(int dim, std::vector<Point2> points)
    : dim_(dim), pts_(std::move(points)) {
  if (dim_ != 1 && dim_ != 2) {
    throw InvalidInput("LagrangianCurve: dim must be 1 or 2");
  }
  if (pts_.size() < RadialGraph::kMinIntervals) {
    throw InvalidInput("LagrangianCurve: at least 16 points required");
  }
  for (const auto& p : pts_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw InvalidInput("LagrangianCurve: non-finite point");
    }
  }
  if (dim_ == 2) {
    const std::size_t m = pts_.size();
    if (m % 2 != 0) {
      throw InvalidInput("LagrangianCurve: meridian needs an even count");
    }
    const double tol = 1e-8 * scale();
    for (std::size_t i = 0; i <= m / 2; ++i) {
      const auto& a = pts_[i];
      const auto& b = pts_[(m - i) % m];
      if (std::abs(a.x - b.x) > tol || std::abs(a.y + b.y) > tol) {
        throw InvalidInput("LagrangianCurve: meridian is not mirror symmetric");
      }
    }
  }
}

LagrangianCurve LagrangianCurve::from_radial(const RadialGraph& g) {
  const std::size_t n = g.intervals();
  if (g.dim() == 1) {
    std::vector<Point2> p(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = g.coordinate(i);
      p[i] = {g[i] * std::cos(t), g[i] * std::sin(t)};
    }
    return LagrangianCurve(1, std::move(p));
  }
  std::vector<Point2> p(2 * n);
  for (std::size_t i = 0; i <= n; ++i) {
    const double phi = g.coordinate(i);
    p[i] = {g[i] * std::cos(phi), g[i] * std::sin(phi)};
  }
  p[0].y = 0.0;
  p[n].y = 0.0;
  for (std::size_t i = 1; i < n; ++i) p[2 * n - i] = {p[i].x, -p[i].y};
  return LagrangianCurve(2, std::move(p));
}

double LagrangianCurve::spacing() const noexcept {
  return kTwoPi / static_cast<double>(pts_.size());
}

double LagrangianCurve::scale() const noexcept {
  double s = 0.0;
  for (const auto& p : pts_) s = std::max(s, std::hypot(p.x, p.y));
  return s;
}

double LagrangianCurve::min_star_cross(Stencil s) const {
  const auto x = xs(pts_);
  const auto y = ys(pts_);
  const auto xp = curve_derivative(x, spacing(), s, 1);
  const auto yp = curve_derivative(y, spacing(), s, 1);
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts_.size(); ++i) {
    lo = std::min(lo, x[i] * yp[i] - y[i] * xp[i]);
  }
  return lo;
}

bool LagrangianCurve::is_starshaped() const {
  if (!(min_star_cross(Stencil::spectral) > 0.0)) return false;
  // The cross product alone misses loops around the origin: r^2 dtheta is
  // positive on every polar curve, so also require winding number one.
  double turn = 0.0;
  for (std::size_t i = 0; i < pts_.size(); ++i) {
    const auto& a = pts_[i];
    const auto& b = pts_[(i + 1) % pts_.size()];
    const double step = std::atan2(a.x * b.y - a.y * b.x, a.x * b.x + a.y * b.y);
    if (!(step > 0.0)) return false;
    turn += step;
  }
  return std::abs(turn - kTwoPi) < 1e-6;
}

RadialGraph LagrangianCurve::to_radial(std::size_t intervals) const {
  if (!is_starshaped()) {
    throw InvalidInput("to_radial: curve is not strictly starshaped");
  }
  const std::size_t m = pts_.size();
  const double hp = spacing();
  const auto cx = spectral::forward(xs(pts_));
  const auto cy = spectral::forward(ys(pts_));

  // Unwrapped polar angle at the nodes, increasing by 2pi over one turn.
  std::vector<double> theta(m + 1);
  theta[0] = std::atan2(pts_[0].y, pts_[0].x);
  for (std::size_t i = 1; i <= m; ++i) {
    const auto& p = pts_[i % m];
    theta[i] = theta[i - 1] +
               wrap_angle(std::atan2(p.y, p.x) - theta[i - 1]);
  }

  const std::size_t count = dim_ == 1 ? intervals : intervals + 1;
  const double step =
      (dim_ == 1 ? kTwoPi : std::numbers::pi) / static_cast<double>(intervals);
  std::vector<double> r(count);
  for (std::size_t t = 0; t < count; ++t) {
    double target = step * static_cast<double>(t);
    target = theta[0] + std::fmod(target - theta[0] + 4.0 * kTwoPi, kTwoPi);
    const auto it = std::upper_bound(theta.begin(), theta.end(), target);
    const std::size_t j =
        std::min<std::size_t>(m - 1, std::max<std::ptrdiff_t>(
                                         0, (it - theta.begin()) - 1));
    double lo = hp * static_cast<double>(j);
    double hi = lo + hp;
    double p = lo + hp * (target - theta[j]) / (theta[j + 1] - theta[j]);
    double x = 0.0;
    double y = 0.0;
    for (int iter = 0; iter < 60; ++iter) {
      const auto vx = spectral::interpolate_with_slope(cx, p);
      const auto vy = spectral::interpolate_with_slope(cy, p);
      x = vx.value;
      y = vy.value;
      const double res = wrap_angle(std::atan2(y, x) - target);
      if (res == 0.0) break;
      if (res > 0) hi = p; else lo = p;
      const double slope =
          (x * vy.slope - y * vx.slope) / (x * x + y * y);
      double next = p - res / slope;
      if (!(next >= lo && next <= hi)) next = 0.5 * (lo + hi);
      const bool done = std::abs(next - p) <= 1e-15 * (1.0 + std::abs(p));
      p = next;
      if (done) break;
    }
    const auto vx = spectral::interpolate_with_slope(cx, p);
    const auto vy = spectral::interpolate_with_slope(cy, p);
    r[t] = std::hypot(vx.value, vy.value);
  }
  return RadialGraph(dim_, std::move(r));
}

std::vector<double> curve_derivative(std::span<const double> f, double h,
                                     Stencil s, int order) {
  if (order != 1 && order != 2) {
    throw InvalidInput("curve_derivative: order must be 1 or 2");
  }
  if (s == Stencil::spectral) return spectral::derivative(f, order);
  auto d = central(f, h);
  return order == 1 ? d : central(d, h);
}

double CurveGeometry::integrate(std::span<const double> f) const {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * dmu[i];
  return s;
}

CurveGeometry curve_geometry(const LagrangianCurve& c, Stencil s) {
  const std::size_t m = c.size();
  const double h = c.spacing();
  const auto x = xs(c.points());
  const auto y = ys(c.points());
  const auto xp = curve_derivative(x, h, s, 1);
  const auto yp = curve_derivative(y, h, s, 1);
  const auto xpp = curve_derivative(x, h, s, 2);
  const auto ypp = curve_derivative(y, h, s, 2);

  CurveGeometry geo;
  geo.dim = c.dim();
  geo.h = h;
  geo.xp.resize(m);
  geo.xpp.resize(m);
  geo.normal.resize(m);
  geo.g.resize(m);
  geo.h11.resize(m);
  geo.kappa.resize(m);
  geo.dmu.assign(m, 0.0);
  geo.pole.assign(m, false);
  if (geo.dim == 2) {
    geo.pole[0] = true;
    geo.pole[m / 2] = true;
  }
  const std::vector<double>* weights =
      geo.dim == 2 ? &odd_pole_weights(m / 2) : nullptr;

  for (std::size_t i = 0; i < m; ++i) {
    const double g = xp[i] * xp[i] + yp[i] * yp[i];
    const double speed = std::sqrt(g);
    const Point2 nu{yp[i] / speed, -xp[i] / speed};
    const double h11 = -(xpp[i] * nu.x + ypp[i] * nu.y);
    geo.xp[i] = {xp[i], yp[i]};
    geo.xpp[i] = {xpp[i], ypp[i]};
    geo.normal[i] = nu;
    geo.g[i] = g;
    geo.h11[i] = h11;
    geo.kappa[i][0] = h11 / g;
    geo.kappa[i][1] = 0.0;
    if (geo.dim == 1) {
      geo.dmu[i] = speed * h;
    } else {
      geo.kappa[i][1] = geo.pole[i] ? 0.0 : nu.y / y[i];
      if (i > 0 && i < m / 2) {
        geo.dmu[i] = (*weights)[i] * kTwoPi * y[i] * speed;
      }
    }
  }
  if (geo.dim == 2) {
    // nu_y / y is 0/0 at the poles. Its limit must match the discrete
    // interior values to the stencil's order, or the isolated pole value
    // acts as a spike under second differences: spectral stencils take
    // (nu_y)_p / y_p, the second-order ones extrapolate the even function
    // from the two neighbours.
    std::vector<double> nuy(m);
    for (std::size_t i = 0; i < m; ++i) nuy[i] = geo.normal[i].y;
    const auto dnuy =
        s == Stencil::spectral ? curve_derivative(nuy, h, s, 1) : nuy;
    for (std::size_t pole : {std::size_t{0}, m / 2}) {
      if (s == Stencil::spectral) {
        geo.kappa[pole][1] = dnuy[pole] / yp[pole];
      } else {
        const double k1 = geo.kappa[(pole + 1) % m][1];
        const double k2 = geo.kappa[(pole + 2) % m][1];
        geo.kappa[pole][1] = (4.0 * k1 - k2) / 3.0;
      }
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (!std::isfinite(geo.kappa[i][0]) || !std::isfinite(geo.kappa[i][1])) {
      throw NumericalError("curve_geometry: non-finite curvature at node " +
                           std::to_string(i));
    }
  }
  return geo;
}

double curve_sigma_integral(const CurveGeometry& geo, int l) {
  std::vector<double> f(geo.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    f[i] = elem_sym(geo.curvatures(i), l);
  }
  return geo.integrate(f);
}

LagrangianCurve displace_normal(const LagrangianCurve& c,
                                const CurveGeometry& geo,
                                std::span<const double> rho, double s) {
  if (rho.size() != c.size()) {
    throw InvalidInput("displace_normal: rho has the wrong length");
  }
  std::vector<Point2> p(c.points().begin(), c.points().end());
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i].x += s * rho[i] * geo.normal[i].x;
    p[i].y += s * rho[i] * geo.normal[i].y;
  }
  if (c.dim() == 2) {
    const std::size_t m = p.size();
    p[0].y = 0.0;
    p[m / 2].y = 0.0;
  }
  return LagrangianCurve(c.dim(), std::move(p));
}

namespace {

std::vector<Point2> normal_velocity(const LagrangianCurve& c, int k,
                                    Stencil s) {
  const auto geo = curve_geometry(c, s);
  std::vector<Point2> v(c.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto kap = geo.curvatures(i);
    const double sk = elem_sym(kap, k);
    if (!(sk > 0.0)) throw ConeExit(i, sk);
    const double f = elem_sym(kap, k - 1) / sk;
    v[i] = {f * geo.normal[i].x, f * geo.normal[i].y};
  }
  return v;
}

LagrangianCurve shifted(const LagrangianCurve& c, std::span<const Point2> v,
                        double a) {
  std::vector<Point2> p(c.points().begin(), c.points().end());
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i].x += a * v[i].x;
    p[i].y += a * v[i].y;
  }
  if (c.dim() == 2) {
    p[0].y = 0.0;
    p[p.size() / 2].y = 0.0;
  }
  return LagrangianCurve(c.dim(), std::move(p));
}

}  // namespace

LagrangianCurve normal_flow_step(const LagrangianCurve& c, int k, double dt,
                                 Stencil s) {
  if (k < 1 || k > c.dim()) {
    throw InvalidInput("normal_flow_step: k must satisfy 1 <= k <= dim");
  }
  const auto k1 = normal_velocity(c, k, s);
  const auto k2 = normal_velocity(shifted(c, k1, 0.5 * dt), k, s);
  const auto k3 = normal_velocity(shifted(c, k2, 0.5 * dt), k, s);
  const auto k4 = normal_velocity(shifted(c, k3, dt), k, s);
  std::vector<Point2> p(c.points().begin(), c.points().end());
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i].x += dt / 6.0 * (k1[i].x + 2.0 * k2[i].x + 2.0 * k3[i].x + k4[i].x);
    p[i].y += dt / 6.0 * (k1[i].y + 2.0 * k2[i].y + 2.0 * k3[i].y + k4[i].y);
  }
  if (c.dim() == 2) {
    p[0].y = 0.0;
    p[p.size() / 2].y = 0.0;
  }
  return LagrangianCurve(c.dim(), std::move(p));
}

double curve_stable_dt(const CurveGeometry& geo, int k, Stencil s,
                       double cfl) {
  double dmax = 0.0;
  for (std::size_t i = 0; i < geo.size(); ++i) {
    const auto kap = geo.curvatures(i);
    const double sk = elem_sym(kap, k);
    const double skm = elem_sym(kap, k - 1);
    const auto gk = elem_sym_gradient(kap, k);
    const auto gkm = k >= 2 ? elem_sym_gradient(kap, k - 1)
                            : std::vector<double>(kap.size(), 0.0);
    double sum = 0.0;
    for (std::size_t j = 0; j < kap.size(); ++j) {
      const double dkm = gkm[j];
      sum += std::abs((dkm * sk - skm * gk[j]) / (sk * sk));
    }
    dmax = std::max(dmax, sum / geo.g[i]);
  }
  double bound = cfl * geo.h * geo.h / dmax;
  if (s == Stencil::spectral) bound /= std::numbers::pi * std::numbers::pi;
  return bound;
}

LagrangianCurve normal_flow_advance(const LagrangianCurve& c, int k, double dt,
                                    Stencil s, double cfl) {
  const double limit = curve_stable_dt(curve_geometry(c, s), k, s, cfl);
  const auto steps = static_cast<std::size_t>(
      std::max(1.0, std::ceil(std::abs(dt) / limit)));
  const double sub = dt / static_cast<double>(steps);
  LagrangianCurve out = c;
  for (std::size_t i = 0; i < steps; ++i) out = normal_flow_step(out, k, sub, s);
  return out;
}

}  // namespace quermass
