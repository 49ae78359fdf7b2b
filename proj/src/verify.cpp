#include "quermass/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

#include "quermass/csv.hpp"
#include "quermass/error.hpp"
#include "quermass/symfunc.hpp"

namespace quermass {

IdentityReport make_report(std::string name, double lhs, double rhs,
                           double scale, double tolerance) {
  IdentityReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.abs_residual = std::abs(lhs - rhs);
  r.rel_residual = scale > 0.0 ? r.abs_residual / scale : r.abs_residual;
  r.tolerance = tolerance;
  r.pass = std::isfinite(r.rel_residual) && r.rel_residual <= tolerance;
  return r;
}

void write_report_csv(std::ostream& os, std::span<const IdentityReport> rows) {
  const std::vector<std::string> header{"check",        "lhs",
                                        "rhs",          "abs_residual",
                                        "rel_residual", "tolerance",
                                        "pass"};
  csv::write_row(os, header);
  for (const auto& r : rows) {
    const std::vector<std::string> cells{
        r.name,
        csv::format(r.lhs),
        csv::format(r.rhs),
        csv::format(r.abs_residual),
        csv::format(r.rel_residual),
        csv::format(r.tolerance),
        r.pass ? "1" : "0"};
    csv::write_row(os, cells);
  }
}

void print_reports(std::ostream& os, std::span<const IdentityReport> rows) {
  for (const auto& r : rows) {
    os << (r.pass ? "PASS " : "FAIL ") << r.name << "  lhs=" << csv::format(r.lhs)
       << " rhs=" << csv::format(r.rhs)
       << " abs=" << csv::format(r.abs_residual)
       << " rel=" << csv::format(r.rel_residual)
       << " tol=" << csv::format(r.tolerance);
    if (r.resolution) os << " N=" << r.resolution;
    if (r.dt > 0.0) os << " dt=" << csv::format(r.dt);
    if (!r.note.empty()) os << "  (" << r.note << ")";
    os << '\n';
  }
}

bool all_pass(std::span<const IdentityReport> rows) {
  return std::all_of(rows.begin(), rows.end(),
                     [](const IdentityReport& r) { return r.pass; });
}

// ---------------------------------------------------------------------------
// Pointwise evolution laws

namespace {

// Quantities differenced in time at fixed material index.
struct Snapshot {
  std::vector<double> metric, area, h11, k1, rot_metric, rot_h, k2;
  std::vector<std::array<double, 2>> sigma;  // sigma_1, sigma_2
  std::vector<Point2> normal;
};

Snapshot snapshot(const LagrangianCurve& c, Stencil s) {
  const auto geo = curve_geometry(c, s);
  const std::size_t m = c.size();
  Snapshot out;
  out.metric = geo.g;
  out.h11 = geo.h11;
  out.normal = geo.normal;
  out.area.resize(m);
  out.k1.resize(m);
  out.rot_metric.resize(m);
  out.rot_h.resize(m);
  out.k2.resize(m);
  out.sigma.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double y = c[i].y;
    const double speed = std::sqrt(geo.g[i]);
    out.area[i] = geo.dim == 1 ? speed : speed * y;
    out.k1[i] = geo.kappa[i][0];
    out.k2[i] = geo.kappa[i][1];
    out.rot_metric[i] = y * y;
    out.rot_h[i] = y * geo.normal[i].y;
    const auto kap = geo.curvatures(i);
    out.sigma[i] = {elem_sym(kap, 1), elem_sym(kap, 2)};
  }
  return out;
}

// Sup-norm comparison of per-node lhs/rhs over the given nodes.
IdentityReport sup_report(std::string name, std::span<const double> lhs,
                          std::span<const double> rhs,
                          std::span<const std::size_t> nodes, double scale,
                          double tolerance) {
  double worst = -1.0;
  double rhs_sup = 0.0;
  std::size_t at = nodes.front();
  for (std::size_t i : nodes) {
    const double d = std::abs(lhs[i] - rhs[i]);
    if (d > worst) {
      worst = d;
      at = i;
    }
    rhs_sup = std::max(rhs_sup, std::abs(rhs[i]));
  }
  auto r = make_report(std::move(name), lhs[at], rhs[at],
                       scale > 0.0 ? scale : rhs_sup, tolerance);
  r.abs_residual = worst;
  const double denom = scale > 0.0 ? scale : rhs_sup;
  r.rel_residual = denom > 0.0 ? worst / denom : worst;
  r.pass = std::isfinite(r.rel_residual) && r.rel_residual <= tolerance;
  return r;
}

}  // namespace

std::vector<IdentityReport> check_prop1_pointwise(const LagrangianCurve& curve,
                                                  int k, double dt,
                                                  Stencil stencil,
                                                  double tolerance) {
  const int dim = curve.dim();
  if (k < 1 || k > dim) {
    throw InvalidInput("check_prop1_pointwise: need 1 <= k <= dim");
  }
  if (!(dt > 0.0)) throw InvalidInput("check_prop1_pointwise: dt must be > 0");
  const std::size_t m = curve.size();
  {
    const auto g0 = curve_geometry(curve, stencil);
    for (std::size_t i = 0; i < m; ++i) {
      if (!in_gamma_k(g0.curvatures(i), k, true)) {
        throw InvalidInput(
            "check_prop1_pointwise: curve is not strictly k-convex at node " +
            std::to_string(i));
      }
    }
  }

  // The flow is only well posed forward in time: sample at 0, dt, 2 dt and
  // compare at the middle state.
  const auto mid = normal_flow_advance(curve, k, dt, stencil);
  const auto end = normal_flow_advance(mid, k, dt, stencil);
  const auto plus = snapshot(end, stencil);
  const auto minus = snapshot(curve, stencil);
  const auto now = snapshot(mid, stencil);
  const auto geo = curve_geometry(mid, stencil);
  auto ddt = [&](const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> d(m);
    for (std::size_t i = 0; i < m; ++i) d[i] = (a[i] - b[i]) / (2.0 * dt);
    return d;
  };

  // Speed and its derivatives in the material parameter.
  std::vector<double> f(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto kap = geo.curvatures(i);
    f[i] = elem_sym(kap, k - 1) / elem_sym(kap, k);
  }
  const auto fp = curve_derivative(f, geo.h, stencil, 1);
  const auto fpp = curve_derivative(f, geo.h, stencil, 2);

  std::vector<std::size_t> nodes;
  if (dim == 1) {
    for (std::size_t i = 0; i < m; ++i) nodes.push_back(i);
  } else {
    for (std::size_t i = 1; i < m / 2; ++i) nodes.push_back(i);
  }

  std::vector<double> r_metric(m), r_area(m), r_h11(m), r_k1(m), r_rm(m),
      r_rh(m), r_k2(m);
  std::array<std::vector<double>, 2> r_sigma{std::vector<double>(m),
                                             std::vector<double>(m)};
  std::vector<double> hess_pp(m), hess_up(m), hess_rot(m), hess_rot_up(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double g = geo.g[i];
    const double gamma =
        (geo.xpp[i].x * geo.xp[i].x + geo.xpp[i].y * geo.xp[i].y) / g;
    hess_pp[i] = fpp[i] - gamma * fp[i];
    hess_up[i] = hess_pp[i] / g;
    const double k1 = geo.kappa[i][0];
    r_metric[i] = 2.0 * f[i] * geo.h11[i];
    r_area[i] = f[i] * now.sigma[i][0] * now.area[i];
    r_h11[i] = -hess_pp[i] + f[i] * geo.h11[i] * geo.h11[i] / g;
    r_k1[i] = -hess_up[i] - f[i] * k1 * k1;
    if (dim == 2 && !geo.pole[i]) {
      const double y = mid[i].y;
      const double yp = geo.xp[i].y;
      hess_rot[i] = y * yp * fp[i] / g;
      hess_rot_up[i] = yp * fp[i] / (y * g);
      const double k2 = geo.kappa[i][1];
      r_rm[i] = 2.0 * f[i] * now.rot_h[i];
      r_rh[i] = -hess_rot[i] + f[i] * now.rot_h[i] * now.rot_h[i] / (y * y);
      r_k2[i] = -hess_rot_up[i] - f[i] * k2 * k2;
    }
    const auto kap = geo.curvatures(i);
    for (int s = 1; s <= dim; ++s) {
      const auto t = elem_sym_gradient(kap, s);
      double div = t[0] * hess_up[i];
      if (dim == 2) div += t[1] * hess_rot_up[i];
      r_sigma[s - 1][i] = -div - f[i] * polarized_sigma_square(kap, s);
    }
  }

  std::vector<IdentityReport> out;
  auto push = [&](std::string name, const std::vector<double>& lhs,
                  const std::vector<double>& rhs, double scale = 0.0) {
    auto r = sup_report(std::move(name), lhs, rhs, nodes, scale, tolerance);
    r.resolution = m;
    r.dt = dt;
    out.push_back(std::move(r));
  };
  push("prop1.metric", ddt(plus.metric, minus.metric), r_metric);
  push("prop1.area_element", ddt(plus.area, minus.area), r_area);
  push("prop1.second_form", ddt(plus.h11, minus.h11), r_h11);
  push("prop1.weingarten", ddt(plus.k1, minus.k1), r_k1);
  for (int s = 1; s <= dim; ++s) {
    std::vector<double> a(m), b(m);
    for (std::size_t i = 0; i < m; ++i) {
      a[i] = plus.sigma[i][s - 1];
      b[i] = minus.sigma[i][s - 1];
    }
    push("prop1.sigma_" + std::to_string(s), ddt(a, b), r_sigma[s - 1]);
  }
  {
    // d nu/dt = -grad F, both components; |nu| = 1 sets the scale.
    std::vector<double> lhs(2 * m), rhs(2 * m);
    std::vector<std::size_t> both;
    for (std::size_t i : nodes) {
      lhs[2 * i] = (plus.normal[i].x - minus.normal[i].x) / (2.0 * dt);
      lhs[2 * i + 1] = (plus.normal[i].y - minus.normal[i].y) / (2.0 * dt);
      rhs[2 * i] = -fp[i] / geo.g[i] * geo.xp[i].x;
      rhs[2 * i + 1] = -fp[i] / geo.g[i] * geo.xp[i].y;
      both.push_back(2 * i);
      both.push_back(2 * i + 1);
    }
    auto r = sup_report("prop1.normal", lhs, rhs, both, 1.0, tolerance);
    r.resolution = m;
    r.dt = dt;
    out.push_back(std::move(r));
  }
  if (dim == 2) {
    push("prop1.metric_rot", ddt(plus.rot_metric, minus.rot_metric), r_rm);
    push("prop1.second_form_rot", ddt(plus.rot_h, minus.rot_h), r_rh);
    push("prop1.weingarten_rot", ddt(plus.k2, minus.k2), r_k2);
  }
  return out;
}

std::vector<IdentityReport> check_prop1_richardson(
    const std::function<LagrangianCurve(std::size_t)>& make_curve, int k,
    Stencil stencil, const RichardsonSpec& spec) {
  if (spec.levels < 2) {
    throw InvalidInput("check_prop1_richardson: need at least two levels");
  }
  std::vector<std::vector<IdentityReport>> levels;
  std::size_t m = spec.m0;
  double dt = spec.dt0;
  for (int l = 0; l < spec.levels; ++l) {
    levels.push_back(check_prop1_pointwise(
        make_curve(m), k, dt, stencil, std::numeric_limits<double>::max()));
    m *= 2;
    dt *= 0.5;
  }
  std::vector<IdentityReport> out;
  for (std::size_t j = 0; j < levels.front().size(); ++j) {
    std::vector<double> ratios;
    for (std::size_t l = 1; l < levels.size(); ++l) {
      ratios.push_back(levels[l - 1][j].abs_residual /
                       levels[l][j].abs_residual);
    }
    IdentityReport r;
    r.name = levels.front()[j].name + ".richardson";
    r.lhs = ratios.front();
    r.rhs = ratios.back();
    r.abs_residual = levels.back()[j].abs_residual;
    r.rel_residual = levels.back()[j].rel_residual;
    r.tolerance = spec.hi - spec.lo;
    r.pass = std::all_of(ratios.begin(), ratios.end(), [&](double q) {
      return std::isfinite(q) && q >= spec.lo && q <= spec.hi;
    });
    r.resolution = levels.back()[j].resolution;
    r.dt = levels.back()[j].dt;
    r.note = "ratios";
    for (double q : ratios) r.note += " " + csv::format(q);
    r.note += " expected in [" + csv::format(spec.lo) + ", " +
              csv::format(spec.hi) + "]";
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Integral identities

IdentityReport check_lemma_integral(const RadialGraph& initial,
                                    const LemmaSpec& spec) {
  const int n = initial.dim();
  if (spec.k < 1 || spec.k > n) {
    throw InvalidInput("check_lemma_integral: need 1 <= k <= n");
  }
  if (spec.l < 0 || spec.l > n) {
    throw InvalidInput("check_lemma_integral: need 0 <= l <= n");
  }
  if (spec.samples < 3) {
    throw InvalidInput("check_lemma_integral: need at least 3 samples");
  }
  if (!(spec.dt > 0.0)) throw InvalidInput("check_lemma_integral: dt <= 0");

  FlowConfig cfg;
  cfg.n = n;
  cfg.k = spec.k;
  cfg.mode = FlowMode::raw;
  cfg.grid = initial.intervals();
  cfg.t_max = spec.dt * spec.samples;
  cfg.dt_init = spec.dt;
  cfg.dt_max = spec.dt;
  cfg.cfl_coefficient = spec.cfl_coefficient;

  std::vector<double> q;      // int sigma_l dmu per sample
  std::vector<double> rate;   // (l+1) int sigma_{l+1} sigma_{k-1}/sigma_k
  FlowState state(initial);
  for (int j = 0; j < spec.samples; ++j) {
    if (j > 0) state = integrate_to(state, spec.dt * j, cfg);
    const auto geo = compute_geometry(state.graph);
    const auto f = speed_raw(geo, spec.k);
    std::vector<double> a(geo.size()), b(geo.size());
    for (std::size_t i = 0; i < geo.size(); ++i) {
      a[i] = geo.sigma_at(i, spec.l);
      b[i] = (spec.l + 1) * geo.sigma_at(i, spec.l + 1) * f[i];
    }
    q.push_back(geo.integrate(a));
    rate.push_back(geo.integrate(b));
  }

  const std::string name = "lemma.k" + std::to_string(spec.k) + ".l" +
                           std::to_string(spec.l);
  IdentityReport r;
  if (spec.l == n) {
    const double topo = unit_sphere_area(n);
    std::size_t at = 0;
    for (std::size_t j = 1; j < q.size(); ++j) {
      if (std::abs(q[j] - topo) > std::abs(q[at] - topo)) at = j;
    }
    r = make_report(name, q[at], topo, topo, spec.topo_tolerance);
    r.note = "int sigma_n dmu against |S^n| over all samples";
  } else {
    double worst = -1.0;
    for (std::size_t j = 1; j + 1 < q.size(); ++j) {
      const double lhs = (q[j + 1] - q[j - 1]) / (2.0 * spec.dt);
      auto c = make_report(name, lhs, rate[j], std::abs(rate[j]),
                           spec.tolerance);
      if (c.rel_residual > worst || !std::isfinite(c.rel_residual)) {
        worst = c.rel_residual;
        r = c;
        r.note = "worst at t = " + csv::format(spec.dt * j);
      }
      if (!std::isfinite(c.rel_residual)) break;
    }
  }
  r.resolution = initial.intervals();
  r.dt = spec.dt;
  return r;
}

IdentityReport check_first_variation(const LagrangianCurve& curve,
                                     std::span<const double> rho, int l,
                                     double probe, double tolerance) {
  const int n = curve.dim();
  if (l < 0 || l > n) {
    throw InvalidInput("check_first_variation: need 0 <= l <= n");
  }
  if (rho.size() != curve.size()) {
    throw InvalidInput("check_first_variation: rho needs one value per node");
  }
  if (!(probe > 0.0)) {
    throw InvalidInput("check_first_variation: probe must be positive");
  }
  const auto geo = curve_geometry(curve, Stencil::spectral);
  const double s = probe * curve.scale();
  const auto up = displace_normal(curve, geo, rho, s);
  const auto down = displace_normal(curve, geo, rho, -s);
  if (!up.is_starshaped() || !down.is_starshaped()) {
    throw InvalidInput(
        "check_first_variation: the probe variation leaves the class of "
        "starshaped embedded curves");
  }
  const double q_up = curve_sigma_integral(curve_geometry(up, Stencil::spectral), l);
  const double q_down =
      curve_sigma_integral(curve_geometry(down, Stencil::spectral), l);
  const double lhs = (q_up - q_down) / (2.0 * s);

  std::vector<double> f(curve.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    f[i] = (l + 1) * elem_sym(geo.curvatures(i), l + 1) * rho[i];
  }
  const double rhs = geo.integrate(f);
  auto r = make_report("variation.l" + std::to_string(l), lhs, rhs,
                       std::abs(rhs), tolerance);
  r.resolution = curve.size();
  r.note = "probe s = " + csv::format(s);
  return r;
}

IdentityReport check_first_variation(const RadialGraph& g,
                                     std::span<const double> rho, int l,
                                     double probe, double tolerance) {
  if (rho.size() != g.size()) {
    throw InvalidInput(
        "check_first_variation: rho needs one value per radial node");
  }
  const auto curve = LagrangianCurve::from_radial(g);
  std::vector<double> full(curve.size());
  if (g.dim() == 1) {
    std::copy(rho.begin(), rho.end(), full.begin());
  } else {
    const std::size_t n = g.intervals();
    for (std::size_t i = 0; i <= n; ++i) full[i] = rho[i];
    for (std::size_t i = n + 1; i < 2 * n; ++i) full[i] = rho[2 * n - i];
  }
  return check_first_variation(curve, full, l, probe, tolerance);
}

// ---------------------------------------------------------------------------
// Inequalities and monotonicity

std::vector<IdentityReport> check_af_chain(const PointwiseGeometry& geo, int k,
                                           int n, double tolerance,
                                           double cone_tol) {
  if (n != geo.dim) throw InvalidInput("check_af_chain: n != geometry dim");
  if (k < 1 || k > n) throw InvalidInput("check_af_chain: need 1 <= k <= n");
  const auto kc = kconvex_report(geo, k, cone_tol);
  if (kc.status == Convexity::violated) {
    throw InvalidInput("check_af_chain: surface is not " + std::to_string(k) +
                       "-convex (min sigma_" + std::to_string(k) + " = " +
                       csv::format(kc.min_sigma.back()) + " at node " +
                       std::to_string(kc.worst_node) + ")");
  }
  std::vector<IdentityReport> out;
  for (int m = 0; m <= std::min(k, n - 1); ++m) {
    const double a = std::pow(quermass(geo, m) / quermass_ball(n, m),
                              1.0 / (n + 1 - m));
    const double b = std::pow(quermass(geo, m + 1) / quermass_ball(n, m + 1),
                              1.0 / (n - m));
    IdentityReport r = make_report("af.m" + std::to_string(m), a, b, b,
                                   tolerance);
    r.pass = std::isfinite(a) && std::isfinite(b) && a <= b * (1.0 + tolerance);
    r.resolution = geo.size();
    r.note = "lhs <= rhs (1 + tol)";
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<IdentityReport> check_monotone_series(const TrajectoryRecord& rec,
                                                  const MonotoneSpec& spec) {
  if (rec.mode == FlowMode::raw) {
    throw InvalidInput(
        "check_monotone_series: needs a normalized or rescaled_raw record");
  }
  if (rec.rows.empty()) {
    throw InvalidInput("check_monotone_series: empty record");
  }
  const int n = rec.n;
  const int k = rec.k;
  const int mi = monitored_ratio(n, k);
  const int ci = conserved_index(n, k);
  const auto t = rec.series("t");
  const auto ratio = rec.series("I" + std::to_string(mi));
  const std::string vname = "V" + std::to_string(n + 1 - ci);
  const auto vol = rec.series(vname);

  std::vector<IdentityReport> out;
  if (monotonicity_applies(n, k)) {
    // A single sample (already round at t = 0) has no decrease.
    double worst = ratio.size() > 1 ? -std::numeric_limits<double>::infinity() : 0.0;
    std::size_t at = 0;
    for (std::size_t i = 1; i < ratio.size(); ++i) {
      const double drop = (ratio[i - 1] - ratio[i]) / ratio[i - 1];
      if (drop > worst) {
        worst = drop;
        at = i;
      }
    }
    IdentityReport r;
    r.name = "monotone.I" + std::to_string(mi);
    const std::size_t before = at > 0 ? at - 1 : 0;
    r.lhs = ratio[at];
    r.rhs = ratio[before];
    r.abs_residual = std::max(0.0, ratio[before] - ratio[at]);
    r.rel_residual = std::max(0.0, worst);
    r.tolerance = spec.slack;
    r.pass = std::isfinite(worst) && worst <= spec.slack;
    r.note = "largest relative decrease between samples " +
             csv::format(worst) + " at t = " + csv::format(t[at]);
    out.push_back(std::move(r));
  }
  {
    double drift = 0.0;
    for (double v : vol) drift = std::max(drift, std::abs(v / vol.front() - 1.0));
    const double span = t.back() - t.front();
    IdentityReport r;
    r.name = "monotone." + vname;
    r.lhs = vol.back();
    r.rhs = vol.front();
    r.abs_residual = std::abs(vol.back() - vol.front());
    r.rel_residual = span > 0.0 ? drift / span : drift;
    r.tolerance = spec.drift_per_time;
    r.pass = std::isfinite(r.rel_residual) && r.rel_residual <= r.tolerance;
    r.note = "max relative drift per unit time";
    out.push_back(std::move(r));
  }
  {
    const double ball = iso_ratio_ball(n, mi);
    auto r = make_report("monotone.terminal_I" + std::to_string(mi),
                         ratio.back(), ball, 1.0, spec.terminal);
    r.note = "absolute distance to the ball value";
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Algebra and discretization

std::vector<IdentityReport> check_symfunc_identities(std::size_t samples,
                                                     std::uint64_t seed,
                                                     double tolerance) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dim_dist(2, 8);
  std::uniform_real_distribution<double> entry(-1.0, 1.0);

  double newton_min = std::numeric_limits<double>::infinity();
  double euler_worst = 0.0, euler_l = 0.0, euler_r = 0.0;
  double polar_worst = 0.0, polar_l = 0.0, polar_r = 0.0;
  double mac_min = std::numeric_limits<double>::infinity();
  std::size_t mac_count = 0;

  std::vector<double> lambda, absl;
  for (std::size_t s = 0; s < samples; ++s) {
    const int n = dim_dist(rng);
    lambda.resize(n);
    absl.resize(n);
    for (int i = 0; i < n; ++i) {
      lambda[i] = entry(rng);
      absl[i] = std::abs(lambda[i]);
    }
    const int k = std::uniform_int_distribution<int>(1, n - 1)(rng);
    const auto e = elem_sym_all(lambda, n);
    const auto ea = elem_sym_all(absl, n);

    if (e[k] != 0.0) {
      newton_min = std::min(newton_min, newton_maclaurin_check(lambda, k));
    }
    if (in_gamma_k(lambda, k, true)) {
      // Relative to the right-hand side magnitude C~ sigma_k^{1+1/k}.
      const double bound = maclaurin_power_bound(lambda, k);
      const double mag =
          maclaurin_constant(n, k) * std::pow(e[k], 1.0 + 1.0 / k);
      mac_min = std::min(mac_min, bound / mag);
      ++mac_count;
    }
    for (int m = 1; m <= n; ++m) {
      const auto grad = elem_sym_gradient(lambda, m);
      double euler = 0.0;
      for (int i = 0; i < n; ++i) euler += lambda[i] * grad[i];
      const double scale_e = m * ea[m];
      const double re = std::abs(euler - m * e[m]) / scale_e;
      if (re > euler_worst) {
        euler_worst = re;
        euler_l = euler;
        euler_r = m * e[m];
      }
      const double pol = polarized_sigma_square(lambda, m);
      const double next = m < n ? e[m + 1] : 0.0;
      const double next_a = m < n ? ea[m + 1] : 0.0;
      const double rhs = e[1] * e[m] - (m + 1) * next;
      const double scale_p = ea[1] * ea[m] + (m + 1) * next_a;
      const double rp = std::abs(pol - rhs) / scale_p;
      if (rp > polar_worst) {
        polar_worst = rp;
        polar_l = pol;
        polar_r = rhs;
      }
    }
  }

  std::vector<IdentityReport> out;
  {
    IdentityReport r;
    r.name = "symfunc.newton_gap";
    r.lhs = newton_min;
    r.rhs = 0.0;
    r.abs_residual = std::max(0.0, -newton_min);
    r.rel_residual = r.abs_residual;
    r.tolerance = tolerance;
    r.pass = newton_min >= -tolerance;
    r.note = "minimum gap over samples";
    out.push_back(std::move(r));
  }
  {
    IdentityReport r;
    r.name = "symfunc.maclaurin";
    r.lhs = mac_count ? mac_min : 0.0;
    r.rhs = 0.0;
    r.abs_residual = std::max(0.0, -r.lhs);
    r.rel_residual = r.abs_residual;
    r.tolerance = tolerance;
    r.pass = mac_count > 0 && r.lhs >= -tolerance;
    r.note = "minimum relative slack over " + std::to_string(mac_count) +
             " cone members";
    out.push_back(std::move(r));
  }
  {
    IdentityReport r = make_report("symfunc.euler", euler_l, euler_r, 1.0,
                                   tolerance);
    r.rel_residual = euler_worst;
    r.pass = euler_worst <= tolerance;
    r.note = "worst relative residual";
    out.push_back(std::move(r));
  }
  {
    IdentityReport r = make_report("symfunc.polarization", polar_l, polar_r,
                                   1.0, tolerance);
    r.rel_residual = polar_worst;
    r.pass = polar_worst <= tolerance;
    r.note = "worst relative residual";
    out.push_back(std::move(r));
  }
  for (auto& r : out) r.resolution = samples;
  return out;
}

std::vector<IdentityReport> check_minkowski(const PointwiseGeometry& geo,
                                            double tolerance) {
  std::vector<IdentityReport> out;
  const int n = geo.dim;
  for (int m = 1; m <= n; ++m) {
    const double a = quermass_sigma(geo, m, n);
    const double b = quermass_minkowski(geo, m, n);
    auto r = make_report("geometry.minkowski_V" + std::to_string(n + 1 - m), a,
                         b, std::abs(b), tolerance);
    r.resolution = geo.size();
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

// sup |kappa_radial - kappa_embedded| and sup |kappa_radial|.
std::pair<double, double> curvature_gap(const RadialGraph& g) {
  const auto geo = compute_geometry(g);
  const auto cg =
      curve_geometry(LagrangianCurve::from_radial(g), Stencil::central2);
  double gap = 0.0, mag = 0.0;
  for (std::size_t i = 0; i < geo.size(); ++i) {
    for (int j = 0; j < g.dim(); ++j) {
      gap = std::max(gap, std::abs(geo.kappa[i][j] - cg.kappa[i][j]));
      mag = std::max(mag, std::abs(geo.kappa[i][j]));
    }
  }
  return {gap, mag};
}

}  // namespace

std::vector<IdentityReport> check_curvature_oracle(const RadialGraph& g,
                                                   double min_order) {
  const auto [e1, mag] = curvature_gap(g);
  const auto [e2, mag2] = curvature_gap(refine(g, 2));
  (void)mag2;
  IdentityReport r;
  r.name = "geometry.curvature_oracle";
  r.resolution = g.intervals();
  if (e1 <= 1e-12 * mag) {
    r = make_report(r.name, e1, 0.0, mag, 1e-12);
    r.resolution = g.intervals();
    r.note = "representations agree to rounding";
    return {r};
  }
  const double order = std::log2(e1 / e2);
  r.lhs = order;
  r.rhs = 2.0;
  r.abs_residual = std::abs(order - 2.0);
  r.rel_residual = r.abs_residual / 2.0;
  r.tolerance = (2.0 - min_order) / 2.0;
  r.pass = std::isfinite(order) && order >= min_order;
  r.note = "observed order; sup gap " + csv::format(e1) + " at N, " +
           csv::format(e2) + " at 2N";
  return {r};
}

std::vector<IdentityReport> check_round_trip(const RadialGraph& g,
                                             double tolerance) {
  const auto back = LagrangianCurve::from_radial(g).to_radial(g.intervals());
  const auto a = compute_geometry(g);
  const auto b = compute_geometry(back);
  std::vector<IdentityReport> out;
  const int n = g.dim();
  for (int m = 0; m <= n; ++m) {
    const double va = quermass(a, m);
    const double vb = quermass(b, m);
    auto r = make_report("geometry.round_trip_V" + std::to_string(n + 1 - m),
                         vb, va, std::abs(va), tolerance);
    r.resolution = g.intervals();
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace quermass
