#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "quermass/csv.hpp"
#include "quermass/error.hpp"
#include "quermass/flow.hpp"
#include "quermass/lagrangian.hpp"
#include "quermass/symfunc.hpp"

using namespace quermass;
using std::numbers::pi;

namespace {

FlowConfig config(int n, int k, FlowMode mode) {
  FlowConfig c;
  c.n = n;
  c.k = k;
  c.mode = mode;
  return c;
}

double sup_diff(std::span<const double> a, std::span<const double> b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_SUITE("flow") {

TEST_CASE("config validation names the field") {
  auto key_of = [](const FlowConfig& c) {
    try {
      c.validate();
    } catch (const ConfigError& e) {
      return e.key();
    }
    return std::string();
  };
  FlowConfig c = config(2, 3, FlowMode::raw);
  CHECK(key_of(c) == "problem.k");
  c = config(2, 2, FlowMode::normalized);
  CHECK(key_of(c) == "problem.mode");
  c = config(1, 1, FlowMode::raw);
  c.dt_init = 0.1;
  c.dt_max = 0.01;
  CHECK(key_of(c) == "stepping.dt_max");
  c = config(3, 1, FlowMode::raw);
  CHECK(key_of(c) == "problem.n");
  c = config(1, 1, FlowMode::raw);
  c.grid = 15;
  CHECK(key_of(c) == "grid.N");
  CHECK(key_of(config(2, 1, FlowMode::normalized)).empty());
  CHECK(parse_flow_mode("rescaled_raw") == FlowMode::rescaled_raw);
  CHECK_THROWS_AS(parse_flow_mode("fast"), ConfigError);
}

TEST_CASE("speed on spheres is R / C_{n,k}") {
  const double R = 1.4;
  struct Case { int n, k; double F; };
  for (auto c : {Case{1, 1, R}, Case{2, 1, R / 2}, Case{2, 2, 2 * R}}) {
    const auto geo = compute_geometry(make_shape(shape::Sphere{R}, c.n, 64));
    for (double f : speed_raw(geo, c.k)) CHECK(f == doctest::Approx(c.F).epsilon(1e-13));
    CHECK(c.F == doctest::Approx(R / cnk(c.n, c.k)));
  }
}

TEST_CASE("speed signals a cone exit with node and value") {
  const auto geo = compute_geometry(make_shape(shape::PerturbedSphere{1, 0.5, 2, 0}, 1, 128));
  try {
    speed_raw(geo, 1);
    FAIL("expected ConeExit");
  } catch (const ConeExit& e) {
    CHECK(e.value() <= 0);
    CHECK(geo.sigma[e.node()][1] == e.value());
  }
}

TEST_CASE("normalization rate") {
  for (double R : {1.0, 5.0}) {
    const auto geo = compute_geometry(make_shape(shape::Sphere{R}, 2, 64));
    CHECK(std::abs(normalization_rt(geo, 1, 2) - 0.5) < 1e-12);
  }
  const auto s = compute_geometry(make_shape(shape::Sphere{1}, 2, 64));
  CHECK_THROWS_AS(normalization_rt(s, 2, 2), InvalidInput);
  // refined-grid oracle
  const auto coarse = compute_geometry(make_shape(shape::EllipsoidOfRevolution{1.2, 1}, 2, 256));
  const auto fine = compute_geometry(make_shape(shape::EllipsoidOfRevolution{1.2, 1}, 2, 2048));
  CHECK(std::abs(normalization_rt(coarse, 1, 2) - normalization_rt(fine, 1, 2)) < 1e-8);
}

TEST_CASE("radial right-hand side on spheres") {
  const double R = 0.8;
  const auto c = compute_geometry(make_shape(shape::Sphere{R}, 1, 64));
  for (double v : radial_rhs(c, FlowMode::raw, 1)) CHECK(v == doctest::Approx(R));
  const auto s = compute_geometry(make_shape(shape::Sphere{R}, 2, 64));
  for (double v : radial_rhs(s, FlowMode::raw, 2)) CHECK(v == doctest::Approx(2 * R));
  for (double v : radial_rhs(s, FlowMode::normalized, 1)) CHECK(std::abs(v) < 1e-13);
}

TEST_CASE("radial right-hand side matches the normal motion of the curve") {
  // Move the embedded curve along F nu by +-dt and read the radii back at
  // the same angles; the centered difference is dr/dt in the radial gauge.
  const std::size_t N = 256;
  const auto g = make_shape(shape::PerturbedSphere{1, 0.05, 3, 0}, 1, N);
  const auto rhs = radial_rhs(compute_geometry(g), FlowMode::raw, 1);
  const auto curve = LagrangianCurve::from_radial(g);
  const auto cg = curve_geometry(curve, Stencil::spectral);
  std::vector<double> f(N);
  for (std::size_t i = 0; i < N; ++i) f[i] = 1 / cg.kappa[i][0];
  const double dt = 1e-4;
  const auto plus = displace_normal(curve, cg, f, dt).to_radial(N);
  const auto minus = displace_normal(curve, cg, f, -dt).to_radial(N);
  double worst = 0, scale = 0;
  for (std::size_t i = 0; i < N; ++i) {
    const double fd = (plus[i] - minus[i]) / (2 * dt);
    worst = std::max(worst, std::abs(fd - rhs[i]));
    scale = std::max(scale, std::abs(rhs[i]));
  }
  CHECK(worst / scale < 1e-6);
}

TEST_CASE("one step on a circle follows the exact solution") {
  FlowConfig c = config(1, 1, FlowMode::raw);
  FlowState s(make_shape(shape::Sphere{1}, 1, 256));
  const auto out = step(s, 1e-3, c);
  REQUIRE(out.accepted);
  for (double r : out.state.graph.radii()) CHECK(std::abs(r - std::exp(1e-3)) < 1e-14);
  CHECK(out.state.t == doctest::Approx(1e-3));
}

TEST_CASE("a sphere is a fixed point of the normalized flow") {
  FlowConfig c = config(2, 1, FlowMode::normalized);
  FlowState s(make_shape(shape::Sphere{1}, 2, 64));
  for (int i = 0; i < 10; ++i) {
    auto out = step(s, 1e-3, c);
    REQUIRE(out.accepted);
    CHECK(sup_diff(out.state.graph.radii(), s.graph.radii()) < 1e-13);
    s = out.state;
  }
}

TEST_CASE("a grossly large step is rejected and then accepted after halving") {
  FlowConfig c = config(1, 1, FlowMode::rescaled_raw);
  const FlowState s(make_shape(shape::Ellipse{2, 1}, 1, 128));
  double dt = 1.0;
  int rejections = 0;
  StepOutcome out = step(s, dt, c);
  while (!out.accepted && dt > 1e-12) {
    ++rejections;
    CHECK(!out.reason.empty());
    CHECK(out.state.t == s.t);
    dt *= 0.5;
    out = step(s, dt, c);
  }
  CHECK(rejections > 0);
  CHECK(out.accepted);
  CHECK_THROWS_AS(step(s, -1e-3, c), InvalidInput);
}

TEST_CASE("raw flow of a circle") {
  FlowConfig c = config(1, 1, FlowMode::raw);
  c.grid = 256;
  c.t_max = 1;
  c.dt_init = 1e-3;
  c.dt_max = 1e-3;
  const auto res = run(c, make_shape(shape::Sphere{1}, 1, 256));
  CHECK(res.status == RunStatus::reached_t_max);
  CHECK(res.final_state.t == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(mean_radius(res.final_state.graph) / std::exp(1.0) - 1) < 1e-6);
  CHECK(roundness(res.final_state.graph) < 1e-12);
  // the ratio column is constant on a sphere
  for (double v : res.record.series("I0")) CHECK(v == doctest::Approx(1 / std::sqrt(2 * pi)).epsilon(1e-12));
}

TEST_CASE("rescaling") {
  FlowState s(make_shape(shape::Sphere{1.5}, 2, 64));
  CHECK(sup_diff(rescale_state(s).radii(), s.graph.radii()) == 0.0);

  FlowConfig c = config(2, 1, FlowMode::raw);
  c.grid = 64;
  c.t_max = 0.5;
  const auto res = run(c, make_shape(shape::Sphere{1}, 2, 64));
  REQUIRE(res.ok());
  CHECK(res.final_state.log_scale == doctest::Approx(0.25).epsilon(1e-12));
  const auto back = rescale_state(res.final_state);
  for (double r : back.radii()) CHECK(r == doctest::Approx(1.0).epsilon(1e-12));

  FlowConfig e = config(1, 1, FlowMode::rescaled_raw);
  e.grid = 128;
  e.t_max = 0.2;
  const auto er = run(e, make_shape(shape::Ellipse{2, 1}, 1, 128));
  REQUIRE(er.ok());
  const double raw = iso_ratio(compute_geometry(er.final_state.graph), 0, 1);
  const double scaled = iso_ratio(compute_geometry(rescale_state(er.final_state)), 0, 1);
  CHECK(std::abs(raw - scaled) < 1e-12);
}

TEST_CASE("trajectory record") {
  CHECK(trajectory_columns(1, 1) == std::vector<std::string>{
      "t", "dt", "log_scale", "V2", "V1", "I0", "r_t", "roundness_rescaled", "min_sigma_k"});
  CHECK(trajectory_columns(2, 1) == std::vector<std::string>{
      "t", "dt", "log_scale", "V3", "V2", "V1", "I0", "I1", "r_t", "roundness_rescaled", "min_sigma_k"});
  CHECK(trajectory_columns(2, 2) == std::vector<std::string>{
      "t", "dt", "log_scale", "V3", "V2", "V1", "I0", "I1", "r_t", "roundness_rescaled", "min_sigma_k"});

  FlowConfig c = config(2, 1, FlowMode::rescaled_raw);
  c.grid = 64;
  c.t_max = 0.3;
  c.sample_every = 5;
  const auto res = run(c, make_shape(shape::EllipsoidOfRevolution{1.3, 1}, 2, 64));
  REQUIRE(res.ok());
  const auto t = res.record.series("t");
  for (std::size_t i = 1; i < t.size(); ++i) CHECK(t[i] > t[i - 1]);
  CHECK(t.back() == doctest::Approx(0.3));
  for (double v : res.record.series("min_sigma_k")) CHECK(v > 0);
  for (const auto& name : {"V3", "V2", "V1"}) {
    for (double v : res.record.series(name)) CHECK(v > 0);
  }
  std::stringstream ss;
  res.record.write_csv(ss);
  const auto table = csv::read_strict(ss);
  CHECK(table.header == res.record.columns);
  CHECK(table.rows.size() == res.record.rows.size());
  CHECK(table.numbers("V2") == res.record.series("V2"));
}

TEST_CASE("determinism") {
  FlowConfig c = config(1, 1, FlowMode::rescaled_raw);
  c.grid = 64;
  c.t_max = 0.5;
  const auto g = make_shape(shape::PerturbedSphere{1, 0.05, std::nullopt, 3}, 1, 64);
  const auto a = run(c, g);
  const auto b = run(c, g);
  CHECK(a.record.rows == b.record.rows);
}

TEST_CASE("initial surface outside the cone is rejected before stepping") {
  FlowConfig c = config(1, 1, FlowMode::raw);
  c.grid = 128;
  CHECK_THROWS_AS(run(c, make_shape(shape::PerturbedSphere{1, 0.5, 2, 0}, 1, 128)), InvalidInput);
  FlowConfig d = config(2, 1, FlowMode::raw);
  d.grid = 64;
  CHECK_THROWS_AS(run(d, make_shape(shape::Sphere{1}, 1, 64)), InvalidInput);
}

TEST_CASE("normalized flow conserves the monitored quermassintegral") {
  FlowConfig c = config(2, 1, FlowMode::normalized);
  c.grid = 128;
  c.t_max = 1;
  const auto res = run(c, make_shape(shape::EllipsoidOfRevolution{1.3, 1}, 2, 128));
  REQUIRE(res.ok());
  const auto v = res.record.series("V1");
  const auto ratio = res.record.series("I1");
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(v[i] / v.front() - 1) < 1e-6);
  for (std::size_t i = 1; i < ratio.size(); ++i) CHECK(ratio[i] >= ratio[i - 1] * (1 - 1e-10));
}

TEST_CASE("perturbed sphere rounds off under the rescaled flow") {
  // eps = 0.2 in mode 3 is not mean convex for n=2; 0.05 is.
  FlowConfig c = config(2, 1, FlowMode::rescaled_raw);
  c.grid = 128;
  c.t_max = 40;
  c.dt_init = 1e-4;
  c.tol_round = 1e-3;
  c.sample_every = 50;
  const auto res = run(c, make_shape(shape::PerturbedSphere{1, 0.05, 3, 0}, 2, 128));
  CHECK(res.status == RunStatus::converged);
  const auto rnd = res.record.series("roundness_rescaled");
  CHECK(rnd.back() < 1e-3);
  for (std::size_t i = 1; i < rnd.size(); ++i) CHECK(rnd[i] <= rnd[i - 1] * (1 + 1e-9));
}

TEST_CASE("integrate_to lands on the target time") {
  FlowConfig c = config(1, 1, FlowMode::raw);
  c.grid = 64;
  FlowState s(make_shape(shape::Sphere{1}, 1, 64));
  const auto out = integrate_to(s, 0.0137, c);
  CHECK(out.t == 0.0137);
  CHECK(mean_radius(out.graph) == doctest::Approx(std::exp(0.0137)).epsilon(1e-12));
}

}  // TEST_SUITE
