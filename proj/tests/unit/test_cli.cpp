#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "quermass/cli.hpp"
#include "quermass/csv.hpp"

using namespace quermass;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("quermass_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string write_config(const TempDir& d, const std::string& name, const json& doc) {
  const auto p = d.file(name);
  std::ofstream(p) << doc.dump(2);
  return p;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json sphere_doc(const TempDir& d) {
  return {{"problem", {{"n", 1}, {"k", 1}, {"mode", "raw"}}},
          {"shape", {{"type", "sphere"}, {"params", {{"R", 1.0}}}}},
          {"grid", {{"N", 64}}},
          {"stepping", {{"t_max", 0.2}, {"dt_init", 1e-3}, {"dt_max", 1e-3}}},
          {"output", {{"trajectory_path", d.file("out/traj.csv")},
                      {"snapshot_every", 50},
                      {"snapshot_dir", d.file("out/snap")}}}};
}

cli::Options quiet() {
  cli::Options o;
  o.quiet = true;
  return o;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("run on a sphere") {
  TempDir d;
  std::ostringstream out, err;
  const auto cfg = write_config(d, "c.json", sphere_doc(d));
  CHECK(cli::cmd_run(cfg, {}, out, err) == cli::kOk);
  CHECK(out.str().find("status=reached_t_max") != std::string::npos);
  const auto t = csv::read_strict_file(d.file("out/traj.csv"));
  const auto ratio = t.numbers("I0");
  CHECK(ratio.size() == 201);
  for (double v : ratio) CHECK(v == doctest::Approx(ratio.front()).epsilon(1e-13));
  CHECK(fs::exists(d.file("out/snap/snapshot_000000.csv")));
  CHECK(fs::exists(d.file("out/snap/snapshot_000200.csv")));
  CHECK_NOTHROW(csv::read_strict_file(d.file("out/snap/snapshot_000050.csv")));
  for (const auto& e : fs::recursive_directory_iterator(d.path)) {
    CHECK(e.path().extension() != ".tmp");
  }
}

TEST_CASE("run exit codes") {
  TempDir d;
  std::ostringstream out, err;
  auto doc = sphere_doc(d);
  doc["problem"] = {{"n", 2}, {"k", 3}, {"mode", "raw"}};
  CHECK(cli::cmd_run(write_config(d, "k3.json", doc), {}, out, err) == cli::kConfig);
  CHECK(err.str().find("problem.k") != std::string::npos);

  err.str("");
  CHECK(cli::cmd_run(d.file("missing.json"), {}, out, err) == cli::kConfig);

  err.str("");
  doc = sphere_doc(d);
  doc["shape"] = {{"type", "perturbed_sphere"}, {"params", {{"R", 1.0}, {"eps", 0.5}, {"mode", 2}}}};
  CHECK(cli::cmd_run(write_config(d, "bad.json", doc), {}, out, err) == cli::kConfig);
  CHECK(err.str().find("precondition") != std::string::npos);

  // every step violates the conservation test, so dt underflows
  doc = sphere_doc(d);
  doc["shape"] = {{"type", "ellipse"}, {"params", {{"a", 2.0}, {"b", 1.0}}}};
  doc["problem"]["mode"] = "rescaled_raw";
  doc["tolerances"] = {{"tol_conserve", 1e-300}};
  doc["output"]["trajectory_path"] = d.file("fail/traj.csv");
  out.str("");
  CHECK(cli::cmd_run(write_config(d, "under.json", doc), quiet(), out, err) == cli::kNumerical);
  CHECK(out.str().find("status=dt_underflow") != std::string::npos);
  CHECK(csv::read_strict_file(d.file("fail/traj.csv")).rows.size() >= 1);

  cli::Options o = quiet();
  o.overrides = {"problem.k=3"};
  err.str("");
  CHECK(cli::cmd_run(write_config(d, "ok.json", sphere_doc(d)), o, out, err) == cli::kConfig);
  CHECK(err.str().find("problem.k") != std::string::npos);
}

TEST_CASE("ellipse rescaled run rounds off") {
  TempDir d;
  auto doc = sphere_doc(d);
  doc["shape"] = {{"type", "ellipse"}, {"params", {{"a", 2.0}, {"b", 1.0}}}};
  doc["problem"]["mode"] = "rescaled_raw";
  doc["grid"]["N"] = 128;
  doc["stepping"] = {{"t_max", 20.0}, {"dt_init", 1e-4}, {"dt_max", 1e-2}, {"sample_every", 50}};
  doc["tolerances"] = {{"tol_round", 1e-3}};
  doc["output"]["snapshot_every"] = 0;
  std::ostringstream out, err;
  CHECK(cli::cmd_run(write_config(d, "e.json", doc), quiet(), out, err) == cli::kOk);
  CHECK(out.str().find("status=converged") != std::string::npos);
  const auto rnd = csv::read_strict_file(d.file("out/traj.csv")).numbers("roundness_rescaled");
  CHECK(rnd.back() <= 1e-3);
}

TEST_CASE("verify exit codes") {
  TempDir d;
  std::ostringstream out, err;
  CHECK(cli::cmd_verify("variation", std::nullopt, quiet(), out, err) == cli::kOk);
  CHECK(out.str().find("0 failed") != std::string::npos);
  CHECK(cli::cmd_verify("nonsense", std::nullopt, quiet(), out, err) == cli::kConfig);

  json af = {{"problem", {{"n", 2}, {"k", 2}, {"mode", "rescaled_raw"}}},
             {"shape", {{"type", "perturbed_sphere"}, {"params", {{"R", 1.0}, {"eps", 0.5}, {"mode", 2}}}}},
             {"grid", {{"N", 128}}},
             {"stepping", {{"t_max", 1.0}}}};
  err.str("");
  CHECK(cli::cmd_verify("af", write_config(d, "af.json", af), quiet(), out, err) == cli::kConfig);

  json lemma = {{"problem", {{"n", 2}, {"k", 1}, {"mode", "raw"}}},
                {"shape", {{"type", "perturbed_sphere"}, {"params", {{"R", 1.0}, {"eps", 0.01}, {"mode", 10}}}}},
                {"grid", {{"N", 256}}},
                {"stepping", {{"t_max", 1.0}, {"dt_init", 1e-2}, {"dt_max", 1e-2}}},
                {"output", {{"report_path", d.file("rep/report.csv")}}}};
  out.str("");
  const auto path = write_config(d, "lemma.json", lemma);
  CHECK(cli::cmd_verify("lemma", path, quiet(), out, err) == cli::kViolation);
  CHECK(out.str().find("FAIL") != std::string::npos);
  const auto rep = csv::read_strict_file(d.file("rep/report.csv"));
  CHECK(rep.rows.size() == 3);

  cli::Options fine = quiet();
  fine.overrides = {"stepping.dt_init=1e-3"};
  CHECK(cli::cmd_verify("lemma", path, fine, out, err) == cli::kOk);
}

TEST_CASE("every suite has tasks") {
  for (const auto& s : cli::suite_names()) CHECK_FALSE(cli::suite_tasks(s, std::nullopt).empty());
  CHECK_THROWS_AS(cli::suite_tasks("bogus", std::nullopt), ConfigError);
}

TEST_CASE("sweep bookkeeping and determinism") {
  TempDir d;
  json doc = {{"problem", {{"n", 1}, {"k", 1}, {"mode", "rescaled_raw"}}},
              {"shape", {{"type", "sphere"}}},
              {"grid", {{"N", 64}}},
              {"stepping", {{"t_max", 20.0}, {"dt_init", 1e-4}, {"dt_max", 1e-2}, {"sample_every", 100}}},
              {"tolerances", {{"tol_round", 1e-3}}},
              {"sweep", {{"shapes", json::array({
                             json{{"type", "sphere"}, {"params", {{"R", 1.0}}}},
                             json{{"type", "ellipse"}, {"params", {{"a", 1.3}, {"b", 1.0}}}},
                             json{{"type", "perturbed_sphere"}, {"params", {{"R", 1.0}}}}})},
                         {"eps", {0.05}},
                         {"modes", {2}},
                         {"seeds", {{"first", 1}, {"count", 2}}},
                         {"output_dir", d.file("sw")}}}};
  const auto cfg = write_config(d, "sweep.json", doc);
  std::ostringstream out, err;
  cli::Options o = quiet();
  o.jobs = 2;
  CHECK(cli::cmd_sweep(cfg, o, out, err) == cli::kOk);
  const auto index = csv::read_strict_file(d.file("sw/index.csv"));
  // sphere, ellipse, perturbed mode 2, two random seeds
  CHECK(index.rows.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(fs::exists(d.file("sw/traj_000" + std::to_string(i) + ".csv")));
  }
  for (const auto& row : index.rows) CHECK(row[index.column("pass")] == "1");
  const auto first = slurp(d.file("sw/index.csv"));
  o.jobs = 1;
  CHECK(cli::cmd_sweep(cfg, o, out, err) == cli::kOk);
  CHECK(slurp(d.file("sw/index.csv")) == first);

  CHECK(cli::cmd_sweep(write_config(d, "plain.json", sphere_doc(d)), o, out, err) == cli::kConfig);
}

TEST_CASE("atomic writes create parent directories") {
  TempDir d;
  cli::write_file_atomic(d.file("a/b/c.txt"), [](std::ostream& os) { os << "x\n"; });
  CHECK(slurp(d.file("a/b/c.txt")) == "x\n");
  CHECK_FALSE(fs::exists(d.file("a/b/c.txt.tmp")));
}

}  // TEST_SUITE
