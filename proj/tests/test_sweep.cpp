#include <doctest.h>

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "prnls/config.hpp"
#include "prnls/error.hpp"
#include "prnls/sweep.hpp"
#include "support.hpp"

using namespace prnls;

namespace {

const char* kHeader =
    "c,energy,lp,l2_sq,grad_sq,hhalf,err_h1,residual,iterations,radial_scatter,"
    "min_over_max,converged\n";

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig small_config() {
  return parse_config(R"({"schedule": {"c": [4, 8, 16]}})");
}

}  // namespace

TEST_CASE("config defaults and keys") {
  const RunConfig d = parse_config("{}");
  CHECK(d.params.m == 1.0);
  CHECK(d.params.mu == 1.0);
  CHECK(d.params.p == 3.0);
  CHECK(d.params.n == 2);
  CHECK(d.box_length == 32.0);
  CHECK(d.points == 256);
  CHECK(d.c_schedule == std::vector<double>{1, 2, 4, 8, 16, 32});
  CHECK(d.method == SolveMethod::petviashvili);

  const RunConfig c = parse_config(R"({
    "physics": {"m": 2.0, "mu": 0.5, "p": 2.5, "n": 3},
    "grid": {"L": 20, "N": 32},
    "schedule": {"c": [1, 3]},
    "solver": {"method": "gradient", "tol_residual": 1e-8, "max_iter": 50,
               "gamma": 1.5, "init_width": 1.0, "fallback_step": 0.25},
    "oracle": {"r_max": 20, "dr": 0.002},
    "output": {"dir": "elsewhere"}})");
  CHECK(c.params.m == 2.0);
  CHECK(c.params.n == 3);
  CHECK(c.points == 32);
  CHECK(c.method == SolveMethod::gradient);
  CHECK(c.solver.gamma.value() == 1.5);
  CHECK(c.solver.max_iter == 50);
  CHECK(c.oracle.dr == 0.002);
  CHECK(c.output_dir == "elsewhere");
}

TEST_CASE("config errors") {
  auto kind = [](const char* text) {
    try {
      parse_config(text);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::numeric;  // not thrown
  };
  CHECK(kind(R"({"physics": {"m": 1, "mu": 2}, "schedule": {"c": [1]}})") == ErrorKind::config);
  CHECK(kind(R"({"schedule": {"c": [2, 1]}})") == ErrorKind::config);
  CHECK(kind(R"({"schedule": {"c": []}})") == ErrorKind::config);
  CHECK(kind(R"({"schedule": {"c": [0.5]}})") == ErrorKind::config);
  CHECK(kind(R"({"grid": {"N": 100}})") == ErrorKind::config);
  CHECK(kind(R"({"physics": {"p": 4}})") == ErrorKind::config);
  CHECK(kind(R"({"solver": {"method": "newton"}})") == ErrorKind::config);
  CHECK(kind(R"({"grid": {"N": "many"}})") == ErrorKind::config);
  CHECK(kind("{not json") == ErrorKind::config);
  CHECK_THROWS_AS(load_config("/nonexistent/prnls.json"), Error);
}

TEST_CASE("empty record list gives a header-only CSV") {
  CHECK(sweep_csv({}) == kHeader);
}

TEST_CASE("snapshot stems") {
  CHECK(snapshot_stem(std::numeric_limits<double>::infinity()) == "u_inf");
  CHECK(snapshot_stem(32.0) == "u_c32");
  CHECK(snapshot_stem(1.5) == "u_c1.5");
}

TEST_CASE("uniform bounds need two converged rows") {
  SweepRecord one;
  one.converged = true;
  one.lp = 1.0;
  CHECK_THROWS(check_uniform_bounds({one}, one, PhysParams{}));
}

TEST_CASE("small sweep") {
  const RunConfig cfg = small_config();
  const SweepResult a = run_sweep(cfg);
  REQUIRE(a.records.size() == 3);
  CHECK(std::isinf(a.limit.c));
  CHECK(a.limit.err_h1 == 0.0);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    const SweepRecord& r = a.records[i];
    CHECK(r.converged);
    CHECK(r.residual <= cfg.solver.tol_residual);
    CHECK(r.radial_scatter <= 1e-6);
    CHECK(r.min_over_max >= -1e-10);
    CHECK(r.energy < a.limit.energy);
    if (i > 0) {
      CHECK(r.err_h1 < a.records[i - 1].err_h1);
      CHECK(r.energy > a.records[i - 1].energy);
    }
  }
  CHECK(a.bounds.lp_ratio <= 2.0);
  CHECK(std::abs(a.bounds.limit_slack_relative) <= 1e-6);
  CHECK(a.all_passed());

  // Same config twice: identical bytes.
  const SweepResult b = run_sweep(cfg);
  CHECK(sweep_csv(a.records) == sweep_csv(b.records));
  CHECK(sweep_json(a) == sweep_json(b));

  const auto dir = test::scratch_dir("sweep");
  emit(a, dir);
  const std::string csv = slurp(dir / "sweep.csv");
  CHECK(csv == sweep_csv(a.records));
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  int snapshots = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".bin") ++snapshots;
  CHECK(snapshots == 4);
  CHECK(std::filesystem::exists(dir / "u_inf.bin.json"));
  CHECK(std::filesystem::exists(dir / "u_c16.bin.json"));

  const auto j = nlohmann::json::parse(slurp(dir / "sweep.json"));
  CHECK(j.at("records").size() == 3);

  const Snapshot s = read_snapshot(dir / "u_c8.bin");
  CHECK(s.params.c == 8.0);
  CHECK(s.field.values == a.states[1].field.values);

  // A second emit into the same place leaves the same bytes.
  emit(b, dir);
  CHECK(slurp(dir / "sweep.csv") == csv);
}

TEST_CASE("emit reports I/O failures with the path") {
  const auto dir = test::scratch_dir("blocked");
  std::ofstream(dir / "file") << "x";
  SweepResult r = run_sweep(parse_config(R"({"grid": {"L": 32, "N": 64}, "schedule": {"c": [4, 8]}})"));
  CHECK_THROWS_WITH_AS(emit(r, dir / "file" / "sub"), doctest::Contains("file"), Error);
}
