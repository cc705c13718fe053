#include "prnls/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "prnls/error.hpp"

namespace prnls {

void RunConfig::validate() const {
  if (c_schedule.empty()) fail(ErrorKind::config, "c schedule is empty");
  for (std::size_t i = 1; i < c_schedule.size(); ++i)
    if (!(c_schedule[i] > c_schedule[i - 1]))
      fail(ErrorKind::config, "c schedule must be strictly increasing");
  if (!(oracle.dr > 0.0) || !(oracle.r_max > oracle.dr))
    fail(ErrorKind::config, "oracle needs 0 < dr < r_max");
  // Parameter, solver and grid problems all surface as config errors here.
  try {
    PhysParams base = params;
    base.c = std::numeric_limits<double>::infinity();
    base.validate();
    for (double c : c_schedule) params_at(c).validate();
    solver.validate();
    (void)grid();
  } catch (const Error& e) {
    fail(ErrorKind::config, e.what());
  }
}

Grid RunConfig::grid() const { return make_grid(params.n, box_length, points); }

PhysParams RunConfig::params_at(double c) const {
  PhysParams p = params;
  p.c = c;
  return p;
}

RunConfig parse_config(std::string_view json_text) {
  RunConfig cfg;
  try {
    const auto j = nlohmann::json::parse(json_text);
    if (auto it = j.find("physics"); it != j.end()) {
      cfg.params.m = it->value("m", cfg.params.m);
      cfg.params.mu = it->value("mu", cfg.params.mu);
      cfg.params.p = it->value("p", cfg.params.p);
      cfg.params.n = it->value("n", cfg.params.n);
    }
    if (auto it = j.find("grid"); it != j.end()) {
      cfg.box_length = it->value("L", cfg.box_length);
      cfg.points = it->value("N", cfg.points);
    }
    if (auto it = j.find("schedule"); it != j.end())
      cfg.c_schedule = it->value("c", cfg.c_schedule);
    if (auto it = j.find("solver"); it != j.end()) {
      auto& s = cfg.solver;
      s.tol_residual = it->value("tol_residual", s.tol_residual);
      s.max_iter = it->value("max_iter", s.max_iter);
      if (it->contains("gamma") && !it->at("gamma").is_null())
        s.gamma = it->at("gamma").get<double>();
      s.init_width = it->value("init_width", s.init_width);
      s.fallback_step = it->value("fallback_step", s.fallback_step);
      const std::string method = it->value("method", std::string("petviashvili"));
      if (method == "petviashvili")
        cfg.method = SolveMethod::petviashvili;
      else if (method == "gradient")
        cfg.method = SolveMethod::gradient;
      else
        fail(ErrorKind::config, "unknown solver method '" + method + "'");
    }
    if (auto it = j.find("oracle"); it != j.end()) {
      cfg.oracle.r_max = it->value("r_max", cfg.oracle.r_max);
      cfg.oracle.dr = it->value("dr", cfg.oracle.dr);
    }
    if (auto it = j.find("output"); it != j.end())
      cfg.output_dir = it->value("dir", cfg.output_dir.string());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::config, std::string("bad config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const Error& e) {
    fail(e.kind(), path.string() + ": " + e.what());
  }
}

}  // namespace prnls
