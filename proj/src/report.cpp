#include "curv/report.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace curv {

bool ScenarioResult::passed() const {
  for (const CheckReport& r : reports)
    if (!r.passed()) return false;
  return true;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string results_to_csv(const std::vector<ScenarioResult>& results) {
  std::string out = "scenario,condition,K,N,t,Nprime,lhs,rhs,margin,pass\n";
  for (const ScenarioResult& sr : results) {
    for (const CheckReport& r : sr.reports) {
      for (const CheckEntry& e : r.entries) {
        out += sr.name;
        out += ',';
        out += condition_name(r.condition);
        out += ',';
        out += format_double(r.K);
        out += ',';
        out += format_double(r.N);
        out += ',';
        out += format_double(e.t);
        out += ',';
        out += format_double(e.Nprime);
        out += ',';
        out += format_double(e.lhs);
        out += ',';
        out += format_double(e.rhs);
        out += ',';
        out += format_double(e.margin);
        out += ',';
        out += outcome_name(e.outcome);
        out += '\n';
      }
    }
  }
  return out;
}

std::string results_to_json(const std::vector<ScenarioResult>& results) {
  nlohmann::json root = nlohmann::json::array();
  for (const ScenarioResult& sr : results) {
    nlohmann::json js;
    js["scenario"] = sr.name;
    js["passed"] = sr.passed();
    js["reports"] = nlohmann::json::array();
    for (const CheckReport& r : sr.reports) {
      nlohmann::json jr;
      jr["condition"] = condition_name(r.condition);
      jr["K"] = r.K;
      jr["N"] = r.N;
      jr["h"] = r.h;
      jr["atoms0"] = r.atoms0;
      jr["atoms1"] = r.atoms1;
      jr["divergences"] = r.divergences;
      jr["passed"] = r.passed();
      jr["tolerance"] = {{"abs", r.tol.abs}, {"rel", r.tol.rel}, {"c_disc", r.tol.c_disc}};
      jr["entries"] = nlohmann::json::array();
      for (const CheckEntry& e : r.entries) {
        nlohmann::json je;
        je["t"] = e.t;
        je["Nprime"] = e.Nprime;
        if (e.piece >= 0) je["piece"] = e.piece;
        // JSON has no infinities; margins/rhs of divergent points serialize as strings
        auto put = [&](const char* key, double v) {
          if (std::isfinite(v))
            je[key] = v;
          else
            je[key] = format_double(v);
        };
        put("lhs", e.lhs);
        put("rhs", e.rhs);
        put("margin", e.margin);
        je["tol"] = e.tol;
        je["outcome"] = outcome_name(e.outcome);
        jr["entries"].push_back(std::move(je));
      }
      js["reports"].push_back(std::move(jr));
    }
    root.push_back(std::move(js));
  }
  return root.dump(2) + "\n";
}

std::string raster_to_text(const ModelSpace& space, const CellSet& set) {
  std::string out;
  for (std::int64_t c : set.cells()) {
    const Point center = set.grid().cell_center(c);
    for (int k = 0; k < set.grid().dim(); ++k) {
      out += format_double(center[k]);
      out += ' ';
    }
    out += format_double(cell_measure(space, set.grid(), c));
    out += '\n';
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path);
  f << content;
}

}  // namespace curv
