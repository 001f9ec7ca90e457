// curvcheck: scenario-driven verification of curvature-dimension inequalities
// on discretized model spaces.

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "curv/kernels.hpp"
#include "curv/scenario.hpp"

namespace {

namespace fs = std::filesystem;

void ensure_dir(const std::string& dir) {
  if (!dir.empty()) fs::create_directories(dir);
}

std::string join(const std::string& dir, const std::string& file) {
  return dir.empty() ? file : (fs::path(dir) / file).string();
}

void write_outputs(const std::string& out_dir, const std::string& base,
                   const std::vector<curv::ScenarioResult>& results) {
  ensure_dir(out_dir);
  curv::write_file(join(out_dir, base + ".csv"), curv::results_to_csv(results));
  curv::write_file(join(out_dir, base + ".json"), curv::results_to_json(results));
}

void write_set_rasters(const std::string& out_dir, const curv::Scenario& sc,
                       double h_override) {
  const curv::ScenarioGeometry geo = curv::resolve_geometry(sc, h_override);
  for (const auto& [name, set] : geo.sets)
    curv::write_file(join(out_dir, sc.name + "__" + name + ".raster.txt"),
                     curv::raster_to_text(sc.space, set));
}

int cmd_run(const std::string& config, int jobs, const std::string& out_dir,
            double h_override) {
  const std::vector<curv::Scenario> scenarios = curv::load_config_file(config);
  std::vector<curv::ScenarioResult> results(scenarios.size());
  std::vector<std::string> errors(scenarios.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < scenarios.size(); i = next.fetch_add(1)) {
      try {
        results[i] = curv::run_scenario(scenarios[i], h_override);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(scenarios.size())));
  std::vector<std::thread> pool;
  for (int i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& th : pool) th.join();

  for (std::size_t i = 0; i < scenarios.size(); ++i)
    if (!errors[i].empty()) {
      std::cerr << "error: scenario '" << scenarios[i].name << "': " << errors[i] << "\n";
      return 2;
    }

  ensure_dir(out_dir);
  write_outputs(out_dir, "report", results);
  for (const curv::Scenario& sc : scenarios) write_set_rasters(out_dir, sc, h_override);

  bool all_pass = true;
  for (const curv::ScenarioResult& r : results) {
    for (const curv::CheckReport& rep : r.reports) {
      std::printf("%-28s %-4s K=%-6g N=%-4g min-margin=% .3e %s\n", r.name.c_str(),
                  curv::condition_name(rep.condition), rep.K, rep.N, rep.min_margin(),
                  rep.passed() ? "pass" : "FAIL");
      all_pass = all_pass && rep.passed();
    }
  }
  return all_pass ? 0 : 1;
}

int cmd_figure1(double h, const std::string& out_dir) {
  const curv::Figure1Result res = curv::reproduce_figure1(h);
  ensure_dir(out_dir);
  curv::write_file(join(out_dir, "figure1_M_half.raster.txt"),
                   curv::raster_to_text(curv::ModelSpace(curv::Euclidean{2}), res.mid_half));
  curv::write_file(join(out_dir, "figure1_D_half.raster.txt"),
                   curv::raster_to_text(curv::ModelSpace(curv::Euclidean{2}), res.support_half));
  curv::write_file(join(out_dir, "figure1_A.raster.txt"),
                   curv::raster_to_text(curv::ModelSpace(curv::Euclidean{2}), res.set_A));
  curv::write_file(join(out_dir, "figure1_B.raster.txt"),
                   curv::raster_to_text(curv::ModelSpace(curv::Euclidean{2}), res.set_B));

  std::string csv = "quantity,t,value\n";
  csv += "m_mid_half,0.5," + curv::format_double(res.m_mid) + "\n";
  csv += "m_support_half,0.5," + curv::format_double(res.m_support) + "\n";
  csv += "gap,0.5," + curv::format_double(res.gap) + "\n";
  for (const auto& e : res.splits) {
    csv += "pair" + std::to_string(e.pair) + "_m_mid," + curv::format_double(e.t) + "," +
           curv::format_double(e.m_mid) + "\n";
    csv += "pair" + std::to_string(e.pair) + "_m_support," + curv::format_double(e.t) + "," +
           curv::format_double(e.m_support) + "\n";
  }
  curv::write_file(join(out_dir, "figure1.csv"), csv);

  std::printf("h = %g, tol = %g\n", res.h, res.tol);
  std::printf("m(M_1/2) = %.6f   m(D_1/2) = %.6f   gap = %.6f  -> %s\n", res.m_mid,
              res.m_support, res.gap, res.gap_strict ? "strictly larger" : "NOT strict");
  for (const auto& e : res.splits)
    std::printf("split pair %d, t=%.2f: m(M_t)=%.6f m(D_t)=%.6f |diff|=%.2e\n", e.pair, e.t,
                e.m_mid, e.m_support, e.diff);
  std::printf("split pairs agree within tol: %s\n", res.splits_equal ? "yes" : "NO");
  return res.gap_strict && res.splits_equal ? 0 : 1;
}

int cmd_sweep(const std::string& config, const std::string& param, double from, double to,
              int steps, const std::string& out_dir) {
  if (param != "K") {
    std::cerr << "error: only --param K is supported\n";
    return 2;
  }
  const std::vector<curv::Scenario> scenarios = curv::load_config_file(config);
  ensure_dir(out_dir);
  std::string csv = "scenario,K,pass\n";
  bool any_found = false;
  for (const curv::Scenario& sc : scenarios) {
    const curv::SweepResult res = curv::sweep_k(sc, from, to, steps);
    for (const auto& [k, ok] : res.tested)
      csv += sc.name + "," + curv::format_double(k) + "," + (ok ? "pass" : "fail") + "\n";
    if (res.found) {
      any_found = true;
      std::printf("%s: largest all-pass K on the grid: %g\n", sc.name.c_str(), res.best_K);
    } else {
      std::printf("%s: no all-pass K on the grid\n", sc.name.c_str());
    }
  }
  if (!out_dir.empty()) curv::write_file(join(out_dir, "sweep.csv"), csv);
  return any_found ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curvature-dimension condition checks on discretized model spaces"};
  app.set_help_flag("--help", "print help");  // frees -h / --h for the resolution flag
  app.require_subcommand(1);

  std::string config, out_dir, param = "K";
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  double h_override = 0.0, h_fig = 0.025, from = 0.0, to = 1.0;
  int steps = 16;

  CLI::App* run = app.add_subcommand("run", "run scenarios from a config file");
  run->add_option("config", config, "scenario config (JSON)")->required();
  run->add_option("--jobs", jobs, "parallel scenario jobs");
  run->add_option("--out", out_dir, "output directory for reports and rasters");
  run->add_option("--h-override", h_override, "override every scenario's grid resolution");

  CLI::App* fig = app.add_subcommand("figure1", "reproduce the midpoint-vs-support example");
  fig->add_option("--h", h_fig, "grid resolution");
  fig->add_option("--out", out_dir, "output directory");

  CLI::App* sweep = app.add_subcommand("sweep", "largest all-pass K by bisection");
  sweep->add_option("config", config, "scenario config (JSON)")->required();
  sweep->add_option("--param", param, "swept parameter (K)");
  sweep->add_option("--from", from, "grid start")->required();
  sweep->add_option("--to", to, "grid end")->required();
  sweep->add_option("--steps", steps, "grid steps");
  sweep->add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return cmd_run(config, jobs, out_dir, h_override);
    if (fig->parsed()) return cmd_figure1(h_fig, out_dir);
    return cmd_sweep(config, param, from, to, steps, out_dir);
  } catch (const curv::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
