#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "gp/config.hpp"
#include "gp/dynamics.hpp"
#include "gp/verification.hpp"

namespace {

int run_task(const std::string& task, const std::string& config_path,
             const std::string& out_override, const std::string& phi_override,
             bool emit_gnuplot) {
  nlohmann::json j;
  try {
    std::ifstream is(config_path);
    if (!is) {
      std::cerr << "error: cannot open config " << config_path << "\n";
      return 2;
    }
    j = nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: config: invalid JSON: " << e.what() << "\n";
    return 2;
  }
  if (!j.is_object()) {
    std::cerr << "error: config: must be a JSON object\n";
    return 2;
  }
  j["task"] = task;
  if (!out_override.empty()) j["out_dir"] = out_override;
  if (!phi_override.empty()) {
    j["datum"] = {{"kind", "from_file"}, {"path", phi_override}};
  }

  try {
    gp::ExperimentConfig cfg = gp::parse_config(j);
    const int code = gp::run(cfg);
    if (code == 3)
      std::cerr << "numerical abort: diagnostics written to "
                << cfg.out_dir.string() << "\n";
    if (code == 0 && emit_gnuplot) {
      std::ofstream gp(cfg.out_dir / "plots.gp");
      gp << "set logscale xy\nset datafile separator ','\n";
      if (task == "simulate")
        gp << "plot 'norms.csv' using 1:7 with lines title 'Linf'\n";
      else if (task == "decay")
        gp << "plot 'decay.csv' using 1:2 with lines title 'norm'\n";
      else if (task == "scatter")
        gp << "plot 'sweeps.csv' using 1:2 with linespoints title 'D_k'\n";
    }
    return code;
  } catch (const gp::ValidationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const gp::NumericalAbort& e) {
    std::cerr << "numerical abort: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral toolbox for the Gross-Pitaevskii perturbation"};
  app.require_subcommand(1);

  std::string config_path, out_dir, phi_path, budget = "quick";
  std::string report = "report.csv";
  bool emit_gnuplot = false;

  const char* tasks[] = {"simulate",    "scatter",        "decay",
                         "phase-scan",  "verify-symbols", "normal-form",
                         "oracle"};
  for (const char* t : tasks) {
    auto* sub = app.add_subcommand(t);
    sub->add_option("--config", config_path, "experiment config (JSON)")
        ->required();
    sub->add_option("--out", out_dir, "output directory override");
    if (std::string(t) == "scatter")
      sub->add_option("--phi", phi_path, "datum snapshot override");
    sub->add_flag("--emit-gnuplot", emit_gnuplot,
                  "write a gnuplot script next to the CSVs");
  }
  auto* verify = app.add_subcommand("verify");
  verify->add_option("--budget", budget, "quick or full")
      ->check(CLI::IsMember({"quick", "full"}));
  verify->add_option("--report", report, "report CSV path");

  CLI11_PARSE(app, argc, argv);

  if (verify->parsed()) {
    auto results = gp::run_identity_suite();
    auto rates = gp::run_rate_suite(budget == "full" ? gp::Budget::full
                                                     : gp::Budget::quick);
    results.insert(results.end(), rates.begin(), rates.end());
    gp::write_report(report, results);
    bool ok = true;
    for (const auto& r : results) {
      std::cout << r.check_id << ": " << r.status << "\n";
      if (r.status == "fail") ok = false;
    }
    return ok ? 0 : 1;
  }

  return run_task(app.get_subcommands().front()->get_name(), config_path,
                  out_dir, phi_path, emit_gnuplot);
}
