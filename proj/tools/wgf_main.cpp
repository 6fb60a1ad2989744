// wgf: scenario runner and measure utilities for 1D Wasserstein gradient
// flows. Subcommands: run, suite, equilibria, distances.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "wgf/csv_io.hpp"
#include "wgf/errors.hpp"
#include "wgf/numerics.hpp"
#include "wgf/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int outcome_code(const wgf::RunSummary& s) {
  switch (s.outcome) {
    case wgf::RunSummary::Outcome::Ok: return s.all_pass() ? kExitOk : kExitCheckFailed;
    case wgf::RunSummary::Outcome::CheckFailed: return kExitCheckFailed;
    case wgf::RunSummary::Outcome::ConfigFailed: return kExitConfig;
    case wgf::RunSummary::Outcome::NumericalFailed: return kExitNumerical;
  }
  return kExitNumerical;
}

void print_summary(const wgf::RunSummary& s) {
  std::printf("%s\n", s.table_row().c_str());
  for (const auto& v : s.verdicts)
    std::printf("  %s  %s: %s\n", v.pass ? "PASS" : "FAIL", v.name.c_str(),
                v.detail.c_str());
  if (s.outcome == wgf::RunSummary::Outcome::Ok ||
      s.outcome == wgf::RunSummary::Outcome::CheckFailed)
    std::printf("  artifacts: %s  (%.2fs, %ld steps)\n",
                s.artifact_dir.string().c_str(), s.wall_seconds, s.steps);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"1D Wasserstein gradient flow lab"};
  app.require_subcommand(1);

  std::string cfg_path, suite_dir, out_dir;
  std::string measure_a, measure_b, metric = "bl";
  double metric_p = 2.0;
  int stride = 1, jobs = 1;

  auto* cmd_run = app.add_subcommand("run", "run one scenario");
  cmd_run->add_option("cfg", cfg_path, "scenario file")->required();
  cmd_run->add_option("--out", out_dir, "output root (default $WGF_OUT or ./out)");
  cmd_run->add_option("--stride", stride, "write every Nth snapshot")
      ->check(CLI::PositiveNumber);

  auto* cmd_suite = app.add_subcommand("suite", "run every scenario in a directory");
  cmd_suite->add_option("dir", suite_dir, "directory of .cfg files")->required();
  cmd_suite->add_option("--jobs", jobs, "concurrent scenarios")
      ->check(CLI::PositiveNumber);
  cmd_suite->add_option("--out", out_dir, "output root");

  auto* cmd_eq = app.add_subcommand("equilibria", "solve and dump a scenario's equilibria");
  cmd_eq->add_option("cfg", cfg_path, "scenario file")->required();
  cmd_eq->add_option("--out", out_dir, "output root");

  auto* cmd_dist = app.add_subcommand("distances", "distance between two measure CSV files");
  cmd_dist->add_option("a", measure_a, "first measure CSV")->required();
  cmd_dist->add_option("b", measure_b, "second measure CSV")->required();
  cmd_dist->add_option("--metric", metric, "bl | w1 | w2 | wp");
  cmd_dist->add_option("--p", metric_p, "exponent for --metric wp");

  CLI11_PARSE(app, argc, argv);

  const std::filesystem::path out_root =
      out_dir.empty() ? wgf::default_out_root() : std::filesystem::path(out_dir);

  try {
    if (cmd_run->parsed()) {
      const wgf::Scenario sc = wgf::parse_scenario(cfg_path);
      const wgf::RunSummary summary = wgf::run(sc, out_root, stride);
      if (summary.outcome == wgf::RunSummary::Outcome::ConfigFailed ||
          summary.outcome == wgf::RunSummary::Outcome::NumericalFailed)
        std::fprintf(stderr, "error: %s\n", summary.error.c_str());
      print_summary(summary);
      return outcome_code(summary);
    }
    if (cmd_suite->parsed()) {
      const auto results = wgf::run_suite(suite_dir, jobs, out_root);
      int code = kExitOk;
      bool any_fail = false, any_abort = false, any_config = false;
      for (const auto& s : results) {
        std::printf("%s\n", s.table_row().c_str());
        if (s.outcome == wgf::RunSummary::Outcome::ConfigFailed) any_config = true;
        else if (s.outcome == wgf::RunSummary::Outcome::NumericalFailed) any_abort = true;
        else if (!s.all_pass()) any_fail = true;
      }
      if (any_config) code = kExitConfig;
      else if (any_abort) code = kExitNumerical;
      else if (any_fail) code = kExitCheckFailed;
      return code;
    }
    if (cmd_eq->parsed()) {
      const wgf::Scenario sc = wgf::parse_scenario(cfg_path);
      const wgf::EquilibriumSet eqs = wgf::build_equilibria(sc);
      namespace fs = std::filesystem;
      const fs::path dir = out_root / sc.id / "equilibria";
      fs::create_directories(dir);
      for (const auto& m : eqs.members) {
        wgf::write_measure_csv(dir / (m.label + ".csv"), m.measure);
        std::printf("%-32s residual=%s energy=%s\n", m.label.c_str(),
                    wgf::format_full(m.residual).c_str(),
                    wgf::format_full(wgf::energy(sc.model, m.measure)).c_str());
      }
      std::printf("wrote %zu equilibria under %s\n", eqs.members.size(),
                  dir.string().c_str());
      return kExitOk;
    }
    if (cmd_dist->parsed()) {
      const wgf::Measure a = wgf::read_measure_csv(measure_a);
      const wgf::Measure b = wgf::read_measure_csv(measure_b);
      const wgf::MetricKind kind = wgf::metric_from_name(metric);
      const double d = wgf::eval_metric(kind, a, b, metric_p);
      std::printf("%s\n", wgf::format_full(d).c_str());
      return kExitOk;
    }
  } catch (const wgf::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const wgf::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const wgf::NumericalAbort& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  } catch (const wgf::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  }
  return kExitConfig;
}
