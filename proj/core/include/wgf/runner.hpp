#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "wgf/lasalle.hpp"
#include "wgf/scenario.hpp"

namespace wgf {

struct Verdict {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct RunSummary {
  enum class Outcome { Ok, CheckFailed, ConfigFailed, NumericalFailed };

  std::string scenario_id;
  Outcome outcome = Outcome::Ok;
  std::string error;  // set when outcome is ConfigFailed / NumericalFailed
  double wall_seconds = 0.0;
  long steps = 0;
  std::vector<Verdict> verdicts;
  std::filesystem::path artifact_dir;

  bool all_pass() const;
  std::string table_row() const;
};

/// Solves the scenario's declared equilibria (no time integration).
EquilibriumSet build_equilibria(const Scenario& scenario);

/// Full pipeline: initial datum, equilibria, evolution, LaSalle checks,
/// artifacts under out_root/<id>/. Artifacts are bit-reproducible across
/// reruns (no timestamps or wall times are written).
RunSummary run(const Scenario& scenario, const std::filesystem::path& out_root,
               int snapshot_stride = 1);

/// Runs every *.cfg in the directory (sorted by name), up to `jobs`
/// scenarios concurrently. Output directories are disjoint by scenario id.
std::vector<RunSummary> run_suite(const std::filesystem::path& dir, int jobs,
                                  const std::filesystem::path& out_root);

/// Default output root: $WGF_OUT when set, else "out".
std::filesystem::path default_out_root();

} // namespace wgf
