#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wgf/energy.hpp"
#include "wgf/grid_flow.hpp"
#include "wgf/measures.hpp"
#include "wgf/metrics.hpp"
#include "wgf/particle_flow.hpp"

namespace wgf {

/// Initial datum specification.
struct InitialSpec {
  enum class Type {
    Uniform,
    GaussianLike,
    Box,
    Atoms,
    PerturbedUniform,
    FromFile
  };
  Type type = Type::Uniform;
  double center = 0.0;
  double width = 1.0;
  double amplitude = 0.1;
  int mode = 1;
  std::vector<double> positions;
  std::vector<double> weights;
  std::filesystem::path file;
};

/// Which equilibrium constructors a scenario solves before checking.
struct EquilibriaSpec {
  enum class Kind {
    Uniform,          // normalized Lebesgue on the torus
    Kuramoto,         // kappa > 2 branch centered at `center`
    Barenblatt,       // m from the model
    Parabolic,        // alpha parameter (quadratic-attraction steady state)
    WeakConfinement,  // dim parameter
    McKeanPicard,     // Picard from listed seeds
    DiracLattice,     // atoms from the initial datum
    Atoms,            // explicit atom list, validated by dissipation
  };
  Kind kind = Kind::Uniform;
  double center = 0.0;
  double alpha = 0.0;
  int dim = 1;
  std::vector<double> seed_centers;  // McKean Picard gaussian seed centers
  std::vector<double> positions;
  std::vector<double> weights;
  std::string label;
};

struct ChecksSpec {
  bool energy_monotone = true;
  std::optional<double> ms_residual_rel;  // sup |r| <= rel * max |dE/dt|
  std::optional<double> convergence_tol;
  MetricKind convergence_metric = MetricKind::BL;
  bool translation_quotient = false;
  int convergence_window = 8;
  std::optional<int> omega_clusters;
  std::optional<double> energy_limit_tol;
  bool energy_continuous = true;
  bool second_moment_monotone = false;
  std::optional<double> fit_min_rate;       // one-sided lower bound
  double fit_window_lo = 0.0, fit_window_hi = 0.0;
  std::optional<double> com_drift_tol;      // particle center-of-mass
  std::optional<double> min_gap_margin;     // non-collision bound margin
  bool expect_not_in_p2 = false;
};

struct Scenario {
  std::string id;
  Domain domain = Domain::interval(0.0, 1.0);
  int n_cells = 256;
  EnergyModel model;
  InitialSpec initial;
  double t_end = 1.0;
  bool selfsimilar_pme = false;  // route through the tau-time PME wrapper
  GridFlowControls grid_controls;
  ParticleFlowControls particle_controls;
  std::vector<EquilibriaSpec> equilibria;
  ChecksSpec checks;

  bool particle_run() const {
    return initial.type == InitialSpec::Type::Atoms &&
           model.pure_interaction();
  }
};

/// Parses and fully validates a scenario file. Unknown sections or keys are
/// hard errors; all validation failures are reported together.
Scenario parse_scenario(const std::filesystem::path& path);

/// Builds the initial measure for a scenario (deterministic).
Measure build_initial(const Scenario& scenario);

} // namespace wgf
