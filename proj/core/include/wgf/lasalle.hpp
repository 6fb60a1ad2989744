#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wgf/equilibria.hpp"
#include "wgf/trajectory.hpp"

namespace wgf {

struct CheckResult {
  bool pass = false;
  double worst = 0.0;  // worst margin / violation, check specific
  int index = -1;      // snapshot index of the worst violation, if any
  std::string detail;
};

/// Scheme-order slack for the energy monotonicity check:
///   slack_k = c (dt_k max(Gq_k, Gq_{k+1}) + dx^2 E_scale)
/// with dt_k the snapshot gap and E_scale = max |E| over the record.
struct SlackRule {
  double c = 10.0;
  double slack(double dt, double max_gq, double dx, double e_scale) const {
    return c * (dt * max_gq + dx * dx * e_scale) + 1e-13 * (1.0 + e_scale);
  }
};

/// E(t_{k+1}) <= E(t_k) + slack_k across the record; reports the worst
/// slack-adjusted uphill step.
CheckResult check_energy_monotone(const TrajectoryRecord& record,
                                  const SlackRule& slack = {});

/// Residual of the maximal-slope balance at each snapshot:
///   r_k = [E_{k+1} - E_k] / dt_k + (1/p) |rho'|^p_k + (1/q) Gq_k.
std::vector<double> ms_residual(const TrajectoryRecord& record, double p);

/// sup |r_k| over snapshots with t in [t_lo, t_hi].
double ms_residual_sup(const TrajectoryRecord& record, double p, double t_lo,
                       double t_hi);

/// Trapezoidal estimate of int G^q dt over the record.
double gq_integral(const TrajectoryRecord& record);

struct OmegaLimit {
  std::vector<Measure> representatives;  // cluster medoids
  std::vector<int> cluster_sizes;
  double scatter = 0.0;  // max intra-cluster BL distance
  bool oscillatory = false;  // more than 3 clusters in the tail
};

/// Tail snapshots (by count: max(10, tail_fraction * N)), pairwise BL
/// distances, single-linkage clusters at cluster_tol (<= 0 selects 5x the
/// late-time self-scatter), medoid representatives.
OmegaLimit extract_omega_limit(const TrajectoryRecord& record,
                               double tail_fraction = 0.3,
                               double cluster_tol = 0.0);

struct ConvergenceCheck {
  bool pass = false;
  double final_distance = 0.0;
  std::vector<double> times;
  std::vector<double> distances;  // distance_to_set over the tail window
};

/// distance_to_set stays below tol throughout the final window (last
/// window_count snapshots) and its windowed max does not increase.
ConvergenceCheck check_convergence_to_set(const TrajectoryRecord& record,
                                          const EquilibriumSet& eqs,
                                          MetricKind metric, double tol,
                                          int window_count,
                                          double p = 2.0,
                                          bool translation_quotient = false);

struct RateFit {
  double rate = 0.0;
  double goodness = 0.0;  // R^2 of the log-linear fit
  int points = 0;
};

/// Least-squares exponential rate of a positive decaying series on a time
/// window; distances at or below 1e-13 are excluded as noise floor.
RateFit fit_exponential_rate(const std::vector<double>& times,
                             const std::vector<double>& distances,
                             double t_lo, double t_hi);

struct EnergyLimitCheck {
  bool pass = false;
  double e_infinity = 0.0;  // tail mean of E
  double worst_gap = 0.0;
  std::string detail;
};

/// E_infinity as the tail mean of the energy; every supplied omega-limit
/// representative energy must satisfy E(rep) <= E_inf + tol, with equality
/// within tol when the energy is declared continuous.
EnergyLimitCheck check_energy_limit(const TrajectoryRecord& record,
                                    const std::vector<double>& rep_energies,
                                    double tol, bool energy_continuous);

/// Second moment non-increasing between consecutive snapshots (and across
/// every step for particle records, via the recorded per-step tracker).
CheckResult check_second_moment_monotone(const TrajectoryRecord& record,
                                         double per_step_tol = 1e-12);

/// Aggregated report; serialized to JSON by the runner.
struct LasalleReport {
  CheckResult energy_monotone;
  std::optional<double> ms_residual_sup_value;
  double gq_integral_value = 0.0;
  std::optional<ConvergenceCheck> convergence;
  std::optional<OmegaLimit> omega;
  std::optional<EnergyLimitCheck> energy_limit;
  std::optional<CheckResult> second_moment;
  std::optional<RateFit> rate;
};

} // namespace wgf
