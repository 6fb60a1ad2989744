#pragma once

#include <vector>

#include "wgf/measures.hpp"

namespace wgf {

/// Per-snapshot diagnostics row.
struct DiagRow {
  double t = 0.0;
  double energy = 0.0;
  double dissipation_q = 0.0;       // G^q at the snapshot
  double metric_derivative = -1.0;  // filled after the run; -1 = not set
  double mean = 0.0;
  double second_moment = 0.0;
  double mass_defect = 0.0;  // |1 - total mass|
  // particle-only extras (NaN on grid records)
  double cloud_diameter = 0.0;
  double min_gap = 0.0;
  double center_of_mass = 0.0;
};

/// Time-stamped snapshots with diagnostics. Snapshot times follow a
/// geometric schedule (dense early); times are strictly increasing and the
/// run aborts if the mass defect exceeds its bound.
struct TrajectoryRecord {
  Domain domain = Domain::interval(0.0, 1.0);
  double wasserstein_p = 2.0;
  double cell_width = 0.0;  // 0 for particle records
  bool is_particle = false;
  long steps = 0;

  std::vector<double> times;
  std::vector<Measure> snapshots;
  std::vector<DiagRow> diag;

  // Per-step integrity tracking for particle runs.
  double worst_m2_uphill = 0.0;       // max over steps of M2(t+dt) - M2(t)
  double com_drift = 0.0;             // max |com(t) - com(0)|
  double min_gap_bound_margin = 1.0;  // min over steps of gap / (gap0 e^{-Kt})
  bool gap_bound_available = false;
  bool order_preserved = true;
  double worst_energy_uphill = 0.0;  // max energy increase across one step

  int size() const { return static_cast<int>(times.size()); }
  void check_consistent() const;
};

/// Geometric snapshot schedule on (0, t_end]: count times with ratio spacing
/// from t_end/512 up to t_end, the initial time 0 prepended.
std::vector<double> snapshot_schedule(double t_end, int count);

/// |rho'|(t_i) estimated as W_p between the neighbouring snapshots divided
/// by their time gap (one-sided at the ends).
double metric_derivative_estimate(const TrajectoryRecord& record, int index);

/// Fills DiagRow::metric_derivative for every snapshot.
void fill_metric_derivatives(TrajectoryRecord& record);

/// Self-similar change of variables for the porous medium equation in d = 1:
/// tau = log t, y = x / t^alpha with alpha = 1 / (d (m - 1) + 2).
struct SelfSimilarTransform {
  double alpha = 1.0 / 3.0;
  static SelfSimilarTransform for_exponent(double m);
  double tau(double t) const;
  double y(double x, double t) const;
};

} // namespace wgf
