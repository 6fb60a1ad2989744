#pragma once

#include "wgf/energy.hpp"
#include "wgf/trajectory.hpp"

namespace wgf {

struct ParticleFlowControls {
  /// Fixed RK4 step; 0 selects 1e-3 * R / max|psi'| for compactly supported
  /// kernels (required explicitly otherwise).
  double dt = 0.0;
  int snapshots = 192;
  long max_steps = 100000000;
  /// The first startup_steps macro steps are subdivided into startup_subdiv
  /// RK4 substeps each. Used when the initial state sits at a degenerate
  /// stationary point whose departing branch has a square-root profile; the
  /// fine substeps resolve it without shrinking the global step.
  long startup_steps = 0;
  long startup_subdiv = 1;
};

/// Classic RK4 for the interacting particle system
///   dx_i/dt = - sum_j w_j W'(x_i - x_j)
/// (pure interaction models only). Tracks per step: center-of-mass drift,
/// second-moment monotonicity, sorted order, and — for kernels with a finite
/// sup|W''| = K — the non-collision margin min_gap(t) / (min_gap(0) e^{-Kt}).
TrajectoryRecord evolve_particles(const EnergyModel& model,
                                  const ParticleMeasure& x0, double t_end,
                                  const ParticleFlowControls& controls);

enum class NonUniqBranch { Stationary, Collapsing };

/// The two explicit curves of maximal slope for the two-atom flow under the
/// non-convex kernel, starting from (delta_{-1/2} + delta_{1/2}) / 2:
/// the stationary curve, and the collapsing curve
///   x1(t) = -1/2 + (9/32) t^2      for t <= 2/3,
///   x1(t) = -(3/8) e^{-(t - 2/3)}  for t >  2/3,   x2 = -x1.
ParticleMeasure closed_form_nonuniq(NonUniqBranch branch, double t);

/// Domain both closed-form curves live on (shared with the bundled
/// scenarios so distances can be evaluated directly).
Domain nonuniq_domain();

} // namespace wgf
