#pragma once

#include "wgf/energy.hpp"
#include "wgf/trajectory.hpp"

namespace wgf {

struct GridFlowControls {
  double cfl = 0.4;               // advective CFL number
  double diffusion_number = 0.45; // fraction of dx^2 / diffusivity
  int snapshots = 192;
  long max_steps = 400000000;
  double mass_defect_bound = 1e-6;
};

/// Positivity-preserving upwind finite-volume scheme for
///   d rho_i / dt = -(F_{i+1/2} - F_{i-1/2}) / dx,
///   F_{i+1/2} = u_{i+1/2} rho_upwind,
/// with face velocities from the energy model's velocity law, explicit
/// SSP-RK2 in time, periodic (torus) or zero-flux (interval) boundaries.
/// The step size obeys both the advective CFL and the diffusion stability
/// bound when an internal energy is present. Aborts on mass-defect breach or
/// step-size collapse.
TrajectoryRecord evolve_grid(const EnergyModel& model, const GridMeasure& rho0,
                             double t_end, const GridFlowControls& controls);

/// Porous-medium flow in self-similar variables: evolves
///   d rho^ / d tau = (rho^m)'' + alpha (y rho^)'
/// by delegating to evolve_grid with the model {Power(m, 1/(m-1)),
/// Confinement(alpha), no kernel}. The domain must leave a 20% margin around
/// the stationary profile's support; mass reaching the outermost cells
/// aborts the run with a resize hint.
TrajectoryRecord evolve_selfsimilar_pme(double m, const GridMeasure& rho0_hat,
                                        double tau_end,
                                        const GridFlowControls& controls);

} // namespace wgf
