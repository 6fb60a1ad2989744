#include "wgf/grid_flow.hpp"

#include <algorithm>
#include <cmath>

#include "wgf/equilibria.hpp"
#include "wgf/errors.hpp"
#include "wgf/numerics.hpp"

namespace wgf {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// One semidiscrete right-hand-side evaluation with preallocated buffers.
struct GridStepper {
  const EnergyModel& model;
  const GridMeasure& geom;
  ConvolutionPlan plan;
  int n;
  double h;
  bool torus;
  double q;
  bool linear_law;
  bool entropy;
  std::vector<double> ext;      // V + W*rho at centers
  std::vector<double> pot;      // V at centers (cached)
  std::vector<double> flux;     // face fluxes
  double umax = 0.0;            // max face speed of the last evaluation
  double dmax = 0.0;            // max face |D xi|
  double rho_max = 0.0;

  GridStepper(const EnergyModel& m, const GridMeasure& g)
      : model(m), geom(g), plan(m, g) {
    n = g.n_cells();
    h = g.cell_width;
    torus = g.domain.is_torus();
    q = m.conjugate_q();
    linear_law = std::fabs(q - 2.0) < 1e-12;
    entropy = m.internal == EnergyModel::Internal::Entropy;
    pot.assign(static_cast<size_t>(n), 0.0);
    if (!m.potential.is_zero())
      for (int i = 0; i < n; ++i) pot[i] = m.potential.value(g.cell_center(i));
    ext.resize(static_cast<size_t>(n));
    flux.assign(static_cast<size_t>(torus ? n : n - 1), 0.0);
  }

  void rhs(const std::vector<double>& r, std::vector<double>& dr) {
    plan.apply(r, ext);
    for (int i = 0; i < n; ++i) ext[i] += pot[i];
    umax = 0.0;
    dmax = 0.0;
    rho_max = 0.0;
    const int faces = torus ? n : n - 1;
    for (int f = 0; f < faces; ++f) {
      const int i = f;
      const int j = torus ? (f + 1 == n ? 0 : f + 1) : f + 1;
      const double ri = r[i], rj = r[j];
      rho_max = std::max(rho_max, ri);
      double d;
      if (ri > 0.0 && rj > 0.0) {
        d = ((model.internal_prime(rj) + ext[j]) -
             (model.internal_prime(ri) + ext[i])) /
            h;
      } else if (ri > 0.0 || rj > 0.0) {
        if (entropy) {
          // entropy at vacuum is never differenced across: the occupied
          // side's internal value is used on both sides, leaving the drift
          d = (ext[j] - ext[i]) / h;
        } else {
          d = ((model.internal_prime(rj) + ext[j]) -
               (model.internal_prime(ri) + ext[i])) /
              h;
        }
      } else {
        d = 0.0;
      }
      const double u = linear_law ? -d : -signed_pow(d, q - 1.0);
      dmax = std::max(dmax, std::fabs(d));
      umax = std::max(umax, std::fabs(u));
      flux[f] = u > 0.0 ? u * ri : u * rj;
    }
    if (!torus) rho_max = std::max(rho_max, r[n - 1]);
    if (torus) {
      for (int i = 0; i < n; ++i) {
        const int fm = i == 0 ? n - 1 : i - 1;
        dr[i] = -(flux[i] - flux[fm]) / h;
      }
    } else {
      dr[0] = -flux[0] / h;
      for (int i = 1; i + 1 < n; ++i) dr[i] = -(flux[i] - flux[i - 1]) / h;
      dr[n - 1] = flux[n - 2] / h;
    }
  }

  double stable_dt(const GridFlowControls& c) const {
    double dt = c.cfl * h / std::max(umax, 1e-300);
    if (model.has_internal()) {
      double diff = model.diffusivity(rho_max);
      if (!linear_law) {
        const double dm = std::clamp(dmax, 1e-6, 1e8);
        diff *= (q - 1.0) * std::pow(dm, q - 2.0);
      }
      dt = std::min(dt, c.diffusion_number * h * h / std::max(diff, 1e-300));
    }
    return dt;
  }
};

} // namespace

TrajectoryRecord evolve_grid(const EnergyModel& model, const GridMeasure& rho0,
                             double t_end, const GridFlowControls& controls) {
  model.validate();
  rho0.validate(1e-9);
  if (!(t_end > 0.0)) throw ValidationError("evolve_grid: t_end must be positive");

  TrajectoryRecord rec;
  rec.domain = rho0.domain;
  rec.wasserstein_p = model.wasserstein_p;
  rec.cell_width = rho0.cell_width;
  rec.is_particle = false;

  GridStepper stepper(model, rho0);
  const int n = rho0.n_cells();
  std::vector<double> rho = rho0.density;
  std::vector<double> dr(static_cast<size_t>(n)), r1(static_cast<size_t>(n));

  const auto schedule = snapshot_schedule(t_end, controls.snapshots);
  size_t next_snap = 0;
  double t = 0.0;
  long steps = 0;
  double prev_energy = 0.0;
  bool have_prev_energy = false;
  double prev_snap_t = 0.0;

  auto take_snapshot = [&]() {
    GridMeasure g;
    g.domain = rho0.domain;
    g.cell_width = rho0.cell_width;
    g.density = rho;
    DiagRow row;
    row.t = t;
    row.energy = energy(model, g);
    row.dissipation_q = dissipation(model, g);
    const Moments mom = moments(g);
    row.mean = mom.mean;
    row.second_moment = mom.second_moment;
    row.mass_defect = std::fabs(g.mass() - 1.0);
    if (row.mass_defect > controls.mass_defect_bound)
      throw NumericalAbort("evolve_grid: mass defect " +
                           format_full(row.mass_defect) + " at t=" +
                           format_full(t));
    // dissipation sanity net: a genuine energy increase beyond scheme slack
    // means the step size or the model is broken
    if (have_prev_energy) {
      const double slack =
          10.0 * (rho0.cell_width * (t - prev_snap_t) + 1e-12) *
          std::max(1.0, std::fabs(prev_energy));
      if (row.energy > prev_energy + slack)
        throw NumericalAbort("evolve_grid: energy increased by " +
                             format_full(row.energy - prev_energy) +
                             " across [" + format_full(prev_snap_t) + ", " +
                             format_full(t) + "]");
    }
    prev_energy = row.energy;
    prev_snap_t = t;
    have_prev_energy = true;
    rec.times.push_back(t);
    rec.snapshots.push_back(std::move(g));
    rec.diag.push_back(row);
  };

  take_snapshot();
  ++next_snap;

  const double t_eps = 1e-14 * std::max(1.0, t_end);
  while (next_snap < schedule.size()) {
    const double target = schedule[next_snap];
    if (t >= target - t_eps) {
      take_snapshot();
      ++next_snap;
      continue;
    }
    stepper.rhs(rho, dr);
    double dt = std::min(stepper.stable_dt(controls), target - t);
    if (!(dt > 0.0) || dt < 1e-15 * std::max(1.0, t_end))
      throw NumericalAbort("evolve_grid: step size collapsed at t=" +
                           format_full(t));
    for (int i = 0; i < n; ++i) r1[i] = rho[i] + dt * dr[i];
    stepper.rhs(r1, dr);
    for (int i = 0; i < n; ++i) {
      double v = 0.5 * rho[i] + 0.5 * (r1[i] + dt * dr[i]);
      if (v < 0.0) {
        if (v < -1e-12)
          throw NumericalAbort("evolve_grid: positivity lost at t=" +
                               format_full(t));
        v = 0.0;  // round-off undershoot
      }
      rho[i] = v;
    }
    t += dt;
    ++steps;
    if (steps > controls.max_steps)
      throw NumericalAbort("evolve_grid: step budget exhausted");
  }
  rec.steps = steps;
  rec.check_consistent();
  fill_metric_derivatives(rec);
  return rec;
}

TrajectoryRecord evolve_selfsimilar_pme(double m, const GridMeasure& rho0_hat,
                                        double tau_end,
                                        const GridFlowControls& controls) {
  if (!(m > 1.0)) throw ValidationError("evolve_selfsimilar_pme: m must exceed 1");
  if (rho0_hat.domain.is_torus())
    throw ValidationError("evolve_selfsimilar_pme: interval domain required");
  const SelfSimilarTransform xf = SelfSimilarTransform::for_exponent(m);

  EnergyModel model;
  model.internal = EnergyModel::Internal::Power;
  model.power_m = m;
  model.internal_scale = 1.0 / (m - 1.0);
  model.potential = Potential::confinement(xf.alpha);
  model.kernel = Kernel::zero();
  model.wasserstein_p = 2.0;

  const double half_width =
      0.5 * (rho0_hat.domain.right() - rho0_hat.domain.left());
  const double support = barenblatt_support_radius(m);
  if (half_width < 1.2 * support)
    throw SupportOverflow(
        "evolve_selfsimilar_pme: domain half-width " + format_full(half_width) +
        " leaves less than 20% margin around the stationary support " +
        format_full(support) + "; enlarge the domain");

  TrajectoryRecord rec = evolve_grid(model, rho0_hat, tau_end, controls);
  // mass creeping into the outermost cells means the profile no longer fits
  for (int k = 0; k < rec.size(); ++k) {
    const auto& g = std::get<GridMeasure>(rec.snapshots[static_cast<size_t>(k)]);
    const int n = g.n_cells();
    const double edge = (g.density[0] + g.density[1] + g.density[n - 2] +
                         g.density[n - 1]) *
                        g.cell_width;
    if (edge > 1e-12)
      throw SupportOverflow(
          "evolve_selfsimilar_pme: mass reached the boundary cells at tau=" +
          format_full(rec.times[static_cast<size_t>(k)]) +
          "; enlarge the domain");
  }
  return rec;
}

} // namespace wgf
