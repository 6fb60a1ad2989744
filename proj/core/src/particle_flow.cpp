#include "wgf/particle_flow.hpp"

#include <algorithm>
#include <cmath>

#include "wgf/errors.hpp"
#include "wgf/numerics.hpp"

namespace wgf {
namespace {

void velocities(const EnergyModel& model, const Domain& dom,
                const std::vector<double>& x, const std::vector<double>& w,
                std::vector<double>& out) {
  const int n = static_cast<int>(x.size());
  for (int i = 0; i < n; ++i) {
    double v = 0.0;
    for (int j = 0; j < n; ++j)
      v += w[j] * model.kernel.grad(dom.difference(x[i], x[j]));
    out[i] = -v;
  }
}

double pair_min_gap(const std::vector<double>& x) {
  double g = std::numeric_limits<double>::infinity();
  for (size_t i = 1; i < x.size(); ++i) g = std::min(g, x[i] - x[i - 1]);
  return g;
}

} // namespace

TrajectoryRecord evolve_particles(const EnergyModel& model,
                                  const ParticleMeasure& x0, double t_end,
                                  const ParticleFlowControls& controls) {
  model.validate();
  x0.validate(1e-9);
  if (!model.pure_interaction())
    throw ValidationError(
        "evolve_particles: model must be pure interaction (no internal "
        "energy, no external potential)");
  if (!(t_end > 0.0))
    throw ValidationError("evolve_particles: t_end must be positive");

  double dt = controls.dt;
  if (dt <= 0.0) {
    if (!model.kernel.compact_support())
      throw ValidationError(
          "evolve_particles: explicit dt required for kernels without "
          "compact support");
    dt = 1e-3 * model.kernel.support_radius() /
         std::max(model.kernel.max_abs_grad(), 1e-300);
  }

  const int n = x0.size();
  const Domain dom = x0.domain;
  std::vector<double> x = x0.positions;
  const std::vector<double> w = x0.weights;
  std::vector<double> k1(n), k2(n), k3(n), k4(n), xt(n);

  TrajectoryRecord rec;
  rec.domain = dom;
  rec.wasserstein_p = model.wasserstein_p;
  rec.is_particle = true;
  rec.gap_bound_available = model.kernel.finite_second_bound() && n > 1;
  const double K = rec.gap_bound_available ? model.kernel.max_abs_second() : 0.0;
  const double gap0 = n > 1 ? pair_min_gap(x) : 0.0;

  double com0 = 0.0;
  for (int i = 0; i < n; ++i) com0 += w[i] * x[i];
  double prev_m2 = 0.0;
  for (int i = 0; i < n; ++i) prev_m2 += w[i] * x[i] * x[i];
  double prev_energy = 0.0;
  {
    ParticleMeasure pm = x0;
    prev_energy = energy(model, pm);
  }

  auto rk4_step = [&](double step) {
    velocities(model, dom, x, w, k1);
    for (int i = 0; i < n; ++i) xt[i] = x[i] + 0.5 * step * k1[i];
    velocities(model, dom, xt, w, k2);
    for (int i = 0; i < n; ++i) xt[i] = x[i] + 0.5 * step * k2[i];
    velocities(model, dom, xt, w, k3);
    for (int i = 0; i < n; ++i) xt[i] = x[i] + step * k3[i];
    velocities(model, dom, xt, w, k4);
    for (int i = 0; i < n; ++i)
      x[i] += step / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  };

  const auto schedule = snapshot_schedule(t_end, controls.snapshots);
  size_t next_snap = 0;
  double t = 0.0;
  long steps = 0;

  auto take_snapshot = [&]() {
    ParticleMeasure pm;
    pm.domain = dom;
    pm.positions = x;
    pm.weights = w;
    DiagRow row;
    row.t = t;
    row.energy = energy(model, pm);
    row.dissipation_q = dissipation(model, pm);
    const Moments mom = moments(pm);
    row.mean = mom.mean;
    row.second_moment = mom.second_moment;
    row.mass_defect = std::fabs(pm.mass() - 1.0);
    row.cloud_diameter = n > 1 ? x[n - 1] - x[0] : 0.0;
    row.min_gap = n > 1 ? pair_min_gap(x) : 0.0;
    row.center_of_mass = 0.0;
    for (int i = 0; i < n; ++i) row.center_of_mass += w[i] * x[i];
    rec.times.push_back(t);
    rec.snapshots.push_back(std::move(pm));
    rec.diag.push_back(row);
  };

  take_snapshot();
  ++next_snap;

  while (next_snap < schedule.size()) {
    if (steps < controls.startup_steps && controls.startup_subdiv > 1) {
      const double sub = dt / static_cast<double>(controls.startup_subdiv);
      for (long s = 0; s < controls.startup_subdiv; ++s) rk4_step(sub);
    } else {
      rk4_step(dt);
    }
    t += dt;
    ++steps;
    if (steps > controls.max_steps)
      throw NumericalAbort("evolve_particles: step budget exhausted");

    // per-step integrity tracking
    double m2 = 0.0, com = 0.0;
    for (int i = 0; i < n; ++i) {
      m2 += w[i] * x[i] * x[i];
      com += w[i] * x[i];
    }
    rec.worst_m2_uphill = std::max(rec.worst_m2_uphill, m2 - prev_m2);
    prev_m2 = m2;
    rec.com_drift = std::max(rec.com_drift, std::fabs(com - com0));
    for (int i = 1; i < n; ++i)
      if (x[i] < x[i - 1]) rec.order_preserved = false;
    if (rec.gap_bound_available && gap0 > 0.0) {
      const double bound = gap0 * std::exp(-K * t);
      if (bound > 0.0)
        rec.min_gap_bound_margin =
            std::min(rec.min_gap_bound_margin, pair_min_gap(x) / bound);
    }
    if (n <= 64) {
      ParticleMeasure pm;
      pm.domain = dom;
      pm.positions = x;
      pm.weights = w;
      const double e = energy(model, pm);
      rec.worst_energy_uphill = std::max(rec.worst_energy_uphill, e - prev_energy);
      prev_energy = e;
    }

    bool due = false;
    while (next_snap < schedule.size() &&
           t >= schedule[next_snap] - 0.5 * dt) {
      ++next_snap;
      due = true;
    }
    if (due) take_snapshot();
  }
  rec.steps = steps;
  rec.check_consistent();
  fill_metric_derivatives(rec);
  return rec;
}

Domain nonuniq_domain() { return Domain::interval(-2.0, 2.0, true); }

ParticleMeasure closed_form_nonuniq(NonUniqBranch branch, double t) {
  if (t < 0.0) throw ValidationError("closed_form_nonuniq: t must be >= 0");
  double x1;
  if (branch == NonUniqBranch::Stationary) {
    x1 = -0.5;
  } else if (t <= 2.0 / 3.0) {
    x1 = -0.5 + 9.0 / 32.0 * t * t;
  } else {
    x1 = -3.0 / 8.0 * std::exp(-(t - 2.0 / 3.0));
  }
  ParticleMeasure pm;
  pm.domain = nonuniq_domain();
  if (x1 == 0.0) {
    pm.positions = {0.0};
    pm.weights = {1.0};
  } else {
    pm.positions = {x1, -x1};
    pm.weights = {0.5, 0.5};
  }
  return pm;
}

} // namespace wgf
