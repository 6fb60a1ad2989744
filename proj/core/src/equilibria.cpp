#include "wgf/equilibria.hpp"

#include <algorithm>
#include <cmath>

#include "wgf/errors.hpp"
#include "wgf/numerics.hpp"

namespace wgf {
namespace {

// Consistency ratio int cos e^{s cos} / int e^{s cos} on the unit torus,
// 2048-node midpoint rule (spectrally accurate for periodic integrands);
// exponent recentered to avoid overflow at large s.
double kuramoto_ratio(double sigma) {
  const int n = 2048;
  double num = 0.0, den = 0.0;
  for (int j = 0; j < n; ++j) {
    const double c = std::cos(2.0 * M_PI * (j + 0.5) / n);
    const double w = std::exp(sigma * (c - 1.0));
    num += c * w;
    den += w;
  }
  return num / den;
}

} // namespace

GridMeasure uniform_state(const Domain& torus, int n_cells) {
  if (!torus.is_torus()) throw ValidationError("uniform_state: torus domain required");
  if (n_cells <= 0) throw ValidationError("uniform_state: n_cells must be positive");
  GridMeasure g;
  g.domain = torus;
  g.cell_width = torus.period() / n_cells;
  g.density.assign(static_cast<size_t>(n_cells), 1.0 / torus.period());
  return g;
}

double kuramoto_sigma(double kappa, double tol, bool strict) {
  if (!(kappa > 0.0)) throw ValidationError("kuramoto_sigma: kappa must be positive");
  if (kappa <= 2.0) {
    if (strict)
      throw NoNontrivialSolution(
          "kuramoto_sigma: only the trivial state exists for kappa <= 2");
    return 0.0;
  }
  auto f = [kappa](double s) { return s - kappa * kuramoto_ratio(s); };
  const double sigma = bisect(f, tol, 10.0 * kappa, std::min(tol, 1e-13));
  if (std::fabs(f(sigma)) > tol)
    throw NumericalAbort("kuramoto_sigma: residual above tolerance");
  return sigma;
}

GridMeasure kuramoto_state(double kappa, double center, int n_cells) {
  if (!(kappa > 2.0))
    throw NoNontrivialSolution("kuramoto_state: requires kappa > 2");
  const double sigma = kuramoto_sigma(kappa, 1e-12, true);
  const Domain torus = Domain::torus(1.0);
  GridMeasure g;
  g.domain = torus;
  g.cell_width = 1.0 / n_cells;
  g.density.resize(static_cast<size_t>(n_cells));
  for (int i = 0; i < n_cells; ++i) {
    const double x = g.cell_center(i);
    g.density[i] = std::exp(sigma * std::cos(2.0 * M_PI * (x - center)));
  }
  double mass = 0.0;
  for (double v : g.density) mass += v;
  mass *= g.cell_width;
  for (double& v : g.density) v /= mass;
  return g;
}

double parabolic_mass_constant(double m, double alpha) {
  if (!(m > 1.0)) throw ValidationError("parabolic profile: m must exceed 1");
  if (!(alpha > 0.0)) throw ValidationError("parabolic profile: alpha must be positive");
  const double beta = alpha * (m - 1.0) / (2.0 * m);
  const double gamma = 1.0 / (m - 1.0);
  // mass(C) = 2 sqrt(C/beta) C^gamma int_0^{pi/2} cos^{2 gamma + 1}; smooth
  // in the angular substitution, composite Gauss panels reach round-off.
  auto mass = [&](double C) {
    auto integrand = [&](double phi) {
      return std::pow(std::cos(phi), 2.0 * gamma + 1.0);
    };
    double angular = 0.0;
    const int panels = 8;
    for (int k = 0; k < panels; ++k)
      angular += gauss_legendre(integrand, 0.5 * M_PI * k / panels,
                                0.5 * M_PI * (k + 1) / panels);
    return 2.0 * std::sqrt(C / beta) * std::pow(C, gamma) * angular;
  };
  double hi = 1.0;
  while (mass(hi) < 1.0) hi *= 2.0;
  return bisect([&](double C) { return mass(C) - 1.0; }, 1e-300, hi, 1e-15);
}

GridMeasure parabolic_steady_state(double m, double alpha, int n_cells,
                                   double half_width, double center) {
  const double C = parabolic_mass_constant(m, alpha);
  const double beta = alpha * (m - 1.0) / (2.0 * m);
  const double gamma = 1.0 / (m - 1.0);
  const double edge = std::sqrt(C / beta);
  if (edge > half_width)
    throw SupportOverflow("parabolic_steady_state: support radius " +
                          format_full(edge) + " exceeds the half-width " +
                          format_full(half_width));
  const Domain dom =
      Domain::interval(center - half_width, center + half_width, true);
  auto profile = [&](double x) {
    const double v = C - beta * (x - center) * (x - center);
    return v > 0.0 ? std::pow(v, gamma) : 0.0;
  };
  // Cell-center sampling keeps the discrete first variation exactly constant
  // on the support (F'(rho_i) + V(x_i) telescopes for every m), so the
  // profile is a machine-accurate fixed point of the finite-volume flow.
  GridMeasure g;
  g.domain = dom;
  g.cell_width = 2.0 * half_width / n_cells;
  g.density.resize(static_cast<size_t>(n_cells));
  for (int i = 0; i < n_cells; ++i) g.density[i] = profile(g.cell_center(i));
  double mass = 0.0;
  for (double v : g.density) mass += v;
  mass *= g.cell_width;
  for (double& v : g.density) v /= mass;
  return g;
}

double barenblatt_constant(double m) {
  return parabolic_mass_constant(m, 1.0 / ((m - 1.0) + 2.0));
}

double barenblatt_support_radius(double m) {
  const double alpha = 1.0 / ((m - 1.0) + 2.0);
  const double C = parabolic_mass_constant(m, alpha);
  const double beta = alpha * (m - 1.0) / (2.0 * m);
  return std::sqrt(C / beta);
}

GridMeasure barenblatt(double m, int n_cells, double half_width) {
  return parabolic_steady_state(m, 1.0 / ((m - 1.0) + 2.0), n_cells,
                                half_width);
}

EquilibriumMember weak_confinement_state(int dim, int n_cells,
                                         double half_width) {
  if (dim < 1) throw ValidationError("weak_confinement_state: dim must be >= 1");
  const Domain dom = Domain::interval(-half_width, half_width, true);
  auto profile = [dim](double x) {
    double x2d = 1.0;
    const double x2 = x * x;
    for (int i = 0; i < dim; ++i) x2d *= x2;
    return 1.0 / (1.0 + x2d);
  };
  GridMeasure g;
  g.domain = dom;
  g.cell_width = 2.0 * half_width / n_cells;
  g.density.resize(static_cast<size_t>(n_cells));
  // cell-center sampling: exact fixed point of the zero-flux discrete flow
  for (int i = 0; i < n_cells; ++i) g.density[i] = profile(g.cell_center(i));
  double mass = 0.0;
  for (double v : g.density) mass += v;
  mass *= g.cell_width;
  for (double& v : g.density) v /= mass;

  // full-line normalization: int dx/(1+x^{2d}) = (pi/d) / sin(pi/(2d))
  const double full = (M_PI / dim) / std::sin(M_PI / (2.0 * dim));
  double inside = 0.0;
  {
    const int panels = 64;
    for (int k = 0; k < panels; ++k)
      inside += gauss_legendre(profile, -half_width + 2.0 * half_width * k / panels,
                               -half_width + 2.0 * half_width * (k + 1) / panels);
  }
  EquilibriumMember member;
  member.measure = g;
  member.provenance = EquilibriumMember::Provenance::ClosedForm;
  member.label = "weak_confinement_d" + std::to_string(dim);
  member.truncated_tail_mass = std::max(0.0, 1.0 - inside / full);
  member.not_in_p2 = dim == 1;  // second moment diverges exactly for d = 1
  return member;
}

EquilibriumMember mckean_vlasov_fixed_point(const EnergyModel& model,
                                            const GridMeasure& init,
                                            double damping, int max_iter) {
  if (model.internal != EnergyModel::Internal::Entropy)
    throw ValidationError(
        "mckean_vlasov_fixed_point: entropy internal energy required");
  if (!(damping > 0.0 && damping <= 1.0))
    throw ValidationError("mckean_vlasov_fixed_point: damping must lie in (0, 1]");
  init.validate(1e-9);
  const int n = init.n_cells();
  const double h = init.cell_width;
  const double s = model.internal_scale;
  GridMeasure rho = init;
  ConvolutionPlan plan(model, init);
  std::vector<double> pot(static_cast<size_t>(n), 0.0);
  if (!model.potential.is_zero())
    for (int i = 0; i < n; ++i)
      pot[i] = model.potential.value(init.cell_center(i));

  std::vector<double> conv, gibbs(static_cast<size_t>(n));
  auto gibbs_map = [&](const std::vector<double>& r) {
    plan.apply(r, conv);
    double zmax = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      gibbs[i] = -(pot[i] + conv[i]) / s;
      zmax = std::max(zmax, gibbs[i]);
    }
    double z = 0.0;
    for (int i = 0; i < n; ++i) {
      gibbs[i] = std::exp(gibbs[i] - zmax);
      z += gibbs[i];
    }
    z *= h;
    for (int i = 0; i < n; ++i) gibbs[i] /= z;
  };

  int it = 0;
  double update = std::numeric_limits<double>::infinity();
  for (; it < max_iter && update > 1e-10; ++it) {
    gibbs_map(rho.density);
    update = 0.0;
    for (int i = 0; i < n; ++i) {
      const double next = (1.0 - damping) * rho.density[i] + damping * gibbs[i];
      update += std::fabs(next - rho.density[i]);
      rho.density[i] = next;
    }
    update *= h;
  }
  gibbs_map(rho.density);
  double residual = 0.0;
  for (int i = 0; i < n; ++i) residual += std::fabs(rho.density[i] - gibbs[i]);
  residual *= h;

  EquilibriumMember member;
  member.measure = rho;
  member.provenance = EquilibriumMember::Provenance::FixedPoint;
  member.label = "mckean_vlasov_fixed_point";
  member.residual = residual;
  member.iterations = it;
  return member;
}

EquilibriumMember dirac_lattice(const std::vector<double>& masses,
                                const std::vector<double>& positions,
                                const EnergyModel& model,
                                const Domain& domain) {
  if (!model.kernel.compact_support())
    throw ValidationError("dirac_lattice: compactly supported kernel required");
  const double R = model.kernel.support_radius();
  ParticleMeasure pm = ParticleMeasure::canonical(domain, positions, masses);
  for (int i = 1; i < pm.size(); ++i) {
    const double gap =
        std::fabs(domain.difference(pm.positions[i], pm.positions[i - 1]));
    if (!(gap > 2.0 * R))
      throw NotStationaryError("dirac_lattice: gap " + format_full(gap) +
                               " violates the > 2R separation, R=" +
                               format_full(R));
  }
  EquilibriumMember member;
  member.measure = pm;
  member.provenance = EquilibriumMember::Provenance::DiracLattice;
  member.label = "dirac_lattice";
  member.residual = dissipation(model, pm);
  if (member.residual > 1e-10)
    throw NotStationaryError("dirac_lattice: dissipation did not vanish");
  return member;
}

double distance_to_set(const Measure& mu, const EquilibriumSet& eqs,
                       MetricKind metric, double p,
                       bool translation_quotient) {
  if (eqs.members.empty())
    throw ValidationError("distance_to_set: empty equilibrium set");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& member : eqs.members) {
    const double d = translation_quotient
                         ? min_over_translates(metric, mu, member.measure, p)
                         : eval_metric(metric, mu, member.measure, p);
    best = std::min(best, d);
  }
  return best;
}

} // namespace wgf
