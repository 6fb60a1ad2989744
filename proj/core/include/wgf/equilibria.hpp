#pragma once

#include <string>
#include <vector>

#include "wgf/energy.hpp"
#include "wgf/measures.hpp"
#include "wgf/metrics.hpp"

namespace wgf {

/// One candidate stationary (or weak stationary) state with provenance.
struct EquilibriumMember {
  enum class Provenance { ClosedForm, FixedPoint, DiracLattice };

  Measure measure;
  Provenance provenance = Provenance::ClosedForm;
  std::string label;
  double residual = 0.0;  // solver residual where applicable
  int iterations = 0;
  bool not_in_p2 = false;          // flagged when the untruncated state has
                                   // divergent second moment
  double truncated_tail_mass = 0.0;  // mass cut off by domain truncation
};

struct EquilibriumSet {
  enum class SymmetryClass { Singleton, Translates, LatticeFamily };
  std::vector<EquilibriumMember> members;
  SymmetryClass symmetry = SymmetryClass::Singleton;
};

/// Normalized Lebesgue measure on a torus.
GridMeasure uniform_state(const Domain& torus, int n_cells);

/// Amplitude of the non-uniform Kuramoto stationary state: the positive
/// solution of sigma = kappa * (int cos e^{sigma cos} / int e^{sigma cos}),
/// by bisection with 2048-node periodic quadrature. Returns 0 for
/// kappa <= 2 (strict mode throws NoNontrivialSolution instead).
double kuramoto_sigma(double kappa, double tol = 1e-12, bool strict = false);

/// Z^{-1} exp(sigma(kappa) cos(2 pi (x - center))) on the unit torus,
/// normalized discretely.
GridMeasure kuramoto_state(double kappa, double center, int n_cells);

/// Compactly supported profile (C - alpha (m-1)/(2m) y^2)_+^{1/(m-1)} with C
/// fixed by unit mass; cell averages by per-cell quadrature split at the
/// support edge. Serves both the self-similar porous-medium stationary state
/// (alpha = 1/((m-1)+2)) and the quadratic-attraction aggregation-diffusion
/// steady profile (alpha = kappa), optionally centered off the origin.
GridMeasure parabolic_steady_state(double m, double alpha, int n_cells,
                                   double half_width, double center = 0.0);

/// The mass-1 constant C of the profile above.
double parabolic_mass_constant(double m, double alpha);

/// Self-similar porous-medium stationary profile (d = 1).
GridMeasure barenblatt(double m, int n_cells, double half_width);
double barenblatt_constant(double m);
double barenblatt_support_radius(double m);

/// Truncation of Z/(1 + x^{2 dim}) to [-half_width, half_width], cell
/// averaged and normalized discretely; records the tail mass lost to the
/// truncation and whether the untruncated state has infinite second moment.
EquilibriumMember weak_confinement_state(int dim, int n_cells,
                                         double half_width);

/// Damped Picard iteration rho <- (1-theta) rho + theta Gibbs(rho) with
/// Gibbs(rho) = e^{-(V + W * rho)/s} / Z for the entropy scale s. Stops when
/// the L1 update drops below 1e-10; reports the final fixed-point residual
/// ||rho - Gibbs(rho)||_1.
EquilibriumMember mckean_vlasov_fixed_point(const EnergyModel& model,
                                            const GridMeasure& init,
                                            double damping = 0.5,
                                            int max_iter = 20000);

/// Dirac lattice stationary state for a compactly supported interaction:
/// requires unit total mass and pairwise gaps > 2R (NotStationaryError
/// otherwise); the dissipation is verified to vanish.
EquilibriumMember dirac_lattice(const std::vector<double>& masses,
                                const std::vector<double>& positions,
                                const EnergyModel& model, const Domain& domain);

/// min over members (and, if translation_quotient, over torus translates of
/// each member) of the metric distance to mu.
double distance_to_set(const Measure& mu, const EquilibriumSet& eqs,
                       MetricKind metric, double p = 2.0,
                       bool translation_quotient = false);

} // namespace wgf
