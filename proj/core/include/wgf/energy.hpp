#pragma once

#include <vector>

#include "wgf/kernel.hpp"
#include "wgf/measures.hpp"
#include "wgf/potential.hpp"

namespace wgf {

/// Free energy specification
///   E(rho) = int F(rho) dx + int V d rho + 1/2 int (W * rho) d rho
/// together with the metric exponent p of the underlying Wasserstein flow
/// (conjugate q = p / (p - 1) governs the dissipation and the velocity law).
struct EnergyModel {
  enum class Internal { None, Entropy, Power };

  Internal internal = Internal::None;
  double internal_scale = 1.0;  // F(x) = scale * x log x  or  scale * x^m
  double power_m = 2.0;

  Potential potential = Potential::zero();
  Kernel kernel = Kernel::zero();

  double wasserstein_p = 2.0;
  double conjugate_q() const { return wasserstein_p / (wasserstein_p - 1.0); }

  bool has_internal() const { return internal != Internal::None; }
  bool pure_interaction() const {
    return internal == Internal::None && potential.is_zero();
  }

  double internal_density(double rho) const;  // F(rho); 0 log 0 = 0
  /// F'(rho); -infinity for Entropy at rho = 0.
  double internal_prime(double rho) const;
  /// F''(rho) * rho, the diffusivity entering the stability bound.
  double diffusivity(double rho) const;

  void validate() const;
};

/// Precomputed machinery for evaluating (W * rho) at cell centers of a fixed
/// mesh: Kuramoto reduces to two Fourier projections, quadratic attraction
/// to two moments, and generic kernels to a cached Toeplitz table (the
/// separation x_i - x_j only depends on i - j on a uniform mesh, minimal
/// image on a torus). Time steppers build one plan and apply it per stage.
class ConvolutionPlan {
public:
  ConvolutionPlan(const EnergyModel& model, const GridMeasure& geometry);
  void apply(const std::vector<double>& density,
             std::vector<double>& out) const;
  bool is_zero() const { return kind_ == Kind::Zero; }

private:
  enum class Kind { Zero, Fourier, Moments, Toeplitz };
  Kind kind_ = Kind::Zero;
  int n_ = 0;
  double h_ = 0.0;
  double kappa_ = 0.0;
  bool torus_ = false;
  std::vector<double> cosx_, sinx_, centers_, table_;
};

/// (W * rho)(x_i) at cell centers, with the minimal-image difference on a
/// torus and zero padding on a truncated interval. Kuramoto and quadratic
/// kernels use closed-form O(n) reductions; other kernels sum directly.
std::vector<double> interaction_potential(const EnergyModel& model,
                                          const GridMeasure& rho);

double energy(const EnergyModel& model, const GridMeasure& rho);
double energy(const EnergyModel& model, const ParticleMeasure& rho);
double energy(const EnergyModel& model, const Measure& rho);

/// xi_i = F'(rho_i) + V(x_i) + (W * rho)(x_i). Entropy at a vacuum cell
/// yields -infinity; the flux and dissipation rules never difference across
/// such cells.
std::vector<double> first_variation(const EnergyModel& model,
                                    const GridMeasure& rho);

struct FirstVariationParts {
  std::vector<double> internal;  // F'(rho_i); -inf sentinel at entropy vacuum
  std::vector<double> external;  // V(x_i) + (W * rho)(x_i)
};
FirstVariationParts first_variation_parts(const EnergyModel& model,
                                          const GridMeasure& rho);

/// G^q with q the conjugate exponent: sum_i rho_i |D xi_i|^q h, centred
/// differences between occupied neighbours (one-sided at a boundary or next
/// to vacuum, zero if isolated). Vacuum cells contribute nothing.
double dissipation(const EnergyModel& model, const GridMeasure& rho);

/// Pure-interaction particle dissipation
///   G^2 = sum_i w_i | sum_j w_j W'(x_i - x_j) |^2.
double dissipation(const EnergyModel& model, const ParticleMeasure& rho);
double dissipation(const EnergyModel& model, const Measure& rho);

/// Face velocities u_{i+1/2} = -sign(D xi) |D xi|^{q-1} with D xi the face
/// difference of the first variation (Legendre dual of the |z|^p / p cost;
/// for p = q = 2 this is just -D xi). On an interval only interior faces are
/// returned (zero-flux boundaries); on a torus, face i sits between cells i
/// and i+1 mod n.
std::vector<double> velocity_field(const EnergyModel& model,
                                   const GridMeasure& rho);

} // namespace wgf
