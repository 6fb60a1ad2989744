#include "wgf/energy.hpp"

#include <cmath>
#include <limits>

#include "wgf/errors.hpp"
#include "wgf/numerics.hpp"

namespace wgf {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double EnergyModel::internal_density(double rho) const {
  switch (internal) {
    case Internal::None: return 0.0;
    case Internal::Entropy: return rho > 0.0 ? internal_scale * rho * std::log(rho) : 0.0;
    case Internal::Power: return internal_scale * std::pow(rho, power_m);
  }
  return 0.0;
}

double EnergyModel::internal_prime(double rho) const {
  switch (internal) {
    case Internal::None: return 0.0;
    case Internal::Entropy:
      return rho > 0.0 ? internal_scale * (std::log(rho) + 1.0) : kNegInf;
    case Internal::Power:
      return internal_scale * power_m * std::pow(rho, power_m - 1.0);
  }
  return 0.0;
}

double EnergyModel::diffusivity(double rho) const {
  switch (internal) {
    case Internal::None: return 0.0;
    case Internal::Entropy: return internal_scale;
    case Internal::Power:
      return internal_scale * power_m * (power_m - 1.0) *
             std::pow(rho, power_m - 1.0);
  }
  return 0.0;
}

void EnergyModel::validate() const {
  if (!(wasserstein_p > 1.0) || !std::isfinite(wasserstein_p))
    throw ValidationError("EnergyModel: wasserstein_p must lie in (1, inf)");
  if (internal != Internal::None && !(internal_scale > 0.0))
    throw ValidationError("EnergyModel: internal_scale must be positive");
  if (internal == Internal::Power && !(power_m > 1.0))
    throw ValidationError("EnergyModel: Power internal energy requires m > 1");
}

ConvolutionPlan::ConvolutionPlan(const EnergyModel& model,
                                 const GridMeasure& geometry) {
  n_ = geometry.n_cells();
  h_ = geometry.cell_width;
  torus_ = geometry.domain.is_torus();
  const Kernel& W = model.kernel;
  if (W.is_zero()) {
    kind_ = Kind::Zero;
    return;
  }
  if (W.kind() == Kernel::Kind::Kuramoto && torus_ &&
      geometry.domain.period() == 1.0) {
    kind_ = Kind::Fourier;
    kappa_ = W.kappa();
    const double om = 2.0 * M_PI;
    cosx_.resize(static_cast<size_t>(n_));
    sinx_.resize(static_cast<size_t>(n_));
    for (int i = 0; i < n_; ++i) {
      cosx_[i] = std::cos(om * geometry.cell_center(i));
      sinx_[i] = std::sin(om * geometry.cell_center(i));
    }
    return;
  }
  if (W.kind() == Kernel::Kind::QuadraticAttraction && !torus_) {
    kind_ = Kind::Moments;
    kappa_ = W.kappa();
    centers_.resize(static_cast<size_t>(n_));
    for (int i = 0; i < n_; ++i) centers_[i] = geometry.cell_center(i);
    return;
  }
  kind_ = Kind::Toeplitz;
  if (torus_) {
    table_.resize(static_cast<size_t>(n_));
    for (int k = 0; k < n_; ++k)
      table_[k] = W.value(geometry.domain.difference(k * h_, 0.0));
  } else {
    table_.resize(static_cast<size_t>(2 * n_ - 1));
    for (int k = -(n_ - 1); k <= n_ - 1; ++k)
      table_[static_cast<size_t>(k + n_ - 1)] = W.value(k * h_);
  }
}

void ConvolutionPlan::apply(const std::vector<double>& density,
                            std::vector<double>& out) const {
  out.assign(static_cast<size_t>(n_), 0.0);
  switch (kind_) {
    case Kind::Zero: return;
    case Kind::Fourier: {
      double c = 0.0, s = 0.0;
      for (int j = 0; j < n_; ++j) {
        c += cosx_[j] * density[j];
        s += sinx_[j] * density[j];
      }
      c *= h_;
      s *= h_;
      for (int i = 0; i < n_; ++i)
        out[i] = -kappa_ * (cosx_[i] * c + sinx_[i] * s);
      return;
    }
    case Kind::Moments: {
      double m1 = 0.0, m2 = 0.0;
      for (int j = 0; j < n_; ++j) {
        m1 += centers_[j] * density[j];
        m2 += centers_[j] * centers_[j] * density[j];
      }
      m1 *= h_;
      m2 *= h_;
      for (int i = 0; i < n_; ++i)
        out[i] = 0.5 * kappa_ *
                 (centers_[i] * centers_[i] - 2.0 * centers_[i] * m1 + m2);
      return;
    }
    case Kind::Toeplitz: {
      if (torus_) {
        for (int i = 0; i < n_; ++i) {
          double acc = 0.0;
          for (int j = 0; j < n_; ++j) {
            int k = i - j;
            if (k < 0) k += n_;
            acc += table_[k] * density[j];
          }
          out[i] = acc * h_;
        }
      } else {
        for (int i = 0; i < n_; ++i) {
          double acc = 0.0;
          const double* row = table_.data() + (n_ - 1) + i;
          for (int j = 0; j < n_; ++j) acc += row[-j] * density[j];
          out[i] = acc * h_;
        }
      }
      return;
    }
  }
}

std::vector<double> interaction_potential(const EnergyModel& model,
                                          const GridMeasure& rho) {
  ConvolutionPlan plan(model, rho);
  std::vector<double> conv;
  plan.apply(rho.density, conv);
  return conv;
}

double energy(const EnergyModel& model, const GridMeasure& rho) {
  const int n = rho.n_cells();
  const double h = rho.cell_width;
  double internal = 0.0, potential = 0.0, interaction = 0.0;
  for (int i = 0; i < n; ++i)
    internal += model.internal_density(rho.density[i]);
  internal *= h;
  if (!model.potential.is_zero()) {
    for (int i = 0; i < n; ++i)
      potential += model.potential.value(rho.cell_center(i)) * rho.density[i];
    potential *= h;
  }
  if (!model.kernel.is_zero()) {
    const auto conv = interaction_potential(model, rho);
    for (int i = 0; i < n; ++i) interaction += conv[i] * rho.density[i];
    interaction *= 0.5 * h;
  }
  return internal + potential + interaction;
}

double energy(const EnergyModel& model, const ParticleMeasure& rho) {
  if (model.has_internal())
    throw ValidationError("energy: internal energy requires a GridMeasure");
  double potential = 0.0, interaction = 0.0;
  const int n = rho.size();
  if (!model.potential.is_zero())
    for (int i = 0; i < n; ++i)
      potential += rho.weights[i] * model.potential.value(rho.positions[i]);
  if (!model.kernel.is_zero()) {
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j)
        acc += rho.weights[j] *
               model.kernel.value(
                   rho.domain.difference(rho.positions[i], rho.positions[j]));
      interaction += rho.weights[i] * acc;
    }
    interaction *= 0.5;
  }
  return potential + interaction;
}

double energy(const EnergyModel& model, const Measure& rho) {
  return std::visit([&](const auto& m) { return energy(model, m); }, rho);
}

FirstVariationParts first_variation_parts(const EnergyModel& model,
                                          const GridMeasure& rho) {
  const int n = rho.n_cells();
  FirstVariationParts parts;
  parts.internal.resize(static_cast<size_t>(n));
  parts.external = interaction_potential(model, rho);
  for (int i = 0; i < n; ++i) {
    parts.internal[static_cast<size_t>(i)] =
        model.internal_prime(rho.density[i]);
    if (!model.potential.is_zero())
      parts.external[static_cast<size_t>(i)] +=
          model.potential.value(rho.cell_center(i));
  }
  return parts;
}

std::vector<double> first_variation(const EnergyModel& model,
                                    const GridMeasure& rho) {
  auto parts = first_variation_parts(model, rho);
  std::vector<double> xi(parts.internal.size());
  for (size_t i = 0; i < xi.size(); ++i)
    xi[i] = parts.internal[i] + parts.external[i];
  return xi;
}

double dissipation(const EnergyModel& model, const GridMeasure& rho) {
  const int n = rho.n_cells();
  const double h = rho.cell_width;
  const bool torus = rho.domain.is_torus();
  const auto xi = first_variation(model, rho);
  const double q = model.conjugate_q();
  auto occupied = [&](int i) {
    if (torus) return rho.density[static_cast<size_t>((i % n + n) % n)] > 0.0;
    if (i < 0 || i >= n) return false;
    return rho.density[static_cast<size_t>(i)] > 0.0;
  };
  auto xi_at = [&](int i) {
    return xi[static_cast<size_t>(torus ? (i % n + n) % n : i)];
  };
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!(rho.density[i] > 0.0)) continue;
    const bool left = occupied(i - 1), right = occupied(i + 1);
    double d;
    if (left && right)
      d = (xi_at(i + 1) - xi_at(i - 1)) / (2.0 * h);
    else if (right)
      d = (xi_at(i + 1) - xi_at(i)) / h;
    else if (left)
      d = (xi_at(i) - xi_at(i - 1)) / h;
    else
      d = 0.0;  // isolated occupied cell
    total += rho.density[i] * std::pow(std::fabs(d), q);
  }
  return total * h;
}

double dissipation(const EnergyModel& model, const ParticleMeasure& rho) {
  if (!model.pure_interaction())
    throw ValidationError(
        "dissipation: particle measures require a pure interaction model");
  const int n = rho.size();
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double v = 0.0;
    for (int j = 0; j < n; ++j)
      v += rho.weights[j] *
           model.kernel.grad(
               rho.domain.difference(rho.positions[i], rho.positions[j]));
    total += rho.weights[i] * v * v;
  }
  return total;
}

double dissipation(const EnergyModel& model, const Measure& rho) {
  return std::visit([&](const auto& m) { return dissipation(model, m); }, rho);
}

std::vector<double> velocity_field(const EnergyModel& model,
                                   const GridMeasure& rho) {
  const int n = rho.n_cells();
  const double h = rho.cell_width;
  const bool torus = rho.domain.is_torus();
  const auto parts = first_variation_parts(model, rho);
  const double q = model.conjugate_q();
  const bool linear_law = std::fabs(q - 2.0) < 1e-12;
  const int faces = torus ? n : n - 1;
  std::vector<double> u(static_cast<size_t>(faces), 0.0);
  for (int f = 0; f < faces; ++f) {
    const int i = f;
    const int j = torus ? (f + 1) % n : f + 1;
    const bool occ_i = rho.density[i] > 0.0;
    const bool occ_j = rho.density[j] > 0.0;
    double d;
    if (occ_i && occ_j) {
      d = ((parts.internal[j] + parts.external[j]) -
           (parts.internal[i] + parts.external[i])) /
          h;
    } else if (occ_i || occ_j) {
      // A vacuum side never contributes its own internal term: the occupied
      // side's value is used on both sides, so only the external part drives
      // the face. With a power internal energy F'(0) is finite and the plain
      // difference is kept.
      if (model.internal == EnergyModel::Internal::Entropy) {
        d = (parts.external[j] - parts.external[i]) / h;
      } else {
        d = ((parts.internal[j] + parts.external[j]) -
             (parts.internal[i] + parts.external[i])) /
            h;
      }
    } else {
      d = 0.0;
    }
    u[static_cast<size_t>(f)] = linear_law ? -d : -signed_pow(d, q - 1.0);
  }
  return u;
}

} // namespace wgf
