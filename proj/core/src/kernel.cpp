#include "wgf/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wgf/errors.hpp"
#include "wgf/numerics.hpp"
#include "wgf/potential.hpp"

namespace wgf {

BumpSpec BumpSpec::smooth(double radius, double normalization) {
  if (!(radius > 0.0)) throw ValidationError("BumpSpec: radius must be positive");
  if (!(normalization > 0.0))
    throw ValidationError("BumpSpec: normalization must be positive");
  BumpSpec b;
  b.radius = radius;
  b.normalization = normalization;
  return b;
}

BumpSpec BumpSpec::tabulated(double radius, std::vector<double> xs,
                             std::vector<double> phis, double normalization) {
  BumpSpec b = smooth(radius, normalization);
  b.profile = Profile::Tabulated;
  if (xs.size() != phis.size() || xs.size() < 3)
    throw ValidationError("BumpSpec: tabulated profile needs >= 3 samples");
  for (double v : phis)
    if (!(v >= 0.0)) throw ValidationError("BumpSpec: phi must be non-negative");
  b.sample_x = std::move(xs);
  b.sample_phi = std::move(phis);
  return b;
}

namespace {

double bump_phi(const BumpSpec& spec, const Potential* spline, double x) {
  const double u = x / spec.radius;
  const double u2 = u * u;
  if (u2 >= 1.0) return 0.0;
  if (spec.profile == BumpSpec::Profile::SmoothBump)
    return spec.normalization * std::exp(-1.0 / (1.0 - u2));
  return std::max(0.0, spec.normalization * spline->value(std::fabs(x)));
}

double bump_phi_grad(const BumpSpec& spec, const Potential* spline, double x) {
  const double u = x / spec.radius;
  const double u2 = u * u;
  if (u2 >= 1.0) return 0.0;
  if (spec.profile == BumpSpec::Profile::SmoothBump) {
    const double om = 1.0 - u2;
    return bump_phi(spec, spline, x) * (-2.0 * u / (om * om)) / spec.radius;
  }
  const double s = x >= 0.0 ? 1.0 : -1.0;
  return s * spec.normalization * spline->grad(std::fabs(x));
}

} // namespace

struct Kernel::HkData {
  BumpSpec spec;
  std::unique_ptr<Potential> profile_spline;  // tabulated profiles only
  // Backward cumulative J(x) = int_x^R y phi(y) dy on nodes over [0, R];
  // psi(x) = -J(|x|).
  std::vector<double> nodes;
  std::vector<double> tail_integral;
  double max_grad = 0.0;
  double max_second = 0.0;

  double phi(double x) const { return bump_phi(spec, profile_spline.get(), x); }
  double phi_grad(double x) const {
    return bump_phi_grad(spec, profile_spline.get(), x);
  }
  double psi(double x) const {
    const double ax = std::fabs(x);
    const double R = spec.radius;
    if (ax >= R) return 0.0;
    // locate the node just above ax and integrate the short remainder
    const size_t n = nodes.size();
    const double h = R / static_cast<double>(n - 1);
    size_t k = std::min(static_cast<size_t>(std::ceil(ax / h)), n - 1);
    const double local = gauss_legendre(
        [this](double y) { return y * phi(y); }, ax, nodes[k]);
    return -(tail_integral[k] + local);
  }
  double psi_grad(double x) const { return x * phi(x); }
};

Kernel Kernel::zero() { return Kernel(); }

Kernel Kernel::kuramoto(double kappa) {
  if (!(kappa > 0.0)) throw ValidationError("kuramoto kernel: kappa must be positive");
  Kernel k;
  k.kind_ = Kind::Kuramoto;
  k.kappa_ = kappa;
  return k;
}

Kernel Kernel::quadratic_attraction(double kappa) {
  if (!(kappa > 0.0))
    throw ValidationError("quadratic_attraction: kappa must be positive");
  Kernel k;
  k.kind_ = Kind::QuadraticAttraction;
  k.kappa_ = kappa;
  return k;
}

Kernel Kernel::hk(const BumpSpec& bump) {
  auto data = std::make_shared<HkData>();
  data->spec = bump;
  if (bump.profile == BumpSpec::Profile::Tabulated)
    data->profile_spline = std::make_unique<Potential>(
        Potential::tabulated(bump.sample_x, bump.sample_phi));
  const int n = 2049;
  data->nodes.resize(n);
  data->tail_integral.assign(n, 0.0);
  const double R = bump.radius;
  for (int i = 0; i < n; ++i) data->nodes[i] = R * i / (n - 1);
  for (int i = n - 2; i >= 0; --i) {
    data->tail_integral[i] =
        data->tail_integral[i + 1] +
        gauss_legendre([&](double y) { return y * data->phi(y); },
                       data->nodes[i], data->nodes[i + 1]);
  }
  // sup |psi'| and sup |psi''| by dense scan plus golden refinement
  auto neg_abs_grad = [&](double x) { return -std::fabs(data->psi_grad(x)); };
  auto neg_abs_second = [&](double x) {
    return -std::fabs(data->phi(x) + x * data->phi_grad(x));
  };
  auto maximize = [&](const auto& negf) {
    double best = 0.0, bestx = 0.0;
    const int m = 4096;
    for (int i = 0; i <= m; ++i) {
      const double x = R * i / m;
      const double v = -negf(x);
      if (v > best) {
        best = v;
        bestx = x;
      }
    }
    auto [xr, vr] = golden_min(negf, std::max(0.0, bestx - R / m),
                               std::min(R, bestx + R / m), 1e-12);
    return std::max(best, -vr);
  };
  data->max_grad = maximize(neg_abs_grad);
  data->max_second = maximize(neg_abs_second);
  Kernel k;
  k.kind_ = Kind::HK;
  k.hk_ = std::move(data);
  return k;
}

Kernel Kernel::nonconvex() {
  Kernel k;
  k.kind_ = Kind::NonConvex;
  return k;
}

Kernel Kernel::tabulated(std::vector<double> xs, std::vector<double> ws) {
  Kernel k;
  k.kind_ = Kind::Tabulated;
  k.tab_ = std::make_shared<Potential>(
      Potential::tabulated(std::move(xs), std::move(ws)));
  return k;
}

double Kernel::value(double x) const {
  switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::Kuramoto: return -kappa_ * std::cos(2.0 * M_PI * x);
    case Kind::QuadraticAttraction: return 0.5 * kappa_ * x * x;
    case Kind::HK: return hk_->psi(x);
    case Kind::NonConvex: {
      const double ax = std::fabs(x);
      if (ax > 0.75) return signed_pow(ax - 1.0, 1.5);
      return 0.5 * x * x - 13.0 / 32.0;
    }
    case Kind::Tabulated: return tab_->value(std::fabs(x));
  }
  return 0.0;
}

double Kernel::grad(double x) const {
  switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::Kuramoto: return 2.0 * M_PI * kappa_ * std::sin(2.0 * M_PI * x);
    case Kind::QuadraticAttraction: return kappa_ * x;
    case Kind::HK: return hk_->psi_grad(x);
    case Kind::NonConvex: {
      const double ax = std::fabs(x);
      if (ax > 0.75) {
        const double s = x > 0.0 ? 1.0 : -1.0;
        return s * 1.5 * std::sqrt(std::fabs(ax - 1.0));
      }
      return x;
    }
    case Kind::Tabulated: {
      const double s = x >= 0.0 ? 1.0 : -1.0;
      return s * tab_->grad(std::fabs(x));
    }
  }
  return 0.0;
}

double Kernel::phi(double x) const {
  if (kind_ != Kind::HK) return 0.0;
  return hk_->phi(x);
}

double Kernel::support_radius() const {
  if (kind_ == Kind::HK) return hk_->spec.radius;
  return std::numeric_limits<double>::infinity();
}

double Kernel::max_abs_grad() const {
  switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::Kuramoto: return 2.0 * M_PI * kappa_;
    case Kind::HK: return hk_->max_grad;
    default: return std::numeric_limits<double>::infinity();
  }
}

double Kernel::max_abs_second() const {
  switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::Kuramoto: return 4.0 * M_PI * M_PI * kappa_;
    case Kind::HK: return hk_->max_second;
    default: return std::numeric_limits<double>::infinity();
  }
}

} // namespace wgf
