#include "wgf/potential.hpp"

#include <algorithm>
#include <cmath>

#include "wgf/errors.hpp"

namespace wgf {

Potential Potential::zero() { return Potential(); }

Potential Potential::weak_log(int dim) {
  if (dim < 1) throw ValidationError("weak_log: dim must be >= 1");
  Potential p;
  p.kind_ = Kind::WeakLog;
  p.dim_ = dim;
  return p;
}

Potential Potential::quadratic(double a) {
  Potential p;
  p.kind_ = Kind::Quadratic;
  p.a_ = a;
  return p;
}

Potential Potential::bistable(double a, double b) {
  Potential p;
  p.kind_ = Kind::Bistable;
  p.a_ = a;
  p.b_ = b;
  return p;
}

Potential Potential::confinement(double alpha) {
  Potential p;
  p.kind_ = Kind::Confinement;
  p.a_ = alpha;
  return p;
}

Potential Potential::tabulated(std::vector<double> xs, std::vector<double> vs) {
  if (xs.size() != vs.size() || xs.size() < 3)
    throw ValidationError("tabulated potential: need >= 3 samples");
  for (size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1]))
      throw ValidationError("tabulated potential: xs must be increasing");
  Potential p;
  p.kind_ = Kind::Tabulated;
  // Clamped cubic spline: end derivatives from one-sided differences.
  const size_t n = xs.size();
  const double d0 = (vs[1] - vs[0]) / (xs[1] - xs[0]);
  const double dn = (vs[n - 1] - vs[n - 2]) / (xs[n - 1] - xs[n - 2]);
  std::vector<double> d2(n), u(n);
  d2[0] = -0.5;
  u[0] = (3.0 / (xs[1] - xs[0])) * ((vs[1] - vs[0]) / (xs[1] - xs[0]) - d0);
  for (size_t i = 1; i + 1 < n; ++i) {
    const double sig = (xs[i] - xs[i - 1]) / (xs[i + 1] - xs[i - 1]);
    const double pr = sig * d2[i - 1] + 2.0;
    d2[i] = (sig - 1.0) / pr;
    u[i] = (vs[i + 1] - vs[i]) / (xs[i + 1] - xs[i]) -
           (vs[i] - vs[i - 1]) / (xs[i] - xs[i - 1]);
    u[i] = (6.0 * u[i] / (xs[i + 1] - xs[i - 1]) - sig * u[i - 1]) / pr;
  }
  const double qn = 0.5;
  const double un = (3.0 / (xs[n - 1] - xs[n - 2])) *
                    (dn - (vs[n - 1] - vs[n - 2]) / (xs[n - 1] - xs[n - 2]));
  d2[n - 1] = (un - qn * u[n - 2]) / (qn * d2[n - 2] + 1.0);
  for (size_t k = n - 1; k-- > 0;) d2[k] = d2[k] * d2[k + 1] + u[k];
  p.xs_ = std::move(xs);
  p.vs_ = std::move(vs);
  p.d2_ = std::move(d2);
  return p;
}

double Potential::spline_value(double x) const {
  const auto& xs = xs_;
  size_t hi = std::upper_bound(xs.begin(), xs.end(), x) - xs.begin();
  hi = std::clamp(hi, size_t{1}, xs.size() - 1);
  const size_t lo = hi - 1;
  const double h = xs[hi] - xs[lo];
  const double a = (xs[hi] - x) / h, b = (x - xs[lo]) / h;
  return a * vs_[lo] + b * vs_[hi] +
         ((a * a * a - a) * d2_[lo] + (b * b * b - b) * d2_[hi]) * h * h / 6.0;
}

double Potential::spline_grad(double x) const {
  const auto& xs = xs_;
  size_t hi = std::upper_bound(xs.begin(), xs.end(), x) - xs.begin();
  hi = std::clamp(hi, size_t{1}, xs.size() - 1);
  const size_t lo = hi - 1;
  const double h = xs[hi] - xs[lo];
  const double a = (xs[hi] - x) / h, b = (x - xs[lo]) / h;
  return (vs_[hi] - vs_[lo]) / h +
         ((3.0 * b * b - 1.0) * d2_[hi] - (3.0 * a * a - 1.0) * d2_[lo]) * h /
             6.0;
}

double Potential::value(double x) const {
  switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::WeakLog: {
      double x2d = 1.0;
      const double x2 = x * x;
      for (int i = 0; i < dim_; ++i) x2d *= x2;
      return std::log1p(x2d);
    }
    case Kind::Quadratic: return 0.5 * a_ * x * x;
    case Kind::Bistable: return 0.25 * a_ * x * x * x * x - 0.5 * b_ * x * x;
    case Kind::Confinement: return 0.5 * a_ * x * x;
    case Kind::Tabulated: return spline_value(x);
  }
  return 0.0;
}

double Potential::grad(double x) const {
  switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::WeakLog: {
      double x2d = 1.0;
      const double x2 = x * x;
      for (int i = 0; i < dim_; ++i) x2d *= x2;
      if (x == 0.0) return 0.0;
      return 2.0 * dim_ * x2d / (x * (1.0 + x2d));
    }
    case Kind::Quadratic: return a_ * x;
    case Kind::Bistable: return a_ * x * x * x - b_ * x;
    case Kind::Confinement: return a_ * x;
    case Kind::Tabulated: return spline_grad(x);
  }
  return 0.0;
}

} // namespace wgf
