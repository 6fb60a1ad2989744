#pragma once

#include <vector>

namespace wgf {

/// External potential V. Built-in families cover the bundled flows; a
/// tabulated variant (clamped cubic spline) covers everything else.
class Potential {
public:
  enum class Kind { Zero, WeakLog, Quadratic, Bistable, Confinement, Tabulated };

  static Potential zero();
  /// V(x) = log(1 + |x|^(2 dim)); slowly growing confinement.
  static Potential weak_log(int dim);
  /// V(x) = a x^2 / 2.
  static Potential quadratic(double a);
  /// V(x) = a x^4 / 4 - b x^2 / 2 (double well for a, b > 0).
  static Potential bistable(double a, double b);
  /// V(y) = (alpha / 2) y^2; the self-similar confinement term.
  static Potential confinement(double alpha);
  /// Clamped cubic spline through (xs, vs); xs strictly increasing.
  static Potential tabulated(std::vector<double> xs, std::vector<double> vs);

  Kind kind() const { return kind_; }
  bool is_zero() const { return kind_ == Kind::Zero; }
  double value(double x) const;
  double grad(double x) const;

private:
  Potential() = default;
  Kind kind_ = Kind::Zero;
  int dim_ = 1;
  double a_ = 0.0, b_ = 0.0;
  // spline data
  std::vector<double> xs_, vs_, d2_;
  double spline_value(double x) const;
  double spline_grad(double x) const;
};

} // namespace wgf
