#pragma once

#include <string>

namespace wgf {

/// The 1D state space: a flat torus of given period (chart [0, period)) or a
/// bounded interval, optionally marking that the interval truncates the real
/// line (this changes how dynamics treat the boundary: zero-flux walls stand
/// in for decay at infinity, and the truncation bias is monitored rather than
/// hidden).
class Domain {
public:
  enum class Kind { Torus, Interval };

  static Domain torus(double period);
  static Domain interval(double left, double right,
                         bool truncation_of_line = false);

  Kind kind() const { return kind_; }
  bool is_torus() const { return kind_ == Kind::Torus; }
  double left() const { return left_; }
  double right() const { return right_; }
  double length() const { return right_ - left_; }
  double period() const { return length(); }
  bool truncation_of_line() const { return truncation_of_line_; }

  /// Signed difference x - y reduced to the minimal image on a torus;
  /// plain difference on an interval.
  double difference(double x, double y) const;

  /// Map a coordinate into the chart [left, right) (torus only).
  double wrap(double x) const;

  bool operator==(const Domain& o) const;
  bool operator!=(const Domain& o) const { return !(*this == o); }

  std::string describe() const;

private:
  Domain(Kind k, double a, double b, bool trunc)
      : kind_(k), left_(a), right_(b), truncation_of_line_(trunc) {}

  Kind kind_;
  double left_;
  double right_;
  bool truncation_of_line_;
};

/// Throws DomainMismatchError unless both domains are identical.
void require_same_domain(const Domain& a, const Domain& b,
                         const char* where);

} // namespace wgf
