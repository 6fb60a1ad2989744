#pragma once

#include <memory>
#include <vector>

namespace wgf {

/// Influence function phi for the consensus kernel: non-negative, even,
/// supported on [-radius, radius] and strictly positive inside.
struct BumpSpec {
  double radius = 1.0;
  double normalization = 1.0;  // amplitude multiplying the profile

  enum class Profile { SmoothBump, Tabulated };
  Profile profile = Profile::SmoothBump;

  /// Tabulated profile samples on [0, radius] (mirrored evenly); ignored for
  /// SmoothBump.
  std::vector<double> sample_x;
  std::vector<double> sample_phi;

  static BumpSpec smooth(double radius, double normalization = 1.0);
  static BumpSpec tabulated(double radius, std::vector<double> xs,
                            std::vector<double> phis,
                            double normalization = 1.0);
};

/// Interaction kernel W. All kinds are even functions of the separation.
class Kernel {
public:
  enum class Kind { Zero, Kuramoto, QuadraticAttraction, HK, NonConvex, Tabulated };

  static Kernel zero();
  /// W(x) = -kappa cos(2 pi x).
  static Kernel kuramoto(double kappa);
  /// W(x) = kappa x^2 / 2.
  static Kernel quadratic_attraction(double kappa);
  /// W = psi with psi(x) = int_{-inf}^x y phi(y) dy for the given bump;
  /// psi' (x) = x phi(x) is evaluated analytically, psi from a cached
  /// cumulative quadrature table.
  static Kernel hk(const BumpSpec& bump);
  /// The piecewise C^1 double-branch potential
  ///   W(x) = sign(|x|-1) ||x|-1|^{3/2}   for |x| > 3/4,
  ///   W(x) = x^2/2 - 13/32               for |x| <= 3/4.
  /// The constant makes the branches match in value at |x| = 3/4 (their
  /// derivatives already match there), so W is C^1 on all of R.
  static Kernel nonconvex();
  /// Clamped cubic spline through the samples (must be even).
  static Kernel tabulated(std::vector<double> xs, std::vector<double> ws);

  Kind kind() const { return kind_; }
  bool is_zero() const { return kind_ == Kind::Zero; }
  double kappa() const { return kappa_; }

  double value(double x) const;  // W(x)
  double grad(double x) const;   // W'(x)

  /// Influence function of the HK kernel; zero for other kinds.
  double phi(double x) const;

  /// Radius of compact support (HK), infinity otherwise.
  double support_radius() const;
  bool compact_support() const { return kind_ == Kind::HK; }

  /// sup |W'| and sup |W''| where finite (HK); used for step-size defaults
  /// and the non-collision bound.
  double max_abs_grad() const;
  double max_abs_second() const;
  bool finite_second_bound() const { return kind_ == Kind::HK; }

private:
  Kernel() = default;
  Kind kind_ = Kind::Zero;
  double kappa_ = 0.0;

  struct HkData;
  std::shared_ptr<const HkData> hk_;
  std::shared_ptr<const class Potential> tab_;  // tabulated kernel spline
};

} // namespace wgf
