#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace wgf {

/// Golden-section minimization of a unimodal function on [a, b].
/// Stops when the bracket is shorter than xtol. Returns (argmin, min).
std::pair<double, double> golden_min(const std::function<double(double)>& f,
                                     double a, double b, double xtol);

/// Bisection root of a continuous function with f(a), f(b) of opposite sign.
double bisect(const std::function<double(double)>& f, double a, double b,
              double xtol);

/// Fixed 20-point Gauss-Legendre quadrature of f over [a, b].
double gauss_legendre(const std::function<double(double)>& f, double a,
                      double b);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Least-squares line through (x_i, y_i).
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

/// Richardson-extrapolated central difference of f at 0 with base step h:
/// (4 S(h/2) - S(h)) / 3 where S(e) = (f(e) - f(-e)) / (2e).
double richardson_derivative(const std::function<double(double)>& f, double h);

/// Round-trip decimal formatting ("%.17g").
std::string format_full(double v);

/// sign(x) * |x|^e, continuous odd power.
double signed_pow(double x, double e);

} // namespace wgf
