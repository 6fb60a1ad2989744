#include "wgf/numerics.hpp"

#include <array>
#include <cmath>
#include <cstdio>

#include "wgf/errors.hpp"

namespace wgf {

std::pair<double, double> golden_min(const std::function<double(double)>& f,
                                     double a, double b, double xtol) {
  if (!(b > a)) throw ValidationError("golden_min: empty bracket");
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > xtol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    }
  }
  double xm = 0.5 * (a + b);
  double fm = f(xm);
  if (f1 < fm) {
    xm = x1;
    fm = f1;
  }
  if (f2 < fm) {
    xm = x2;
    fm = f2;
  }
  return {xm, fm};
}

double bisect(const std::function<double(double)>& f, double a, double b,
              double xtol) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0) throw ValidationError("bisect: root not bracketed");
  while (b - a > xtol) {
    double m = 0.5 * (a + b);
    double fm = f(m);
    if (fm == 0.0) return m;
    if (fa * fm < 0.0) {
      b = m;
      fb = fm;
    } else {
      a = m;
      fa = fm;
    }
  }
  return 0.5 * (a + b);
}

namespace {
// 20-point Gauss-Legendre nodes/weights on [-1, 1] (positive half; symmetric).
constexpr std::array<double, 10> kGlNodes = {
    0.0765265211334973, 0.2277858511416451, 0.3737060887154196,
    0.5108670019508271, 0.6360536807265150, 0.7463319064601508,
    0.8391169718222188, 0.9122344282513259, 0.9639719272779138,
    0.9931285991850949};
constexpr std::array<double, 10> kGlWeights = {
    0.1527533871307258, 0.1491729864726037, 0.1420961093183820,
    0.1316886384491766, 0.1181945319615184, 0.1019301198172404,
    0.0832767415767048, 0.0626720483341091, 0.0406014298003869,
    0.0176140071391521};
} // namespace

double gauss_legendre(const std::function<double(double)>& f, double a,
                      double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 10; ++i) {
    s += kGlWeights[i] * (f(c + h * kGlNodes[i]) + f(c - h * kGlNodes[i]));
  }
  return s * h;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw ValidationError("linear_fit: need at least two points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw ValidationError("linear_fit: degenerate abscissae");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

double richardson_derivative(const std::function<double(double)>& f,
                             double h) {
  auto central = [&](double e) { return (f(e) - f(-e)) / (2.0 * e); };
  return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double signed_pow(double x, double e) {
  if (x > 0.0) return std::pow(x, e);
  if (x < 0.0) return -std::pow(-x, e);
  return 0.0;
}

} // namespace wgf
