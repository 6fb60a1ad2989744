#include "wgf/domain.hpp"

#include <cmath>

#include "wgf/errors.hpp"
#include "wgf/numerics.hpp"

namespace wgf {

Domain Domain::torus(double period) {
  if (!(period > 0.0)) throw ValidationError("Domain: torus period must be positive");
  return Domain(Kind::Torus, 0.0, period, false);
}

Domain Domain::interval(double left, double right, bool truncation_of_line) {
  if (!(right > left)) throw ValidationError("Domain: interval needs right > left");
  return Domain(Kind::Interval, left, right, truncation_of_line);
}

double Domain::difference(double x, double y) const {
  double d = x - y;
  if (kind_ == Kind::Torus) {
    const double p = period();
    d -= p * std::round(d / p);
  }
  return d;
}

double Domain::wrap(double x) const {
  if (kind_ != Kind::Torus) return x;
  const double p = period();
  double y = std::fmod(x - left_, p);
  if (y < 0.0) y += p;
  return left_ + y;
}

bool Domain::operator==(const Domain& o) const {
  return kind_ == o.kind_ && left_ == o.left_ && right_ == o.right_ &&
         truncation_of_line_ == o.truncation_of_line_;
}

std::string Domain::describe() const {
  if (is_torus()) return "torus period=" + format_full(period());
  std::string s = "interval left=" + format_full(left_) +
                  " right=" + format_full(right_);
  if (truncation_of_line_) s += " truncation_of_line=1";
  return s;
}

void require_same_domain(const Domain& a, const Domain& b, const char* where) {
  if (a != b)
    throw DomainMismatchError(std::string(where) + ": measures on different domains (" +
                              a.describe() + " vs " + b.describe() + ")");
}

} // namespace wgf
