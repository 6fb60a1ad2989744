#include "wgf/trajectory.hpp"

#include <cmath>

#include "wgf/errors.hpp"
#include "wgf/metrics.hpp"

namespace wgf {

void TrajectoryRecord::check_consistent() const {
  if (times.size() != snapshots.size() || times.size() != diag.size())
    throw ValidationError("TrajectoryRecord: ragged arrays");
  for (size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw ValidationError("TrajectoryRecord: times not strictly increasing");
}

std::vector<double> snapshot_schedule(double t_end, int count) {
  if (!(t_end > 0.0)) throw ValidationError("snapshot_schedule: t_end must be positive");
  count = std::max(count, 2);
  const double t_min = t_end / 512.0;
  const double ratio = std::pow(t_end / t_min, 1.0 / (count - 1));
  std::vector<double> ts;
  ts.reserve(static_cast<size_t>(count) + 1);
  ts.push_back(0.0);
  double t = t_min;
  for (int k = 0; k < count; ++k) {
    ts.push_back(std::min(t, t_end));
    t *= ratio;
  }
  ts.back() = t_end;
  // de-duplicate (clamping can collide at t_end)
  std::vector<double> out;
  for (double v : ts)
    if (out.empty() || v > out.back()) out.push_back(v);
  return out;
}

double metric_derivative_estimate(const TrajectoryRecord& record, int index) {
  const int n = record.size();
  if (n < 2) throw ValidationError("metric_derivative_estimate: too few snapshots");
  if (index < 0 || index >= n)
    throw ValidationError("metric_derivative_estimate: index out of range");
  const int lo = std::max(index - 1, 0);
  const int hi = std::min(index + 1, n - 1);
  const double dt = record.times[hi] - record.times[lo];
  if (!(dt > 0.0)) throw ValidationError("metric_derivative_estimate: degenerate step");
  const double w =
      wasserstein_p(record.snapshots[hi], record.snapshots[lo],
                    record.wasserstein_p);
  return w / dt;
}

void fill_metric_derivatives(TrajectoryRecord& record) {
  for (int i = 0; i < record.size(); ++i)
    record.diag[static_cast<size_t>(i)].metric_derivative =
        metric_derivative_estimate(record, i);
}

SelfSimilarTransform SelfSimilarTransform::for_exponent(double m) {
  if (!(m > 1.0)) throw ValidationError("SelfSimilarTransform: m must exceed 1");
  SelfSimilarTransform s;
  s.alpha = 1.0 / ((m - 1.0) + 2.0);  // d = 1
  return s;
}

double SelfSimilarTransform::tau(double t) const {
  if (!(t > 0.0)) throw ValidationError("SelfSimilarTransform: t must be positive");
  return std::log(t);
}

double SelfSimilarTransform::y(double x, double t) const {
  if (!(t > 0.0)) throw ValidationError("SelfSimilarTransform: t must be positive");
  return x / std::pow(t, alpha);
}

} // namespace wgf
