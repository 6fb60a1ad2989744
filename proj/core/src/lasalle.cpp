#include "wgf/lasalle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "wgf/errors.hpp"
#include "wgf/metrics.hpp"
#include "wgf/numerics.hpp"

namespace wgf {

CheckResult check_energy_monotone(const TrajectoryRecord& record,
                                  const SlackRule& rule) {
  if (record.size() < 2)
    throw ValidationError("check_energy_monotone: need at least two rows");
  double e_scale = 0.0;
  double max_gq = 0.0;
  for (const auto& row : record.diag) {
    e_scale = std::max(e_scale, std::fabs(row.energy));
    max_gq = std::max(max_gq, row.dissipation_q);
  }
  CheckResult res;
  res.pass = true;
  res.worst = -std::numeric_limits<double>::infinity();
  for (int k = 0; k + 1 < record.size(); ++k) {
    const auto& a = record.diag[static_cast<size_t>(k)];
    const auto& b = record.diag[static_cast<size_t>(k + 1)];
    const double dt = b.t - a.t;
    const double local_gq = std::max(a.dissipation_q, b.dissipation_q);
    const double slack = rule.slack(dt, local_gq, record.cell_width, e_scale);
    const double uphill = b.energy - a.energy - slack;
    if (uphill > res.worst) {
      res.worst = uphill;
      res.index = k + 1;
    }
    if (uphill > 0.0) res.pass = false;
  }
  if (res.worst < 0.0) res.worst = std::max(res.worst, -0.0);
  res.detail = res.pass ? "energy non-increasing within slack"
                        : "energy increased beyond slack at index " +
                              std::to_string(res.index);
  return res;
}

std::vector<double> ms_residual(const TrajectoryRecord& record, double p) {
  if (record.size() < 2)
    throw ValidationError("ms_residual: need at least two rows");
  for (const auto& row : record.diag)
    if (row.metric_derivative < 0.0)
      throw ValidationError("ms_residual: metric derivatives not filled");
  const double q = p / (p - 1.0);
  std::vector<double> r;
  r.reserve(static_cast<size_t>(record.size() - 1));
  for (int k = 0; k + 1 < record.size(); ++k) {
    const auto& a = record.diag[static_cast<size_t>(k)];
    const auto& b = record.diag[static_cast<size_t>(k + 1)];
    const double dt = b.t - a.t;
    const double de = (b.energy - a.energy) / dt;
    r.push_back(de + std::pow(a.metric_derivative, p) / p +
                a.dissipation_q / q);
  }
  return r;
}

double ms_residual_sup(const TrajectoryRecord& record, double p, double t_lo,
                       double t_hi) {
  const auto r = ms_residual(record, p);
  double sup = 0.0;
  for (size_t k = 0; k < r.size(); ++k) {
    const double t = record.times[k];
    if (t >= t_lo && t <= t_hi) sup = std::max(sup, std::fabs(r[k]));
  }
  return sup;
}

double gq_integral(const TrajectoryRecord& record) {
  double acc = 0.0;
  for (int k = 0; k + 1 < record.size(); ++k) {
    const auto& a = record.diag[static_cast<size_t>(k)];
    const auto& b = record.diag[static_cast<size_t>(k + 1)];
    acc += 0.5 * (a.dissipation_q + b.dissipation_q) * (b.t - a.t);
  }
  return acc;
}

OmegaLimit extract_omega_limit(const TrajectoryRecord& record,
                               double tail_fraction, double cluster_tol) {
  const int n = record.size();
  const int tail = std::max(
      10, static_cast<int>(std::floor(tail_fraction * n)));
  if (tail > n)
    throw ValidationError(
        "extract_omega_limit: record too short for the requested tail");
  const int start = n - tail;

  // pairwise BL distances over the tail
  std::vector<std::vector<double>> d(static_cast<size_t>(tail),
                                     std::vector<double>(static_cast<size_t>(tail), 0.0));
  for (int i = 0; i < tail; ++i)
    for (int j = i + 1; j < tail; ++j) {
      const double v = bounded_lipschitz(record.snapshots[start + i],
                                         record.snapshots[start + j]);
      d[i][j] = d[j][i] = v;
    }

  double tol = cluster_tol;
  if (tol <= 0.0) {
    // 5x the late-time self-scatter of the last few snapshots
    double scatter = 0.0;
    for (int i = std::max(0, tail - 5); i + 1 < tail; ++i)
      scatter = std::max(scatter, d[i][i + 1]);
    tol = std::max(5.0 * scatter, 1e-12);
  }

  // single linkage via union-find
  std::vector<int> parent(static_cast<size_t>(tail));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (int i = 0; i < tail; ++i)
    for (int j = i + 1; j < tail; ++j)
      if (d[i][j] <= tol) parent[find(i)] = find(j);

  std::vector<int> roots;
  for (int i = 0; i < tail; ++i)
    if (find(i) == i) roots.push_back(i);

  OmegaLimit out;
  for (int root : roots) {
    std::vector<int> members;
    for (int i = 0; i < tail; ++i)
      if (find(i) == root) members.push_back(i);
    // medoid: minimal total distance, ties to the latest snapshot
    int best = members.front();
    double best_sum = std::numeric_limits<double>::infinity();
    for (int i : members) {
      double s = 0.0;
      for (int j : members) s += d[i][j];
      if (s < best_sum - 1e-18 || (std::fabs(s - best_sum) <= 1e-18 && i > best)) {
        best_sum = s;
        best = i;
      }
    }
    for (int i : members)
      for (int j : members) out.scatter = std::max(out.scatter, d[i][j]);
    out.representatives.push_back(record.snapshots[start + best]);
    out.cluster_sizes.push_back(static_cast<int>(members.size()));
  }
  out.oscillatory = out.representatives.size() > 3;
  return out;
}

ConvergenceCheck check_convergence_to_set(const TrajectoryRecord& record,
                                          const EquilibriumSet& eqs,
                                          MetricKind metric, double tol,
                                          int window_count, double p,
                                          bool translation_quotient) {
  const int n = record.size();
  window_count = std::clamp(window_count, 2, n);
  const int start = n - window_count;
  ConvergenceCheck out;
  for (int k = start; k < n; ++k) {
    out.times.push_back(record.times[static_cast<size_t>(k)]);
    out.distances.push_back(distance_to_set(
        record.snapshots[static_cast<size_t>(k)], eqs, metric, p,
        translation_quotient));
  }
  out.final_distance = out.distances.back();
  bool below = true;
  for (double v : out.distances)
    if (v >= tol) below = false;
  const int half = window_count / 2;
  double max_first = 0.0, max_second = 0.0;
  for (int i = 0; i < window_count; ++i) {
    if (i < half) max_first = std::max(max_first, out.distances[i]);
    else max_second = std::max(max_second, out.distances[i]);
  }
  const bool non_increasing = max_second <= 1.05 * max_first + 1e-12;
  out.pass = below && non_increasing;
  return out;
}

RateFit fit_exponential_rate(const std::vector<double>& times,
                             const std::vector<double>& distances,
                             double t_lo, double t_hi) {
  if (times.size() != distances.size())
    throw ValidationError("fit_exponential_rate: size mismatch");
  std::vector<double> ts, ls;
  for (size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_lo || times[i] > t_hi) continue;
    if (distances[i] <= 1e-13) continue;  // noise floor
    ts.push_back(times[i]);
    ls.push_back(std::log(distances[i]));
  }
  if (ts.size() < 3)
    throw ValidationError("fit_exponential_rate: fewer than 3 usable points");
  const LinearFit fit = linear_fit(ts, ls);
  RateFit out;
  out.rate = -fit.slope;
  out.goodness = fit.r_squared;
  out.points = static_cast<int>(ts.size());
  return out;
}

EnergyLimitCheck check_energy_limit(const TrajectoryRecord& record,
                                    const std::vector<double>& rep_energies,
                                    double tol, bool energy_continuous) {
  const int n = record.size();
  const int tail = std::max(3, n / 10);
  double e_inf = 0.0;
  for (int k = n - tail; k < n; ++k)
    e_inf += record.diag[static_cast<size_t>(k)].energy;
  e_inf /= tail;
  EnergyLimitCheck out;
  out.e_infinity = e_inf;
  out.pass = true;
  for (double e : rep_energies) {
    const double above = e - (e_inf + tol);          // E(rep) <= E_inf + tol
    const double gap = std::fabs(e - e_inf) - tol;   // equality when continuous
    const double violation = energy_continuous ? std::max(above, gap) : above;
    out.worst_gap = std::max(out.worst_gap, violation);
    if (violation > 0.0) out.pass = false;
  }
  out.detail = out.pass ? "omega-limit energies consistent with E_infinity"
                        : "omega-limit energy deviates from E_infinity";
  return out;
}

CheckResult check_second_moment_monotone(const TrajectoryRecord& record,
                                         double per_step_tol) {
  CheckResult res;
  res.pass = true;
  res.worst = 0.0;
  if (record.is_particle) {
    res.worst = record.worst_m2_uphill;
    res.pass = record.worst_m2_uphill <= per_step_tol;
    res.detail = "per-step worst M2 increase " + format_full(res.worst);
    return res;
  }
  for (int k = 0; k + 1 < record.size(); ++k) {
    const double up = record.diag[static_cast<size_t>(k + 1)].second_moment -
                      record.diag[static_cast<size_t>(k)].second_moment;
    if (up > res.worst) {
      res.worst = up;
      res.index = k + 1;
    }
  }
  res.pass = res.worst <= per_step_tol;
  res.detail = "worst M2 increase between snapshots " + format_full(res.worst);
  return res;
}

} // namespace wgf
