#include "wgf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "wgf/errors.hpp"
#include "wgf/numerics.hpp"

namespace wgf {
namespace {

// A measure as an ordered list of mass segments. An atom has x0 == x1; a
// grid cell spreads its mass uniformly over [x0, x1]. Total mass is scaled
// to exactly 1.
struct Seg {
  double x0, x1, m;
};

std::vector<Seg> to_segments(const Measure& m) {
  std::vector<Seg> segs;
  if (const auto* g = std::get_if<GridMeasure>(&m)) {
    segs.reserve(g->density.size());
    for (int i = 0; i < g->n_cells(); ++i) {
      if (g->density[i] > 0.0) {
        const double xl = g->cell_left(i);
        segs.push_back({xl, xl + g->cell_width, g->density[i] * g->cell_width});
      }
    }
  } else {
    const auto& p = std::get<ParticleMeasure>(m);
    segs.reserve(p.positions.size());
    for (int i = 0; i < p.size(); ++i)
      segs.push_back({p.positions[i], p.positions[i], p.weights[i]});
  }
  double total = 0.0;
  for (const Seg& s : segs) total += s.m;
  if (std::fabs(total - 1.0) > 1e-6)
    throw ValidationError("metric: measure mass deviates from 1 by " +
                          format_full(total - 1.0));
  for (Seg& s : segs) s.m /= total;
  return segs;
}

// Translate segments by theta on a torus chart and re-sort, splitting the
// segment that straddles the chart edge.
std::vector<Seg> translate_segments(const std::vector<Seg>& in, double theta,
                                    const Domain& d) {
  std::vector<Seg> out;
  out.reserve(in.size() + 1);
  const double a = d.left(), b = d.right(), P = d.period();
  for (Seg s : in) {
    double y0 = s.x0 + theta, y1 = s.x1 + theta;
    // reduce so that y0 lands in [a, b)
    double shift = std::floor((y0 - a) / P) * P;
    y0 -= shift;
    y1 -= shift;
    if (y1 <= b || s.x0 == s.x1) {
      if (y0 >= b) { y0 -= P; y1 -= P; }
      out.push_back({y0, y1, s.m});
    } else {
      const double frac = (b - y0) / (y1 - y0);
      out.push_back({y0, b, s.m * frac});
      out.push_back({a, a + (y1 - b), s.m * (1.0 - frac)});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Seg& u, const Seg& v) { return u.x0 < v.x0; });
  return out;
}

// Exact integral of |A + B u|^p over u in [0, L].
double abs_linear_power_integral(double A, double B, double L, double p) {
  if (L <= 0.0) return 0.0;
  const double span = std::fabs(B) * L;
  if (span <= 1e-14 * std::max(std::fabs(A), 1e-300)) {
    const double mid = std::fabs(A + 0.5 * B * L);
    return std::pow(mid, p) * L;
  }
  if (p == 2.0)
    return A * A * L + A * B * L * L + B * B * L * L * L / 3.0;
  if (p == 1.0) {
    const double A1 = A + B * L;
    if (A * A1 >= 0.0) return 0.5 * (std::fabs(A) + std::fabs(A1)) * L;
    const double u0 = -A / B;  // zero crossing inside (0, L)
    return 0.5 * (std::fabs(A) * u0 + std::fabs(A1) * (L - u0));
  }
  auto F = [p](double v) { return signed_pow(v, p + 1.0) / (p + 1.0); };
  return (F(A + B * L) - F(A)) / B;
}

// L^p cost between the quantile functions of two segment lists on the line:
// int_0^1 |Q_a(s) - Q_b(s)|^p ds, exact.
double quantile_cost(const std::vector<Seg>& a, const std::vector<Seg>& b,
                     double p) {
  double cost = 0.0;
  size_t ia = 0, ib = 0;
  double sa = 0.0, sb = 0.0;  // cumulative mass at the start of current segs
  double s = 0.0;
  while (ia < a.size() && ib < b.size()) {
    const Seg& A = a[ia];
    const Seg& B = b[ib];
    const double enda = sa + A.m, endb = sb + B.m;
    const double end = std::min(enda, endb);
    const double L = end - s;
    if (L > 0.0) {
      const double sla = (A.x1 - A.x0) / A.m;
      const double slb = (B.x1 - B.x0) / B.m;
      const double qa = A.x0 + (s - sa) * sla;
      const double qb = B.x0 + (s - sb) * slb;
      cost += abs_linear_power_integral(qa - qb, sla - slb, L, p);
      s = end;
    }
    if (enda <= end) {
      sa = enda;
      ++ia;
    }
    if (endb <= end) {
      sb = endb;
      ++ib;
    }
  }
  return cost;
}

// Lifted-quantile segments of b under cyclic mass shift theta in [0, 1):
// the last theta of b's mass, shifted one period left, comes first.
std::vector<Seg> mass_shift(const std::vector<Seg>& b, double theta,
                            double period) {
  if (theta <= 0.0) return b;
  std::vector<Seg> out;
  out.reserve(b.size() + 1);
  const double head = 1.0 - theta;  // split point in cumulative mass
  double acc = 0.0;
  size_t split_idx = b.size();
  double split_frac = 0.0;
  for (size_t i = 0; i < b.size(); ++i) {
    if (acc + b[i].m >= head) {
      split_idx = i;
      split_frac = (head - acc) / b[i].m;
      break;
    }
    acc += b[i].m;
  }
  auto push = [&out](double x0, double x1, double m) {
    if (m > 0.0) out.push_back({x0, x1, m});
  };
  if (split_idx < b.size()) {
    const Seg& s = b[split_idx];
    const double xm = s.x0 + split_frac * (s.x1 - s.x0);
    push(xm - period, s.x1 - period, s.m * (1.0 - split_frac));
    for (size_t i = split_idx + 1; i < b.size(); ++i)
      push(b[i].x0 - period, b[i].x1 - period, b[i].m);
    for (size_t i = 0; i < split_idx; ++i) push(b[i].x0, b[i].x1, b[i].m);
    push(s.x0, xm, s.m * split_frac);
  } else {
    out = b;
  }
  return out;
}

double torus_quantile_cost_min(const std::vector<Seg>& a,
                               const std::vector<Seg>& b, double p,
                               double period) {
  auto cost = [&](double theta) {
    theta -= std::floor(theta);
    return quantile_cost(a, mass_shift(b, theta, period), p);
  };
  const int kScan = 64;
  double best_theta = 0.0, best = cost(0.0);
  for (int k = 1; k < kScan; ++k) {
    const double th = static_cast<double>(k) / kScan;
    const double c = cost(th);
    if (c < best) {
      best = c;
      best_theta = th;
    }
  }
  auto [th, c] = golden_min(cost, best_theta - 1.0 / kScan,
                            best_theta + 1.0 / kScan, 1e-10);
  return std::min(best, c);
}

double wasserstein_impl(const Measure& mu, const Measure& nu, double p) {
  require_same_domain(domain_of(mu), domain_of(nu), "wasserstein");
  const Domain& d = domain_of(mu);
  const auto a = to_segments(mu);
  const auto b = to_segments(nu);
  double cost;
  if (d.is_torus())
    cost = torus_quantile_cost_min(a, b, p, d.period());
  else
    cost = quantile_cost(a, b, p);
  return std::pow(std::max(cost, 0.0), 1.0 / p);
}

// ---------------------------------------------------------------------------
// Bounded-Lipschitz distance on the line.
//
// Maximize -int g f' with g = F_mu - F_nu over f with |f| <= 1, Lip(f) <= 1.
// g is piecewise linear between merged breakpoints; pieces are split at sign
// changes (and at midpoints, to tighten the piecewise-linear-f restriction)
// so that each carries a single-signed mean value.
// ---------------------------------------------------------------------------

struct Piece {
  double len;
  double gbar;  // mean of g over the piece (exact trapezoid)
  int sign;     // sign of g on the piece; 0 when |g| is negligibly small
};

// Breakpoint values of both CDFs: F(x^+) and the jump at x for each merged
// breakpoint. One linear sweep over the segment lists.
void cdf_at_breakpoints(const std::vector<Seg>& segs,
                        const std::vector<double>& xs,
                        std::vector<double>& value,
                        std::vector<double>& jump) {
  value.assign(xs.size(), 0.0);
  jump.assign(xs.size(), 0.0);
  size_t j = 0;
  double closed = 0.0;  // mass of segments entirely left of the current x
  for (size_t k = 0; k < xs.size(); ++k) {
    const double x = xs[k];
    while (j < segs.size()) {
      const Seg& s = segs[j];
      const bool atom = s.x0 == s.x1;
      if ((atom && s.x0 < x) || (!atom && s.x1 <= x)) {
        closed += s.m;
        ++j;
      } else {
        break;
      }
    }
    double v = closed, jmp = 0.0;
    for (size_t t = j; t < segs.size() && segs[t].x0 <= x; ++t) {
      const Seg& s = segs[t];
      if (s.x0 == s.x1) {
        v += s.m;  // atom exactly at x (earlier atoms were closed above)
        jmp += s.m;
      } else if (s.x1 > s.x0) {
        v += s.m * (x - s.x0) / (s.x1 - s.x0);
      }
    }
    value[k] = v;
    jump[k] = jmp;
  }
}

std::vector<Piece> build_pieces(const std::vector<Seg>& a,
                                const std::vector<Seg>& b) {
  std::vector<double> xs;
  xs.reserve(2 * (a.size() + b.size()));
  for (const Seg& s : a) {
    xs.push_back(s.x0);
    xs.push_back(s.x1);
  }
  for (const Seg& s : b) {
    xs.push_back(s.x0);
    xs.push_back(s.x1);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<double> fa, ja, fb, jb;
  cdf_at_breakpoints(a, xs, fa, ja);
  cdf_at_breakpoints(b, xs, fb, jb);

  std::vector<Piece> pieces;
  auto emit = [&pieces](double gl, double gr, double len) {
    if (len <= 0.0) return;
    const double gbar = 0.5 * (gl + gr);
    int sign = 0;
    if (gbar > 1e-15) sign = 1;
    else if (gbar < -1e-15) sign = -1;
    pieces.push_back({len, gbar, sign});
  };
  for (size_t k = 0; k + 1 < xs.size(); ++k) {
    const double len = xs[k + 1] - xs[k];
    if (len <= 0.0) continue;
    const double gl = fa[k] - fb[k];                          // g(x_k^+)
    const double gr = (fa[k + 1] - ja[k + 1]) - (fb[k + 1] - jb[k + 1]);
    if (gl * gr < 0.0) {
      const double t = gl / (gl - gr);  // crossing fraction
      emit(gl, 0.0, len * t);
      emit(0.0, gr, len * (1.0 - t));
    } else if (gl != gr) {
      const double gm = 0.5 * (gl + gr);  // midpoint split
      emit(gl, gm, 0.5 * len);
      emit(gm, gr, 0.5 * len);
    } else {
      emit(gl, gr, len);
    }
  }
  return pieces;
}

// Can f' = -sign(g) be realized everywhere with |f| <= 1?  Propagates the
// reachable interval of f values left to right.
bool uncapped_attainable(const std::vector<Piece>& pieces) {
  double lo = -1.0, hi = 1.0;
  for (const Piece& p : pieces) {
    if (p.sign == 0) {
      lo = std::max(lo - p.len, -1.0);
      hi = std::min(hi + p.len, 1.0);
    } else {
      const double shift = (p.sign > 0) ? -p.len : p.len;
      lo = std::max(lo + shift, -1.0);
      hi = std::min(hi + shift, 1.0);
      if (lo > hi + 1e-15) return false;
    }
  }
  return true;
}

// Concave piecewise-linear value function on [-1, 1] for the capped dual DP.
using PL = std::vector<std::pair<double, double>>;  // (x ascending, value)

double pl_eval(const PL& v, double x) {
  if (x <= v.front().first) return v.front().second;
  if (x >= v.back().first) return v.back().second;
  size_t lo = 0, hi = v.size() - 1;
  while (hi - lo > 1) {
    const size_t mid = (lo + hi) / 2;
    if (v[mid].first <= x) lo = mid;
    else hi = mid;
  }
  const auto& [x0, y0] = v[lo];
  const auto& [x1, y1] = v[hi];
  if (x1 == x0) return std::max(y0, y1);
  const double t = (x - x0) / (x1 - x0);
  return y0 + t * (y1 - y0);
}

void pl_prune(PL& v) {
  PL out;
  out.reserve(v.size());
  for (const auto& pt : v) {
    while (out.size() >= 2) {
      const auto& a = out[out.size() - 2];
      const auto& b = out[out.size() - 1];
      const double dx1 = b.first - a.first, dx2 = pt.first - b.first;
      if (dx1 <= 0.0 || dx2 <= 0.0) {
        out.pop_back();
        continue;
      }
      const double s1 = (b.second - a.second) / dx1;
      const double s2 = (pt.second - b.second) / dx2;
      if (std::fabs(s1 - s2) <= 1e-14 * (1.0 + std::fabs(s1))) {
        out.pop_back();
        continue;
      }
      break;
    }
    if (!out.empty() && pt.first <= out.back().first) continue;
    out.push_back(pt);
  }
  v = std::move(out);
}

double bl_capped_dp(const std::vector<Piece>& pieces) {
  PL v = {{-1.0, 0.0}, {1.0, 0.0}};
  PL next;
  for (const Piece& p : pieces) {
    const double c = -p.gbar;
    // U(y) = V(y) - c y; boxmax over [y - len, y + len]; then + c y.
    PL u = v;
    for (auto& pt : u) pt.second -= c * pt.first;
    size_t imax = 0;
    for (size_t i = 1; i < u.size(); ++i)
      if (u[i].second > u[imax].second) imax = i;
    const double vmax = u[imax].second;
    size_t lo = imax, hi = imax;
    while (lo > 0 && u[lo - 1].second == vmax) --lo;
    while (hi + 1 < u.size() && u[hi + 1].second == vmax) ++hi;
    next.clear();
    for (size_t i = 0; i < lo; ++i)
      next.push_back({u[i].first - p.len, u[i].second});
    next.push_back({u[lo].first - p.len, vmax});
    next.push_back({u[hi].first + p.len, vmax});
    for (size_t i = hi + 1; i < u.size(); ++i)
      next.push_back({u[i].first + p.len, u[i].second});
    // clamp the domain back to [-1, 1]
    PL clipped;
    clipped.push_back({-1.0, pl_eval(next, -1.0)});
    for (const auto& pt : next)
      if (pt.first > -1.0 && pt.first < 1.0) clipped.push_back(pt);
    clipped.push_back({1.0, pl_eval(next, 1.0)});
    for (auto& pt : clipped) pt.second += c * pt.first;
    pl_prune(clipped);
    v = std::move(clipped);
  }
  double best = 0.0;
  for (const auto& pt : v) best = std::max(best, pt.second);
  return best;
}

double bl_line(const std::vector<Seg>& a, const std::vector<Seg>& b) {
  const auto pieces = build_pieces(a, b);
  double w1 = 0.0;
  for (const Piece& p : pieces) w1 += p.len * std::fabs(p.gbar);
  if (uncapped_attainable(pieces)) return w1;
  return bl_capped_dp(pieces);
}

double bl_impl(const Measure& mu, const Measure& nu) {
  require_same_domain(domain_of(mu), domain_of(nu), "bounded_lipschitz");
  const Domain& d = domain_of(mu);
  const auto a = to_segments(mu);
  const auto b = to_segments(nu);
  if (d.is_torus()) {
    // On a torus of period <= 4 every 1-Lipschitz function has oscillation
    // at most 2, so the cap never binds and BL equals circular W1.
    if (d.period() > 4.0)
      throw ValidationError("bounded_lipschitz: torus period > 4 not supported");
    return torus_quantile_cost_min(a, b, 1.0, d.period());
  }
  return bl_line(a, b);
}

} // namespace

double wasserstein_p(const Measure& mu, const Measure& nu, double p) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw ValidationError("wasserstein_p: p must lie in (1, inf)");
  return wasserstein_impl(mu, nu, p);
}

double wasserstein_1(const Measure& mu, const Measure& nu) {
  return wasserstein_impl(mu, nu, 1.0);
}

double bounded_lipschitz(const Measure& mu, const Measure& nu) {
  return bl_impl(mu, nu);
}

MetricKind metric_from_name(const std::string& name) {
  if (name == "bl") return MetricKind::BL;
  if (name == "w1") return MetricKind::W1;
  if (name == "w2") return MetricKind::W2;
  if (name == "wp") return MetricKind::Wp;
  throw ValidationError("unknown metric name: " + name);
}

std::string metric_name(MetricKind kind) {
  switch (kind) {
    case MetricKind::BL: return "bl";
    case MetricKind::W1: return "w1";
    case MetricKind::W2: return "w2";
    case MetricKind::Wp: return "wp";
  }
  return "?";
}

double eval_metric(MetricKind kind, const Measure& mu, const Measure& nu,
                   double p) {
  switch (kind) {
    case MetricKind::BL: return bounded_lipschitz(mu, nu);
    case MetricKind::W1: return wasserstein_1(mu, nu);
    case MetricKind::W2: return wasserstein_p(mu, nu, 2.0);
    case MetricKind::Wp: return wasserstein_p(mu, nu, p);
  }
  throw ValidationError("eval_metric: bad kind");
}

double min_over_translates(MetricKind kind, const Measure& mu,
                           const Measure& nu, double p) {
  const Domain& d = domain_of(mu);
  require_same_domain(d, domain_of(nu), "min_over_translates");
  if (!d.is_torus())
    throw ValidationError("min_over_translates: translation quotient is a torus operation");
  const auto a = to_segments(mu);
  const auto base = to_segments(nu);
  auto dist = [&](double theta) {
    theta = theta - std::floor(theta / d.period()) * d.period();
    const auto shifted = translate_segments(base, theta, d);
    if (kind == MetricKind::BL || kind == MetricKind::W1)
      return torus_quantile_cost_min(a, shifted, 1.0, d.period());
    const double pp = (kind == MetricKind::W2) ? 2.0 : p;
    return std::pow(
        std::max(torus_quantile_cost_min(a, shifted, pp, d.period()), 0.0),
        1.0 / pp);
  };
  const int kScan = 64;
  double best = dist(0.0), best_theta = 0.0;
  for (int k = 1; k < kScan; ++k) {
    const double th = d.period() * k / kScan;
    const double c = dist(th);
    if (c < best) {
      best = c;
      best_theta = th;
    }
  }
  auto [th, c] = golden_min(dist, best_theta - d.period() / kScan,
                            best_theta + d.period() / kScan, 1e-10);
  return std::min(best, c);
}

} // namespace wgf
