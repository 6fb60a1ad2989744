#include "wgf/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wgf/errors.hpp"
#include "wgf/numerics.hpp"

namespace wgf {

double GridMeasure::mass() const {
  double s = 0.0;
  for (double v : density) s += v;
  return s * cell_width;
}

void GridMeasure::validate(double mass_tol) const {
  if (density.empty()) throw ValidationError("GridMeasure: no cells");
  const double h = domain.length() / static_cast<double>(density.size());
  if (std::fabs(h - cell_width) > 1e-12 * std::max(1.0, h))
    throw ValidationError("GridMeasure: cell_width inconsistent with domain");
  for (double v : density)
    if (!(v >= 0.0)) throw ValidationError("GridMeasure: negative density cell");
  if (std::fabs(mass() - 1.0) > mass_tol)
    throw ValidationError("GridMeasure: mass " + format_full(mass()) +
                          " deviates from 1 beyond tolerance");
}

GridMeasure GridMeasure::normalized(const Domain& domain,
                                    std::vector<double> values) {
  if (values.empty()) throw ValidationError("GridMeasure: no cells");
  GridMeasure g;
  g.domain = domain;
  g.cell_width = domain.length() / static_cast<double>(values.size());
  double m = 0.0;
  for (double v : values) {
    if (!(v >= 0.0)) throw ValidationError("GridMeasure: negative cell value");
    m += v;
  }
  m *= g.cell_width;
  if (!(m > 0.0)) throw ValidationError("GridMeasure: zero total mass");
  for (double& v : values) v /= m;
  g.density = std::move(values);
  return g;
}

double ParticleMeasure::mass() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

void ParticleMeasure::validate(double mass_tol) const {
  if (positions.size() != weights.size() || positions.empty())
    throw ValidationError("ParticleMeasure: positions/weights size mismatch");
  for (size_t i = 0; i < positions.size(); ++i) {
    if (!(weights[i] > 0.0))
      throw ValidationError("ParticleMeasure: weights must be positive");
    if (i > 0 && !(positions[i] >= positions[i - 1]))
      throw ValidationError("ParticleMeasure: positions must be sorted");
    if (!domain.is_torus() &&
        (positions[i] < domain.left() || positions[i] > domain.right()))
      throw ValidationError("ParticleMeasure: atom outside interval domain");
  }
  if (std::fabs(mass() - 1.0) > mass_tol)
    throw ValidationError("ParticleMeasure: mass deviates from 1");
}

ParticleMeasure ParticleMeasure::canonical(const Domain& domain,
                                           std::vector<double> positions,
                                           std::vector<double> weights) {
  if (positions.size() != weights.size() || positions.empty())
    throw ValidationError("ParticleMeasure: positions/weights size mismatch");
  if (domain.is_torus())
    for (double& x : positions) x = domain.wrap(x);
  std::vector<size_t> idx(positions.size());
  std::iota(idx.begin(), idx.end(), size_t{0});
  std::sort(idx.begin(), idx.end(),
            [&](size_t a, size_t b) { return positions[a] < positions[b]; });
  ParticleMeasure pm;
  pm.domain = domain;
  for (size_t k : idx) {
    if (!pm.positions.empty() && positions[k] == pm.positions.back()) {
      pm.weights.back() += weights[k];  // merge coincident atoms
    } else {
      pm.positions.push_back(positions[k]);
      pm.weights.push_back(weights[k]);
    }
  }
  pm.validate(1e-9);
  return pm;
}

const Domain& domain_of(const Measure& m) {
  return std::visit([](const auto& v) -> const Domain& { return v.domain; }, m);
}

Moments moments(const GridMeasure& m) {
  Moments out;
  const double h = m.cell_width;
  double m1 = 0.0, m2 = 0.0;
  for (int i = 0; i < m.n_cells(); ++i) {
    const double x = m.cell_center(i);
    const double w = m.density[i] * h;
    m1 += w * x;
    m2 += w * (x * x + h * h / 12.0);  // exact integral of x^2 over the cell
  }
  out.mean = m1;
  out.second_moment = m2;
  out.variance = m2 - m1 * m1;
  return out;
}

Moments moments(const ParticleMeasure& m) {
  Moments out;
  double m1 = 0.0, m2 = 0.0;
  for (int i = 0; i < m.size(); ++i) {
    m1 += m.weights[i] * m.positions[i];
    m2 += m.weights[i] * m.positions[i] * m.positions[i];
  }
  out.mean = m1;
  out.second_moment = m2;
  out.variance = m2 - m1 * m1;
  return out;
}

Moments moments(const Measure& m) {
  return std::visit([](const auto& v) { return moments(v); }, m);
}

double cdf(const Measure& m, double x) {
  if (const auto* g = std::get_if<GridMeasure>(&m)) {
    if (x < g->domain.left()) return 0.0;
    if (x >= g->domain.right()) return 1.0;
    double acc = 0.0;
    for (int i = 0; i < g->n_cells(); ++i) {
      const double xr = g->cell_left(i) + g->cell_width;
      if (x < xr) {
        acc += g->density[i] * (x - g->cell_left(i));
        return std::min(acc, 1.0);
      }
      acc += g->density[i] * g->cell_width;
    }
    return std::min(acc, 1.0);
  }
  const auto& p = std::get<ParticleMeasure>(m);
  double acc = 0.0;
  for (int i = 0; i < p.size() && p.positions[i] <= x; ++i) acc += p.weights[i];
  return std::min(acc, 1.0);
}

double quantile(const Measure& m, double s) {
  if (!(s >= 0.0 && s <= 1.0))
    throw ValidationError("quantile: s outside [0, 1]");
  if (const auto* g = std::get_if<GridMeasure>(&m)) {
    const double total = g->mass();
    const double target = s * total;
    double acc = 0.0;
    int first_occupied = -1, last_occupied = -1;
    for (int i = 0; i < g->n_cells(); ++i) {
      if (g->density[i] > 0.0) {
        if (first_occupied < 0) first_occupied = i;
        last_occupied = i;
      }
    }
    if (first_occupied < 0) throw ValidationError("quantile: empty measure");
    if (s == 0.0) return g->cell_left(first_occupied);
    for (int i = 0; i < g->n_cells(); ++i) {
      const double cm = g->density[i] * g->cell_width;
      if (acc + cm >= target && g->density[i] > 0.0) {
        return g->cell_left(i) + (target - acc) / g->density[i];
      }
      acc += cm;
    }
    return g->cell_left(last_occupied) + g->cell_width;
  }
  const auto& p = std::get<ParticleMeasure>(m);
  if (s == 0.0) return p.positions.front();
  const double target = s * p.mass();
  double acc = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    acc += p.weights[i];
    if (acc >= target) return p.positions[i];
  }
  return p.positions.back();
}

GridMeasure grid_from_particles(const ParticleMeasure& pm, int n_cells) {
  if (n_cells <= 0) throw ValidationError("grid_from_particles: n_cells must be positive");
  const Domain& d = pm.domain;
  const double h = d.length() / n_cells;
  std::vector<double> dens(static_cast<size_t>(n_cells), 0.0);
  for (int i = 0; i < pm.size(); ++i) {
    double x = d.is_torus() ? d.wrap(pm.positions[i]) : pm.positions[i];
    int idx = static_cast<int>(std::floor((x - d.left()) / h));
    idx = std::clamp(idx, 0, n_cells - 1);
    dens[static_cast<size_t>(idx)] += pm.weights[i] / h;
  }
  GridMeasure g;
  g.domain = d;
  g.cell_width = h;
  g.density = std::move(dens);
  return g;
}

} // namespace wgf
