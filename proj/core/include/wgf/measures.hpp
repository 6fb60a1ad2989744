#pragma once

#include <variant>
#include <vector>

#include "wgf/domain.hpp"

namespace wgf {

/// Cell-averaged probability density on a uniform mesh over the domain.
/// density[i] is the average over cell [left + i*h, left + (i+1)*h), h the
/// cell width, so sum(density) * h == 1.
struct GridMeasure {
  Domain domain = Domain::interval(0.0, 1.0);
  std::vector<double> density;
  double cell_width = 0.0;

  int n_cells() const { return static_cast<int>(density.size()); }
  double cell_center(int i) const {
    return domain.left() + (i + 0.5) * cell_width;
  }
  double cell_left(int i) const { return domain.left() + i * cell_width; }
  double mass() const;

  /// Checks non-negativity, cell geometry and mass normalization.
  void validate(double mass_tol = 1e-12) const;

  /// Builds a grid measure from raw cell values, rescaled to unit mass.
  static GridMeasure normalized(const Domain& domain,
                                std::vector<double> values);
};

/// Weighted atoms sum_i w_i delta_{x_i}; canonical form keeps positions
/// sorted ascending and merges coincident atoms.
struct ParticleMeasure {
  Domain domain = Domain::interval(0.0, 1.0);
  std::vector<double> positions;
  std::vector<double> weights;

  int size() const { return static_cast<int>(positions.size()); }
  double mass() const;
  void validate(double mass_tol = 1e-12) const;

  /// Sorts atoms and merges duplicates (weights summed); torus positions are
  /// wrapped into the chart first.
  static ParticleMeasure canonical(const Domain& domain,
                                   std::vector<double> positions,
                                   std::vector<double> weights);
};

using Measure = std::variant<GridMeasure, ParticleMeasure>;

const Domain& domain_of(const Measure& m);

struct Moments {
  double mean = 0.0;
  double second_moment = 0.0;
  double variance = 0.0;
};

/// Exact first and second moments. On a torus these use the chart
/// coordinates and are not translation invariant (non-canonical); they are
/// still useful for symmetry diagnostics.
Moments moments(const GridMeasure& m);
Moments moments(const ParticleMeasure& m);
Moments moments(const Measure& m);

/// Right-continuous CDF at x.
double cdf(const Measure& m, double x);

/// Generalized inverse CDF: inf { x : F(x) >= s } for s in [0, 1]; s = 0
/// maps to the left end of the support.
double quantile(const Measure& m, double s);

/// Mass-preserving binning of atoms into n_cells cells.
GridMeasure grid_from_particles(const ParticleMeasure& pm, int n_cells);

} // namespace wgf
