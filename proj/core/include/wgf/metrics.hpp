#pragma once

#include <string>

#include "wgf/measures.hpp"

namespace wgf {

/// p-Wasserstein distance, p in (1, inf). On an interval this is the exact
/// L^p distance of the two quantile functions (piecewise merge, no
/// sampling). On a torus it is the minimum over the cyclic mass shift of the
/// lifted-quantile cost, located by a 64-point coarse scan refined by
/// golden-section search to 1e-10 in the shift.
double wasserstein_p(const Measure& mu, const Measure& nu, double p);

/// 1-Wasserstein distance (same quantile engine with p = 1).
double wasserstein_1(const Measure& mu, const Measure& nu);

/// Bounded-Lipschitz (flat) distance:
///   sup { int f d(mu - nu) : |f| <= 1, Lip(f) <= 1 }.
/// On an interval the uncapped value int |F_mu - F_nu| dx is returned when a
/// feasibility sweep certifies it is attainable; otherwise the capped dual is
/// solved exactly by dynamic programming on the merged breakpoint set. On a
/// torus (period <= 4, where the cap cannot bind) it coincides with the
/// circular 1-Wasserstein distance.
double bounded_lipschitz(const Measure& mu, const Measure& nu);

enum class MetricKind { BL, W1, W2, Wp };

MetricKind metric_from_name(const std::string& name);
std::string metric_name(MetricKind kind);

double eval_metric(MetricKind kind, const Measure& mu, const Measure& nu,
                   double p = 2.0);

/// min over torus translations theta of metric(mu, nu shifted by theta).
double min_over_translates(MetricKind kind, const Measure& mu,
                           const Measure& nu, double p = 2.0);

} // namespace wgf
