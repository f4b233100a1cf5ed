#include "cleanwords/bound.hpp"

#include <cmath>

#include "cleanwords/error.hpp"

namespace cleanwords {

void BoundParams::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(epsilon) || epsilon < 0.0 || epsilon >= 1.0) throw UsageError("epsilon must lie in [0, 1)");
  if (!finite(delta) || delta <= 0.0 || delta > 1.0) throw UsageError("delta must lie in (0, 1]");
  if (d2 < 0 || e1 < 0) throw UsageError("D2 and E1 must be non-negative");
  if (!finite(p1) || p1 < 0.0) throw UsageError("p1 must be non-negative");
  for (double r : {r_d, r_e, r_n}) {
    if (!finite(r) || r <= 0.0) throw UsageError("growth rates must be positive");
  }
}

double evaluate_bound_aggregate(double epsilon, double hamming_edit_coeff, double nondict_coeff, double delta_sq) {
  if (!(delta_sq > 0.0)) throw UsageError("delta^2 must be positive");
  return (hamming_edit_coeff * epsilon * epsilon + nondict_coeff * epsilon) / delta_sq;
}

RegimeCheck regime_check(const BoundParams& p) {
  p.validate();
  RegimeCheck out;
  auto require = [&](bool holds, const char* violation) {
    if (!holds) {
      out.ok = false;
      out.violations.emplace_back(violation);
    }
  };
  const double step = 2.0 * p.epsilon / p.delta;
  require(p.r_d * step < 0.5, "r_D*2eps/delta >= 1/2");
  require(p.r_e * step < 0.5, "r_E*2eps/delta >= 1/2");
  require(p.r_n * step < 0.5, "r_N*2eps/delta >= 1/2");
  require(p.epsilon < 1e-3, "epsilon >= 1e-3");
  require(8.0 * static_cast<double>(p.d2 + p.e1) < 1e2, "8(D2+E1) >= 1e2");
  require(4.0 * p.p1 < 1e-1, "4*p1 >= 1e-1");
  require(p.delta * p.delta > 1e-1, "delta^2 <= 1e-1");
  return out;
}

BoundBreakdown evaluate_bound(const BoundParams& p) {
  p.validate();
  BoundBreakdown b;
  const double eps2 = p.epsilon * p.epsilon;
  const double delta2 = p.delta * p.delta;
  b.hamming_term = 8.0 * static_cast<double>(p.d2) * eps2 / delta2;
  b.edit_term = 8.0 * static_cast<double>(p.e1) * eps2 / delta2;
  b.nondict_term = 4.0 * p.p1 * p.epsilon / delta2;
  b.total = b.hamming_term + b.edit_term + b.nondict_term;
  auto regime = regime_check(p);
  b.regime_ok = regime.ok;
  b.violations = std::move(regime.violations);
  return b;
}

double hamming_series(long d2, double r, double epsilon, double delta, int last) {
  const double step = 2.0 * epsilon / delta;
  double sum = 0.0;
  for (int i = 2; i <= last; ++i) sum += static_cast<double>(d2) * std::pow(r, i - 2) * std::pow(step, i);
  return sum;
}

}  // namespace cleanwords
