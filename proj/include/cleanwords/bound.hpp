#pragma once

#include <string>
#include <vector>

namespace cleanwords {

// Inputs of the worst-case bound on Pr(word wrong | engine output, check passed).
struct BoundParams {
  double epsilon = 0.0;  // per-character corruption bound
  double delta = 1.0;    // lower bound on consistency-check success
  long d2 = 0;           // dictionary words at modified Hamming distance 2
  long e1 = 0;           // dictionary words at modified edit distance 1, other length
  double p1 = 0.0;       // non-dictionary mass ratio at distance 1
  double r_d = 1.0;
  double r_e = 1.0;
  double r_n = 1.0;

  // Throws UsageError on out-of-range values.
  void validate() const;
};

struct RegimeCheck {
  bool ok = true;
  std::vector<std::string> violations;
};

struct BoundBreakdown {
  double hamming_term = 0.0;  // 8 D2 eps^2 / delta^2
  double edit_term = 0.0;     // 8 E1 eps^2 / delta^2
  double nondict_term = 0.0;  // 4 p1 eps / delta^2
  double total = 0.0;
  bool regime_ok = true;
  std::vector<std::string> violations;
};

BoundBreakdown evaluate_bound(const BoundParams& p);

// Same closed form, taking the aggregate coefficients directly:
// total = (hamming_edit_coeff * eps^2 + nondict_coeff * eps) / delta_sq,
// where hamming_edit_coeff = 8 (D2 + E1) and nondict_coeff = 4 p1.
double evaluate_bound_aggregate(double epsilon, double hamming_edit_coeff, double nondict_coeff, double delta_sq);

// The growth-rate assumptions plus the constant ranges under which the total
// stays below 2e-3.
RegimeCheck regime_check(const BoundParams& p);

// Partial sum of D2 * r^(i-2) * (2 eps / delta)^i for i = 2..last, the series
// that 8 D2 eps^2 / delta^2 majorizes.
double hamming_series(long d2, double r, double epsilon, double delta, int last);

}  // namespace cleanwords
