// Closed-form success probabilities and yields for iterated concentration.
//
// With a = |α|², b = |β|² and m = 2^(n−1), round n of the recycling scheme
// succeeds with probability
//
//     P_n = 2 (a b)^m / (a^m + b^m)²,
//
// and the per-round yield (maximal pairs per initial source pair) follows the
// recursion
//
//     Y_n = (1/2^n) · P_n · Π_{j<n} (1 − P_j),
//
// since each round pairs survivors two at a time and only failures feed the
// next round. Y_1 and Y_2 of this recursion coincide with the commonly quoted
// printed series; from Y_3 on the printed series drops one (1 − P) factor and
// halves another, so both are computed and reported side by side.

#pragma once

#include <vector>

#include "qconc/qstate.hpp"

namespace qconc::analytics {

/// P_n as above. Requires n ≥ 1. Numerically stable for large n (evaluates
/// through the ratio min/max of the intensities, so deep rounds underflow to
/// 0 gracefully instead of dividing 0 by 0).
double p_success(int n, const PairSource& src);

struct YieldBreakdown {
  std::vector<double> terms;  // Y_1 … Y_n, each ≥ 0
  double total = 0.0;         // sum of terms, ≤ 1/2
};

/// Yield terms of the consistent recursion, up to n_max rounds.
YieldBreakdown yield_terms(int n_max, const PairSource& src);

/// The printed closed form of Y_2, evaluated verbatim:
/// ½ (1 − 2|αβ|²) |αβ|⁴ / (|α|⁴ + |β|⁴)². Kept as an independent regression
/// route against yield_terms.
double paper_yield_y2(const PairSource& src);

/// Term n of the printed yield series (verbatim, including its explicit Y_3
/// special case). Agrees with yield_terms for n ≤ 2 only.
double paper_yield_term(int n, const PairSource& src);

struct AnalyticsRow {
  double alpha = 0.0;
  int n = 0;
  double p_success = 0.0;
  double yield_total = 0.0;        // cumulative, recursion series
  double yield_paper_total = 0.0;  // cumulative, printed series
};

struct AnalyticsTable {
  std::vector<AnalyticsRow> rows;  // alpha ascending, n ascending
};

/// Uniform α grid over [0, 1/√2] with `alpha_steps` points, n = 1 … n_max.
/// Requires alpha_steps ≥ 2 and n_max ≥ 1.
AnalyticsTable fig3_grid(int alpha_steps, int n_max);

}  // namespace qconc::analytics
