#include "qconc/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qconc::analytics {

namespace {

// 2 (a b)^m / (a^m + b^m)^2 evaluated as 2 w^m / (1 + w^m)^2 with
// w = min(a,b)/max(a,b), m = 2^(n-1).
double p_success_intensities(int n, double a, double b) {
  if (a <= 0.0 || b <= 0.0) return 0.0;
  const double w = std::min(a, b) / std::max(a, b);
  const double m = std::ldexp(1.0, n - 1);  // 2^(n-1)
  const double wm = std::pow(w, m);
  const double denom = 1.0 + wm;
  return 2.0 * wm / (denom * denom);
}

}  // namespace

double p_success(int n, const PairSource& src) {
  if (n < 1) throw std::invalid_argument("p_success: iteration number must be >= 1");
  return p_success_intensities(n, std::norm(src.alpha()), std::norm(src.beta()));
}

YieldBreakdown yield_terms(int n_max, const PairSource& src) {
  if (n_max < 1) throw std::invalid_argument("yield_terms: n_max must be >= 1");
  YieldBreakdown out;
  out.terms.reserve(static_cast<std::size_t>(n_max));
  double survivors = 1.0;  // Π_{j<n} (1 − P_j)
  double half_pow = 1.0;   // 1/2^n
  for (int n = 1; n <= n_max; ++n) {
    const double p = p_success(n, src);
    half_pow *= 0.5;
    out.terms.push_back(half_pow * p * survivors);
    out.total += out.terms.back();
    survivors *= 1.0 - p;
  }
  return out;
}

double paper_yield_y2(const PairSource& src) {
  const double a = std::norm(src.alpha());
  const double b = std::norm(src.beta());
  const double ab = a * b;  // |αβ|²
  const double denom = a * a + b * b;
  if (denom == 0.0) return 0.0;
  return 0.5 * (1.0 - 2.0 * ab) * (ab * ab) / (denom * denom);
}

double paper_yield_term(int n, const PairSource& src) {
  if (n < 1) throw std::invalid_argument("paper_yield_term: n must be >= 1");
  const double a = std::norm(src.alpha());
  const double b = std::norm(src.beta());
  const double ab = a * b;
  if (ab == 0.0) return 0.0;
  if (n == 1) return ab;
  if (n == 2) return paper_yield_y2(src);
  if (n == 3) {
    // Printed special case: the bracket carries half of P_2.
    const double d2 = a * a + b * b;
    const double d4 = std::pow(a, 4) + std::pow(b, 4);
    return 0.25 * (1.0 - 2.0 * ab) * (1.0 - (ab * ab) / (d2 * d2)) *
           std::pow(ab, 4) / (d4 * d4);
  }
  // Printed general form: (1/2^(n-1)) (1 − 2|αβ|²) Π_{j=3}^{n-1} (1 − P_{j-1})
  // · |αβ|^(2^n) / (|α|^(2^n) + |β|^(2^n))².
  double product = 1.0;
  for (int j = 3; j <= n - 1; ++j) product *= 1.0 - p_success(j - 1, src);
  return std::ldexp(1.0, -(n - 1)) * (1.0 - 2.0 * ab) * product * 0.5 * p_success(n, src);
}

AnalyticsTable fig3_grid(int alpha_steps, int n_max) {
  if (alpha_steps < 2 || n_max < 1) throw std::invalid_argument("fig3_grid: degenerate grid");
  AnalyticsTable table;
  table.rows.reserve(static_cast<std::size_t>(alpha_steps) * static_cast<std::size_t>(n_max));
  for (int i = 0; i < alpha_steps; ++i) {
    const double alpha =
        kInvSqrt2 * (static_cast<double>(i) / static_cast<double>(alpha_steps - 1));
    const PairSource src = PairSource::from_alpha(alpha);
    const YieldBreakdown yield = yield_terms(n_max, src);
    double cumulative = 0.0;
    double paper_cumulative = 0.0;
    for (int n = 1; n <= n_max; ++n) {
      cumulative += yield.terms[static_cast<std::size_t>(n - 1)];
      paper_cumulative += paper_yield_term(n, src);
      table.rows.push_back({alpha, n, p_success(n, src), cumulative, paper_cumulative});
    }
  }
  return table;
}

}  // namespace qconc::analytics
