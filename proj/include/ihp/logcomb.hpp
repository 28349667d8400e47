#pragma once

#include <cmath>
#include <limits>

namespace ihp {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double log_factorial(double m) { return std::lgamma(m + 1.0); }

// log of the falling factorial top * (top-1) * ... * (top-m+1) for real
// top and integer-valued m >= 0.  Stays accurate when top is far beyond
// 2^53: the loop path sums log1p(-r/top) terms, and for very long products
// an Euler-Maclaurin closed form replaces the loop.
inline double log_falling(double top, double m) {
  if (m <= 0) return 0.0;
  if (m > top) return kNegInf;
  const double lt = std::log(top);
  if (m <= 65536.0) {
    if (m < top * 1e-6) {
      // power sums of r/top truncate after two terms at this ratio
      const double s1 = 0.5 * m * (m - 1);
      const double s2 = (m - 1) * m * (2 * m - 1) / 6.0;
      return m * lt - s1 / top - s2 / (2.0 * top * top);
    }
    double corr = 0.0;
    for (double r = 1; r < m; ++r) corr += std::log1p(-r / top);
    return m * lt + corr;
  }
  // sum_{r=0}^{m-1} log1p(-r/top) via trapezoid + first-order correction;
  // the neglected terms are O(m/top^3), far below double resolution here.
  const double nmax = m - 1.0;
  const double lend = std::log1p(-nmax / top);
  const double integral = -(top - nmax) * lend - nmax;
  const double corr =
      integral + 0.5 * lend + (1.0 / top - 1.0 / (top - nmax)) / 12.0;
  return m * lt + corr;
}

// log C(top, m) for real top >= 0 and integer-valued real m.
// Exact-integer tops go through lgamma directly; astronomically large tops
// (beyond 2^52) use the falling-factorial form, which avoids the
// catastrophic cancellation of lgamma(top+1) - lgamma(top-m+1).
inline double log_binomial(double top, double m) {
  if (m < 0.0 || m > top || top < 0.0) return kNegInf;
  if (m == 0.0 || m == top) return 0.0;
  if (top <= 4.5e15) {
    return std::lgamma(top + 1.0) - std::lgamma(m + 1.0) -
           std::lgamma(top - m + 1.0);
  }
  return log_falling(top, m) - log_factorial(m);
}

// Streaming log-sum-exp accumulator.
class LogSum {
 public:
  void add(double logx) {
    if (logx == kNegInf) return;
    if (max_ == kNegInf) {
      max_ = logx;
      rel_ = 1.0;
      return;
    }
    if (logx <= max_) {
      rel_ += std::exp(logx - max_);
    } else {
      rel_ = rel_ * std::exp(max_ - logx) + 1.0;
      max_ = logx;
    }
  }

  double value() const { return max_ == kNegInf ? kNegInf : max_ + std::log(rel_); }
  bool empty() const { return max_ == kNegInf; }

 private:
  double max_ = kNegInf;
  double rel_ = 0.0;
};

// Wilson score interval for a binomial proportion at 95% confidence.
struct WilsonInterval {
  double lo, hi;
  double width() const { return hi - lo; }
};

inline WilsonInterval wilson95(double successes, double trials) {
  const double z = 1.959963984540054;
  if (trials <= 0) return {0.0, 1.0};
  const double p = successes / trials;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / trials;
  const double center = (p + z2 / (2 * trials)) / denom;
  const double half =
      z * std::sqrt(p * (1 - p) / trials + z2 / (4 * trials * trials)) / denom;
  return {center - half, center + half};
}

}  // namespace ihp
