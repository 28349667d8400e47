#pragma once

#include <bit>
#include <cstdint>
#include <cstddef>
#include <vector>

#include "ihp/common.hpp"
#include "ihp/logcomb.hpp"

namespace ihp {

// Dense spectra get exact but exponential storage; this cap keeps requests
// honest.  Overridable per call for machines with more memory.
inline constexpr int kDenseCap = 22;

// A point of {0,1}^n encoded as an integer index in [0, 2^n).
struct BitVector {
  int n = 0;
  std::uint32_t value = 0;

  int weight() const { return std::popcount(value); }
};

// Dense real-valued function on {0,1}^n, indexed by point.
struct CubeFunction {
  int n = 0;
  std::vector<double> values;

  CubeFunction() = default;
  CubeFunction(int n_, double fill = 0.0) : n(n_) {
    if (n_ < 0 || n_ > 26) throw CapacityError("cube dimension out of range");
    values.assign(std::size_t{1} << n_, fill);
  }

  double& operator[](std::uint32_t x) { return values[x]; }
  double operator[](std::uint32_t x) const { return values[x]; }
  std::size_t size() const { return values.size(); }
};

enum class Norm { Hat, Tilde };

// Fourier table of a CubeFunction.  Hat normalization carries 2^{-n} in the
// forward transform; tilde rescales an indicator's table by 2^n/|A| so every
// coefficient is an average of +-1 signs over the set.
struct Spectrum {
  int n = 0;
  std::vector<double> coeffs;
  Norm norm = Norm::Hat;
  double set_size = 0.0;  // |A|; meaningful only for tilde spectra

  double operator[](std::uint32_t v) const { return coeffs[v]; }
  std::size_t size() const { return coeffs.size(); }
};

namespace detail {

// In-place Walsh-Hadamard butterfly, no normalization.
inline void wht_butterfly(std::vector<double>& a) {
  const std::size_t sz = a.size();
  for (std::size_t len = 1; len < sz; len <<= 1) {
    for (std::size_t i = 0; i < sz; i += len << 1) {
      for (std::size_t j = i; j < i + len; ++j) {
        const double u = a[j], v = a[j + len];
        a[j] = u + v;
        a[j + len] = u - v;
      }
    }
  }
}

}  // namespace detail

// hat(v) = 2^{-n} sum_x f(x) (-1)^{x.v}
inline Spectrum wht_forward(const CubeFunction& f, int dense_cap = kDenseCap) {
  if (f.n > dense_cap)
    throw CapacityError("wht_forward: dimension exceeds dense cap");
  Spectrum s;
  s.n = f.n;
  s.coeffs = f.values;
  detail::wht_butterfly(s.coeffs);
  const double scale = 1.0 / static_cast<double>(std::size_t{1} << f.n);
  for (double& c : s.coeffs) c *= scale;
  s.norm = Norm::Hat;
  return s;
}

// p(x) = sum_v hat(v) (-1)^{x.v}
inline CubeFunction wht_inverse(const Spectrum& s, int dense_cap = kDenseCap) {
  if (s.norm != Norm::Hat)
    throw NormalizationError("wht_inverse: expected hat normalization");
  if (s.n > dense_cap)
    throw CapacityError("wht_inverse: dimension exceeds dense cap");
  CubeFunction f;
  f.n = s.n;
  f.values = s.coeffs;
  detail::wht_butterfly(f.values);
  return f;
}

// Direct evaluation of the convolution identity:
//   result(v) = sum_x p_hat(x) q_hat(x ^ v).
// Deliberately the O(4^n) sum so it stays an independent route from
// wht_forward(pointwise product).
inline Spectrum convolve_spectra(const Spectrum& p, const Spectrum& q) {
  if (p.n != q.n)
    throw std::invalid_argument("convolve_spectra: dimension mismatch");
  if (p.norm != Norm::Hat || q.norm != Norm::Hat)
    throw NormalizationError("convolve_spectra: expected hat normalization");
  Spectrum r;
  r.n = p.n;
  r.norm = Norm::Hat;
  const std::uint32_t sz = static_cast<std::uint32_t>(p.size());
  r.coeffs.assign(sz, 0.0);
  for (std::uint32_t v = 0; v < sz; ++v) {
    double acc = 0.0;
    for (std::uint32_t x = 0; x < sz; ++x) acc += p.coeffs[x] * q.coeffs[x ^ v];
    r.coeffs[v] = acc;
  }
  return r;
}

// tilde(v) = (2^n / |A|) hat(v) = E_{x in A} [(-1)^{x.v}]
inline Spectrum tilde_normalize(const Spectrum& s, double set_size) {
  if (s.norm != Norm::Hat)
    throw NormalizationError("tilde_normalize: expected hat input");
  if (set_size <= 0.0)
    throw std::invalid_argument("tilde_normalize: empty set has no tilde spectrum");
  Spectrum t;
  t.n = s.n;
  t.norm = Norm::Tilde;
  t.set_size = set_size;
  const double scale = static_cast<double>(std::size_t{1} << s.n) / set_size;
  t.coeffs.resize(s.size());
  for (std::size_t v = 0; v < s.size(); ++v) t.coeffs[v] = s.coeffs[v] * scale;
  return t;
}

// sum of |coeff| over coefficients of Hamming weight 2*ell
inline double level_l1(const Spectrum& s, int ell) {
  double acc = 0.0;
  const int w = 2 * ell;
  for (std::uint32_t v = 0; v < s.size(); ++v)
    if (std::popcount(v) == w) acc += std::fabs(s.coeffs[v]);
  return acc;
}

// sum of coeff^2 over coefficients of Hamming weight 2*ell
inline double level_l2sq(const Spectrum& s, int ell) {
  double acc = 0.0;
  const int w = 2 * ell;
  for (std::uint32_t v = 0; v < s.size(); ++v)
    if (std::popcount(v) == w) acc += s.coeffs[v] * s.coeffs[v];
  return acc;
}

// l1 mass sitting at odd Hamming weights; zero for sets of the form
// {x : Mx in A_reduced}.  Diagnostic, never part of check_bounded.
inline double odd_level_mass(const Spectrum& s) {
  double acc = 0.0;
  for (std::uint32_t v = 0; v < s.size(); ++v)
    if (std::popcount(v) & 1) acc += std::fabs(s.coeffs[v]);
  return acc;
}

// log of the two-branch level bound:
//   1                       ell = 0
//   (C sqrt(s* n)/ell)^ell  1 <= ell <= s*
//   (C^2 n / ell)^{ell/2}   ell > s*
inline double log_level_bound(double c, double s_star, double n, double ell) {
  if (ell <= 0) return 0.0;
  if (ell <= s_star)
    return ell * (std::log(c) + 0.5 * (std::log(s_star) + std::log(n)) -
                  std::log(ell));
  return 0.5 * ell * (2.0 * std::log(c) + std::log(n) - std::log(ell));
}

struct LevelRow {
  int ell = 0;
  double l1 = 0.0;        // measured l1 mass at weight 2*ell
  double log_l1 = kNegInf;
  double log_bound = 0.0;
  bool pass = true;
};

struct BoundednessReport {
  double c = 0.0;
  int s_star = 0;
  std::vector<LevelRow> per_level;
  bool overall = true;
};

// Checks the level-sum bounds in the log domain: the first branch covers
// every ell in [1, s*], the second covers s* < ell < n/C^2.  Comparison
// slack 1e-9 absorbs rounding of the log-gamma arithmetic.
inline BoundednessReport check_bounded(const Spectrum& s, double c, int s_star) {
  if (s.norm != Norm::Tilde)
    throw NormalizationError("check_bounded: expected tilde normalization");
  if (c <= 0.0) throw std::invalid_argument("check_bounded: C must be positive");
  if (s_star < 1) throw std::invalid_argument("check_bounded: s* must be >= 1");
  BoundednessReport rep;
  rep.c = c;
  rep.s_star = s_star;
  const double n = s.n;
  for (int ell = 1; 2 * ell <= s.n; ++ell) {
    if (ell > s_star && ell >= n / (c * c)) break;
    LevelRow row;
    row.ell = ell;
    row.l1 = level_l1(s, ell);
    row.log_l1 = row.l1 > 0.0 ? std::log(row.l1) : kNegInf;
    row.log_bound = log_level_bound(c, s_star, n, ell);
    row.pass = row.log_l1 <= row.log_bound + 1e-9;
    rep.overall = rep.overall && row.pass;
    rep.per_level.push_back(row);
  }
  return rep;
}

struct KklResult {
  double l1_lhs = 0.0, l1_rhs = 0.0;
  double l2_lhs = 0.0, l2_rhs = 0.0;
  bool pass_l1 = false, pass_l2 = false;
  bool pass() const { return pass_l1 && pass_l2; }
};

// Level bound around an arbitrary center y for a dense set A in {0,1}^m:
//   sum_{|x^y|=q} |f~(x)|   <= sqrt(C(m,q) (4d/q)^q)
//   sum_{|x^y|=q} f~(x)^2   <= (4d/q)^q
// Requires |A| >= 2^{m-d} and 1 <= q <= d.
inline KklResult kkl_level_check(const std::vector<std::uint32_t>& a_set, int m,
                                 std::uint32_t y, int q, int d) {
  if (m > kDenseCap) throw CapacityError("kkl_level_check: m exceeds dense cap");
  if (q < 1 || q > d)
    throw std::invalid_argument("kkl_level_check: need 1 <= q <= d");
  const double size = static_cast<double>(a_set.size());
  const double full = static_cast<double>(std::size_t{1} << m);
  if (size < full * std::exp2(-static_cast<double>(d)))
    throw PreconditionError("kkl_level_check: density below 2^{-d}");

  CubeFunction f(m);
  for (std::uint32_t x : a_set) f[x] = 1.0;
  Spectrum tld = tilde_normalize(wht_forward(f), size);

  KklResult r;
  for (std::uint32_t x = 0; x < tld.size(); ++x) {
    if (std::popcount(x ^ y) == q) {
      r.l1_lhs += std::fabs(tld.coeffs[x]);
      r.l2_lhs += tld.coeffs[x] * tld.coeffs[x];
    }
  }
  const double log_pow = q * (std::log(4.0 * d) - std::log(q));
  r.l2_rhs = std::exp(log_pow);
  r.l1_rhs = std::exp(0.5 * (log_binomial(m, q) + log_pow));
  r.pass_l1 = r.l1_lhs <= r.l1_rhs * (1.0 + 1e-12) + 1e-12;
  r.pass_l2 = r.l2_lhs <= r.l2_rhs * (1.0 + 1e-12) + 1e-12;
  return r;
}

}  // namespace ihp
