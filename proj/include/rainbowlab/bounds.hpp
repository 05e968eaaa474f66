#pragma once

// Closed-form thresholds for the arithmetic progression f_i = (i-1) n^{k-1} + c.
// Every "log" is natural except where a base-2 logarithm is explicit (log2).

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace rainbowlab {

using BigInt = boost::multiprecision::cpp_int;

/// C(n, k) over the integers; zero when n < k or n < 0.
inline BigInt binomial(long long n, long long k) {
  if (k < 0 || n < 0 || n < k) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (long long i = 1; i <= k; ++i) {
    r *= (n - k + i);
    r /= i;
  }
  return r;
}

/// Erdős matching threshold max(C(sk-1, k), C(n,k) - C(n-s+1, k)).
inline BigInt t_bound(long long n, long long s, long long k) {
  const BigInt a = binomial(s * k - 1, k);
  const BigInt b = binomial(n, k) - binomial(n - s + 1, k);
  return a > b ? a : b;
}

struct BoundValue {
  double value = 0;
  bool hypothesis = false;  // the bound's assumption on n holds
  std::string branch;       // which argument attained the inner max(), when there is one
};

struct BoundReport {
  long long n = 0, s = 0, k = 0;
  BigInt t_bound;
  bool t_hypothesis = false;  // n >= ks
  BoundValue spread;          // 4 s^2 n^{k-2} + 2^15 s^3 log2(ks)^3 n^{k-3}
  BoundValue shifting;        // n^{k-1} + max(k^2 s n^{k-3/2} sqrt(8 log 2ks), 8k n^{k-1} log 2ks)
  BoundValue combined;        // n^{k-1} + max(14 s n^{k-3/2} sqrt(log 2ks), 8k n^{k-1} log 2ks) + 2^15 ...
  double u = 0;               // s sqrt(log(ks) / n)
  double spread_radius = 0;   // 2^5 s log2(sk)
  double s_exponent = 0;      // log s / log n
  std::string regime;
  std::string best_upper;
  std::string best_lower;
  std::string log_convention = "log = natural logarithm; log2 = base-2 logarithm";
};

inline BoundReport threshold_report(long long n, long long s, long long k) {
  BoundReport r;
  r.n = n;
  r.s = s;
  r.k = k;
  r.t_bound = t_bound(n, s, k);
  r.t_hypothesis = n >= k * s;

  const double N = static_cast<double>(n), S = static_cast<double>(s), K = static_cast<double>(k);
  const double log2ks = std::log2(K * S);
  const double ln2ks = std::log(2 * K * S);
  const double cube = std::pow(2.0, 15) * S * S * S * log2ks * log2ks * log2ks * std::pow(N, K - 3);
  r.spread_radius = 32 * S * log2ks;

  r.spread.value = 4 * S * S * std::pow(N, K - 2) + cube;
  r.spread.hypothesis = N > r.spread_radius;

  {
    const double sq = K * K * S * std::pow(N, K - 1.5) * std::sqrt(8 * ln2ks);
    const double lg = 8 * K * std::pow(N, K - 1) * ln2ks;
    r.shifting.value = std::pow(N, K - 1) + std::max(sq, lg);
    r.shifting.branch = sq >= lg ? "sqrt" : "log";
    r.shifting.hypothesis = n > s;
  }
  {
    const double sq = 14 * S * std::pow(N, K - 1.5) * std::sqrt(ln2ks);
    const double lg = 8 * K * std::pow(N, K - 1) * ln2ks;
    r.combined.value = std::pow(N, K - 1) + std::max(sq, lg) + cube;
    r.combined.branch = sq >= lg ? "sqrt" : "log";
    r.combined.hypothesis = N > std::max(r.spread_radius, S);
  }
  r.u = S * std::sqrt(std::log(K * S) / N);

  if (n <= 1) {
    r.regime = "degenerate (n <= 1)";
    r.s_exponent = std::nan("");
    return r;
  }
  r.s_exponent = std::log(S) / std::log(N);
  // Row boundaries compared exactly: s < n^(1/2) iff s^2 < n, s < n^(3/4) iff s^4 < n^3.
  const BigInt bs = s, bn = n;
  if (s >= n) {
    r.regime = "s >= n (outside the table)";
  } else if (bs * bs < bn) {
    r.regime = "s << n^(1/2)";
    r.best_upper = "O_k(s^2 n^(k-2)) [c_thm12]";
    r.best_lower = "Omega_k(s^2 n^(k-2))";
  } else if (bs * bs * bs * bs < bn * bn * bn) {
    r.regime = "n^(1/2) << s << n^(3/4)";
    r.best_upper = "O_k(s n^(k-3/2) sqrt(log(2ks))) [c_thm13 or c_thm14]";
    r.best_lower = "Omega_k(n^(k-1))";
  } else {
    r.regime = "n^(3/4) << s << n";
    r.best_upper = "O_k(s n^(k-3/2) sqrt(log(2ks))) [c_thm13]";
    r.best_lower = "Omega_k(n^(k-1))";
  }
  return r;
}

}  // namespace rainbowlab
