#pragma once

// Uniform random perfect matchings of T_{n,k} and the concentration of
// |G ∩ M| around |G| / n^{k-1}. All logarithms are natural.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "rainbowlab/bounds.hpp"
#include "rainbowlab/error.hpp"
#include "rainbowlab/family.hpp"
#include "rainbowlab/matching.hpp"
#include "rainbowlab/rng.hpp"

namespace rainbowlab {

/// First coordinate fixed to the identity, k-1 independent uniform shuffles.
inline PerfectMatching sample_matching(const Universe& u, CounterRng& rng) {
  std::vector<std::vector<int>> perms(static_cast<std::size_t>(u.k() - 1));
  for (auto& p : perms) {
    p.resize(static_cast<std::size_t>(u.n()));
    std::iota(p.begin(), p.end(), 1);
    shuffle(std::span<int>(p), rng);
  }
  return PerfectMatching(u, std::move(perms));
}

/// (n!)^{k-1}.
inline BigInt matching_count(int n, int k) {
  if (n < 0 || k < 1) throw InvalidInput("matching_count: need n >= 0, k >= 1");
  BigInt fact = 1;
  for (int i = 2; i <= n; ++i) fact *= i;
  BigInt out = 1;
  for (int j = 1; j < k; ++j) out *= fact;
  return out;
}

/// Index of a matching in [0, (n!)^{k-1}): Lehmer ranks of the permutations,
/// combined with the first permutation most significant.
inline std::uint64_t matching_rank(const PerfectMatching& m) {
  const auto n = static_cast<std::size_t>(m.universe().n());
  std::uint64_t fact = 1;
  for (std::size_t i = 2; i <= n; ++i) fact *= i;
  std::uint64_t rank = 0;
  for (const auto& p : m.perms()) {
    std::uint64_t r = 0;
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t smaller = 0;
      for (std::size_t j = i + 1; j < n; ++j)
        if (p[j] < p[i]) ++smaller;
      r = r * (n - i) + smaller;
    }
    rank = rank * fact + r;
  }
  return rank;
}

inline std::uint64_t intersect_count(const PerfectMatching& m, const Family& g) {
  require_same(m.universe(), g.universe());
  std::uint64_t c = 0;
  for (int i = 1; i <= m.universe().n(); ++i)
    if (g.contains(m.member_code(i))) ++c;
  return c;
}

inline std::uint64_t intersect_count(const PerfectMatching& m, const TupleMultiset& g) {
  require_same(m.universe(), g.universe());
  std::uint64_t c = 0;
  for (int i = 1; i <= m.universe().n(); ++i) c += g.multiplicity(m.member_code(i));
  return c;
}

/// 2 exp(-λ² / (αn/2 + 2λ)).
inline double bound_thm23(double alpha, double n, double lambda) {
  if (!(lambda > 0)) throw InvalidInput("concentration bound: lambda must be > 0");
  if (!(alpha >= 0 && alpha <= 1)) throw InvalidInput("concentration bound: alpha must lie in [0,1]");
  return 2 * std::exp(-lambda * lambda / (alpha * n / 2 + 2 * lambda));
}

struct Deviation {
  double value = 0;
  double sqrt_term = 0;
  double log_term = 0;
  std::string branch;  // "sqrt" or "log"
};

/// max(2t sqrt(|G| log(2tm) / n^{k-1}), 8t log(2tm)); t = 1 is the set version.
inline Deviation deviation_cor25(double g_size, double n, int k, double m, double t) {
  if (!(m > 0)) throw InvalidInput("deviation: m must be > 0");
  if (!(t >= 1)) throw InvalidInput("deviation: t must be >= 1");
  if (!(n >= 1) || k < 1) throw InvalidInput("deviation: need n >= 1, k >= 1");
  if (g_size < 0) throw InvalidInput("deviation: |G| must be >= 0");
  Deviation d;
  const double l = std::log(2 * t * m);
  d.sqrt_term = 2 * t * std::sqrt(g_size * l / std::pow(n, k - 1));
  d.log_term = 8 * t * l;
  d.value = std::max(d.sqrt_term, d.log_term);
  d.branch = d.sqrt_term >= d.log_term ? "sqrt" : "log";
  return d;
}

inline Deviation deviation_cor24(double g_size, double n, int k, double m) {
  return deviation_cor25(g_size, n, k, m, 1);
}

struct LayerSplit {
  std::vector<std::uint64_t> layer_sizes;  // layer l holds tuples of multiplicity >= l
  std::vector<double> layer_deviations;    // set deviation with m replaced by tm
  double summed = 0;
  Deviation stated;
  bool within() const { return summed <= stated.value * (1 + 1e-12); }
};

/// Splits a multiset into t sets and union-bounds the per-layer deviations.
inline LayerSplit split_layers(const TupleMultiset& g, double m) {
  LayerSplit out;
  const auto t = std::max<std::uint64_t>(1, g.max_multiplicity());
  const auto& u = g.universe();
  out.layer_sizes.assign(t, 0);
  for (const auto& [code, mult] : g.entries())
    for (std::uint64_t l = 0; l < mult; ++l) ++out.layer_sizes[l];
  for (auto size : out.layer_sizes) {
    const auto d = deviation_cor24(static_cast<double>(size), u.n(), u.k(), static_cast<double>(t) * m);
    out.layer_deviations.push_back(d.value);
    out.summed += d.value;
  }
  out.stated = deviation_cor25(static_cast<double>(g.total()), u.n(), u.k(), m, static_cast<double>(t));
  return out;
}

struct TailRow {
  double lambda = 0;
  double deviation = 0;  // 2λ
  double upper_emp = 0, upper_se = 0;
  double lower_emp = 0, lower_se = 0;
  double bound = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

struct TailReport {
  double alpha = 0;
  double mean_expected = 0;  // αn
  double mean_observed = 0;
  std::uint64_t min_count = 0, max_count = 0;
  std::vector<TailRow> rows;
};

inline constexpr const char* kTailCsvHeader = "lambda,deviation,upper_emp,upper_se,lower_emp,lower_se,bound,samples,seed";

/// Intersection counts of `samples` matchings; sample i uses stream (seed, i),
/// so the result does not depend on the worker count.
inline std::vector<std::uint64_t> sample_counts(const TupleMultiset& g, std::uint64_t samples, std::uint64_t seed,
                                                unsigned workers = 1) {
  std::vector<std::uint64_t> counts(samples);
  const auto& u = g.universe();
  const auto run = [&](std::uint64_t lo, std::uint64_t hi) {
    for (auto i = lo; i < hi; ++i) {
      CounterRng rng(seed, i);
      counts[i] = intersect_count(sample_matching(u, rng), g);
    }
  };
  workers = std::max(1U, workers);
  if (workers == 1 || samples < workers) {
    run(0, samples);
  } else {
    std::vector<std::thread> threads;
    const auto chunk = (samples + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w)
      threads.emplace_back(run, std::min(samples, w * chunk), std::min(samples, (w + 1) * chunk));
    for (auto& t : threads) t.join();
  }
  return counts;
}

/// Empirical tails P(|G∩M| >= αn + 2λ) and P(|G∩M| <= αn - 2λ) next to the
/// bound. α = |G| / n^k with multiplicities.
inline TailReport mc_tail(const TupleMultiset& g, std::uint64_t samples, const std::vector<double>& lambdas,
                          std::uint64_t seed, unsigned workers = 1) {
  if (samples < 1) throw InvalidInput("mc_tail: samples must be >= 1");
  const auto& u = g.universe();
  TailReport rep;
  rep.alpha = static_cast<double>(g.total()) / static_cast<double>(u.size());
  rep.mean_expected = static_cast<double>(g.total()) / static_cast<double>(u.power(u.k() - 1));
  const auto counts = sample_counts(g, samples, seed, workers);
  rep.min_count = *std::min_element(counts.begin(), counts.end());
  rep.max_count = *std::max_element(counts.begin(), counts.end());
  long double sum = 0;
  for (auto c : counts) sum += c;
  rep.mean_observed = static_cast<double>(sum / samples);
  const double N = static_cast<double>(samples);
  for (double lambda : lambdas) {
    TailRow row;
    row.lambda = lambda;
    row.deviation = 2 * lambda;
    row.bound = bound_thm23(std::min(1.0, rep.alpha), u.n(), lambda);
    row.samples = samples;
    row.seed = seed;
    std::uint64_t up = 0, down = 0;
    for (auto c : counts) {
      const auto x = static_cast<double>(c);
      if (x >= rep.mean_expected + row.deviation) ++up;
      if (x <= rep.mean_expected - row.deviation) ++down;
    }
    row.upper_emp = static_cast<double>(up) / N;
    row.lower_emp = static_cast<double>(down) / N;
    row.upper_se = std::sqrt(row.upper_emp * (1 - row.upper_emp) / N);
    row.lower_se = std::sqrt(row.lower_emp * (1 - row.lower_emp) / N);
    rep.rows.push_back(row);
  }
  return rep;
}

inline TailReport mc_tail(const Family& g, std::uint64_t samples, const std::vector<double>& lambdas,
                          std::uint64_t seed, unsigned workers = 1) {
  return mc_tail(TupleMultiset(g), samples, lambdas, seed, workers);
}

inline std::string format_g6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline void write_tail_csv(const TailReport& rep, std::ostream& out) {
  out << kTailCsvHeader << '\n';
  for (const auto& r : rep.rows)
    out << format_g6(r.lambda) << ',' << format_g6(r.deviation) << ',' << format_g6(r.upper_emp) << ','
        << format_g6(r.upper_se) << ',' << format_g6(r.lower_emp) << ',' << format_g6(r.lower_se) << ','
        << format_g6(r.bound) << ',' << r.samples << ',' << r.seed << '\n';
}

struct ChiSquare {
  double statistic = 0;
  std::uint64_t dof = 0;
  double p_value = 0;
};

/// Pearson goodness of fit against the uniform distribution on counts.size() cells.
inline ChiSquare chi_square_uniform(const std::vector<std::uint64_t>& counts) {
  if (counts.size() < 2) throw InvalidInput("chi-square: need at least two cells");
  const double total = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}));
  if (total <= 0) throw InvalidInput("chi-square: no observations");
  const double expected = total / static_cast<double>(counts.size());
  ChiSquare out;
  for (auto c : counts) out.statistic += (static_cast<double>(c) - expected) * (static_cast<double>(c) - expected) / expected;
  out.dof = counts.size() - 1;
  boost::math::chi_squared dist(static_cast<double>(out.dof));
  out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
  return out;
}

/// Histogram of sampled matchings by matching_rank; stream (seed, i) per sample.
inline std::vector<std::uint64_t> matching_histogram(const Universe& u, std::uint64_t samples, std::uint64_t seed) {
  const auto total = matching_count(u.n(), u.k());
  if (total > 1'000'000) throw InvalidInput("matching histogram: more than 10^6 matchings");
  std::vector<std::uint64_t> hist(static_cast<std::size_t>(total), 0);
  for (std::uint64_t i = 0; i < samples; ++i) {
    CounterRng rng(seed, i);
    ++hist[static_cast<std::size_t>(matching_rank(sample_matching(u, rng)))];
  }
  return hist;
}

}  // namespace rainbowlab
