// Acceptance driver: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "rainbowlab/rainbowlab.hpp"
#include "support/oracles.hpp"

using namespace rainbowlab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail.clear();
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// 1. Exhaustive oracle at n=2, k=2, s=2.
Outcome small_exhaustive() {
  Outcome o;
  const auto t0 = Clock::now();
  const Universe u(2, 2);
  EnumerationOptions single;
  single.workers = 1;
  const SequenceSpec bad(u, {0, 2}), good(u, {0, 3});
  const auto v02 = is_satisfying(bad, {}, single);
  o.require(v02.status == VerdictStatus::not_satisfying, "(0,2) not reported as not-satisfying");
  o.require(v02.witness && is_valid_counterexample(bad, *v02.witness), "(0,2) witness does not validate");
  o.require(v02.witness && !oracle::has_rainbow(*v02.witness), "(0,2) witness has a rainbow matching per oracle");
  o.require(is_satisfying(good, {}, single).status == VerdictStatus::satisfying, "(0,3) not satisfying");
  o.require(oracle::satisfying_all_sizes(u, {0, 3}) && !oracle::satisfying_all_sizes(u, {0, 2}),
            "brute-force oracle disagrees");
  const auto mc = minimal_c_search(u, 2, {}, single);
  o.require(mc.c && *mc.c == 1, "minimal c is not 1");
  const double secs = seconds_since(t0);
  o.require(secs < 60, "runtime " + fmt("%.1f", secs) + " s");
  if (o.pass) o.detail = "(0,2) not-satisfying with valid witness, (0,3) satisfying, minimal c = 1, " + fmt("%.3f", secs) + " s";
  return o;
}

// 2. f_i = n (a_i + b_i) at n=3 for s=2 and s=3.
Outcome permutation_sequences() {
  Outcome o;
  const auto t0 = Clock::now();
  EnumerationOptions unpruned;
  unpruned.symmetry_pruning = false;
  unpruned.workers = 1;
  std::uint64_t verdicts = 0;
  for (const auto& a : {std::vector<int>{0, 1}, std::vector<int>{1, 0}})
    for (const auto& b : {std::vector<int>{0, 1}, std::vector<int>{1, 0}}) {
      const auto v = verify_thm15(3, PermutationPair(a, b), {}, unpruned);
      o.require(v.status == VerdictStatus::satisfying && !v.witness, "s=2 pair not satisfying");
      ++verdicts;
    }
  const PermutationPair pp({0, 1, 2}, {2, 1, 0});
  o.require(sequence_from_perms(3, pp).spec.f == std::vector<std::uint64_t>{6, 6, 6}, "s=3 sequence is not (6,6,6)");
  const auto v = verify_thm15(3, pp, {}, unpruned);
  o.require(v.status == VerdictStatus::satisfying && !v.witness, "s=3 sequence not satisfying");
  o.require(v.systems == 46656, "s=3 checked " + std::to_string(v.systems) + " systems, expected 46656");
  ++verdicts;
  const double secs = seconds_since(t0);
  o.require(secs < 600, "runtime " + fmt("%.1f", secs) + " s");
  if (o.pass)
    o.detail = std::to_string(verdicts) + " verdicts satisfying, s=3 exhaustive over " + std::to_string(v.systems) +
               " systems, 0 counterexamples, " + fmt("%.2f", secs) + " s";
  return o;
}

// Every system of the given shape whose families have no rainbow matching.
void exhaustive_no_rainbow(const Universe& u, std::size_t s, std::vector<FamilySystem>& out) {
  const auto all = std::uint64_t{1} << u.size();
  std::vector<std::uint64_t> masks(s, 0);
  const auto family_of = [&](std::uint64_t mask) {
    std::vector<std::uint64_t> codes;
    for (std::uint64_t c = 0; c < u.size(); ++c)
      if (mask >> c & 1) codes.push_back(c);
    return Family(u, std::move(codes));
  };
  for (;;) {
    std::vector<Family> fams;
    for (auto m : masks) fams.push_back(family_of(m));
    FamilySystem sys(u, std::move(fams));
    if (!oracle::has_rainbow(sys)) out.push_back(std::move(sys));
    std::size_t i = 0;
    while (i < s && ++masks[i] == all) masks[i++] = 0;
    if (i == s) return;
  }
}

// 3. Shifting keeps "no rainbow matching"; full schedules end compressed.
Outcome shifting_property() {
  Outcome o;
  std::vector<FamilySystem> systems;
  exhaustive_no_rainbow(Universe(2, 1), 2, systems);
  exhaustive_no_rainbow(Universe(2, 1), 3, systems);
  exhaustive_no_rainbow(Universe(2, 2), 2, systems);
  exhaustive_no_rainbow(Universe(2, 2), 3, systems);
  const auto exhaustive = systems.size();
  CounterRng rng(2024);
  for (int i = 0; i < 600; ++i) {
    const Universe u(2 + static_cast<int>(rng.below(2)), 1 + static_cast<int>(rng.below(3)));
    const std::size_t s = 2 + rng.below(2);
    systems.push_back(oracle::random_no_rainbow(u, s, 0.2 + 0.6 * rng.uniform(), rng));
  }
  std::uint64_t shifts = 0, violations = 0, uncompressed = 0;
  for (const auto& sys : systems) {
    const auto& u = sys.universe();
    for (int j = 1; j <= u.k(); ++j)
      for (int a = 1; a <= u.n(); ++a)
        for (int b = 1; b <= u.n(); ++b) {
          if (a == b) continue;
          ++shifts;
          if (oracle::has_rainbow(shift_system(sys, j, a, b))) ++violations;
        }
    const auto sched = shift_schedule(sys);
    ++shifts;
    if (oracle::has_rainbow(sched)) ++violations;
    for (const auto& f : sched.families())
      for (int j = 1; j <= u.k(); ++j)
        if (!is_compressed(f, j)) ++uncompressed;
  }
  o.require(systems.size() >= 1000, "only " + std::to_string(systems.size()) + " systems");
  o.require(violations == 0, std::to_string(violations) + " shifts created a rainbow matching");
  o.require(uncompressed == 0, std::to_string(uncompressed) + " families not compressed after the schedule");
  if (o.pass)
    o.detail = std::to_string(systems.size()) + " systems (" + std::to_string(exhaustive) + " exhaustive), " +
               std::to_string(shifts) + " shifts, 0 violations, all compressed";
  return o;
}

// 4. Replacement and leftover properties on saturated, compressed systems.
Outcome low_degree_diagnostics() {
  Outcome o;
  CounterRng rng(77);
  std::uint64_t systems = 0, replacement = 0, leftover = 0, uncertified = 0, repl_checked = 0, left_checked = 0;
  for (int n = 2; n <= 4; ++n)
    for (int k = 1; k <= 2; ++k)
      for (std::size_t s = 2; s <= 3; ++s)
        for (int trial = 0; trial < 25; ++trial) {
          const Universe u(n, k);
          const auto sys = saturate_and_compress(oracle::random_no_rainbow(u, s, 0.1 + 0.5 * rng.uniform(), rng));
          if (oracle::has_rainbow(sys)) {
            o.require(false, "saturated system has a rainbow matching");
            continue;
          }
          const auto rep = check_low_degree(sys);
          ++systems;
          if (!rep.certified) ++uncertified;
          replacement += rep.replacement_violations.size();
          leftover += rep.leftover_violations.size();
          repl_checked += rep.replacements_checked;
          left_checked += rep.leftover_checked;
        }
  o.require(uncertified == 0, std::to_string(uncertified) + " systems not certified compressed+saturated");
  o.require(replacement == 0, std::to_string(replacement) + " replacement violations");
  o.require(leftover == 0, std::to_string(leftover) + " leftover violations");
  if (o.pass)
    o.detail = std::to_string(systems) + " systems, " + std::to_string(repl_checked) + " replacements and " +
               std::to_string(left_checked) + " leftover tuples checked, 0 violations";
  return o;
}

// 5. Spread approximation structure.
Outcome spread_structure() {
  Outcome o;
  CounterRng rng(5150);
  int runs = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const Universe u(2 + static_cast<int>(rng.below(39)), 2);
    const std::size_t s = 1 + rng.below(4);
    const double r = std::vector<double>{2, 4, 8}[rng.below(3)];
    const auto f = oracle::random_family(u, 0.02 + 0.6 * rng.uniform(), rng);
    const auto res = spread_approximation(f, s, r);
    const auto rep = verify_spread(f, res, s);
    ++runs;
    const std::string tag = " (n=" + std::to_string(u.n()) + ", s=" + std::to_string(s) + ", r=" + fmt("%g", r) + ")";
    o.require(rep.partition, "partition fails" + tag);
    o.require(rep.covers, "cover fails" + tag);
    o.require(rep.cap_s1 && res.s1.size() <= 2 * (s - 1), "|s1| cap fails" + tag);
    o.require(rep.cap_s2 && res.s2.size() <= 4 * (s - 1) * (s - 1), "|s2| cap fails" + tag);
  }
  const Universe big(200, 2);
  const FamilySystem sys(big, {set_union(hyperplane(big, 1, 1), hyperplane(big, 2, 1)),
                               Family::from_tuples(big, {Tuple{1, 1}})});
  o.require(!oracle::has_rainbow(sys), "n=200 system has a rainbow matching");
  for (std::size_t i = 0; i < sys.s(); ++i) {
    const auto res = spread_approximation(sys[i], 2);
    const auto rep = verify_spread(sys[i], res, 2, &sys);
    const std::string tag = " (n=200, family " + std::to_string(i + 1) + ")";
    o.require(res.r_used == 128.0, "r is not 128" + tag);
    o.require(rep.leftover_applicable && rep.leftover_ok, "leftover bound fails" + tag);
    o.require(rep.disjointness_checked && rep.disjointness_ok, "disjointness fails" + tag + ": " + rep.disjointness_detail);
    o.require(rep.ok(), "verification fails" + tag);
  }
  if (o.pass)
    o.detail = std::to_string(runs) + " random runs pass partition/cover/caps; n=200 system passes leftover bound and disjointness at r=128";
  return o;
}

// 6. Concentration of |G ∩ M| for a random G of density 0.2.
Outcome concentration() {
  Outcome o;
  const auto t0 = Clock::now();
  const Universe u(50, 2);
  CounterRng pick(0xC0FFEE, std::uint64_t{1} << 63);
  const Family g(u, sample_subset(u.size(), u.size() / 5, pick));
  const std::uint64_t seed = 20240601;
  const auto rep = mc_tail(g, 20000, {2, 4, 6, 8}, seed);
  std::ostringstream rows;
  for (const auto& r : rep.rows) {
    o.require(r.upper_emp <= r.bound + 3 * r.upper_se, "upper tail exceeds bound at lambda=" + fmt("%g", r.lambda));
    o.require(r.lower_emp <= r.bound + 3 * r.lower_se, "lower tail exceeds bound at lambda=" + fmt("%g", r.lambda));
    rows << " l=" << r.lambda << ":" << format_g6(std::max(r.upper_emp, r.lower_emp)) << "<=" << format_g6(r.bound);
  }
  const auto h = mc_tail(hyperplane(u, 1, 1), 20000, {2}, seed);
  o.require(h.min_count == 1 && h.max_count == 1, "hyperplane count is not constantly 1");
  const double secs = seconds_since(t0);
  o.require(secs < 60, "runtime " + fmt("%.1f", secs) + " s");
  if (o.pass)
    o.detail = "alpha=" + fmt("%g", rep.alpha) + ", seed " + std::to_string(seed) + "," + rows.str() +
               ", hyperplane count always 1, " + fmt("%.2f", secs) + " s";
  return o;
}

// 7. Uniformity of the matching sampler.
Outcome sampler_uniformity() {
  Outcome o;
  const Universe u(3, 2);
  const std::uint64_t seed = 7;
  const auto brute = oracle::count_perfect_matchings(u);
  o.require(brute == 6 && matching_count(3, 2) == 6, "matching count is not 6");
  const auto hist = matching_histogram(u, 60000, seed);
  o.require(hist.size() == 6, "histogram has " + std::to_string(hist.size()) + " cells");
  const auto chi = chi_square_uniform(hist);
  o.require(chi.p_value > 0.001, "p = " + fmt("%.3g", chi.p_value));
  if (o.pass)
    o.detail = "6 matchings (brute force and (n!)^(k-1)), seed " + std::to_string(seed) + ", chi2=" +
               fmt("%.4g", chi.statistic) + ", p=" + fmt("%.4g", chi.p_value);
  return o;
}

void compositions(std::size_t s, int total, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (cur.size() + 1 == s) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int v = 0; v <= total; ++v) {
    cur.push_back(v);
    compositions(s, total - v, cur, out);
    cur.pop_back();
  }
}

// 8. squared_coeff against the expanded polynomial.
Outcome coefficient_oracle() {
  Outcome o;
  std::uint64_t checked = 0, mismatches = 0;
  for (std::size_t s = 1; s <= 4; ++s) {
    const auto poly = oracle::vandermonde_power(s, 2);
    std::vector<std::vector<int>> all;
    std::vector<int> cur;
    compositions(s, static_cast<int>(s * (s - 1)), cur, all);
    for (const auto& e : all) {
      ++checked;
      if (squared_coeff(s, e) != oracle::coefficient(poly, e)) ++mismatches;
    }
  }
  const auto poly5 = oracle::vandermonde_power(5, 2);
  CounterRng rng(55);
  std::vector<int> perm(5);
  std::iota(perm.begin(), perm.end(), 0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> e(5);
    if (trial % 2) {
      auto a = perm, b = perm;
      shuffle(std::span<int>(a), rng);
      shuffle(std::span<int>(b), rng);
      for (std::size_t i = 0; i < 5; ++i) e[i] = a[i] + b[i];
    } else {
      int left = 20;
      for (std::size_t i = 0; i < 4; ++i) {
        e[i] = static_cast<int>(rng.below(static_cast<std::uint64_t>(std::min(left, 8)) + 1));
        left -= e[i];
      }
      e[4] = left;
    }
    ++checked;
    if (squared_coeff(5, e) != oracle::coefficient(poly5, e)) ++mismatches;
  }
  o.require(mismatches == 0, std::to_string(mismatches) + " mismatches");
  o.require(squared_coeff(2, {1, 1}) == -2, "squared_coeff(2,(1,1)) != -2");
  o.require(vandermonde_coeff(2, {1, 0}) == 1, "vandermonde_coeff(2,(1,0)) != 1");
  if (o.pass) o.detail = std::to_string(checked) + " exponent vectors match the expansion; spot values -2 and +1";
  return o;
}

// 9. deg_set on grids, nested pairs, and the |F| <= n deg(F) inequality.
Outcome vanishing_degree() {
  Outcome o;
  for (int n = 1; n <= 6; ++n)
    o.require(deg_set(points_of(Family::all(Universe(n, 2)))) == n, "grid n=" + std::to_string(n));
  CounterRng rng(909);
  int pairs = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Universe u(2 + static_cast<int>(rng.below(5)), 2);
    const auto big = 1 + rng.below(u.size());
    const auto outer = sample_subset(u.size(), big, rng);
    const auto inner_idx = sample_subset(big, 1 + rng.below(big), rng);
    std::vector<std::uint64_t> inner;
    for (auto i : inner_idx) inner.push_back(outer[i]);
    const auto d_in = deg_set(points_of(Family(u, inner))), d_out = deg_set(points_of(Family(u, outer)));
    o.require(d_in <= d_out, "monotonicity fails");
    ++pairs;
  }
  int families = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Universe u(1 + static_cast<int>(rng.below(8)), 2);
    auto f = oracle::random_family(u, rng.uniform(), rng);
    if (f.empty()) f.insert(rng.below(u.size()));
    const auto r = sz_check(f);
    o.require(r.holds(), "|F| > n deg(F) for |F|=" + std::to_string(r.size));
    ++families;
  }
  if (o.pass)
    o.detail = "grids n<=6 give n, " + std::to_string(pairs) + " nested pairs monotone, " + std::to_string(families) +
               " families satisfy |F| <= n deg(F)";
  return o;
}

struct Reference {
  long double spread, shifting, combined;
  bool h12, h13, h14;
};

// Closed forms re-evaluated in long double, independently of bounds.hpp.
Reference reference(long double n, long double s, long double k) {
  const long double l2 = log2l(k * s), ln = logl(2 * k * s);
  const long double tail = powl(2.0L, 15.0L) * s * s * s * l2 * l2 * l2 * powl(n, k - 3);
  const long double lin = 8 * k * powl(n, k - 1) * ln;
  Reference r;
  r.spread = 4 * s * s * powl(n, k - 2) + tail;
  r.shifting = powl(n, k - 1) + std::max(k * k * s * powl(n, k - 1.5L) * sqrtl(8 * ln), lin);
  r.combined = powl(n, k - 1) + std::max(14 * s * powl(n, k - 1.5L) * sqrtl(ln), lin) + tail;
  const long double radius = 32 * s * l2;
  r.h12 = n > radius;
  r.h13 = n > s;
  r.h14 = n > std::max(radius, s);
  return r;
}

bool close10(double got, long double want) {
  return fabsl(static_cast<long double>(got) - want) <= 5e-11L * fabsl(want);
}

// 10. Formula layer.
Outcome formula_layer() {
  Outcome o;
  o.require(t_bound(5, 2, 2) == 4, "t_bound(5,2,2) != 4");
  o.require(t_bound(4, 2, 2) == 3, "t_bound(4,2,2) != 3");
  int forms = 0, labels = 0;
  for (long long n : {2LL, 10LL, 16LL, 50LL, 81LL, 100LL, 1000LL, 4096LL, 100000LL, 1000000LL})
    for (long long s : {1LL, 2LL, 3LL, 8LL, 10LL, 27LL, 31LL, 64LL, 100LL, 1000LL, 5000LL})
      for (long long k : {2LL, 3LL, 4LL}) {
        const auto rep = threshold_report(n, s, k);
        const std::string tag = " (n=" + std::to_string(n) + ", s=" + std::to_string(s) + ", k=" + std::to_string(k) + ")";
        if (s * k > 1) {
          const auto ref = reference(n, s, k);
          o.require(close10(rep.spread.value, ref.spread), "spread bound" + tag);
          o.require(close10(rep.shifting.value, ref.shifting), "shifting bound" + tag);
          o.require(close10(rep.combined.value, ref.combined), "combined bound" + tag);
          o.require(rep.spread.hypothesis == ref.h12 && rep.shifting.hypothesis == ref.h13 &&
                        rep.combined.hypothesis == ref.h14,
                    "hypothesis flags" + tag);
          forms += 3;
        }
        // row conditions: s < n^(1/2), n^(1/2) <= s < n^(3/4), n^(3/4) <= s < n
        const __int128 S = s, N = n;
        std::string want;
        if (s >= n)
          want = "s >= n (outside the table)";
        else if (S * S < N)
          want = "s << n^(1/2)";
        else if (S * S * S * S < N * N * N)
          want = "n^(1/2) << s << n^(3/4)";
        else
          want = "n^(3/4) << s << n";
        o.require(rep.regime == want, "regime '" + rep.regime + "' expected '" + want + "'" + tag);
        ++labels;
      }
  for (int n = 2; n <= 9; ++n)
    for (int s = 1; s <= 4; ++s)
      for (int k = 1; k <= 3; ++k)
        if (s * k <= n)
          o.require(t_bound(n, s, k) == oracle::erdos_threshold(n, s, k),
                    "t_bound(" + std::to_string(n) + "," + std::to_string(s) + "," + std::to_string(k) + ")");
  if (o.pass)
    o.detail = "t_bound spot values exact, " + std::to_string(forms) + " closed forms within 10 significant digits, " +
               std::to_string(labels) + " regime labels consistent";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"exhaustive oracle n=2 k=2 s=2", small_exhaustive},
      {"permutation sequences n=3", permutation_sequences},
      {"shifting preserves no-rainbow", shifting_property},
      {"replacement and leftover diagnostics", low_degree_diagnostics},
      {"spread structure", spread_structure},
      {"concentration n=50 alpha=0.2", concentration},
      {"sampler uniformity n=3 k=2", sampler_uniformity},
      {"coefficient oracle", coefficient_oracle},
      {"deg_set properties", vanishing_degree},
      {"formula layer", formula_layer},
  };
  int failed = 0, index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::printf("[%2d] %s %s: %s\n", index, o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", index - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
