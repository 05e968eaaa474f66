// rainbowlab command-line tool. Writes one JSON report to stdout; logs go to
// stderr. Exit codes: 0 definitive result, 2 inconclusive, 1 usage or input error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rainbowlab/rainbowlab.hpp"

namespace rl = rainbowlab;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInconclusive = 2;

struct Options {
  std::optional<int> n, k, s;
  std::string seq, input, output, lambdas, perm_a, perm_b, exponents;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::uint64_t samples = 0;
  std::optional<double> r_override;
  std::optional<std::uint64_t> mod_p;
  std::uint64_t max_nodes = rl::SearchBudget{}.max_nodes;
  std::optional<double> time_limit;  // seconds
  bool no_timing = false;
  bool no_symmetry = false;
  std::optional<int> shift_j, shift_a, shift_b;
  bool compress = false;
  bool low_degree = false;
  double alpha = 0.2;
  double m = 10;
  std::string verb;
};

// Reals are reported with 6 significant digits.
Json real(double v) {
  if (!std::isfinite(v)) return nullptr;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return std::strtod(buf, nullptr);
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

template <typename T>
std::vector<T> parse_list(const std::string& text, const char* flag) {
  if (text.empty()) throw rl::InvalidInput(std::string(flag) + " is required");
  std::vector<T> out;
  for (const auto& item : split(text)) {
    try {
      std::size_t used = 0;
      if constexpr (std::is_floating_point_v<T>) {
        out.push_back(static_cast<T>(std::stod(item, &used)));
      } else {
        if (!item.empty() && item[0] == '-' && std::is_unsigned_v<T>) throw std::invalid_argument(item);
        out.push_back(static_cast<T>(std::stoll(item, &used)));
      }
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw rl::InvalidInput(std::string(flag) + ": cannot parse '" + item + "'");
    }
  }
  return out;
}

int require(const std::optional<int>& v, const char* flag) {
  if (!v) throw rl::InvalidInput(std::string(flag) + " is required");
  return *v;
}

rl::SearchBudget budget_of(const Options& o) {
  rl::SearchBudget b;
  b.max_nodes = o.max_nodes;
  if (o.time_limit) {
    if (!(*o.time_limit > 0)) throw rl::InvalidInput("--time-limit must be positive");
    b.time_limit = std::chrono::milliseconds(static_cast<long long>(std::ceil(*o.time_limit * 1000)));
  }
  b.validate();
  return b;
}

rl::EnumerationOptions enumeration_of(const Options& o) {
  return {!o.no_symmetry, std::max(1U, o.workers)};
}

rl::Universe universe_of(const Options& o) { return rl::Universe(require(o.n, "--n"), o.k.value_or(2)); }

rl::FamilySystem input_system(const Options& o) {
  if (o.input.empty()) throw rl::InvalidInput("--input is required");
  return rl::read_system(o.input);
}

Json tuple_json(const rl::Tuple& t) { return Json(t.coords()); }

Json pattern_json(const rl::Pattern& p) {
  Json out = Json::array();
  for (const auto& [j, a] : p.elems()) out.push_back(Json::array({j, a}));
  return out;
}

Json verdict_json(const rl::Verdict& v, const rl::SequenceSpec& spec, const rl::SearchBudget& budget) {
  Json r;
  r["status"] = rl::to_string(v.status);
  r["systems"] = v.systems;
  r["nodes"] = v.nodes;
  r["vacuous"] = v.vacuous;
  r["symmetry_pruned"] = v.symmetry_pruned;
  if (v.witness) {
    r["witness"] = rl::format_system(*v.witness);
    r["witness_valid"] = rl::is_valid_counterexample(spec, *v.witness, budget);
  } else {
    r["witness"] = nullptr;
  }
  return r;
}

int verdict_exit(rl::VerdictStatus s) {
  return s == rl::VerdictStatus::unknown ? kExitInconclusive : kExitOk;
}

struct Outcome {
  Json parameters = Json::object();
  Json result = Json::object();
  int code = kExitOk;
};

Outcome run_verify(const Options& o) {
  Outcome out;
  const auto u = universe_of(o);
  const auto f = parse_list<std::uint64_t>(o.seq, "--seq");
  if (o.s && static_cast<std::size_t>(*o.s) != f.size()) throw rl::InvalidInput("--s does not match the length of --seq");
  const rl::SequenceSpec spec(u, f);
  const auto budget = budget_of(o);
  out.parameters = {{"n", u.n()}, {"k", u.k()}, {"s", f.size()}, {"seq", f}, {"symmetry", !o.no_symmetry}};
  const auto v = rl::is_satisfying(spec, budget, enumeration_of(o));
  out.result = verdict_json(v, spec, budget);
  out.code = verdict_exit(v.status);
  return out;
}

Outcome run_falsify(const Options& o) {
  Outcome out;
  const auto u = universe_of(o);
  const auto f = parse_list<std::uint64_t>(o.seq, "--seq");
  const rl::SequenceSpec spec(u, f);
  const auto iterations = o.samples ? o.samples : 1000;
  out.parameters = {{"n", u.n()}, {"k", u.k()}, {"s", f.size()}, {"seq", f}, {"samples", iterations}};
  const auto res = rl::falsify_random(spec, o.seed, iterations, budget_of(o));
  out.result["found"] = res.witness.has_value();
  out.result["iterations"] = res.iterations;
  out.result["budget_exhausted"] = res.budget_exhausted;
  out.result["vacuous"] = spec.vacuous();
  out.result["witness"] = res.witness ? Json(rl::format_system(*res.witness)) : Json(nullptr);
  // Not finding a counterexample by sampling proves nothing.
  out.code = res.witness ? kExitOk : kExitInconclusive;
  return out;
}

Outcome run_minimal_c(const Options& o) {
  Outcome out;
  const auto u = universe_of(o);
  const int s = require(o.s, "--s");
  if (s < 1) throw rl::InvalidInput("--s must be >= 1");
  out.parameters = {{"n", u.n()}, {"k", u.k()}, {"s", s}, {"symmetry", !o.no_symmetry}};
  const auto res = rl::minimal_c_search(u, static_cast<std::size_t>(s), budget_of(o), enumeration_of(o));
  out.result["c"] = res.c ? Json(*res.c) : Json(nullptr);
  out.result["status"] = res.c ? "found" : "unknown";
  Json scanned = Json::array();
  for (std::size_t c = 0; c < res.scanned.size(); ++c)
    scanned.push_back({{"c", c}, {"status", rl::to_string(res.scanned[c].status)}, {"systems", res.scanned[c].systems}});
  out.result["scanned"] = scanned;
  out.result["witness_below"] = res.witness_below ? Json(rl::format_system(*res.witness_below)) : Json(nullptr);
  out.code = res.c ? kExitOk : kExitInconclusive;
  return out;
}

Json bound_json(const rl::BoundValue& b) {
  Json j{{"value", real(b.value)}, {"hypothesis", b.hypothesis}};
  if (!b.branch.empty()) j["branch"] = b.branch;
  return j;
}

Outcome run_bounds(const Options& o) {
  Outcome out;
  const int n = require(o.n, "--n"), s = require(o.s, "--s"), k = o.k.value_or(2);
  if (n < 1 || s < 1 || k < 1) throw rl::InvalidInput("bounds: n, s, k must be >= 1");
  out.parameters = {{"n", n}, {"k", k}, {"s", s}};
  const auto r = rl::threshold_report(n, s, k);
  out.result["t_bound"] = r.t_bound.str();
  out.result["t_hypothesis"] = r.t_hypothesis;
  out.result["c_thm12"] = bound_json(r.spread);
  out.result["c_thm13"] = bound_json(r.shifting);
  out.result["c_thm14"] = bound_json(r.combined);
  out.result["u"] = real(r.u);
  out.result["spread_radius"] = real(r.spread_radius);
  out.result["s_exponent"] = real(r.s_exponent);
  out.result["regime"] = r.regime;
  out.result["best_upper"] = r.best_upper;
  out.result["best_lower"] = r.best_lower;
  out.result["log_convention"] = r.log_convention;
  return out;
}

Json low_degree_json(const rl::LowDegreeReport& r) {
  Json j;
  j["certified"] = r.certified;
  j["diagnostic"] = r.diagnostic;
  j["replacements_checked"] = r.replacements_checked;
  j["replacement_violations"] = r.replacement_violations.size();
  j["leftover_checked"] = r.leftover_checked;
  j["leftover_violations"] = r.leftover_violations.size();
  Json cores = Json::array();
  for (const auto& c : r.cores) {
    Json t = Json::array();
    for (const auto& [jj, a] : c.t_set) t.push_back(Json::array({jj, a}));
    cores.push_back({{"hyperplanes", t},
                     {"covered", c.covered.size()},
                     {"leftover", c.leftover.size()},
                     {"b_total", c.b_multiset.total()},
                     {"leftover_bound", real(c.leftover_bound)}});
  }
  j["cores"] = cores;
  j["ok"] = r.ok();
  return j;
}

void maybe_write(const Options& o, const rl::FamilySystem& system) {
  if (!o.output.empty()) rl::write_system(system, o.output);
}

Outcome run_shift(const Options& o) {
  Outcome out;
  const auto system = input_system(o);
  const auto budget = budget_of(o);
  out.parameters = {{"input", o.input}};
  rl::FamilySystem shifted = system;
  if (o.shift_j || o.shift_a || o.shift_b) {
    if (!o.shift_j || !o.shift_a || !o.shift_b) throw rl::InvalidInput("--j, --a and --b must be given together");
    out.parameters["j"] = *o.shift_j;
    out.parameters["a"] = *o.shift_a;
    out.parameters["b"] = *o.shift_b;
    shifted = rl::shift_system(system, *o.shift_j, *o.shift_a, *o.shift_b);
  } else {
    out.parameters["schedule"] = "full";
    shifted = rl::shift_schedule(system);
  }
  const auto before = rl::find_rainbow(system, budget);
  const auto after = rl::find_rainbow(shifted, budget);
  out.result["rainbow_before"] = rl::to_string(before.status);
  out.result["rainbow_after"] = rl::to_string(after.status);
  out.result["sizes_preserved"] = [&] {
    for (std::size_t i = 0; i < system.s(); ++i)
      if (system[i].size() != shifted[i].size()) return false;
    return true;
  }();
  out.result["compressed"] = rl::is_compressed(shifted);
  out.result["system"] = rl::format_system(shifted);
  if (o.low_degree) out.result["low_degree"] = low_degree_json(rl::check_low_degree(shifted, budget));
  maybe_write(o, shifted);
  const bool inconclusive = before.status == rl::SearchStatus::budget_exhausted ||
                            after.status == rl::SearchStatus::budget_exhausted;
  out.code = inconclusive ? kExitInconclusive : kExitOk;
  return out;
}

Outcome run_saturate(const Options& o) {
  Outcome out;
  const auto system = input_system(o);
  const auto budget = budget_of(o);
  out.parameters = {{"input", o.input}, {"compress", o.compress}};
  try {
    const auto sat = o.compress ? rl::saturate_and_compress(system, budget) : rl::saturate(system, budget);
    Json added = Json::array();
    for (std::size_t i = 0; i < sat.s(); ++i) added.push_back(sat[i].size() - system[i].size());
    out.result["status"] = "saturated";
    out.result["added"] = added;
    out.result["compressed"] = rl::is_compressed(sat);
    out.result["system"] = rl::format_system(sat);
    if (o.low_degree) out.result["low_degree"] = low_degree_json(rl::check_low_degree(sat, budget));
    maybe_write(o, sat);
  } catch (const rl::PartialSaturation& e) {
    out.result["status"] = "budget-exhausted";
    out.result["system"] = rl::format_system(e.partial());
    out.code = kExitInconclusive;
  }
  return out;
}

Json spread_json(const rl::SpreadResult& r) {
  Json j;
  const auto patterns = [](const std::vector<rl::Pattern>& ps) {
    Json a = Json::array();
    for (const auto& p : ps) a.push_back(pattern_json(p));
    return a;
  };
  j["r_used"] = real(r.r_used);
  j["small_n_warning"] = r.small_n_warning;
  j["s0"] = patterns(r.s0);
  j["s1"] = patterns(r.s1);
  j["s2"] = patterns(r.s2);
  Json left = Json::array();
  for (const auto& t : r.leftover.tuples()) left.push_back(tuple_json(t));
  j["leftover"] = left;
  Json promoted = Json::array();
  for (const auto& [a, b] : r.promoted) promoted.push_back(Json::array({a, b}));
  j["promoted"] = promoted;
  j["collapsed"] = r.collapsed.empty() ? Json(nullptr) : Json(r.collapsed);
  Json trace = Json::array();
  for (const auto& st : r.trace)
    trace.push_back({{"pattern", pattern_json(st.pattern)},
                     {"g_before", st.g_before},
                     {"restricted", st.restricted},
                     {"stopped", st.stopped}});
  j["trace"] = trace;
  return j;
}

Outcome run_spread(const Options& o) {
  Outcome out;
  const auto system = input_system(o);
  const auto s = o.s ? static_cast<std::size_t>(*o.s) : system.s();
  if (s < 1) throw rl::InvalidInput("--s must be >= 1");
  const auto budget = budget_of(o);
  out.parameters = {{"input", o.input}, {"s", s}, {"r_override", o.r_override ? real(*o.r_override) : Json(nullptr)}};
  Json families = Json::array();
  bool ok = true;
  for (std::size_t i = 0; i < system.s(); ++i) {
    const auto built = rl::build_spread(system[i], s, o.r_override);
    const auto post = rl::postprocess(built, s);
    const auto rep = rl::verify_spread(system[i], post, s, &system, budget);
    Json fj = spread_json(post);
    fj["raw_sizes"] = {built.s0.size(), built.s1.size(), built.s2.size()};
    fj["checks"] = {{"partition", rep.partition},
                    {"cover", rep.covers},
                    {"cap_s1", rep.cap_s1},
                    {"cap_s2", rep.cap_s2},
                    {"leftover_applicable", rep.leftover_applicable},
                    {"leftover_ok", rep.leftover_ok},
                    {"leftover_bound", real(rep.leftover_bound)},
                    {"disjointness_checked", rep.disjointness_checked},
                    {"disjointness_ok", rep.disjointness_ok},
                    {"disjointness_detail", rep.disjointness_detail},
                    {"ok", rep.ok()}};
    ok = ok && rep.ok();
    families.push_back(fj);
  }
  out.result["families"] = families;
  out.result["all_checks_pass"] = ok;
  return out;
}

Outcome run_sample_matching(const Options& o) {
  Outcome out;
  const auto u = universe_of(o);
  const auto samples = o.samples ? o.samples : 1;
  out.parameters = {{"n", u.n()}, {"k", u.k()}, {"samples", samples}};
  const auto total = rl::matching_count(u.n(), u.k());
  out.result["matching_count"] = total.str();
  Json list = Json::array();
  for (std::uint64_t i = 0; i < std::min<std::uint64_t>(samples, 20); ++i) {
    rl::CounterRng rng(o.seed, i);
    const auto m = rl::sample_matching(u, rng);
    Json members = Json::array();
    for (const auto& t : m.members()) members.push_back(tuple_json(t));
    list.push_back({{"perms", m.perms()}, {"members", members}});
  }
  out.result["matchings"] = list;
  out.result["shown"] = list.size();
  if (samples > 1 && total > 1 && total <= 1'000'000) {
    const auto hist = rl::matching_histogram(u, samples, o.seed);
    const auto chi = rl::chi_square_uniform(hist);
    out.result["histogram"] = hist;
    out.result["chi_square"] = {{"statistic", real(chi.statistic)}, {"dof", chi.dof}, {"p_value", real(chi.p_value)}};
  }
  return out;
}

Outcome run_concentration(const Options& o) {
  Outcome out;
  const auto samples = o.samples ? o.samples : 10000;
  const auto lambdas = parse_list<double>(o.lambdas.empty() ? "2,4,6,8" : o.lambdas, "--lambdas");
  for (double l : lambdas)
    if (!(l > 0)) throw rl::InvalidInput("--lambdas must be positive");
  std::optional<rl::TupleMultiset> g;
  if (!o.input.empty()) {
    // All families of the file are summed into one multiset.
    const auto system = rl::read_system(o.input);
    g.emplace(system.universe());
    for (const auto& f : system.families()) *g = rl::multiset_sum(*g, f);
    out.parameters = {{"input", o.input}};
  } else {
    const auto u = universe_of(o);
    if (!(o.alpha >= 0 && o.alpha <= 1)) throw rl::InvalidInput("--alpha must lie in [0,1]");
    const auto size = static_cast<std::uint64_t>(std::llround(o.alpha * static_cast<double>(u.size())));
    // The family uses a stream separate from the per-sample streams.
    rl::CounterRng rng(o.seed, std::uint64_t{1} << 63);
    g.emplace(rl::Family(u, rl::sample_subset(u.size(), size, rng)));
    out.parameters = {{"n", u.n()}, {"k", u.k()}, {"alpha", real(o.alpha)}};
  }
  out.parameters["samples"] = samples;
  out.parameters["lambdas"] = Json::array();
  for (double l : lambdas) out.parameters["lambdas"].push_back(real(l));
  out.parameters["m"] = real(o.m);

  const auto rep = rl::mc_tail(*g, samples, lambdas, o.seed, std::max(1U, o.workers));
  out.result["g_size"] = g->total();
  out.result["alpha"] = real(rep.alpha);
  out.result["mean_expected"] = real(rep.mean_expected);
  out.result["mean_observed"] = real(rep.mean_observed);
  out.result["min_count"] = rep.min_count;
  out.result["max_count"] = rep.max_count;
  Json rows = Json::array();
  bool within = true;
  for (const auto& r : rep.rows) {
    const bool ok = r.upper_emp <= r.bound + 3 * r.upper_se && r.lower_emp <= r.bound + 3 * r.lower_se;
    within = within && ok;
    rows.push_back({{"lambda", real(r.lambda)},
                    {"deviation", real(r.deviation)},
                    {"upper_emp", real(r.upper_emp)},
                    {"upper_se", real(r.upper_se)},
                    {"lower_emp", real(r.lower_emp)},
                    {"lower_se", real(r.lower_se)},
                    {"bound", real(r.bound)},
                    {"within_bound", ok}});
  }
  out.result["rows"] = rows;
  out.result["all_within_bound"] = within;
  const auto split = rl::split_layers(*g, o.m);
  out.result["multiset"] = {{"t", split.layer_sizes.size()},
                            {"layer_sizes", split.layer_sizes},
                            {"summed_layer_deviation", real(split.summed)},
                            {"deviation", real(split.stated.value)},
                            {"branch", split.stated.branch},
                            {"split_within", split.within()}};
  if (!o.output.empty()) {
    std::ofstream csv(o.output);
    if (!csv) throw rl::InvalidInput("cannot write " + o.output);
    rl::write_tail_csv(rep, csv);
    out.result["csv"] = o.output;
  }
  return out;
}

rl::PermutationPair perm_pair_of(const Options& o) {
  return rl::PermutationPair(parse_list<int>(o.perm_a, "--perm-a"), parse_list<int>(o.perm_b, "--perm-b"));
}

Outcome run_nullsatz(const Options& o) {
  Outcome out;
  out.parameters["verb"] = o.verb;
  if (o.verb == "coeff" || o.verb == "coeff-mod") {
    const auto e = parse_list<int>(o.exponents, "--e");
    const auto s = o.s ? static_cast<std::size_t>(*o.s) : e.size();
    out.parameters["s"] = s;
    out.parameters["e"] = e;
    const auto c = rl::squared_coeff_detail(s, e);
    out.result["squared_coeff"] = c.value.str();
    out.result["pairs"] = c.pairs;
    out.result["witness"] = c.witness ? Json{{"sigma", c.witness->first}, {"tau", c.witness->second}} : Json(nullptr);
    out.result["vandermonde_coeff"] = rl::vandermonde_coeff(s, e);
    if (o.verb == "coeff-mod") {
      if (!o.mod_p) throw rl::InvalidInput("--mod-p is required");
      out.parameters["p"] = *o.mod_p;
      const auto m = rl::coeff_mod_p(s, e, *o.mod_p);
      out.result["mod_p"] = m.value;
      out.result["nonzero_mod_p"] = m.nonzero();
    }
  } else if (o.verb == "sequence") {
    const int n = require(o.n, "--n");
    const auto pp = perm_pair_of(o);
    out.parameters["n"] = n;
    out.parameters["perm_a"] = pp.a;
    out.parameters["perm_b"] = pp.b;
    const auto seq = rl::sequence_from_perms(n, pp);
    out.result["seq"] = seq.spec.f;
    out.result["split_coefficient"] = seq.split_coefficient;
    out.result["squared_coefficient"] = seq.squared_coefficient.str();
    out.result["provenance"] = seq.provenance;
  } else if (o.verb == "degree") {
    const auto system = input_system(o);
    out.parameters["input"] = o.input;
    Json fams = Json::array();
    for (const auto& f : system.families()) {
      const auto r = rl::sz_check(f);
      fams.push_back({{"size", r.size}, {"n", r.n}, {"deg", r.degree}, {"sz_holds", r.holds()}});
    }
    out.result["families"] = fams;
  } else if (o.verb == "verify") {
    const int n = require(o.n, "--n");
    const auto pp = perm_pair_of(o);
    const auto budget = budget_of(o);
    out.parameters["n"] = n;
    out.parameters["perm_a"] = pp.a;
    out.parameters["perm_b"] = pp.b;
    const auto seq = rl::sequence_from_perms(n, pp);
    out.result["seq"] = seq.spec.f;
    const auto v = rl::is_satisfying(seq.spec, budget, enumeration_of(o));
    out.result["verdict"] = verdict_json(v, seq.spec, budget);
    out.code = verdict_exit(v.status);
  } else {
    throw rl::InvalidInput("nullsatz: unknown verb '" + o.verb + "' (coeff, coeff-mod, sequence, degree, verify)");
  }
  return out;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--seed", o.seed, "RNG seed");
  sub->add_option("--workers", o.workers, "worker threads (default: $RAINBOWLAB_WORKERS or 1)");
  sub->add_option("--max-nodes", o.max_nodes, "search node budget");
  sub->add_option("--time-limit", o.time_limit, "time budget in seconds");
  sub->add_flag("--no-timing", o.no_timing, "report elapsed_ms as 0 (for byte-stable output)");
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  if (const char* env = std::getenv("RAINBOWLAB_WORKERS")) {
    try {
      o.workers = static_cast<unsigned>(std::stoul(env));
    } catch (const std::exception&) {
      std::cerr << "error: RAINBOWLAB_WORKERS must be a nonnegative integer\n";
      return kExitInput;
    }
  }

  CLI::App app{"rainbowlab: rainbow matchings in [n]^k"};
  app.require_subcommand(1);
  const auto universe_opts = [&](CLI::App* sub) {
    sub->add_option("--n", o.n, "values per coordinate");
    sub->add_option("--k", o.k, "number of coordinates (default 2)");
  };

  auto* verify = app.add_subcommand("verify", "decide whether a threshold sequence is satisfying");
  universe_opts(verify);
  verify->add_option("--s", o.s, "sequence length (checked against --seq)");
  verify->add_option("--seq", o.seq, "thresholds f_1,...,f_s");
  verify->add_flag("--no-symmetry", o.no_symmetry, "disable symmetry pruning");

  auto* falsify = app.add_subcommand("falsify", "random search for a counterexample");
  universe_opts(falsify);
  falsify->add_option("--seq", o.seq, "thresholds f_1,...,f_s");
  falsify->add_option("--samples", o.samples, "iterations (default 1000)");

  auto* minimal = app.add_subcommand("minimal-c", "smallest c making (i-1)n^{k-1}+c satisfying");
  universe_opts(minimal);
  minimal->add_option("--s", o.s, "number of families");
  minimal->add_flag("--no-symmetry", o.no_symmetry, "disable symmetry pruning");

  auto* bounds = app.add_subcommand("bounds", "closed-form thresholds");
  universe_opts(bounds);
  bounds->add_option("--s", o.s, "number of families");

  auto* shift = app.add_subcommand("shift", "apply shifts to a family system");
  shift->add_option("--input", o.input, "family file");
  shift->add_option("--output", o.output, "write the shifted system here");
  shift->add_option("--j", o.shift_j, "coordinate of a single shift");
  shift->add_option("--a", o.shift_a, "target value of a single shift");
  shift->add_option("--b", o.shift_b, "source value of a single shift");
  shift->add_flag("--low-degree", o.low_degree, "run the low-degree diagnostics on the result");

  auto* saturate = app.add_subcommand("saturate", "grow a no-rainbow system to an inclusion-maximal one");
  saturate->add_option("--input", o.input, "family file");
  saturate->add_option("--output", o.output, "write the saturated system here");
  saturate->add_flag("--compress", o.compress, "alternate with the shifting schedule until stable");
  saturate->add_flag("--low-degree", o.low_degree, "run the low-degree diagnostics on the result");

  auto* spread = app.add_subcommand("spread", "spread approximation of each family");
  spread->add_option("--input", o.input, "family file");
  spread->add_option("--s", o.s, "s parameter (default: number of families)");
  spread->add_option("--r-override", o.r_override, "peeling parameter r (default 32 s log2(sk))");

  auto* sample = app.add_subcommand("sample-matching", "uniform random perfect matchings");
  universe_opts(sample);
  sample->add_option("--samples", o.samples, "number of samples (default 1)");

  auto* conc = app.add_subcommand("concentration", "Monte Carlo tails of |G ∩ M|");
  universe_opts(conc);
  conc->add_option("--input", o.input, "family file; all families are summed into G");
  conc->add_option("--alpha", o.alpha, "density of a random G when no --input is given");
  conc->add_option("--samples", o.samples, "matchings to sample (default 10000)");
  conc->add_option("--lambdas", o.lambdas, "comma list (default 2,4,6,8)");
  conc->add_option("--m", o.m, "m in the multiset deviation (default 10)");
  conc->add_option("--output", o.output, "CSV side file");

  auto* nz = app.add_subcommand("nullsatz", "polynomial-method tools for k = 2");
  nz->add_option("verb", o.verb, "coeff | coeff-mod | sequence | degree | verify")->required();
  nz->add_option("--n", o.n, "values per coordinate");
  nz->add_option("--s", o.s, "number of variables (default: length of --e)");
  nz->add_option("--e", o.exponents, "exponent vector");
  nz->add_option("--perm-a", o.perm_a, "permutation of 0..s-1");
  nz->add_option("--perm-b", o.perm_b, "permutation of 0..s-1");
  nz->add_option("--mod-p", o.mod_p, "prime modulus");
  nz->add_option("--input", o.input, "family file (degree)");
  nz->add_flag("--no-symmetry", o.no_symmetry, "disable symmetry pruning");

  for (auto* sub : {verify, falsify, minimal, bounds, shift, saturate, spread, sample, conc, nz}) add_common(sub, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cerr, std::cerr);
    std::cerr << app.help();
    return kExitInput;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    const auto& name = chosen->get_name();
    if (name == "verify") out = run_verify(o);
    else if (name == "falsify") out = run_falsify(o);
    else if (name == "minimal-c") out = run_minimal_c(o);
    else if (name == "bounds") out = run_bounds(o);
    else if (name == "shift") out = run_shift(o);
    else if (name == "saturate") out = run_saturate(o);
    else if (name == "spread") out = run_spread(o);
    else if (name == "sample-matching") out = run_sample_matching(o);
    else if (name == "concentration") out = run_concentration(o);
    else out = run_nullsatz(o);
  } catch (const rl::ParseError& e) {
    std::cerr << "error: " << o.input << ": " << e.what() << '\n';
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const rl::BudgetExhausted& e) {
    std::cerr << "inconclusive: " << e.what() << '\n';
    return kExitInconclusive;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  const auto elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();

  Json report;
  report["version"] = rl::kVersion;
  report["command"] = chosen->get_name();
  report["parameters"] = out.parameters;
  report["seed"] = o.seed;
  report["elapsed_ms"] = o.no_timing ? 0 : elapsed;
  report["result"] = out.result;
  std::cout << report.dump(2) << '\n';
  std::cerr << chosen->get_name() << ": done in " << elapsed << " ms, exit " << out.code << '\n';
  return out.code;
}
