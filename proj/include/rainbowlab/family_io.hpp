#pragma once

// Family file format (UTF-8 text, 1-based values):
//
//   n k
//   thresholds: f1 f2 ... fs        (optional, directly after the header)
//   # family
//   a1 a2 ... ak                    (one member per line)
//   # family
//   ...
//
// Blank lines are ignored. Any other line starting with '#' is a comment.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rainbowlab/error.hpp"
#include "rainbowlab/family.hpp"

namespace rainbowlab {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

template <typename Int>
std::vector<Int> parse_ints(std::string_view line, std::size_t line_no) {
  std::vector<Int> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    if (pos >= line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t') ++end;
    Int value{};
    const auto token = line.substr(pos, end - pos);
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size())
      throw ParseError(line_no, "expected an integer, got '" + std::string(token) + "'");
    out.push_back(value);
    pos = end;
  }
  return out;
}

}  // namespace detail

inline FamilySystem parse_system(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  std::optional<Universe> universe;
  std::optional<std::vector<std::uint64_t>> thresholds;
  std::vector<Family> families;

  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = detail::trim(raw);
    if (line.empty()) continue;

    if (!universe) {
      if (line.front() == '#') continue;
      const auto header = detail::parse_ints<long long>(line, line_no);
      if (header.size() != 2) throw ParseError(line_no, "header must be 'n k'");
      if (header[0] < 1 || header[1] < 1 || header[0] > (1 << 30) || header[1] > (1 << 20))
        throw ParseError(line_no, "header values must be positive");
      try {
        universe.emplace(static_cast<int>(header[0]), static_cast<int>(header[1]));
      } catch (const InvalidInput& e) {
        throw ParseError(line_no, e.what());
      }
      continue;
    }

    if (line.starts_with("thresholds:")) {
      if (thresholds) throw ParseError(line_no, "duplicate thresholds line");
      if (!families.empty()) throw ParseError(line_no, "thresholds must precede the families");
      thresholds = detail::parse_ints<std::uint64_t>(line.substr(11), line_no);
      continue;
    }

    if (line.front() == '#') {
      if (detail::trim(line.substr(1)) == "family") families.emplace_back(*universe);
      continue;
    }

    if (families.empty()) throw ParseError(line_no, "member line before the first '# family'");
    const auto coords = detail::parse_ints<long long>(line, line_no);
    if (coords.size() != static_cast<std::size_t>(universe->k()))
      throw ParseError(line_no, "expected " + std::to_string(universe->k()) + " coordinates, got " +
                                    std::to_string(coords.size()));
    std::vector<int> values;
    values.reserve(coords.size());
    for (auto v : coords) {
      if (v < 1 || v > universe->n())
        throw ParseError(line_no, "coordinate " + std::to_string(v) + " out of range 1.." +
                                      std::to_string(universe->n()));
      values.push_back(static_cast<int>(v));
    }
    if (!families.back().insert(Tuple(std::move(values))))
      throw ParseError(line_no, "duplicate tuple within a family");
  }

  const auto last = std::max<std::size_t>(line_no, 1);  // end-of-input errors point at the last line
  if (!universe) throw ParseError(last, "missing 'n k' header");
  if (families.empty()) throw ParseError(last, "no '# family' section");
  if (thresholds && thresholds->size() != families.size())
    throw ParseError(last, "thresholds line has " + std::to_string(thresholds->size()) +
                                  " values for " + std::to_string(families.size()) + " families");
  return FamilySystem(*universe, std::move(families), std::move(thresholds));
}

inline FamilySystem parse_system(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_system(in);
}

inline void write_system(const FamilySystem& system, std::ostream& out) {
  const auto& u = system.universe();
  out << u.n() << ' ' << u.k() << '\n';
  if (system.thresholds()) {
    out << "thresholds:";
    for (auto f : *system.thresholds()) out << ' ' << f;
    out << '\n';
  }
  for (const auto& family : system.families()) {
    out << "# family\n";
    for (auto code : family.codes()) {
      const auto t = u.decode(code);
      for (std::size_t i = 0; i < t.size(); ++i) out << (i ? " " : "") << t[i];
      out << '\n';
    }
  }
}

inline std::string format_system(const FamilySystem& system) {
  std::ostringstream out;
  write_system(system, out);
  return out.str();
}

inline FamilySystem read_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open family file '" + path + "'");
  return parse_system(in);
}

inline void write_system(const FamilySystem& system, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write family file '" + path + "'");
  write_system(system, out);
}

}  // namespace rainbowlab
