#pragma once

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "kgrid/grid.hpp"
#include "kgrid/oracle.hpp"
#include "kgrid/screens.hpp"
#include "kgrid/tau.hpp"
#include "kgrid/words.hpp"

namespace kgrid {

// Accepted value ranges in the text formats.
inline constexpr int kMaxCoordinate = 1'000'000;
inline constexpr int kMaxK = 1'000;
inline constexpr int kMaxMagnitude = 4 * kMaxK;

class ParseError : public std::runtime_error {
 public:
  enum class Kind { Malformed, DuplicateCoordinate, MissingHeader, RangeError };

  ParseError(Kind kind, int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), kind_(kind), line_(line) {}

  Kind kind() const { return kind_; }
  int line() const { return line_; }

 private:
  Kind kind_;
  int line_;
};

namespace detail {

struct Record {
  int line;
  std::vector<std::string_view> fields;
};

// Splits text into significant lines with '#' comments stripped.
inline std::vector<Record> records(std::string_view text) {
  std::vector<Record> out;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    Record rec{line_no, {}};
    std::size_t pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
      std::size_t end = pos;
      while (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != '\r') ++end;
      if (end > pos) rec.fields.push_back(line.substr(pos, end - pos));
      pos = end;
    }
    if (!rec.fields.empty()) out.push_back(std::move(rec));
  }
  return out;
}

inline int integer(const Record& rec, std::size_t field, int lo, int hi, const char* what) {
  std::string_view s = rec.fields[field];
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec == std::errc::result_out_of_range)
    throw ParseError(ParseError::Kind::RangeError, rec.line, std::string(what) + " out of range");
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ParseError(ParseError::Kind::Malformed, rec.line, "expected integer " + std::string(what) + ", got '" + std::string(s) + "'");
  if (value < lo || value > hi)
    throw ParseError(ParseError::Kind::RangeError, rec.line,
                     std::string(what) + " " + std::to_string(value) + " outside " + std::to_string(lo) + ".." +
                         std::to_string(hi));
  return value;
}

}  // namespace detail

// Puzzle format, one record per line:
//   k <int>
//   node <x> <y> <n>
// '#' starts a comment. y grows upward (Top neighbor = larger y).
inline NumberedGrid parse_puzzle(std::string_view text) {
  using Kind = ParseError::Kind;
  const auto recs = detail::records(text);
  if (recs.empty() || recs.front().fields[0] != "k") {
    throw ParseError(Kind::MissingHeader, recs.empty() ? 1 : recs.front().line, "first record must be 'k <int>'");
  }
  if (recs.front().fields.size() != 2) throw ParseError(Kind::Malformed, recs.front().line, "expected 'k <int>'");
  const int k = detail::integer(recs.front(), 1, 1, kMaxK, "k");

  std::vector<Node> nodes;
  std::map<Coordinate, int> seen;
  for (std::size_t r = 1; r < recs.size(); ++r) {
    const auto& rec = recs[r];
    if (rec.fields[0] == "k") throw ParseError(Kind::Malformed, rec.line, "second 'k' record");
    if (rec.fields[0] != "node" || rec.fields.size() != 4)
      throw ParseError(Kind::Malformed, rec.line, "expected 'node <x> <y> <n>'");
    Node n{{detail::integer(rec, 1, 0, kMaxCoordinate, "x"), detail::integer(rec, 2, 0, kMaxCoordinate, "y")},
           detail::integer(rec, 3, 1, kMaxMagnitude, "magnitude")};
    if (auto [it, fresh] = seen.emplace(n.coord, rec.line); !fresh)
      throw ParseError(Kind::DuplicateCoordinate, rec.line,
                       "duplicate coordinate " + to_string(n.coord) + " (first at line " + std::to_string(it->second) + ")");
    nodes.push_back(n);
  }
  if (nodes.empty()) throw ParseError(Kind::Malformed, recs.back().line, "puzzle has no nodes");
  return NumberedGrid(k, std::move(nodes));
}

inline std::string serialize_puzzle(const NumberedGrid& grid) {
  std::string out = "k " + std::to_string(grid.k()) + "\n";
  for (const Node& n : grid.nodes())
    out += "node " + std::to_string(n.coord.x) + " " + std::to_string(n.coord.y) + " " + std::to_string(n.magnitude) + "\n";
  return out;
}

// Solution format: one 'conn <x1> <y1> <x2> <y2> <m>' per connected pair.
// Whether the pairs are neighbors is checked against a grid later.
inline Connections parse_solution(std::string_view text) {
  using Kind = ParseError::Kind;
  Connections out;
  for (const auto& rec : detail::records(text)) {
    if (rec.fields[0] != "conn" || rec.fields.size() != 6)
      throw ParseError(Kind::Malformed, rec.line, "expected 'conn <x1> <y1> <x2> <y2> <m>'");
    Coordinate a{detail::integer(rec, 1, 0, kMaxCoordinate, "x1"), detail::integer(rec, 2, 0, kMaxCoordinate, "y1")};
    Coordinate b{detail::integer(rec, 3, 0, kMaxCoordinate, "x2"), detail::integer(rec, 4, 0, kMaxCoordinate, "y2")};
    const int m = detail::integer(rec, 5, 1, kMaxK, "multiplicity");
    if (a == b) throw ParseError(Kind::Malformed, rec.line, "connection joins a node to itself");
    if (!out.emplace(EdgeKey(a, b), m).second)
      throw ParseError(Kind::DuplicateCoordinate, rec.line, "pair " + to_string(EdgeKey(a, b)) + " listed twice");
  }
  return out;
}

inline std::string serialize_solution(const Connections& connections) {
  std::string out;
  for (const auto& [e, m] : connections)
    out += "conn " + std::to_string(e.a.x) + " " + std::to_string(e.a.y) + " " + std::to_string(e.b.x) + " " +
           std::to_string(e.b.y) + " " + std::to_string(m) + "\n";
  return out;
}

namespace detail {

inline std::string node_label(const PuzzleState& state, int i) {
  const int n = state.grid().node(i).magnitude;
  const int r = state.residual(i);
  return r == 0 ? std::to_string(n) : std::to_string(n) + "(" + std::to_string(r) + ")";
}

}  // namespace detail

// Fixed-width board, drawn with y growing downward on screen (largest y
// on the first line). Horizontal links: '-' single, '=' double, '<m>'
// above two. Vertical links: '|' single, '‖' double, the digit m above two.
inline std::string render_board(const PuzzleState& state) {
  const NumberedGrid& grid = state.grid();
  int max_x = 0, max_y = 0, width = 1;
  for (int i = 0; i < static_cast<int>(grid.size()); ++i) {
    max_x = std::max(max_x, grid.node(i).coord.x);
    max_y = std::max(max_y, grid.node(i).coord.y);
    width = std::max(width, static_cast<int>(detail::node_label(state, i).size()));
  }
  constexpr int gap = 3;
  const int cols = (max_x + 1) * width + max_x * gap;
  const int rows = 2 * max_y + 1;
  // One display cell per entry so the two-byte '‖' keeps columns aligned.
  std::vector<std::vector<std::string>> canvas(static_cast<std::size_t>(rows),
                                               std::vector<std::string>(static_cast<std::size_t>(cols), " "));
  auto row_of = [&](int y) { return 2 * (max_y - y); };
  auto col_of = [&](int x) { return x * (width + gap); };

  for (const auto& [e, m] : state.connections()) {
    if (e.horizontal()) {
      auto& line = canvas[static_cast<std::size_t>(row_of(e.a.y))];
      const int from = col_of(e.a.x) + width, to = col_of(e.b.x);
      for (int c = from; c < to; ++c) line[static_cast<std::size_t>(c)] = m == 2 ? "=" : "-";
      if (m > 2) {
        const std::string tag = "<" + std::to_string(m) + ">";
        for (std::size_t t = 0; t < tag.size() && from + static_cast<int>(t) < to; ++t)
          line[static_cast<std::size_t>(from) + t] = std::string(1, tag[t]);
      }
    } else {
      const int c = col_of(e.a.x) + (width - 1) / 2;
      const std::string glyph = m == 1 ? "|" : m == 2 ? "‖" : m < 10 ? std::to_string(m) : "#";
      for (int r = row_of(e.b.y) + 1; r < row_of(e.a.y); ++r)
        canvas[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = glyph;
    }
  }
  for (int i = 0; i < static_cast<int>(grid.size()); ++i) {
    const std::string label = detail::node_label(state, i);
    auto& line = canvas[static_cast<std::size_t>(row_of(grid.node(i).coord.y))];
    const int start = col_of(grid.node(i).coord.x);
    for (int c = 0; c < width; ++c) line[static_cast<std::size_t>(start + c)] = " ";
    const int pad = (width - static_cast<int>(label.size())) / 2;
    for (std::size_t t = 0; t < label.size(); ++t) line[static_cast<std::size_t>(start + pad) + t] = std::string(1, label[t]);
  }

  std::string out;
  for (const auto& line : canvas) {
    std::string text;
    for (const auto& cell : line) text += cell;
    while (!text.empty() && text.back() == ' ') text.pop_back();
    out += text + "\n";
  }
  return out;
}

// Configuration counts for a node with r neighbors: rows k = 1..k_max,
// columns n = 0..r*k_max, blank where n > r*k. Each row also reports its
// maximum, where it is attained and the midpoint floor(r*k/2).
inline std::string count_table(int r, int k_max, bool csv = false) {
  if (r < 1 || r > 4 || k_max < 1) throw std::invalid_argument("count_table needs r in 1..4 and k_max >= 1");
  const int last = r * k_max;
  std::vector<std::vector<std::string>> table;
  std::vector<std::string> header{"k"};
  for (int n = 0; n <= last; ++n) header.push_back(std::to_string(n));
  header.insert(header.end(), {"max", "argmax", "mid"});
  table.push_back(header);
  for (int k = 1; k <= k_max; ++k) {
    std::vector<std::string> row{std::to_string(k)};
    std::uint64_t best = 0;
    int arg = 0;
    for (int n = 0; n <= last; ++n) {
      if (n > r * k) {
        row.emplace_back();
        continue;
      }
      const std::uint64_t c = count_configs(n, r, k);
      if (c > best) best = c, arg = n;
      row.push_back(std::to_string(c));
    }
    row.push_back(std::to_string(best));
    row.push_back(std::to_string(arg));
    row.push_back(std::to_string(r * k / 2));
    table.push_back(std::move(row));
  }

  std::string out;
  if (csv) {
    for (const auto& row : table) {
      for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + row[c];
      out += "\n";
    }
    return out;
  }
  std::vector<std::size_t> widths(header.size(), 0);
  for (const auto& row : table)
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
  for (const auto& row : table) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) line += c == 1 || c == row.size() - 3 ? " | " : " ";
      line += std::string(widths[c] - row[c].size(), ' ') + row[c];
    }
    out += line + "\n";
  }
  return out;
}

// JSON report fragments. nlohmann::json keeps object keys sorted, so the
// serialized output is byte-stable.
inline nlohmann::json to_json(Coordinate c) { return nlohmann::json::array({c.x, c.y}); }

inline nlohmann::json to_json(const Connections& connections) {
  auto out = nlohmann::json::array();
  for (const auto& [e, m] : connections) out.push_back({{"a", to_json(e.a)}, {"b", to_json(e.b)}, {"m", m}});
  return out;
}

inline nlohmann::json to_json(const ScreenReport& report) {
  auto out = nlohmann::json::array();
  for (const Violation& v : report.violations)
    out.push_back({{"condition", v.condition},
                   {"witness", v.witness ? to_json(*v.witness) : nlohmann::json(nullptr)},
                   {"message", v.message}});
  return out;
}

inline std::string hex_digest(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline nlohmann::json to_json(const std::vector<TauStep>& trace) {
  auto out = nlohmann::json::array();
  for (const TauStep& s : trace) {
    Connections added(s.added.begin(), s.added.end());
    out.push_back({{"rule", name_of(s.rule)},
                   {"node", to_json(s.node)},
                   {"word", to_string(s.word)},
                   {"added", to_json(added)},
                   {"digest", hex_digest(s.digest)}});
  }
  return out;
}

inline nlohmann::json to_json(const TauOutcome& outcome) {
  return {{"status", name_of(outcome.status)},
          {"reason", outcome.reason},
          {"connections", to_json(outcome.final_state.connections())},
          {"trace", to_json(outcome.trace)},
          {"violations", to_json(outcome.screen)}};
}

}  // namespace kgrid
