#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kgrid/io.hpp"

namespace kgrid::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kUnsolvable = 2, kUnknown = 3 };

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline int exit_for(TauStatus s) {
  switch (s) {
    case TauStatus::Solved: return kOk;
    case TauStatus::Unsolvable: return kUnsolvable;
    case TauStatus::Stalled: return kUnknown;
  }
  return kUnknown;
}

inline void print_violations(const ScreenReport& report, std::ostream& out) {
  for (const Violation& v : report.violations)
    out << "C" << v.condition << " " << (v.witness ? to_string(*v.witness) : std::string("grid")) << ": " << v.message
        << "\n";
}

inline void print_trace(const std::vector<TauStep>& trace, std::ostream& out) {
  for (std::size_t s = 0; s < trace.size(); ++s) {
    out << "step " << s + 1 << " " << name_of(trace[s].rule) << " " << to_string(trace[s].node) << " word "
        << to_string(trace[s].word) << ":";
    for (const auto& [e, m] : trace[s].added) out << " " << to_string(e) << "x" << m;
    out << "\n";
  }
}

}  // namespace detail

// Runs the command line in-process. Errors go to `err` and map to exit 1.
inline int cli_main(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Solver and analysis toolkit for numbered k-grid puzzles", "kgrid"};
  app.require_subcommand(1);

  std::string puzzle_path, solution_path, method = "auto";
  bool json = false, trace = false, csv = false, solvable = false;
  std::size_t limit = 0;
  int neighbors = 4, k_max = kDefaultMaxK;
  GenSpec gen;

  auto* screen_cmd = app.add_subcommand("screen", "Check the syntactic unsolvability conditions");
  screen_cmd->add_option("puzzle", puzzle_path)->required();
  screen_cmd->add_flag("--json", json);

  auto* tau_cmd = app.add_subcommand("tau", "Run guaranteed-connection propagation");
  tau_cmd->add_option("puzzle", puzzle_path)->required();
  tau_cmd->add_flag("--trace", trace);
  tau_cmd->add_flag("--json", json);

  auto* solve_cmd = app.add_subcommand("solve", "Find a solution");
  solve_cmd->add_option("puzzle", puzzle_path)->required();
  solve_cmd->add_option("--method", method)->check(CLI::IsMember({"tau", "brute", "auto"}));
  solve_cmd->add_option("--limit", limit, "Solutions to look for with the exhaustive search (default 2)")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_flag("--json", json);

  auto* enum_cmd = app.add_subcommand("enumerate", "List solutions");
  enum_cmd->add_option("puzzle", puzzle_path)->required();
  enum_cmd->add_option("--limit", limit)->required()->check(CLI::PositiveNumber);
  enum_cmd->add_flag("--json", json);

  auto* verify_cmd = app.add_subcommand("verify", "Check a solution file against a puzzle");
  verify_cmd->add_option("puzzle", puzzle_path)->required();
  verify_cmd->add_option("solution", solution_path)->required();
  verify_cmd->add_flag("--json", json);

  auto* table_cmd = app.add_subcommand("count-table", "Print configuration counts per magnitude and k");
  table_cmd->add_option("--neighbors", neighbors)->required()->check(CLI::Range(1, 4));
  table_cmd->add_option("--k-max", k_max)->required()->check(CLI::Range(1, 64));
  table_cmd->add_flag("--csv", csv);

  auto* mink_cmd = app.add_subcommand("min-k", "Smallest k under which the puzzle is solvable");
  mink_cmd->add_option("puzzle", puzzle_path)->required();
  mink_cmd->add_option("--k-max", k_max)->required()->check(CLI::Range(1, kMaxK));
  mink_cmd->add_flag("--json", json);

  auto* gen_cmd = app.add_subcommand("gen", "Generate a puzzle");
  gen_cmd->add_option("--seed", gen.seed)->required();
  gen_cmd->add_option("--width", gen.width)->required()->check(CLI::Range(1, 1000));
  gen_cmd->add_option("--height", gen.height)->required()->check(CLI::Range(1, 1000));
  gen_cmd->add_option("--density", gen.node_density)->required()->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--k", gen.k)->required()->check(CLI::Range(1, kMaxK));
  gen_cmd->add_flag("--solvable", solvable);

  std::vector<std::string> reversed(argv.rbegin(), argv.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "kgrid: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*table_cmd) {
      out << count_table(neighbors, k_max, csv);
      return kOk;
    }
    if (*gen_cmd) {
      gen.mode = solvable ? GenMode::SolvableByConstruction : GenMode::Random;
      out << serialize_puzzle(generate(gen));
      return kOk;
    }

    const NumberedGrid grid = parse_puzzle(detail::read_file(puzzle_path));

    if (*screen_cmd) {
      const ScreenReport report = screen(grid);
      if (json) {
        out << nlohmann::json{{"status", report.unsolvable() ? "unsolvable" : "maybe-solvable"},
                              {"violations", to_json(report)}}
                   .dump(2)
            << "\n";
      } else {
        out << (report.unsolvable() ? "unsolvable" : "maybe-solvable") << "\n";
        detail::print_violations(report, out);
      }
      return report.unsolvable() ? kUnsolvable : kOk;
    }

    if (*tau_cmd) {
      const TauOutcome outcome = run_tau(grid);
      if (json) {
        out << to_json(outcome).dump(2) << "\n";
      } else {
        out << name_of(outcome.status);
        if (!outcome.reason.empty()) out << ": " << outcome.reason;
        out << "\n";
        detail::print_violations(outcome.screen, out);
        if (trace) detail::print_trace(outcome.trace, out);
        out << render_board(outcome.final_state);
        out << serialize_solution(outcome.final_state.connections());
      }
      return detail::exit_for(outcome.status);
    }

    if (*solve_cmd) {
      std::optional<TauOutcome> outcome;
      if (method != "brute") {
        outcome = run_tau(grid);
        if (outcome->status != TauStatus::Stalled || method == "tau") {
          const bool solved = outcome->status == TauStatus::Solved;
          if (json) {
            out << nlohmann::json{{"status", name_of(outcome->status)},
                                  {"engine", "tau"},
                                  {"unique", solved},
                                  {"reason", outcome->reason},
                                  {"connections", solved ? to_json(outcome->final_state.connections())
                                                         : nlohmann::json::array()},
                                  {"violations", to_json(outcome->screen)}}
                       .dump(2)
                << "\n";
          } else {
            out << "# " << name_of(outcome->status) << " by tau";
            if (solved) out << " (unique)";
            if (!outcome->reason.empty()) out << ": " << outcome->reason;
            out << "\n";
            if (solved) out << serialize_solution(outcome->final_state.connections());
          }
          return detail::exit_for(outcome->status);
        }
      }
      const SolutionSet found = enumerate_solutions(grid, limit ? limit : 2);
      const bool any = found.size() > 0;
      const std::string uniqueness = !any ? "none" : found.size() == 1 && found.exhausted ? "unique" : found.size() > 1 ? "multiple" : "unknown";
      if (json) {
        out << nlohmann::json{{"status", any ? "solved" : "unsolvable"},
                              {"engine", "brute"},
                              {"solutions_found", found.size()},
                              {"exhausted", found.exhausted},
                              {"uniqueness", uniqueness},
                              {"connections", any ? to_json(found.solutions.front()) : nlohmann::json::array()}}
                   .dump(2)
            << "\n";
      } else {
        out << "# " << (any ? "solved" : "unsolvable") << " by brute (" << uniqueness << ")\n";
        if (any) out << serialize_solution(found.solutions.front());
      }
      return any ? kOk : kUnsolvable;
    }

    if (*enum_cmd) {
      const SolutionSet found = enumerate_solutions(grid, limit);
      if (json) {
        auto list = nlohmann::json::array();
        for (const auto& s : found.solutions) list.push_back(to_json(s));
        out << nlohmann::json{{"status", found.size() ? "solved" : "unsolvable"},
                              {"count", found.size()},
                              {"exhausted", found.exhausted},
                              {"solutions", list}}
                   .dump(2)
            << "\n";
      } else {
        for (std::size_t s = 0; s < found.size(); ++s)
          out << "# solution " << s + 1 << "\n" << serialize_solution(found.solutions[s]);
        out << "# count " << found.size() << (found.exhausted ? " (all)" : " (limit reached)") << "\n";
      }
      return found.size() ? kOk : kUnsolvable;
    }

    if (*verify_cmd) {
      const SolvedCheck check = check_connections(grid, parse_solution(detail::read_file(solution_path)));
      if (json)
        out << nlohmann::json{{"status", check.solved ? "verified" : "rejected"}, {"reason", check.reason}}.dump(2)
            << "\n";
      else
        out << (check.solved ? "verified" : "rejected: " + check.reason) << "\n";
      return check.solved ? kOk : kUnknown;
    }

    if (*mink_cmd) {
      const auto k = min_solvable_k(grid, k_max);
      if (json)
        out << nlohmann::json{{"status", k ? "solvable" : "unsolvable"}, {"k", k ? nlohmann::json(*k) : nlohmann::json(nullptr)}}
                   .dump(2)
            << "\n";
      else
        out << (k ? std::to_string(*k) : "none") << "\n";
      return k ? kOk : kUnsolvable;
    }
  } catch (const std::exception& e) {
    err << "kgrid: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace kgrid::cli
