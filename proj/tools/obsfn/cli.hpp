#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "obsfn/io.hpp"
#include "obsfn/matrix.hpp"

namespace obsfn::cli {

using Json = nlohmann::ordered_json;

enum class Format { text, json, dot };

struct RunConfig {
  Format format = Format::text;
  std::vector<std::string> tol_overrides;
  std::size_t cap = 64;
  std::uint64_t seed = 7;
  std::string dot_out;

  Tolerances tol() const;
  io::LoadOptions load() const;
};

enum Exit : int { ok = 0, check_failed = 1, input_error = 2 };

/// A command's result: a JSON report (rendered as text unless --format json),
/// an optional DOT graph, and the exit code.
struct Report {
  Json body = Json::object();
  /// Replaces the generic rendering of `body` in text mode.
  std::string text;
  std::string dot;
  int code = ok;
};

using Action = std::function<Report(const RunConfig&)>;

/// Registers the subcommands of one module on `app`; the chosen action is
/// stored in `action`.
void add_order_commands(CLI::App& app, Action& action);
void add_matrix_commands(CLI::App& app, Action& action);
void add_classical_commands(CLI::App& app, Action& action);
void add_suite_command(CLI::App& app, Action& action);

/// `ref` relative to the working directory, else in the corpus.
io::fs::path input(const std::string& ref);

/// Shortest round-trip decimal.
std::string num(double x);

/// Human-readable rendering of a report body.
std::string render_text(const Json& j);

}  // namespace obsfn::cli
