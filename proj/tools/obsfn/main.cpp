#include <fstream>
#include <iostream>

#include "cli.hpp"
#include "obsfn/error.hpp"

#ifndef OBSFN_DEFAULT_CORPUS
#define OBSFN_DEFAULT_CORPUS ""
#endif

using namespace obsfn;
using namespace obsfn::cli;

namespace {

int emit(const Report& rep, const RunConfig& cfg) {
  if (!cfg.dot_out.empty()) {
    if (rep.dot.empty()) {
      std::cerr << "error: this command has no DOT output\n";
      return input_error;
    }
    std::ofstream out(cfg.dot_out);
    if (!out) {
      std::cerr << "error: cannot write " << cfg.dot_out << "\n";
      return input_error;
    }
    out << rep.dot;
  }
  switch (cfg.format) {
    case Format::json:
      std::cout << rep.body.dump(2) << "\n";
      break;
    case Format::dot:
      if (rep.dot.empty()) {
        std::cerr << "error: this command has no DOT output\n";
        return input_error;
      }
      std::cout << rep.dot;
      break;
    case Format::text:
      if (!rep.text.empty()) std::cout << rep.text;
      else if (rep.body.empty() && !rep.dot.empty()) std::cout << rep.dot;
      else std::cout << render_text(rep.body);
      break;
  }
  return rep.code;
}

}  // namespace

int main(int argc, char** argv) {
  io::set_corpus_fallback(OBSFN_DEFAULT_CORPUS);

  CLI::App app{"Observable functions on finite lattices, operators and spaces", "obsfn"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", "obsfn 0.1.0");

  RunConfig cfg;
  std::string format = "text";
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"text", "json", "dot"}))
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "Seed for randomized runs")->capture_default_str();
  app.add_option("--tol", cfg.tol_overrides,
                 "Tolerance override KEY=VAL (sym, proj, rec, sub, cluster, pivot, offdiag, max_sweeps)");
  app.add_option("--cap", cfg.cap, "Element cap for lattices and dual-ideal enumeration")
      ->check(CLI::Range(1, 64))
      ->capture_default_str();
  app.add_option("--dot", cfg.dot_out, "Also write the DOT graph to this file");

  Action action;
  add_order_commands(app, action);
  add_matrix_commands(app, action);
  add_classical_commands(app, action);
  add_suite_command(app, action);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? ok : input_error;
  }
  cfg.format = format == "json" ? Format::json : format == "dot" ? Format::dot : Format::text;

  try {
    return emit(action(cfg), cfg);
  } catch (const CheckFailure& e) {
    Report rep;
    rep.code = check_failed;
    rep.body["error"] = e.what();
    rep.body["witness"] = Json::parse(e.witness());
    return emit(rep, cfg);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
  } catch (const PreconditionError& e) {
    std::cerr << "precondition: " << e.what() << "\n";
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
  } catch (const ResourceError& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return input_error;
}
