#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "obsfn/matrix.hpp"

namespace obsfn::suite {

struct Config {
  std::uint64_t seed = 7;
  Tolerances tol;
  bool parallel = true;
};

struct Result {
  int id = 0;
  std::string title;
  bool pass = false;
  /// One line of counts; deterministic for a fixed seed.
  std::string summary;
  /// Loadable JSON for the first failure, empty when passing.
  std::string witness;
};

/// Criterion ids in report order.
const std::vector<int>& manifest();
std::string title(int id);

/// Runs one criterion with its own generator (seeded from cfg.seed and id).
Result run(int id, const Config& cfg);
/// Runs `ids` (all when empty), concurrently when cfg.parallel; results
/// come back in manifest order.
std::vector<Result> run_all(const Config& cfg, std::vector<int> ids = {});

/// Corpus file name of a standard corpus entry ("2^3" -> "boolean3.json").
std::string corpus_file(const std::string& entry_name);

}  // namespace obsfn::suite
