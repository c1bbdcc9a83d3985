#pragma once

#include <cstdint>
#include <string>

namespace hessiasol::cli {

/// Exit codes: 0 success, 1 malformed config, 2 certification/comparison
/// failure, 3 numeric non-convergence.
struct Invocation {
  std::string command;
  std::string config_path;
  std::string out_dir = "hessiasol_out";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
  // Direct flags accepted by matrix-lemma in place of a config file.
  int n_flag = 0;
  std::int64_t samples_flag = 0;
};

int run(const Invocation& inv);

/// argv front-end (CLI11); returns the process exit code.
int run_main(int argc, char** argv);

}  // namespace hessiasol::cli
