#ifndef MISO_RUNNER_HPP
#define MISO_RUNNER_HPP

#include <string>

namespace miso {

struct RunResult {
  int code = 0; // 0 pass, 1 checked-fail, 2 input/internal error
  std::string json;
};

/// Executes one command against an instance document and returns the report
/// document. options_json may be empty; recognized options: tol_eq, tol_rank,
/// tol_orth, trunc, seed, pretty, instance_b (second instance for "equiv").
RunResult run_command(const std::string& command,
                      const std::string& instance_json,
                      const std::string& options_json);

const char* version_string();

} // namespace miso

#endif
