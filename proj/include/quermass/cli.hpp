#pragma once

// Command implementations behind the `quermass` executable. Each returns the
// process exit code and writes human-readable output to `out`/`err`.

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "quermass/config.hpp"
#include "quermass/verify.hpp"

namespace quermass::cli {

enum ExitCode : int {
  kOk = 0,
  kConfig = 2,     // bad config, or a violated precondition
  kNumerical = 3,  // cone exit or step-size underflow
  kViolation = 4,  // a check exceeded its tolerance
};

struct Options {
  int jobs = 1;
  std::vector<std::string> overrides;  // key=value, applied after loading
  bool quiet = false;
};

int cmd_run(const std::string& config_path, const Options& opt,
            std::ostream& out, std::ostream& err);

/// suite: symfunc, geometry, prop1, lemma, variation, af, monotone or all.
/// Without a config the built-in reference cases are used.
int cmd_verify(const std::string& suite,
               const std::optional<std::string>& config_path,
               const Options& opt, std::ostream& out, std::ostream& err);

int cmd_sweep(const std::string& config_path, const Options& opt,
              std::ostream& out, std::ostream& err);

const std::vector<std::string>& suite_names();

/// One independent unit of verification work.
struct Task {
  std::string label;
  std::function<std::vector<IdentityReport>()> run;
};

/// Tasks of a suite; the reference cases when cfg is empty.
std::vector<Task> suite_tasks(const std::string& suite,
                              const std::optional<RunConfig>& cfg);

/// Writes via a temporary file renamed into place, creating parent
/// directories, so readers never see a partial file.
void write_file_atomic(const std::string& path,
                       const std::function<void(std::ostream&)>& body);

}  // namespace quermass::cli
