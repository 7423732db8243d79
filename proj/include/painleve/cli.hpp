#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace painleve {

// Default artifact directory when --out-dir is not given.
inline constexpr const char* kOutDirEnv = "PAINLEVE_OUT_DIR";

// Exit status: 0 success, 1 numerical failure, 2 usage error. Errors go to `err` as one JSON line.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace painleve
