#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace logitpath::cli {

inline constexpr const char* version = "0.1.0";

// Runs one invocation; `args` excludes the program name. Returns the exit
// code: 0 success, 2 parse, 3 dimension, 4 verification failure, 5 non-ancestral
// keep set, 6 unsupported linearization, 7 empty sweep, 1 anything else.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Line-oriented rendering of a report document. Deterministic for a given
// document; numbers are printed with 17 significant digits.
void render_table(const nlohmann::ordered_json& report, std::ostream& out);

}  // namespace logitpath::cli
