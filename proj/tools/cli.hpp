#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "weil/cohomology.hpp"
#include "weil/imforms.hpp"

namespace weil::cli {

/// Schema or usage problem in an input file (exit code 2).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Json = nlohmann::ordered_json;

// Definition-file readers. Each rejects unknown keys.
AlgebroidPtr read_algebroid(const Json& j);
SplitGroupoid read_groupoid(const Json& j);
FrameMap read_frame_map(const Json& j, const Algebroid& P);
BSForm read_bs_form(const Json& j, const SplitGroupoid& G);

/// Hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

/// Runs `weilcheck` with the given arguments (argv[0] excluded). The JSON
/// report goes to `out`, diagnostics to `err`. Returns 0 when every check
/// passes, 1 when a mathematical check fails, 2 on input or usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace weil::cli
