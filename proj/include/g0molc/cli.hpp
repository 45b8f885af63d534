#pragma once

#include <iosfwd>

namespace g0molc::cli {

/// Entry point of the `g0molc` tool. Exit codes: 0 success, 1 invalid
/// arguments or domain error, 2 I/O error. An estimation failure in
/// `estimate` still exits 0 and is reported in the JSON payload.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace g0molc::cli
