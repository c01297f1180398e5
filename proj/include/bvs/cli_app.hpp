#pragma once

namespace bvs {

/// Entry point of the command-line tool. Returns the process exit code:
/// 0 success, 2 data or usage error, 3 numeric failure.
int run_cli(int argc, const char* const* argv);

}  // namespace bvs
