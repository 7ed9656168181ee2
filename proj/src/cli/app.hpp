#pragma once

namespace nlse::cli {

/// Exit codes: 0 success, 2 schema or usage, 3 numerical failure,
/// 4 unknown subcommand, 5 I/O.
int run_app(int argc, char** argv);

}  // namespace nlse::cli
