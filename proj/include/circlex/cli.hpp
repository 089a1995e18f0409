#pragma once

namespace circlex::cli {

/// Entry point of the command-line front end.  Returns the process exit
/// status: 0 on success, 1 on suite or computation failure, 2 on usage
/// errors.  All data goes to --out (default stdout); progress and
/// diagnostics go to stderr only.
int run_cli(int argc, const char* const* argv);

}  // namespace circlex::cli
