#pragma once

namespace scimap {

// Full command-line front end; returns the process exit code
// (0 ok, 2 input error, 3 internal error).
int run_cli(int argc, const char* const* argv);

}  // namespace scimap
