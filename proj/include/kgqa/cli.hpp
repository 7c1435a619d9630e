#pragma once

namespace kgqa {

// argv-style entry point for the kgqa binary. Returns the process exit code:
// 0 on success, 1 on a runtime or data failure, 2 on a usage error.
int run_cli(int argc, const char* const* argv);

}  // namespace kgqa
