#pragma once

namespace uforge::cli {

/// Experiment-runner entry point. Exit codes: 0 success (and conjecture
/// checks passed), 1 a checked property failed, 2 usage or input error.
int run(int argc, const char* const* argv);

}  // namespace uforge::cli
