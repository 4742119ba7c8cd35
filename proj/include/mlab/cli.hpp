#ifndef MLAB_CLI_HPP
#define MLAB_CLI_HPP

namespace mlab {

/// Experiment driver behind the monitor-lab binary.
/// Usage: monitor-lab <experiment> --config <file> [--seed N] [--workers N] [--out DIR]
/// Exit codes: 0 ok, 1 invariant violation, 2 usage error, 3 resource cap.
int run_cli(int argc, const char* const* argv);

}  // namespace mlab

#endif
