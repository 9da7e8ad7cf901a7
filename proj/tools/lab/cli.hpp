#pragma once

#include <iosfwd>

namespace rovella::lab {

enum ExitStatus : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitValidation = 2,
  kExitNumerical = 3,
  kExitSingularity = 4,
};

/// rovella-lab <experiment> --config <path> [--set k=v]... [--workers N] [--seed S] [--out DIR]
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rovella::lab
