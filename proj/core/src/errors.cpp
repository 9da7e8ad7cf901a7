#include "rovella/errors.hpp"

#include <cstdio>

namespace rovella {

namespace {

std::string singularity_message(int time, double value) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "orbit hit the singularity at time %d (value %.3e)", time, value);
  return buf;
}

std::string convergence_message(long iterations, double residual) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "no convergence after %ld iterations (last residual %.3e)",
                iterations, residual);
  return buf;
}

}  // namespace

SingularityHit::SingularityHit(int time, double value)
    : std::runtime_error(singularity_message(time, value)), time_(time), value_(value) {}

DegenerateFit::DegenerateFit(const std::string& what, int points)
    : std::runtime_error(what), points_(points) {}

NoConvergence::NoConvergence(long iterations, double residual)
    : std::runtime_error(convergence_message(iterations, residual)),
      iterations_(iterations),
      residual_(residual) {}

}  // namespace rovella
