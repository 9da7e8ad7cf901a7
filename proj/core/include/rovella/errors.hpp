#pragma once

#include <stdexcept>
#include <string>

namespace rovella {

/// An orbit landed on the discontinuity at 0, or closer to it than 1e-300.
class SingularityHit : public std::runtime_error {
 public:
  SingularityHit(int time, double value);

  int time() const noexcept { return time_; }
  double value() const noexcept { return value_; }

 private:
  int time_;
  double value_;
};

/// A parameter record violates its invariants.
class InvalidParams : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Too few usable points for a least-squares fit.
class DegenerateFit : public std::runtime_error {
 public:
  DegenerateFit(const std::string& what, int points);

  int points() const noexcept { return points_; }

 private:
  int points_;
};

/// Power iteration did not reach the requested tolerance.
class NoConvergence : public std::runtime_error {
 public:
  NoConvergence(long iterations, double residual);

  long iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  long iterations_;
  double residual_;
};

/// Two densities on different bin grids were compared.
class BinMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Partition records violate a precondition. Indicates a programming error.
class InconsistentRecord : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace rovella
