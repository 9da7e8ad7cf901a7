#pragma once

#include <optional>

namespace rovella {

/// User-facing knobs; anything left unset takes its derived default in resolve_constants.
struct ConstantsSpec {
  double lambda_c = 1.2;
  double alpha = 0.05;
  int delta_big = 5;
  std::optional<int> theta;
  std::optional<double> epsilon_rec;
  std::optional<double> c_exp;
};

/// Validated analysis constants for a session with singularity order s.
struct AnalysisConstants {
  static constexpr double kDefaultEpsilonRec = 0.1;
  static constexpr double kCExpFloor = 1e-3;

  double s = 1.5;
  double lambda_c = 1.2;
  double alpha = 0.05;
  double beta = 0.075;
  int delta_big = 5;
  int theta = 5;
  double epsilon_rec = kDefaultEpsilonRec;
  double c_exp = kCExpFloor;

  static AnalysisConstants defaults(double s);

  /// log(lambda_c)/(s+1) - beta - s*alpha, clipped below at 1e-3.
  static double default_c_exp(double s, double lambda_c, double alpha);

  void validate() const;

  /// e^{-Theta}, the truncation radius of the recurrence distance.
  double recurrence_delta() const;
  /// e^{-Delta}, the radius of U_Delta.
  double critical_radius() const;
  /// beta + log(lambda_c)
  double bound_rate() const;
  /// Delta_0 = ceil(beta (s+2) Delta / (beta + log lambda_c)).
  int distortion_depth() const;
};

AnalysisConstants resolve_constants(const ConstantsSpec& spec, double s);

}  // namespace rovella
