#include "rovella/constants.hpp"

#include <algorithm>
#include <cmath>

#include "rovella/errors.hpp"

namespace rovella {

double AnalysisConstants::default_c_exp(double s, double lambda_c, double alpha) {
  const double beta = s * alpha;
  return std::max(std::log(lambda_c) / (s + 1.0) - beta - s * alpha, kCExpFloor);
}

AnalysisConstants AnalysisConstants::defaults(double s) { return resolve_constants({}, s); }

void AnalysisConstants::validate() const {
  if (!(s > 1.0)) throw InvalidParams("constants: s must exceed 1");
  if (!(lambda_c > 1.0) || !std::isfinite(lambda_c))
    throw InvalidParams("constants: lambda_c must exceed 1");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidParams("constants: alpha must be positive");
  if (beta != s * alpha) throw InvalidParams("constants: beta must equal s*alpha");
  if (delta_big < 1) throw InvalidParams("constants: delta_big must be a positive integer");
  if (theta < delta_big) throw InvalidParams("constants: theta must be >= delta_big");
  if (!(epsilon_rec > 0.0) || !std::isfinite(epsilon_rec))
    throw InvalidParams("constants: epsilon_rec must be positive");
  if (!(c_exp > 0.0) || !std::isfinite(c_exp)) throw InvalidParams("constants: c_exp must be positive");
}

double AnalysisConstants::recurrence_delta() const { return std::exp(-static_cast<double>(theta)); }

double AnalysisConstants::critical_radius() const { return std::exp(-static_cast<double>(delta_big)); }

double AnalysisConstants::bound_rate() const { return beta + std::log(lambda_c); }

int AnalysisConstants::distortion_depth() const {
  return static_cast<int>(std::ceil(beta * (s + 2.0) * delta_big / bound_rate()));
}

AnalysisConstants resolve_constants(const ConstantsSpec& spec, double s) {
  AnalysisConstants c;
  c.s = s;
  c.lambda_c = spec.lambda_c;
  c.alpha = spec.alpha;
  c.beta = s * spec.alpha;
  c.delta_big = spec.delta_big;
  c.theta = spec.theta.value_or(spec.delta_big);
  c.epsilon_rec = spec.epsilon_rec.value_or(AnalysisConstants::kDefaultEpsilonRec);
  c.c_exp = spec.c_exp.value_or(AnalysisConstants::default_c_exp(s, spec.lambda_c, spec.alpha));
  c.validate();
  return c;
}

}  // namespace rovella
