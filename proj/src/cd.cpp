#include "cdp/cd.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include <boost/math/special_functions/beta.hpp>

#include "cdp/error.hpp"
#include "cdp/rng.hpp"

namespace cdp {

namespace {

constexpr double kQuantileTolerance = 1e-14;

void require_positive_scale(double sd, const char* what) {
  if (!(sd > 0.0) || !std::isfinite(sd)) {
    fail(ErrorKind::degenerate,
         std::string(what) + ": standard deviation must be positive and finite, got " +
             std::to_string(sd));
  }
}

void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) {
    fail(ErrorKind::invalid_argument, std::string(what) + " must be finite");
  }
}

}  // namespace

std::string_view to_string(CdKind kind) {
  switch (kind) {
    case CdKind::student_t:
      return "t";
    case CdKind::normal:
      return "z";
    case CdKind::bootstrap:
      return "bootstrap";
  }
  return "unknown";
}

double normal_cdf(double z) {
  if (std::isinf(z)) return z < 0 ? 0.0 : 1.0;
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double student_t_cdf(double t, double df) {
  if (std::isinf(t)) return t < 0 ? 0.0 : 1.0;
  if (t == 0.0) return 0.5;
  const double t2 = t * t;
  double lower_tail;
  if (t2 < df) {
    // central mass of (-|t|, |t|) via I_{t^2/(df+t^2)}(1/2, df/2)
    const double central =
        boost::math::ibeta(0.5, 0.5 * df, t2 / (df + t2));
    lower_tail = 0.5 - 0.5 * central;
  } else {
    lower_tail = 0.5 * boost::math::ibeta(0.5 * df, 0.5, df / (df + t2));
  }
  return t < 0 ? lower_tail : 1.0 - lower_tail;
}

ConfidenceDistribution ConfidenceDistribution::student_t(std::size_t n,
                                                         double mean,
                                                         double sd) {
  if (n < 2) {
    fail(ErrorKind::degenerate, "Student-t CD needs n >= 2, got " + std::to_string(n));
  }
  require_finite(mean, "mean");
  require_positive_scale(sd, "Student-t CD");
  return {CdKind::student_t, mean, sd / std::sqrt(static_cast<double>(n)),
          static_cast<int>(n - 1)};
}

ConfidenceDistribution ConfidenceDistribution::asymptotic_normal(std::size_t n,
                                                                 double mean,
                                                                 double sd) {
  if (n < 1) fail(ErrorKind::degenerate, "normal CD needs n >= 1");
  require_finite(mean, "mean");
  require_positive_scale(sd, "normal CD");
  return {CdKind::normal, mean, sd / std::sqrt(static_cast<double>(n)),
          std::nullopt};
}

ConfidenceDistribution ConfidenceDistribution::student_t_location_scale(
    double center, double scale, int df) {
  require_finite(center, "center");
  require_positive_scale(scale, "Student-t CD");
  if (df < 1) fail(ErrorKind::degenerate, "degrees of freedom must be >= 1");
  return {CdKind::student_t, center, scale, df};
}

ConfidenceDistribution ConfidenceDistribution::bootstrap(
    std::span<const double> sample, std::size_t reps, std::uint64_t seed) {
  const std::size_t n = sample.size();
  if (n < 2) fail(ErrorKind::degenerate, "bootstrap CD needs at least 2 observations");
  if (reps < 100) {
    fail(ErrorKind::invalid_argument, "bootstrap CD needs reps >= 100");
  }
  for (double x : sample) require_finite(x, "sample value");

  const double mean = std::accumulate(sample.begin(), sample.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : sample) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(sd > 0.0)) fail(ErrorKind::degenerate, "bootstrap CD: sample is constant");

  ConfidenceDistribution cd(CdKind::bootstrap, mean,
                            sd / std::sqrt(static_cast<double>(n)), std::nullopt);
  Rng rng(seed);
  cd.grid_.resize(reps);
  for (double& replicate : cd.grid_) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += sample[rng.index(n)];
    replicate = sum / static_cast<double>(n);
  }
  std::sort(cd.grid_.begin(), cd.grid_.end());

  // Tied replicates collapse onto one knot carrying the highest rank.
  const double denom = static_cast<double>(reps - 1);
  for (std::size_t i = 0; i < reps; ++i) {
    if (i + 1 < reps && cd.grid_[i + 1] == cd.grid_[i]) continue;
    cd.knots_.push_back(cd.grid_[i]);
    cd.knot_probs_.push_back(static_cast<double>(i) / denom);
  }
  if (cd.knots_.size() < 2) {
    fail(ErrorKind::degenerate, "bootstrap CD: all replicates are identical");
  }
  return cd;
}

double ConfidenceDistribution::standard_cdf(double z) const {
  return kind_ == CdKind::student_t ? student_t_cdf(z, *df_) : normal_cdf(z);
}

double ConfidenceDistribution::cdf(double theta) const {
  if (std::isnan(theta)) fail(ErrorKind::invalid_argument, "cdf: theta is NaN");
  if (std::isinf(theta)) return theta < 0 ? 0.0 : 1.0;
  if (kind_ == CdKind::bootstrap) return bootstrap_cdf(theta);
  return standard_cdf((theta - center_) / scale_);
}

double ConfidenceDistribution::bootstrap_cdf(double theta) const {
  if (theta < knots_.front()) return 0.0;
  if (theta >= knots_.back()) return 1.0;
  const auto upper = std::upper_bound(knots_.begin(), knots_.end(), theta);
  const auto j = static_cast<std::size_t>(upper - knots_.begin()) - 1;
  const double span = knots_[j + 1] - knots_[j];
  const double frac = (theta - knots_[j]) / span;
  return knot_probs_[j] + frac * (knot_probs_[j + 1] - knot_probs_[j]);
}

double ConfidenceDistribution::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) {
    fail(ErrorKind::invalid_argument,
         "quantile: probability must lie in (0,1), got " + std::to_string(p));
  }
  if (kind_ == CdKind::bootstrap) return bootstrap_quantile(p);

  double lo = -1.0;
  double hi = 1.0;
  while (standard_cdf(lo) >= p) lo *= 2.0;
  while (standard_cdf(hi) < p) hi *= 2.0;
  double z = 0.5 * (lo + hi);
  for (;;) {
    z = lo + 0.5 * (hi - lo);
    if (z == lo || z == hi) break;
    const double f = standard_cdf(z);
    if (std::abs(f - p) <= kQuantileTolerance) break;
    (f < p ? lo : hi) = z;
  }
  return center_ + scale_ * z;
}

double ConfidenceDistribution::bootstrap_quantile(double p) const {
  const auto it = std::lower_bound(knot_probs_.begin(), knot_probs_.end(), p);
  const auto j = static_cast<std::size_t>(it - knot_probs_.begin());
  if (j == 0) return knots_.front();
  const double frac = (p - knot_probs_[j - 1]) / (knot_probs_[j] - knot_probs_[j - 1]);
  return knots_[j - 1] + frac * (knots_[j] - knots_[j - 1]);
}

double ConfidenceDistribution::density(double theta) const {
  if (!has_density()) {
    fail(ErrorKind::invalid_argument, "bootstrap CD has no evaluable density");
  }
  if (std::isinf(theta)) return 0.0;
  const double z = (theta - center_) / scale_;
  if (kind_ == CdKind::normal) {
    return std::exp(-0.5 * z * z) / (std::sqrt(2.0 * std::numbers::pi) * scale_);
  }
  const double nu = *df_;
  const double log_norm = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                          0.5 * std::log(nu * std::numbers::pi);
  return std::exp(log_norm - 0.5 * (nu + 1.0) * std::log1p(z * z / nu)) / scale_;
}

}  // namespace cdp
