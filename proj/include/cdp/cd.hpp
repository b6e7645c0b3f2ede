#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace cdp {

enum class CdKind {
  student_t,
  normal,
  bootstrap,
};

std::string_view to_string(CdKind kind);

/// A confidence distribution H_n for a scalar parameter: a sample-dependent
/// c.d.f. on the extended real line. Instances are immutable once built and
/// may be evaluated concurrently.
///
/// The exact kinds are location-scale families:
///   student_t  H(t) = F_{t_df}((t - center) / scale)
///   normal     H(t) = Phi((t - center) / scale)
/// The bootstrap kind linearly interpolates the empirical c.d.f. of the
/// resampled means between distinct order statistics, so it is continuous and
/// strictly increasing between the smallest and largest replicate.
class ConfidenceDistribution {
 public:
  /// H(t) = F_{t_{n-1}}(sqrt(n) (t - mean) / sd). Requires n >= 2, sd > 0.
  static ConfidenceDistribution student_t(std::size_t n, double mean, double sd);

  /// H(t) = Phi(sqrt(n) (t - mean) / sd). Requires n >= 1, sd > 0.
  static ConfidenceDistribution asymptotic_normal(std::size_t n, double mean,
                                                  double sd);

  /// Student-t family with an explicit location, scale and degrees of freedom.
  static ConfidenceDistribution student_t_location_scale(double center,
                                                         double scale, int df);

  /// Interpolated c.d.f. of `reps` bootstrap means of `sample`.
  /// Requires at least 2 observations, reps >= 100 and a non-constant sample.
  static ConfidenceDistribution bootstrap(std::span<const double> sample,
                                          std::size_t reps, std::uint64_t seed);

  CdKind kind() const noexcept { return kind_; }
  double center() const noexcept { return center_; }
  double scale() const noexcept { return scale_; }
  std::optional<int> df() const noexcept { return df_; }

  /// Sorted replicate means (bootstrap kind only; empty otherwise).
  std::span<const double> grid() const noexcept { return grid_; }

  /// Defined for every theta including +-infinity. NaN is rejected.
  double cdf(double theta) const;

  /// Smallest theta with cdf(theta) = p, found by bisection on cdf itself.
  /// Requires 0 < p < 1.
  double quantile(double p) const;

  bool has_density() const noexcept { return kind_ != CdKind::bootstrap; }

  /// Density dH/dtheta. Throws for the bootstrap kind.
  double density(double theta) const;

 private:
  ConfidenceDistribution(CdKind kind, double center, double scale,
                         std::optional<int> df)
      : kind_(kind), center_(center), scale_(scale), df_(df) {}

  double standard_cdf(double z) const;
  double bootstrap_cdf(double theta) const;
  double bootstrap_quantile(double p) const;

  CdKind kind_;
  double center_;
  double scale_;
  std::optional<int> df_;
  // bootstrap kind: distinct sorted replicate values and the c.d.f. at each
  std::vector<double> grid_;
  std::vector<double> knots_;
  std::vector<double> knot_probs_;
};

/// Standard normal c.d.f.
double normal_cdf(double z);

/// Student-t c.d.f. with `df` degrees of freedom.
double student_t_cdf(double t, double df);

}  // namespace cdp
