#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "cdp/cd.hpp"
#include "cdp/depth.hpp"
#include "cdp/region.hpp"
#include "cdp/region_nd.hpp"

namespace cdp {

enum class Model {
  univariate_normal,
  bivariate_normal,
};

enum class Method {
  full,
  direct,
  max_direct,
  p_star,
  p_max,
  multi,
  multi_max,
};

std::string_view to_string(Model model);
std::string_view to_string(Method method);

/// Covariance of the bivariate normal used for the two-dimensional studies.
inline constexpr std::array<double, 4> kBivariatePresetCovariance = {1.0, 0.8, 0.8, 4.0};

/// Significance levels at which empirical rejection rates are reported.
inline constexpr std::array<double, 3> kAlphaGrid = {0.01, 0.05, 0.10};

struct ExperimentSpec {
  Model model = Model::univariate_normal;
  std::vector<double> true_mean{0.0};
  std::vector<double> covariance{1.0};  // k x k, row-major
  std::optional<NullRegion> region;     // univariate model
  std::optional<RegionND> region_nd;    // bivariate model
  std::size_t n = 200;
  std::size_t reps = 2000;
  Method method = Method::full;
  CdKind cd = CdKind::student_t;
  std::size_t boot_reps = 500;
  DepthKind depth = DepthKind::simplicial;
  std::uint64_t seed = 1;
  std::uint64_t experiment = 0;
};

/// Throws Error(invalid_argument) when fields are inconsistent.
void validate(const ExperimentSpec& spec);

struct UniformityReport {
  std::vector<double> sorted_p;
  std::vector<double> uniform_quantiles;  // (i - 0.5) / reps
  double ks = 0.0;
  std::vector<std::pair<double, double>> rejection;  // (alpha, rate)

  double rejection_rate(double alpha) const;
  double median() const;
};

/// One-sample Kolmogorov-Smirnov distance to Uniform[0,1].
double ks_uniform(std::span<const double> pvals);

/// Sorts, computes plotting positions, the KS distance and the rejection
/// rates over kAlphaGrid.
UniformityReport make_report(std::vector<double> pvals);

/// p-value of replication `replication`. Its random stream derives only from
/// (seed, experiment, replication).
double replicate_p_value(const ExperimentSpec& spec, std::size_t replication);

/// Simulates spec.reps datasets and summarizes their p-values. Replications
/// run on up to `threads` workers; the report is identical for any count.
UniformityReport run_experiment(const ExperimentSpec& spec, unsigned threads = 1);

/// CSV with columns rank, empirical_p, uniform_quantile.
void write_qq_csv(std::ostream& out, const UniformityReport& report);

}  // namespace cdp
