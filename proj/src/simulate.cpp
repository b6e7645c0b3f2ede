#include "cdp/simulate.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <string>

#include "cdp/error.hpp"
#include "cdp/parallel.hpp"
#include "cdp/rng.hpp"
#include "cdp/support.hpp"

namespace cdp {

std::string_view to_string(Model model) {
  return model == Model::univariate_normal ? "univariate-normal" : "bivariate-normal";
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::full:
      return "full";
    case Method::direct:
      return "direct";
    case Method::max_direct:
      return "max-direct";
    case Method::p_star:
      return "pstar";
    case Method::p_max:
      return "pmax";
    case Method::multi:
      return "multi";
    case Method::multi_max:
      return "multi-max";
  }
  return "unknown";
}

void validate(const ExperimentSpec& spec) {
  const std::size_t k = spec.model == Model::univariate_normal ? 1 : 2;
  if (spec.reps < 50) fail(ErrorKind::invalid_argument, "experiment needs reps >= 50");
  if (spec.n < 2) fail(ErrorKind::invalid_argument, "experiment needs n >= 2");
  if (spec.true_mean.size() != k) {
    fail(ErrorKind::invalid_argument, "true mean has dimension " +
                                          std::to_string(spec.true_mean.size()) +
                                          ", model needs " + std::to_string(k));
  }
  if (spec.covariance.size() != k * k) {
    fail(ErrorKind::invalid_argument, "covariance must have " + std::to_string(k * k) + " entries");
  }
  for (double v : spec.true_mean) {
    if (!std::isfinite(v)) fail(ErrorKind::invalid_argument, "true mean must be finite");
  }
  const auto& c = spec.covariance;
  if (k == 1) {
    if (!(c[0] > 0.0) || !std::isfinite(c[0])) fail(ErrorKind::invalid_argument, "variance must be positive");
  } else {
    if (c[1] != c[2]) fail(ErrorKind::invalid_argument, "covariance must be symmetric");
    if (!(c[0] > 0.0) || !(c[0] * c[3] - c[1] * c[2] > 0.0)) {
      fail(ErrorKind::invalid_argument, "covariance must be positive definite");
    }
  }

  const bool multi = spec.method == Method::multi || spec.method == Method::multi_max;
  if (spec.model == Model::univariate_normal) {
    if (multi) fail(ErrorKind::invalid_argument, "multi methods need the bivariate model");
    if (!spec.region) fail(ErrorKind::invalid_argument, "univariate experiment needs a region");
    if (spec.cd == CdKind::bootstrap && spec.boot_reps < 100) {
      fail(ErrorKind::invalid_argument, "bootstrap CD needs boot_reps >= 100");
    }
  } else {
    if (!multi) fail(ErrorKind::invalid_argument, "bivariate model needs method multi or multi-max");
    if (!spec.region_nd) fail(ErrorKind::invalid_argument, "bivariate experiment needs an ND region");
    if (spec.region_nd->dimension() != 2) fail(ErrorKind::invalid_argument, "ND region must be 2-D");
    if (spec.boot_reps < 100) fail(ErrorKind::invalid_argument, "bootstrap needs boot_reps >= 100");
  }
}

double ks_uniform(std::span<const double> pvals) {
  if (pvals.empty()) fail(ErrorKind::invalid_argument, "KS distance of an empty sample");
  std::vector<double> sorted(pvals.begin(), pvals.end());
  for (double p : sorted) {
    if (!(p >= 0.0 && p <= 1.0)) {
      fail(ErrorKind::invalid_argument, "p-value outside [0,1]: " + std::to_string(p));
    }
  }
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - sorted[i],
                  sorted[i] - static_cast<double>(i) / n});
  }
  return d;
}

double UniformityReport::rejection_rate(double alpha) const {
  const auto count = std::upper_bound(sorted_p.begin(), sorted_p.end(), alpha) - sorted_p.begin();
  return static_cast<double>(count) / static_cast<double>(sorted_p.size());
}

double UniformityReport::median() const {
  const std::size_t n = sorted_p.size();
  if (n == 0) return std::nan("");
  return n % 2 ? sorted_p[n / 2] : 0.5 * (sorted_p[n / 2 - 1] + sorted_p[n / 2]);
}

UniformityReport make_report(std::vector<double> pvals) {
  UniformityReport report;
  report.ks = ks_uniform(pvals);
  std::sort(pvals.begin(), pvals.end());
  report.sorted_p = std::move(pvals);
  const double n = static_cast<double>(report.sorted_p.size());
  report.uniform_quantiles.resize(report.sorted_p.size());
  for (std::size_t i = 0; i < report.sorted_p.size(); ++i) {
    report.uniform_quantiles[i] = (static_cast<double>(i) + 0.5) / n;
  }
  for (double alpha : kAlphaGrid) report.rejection.emplace_back(alpha, report.rejection_rate(alpha));
  return report;
}

namespace {

double univariate_p(const ExperimentSpec& spec, Rng& rng, std::uint64_t stream) {
  const double sigma = std::sqrt(spec.covariance[0]);
  std::vector<double> sample(spec.n);
  for (double& y : sample) y = spec.true_mean[0] + sigma * rng.normal();
  const double mean = std::accumulate(sample.begin(), sample.end(), 0.0) / spec.n;
  double ss = 0.0;
  for (double y : sample) ss += (y - mean) * (y - mean);
  const double sd = std::sqrt(ss / static_cast<double>(spec.n - 1));

  const ConfidenceDistribution cd = [&] {
    switch (spec.cd) {
      case CdKind::normal:
        return ConfidenceDistribution::asymptotic_normal(spec.n, mean, sd);
      case CdKind::bootstrap:
        return ConfidenceDistribution::bootstrap(sample, spec.boot_reps, derive_seed(stream, {1}));
      case CdKind::student_t:
        break;
    }
    return ConfidenceDistribution::student_t(spec.n, mean, sd);
  }();

  const NullRegion& region = *spec.region;
  switch (spec.method) {
    case Method::direct:
      return direct_support(cd, region);
    case Method::max_direct:
      return evaluate(cd, region, CombineRule::max_direct).p;
    case Method::p_star:
      return p_star(cd, region);
    case Method::p_max:
      return p_max_uni(cd, region);
    default:
      return p_value(cd, region).p;
  }
}

double bivariate_p(const ExperimentSpec& spec, Rng& rng, std::uint64_t stream) {
  const auto& c = spec.covariance;
  // Cholesky factor of the 2 x 2 covariance
  const double l00 = std::sqrt(c[0]);
  const double l10 = c[2] / l00;
  const double l11 = std::sqrt(c[3] - l10 * l10);
  Matrix data(static_cast<Eigen::Index>(spec.n), 2);
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    const double z0 = rng.normal();
    const double z1 = rng.normal();
    data(i, 0) = spec.true_mean[0] + l00 * z0;
    data(i, 1) = spec.true_mean[1] + l10 * z0 + l11 * z1;
  }
  const BootstrapCloud cloud = bootstrap_cloud(data, spec.boot_reps, derive_seed(stream, {1}));
  const auto depth = make_depth(spec.depth, cloud.points);
  if (spec.method == Method::multi_max) return p_multi_max(cloud, *depth, *spec.region_nd).p;
  return p_multi(cloud, *depth, *spec.region_nd).p;
}

}  // namespace

double replicate_p_value(const ExperimentSpec& spec, std::size_t replication) {
  const std::uint64_t stream = derive_seed(spec.seed, {spec.experiment, replication});
  Rng rng(derive_seed(stream, {0}));
  return spec.model == Model::univariate_normal ? univariate_p(spec, rng, stream)
                                                : bivariate_p(spec, rng, stream);
}

UniformityReport run_experiment(const ExperimentSpec& spec, unsigned threads) {
  validate(spec);
  std::vector<double> pvals(spec.reps);
  parallel_for(spec.reps, threads, [&](std::size_t r) { pvals[r] = replicate_p_value(spec, r); });
  return make_report(std::move(pvals));
}

void write_qq_csv(std::ostream& out, const UniformityReport& report) {
  out << "rank,empirical_p,uniform_quantile\n";
  char buf[64];
  for (std::size_t i = 0; i < report.sorted_p.size(); ++i) {
    out << (i + 1) << ',';
    auto [p1, e1] = std::to_chars(buf, buf + sizeof buf, report.sorted_p[i]);
    out.write(buf, p1 - buf);
    out << ',';
    auto [p2, e2] = std::to_chars(buf, buf + sizeof buf, report.uniform_quantiles[i]);
    out.write(buf, p2 - buf);
    out << '\n';
  }
}

}  // namespace cdp
