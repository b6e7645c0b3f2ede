#include "cdp/depth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cdp/error.hpp"
#include "cdp/parallel.hpp"
#include "cdp/rng.hpp"

namespace cdp {

std::string_view to_string(DepthKind kind) {
  return kind == DepthKind::mahalanobis ? "mahalanobis" : "simplicial";
}

BootstrapCloud bootstrap_cloud(const Matrix& data, std::size_t reps, std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(data.rows());
  const auto k = static_cast<std::size_t>(data.cols());
  if (n < 2) fail(ErrorKind::invalid_argument, "bootstrap needs at least 2 observations");
  if (k != 1 && k != 2) {
    fail(ErrorKind::invalid_argument, "bootstrap cloud supports 1 or 2 columns, got " + std::to_string(k));
  }
  if (reps < 100) fail(ErrorKind::invalid_argument, "bootstrap needs at least 100 replicates");
  if (!data.allFinite()) fail(ErrorKind::invalid_argument, "bootstrap data contains non-finite values");

  BootstrapCloud cloud;
  cloud.points.resize(static_cast<Eigen::Index>(reps), static_cast<Eigen::Index>(k));
  cloud.seed = seed;
  cloud.sample_rows = n;
  cloud.sample_cols = k;
  Rng rng(seed);
  for (Eigen::Index r = 0; r < cloud.points.rows(); ++r) {
    Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < n; ++i) {
      sum += data.row(static_cast<Eigen::Index>(rng.index(n)));
    }
    cloud.points.row(r) = sum / static_cast<double>(n);
  }
  return cloud;
}

MahalanobisDepth::MahalanobisDepth(const Matrix& cloud) {
  const Eigen::Index m = cloud.rows();
  const Eigen::Index k = cloud.cols();
  if (k < 1 || m < k + 1) {
    fail(ErrorKind::degenerate, "Mahalanobis depth needs more points than dimensions");
  }
  mean_ = cloud.colwise().mean().transpose();
  const Eigen::MatrixXd centered = cloud.rowwise() - mean_.transpose();
  covariance_ = centered.transpose() * centered / static_cast<double>(m - 1);

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(covariance_, Eigen::EigenvaluesOnly);
  const double largest = eigen.eigenvalues().maxCoeff();
  const double smallest = eigen.eigenvalues().minCoeff();
  if (!(largest > 0.0) || smallest <= 1e-12 * largest) {
    fail(ErrorKind::degenerate, "degenerate cloud: covariance matrix is singular");
  }
  solver_.compute(covariance_);
}

double MahalanobisDepth::operator()(std::span<const double> w) const {
  if (static_cast<Eigen::Index>(w.size()) != mean_.size()) {
    fail(ErrorKind::invalid_argument, "Mahalanobis depth query has the wrong dimension");
  }
  const Eigen::VectorXd d =
      Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size())) - mean_;
  const double q = d.dot(solver_.solve(d));
  return 1.0 / (1.0 + q);
}

std::unique_ptr<DepthFunction> make_depth(DepthKind kind, const Matrix& cloud) {
  if (kind == DepthKind::mahalanobis) return std::make_unique<MahalanobisDepth>(cloud);
  return std::make_unique<SimplicialDepth>(cloud);
}

std::vector<double> replicate_depths(const BootstrapCloud& cloud, const DepthFunction& depth,
                                     unsigned threads) {
  std::vector<double> depths(cloud.size());
  parallel_for(cloud.size(), threads, [&](std::size_t i) {
    depths[i] = depth(row_span(cloud.points, static_cast<Eigen::Index>(i)));
  });
  return depths;
}

MultiPValue p_multi(const BootstrapCloud& cloud, std::span<const double> depths,
                    const DepthFunction& depth, const RegionND& region) {
  const std::size_t m = cloud.size();
  if (m == 0) fail(ErrorKind::invalid_argument, "bootstrap cloud is empty");
  if (region.dimension() != cloud.dimension()) {
    fail(ErrorKind::invalid_argument, "region and cloud dimensions differ");
  }
  if (depths.size() != m) fail(ErrorKind::invalid_argument, "depth vector does not match cloud");

  std::vector<char> inside(m);
  MultiPValue result{};
  result.depth_floor = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    inside[i] = region.contains(row_span(cloud.points, static_cast<Eigen::Index>(i)));
    if (inside[i]) {
      ++result.inside_count;
      result.depth_floor = std::min(result.depth_floor, depths[i]);
    }
  }
  if (result.inside_count == 0) {
    result.floor_from_boundary = true;
    const Eigen::VectorXd lo = cloud.points.colwise().minCoeff().transpose();
    const Eigen::VectorXd hi = cloud.points.colwise().maxCoeff().transpose();
    const auto grid = region.boundary_grid({lo.data(), static_cast<std::size_t>(lo.size())},
                                           {hi.data(), static_cast<std::size_t>(hi.size())});
    for (const auto& point : grid) {
      result.depth_floor = std::min(result.depth_floor, depth(point));
    }
  }
  std::size_t outer = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!inside[i] && depths[i] <= result.depth_floor) ++outer;
  }
  result.inside_fraction = static_cast<double>(result.inside_count) / static_cast<double>(m);
  result.outer_fraction = static_cast<double>(outer) / static_cast<double>(m);
  result.p = std::clamp(result.inside_fraction + result.outer_fraction, 0.0, 1.0);
  return result;
}

MultiPValue p_multi(const BootstrapCloud& cloud, const DepthFunction& depth,
                    const RegionND& region, unsigned threads) {
  const auto depths = replicate_depths(cloud, depth, threads);
  return p_multi(cloud, depths, depth, region);
}

double p_singleton(std::span<const double> depths, const DepthFunction& depth,
                   std::span<const double> theta0) {
  if (depths.empty()) fail(ErrorKind::invalid_argument, "no replicate depths");
  const double level = depth(theta0);
  const auto count = std::count_if(depths.begin(), depths.end(),
                                   [level](double d) { return d <= level; });
  return static_cast<double>(count) / static_cast<double>(depths.size());
}

MultiMaxPValue p_multi_max(const BootstrapCloud& cloud, const DepthFunction& depth,
                           const RegionND& region, unsigned threads) {
  const auto depths = replicate_depths(cloud, depth, threads);
  MultiMaxPValue result{p_multi(cloud, depths, depth, region), {}, 0.0};
  result.p = result.region.p;
  for (const auto& corner : region.corners()) {
    const double pc = p_singleton(depths, depth, corner);
    result.corner_p.push_back(pc);
    result.p = std::max(result.p, pc);
  }
  return result;
}

}  // namespace cdp
