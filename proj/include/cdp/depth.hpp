#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "cdp/region_nd.hpp"

namespace cdp {

/// Row-major so each replicate is a contiguous span.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline std::span<const double> row_span(const Matrix& m, Eigen::Index row) {
  return {m.data() + row * m.cols(), static_cast<std::size_t>(m.cols())};
}

/// m bootstrap replicates of the mean vector of an n x k sample.
struct BootstrapCloud {
  Matrix points;  // m x k
  std::uint64_t seed = 0;
  std::string_view statistic = "mean-vector";
  std::size_t sample_rows = 0;
  std::size_t sample_cols = 0;

  std::size_t size() const noexcept { return static_cast<std::size_t>(points.rows()); }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(points.cols()); }
};

/// Resamples rows of `data` with replacement `reps` times. Deterministic in
/// `seed`. Requires n >= 2, k in {1, 2}, reps >= 100 and finite data.
BootstrapCloud bootstrap_cloud(const Matrix& data, std::size_t reps, std::uint64_t seed);

enum class DepthKind {
  mahalanobis,
  simplicial,
};

std::string_view to_string(DepthKind kind);

/// Depth of a point relative to a fixed reference cloud. Immutable; safe to
/// evaluate concurrently.
class DepthFunction {
 public:
  virtual ~DepthFunction() = default;
  virtual double operator()(std::span<const double> w) const = 0;
  virtual DepthKind kind() const noexcept = 0;
};

/// [1 + (w - mu)' S^{-1} (w - mu)]^{-1} with mu, S the cloud mean and
/// sample covariance. Any dimension; throws Error(degenerate) when S is
/// singular.
class MahalanobisDepth final : public DepthFunction {
 public:
  explicit MahalanobisDepth(const Matrix& cloud);
  double operator()(std::span<const double> w) const override;
  DepthKind kind() const noexcept override { return DepthKind::mahalanobis; }

  const Eigen::VectorXd& mean() const noexcept { return mean_; }
  const Eigen::MatrixXd& covariance() const noexcept { return covariance_; }

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd covariance_;
  Eigen::LDLT<Eigen::MatrixXd> solver_;
};

/// Sample simplicial depth in the plane: the fraction of the C(m,3) closed
/// triangles spanned by cloud points that contain w. Evaluated exactly in
/// O(m log m) by sorting the cloud angularly around w.
class SimplicialDepth final : public DepthFunction {
 public:
  explicit SimplicialDepth(const Matrix& cloud);
  double operator()(std::span<const double> w) const override;
  DepthKind kind() const noexcept override { return DepthKind::simplicial; }

  /// Number of closed triangles containing w.
  std::uint64_t containing_triangles(std::span<const double> w) const;
  std::uint64_t total_triangles() const noexcept { return total_; }

 private:
  std::vector<double> xs_;
  std::vector<double> ys_;
  std::uint64_t total_;
};

std::unique_ptr<DepthFunction> make_depth(DepthKind kind, const Matrix& cloud);

/// Sign of the 2-D cross product a x b, exact for all finite inputs.
int orientation_sign(double ax, double ay, double bx, double by) noexcept;

/// Depth of every cloud point relative to the cloud, evaluated on up to
/// `threads` workers; the result does not depend on the worker count.
std::vector<double> replicate_depths(const BootstrapCloud& cloud, const DepthFunction& depth,
                                     unsigned threads = 1);

struct MultiPValue {
  double inside_fraction;  // part [i]
  double outer_fraction;   // part [ii]
  double p;
  double depth_floor;      // d0
  bool floor_from_boundary;
  std::size_t inside_count;
};

/// Fraction of replicates inside the region plus the fraction outside it
/// whose depth is at most d0, the smallest depth among inside replicates (or,
/// with none inside, over the region's boundary grid). Clamped to [0,1].
MultiPValue p_multi(const BootstrapCloud& cloud, const DepthFunction& depth,
                    const RegionND& region, unsigned threads = 1);

/// Same, reusing precomputed replicate depths.
MultiPValue p_multi(const BootstrapCloud& cloud, std::span<const double> depths,
                    const DepthFunction& depth, const RegionND& region);

/// Fraction of replicates with depth <= depth(theta0).
double p_singleton(std::span<const double> depths, const DepthFunction& depth,
                   std::span<const double> theta0);

struct MultiMaxPValue {
  MultiPValue region;
  std::vector<double> corner_p;
  double p;
};

/// max{p_multi(region), p_singleton(c) for each designated corner c}.
MultiMaxPValue p_multi_max(const BootstrapCloud& cloud, const DepthFunction& depth,
                           const RegionND& region, unsigned threads = 1);

}  // namespace cdp
