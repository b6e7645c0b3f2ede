#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "cdp/depth.hpp"
#include "cdp/error.hpp"

namespace cdp {

namespace {

std::uint64_t choose3(std::uint64_t n) {
  return n < 3 ? 0 : n * (n - 1) * (n - 2) / 6;
}

std::uint64_t choose2(std::uint64_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

struct Offset {
  double x;
  double y;
};

// 0 for angles in [0, pi), 1 for [pi, 2 pi).
int half_plane(const Offset& v) { return (v.y > 0.0 || (v.y == 0.0 && v.x > 0.0)) ? 0 : 1; }

int cross_sign(const Offset& a, const Offset& b) { return orientation_sign(a.x, a.y, b.x, b.y); }

}  // namespace

int orientation_sign(double ax, double ay, double bx, double by) noexcept {
  const double left = ax * by;
  const double right = ay * bx;
  const double det = left - right;
  const double magnitude = std::abs(left) + std::abs(right);
  // Both products and the difference carry at most one rounding each.
  const double bound = 3.3306690738754716e-16 * magnitude;
  if (magnitude > 1e-280) {
    if (det > bound) return 1;
    if (-det > bound) return -1;
  }
  // 113-bit significand holds a product of two doubles exactly; the rounded
  // difference keeps the exact sign.
  const __float128 exact =
      static_cast<__float128>(ax) * by - static_cast<__float128>(ay) * bx;
  return (exact > 0) - (exact < 0);
}

SimplicialDepth::SimplicialDepth(const Matrix& cloud) {
  if (cloud.cols() != 2) {
    fail(ErrorKind::invalid_argument, "simplicial depth is only supported in 2 dimensions");
  }
  if (cloud.rows() < 3) fail(ErrorKind::invalid_argument, "simplicial depth needs m >= 3 points");
  const auto m = static_cast<std::size_t>(cloud.rows());
  xs_.resize(m);
  ys_.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    xs_[i] = cloud(static_cast<Eigen::Index>(i), 0);
    ys_[i] = cloud(static_cast<Eigen::Index>(i), 1);
    if (!std::isfinite(xs_[i]) || !std::isfinite(ys_[i])) {
      fail(ErrorKind::invalid_argument, "simplicial depth: cloud has non-finite values");
    }
  }
  total_ = choose3(m);
}

// A closed triangle misses w exactly when its three offsets lie in an open
// half-plane through w. Such a triple is counted once, at its most clockwise
// member (ties in direction broken by sort position), as a pair chosen from the
// offsets lying within the following half-turn.
std::uint64_t SimplicialDepth::containing_triangles(std::span<const double> w) const {
  if (w.size() != 2) fail(ErrorKind::invalid_argument, "simplicial depth query must be 2-D");
  const std::size_t m = xs_.size();
  std::vector<Offset> offsets;
  offsets.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Offset v{xs_[i] - w[0], ys_[i] - w[1]};
    if (v.x != 0.0 || v.y != 0.0) offsets.push_back(v);
  }
  const std::uint64_t nonzero = offsets.size();
  // every triangle with a vertex at w contains it
  const std::uint64_t with_vertex_at_w = choose3(m) - choose3(nonzero);
  if (nonzero < 3) return with_vertex_at_w;

  std::sort(offsets.begin(), offsets.end(), [](const Offset& a, const Offset& b) {
    const int ha = half_plane(a);
    const int hb = half_plane(b);
    if (ha != hb) return ha < hb;
    return cross_sign(a, b) > 0;
  });

  // Collapse equal directions.
  std::vector<Offset> direction;
  std::vector<std::uint64_t> size;
  for (const auto& v : offsets) {
    if (!direction.empty() && half_plane(direction.back()) == half_plane(v) &&
        cross_sign(direction.back(), v) == 0) {
      ++size.back();
    } else {
      direction.push_back(v);
      size.push_back(1);
    }
  }
  const std::size_t groups = direction.size();
  std::vector<std::uint64_t> prefix(2 * groups + 1, 0);
  for (std::size_t i = 0; i < 2 * groups; ++i) prefix[i + 1] = prefix[i] + size[i % groups];

  std::uint64_t in_open_half_plane = 0;
  std::size_t end = 0;
  for (std::size_t g = 0; g < groups; ++g) {
    end = std::max(end, g + 1);
    while (end < g + groups && cross_sign(direction[g], direction[end % groups]) > 0) ++end;
    const std::uint64_t ahead = prefix[end] - prefix[g + 1];
    for (std::uint64_t r = 0; r < size[g]; ++r) {
      in_open_half_plane += choose2(size[g] - 1 - r + ahead);
    }
  }
  return with_vertex_at_w + (choose3(nonzero) - in_open_half_plane);
}

double SimplicialDepth::operator()(std::span<const double> w) const {
  return static_cast<double>(containing_triangles(w)) / static_cast<double>(total_);
}

}  // namespace cdp
