#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace cdp {

using Point = std::vector<double>;

/// Axis-aligned box; bounds may be infinite.
struct Rectangle {
  Point lower;
  Point upper;
};

/// {x : normal . x <= offset}
struct HalfSpace {
  Point normal;
  double offset = 0.0;
};

/// Complement of the open orthant {x : s_i (x_i - apex_i) > 0 for all i},
/// with s_i = orientation[i] in {+1, -1}.
struct QuadrantComplement {
  Point apex;
  std::vector<int> orientation;
};

/// Finite set of points.
struct PointSet {
  std::vector<Point> points;
};

/// Multivariate null region with its designated non-smooth boundary points
/// ("corners").
class RegionND {
 public:
  using Shape = std::variant<Rectangle, HalfSpace, QuadrantComplement, PointSet>;

  /// Corners default to the box vertices with all-finite coordinates.
  static RegionND rectangle(Point lower, Point upper,
                            std::optional<std::vector<Point>> corners = std::nullopt);
  static RegionND halfspace(Point normal, double offset,
                            std::vector<Point> corners = {});
  /// Orientation defaults to all +1. No corner is inferred.
  static RegionND quadrant_complement(Point apex, std::vector<int> orientation = {},
                                      std::vector<Point> corners = {});
  /// Corners default to the points themselves.
  static RegionND point_set(std::vector<Point> points,
                            std::optional<std::vector<Point>> corners = std::nullopt);

  std::size_t dimension() const noexcept { return dim_; }
  const Shape& shape() const noexcept { return shape_; }
  std::string_view shape_name() const noexcept;
  const std::vector<Point>& corners() const noexcept { return corners_; }

  /// Closed-set membership.
  bool contains(std::span<const double> x) const;

  bool on_boundary(std::span<const double> x, double tol) const;

  /// Deterministic finite sample of the boundary, used to approximate an
  /// infimum over the region when no replicate lies inside it. Infinite
  /// extents are clipped to the box [box_lo, box_hi]. Rectangles get the 4
  /// corners plus 64 points per edge, half-spaces 129 points on the segment of
  /// the boundary line spanning the box, quadrant complements 65 points per
  /// ray. Supports dimensions 1 and 2.
  std::vector<Point> boundary_grid(std::span<const double> box_lo,
                                   std::span<const double> box_hi) const;

 private:
  RegionND(Shape shape, std::size_t dim) : shape_(std::move(shape)), dim_(dim) {}
  void set_corners(std::vector<Point> corners);

  Shape shape_;
  std::size_t dim_;
  std::vector<Point> corners_;
};

}  // namespace cdp
