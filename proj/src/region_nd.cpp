#include "cdp/region_nd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cdp/error.hpp"

namespace cdp {

namespace {

constexpr double kCornerTolerance = 1e-9;

void require_dim(const Point& p, std::size_t dim, const char* what) {
  if (p.size() != dim) {
    fail(ErrorKind::invalid_argument,
         std::string(what) + " has dimension " + std::to_string(p.size()) +
             ", expected " + std::to_string(dim));
  }
  for (double v : p) {
    if (std::isnan(v)) fail(ErrorKind::invalid_argument, std::string(what) + " contains NaN");
  }
}

void require_finite(const Point& p, const char* what) {
  for (double v : p) {
    if (!std::isfinite(v)) fail(ErrorKind::invalid_argument, std::string(what) + " must be finite");
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

RegionND RegionND::rectangle(Point lower, Point upper,
                             std::optional<std::vector<Point>> corners) {
  const std::size_t dim = lower.size();
  if (dim == 0) fail(ErrorKind::invalid_argument, "rectangle needs at least one axis");
  require_dim(lower, dim, "rectangle lower bound");
  require_dim(upper, dim, "rectangle upper bound");
  for (std::size_t i = 0; i < dim; ++i) {
    if (lower[i] > upper[i]) {
      fail(ErrorKind::invalid_argument,
           "rectangle axis " + std::to_string(i) + " has lower > upper");
    }
  }
  std::vector<Point> vertices;
  if (!corners) {
    const std::size_t count = std::size_t{1} << dim;
    for (std::size_t mask = 0; mask < count; ++mask) {
      Point v(dim);
      bool finite = true;
      for (std::size_t i = 0; i < dim; ++i) {
        v[i] = (mask >> i) & 1U ? upper[i] : lower[i];
        finite = finite && std::isfinite(v[i]);
      }
      if (finite && std::find(vertices.begin(), vertices.end(), v) == vertices.end()) {
        vertices.push_back(std::move(v));
      }
    }
  }
  RegionND region(Rectangle{std::move(lower), std::move(upper)}, dim);
  region.set_corners(corners ? std::move(*corners) : std::move(vertices));
  return region;
}

RegionND RegionND::halfspace(Point normal, double offset, std::vector<Point> corners) {
  const std::size_t dim = normal.size();
  if (dim == 0) fail(ErrorKind::invalid_argument, "half-space needs at least one axis");
  require_finite(normal, "half-space normal");
  if (!std::isfinite(offset)) fail(ErrorKind::invalid_argument, "half-space offset must be finite");
  if (dot(normal, normal) == 0.0) fail(ErrorKind::invalid_argument, "half-space normal is zero");
  RegionND region(HalfSpace{std::move(normal), offset}, dim);
  region.set_corners(std::move(corners));
  return region;
}

RegionND RegionND::quadrant_complement(Point apex, std::vector<int> orientation,
                                       std::vector<Point> corners) {
  const std::size_t dim = apex.size();
  if (dim == 0) fail(ErrorKind::invalid_argument, "quadrant complement needs at least one axis");
  require_finite(apex, "quadrant apex");
  if (orientation.empty()) orientation.assign(dim, 1);
  if (orientation.size() != dim) {
    fail(ErrorKind::invalid_argument, "quadrant orientation has the wrong dimension");
  }
  for (int s : orientation) {
    if (s != 1 && s != -1) fail(ErrorKind::invalid_argument, "quadrant orientation must be +1 or -1");
  }
  RegionND region(QuadrantComplement{std::move(apex), std::move(orientation)}, dim);
  region.set_corners(std::move(corners));
  return region;
}

RegionND RegionND::point_set(std::vector<Point> points,
                             std::optional<std::vector<Point>> corners) {
  if (points.empty()) fail(ErrorKind::invalid_argument, "point set is empty");
  const std::size_t dim = points.front().size();
  if (dim == 0) fail(ErrorKind::invalid_argument, "point set needs at least one axis");
  for (const auto& p : points) {
    require_dim(p, dim, "point");
    require_finite(p, "point");
  }
  std::vector<Point> defaults = corners ? std::vector<Point>{} : points;
  RegionND region(PointSet{std::move(points)}, dim);
  region.set_corners(corners ? std::move(*corners) : std::move(defaults));
  return region;
}

void RegionND::set_corners(std::vector<Point> corners) {
  for (const auto& c : corners) {
    require_dim(c, dim_, "corner");
    require_finite(c, "corner");
    if (!on_boundary(c, kCornerTolerance)) {
      fail(ErrorKind::invalid_argument, "designated corner does not lie on the region boundary");
    }
  }
  corners_ = std::move(corners);
}

std::string_view RegionND::shape_name() const noexcept {
  switch (shape_.index()) {
    case 0:
      return "rectangle";
    case 1:
      return "halfspace";
    case 2:
      return "quadrant-complement";
    default:
      return "points";
  }
}

bool RegionND::contains(std::span<const double> x) const {
  if (x.size() != dim_) fail(ErrorKind::invalid_argument, "point dimension mismatch");
  if (const auto* r = std::get_if<Rectangle>(&shape_)) {
    for (std::size_t i = 0; i < dim_; ++i) {
      if (!(r->lower[i] <= x[i] && x[i] <= r->upper[i])) return false;
    }
    return true;
  }
  if (const auto* h = std::get_if<HalfSpace>(&shape_)) {
    return dot(h->normal, x) <= h->offset;
  }
  if (const auto* q = std::get_if<QuadrantComplement>(&shape_)) {
    for (std::size_t i = 0; i < dim_; ++i) {
      if (!(q->orientation[i] * (x[i] - q->apex[i]) > 0.0)) return true;
    }
    return false;
  }
  const auto& pts = std::get<PointSet>(shape_).points;
  return std::any_of(pts.begin(), pts.end(), [&](const Point& p) {
    return std::equal(p.begin(), p.end(), x.begin(), x.end());
  });
}

bool RegionND::on_boundary(std::span<const double> x, double tol) const {
  if (x.size() != dim_) return false;
  if (const auto* r = std::get_if<Rectangle>(&shape_)) {
    bool touches = false;
    for (std::size_t i = 0; i < dim_; ++i) {
      if (x[i] < r->lower[i] - tol || x[i] > r->upper[i] + tol) return false;
      touches = touches || std::abs(x[i] - r->lower[i]) <= tol ||
                std::abs(x[i] - r->upper[i]) <= tol;
    }
    return touches;
  }
  if (const auto* h = std::get_if<HalfSpace>(&shape_)) {
    const double norm = std::sqrt(dot(h->normal, h->normal));
    return std::abs(dot(h->normal, x) - h->offset) <= tol * norm;
  }
  if (const auto* q = std::get_if<QuadrantComplement>(&shape_)) {
    bool touches = false;
    for (std::size_t i = 0; i < dim_; ++i) {
      const double signed_offset = q->orientation[i] * (x[i] - q->apex[i]);
      if (signed_offset < -tol) return false;
      touches = touches || std::abs(signed_offset) <= tol;
    }
    return touches;
  }
  const auto& pts = std::get<PointSet>(shape_).points;
  return std::any_of(pts.begin(), pts.end(), [&](const Point& p) {
    for (std::size_t i = 0; i < dim_; ++i) {
      if (std::abs(p[i] - x[i]) > tol) return false;
    }
    return true;
  });
}

std::vector<Point> RegionND::boundary_grid(std::span<const double> box_lo,
                                           std::span<const double> box_hi) const {
  if (dim_ > 2) {
    fail(ErrorKind::invalid_argument, "boundary grid is only available for 1 or 2 dimensions");
  }
  if (box_lo.size() != dim_ || box_hi.size() != dim_) {
    fail(ErrorKind::invalid_argument, "bounding box dimension mismatch");
  }
  std::vector<Point> grid;

  if (const auto* pts = std::get_if<PointSet>(&shape_)) return pts->points;

  if (const auto* r = std::get_if<Rectangle>(&shape_)) {
    Point lo(dim_), hi(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      lo[i] = r->lower[i];
      hi[i] = r->upper[i];
      if (std::isinf(lo[i])) lo[i] = std::isfinite(hi[i]) ? std::min(box_lo[i], hi[i]) : box_lo[i];
      if (std::isinf(hi[i])) hi[i] = std::max(box_hi[i], lo[i]);
    }
    if (dim_ == 1) return {{lo[0]}, {hi[0]}};
    const Point vertex[4] = {{lo[0], lo[1]}, {hi[0], lo[1]}, {hi[0], hi[1]}, {lo[0], hi[1]}};
    constexpr int kPerEdge = 64;
    for (int e = 0; e < 4; ++e) {
      const Point& a = vertex[e];
      const Point& b = vertex[(e + 1) % 4];
      grid.push_back(a);
      for (int t = 1; t <= kPerEdge; ++t) {
        const double f = static_cast<double>(t) / (kPerEdge + 1);
        grid.push_back({a[0] + f * (b[0] - a[0]), a[1] + f * (b[1] - a[1])});
      }
    }
    return grid;
  }

  if (const auto* h = std::get_if<HalfSpace>(&shape_)) {
    const double nn = dot(h->normal, h->normal);
    if (dim_ == 1) return {{h->offset / h->normal[0]}};
    const Point origin = {h->normal[0] * h->offset / nn, h->normal[1] * h->offset / nn};
    const Point dir = {-h->normal[1], h->normal[0]};
    double tmin = std::numeric_limits<double>::infinity();
    double tmax = -tmin;
    for (double cx : {box_lo[0], box_hi[0]}) {
      for (double cy : {box_lo[1], box_hi[1]}) {
        const double t = ((cx - origin[0]) * dir[0] + (cy - origin[1]) * dir[1]) / nn;
        tmin = std::min(tmin, t);
        tmax = std::max(tmax, t);
      }
    }
    constexpr int kPoints = 129;
    for (int j = 0; j < kPoints; ++j) {
      const double t = tmin + (tmax - tmin) * j / (kPoints - 1);
      grid.push_back({origin[0] + t * dir[0], origin[1] + t * dir[1]});
    }
    return grid;
  }

  const auto& q = std::get<QuadrantComplement>(shape_);
  if (dim_ == 1) return {q.apex};
  constexpr int kPerRay = 64;
  grid.push_back(q.apex);
  for (std::size_t axis = 0; axis < 2; ++axis) {
    const double s = q.orientation[axis];
    const double reach = std::max(0.0, s > 0 ? box_hi[axis] - q.apex[axis]
                                             : q.apex[axis] - box_lo[axis]);
    if (reach == 0.0) continue;
    for (int j = 1; j <= kPerRay; ++j) {
      Point p = q.apex;
      p[axis] += s * reach * j / kPerRay;
      grid.push_back(std::move(p));
    }
  }
  return grid;
}

}  // namespace cdp
