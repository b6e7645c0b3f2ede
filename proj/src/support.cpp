#include "cdp/support.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "cdp/error.hpp"

namespace cdp {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

double two_sided(const ConfidenceDistribution& cd, double theta) {
  const double h = cd.cdf(theta);
  return 2.0 * std::min(h, 1.0 - h);
}

// Bisection for the point on the far side of the mode where the density falls
// to `level`. `inner` has density >= level, `outer` moves outward until the
// density drops below it.
double level_crossing(const ConfidenceDistribution& cd, double inner, double direction,
                      double level) {
  double step = cd.scale();
  double outer = inner + direction * step;
  while (cd.density(outer) > level) {
    inner = outer;
    step *= 2.0;
    outer = inner + direction * step;
    if (!std::isfinite(outer)) return outer;
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = inner + 0.5 * (outer - inner);
    if (mid == inner || mid == outer) break;
    (cd.density(mid) > level ? inner : outer) = mid;
  }
  return outer;
}

}  // namespace

std::string_view to_string(CombineRule rule) {
  switch (rule) {
    case CombineRule::max_full:
      return "full";
    case CombineRule::max_direct:
      return "max-direct";
    case CombineRule::p_star:
      return "pstar";
    case CombineRule::p_max:
      return "pmax";
  }
  return "unknown";
}

double direct_support(const ConfidenceDistribution& cd, const GeneralizedInterval& piece) {
  if (piece.is_singleton()) return 0.0;
  return clamp01(cd.cdf(piece.hi) - cd.cdf(piece.lo));
}

double direct_support(const ConfidenceDistribution& cd, const NullRegion& region) {
  double total = 0.0;
  for (const auto& piece : region.pieces()) total += direct_support(cd, piece);
  return clamp01(total);
}

double indirect_support(const ConfidenceDistribution& cd, const GeneralizedInterval& piece) {
  if (!piece.is_bounded()) return 0.0;
  return std::min(two_sided(cd, piece.lo), two_sided(cd, piece.hi));
}

double indirect_support(const ConfidenceDistribution& cd, const NullRegion& region) {
  double lowest = 1.0;
  for (const auto& piece : region.pieces()) {
    lowest = std::min(lowest, indirect_support(cd, piece));
  }
  return lowest;
}

double weighted_indirect(const ConfidenceDistribution& cd, double theta0, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    fail(ErrorKind::invalid_argument,
         "weighted indirect support needs gamma in (0,1), got " + std::to_string(gamma));
  }
  const double h = cd.cdf(theta0);
  return clamp01(std::min(h / gamma, (1.0 - h) / (1.0 - gamma)));
}

double extended_indirect_support(const ConfidenceDistribution& cd, const NullRegion& region) {
  if (!cd.has_density()) {
    fail(ErrorKind::invalid_argument, "extended indirect support needs a CD with a density");
  }
  // The density is unimodal about the center, so its infimum over each piece
  // is attained at an endpoint, and any unbounded piece drives it to zero.
  double level = std::numeric_limits<double>::infinity();
  double anchor = cd.center();
  for (const auto& piece : region.pieces()) {
    if (!piece.is_bounded()) return 0.0;
    for (double end : {piece.lo, piece.hi}) {
      const double d = cd.density(end);
      if (d < level) {
        level = d;
        anchor = end;
      }
    }
  }
  if (level <= 0.0) return 0.0;
  // The level set {h <= level} is (-inf, left] U [right, inf), with `anchor`
  // being one of its two edges.
  double left;
  double right;
  if (anchor <= cd.center()) {
    left = anchor;
    right = level_crossing(cd, cd.center(), +1.0, level);
  } else {
    right = anchor;
    left = level_crossing(cd, cd.center(), -1.0, level);
  }
  if (left >= right) return 1.0;
  return clamp01(cd.cdf(left) + (1.0 - cd.cdf(right)));
}

double full_support(const ConfidenceDistribution& cd, const GeneralizedInterval& piece) {
  return clamp01(direct_support(cd, piece) + indirect_support(cd, piece));
}

SupportReport evaluate(const ConfidenceDistribution& cd, const NullRegion& region,
                       CombineRule rule) {
  SupportReport report{{}, 0.0, rule};
  report.pieces.reserve(region.pieces().size());
  for (const auto& piece : region.pieces()) {
    const double direct = direct_support(cd, piece);
    const double indirect = indirect_support(cd, piece);
    report.pieces.push_back({piece, direct, indirect, clamp01(direct + indirect)});
  }

  switch (rule) {
    case CombineRule::max_full:
      for (const auto& s : report.pieces) report.p = std::max(report.p, s.full);
      break;
    case CombineRule::max_direct:
      for (const auto& s : report.pieces) report.p = std::max(report.p, s.direct);
      break;
    case CombineRule::p_star: {
      std::vector<double> fulls;
      for (const auto& s : report.pieces) fulls.push_back(s.full);
      std::sort(fulls.begin(), fulls.end(), std::greater<>());
      report.p = fulls.size() == 1 ? fulls[0] : fulls[0] - fulls[1];
      break;
    }
    case CombineRule::p_max: {
      report.p = direct_support(cd, region);
      for (double v : region.boundary_points()) {
        report.p = std::max(report.p, two_sided(cd, v));
      }
      break;
    }
  }
  report.p = clamp01(report.p);
  return report;
}

SupportReport p_value(const ConfidenceDistribution& cd, const NullRegion& region) {
  return evaluate(cd, region, CombineRule::max_full);
}

double p_star(const ConfidenceDistribution& cd, const NullRegion& region) {
  return evaluate(cd, region, CombineRule::p_star).p;
}

double p_max_uni(const ConfidenceDistribution& cd, const NullRegion& region) {
  return evaluate(cd, region, CombineRule::p_max).p;
}

EquivalenceResult bioeq_p(const EquivalenceSummary& s) {
  if (s.n1 < 2 || s.n2 < 2) {
    fail(ErrorKind::invalid_argument, "equivalence summary needs n1, n2 >= 2");
  }
  if (!std::isfinite(s.mean_test) || !std::isfinite(s.mean_reference)) {
    fail(ErrorKind::invalid_argument, "equivalence summary means must be finite");
  }
  if (!(s.var_d > 0.0) || !std::isfinite(s.var_d)) {
    fail(ErrorKind::invalid_argument, "equivalence summary needs var_d > 0");
  }
  if (std::isnan(s.lower) || std::isnan(s.upper) || !(s.lower < s.upper)) {
    fail(ErrorKind::invalid_argument, "equivalence limits must satisfy theta_l < theta_u");
  }
  const int df = s.n1 + s.n2 - 2;
  const double scale = std::sqrt(s.var_d) * std::sqrt(1.0 / s.n1 + 1.0 / s.n2);
  const auto cd = ConfidenceDistribution::student_t_location_scale(
      s.mean_test - s.mean_reference, scale, df);
  EquivalenceResult result{};
  result.df = df;
  result.lower_tail = cd.cdf(s.lower);
  result.upper_tail = 1.0 - cd.cdf(s.upper);
  result.p = std::max(result.lower_tail, result.upper_tail);
  return result;
}

}  // namespace cdp
