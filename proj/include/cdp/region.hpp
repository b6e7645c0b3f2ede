#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cdp {

/// Closed interval [lo, hi] over the extended reals. lo == hi is a singleton;
/// infinite endpoints give half-lines or the whole line.
struct GeneralizedInterval {
  double lo;
  double hi;

  bool is_singleton() const noexcept { return lo == hi; }
  bool is_bounded() const noexcept;
  bool contains(double theta) const noexcept { return lo <= theta && theta <= hi; }

  friend bool operator==(const GeneralizedInterval&, const GeneralizedInterval&) = default;
};

/// Univariate null space: a finite union of closed generalized intervals,
/// stored sorted with strictly positive gaps between consecutive pieces.
class NullRegion {
 public:
  /// Validates and normalizes: sorts, then merges overlapping or touching
  /// pieces. Rejects an empty list, NaN endpoints, lo > hi, and singletons at
  /// infinity.
  explicit NullRegion(std::vector<GeneralizedInterval> pieces);

  /// Grammar: pieces separated by ';', each one of
  ///   a          singleton {a}
  ///   [a,b]      closed interval
  ///   (-inf,a]   left half-line ([-inf,a] is accepted too)
  ///   [b,inf)    right half-line ([b,inf] is accepted too)
  /// Whitespace around tokens is ignored. Throws Error(parse) naming the
  /// offending token.
  static NullRegion parse(std::string_view text);

  /// Canonical text that parse() maps back to the same region.
  std::string format() const;

  const std::vector<GeneralizedInterval>& pieces() const noexcept { return pieces_; }

  bool contains(double theta) const noexcept;

  /// Every finite endpoint, ascending, without duplicates.
  std::vector<double> boundary_points() const;

  friend bool operator==(const NullRegion&, const NullRegion&) = default;

 private:
  std::vector<GeneralizedInterval> pieces_;
};

/// Shortest decimal text that reads back to the same double; "inf"/"-inf" for
/// infinities.
std::string format_number(double value);

}  // namespace cdp
