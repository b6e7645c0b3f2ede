#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cdp/region_nd.hpp"
#include "cdp/simulate.hpp"

namespace cdp {

/// Flat key = value text. '#' starts a comment; blank lines are ignored;
/// keys are case-sensitive and may appear once.
class KeyValues {
 public:
  static KeyValues parse(std::string_view text);
  static KeyValues load(const std::string& path);

  bool has(const std::string& key) const { return entries_.contains(key); }
  std::optional<std::string> get(const std::string& key) const;
  /// Throws Error(invalid_argument) when the key is missing.
  const std::string& require(const std::string& key) const;
  const std::map<std::string, std::string>& entries() const noexcept { return entries_; }
  void set(std::string key, std::string value) { entries_[std::move(key)] = std::move(value); }

 private:
  std::map<std::string, std::string> entries_;
};

/// "a, b, c" -> {a, b, c}; accepts inf and -inf.
std::vector<double> parse_numbers(std::string_view text);
/// "(x1, y1); (x2, y2)" -> points. Parentheses are optional.
std::vector<Point> parse_points(std::string_view text);
double parse_number(std::string_view text);
std::size_t parse_count(std::string_view text);
std::uint64_t parse_seed(std::string_view text);

/// Builds the ND region described by the keys
///   shape        rectangle | halfspace | quadrant-complement | points
///   lower/upper  rectangle bounds per axis
///   normal/offset  half-space {x : normal . x <= offset}
///   apex/orientation  quadrant complement
///   points       point set
///   corners      optional designated boundary points
RegionND region_nd_from(const KeyValues& kv);

Model parse_model(std::string_view text);
Method parse_method(std::string_view text);
CdKind parse_cd_kind(std::string_view text);
DepthKind parse_depth_kind(std::string_view text);

/// Experiment built from the keys model, mean, covariance, region (text
/// grammar, univariate), the ND-region keys (bivariate), n, reps, method, cd,
/// boot_reps, depth, seed and experiment. Absent keys keep their defaults;
/// the bivariate model defaults to the preset covariance and method multi.
ExperimentSpec experiment_from(const KeyValues& kv);

}  // namespace cdp
