#include "cdp/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "cdp/error.hpp"

namespace cdp {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

KeyValues KeyValues::parse(std::string_view text) {
  KeyValues kv;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail(ErrorKind::parse, "config line " + std::to_string(line_no) + ": expected key = value, got '" +
                                 std::string(line) + "'");
    }
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) fail(ErrorKind::parse, "config line " + std::to_string(line_no) + ": empty key");
    if (kv.entries_.contains(key)) {
      fail(ErrorKind::parse, "config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    kv.entries_.emplace(std::move(key), std::move(value));
  }
  return kv;
}

KeyValues KeyValues::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::optional<std::string> KeyValues::get(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

const std::string& KeyValues::require(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) fail(ErrorKind::invalid_argument, "missing config key '" + key + "'");
  return it->second;
}

double parse_number(std::string_view text) {
  const auto t = trim(text);
  if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
  if (t == "-inf") return -std::numeric_limits<double>::infinity();
  double value = 0.0;
  const char* first = t.data();
  if (!t.empty() && t.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), value);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size() || std::isnan(value)) {
    fail(ErrorKind::parse, "not a number: '" + std::string(t) + "'");
  }
  return value;
}

std::size_t parse_count(std::string_view text) {
  const auto t = trim(text);
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
    fail(ErrorKind::parse, "not a non-negative integer: '" + std::string(t) + "'");
  }
  return value;
}

std::uint64_t parse_seed(std::string_view text) {
  return static_cast<std::uint64_t>(parse_count(text));
}

std::vector<double> parse_numbers(std::string_view text) {
  std::vector<double> values;
  for (auto part : split(text, ',')) values.push_back(parse_number(part));
  return values;
}

std::vector<Point> parse_points(std::string_view text) {
  std::vector<Point> points;
  if (trim(text).empty()) return points;
  for (auto part : split(text, ';')) {
    if (part.size() >= 2 && part.front() == '(' && part.back() == ')') {
      part = part.substr(1, part.size() - 2);
    } else if (part.find_first_of("()") != std::string_view::npos) {
      fail(ErrorKind::parse, "unbalanced parentheses in point '" + std::string(part) + "'");
    }
    points.push_back(parse_numbers(part));
  }
  return points;
}

RegionND region_nd_from(const KeyValues& kv) {
  const std::string& shape = kv.require("shape");
  std::optional<std::vector<Point>> corners;
  if (const auto c = kv.get("corners")) corners = parse_points(*c);

  if (shape == "rectangle") {
    return RegionND::rectangle(parse_numbers(kv.require("lower")), parse_numbers(kv.require("upper")),
                               corners);
  }
  if (shape == "halfspace") {
    return RegionND::halfspace(parse_numbers(kv.require("normal")), parse_number(kv.require("offset")),
                               corners.value_or(std::vector<Point>{}));
  }
  if (shape == "quadrant-complement") {
    std::vector<int> orientation;
    if (const auto o = kv.get("orientation")) {
      for (double s : parse_numbers(*o)) {
        if (s != 1.0 && s != -1.0) fail(ErrorKind::invalid_argument, "orientation entries must be 1 or -1");
        orientation.push_back(static_cast<int>(s));
      }
    }
    return RegionND::quadrant_complement(parse_numbers(kv.require("apex")), std::move(orientation),
                                         corners.value_or(std::vector<Point>{}));
  }
  if (shape == "points") return RegionND::point_set(parse_points(kv.require("points")), corners);
  fail(ErrorKind::invalid_argument, "unknown shape '" + shape +
                                        "' (expected rectangle, halfspace, quadrant-complement or points)");
}

Model parse_model(std::string_view text) {
  if (text == "univariate-normal") return Model::univariate_normal;
  if (text == "bivariate-normal") return Model::bivariate_normal;
  fail(ErrorKind::invalid_argument, "unknown model '" + std::string(text) + "'");
}

Method parse_method(std::string_view text) {
  for (Method m : {Method::full, Method::direct, Method::max_direct, Method::p_star, Method::p_max,
                   Method::multi, Method::multi_max}) {
    if (to_string(m) == text) return m;
  }
  fail(ErrorKind::invalid_argument, "unknown method '" + std::string(text) + "'");
}

CdKind parse_cd_kind(std::string_view text) {
  for (CdKind k : {CdKind::student_t, CdKind::normal, CdKind::bootstrap}) {
    if (to_string(k) == text) return k;
  }
  fail(ErrorKind::invalid_argument, "unknown CD kind '" + std::string(text) + "'");
}

DepthKind parse_depth_kind(std::string_view text) {
  for (DepthKind k : {DepthKind::mahalanobis, DepthKind::simplicial}) {
    if (to_string(k) == text) return k;
  }
  fail(ErrorKind::invalid_argument, "unknown depth '" + std::string(text) + "'");
}

ExperimentSpec experiment_from(const KeyValues& kv) {
  ExperimentSpec spec;
  if (const auto m = kv.get("model")) spec.model = parse_model(*m);
  if (spec.model == Model::bivariate_normal) {
    spec.true_mean = {0.0, 0.0};
    spec.covariance.assign(kBivariatePresetCovariance.begin(), kBivariatePresetCovariance.end());
    spec.method = Method::multi;
    if (kv.has("shape")) spec.region_nd = region_nd_from(kv);
  } else if (const auto r = kv.get("region")) {
    spec.region = NullRegion::parse(*r);
  }
  if (const auto v = kv.get("mean")) spec.true_mean = parse_numbers(*v);
  if (const auto v = kv.get("covariance")) spec.covariance = parse_numbers(*v);
  if (const auto v = kv.get("n")) spec.n = parse_count(*v);
  if (const auto v = kv.get("reps")) spec.reps = parse_count(*v);
  if (const auto v = kv.get("method")) spec.method = parse_method(*v);
  if (const auto v = kv.get("cd")) spec.cd = parse_cd_kind(*v);
  if (const auto v = kv.get("boot_reps")) spec.boot_reps = parse_count(*v);
  if (const auto v = kv.get("depth")) spec.depth = parse_depth_kind(*v);
  if (const auto v = kv.get("seed")) spec.seed = parse_seed(*v);
  if (const auto v = kv.get("experiment")) spec.experiment = parse_seed(*v);
  return spec;
}

}  // namespace cdp
