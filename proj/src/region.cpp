#include "cdp/region.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "cdp/error.hpp"

namespace cdp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_token(std::string_view token, std::string_view why) {
  fail(ErrorKind::parse,
       "region: bad token '" + std::string(token) + "': " + std::string(why));
}

double parse_endpoint(std::string_view raw, std::string_view piece) {
  const std::string_view token = trim(raw);
  if (token == "inf" || token == "+inf") return kInf;
  if (token == "-inf") return -kInf;
  if (token.empty()) bad_token(piece, "missing number");
  double value = 0.0;
  const char* begin = token.data();
  const char* end = token.data() + token.size();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    bad_token(token, "not a number");
  }
  return value;
}

GeneralizedInterval parse_piece(std::string_view piece) {
  if (piece.empty()) bad_token(piece, "empty piece");
  const char open = piece.front();
  if (open != '[' && open != '(') {
    const double value = parse_endpoint(piece, piece);
    if (std::isinf(value)) bad_token(piece, "singleton must be finite");
    return {value, value};
  }
  const char close = piece.back();
  if (piece.size() < 2 || (close != ']' && close != ')')) {
    bad_token(piece, "unterminated interval");
  }
  const std::string_view body = piece.substr(1, piece.size() - 2);
  const auto comma = body.find(',');
  if (comma == std::string_view::npos || body.find(',', comma + 1) != std::string_view::npos) {
    bad_token(piece, "interval needs exactly one ','");
  }
  const double lo = parse_endpoint(body.substr(0, comma), piece);
  const double hi = parse_endpoint(body.substr(comma + 1), piece);
  // open brackets are only meaningful at an infinite end
  if (open == '(' && lo != -kInf) bad_token(piece, "'(' is only allowed with -inf");
  if (close == ')' && hi != kInf) bad_token(piece, "')' is only allowed with inf");
  if (lo > hi) bad_token(piece, "lower bound exceeds upper bound");
  if (lo == hi && std::isinf(lo)) bad_token(piece, "singleton must be finite");
  return {lo, hi};
}

}  // namespace

std::string format_number(double value) {
  if (std::isinf(value)) return value < 0 ? "-inf" : "inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

bool GeneralizedInterval::is_bounded() const noexcept {
  return std::isfinite(lo) && std::isfinite(hi);
}

NullRegion::NullRegion(std::vector<GeneralizedInterval> pieces) {
  if (pieces.empty()) fail(ErrorKind::invalid_argument, "region has no pieces");
  for (const auto& p : pieces) {
    if (std::isnan(p.lo) || std::isnan(p.hi)) {
      fail(ErrorKind::invalid_argument, "region endpoint is NaN");
    }
    if (p.lo > p.hi) {
      fail(ErrorKind::invalid_argument, "region piece has lo > hi");
    }
    if (p.lo == p.hi && std::isinf(p.lo)) {
      fail(ErrorKind::invalid_argument, "region singleton must be finite");
    }
  }
  std::sort(pieces.begin(), pieces.end(),
            [](const auto& a, const auto& b) { return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi); });
  for (const auto& p : pieces) {
    if (!pieces_.empty() && p.lo <= pieces_.back().hi) {
      pieces_.back().hi = std::max(pieces_.back().hi, p.hi);
    } else {
      pieces_.push_back(p);
    }
  }
}

NullRegion NullRegion::parse(std::string_view text) {
  const std::string_view body = trim(text);
  if (body.empty()) fail(ErrorKind::parse, "region: empty region text");
  std::vector<GeneralizedInterval> pieces;
  std::size_t start = 0;
  for (;;) {
    const auto semi = body.find(';', start);
    const std::string_view piece =
        trim(body.substr(start, semi == std::string_view::npos ? std::string_view::npos : semi - start));
    pieces.push_back(parse_piece(piece));
    if (semi == std::string_view::npos) break;
    start = semi + 1;
  }
  return NullRegion(std::move(pieces));
}

std::string NullRegion::format() const {
  std::string out;
  for (const auto& p : pieces_) {
    if (!out.empty()) out += ';';
    if (p.is_singleton()) {
      out += format_number(p.lo);
      continue;
    }
    out += std::isinf(p.lo) ? '(' : '[';
    out += format_number(p.lo);
    out += ',';
    out += format_number(p.hi);
    out += std::isinf(p.hi) ? ')' : ']';
  }
  return out;
}

bool NullRegion::contains(double theta) const noexcept {
  return std::any_of(pieces_.begin(), pieces_.end(),
                     [theta](const auto& p) { return p.contains(theta); });
}

std::vector<double> NullRegion::boundary_points() const {
  std::vector<double> points;
  for (const auto& p : pieces_) {
    if (std::isfinite(p.lo)) points.push_back(p.lo);
    if (std::isfinite(p.hi) && p.hi != p.lo) points.push_back(p.hi);
  }
  return points;  // pieces are sorted and disjoint, so already ascending
}

}  // namespace cdp
