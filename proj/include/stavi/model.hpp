#pragma once

// Finitely presented linear orders: a sequence of single points, dense
// segments (copies of the rationals in (0,1)) and explicit gaps between
// dense segments. Atom truth is constant across each segment.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "stavi/sexpr.hpp"

namespace stavi {

using Rational = boost::multiprecision::cpp_rational;

enum class RegionKind { Point, Dense, Gap };

struct Region {
  RegionKind kind = RegionKind::Point;
  std::set<std::string> label;

  static Region point(std::set<std::string> l = {}) {
    return {RegionKind::Point, std::move(l)};
  }
  static Region dense(std::set<std::string> l = {}) {
    return {RegionKind::Dense, std::move(l)};
  }
  static Region gap() { return {RegionKind::Gap, {}}; }

  bool is_gap() const { return kind == RegionKind::Gap; }
  bool is_point() const { return kind == RegionKind::Point; }
  bool is_dense() const { return kind == RegionKind::Dense; }
  bool holds(const std::string& atom) const { return label.count(atom) != 0; }

  bool operator==(const Region&) const = default;
};

class GappedChain {
 public:
  GappedChain() = default;
  explicit GappedChain(std::vector<Region> regions)
      : regions_(std::move(regions)) {}

  const std::vector<Region>& regions() const { return regions_; }
  const Region& operator[](std::size_t i) const { return regions_.at(i); }
  std::size_t size() const { return regions_.size(); }

  bool is_finite_chain() const {
    for (const auto& r : regions_)
      if (!r.is_point()) return false;
    return true;
  }

  std::vector<std::size_t> gaps() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < regions_.size(); ++i)
      if (regions_[i].is_gap()) out.push_back(i);
    return out;
  }

  bool operator==(const GappedChain&) const = default;

 private:
  std::vector<Region> regions_;
};

// Returns a description of the first violated invariant, or nothing.
inline std::optional<std::string> validate(const GappedChain& m) {
  const auto& rs = m.regions();
  if (rs.empty()) return "model has no regions";
  bool nonempty = false;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (!rs[i].is_gap()) nonempty = true;
    if (rs[i].is_gap()) {
      if (i == 0 || !rs[i - 1].is_dense())
        return "gap at region " + std::to_string(i) +
               " is not preceded by a dense region";
      if (i + 1 == rs.size() || !rs[i + 1].is_dense())
        return "gap at region " + std::to_string(i) +
               " is not followed by a dense region";
    }
    if (rs[i].is_dense() && i + 1 < rs.size() && rs[i + 1].is_dense())
      return "dense regions " + std::to_string(i) + " and " +
             std::to_string(i + 1) + " must be separated by an explicit gap";
    for (const auto& a : rs[i].label)
      if (!detail::is_identifier(a))
        return "invalid atom '" + a + "' in region " + std::to_string(i);
  }
  if (!nonempty) return "model has no points";
  return std::nullopt;
}

inline GappedChain reverse(const GappedChain& m) {
  std::vector<Region> rs(m.regions().rbegin(), m.regions().rend());
  return GappedChain(std::move(rs));
}

// A point of the model: a Point region, or a rational coordinate in (0,1)
// inside a Dense region.
struct Position {
  std::size_t region = 0;
  std::optional<Rational> coord;

  static Position at_point(std::size_t r) { return {r, std::nullopt}; }
  static Position in_dense(std::size_t r, Rational c) { return {r, std::move(c)}; }

  bool operator==(const Position&) const = default;
};

inline void check_position(const GappedChain& m, const Position& p) {
  if (p.region >= m.size())
    throw std::out_of_range("position refers to region " +
                            std::to_string(p.region) + " outside the model");
  const Region& r = m[p.region];
  if (p.coord) {
    if (!r.is_dense())
      throw std::out_of_range("coordinate given for non-dense region " +
                              std::to_string(p.region));
    if (*p.coord <= 0 || *p.coord >= 1)
      throw std::out_of_range("dense coordinate outside (0,1)");
  } else if (!r.is_point()) {
    throw std::out_of_range("region " + std::to_string(p.region) +
                            " is not a point region");
  }
}

inline std::strong_ordering compare(const GappedChain& m, const Position& a,
                                    const Position& b) {
  check_position(m, a);
  check_position(m, b);
  if (a.region != b.region) return a.region <=> b.region;
  if (!a.coord) return std::strong_ordering::equal;
  if (*a.coord < *b.coord) return std::strong_ordering::less;
  if (*a.coord > *b.coord) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

inline Position mirror_position(const GappedChain& m, const Position& p) {
  Position q;
  q.region = m.size() - 1 - p.region;
  if (p.coord) q.coord = Rational(1) - *p.coord;
  return q;
}

// One position per Point region and k evenly spaced coordinates i/(k+1)
// per Dense region, in model order.
inline std::vector<Position> enumerate_sample_positions(const GappedChain& m,
                                                        std::size_t k) {
  if (k == 0) throw std::invalid_argument("sample count must be positive");
  std::vector<Position> out;
  for (std::size_t r = 0; r < m.size(); ++r) {
    if (m[r].is_point()) out.push_back(Position::at_point(r));
    if (m[r].is_dense())
      for (std::size_t i = 1; i <= k; ++i)
        out.push_back(Position::in_dense(
            r, Rational(static_cast<long>(i)) / static_cast<long>(k + 1)));
  }
  return out;
}

// Interval endpoints.
struct MinusInfinity {
  bool operator==(const MinusInfinity&) const = default;
};
struct PlusInfinity {
  bool operator==(const PlusInfinity&) const = default;
};
struct AtGap {
  std::size_t region;
  bool operator==(const AtGap&) const = default;
};
enum class Side { Left, Right };
struct DenseEdge {
  std::size_t region;
  Side side;
  bool operator==(const DenseEdge&) const = default;
};

using Boundary =
    std::variant<MinusInfinity, PlusInfinity, Position, AtGap, DenseEdge>;

struct IntervalSpec {
  Boundary lo = MinusInfinity{};
  Boundary hi = PlusInfinity{};
  bool lo_closed = false;
  bool hi_closed = false;

  static IntervalSpec closed(Position a, Position b) {
    return {std::move(a), std::move(b), true, true};
  }
  static IntervalSpec open(Boundary a, Boundary b) {
    return {std::move(a), std::move(b), false, false};
  }
  static IntervalSpec line() { return {}; }
};

namespace detail {

// Boundaries and positions are placed on a common scale: (region, offset)
// with offset 1/2 for points and gaps, the coordinate inside dense regions,
// and 0 / 1 for the two edges of a dense region.
struct CutKey {
  long region;
  Rational offset;

  std::strong_ordering operator<=>(const CutKey& o) const {
    if (region != o.region) return region <=> o.region;
    if (offset < o.offset) return std::strong_ordering::less;
    if (offset > o.offset) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  bool operator==(const CutKey& o) const {
    return region == o.region && offset == o.offset;
  }
};

inline CutKey position_key(const Position& p) {
  return {static_cast<long>(p.region), p.coord ? *p.coord : Rational(1, 2)};
}

inline CutKey boundary_key(const GappedChain& m, const Boundary& b) {
  struct Visitor {
    const GappedChain& m;
    CutKey operator()(const MinusInfinity&) const { return {-1, 0}; }
    CutKey operator()(const PlusInfinity&) const {
      return {static_cast<long>(m.size()), 0};
    }
    CutKey operator()(const Position& p) const {
      check_position(m, p);
      return position_key(p);
    }
    CutKey operator()(const AtGap& g) const {
      if (g.region >= m.size() || !m[g.region].is_gap())
        throw std::out_of_range("boundary does not name a gap region");
      return {static_cast<long>(g.region), Rational(1, 2)};
    }
    CutKey operator()(const DenseEdge& e) const {
      if (e.region >= m.size() || !m[e.region].is_dense())
        throw std::out_of_range("boundary does not name a dense region");
      return {static_cast<long>(e.region),
              e.side == Side::Left ? Rational(0) : Rational(1)};
    }
  };
  return std::visit(Visitor{m}, b);
}

}  // namespace detail

inline void check_interval(const GappedChain& m, const IntervalSpec& iv) {
  if (iv.lo_closed && !std::holds_alternative<Position>(iv.lo))
    throw std::invalid_argument("closed lower end must be a position");
  if (iv.hi_closed && !std::holds_alternative<Position>(iv.hi))
    throw std::invalid_argument("closed upper end must be a position");
  (void)detail::boundary_key(m, iv.lo);
  (void)detail::boundary_key(m, iv.hi);
}

inline bool contains(const GappedChain& m, const IntervalSpec& iv,
                     const Position& p) {
  auto k = detail::position_key(p);
  auto lo = detail::boundary_key(m, iv.lo);
  auto hi = detail::boundary_key(m, iv.hi);
  bool above = iv.lo_closed ? lo <= k : lo < k;
  bool below = iv.hi_closed ? k <= hi : k < hi;
  return above && below;
}

class ModelParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline std::set<std::string> parse_label(std::string_view body,
                                         std::string_view token) {
  std::set<std::string> out;
  std::size_t start = 0;
  while (start <= body.size()) {
    auto comma = body.find(',', start);
    auto part = body.substr(start, comma == std::string_view::npos
                                       ? std::string_view::npos
                                       : comma - start);
    if (!part.empty()) {
      if (!is_identifier(part))
        throw ModelParseError("invalid atom in region '" + std::string(token) + "'");
      out.emplace(part);
    } else if (comma != std::string_view::npos || start != 0) {
      throw ModelParseError("empty atom in region '" + std::string(token) + "'");
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace detail

// Parses `pt{A,B} dense{A} gap dense{}` and validates the result.
inline GappedChain parse_model(std::string_view text) {
  std::vector<Region> rs;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    if (tok == "gap") {
      rs.push_back(Region::gap());
      continue;
    }
    RegionKind kind;
    std::size_t open;
    if (tok.rfind("pt{", 0) == 0) {
      kind = RegionKind::Point;
      open = 3;
    } else if (tok.rfind("dense{", 0) == 0) {
      kind = RegionKind::Dense;
      open = 6;
    } else {
      throw ModelParseError("unknown region '" + tok + "'");
    }
    if (tok.back() != '}')
      throw ModelParseError("unterminated label in '" + tok + "'");
    auto body = std::string_view(tok).substr(open, tok.size() - open - 1);
    rs.push_back({kind, detail::parse_label(body, tok)});
  }
  GappedChain m(std::move(rs));
  if (auto err = validate(m)) throw ModelParseError(*err);
  return m;
}

inline std::string print_model(const GappedChain& m) {
  std::string out;
  for (const auto& r : m.regions()) {
    if (!out.empty()) out += ' ';
    if (r.is_gap()) {
      out += "gap";
      continue;
    }
    out += r.is_point() ? "pt{" : "dense{";
    bool first = true;
    for (const auto& a : r.label) {
      if (!first) out += ',';
      out += a;
      first = false;
    }
    out += '}';
  }
  return out;
}

}  // namespace stavi
