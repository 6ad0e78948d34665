#pragma once

// Partition expressions Part<d1..dn>O. A point predicate is any TL formula
// evaluated at a single point; boolean combinations over atoms are the
// quantifier-free case.

#include <compare>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "stavi/tl.hpp"

namespace stavi {

using PointPredicate = TlFormula;

struct PartitionExpression {
  std::vector<PointPredicate> deltas;
  // singleton[j] is true iff slot j+1 belongs to O.
  std::vector<bool> singleton;

  PartitionExpression() = default;
  PartitionExpression(std::vector<PointPredicate> d, std::vector<bool> o)
      : deltas(std::move(d)), singleton(std::move(o)) {
    if (deltas.empty())
      throw std::invalid_argument("partition expression needs at least one slot");
    if (singleton.size() != deltas.size())
      throw std::invalid_argument("singleton flags do not match slot count");
  }

  // Part<d>{} or Part<d>{1}.
  static PartitionExpression one(PointPredicate d, bool single = false) {
    return PartitionExpression({d}, {single});
  }

  std::size_t size() const { return deltas.size(); }
  const PointPredicate& delta(std::size_t j) const { return deltas.at(j); }
  bool in_o(std::size_t j) const { return singleton.at(j); }

  bool operator==(const PartitionExpression&) const = default;
  auto operator<=>(const PartitionExpression& o) const {
    if (auto c = deltas <=> o.deltas; c != 0) return c;
    return singleton <=> o.singleton;
  }
};

inline PartitionExpression mirror(const PartitionExpression& p) {
  PartitionExpression out;
  out.deltas.reserve(p.size());
  for (auto it = p.deltas.rbegin(); it != p.deltas.rend(); ++it)
    out.deltas.push_back(tl::mirror(*it));
  out.singleton.assign(p.singleton.rbegin(), p.singleton.rend());
  return out;
}

inline std::string print_pe(const PartitionExpression& p) {
  std::string out = "Part<";
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (j) out += ", ";
    out += print_tl(p.deltas[j]);
  }
  out += ">{";
  bool first = true;
  for (std::size_t j = 0; j < p.size(); ++j)
    if (p.singleton[j]) {
      if (!first) out += ',';
      out += std::to_string(j + 1);
      first = false;
    }
  out += '}';
  return out;
}

}  // namespace stavi

template <>
struct std::hash<stavi::PartitionExpression> {
  std::size_t operator()(const stavi::PartitionExpression& p) const {
    std::size_t h = p.size();
    for (std::size_t j = 0; j < p.size(); ++j)
      h = h * 1000003u ^ (p.deltas[j].id() * 2u + (p.singleton[j] ? 1u : 0u));
    return h;
  }
};
