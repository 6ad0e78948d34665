#pragma once

// The F_i recursion turning a partition expression into TL formulas, in
// three terminal modes, and the one-variable TL readings built from it.

#include <stdexcept>
#include <vector>

#include "stavi/expansion.hpp"
#include "stavi/pe.hpp"
#include "stavi/tl.hpp"

namespace stavi {

enum class TerminalKind { Bounded, Ray, ToGap };

struct TerminalMode {
  TerminalKind kind = TerminalKind::Bounded;
  PointPredicate gap_pred;  // used by ToGap only

  static TerminalMode bounded() { return {TerminalKind::Bounded, tl::top()}; }
  static TerminalMode ray() { return {TerminalKind::Ray, tl::top()}; }
  static TerminalMode to_gap(PointPredicate d) { return {TerminalKind::ToGap, d}; }
};

namespace detail {

// Until* without the left operand at the current point: some t' > t with
// Part<p, q>{} on [t, t'] when p is ignored at t itself.
inline TlFormula until_star_after(TlFormula p, TlFormula q) {
  TlFormula qq = tl::until(q, q);
  return tl::lor({tl::until(p, q), qq, tl::until(p, tl::land(p, qq)), tl::until_s(p, q)});
}

}  // namespace detail

// F_1..F_k. Bounded: F_1(t) iff Part holds on [t, t'] for some t' >= t.
// Ray: iff Part holds on [t, oo). ToGap(d): iff some d-gap g succeeds t
// and Part holds on [t, g).
//
// In ToGap mode the gap predicate is required on (t, g) only, so the slot
// containing t checks it after t but not at t, and the last slot checks
// its own predicate at the point where it is entered.
inline std::vector<TlFormula> build_F(const std::vector<PointPredicate>& deltas,
                                      const std::vector<bool>& in_o, TerminalMode mode) {
  using namespace tl;
  const std::size_t k = deltas.size();
  if (k == 0) throw std::invalid_argument("build_F needs at least one slot");
  if (in_o.size() != k) throw std::invalid_argument("build_F: singleton flags mismatch");
  const bool gap = mode.kind == TerminalKind::ToGap;
  // D[i] is the predicate required at points of slot i after the start.
  std::vector<TlFormula> d(k);
  for (std::size_t i = 0; i < k; ++i) d[i] = gap ? land(deltas[i], mode.gap_pred) : deltas[i];
  std::vector<TlFormula> f(k);
  switch (mode.kind) {
    case TerminalKind::Bounded:
      f[k - 1] = d[k - 1];
      break;
    case TerminalKind::Ray:
      f[k - 1] = in_o[k - 1] ? land(d[k - 1], box(bottom())) : land(d[k - 1], box(d[k - 1]));
      break;
    case TerminalKind::ToGap:
      // A singleton right before a gap would be the maximum below it.
      if (in_o[k - 1]) return std::vector<TlFormula>(k, bottom());
      f[k - 1] = land(k == 1 ? deltas[0] : d[k - 1], until_gap(mode.gap_pred, deltas[k - 1]));
      break;
  }
  for (std::size_t i = k - 1; i >= 1; --i) {
    const bool prev_o = in_o[i - 1], cur_o = in_o[i];
    const TlFormula head = (gap && i - 1 == 0) ? deltas[0] : d[i - 1];
    TlFormula step;
    if (prev_o && cur_o)
      step = until(bottom(), f[i]);
    else if (prev_o)
      step = until(d[i], f[i]);
    else if (cur_o)
      step = until(d[i - 1], f[i]);
    else
      step = (gap && i - 1 == 0) ? detail::until_star_after(d[0], f[i])
                                 : until_star(d[i - 1], f[i]);
    f[i - 1] = land(head, step);
  }
  return f;
}

inline std::vector<TlFormula> build_F(const PartitionExpression& pe, TerminalMode mode) {
  return build_F(pe.deltas, pe.singleton, mode);
}

// Part holds on [t, t'] for some t' >= t.
inline TlFormula bounded_right_tl(const PartitionExpression& pe) {
  return build_F(pe, TerminalMode::bounded()).front();
}

// Part holds on [t', t] for some t' <= t.
inline TlFormula bounded_left_tl(const PartitionExpression& pe) {
  return tl::mirror(bounded_right_tl(mirror(pe)));
}

// Part holds on [t, oo).
inline TlFormula right_ray_tl(const PartitionExpression& pe) {
  return build_F(pe, TerminalMode::ray()).front();
}

// Part holds on (-oo, t].
inline TlFormula left_ray_tl(const PartitionExpression& pe) {
  return tl::mirror(right_ray_tl(mirror(pe)));
}

// Part holds on the open ray (t, oo); the ray must be non-empty.
inline TlFormula open_right_ray_tl(const PartitionExpression& pe) {
  std::vector<PointPredicate> d{tl::top()};
  std::vector<bool> o{true};
  d.insert(d.end(), pe.deltas.begin(), pe.deltas.end());
  o.insert(o.end(), pe.singleton.begin(), pe.singleton.end());
  return build_F(d, o, TerminalMode::ray()).front();
}

inline TlFormula open_left_ray_tl(const PartitionExpression& pe) {
  return tl::mirror(open_right_ray_tl(mirror(pe)));
}

// Part holds on the whole order; the result has the same value everywhere.
inline TlFormula line_tl(const PartitionExpression& pe) {
  PartitionExpression head = PartitionExpression::one(pe.deltas[0], pe.singleton[0]);
  TlFormula a = tl::land(left_ray_tl(head), right_ray_tl(pe));
  return tl::somewhere(a);
}

}  // namespace stavi
