#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "caplab/errors.hpp"

namespace caplab {

/// Ordinal below ω·M + ω for a run-configured M, coded as ω·limb + off.
/// Limit ordinals are exactly {off == 0, limb >= 1}; naturals have limb == 0.
struct OrdinalCode {
  uint32_t limb = 0;
  uint32_t off = 0;

  auto operator<=>(const OrdinalCode&) const = default;

  bool is_natural() const { return limb == 0; }
  bool is_limit() const { return off == 0 && limb >= 1; }
};

inline OrdinalCode nat(uint32_t n) { return {0, n}; }
inline OrdinalCode omega_times(uint32_t m) { return {m, 0}; }

inline OrdinalCode ord_add(OrdinalCode d, uint32_t i) {
  return {d.limb, d.off + i};
}

inline int ord_cmp(OrdinalCode a, OrdinalCode b) {
  if (a < b) return -1;
  if (b < a) return 1;
  return 0;
}

// limit part of x: largest limit ordinal <= x (ω·limb); undefined for naturals
inline OrdinalCode limit_part(OrdinalCode x) { return {x.limb, 0}; }

// "w*<limb>+<off>", or "<off>" alone when limb = 0
std::string ord_str(OrdinalCode x);
// accepts "<n>", "w*<m>", "w*<m>+<n>", and "w" for ω
OrdinalCode parse_ordinal(const std::string& s);

/// Sorted set of ordinal codes.
struct OrdSet {
  std::vector<OrdinalCode> e;

  OrdSet() = default;
  explicit OrdSet(std::vector<OrdinalCode> xs);

  size_t size() const { return e.size(); }
  bool empty() const { return e.empty(); }
  bool contains(OrdinalCode x) const;
  size_t rank_of(OrdinalCode x) const;

  bool operator==(const OrdSet& o) const { return e == o.e; }
  bool operator<(const OrdSet& o) const { return e < o.e; }

  std::string str() const;
};

bool ord_subset(const OrdSet& a, const OrdSet& b);
OrdSet ord_intersect(const OrdSet& a, const OrdSet& b);
bool ord_initial_segment(const OrdSet& a, const OrdSet& b);

}  // namespace caplab
