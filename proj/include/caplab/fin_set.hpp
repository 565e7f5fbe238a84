#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "caplab/errors.hpp"

namespace caplab {

/// Finite subset of the naturals, kept as a strictly increasing vector.
struct FinSet {
  std::vector<uint32_t> e;

  FinSet() = default;
  explicit FinSet(std::vector<uint32_t> elems);

  size_t size() const { return e.size(); }
  bool empty() const { return e.empty(); }
  uint32_t min() const { return e.front(); }
  uint32_t max() const { return e.back(); }
  bool contains(uint32_t x) const;
  // index of x in e; throws if absent
  size_t rank_of(uint32_t x) const;

  bool operator==(const FinSet& o) const { return e == o.e; }
  bool operator!=(const FinSet& o) const { return e != o.e; }
  bool operator<(const FinSet& o) const { return e < o.e; }

  std::string str() const;
};

FinSet fin(std::initializer_list<uint32_t> xs);

bool is_subset(const FinSet& a, const FinSet& b);
FinSet intersect(const FinSet& a, const FinSet& b);
FinSet unite(const FinSet& a, const FinSet& b);
FinSet setminus(const FinSet& a, const FinSet& b);
size_t intersect_size(const FinSet& a, const FinSet& b);

// elements of a strictly below the natural bound (a ∩ [0, bound))
FinSet below(const FinSet& a, uint32_t bound);
size_t count_below(const FinSet& a, uint32_t bound);
// elements >= bound
FinSet from(const FinSet& a, uint32_t bound);

// A ⊑ B: A is an initial segment of B, i.e. A equals the first |A| elements
// of B.  A = B qualifies.
bool initial_segment(const FinSet& a, const FinSet& b);

// I is an interval of F: I ⊆ F occupying consecutive positions of F.
// The empty set counts as an interval.
bool interval_of(const FinSet& i, const FinSet& f);

/// The unique order-preserving bijection between two equal-sized sets.
struct IsoMap {
  FinSet source;
  FinSet target;

  uint32_t map(uint32_t x) const { return target.e[source.rank_of(x)]; }
  uint32_t inv(uint32_t y) const { return source.e[target.rank_of(y)]; }
  FinSet map_set(const FinSet& x) const;
  FinSet inv_set(const FinSet& y) const;
};

// throws SizeMismatch if |e| != |f|
IsoMap order_iso(const FinSet& e, const FinSet& f);

// parse "3 5 9" (whitespace separated); empty string -> empty set
FinSet parse_fin_set(const std::string& line);

}  // namespace caplab
