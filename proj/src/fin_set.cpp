#include "caplab/fin_set.hpp"

#include <algorithm>
#include <sstream>

namespace caplab {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NotAMember: return "NotAMember";
    case Errc::SizeMismatch: return "SizeMismatch";
    case Errc::ArityTooLarge: return "ArityTooLarge";
    case Errc::TooSmall: return "TooSmall";
    case Errc::PreconditionFailed: return "PreconditionFailed";
    case Errc::InsufficientWidth: return "InsufficientWidth";
    case Errc::NotStandardizable: return "NotStandardizable";
    case Errc::BadScenario: return "BadScenario";
    case Errc::DepthExhausted: return "DepthExhausted";
    case Errc::WidthExhausted: return "WidthExhausted";
    case Errc::FuelExhausted: return "FuelExhausted";
    case Errc::ConstructionFailure: return "ConstructionFailure";
    case Errc::ParseError: return "ParseError";
    case Errc::Usage: return "Usage";
    case Errc::Overflow: return "Overflow";
  }
  return "Error";
}

FinSet::FinSet(std::vector<uint32_t> elems) : e(std::move(elems)) {
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
}

bool FinSet::contains(uint32_t x) const {
  return std::binary_search(e.begin(), e.end(), x);
}

size_t FinSet::rank_of(uint32_t x) const {
  auto it = std::lower_bound(e.begin(), e.end(), x);
  if (it == e.end() || *it != x)
    throw Error(Errc::NotAMember, "element " + std::to_string(x) + " not in set");
  return static_cast<size_t>(it - e.begin());
}

std::string FinSet::str() const {
  std::ostringstream os;
  os << '{';
  for (size_t i = 0; i < e.size(); ++i) {
    if (i) os << ',';
    os << e[i];
  }
  os << '}';
  return os.str();
}

FinSet fin(std::initializer_list<uint32_t> xs) {
  return FinSet(std::vector<uint32_t>(xs));
}

bool is_subset(const FinSet& a, const FinSet& b) {
  return std::includes(b.e.begin(), b.e.end(), a.e.begin(), a.e.end());
}

FinSet intersect(const FinSet& a, const FinSet& b) {
  FinSet r;
  std::set_intersection(a.e.begin(), a.e.end(), b.e.begin(), b.e.end(),
                        std::back_inserter(r.e));
  return r;
}

FinSet unite(const FinSet& a, const FinSet& b) {
  FinSet r;
  std::set_union(a.e.begin(), a.e.end(), b.e.begin(), b.e.end(),
                 std::back_inserter(r.e));
  return r;
}

FinSet setminus(const FinSet& a, const FinSet& b) {
  FinSet r;
  std::set_difference(a.e.begin(), a.e.end(), b.e.begin(), b.e.end(),
                      std::back_inserter(r.e));
  return r;
}

size_t intersect_size(const FinSet& a, const FinSet& b) {
  size_t n = 0, i = 0, j = 0;
  while (i < a.e.size() && j < b.e.size()) {
    if (a.e[i] < b.e[j]) ++i;
    else if (a.e[i] > b.e[j]) ++j;
    else { ++n; ++i; ++j; }
  }
  return n;
}

FinSet below(const FinSet& a, uint32_t bound) {
  FinSet r;
  auto it = std::lower_bound(a.e.begin(), a.e.end(), bound);
  r.e.assign(a.e.begin(), it);
  return r;
}

size_t count_below(const FinSet& a, uint32_t bound) {
  return static_cast<size_t>(
      std::lower_bound(a.e.begin(), a.e.end(), bound) - a.e.begin());
}

FinSet from(const FinSet& a, uint32_t bound) {
  FinSet r;
  auto it = std::lower_bound(a.e.begin(), a.e.end(), bound);
  r.e.assign(it, a.e.end());
  return r;
}

bool initial_segment(const FinSet& a, const FinSet& b) {
  if (a.size() > b.size()) return false;
  return std::equal(a.e.begin(), a.e.end(), b.e.begin());
}

bool interval_of(const FinSet& i, const FinSet& f) {
  if (i.empty()) return true;
  auto it = std::lower_bound(f.e.begin(), f.e.end(), i.e.front());
  if (it == f.e.end() || *it != i.e.front()) return false;
  size_t pos = static_cast<size_t>(it - f.e.begin());
  if (pos + i.size() > f.size()) return false;
  return std::equal(i.e.begin(), i.e.end(), f.e.begin() + pos);
}

FinSet IsoMap::map_set(const FinSet& x) const {
  FinSet r;
  r.e.reserve(x.size());
  for (uint32_t v : x.e) r.e.push_back(map(v));
  return r;  // increasing map keeps order
}

FinSet IsoMap::inv_set(const FinSet& y) const {
  FinSet r;
  r.e.reserve(y.size());
  for (uint32_t v : y.e) r.e.push_back(inv(v));
  return r;
}

IsoMap order_iso(const FinSet& e, const FinSet& f) {
  if (e.size() != f.size())
    throw Error(Errc::SizeMismatch,
                "order_iso needs equal sizes, got " + std::to_string(e.size()) +
                    " and " + std::to_string(f.size()));
  return IsoMap{e, f};
}

FinSet parse_fin_set(const std::string& line) {
  std::istringstream is(line);
  std::vector<uint32_t> xs;
  long long v;
  while (is >> v) {
    if (v < 0) throw Error(Errc::ParseError, "negative element in set: " + line);
    xs.push_back(static_cast<uint32_t>(v));
  }
  if (!is.eof())
    throw Error(Errc::ParseError, "bad set line: " + line);
  return FinSet(std::move(xs));
}

}  // namespace caplab
