#include "caplab/ordinal.hpp"

#include <algorithm>
#include <sstream>

namespace caplab {

std::string ord_str(OrdinalCode x) {
  if (x.limb == 0) return std::to_string(x.off);
  return "w*" + std::to_string(x.limb) + "+" + std::to_string(x.off);
}

OrdinalCode parse_ordinal(const std::string& s) {
  if (s.empty()) throw Error(Errc::ParseError, "empty ordinal");
  if (s == "w") return {1, 0};
  if (s[0] == 'w') {
    if (s.size() < 3 || s[1] != '*')
      throw Error(Errc::ParseError, "bad ordinal: " + s);
    size_t plus = s.find('+', 2);
    try {
      uint32_t limb = static_cast<uint32_t>(std::stoul(s.substr(2, plus - 2)));
      uint32_t off = plus == std::string::npos
                         ? 0
                         : static_cast<uint32_t>(std::stoul(s.substr(plus + 1)));
      return {limb, off};
    } catch (const std::exception&) {
      throw Error(Errc::ParseError, "bad ordinal: " + s);
    }
  }
  try {
    return {0, static_cast<uint32_t>(std::stoul(s))};
  } catch (const std::exception&) {
    throw Error(Errc::ParseError, "bad ordinal: " + s);
  }
}

OrdSet::OrdSet(std::vector<OrdinalCode> xs) : e(std::move(xs)) {
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
}

bool OrdSet::contains(OrdinalCode x) const {
  return std::binary_search(e.begin(), e.end(), x);
}

size_t OrdSet::rank_of(OrdinalCode x) const {
  auto it = std::lower_bound(e.begin(), e.end(), x);
  if (it == e.end() || *it != x)
    throw Error(Errc::NotAMember, "ordinal " + ord_str(x) + " not in set");
  return static_cast<size_t>(it - e.begin());
}

std::string OrdSet::str() const {
  std::ostringstream os;
  os << '{';
  for (size_t i = 0; i < e.size(); ++i) {
    if (i) os << ',';
    os << ord_str(e[i]);
  }
  os << '}';
  return os.str();
}

bool ord_subset(const OrdSet& a, const OrdSet& b) {
  return std::includes(b.e.begin(), b.e.end(), a.e.begin(), a.e.end());
}

OrdSet ord_intersect(const OrdSet& a, const OrdSet& b) {
  OrdSet r;
  std::set_intersection(a.e.begin(), a.e.end(), b.e.begin(), b.e.end(),
                        std::back_inserter(r.e));
  return r;
}

bool ord_initial_segment(const OrdSet& a, const OrdSet& b) {
  if (a.size() > b.size()) return false;
  return std::equal(a.e.begin(), a.e.end(), b.e.begin());
}

}  // namespace caplab
