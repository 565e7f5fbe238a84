#include "caplab/type_sequence.hpp"

#include <sstream>

namespace caplab {

std::variant<TypeSequence, TypeViolation> validate_type(
    const std::vector<uint64_t>& m, const std::vector<uint64_t>& n,
    const std::vector<uint64_t>& r) {
  if (m.empty() || n.size() + 1 != m.size() || r.size() != n.size())
    throw Error(Errc::PreconditionFailed, "sequence lengths must match (|m| = K+1, |n| = |r| = K)");
  if (m[0] != 1) return TypeViolation{"m_0=1", 0};
  uint32_t K = static_cast<uint32_t>(n.size());
  for (uint32_t k = 1; k <= K; ++k) {
    if (m[k - 1] <= r[k - 1]) return TypeViolation{"m_{k-1}>r_k", k};
    if (n[k - 1] <= k) return TypeViolation{"n_k>k", k};
    if (m[k] != n[k - 1] * (m[k - 1] - r[k - 1]) + r[k - 1])
      return TypeViolation{"recurrence", k};
  }
  TypeSequence ts;
  ts.K = K;
  ts.m = m;
  ts.n.assign(1, 0);
  ts.n.insert(ts.n.end(), n.begin(), n.end());
  ts.r.assign(1, 0);
  ts.r.insert(ts.r.end(), r.begin(), r.end());
  return ts;
}

Schedule sched_linear(uint64_t a, uint64_t b) {
  return [a, b](uint32_t k) { return a * k + b; };
}

Schedule sched_const(uint64_t c) {
  return [c](uint32_t) { return c; };
}

Schedule sched_diag() {
  return [](uint32_t k) {
    // block b starts at (b-1)(b+2)/2 + 1 and holds values 0..b
    uint64_t b = 1;
    while ((b * (b + 3)) / 2 < k) ++b;  // end of block b is (b-1)(b+2)/2 + b = b(b+3)/2
    uint64_t start = ((b - 1) * (b + 2)) / 2 + 1;
    return static_cast<uint64_t>(k) - start;
  };
}

Schedule sched_list(std::vector<uint64_t> vs) {
  if (vs.empty()) vs.push_back(0);
  return [vs = std::move(vs)](uint32_t k) {
    size_t i = k >= 1 ? static_cast<size_t>(k - 1) : 0;
    return i < vs.size() ? vs[i] : vs.back();
  };
}

TypeSequence generate_type(const Schedule& n_schedule,
                           const Schedule& r_schedule, uint32_t K) {
  TypeSequence ts;
  ts.K = K;
  ts.m.assign(1, 1);
  ts.n.assign(1, 0);
  ts.r.assign(1, 0);
  for (uint32_t k = 1; k <= K; ++k) {
    uint64_t nk = n_schedule(k);
    if (nk <= k)
      throw Error(Errc::PreconditionFailed,
                  "n-schedule must satisfy n(k) > k, got n(" + std::to_string(k) +
                      ") = " + std::to_string(nk));
    uint64_t rk = r_schedule(k);
    if (rk >= ts.m[k - 1]) rk = ts.m[k - 1] - 1;  // clamp rule
    uint64_t mk;
    if (__builtin_mul_overflow(nk, ts.m[k - 1] - rk, &mk) ||
        __builtin_add_overflow(mk, rk, &mk))
      throw Error(Errc::Overflow, "m[" + std::to_string(k) + "] exceeds 64 bits");
    ts.n.push_back(nk);
    ts.r.push_back(rk);
    ts.m.push_back(mk);
  }
  return ts;
}

uint32_t fair_up_to(const TypeSequence& ts) {
  uint32_t R = 0;
  for (;;) {
    bool found = false;
    for (uint32_t k = 1; k <= ts.K && !found; ++k)
      if (ts.r[k] == R) found = true;
    if (!found) return R;
    ++R;
  }
}

static std::string join_row(const std::vector<uint64_t>& v, size_t begin) {
  std::ostringstream os;
  for (size_t i = begin; i < v.size(); ++i) {
    if (i > begin) os << ',';
    os << v[i];
  }
  return os.str();
}

std::string type_rows(const TypeSequence& ts) {
  return join_row(ts.m, 0) + "\n" + join_row(ts.n, 1) + "\n" + join_row(ts.r, 1) + "\n";
}

static std::vector<uint64_t> split_row(const std::string& row) {
  std::vector<uint64_t> v;
  std::istringstream is(row);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    if (tok.empty()) continue;
    try {
      v.push_back(std::stoull(tok));
    } catch (const std::exception&) {
      throw Error(Errc::ParseError, "bad integer row: " + row);
    }
  }
  return v;
}

TypeSequence parse_type_rows(const std::string& m_row, const std::string& n_row,
                             const std::string& r_row) {
  auto res = validate_type(split_row(m_row), split_row(n_row), split_row(r_row));
  if (auto* viol = std::get_if<TypeViolation>(&res))
    throw Error(Errc::ParseError, "type rows violate clause " + viol->clause +
                                      " at k=" + std::to_string(viol->k));
  return std::get<TypeSequence>(res);
}

}  // namespace caplab
