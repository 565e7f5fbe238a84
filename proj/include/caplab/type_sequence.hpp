#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "caplab/errors.hpp"

namespace caplab {

/// Arithmetic skeleton of a scheme: member sizes m[0..K], branching widths
/// n[1..K] and root sizes r[1..K], tied by m[k] = n[k]*(m[k-1]-r[k]) + r[k].
/// Index 0 of n and r is unused padding so indices line up with levels.
struct TypeSequence {
  uint32_t K = 0;
  std::vector<uint64_t> m;  // size K+1
  std::vector<uint64_t> n;  // size K+1, n[0] unused
  std::vector<uint64_t> r;  // size K+1, r[0] unused

  bool operator==(const TypeSequence&) const = default;
};

struct TypeViolation {
  std::string clause;  // "m_0=1" | "m_{k-1}>r_k" | "n_k>k" | "recurrence"
  uint32_t k = 0;
};

// m has length K+1; n and r have length K (values for k = 1..K).
std::variant<TypeSequence, TypeViolation> validate_type(
    const std::vector<uint64_t>& m, const std::vector<uint64_t>& n,
    const std::vector<uint64_t>& r);

using Schedule = std::function<uint64_t(uint32_t)>;

// n(k) = a*k + b
Schedule sched_linear(uint64_t a, uint64_t b);
Schedule sched_const(uint64_t c);
// the diagonal 0,1, 0,1,2, 0,1,2,3, ... (block b covers k in [b(b+1)/2-?]);
// every value v shows up in every long enough prefix
Schedule sched_diag();
// values from the list, last value repeated past the end
Schedule sched_list(std::vector<uint64_t> vs);

// Total: requested r(k) >= m[k-1] is clamped down to m[k-1]-1.
// Requires n(k) > k for every k <= K; throws Overflow if m exceeds uint64.
TypeSequence generate_type(const Schedule& n_schedule,
                           const Schedule& r_schedule, uint32_t K);

// Largest R such that every root size r' < R is realized at some level <= K.
uint32_t fair_up_to(const TypeSequence& ts);

// Canonical text form: three comma-separated rows (m, then n, then r).
std::string type_rows(const TypeSequence& ts);
TypeSequence parse_type_rows(const std::string& m_row, const std::string& n_row,
                             const std::string& r_row);

}  // namespace caplab
