#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "caplab/scheme.hpp"

namespace caplab {

/// Increasing Δ-system: every pairwise intersection equals the root, the root
/// is an initial segment of each member, and members are listed in increasing
/// order of their non-root parts.
struct DeltaSystemFamily {
  FinSet root;
  std::vector<FinSet> members;
};

struct DeltaViolation {
  size_t i = 0, j = 0;        // offending pair (i == j for per-member faults)
  std::string reason;          // "root-mismatch" | "not-increasing"
};

// Nonempty list required.  A singleton family gets root ∅.
std::variant<DeltaSystemFamily, DeltaViolation> check_delta_system(
    const std::vector<FinSet>& family);

// Maximal sub-family (ties: lexicographically least index set) forming an
// increasing Δ-system; needs >= 2 input sets, throws TooSmall when no pair
// qualifies.  Result members keep a valid listing order.
DeltaSystemFamily extract_delta_system(const std::vector<FinSet>& family);
// index set actually selected, for callers that track provenance
DeltaSystemFamily extract_delta_system(const std::vector<FinSet>& family,
                                       std::vector<size_t>* picked);

struct CaptureQuery {
  std::optional<uint32_t> arity;  // nullopt means full arity n_k at the witness level
  uint32_t min_level = 0;         // witness level must exceed this
  const PartitionSchedule* partition = nullptr;
  std::optional<uint32_t> block;  // demand level in this block of the partition
  bool any_pieces = false;        // relax the first-n piece binding
};

struct CaptureWitness {
  MemberRef F;
  uint32_t level = 0;
  std::vector<uint32_t> indices;  // member positions in the family
  std::vector<uint32_t> pieces;   // piece indices used, 0..n-1 unless relaxed
};

struct CaptureStats {
  uint64_t levels_scanned = 0;
  uint64_t tuples_checked = 0;
  uint64_t rejected_root = 0;       // clause: root inside R(F)
  uint64_t rejected_tail = 0;       // clause: tails inside the pieces
  uint64_t rejected_transport = 0;  // clause: piece isomorphism transport
};

// 0 when F captures the selected members against the given pieces, otherwise
// the index (1..3) of the first failing clause.
int capture_clause_failure(const Scheme& S, MemberRef F,
                           const DeltaSystemFamily& fam,
                           const std::vector<uint32_t>& indices,
                           const std::vector<uint32_t>* pieces = nullptr);

bool captures(const Scheme& S, MemberRef F, const DeltaSystemFamily& fam,
              const std::vector<uint32_t>& indices,
              const std::vector<uint32_t>* pieces = nullptr);

// Minimal witness under (level, member order, index order[, piece order]).
std::optional<CaptureWitness> find_capture(const Scheme& S,
                                           const DeltaSystemFamily& fam,
                                           const CaptureQuery& query,
                                           CaptureStats* stats = nullptr);

// families as text: one set per line, elements space separated
std::vector<FinSet> parse_family_lines(const std::string& text);

}  // namespace caplab
