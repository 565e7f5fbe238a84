#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "caplab/fin_set.hpp"
#include "caplab/partition.hpp"
#include "caplab/report.hpp"
#include "caplab/type_sequence.hpp"

namespace caplab {

struct MemberRef {
  uint32_t level = 0;
  uint32_t idx = 0;
  bool operator==(const MemberRef&) const = default;
  bool operator<(const MemberRef& o) const {
    return level != o.level ? level < o.level : idx < o.idx;
  }
};

/// Finite fragment of a construction scheme on [0, m[K]).  Levels hold the
/// member sets sorted lexicographically; every level-k member of size m[k]
/// decomposes into the root (its first r[k] elements) plus n[k] equal chunks
/// of the tail, and those pieces are the level-(k-1) members.
///
/// Frozen after construction; all queries are const.
struct Scheme {
  TypeSequence typ;
  uint32_t K = 0;
  std::vector<std::vector<FinSet>> levels;

  // piece_idx[k][i]: indices into levels[k-1] of member i's pieces, in piece
  // order; UINT32_MAX marks a derived piece that is not a member (only in
  // families loaded from tampered files).
  std::vector<std::vector<std::vector<uint32_t>>> piece_idx;
  // contained[k][i]: refs of all members ⊆ levels[k][i], sorted by (level, idx)
  std::vector<std::vector<std::vector<MemberRef>>> contained;

  uint32_t universe_size() const { return static_cast<uint32_t>(typ.m[K]); }
  const FinSet& member(MemberRef r) const { return levels[r.level][r.idx]; }
  size_t member_count() const;

  std::optional<MemberRef> find_member(const FinSet& f) const;
  MemberRef require_member(const FinSet& f) const;
  uint32_t level_of(const FinSet& f) const;

  FinSet root_of(MemberRef r) const;

  struct Decomp {
    FinSet root;
    std::vector<MemberRef> pieces;
  };
  // canonical decomposition; requires level >= 1 and an intact fragment
  Decomp decompose(MemberRef r) const;

  // 𝒮↾F, members contained in F grouped by level (F itself included)
  const std::vector<MemberRef>& restrict_to(MemberRef r) const;
  // slice of restrict_to at one level
  std::pair<const MemberRef*, const MemberRef*> contained_at(MemberRef r,
                                                             uint32_t level) const;
};

// Deterministic canonical builder: top level is the single set [0, m[K]);
// members are generated downward by the prefix-root/equal-chunk rule.  The
// result is checked against verify_axioms and a failure is surfaced as
// ConstructionFailure.
Scheme build_scheme(const TypeSequence& typ, uint32_t K);

// Both sets must be members, E ⊆ F, mu ∈ E.  Returns a member E* of E's
// level inside F with E*∩(mu+1) = E∩(mu+1) and E*\mu an interval of F.
FinSet copy_with_interval(const Scheme& S, const FinSet& F, const FinSet& E,
                          uint32_t mu);

Report verify_axioms(const Scheme& S);
Report verify_lemmas(const Scheme& S);

struct CoverOpts {
  uint32_t min_level = 0;  // demand level k > min_level
  const PartitionSchedule* partition = nullptr;
  uint32_t block = 0;  // demand assign(k) == block when partition is set
};

struct CoverResult {
  std::optional<MemberRef> F;
  std::string reason;  // filled when no member qualifies
};

// Least member F (ascending level, then lex) whose first piece F_0 contains A
// and whose root equals F_0 ∩ [0, a).
CoverResult find_cover_with_root(const Scheme& S, const FinSet& A, uint32_t a,
                                 const CoverOpts& opts = {});

// Visits qualifying members in the same order until fn returns true;
// returns whether fn accepted one.
bool for_each_cover_with_root(const Scheme& S, const FinSet& A, uint32_t a,
                              const CoverOpts& opts,
                              const std::function<bool(MemberRef)>& fn);

// Least member containing A (plain containment, no root demand).
std::optional<MemberRef> find_cover(const Scheme& S, const FinSet& A,
                                    uint32_t min_level = 0);

// File format: the three type rows, then one line per member
// "k: e_0 e_1 ... ; root_size".  Loading re-derives decompositions and, when
// verify is set, re-runs verify_axioms and throws on violation.
std::string scheme_to_text(const Scheme& S);
Scheme scheme_from_text(const std::string& text, bool verify = true);
void save_scheme(const Scheme& S, const std::string& path);
Scheme load_scheme(const std::string& path, bool verify = true);

// Assembles a scheme from explicit levels (used by tests to probe the
// verifiers with tampered families); derives indexes, never verifies.
Scheme scheme_from_levels(const TypeSequence& typ, uint32_t K,
                          std::vector<std::vector<FinSet>> levels);

}  // namespace caplab
