#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "caplab/ordinal.hpp"
#include "caplab/scheme.hpp"

namespace caplab {

struct CohenEntry {
  OrdinalCode delta;  // a limit ordinal
  MemberRef D;        // member of the base scheme
  uint32_t anchor;    // element of D
  bool operator==(const CohenEntry&) const = default;
};

/// Finite condition of the simulated forcing poset: nested members of the base
/// scheme assigned to limit ordinals, with strictly increasing anchors.
struct CohenCondition {
  std::vector<CohenEntry> entries;  // sorted by delta

  bool empty() const { return entries.empty(); }
  size_t size() const { return entries.size(); }
  const CohenEntry* find(OrdinalCode delta) const;
  MemberRef top() const;  // member at the largest delta
  bool operator==(const CohenCondition&) const = default;
};

struct CondViolation {
  std::string clause;  // "limit" | "member" | "anchor" | "nestedness" | "anchor-monotone"
  size_t at = 0;
};

using RawCondition = std::vector<std::tuple<OrdinalCode, FinSet, uint32_t>>;

std::variant<CohenCondition, CondViolation> validate_condition(
    const Scheme& S, const RawCondition& raw);
CohenCondition require_condition(const Scheme& S, const RawCondition& raw);

// x below a stays put, a + i goes to delta + i
OrdinalCode phi_embed(uint32_t a, OrdinalCode delta, uint32_t x);

/// Increasing partial map from the top member into the ordinal codes.
struct OrdMap {
  std::vector<std::pair<uint32_t, OrdinalCode>> pairs;  // sorted by key

  std::optional<OrdinalCode> at(uint32_t x) const;
  std::optional<uint32_t> preimage(OrdinalCode y) const;
  size_t size() const { return pairs.size(); }
};

OrdMap phi_total(const Scheme& S, const CohenCondition& p);

struct LabeledOrdSet {
  OrdSet set;
  uint32_t level = 0;
  bool operator==(const LabeledOrdSet&) const = default;
  bool operator<(const LabeledOrdSet& o) const {
    return level != o.level ? level < o.level : set < o.set;
  }
};

// image of the restriction to the top member, levels preserved, sorted
std::vector<LabeledOrdSet> induced_family(const Scheme& S, const CohenCondition& p);

struct ExtensionWitness {
  std::vector<std::pair<OrdinalCode, MemberRef>> W;  // one member per support point of the weaker condition
};

struct LeqFailure {
  OrdinalCode delta;
  std::string clause;  // "support" | "gap" | "witness"
};

// is p <= q (p the stronger condition)?  Witness search runs over members of
// the matching level inside the stronger member, in lexicographic order.
std::optional<ExtensionWitness> leq(const Scheme& S, const CohenCondition& p,
                                    const CohenCondition& q,
                                    LeqFailure* why = nullptr);

// q <= p with phi_total(q)(x) = xi; deterministic search guided by the
// cover-with-root/interval-copy construction, output re-verified through leq.
// Throws DepthExhausted naming the unmet demand.
std::pair<CohenCondition, uint32_t> extend_to_cover(const Scheme& S,
                                                    const CohenCondition& p,
                                                    OrdinalCode xi);

// q <= p whose induced family has a member containing A
CohenCondition extend_cover_set(const Scheme& S, const CohenCondition& p,
                                const OrdSet& A);

/// Conditions sharing a support root, identical entry data and a common
/// marked coordinate x whose image is the per-condition target.
struct StandardizedFamily {
  std::vector<CohenCondition> conds;  // sorted by target
  std::vector<OrdinalCode> targets;
  uint32_t root_size = 0;
  uint32_t depth = 0;
  uint32_t j0 = 0;
  uint32_t x = 0;
};

// throws NotStandardizable("clause <1..4>") on the first failing clause
StandardizedFamily standardize(const Scheme& S,
                               const std::vector<CohenCondition>& conds,
                               const std::vector<OrdinalCode>& marks);

struct ForceMode {
  bool full = false;       // capture at the witnessing level's full arity
  uint32_t min_level = 0;  // witness level must exceed this
  const PartitionSchedule* partition = nullptr;
  std::optional<uint32_t> block;
};

struct ForceResult {
  CohenCondition q;
  MemberRef base_member;  // F* in the base scheme
  uint32_t level = 0;
  OrdSet captured_member;  // image of F*
  std::vector<OrdinalCode> targets;
  std::vector<ExtensionWitness> witnesses;  // per amalgamated condition
};

// Amalgamates the first n standardized conditions below a common q whose
// induced family captures their targets.  All postconditions (extension
// witnesses per input, capture of the image member) are verified internally.
ForceResult force_capture(const Scheme& S, const StandardizedFamily& fam,
                          uint32_t n, const ForceMode& mode = {});

struct Goal {
  enum class Kind { CoverOrdinal, CoverSet, ForceCapture };
  Kind kind = Kind::CoverOrdinal;
  OrdinalCode xi;
  OrdSet A;
  std::vector<OrdinalCode> targets;
};

struct GenericRun {
  std::vector<CohenCondition> chain;  // decreasing, chain[0] empty
  std::vector<LabeledOrdSet> fragment;
  Report report;
  uint32_t fuel_used = 0;
};

// Meets the goals in order along a decreasing chain, within the fuel budget
// and the simulated ordinal cap ω·limb_cap; the final fragment is re-checked
// against the restricted scheme axioms.  Failures land in the report.
GenericRun run_generic(const Scheme& S, const std::vector<Goal>& goals,
                       uint32_t fuel, uint32_t limb_cap);

// pairwise initial-segment discipline and piece decompositions of an induced
// fragment, checked in the ordinal world
Report verify_fragment(const Scheme& S, const std::vector<LabeledOrdSet>& fam);

// every valid condition with support inside `limits`, size <= max_supp, and
// entry members of level <= max_level
std::vector<CohenCondition> enumerate_conditions(
    const Scheme& S, const std::vector<OrdinalCode>& limits, uint32_t max_supp,
    uint32_t max_level);

// condition file format: one line per support point "<ordinal> : <elems> @ <anchor>"
std::string condition_to_text(const Scheme& S, const CohenCondition& p);
CohenCondition condition_from_text(const Scheme& S, const std::string& text);

}  // namespace caplab
