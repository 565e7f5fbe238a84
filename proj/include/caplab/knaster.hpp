#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <variant>
#include <vector>

#include "caplab/capturing.hpp"
#include "caplab/scheme.hpp"

namespace caplab {

/// Per-member color sequences f^F_α together with the level bounds N[k].
/// values[k][i][e] is the length-(k+1) sequence of the e-th element of the
/// i-th level-k member; f(α) is the sequence relative to the top member.
struct ColoringTable {
  std::vector<std::vector<std::vector<std::vector<uint32_t>>>> values;
  std::vector<uint32_t> N;

  const std::vector<uint32_t>& at(const Scheme& S, MemberRef F, uint32_t alpha) const;
  const std::vector<uint32_t>& top(const Scheme& S, uint32_t alpha) const;
};

// Bottom-up recursion: level-0 sequences are the constant 0 with N[0] = 1; at
// level k root elements get color N[k-1] and the transported tail elements of
// piece i get N[k-1]+i+1, lower coordinates inherited from the pieces.
ColoringTable build_colorings(const Scheme& S);

// exhaustive checks of the transport, coherence, bound-recursion and range
// properties of a table
Report verify_colorings(const Scheme& S, const ColoringTable& ct);

// For every singleton capture configuration (F, first pieces, arities
// 2..max_arity): top colorings share the length-k prefix and take exactly
// arity distinct values at coordinate k.
Report coloring_capture_bridge(const Scheme& S, const ColoringTable& ct,
                               uint32_t max_arity = 4);

std::string coloring_to_text(const Scheme& S, const ColoringTable& ct);

/// (★)_m instance: equal-length sequences, pairwise distinct.
struct StarInstance {
  std::vector<std::vector<uint32_t>> gamma;
  uint32_t m = 1;
};

struct StarHit {
  uint32_t k = 0;
  std::vector<uint32_t> indices;  // m+1 sequences sharing a length-k prefix
};

// least (k, tuple) with m+1 distinct values at coordinate k after a shared
// prefix; nullopt when gamma witnesses the property
std::optional<StarHit> star_search(const StarInstance& inst);

std::vector<std::vector<uint32_t>> parse_sequence_rows(const std::string& text);

/// Finite set with no captured (n+1)-tuple of singletons.
struct PnCondition {
  FinSet P;
  uint32_t n = 1;
};

struct PnCounterexample {
  std::vector<uint32_t> tuple;  // n+1 captured elements
  MemberRef F;
};

std::optional<PnCounterexample> pn_violation(const Scheme& S, const FinSet& P,
                                             uint32_t n);
bool pn_is_condition(const Scheme& S, const FinSet& P, uint32_t n);

// Transported copies of base.P across a Δ-positioned family of level-k
// members found by lexicographic backtracking from the least member
// containing base.P.  Every copy is re-validated.
std::vector<PnCondition> pn_standard_family(const Scheme& S,
                                            const PnCondition& base,
                                            uint32_t level, uint32_t count);

std::variant<PnCondition, PnCounterexample> pn_union_check(
    const Scheme& S, const std::vector<PnCondition>& conds, uint32_t n);

/// Amalgamation scenario: d_alpha captures (p_a1, p_a2), d_beta captures
/// (p_b1, p_b2), and big_f captures (d_alpha, d_beta); all four sets are
/// single-capture-free conditions from one Δ-system.
struct P1Scenario {
  FinSet d_alpha, d_beta, big_f;
  FinSet p_a1, p_a2, p_b1, p_b2;
};

// true iff p_a.P ∪ p_b.P stays capture-free at arity 2; throws BadScenario
// when the supplied data does not re-validate
bool p1_amalgam_check(const Scheme& S, const PnCondition& p_a,
                      const PnCondition& p_b, const P1Scenario& scenario);

// seeded generator of valid scenarios on 2-capturing fragments
P1Scenario make_p1_scenario(const Scheme& S, std::mt19937_64& rng);

}  // namespace caplab
