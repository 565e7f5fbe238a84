#pragma once

#include <functional>
#include <optional>
#include <random>

#include "caplab/capturing.hpp"
#include "caplab/scheme.hpp"

// Test-side oracles; the capture enumeration re-derives decompositions from
// the chunk rule and evaluates the clauses by hand, independent of the
// library search path.
namespace test_oracles {

using namespace caplab;

inline Scheme diag_scheme(uint32_t K) {
  return build_scheme(generate_type(sched_linear(1, 1), sched_diag(), K), K);
}

inline Scheme factorial_scheme(uint32_t K) {
  return build_scheme(generate_type(sched_linear(1, 1), sched_const(0), K), K);
}

inline Scheme ones_scheme(uint32_t K) {
  return build_scheme(generate_type(sched_linear(1, 1), sched_const(1), K), K);
}

inline std::optional<CaptureWitness> brute_find_capture(
    const Scheme& S, const DeltaSystemFamily& fam, uint32_t arity) {
  for (uint32_t k = 1; k <= S.K; ++k) {
    if (arity > S.typ.n[k] || arity > fam.members.size()) continue;
    size_t rk = static_cast<size_t>(S.typ.r[k]);
    size_t chunk = static_cast<size_t>(S.typ.m[k - 1]) - rk;
    for (uint32_t fi = 0; fi < S.levels[k].size(); ++fi) {
      const FinSet& F = S.levels[k][fi];
      FinSet root;
      root.e.assign(F.e.begin(), F.e.begin() + rk);
      std::vector<FinSet> pieces;
      for (uint32_t i = 0; i < arity; ++i) {
        FinSet p = root;
        p.e.insert(p.e.end(), F.e.begin() + rk + i * chunk,
                   F.e.begin() + rk + (i + 1) * chunk);
        pieces.push_back(std::move(p));
      }
      auto clause_ok = [&](const std::vector<uint32_t>& idx) {
        if (!is_subset(fam.root, root)) return false;
        for (uint32_t t = 0; t < arity; ++t) {
          FinSet tail = setminus(fam.members[idx[t]], fam.root);
          if (!is_subset(tail, pieces[t])) return false;
          if (intersect_size(tail, root) != 0) return false;
        }
        const FinSet& s0 = fam.members[idx[0]];
        for (uint32_t t = 1; t < arity; ++t) {
          FinSet moved;
          for (uint32_t v : s0.e)
            moved.e.push_back(pieces[t].e[pieces[0].rank_of(v)]);
          if (!(moved == fam.members[idx[t]])) return false;
        }
        return true;
      };
      std::optional<CaptureWitness> found;
      std::vector<uint32_t> idx;
      std::function<bool(uint32_t)> rec = [&](uint32_t from) {
        if (idx.size() == arity) {
          if (!clause_ok(idx)) return false;
          std::vector<uint32_t> ps(arity);
          for (uint32_t t = 0; t < arity; ++t) ps[t] = t;
          found = CaptureWitness{MemberRef{k, fi}, k, idx, ps};
          return true;
        }
        for (uint32_t c = from; c < fam.members.size(); ++c) {
          idx.push_back(c);
          if (rec(c + 1)) return true;
          idx.pop_back();
        }
        return false;
      };
      if (rec(0)) return found;
    }
  }
  return std::nullopt;
}

// valid increasing Δ-system, half the time carved out of a decomposition so
// the capture search has hits to find
inline DeltaSystemFamily random_family(const Scheme& S, std::mt19937_64& rng) {
  for (;;) {
    std::vector<FinSet> sets;
    if (rng() & 1) {
      uint32_t k = 1 + rng() % S.K;
      const FinSet& F = S.levels[k][rng() % S.levels[k].size()];
      size_t rk = static_cast<size_t>(S.typ.r[k]);
      size_t chunk = static_cast<size_t>(S.typ.m[k - 1]) - rk;
      uint32_t width = 2 + rng() % S.typ.n[k];
      width = std::min<uint32_t>(width, static_cast<uint32_t>(S.typ.n[k]));
      size_t in_piece = rk + rng() % chunk;
      FinSet root;
      if (rk && (rng() & 1)) root.e.push_back(F.e[rng() % rk]);
      for (uint32_t i = 0; i < width; ++i) {
        FinSet s = root;
        s.e.push_back(F.e[rk + i * chunk + (in_piece - rk)]);
        sets.push_back(FinSet(std::move(s.e)));
      }
    } else {
      uint32_t root_sz = rng() % 3;
      FinSet root;
      uint32_t v = rng() % 3;
      for (uint32_t i = 0; i < root_sz; ++i) {
        root.e.push_back(v);
        v += 1 + rng() % 2;
      }
      uint32_t width = 2 + rng() % 4;
      for (uint32_t i = 0; i < width; ++i) {
        FinSet s = root;
        uint32_t len = 1 + rng() % 2;
        for (uint32_t j = 0; j < len; ++j) {
          v += 1 + rng() % 3;
          s.e.push_back(v);
        }
        sets.push_back(std::move(s));
      }
      if (v >= S.universe_size()) continue;
    }
    auto checked = check_delta_system(sets);
    if (std::holds_alternative<DeltaSystemFamily>(checked))
      return std::get<DeltaSystemFamily>(checked);
  }
}

}  // namespace test_oracles
