#include "caplab/knaster.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace caplab {

const std::vector<uint32_t>& ColoringTable::at(const Scheme& S, MemberRef F,
                                               uint32_t alpha) const {
  return values[F.level][F.idx][S.member(F).rank_of(alpha)];
}

const std::vector<uint32_t>& ColoringTable::top(const Scheme& S,
                                                uint32_t alpha) const {
  if (S.levels[S.K].size() != 1)
    throw Error(Errc::PreconditionFailed, "top level must hold a single member");
  return values[S.K][0][S.levels[S.K][0].rank_of(alpha)];
}

ColoringTable build_colorings(const Scheme& S) {
  if (S.levels[S.K].size() != 1)
    throw Error(Errc::PreconditionFailed, "coloring needs a single top member");
  ColoringTable ct;
  ct.N.assign(S.K + 1, 0);
  ct.N[0] = 1;
  ct.values.resize(S.K + 1);

  ct.values[0].resize(S.levels[0].size());
  for (size_t i = 0; i < S.levels[0].size(); ++i)
    ct.values[0][i].assign(1, std::vector<uint32_t>{0});

  for (uint32_t k = 1; k <= S.K; ++k) {
    uint32_t nk = static_cast<uint32_t>(S.typ.n[k]);
    ct.N[k] = ct.N[k - 1] + nk + 1;
    ct.values[k].resize(S.levels[k].size());
    for (size_t i = 0; i < S.levels[k].size(); ++i) {
      MemberRef F{k, static_cast<uint32_t>(i)};
      const FinSet& Fset = S.member(F);
      Scheme::Decomp d = S.decompose(F);
      auto& table = ct.values[k][i];
      table.assign(Fset.size(), {});

      const FinSet& p0 = S.member(d.pieces[0]);
      for (uint32_t alpha : d.root.e) {
        auto seq = ct.values[k - 1][d.pieces[0].idx][p0.rank_of(alpha)];
        seq.push_back(ct.N[k - 1]);
        table[Fset.rank_of(alpha)] = std::move(seq);
      }
      FinSet tail0 = setminus(p0, d.root);
      for (uint32_t pi = 0; pi < nk; ++pi) {
        const FinSet& pset = S.member(d.pieces[pi]);
        IsoMap iso = order_iso(p0, pset);
        for (uint32_t alpha0 : tail0.e) {
          uint32_t alpha_i = iso.map(alpha0);
          auto seq = ct.values[k - 1][d.pieces[pi].idx][pset.rank_of(alpha_i)];
          seq.push_back(ct.N[k - 1] + pi + 1);
          table[Fset.rank_of(alpha_i)] = std::move(seq);
        }
      }
    }
  }
  return ct;
}

Report verify_colorings(const Scheme& S, const ColoringTable& ct) {
  Report rep;

  {
    bool ok = ct.N.size() == S.K + 1 && ct.N[0] == 1;
    for (uint32_t k = 1; k <= S.K && ok; ++k)
      ok = ct.N[k] == ct.N[k - 1] + S.typ.n[k] + 1;
    ok ? rep.pass("color-bound-recursion") : rep.fail("color-bound-recursion");
  }

  // range: every coordinate j of a level-l sequence stays below N[j]
  {
    bool ok = true;
    std::string bad;
    for (uint32_t k = 0; k <= S.K && ok; ++k)
      for (size_t i = 0; i < S.levels[k].size() && ok; ++i)
        for (const auto& seq : ct.values[k][i]) {
          if (seq.size() != k + 1) { ok = false; bad = "wrong length"; break; }
          for (uint32_t j = 0; j <= k; ++j)
            if (seq[j] >= ct.N[j]) { ok = false; bad = "value out of range"; break; }
          if (!ok) break;
        }
    ok ? rep.pass("color-range") : rep.fail("color-range", bad);
  }

  // (1) transport: same-level order isomorphisms carry sequences over
  {
    bool ok = true;
    std::string bad;
    for (uint32_t k = 0; k <= S.K && ok; ++k) {
      const auto& lv = S.levels[k];
      for (size_t i = 0; i < lv.size() && ok; ++i)
        for (size_t j = i + 1; j < lv.size() && ok; ++j)
          for (size_t e = 0; e < lv[i].size(); ++e)
            if (ct.values[k][i][e] != ct.values[k][j][e]) {
              ok = false;
              bad = "members " + lv[i].str() + "," + lv[j].str() + " differ at rank " +
                    std::to_string(e);
              break;
            }
    }
    ok ? rep.pass("color-transport") : rep.fail("color-transport", bad);
  }

  // (2) coherence: lower-level sequences are prefixes wherever levels meet
  {
    bool ok = true;
    std::string bad;
    for (uint32_t k = 1; k <= S.K && ok; ++k)
      for (size_t i = 0; i < S.levels[k].size() && ok; ++i) {
        const FinSet& F = S.levels[k][i];
        for (uint32_t l = 0; l < k && ok; ++l)
          for (size_t j = 0; j < S.levels[l].size(); ++j) {
            const FinSet& E = S.levels[l][j];
            FinSet common = intersect(E, F);
            bool broke = false;
            for (uint32_t alpha : common.e) {
              const auto& low = ct.values[l][j][E.rank_of(alpha)];
              const auto& high = ct.values[k][i][F.rank_of(alpha)];
              if (!std::equal(low.begin(), low.end(), high.begin())) {
                ok = false;
                bad = "alpha=" + std::to_string(alpha) + " E=" + E.str() +
                      " F=" + F.str();
                broke = true;
                break;
              }
            }
            if (broke) break;
          }
      }
    ok ? rep.pass("color-coherence") : rep.fail("color-coherence", bad);
  }
  return rep;
}

Report coloring_capture_bridge(const Scheme& S, const ColoringTable& ct,
                               uint32_t max_arity) {
  Report rep;
  uint64_t witnesses = 0;
  bool ok = true;
  std::string bad;
  for (uint32_t k = 1; k <= S.K && ok; ++k) {
    uint32_t nk = static_cast<uint32_t>(S.typ.n[k]);
    for (size_t i = 0; i < S.levels[k].size() && ok; ++i) {
      MemberRef F{k, static_cast<uint32_t>(i)};
      Scheme::Decomp d = S.decompose(F);
      const FinSet& p0 = S.member(d.pieces[0]);
      FinSet tail0 = setminus(p0, d.root);
      for (uint32_t xi0 : tail0.e) {
        for (uint32_t n = 2; n <= std::min(max_arity, nk); ++n) {
          ++witnesses;
          std::set<uint32_t> at_k;
          const auto& ref = ct.top(S, xi0);
          bool good = true;
          for (uint32_t pi = 0; pi < n && good; ++pi) {
            uint32_t xi = order_iso(p0, S.member(d.pieces[pi])).map(xi0);
            const auto& seq = ct.top(S, xi);
            at_k.insert(seq[k]);
            good = std::equal(seq.begin(), seq.begin() + k, ref.begin());
          }
          if (!good || at_k.size() != n) {
            ok = false;
            bad = "witness F=" + S.member(F).str() + " xi0=" + std::to_string(xi0) +
                  " arity=" + std::to_string(n);
            break;
          }
        }
        if (!ok) break;
      }
    }
  }
  if (ok)
    rep.pass("coloring-capture-bridge",
             std::to_string(witnesses) + " capture configurations checked");
  else
    rep.fail("coloring-capture-bridge", bad);
  return rep;
}

std::string coloring_to_text(const Scheme& S, const ColoringTable& ct) {
  std::ostringstream os;
  os << "N:";
  for (uint32_t v : ct.N) os << ' ' << v;
  os << '\n';
  const FinSet& top = S.levels[S.K][0];
  for (uint32_t alpha : top.e) {
    os << alpha << ':';
    for (uint32_t v : ct.top(S, alpha)) os << ' ' << v;
    os << '\n';
  }
  return os.str();
}

// --- (★)_m ------------------------------------------------------------------

std::optional<StarHit> star_search(const StarInstance& inst) {
  const auto& g = inst.gamma;
  if (g.empty()) throw Error(Errc::PreconditionFailed, "empty instance");
  size_t len = g[0].size();
  for (const auto& s : g)
    if (s.size() != len)
      throw Error(Errc::PreconditionFailed, "sequences must share one length");
  for (size_t i = 0; i < g.size(); ++i)
    for (size_t j = i + 1; j < g.size(); ++j)
      if (g[i] == g[j]) throw Error(Errc::PreconditionFailed, "duplicate sequences");
  if (inst.m + 1 > g.size())
    throw Error(Errc::PreconditionFailed, "need at least m+1 sequences");

  for (uint32_t k = 0; k < len; ++k) {
    std::map<std::vector<uint32_t>, std::vector<uint32_t>> groups;
    for (uint32_t i = 0; i < g.size(); ++i)
      groups[std::vector<uint32_t>(g[i].begin(), g[i].begin() + k)].push_back(i);
    std::optional<StarHit> best;
    for (const auto& [prefix, idxs] : groups) {
      std::set<uint32_t> seen;
      std::vector<uint32_t> tuple;
      for (uint32_t i : idxs) {
        if (seen.insert(g[i][k]).second) tuple.push_back(i);
        if (tuple.size() == inst.m + 1) break;
      }
      if (tuple.size() == inst.m + 1 && (!best || tuple < best->indices))
        best = StarHit{k, tuple};
    }
    if (best) return best;
  }
  return std::nullopt;
}

std::vector<std::vector<uint32_t>> parse_sequence_rows(const std::string& text) {
  std::vector<std::vector<uint32_t>> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    size_t colon = line.find(':');
    std::istringstream row(colon == std::string::npos ? line : line.substr(colon + 1));
    std::vector<uint32_t> seq;
    long long v;
    while (row >> v) seq.push_back(static_cast<uint32_t>(v));
    out.push_back(std::move(seq));
  }
  return out;
}

// --- ℙ_n --------------------------------------------------------------------

std::optional<PnCounterexample> pn_violation(const Scheme& S, const FinSet& P,
                                             uint32_t n) {
  if (n < 1) throw Error(Errc::PreconditionFailed, "n must be >= 1");
  for (uint32_t k = 1; k <= S.K; ++k) {
    uint32_t nk = static_cast<uint32_t>(S.typ.n[k]);
    if (nk < n + 1) continue;
    for (uint32_t fi = 0; fi < S.levels[k].size(); ++fi) {
      MemberRef F{k, fi};
      Scheme::Decomp d = S.decompose(F);
      const FinSet& p0 = S.member(d.pieces[0]);
      FinSet tail0 = setminus(p0, d.root);
      for (uint32_t xi0 : tail0.e) {
        if (!P.contains(xi0)) continue;
        std::vector<uint32_t> tuple{xi0};
        bool all_in = true;
        for (uint32_t pi = 1; pi <= n && all_in; ++pi) {
          uint32_t xi = order_iso(p0, S.member(d.pieces[pi])).map(xi0);
          all_in = P.contains(xi);
          tuple.push_back(xi);
        }
        if (all_in) return PnCounterexample{tuple, F};
      }
    }
  }
  return std::nullopt;
}

bool pn_is_condition(const Scheme& S, const FinSet& P, uint32_t n) {
  return !pn_violation(S, P, n).has_value();
}

namespace {

// chosen is seeded with the anchor member; copies are transported from it
bool dfs_delta_family(const Scheme& S, uint32_t level, const FinSet& baseP,
                      uint32_t base_n, uint32_t count,
                      std::vector<uint32_t>& chosen) {
  if (chosen.size() == count) return true;
  const auto& lv = S.levels[level];
  for (uint32_t c = chosen.back() + 1; c < lv.size(); ++c) {
    std::vector<FinSet> trial;
    for (uint32_t pick : chosen) trial.push_back(lv[pick]);
    trial.push_back(lv[c]);
    if (std::holds_alternative<DeltaViolation>(check_delta_system(trial))) continue;
    FinSet copy = order_iso(lv[chosen[0]], lv[c]).map_set(baseP);
    if (!pn_is_condition(S, copy, base_n)) continue;
    chosen.push_back(c);
    if (dfs_delta_family(S, level, baseP, base_n, count, chosen)) return true;
    chosen.pop_back();
  }
  return false;
}

}  // namespace

std::vector<PnCondition> pn_standard_family(const Scheme& S,
                                            const PnCondition& base,
                                            uint32_t level, uint32_t count) {
  if (count == 0) throw Error(Errc::PreconditionFailed, "count must be >= 1");
  if (!pn_is_condition(S, base.P, base.n))
    throw Error(Errc::PreconditionFailed, "base set is not a condition");
  if (level > S.K)
    throw Error(Errc::InsufficientWidth, "no such level");

  std::optional<uint32_t> anchor;
  for (uint32_t i = 0; i < S.levels[level].size(); ++i)
    if (is_subset(base.P, S.levels[level][i])) { anchor = i; break; }
  if (!anchor)
    throw Error(Errc::PreconditionFailed,
                "base set is not contained in any level-" + std::to_string(level) +
                    " member");
  if (count == 1) return {base};

  std::vector<uint32_t> chosen{*anchor};
  if (!dfs_delta_family(S, level, base.P, base.n, count, chosen))
    throw Error(Errc::InsufficientWidth,
                "fewer than " + std::to_string(count) +
                    " Δ-positioned level-" + std::to_string(level) + " members");
  std::vector<PnCondition> out;
  const FinSet& D0 = S.levels[level][chosen[0]];
  for (uint32_t c : chosen)
    out.push_back(PnCondition{order_iso(D0, S.levels[level][c]).map_set(base.P),
                              base.n});
  return out;
}

std::variant<PnCondition, PnCounterexample> pn_union_check(
    const Scheme& S, const std::vector<PnCondition>& conds, uint32_t n) {
  if (conds.empty()) throw Error(Errc::PreconditionFailed, "empty condition list");
  for (size_t i = 0; i < conds.size(); ++i) {
    if (!pn_is_condition(S, conds[i].P, n))
      throw Error(Errc::PreconditionFailed, "input " + std::to_string(i) +
                                                " is not a condition");
    for (size_t j = i + 1; j < conds.size(); ++j)
      if (conds[i].P == conds[j].P)
        throw Error(Errc::PreconditionFailed, "conditions must be pairwise distinct");
  }
  FinSet Q;
  for (const auto& c : conds) Q = unite(Q, c.P);
  if (auto viol = pn_violation(S, Q, n)) return *viol;
  return PnCondition{Q, n};
}

// --- amalgamation ------------------------------------------------------------

static void require_capture(const Scheme& S, const FinSet& big,
                            const FinSet& s0, const FinSet& s1,
                            const char* what) {
  auto fam = check_delta_system({s0, s1});
  if (std::holds_alternative<DeltaViolation>(fam))
    throw Error(Errc::BadScenario, std::string(what) + ": pair is not a Δ-system");
  MemberRef F = S.require_member(big);
  if (F.level < 1 || !captures(S, F, std::get<DeltaSystemFamily>(fam), {0, 1}))
    throw Error(Errc::BadScenario, std::string(what) + ": capture fails");
}

bool p1_amalgam_check(const Scheme& S, const PnCondition& p_a,
                      const PnCondition& p_b, const P1Scenario& sc) {
  if (p_a.P != sc.p_a1 || p_b.P != sc.p_b2 || p_a.n != 1 || p_b.n != 1)
    throw Error(Errc::BadScenario, "conditions do not match the scenario data");
  MemberRef da = S.require_member(sc.d_alpha);
  MemberRef db = S.require_member(sc.d_beta);
  if (da.level != db.level)
    throw Error(Errc::BadScenario, "captured members must share a level");
  for (const FinSet* P : {&sc.p_a1, &sc.p_a2, &sc.p_b1, &sc.p_b2})
    if (!pn_is_condition(S, *P, 1))
      throw Error(Errc::BadScenario, "scenario set " + P->str() + " is not a condition");
  require_capture(S, sc.big_f, sc.d_alpha, sc.d_beta, "F vs (D_a, D_b)");
  require_capture(S, sc.d_alpha, sc.p_a1, sc.p_a2, "D_a vs pair");
  require_capture(S, sc.d_beta, sc.p_b1, sc.p_b2, "D_b vs pair");
  return pn_is_condition(S, unite(p_a.P, p_b.P), 1);
}

P1Scenario make_p1_scenario(const Scheme& S, std::mt19937_64& rng) {
  // candidate hosts: members F of level >= 2 whose first piece holds a
  // decomposable member
  std::vector<MemberRef> hosts;
  for (uint32_t k = 2; k <= S.K; ++k)
    for (uint32_t i = 0; i < S.levels[k].size(); ++i)
      hosts.push_back(MemberRef{k, i});
  if (hosts.empty())
    throw Error(Errc::PreconditionFailed, "scheme too shallow for scenarios");

  for (int attempt = 0; attempt < 4096; ++attempt) {
    MemberRef F = hosts[rng() % hosts.size()];
    Scheme::Decomp dF = S.decompose(F);
    const FinSet& F0 = S.member(dF.pieces[0]);
    FinSet rootF = dF.root;

    std::vector<MemberRef> das;
    for (uint32_t l = 1; l < F.level; ++l) {
      auto [lb, le] = S.contained_at(dF.pieces[0], l);
      for (auto* it = lb; it != le; ++it) das.push_back(*it);
    }
    if (das.empty()) continue;
    MemberRef da = das[rng() % das.size()];
    Scheme::Decomp dA = S.decompose(da);
    const FinSet& A0 = S.member(dA.pieces[0]);

    // pool: elements above both roots, plus shared root elements
    FinSet safe_root = intersect(intersect(dA.root, rootF), A0);
    FinSet high = setminus(setminus(A0, dA.root), rootF);
    if (high.empty()) continue;
    FinSet Q = safe_root.empty() || (rng() & 1) ? FinSet{} : safe_root;
    size_t tail_n = 1 + rng() % std::min<size_t>(2, high.size());
    std::vector<uint32_t> pick(high.e);
    for (size_t t = 0; t < tail_n; ++t) {
      size_t at = t + rng() % (pick.size() - t);
      std::swap(pick[t], pick[at]);
    }
    pick.resize(tail_n);
    Q = unite(Q, FinSet(std::move(pick)));

    P1Scenario sc;
    sc.big_f = S.member(F);
    sc.d_alpha = S.member(da);
    sc.d_beta = order_iso(F0, S.member(dF.pieces[1])).map_set(sc.d_alpha);
    sc.p_a1 = Q;
    sc.p_a2 = order_iso(A0, S.member(dA.pieces[1])).map_set(Q);
    sc.p_b1 = order_iso(F0, S.member(dF.pieces[1])).map_set(sc.p_a1);
    sc.p_b2 = order_iso(F0, S.member(dF.pieces[1])).map_set(sc.p_a2);

    bool all_cond = true;
    for (const FinSet* P : {&sc.p_a1, &sc.p_a2, &sc.p_b1, &sc.p_b2})
      if (!pn_is_condition(S, *P, 1)) { all_cond = false; break; }
    if (!all_cond) continue;
    return sc;
  }
  throw Error(Errc::PreconditionFailed, "could not assemble a scenario");
}

}  // namespace caplab
