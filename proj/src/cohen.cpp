#include "caplab/cohen.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace caplab {

const CohenEntry* CohenCondition::find(OrdinalCode delta) const {
  for (const auto& e : entries)
    if (e.delta == delta) return &e;
  return nullptr;
}

MemberRef CohenCondition::top() const {
  if (entries.empty())
    throw Error(Errc::PreconditionFailed, "empty condition has no top member");
  return entries.back().D;
}

std::variant<CohenCondition, CondViolation> validate_condition(
    const Scheme& S, const RawCondition& raw) {
  CohenCondition p;
  for (size_t i = 0; i < raw.size(); ++i) {
    const auto& [delta, Dset, anchor] = raw[i];
    if (!delta.is_limit()) return CondViolation{"limit", i};
    auto ref = S.find_member(Dset);
    if (!ref) return CondViolation{"member", i};
    if (!Dset.contains(anchor)) return CondViolation{"anchor", i};
    p.entries.push_back(CohenEntry{delta, *ref, anchor});
  }
  std::sort(p.entries.begin(), p.entries.end(),
            [](const CohenEntry& a, const CohenEntry& b) { return a.delta < b.delta; });
  for (size_t i = 0; i + 1 < p.entries.size(); ++i) {
    if (p.entries[i].delta == p.entries[i + 1].delta)
      return CondViolation{"limit", i};  // duplicate support point
    if (!is_subset(S.member(p.entries[i].D), S.member(p.entries[i + 1].D)))
      return CondViolation{"nestedness", i};
    if (p.entries[i].anchor >= p.entries[i + 1].anchor)
      return CondViolation{"anchor-monotone", i};
  }
  return p;
}

CohenCondition require_condition(const Scheme& S, const RawCondition& raw) {
  auto res = validate_condition(S, raw);
  if (auto* v = std::get_if<CondViolation>(&res))
    throw Error(Errc::PreconditionFailed,
                "condition violates clause " + v->clause + " at entry " +
                    std::to_string(v->at));
  return std::get<CohenCondition>(res);
}

OrdinalCode phi_embed(uint32_t a, OrdinalCode delta, uint32_t x) {
  if (!delta.is_limit())
    throw Error(Errc::PreconditionFailed, "phi_embed needs a limit ordinal");
  if (x < a) return nat(x);
  return ord_add(delta, x - a);
}

std::optional<OrdinalCode> OrdMap::at(uint32_t x) const {
  auto it = std::lower_bound(pairs.begin(), pairs.end(), x,
                             [](const auto& p, uint32_t v) { return p.first < v; });
  if (it == pairs.end() || it->first != x) return std::nullopt;
  return it->second;
}

std::optional<uint32_t> OrdMap::preimage(OrdinalCode y) const {
  for (const auto& [k, v] : pairs)
    if (v == y) return k;
  return std::nullopt;
}

OrdMap phi_total(const Scheme& S, const CohenCondition& p) {
  OrdMap m;
  if (p.empty()) return m;
  const FinSet& top = S.member(p.top());
  m.pairs.reserve(top.size());
  for (uint32_t x : top.e) {
    // band: the largest support point whose anchor is <= x
    const CohenEntry* band = nullptr;
    for (const auto& e : p.entries)
      if (e.anchor <= x) band = &e;
    m.pairs.emplace_back(x, band ? phi_embed(band->anchor, band->delta, x) : nat(x));
  }
  return m;
}

std::vector<LabeledOrdSet> induced_family(const Scheme& S,
                                          const CohenCondition& p) {
  std::vector<LabeledOrdSet> out;
  if (p.empty()) return out;
  OrdMap phi = phi_total(S, p);
  for (MemberRef L : S.restrict_to(p.top())) {
    LabeledOrdSet img;
    img.level = L.level;
    for (uint32_t x : S.member(L).e) img.set.e.push_back(*phi.at(x));
    out.push_back(std::move(img));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// --- the extension order ----------------------------------------------------

// W \ [0,a) is an interval of D
static bool suffix_interval(const FinSet& W, const FinSet& D, uint32_t a) {
  size_t wi = count_below(W, a);
  if (wi == W.size()) return true;
  auto it = std::lower_bound(D.e.begin(), D.e.end(), W.e[wi]);
  size_t di = static_cast<size_t>(it - D.e.begin());
  if (di + (W.size() - wi) > D.size()) return false;
  return std::equal(W.e.begin() + wi, W.e.end(), D.e.begin() + di);
}

std::optional<ExtensionWitness> leq(const Scheme& S, const CohenCondition& p,
                                    const CohenCondition& q, LeqFailure* why) {
  ExtensionWitness wit;
  for (const auto& eq : q.entries) {
    const CohenEntry* ep = p.find(eq.delta);
    if (!ep) {
      if (why) *why = {eq.delta, "support"};
      return std::nullopt;
    }
  }
  for (size_t i = 0; i < q.entries.size(); ++i)
    for (size_t j = i + 1; j < q.entries.size(); ++j) {
      const auto& lo = q.entries[i];
      const auto& hi = q.entries[j];
      int64_t new_gap = static_cast<int64_t>(p.find(hi.delta)->anchor) -
                        p.find(lo.delta)->anchor;
      int64_t old_gap = static_cast<int64_t>(hi.anchor) - lo.anchor;
      if (new_gap < old_gap) {
        if (why) *why = {hi.delta, "gap"};
        return std::nullopt;
      }
    }
  for (const auto& eq : q.entries) {
    const CohenEntry* ep = p.find(eq.delta);
    const FinSet& Dp = S.member(ep->D);
    size_t want = count_below(S.member(eq.D), eq.anchor);
    auto [b, e] = S.contained_at(ep->D, eq.D.level);
    bool found = false;
    for (auto* it = b; it != e && !found; ++it) {
      const FinSet& W = S.member(*it);
      if (want < W.size() && W.e[want] == ep->anchor &&
          suffix_interval(W, Dp, ep->anchor)) {
        wit.W.emplace_back(eq.delta, *it);
        found = true;
      }
    }
    if (!found) {
      if (why) *why = {eq.delta, "witness"};
      return std::nullopt;
    }
  }
  return wit;
}

namespace {

// anchors b inside F admitting an order witness: some member W ⊆ F of the
// given level with exactly `want` elements below b, b ∈ W, and the rest of W
// an interval of F
std::vector<uint32_t> anchor_candidates(const Scheme& S, MemberRef F,
                                        uint32_t level, size_t want) {
  std::vector<uint32_t> out;
  const FinSet& Fset = S.member(F);
  auto [b, e] = S.contained_at(F, level);
  for (auto* it = b; it != e; ++it) {
    const FinSet& W = S.member(*it);
    if (want >= W.size()) continue;
    uint32_t cand = W.e[want];
    if (count_below(W, cand) == want && suffix_interval(W, Fset, cand))
      out.push_back(cand);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct RowSpec {
  std::vector<uint32_t> cand;           // sorted anchor candidates
  uint32_t abs_min = 0;                 // chosen >= abs_min
  int64_t min_gap = 1;                  // chosen - prev >= min_gap
  std::function<bool(uint32_t)> extra;  // optional per-row filter
};

bool pick_rows(const std::vector<RowSpec>& rows, size_t at, int64_t prev,
               std::vector<uint32_t>& out) {
  if (at == rows.size()) return true;
  const RowSpec& r = rows[at];
  int64_t lo = std::max<int64_t>(r.abs_min, prev + r.min_gap);
  auto it = std::lower_bound(r.cand.begin(), r.cand.end(), lo);
  for (; it != r.cand.end(); ++it) {
    if (r.extra && !r.extra(*it)) continue;
    out.push_back(*it);
    if (pick_rows(rows, at + 1, *it, out)) return true;
    out.pop_back();
  }
  return false;
}

struct ExtendSearch {
  const Scheme& S;
  const CohenCondition& p;
  OrdinalCode xi;

  // verified assembly; returns false when the pieces do not line up
  bool finish(const std::vector<CohenEntry>& entries, uint32_t x,
              std::pair<CohenCondition, uint32_t>& out) const {
    RawCondition raw;
    for (const auto& e : entries)
      raw.emplace_back(e.delta, S.member(e.D), e.anchor);
    auto res = validate_condition(S, raw);
    if (std::holds_alternative<CondViolation>(res)) return false;
    CohenCondition q = std::get<CohenCondition>(res);
    auto phi = phi_total(S, q).at(x);
    if (!phi || *phi != xi) return false;
    if (!leq(S, q, p)) return false;
    out = {q, x};
    return true;
  }

  bool members_ascending(const std::function<bool(MemberRef)>& fn) const {
    for (uint32_t k = 0; k <= S.K; ++k)
      for (uint32_t i = 0; i < S.levels[k].size(); ++i)
        if (fn(MemberRef{k, i})) return true;
    return false;
  }

  // supp kept, every entry re-anchored inside one member F containing x = xi
  bool natural_case(std::pair<CohenCondition, uint32_t>& out) const {
    uint32_t v = xi.off;
    return members_ascending([&](MemberRef F) {
      const FinSet& Fset = S.member(F);
      if (!Fset.contains(v)) return false;
      if (p.empty()) {
        // fresh single-point condition anchored above v
        auto it = std::upper_bound(Fset.e.begin(), Fset.e.end(), v);
        for (; it != Fset.e.end(); ++it) {
          std::vector<CohenEntry> es{{omega_times(1), F, *it}};
          if (finish(es, v, out)) return true;
        }
        return false;
      }
      std::vector<RowSpec> rows;
      for (size_t i = 0; i < p.entries.size(); ++i) {
        RowSpec r;
        r.cand = anchor_candidates(S, F, p.entries[i].D.level,
                                   count_below(S.member(p.entries[i].D),
                                               p.entries[i].anchor));
        r.min_gap = i == 0 ? 1
                           : static_cast<int64_t>(p.entries[i].anchor) -
                                 p.entries[i - 1].anchor;
        rows.push_back(std::move(r));
      }
      std::vector<uint32_t> picked;
      if (!pick_rows(rows, 0, v, picked)) return false;
      std::vector<CohenEntry> es;
      for (size_t i = 0; i < p.entries.size(); ++i)
        es.push_back({p.entries[i].delta, F, picked[i]});
      return finish(es, v, out);
    });
  }

  // delta sits in the support at position j: keep the prefix, re-anchor the
  // tail inside one member F, and land x = b_j + off in its band
  bool replace_tail(size_t j, std::pair<CohenCondition, uint32_t>& out) const {
    uint32_t off = xi.off;
    const auto& ents = p.entries;
    return members_ascending([&](MemberRef F) {
      const FinSet& Fset = S.member(F);
      if (j >= 1 && !is_subset(S.member(ents[j - 1].D), Fset)) return false;
      std::vector<RowSpec> rows;
      for (size_t i = j; i < ents.size(); ++i) {
        RowSpec r;
        r.cand = anchor_candidates(S, F, ents[i].D.level,
                                   count_below(S.member(ents[i].D), ents[i].anchor));
        r.abs_min = j >= 1 ? ents[i].anchor : 0;
        if (i == j) {
          r.min_gap = 1;
          r.extra = [&Fset, off](uint32_t b) { return Fset.contains(b + off); };
        } else {
          r.min_gap = static_cast<int64_t>(ents[i].anchor) - ents[i - 1].anchor;
          if (i == j + 1) {
            // stay clear of the target band
            r.min_gap = std::max<int64_t>(r.min_gap, off + 1);
          }
        }
        rows.push_back(std::move(r));
      }
      int64_t floor0 = j >= 1 ? ents[j - 1].anchor : -1;
      std::vector<uint32_t> picked;
      if (!pick_rows(rows, 0, floor0, picked)) return false;
      std::vector<CohenEntry> es(ents.begin(), ents.begin() + j);
      for (size_t i = j; i < ents.size(); ++i)
        es.push_back({ents[i].delta, F, picked[i - j]});
      return finish(es, picked[0] + off, out);
    });
  }

  // delta above the whole support: append, preferring the least fresh anchor
  bool append_case(OrdinalCode delta, std::pair<CohenCondition, uint32_t>& out) const {
    uint32_t off = xi.off;
    FinSet Dtop;
    if (!p.empty()) Dtop = S.member(p.top());
    uint32_t start = Dtop.empty() ? 1 : Dtop.max() + 1;
    for (uint32_t a = start; a + off < S.universe_size(); ++a) {
      FinSet need = Dtop;
      for (uint32_t t = 0; t <= off; ++t) need = unite(need, fin({a + t}));
      bool done = members_ascending([&](MemberRef F) {
        if (!is_subset(need, S.member(F))) return false;
        std::vector<CohenEntry> es = p.entries;
        es.push_back({delta, F, a});
        return finish(es, a + off, out);
      });
      if (done) return true;
    }
    // fall back to re-anchoring everything inside one member
    return members_ascending([&](MemberRef F) {
      const FinSet& Fset = S.member(F);
      std::vector<RowSpec> rows;
      for (size_t i = 0; i < p.entries.size(); ++i) {
        RowSpec r;
        r.cand = anchor_candidates(S, F, p.entries[i].D.level,
                                   count_below(S.member(p.entries[i].D),
                                               p.entries[i].anchor));
        r.min_gap = i == 0 ? 1
                           : static_cast<int64_t>(p.entries[i].anchor) -
                                 p.entries[i - 1].anchor;
        rows.push_back(std::move(r));
      }
      RowSpec last;
      last.cand = Fset.e;
      last.min_gap = 1;
      last.extra = [&Fset, off](uint32_t b) { return Fset.contains(b + off); };
      rows.push_back(std::move(last));
      std::vector<uint32_t> picked;
      if (!pick_rows(rows, 0, -1, picked)) return false;
      std::vector<CohenEntry> es;
      for (size_t i = 0; i < p.entries.size(); ++i)
        es.push_back({p.entries[i].delta, F, picked[i]});
      es.push_back({delta, F, picked.back()});
      return finish(es, picked.back() + off, out);
    });
  }

  // delta strictly between support points (or below all of them)
  bool insert_case(OrdinalCode delta, size_t j,
                   std::pair<CohenCondition, uint32_t>& out) const {
    uint32_t off = xi.off;
    const auto& ents = p.entries;
    return members_ascending([&](MemberRef F) {
      const FinSet& Fset = S.member(F);
      if (j >= 1 && !is_subset(S.member(ents[j - 1].D), Fset)) return false;
      std::vector<RowSpec> rows;
      RowSpec fresh;  // the new support point, free anchor in F
      fresh.cand = Fset.e;
      fresh.min_gap = 1;
      fresh.extra = [&Fset, off](uint32_t b) { return Fset.contains(b + off); };
      rows.push_back(std::move(fresh));
      for (size_t i = j; i < ents.size(); ++i) {
        RowSpec r;
        r.cand = anchor_candidates(S, F, ents[i].D.level,
                                   count_below(S.member(ents[i].D), ents[i].anchor));
        r.abs_min = j >= 1 ? ents[i].anchor : 0;
        if (i == j)
          r.min_gap = off + 1;  // past the target band
        else
          r.min_gap = static_cast<int64_t>(ents[i].anchor) - ents[i - 1].anchor;
        rows.push_back(std::move(r));
      }
      int64_t floor0 = j >= 1 ? ents[j - 1].anchor : -1;
      std::vector<uint32_t> picked;
      if (!pick_rows(rows, 0, floor0, picked)) return false;
      std::vector<CohenEntry> es(ents.begin(), ents.begin() + j);
      es.push_back({delta, F, picked[0]});
      for (size_t i = j; i < ents.size(); ++i)
        es.push_back({ents[i].delta, F, picked[i - j + 1]});
      return finish(es, picked[0] + off, out);
    });
  }
};

}  // namespace

std::pair<CohenCondition, uint32_t> extend_to_cover(const Scheme& S,
                                                    const CohenCondition& p,
                                                    OrdinalCode xi) {
  if (auto x = phi_total(S, p).preimage(xi)) return {p, *x};

  ExtendSearch es{S, p, xi};
  std::pair<CohenCondition, uint32_t> out;
  if (xi.is_natural()) {
    if (es.natural_case(out)) return out;
    throw Error(Errc::DepthExhausted,
                "cannot cover natural " + ord_str(xi) +
                    ": no member holds it below a witnessed anchor row");
  }
  OrdinalCode delta = limit_part(xi);
  size_t j = 0;
  while (j < p.entries.size() && p.entries[j].delta < delta) ++j;
  if (j < p.entries.size() && p.entries[j].delta == delta) {
    if (es.replace_tail(j, out)) return out;
  } else if (j == p.entries.size()) {
    if (es.append_case(delta, out)) return out;
  } else {
    if (es.insert_case(delta, j, out)) return out;
  }
  std::ostringstream msg;
  msg << "cannot cover " << ord_str(xi) << " from a condition with support size "
      << p.size() << "; demanded a member holding ";
  if (!p.empty()) msg << S.member(p.top()).str() << " plus ";
  msg << "a run of " << (xi.off + 1) << " fresh points (depth K=" << S.K << ")";
  throw Error(Errc::DepthExhausted, msg.str());
}

CohenCondition extend_cover_set(const Scheme& S, const CohenCondition& p,
                                const OrdSet& A) {
  if (A.empty()) return p;
  CohenCondition cur = p;
  bool stable = false;
  for (size_t pass = 0; pass <= A.size() + 2 && !stable; ++pass) {
    stable = true;
    for (OrdinalCode xi : A.e) {
      if (phi_total(S, cur).preimage(xi)) continue;
      cur = extend_to_cover(S, cur, xi).first;
      stable = false;
    }
  }
  if (!stable)
    throw Error(Errc::DepthExhausted, "coverage of " + A.str() + " did not stabilize");

  OrdMap phi = phi_total(S, cur);
  FinSet B = S.member(cur.top());
  for (OrdinalCode xi : A.e) B = unite(B, fin({*phi.preimage(xi)}));

  for (uint32_t k = 0; k <= S.K; ++k)
    for (uint32_t i = 0; i < S.levels[k].size(); ++i) {
      const FinSet& F = S.levels[k][i];
      if (!is_subset(B, F)) continue;
      RawCondition raw;
      for (const auto& e : cur.entries) raw.emplace_back(e.delta, F, e.anchor);
      auto res = validate_condition(S, raw);
      if (std::holds_alternative<CondViolation>(res)) continue;
      CohenCondition q = std::get<CohenCondition>(res);
      if (!leq(S, q, cur)) continue;
      return q;
    }
  throw Error(Errc::DepthExhausted,
              "no member contains " + B.str() + " for the enlargement step");
}

// --- standardization and capture forcing ------------------------------------

StandardizedFamily standardize(const Scheme& S,
                               const std::vector<CohenCondition>& conds,
                               const std::vector<OrdinalCode>& marks) {
  if (conds.empty() || conds.size() != marks.size())
    throw Error(Errc::PreconditionFailed, "need one mark per condition");

  std::vector<size_t> order(conds.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return marks[a] < marks[b]; });
  StandardizedFamily fam;
  for (size_t i : order) {
    fam.conds.push_back(conds[i]);
    fam.targets.push_back(marks[i]);
  }
  for (size_t i = 0; i + 1 < fam.targets.size(); ++i)
    if (fam.targets[i] == fam.targets[i + 1])
      throw Error(Errc::NotStandardizable, "clause 4: marks must be distinct");

  size_t d = fam.conds[0].size();
  for (const auto& c : fam.conds)
    if (c.size() != d)
      throw Error(Errc::NotStandardizable, "clause 2: support sizes differ");
  if (d == 0)
    throw Error(Errc::NotStandardizable, "clause 4: empty conditions carry no mark");
  fam.depth = static_cast<uint32_t>(d);

  // root = common support prefix; tails pairwise block-increasing
  size_t r = d;
  if (fam.conds.size() > 1) {
    r = 0;
    while (r < d) {
      OrdinalCode ref = fam.conds[0].entries[r].delta;
      bool same = true;
      for (const auto& c : fam.conds)
        if (c.entries[r].delta != ref) { same = false; break; }
      if (!same) break;
      ++r;
    }
    for (size_t t = 0; t < fam.conds.size(); ++t)
      for (size_t u = 0; u < fam.conds.size(); ++u) {
        if (t == u) continue;
        for (size_t i = r; i < d; ++i)
          if (fam.conds[u].find(fam.conds[t].entries[i].delta))
            throw Error(Errc::NotStandardizable, "clause 1: tails are not disjoint");
      }
    for (size_t t = 0; t + 1 < fam.conds.size(); ++t)
      if (r < d && !(fam.conds[t].entries[d - 1].delta <
                     fam.conds[t + 1].entries[r].delta))
        throw Error(Errc::NotStandardizable, "clause 1: tails are not increasing");
  }
  fam.root_size = static_cast<uint32_t>(r);

  for (size_t i = 0; i < d; ++i) {
    MemberRef Dref = fam.conds[0].entries[i].D;
    uint32_t a = fam.conds[0].entries[i].anchor;
    for (const auto& c : fam.conds)
      if (!(c.entries[i].D == Dref) || c.entries[i].anchor != a)
        throw Error(Errc::NotStandardizable, "clause 3: entry data differs");
  }

  std::optional<uint32_t> common_x;
  for (size_t t = 0; t < fam.conds.size(); ++t) {
    auto x = phi_total(S, fam.conds[t]).preimage(fam.targets[t]);
    if (!x)
      throw Error(Errc::NotStandardizable,
                  "clause 4: target " + ord_str(fam.targets[t]) + " is not covered");
    if (common_x && *common_x != *x)
      throw Error(Errc::NotStandardizable, "clause 4: marked coordinates differ");
    common_x = *x;
  }
  fam.x = *common_x;
  const auto& anchors = fam.conds[0].entries;
  if (fam.x < anchors[0].anchor)
    throw Error(Errc::NotStandardizable, "clause 4: mark below the least anchor");
  uint32_t j0 = 0;
  for (size_t i = 0; i < d; ++i)
    if (anchors[i].anchor <= fam.x) j0 = static_cast<uint32_t>(i);
  fam.j0 = j0;
  return fam;
}

// capture of the targets inside the image of F*, checked in the ordinal world
static bool image_capture_ok(const Scheme& S, const OrdMap& phi, MemberRef Fstar,
                             uint32_t n_used,
                             const std::vector<OrdinalCode>& targets) {
  Scheme::Decomp d = S.decompose(Fstar);
  OrdSet root_img;
  for (uint32_t x : d.root.e) root_img.e.push_back(*phi.at(x));
  std::vector<OrdSet> piece_img(n_used);
  for (uint32_t i = 0; i < n_used; ++i)
    for (uint32_t x : S.member(d.pieces[i]).e) piece_img[i].e.push_back(*phi.at(x));
  size_t rank0 = SIZE_MAX;
  for (uint32_t i = 0; i < n_used; ++i) {
    if (!piece_img[i].contains(targets[i]) || root_img.contains(targets[i]))
      return false;
    size_t rank = piece_img[i].rank_of(targets[i]);
    if (i == 0) rank0 = rank;
    else if (rank != rank0) return false;
  }
  return true;
}

ForceResult force_capture(const Scheme& S, const StandardizedFamily& fam,
                          uint32_t n, const ForceMode& mode) {
  if (n == 0) throw Error(Errc::PreconditionFailed, "arity must be >= 1");
  if (n > fam.conds.size())
    throw Error(Errc::WidthExhausted,
                "only " + std::to_string(fam.conds.size()) + " marked conditions");
  if (mode.block && !mode.partition)
    throw Error(Errc::PreconditionFailed, "block filter needs a partition");

  const auto& shared = fam.conds[0].entries;
  uint32_t d = fam.depth;
  uint32_t r_eff = n == 1 ? 0 : fam.root_size;
  if (r_eff >= d)
    throw Error(Errc::PreconditionFailed, "standardized family has no tail entries");
  uint32_t cut = shared[r_eff].anchor;
  MemberRef Dlast = shared[d - 1].D;
  CoverOpts opts;
  opts.min_level = std::max(Dlast.level, mode.min_level);
  opts.partition = mode.partition;
  if (mode.block) opts.block = *mode.block;

  std::optional<ForceResult> result;
  for_each_cover_with_root(S, S.member(Dlast), cut, opts, [&](MemberRef Fstar) {
    uint32_t nk = static_cast<uint32_t>(S.typ.n[Fstar.level]);
    uint32_t n_used = mode.full ? nk : n;
    if (n_used > nk || n_used > fam.conds.size() || n_used == 0) return false;

    Scheme::Decomp dec = S.decompose(Fstar);
    const FinSet& F0 = S.member(dec.pieces[0]);
    std::vector<FinSet> W0(d);
    std::vector<uint32_t> a0(d);
    for (uint32_t j = 0; j < d; ++j) {
      W0[j] = copy_with_interval(S, F0, S.member(shared[j].D), shared[j].anchor);
      a0[j] = order_iso(S.member(shared[j].D), W0[j]).map(shared[j].anchor);
    }
    uint32_t x0 = order_iso(S.member(shared[d - 1].D), W0[d - 1]).map(fam.x);

    RawCondition raw;
    for (uint32_t j = 0; j < r_eff; ++j)
      raw.emplace_back(fam.conds[0].entries[j].delta, S.member(shared[j].D),
                       shared[j].anchor);
    std::vector<uint32_t> xi(n_used);
    for (uint32_t i = 0; i < n_used; ++i) {
      IsoMap iso = order_iso(F0, S.member(dec.pieces[i]));
      xi[i] = iso.map(x0);
      for (uint32_t j = r_eff; j < d; ++j)
        raw.emplace_back(fam.conds[i].entries[j].delta, S.member(Fstar),
                         iso.map(a0[j]));
    }
    auto validated = validate_condition(S, raw);
    if (std::holds_alternative<CondViolation>(validated)) return false;
    CohenCondition q = std::get<CohenCondition>(validated);

    OrdMap phi = phi_total(S, q);
    for (uint32_t i = 0; i < n_used; ++i) {
      auto img = phi.at(xi[i]);
      if (!img || *img != fam.targets[i]) return false;
    }
    std::vector<ExtensionWitness> wits;
    for (uint32_t i = 0; i < n_used; ++i) {
      auto w = leq(S, q, fam.conds[i]);
      if (!w) return false;
      wits.push_back(std::move(*w));
    }
    std::vector<OrdinalCode> targets(fam.targets.begin(),
                                     fam.targets.begin() + n_used);
    if (!image_capture_ok(S, phi, Fstar, n_used, targets)) return false;

    ForceResult fr;
    fr.q = std::move(q);
    fr.base_member = Fstar;
    fr.level = Fstar.level;
    for (uint32_t x : S.member(Fstar).e) fr.captured_member.e.push_back(*phi.at(x));
    fr.targets = std::move(targets);
    fr.witnesses = std::move(wits);
    result = std::move(fr);
    return true;
  });
  if (!result) {
    std::ostringstream msg;
    msg << "no level admits the capture: demanded cover of "
        << S.member(Dlast).str() << " with root cut at a=" << cut
        << ", level > " << opts.min_level;
    if (mode.block) msg << ", block " << *mode.block;
    if (mode.full) msg << ", full arity within width " << fam.conds.size();
    else msg << ", arity " << n;
    throw Error(Errc::DepthExhausted, msg.str());
  }
  return *result;
}

// --- generic runs ------------------------------------------------------------

Report verify_fragment(const Scheme& S, const std::vector<LabeledOrdSet>& fam) {
  Report rep;
  {
    bool ok = true;
    std::string bad;
    for (size_t i = 0; i < fam.size() && ok; ++i)
      for (size_t j = 0; j < fam.size(); ++j) {
        if (i == j || fam[i].level > fam[j].level) continue;
        OrdSet common = ord_intersect(fam[i].set, fam[j].set);
        if (!ord_initial_segment(common, fam[i].set)) {
          ok = false;
          bad = fam[i].set.str() + " vs " + fam[j].set.str();
          break;
        }
      }
    ok ? rep.pass("fragment-initial-segments") : rep.fail("fragment-initial-segments", bad);
  }
  {
    bool ok = true;
    std::string bad;
    std::set<std::pair<uint32_t, std::vector<OrdinalCode>>> index;
    for (const auto& m : fam) index.insert({m.level, m.set.e});
    for (const auto& m : fam) {
      if (m.level == 0) continue;
      size_t rk = static_cast<size_t>(S.typ.r[m.level]);
      size_t chunk = static_cast<size_t>(S.typ.m[m.level - 1]) - rk;
      size_t nk = static_cast<size_t>(S.typ.n[m.level]);
      for (size_t i = 0; i < nk && ok; ++i) {
        std::vector<OrdinalCode> piece(m.set.e.begin(), m.set.e.begin() + rk);
        piece.insert(piece.end(), m.set.e.begin() + rk + i * chunk,
                     m.set.e.begin() + rk + (i + 1) * chunk);
        if (!index.count({m.level - 1, piece})) {
          ok = false;
          bad = "piece of " + m.set.str() + " missing at level " +
                std::to_string(m.level - 1);
        }
      }
      if (!ok) break;
    }
    ok ? rep.pass("fragment-decompositions") : rep.fail("fragment-decompositions", bad);
  }
  return rep;
}

GenericRun run_generic(const Scheme& S, const std::vector<Goal>& goals,
                       uint32_t fuel, uint32_t limb_cap) {
  GenericRun run;
  run.chain.push_back(CohenCondition{});
  CohenCondition cur;

  auto charge = [&](uint32_t c) {
    if (run.fuel_used + c > fuel)
      throw Error(Errc::FuelExhausted,
                  "budget " + std::to_string(fuel) + " exceeded");
    run.fuel_used += c;
  };
  auto push = [&](const CohenCondition& q) {
    if (!(q == cur)) {
      run.chain.push_back(q);
      cur = q;
    }
  };
  auto cap_ok = [&](OrdinalCode o) { return o.limb < limb_cap; };

  for (size_t gi = 0; gi < goals.size(); ++gi) {
    const Goal& g = goals[gi];
    std::string key = "goal-" + std::to_string(gi);
    try {
      switch (g.kind) {
        case Goal::Kind::CoverOrdinal: {
          if (!cap_ok(g.xi))
            throw Error(Errc::PreconditionFailed,
                        ord_str(g.xi) + " lies beyond the cap w*" +
                            std::to_string(limb_cap));
          if (!phi_total(S, cur).preimage(g.xi)) {
            charge(1);
            push(extend_to_cover(S, cur, g.xi).first);
          }
          run.report.pass(key, "covered " + ord_str(g.xi));
          break;
        }
        case Goal::Kind::CoverSet: {
          uint32_t uncovered = 0;
          for (OrdinalCode o : g.A.e) {
            if (!cap_ok(o))
              throw Error(Errc::PreconditionFailed,
                          ord_str(o) + " lies beyond the cap w*" +
                              std::to_string(limb_cap));
            if (!phi_total(S, cur).preimage(o)) ++uncovered;
          }
          charge(uncovered + 1);
          push(extend_cover_set(S, cur, g.A));
          run.report.pass(key, "covered set " + g.A.str());
          break;
        }
        case Goal::Kind::ForceCapture: {
          if (g.targets.size() < 1)
            throw Error(Errc::PreconditionFailed, "capture goal without targets");
          OrdinalCode floor =
              cur.empty() ? nat(0) : cur.entries.back().delta;
          for (size_t t = 0; t < g.targets.size(); ++t) {
            OrdinalCode o = g.targets[t];
            if (!cap_ok(o))
              throw Error(Errc::PreconditionFailed,
                          ord_str(o) + " lies beyond the cap w*" +
                              std::to_string(limb_cap));
            if (!(limit_part(o) > floor) ||
                (t && !(limit_part(g.targets[t - 1]) < limit_part(o))))
              throw Error(Errc::PreconditionFailed,
                          "capture targets must ride fresh increasing limits");
            if (o.off != g.targets[0].off)
              throw Error(Errc::PreconditionFailed,
                          "capture targets must share one offset");
          }
          std::vector<CohenCondition> marked;
          for (OrdinalCode o : g.targets) {
            charge(1);
            marked.push_back(extend_to_cover(S, cur, o).first);
          }
          StandardizedFamily fam = standardize(S, marked, g.targets);
          charge(1);
          ForceResult fr =
              force_capture(S, fam, static_cast<uint32_t>(g.targets.size()));
          if (!leq(S, fr.q, cur))
            throw Error(Errc::ConstructionFailure,
                        "amalgamated condition does not extend the chain");
          push(fr.q);
          run.report.pass(key, "captured " + fr.captured_member.str() +
                                   " at level " + std::to_string(fr.level));
          break;
        }
      }
    } catch (const Error& e) {
      run.report.fail(key, e.what());
      break;
    }
  }
  run.fragment = induced_family(S, cur);
  run.report.merge(verify_fragment(S, run.fragment));
  return run;
}

// --- enumeration and io -------------------------------------------------------

std::vector<CohenCondition> enumerate_conditions(
    const Scheme& S, const std::vector<OrdinalCode>& limits, uint32_t max_supp,
    uint32_t max_level) {
  std::vector<MemberRef> pool;
  for (uint32_t k = 0; k <= std::min(max_level, S.K); ++k)
    for (uint32_t i = 0; i < S.levels[k].size(); ++i) pool.push_back({k, i});

  std::vector<OrdinalCode> ls = limits;
  std::sort(ls.begin(), ls.end());
  for (OrdinalCode l : ls)
    if (!l.is_limit())
      throw Error(Errc::PreconditionFailed, "support points must be limits");

  std::vector<CohenCondition> out;
  out.push_back(CohenCondition{});

  std::vector<size_t> supp_pick;
  std::function<void(size_t)> pick_supp = [&](size_t from) {
    if (!supp_pick.empty()) {
      // assign entries along the chosen support
      CohenCondition cond;
      std::function<void()> assign = [&]() {
        size_t at = cond.size();
        if (at == supp_pick.size()) {
          out.push_back(cond);
          return;
        }
        for (MemberRef D : pool) {
          if (at > 0 && !is_subset(S.member(cond.entries.back().D), S.member(D)))
            continue;
          uint32_t prev = at > 0 ? cond.entries.back().anchor : 0;
          for (uint32_t a : S.member(D).e) {
            if (at > 0 && a <= prev) continue;
            cond.entries.push_back({ls[supp_pick[at]], D, a});
            assign();
            cond.entries.pop_back();
          }
        }
      };
      assign();
    }
    if (supp_pick.size() == max_supp) return;
    for (size_t i = from; i < ls.size(); ++i) {
      supp_pick.push_back(i);
      pick_supp(i + 1);
      supp_pick.pop_back();
    }
  };
  pick_supp(0);
  return out;
}

std::string condition_to_text(const Scheme& S, const CohenCondition& p) {
  std::ostringstream os;
  for (const auto& e : p.entries) {
    os << ord_str(e.delta) << " :";
    for (uint32_t x : S.member(e.D).e) os << ' ' << x;
    os << " @ " << e.anchor << '\n';
  }
  return os.str();
}

CohenCondition condition_from_text(const Scheme& S, const std::string& text) {
  RawCondition raw;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    size_t colon = line.find(':');
    size_t at = line.rfind('@');
    if (colon == std::string::npos || at == std::string::npos || at < colon)
      throw Error(Errc::ParseError, "bad condition line: " + line);
    std::string ord_tok = line.substr(0, colon);
    ord_tok.erase(ord_tok.find_last_not_of(" \t") + 1);
    ord_tok.erase(0, ord_tok.find_first_not_of(" \t"));
    OrdinalCode delta = parse_ordinal(ord_tok);
    FinSet D = parse_fin_set(line.substr(colon + 1, at - colon - 1));
    uint32_t anchor;
    try {
      anchor = static_cast<uint32_t>(std::stoul(line.substr(at + 1)));
    } catch (const std::exception&) {
      throw Error(Errc::ParseError, "bad anchor in line: " + line);
    }
    raw.emplace_back(delta, std::move(D), anchor);
  }
  return require_condition(S, raw);
}

}  // namespace caplab
