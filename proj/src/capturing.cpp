#include "caplab/capturing.hpp"

#include <algorithm>
#include <sstream>

namespace caplab {

std::variant<DeltaSystemFamily, DeltaViolation> check_delta_system(
    const std::vector<FinSet>& family) {
  if (family.empty())
    throw Error(Errc::PreconditionFailed, "empty family");
  DeltaSystemFamily out;
  out.members = family;
  if (family.size() == 1) return out;  // root ∅ by convention

  FinSet root = intersect(family[0], family[1]);
  for (size_t i = 0; i < family.size(); ++i)
    for (size_t j = i + 1; j < family.size(); ++j)
      if (intersect(family[i], family[j]) != root)
        return DeltaViolation{i, j, "root-mismatch"};

  for (size_t i = 0; i < family.size(); ++i) {
    if (family[i] == root) return DeltaViolation{i, i, "not-increasing"};
    if (!initial_segment(root, family[i]))
      return DeltaViolation{i, i, "not-increasing"};
  }
  for (size_t i = 0; i + 1 < family.size(); ++i) {
    // whole non-root parts increase block by block
    uint32_t lo = family[i].max();
    uint32_t hi = family[i + 1].e[root.size()];
    if (lo >= hi) return DeltaViolation{i, i + 1, "not-increasing"};
  }
  out.root = std::move(root);
  return out;
}

namespace {

// max clique on the tail-disjointness graph, lexicographically least index set
struct CliqueSearch {
  const std::vector<std::vector<bool>>* compat;
  std::vector<size_t> best;
  std::vector<size_t> cur;

  void run(const std::vector<size_t>& cand, size_t from) {
    if (cur.size() > best.size()) best = cur;
    for (size_t ci = from; ci < cand.size(); ++ci) {
      if (cur.size() + (cand.size() - ci) <= best.size()) return;
      size_t v = cand[ci];
      bool ok = true;
      for (size_t u : cur)
        if (!(*compat)[u][v]) { ok = false; break; }
      if (!ok) continue;
      cur.push_back(v);
      run(cand, ci + 1);
      cur.pop_back();
    }
  }
};

}  // namespace

DeltaSystemFamily extract_delta_system(const std::vector<FinSet>& family,
                                       std::vector<size_t>* picked) {
  if (family.size() < 2)
    throw Error(Errc::PreconditionFailed, "need at least 2 sets");

  std::vector<FinSet> roots;
  for (size_t i = 0; i < family.size(); ++i)
    for (size_t j = i + 1; j < family.size(); ++j)
      roots.push_back(intersect(family[i], family[j]));
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());

  std::vector<size_t> best;
  for (const FinSet& s : roots) {
    std::vector<size_t> eligible;
    for (size_t i = 0; i < family.size(); ++i)
      if (family[i] != s && initial_segment(s, family[i])) eligible.push_back(i);
    if (eligible.size() < 2) continue;
    // compat: tails disjoint (then intersections equal s exactly)
    std::vector<std::vector<bool>> compat(eligible.size(),
                                          std::vector<bool>(eligible.size(), false));
    for (size_t a = 0; a < eligible.size(); ++a)
      for (size_t b = a + 1; b < eligible.size(); ++b) {
        bool ok = intersect(family[eligible[a]], family[eligible[b]]) == s;
        compat[a][b] = compat[b][a] = ok;
      }
    CliqueSearch cs;
    cs.compat = &compat;
    std::vector<size_t> idx(eligible.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    cs.run(idx, 0);
    if (cs.best.size() < 2) continue;
    std::vector<size_t> chosen;
    for (size_t v : cs.best) chosen.push_back(eligible[v]);
    std::sort(chosen.begin(), chosen.end());
    if (chosen.size() > best.size() ||
        (chosen.size() == best.size() && chosen < best))
      best = chosen;
  }
  if (best.size() < 2)
    throw Error(Errc::TooSmall, "no Δ-system sub-family of size >= 2");

  DeltaSystemFamily out;
  for (size_t i : best) out.members.push_back(family[i]);
  // list by increasing tails
  FinSet s = intersect(out.members[0], out.members[1]);
  std::sort(out.members.begin(), out.members.end(),
            [&](const FinSet& a, const FinSet& b) {
              return a.e[s.size()] < b.e[s.size()];
            });
  auto checked = check_delta_system(out.members);
  if (std::holds_alternative<DeltaViolation>(checked))
    throw Error(Errc::ConstructionFailure, "extracted family fails validation");
  if (picked) *picked = best;
  return std::get<DeltaSystemFamily>(checked);
}

DeltaSystemFamily extract_delta_system(const std::vector<FinSet>& family) {
  return extract_delta_system(family, nullptr);
}

int capture_clause_failure(const Scheme& S, MemberRef F,
                           const DeltaSystemFamily& fam,
                           const std::vector<uint32_t>& indices,
                           const std::vector<uint32_t>* pieces) {
  if (F.level < 1)
    throw Error(Errc::PreconditionFailed, "capture needs a member of level >= 1");
  size_t n = indices.size();
  size_t nk = static_cast<size_t>(S.typ.n[F.level]);
  if (n > nk)
    throw Error(Errc::ArityTooLarge, "arity " + std::to_string(n) + " exceeds n_k=" +
                                         std::to_string(nk));
  for (size_t t = 0; t < n; ++t) {
    if (indices[t] >= fam.members.size())
      throw Error(Errc::PreconditionFailed, "member index out of range");
    if (t && indices[t - 1] >= indices[t])
      throw Error(Errc::PreconditionFailed, "indices must increase");
  }
  std::vector<uint32_t> default_pieces;
  if (!pieces) {
    default_pieces.resize(n);
    for (size_t t = 0; t < n; ++t) default_pieces[t] = static_cast<uint32_t>(t);
    pieces = &default_pieces;
  }
  if (pieces->size() != n)
    throw Error(Errc::PreconditionFailed, "piece list size mismatch");
  for (size_t t = 0; t < n; ++t) {
    if ((*pieces)[t] >= nk) throw Error(Errc::ArityTooLarge, "piece index beyond n_k");
    if (t && (*pieces)[t - 1] >= (*pieces)[t])
      throw Error(Errc::PreconditionFailed, "pieces must increase");
  }

  Scheme::Decomp d = S.decompose(F);
  if (!is_subset(fam.root, d.root)) return 1;
  for (size_t t = 0; t < n; ++t) {
    const FinSet& s = fam.members[indices[t]];
    const FinSet& piece = S.member(d.pieces[(*pieces)[t]]);
    FinSet tail = setminus(s, fam.root);
    if (!is_subset(tail, piece) || intersect_size(tail, d.root) != 0) return 2;
  }
  const FinSet& first_piece = S.member(d.pieces[(*pieces)[0]]);
  const FinSet& s0 = fam.members[indices[0]];
  for (size_t t = 1; t < n; ++t) {
    IsoMap iso = order_iso(first_piece, S.member(d.pieces[(*pieces)[t]]));
    if (iso.map_set(s0) != fam.members[indices[t]]) return 3;
  }
  return 0;
}

bool captures(const Scheme& S, MemberRef F, const DeltaSystemFamily& fam,
              const std::vector<uint32_t>& indices,
              const std::vector<uint32_t>* pieces) {
  return capture_clause_failure(S, F, fam, indices, pieces) == 0;
}

namespace {

// increasing tuples from [0, pool) of length n, lexicographic order
bool next_combination(std::vector<uint32_t>& c, uint32_t pool) {
  size_t n = c.size();
  for (size_t i = n; i-- > 0;) {
    // largest value position i may hold is pool - n + i
    if (c[i] + (n - i) < pool) {
      ++c[i];
      for (size_t j = i + 1; j < n; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

std::optional<CaptureWitness> find_capture(const Scheme& S,
                                           const DeltaSystemFamily& fam,
                                           const CaptureQuery& query,
                                           CaptureStats* stats) {
  if (query.arity && *query.arity < 2)
    throw Error(Errc::PreconditionFailed, "fixed arity must be >= 2");
  if (query.block && !query.partition)
    throw Error(Errc::PreconditionFailed, "block filter needs a partition");
  CaptureStats local;
  CaptureStats& st = stats ? *stats : local;

  for (uint32_t k = std::max(1u, query.min_level + 1); k <= S.K; ++k) {
    if (query.block && query.partition->assign(k) != *query.block) continue;
    uint32_t nk = static_cast<uint32_t>(S.typ.n[k]);
    uint32_t n = query.arity ? *query.arity : nk;
    if (n > nk || n > fam.members.size() || n == 0) continue;
    ++st.levels_scanned;
    for (uint32_t fi = 0; fi < S.levels[k].size(); ++fi) {
      MemberRef F{k, fi};
      std::vector<uint32_t> idx(n);
      for (uint32_t t = 0; t < n; ++t) idx[t] = t;
      do {
        if (!query.any_pieces) {
          ++st.tuples_checked;
          int fail = capture_clause_failure(S, F, fam, idx, nullptr);
          if (fail == 0) {
            std::vector<uint32_t> ps(n);
            for (uint32_t t = 0; t < n; ++t) ps[t] = t;
            return CaptureWitness{F, k, idx, ps};
          }
          if (fail == 1) ++st.rejected_root;
          if (fail == 2) ++st.rejected_tail;
          if (fail == 3) ++st.rejected_transport;
        } else {
          std::vector<uint32_t> ps(n);
          for (uint32_t t = 0; t < n; ++t) ps[t] = t;
          do {
            ++st.tuples_checked;
            int fail = capture_clause_failure(S, F, fam, idx, &ps);
            if (fail == 0) return CaptureWitness{F, k, idx, ps};
            if (fail == 1) ++st.rejected_root;
            if (fail == 2) ++st.rejected_tail;
            if (fail == 3) ++st.rejected_transport;
          } while (next_combination(ps, nk));
        }
      } while (next_combination(idx, static_cast<uint32_t>(fam.members.size())));
    }
  }
  return std::nullopt;
}

std::vector<FinSet> parse_family_lines(const std::string& text) {
  std::vector<FinSet> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    bool blank = line.find_first_not_of(" \t\r") == std::string::npos;
    if (!blank) out.push_back(parse_fin_set(line));
  }
  return out;
}

}  // namespace caplab
