#include "caplab/scheme.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace caplab {

size_t Scheme::member_count() const {
  size_t n = 0;
  for (const auto& lv : levels) n += lv.size();
  return n;
}

std::optional<MemberRef> Scheme::find_member(const FinSet& f) const {
  // sizes m[k] are strictly increasing, so |f| determines the level
  for (uint32_t k = 0; k <= K; ++k) {
    if (typ.m[k] != f.size()) continue;
    const auto& lv = levels[k];
    auto it = std::lower_bound(lv.begin(), lv.end(), f);
    if (it != lv.end() && *it == f)
      return MemberRef{k, static_cast<uint32_t>(it - lv.begin())};
    return std::nullopt;
  }
  return std::nullopt;
}

MemberRef Scheme::require_member(const FinSet& f) const {
  auto r = find_member(f);
  if (!r) throw Error(Errc::NotAMember, f.str() + " is not a member");
  return *r;
}

uint32_t Scheme::level_of(const FinSet& f) const { return require_member(f).level; }

FinSet Scheme::root_of(MemberRef r) const {
  const FinSet& f = member(r);
  FinSet root;
  if (r.level >= 1)
    root.e.assign(f.e.begin(), f.e.begin() + static_cast<size_t>(typ.r[r.level]));
  return root;
}

Scheme::Decomp Scheme::decompose(MemberRef r) const {
  if (r.level == 0)
    throw Error(Errc::PreconditionFailed, "level-0 members have no decomposition");
  Decomp d;
  d.root = root_of(r);
  d.pieces.reserve(piece_idx[r.level][r.idx].size());
  for (uint32_t pi : piece_idx[r.level][r.idx]) {
    if (pi == UINT32_MAX)
      throw Error(Errc::NotAMember,
                  "derived piece of " + member(r).str() + " is not a member");
    d.pieces.push_back(MemberRef{r.level - 1, pi});
  }
  return d;
}

const std::vector<MemberRef>& Scheme::restrict_to(MemberRef r) const {
  return contained[r.level][r.idx];
}

std::pair<const MemberRef*, const MemberRef*> Scheme::contained_at(
    MemberRef r, uint32_t level) const {
  const auto& v = contained[r.level][r.idx];
  MemberRef lo{level, 0}, hi{level + 1, 0};
  auto b = std::lower_bound(v.begin(), v.end(), lo);
  auto e = std::lower_bound(v.begin(), v.end(), hi);
  return {v.data() + (b - v.begin()), v.data() + (e - v.begin())};
}

// --- construction ---------------------------------------------------------

// derived pieces of a set at level k: prefix root plus equal chunks of the tail
static std::vector<FinSet> derived_pieces(const TypeSequence& typ, uint32_t k,
                                          const FinSet& f) {
  size_t rk = static_cast<size_t>(typ.r[k]);
  size_t nk = static_cast<size_t>(typ.n[k]);
  size_t chunk = static_cast<size_t>(typ.m[k - 1]) - rk;
  std::vector<FinSet> out;
  out.reserve(nk);
  for (size_t i = 0; i < nk; ++i) {
    FinSet p;
    p.e.assign(f.e.begin(), f.e.begin() + rk);
    p.e.insert(p.e.end(), f.e.begin() + rk + i * chunk,
               f.e.begin() + rk + (i + 1) * chunk);
    out.push_back(std::move(p));
  }
  return out;
}

static void build_indexes(Scheme& S) {
  uint32_t K = S.K;
  S.piece_idx.assign(K + 1, {});
  for (uint32_t k = 1; k <= K; ++k) {
    S.piece_idx[k].resize(S.levels[k].size());
    const auto& below_lv = S.levels[k - 1];
    for (size_t i = 0; i < S.levels[k].size(); ++i) {
      for (FinSet& p : derived_pieces(S.typ, k, S.levels[k][i])) {
        auto it = std::lower_bound(below_lv.begin(), below_lv.end(), p);
        S.piece_idx[k][i].push_back(it != below_lv.end() && *it == p
                                        ? static_cast<uint32_t>(it - below_lv.begin())
                                        : UINT32_MAX);
      }
    }
  }
  S.contained.assign(K + 1, {});
  for (uint32_t k = 0; k <= K; ++k) {
    S.contained[k].resize(S.levels[k].size());
    for (size_t i = 0; i < S.levels[k].size(); ++i) {
      auto& out = S.contained[k][i];
      const FinSet& f = S.levels[k][i];
      for (uint32_t l = 0; l < k; ++l)
        for (size_t j = 0; j < S.levels[l].size(); ++j)
          if (is_subset(S.levels[l][j], f))
            out.push_back(MemberRef{l, static_cast<uint32_t>(j)});
      out.push_back(MemberRef{k, static_cast<uint32_t>(i)});
    }
  }
}

Scheme scheme_from_levels(const TypeSequence& typ, uint32_t K,
                          std::vector<std::vector<FinSet>> levels) {
  if (K > typ.K || levels.size() != K + 1)
    throw Error(Errc::PreconditionFailed, "level list does not match K");
  Scheme S;
  S.typ = typ;
  S.typ.K = K;
  S.typ.m.resize(K + 1);
  S.typ.n.resize(K + 1);
  S.typ.r.resize(K + 1);
  S.K = K;
  S.levels = std::move(levels);
  for (auto& lv : S.levels) {
    std::sort(lv.begin(), lv.end());
    lv.erase(std::unique(lv.begin(), lv.end()), lv.end());
  }
  build_indexes(S);
  return S;
}

Scheme build_scheme(const TypeSequence& typ, uint32_t K) {
  if (K > typ.K)
    throw Error(Errc::PreconditionFailed,
                "type has " + std::to_string(typ.K) + " levels, requested K=" +
                    std::to_string(K));
  if (typ.m[K] > (1u << 24))
    throw Error(Errc::PreconditionFailed,
                "universe size " + std::to_string(typ.m[K]) + " too large to build");
  std::vector<std::vector<FinSet>> levels(K + 1);
  FinSet top;
  top.e.resize(static_cast<size_t>(typ.m[K]));
  for (uint32_t x = 0; x < typ.m[K]; ++x) top.e[x] = x;
  levels[K].push_back(std::move(top));
  for (uint32_t k = K; k >= 1; --k) {
    auto& next = levels[k - 1];
    for (const FinSet& f : levels[k])
      for (FinSet& p : derived_pieces(typ, k, f)) next.push_back(std::move(p));
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
  }
  Scheme S = scheme_from_levels(typ, K, std::move(levels));
  Report rep = verify_axioms(S);
  if (!rep.all_pass())
    throw Error(Errc::ConstructionFailure,
                "canonical builder produced an invalid family:\n" + rep.text());
  return S;
}

// --- copy with interval (the inductive copy construction) -----------------

static FinSet cwi_rec(const Scheme& S, MemberRef refF, const FinSet& E,
                      uint32_t mu) {
  const FinSet& F = S.member(refF);
  if (E.size() == F.size()) return E;  // same level inside F forces E = F
  Scheme::Decomp d = S.decompose(refF);
  for (size_t i = 0; i < d.pieces.size(); ++i) {
    const FinSet& piece = S.member(d.pieces[i]);
    if (!is_subset(E, piece)) continue;
    FinSet inner = cwi_rec(S, d.pieces[i], E, mu);
    if (d.root.contains(mu))
      return order_iso(piece, S.member(d.pieces[0])).map_set(inner);
    return inner;
  }
  throw Error(Errc::ConstructionFailure,
              "no piece of " + F.str() + " contains " + E.str());
}

FinSet copy_with_interval(const Scheme& S, const FinSet& F, const FinSet& E,
                          uint32_t mu) {
  MemberRef refF = S.require_member(F);
  S.require_member(E);
  if (!is_subset(E, F))
    throw Error(Errc::PreconditionFailed, "E must be contained in F");
  if (!E.contains(mu))
    throw Error(Errc::PreconditionFailed, "mu must lie in E");
  return cwi_rec(S, refF, E, mu);
}

// --- verification ---------------------------------------------------------

// E∩F is an initial segment of E, allocation-free
static bool inter_initial_of_first(const FinSet& E, const FinSet& F) {
  size_t j = 0;
  bool broken = false;
  for (uint32_t x : E.e) {
    while (j < F.e.size() && F.e[j] < x) ++j;
    bool in = j < F.e.size() && F.e[j] == x;
    if (in && broken) return false;
    if (!in) broken = true;
  }
  return true;
}

Report verify_axioms(const Scheme& S) {
  Report rep;
  const uint32_t K = S.K;

  // universe + cofinality witness
  {
    FinSet uni;
    for (uint32_t k = 0; k <= K; ++k)
      for (const FinSet& f : S.levels[k]) uni = unite(uni, f);
    bool in_bounds = uni.empty() || uni.max() < S.universe_size();
    bool witnessed = false;
    for (uint32_t k = 0; k <= K && !witnessed; ++k)
      for (const FinSet& f : S.levels[k])
        if (is_subset(uni, f)) { witnessed = true; break; }
    if (in_bounds && witnessed)
      rep.pass("def1.2(1)-cofinal", "universe covered by a single member");
    else
      rep.fail("def1.2(1)-cofinal",
               in_bounds ? "no member contains the whole universe"
                         : "element beyond [0, m_K) present");
  }

  // member sizes per level
  {
    bool ok = true;
    std::string bad;
    for (uint32_t k = 0; k <= K && ok; ++k)
      for (const FinSet& f : S.levels[k])
        if (f.size() != S.typ.m[k]) {
          ok = false;
          bad = "level " + std::to_string(k) + " member " + f.str();
          break;
        }
    ok ? rep.pass("def1.2(2)-sizes") : rep.fail("def1.2(2)-sizes", bad);
  }

  // same-level intersections are initial segments of both
  {
    bool ok = true;
    std::string bad;
    for (uint32_t k = 0; k <= K && ok; ++k) {
      const auto& lv = S.levels[k];
      for (size_t i = 0; i < lv.size() && ok; ++i)
        for (size_t j = i + 1; j < lv.size(); ++j)
          if (!inter_initial_of_first(lv[i], lv[j]) ||
              !inter_initial_of_first(lv[j], lv[i])) {
            ok = false;
            bad = "pair (" + lv[i].str() + "," + lv[j].str() + ") at level " +
                  std::to_string(k);
            break;
          }
    }
    ok ? rep.pass("def1.2(3)-initial") : rep.fail("def1.2(3)-initial", bad);
  }

  // canonical decomposition into members one level down
  {
    bool ok = true;
    std::string bad;
    for (uint32_t k = 1; k <= K && ok; ++k)
      for (size_t i = 0; i < S.levels[k].size(); ++i) {
        for (uint32_t pi : S.piece_idx[k][i])
          if (pi == UINT32_MAX) {
            ok = false;
            bad = "piece of level-" + std::to_string(k) + " member " +
                  S.levels[k][i].str() + " is not a member";
            break;
          }
        if (!ok) break;
      }
    ok ? rep.pass("def1.2(4)-decomposition") : rep.fail("def1.2(4)-decomposition", bad);
  }
  return rep;
}

Report verify_lemmas(const Scheme& S) {
  Report rep;
  const uint32_t K = S.K;

  // cross-level intersections: E∩F ⊑ E for level(E) <= level(F)
  {
    bool ok = true;
    std::string bad;
    for (uint32_t k = 0; k <= K && ok; ++k)
      for (uint32_t l = 0; l <= k && ok; ++l)
        for (const FinSet& F : S.levels[k]) {
          for (const FinSet& E : S.levels[l])
            if (!inter_initial_of_first(E, F)) {
              ok = false;
              bad = "E=" + E.str() + " F=" + F.str();
              break;
            }
          if (!ok) break;
        }
    ok ? rep.pass("lemma-intersection") : rep.fail("lemma-intersection", bad);
  }

  // contained members sit in pieces: at least one piece always; every piece
  // when E lies in the root, exactly one otherwise; equality one level down
  {
    bool ok = true;
    std::string bad;
    for (uint32_t k = 1; k <= K && ok; ++k)
      for (size_t i = 0; i < S.levels[k].size() && ok; ++i) {
        MemberRef F{k, static_cast<uint32_t>(i)};
        Scheme::Decomp d = S.decompose(F);
        for (MemberRef e : S.restrict_to(F)) {
          if (e.level >= k) continue;
          const FinSet& E = S.member(e);
          size_t hits = 0;
          size_t hit_at = 0;
          for (size_t p = 0; p < d.pieces.size(); ++p)
            if (is_subset(E, S.member(d.pieces[p]))) { ++hits; hit_at = p; }
          bool in_root = is_subset(E, d.root);
          bool good = in_root ? hits == d.pieces.size() : hits == 1;
          if (good && e.level + 1 == k && !in_root)
            good = S.member(d.pieces[hit_at]) == E;
          if (!good) {
            ok = false;
            bad = "E=" + E.str() + " in F=" + S.member(F).str();
            break;
          }
        }
      }
    ok ? rep.pass("piece-containment") : rep.fail("piece-containment", bad);
  }

  // same-level transport carries the restriction onto the restriction
  {
    bool ok = true;
    std::string bad;
    for (uint32_t k = 0; k <= K && ok; ++k) {
      const auto& lv = S.levels[k];
      for (size_t i = 0; i < lv.size() && ok; ++i)
        for (size_t j = 0; j < lv.size(); ++j) {
          if (i == j) continue;
          MemberRef E{k, static_cast<uint32_t>(i)}, F{k, static_cast<uint32_t>(j)};
          if (S.restrict_to(E).size() != S.restrict_to(F).size()) {
            ok = false;
            bad = "restriction sizes differ for " + lv[i].str() + "," + lv[j].str();
            break;
          }
          IsoMap iso = order_iso(lv[i], lv[j]);
          for (MemberRef m : S.restrict_to(E)) {
            FinSet img = iso.map_set(S.member(m));
            auto found = S.find_member(img);
            if (!found || found->level != m.level || !is_subset(img, lv[j])) {
              ok = false;
              bad = "image " + img.str() + " of " + S.member(m).str() +
                    " under " + lv[i].str() + "->" + lv[j].str();
              break;
            }
          }
          if (!ok) break;
        }
    }
    ok ? rep.pass("restriction-transport") : rep.fail("restriction-transport", bad);
  }

  // interval copies exist for every (F, E ⊆ F, mu ∈ E) — independent search
  {
    bool ok = true;
    std::string bad;
    for (uint32_t k = 0; k <= K && ok; ++k)
      for (size_t i = 0; i < S.levels[k].size() && ok; ++i) {
        MemberRef F{k, static_cast<uint32_t>(i)};
        const FinSet& Fset = S.member(F);
        for (MemberRef e : S.restrict_to(F)) {
          const FinSet& E = S.member(e);
          for (uint32_t mu : E.e) {
            FinSet lowE = below(E, mu + 1);
            bool found = false;
            auto [b, eEnd] = S.contained_at(F, e.level);
            for (auto* it = b; it != eEnd && !found; ++it) {
              const FinSet& L = S.member(*it);
              found = L.contains(mu) && below(L, mu + 1) == lowE &&
                      interval_of(from(L, mu), Fset);
            }
            if (!found) {
              ok = false;
              bad = "no copy for E=" + E.str() + " in F=" + Fset.str() +
                    " mu=" + std::to_string(mu);
              break;
            }
          }
          if (!ok) break;
        }
      }
    ok ? rep.pass("interval-copy") : rep.fail("interval-copy", bad);
  }
  return rep;
}

// --- cover search ----------------------------------------------------------

static bool first_piece_covers(const Scheme& S, uint32_t k, const FinSet& F,
                               const FinSet& A, uint32_t a) {
  size_t m_prev = static_cast<size_t>(S.typ.m[k - 1]);
  // F_0 is the first m[k-1] elements of F; root is its first r[k] elements
  size_t cnt = 0;
  while (cnt < m_prev && F.e[cnt] < a) ++cnt;
  if (cnt != S.typ.r[k]) return false;
  size_t j = 0;
  for (uint32_t x : A.e) {
    while (j < m_prev && F.e[j] < x) ++j;
    if (j >= m_prev || F.e[j] != x) return false;
  }
  return true;
}

bool for_each_cover_with_root(const Scheme& S, const FinSet& A, uint32_t a,
                              const CoverOpts& opts,
                              const std::function<bool(MemberRef)>& fn) {
  for (uint32_t k = std::max(1u, opts.min_level + 1); k <= S.K; ++k) {
    if (opts.partition && opts.partition->assign(k) != opts.block) continue;
    const auto& lv = S.levels[k];
    for (size_t i = 0; i < lv.size(); ++i)
      if (first_piece_covers(S, k, lv[i], A, a) &&
          fn(MemberRef{k, static_cast<uint32_t>(i)}))
        return true;
  }
  return false;
}

CoverResult find_cover_with_root(const Scheme& S, const FinSet& A, uint32_t a,
                                 const CoverOpts& opts) {
  CoverResult res;
  for_each_cover_with_root(S, A, a, opts, [&](MemberRef r) {
    res.F = r;
    return true;
  });
  if (!res.F) {
    std::ostringstream os;
    os << "no member at levels " << std::max(1u, opts.min_level + 1) << ".." << S.K;
    if (opts.partition) os << " (block " << opts.block << ")";
    os << " has A=" << A.str() << " inside its first piece with root cut at a=" << a;
    res.reason = os.str();
  }
  return res;
}

std::optional<MemberRef> find_cover(const Scheme& S, const FinSet& A,
                                    uint32_t min_level) {
  for (uint32_t k = min_level; k <= S.K; ++k) {
    const auto& lv = S.levels[k];
    for (size_t i = 0; i < lv.size(); ++i)
      if (is_subset(A, lv[i])) return MemberRef{k, static_cast<uint32_t>(i)};
  }
  return std::nullopt;
}

// --- serialization ---------------------------------------------------------

std::string scheme_to_text(const Scheme& S) {
  std::ostringstream os;
  os << type_rows(S.typ);
  for (uint32_t k = 0; k <= S.K; ++k)
    for (const FinSet& f : S.levels[k]) {
      os << k << ':';
      for (uint32_t x : f.e) os << ' ' << x;
      os << " ; " << (k >= 1 ? S.typ.r[k] : 0) << '\n';
    }
  return os.str();
}

Scheme scheme_from_text(const std::string& text, bool verify) {
  std::istringstream is(text);
  std::string m_row, n_row, r_row;
  if (!std::getline(is, m_row) || !std::getline(is, n_row) || !std::getline(is, r_row))
    throw Error(Errc::ParseError, "scheme file needs three type rows");
  TypeSequence typ = parse_type_rows(m_row, n_row, r_row);
  std::vector<std::vector<FinSet>> levels(typ.K + 1);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    size_t colon = line.find(':');
    size_t semi = line.rfind(';');
    if (colon == std::string::npos || semi == std::string::npos || semi < colon)
      throw Error(Errc::ParseError, "bad member line: " + line);
    uint32_t k;
    try {
      k = static_cast<uint32_t>(std::stoul(line.substr(0, colon)));
    } catch (const std::exception&) {
      throw Error(Errc::ParseError, "bad level in line: " + line);
    }
    if (k > typ.K) throw Error(Errc::ParseError, "level beyond K in line: " + line);
    FinSet f = parse_fin_set(line.substr(colon + 1, semi - colon - 1));
    uint64_t root_sz;
    try {
      root_sz = std::stoull(line.substr(semi + 1));
    } catch (const std::exception&) {
      throw Error(Errc::ParseError, "bad root size in line: " + line);
    }
    if (root_sz != (k >= 1 ? typ.r[k] : 0))
      throw Error(Errc::ParseError, "root size disagrees with the type in line: " + line);
    levels[k].push_back(std::move(f));
  }
  Scheme S = scheme_from_levels(typ, typ.K, std::move(levels));
  if (verify) {
    Report rep = verify_axioms(S);
    if (!rep.all_pass())
      throw Error(Errc::ConstructionFailure, "loaded family fails the axioms:\n" + rep.text());
  }
  return S;
}

void save_scheme(const Scheme& S, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::ParseError, "cannot open " + path + " for writing");
  out << scheme_to_text(S);
}

Scheme load_scheme(const std::string& path, bool verify) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return scheme_from_text(buf.str(), verify);
}

}  // namespace caplab
