#include <doctest.h>

#include <optional>

#include "caplab/scheme.hpp"

using namespace caplab;

namespace {

Scheme small_scheme() {  // m = (1,2,4)
  return build_scheme(generate_type(sched_linear(1, 1), sched_diag(), 2), 2);
}

Scheme mid_scheme() {  // m = (1,2,4,16)
  return build_scheme(generate_type(sched_linear(1, 1), sched_diag(), 3), 3);
}

// brute copy search, independent of the recursive construction: least member
// of E's level inside F matching both clauses
std::optional<FinSet> copy_oracle(const Scheme& S, const FinSet& F,
                                  const FinSet& E, uint32_t mu) {
  MemberRef refF = S.require_member(F);
  uint32_t lv = S.require_member(E).level;
  FinSet low = below(E, mu + 1);
  for (MemberRef c : S.restrict_to(refF)) {
    if (c.level != lv) continue;
    const FinSet& L = S.member(c);
    if (L.contains(mu) && below(L, mu + 1) == low && interval_of(from(L, mu), F))
      return L;
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("canonical build of the 4-point scheme") {
  Scheme S = small_scheme();
  REQUIRE(S.K == 2);
  CHECK(S.levels[0] ==
        std::vector<FinSet>{fin({0}), fin({1}), fin({2}), fin({3})});
  CHECK(S.levels[1] == std::vector<FinSet>{fin({0, 1}), fin({0, 2}), fin({0, 3})});
  CHECK(S.levels[2] == std::vector<FinSet>{fin({0, 1, 2, 3})});

  auto d = S.decompose(S.require_member(fin({0, 1, 2, 3})));
  CHECK(d.root == fin({0}));
  REQUIRE(d.pieces.size() == 3);
  CHECK(S.member(d.pieces[0]) == fin({0, 1}));
  CHECK(S.member(d.pieces[1]) == fin({0, 2}));
  CHECK(S.member(d.pieces[2]) == fin({0, 3}));
}

TEST_CASE("two-point scheme has an empty root") {
  Scheme S = build_scheme(generate_type(sched_linear(1, 1), sched_diag(), 1), 1);
  CHECK(S.levels[0] == std::vector<FinSet>{fin({0}), fin({1})});
  CHECK(S.levels[1] == std::vector<FinSet>{fin({0, 1})});
  CHECK(S.decompose(MemberRef{1, 0}).root == FinSet{});
}

TEST_CASE("level populations of the 16-point scheme") {
  Scheme S = mid_scheme();
  CHECK(S.levels[2].size() == 4);
  CHECK(S.levels[1].size() == 12);
  CHECK(S.levels[0].size() == 16);
  // level 1, written out from the chunk rule
  CHECK(S.levels[1] ==
        std::vector<FinSet>{fin({0, 1}), fin({0, 2}), fin({0, 3}), fin({4, 5}),
                            fin({4, 6}), fin({4, 7}), fin({8, 9}), fin({8, 10}),
                            fin({8, 11}), fin({12, 13}), fin({12, 14}),
                            fin({12, 15})});
}

TEST_CASE("decompose rejects outsiders and splits with the forced root") {
  Scheme S = small_scheme();
  auto d = S.decompose(S.require_member(fin({0, 2})));
  CHECK(d.root == FinSet{});
  CHECK(S.member(d.pieces[0]) == fin({0}));
  CHECK(S.member(d.pieces[1]) == fin({2}));
  CHECK_THROWS_AS(S.require_member(fin({5})), Error);
  CHECK_THROWS_AS((void)S.decompose(MemberRef{0, 0}), Error);
}

TEST_CASE("restriction collects exactly the contained members") {
  Scheme S = small_scheme();
  auto r = S.restrict_to(S.require_member(fin({0, 2})));
  REQUIRE(r.size() == 3);
  CHECK(S.member(r[0]) == fin({0}));
  CHECK(S.member(r[1]) == fin({2}));
  CHECK(S.member(r[2]) == fin({0, 2}));
  CHECK(S.restrict_to(S.require_member(fin({0, 1, 2, 3}))).size() ==
        S.member_count());
  CHECK(S.restrict_to(S.require_member(fin({0}))).size() == 1);
}

TEST_CASE("interval copies match the exhaustive oracle") {
  Scheme S = small_scheme();
  FinSet top = fin({0, 1, 2, 3});

  CHECK(copy_with_interval(S, top, fin({0, 3}), 0) == fin({0, 1}));
  CHECK(*copy_oracle(S, top, fin({0, 3}), 0) == fin({0, 1}));
  CHECK(copy_with_interval(S, top, top, 2) == top);
  CHECK(copy_with_interval(S, top, fin({0, 2}), 2) == fin({0, 2}));

  CHECK_THROWS_AS(copy_with_interval(S, fin({0, 1}), fin({0, 2}), 0), Error);
  CHECK_THROWS_AS(copy_with_interval(S, top, fin({0, 2}), 1), Error);

  // the construction always satisfies the clauses the oracle asks for,
  // on every admissible (F, E, mu) of the 16-point scheme
  Scheme M = mid_scheme();
  for (uint32_t k = 0; k <= M.K; ++k)
    for (const FinSet& F : M.levels[k]) {
      MemberRef refF = M.require_member(F);
      for (MemberRef e : M.restrict_to(refF)) {
        const FinSet& E = M.member(e);
        for (uint32_t mu : E.e) {
          FinSet got = copy_with_interval(M, F, E, mu);
          CHECK(M.find_member(got).has_value());
          CHECK(M.find_member(got)->level == e.level);
          CHECK(below(got, mu + 1) == below(E, mu + 1));
          CHECK(got.contains(mu));
          CHECK(interval_of(from(got, mu), F));
          CHECK(copy_oracle(M, F, E, mu).has_value());
        }
      }
    }
}

TEST_CASE("verifier passes canonical schemes and catches a mutated member") {
  Scheme S = small_scheme();
  CHECK(verify_axioms(S).all_pass());
  CHECK(verify_lemmas(S).all_pass());

  // swap a level-1 member for {1,2}
  auto levels = S.levels;
  levels[1][1] = fin({1, 2});
  Scheme broken = scheme_from_levels(S.typ, S.K, std::move(levels));
  Report rep = verify_axioms(broken);
  CHECK_FALSE(rep.all_pass());
  bool initial_clause_failed = false;
  for (const auto& e : rep.entries)
    if (e.key == "def1.2(3)-initial" && e.status == Report::Status::Fail) {
      initial_clause_failed = true;
      CHECK(e.detail.find("{0,1},{1,2}") != std::string::npos);
    }
  CHECK(initial_clause_failed);
}

TEST_CASE("degenerate one-point scheme verifies vacuously") {
  Scheme S = build_scheme(generate_type(sched_linear(1, 1), sched_diag(), 0), 0);
  CHECK(S.universe_size() == 1);
  CHECK(S.levels[0] == std::vector<FinSet>{fin({0})});
  CHECK(verify_axioms(S).all_pass());
  CHECK(verify_lemmas(S).all_pass());
}

TEST_CASE("cover-with-root search returns the least qualifying member") {
  Scheme S = small_scheme();
  auto r1 = find_cover_with_root(S, fin({0, 1}), 1);
  REQUIRE(r1.F.has_value());
  CHECK(S.member(*r1.F) == fin({0, 1, 2, 3}));

  auto r2 = find_cover_with_root(S, fin({0}), 0);
  REQUIRE(r2.F.has_value());
  CHECK(S.member(*r2.F) == fin({0, 1}));

  auto r3 = find_cover_with_root(S, FinSet{}, 0);
  REQUIRE(r3.F.has_value());
  CHECK(S.member(*r3.F) == fin({0, 1}));

  // unreachable root size is reported, not silently dropped
  auto none = find_cover_with_root(S, fin({0, 1}), 3);
  CHECK_FALSE(none.F.has_value());
  CHECK(none.reason.find("a=3") != std::string::npos);
}

TEST_CASE("schemes serialize and reload to the identical structure") {
  Scheme S = mid_scheme();
  std::string text = scheme_to_text(S);
  Scheme back = scheme_from_text(text);
  CHECK(back.typ == S.typ);
  CHECK(back.levels == S.levels);
  CHECK(back.piece_idx == S.piece_idx);
  CHECK(scheme_to_text(back) == text);
}
