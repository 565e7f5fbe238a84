#include <doctest.h>

#include <random>

#include "caplab/capturing.hpp"
#include "oracles.hpp"

using namespace caplab;

namespace {

Scheme small_scheme() { return test_oracles::diag_scheme(2); }

DeltaSystemFamily fam_of(std::vector<FinSet> sets) {
  auto res = check_delta_system(sets);
  REQUIRE(std::holds_alternative<DeltaSystemFamily>(res));
  return std::get<DeltaSystemFamily>(res);
}

}  // namespace

TEST_CASE("delta system validation computes roots and flags bad pairs") {
  auto singles = check_delta_system({fin({1}), fin({2}), fin({3})});
  REQUIRE(std::holds_alternative<DeltaSystemFamily>(singles));
  CHECK(std::get<DeltaSystemFamily>(singles).root == FinSet{});

  auto rooted = check_delta_system({fin({0, 1}), fin({0, 2}), fin({0, 3})});
  REQUIRE(std::holds_alternative<DeltaSystemFamily>(rooted));
  CHECK(std::get<DeltaSystemFamily>(rooted).root == fin({0}));

  auto bad = check_delta_system({fin({0, 1}), fin({1, 2})});
  REQUIRE(std::holds_alternative<DeltaViolation>(bad));

  auto mismatch = check_delta_system({fin({0, 1}), fin({0, 2}), fin({1, 3})});
  REQUIRE(std::holds_alternative<DeltaViolation>(mismatch));
  CHECK(std::get<DeltaViolation>(mismatch).reason == "root-mismatch");

  CHECK_THROWS_AS(check_delta_system({}), Error);
}

TEST_CASE("extraction keeps maximal sub-families") {
  std::vector<FinSet> shifted;
  for (uint32_t i = 0; i < 5; ++i) shifted.push_back(fin({i, 10 + i}));
  auto whole = extract_delta_system(shifted);
  CHECK(whole.members.size() == 5);
  CHECK(whole.root == FinSet{});

  std::vector<FinSet> star;
  for (uint32_t i = 1; i <= 5; ++i) star.push_back(fin({0, i}));
  auto rooted = extract_delta_system(star);
  CHECK(rooted.members.size() == 5);
  CHECK(rooted.root == fin({0}));

  std::vector<size_t> picked;
  auto mixed = extract_delta_system(
      {fin({0, 1}), fin({0, 2}), fin({1, 3}), fin({4, 5})}, &picked);
  CHECK(mixed.members.size() == 2);
  CHECK(picked == std::vector<size_t>{0, 1});
  CHECK(mixed.members[0] == fin({0, 1}));
  CHECK(mixed.members[1] == fin({0, 2}));

  CHECK_THROWS_AS(extract_delta_system({fin({0, 1}), fin({0, 2, 3})}), Error);
  // extraction output always re-validates
  auto again = check_delta_system(mixed.members);
  CHECK(std::holds_alternative<DeltaSystemFamily>(again));
}

TEST_CASE("capture clauses on the 4-point scheme") {
  Scheme S = small_scheme();
  MemberRef top = S.require_member(fin({0, 1, 2, 3}));

  CHECK(captures(S, top, fam_of({fin({1}), fin({2}), fin({3})}), {0, 1, 2}));
  CHECK_FALSE(captures(S, top, fam_of({fin({1}), fin({3})}), {0, 1}));
  CHECK(capture_clause_failure(S, top, fam_of({fin({1}), fin({3})}), {0, 1}) == 3);
  CHECK(captures(S, top, fam_of({fin({0, 1}), fin({0, 2})}), {0, 1}));

  CHECK_THROWS_AS(
      captures(S, top, fam_of({fin({1}), fin({2}), fin({3})}), {0, 1, 2, 3}),
      Error);  // arity above n_k
}

TEST_CASE("witness search returns the minimal witness and honors filters") {
  Scheme S = small_scheme();
  auto fam = fam_of({fin({1}), fin({2}), fin({3})});

  CaptureQuery q3;
  q3.arity = 3;
  auto w = find_capture(S, fam, q3);
  REQUIRE(w.has_value());
  CHECK(w->level == 2);
  CHECK(S.member(w->F) == fin({0, 1, 2, 3}));
  CHECK(w->indices == std::vector<uint32_t>{0, 1, 2});
  CHECK(captures(S, w->F, fam, w->indices));

  CaptureQuery qfull;
  qfull.min_level = 1;
  auto wf = find_capture(S, fam, qfull);
  REQUIRE(wf.has_value());
  CHECK(wf->level == 2);
  CHECK(wf->indices.size() == 3);  // n_2

  PartitionSchedule part = partition_from_list({0, 0});  // block 1 never attained
  CaptureQuery qblock;
  qblock.arity = 3;
  qblock.partition = &part;
  qblock.block = 1;
  CHECK_FALSE(find_capture(S, fam, qblock).has_value());
}

TEST_CASE("prefixes of a witness stay witnesses") {
  Scheme S = test_oracles::diag_scheme(3);
  auto fam = fam_of({fin({1}), fin({2}), fin({3})});
  CaptureQuery q;
  q.arity = 3;
  auto w = find_capture(S, fam, q);
  REQUIRE(w.has_value());
  for (size_t n = 2; n <= w->indices.size(); ++n) {
    std::vector<uint32_t> prefix(w->indices.begin(), w->indices.begin() + n);
    CHECK(captures(S, w->F, fam, prefix));
  }
}

TEST_CASE("search agrees with the brute enumeration on random families") {
  std::mt19937_64 rng(20260809);
  std::vector<Scheme> schemes;
  schemes.push_back(test_oracles::diag_scheme(4));       // m_K = 76
  schemes.push_back(test_oracles::factorial_scheme(4));  // m_K = 120
  schemes.push_back(test_oracles::ones_scheme(4));       // m_K = 61

  int hits = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const Scheme& S = schemes[trial % schemes.size()];
    DeltaSystemFamily fam = test_oracles::random_family(S, rng);
    for (uint32_t arity = 2; arity <= 3; ++arity) {
      if (fam.members.size() < arity) continue;
      CaptureQuery q;
      q.arity = arity;
      auto fast = find_capture(S, fam, q);
      auto slow = test_oracles::brute_find_capture(S, fam, arity);
      REQUIRE(fast.has_value() == slow.has_value());
      if (fast) {
        ++hits;
        CHECK(fast->level == slow->level);
        CHECK(fast->F == slow->F);
        CHECK(fast->indices == slow->indices);
        CHECK(captures(S, fast->F, fam, fast->indices));
      }
    }
  }
  CHECK(hits > 0);  // the generator must exercise the positive path
}

TEST_CASE("families parse from plain rows") {
  auto sets = parse_family_lines("0 1\n0 2\n\n0 3\n");
  REQUIRE(sets.size() == 3);
  CHECK(sets[2] == fin({0, 3}));
}
