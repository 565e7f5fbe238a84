#include <doctest.h>

#include <set>

#include "caplab/fin_set.hpp"
#include "caplab/ordinal.hpp"
#include "caplab/partition.hpp"
#include "caplab/type_sequence.hpp"

using namespace caplab;

TEST_CASE("type validation accepts the basic profiles") {
  auto ok1 = validate_type({1, 2}, {2}, {0});
  REQUIRE(std::holds_alternative<TypeSequence>(ok1));
  CHECK(std::get<TypeSequence>(ok1).m == std::vector<uint64_t>{1, 2});

  auto ok2 = validate_type({1, 2, 4}, {2, 3}, {0, 1});
  REQUIRE(std::holds_alternative<TypeSequence>(ok2));
  const auto& ts = std::get<TypeSequence>(ok2);
  CHECK(ts.K == 2);
  CHECK(ts.n[2] == 3);
  CHECK(ts.r[2] == 1);
}

TEST_CASE("type validation reports the first failing clause") {
  auto bad = validate_type({1, 2, 0}, {2, 3}, {0, 2});
  REQUIRE(std::holds_alternative<TypeViolation>(bad));
  CHECK(std::get<TypeViolation>(bad).clause == "m_{k-1}>r_k");
  CHECK(std::get<TypeViolation>(bad).k == 2);

  auto bad0 = validate_type({2, 4}, {2}, {0});
  REQUIRE(std::holds_alternative<TypeViolation>(bad0));
  CHECK(std::get<TypeViolation>(bad0).clause == "m_0=1");

  auto badn = validate_type({1, 2, 4}, {2, 2}, {0, 0});
  REQUIRE(std::holds_alternative<TypeViolation>(badn));
  CHECK(std::get<TypeViolation>(badn).clause == "n_k>k");

  auto badrec = validate_type({1, 2, 5}, {2, 3}, {0, 1});
  REQUIRE(std::holds_alternative<TypeViolation>(badrec));
  CHECK(std::get<TypeViolation>(badrec).clause == "recurrence");
}

TEST_CASE("generated types follow the recurrence") {
  TypeSequence diag = generate_type(sched_linear(1, 1), sched_diag(), 6);
  CHECK(diag.m == std::vector<uint64_t>{1, 2, 4, 16, 76, 446, 3122});
  CHECK(diag.r == std::vector<uint64_t>{0, 0, 1, 0, 1, 2, 0});

  TypeSequence fact = generate_type(sched_linear(1, 1), sched_const(0), 3);
  CHECK(fact.m == std::vector<uint64_t>{1, 2, 6, 24});

  // requested r(1) = 5 exceeds m[0], clamped down to 0
  TypeSequence clamped = generate_type(sched_linear(2, 0), sched_const(5), 1);
  CHECK(clamped.m[1] == 2);
  CHECK(clamped.r[1] == 0);
}

TEST_CASE("generated types grow strictly and deterministically") {
  TypeSequence a = generate_type(sched_linear(1, 1), sched_diag(), 6);
  TypeSequence b = generate_type(sched_linear(1, 1), sched_diag(), 6);
  CHECK(a == b);
  for (uint32_t k = 1; k <= a.K; ++k) CHECK(a.m[k] > a.m[k - 1]);

  auto round = parse_type_rows("1,2,4,16", "2,3,4", "0,1,0");
  CHECK(type_rows(round) == "1,2,4,16\n2,3,4\n0,1,0\n");
}

TEST_CASE("diag schedule is fair on every prefix that closes a block") {
  TypeSequence diag = generate_type(sched_linear(1, 1), sched_diag(), 6);
  CHECK(fair_up_to(diag) == 3);  // 0, 1 and 2 all occur by level 6
  TypeSequence zero = generate_type(sched_linear(1, 1), sched_const(0), 4);
  CHECK(fair_up_to(zero) == 1);
}

TEST_CASE("ordinal codes order and add like ordinals below w*M") {
  CHECK(ord_add(OrdinalCode{1, 0}, 3) == OrdinalCode{1, 3});
  CHECK(ord_cmp(OrdinalCode{0, 7}, OrdinalCode{1, 0}) < 0);
  CHECK(ord_add(OrdinalCode{2, 1}, 0) == OrdinalCode{2, 1});

  // total order, monotone addition, on a small grid
  std::vector<OrdinalCode> grid;
  for (uint32_t l = 0; l < 4; ++l)
    for (uint32_t o = 0; o < 5; ++o) grid.push_back({l, o});
  for (auto a : grid)
    for (auto b : grid) {
      int c = ord_cmp(a, b);
      CHECK(c == -ord_cmp(b, a));
      if (c == 0) CHECK(a == b);
      for (auto c3 : grid)
        if (ord_cmp(a, b) <= 0 && ord_cmp(b, c3) <= 0) CHECK(ord_cmp(a, c3) <= 0);
    }
  for (auto a : grid)
    for (uint32_t i = 0; i < 3; ++i) CHECK(ord_add(a, i) < ord_add(a, i + 1));
}

TEST_CASE("ordinal rendering round trips") {
  CHECK(ord_str(OrdinalCode{0, 5}) == "5");
  CHECK(ord_str(OrdinalCode{2, 3}) == "w*2+3");
  CHECK(parse_ordinal("w*2+3") == OrdinalCode{2, 3});
  CHECK(parse_ordinal("w*4") == OrdinalCode{4, 0});
  CHECK(parse_ordinal("w") == OrdinalCode{1, 0});
  CHECK(parse_ordinal("17") == OrdinalCode{0, 17});
  CHECK(OrdinalCode{1, 0}.is_limit());
  CHECK_FALSE(OrdinalCode{1, 2}.is_limit());
  CHECK(OrdinalCode{0, 9}.is_natural());
}

TEST_CASE("fin set primitives") {
  FinSet a = fin({0, 2, 5});
  CHECK(a.str() == "{0,2,5}");
  CHECK(initial_segment(fin({0, 2}), a));
  CHECK_FALSE(initial_segment(fin({2, 5}), a));
  CHECK(initial_segment(a, a));
  CHECK(interval_of(fin({2, 5}), a));
  CHECK_FALSE(interval_of(fin({0, 5}), a));
  CHECK(interval_of(FinSet{}, a));
  CHECK(below(a, 3) == fin({0, 2}));
  CHECK(from(a, 3) == fin({5}));

  IsoMap iso = order_iso(fin({0, 2}), fin({0, 3}));
  CHECK(iso.map(2) == 3);
  CHECK(iso.map_set(fin({2})) == fin({3}));
  CHECK(order_iso(fin({0, 1}), fin({0, 1})).map(1) == 1);
  CHECK_THROWS_AS(order_iso(fin({0}), fin({0, 1})), Error);

  CHECK(parse_fin_set(" 3 1 7 ") == fin({1, 3, 7}));
}

TEST_CASE("partition schedules assign and report fairness per block") {
  PartitionSchedule rr = round_robin(2);
  CHECK(rr.assign(1) == 0);
  CHECK(rr.assign(2) == 1);
  CHECK(rr.assign(3) == 0);
  CHECK(blocks_attained(rr, 2));
  CHECK_FALSE(blocks_attained(rr, 1));

  PartitionSchedule listed = partition_from_list({0, 1, 0, 1, 1, 0});
  CHECK(listed.assign(5) == 1);
  TypeSequence diag = generate_type(sched_linear(1, 1), sched_diag(), 6);
  auto fair = block_fair_up_to(diag, listed);
  REQUIRE(fair.size() == 2);
  // block 0 holds levels {1,3,6} with roots {0,0,0}; block 1 holds {2,4,5} with {1,1,2}
  CHECK(fair[0] == 1);
  CHECK(fair[1] == 0);
}
