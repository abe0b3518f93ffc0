#include <doctest.h>

#include <numeric>
#include <vector>

#include "ergo/graph.hpp"
#include "tables.hpp"

using namespace ergo;
using namespace tables;

namespace {

Mask one_step_set(const Op& op, int a) {
  Mask m = 0;
  for (int x = 0; x < op.q; ++x) m |= Mask{1} << op.at(a, x);
  return m;
}

std::vector<Mask> reach_after(const Op& op, int a, int d) {
  std::vector<Mask> out;
  Mask cur = Mask{1} << a;
  for (int i = 0; i < d; ++i) {
    Mask next = 0;
    for (Mask r = cur; r; r &= r - 1) next |= one_step_set(op, lowbit(r));
    cur = next;
    out.push_back(cur);
  }
  return out;
}

// gcd of closed-walk lengths at element 0 (enough lengths for these tables)
int brute_period(const Op& op) {
  int g = 0;
  const auto reach = reach_after(op, 0, 3 * op.q);
  for (int k = 1; k <= 3 * op.q; ++k)
    if (reach[k - 1] & 1) g = std::gcd(g, k);
  return g == 0 ? 1 : g;
}

// least d such that d-step reachability from every element is exactly the
// class d positions further along the cycle
int brute_connectability(const Op& op) {
  const ErgodicClasses ec = ergodic_classes(op);
  std::vector<int> cls(op.q);
  for (std::size_t i = 0; i < ec.blocks.size(); ++i)
    for (Mask r = ec.blocks[i]; r; r &= r - 1) cls[lowbit(r)] = static_cast<int>(i);
  const int n = static_cast<int>(ec.blocks.size());
  for (int d = 1; d <= 1000; ++d) {
    bool ok = true;
    for (int a = 0; a < op.q && ok; ++a)
      ok = reach_after(op, a, d).back() == ec.blocks[(cls[a] + d) % n];
    if (ok) return d;
  }
  return -1;
}

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("one-step matrix rows are the row images") {
  const TransferMatrix m = one_step_matrix(xor2());
  CHECK(m.row[0] == set({0, 1}));
  CHECK(m.row[1] == set({0, 1}));
  const TransferMatrix s = one_step_matrix(serg4());
  CHECK(s.row[0] == set({3}));
  CHECK(s.row[1] == set({0, 1}));
  CHECK(s.row[2] == set({0, 1}));
  CHECK(s.row[3] == set({2}));
}

TEST_CASE("matrix product applies the left factor first") {
  // columns of the mod-3 addition: acting by {1} then {2} adds 0
  const TransferMatrix a = {3, {set({1}), set({2}), set({0})}};
  const TransferMatrix b = {3, {set({2}), set({0}), set({1})}};
  const TransferMatrix ab = tm_mul(a, b);
  CHECK(ab == tm_identity(3));
  CHECK(tm_reflexive(ab));
  CHECK_FALSE(tm_reflexive(a));
  CHECK(tm_mul(tm_identity(3), a) == a);
  CHECK(tm_mul(a, tm_identity(3)) == a);
  CHECK(tm_mul(tm_mul(a, b), a) == tm_mul(a, tm_mul(b, a)));
}

TEST_CASE("irreducibility is mutual reachability") {
  for (const Op& op : {irr4(), irr8_wedge(), irr8_p4(), erg4(), serg4(), erg6(), xor2(),
                       flip2(), add3(), grid4()})
    CHECK(is_irreducible(op));
  CHECK_FALSE(is_irreducible(make_op(2, {0, 0, 1, 1})));
}

TEST_CASE("periods match a closed-walk gcd oracle") {
  CHECK(period(irr4()) == 2);
  CHECK(period(irr8_wedge()) == 2);
  CHECK(period(irr8_p4()) == 4);
  CHECK(period(flip2()) == 2);
  CHECK(period(erg4()) == 1);
  CHECK(period(serg4()) == 1);
  CHECK(period(erg6()) == 1);
  for (const Op& op : {irr4(), irr8_wedge(), irr8_p4(), erg4(), serg4(), erg6(), xor2(),
                       flip2(), add3(), grid4()})
    CHECK(period(op) == brute_period(op));
  try {
    period(make_op(2, {0, 0, 1, 1}));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind == Err::NotIrreducible);
  }
}

TEST_CASE("cyclic classes start at element 0 and rotate one step per letter") {
  CHECK(ergodic_classes(irr4()).blocks == fam({{0, 1}, {2, 3}}));
  CHECK(ergodic_classes(irr8_wedge()).blocks == fam({{0, 1, 2, 3}, {4, 5, 6, 7}}));
  CHECK(ergodic_classes(flip2()).blocks == fam({{0}, {1}}));
  const ErgodicClasses p4 = ergodic_classes(irr8_p4());
  CHECK(p4.per == 4);
  CHECK(p4.blocks == std::vector<Mask>{set({0, 1}), set({4, 5}), set({2, 3}), set({6, 7})});
  for (std::size_t i = 0; i < p4.blocks.size(); ++i)
    CHECK(set_product(irr8_p4(), p4.blocks[i], irr8_p4().all()) == p4.blocks[(i + 1) % 4]);
}

TEST_CASE("ergodic = irreducible and aperiodic") {
  for (const Op& op : {erg4(), serg4(), erg6(), xor2(), add3(), grid4()}) CHECK(is_ergodic(op));
  for (const Op& op : {irr4(), irr8_wedge(), irr8_p4(), flip2()}) CHECK_FALSE(is_ergodic(op));
}

TEST_CASE("connectability matches a step-by-step oracle") {
  CHECK(connectability(irr4()) == 1);
  CHECK(connectability(irr8_wedge()) == 1);
  CHECK(connectability(irr8_p4()) == 1);
  CHECK(connectability(flip2()) == 1);
  CHECK(connectability(xor2()) == 1);
  CHECK(connectability(add3()) == 1);
  CHECK(connectability(grid4()) == 1);
  CHECK(connectability(erg4()) == 2);
  CHECK(connectability(serg4()) == 5);
  CHECK(connectability(erg6()) == 4);
  for (const Op& op : {irr4(), irr8_p4(), erg4(), serg4(), erg6(), grid4()})
    CHECK(connectability(op) == brute_connectability(op));
}

TEST_CASE("among ergodic tables, connectability 1 means quasigroup") {
  for (const Op& op : {erg4(), serg4(), erg6(), xor2(), add3(), grid4(), grid(3)})
    CHECK((connectability(op) == 1) == is_quasigroup(op));
}

}  // TEST_SUITE
