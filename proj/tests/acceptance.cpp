#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ergo/census.hpp"
#include "ergo/product.hpp"
#include "ergo/report.hpp"
#include "tables.hpp"

using namespace ergo;
using namespace tables;

namespace {

struct Check {
  std::string fails;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      if (!fails.empty()) fails += "; ";
      fails += what;
    }
  }
};

Family random_cover(const Op& op, std::mt19937& rng) {
  Family f;
  const int members = 2 + static_cast<int>(rng() % 5);
  for (int i = 0; i < members; ++i) {
    Mask m = static_cast<Mask>(rng()) & op.all();
    if (!m) m = 1;
    f.push_back(m);
  }
  Mask covered = 0;
  for (Mask m : f) covered |= m;
  for (Mask missing = op.all() & ~covered; missing; missing &= missing - 1)
    f.push_back(Mask{1} << lowbit(missing));
  return canon_family(std::move(f));
}

// 1: the reference tables carry their known flags and partition facts
void criterion1(Check& c) {
  struct Expect {
    Op op;
    bool qg, erg;
    int per, con;
    Family classes;
  };
  const std::vector<Expect> table = {
      {irr4(), false, false, 2, 1, fam({{0, 1}, {2, 3}})},
      {irr8_wedge(), false, false, 2, 1, fam({{0, 1, 2, 3}, {4, 5, 6, 7}})},
      {irr8_p4(), false, false, 4, 1, {set({0, 1}), set({4, 5}), set({2, 3}), set({6, 7})}},
      {erg4(), false, true, 1, 2, {set({0, 1, 2, 3})}},
      {serg4(), false, true, 1, 5, {set({0, 1, 2, 3})}},
      {erg6(), false, true, 1, 4, {set({0, 1, 2, 3, 4, 5})}},
      {xor2(), true, true, 1, 1, {set({0, 1})}},
      {flip2(), false, false, 2, 1, fam({{0}, {1}})},
      {add3(), true, true, 1, 1, {set({0, 1, 2})}},
  };
  for (const Expect& e : table) {
    c.expect(is_uniformity_preserving(e.op), "uniformity preservation");
    c.expect(is_quasigroup(e.op) == e.qg, "quasigroup flag");
    c.expect(is_irreducible(e.op), "irreducibility");
    c.expect(period(e.op) == e.per, "period");
    c.expect(is_ergodic(e.op) == e.erg, "ergodicity flag");
    c.expect(connectability(e.op) == e.con, "connectability");
    c.expect(ergodic_classes(e.op).blocks == e.classes, "cyclic classes");
  }
  c.expect(is_strongly_ergodic(serg4()) && is_strongly_ergodic(xor2()) &&
               is_strongly_ergodic(add3()),
           "strong ergodicity of the strongly ergodic tables");
  c.expect(!is_strongly_ergodic(erg4()) && !is_strongly_ergodic(erg6()),
           "non-strong-ergodicity of the merely ergodic tables");
  // a 3-member partition of the period-2 table returns after exactly 2 steps
  const Family h = fam({{0, 1}, {2}, {3}});
  c.expect(step(irr4(), h) != h && step(irr4(), step(irr4(), h)) == h,
           "two-step return of the unbalanced partition");
  // the 4-letter ergodic table pushes its stable pair partition to singletons
  c.expect(first_residue(erg4(), fam({{0, 1}, {2, 3}})) == singleton_partition(4),
           "residue of the stable pair partition");
  // common refinement of the two stable partitions of the 8-letter table
  c.expect(wedge(fam({{0, 1}, {2, 3}, {4, 5}, {6, 7}}), fam({{0, 2}, {1, 3}, {4, 5}, {6, 7}})) ==
               fam({{0}, {1}, {2}, {3}, {4, 5}, {6, 7}}),
           "wedge of the two stable partitions");
}

// 2: grid quasigroups and their line partitions
void criterion2(Check& c) {
  for (int n = 2; n <= 4; ++n) {
    const Op g = grid(n);
    const Family h = lines(n);
    c.expect(is_quasigroup(g), "grid table is a quasigroup");
    c.expect(is_stable_partition(g, h), "line partition is stable");
    c.expect(is_periodic_partition(g, h).second == n, "line partition period");
    c.expect(static_cast<int>(h.size()) == n, "line partition size");
  }
}

// 3: residue criterion vs definitional scan on every 3-letter table
void criterion3(Check& c) {
  CensusOptions opts;
  opts.q = 3;
  opts.with_oracle = true;
  opts.oracle_bound = 64;
  const CensusSummary s = run_census(opts);
  c.expect(s.total == 216, "216 uniformity-preserving tables");
  c.expect(s.oracle_mismatch == 0, "no disagreement with the definitional scan");
  c.expect(s.oracle_inconclusive == 0, "no inconclusive scans");
  c.expect(s.serg == 192, "192 strongly ergodic tables");
}

// 4: every 4-letter latin square is strongly ergodic
void criterion4(Check& c) {
  CensusOptions opts;
  opts.q = 4;
  opts.scope = CensusScope::latin;
  const CensusSummary s = run_census(opts);
  c.expect(s.total == 576, "576 latin squares");
  c.expect(s.serg == 576, "all strongly ergodic");
  c.expect(s.clean(), "no invariant violations");
}

// 5: irreducibility and ergodicity transfer to the inverse table
void criterion5(Check& c) {
  CensusOptions opts;
  opts.q = 3;
  const CensusSummary s = run_census(opts);
  c.expect(s.total == 216, "216 uniformity-preserving tables");
  c.expect(s.irr_inverse_mismatch == 0, "irreducibility matches the inverse");
  c.expect(s.erg_inverse_mismatch == 0, "ergodicity matches the inverse");
}

// 6: product flags against factor flags over the whole table pool
void criterion6(Check& c) {
  Caps caps;
  caps.max_q = 16;
  caps.partition_enum_q = 16;
  const std::vector<Op> pool = {irr4(), erg4(), serg4(), grid4(), xor2(), flip2(), add3()};
  for (const Op& a : pool)
    for (const Op& b : pool) {
      const ProductContext ctx = tensor_ops({a, b});
      c.expect(is_uniformity_preserving(ctx.prod) ==
                   (is_uniformity_preserving(a) && is_uniformity_preserving(b)),
               "uniformity preservation of a product");
      const bool erg = is_ergodic(a) && is_ergodic(b);
      c.expect(is_ergodic(ctx.prod) == erg, "ergodicity of a product");
      c.expect(is_strongly_ergodic(ctx.prod, caps) ==
                   (is_strongly_ergodic(a, caps) && is_strongly_ergodic(b, caps)),
               "strong ergodicity of a product");
      if (erg)
        c.expect(connectability(ctx.prod) == std::max(connectability(a), connectability(b)),
                 "product connectability is the factor maximum");
    }
  c.expect(!is_irreducible(tensor_ops({flip2(), flip2()}).prod),
           "two period-2 factors give a reducible product");
}

// 7: splitting and factoring partitions of the two-letter square
void criterion7(Check& c) {
  const ProductContext ctx = tensor_ops({xor2(), xor2()});
  const Family diag = fam({{0, 3}, {1, 2}});
  const ProductDecomposition d = decompose(ctx, diag, set({0}));
  c.expect(d.LA == fam({{0}, {1}}), "slice family of the diagonal");
  c.expect(d.UA == fam({{0, 1}}), "image family of the diagonal");
  c.expect(d.correlation == 2, "correlation of the diagonal");
  bool pieces_ok = d.blocks.size() == 2 && d.blocks[0].block == set({1, 2}) &&
                   d.blocks[0].pieces ==
                       std::vector<std::pair<Mask, Mask>>{{set({0}), set({1})},
                                                          {set({1}), set({0})}};
  c.expect(pieces_ok, "off-diagonal block splits into the two crossed rectangles");
  for (const Family& h : enumerate_stable_partitions(ctx.prod)) {
    const auto parts = canonical_factorization(ctx, h);
    std::size_t total = 1;
    for (const Family& p : parts) total *= p.size();
    c.expect(total == h.size(), "factor sizes multiply to the block count");
  }
}

// 8: residue laws on every stable partition of the ergodic tables
void criterion8(Check& c) {
  try {
    for (const Op& op : {erg4(), serg4(), erg6()}) {
      for (const Family& h : enumerate_stable_partitions(op)) {
        const Family k = first_residue(op, h);
        c.expect(is_finer(k, h), "residue refines its partition");
        c.expect(is_stable_partition(op, k), "residue is stable");
        const int p = is_periodic_partition(op, h).second;
        Family hi = h, ki = k;
        for (int l = 1; l <= 2 * p; ++l) {
          hi = step(op, hi);
          ki = step(op, ki);
          c.expect(first_residue(op, hi) == ki, "residue commutes with the step");
        }
      }
    }
  } catch (const Error& e) {
    c.expect(false, std::string("unexpected error: ") + e.what());
  }
}

// 9: cover iteration reaches the generated partition exactly when the table
// is strongly ergodic
void criterion9(Check& c) {
  std::mt19937 rng(41);
  int converged = 0;
  for (int trial = 0; trial < 25; ++trial) {
    const Family a = random_cover(serg4(), rng);
    const CoverOrbitReport rep = cover_orbit_analysis(serg4(), a);
    if (rep.witness_n >= 1 && rep.generated == generated_partition(serg4(), a)) ++converged;
  }
  c.expect(converged == 25, "every random cover converges to its generated partition");
  // on the merely ergodic 6-letter table, this cover never converges: it is
  // a fixed point of the one-step law, strictly finer than its coarsening
  const Family stuck = stuck_cover6();
  const Family gen = generated_partition(erg6(), stuck);
  Family cur = maximal_members(stuck);
  bool never = cur != gen;
  for (int n = 1; n <= 2048 && never; ++n) {
    cur = reduced_cover_step(erg6(), cur);
    never = cur != gen;
  }
  c.expect(never, "the stuck cover stays away from its generated partition");
  c.expect(gen == fam({{0, 1, 2}, {3, 4, 5}}), "generated partition of the stuck cover");
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    double budget_s;
    std::function<void(Check&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, 1.0, criterion1},  {2, 1.0, criterion2},  {3, 60.0, criterion3},
      {4, 300.0, criterion4}, {5, 10.0, criterion5}, {6, 30.0, criterion6},
      {7, 10.0, criterion7}, {8, 60.0, criterion8}, {9, 60.0, criterion9},
  };
  int failures = 0;
  for (const Criterion& cr : criteria) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      cr.run(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > cr.budget_s)
      c.expect(false, "over time budget of " + std::to_string(cr.budget_s) + "s");
    if (c.fails.empty()) {
      std::printf("criterion %d: PASS (%.2fs)\n", cr.id, secs);
    } else {
      std::printf("criterion %d: FAIL (%.2fs) - %s\n", cr.id, secs, c.fails.c_str());
      ++failures;
    }
    std::fflush(stdout);
  }
  return failures;
}
