#include "ergo/partitions.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

#include "ergo/residue.hpp"

namespace ergo {

Family canon_family(Family f) {
  std::sort(f.begin(), f.end());
  f.erase(std::unique(f.begin(), f.end()), f.end());
  return f;
}

bool is_partition_of(const Family& f, int q) {
  Mask seen = 0;
  int total = 0;
  for (Mask b : f) {
    if (b == 0 || (seen & b)) return false;
    seen |= b;
    total += popcount(b);
  }
  return total == q && seen == (Mask{1} << q) - 1;
}

bool is_balanced(const Family& f) {
  if (f.empty()) return false;
  const int s = popcount(f[0]);
  for (Mask b : f)
    if (popcount(b) != s) return false;
  return true;
}

bool is_cover_of(const Family& f, int q) {
  Mask u = 0;
  for (Mask b : f) {
    if (b == 0) return false;
    u |= b;
  }
  return !f.empty() && u == (Mask{1} << q) - 1;
}

Family singleton_partition(int q) {
  Family f(q);
  for (int i = 0; i < q; ++i) f[i] = Mask{1} << i;
  return f;
}

Family trivial_partition(int q) { return {(Mask{1} << q) - 1}; }

Family step(const Op& op, const Family& F) {
  Family out;
  out.reserve(F.size() * F.size());
  for (Mask A : F)
    for (Mask B : F) out.push_back(set_product(op, A, B));
  return canon_family(std::move(out));
}

PartitionOrbit orbit(const Op& op, const Family& F, int max_iter) {
  if (max_iter < 1) fail(Err::IterationBudgetExceeded, "orbit budget must be at least 1");
  PartitionOrbit o;
  o.base = canon_family(F);
  std::unordered_map<Family, int, FamilyHash> seen;
  Family cur = o.base;
  seen.emplace(cur, 0);
  o.iterates.push_back(cur);
  for (int i = 1; i <= max_iter; ++i) {
    cur = step(op, cur);
    auto it = seen.find(cur);
    if (it != seen.end()) {
      o.preperiod = it->second;
      o.cycle = i - it->second;
      return o;
    }
    seen.emplace(cur, i);
    o.iterates.push_back(cur);
  }
  fail(Err::IterationBudgetExceeded,
       "no repeat within " + std::to_string(max_iter) + " iterates");
}

std::pair<bool, int> is_periodic_partition(const Op& op, const Family& H, int max_iter) {
  const Family base = canon_family(H);
  // A periodic partition of a uniformity-preserving operation keeps
  // partition-ness and cardinality along its whole cycle, so an iterate that
  // breaks either rules out a return to the base family. Cutting the walk
  // there matters: iterates of non-periodic candidates can square their
  // member count every step.
  if (is_partition_of(base, op.q) && is_uniformity_preserving(op)) {
    if (max_iter < 1) fail(Err::IterationBudgetExceeded, "orbit budget must be at least 1");
    std::unordered_map<Family, int, FamilyHash> seen;
    seen.emplace(base, 0);
    Family cur = base;
    for (int i = 1; i <= max_iter; ++i) {
      cur = step(op, cur);
      if (cur == base) return {true, i};
      if (!is_partition_of(cur, op.q) || cur.size() != base.size()) return {false, 0};
      if (!seen.emplace(cur, i).second) return {false, 0};
    }
    fail(Err::IterationBudgetExceeded,
         "no repeat within " + std::to_string(max_iter) + " iterates");
  }
  const PartitionOrbit o = orbit(op, base, max_iter);
  return {o.preperiod == 0, o.preperiod == 0 ? o.cycle : 0};
}

bool is_stable_partition(const Op& op, const Family& H, int max_iter) {
  Family h = canon_family(H);
  if (!is_partition_of(h, op.q) || !is_balanced(h)) return false;
  return is_periodic_partition(op, h, max_iter).first;
}

namespace {

// Necessary for stability: since every iterate of a stable partition is
// balanced with the same block size, A*b = A*B whenever b lies in the block B.
// So A*b must not depend on the choice of b inside a block.
bool constant_within(const Op& op, Mask A, Mask B) {
  Mask first = 0;
  bool have = false;
  for (Mask mb = B; mb; mb &= mb - 1) {
    const int b = lowbit(mb);
    Mask img = 0;
    for (Mask ma = A; ma; ma &= ma - 1) img |= Mask{1} << op.at(lowbit(ma), b);
    if (!have) {
      first = img;
      have = true;
    } else if (img != first) {
      return false;
    }
  }
  return true;
}

// Canonical enumeration of balanced partitions with block size s: each block
// takes the least unassigned element plus s-1 larger ones. When `prune` is on,
// completed blocks are checked pairwise with constant_within, which collapses
// the tree for operations with few stable partitions.
void enum_balanced(const Op& op, int s, bool prune,
                   const std::function<void(const std::vector<Mask>&)>& emit) {
  const int q = op.q;
  std::vector<Mask> blocks;
  std::function<void(Mask, Mask, int, int)> rec = [&](Mask unassigned, Mask cur, int cnt,
                                                      int from) {
    if (cnt == s) {
      if (prune) {
        if (!constant_within(op, cur, cur)) return;
        for (Mask b : blocks)
          if (!constant_within(op, b, cur) || !constant_within(op, cur, b)) return;
      }
      blocks.push_back(cur);
      if (!unassigned) {
        emit(blocks);
      } else {
        const int e = lowbit(unassigned);
        rec(unassigned & ~(Mask{1} << e), Mask{1} << e, 1, e + 1);
      }
      blocks.pop_back();
      return;
    }
    for (int x = from; x < q; ++x)
      if (unassigned >> x & 1) rec(unassigned & ~(Mask{1} << x), cur | (Mask{1} << x), cnt + 1, x + 1);
  };
  rec(((Mask{1} << q) - 1) & ~Mask{1}, Mask{1}, 1, 1);
}

// Restricted growth strings; emits every set partition of {0..q-1}.
void enum_all_partitions(int q, const std::function<void(const std::vector<Mask>&)>& emit) {
  std::vector<int> assign(q, 0);
  std::vector<Mask> blocks;
  std::function<void(int, int)> rec = [&](int i, int mx) {
    if (i == q) {
      blocks.assign(mx, 0);
      for (int x = 0; x < q; ++x) blocks[assign[x]] |= Mask{1} << x;
      emit(blocks);
      return;
    }
    for (int b = 0; b <= mx; ++b) {
      assign[i] = b;
      rec(i + 1, b == mx ? mx + 1 : mx);
    }
  };
  rec(0, 0);
}

}  // namespace

std::vector<Family> enumerate_stable_partitions(const Op& op, const Caps& caps) {
  if (op.q > caps.partition_enum_q)
    fail(Err::AlphabetTooLarge, "stable-partition enumeration capped at q=" +
                                    std::to_string(caps.partition_enum_q));
  std::vector<Family> out;
  auto consider = [&](const std::vector<Mask>& blocks) {
    Family h = canon_family(blocks);
    if (is_periodic_partition(op, h, caps.orbit_budget).first) out.push_back(std::move(h));
  };
  if (is_uniformity_preserving(op)) {
    for (int s = 1; s <= op.q; ++s)
      if (op.q % s == 0) enum_balanced(op, s, /*prune=*/true, consider);
  } else {
    enum_all_partitions(op.q, [&](const std::vector<Mask>& blocks) {
      Family h = canon_family(blocks);
      if (is_balanced(h) && is_periodic_partition(op, h, caps.orbit_budget).first)
        out.push_back(std::move(h));
    });
  }
  std::sort(out.begin(), out.end());
  return out;
}

Family wedge(const Family& a, const Family& b) {
  Family out;
  for (Mask x : a)
    for (Mask y : b)
      if (Mask c = x & y) out.push_back(c);
  return canon_family(std::move(out));
}

bool is_finer(const Family& a, const Family& b) {
  for (Mask x : a) {
    bool inside = false;
    for (Mask y : b)
      if ((x & y) == x) {
        inside = true;
        break;
      }
    if (!inside) return false;
  }
  return true;
}

Family generated_partition(const Op& op, const Family& A, const Caps& caps) {
  if (!is_uniformity_preserving(op))
    fail(Err::NotUniformityPreserving, "generated partitions need a uniformity-preserving operation");
  if (op.q > caps.partition_enum_q)
    fail(Err::AlphabetTooLarge,
         "generated-partition search capped at q=" + std::to_string(caps.partition_enum_q));
  const Family a = canon_family(A);
  Family acc = trivial_partition(op.q);
  enum_all_partitions(op.q, [&](const std::vector<Mask>& blocks) {
    Family h = canon_family(blocks);
    if (is_finer(a, h) && is_periodic_partition(op, h, caps.orbit_budget).first)
      acc = wedge(acc, h);
  });
  if (!is_finer(a, acc) || !is_periodic_partition(op, acc, caps.orbit_budget).first)
    fail(Err::VerificationFailed, "generated partition is not periodic and coarser");
  return acc;
}

Family cover_components(const Family& A, int q) {
  const Family a = canon_family(A);
  if (!is_cover_of(a, q)) fail(Err::NotACover, "family has an empty member or does not cover the alphabet");
  const int n = static_cast<int>(a.size());
  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  std::function<int(int)> find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (a[i] & a[j]) parent[find(i)] = find(j);
  std::unordered_map<int, Mask> comp;
  for (int i = 0; i < n; ++i) comp[find(i)] |= a[i];
  Family out;
  out.reserve(comp.size());
  for (auto& [root, mask] : comp) out.push_back(mask);
  return canon_family(std::move(out));
}

Family maximal_members(Family f) {
  f = canon_family(std::move(f));
  Family out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < f.size() && !dominated; ++j)
      if (i != j && (f[i] | f[j]) == f[j] && f[i] != f[j]) dominated = true;
    if (!dominated) out.push_back(f[i]);
  }
  return out;
}

Family reduced_cover_step(const Op& op, const Family& F) { return maximal_members(step(op, F)); }

CoverOrbitReport cover_orbit_analysis(const Op& op, const Family& A, const Caps& caps) {
  CoverOrbitReport rep;
  rep.cover = canon_family(A);
  if (!is_cover_of(rep.cover, op.q))
    fail(Err::NotACover, "cover-orbit analysis needs a cover of the alphabet");
  if (!is_strongly_ergodic(op, caps))
    fail(Err::NotStronglyErgodic, "cover-orbit convergence needs a strongly ergodic operation");
  rep.components = cover_components(rep.cover, op.q);
  rep.generated = generated_partition(op, rep.cover, caps);
  const auto [gen_periodic, gen_per] = is_periodic_partition(op, rep.generated, caps.orbit_budget);
  if (!gen_periodic) fail(Err::VerificationFailed, "generated partition is not periodic");

  Family cur = maximal_members(rep.cover);
  Family comp_iter = rep.components;  // plain iterates of the component partition
  rep.iterates.push_back(cur);
  for (int n = 1; n <= caps.orbit_budget; ++n) {
    cur = reduced_cover_step(op, cur);
    comp_iter = step(op, comp_iter);
    if (cover_components(cur, op.q) != cover_components(comp_iter, op.q))
      fail(Err::VerificationFailed, "component partition of the iterate drifted from its one-step law");
    rep.iterates.push_back(cur);
    if (cur == rep.generated && n % gen_per == 0) {
      rep.witness_n = n;
      return rep;
    }
  }
  fail(Err::IterationBudgetExceeded,
       "cover iteration did not reach the generated partition within " +
           std::to_string(caps.orbit_budget) + " steps");
}

}  // namespace ergo
