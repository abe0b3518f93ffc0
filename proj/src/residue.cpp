#include "ergo/residue.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <unordered_map>
#include <unordered_set>

namespace ergo {

namespace {

struct TmHash {
  std::size_t operator()(const TransferMatrix& m) const { return static_cast<std::size_t>(tm_hash(m)); }
};

std::vector<Family> partition_iterates(const Op& op, const Family& H, int p) {
  std::vector<Family> its{canon_family(H)};
  for (int i = 1; i < p; ++i) its.push_back(step(op, its.back()));
  return its;
}

}  // namespace

bool is_h_sequence(const Op& op, const Family& H, const HSequence& s, int orbit_budget) {
  if (s.xs.empty()) return false;
  if (static_cast<int>(s.xs.size()) > orbit_budget) return false;
  Family cur = canon_family(H);
  for (std::size_t i = 0; i < s.xs.size(); ++i) {
    if (!std::binary_search(cur.begin(), cur.end(), s.xs[i])) return false;
    if (i + 1 < s.xs.size()) cur = step(op, cur);
  }
  return true;
}

bool is_repeatable(const Op& op, const Family& H, const HSequence& s, int orbit_budget) {
  if (!is_h_sequence(op, H, s, orbit_budget)) return false;
  const auto [periodic, p] = is_periodic_partition(op, H, orbit_budget);
  if (!periodic) return false;
  return static_cast<int>(s.xs.size()) % p == 0;
}

TransferMatrix transfer_matrix(const Op& op, Mask X) {
  if (X == 0) fail(Err::EmptySet, "transfer matrix of the empty set");
  TransferMatrix m;
  m.q = op.q;
  for (int a = 0; a < op.q; ++a) {
    Mask acc = 0;
    for (Mask mx = X; mx; mx &= mx - 1) acc |= Mask{1} << op.at(a, lowbit(mx));
    m.row[a] = acc;
  }
  return m;
}

PhasedMatrixMonoid build_monoid(const Op& op, const Family& H, const Caps& caps) {
  if (op.q > caps.max_q)
    fail(Err::AlphabetTooLarge, "monoid analyses capped at q=" + std::to_string(caps.max_q));
  if (!is_ergodic(op)) fail(Err::NotErgodic, "phased monoid needs an ergodic operation");
  Family h = canon_family(H);
  if (!is_partition_of(h, op.q) || !is_balanced(h))
    fail(Err::NotStable, "phased monoid needs a stable partition");
  const auto [periodic, p] = is_periodic_partition(op, h, caps.orbit_budget);
  if (!periodic) fail(Err::NotStable, "phased monoid needs a stable partition");

  PhasedMatrixMonoid mono;
  mono.p = p;
  mono.iterates = partition_iterates(op, h, p);
  mono.gens.resize(p);
  for (int r = 0; r < p; ++r)
    for (Mask X : mono.iterates[r]) mono.gens[r].push_back(transfer_matrix(op, X));

  std::vector<std::unordered_set<TransferMatrix, TmHash>> phases(p);
  std::deque<std::pair<TransferMatrix, int>> queue;
  std::size_t count = 0;
  auto add = [&](const TransferMatrix& m, int phase) {
    if (phases[phase].insert(m).second) {
      queue.emplace_back(m, phase);
      if (++count > caps.monoid_budget)
        fail(Err::StateBudgetExceeded,
             "monoid exceeded " + std::to_string(caps.monoid_budget) + " matrices");
    }
  };
  for (const TransferMatrix& g : mono.gens[0]) add(g, 1 % p);
  while (!queue.empty()) {
    auto [m, r] = queue.front();
    queue.pop_front();
    for (const TransferMatrix& g : mono.gens[r]) add(tm_mul(m, g), (r + 1) % p);
  }
  mono.by_phase.resize(p);
  for (int r = 0; r < p; ++r) {
    mono.by_phase[r].assign(phases[r].begin(), phases[r].end());
    std::sort(mono.by_phase[r].begin(), mono.by_phase[r].end(), tm_less);
  }
  return mono;
}

bool is_augmenting(const Op& op, const Family& H, const HSequence& s, const Caps& caps) {
  if (!is_repeatable(op, H, s, caps.orbit_budget)) return false;
  TransferMatrix m = transfer_matrix(op, s.xs[0]);
  for (std::size_t i = 1; i < s.xs.size(); ++i) m = tm_mul(m, transfer_matrix(op, s.xs[i]));
  return tm_reflexive(m);
}

Family first_residue(const Op& op, const Family& H, const Caps& caps) {
  const PhasedMatrixMonoid mono = build_monoid(op, H, caps);
  const int q = op.q;
  std::vector<const TransferMatrix*> refl;
  for (const TransferMatrix& m : mono.by_phase[0])
    if (tm_reflexive(m)) refl.push_back(&m);

  std::vector<int> parent(q);
  for (int i = 0; i < q; ++i) parent[i] = i;
  std::function<int(int)> find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  // x ~ y when one reflexive repeatable action carries both x->y and y->x;
  // closure under products makes separate witnesses unnecessary.
  for (const TransferMatrix* m : refl)
    for (int x = 0; x < q; ++x)
      for (Mask r = m->row[x]; r; r &= r - 1) {
        const int y = lowbit(r);
        if (m->row[y] >> x & 1) parent[find(x)] = find(y);
      }
  std::unordered_map<int, Mask> classes;
  for (int x = 0; x < q; ++x) classes[find(x)] |= Mask{1} << x;
  Family K;
  K.reserve(classes.size());
  for (auto& [root, mask] : classes) K.push_back(mask);
  K = canon_family(std::move(K));

  // The candidate is only accepted as the first residue after passing the
  // defining properties; failing any of them is a hard internal error.
  std::vector<Mask> class_of(q);
  for (Mask k : K)
    for (Mask r = k; r; r &= r - 1) class_of[lowbit(r)] = k;
  for (Mask k : K)
    for (Mask r = k; r; r &= r - 1) {
      const int x = lowbit(r);
      bool witness = false;
      for (const TransferMatrix* m : refl)
        if (m->row[x] == k) {
          witness = true;
          break;
        }
      if (!witness)
        fail(Err::ResidueVerificationFailed,
             "no reflexive repeatable action realizes a class exactly from one of its points");
    }
  for (const TransferMatrix* m : refl)
    for (int x = 0; x < q; ++x)
      if (m->row[x] & ~class_of[x])
        fail(Err::ResidueVerificationFailed, "a reflexive repeatable action escapes a class");

  const PartitionOrbit ko = orbit(op, K, caps.orbit_budget);
  if (ko.preperiod != 0 || mono.p % ko.cycle != 0)
    fail(Err::ResidueVerificationFailed, "first residue is not periodic with period dividing per(H)");
  std::vector<Family> kchain{K};
  for (int l = 1; l <= mono.p; ++l) kchain.push_back(step(op, kchain.back()));
  if (kchain[mono.p] != K)
    fail(Err::ResidueVerificationFailed, "first-residue chain does not close after per(H) steps");
  for (int l = 0; l < mono.p; ++l)
    for (Mask k : kchain[l])
      for (Mask X : mono.iterates[l])
        if (!std::binary_search(kchain[l + 1].begin(), kchain[l + 1].end(),
                                set_product(op, k, X)))
          fail(Err::ResidueVerificationFailed, "residue block leaves the chain under a generator step");
  return K;
}

ResidueChain residue_chain(const Op& op, const Family& H, const Caps& caps) {
  ResidueChain rc;
  rc.chain.push_back(canon_family(H));
  for (;;) {
    Family K = first_residue(op, rc.chain.back(), caps);
    if (K == rc.chain.back()) break;
    if (!is_finer(K, rc.chain.back()))
      fail(Err::ResidueVerificationFailed, "residue chain is not refining");
    rc.chain.push_back(std::move(K));
  }
  rc.degree = static_cast<int>(rc.chain.size()) - 1;
  return rc;
}

bool is_strongly_ergodic(const Op& op, const Caps& caps) {
  if (!is_uniformity_preserving(op)) return false;
  if (!is_ergodic(op)) return false;
  for (const Family& H : enumerate_stable_partitions(op, caps))
    if (first_residue(op, H, caps) != H) return false;
  return true;
}

namespace {

// Walks the reachable-subset dynamics for one (start element, partition) pair.
// States repeat, so the full acceptance pattern is known once a cycle closes.
struct PairScan {
  std::vector<char> accept_at;  // index n, valid for n < closed bound
  int preperiod = -1;           // state cycle, when closed within the bound
  int cycle = -1;

  bool closed() const { return cycle > 0; }
  bool accepted(long long n) const {
    if (n < static_cast<long long>(accept_at.size())) return accept_at[n] != 0;
    // beyond the recorded range only meaningful when the cycle closed
    return accept_at[preperiod + static_cast<int>((n - preperiod) % cycle)] != 0;
  }
  // minimal accepting n >= 1, or -1 when provably none / none within range
  int first_accept() const {
    for (std::size_t n = 1; n < accept_at.size(); ++n)
      if (accept_at[n]) return static_cast<int>(n);
    return -1;
  }
};

struct StateKey {
  Family fam;
  int phase = 0;
  bool operator==(const StateKey&) const = default;
};
struct StateKeyHash {
  std::size_t operator()(const StateKey& k) const {
    return FamilyHash{}(k.fam) * 1315423911u + static_cast<std::size_t>(k.phase);
  }
};

PairScan scan_pair(const Op& op, const std::vector<Family>& iterates, int p, int x, int bound) {
  PairScan scan;
  auto accepts = [&](const Family& S, int n) {
    for (Mask block : iterates[n % p])
      if (!std::binary_search(S.begin(), S.end(), block)) return false;
    return true;
  };
  Family S{Mask{1} << x};
  std::unordered_map<StateKey, int, StateKeyHash> seen;
  seen.emplace(StateKey{S, 0}, 0);
  scan.accept_at.push_back(0);  // n = 0 never accepts by definition
  for (int n = 1; n <= bound; ++n) {
    Family next;
    next.reserve(S.size() * iterates[(n - 1) % p].size());
    for (Mask A : S)
      for (Mask X : iterates[(n - 1) % p]) next.push_back(set_product(op, A, X));
    S = canon_family(std::move(next));
    scan.accept_at.push_back(accepts(S, n) ? 1 : 0);
    auto [it, inserted] = seen.emplace(StateKey{S, n % p}, n);
    if (!inserted) {
      scan.preperiod = it->second;
      scan.cycle = n - it->second;
      break;
    }
  }
  return scan;
}

}  // namespace

OracleReport oracle_strong_ergodicity(const Op& op, int length_bound, const Caps& caps) {
  if (op.q > caps.oracle_q)
    fail(Err::AlphabetTooLarge, "definitional oracle capped at q=" + std::to_string(caps.oracle_q));
  if (!is_uniformity_preserving(op))
    fail(Err::NotUniformityPreserving, "definitional scan needs a uniformity-preserving table");
  if (length_bound < 1) fail(Err::IterationBudgetExceeded, "length bound must be at least 1");
  OracleReport rep;
  bool any_inconclusive = false;
  int worst = 0;
  for (const Family& H : enumerate_stable_partitions(op, caps)) {
    const auto [periodic, p] = is_periodic_partition(op, H, caps.orbit_budget);
    (void)periodic;
    const std::vector<Family> its = partition_iterates(op, H, p);
    OraclePartitionDetail det;
    det.H = H;
    for (int x = 0; x < op.q; ++x) {
      const PairScan scan = scan_pair(op, its, p, x, length_bound);
      const int n = scan.first_accept();
      det.n_by_x.push_back(n);
      if (n < 0) {
        if (scan.closed()) {
          rep.detail.push_back(std::move(det));
          rep.verdict = OracleVerdict::no;
          return rep;
        }
        any_inconclusive = true;
      } else {
        worst = std::max(worst, n);
      }
    }
    rep.detail.push_back(std::move(det));
  }
  if (any_inconclusive) {
    rep.verdict = OracleVerdict::inconclusive;
  } else {
    rep.verdict = OracleVerdict::yes;
    rep.scon = worst;
  }
  return rep;
}

bool definitional_strong_ergodicity(const Op& op, int length_bound, const Caps& caps) {
  const OracleReport rep = oracle_strong_ergodicity(op, length_bound, caps);
  if (rep.verdict == OracleVerdict::inconclusive)
    fail(Err::InconclusiveWithinBound,
         "no witness or refutation within length bound " + std::to_string(length_bound));
  return rep.verdict == OracleVerdict::yes;
}

int strong_connectability(const Op& op, int length_bound, const Caps& caps) {
  if (!is_strongly_ergodic(op, caps))
    fail(Err::NotStronglyErgodic, "strong connectability needs a strongly ergodic operation");
  const OracleReport rep = oracle_strong_ergodicity(op, length_bound, caps);
  if (rep.verdict == OracleVerdict::inconclusive)
    fail(Err::InconclusiveWithinBound,
         "strong connectability not settled within length bound " + std::to_string(length_bound));
  if (rep.verdict == OracleVerdict::no)
    fail(Err::VerificationFailed, "definitional scan contradicts the residue criterion");

  // Minimality and monotonicity spot-check on a pair attaining the maximum.
  for (const OraclePartitionDetail& det : rep.detail) {
    for (std::size_t x = 0; x < det.n_by_x.size(); ++x) {
      if (det.n_by_x[x] != rep.scon) continue;
      const auto [periodic, p] = is_periodic_partition(op, det.H, caps.orbit_budget);
      (void)periodic;
      const std::vector<Family> its = partition_iterates(op, det.H, p);
      const PairScan scan = scan_pair(op, its, p, static_cast<int>(x), length_bound + 2 * p);
      if (rep.scon > 1 && scan.accepted(rep.scon - 1))
        fail(Err::VerificationFailed, "strong connectability is not minimal");
      for (int s = rep.scon; s <= rep.scon + 2 * p; ++s)
        if (!(scan.closed() || s < static_cast<int>(scan.accept_at.size())) || !scan.accepted(s))
          fail(Err::VerificationFailed, "acceptance is not monotone beyond the threshold");
      return rep.scon;
    }
  }
  fail(Err::VerificationFailed, "no pair attains the reported strong connectability");
}

}  // namespace ergo
