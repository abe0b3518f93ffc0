#include "ergo/census.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <ostream>
#include <thread>

namespace ergo {

namespace {

std::vector<std::vector<Elem>> all_perms(int q) {
  std::vector<Elem> p(q);
  std::iota(p.begin(), p.end(), Elem{0});
  std::vector<std::vector<Elem>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

struct Shard {
  CensusSummary sum;
  std::vector<std::pair<std::uint64_t, std::string>> rows;
};

std::string flat_digits(const Op& op) {
  std::string s;
  s.reserve(op.t.size());
  for (Elem e : op.t) s += static_cast<char>(e < 10 ? '0' + e : 'a' + e - 10);
  return s;
}

void analyze(const Op& op, std::uint64_t idx, bool emit_rows, const CensusOptions& opts,
             Shard& sh) {
  CensusSummary& s = sh.sum;
  ++s.total;
  const bool up = is_uniformity_preserving(op);
  json row;
  if (emit_rows) {
    row["idx"] = idx;
    row["t"] = flat_digits(op);
    row["up"] = up;
  }
  if (!up) {
    if (emit_rows) sh.rows.emplace_back(idx, row.dump());
    return;
  }
  ++s.up;
  const bool qg = is_quasigroup(op);
  const bool irr = is_irreducible(op);
  const bool erg = irr && period(op) == 1;
  if (qg) ++s.qg;
  if (irr) ++s.irr;
  if (erg) ++s.erg;
  bool serg = false;
  if (erg) {
    serg = true;
    for (const Family& H : enumerate_stable_partitions(op, opts.caps)) {
      const ResidueChain rc = residue_chain(op, H, opts.caps);
      if (rc.degree != 0) serg = false;
      if (rc.degree > s.max_residual_degree) s.max_residual_degree = rc.degree;
      if (rc.degree >= 2 && s.high_degree_witnesses.size() < 8) {
        json w;
        w["table"] = op_to_json(op);
        w["partition"] = family_to_json(H);
        w["degree"] = rc.degree;
        s.high_degree_witnesses.push_back(std::move(w));
      }
    }
  }
  if (serg) ++s.serg;
  if (qg && !serg) ++s.qg_not_serg;

  const Op inv = inverse_op(op);
  if (is_irreducible(inv) != irr) ++s.irr_inverse_mismatch;
  if (is_ergodic(inv) != erg) ++s.erg_inverse_mismatch;
  if (serg && !is_strongly_ergodic(inv, opts.caps)) ++s.serg_inverse_not_serg;

  if (opts.with_oracle) {
    const OracleReport rep = oracle_strong_ergodicity(op, opts.oracle_bound, opts.caps);
    if (rep.verdict == OracleVerdict::inconclusive)
      ++s.oracle_inconclusive;
    else if ((rep.verdict == OracleVerdict::yes) != serg)
      ++s.oracle_mismatch;
    if (rep.verdict == OracleVerdict::yes && rep.scon > s.oracle_worst_n)
      s.oracle_worst_n = rep.scon;
  }
  if (emit_rows) {
    row["qg"] = qg;
    row["irr"] = irr;
    row["erg"] = erg;
    row["serg"] = serg;
    sh.rows.emplace_back(idx, row.dump());
  }
}

void run_up_scope(const CensusOptions& opts, int shard_id, int jobs, bool emit, Shard& sh) {
  const int q = opts.q;
  const auto perms = all_perms(q);
  const std::uint64_t nperm = perms.size();
  std::vector<std::uint64_t> d(q, 0);  // d[b] picks the permutation of column b
  Op op;
  op.q = q;
  op.t.assign(static_cast<std::size_t>(q) * q, 0);
  for (std::uint64_t c0 = shard_id; c0 < nperm; c0 += jobs) {
    std::fill(d.begin(), d.end(), 0);
    d[0] = c0;
    for (;;) {
      for (int b = 0; b < q; ++b)
        for (int a = 0; a < q; ++a) op.t[static_cast<std::size_t>(a) * q + b] = perms[d[b]][a];
      std::uint64_t idx = 0;
      for (int b = 0; b < q; ++b) idx = idx * nperm + d[b];
      analyze(op, idx, emit, opts, sh);
      int b = q - 1;
      while (b >= 1 && ++d[b] == nperm) d[b--] = 0;
      if (b < 1) break;
    }
  }
}

void run_all_scope(const CensusOptions& opts, int shard_id, int jobs, bool emit, Shard& sh) {
  const int q = opts.q;
  const int cells = q * q;
  std::uint64_t total = 1;
  for (int i = 0; i < cells; ++i) total *= static_cast<std::uint64_t>(q);
  Op op;
  op.q = q;
  op.t.assign(cells, 0);
  for (std::uint64_t n = shard_id; n < total; n += jobs) {
    std::uint64_t v = n;
    for (int i = cells - 1; i >= 0; --i) {  // entry (0,0) most significant
      op.t[i] = static_cast<Elem>(v % q);
      v /= q;
    }
    analyze(op, n, emit, opts, sh);
  }
}

void run_latin_scope(const CensusOptions& opts, int shard_id, int jobs, bool emit, Shard& sh) {
  const int q = opts.q;
  const auto perms = all_perms(q);
  Op op;
  op.q = q;
  op.t.assign(static_cast<std::size_t>(q) * q, 0);
  for (std::uint64_t f = shard_id; f < perms.size(); f += jobs) {
    std::vector<Mask> col_used(q, 0);
    for (int b = 0; b < q; ++b) {
      op.t[b] = perms[f][b];
      col_used[b] = Mask{1} << perms[f][b];
    }
    std::uint64_t local = 0;
    std::function<void(int, int, Mask)> rec = [&](int r, int c, Mask row_used) {
      if (c == q) {
        if (r + 1 == q) {
          analyze(op, f * 1000000 + local++, emit, opts, sh);
        } else {
          rec(r + 1, 0, 0);
        }
        return;
      }
      for (int v = 0; v < q; ++v) {
        const Mask bit = Mask{1} << v;
        if ((row_used & bit) || (col_used[c] & bit)) continue;
        op.t[static_cast<std::size_t>(r) * q + c] = static_cast<Elem>(v);
        col_used[c] |= bit;
        rec(r, c + 1, row_used | bit);
        col_used[c] &= ~bit;
      }
    };
    rec(1, 0, 0);
  }
}

}  // namespace

json census_summary_json(const CensusSummary& s) {
  const char* scope = s.scope == CensusScope::up ? "up" : s.scope == CensusScope::all ? "all" : "latin";
  json j;
  j["q"] = s.q;
  j["scope"] = scope;
  j["total"] = s.total;
  j["uniformity_preserving"] = s.up;
  j["quasigroup"] = s.qg;
  j["irreducible"] = s.irr;
  j["ergodic"] = s.erg;
  j["strongly_ergodic"] = s.serg;
  j["violations"] = json{{"quasigroup_not_strongly_ergodic", s.qg_not_serg},
                         {"irreducible_inverse_mismatch", s.irr_inverse_mismatch},
                         {"ergodic_inverse_mismatch", s.erg_inverse_mismatch},
                         {"oracle_mismatch", s.oracle_mismatch},
                         {"oracle_inconclusive", s.oracle_inconclusive}};
  json exp;
  exp["strongly_ergodic_inverse_not_strongly_ergodic"] = s.serg_inverse_not_serg;
  exp["max_residual_degree"] = s.max_residual_degree;
  if (s.oracle_worst_n > 0) exp["oracle_worst_n"] = s.oracle_worst_n;
  if (!s.high_degree_witnesses.empty()) exp["high_degree_witnesses"] = s.high_degree_witnesses;
  j["experiments"] = std::move(exp);
  j["clean"] = s.clean();
  return j;
}

CensusSummary run_census(const CensusOptions& opts, std::ostream* jsonl) {
  const int q = opts.q;
  if (q < 1) fail(Err::NonSquare, "census needs q >= 1");
  const int cap = opts.scope == CensusScope::all ? 3 : 4;
  if (q > cap)
    fail(Err::AlphabetTooLarge, "this census scope is exhaustive only up to q=" +
                                    std::to_string(cap));
  if (opts.with_oracle && q > opts.caps.oracle_q)
    fail(Err::AlphabetTooLarge, "definitional oracle capped at q=" +
                                    std::to_string(opts.caps.oracle_q));
  const int jobs = std::max(1, opts.jobs);
  const bool emit = jsonl != nullptr;
  std::vector<Shard> shards(jobs);
  std::vector<std::exception_ptr> errors(jobs);
  auto work = [&](int k) {
    try {
      switch (opts.scope) {
        case CensusScope::up: run_up_scope(opts, k, jobs, emit, shards[k]); break;
        case CensusScope::all: run_all_scope(opts, k, jobs, emit, shards[k]); break;
        case CensusScope::latin: run_latin_scope(opts, k, jobs, emit, shards[k]); break;
      }
    } catch (...) {
      errors[k] = std::current_exception();
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (int k = 0; k < jobs; ++k) threads.emplace_back(work, k);
    for (auto& t : threads) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  CensusSummary s;
  s.q = q;
  s.scope = opts.scope;
  for (const Shard& sh : shards) {
    const CensusSummary& p = sh.sum;
    s.total += p.total;
    s.up += p.up;
    s.qg += p.qg;
    s.irr += p.irr;
    s.erg += p.erg;
    s.serg += p.serg;
    s.qg_not_serg += p.qg_not_serg;
    s.irr_inverse_mismatch += p.irr_inverse_mismatch;
    s.erg_inverse_mismatch += p.erg_inverse_mismatch;
    s.oracle_mismatch += p.oracle_mismatch;
    s.oracle_inconclusive += p.oracle_inconclusive;
    s.serg_inverse_not_serg += p.serg_inverse_not_serg;
    s.max_residual_degree = std::max(s.max_residual_degree, p.max_residual_degree);
    s.oracle_worst_n = std::max(s.oracle_worst_n, p.oracle_worst_n);
    for (const json& w : p.high_degree_witnesses)
      if (s.high_degree_witnesses.size() < 8) s.high_degree_witnesses.push_back(w);
  }
  if (emit) {
    std::vector<std::pair<std::uint64_t, std::string>> rows;
    for (Shard& sh : shards)
      for (auto& r : sh.rows) rows.push_back(std::move(r));
    std::sort(rows.begin(), rows.end());
    for (const auto& [idx, line] : rows) *jsonl << line << '\n';
  }
  return s;
}

}  // namespace ergo
