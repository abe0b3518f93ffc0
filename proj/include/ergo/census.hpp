#pragma once

#include <cstdint>
#include <iosfwd>

#include "ergo/report.hpp"

namespace ergo {

enum class CensusScope { up, all, latin };

struct CensusOptions {
  int q = 3;
  CensusScope scope = CensusScope::up;
  int jobs = 1;
  bool with_oracle = false;  // cross-check strong ergodicity definitionally
  int oracle_bound = 64;
  Caps caps;
};

struct CensusSummary {
  int q = 0;
  CensusScope scope = CensusScope::up;
  std::uint64_t total = 0;
  std::uint64_t up = 0, qg = 0, irr = 0, erg = 0, serg = 0;
  // invariant violations; every nonzero count is a defect
  std::uint64_t qg_not_serg = 0;
  std::uint64_t irr_inverse_mismatch = 0;
  std::uint64_t erg_inverse_mismatch = 0;
  std::uint64_t oracle_mismatch = 0;
  std::uint64_t oracle_inconclusive = 0;
  // exploratory tallies, reported but never judged
  std::uint64_t serg_inverse_not_serg = 0;
  int max_residual_degree = 0;
  int oracle_worst_n = 0;
  std::vector<json> high_degree_witnesses;  // residual degree >= 2 (capped)

  bool clean() const {
    return qg_not_serg == 0 && irr_inverse_mismatch == 0 && erg_inverse_mismatch == 0 &&
           oracle_mismatch == 0 && oracle_inconclusive == 0;
  }
};

json census_summary_json(const CensusSummary& s);

// Exhaustive sweep; when `jsonl` is given, one json line per table in a
// deterministic order independent of the job count.
CensusSummary run_census(const CensusOptions& opts, std::ostream* jsonl = nullptr);

}  // namespace ergo
