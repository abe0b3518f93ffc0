#include <doctest.h>

#include <sstream>

#include "ergo/census.hpp"
#include "tables.hpp"

using namespace ergo;

TEST_SUITE("census") {

TEST_CASE("two letters, every uniformity-preserving table") {
  CensusOptions opts;
  opts.q = 2;
  opts.with_oracle = true;
  const CensusSummary s = run_census(opts);
  CHECK(s.total == 4);
  CHECK(s.up == 4);
  CHECK(s.qg == 2);
  CHECK(s.irr == 3);
  CHECK(s.erg == 2);
  CHECK(s.serg == 2);
  CHECK(s.clean());
}

TEST_CASE("three letters, every uniformity-preserving table, with the scan") {
  CensusOptions opts;
  opts.q = 3;
  opts.with_oracle = true;
  opts.oracle_bound = 64;
  const CensusSummary s = run_census(opts);
  CHECK(s.total == 216);
  CHECK(s.up == 216);
  CHECK(s.qg == 12);
  CHECK(s.irr == 194);
  CHECK(s.erg == 192);
  CHECK(s.serg == 192);
  CHECK(s.oracle_mismatch == 0);
  CHECK(s.oracle_inconclusive == 0);
  CHECK(s.oracle_worst_n == 3);
  CHECK(s.max_residual_degree == 0);
  CHECK(s.high_degree_witnesses.empty());
  CHECK(s.clean());
}

TEST_CASE("three letters, all tables") {
  CensusOptions opts;
  opts.q = 3;
  opts.scope = CensusScope::all;
  const CensusSummary s = run_census(opts);
  CHECK(s.total == 19683);
  CHECK(s.up == 216);
  CHECK(s.qg == 12);
  CHECK(s.erg == 192);
  CHECK(s.serg == 192);
  CHECK(s.clean());
}

TEST_CASE("latin squares are all strongly ergodic") {
  CensusOptions opts;
  opts.q = 3;
  opts.scope = CensusScope::latin;
  const CensusSummary s3 = run_census(opts);
  CHECK(s3.total == 12);
  CHECK(s3.qg == 12);
  CHECK(s3.serg == 12);
  CHECK(s3.clean());
}

TEST_CASE("job count changes neither the summary nor the rows") {
  CensusOptions one;
  one.q = 3;
  one.jobs = 1;
  CensusOptions two = one;
  two.jobs = 2;
  std::ostringstream rows1, rows2;
  const CensusSummary a = run_census(one, &rows1);
  const CensusSummary b = run_census(two, &rows2);
  CHECK(rows1.str() == rows2.str());
  CHECK(rows1.str().find("\"idx\":0,") != std::string::npos);
  CHECK(a.total == b.total);
  CHECK(a.serg == b.serg);
  CHECK(census_summary_json(a).dump() == census_summary_json(b).dump());
}

TEST_CASE("scope caps") {
  CensusOptions opts;
  opts.q = 4;
  opts.scope = CensusScope::all;
  try {
    run_census(opts);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind == Err::AlphabetTooLarge);
  }
  opts.q = 5;
  opts.scope = CensusScope::up;
  try {
    run_census(opts);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind == Err::AlphabetTooLarge);
  }
}

TEST_CASE("summary json carries the violation counters") {
  CensusOptions opts;
  opts.q = 2;
  const json j = census_summary_json(run_census(opts));
  CHECK(j["total"] == 4);
  CHECK(j["violations"]["oracle_mismatch"] == 0);
  CHECK(j["clean"] == true);
  CHECK(j["scope"] == "up");
}

}  // TEST_SUITE
