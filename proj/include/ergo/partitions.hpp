#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "ergo/core.hpp"

namespace ergo {

// A family of subsets in canonical form: strictly increasing bitmasks.
// Partitions are families whose blocks are disjoint, nonempty and cover the
// alphabet; block order "by smallest element" is recovered on rendering.
using Family = std::vector<Mask>;

struct FamilyHash {
  std::size_t operator()(const Family& f) const {
    std::uint64_t h = 1469598103934665603ull;
    for (Mask m : f) {
      h ^= m;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

Family canon_family(Family f);
bool is_partition_of(const Family& f, int q);
bool is_balanced(const Family& f);
bool is_cover_of(const Family& f, int q);
Family singleton_partition(int q);
Family trivial_partition(int q);

// {A*B : A,B in F}, deduplicated.
Family step(const Op& op, const Family& F);

struct PartitionOrbit {
  Family base;
  std::vector<Family> iterates;  // iterates[i] = i-th step of base
  int preperiod = 0;
  int cycle = 1;
};
PartitionOrbit orbit(const Op& op, const Family& F, int max_iter = 4096);

// (periodic?, period). The period is meaningful only when periodic.
std::pair<bool, int> is_periodic_partition(const Op& op, const Family& H, int max_iter = 4096);
bool is_stable_partition(const Op& op, const Family& H, int max_iter = 4096);

std::vector<Family> enumerate_stable_partitions(const Op& op, const Caps& caps = {});

Family wedge(const Family& a, const Family& b);
// Every member of `a` is contained in some member of `b`.
bool is_finer(const Family& a, const Family& b);

// Finest periodic partition coarser than A (wedge over all of them).
Family generated_partition(const Op& op, const Family& A, const Caps& caps = {});

// Partition generated by a cover: unions of overlap-connected components.
Family cover_components(const Family& A, int q);

// Members strictly contained in another member are dropped; they constrain no
// coarsening and only pin down iterates that cannot become partitions.
Family maximal_members(Family f);
Family reduced_cover_step(const Op& op, const Family& F);

struct CoverOrbitReport {
  Family cover;       // canonical input
  Family components;  // partition generated by the cover
  Family generated;   // finest periodic partition coarser than the cover
  int witness_n = -1;
  std::vector<Family> iterates;  // reduced iterates, [0] = maximal members of cover
};
CoverOrbitReport cover_orbit_analysis(const Op& op, const Family& A, const Caps& caps = {});

}  // namespace ergo
