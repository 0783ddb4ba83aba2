#pragma once

#include <map>
#include <optional>
#include <vector>

#include "depgraph/reach.hpp"

namespace depgraph {

// maintainer -> maintained package ids at t, keyed in maintainer name order.
std::map<MaintainerId, std::vector<PackageId>> maintainer_packages(
    const Snapshot& s);

// MR(m) = union of PR(p) over packages m maintains. Maintained packages are
// included only when reached through another maintained package. Unknown
// maintainers legally have an empty reach.
std::vector<PackageName> maintainer_reach(const ReachIndex& idx,
                                          const MaintainerId& m);
DynBitset maintainer_reach_bits(const ReachIndex& idx,
                                const std::vector<PackageId>& maintained);

// ITM(p) = union of M(q) over q in ITP(p), sorted. p's own maintainers
// appear only if they maintain some implicitly trusted package.
std::vector<MaintainerId> implicitly_trusted_maintainers(const ReachIndex& idx,
                                                         const PackageName& p);

// Mean |ITM(p)| over all packages, or over the top_k packages with largest
// |PR| (ties by name). Throws UndefinedStatError on an empty scope.
double average_itm(const ReachIndex& idx,
                   std::optional<std::size_t> top_k = std::nullopt);

struct PackagesPerMaintainerStats {
  double average = 0.0;
  std::map<std::size_t, std::size_t> histogram;  // package count -> maintainers
};

// Throws UndefinedStatError when the snapshot has no maintainers.
PackagesPerMaintainerStats packages_per_maintainer_stats(const Snapshot& s);

// The hill-climbing collusion order: step i picks the maintainer with the
// highest marginal combined reach, ties broken by lexicographic id.
struct CollusionPlan {
  std::vector<MaintainerId> chosen;
  std::vector<std::size_t> cumulative_coverage;  // |union of MR| after each pick
  std::vector<double> covered_fraction;          // over |P_t|
  bool truncated = false;  // n exceeded the maintainer population
};

// CELF-style lazy evaluation; output is bit-identical to naive greedy
// re-evaluation including tie-breaks (gains recomputed until fresh at the
// top of a (gain desc, id asc) heap). `threads` parallelizes only the
// initial gain pass, so plans are independent of thread count.
CollusionPlan greedy_collusion(const ReachIndex& idx, std::size_t n,
                               int threads = 1);

}  // namespace depgraph
