#pragma once

#include <string>
#include <vector>

#include "depgraph/advisories.hpp"
#include "depgraph/maintainers.hpp"

namespace depgraph {

struct CurvePoint {
  std::size_t k;
  double value;
};

// Vetting order for maintainers: by |MR| descending, or in greedy-collusion
// order. Packages are always vetted by |PR| descending (most depended-upon
// first); ties break lexicographically in both cases.
enum class VetStrategy { ByInfluence, GreedyCoverage };

// Mean |ITP(p) \ trusted| over all p, for each k in [0, k_max] where
// trusted is the top-k packages by |PR|. The point at k=0 is exactly the
// unmodified average ITP. Throws UndefinedStatError on an empty snapshot.
std::vector<CurvePoint> trusted_package_curve(const ReachIndex& idx,
                                              std::size_t k_max);

// Mean |ITM(p) \ trusted| for each k in [0, k_max]; trusted maintainers are
// ignored in every ITM set once vetted.
std::vector<CurvePoint> trusted_maintainer_curve(
    const ReachIndex& idx, std::size_t k_max,
    VetStrategy strategy = VetStrategy::ByInfluence);

struct Correlation {
  double r = 0.0;
  std::size_t samples = 0;
  // The pairing rule behind the second variable, for report headers.
  std::string pairing;
};

// Single-pass co-moment Pearson r. Throws UndefinedStatError for fewer
// than two samples or zero variance in either input.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

// Pearson correlation between |ITP(p)| and the number of advisories whose
// package lies in ITP(p) + {p}, over all packages in the snapshot.
// Throws UndefinedStatError when either variable has zero variance or
// fewer than two samples exist.
Correlation itp_vulnerability_correlation(const ReachIndex& idx,
                                          const Corpus& corpus);

}  // namespace depgraph
