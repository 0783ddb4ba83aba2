#pragma once

#include <optional>
#include <vector>

#include "depgraph/corpus.hpp"
#include "depgraph/reach.hpp"

namespace depgraph {

// Retroactive follows the vulnerable-at-t definition literally: an advisory
// marks its package vulnerable at every t with no patch released strictly
// before t, even before the advisory existed. Strict additionally requires
// the advisory to be published at or before t.
enum class VulnMode { Retroactive, Strict };

// The patch instant: patched_at when given, otherwise the publication time
// of the earliest release satisfying patched_range, otherwise absent.
// `diagnostic` (optional) receives why a patched_range could not resolve.
std::optional<Timestamp> resolve_patch_time(const Advisory& a,
                                            const Corpus& corpus,
                                            std::string* diagnostic = nullptr);

bool vulnerable_at(const Advisory& a, Timestamp t, const Corpus& corpus,
                   VulnMode mode);

// Distinct packages in the snapshot vulnerable at its instant, sorted.
std::vector<PackageName> vulnerable_packages(const Snapshot& s,
                                             const Corpus& corpus,
                                             VulnMode mode);

struct VulnerabilityReach {
  std::vector<PackageName> packages;  // VR_t, sorted
  double fraction = 0.0;              // |VR_t| / |P_t| (0 when snapshot empty)
};

// VR_t: union of PR(p) over packages vulnerable at the snapshot instant.
VulnerabilityReach vulnerability_reach(const ReachIndex& idx,
                                       const Corpus& corpus, VulnMode mode);

// VRR_t = |V_t| / |P_t|. Throws UndefinedStatError on an empty snapshot.
double vrr(const Snapshot& s, const Corpus& corpus, VulnMode mode);

struct AdvisoryEvolutionRow {
  Timestamp at;
  std::size_t total;      // advisories published at or before t
  std::size_t unpatched;  // of those, without a patch at or before t
};

// Per cadence boundary; the range defaults to the corpus's advisory span.
std::vector<AdvisoryEvolutionRow> advisory_evolution(
    const Corpus& corpus, Cadence cadence,
    std::optional<Timestamp> from = std::nullopt,
    std::optional<Timestamp> to = std::nullopt);

}  // namespace depgraph
