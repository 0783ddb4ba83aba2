#include "depgraph/advisories.hpp"

#include <algorithm>

namespace depgraph {

std::optional<Timestamp> resolve_patch_time(const Advisory& a,
                                            const Corpus& corpus,
                                            std::string* diagnostic) {
  if (a.patched_at) return a.patched_at;
  if (!a.patched_range) return std::nullopt;

  const auto* releases = corpus.releases_of(a.package);
  if (!releases) {
    if (diagnostic)
      *diagnostic = "patched range given but package has no releases: " + a.package;
    return std::nullopt;
  }
  // Index order is ascending publication time; first match is the patch.
  for (std::size_t ri : *releases) {
    const Release& r = corpus.releases()[ri];
    if (r.version && a.patched_range->satisfies(*r.version))
      return r.published_at;
  }
  if (diagnostic)
    *diagnostic = "no release of " + a.package + " satisfies the patched range";
  return std::nullopt;
}

bool vulnerable_at(const Advisory& a, Timestamp t, const Corpus& corpus,
                   VulnMode mode) {
  if (mode == VulnMode::Strict && a.published_at > t) return false;
  auto patch = resolve_patch_time(a, corpus);
  return !(patch && *patch < t);
}

std::vector<PackageName> vulnerable_packages(const Snapshot& s,
                                             const Corpus& corpus,
                                             VulnMode mode) {
  std::vector<PackageName> out;
  for (const Advisory& a : corpus.advisories()) {
    if (!s.contains(a.package)) continue;
    if (vulnerable_at(a, s.at(), corpus, mode)) out.push_back(a.package);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

VulnerabilityReach vulnerability_reach(const ReachIndex& idx,
                                       const Corpus& corpus, VulnMode mode) {
  const Snapshot& s = idx.snapshot();
  VulnerabilityReach result;
  if (s.package_count() == 0) return result;

  DynBitset vr(s.package_count());
  for (const PackageName& p : vulnerable_packages(s, corpus, mode))
    vr |= idx.reach_bits(*s.id_of(p));
  result.packages.reserve(vr.count());
  vr.for_each([&](std::size_t i) {
    result.packages.push_back(s.name_of(static_cast<PackageId>(i)));
  });
  result.fraction = static_cast<double>(result.packages.size()) /
                    static_cast<double>(s.package_count());
  return result;
}

double vrr(const Snapshot& s, const Corpus& corpus, VulnMode mode) {
  if (s.package_count() == 0)
    throw UndefinedStatError("vulnerability reporting rate of empty snapshot");
  return static_cast<double>(vulnerable_packages(s, corpus, mode).size()) /
         static_cast<double>(s.package_count());
}

std::vector<AdvisoryEvolutionRow> advisory_evolution(
    const Corpus& corpus, Cadence cadence, std::optional<Timestamp> from,
    std::optional<Timestamp> to) {
  const auto& advisories = corpus.advisories();
  if (advisories.empty() && (!from || !to)) return {};

  std::vector<std::pair<Timestamp, std::optional<Timestamp>>> events;
  events.reserve(advisories.size());
  Timestamp lo = advisories.empty() ? 0 : advisories.front().published_at;
  Timestamp hi = lo;
  for (const Advisory& a : advisories) {
    auto patch = resolve_patch_time(a, corpus);
    events.emplace_back(a.published_at, patch);
    lo = std::min(lo, a.published_at);
    hi = std::max(hi, a.published_at);
    if (patch) hi = std::max(hi, *patch);
  }

  Timestamp t0 = from.value_or(floor_boundary(lo, cadence));
  Timestamp t1 = to.value_or(ceil_boundary(hi, cadence));
  std::vector<AdvisoryEvolutionRow> rows;
  for (Timestamp b : boundaries_in(t0, t1, cadence)) {
    AdvisoryEvolutionRow row{b, 0, 0};
    for (const auto& [published, patch] : events) {
      if (published > b) continue;
      ++row.total;
      if (!(patch && *patch <= b)) ++row.unpatched;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace depgraph
