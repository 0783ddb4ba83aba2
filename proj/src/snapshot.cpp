#include "depgraph/snapshot.hpp"

#include <algorithm>
#include <set>

namespace depgraph {

std::optional<PackageId> Snapshot::id_of(const PackageName& name) const {
  auto it = ids_.find(name);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::size_t Snapshot::dev_edge_count() const {
  std::size_t n = 0;
  for (const auto& d : dev_deps_) n += d.size();
  return n;
}

Snapshot build_snapshot(const Corpus& corpus, Timestamp t, MaintainerMode mode) {
  Snapshot s;
  s.at_ = t;

  // The per-package index is ordered by (published_at, version), so the last
  // entry at or before t is the resolving release.
  struct Chosen {
    const PackageName* name;
    std::size_t release_index;  // into corpus.releases()
    std::size_t count_at_t;     // releases published at or before t
  };
  std::vector<Chosen> chosen;
  chosen.reserve(corpus.package_count());
  const auto& releases = corpus.releases();
  for (const PackageName& name : corpus.package_names()) {
    const auto* idx = corpus.releases_of(name);
    std::size_t count = 0;
    std::size_t best = 0;
    for (std::size_t ri : *idx) {
      if (releases[ri].published_at > t) break;
      best = ri;
      ++count;
    }
    if (count == 0) continue;  // not yet published at t
    chosen.push_back({&name, best, count});
  }

  s.names_.reserve(chosen.size());
  for (const Chosen& c : chosen) {
    s.ids_.emplace(*c.name, static_cast<PackageId>(s.names_.size()));
    s.names_.push_back(*c.name);
  }

  s.deps_.resize(s.names_.size());
  s.dev_deps_.resize(s.names_.size());
  s.maintainers_.resize(s.names_.size());

  for (std::size_t i = 0; i < chosen.size(); ++i) {
    const Release& latest = releases[chosen[i].release_index];

    auto resolve_edges = [&](const std::map<PackageName, RangeConstraint>& decl,
                             std::vector<PackageId>& out) {
      out.reserve(decl.size());
      for (const auto& [dep, range] : decl) {
        auto id = s.id_of(dep);
        if (id) out.push_back(*id);  // names outside P_t are dropped
      }
      std::sort(out.begin(), out.end());
    };
    resolve_edges(latest.deps, s.deps_[i]);
    resolve_edges(latest.dev_deps, s.dev_deps_[i]);
    s.edge_count_ += s.deps_[i].size();

    if (mode == MaintainerMode::AtTime) {
      s.maintainers_[i] = latest.maintainers;
    } else {
      std::set<MaintainerId> all;
      const auto* idx = corpus.releases_of(*chosen[i].name);
      for (std::size_t k = 0; k < chosen[i].count_at_t; ++k) {
        const Release& r = releases[(*idx)[k]];
        all.insert(r.maintainers.begin(), r.maintainers.end());
      }
      s.maintainers_[i].assign(all.begin(), all.end());
    }
  }
  return s;
}

std::vector<Snapshot> snapshot_series(const Corpus& corpus, Cadence cadence,
                                      Timestamp t0, Timestamp t1,
                                      MaintainerMode mode) {
  std::vector<Snapshot> out;
  for (Timestamp b : boundaries_in(t0, t1, cadence))
    out.push_back(build_snapshot(corpus, b, mode));
  return out;
}

}  // namespace depgraph
