#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "depgraph/corpus.hpp"

namespace depgraph {

// Whether a package's maintainer set at t is that of its latest release at
// or before t, or the union over all releases up to t.
enum class MaintainerMode { AtTime, LifetimeUnion };

using PackageId = std::uint32_t;

// The dependency graph at one instant. Packages get dense ids in
// lexicographic name order; edges point dependent -> dependee, never to a
// name outside the snapshot and never to self.
class Snapshot {
 public:
  Timestamp at() const { return at_; }
  std::size_t package_count() const { return names_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  const std::vector<PackageName>& packages() const { return names_; }
  const PackageName& name_of(PackageId id) const { return names_[id]; }
  std::optional<PackageId> id_of(const PackageName& name) const;
  bool contains(const PackageName& name) const { return id_of(name).has_value(); }

  // Sorted dependee ids of one package.
  const std::vector<PackageId>& deps_of(PackageId id) const { return deps_[id]; }
  const std::vector<PackageId>& dev_deps_of(PackageId id) const {
    return dev_deps_[id];
  }
  // Sorted, unique maintainer set M(p).
  const std::vector<MaintainerId>& maintainers_of(PackageId id) const {
    return maintainers_[id];
  }

  std::size_t dev_edge_count() const;

  friend Snapshot build_snapshot(const Corpus&, Timestamp, MaintainerMode);

 private:
  Timestamp at_ = 0;
  std::vector<PackageName> names_;
  std::unordered_map<PackageName, PackageId> ids_;
  std::vector<std::vector<PackageId>> deps_;
  std::vector<std::vector<PackageId>> dev_deps_;
  std::vector<std::vector<MaintainerId>> maintainers_;
  std::size_t edge_count_ = 0;
};

// Materializes G_t: packages with a release at or before t, each carrying
// the dependency declarations of its latest such release (publication-time
// ties broken by highest version). Edges to names not yet published are
// dropped. t before the first release yields a valid empty snapshot.
Snapshot build_snapshot(const Corpus& corpus, Timestamp t,
                        MaintainerMode mode = MaintainerMode::AtTime);

// One snapshot per cadence boundary b with t0 <= b <= t1.
std::vector<Snapshot> snapshot_series(const Corpus& corpus, Cadence cadence,
                                      Timestamp t0, Timestamp t1,
                                      MaintainerMode mode = MaintainerMode::AtTime);

}  // namespace depgraph
