#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "depgraph/model.hpp"

namespace depgraph {

// The full release/advisory history. Releases are kept sorted ascending by
// (published_at, package, version); the per-package index preserves that
// order, so the last entry at or before t is the release an install at t
// would resolve.
class Corpus {
 public:
  Corpus() = default;

  static Corpus from_parts(std::vector<Release> releases,
                           std::vector<Advisory> advisories);

  const std::vector<Release>& releases() const { return releases_; }
  const std::vector<Advisory>& advisories() const { return advisories_; }

  bool has_package(const PackageName& p) const {
    return package_index_.count(p) != 0;
  }

  // Indices into releases(), in per-package publication order; nullptr when
  // the package never published.
  const std::vector<std::size_t>* releases_of(const PackageName& p) const {
    auto it = package_index_.find(p);
    return it == package_index_.end() ? nullptr : &it->second;
  }

  std::size_t package_count() const { return package_names_.size(); }

  // Every package with at least one release, sorted by name.
  const std::vector<PackageName>& package_names() const { return package_names_; }

  // Names referenced in some deps mapping that never published a release.
  const std::vector<PackageName>& external_names() const { return external_names_; }

  bool empty() const { return releases_.empty(); }
  Timestamp first_release_time() const;  // requires !empty()
  // Latest of all release and advisory publication instants (0 when empty).
  Timestamp last_event_time() const;

 private:
  std::vector<Release> releases_;
  std::vector<Advisory> advisories_;
  std::unordered_map<PackageName, std::vector<std::size_t>> package_index_;
  std::vector<PackageName> package_names_;
  std::vector<PackageName> external_names_;
};

}  // namespace depgraph
