#include "depgraph/corpus.hpp"

#include <algorithm>
#include <set>

namespace depgraph {

namespace {

// Unparseable versions sort below parseable ones; raw text breaks the
// remaining ties so the order is total and deterministic.
bool version_less(const Release& a, const Release& b) {
  if (a.version.has_value() != b.version.has_value())
    return !a.version.has_value();
  if (a.version && b.version) {
    int c = a.version->compare(*b.version);
    if (c != 0) return c < 0;
  }
  return a.version_raw < b.version_raw;
}

bool release_less(const Release& a, const Release& b) {
  if (a.published_at != b.published_at) return a.published_at < b.published_at;
  if (a.package != b.package) return a.package < b.package;
  return version_less(a, b);
}

}  // namespace

Corpus Corpus::from_parts(std::vector<Release> releases,
                          std::vector<Advisory> advisories) {
  Corpus c;
  std::sort(releases.begin(), releases.end(), release_less);
  std::sort(advisories.begin(), advisories.end(),
            [](const Advisory& a, const Advisory& b) {
              if (a.published_at != b.published_at)
                return a.published_at < b.published_at;
              return a.id < b.id;
            });
  c.releases_ = std::move(releases);
  c.advisories_ = std::move(advisories);

  for (std::size_t i = 0; i < c.releases_.size(); ++i)
    c.package_index_[c.releases_[i].package].push_back(i);
  c.package_names_.reserve(c.package_index_.size());
  for (const auto& [name, idx] : c.package_index_) c.package_names_.push_back(name);
  std::sort(c.package_names_.begin(), c.package_names_.end());

  std::set<PackageName> external;
  for (const Release& r : c.releases_) {
    for (const auto& [dep, range] : r.deps)
      if (!c.package_index_.count(dep)) external.insert(dep);
    for (const auto& [dep, range] : r.dev_deps)
      if (!c.package_index_.count(dep)) external.insert(dep);
  }
  c.external_names_.assign(external.begin(), external.end());
  return c;
}

Timestamp Corpus::first_release_time() const {
  return releases_.front().published_at;
}

Timestamp Corpus::last_event_time() const {
  Timestamp t = 0;
  if (!releases_.empty()) t = releases_.back().published_at;
  for (const Advisory& a : advisories_) {
    t = std::max(t, a.published_at);
    if (a.patched_at) t = std::max(t, *a.patched_at);
  }
  return t;
}

}  // namespace depgraph
