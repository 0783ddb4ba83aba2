#include "depgraph/maintainers.hpp"

#include <algorithm>
#include <queue>
#include <set>

#include "depgraph/parallel.hpp"

namespace depgraph {

std::map<MaintainerId, std::vector<PackageId>> maintainer_packages(
    const Snapshot& s) {
  std::map<MaintainerId, std::vector<PackageId>> out;
  for (PackageId p = 0; p < s.package_count(); ++p)
    for (const MaintainerId& m : s.maintainers_of(p)) out[m].push_back(p);
  return out;  // package ids ascend by construction
}

DynBitset maintainer_reach_bits(const ReachIndex& idx,
                                const std::vector<PackageId>& maintained) {
  DynBitset mr(idx.snapshot().package_count());
  for (PackageId p : maintained) mr |= idx.reach_bits(p);
  return mr;
}

std::vector<PackageName> maintainer_reach(const ReachIndex& idx,
                                          const MaintainerId& m) {
  const Snapshot& s = idx.snapshot();
  std::vector<PackageId> maintained;
  for (PackageId p = 0; p < s.package_count(); ++p) {
    const auto& ms = s.maintainers_of(p);
    if (std::binary_search(ms.begin(), ms.end(), m)) maintained.push_back(p);
  }
  DynBitset mr = maintainer_reach_bits(idx, maintained);
  std::vector<PackageName> out;
  out.reserve(mr.count());
  mr.for_each([&](std::size_t i) {
    out.push_back(s.name_of(static_cast<PackageId>(i)));
  });
  return out;
}

std::vector<MaintainerId> implicitly_trusted_maintainers(const ReachIndex& idx,
                                                         const PackageName& p) {
  const Snapshot& s = idx.snapshot();
  auto id = s.id_of(p);
  if (!id) throw NotFoundError("package not in snapshot: " + p);
  std::set<MaintainerId> itm;
  idx.itp_bits(*id).for_each([&](std::size_t q) {
    const auto& ms = s.maintainers_of(static_cast<PackageId>(q));
    itm.insert(ms.begin(), ms.end());
  });
  return {itm.begin(), itm.end()};
}

double average_itm(const ReachIndex& idx, std::optional<std::size_t> top_k) {
  const Snapshot& s = idx.snapshot();
  const std::size_t n = s.package_count();
  if (n == 0 || (top_k && *top_k == 0))
    throw UndefinedStatError("average ITM over empty scope");

  std::vector<PackageId> scope(n);
  for (PackageId p = 0; p < n; ++p) scope[p] = p;
  if (top_k && *top_k < n) {
    // Largest |PR| first; id order is name order, which settles ties.
    std::stable_sort(scope.begin(), scope.end(), [&](PackageId a, PackageId b) {
      return idx.reach_size(a) > idx.reach_size(b);
    });
    scope.resize(*top_k);
  }
  DynBitset scope_mask(n);
  for (PackageId p : scope) scope_mask.set(p);

  // Sum |ITM(p)| over the scope by counting (p, m) incidences from the
  // maintainer side: m in ITM(p) iff p in MR(m).
  std::size_t sum = 0;
  for (const auto& [m, pkgs] : maintainer_packages(s))
    sum += maintainer_reach_bits(idx, pkgs).intersect_count(scope_mask);
  return static_cast<double>(sum) / static_cast<double>(scope.size());
}

PackagesPerMaintainerStats packages_per_maintainer_stats(const Snapshot& s) {
  auto by_maintainer = maintainer_packages(s);
  if (by_maintainer.empty())
    throw UndefinedStatError("no maintainers in snapshot");
  PackagesPerMaintainerStats stats;
  std::size_t total = 0;
  for (const auto& [m, pkgs] : by_maintainer) {
    total += pkgs.size();
    ++stats.histogram[pkgs.size()];
  }
  stats.average =
      static_cast<double>(total) / static_cast<double>(by_maintainer.size());
  return stats;
}

CollusionPlan greedy_collusion(const ReachIndex& idx, std::size_t n,
                               int threads) {
  const Snapshot& s = idx.snapshot();
  const std::size_t pkg_count = s.package_count();

  auto by_maintainer = maintainer_packages(s);
  std::vector<const MaintainerId*> ids;
  std::vector<const std::vector<PackageId>*> maintained;
  ids.reserve(by_maintainer.size());
  for (const auto& [m, pkgs] : by_maintainer) {
    ids.push_back(&m);
    maintained.push_back(&pkgs);
  }

  CollusionPlan plan;
  if (n > ids.size()) {
    plan.truncated = true;
    n = ids.size();
  }
  if (n == 0) return plan;

  std::vector<DynBitset> mr(ids.size());
  parallel_for(ids.size(), threads, [&](std::size_t i) {
    mr[i] = maintainer_reach_bits(idx, *maintained[i]);
  });

  struct Entry {
    std::size_t gain;
    std::size_t round;
    std::size_t index;  // into ids, ascending = lexicographic id order
  };
  struct Worse {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.gain != b.gain) return a.gain < b.gain;
      return a.index > b.index;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, Worse> heap;
  for (std::size_t i = 0; i < ids.size(); ++i)
    heap.push({mr[i].count(), 0, i});

  DynBitset covered(pkg_count);
  std::size_t covered_count = 0;
  std::size_t round = 0;
  while (plan.chosen.size() < n) {
    Entry top = heap.top();
    heap.pop();
    if (top.round != round) {
      // Stale gains are upper bounds (coverage is submodular); refresh and
      // reconsider against the rest of the heap.
      top.gain = covered.union_count(mr[top.index]) - covered_count;
      top.round = round;
      heap.push(top);
      continue;
    }
    covered |= mr[top.index];
    covered_count = covered.count();
    plan.chosen.push_back(*ids[top.index]);
    plan.cumulative_coverage.push_back(covered_count);
    plan.covered_fraction.push_back(
        pkg_count == 0 ? 0.0
                       : static_cast<double>(covered_count) /
                             static_cast<double>(pkg_count));
    ++round;
  }
  return plan;
}

}  // namespace depgraph
