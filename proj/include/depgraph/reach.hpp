#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "depgraph/bitset.hpp"
#include "depgraph/snapshot.hpp"

namespace depgraph {

// Which edges feed the reach direction. RegularPlusDirectDev is the
// "modified reach": transitive regular dependents of p, plus, through each
// package that dev-depends on p, that package and its transitive regular
// dependents. Dev edges are traversed at most once, as the first inbound
// step; ITP-direction queries always use regular edges only.
enum class EdgeKind { Regular, RegularPlusDirectDev };

struct ReachIndexOptions {
  EdgeKind edge_kind = EdgeKind::Regular;
  // When the precomputed closure would exceed this, the index falls back to
  // per-query BFS with identical results.
  std::size_t memory_budget_bytes = std::size_t{1} << 29;
};

// Transitive reachability over a snapshot: SCC condensation with
// reverse-topological bitset accumulation, answering PR and ITP queries.
// Members of p's own cycle are in PR(p)/ITP(p); p itself never is.
// Immutable after build; the snapshot must outlive the index.
class ReachIndex {
 public:
  static ReachIndex build(const Snapshot& s, ReachIndexOptions options = {});

  const Snapshot& snapshot() const { return *snap_; }
  EdgeKind edge_kind() const { return options_.edge_kind; }
  bool using_fallback() const { return fallback_; }

  std::size_t scc_count() const { return scc_count_; }
  std::uint32_t scc_of(PackageId id) const { return scc_of_[id]; }

  // |PR(p)| (modified reach size under RegularPlusDirectDev).
  std::size_t reach_size(PackageId id) const;
  // |ITP(p)|.
  std::size_t itp_size(PackageId id) const;

  // PR(p) as a bitset over package ids, own bit cleared.
  DynBitset reach_bits(PackageId id) const;
  // ITP(p) as a bitset, own bit cleared.
  DynBitset itp_bits(PackageId id) const;

 private:
  const Snapshot* snap_ = nullptr;
  ReachIndexOptions options_;
  bool fallback_ = false;

  std::vector<std::uint32_t> scc_of_;
  std::size_t scc_count_ = 0;

  // Indexed by SCC id; package-level bitsets including the SCC's own members.
  std::vector<DynBitset> anc_pkgs_;   // packages depending on the SCC
  std::vector<DynBitset> desc_pkgs_;  // packages the SCC depends on
  // Per package under RegularPlusDirectDev (reach differs within an SCC).
  std::vector<DynBitset> modified_;

  std::vector<std::size_t> reach_sizes_;
  std::vector<std::size_t> itp_sizes_;

  // Reverse adjacencies for the BFS fallback.
  std::vector<std::vector<PackageId>> reverse_deps_;
  std::vector<std::vector<PackageId>> reverse_dev_deps_;

  DynBitset bfs_collect(PackageId start, bool forward) const;
};

// --- spec operations -------------------------------------------------------

// PR(p): every package with a transitive dependency on p, sorted by name.
// Throws NotFoundError for packages outside the snapshot.
std::vector<PackageName> package_reach(const ReachIndex& idx,
                                       const PackageName& p);

// ITP(p): every package p transitively depends on, sorted by name.
std::vector<PackageName> implicitly_trusted_packages(const ReachIndex& idx,
                                                     const PackageName& p);

// Mean |PR(p)| over the snapshot. Throws UndefinedStatError when empty.
double average_package_reach(const ReachIndex& idx);

// threshold -> number of packages with |PR| >= threshold.
std::map<std::size_t, std::size_t> reach_distribution(
    const ReachIndex& idx, const std::vector<std::size_t>& thresholds);

// (|E_t| / |P_t|, mean |ITP|). Throws UndefinedStatError when empty.
std::pair<double, double> direct_and_transitive_averages(const ReachIndex& idx);

}  // namespace depgraph
