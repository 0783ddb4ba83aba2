#include "depgraph/reach.hpp"

#include <algorithm>

#include "depgraph/model.hpp"

namespace depgraph {

namespace {

constexpr std::uint32_t kUnvisited = ~std::uint32_t{0};

// Iterative Tarjan. SCC ids are assigned in pop order, which is reverse
// topological on the condensation: an edge u->w between distinct SCCs
// implies scc(w) < scc(u).
struct SccResult {
  std::vector<std::uint32_t> scc_of;
  std::size_t count = 0;
};

SccResult tarjan_scc(const Snapshot& s) {
  const std::size_t n = s.package_count();
  SccResult res;
  res.scc_of.assign(n, kUnvisited);

  std::vector<std::uint32_t> index(n, kUnvisited);
  std::vector<std::uint32_t> lowlink(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::uint32_t> stack;
  std::uint32_t next_index = 0;

  struct Frame {
    std::uint32_t v;
    std::size_t child;
  };
  std::vector<Frame> dfs;

  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    dfs.push_back({root, 0});
    while (!dfs.empty()) {
      Frame& f = dfs.back();
      const std::uint32_t v = f.v;
      if (f.child == 0) {
        index[v] = lowlink[v] = next_index++;
        stack.push_back(v);
        on_stack[v] = true;
      }
      const auto& edges = s.deps_of(v);
      bool descended = false;
      while (f.child < edges.size()) {
        std::uint32_t w = edges[f.child++];
        if (index[w] == kUnvisited) {
          dfs.push_back({w, 0});
          descended = true;
          break;
        }
        if (on_stack[w]) lowlink[v] = std::min(lowlink[v], index[w]);
      }
      if (descended) continue;
      if (lowlink[v] == index[v]) {
        std::uint32_t scc = static_cast<std::uint32_t>(res.count++);
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          res.scc_of[w] = scc;
        } while (w != v);
      }
      dfs.pop_back();
      if (!dfs.empty()) {
        Frame& parent = dfs.back();
        lowlink[parent.v] = std::min(lowlink[parent.v], lowlink[v]);
      }
    }
  }
  return res;
}

}  // namespace

ReachIndex ReachIndex::build(const Snapshot& s, ReachIndexOptions options) {
  ReachIndex idx;
  idx.snap_ = &s;
  idx.options_ = options;

  const std::size_t n = s.package_count();
  SccResult scc = tarjan_scc(s);
  idx.scc_of_ = std::move(scc.scc_of);
  idx.scc_count_ = scc.count;

  const std::size_t words = (n + 63) / 64;
  std::size_t needed = 2 * idx.scc_count_ * words * 8;
  if (options.edge_kind == EdgeKind::RegularPlusDirectDev)
    needed += n * words * 8;
  idx.fallback_ = needed > options.memory_budget_bytes;

  if (idx.fallback_) {
    idx.reverse_deps_.resize(n);
    idx.reverse_dev_deps_.resize(n);
    for (std::uint32_t u = 0; u < n; ++u) {
      for (std::uint32_t w : s.deps_of(u)) idx.reverse_deps_[w].push_back(u);
      for (std::uint32_t w : s.dev_deps_of(u))
        idx.reverse_dev_deps_[w].push_back(u);
    }
    for (auto& v : idx.reverse_deps_) std::sort(v.begin(), v.end());
    for (auto& v : idx.reverse_dev_deps_) std::sort(v.begin(), v.end());
    return idx;
  }

  // Condensation adjacency, deduplicated.
  std::vector<std::vector<std::uint32_t>> cond_out(idx.scc_count_);
  std::vector<std::vector<std::uint32_t>> cond_in(idx.scc_count_);
  for (std::uint32_t u = 0; u < n; ++u) {
    std::uint32_t cu = idx.scc_of_[u];
    for (std::uint32_t w : s.deps_of(u)) {
      std::uint32_t cw = idx.scc_of_[w];
      if (cu != cw) {
        cond_out[cu].push_back(cw);
        cond_in[cw].push_back(cu);
      }
    }
  }
  for (auto& v : cond_out) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  for (auto& v : cond_in) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }

  std::vector<DynBitset> member_mask(idx.scc_count_, DynBitset(n));
  for (std::uint32_t p = 0; p < n; ++p) member_mask[idx.scc_of_[p]].set(p);

  // Ascending SCC ids = sinks first: out-neighbors are already complete.
  idx.desc_pkgs_ = member_mask;
  for (std::uint32_t c = 0; c < idx.scc_count_; ++c)
    for (std::uint32_t succ : cond_out[c]) idx.desc_pkgs_[c] |= idx.desc_pkgs_[succ];

  // Descending = sources first: in-neighbors are already complete.
  idx.anc_pkgs_ = std::move(member_mask);
  for (std::uint32_t c = static_cast<std::uint32_t>(idx.scc_count_); c-- > 0;)
    for (std::uint32_t pred : cond_in[c]) idx.anc_pkgs_[c] |= idx.anc_pkgs_[pred];

  if (options.edge_kind == EdgeKind::RegularPlusDirectDev) {
    idx.modified_.reserve(n);
    for (std::uint32_t p = 0; p < n; ++p)
      idx.modified_.push_back(idx.anc_pkgs_[idx.scc_of_[p]]);
    for (std::uint32_t d = 0; d < n; ++d)
      for (std::uint32_t p : s.dev_deps_of(d))
        idx.modified_[p] |= idx.anc_pkgs_[idx.scc_of_[d]];
  }

  idx.reach_sizes_.resize(n);
  idx.itp_sizes_.resize(n);
  std::vector<std::size_t> anc_count(idx.scc_count_), desc_count(idx.scc_count_);
  for (std::uint32_t c = 0; c < idx.scc_count_; ++c) {
    anc_count[c] = idx.anc_pkgs_[c].count();
    desc_count[c] = idx.desc_pkgs_[c].count();
  }
  for (std::uint32_t p = 0; p < n; ++p) {
    idx.itp_sizes_[p] = desc_count[idx.scc_of_[p]] - 1;
    if (options.edge_kind == EdgeKind::RegularPlusDirectDev)
      idx.reach_sizes_[p] =
          idx.modified_[p].count() - (idx.modified_[p].test(p) ? 1 : 0);
    else
      idx.reach_sizes_[p] = anc_count[idx.scc_of_[p]] - 1;
  }
  return idx;
}

DynBitset ReachIndex::bfs_collect(PackageId start, bool forward) const {
  const std::size_t n = snap_->package_count();
  DynBitset visited(n);
  std::vector<PackageId> queue;

  auto push = [&](PackageId v) {
    if (!visited.test(v)) {
      visited.set(v);
      queue.push_back(v);
    }
  };
  push(start);
  if (!forward && options_.edge_kind == EdgeKind::RegularPlusDirectDev)
    for (PackageId d : reverse_dev_deps_[start]) push(d);

  for (std::size_t head = 0; head < queue.size(); ++head) {
    PackageId v = queue[head];
    const auto& next = forward ? snap_->deps_of(v) : reverse_deps_[v];
    for (PackageId w : next) push(w);
  }
  visited.clear(start);
  return visited;
}

DynBitset ReachIndex::reach_bits(PackageId id) const {
  if (fallback_) return bfs_collect(id, /*forward=*/false);
  DynBitset bits = options_.edge_kind == EdgeKind::RegularPlusDirectDev
                       ? modified_[id]
                       : anc_pkgs_[scc_of_[id]];
  bits.clear(id);
  return bits;
}

DynBitset ReachIndex::itp_bits(PackageId id) const {
  if (fallback_) return bfs_collect(id, /*forward=*/true);
  DynBitset bits = desc_pkgs_[scc_of_[id]];
  bits.clear(id);
  return bits;
}

std::size_t ReachIndex::reach_size(PackageId id) const {
  if (fallback_) return reach_bits(id).count();
  return reach_sizes_[id];
}

std::size_t ReachIndex::itp_size(PackageId id) const {
  if (fallback_) return itp_bits(id).count();
  return itp_sizes_[id];
}

namespace {

std::vector<PackageName> names_of(const Snapshot& s, const DynBitset& bits) {
  std::vector<PackageName> out;
  out.reserve(bits.count());
  bits.for_each([&](std::size_t i) {
    out.push_back(s.name_of(static_cast<PackageId>(i)));
  });
  return out;  // ids ascend in name order
}

PackageId require_package(const ReachIndex& idx, const PackageName& p) {
  auto id = idx.snapshot().id_of(p);
  if (!id) throw NotFoundError("package not in snapshot: " + p);
  return *id;
}

}  // namespace

std::vector<PackageName> package_reach(const ReachIndex& idx,
                                       const PackageName& p) {
  return names_of(idx.snapshot(), idx.reach_bits(require_package(idx, p)));
}

std::vector<PackageName> implicitly_trusted_packages(const ReachIndex& idx,
                                                     const PackageName& p) {
  return names_of(idx.snapshot(), idx.itp_bits(require_package(idx, p)));
}

double average_package_reach(const ReachIndex& idx) {
  const std::size_t n = idx.snapshot().package_count();
  if (n == 0) throw UndefinedStatError("average package reach of empty snapshot");
  std::size_t sum = 0;
  for (PackageId p = 0; p < n; ++p) sum += idx.reach_size(p);
  return static_cast<double>(sum) / static_cast<double>(n);
}

std::map<std::size_t, std::size_t> reach_distribution(
    const ReachIndex& idx, const std::vector<std::size_t>& thresholds) {
  std::map<std::size_t, std::size_t> out;
  for (std::size_t t : thresholds) out[t] = 0;
  const std::size_t n = idx.snapshot().package_count();
  for (PackageId p = 0; p < n; ++p) {
    std::size_t r = idx.reach_size(p);
    for (auto& [t, count] : out)
      if (r >= t) ++count;
  }
  return out;
}

std::pair<double, double> direct_and_transitive_averages(const ReachIndex& idx) {
  const Snapshot& s = idx.snapshot();
  const std::size_t n = s.package_count();
  if (n == 0) throw UndefinedStatError("averages of empty snapshot");
  std::size_t itp_sum = 0;
  for (PackageId p = 0; p < n; ++p) itp_sum += idx.itp_size(p);
  return {static_cast<double>(s.edge_count()) / static_cast<double>(n),
          static_cast<double>(itp_sum) / static_cast<double>(n)};
}

}  // namespace depgraph
