#pragma once

// Shared corpus builders for the test suites.

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "depgraph/corpus.hpp"
#include "depgraph/reach.hpp"
#include "depgraph/snapshot.hpp"

namespace fixtures {

using namespace depgraph;

inline Timestamp ts(std::string text) {
  if (text.size() == 10) text += "T00:00:00Z";
  auto t = parse_rfc3339(text);
  if (!t) throw std::runtime_error("bad fixture timestamp: " + text);
  return *t;
}

using DepList = std::vector<std::pair<std::string, std::string>>;

inline Release rel(std::string pkg, std::string ver, const std::string& time,
                   DepList deps = {}, std::vector<std::string> maintainers = {},
                   DepList dev_deps = {}) {
  Release r;
  r.package = std::move(pkg);
  r.version_raw = ver;
  r.version = Version::parse(ver);
  r.published_at = ts(time);
  for (auto& [name, range] : deps) {
    auto parsed = RangeConstraint::parse(range);
    r.deps.emplace(name, parsed ? *parsed : RangeConstraint::any(range));
  }
  for (auto& [name, range] : dev_deps) {
    auto parsed = RangeConstraint::parse(range);
    r.dev_deps.emplace(name, parsed ? *parsed : RangeConstraint::any(range));
  }
  r.maintainers = std::move(maintainers);
  std::sort(r.maintainers.begin(), r.maintainers.end());
  return r;
}

inline Advisory adv(std::string id, std::string pkg, const std::string& published,
                    const std::string& affected = "",
                    const std::string& patched_range = "",
                    const std::string& patched_time = "") {
  Advisory a;
  a.id = std::move(id);
  a.package = std::move(pkg);
  a.published_at = ts(published);
  if (!affected.empty()) a.affected = *RangeConstraint::parse(affected);
  if (!patched_range.empty())
    a.patched_range = *RangeConstraint::parse(patched_range);
  if (!patched_time.empty()) a.patched_at = ts(patched_time);
  return a;
}

// Zero-padded names make snapshot ids equal adjacency indices.
inline std::string node_name(std::size_t i) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "p%04zu", i);
  return buf;
}

// A corpus whose snapshot at/after 2017-01-01 is exactly the given digraph
// (edges are dependent -> dependee index pairs). One maintainer "m<i>" per
// package unless shared_maintainers supplies an explicit assignment.
inline Corpus graph_corpus(
    std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
    const std::vector<std::vector<std::string>>& maintainers = {}) {
  std::vector<DepList> deps(n);
  for (auto [from, to] : edges)
    deps[from].push_back({node_name(to), "*"});
  std::vector<Release> releases;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> ms =
        maintainers.empty() ? std::vector<std::string>{"m" + node_name(i)}
                            : maintainers[i];
    releases.push_back(rel(node_name(i), "1.0.0", "2016-06-01", deps[i], ms));
  }
  return Corpus::from_parts(std::move(releases), {});
}

inline Snapshot graph_snapshot(const Corpus& corpus) {
  return build_snapshot(corpus, ts("2017-01-01"));
}

// Figure fixtures: a 6-node star (everything depends on p0) and a 6-node
// diamond over p0..p3 with two isolated nodes.
inline Corpus star_corpus() {
  return graph_corpus(6, {{1, 0}, {2, 0}, {3, 0}, {4, 0}, {5, 0}});
}

inline Corpus diamond_corpus() {
  return graph_corpus(6, {{1, 0}, {2, 0}, {3, 1}, {3, 2}});
}

// chain: p0 -> p1 -> p2, sole maintainers ma, mb, mc.
inline Corpus chain_corpus() {
  return graph_corpus(3, {{0, 1}, {1, 2}},
                      {{"ma"}, {"mb"}, {"mc"}});
}

// Three roots with distinct maintainers and six leaves; the greedy pair
// (mg, ma) covers 5 packages while (ma, mb) covers all 6.
inline Corpus suboptimal_corpus() {
  std::vector<Release> releases = {
      rel("e1", "1.0.0", "2016-06-01", {{"ra", "*"}}, {"zz"}),
      rel("e2", "1.0.0", "2016-06-01", {{"ra", "*"}, {"rg", "*"}}, {"zz"}),
      rel("e3", "1.0.0", "2016-06-01", {{"ra", "*"}, {"rg", "*"}}, {"zz"}),
      rel("e4", "1.0.0", "2016-06-01", {{"rb", "*"}, {"rg", "*"}}, {"zz"}),
      rel("e5", "1.0.0", "2016-06-01", {{"rb", "*"}, {"rg", "*"}}, {"zz"}),
      rel("e6", "1.0.0", "2016-06-01", {{"rb", "*"}}, {"zz"}),
      rel("ra", "1.0.0", "2016-06-01", {}, {"ma"}),
      rel("rb", "1.0.0", "2016-06-01", {}, {"mb"}),
      rel("rg", "1.0.0", "2016-06-01", {}, {"mg"}),
  };
  return Corpus::from_parts(std::move(releases), {});
}

// Random digraph with a density knob; self-loops excluded, cycles allowed.
inline std::vector<std::pair<std::size_t, std::size_t>> random_edges(
    std::mt19937& rng, std::size_t n, double density) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::bernoulli_distribution coin(density);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && coin(rng)) edges.push_back({i, j});
  return edges;
}

// Maintainer pool assignment: each package gets 1..3 maintainers from a pool.
inline std::vector<std::vector<std::string>> random_maintainers(
    std::mt19937& rng, std::size_t packages, std::size_t pool) {
  std::vector<std::vector<std::string>> out(packages);
  std::uniform_int_distribution<std::size_t> count(1, 3);
  std::uniform_int_distribution<std::size_t> pick(0, pool - 1);
  for (auto& ms : out) {
    std::size_t k = count(rng);
    for (std::size_t i = 0; i < k; ++i) {
      char buf[16];
      std::snprintf(buf, sizeof(buf), "m%03zu", pick(rng));
      ms.push_back(buf);
    }
    std::sort(ms.begin(), ms.end());
    ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
  }
  return out;
}

}  // namespace fixtures
