#include "depgraph/mitigation.hpp"

#include <algorithm>
#include <cmath>

namespace depgraph {

namespace {

// Residual averages shrink by exactly the vetted entity's reach: the pairs
// (p, q) with trusted q in ITP(p) number sum over q in T of |PR(q)| by the
// reach duality, and the maintainer version rests on m in ITM(p) iff
// p in MR(m) the same way.
std::vector<CurvePoint> residual_curve(std::size_t n, std::size_t base_sum,
                                       const std::vector<std::size_t>& gains,
                                       std::size_t k_max) {
  std::vector<CurvePoint> out;
  out.reserve(k_max + 1);
  std::size_t removed = 0;
  for (std::size_t k = 0; k <= k_max; ++k) {
    if (k > 0) removed += gains[k - 1];
    out.push_back(
        {k, static_cast<double>(base_sum - removed) / static_cast<double>(n)});
  }
  return out;
}

}  // namespace

std::vector<CurvePoint> trusted_package_curve(const ReachIndex& idx,
                                              std::size_t k_max) {
  const Snapshot& s = idx.snapshot();
  const std::size_t n = s.package_count();
  if (n == 0) throw UndefinedStatError("trusted-package curve of empty snapshot");
  k_max = std::min(k_max, n);

  std::vector<PackageId> order(n);
  for (PackageId p = 0; p < n; ++p) order[p] = p;
  std::stable_sort(order.begin(), order.end(), [&](PackageId a, PackageId b) {
    return idx.reach_size(a) > idx.reach_size(b);
  });

  std::size_t base_sum = 0;
  for (PackageId p = 0; p < n; ++p) base_sum += idx.itp_size(p);
  std::vector<std::size_t> gains(k_max);
  for (std::size_t k = 0; k < k_max; ++k) gains[k] = idx.reach_size(order[k]);
  return residual_curve(n, base_sum, gains, k_max);
}

std::vector<CurvePoint> trusted_maintainer_curve(const ReachIndex& idx,
                                                 std::size_t k_max,
                                                 VetStrategy strategy) {
  const Snapshot& s = idx.snapshot();
  const std::size_t n = s.package_count();
  if (n == 0)
    throw UndefinedStatError("trusted-maintainer curve of empty snapshot");

  auto by_maintainer = maintainer_packages(s);
  std::vector<const MaintainerId*> ids;
  std::vector<std::size_t> mr_sizes;
  for (const auto& [m, pkgs] : by_maintainer) {
    ids.push_back(&m);
    mr_sizes.push_back(maintainer_reach_bits(idx, pkgs).count());
  }
  k_max = std::min(k_max, ids.size());

  std::vector<std::size_t> order(ids.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  if (strategy == VetStrategy::GreedyCoverage) {
    CollusionPlan plan = greedy_collusion(idx, k_max);
    order.clear();
    for (const MaintainerId& m : plan.chosen) {
      auto it = std::lower_bound(ids.begin(), ids.end(), m,
                                 [](const MaintainerId* a, const MaintainerId& b) {
                                   return *a < b;
                                 });
      order.push_back(static_cast<std::size_t>(it - ids.begin()));
    }
  } else {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return mr_sizes[a] > mr_sizes[b];
    });
  }

  // Base sum of |ITM(p)| over packages = sum of |MR(m)| over maintainers,
  // both counting (p, m) incidences.
  std::size_t base_sum = 0;
  for (std::size_t sz : mr_sizes) base_sum += sz;

  std::vector<std::size_t> gains(k_max);
  for (std::size_t k = 0; k < k_max; ++k) gains[k] = mr_sizes[order[k]];
  return residual_curve(n, base_sum, gains, k_max);
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n)
    throw UndefinedStatError("correlation needs at least two paired samples");
  // Single-pass co-moment form; the two-pass oracle lives in the tests.
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    syy += y[i] * y[i];
    sxy += x[i] * y[i];
  }
  const double dn = static_cast<double>(n);
  double vx = sxx - sx * sx / dn;
  double vy = syy - sy * sy / dn;
  if (vx <= 0.0 || vy <= 0.0)
    throw UndefinedStatError("correlation undefined: zero variance");
  return (sxy - sx * sy / dn) / std::sqrt(vx * vy);
}

Correlation itp_vulnerability_correlation(const ReachIndex& idx,
                                          const Corpus& corpus) {
  const Snapshot& s = idx.snapshot();
  const std::size_t n = s.package_count();
  if (n < 2)
    throw UndefinedStatError("correlation needs at least two packages");

  std::vector<double> x(n), y(n, 0.0);
  for (PackageId p = 0; p < n; ++p) x[p] = static_cast<double>(idx.itp_size(p));
  // An advisory against q counts for every p with q in ITP(p) or q == p,
  // i.e. for q itself and everything in PR(q).
  for (const Advisory& a : corpus.advisories()) {
    auto q = s.id_of(a.package);
    if (!q) continue;
    y[*q] += 1.0;
    idx.reach_bits(*q).for_each([&](std::size_t p) { y[p] += 1.0; });
  }
  return {pearson(x, y), n,
          "advisories counted against every package whose closed dependency "
          "set ITP(p) + {p} contains the advised package"};
}

}  // namespace depgraph
