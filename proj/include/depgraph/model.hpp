#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "depgraph/semver.hpp"
#include "depgraph/time_utils.hpp"

namespace depgraph {

using PackageName = std::string;
using MaintainerId = std::string;

// npm naming: non-empty, no whitespace, at most one '/' and only after a
// leading "@scope" segment.
bool is_valid_package_name(std::string_view name);

// Thrown when a named package or maintainer does not exist in the queried
// snapshot. The CLI maps this to exit code 3.
struct NotFoundError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown for statistics with an empty domain (average over zero packages,
// correlation with zero variance). CLI exit code 4.
struct UndefinedStatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One published version of a package. `version` is absent when the raw
// string resists even normalized parsing; such releases still count for
// package existence and maintainer data but are excluded from patch-ordering
// logic.
struct Release {
  PackageName package;
  std::string version_raw;
  std::optional<Version> version;
  Timestamp published_at = 0;
  std::map<PackageName, RangeConstraint> deps;
  std::map<PackageName, RangeConstraint> dev_deps;
  std::vector<MaintainerId> maintainers;  // sorted, unique
};

// A vulnerability report. patched_at and patched_range are independent:
// either may be absent, and a patch may predate publication.
struct Advisory {
  std::string id;
  PackageName package;
  Timestamp published_at = 0;
  RangeConstraint affected = RangeConstraint::any();
  std::optional<Timestamp> patched_at;
  std::optional<RangeConstraint> patched_range;
};

}  // namespace depgraph
