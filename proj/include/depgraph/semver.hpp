#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace depgraph {

// A SemVer 2.0.0 version. Parsing is npm-lenient: a leading 'v' or '=' is
// stripped, missing minor/patch components are filled with 0, and numeric
// prerelease identifiers may carry leading zeros (compared numerically).
// Build metadata is kept but ignored in ordering.
struct Version {
  std::uint64_t major = 0;
  std::uint64_t minor = 0;
  std::uint64_t patch = 0;
  std::vector<std::string> prerelease;  // empty means a full release
  std::string build;

  static std::optional<Version> parse(std::string_view text);

  // SemVer precedence: <0 if *this < other, 0 if equal, >0 otherwise.
  int compare(const Version& other) const;

  bool same_core(const Version& other) const {
    return major == other.major && minor == other.minor && patch == other.patch;
  }

  // Canonical "M.m.p[-pre]" form; build metadata is dropped.
  std::string str() const;

  bool operator==(const Version& o) const { return compare(o) == 0; }
  bool operator!=(const Version& o) const { return compare(o) != 0; }
  bool operator<(const Version& o) const { return compare(o) < 0; }
  bool operator<=(const Version& o) const { return compare(o) <= 0; }
  bool operator>(const Version& o) const { return compare(o) > 0; }
  bool operator>=(const Version& o) const { return compare(o) >= 0; }
};

int version_compare(const Version& a, const Version& b);

// An npm-style version range: a disjunction ("||") of comparator
// conjunctions. Supports exact versions, ^, ~, > >= < <= =, hyphen ranges
// and x/* wildcards. Sugar is desugared at parse time, so the canonical
// string of "^1.2.3" is ">=1.2.3 <2.0.0-0".
class RangeConstraint {
 public:
  enum class Op { Eq, Gt, Ge, Lt, Le };

  struct Comparator {
    Op op = Op::Eq;
    Version ver;
    bool operator==(const Comparator& o) const {
      return op == o.op && ver.compare(o.ver) == 0 &&
             ver.prerelease == o.ver.prerelease;
    }
  };

  // One conjunction; an empty comparator list matches any non-prerelease
  // version ("*").
  using AndSet = std::vector<Comparator>;

  static std::optional<RangeConstraint> parse(std::string_view expression);
  // Universal range; `raw` preserves the original spelling of constraints
  // that are not version ranges (git/file/url) but still create an edge.
  static RangeConstraint any(std::string raw = "*");
  static RangeConstraint exactly(const Version&);  // "=v"

  // npm semantics: a version with a prerelease tag satisfies a conjunction
  // only if some comparator in it carries a prerelease on the same
  // (major, minor, patch) triple.
  bool satisfies(const Version& v) const;

  const std::string& str() const { return canonical_; }
  const std::string& raw() const { return raw_; }

  bool operator==(const RangeConstraint& o) const {
    return canonical_ == o.canonical_;
  }

 private:
  std::vector<AndSet> alternatives_;
  std::string canonical_;
  std::string raw_;

  void finalize(std::string raw);
};

bool range_satisfies(const RangeConstraint& r, const Version& v);

}  // namespace depgraph
