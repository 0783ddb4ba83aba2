#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "depgraph/corpus.hpp"

namespace depgraph {

// Unrecoverable stream failure during parsing; carries the line number.
struct IngestError : std::runtime_error {
  explicit IngestError(const std::string& msg, std::size_t line)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ")"),
        line_number(line) {}
  std::size_t line_number;
};

struct IngestReport {
  std::size_t lines_total = 0;
  std::size_t releases = 0;
  std::size_t advisories = 0;
  std::size_t malformed_lines = 0;       // skipped registry/advisory lines
  std::size_t missing_timestamp = 0;     // subset of malformed_lines
  std::size_t duplicate_releases = 0;    // same (package, version), later drop
  std::size_t duplicate_advisories = 0;  // same id, later drop
  std::size_t self_deps_dropped = 0;
  std::size_t unparseable_versions = 0;  // kept, excluded from patch ordering
  std::size_t nonrange_constraints = 0;  // git/file/url specifiers -> wildcard
  std::size_t invalid_dep_names = 0;     // dep entries dropped, bad name
  std::vector<PackageName> external_names;
  std::vector<std::string> warnings;

  void merge(const IngestReport& other);
};

// One Release per (package, version); duplicates keep the earliest
// published_at, self-dependencies are dropped, malformed lines are counted
// and skipped (a warning is recorded when they exceed 10%).
std::vector<Release> parse_registry_stream(std::istream& in, IngestReport& report);

// Registry stream -> Corpus with no advisories.
Corpus parse_registry(std::istream& in, IngestReport* report = nullptr);

// Records missing any of id/package/published are skipped and counted;
// duplicate ids keep the first occurrence.
std::vector<Advisory> parse_advisories(std::istream& in, IngestReport& report);

}  // namespace depgraph
