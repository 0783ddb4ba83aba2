#include "depgraph/ingest.hpp"

#include <algorithm>
#include <istream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace depgraph {

using nlohmann::json;

void IngestReport::merge(const IngestReport& other) {
  lines_total += other.lines_total;
  releases += other.releases;
  advisories += other.advisories;
  malformed_lines += other.malformed_lines;
  missing_timestamp += other.missing_timestamp;
  duplicate_releases += other.duplicate_releases;
  duplicate_advisories += other.duplicate_advisories;
  self_deps_dropped += other.self_deps_dropped;
  unparseable_versions += other.unparseable_versions;
  nonrange_constraints += other.nonrange_constraints;
  invalid_dep_names += other.invalid_dep_names;
  external_names.insert(external_names.end(), other.external_names.begin(),
                        other.external_names.end());
  warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
}

namespace {

// Reads "dependencies"-shaped objects. Constraints that do not parse as
// version ranges (git/file/url specifiers) become wildcards: the edge is
// what matters, not the version.
bool read_deps(const json& j, const char* key, const PackageName& self,
               std::map<PackageName, RangeConstraint>& out,
               IngestReport& report) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return true;
  if (!it->is_object()) return false;
  for (const auto& [dep, value] : it->items()) {
    if (!value.is_string()) return false;
    if (!is_valid_package_name(dep)) {
      ++report.invalid_dep_names;
      continue;
    }
    if (dep == self) {
      ++report.self_deps_dropped;
      continue;
    }
    std::string expr = value.get<std::string>();
    auto range = RangeConstraint::parse(expr);
    if (!range) {
      ++report.nonrange_constraints;
      range = RangeConstraint::any(expr);
    }
    out.emplace(dep, std::move(*range));
  }
  return true;
}

std::vector<MaintainerId> read_maintainers(const json& j, bool& ok) {
  std::vector<MaintainerId> out;
  ok = true;
  auto it = j.find("maintainers");
  if (it == j.end() || it->is_null()) return out;
  if (!it->is_array()) {
    ok = false;
    return out;
  }
  for (const auto& entry : *it) {
    if (entry.is_string() && !entry.get<std::string>().empty())
      out.push_back(entry.get<std::string>());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void finish_line_accounting(std::istream& in, std::size_t line_no) {
  if (in.bad()) throw IngestError("unreadable input stream", line_no);
}

void check_malformed_ratio(IngestReport& report) {
  if (report.lines_total > 0 &&
      report.malformed_lines * 10 > report.lines_total)
    report.warnings.push_back(
        "more than 10% of input lines were malformed (" +
        std::to_string(report.malformed_lines) + " of " +
        std::to_string(report.lines_total) + ")");
}

}  // namespace

std::vector<Release> parse_registry_stream(std::istream& in,
                                           IngestReport& report) {
  std::vector<Release> releases;
  // (package, raw version) -> index; duplicates keep the earliest record.
  std::unordered_map<std::string, std::size_t> seen;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    ++report.lines_total;

    json doc = json::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
      ++report.malformed_lines;
      continue;
    }
    if (!doc.contains("name") || !doc["name"].is_string() ||
        !is_valid_package_name(doc["name"].get<std::string>()) ||
        !doc.contains("version") || !doc["version"].is_string()) {
      ++report.malformed_lines;
      continue;
    }
    if (!doc.contains("time") || !doc["time"].is_string()) {
      ++report.missing_timestamp;
      ++report.malformed_lines;
      continue;
    }
    auto time = parse_rfc3339(doc["time"].get<std::string>());
    if (!time) {
      ++report.missing_timestamp;
      ++report.malformed_lines;
      continue;
    }

    Release r;
    r.package = doc["name"].get<std::string>();
    r.version_raw = doc["version"].get<std::string>();
    r.published_at = *time;
    r.version = Version::parse(r.version_raw);
    if (!r.version) ++report.unparseable_versions;

    bool maint_ok = true;
    r.maintainers = read_maintainers(doc, maint_ok);
    if (!maint_ok || !read_deps(doc, "dependencies", r.package, r.deps, report) ||
        !read_deps(doc, "devDependencies", r.package, r.dev_deps, report)) {
      ++report.malformed_lines;
      continue;
    }

    std::string key = r.package + "\n" + r.version_raw;
    auto [it, inserted] = seen.emplace(key, releases.size());
    if (inserted) {
      releases.push_back(std::move(r));
      ++report.releases;
    } else {
      ++report.duplicate_releases;
      if (r.published_at < releases[it->second].published_at)
        releases[it->second] = std::move(r);
    }
  }
  finish_line_accounting(in, line_no);
  check_malformed_ratio(report);
  return releases;
}

Corpus parse_registry(std::istream& in, IngestReport* report) {
  IngestReport local;
  IngestReport& rep = report ? *report : local;
  Corpus corpus = Corpus::from_parts(parse_registry_stream(in, rep), {});
  rep.external_names = corpus.external_names();
  return corpus;
}

std::vector<Advisory> parse_advisories(std::istream& in, IngestReport& report) {
  std::vector<Advisory> advisories;
  std::unordered_set<std::string> seen_ids;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    ++report.lines_total;

    json doc = json::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
      ++report.malformed_lines;
      continue;
    }
    if (!doc.contains("id") || !doc["id"].is_string() ||
        doc["id"].get<std::string>().empty() || !doc.contains("package") ||
        !doc["package"].is_string() ||
        !is_valid_package_name(doc["package"].get<std::string>())) {
      ++report.malformed_lines;
      continue;
    }
    if (!doc.contains("published") || !doc["published"].is_string()) {
      ++report.missing_timestamp;
      ++report.malformed_lines;
      continue;
    }
    auto published = parse_rfc3339(doc["published"].get<std::string>());
    if (!published) {
      ++report.missing_timestamp;
      ++report.malformed_lines;
      continue;
    }

    Advisory a;
    a.id = doc["id"].get<std::string>();
    a.package = doc["package"].get<std::string>();
    a.published_at = *published;

    if (doc.contains("affected") && doc["affected"].is_string()) {
      std::string expr = doc["affected"].get<std::string>();
      auto range = RangeConstraint::parse(expr);
      if (range)
        a.affected = std::move(*range);
      else
        ++report.nonrange_constraints;
    }
    if (doc.contains("patched") && doc["patched"].is_string()) {
      auto range = RangeConstraint::parse(doc["patched"].get<std::string>());
      if (range)
        a.patched_range = std::move(*range);
      else
        ++report.nonrange_constraints;  // stays unpatched rather than guessing
    }
    if (doc.contains("patched_time") && doc["patched_time"].is_string())
      a.patched_at = parse_rfc3339(doc["patched_time"].get<std::string>());

    if (!seen_ids.insert(a.id).second) {
      ++report.duplicate_advisories;
      continue;
    }
    advisories.push_back(std::move(a));
    ++report.advisories;
  }
  finish_line_accounting(in, line_no);
  check_malformed_ratio(report);
  return advisories;
}

}  // namespace depgraph
