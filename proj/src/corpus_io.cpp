#include "depgraph/corpus_io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "depgraph/ingest.hpp"

namespace depgraph {

using nlohmann::json;

namespace {

constexpr const char* kMagicPrefix = "#depgraph-corpus v";
constexpr int kFormatVersion = 1;
constexpr const char* kReleasesMarker = "#releases";
constexpr const char* kAdvisoriesMarker = "#advisories";

json deps_to_json(const std::map<PackageName, RangeConstraint>& deps) {
  json j = json::object();
  for (const auto& [name, range] : deps) j[name] = range.raw();
  return j;
}

}  // namespace

void save_corpus(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CorpusFormatError("cannot open for writing: " + path);

  out << kMagicPrefix << kFormatVersion << "\n";
  out << kReleasesMarker << "\n";
  for (const Release& r : corpus.releases()) {
    json j;
    j["name"] = r.package;
    j["version"] = r.version_raw;
    j["time"] = format_rfc3339(r.published_at);
    j["dependencies"] = deps_to_json(r.deps);
    j["devDependencies"] = deps_to_json(r.dev_deps);
    j["maintainers"] = r.maintainers;
    out << j.dump() << "\n";
  }
  out << kAdvisoriesMarker << "\n";
  for (const Advisory& a : corpus.advisories()) {
    json j;
    j["id"] = a.id;
    j["package"] = a.package;
    j["published"] = format_rfc3339(a.published_at);
    j["affected"] = a.affected.raw();
    j["patched"] = a.patched_range ? json(a.patched_range->raw()) : json(nullptr);
    j["patched_time"] =
        a.patched_at ? json(format_rfc3339(*a.patched_at)) : json(nullptr);
    out << j.dump() << "\n";
  }
  if (!out) throw CorpusFormatError("write failed: " + path);
}

Corpus load_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusFormatError("cannot open corpus file: " + path);

  std::string line;
  if (!std::getline(in, line) || line.rfind(kMagicPrefix, 0) != 0)
    throw CorpusFormatError("not a corpus file (bad magic header): " + path);
  int version = 0;
  try {
    version = std::stoi(line.substr(std::string(kMagicPrefix).size()));
  } catch (const std::exception&) {
    throw CorpusFormatError("corrupt version in corpus header: " + path);
  }
  if (version != kFormatVersion)
    throw CorpusFormatError("unsupported corpus format version " +
                            std::to_string(version) + " (expected " +
                            std::to_string(kFormatVersion) + ")");

  if (!std::getline(in, line) || line != kReleasesMarker)
    throw CorpusFormatError("missing releases section: " + path);
  std::stringstream releases_section, advisories_section;
  bool in_advisories = false;
  while (std::getline(in, line)) {
    if (line == kAdvisoriesMarker) {
      in_advisories = true;
      continue;
    }
    (in_advisories ? advisories_section : releases_section) << line << "\n";
  }
  if (!in_advisories)
    throw CorpusFormatError("missing advisories section: " + path);

  // The same validators as ingestion; a canonical file parses cleanly.
  IngestReport report;
  std::vector<Release> releases = parse_registry_stream(releases_section, report);
  std::vector<Advisory> advisories = parse_advisories(advisories_section, report);
  if (report.malformed_lines > 0 || report.duplicate_releases > 0 ||
      report.duplicate_advisories > 0)
    throw CorpusFormatError("corrupt corpus file: " + path);
  return Corpus::from_parts(std::move(releases), std::move(advisories));
}

std::string file_checksum_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusFormatError("cannot open for checksum: " + path);
  std::uint64_t h = 14695981039346656037ull;
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
    if (!in) break;
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

}  // namespace depgraph
