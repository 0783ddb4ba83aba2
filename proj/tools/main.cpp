#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "depgraph/advisories.hpp"
#include "depgraph/corpus_io.hpp"
#include "depgraph/fetch.hpp"
#include "depgraph/ingest.hpp"
#include "depgraph/maintainers.hpp"
#include "depgraph/mitigation.hpp"
#include "depgraph/parallel.hpp"
#include "depgraph/reach.hpp"

namespace {

using namespace depgraph;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNotFound = 3;
constexpr int kExitUndefined = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

// "2015" is shorthand for 2015-01-01T00:00:00Z.
Timestamp parse_time_flag(const std::string& s) {
  if (s.size() == 4 && std::all_of(s.begin(), s.end(), ::isdigit))
    return year_start(std::stoi(s));
  auto t = parse_rfc3339(s);
  if (!t) throw UsageError("invalid timestamp (RFC 3339 or YYYY): " + s);
  return *t;
}

Cadence parse_cadence(const std::string& s) {
  if (s == "yearly") return Cadence::Yearly;
  if (s == "monthly") return Cadence::Monthly;
  throw UsageError("invalid cadence: " + s + " (yearly|monthly)");
}

VulnMode parse_vuln_mode(const std::string& s) {
  if (s == "retroactive") return VulnMode::Retroactive;
  if (s == "strict") return VulnMode::Strict;
  throw UsageError("invalid advisory mode: " + s + " (retroactive|strict)");
}

MaintainerMode parse_maintainer_mode(const std::string& s) {
  if (s == "at-time") return MaintainerMode::AtTime;
  if (s == "lifetime") return MaintainerMode::LifetimeUnion;
  throw UsageError("invalid maintainer mode: " + s + " (at-time|lifetime)");
}

struct CsvFile {
  std::ofstream out;

  explicit CsvFile(const std::string& path) : out(path, std::ios::binary) {
    if (!out) throw UsageError("cannot open output file: " + path);
  }
  void comment(const std::string& text) { out << "# " << text << "\n"; }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << cells[i];
    }
    out << '\n';
  }
};

// --- ingest -----------------------------------------------------------------

struct IngestArgs {
  std::string registry;
  std::string advisories;
  std::string out;
};

int run_ingest(const IngestArgs& args) {
  std::ifstream reg(args.registry, std::ios::binary);
  if (!reg) {
    std::cerr << "error: cannot read registry file: " << args.registry << "\n";
    return kExitUsage;
  }
  IngestReport report;
  std::vector<Release> releases = parse_registry_stream(reg, report);

  std::vector<Advisory> advisories;
  if (!args.advisories.empty()) {
    std::ifstream adv(args.advisories, std::ios::binary);
    if (!adv) {
      std::cerr << "error: cannot read advisories file: " << args.advisories
                << "\n";
      return kExitUsage;
    }
    advisories = parse_advisories(adv, report);
  }

  Corpus corpus = Corpus::from_parts(std::move(releases), std::move(advisories));
  save_corpus(corpus, args.out);

  std::cout << "releases=" << report.releases << "\n"
            << "advisories=" << report.advisories << "\n"
            << "lines=" << report.lines_total << "\n"
            << "malformed=" << report.malformed_lines << "\n"
            << "duplicate_releases=" << report.duplicate_releases << "\n"
            << "duplicate_advisories=" << report.duplicate_advisories << "\n"
            << "self_deps_dropped=" << report.self_deps_dropped << "\n"
            << "unparseable_versions=" << report.unparseable_versions << "\n"
            << "nonrange_constraints=" << report.nonrange_constraints << "\n"
            << "external_names=" << corpus.external_names().size() << "\n";
  for (const PackageName& name : corpus.external_names())
    std::cout << "external: " << name << "\n";
  for (const std::string& w : report.warnings)
    std::cout << "warning: " << w << "\n";
  return kExitOk;
}

// --- evolve -----------------------------------------------------------------

const std::vector<std::string> kEvolveMetrics = {
    "packages", "maintainers", "avg-direct", "avg-itp",
    "avg-itm",  "vrr",         "vrr-per-10k", "vr-fraction"};

struct EvolveArgs {
  std::string corpus;
  std::string out;
  std::string cadence = "yearly";
  std::string metrics =
      "packages,maintainers,avg-direct,avg-itp,avg-itm,vrr,vr-fraction";
  std::string from, to;
  std::string advisory_mode = "retroactive";
  std::string maintainer_mode = "at-time";
  int threads = 1;
};

int run_evolve(const EvolveArgs& args) {
  std::vector<std::string> metrics;
  {
    std::stringstream ss(args.metrics);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      if (std::find(kEvolveMetrics.begin(), kEvolveMetrics.end(), item) ==
          kEvolveMetrics.end()) {
        std::ostringstream msg;
        msg << "unknown metric '" << item << "'; valid metrics:";
        for (const auto& m : kEvolveMetrics) msg << " " << m;
        throw UsageError(msg.str());
      }
      metrics.push_back(item);
    }
  }
  if (metrics.empty()) throw UsageError("no metrics requested");

  Corpus corpus = load_corpus(args.corpus);
  Cadence cadence = parse_cadence(args.cadence);
  VulnMode vuln_mode = parse_vuln_mode(args.advisory_mode);
  MaintainerMode maint_mode = parse_maintainer_mode(args.maintainer_mode);

  std::vector<Timestamp> boundaries;
  if (!corpus.empty() || (!args.from.empty() && !args.to.empty())) {
    Timestamp from = args.from.empty()
                         ? ceil_boundary(corpus.first_release_time(), cadence)
                         : parse_time_flag(args.from);
    Timestamp to = args.to.empty()
                       ? std::max(from, floor_boundary(corpus.last_event_time(),
                                                       cadence))
                       : parse_time_flag(args.to);
    boundaries = boundaries_in(from, to, cadence);
  }

  const bool needs_index =
      std::any_of(metrics.begin(), metrics.end(), [](const std::string& m) {
        return m == "avg-itp" || m == "avg-itm" || m == "vr-fraction";
      });

  std::vector<std::string> rows(boundaries.size());
  parallel_for(boundaries.size(), args.threads, [&](std::size_t i) {
    Snapshot snap = build_snapshot(corpus, boundaries[i], maint_mode);
    const bool empty = snap.package_count() == 0;
    ReachIndex idx;
    if (needs_index && !empty) idx = ReachIndex::build(snap);

    std::string line = format_rfc3339(boundaries[i]);
    for (const std::string& m : metrics) {
      line += ',';
      if (m == "packages") {
        line += std::to_string(snap.package_count());
      } else if (m == "maintainers") {
        line += std::to_string(maintainer_packages(snap).size());
      } else if (empty) {
        line += fmt6(0.0);  // averages over an empty snapshot print as zero
      } else if (m == "avg-direct") {
        line += fmt6(static_cast<double>(snap.edge_count()) /
                     static_cast<double>(snap.package_count()));
      } else if (m == "avg-itp") {
        line += fmt6(direct_and_transitive_averages(idx).second);
      } else if (m == "avg-itm") {
        line += fmt6(average_itm(idx));
      } else if (m == "vrr") {
        line += fmt6(vrr(snap, corpus, vuln_mode));
      } else if (m == "vrr-per-10k") {
        line += fmt6(vrr(snap, corpus, vuln_mode) * 10000.0);
      } else if (m == "vr-fraction") {
        line += fmt6(vulnerability_reach(idx, corpus, vuln_mode).fraction);
      }
    }
    rows[i] = std::move(line);
  });

  CsvFile csv(args.out);
  csv.comment("corpus=" + file_checksum_hex(args.corpus) +
              " cadence=" + args.cadence + " metrics=" + args.metrics +
              " advisory-mode=" + args.advisory_mode +
              " maintainer-mode=" + args.maintainer_mode);
  std::vector<std::string> header = {"at"};
  header.insert(header.end(), metrics.begin(), metrics.end());
  csv.row(header);
  for (const std::string& r : rows) csv.out << r << "\n";
  return kExitOk;
}

// --- reach ------------------------------------------------------------------

struct ReachArgs {
  std::string corpus;
  std::string at;
  std::string package;
  std::string distribution;
  std::string maintainer_mode = "at-time";
  int top = 0;
  bool dev = false;
  bool list = false;
};

int run_reach(const ReachArgs& args) {
  if (args.package.empty() && args.top == 0 && args.distribution.empty())
    throw UsageError("nothing to do: give --package, --top or --distribution");

  Corpus corpus = load_corpus(args.corpus);
  Snapshot snap = build_snapshot(corpus, parse_time_flag(args.at),
                                 parse_maintainer_mode(args.maintainer_mode));
  ReachIndexOptions options;
  options.edge_kind =
      args.dev ? EdgeKind::RegularPlusDirectDev : EdgeKind::Regular;
  ReachIndex idx = ReachIndex::build(snap, options);

  if (!args.package.empty()) {
    std::vector<PackageName> pr = package_reach(idx, args.package);
    std::cout << "package=" << args.package << "\n"
              << "reach=" << pr.size() << "\n";
    if (args.list)
      for (const PackageName& p : pr) std::cout << p << "\n";
  }

  if (args.top > 0) {
    std::vector<PackageId> order(snap.package_count());
    for (PackageId p = 0; p < order.size(); ++p) order[p] = p;
    std::stable_sort(order.begin(), order.end(), [&](PackageId a, PackageId b) {
      return idx.reach_size(a) > idx.reach_size(b);
    });
    std::size_t k = std::min<std::size_t>(args.top, order.size());
    for (std::size_t i = 0; i < k; ++i)
      std::cout << (i + 1) << " " << snap.name_of(order[i]) << " "
                << idx.reach_size(order[i]) << "\n";
  }

  if (!args.distribution.empty()) {
    std::vector<std::size_t> thresholds;
    std::stringstream ss(args.distribution);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        long long v = std::stoll(item);
        if (v <= 0) throw std::invalid_argument("not positive");
        thresholds.push_back(static_cast<std::size_t>(v));
      } catch (const std::exception&) {
        throw UsageError("invalid distribution threshold: " + item);
      }
    }
    for (const auto& [t, count] : reach_distribution(idx, thresholds))
      std::cout << t << " " << count << "\n";
  }
  return kExitOk;
}

// --- collude ----------------------------------------------------------------

struct ColludeArgs {
  std::string corpus;
  std::string at;
  std::string out;
  std::string maintainer_mode = "at-time";
  long long n = 0;
  int threads = 1;
};

int run_collude(const ColludeArgs& args) {
  if (args.n <= 0) throw UsageError("-n must be positive");

  Corpus corpus = load_corpus(args.corpus);
  Snapshot snap = build_snapshot(corpus, parse_time_flag(args.at),
                                 parse_maintainer_mode(args.maintainer_mode));
  ReachIndex idx = ReachIndex::build(snap);
  CollusionPlan plan =
      greedy_collusion(idx, static_cast<std::size_t>(args.n), args.threads);

  CsvFile csv(args.out);
  csv.comment("corpus=" + file_checksum_hex(args.corpus) + " at=" +
              format_rfc3339(snap.at()) + " n=" + std::to_string(args.n) +
              " maintainer-mode=" + args.maintainer_mode);
  csv.row({"step", "maintainer", "cumulative_coverage", "covered_fraction"});
  for (std::size_t i = 0; i < plan.chosen.size(); ++i)
    csv.row({std::to_string(i + 1), plan.chosen[i],
             std::to_string(plan.cumulative_coverage[i]),
             fmt6(plan.covered_fraction[i])});
  if (plan.truncated)
    std::cerr << "note: plan truncated to " << plan.chosen.size()
              << " maintainers\n";
  return kExitOk;
}

// --- mitigate ---------------------------------------------------------------

struct MitigateArgs {
  std::string corpus;
  std::string at;
  std::string mode;
  std::string out;
  std::string strategy = "influence";
  std::string maintainer_mode = "at-time";
  long long k_max = 0;
};

int run_mitigate(const MitigateArgs& args) {
  if (args.mode != "packages" && args.mode != "maintainers")
    throw UsageError("invalid --mode: " + args.mode + " (packages|maintainers)");
  VetStrategy strategy;
  if (args.strategy == "influence")
    strategy = VetStrategy::ByInfluence;
  else if (args.strategy == "greedy")
    strategy = VetStrategy::GreedyCoverage;
  else
    throw UsageError("invalid --strategy: " + args.strategy +
                     " (influence|greedy)");
  if (args.k_max < 0) throw UsageError("--k-max must be >= 0");

  Corpus corpus = load_corpus(args.corpus);
  Snapshot snap = build_snapshot(corpus, parse_time_flag(args.at),
                                 parse_maintainer_mode(args.maintainer_mode));
  ReachIndex idx = ReachIndex::build(snap);

  std::vector<CurvePoint> curve =
      args.mode == "packages"
          ? trusted_package_curve(idx, static_cast<std::size_t>(args.k_max))
          : trusted_maintainer_curve(idx, static_cast<std::size_t>(args.k_max),
                                     strategy);

  CsvFile csv(args.out);
  csv.comment("corpus=" + file_checksum_hex(args.corpus) + " at=" +
              format_rfc3339(snap.at()) + " mode=" + args.mode + " k-max=" +
              std::to_string(args.k_max) + " strategy=" + args.strategy +
              " maintainer-mode=" + args.maintainer_mode);
  csv.row({"k", "residual_average"});
  for (const CurvePoint& pt : curve)
    csv.row({std::to_string(pt.k), fmt6(pt.value)});
  return kExitOk;
}

// --- fetch ------------------------------------------------------------------

struct FetchArgs {
  std::string endpoint;
  std::string out;
  long long since = -1;
  int page_limit = 1000;
};

int run_fetch(const FetchArgs& args) {
  FetchOptions options;
  options.endpoint = args.endpoint;
  if (args.since >= 0) options.since = args.since;
  options.page_limit = args.page_limit;

  FetchResult result = fetch_registry(options, args.out);
  std::cout << "docs=" << result.docs << "\n"
            << "releases=" << result.releases << "\n"
            << "last_seq=" << result.last_seq << "\n";
  if (!result.complete) {
    std::cerr << "error: fetch incomplete (network failure); partial file and "
                 "checkpoint retained\n";
    return 1;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Dependency-graph security analytics over package registry history"};
  app.require_subcommand(1);

  IngestArgs ingest_args;
  auto* ingest = app.add_subcommand(
      "ingest", "Parse registry/advisory files into a corpus");
  ingest->add_option("--registry", ingest_args.registry)->required();
  ingest->add_option("--advisories", ingest_args.advisories);
  ingest->add_option("--out", ingest_args.out)->required();

  EvolveArgs evolve_args;
  auto* evolve =
      app.add_subcommand("evolve", "Metric time series across snapshots");
  evolve->add_option("--corpus", evolve_args.corpus)->required();
  evolve->add_option("--cadence", evolve_args.cadence);
  evolve->add_option("--metrics", evolve_args.metrics);
  evolve->add_option("--from", evolve_args.from);
  evolve->add_option("--to", evolve_args.to);
  evolve->add_option("--advisory-mode", evolve_args.advisory_mode);
  evolve->add_option("--maintainer-mode", evolve_args.maintainer_mode);
  evolve->add_option("--threads", evolve_args.threads);
  evolve->add_option("--out", evolve_args.out)->required();

  ReachArgs reach_args;
  auto* reach = app.add_subcommand("reach", "Package reach queries");
  reach->add_option("--corpus", reach_args.corpus)->required();
  reach->add_option("--at", reach_args.at)->required();
  reach->add_option("--package", reach_args.package);
  reach->add_flag("--dev", reach_args.dev);
  reach->add_flag("--list", reach_args.list);
  reach->add_option("--top", reach_args.top);
  reach->add_option("--distribution", reach_args.distribution);
  reach->add_option("--maintainer-mode", reach_args.maintainer_mode);

  ColludeArgs collude_args;
  auto* collude =
      app.add_subcommand("collude", "Greedy maintainer collusion coverage");
  collude->add_option("--corpus", collude_args.corpus)->required();
  collude->add_option("--at", collude_args.at)->required();
  collude->add_option("-n", collude_args.n)->required();
  collude->add_option("--threads", collude_args.threads);
  collude->add_option("--maintainer-mode", collude_args.maintainer_mode);
  collude->add_option("--out", collude_args.out)->required();

  MitigateArgs mitigate_args;
  auto* mitigate =
      app.add_subcommand("mitigate", "Trusted package/maintainer curves");
  mitigate->add_option("--corpus", mitigate_args.corpus)->required();
  mitigate->add_option("--at", mitigate_args.at)->required();
  mitigate->add_option("--mode", mitigate_args.mode)->required();
  mitigate->add_option("--k-max", mitigate_args.k_max)->required();
  mitigate->add_option("--strategy", mitigate_args.strategy);
  mitigate->add_option("--maintainer-mode", mitigate_args.maintainer_mode);
  mitigate->add_option("--out", mitigate_args.out)->required();

  FetchArgs fetch_args;
  auto* fetch = app.add_subcommand(
      "fetch", "Stream registry documents from a CouchDB-style endpoint");
  fetch->add_option("--endpoint", fetch_args.endpoint)->required();
  fetch->add_option("--since", fetch_args.since);
  fetch->add_option("--page-limit", fetch_args.page_limit);
  fetch->add_option("--out", fetch_args.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (ingest->parsed()) return run_ingest(ingest_args);
    if (evolve->parsed()) return run_evolve(evolve_args);
    if (reach->parsed()) return run_reach(reach_args);
    if (collude->parsed()) return run_collude(collude_args);
    if (mitigate->parsed()) return run_mitigate(mitigate_args);
    if (fetch->parsed()) return run_fetch(fetch_args);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CorpusFormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IngestError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NotFoundError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNotFound;
  } catch (const UndefinedStatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUndefined;
  } catch (const FetchError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
