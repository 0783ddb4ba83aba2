#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;

const std::string kWorkDir = "/tmp/depgraph_cli_tests";

struct CmdResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

CmdResult run_cli(const std::string& args) {
  fs::create_directories(kWorkDir);
  std::string out_path = kWorkDir + "/stdout.txt";
  std::string err_path = kWorkDir + "/stderr.txt";
  std::string cmd = std::string(DEPGRAPH_CLI_PATH) + " " + args + " > " +
                    out_path + " 2> " + err_path;
  int rc = std::system(cmd.c_str());
  return {WEXITSTATUS(rc), slurp(out_path), slurp(err_path)};
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

// Drops the checksum-bearing comment line so outputs are comparable.
std::vector<std::string> csv_body(const std::string& path) {
  auto lines = lines_of(slurp(path));
  std::vector<std::string> out;
  for (const auto& l : lines)
    if (l.rfind("# ", 0) != 0) out.push_back(l);
  return out;
}

std::string record(const std::string& name, const std::string& version,
                   const std::string& time, const std::string& deps = "{}",
                   const std::string& maintainers = "[]") {
  return std::string("{\"name\":\"") + name + "\",\"version\":\"" + version +
         "\",\"time\":\"" + time + "\",\"dependencies\":" + deps +
         ",\"maintainers\":" + maintainers + "}\n";
}

// liba -> libb -> libc released a year apart.
std::string make_chain_corpus() {
  std::string reg = kWorkDir + "/chain.jsonl";
  std::string corpus = kWorkDir + "/chain.dgc";
  spit(reg,
       record("libc", "1.0.0", "2014-06-01T00:00:00Z", "{}", "[\"mc\"]") +
           record("libb", "1.0.0", "2015-06-01T00:00:00Z",
                  R"({"libc":"^1.0.0"})", "[\"mb\"]") +
           record("liba", "1.0.0", "2016-06-01T00:00:00Z",
                  R"({"libb":"^1.0.0"})", "[\"ma\"]"));
  REQUIRE(run_cli("ingest --registry " + reg + " --out " + corpus).exit_code == 0);
  return corpus;
}

// The star figure fixture: five packages depending on a hub.
std::string make_star_corpus() {
  std::string reg = kWorkDir + "/star.jsonl";
  std::string corpus = kWorkDir + "/star.dgc";
  std::string text =
      record("hub", "1.0.0", "2016-06-01T00:00:00Z", "{}", "[\"mhub\"]");
  for (int i = 1; i <= 5; ++i)
    text += record("dep" + std::to_string(i), "1.0.0", "2016-06-01T00:00:00Z",
                   R"({"hub":"*"})", "[\"m" + std::to_string(i) + "\"]");
  spit(reg, text);
  REQUIRE(run_cli("ingest --registry " + reg + " --out " + corpus).exit_code == 0);
  return corpus;
}

}  // namespace

TEST_CASE("cli: ingest of an empty registry exits 0 with zero releases") {
  fs::create_directories(kWorkDir);
  std::string reg = kWorkDir + "/empty.jsonl";
  spit(reg, "");
  CmdResult r = run_cli("ingest --registry " + reg + " --out " + kWorkDir +
                        "/empty.dgc");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("releases=0") != std::string::npos);
}

TEST_CASE("cli: ingest reports release counts") {
  fs::create_directories(kWorkDir);
  std::string reg = kWorkDir + "/five.jsonl";
  std::string text;
  for (int i = 0; i < 5; ++i)
    text += record("pkg" + std::to_string(i), "1.0.0", "2015-01-01T00:00:00Z");
  spit(reg, text);
  CmdResult r =
      run_cli("ingest --registry " + reg + " --out " + kWorkDir + "/five.dgc");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("releases=5") != std::string::npos);
}

TEST_CASE("cli: unreadable registry path exits 2 naming the path") {
  CmdResult r = run_cli("ingest --registry /nonexistent/registry.jsonl --out " +
                        kWorkDir + "/x.dgc");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("/nonexistent/registry.jsonl") != std::string::npos);
}

TEST_CASE("cli: evolve golden series over the chain corpus") {
  std::string corpus = make_chain_corpus();
  std::string csv = kWorkDir + "/chain_evolve.csv";
  CmdResult r = run_cli(
      "evolve --corpus " + corpus +
      " --metrics packages,maintainers,avg-direct,avg-itp,avg-itm --from 2015 "
      "--to 2017 --out " + csv);
  REQUIRE(r.exit_code == 0);
  std::vector<std::string> expected = {
      "at,packages,maintainers,avg-direct,avg-itp,avg-itm",
      "2015-01-01T00:00:00Z,1,1,0.000000,0.000000,0.000000",
      "2016-01-01T00:00:00Z,2,2,0.500000,0.500000,0.500000",
      "2017-01-01T00:00:00Z,3,3,0.666667,1.000000,1.000000",
  };
  CHECK(csv_body(csv) == expected);
}

TEST_CASE("cli: evolve single-package corpus has zero averages") {
  fs::create_directories(kWorkDir);
  std::string reg = kWorkDir + "/single.jsonl";
  spit(reg, record("only", "1.0.0", "2015-06-01T00:00:00Z", "{}", "[\"m1\"]"));
  std::string corpus = kWorkDir + "/single.dgc";
  REQUIRE(run_cli("ingest --registry " + reg + " --out " + corpus).exit_code == 0);
  std::string csv = kWorkDir + "/single.csv";
  CmdResult r = run_cli("evolve --corpus " + corpus + " --out " + csv);
  REQUIRE(r.exit_code == 0);
  auto body = csv_body(csv);
  REQUIRE(body.size() == 2);
  CHECK(body[1] ==
        "2016-01-01T00:00:00Z,1,1,0.000000,0.000000,0.000000,0.000000,0.000000");
}

TEST_CASE("cli: monthly cadence over one year gives 12 rows") {
  std::string corpus = make_chain_corpus();
  std::string csv = kWorkDir + "/monthly.csv";
  CmdResult r = run_cli("evolve --corpus " + corpus +
                        " --cadence monthly --metrics packages --from "
                        "2015-01-01T00:00:00Z --to 2015-12-01T00:00:00Z --out " +
                        csv);
  REQUIRE(r.exit_code == 0);
  CHECK(csv_body(csv).size() == 13);  // header + 12 rows
}

TEST_CASE("cli: unknown metric exits 2 and lists valid names") {
  std::string corpus = make_chain_corpus();
  CmdResult r = run_cli("evolve --corpus " + corpus +
                        " --metrics packages,bogus --out " + kWorkDir +
                        "/bogus.csv");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("bogus") != std::string::npos);
  CHECK(r.err.find("avg-itm") != std::string::npos);  // the valid list
}

TEST_CASE("cli: evolve output is byte-identical across thread counts") {
  std::string corpus = make_chain_corpus();
  std::string csv1 = kWorkDir + "/t1.csv";
  std::string csv2 = kWorkDir + "/t2.csv";
  REQUIRE(run_cli("evolve --corpus " + corpus + " --from 2014 --to 2018 "
                  "--threads 1 --out " + csv1).exit_code == 0);
  REQUIRE(run_cli("evolve --corpus " + corpus + " --from 2014 --to 2018 "
                  "--threads 4 --out " + csv2).exit_code == 0);
  CHECK(slurp(csv1) == slurp(csv2));
  CHECK_FALSE(slurp(csv1).empty());
}

TEST_CASE("cli: reach on the star fixture") {
  std::string corpus = make_star_corpus();
  CmdResult r = run_cli("reach --corpus " + corpus + " --at 2017 --package hub");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("reach=5") != std::string::npos);

  CmdResult top = run_cli("reach --corpus " + corpus + " --at 2017 --top 1");
  REQUIRE(top.exit_code == 0);
  auto lines = lines_of(top.out);
  REQUIRE_FALSE(lines.empty());
  CHECK(lines[0] == "1 hub 5");

  CmdResult dist =
      run_cli("reach --corpus " + corpus + " --at 2017 --distribution 1,5");
  REQUIRE(dist.exit_code == 0);
  CHECK(lines_of(dist.out) == std::vector<std::string>{"1 1", "5 1"});
}

TEST_CASE("cli: unknown package exits 3") {
  std::string corpus = make_star_corpus();
  CmdResult r =
      run_cli("reach --corpus " + corpus + " --at 2017 --package nope");
  CHECK(r.exit_code == 3);
}

TEST_CASE("cli: collude on a solo-maintainer universe") {
  fs::create_directories(kWorkDir);
  std::string reg = kWorkDir + "/solo.jsonl";
  spit(reg, record("a", "1.0.0", "2015-01-01T00:00:00Z", "{}", "[\"solo\"]") +
                record("b", "1.0.0", "2015-01-01T00:00:00Z", R"({"a":"*"})",
                       "[\"solo\"]"));
  std::string corpus = kWorkDir + "/solo.dgc";
  REQUIRE(run_cli("ingest --registry " + reg + " --out " + corpus).exit_code == 0);
  std::string csv = kWorkDir + "/solo_collude.csv";
  CmdResult r =
      run_cli("collude --corpus " + corpus + " --at 2016 -n 1 --out " + csv);
  REQUIRE(r.exit_code == 0);
  auto body = csv_body(csv);
  REQUIRE(body.size() == 2);
  CHECK(body[0] == "step,maintainer,cumulative_coverage,covered_fraction");
  CHECK(body[1] == "1,solo,1,0.500000");
}

TEST_CASE("cli: collude matches the greedy oracle on the crafted fixture") {
  fs::create_directories(kWorkDir);
  std::string reg = kWorkDir + "/subopt.jsonl";
  std::string text;
  auto leaf = [&](const std::string& name, const std::string& deps) {
    return record(name, "1.0.0", "2016-01-01T00:00:00Z", deps, "[\"zz\"]");
  };
  text += leaf("e1", R"({"ra":"*"})");
  text += leaf("e2", R"({"ra":"*","rg":"*"})");
  text += leaf("e3", R"({"ra":"*","rg":"*"})");
  text += leaf("e4", R"({"rb":"*","rg":"*"})");
  text += leaf("e5", R"({"rb":"*","rg":"*"})");
  text += leaf("e6", R"({"rb":"*"})");
  text += record("ra", "1.0.0", "2016-01-01T00:00:00Z", "{}", "[\"ma\"]");
  text += record("rb", "1.0.0", "2016-01-01T00:00:00Z", "{}", "[\"mb\"]");
  text += record("rg", "1.0.0", "2016-01-01T00:00:00Z", "{}", "[\"mg\"]");
  spit(reg, text);
  std::string corpus = kWorkDir + "/subopt.dgc";
  REQUIRE(run_cli("ingest --registry " + reg + " --out " + corpus).exit_code == 0);

  std::string csv = kWorkDir + "/subopt_collude.csv";
  CmdResult r =
      run_cli("collude --corpus " + corpus + " --at 2017 -n 4 --out " + csv);
  REQUIRE(r.exit_code == 0);
  auto body = csv_body(csv);
  REQUIRE(body.size() == 5);
  CHECK(body[1] == "1,mg,4,0.444444");  // 4 of 9 packages
  CHECK(body[2] == "2,ma,5,0.555556");  // lexicographic tie-break vs mb
  CHECK(body[3] == "3,mb,6,0.666667");
  CHECK(body[4] == "4,zz,6,0.666667");  // zero gain

  // Fractions are within [0,1] and non-decreasing.
  double prev = 0.0;
  for (std::size_t i = 1; i < body.size(); ++i) {
    double f = std::stod(body[i].substr(body[i].rfind(',') + 1));
    CHECK(f >= prev);
    CHECK(f <= 1.0);
    prev = f;
  }
}

TEST_CASE("cli: collude rejects non-positive n") {
  std::string corpus = make_star_corpus();
  CmdResult r =
      run_cli("collude --corpus " + corpus + " --at 2017 -n 0 --out " +
              kWorkDir + "/zero.csv");
  CHECK(r.exit_code == 2);
}

TEST_CASE("cli: mitigate baseline and package vetting") {
  std::string corpus = make_star_corpus();
  std::string csv = kWorkDir + "/mit0.csv";
  CmdResult r = run_cli("mitigate --corpus " + corpus +
                        " --at 2017 --mode packages --k-max 0 --out " + csv);
  REQUIRE(r.exit_code == 0);
  auto body = csv_body(csv);
  REQUIRE(body.size() == 2);  // header + single baseline row
  CHECK(body[1] == "0,0.833333");

  std::string csv1 = kWorkDir + "/mit1.csv";
  CmdResult r1 = run_cli("mitigate --corpus " + corpus +
                         " --at 2017 --mode packages --k-max 1 --out " + csv1);
  REQUIRE(r1.exit_code == 0);
  auto body1 = csv_body(csv1);
  REQUIRE(body1.size() == 3);
  CHECK(body1[2] == "1,0.000000");  // trusting the hub clears every ITP set
}

TEST_CASE("cli: mitigate maintainers mode matches the recount oracle") {
  std::string corpus = make_chain_corpus();
  std::string csv = kWorkDir + "/mitm.csv";
  CmdResult r = run_cli("mitigate --corpus " + corpus +
                        " --at 2017 --mode maintainers --k-max 3 --out " + csv);
  REQUIRE(r.exit_code == 0);
  auto body = csv_body(csv);
  std::vector<std::string> expected = {"k,residual_average", "0,1.000000",
                                       "1,0.333333", "2,0.000000",
                                       "3,0.000000"};
  CHECK(body == expected);
}

TEST_CASE("cli: invalid mitigate mode exits 2") {
  std::string corpus = make_star_corpus();
  CmdResult r = run_cli("mitigate --corpus " + corpus +
                        " --at 2017 --mode bananas --k-max 1 --out " +
                        kWorkDir + "/bad.csv");
  CHECK(r.exit_code == 2);
}

TEST_CASE("cli: reach --dev switches to modified reach") {
  fs::create_directories(kWorkDir);
  std::string reg = kWorkDir + "/dev.jsonl";
  // tool is dev-depended on by app; app has a regular dependent site.
  spit(reg,
       record("tool", "1.0.0", "2016-01-01T00:00:00Z") +
           "{\"name\":\"app\",\"version\":\"1.0.0\",\"time\":\"2016-01-01T00:00:00Z\","
           "\"dependencies\":{},\"devDependencies\":{\"tool\":\"^1.0.0\"},"
           "\"maintainers\":[]}\n" +
           record("site", "1.0.0", "2016-01-01T00:00:00Z", R"({"app":"*"})"));
  std::string corpus = kWorkDir + "/dev.dgc";
  REQUIRE(run_cli("ingest --registry " + reg + " --out " + corpus).exit_code == 0);

  CmdResult plain =
      run_cli("reach --corpus " + corpus + " --at 2017 --package tool");
  REQUIRE(plain.exit_code == 0);
  CHECK(plain.out.find("reach=0") != std::string::npos);

  CmdResult dev = run_cli("reach --corpus " + corpus +
                          " --at 2017 --package tool --dev --list");
  REQUIRE(dev.exit_code == 0);
  CHECK(dev.out.find("reach=2") != std::string::npos);  // app + site
  CHECK(dev.out.find("app") != std::string::npos);
  CHECK(dev.out.find("site") != std::string::npos);
}

TEST_CASE("cli: ingest lists external names in the report") {
  fs::create_directories(kWorkDir);
  std::string reg = kWorkDir + "/ext.jsonl";
  spit(reg, record("a", "1.0.0", "2015-01-01T00:00:00Z", R"({"ghost":"*"})"));
  CmdResult r =
      run_cli("ingest --registry " + reg + " --out " + kWorkDir + "/ext.dgc");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("external_names=1") != std::string::npos);
  CHECK(r.out.find("external: ghost") != std::string::npos);
}

TEST_CASE("cli: csv comment line records checksum, instant and modes") {
  std::string corpus = make_star_corpus();
  std::string csv = kWorkDir + "/comment.csv";
  REQUIRE(run_cli("collude --corpus " + corpus + " --at 2017 -n 1 --out " + csv)
              .exit_code == 0);
  auto lines = lines_of(slurp(csv));
  REQUIRE_FALSE(lines.empty());
  CHECK(lines[0].rfind("# corpus=", 0) == 0);
  CHECK(lines[0].find(" at=2017-01-01T00:00:00Z") != std::string::npos);
  CHECK(lines[0].find("maintainer-mode=at-time") != std::string::npos);

  std::string evolve_csv = kWorkDir + "/comment_evolve.csv";
  REQUIRE(run_cli("evolve --corpus " + corpus + " --out " + evolve_csv)
              .exit_code == 0);
  auto elines = lines_of(slurp(evolve_csv));
  REQUIRE_FALSE(elines.empty());
  CHECK(elines[0].rfind("# corpus=", 0) == 0);
  CHECK(elines[0].find("cadence=yearly") != std::string::npos);
  CHECK(elines[0].find("advisory-mode=retroactive") != std::string::npos);
}

TEST_CASE("cli: evolve columns follow the requested metric order") {
  std::string corpus = make_chain_corpus();
  std::string csv = kWorkDir + "/order.csv";
  REQUIRE(run_cli("evolve --corpus " + corpus +
                  " --metrics avg-itm,packages --from 2017 --to 2017 --out " +
                  csv).exit_code == 0);
  auto body = csv_body(csv);
  REQUIRE(body.size() == 2);
  CHECK(body[0] == "at,avg-itm,packages");
  CHECK(body[1] == "2017-01-01T00:00:00Z,1.000000,3");
}

TEST_CASE("cli: strict vs retroactive advisory modes") {
  fs::create_directories(kWorkDir);
  std::string reg = kWorkDir + "/modes.jsonl";
  spit(reg, record("libc", "1.0.0", "2014-06-01T00:00:00Z") +
                record("libb", "1.0.0", "2015-06-01T00:00:00Z",
                       R"({"libc":"^1.0.0"})") +
                record("liba", "1.0.0", "2015-07-01T00:00:00Z",
                       R"({"libb":"^1.0.0"})"));
  std::string advs = kWorkDir + "/modes_adv.jsonl";
  spit(advs,
       R"({"id":"A","package":"libc","published":"2016-07-01T00:00:00Z","affected":"*"})"
       "\n");
  std::string corpus = kWorkDir + "/modes.dgc";
  REQUIRE(run_cli("ingest --registry " + reg + " --advisories " + advs +
                  " --out " + corpus).exit_code == 0);

  auto row = [&](const std::string& mode) {
    std::string csv = kWorkDir + "/mode_" + mode + ".csv";
    REQUIRE(run_cli("evolve --corpus " + corpus +
                    " --metrics vrr --from 2016 --to 2016 --advisory-mode " +
                    mode + " --out " + csv).exit_code == 0);
    return csv_body(csv).at(1);
  };
  // The advisory is published mid-2016: retroactively it already taints the
  // 2016-01-01 snapshot, strictly it does not.
  CHECK(row("retroactive") == "2016-01-01T00:00:00Z,0.333333");
  CHECK(row("strict") == "2016-01-01T00:00:00Z,0.000000");
}

TEST_CASE("cli: incompatible corpus versions are rejected with exit 2") {
  fs::create_directories(kWorkDir);
  std::string path = kWorkDir + "/future.dgc";
  spit(path, "#depgraph-corpus v99\n#releases\n#advisories\n");
  CmdResult r = run_cli("evolve --corpus " + path + " --out " + kWorkDir +
                        "/future.csv");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("version") != std::string::npos);
}
