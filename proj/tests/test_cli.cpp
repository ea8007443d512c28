// End-to-end checks of the jn binary: subcommand wiring, exit codes
// (0 ok / 1 not concluded or invariant failure / 2 usage or bad input),
// and artifact round trips through real files.

#include "jnseq/io.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

using namespace jnseq;
using Catch::Matchers::ContainsSubstring;

namespace {

namespace fs = std::filesystem;

fs::path scratch() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "jnseq_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

RunResult run_jn(const std::string& args) {
  static int counter = 0;
  fs::path d = scratch() / ("io" + std::to_string(counter++));
  fs::create_directories(d);
  fs::path outp = d / "stdout", errp = d / "stderr";
  std::string cmd =
      std::string(JN_BIN) + " " + args + " >" + outp.string() + " 2>" + errp.string();
  int raw = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(outp);
  r.err = slurp(errp);
  return r;
}

}  // namespace

TEST_CASE("gen emits JSONL that loads back; usage errors exit 2") {
  RunResult r = run_jn("gen --variant conv --n 5 --out -");
  CHECK(r.code == 0);
  std::istringstream in(r.out);
  MeasureSequence seq = load_sequence(in, "stdout");
  CHECK(seq.length() == std::size_t(5));
  CHECK(seq.meta().name == "conv");
  CHECK(seq.at(4).at(Point::seq(Rational(1, 5))) == Rational(1, 2));

  auto out = (scratch() / "conv.jsonl").string();
  r = run_jn("gen --variant conv --n 5 --out " + out);
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("wrote 5 measures (conv)"));
  CHECK(fs::exists(out));

  CHECK(run_jn("gen --variant conv").code == 2);          // missing --n
  CHECK(run_jn("gen --n 3").code == 2);                   // missing --variant
  RunResult bad = run_jn("gen --variant nope --n 3");
  CHECK(bad.code == 2);
  CHECK_THAT(bad.err, ContainsSubstring("error:"));
  CHECK(run_jn("frobnicate").code == 2);
  CHECK(run_jn("--help").code == 0);
}

TEST_CASE("verify reports a certificate and mirrors it to JSON and CSV") {
  auto json_out = (scratch() / "cert.json").string();
  auto csv_out = (scratch() / "cert.csv").string();
  RunResult r = run_jn("verify --variant conv --N 40 --eps 1/4 --json " + json_out + " --csv " +
                       csv_out);
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("norms:      all exactly 1"));
  CHECK_THAT(r.out, ContainsSubstring("-> not refuted"));
  CHECK_THAT(r.out, ContainsSubstring("certificate holds"));

  Json cert = Json::parse(slurp(json_out));
  CHECK(cert.at("ok").get<bool>());
  CHECK(cert.at("config").at("command").get<std::string>() == "verify");
  CHECK(cert.at("decay").at("rows").size() == 40);

  std::string csv = slurp(csv_out);
  CHECK_THAT(csv, ContainsSubstring("# eps: 1/4"));
  CHECK_THAT(csv, ContainsSubstring("n,max_abs,argmax,norm_defect,support_size"));
}

TEST_CASE("verify refutes a too-ambitious decay bound with exit 1") {
  RunResult r = run_jn("verify --variant conv --N 30 --eps 1/1024");
  CHECK(r.code == 1);
  CHECK_THAT(r.out, ContainsSubstring("REFUTED"));
  CHECK_THAT(r.out, ContainsSubstring("witness: n="));
}

TEST_CASE("verify consumes files produced by gen") {
  auto path = (scratch() / "thin.jsonl").string();
  REQUIRE(run_jn("gen --variant square2thin --n 30 --out " + path).code == 0);
  RunResult r = run_jn("verify --in " + path + " --eps 1/32");
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("horizon:    30"));  // clamped to the file
  CHECK(run_jn("verify --in " + path + " --variant conv").code == 2);  // mutually exclusive
  CHECK(run_jn("verify").code == 2);                                   // neither input
}

TEST_CASE("analyze classifies, extracts, and flags limit-mass violations") {
  RunResult r = run_jn("analyze --variant square1 --N 60 --window 10 --extract");
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("within bound"));
  CHECK_THAT(r.out, ContainsSubstring("kept 30 of 60"));
  CHECK_THAT(r.out, ContainsSubstring("limit has 2 atoms"));

  // A sequence parked on a single unit atom breaks the limit-mass bound.
  auto path = (scratch() / "parked.jsonl").string();
  {
    std::ostringstream ss;
    ss << R"({"format": "jnseq/v1", "kind": "sequence", "space": "unit_interval", "length": 8})"
       << "\n";
    for (int n = 0; n < 8; ++n)
      ss << R"({"n": )" << n << R"(, "atoms": [{"point": ["0"], "coeff": "1"}]})" << "\n";
    write_text_atomic(path, ss.str());
  }
  RunResult v = run_jn("analyze --in " + path + " --window 4");
  CHECK(v.code == 1);
  CHECK_THAT(v.out, ContainsSubstring("VIOLATED"));
}

TEST_CASE("transform disjointify writes a reloadable disjoint family") {
  auto out = (scratch() / "disjoint.jsonl").string();
  auto rep = (scratch() / "disjoint-report.json").string();
  RunResult r = run_jn("transform --variant conv --op disjointify -K 3 --N 60 --window 10 --out " +
                       out + " --json " + rep);
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("pairwise disjoint supports verified"));

  MeasureSequence back = load_sequence(out);
  REQUIRE(back.length() == std::size_t(3));
  CHECK(back.meta().claimed_disjoint);
  CHECK(back.meta().name == "conv/disjoint");
  CHECK(back.at(0).at(Point::seq(Rational(1))) == Rational(1, 2));

  Json report = Json::parse(slurp(rep));
  CHECK(report.at("disjointness").at("ok").get<bool>());
  for (const auto& rn : report.at("split").at("residual_norms"))
    CHECK(rn.get<std::string>() == "0/1");
}

TEST_CASE("transform split prints exactly-zero residuals for the convergent family") {
  RunResult r = run_jn("transform --variant conv --op split -K 5 --N 60 --window 10");
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("chosen indices: 0 1 2 3 4"));
  CHECK_THAT(r.out, ContainsSubstring("residual norms: 0/1 0/1 0/1 0/1 0/1"));
}

TEST_CASE("transform distinguishes horizon exhaustion from invariant failure") {
  // More rounds than the prefix can supply: not concluded, exit 1.
  RunResult h = run_jn("transform --variant conv --op split -K 25 --N 20 --window 5");
  CHECK(h.code == 1);
  CHECK_THAT(h.err, ContainsSubstring("not concluded at this horizon"));

  // Emitted pairs decay too slowly at this horizon: invariant failure, exit 1.
  RunResult j = run_jn("transform --variant square1 --op pairs --max-size 6 --N 60");
  CHECK(j.code == 1);
  CHECK_THAT(j.err, ContainsSubstring("invariant failure"));

  RunResult u = run_jn("transform --variant conv --op frobnicate");
  CHECK(u.code == 2);
  CHECK_THAT(u.err, ContainsSubstring("unknown --op"));
}

TEST_CASE("transform pairs succeeds on the long square1 prefix") {
  RunResult r = run_jn("transform --variant square1 --op pairs --max-size 6 --N 200");
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("50 two-point measures via transient-chain"));
  CHECK_THAT(r.out, ContainsSubstring("not refuted"));
}

TEST_CASE("witness names the separating set for square pairs") {
  auto path = (scratch() / "squares.txt").string();
  std::vector<std::uint64_t> xs, ys;
  for (std::uint64_t n = 1; n <= 50; ++n) {
    xs.push_back(n * n);
    ys.push_back(n * n + 1);
  }
  write_pairs(path, xs, ys, "perfect squares and successors");

  RunResult r = run_jn("witness --pairs " + path + " --N 10000");
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("squares"));
  CHECK_THAT(r.out, ContainsSubstring("50 of 50 pairs"));
  CHECK_THAT(r.out, ContainsSubstring("density:   1/100 at N = 10000"));

  auto bad = (scratch() / "bad.txt").string();
  write_text_atomic(bad, "5 5\n");
  CHECK(run_jn("witness --pairs " + bad).code == 2);
}

TEST_CASE("pipeline drives the full chain and writes its artifact set") {
  auto dir = (scratch() / "pipe-conv").string();
  RunResult r = run_jn("pipeline --variant conv --N 60 --window 10 --eps 1/4 -K 6 -I 3 -Q 2 "
                       "--out-dir " + dir);
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("pipeline ok"));
  CHECK_THAT(r.out, ContainsSubstring("discretize: ok"));
  for (const char* name : {"sequence.jsonl", "certificate.json", "classification.csv",
                           "halfsplit.csv", "disjoint.jsonl", "discrete.jsonl", "witnesses.json",
                           "summary.json"})
    CHECK(fs::exists(fs::path(dir) / name));
  CHECK(Json::parse(slurp(fs::path(dir) / "summary.json")).at("ok").get<bool>());
}

TEST_CASE("pipeline picks the dyadic defaults for square4") {
  auto dir = (scratch() / "pipe-dyadic").string();
  RunResult r = run_jn("pipeline --variant square4 --out-dir " + dir);
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("renormalize: ok"));
  CHECK_THAT(r.out, ContainsSubstring("disjointify: skipped"));
  Json summary = Json::parse(slurp(fs::path(dir) / "summary.json"));
  CHECK(summary.at("config").at("horizon").get<std::size_t>() == 12);
  CHECK(summary.at("config").at("tau").get<std::string>() == "1/256");
}

TEST_CASE("pipeline failure still writes artifacts and exits 1") {
  auto dir = (scratch() / "pipe-refuted").string();
  RunResult r = run_jn("pipeline --variant conv --N 60 --window 10 --eps 1/1024 "
                       "--no-disjointify --no-discretize --out-dir " + dir);
  CHECK(r.code == 1);
  CHECK_THAT(r.out, ContainsSubstring("pipeline FAILED"));
  Json summary = Json::parse(slurp(fs::path(dir) / "summary.json"));
  CHECK_FALSE(summary.at("ok").get<bool>());
  CHECK(summary.at("stages").at("certificate").at("status").get<std::string>() == "failed");
}
