#include "jnseq/io.hpp"

#include "jnseq/generators.hpp"
#include "jnseq/transforms.hpp"
#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <random>
#include <sstream>

using namespace jnseq;
using Catch::Matchers::ContainsSubstring;

namespace {

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / "jnseq_io_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("rationals travel as exact strings; floats are rejected loudly") {
  CHECK(rational_to_json(Rational(-3, 7)).get<std::string>() == "-3/7");
  CHECK(rational_from_json(Json("22/7"), "x") == Rational(22, 7));
  CHECK(rational_from_json(Json(5), "x") == Rational(5));
  CHECK_THROWS_MATCHES(rational_from_json(Json(0.5), "coeff"), validation_error,
                       Catch::Matchers::MessageMatches(ContainsSubstring("floating point")));
  CHECK_THROWS_AS(rational_from_json(Json::array(), "x"), validation_error);
}

TEST_CASE("point JSON: coordinate arrays and discrete naturals") {
  Point p = Point::square(Rational(1, 3), Rational(2, 5));
  Json j = point_to_json(p);
  CHECK(point_from_json(SpaceKind::unit_square, j, "pt") == p);

  CHECK(point_to_json(Point::nat(42)).get<std::uint64_t>() == 42);
  CHECK(point_from_json(SpaceKind::discrete_nat, Json(42u), "pt") == Point::nat(42));
  CHECK(point_from_json(SpaceKind::discrete_nat, Json("9"), "pt") == Point::nat(9));
  CHECK_THROWS_AS(point_from_json(SpaceKind::discrete_nat, Json("-3"), "pt"), validation_error);
  CHECK_THROWS_AS(point_from_json(SpaceKind::discrete_nat, Json("1/2"), "pt"), validation_error);
  // wrong arity and off-carrier coordinates
  CHECK_THROWS_AS(point_from_json(SpaceKind::unit_square, Json::array({"1/2"}), "pt"),
                  validation_error);
  CHECK_THROWS_AS(
      point_from_json(SpaceKind::unit_interval, Json::array({"3/2"}), "pt"),
      validation_error);
}

TEST_CASE("measure JSON round trip preserves atoms exactly") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    FinSuppMeasure mu = oracle::random_square_measure(rng, 12);
    FinSuppMeasure back = measure_from_json(measure_to_json(mu));
    CHECK(back.space() == mu.space());
    CHECK(back.atoms() == mu.atoms());
  }
  CHECK_THROWS_AS(measure_from_json(Json::array()), validation_error);
  CHECK_THROWS_AS(measure_from_json(Json::object()), validation_error);  // missing space

  Json j = Json::object();
  j["space"] = "unit_interval";
  j["atoms"] = Json::array({Json::object({{"point", Json::array({"1/2"})}})});
  CHECK_THROWS_MATCHES(measure_from_json(j), validation_error,
                       Catch::Matchers::MessageMatches(ContainsSubstring("atom 0")));
}

TEST_CASE("measure files round trip on disk") {
  auto path = (scratch_dir() / "mu.json").string();
  FinSuppMeasure mu = gen_square(3, Rational(1, 2)).at(4);
  write_measure(path, mu);
  FinSuppMeasure back = load_measure(path);
  CHECK(back.atoms() == mu.atoms());
  CHECK_THROWS_AS(load_measure((scratch_dir() / "missing.json").string()), validation_error);
}

TEST_CASE("sequence JSONL round trip preserves measures and metadata") {
  DisjointifyResult d =
      disjointify(gen_convergent(ConvMode::to_limit), 4, AnalysisParams{});
  std::ostringstream out;
  write_sequence(out, d.sequence, 4);

  std::istringstream in(out.str());
  MeasureSequence back = load_sequence(in, "buffer");
  CHECK(back.space() == SpaceKind::convergent_seq);
  CHECK(back.meta().name == "conv/disjoint");
  CHECK(back.meta().claimed_disjoint);
  CHECK(back.meta().provenance == d.sequence.meta().provenance);
  REQUIRE(back.length() == std::size_t(4));
  for (std::size_t n = 0; n < 4; ++n) CHECK(back.at(n).atoms() == d.sequence.at(n).atoms());

  // Writers are timestamp-free: a second pass is byte-identical.
  std::ostringstream again;
  write_sequence(again, d.sequence, 4);
  CHECK(again.str() == out.str());
}

TEST_CASE("sequence header carries optional fields through") {
  SequenceMeta meta;
  meta.name = "custom";
  meta.claimed_jn = true;
  meta.support_bound = 2;
  meta.alpha = Rational(1, 2);
  meta.enumeration = "calkin-wilf";
  meta.provenance = {"built by hand"};
  std::vector<FinSuppMeasure> ms = {FinSuppMeasure::make(
      SpaceKind::unit_interval, {{Point::interval(Rational(1, 2)), Rational(1)}})};
  MeasureSequence seq = from_measures(SpaceKind::unit_interval, std::move(ms), meta);

  std::ostringstream out;
  write_sequence(out, seq, 1);
  std::istringstream in(out.str());
  MeasureSequence back = load_sequence(in, "buffer");
  CHECK(back.meta().name == "custom");
  CHECK(back.meta().claimed_jn);
  CHECK(back.meta().support_bound == std::size_t(2));
  CHECK(back.meta().alpha == Rational(1, 2));
  CHECK(back.meta().enumeration == "calkin-wilf");
  CHECK(back.meta().provenance == std::vector<std::string>{"built by hand"});
}

TEST_CASE("headerless JSONL is accepted when lines name their space") {
  std::string text =
      R"({"space": "unit_interval", "atoms": [{"point": ["1/2"], "coeff": "1"}]})"
      "\n"
      R"({"atoms": [{"point": ["1/3"], "coeff": "-1"}]})"
      "\n";
  std::istringstream in(text);
  MeasureSequence seq = load_sequence(in, "inline");
  CHECK(seq.length() == std::size_t(2));
  CHECK(seq.meta().name == "loaded");
  REQUIRE_FALSE(seq.meta().provenance.empty());
  CHECK_THAT(seq.meta().provenance.front(), ContainsSubstring("headerless"));
  CHECK(seq.at(1).at(Point::interval(Rational(1, 3))) == Rational(-1));
}

TEST_CASE("sequence loader reports the offending line") {
  auto load = [](const std::string& text) {
    std::istringstream in(text);
    return load_sequence(in, "buf");
  };
  const std::string header =
      R"({"format": "jnseq/v1", "kind": "sequence", "space": "unit_interval", "length": 1})"
      "\n";
  const std::string row = R"({"n": 0, "atoms": [{"point": ["1/2"], "coeff": "1/2"}]})"
                          "\n";

  CHECK_THROWS_MATCHES(load(header + "not json\n"), validation_error,
                       Catch::Matchers::MessageMatches(ContainsSubstring("buf:2")));
  CHECK_THROWS_MATCHES(load(header + row + header), validation_error,
                       Catch::Matchers::MessageMatches(
                           ContainsSubstring("header must be the first line")));
  CHECK_THROWS_MATCHES(
      load(header + R"({"n": 3, "atoms": []})" + "\n"), validation_error,
      Catch::Matchers::MessageMatches(ContainsSubstring("out of order")));
  const std::string row1 = R"({"n": 1, "atoms": [{"point": ["1/3"], "coeff": "1/2"}]})"
                           "\n";
  CHECK_THROWS_MATCHES(load(header + row + row1), validation_error,
                       Catch::Matchers::MessageMatches(ContainsSubstring("declares length 1")));
  CHECK_THROWS_MATCHES(
      load("{\"format\": \"jnseq/v0\", \"space\": \"unit_interval\"}\n" + row),
      validation_error,
      Catch::Matchers::MessageMatches(ContainsSubstring("unknown format")));
  CHECK_THROWS_MATCHES(load(row), validation_error,
                       Catch::Matchers::MessageMatches(ContainsSubstring("no header")));
  CHECK_THROWS_AS(load(""), validation_error);
  // a float coefficient is a line-level validation error, not a silent round
  CHECK_THROWS_MATCHES(
      load(header + R"({"n": 0, "atoms": [{"point": ["1/2"], "coeff": 0.5}]})" + "\n"),
      validation_error,
      Catch::Matchers::MessageMatches(ContainsSubstring("floating point")));
  // mid-file space change
  CHECK_THROWS_MATCHES(
      load(R"({"space": "unit_interval", "atoms": []})"
           "\n"
           R"({"space": "unit_square", "atoms": []})"
           "\n"),
      validation_error,
      Catch::Matchers::MessageMatches(ContainsSubstring("space changed mid-file")));
}

TEST_CASE("pair files: comments, blank lines, and per-line diagnostics") {
  auto path = (scratch_dir() / "pairs.txt").string();
  std::vector<std::uint64_t> xs = {1, 4, 9}, ys = {2, 5, 10};
  write_pairs(path, xs, ys, "squares and successors");
  auto [bx, by] = load_pairs(path);
  CHECK(bx == xs);
  CHECK(by == ys);

  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return parse_pairs(in, "buf");
  };
  auto [px, py] = parse("# heading\n\n1 2\n3 7 # inline note\n");
  CHECK(px == std::vector<std::uint64_t>{1, 3});
  CHECK(py == std::vector<std::uint64_t>{2, 7});

  CHECK_THROWS_MATCHES(parse("1 2\n-3 4\n"), validation_error,
                       Catch::Matchers::MessageMatches(ContainsSubstring("buf:2")));
  CHECK_THROWS_MATCHES(parse("5 5\n"), validation_error,
                       Catch::Matchers::MessageMatches(ContainsSubstring("equal anchors")));
  CHECK_THROWS_AS(parse("1 2 3\n"), validation_error);
  CHECK_THROWS_AS(parse("7\n"), validation_error);
  CHECK_THROWS_AS(parse("one two\n"), validation_error);
  CHECK_THROWS_AS(parse("# only a comment\n"), validation_error);
  CHECK_THROWS_AS(write_pairs(path, {1, 2}, {3}), validation_error);
}

TEST_CASE("CSV writer quotes exactly what needs quoting") {
  std::ostringstream out;
  write_csv(out, {"horizon=4"}, {"label", "value"},
            {{"plain", "1/2"}, {"with,comma", "a\"b"}});
  CHECK(out.str() ==
        "# horizon=4\n"
        "label,value\n"
        "plain,1/2\n"
        "\"with,comma\",\"a\"\"b\"\n");
  CHECK_THROWS_AS(write_csv(out, {}, {"a", "b"}, {{"only one"}}), validation_error);
}

TEST_CASE("atomic text writes leave no temporary behind") {
  namespace fs = std::filesystem;
  auto dir = scratch_dir() / "nested" / "deeper";
  auto path = (dir / "report.csv").string();
  write_text_atomic(path, "alpha\n");
  write_text_atomic(path, "beta\n");  // overwrite through the same tmp dance
  std::ifstream in(path);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(content == "beta\n");
  CHECK_FALSE(fs::exists(path + ".tmp"));
}
