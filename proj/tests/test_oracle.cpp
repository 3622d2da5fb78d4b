#include <sstream>

#include "doctest.h"
#include "rpa/oracle.hpp"
#include "support.hpp"

using namespace rpa;

TEST_CASE("recorded oracle caches and counts") {
  auto oracle = ValidityOracle::recorded({{"a", true}, {"o", false}});
  CHECK(oracle.query("o") == false);
  CHECK(oracle.distinct_queries() == 1);
  CHECK(oracle.query("o") == false);  // cache hit
  CHECK(oracle.distinct_queries() == 1);
  CHECK(oracle.query("a") == true);
  CHECK(oracle.distinct_queries() == 2);

  REQUIRE(oracle.log().size() == 3);
  CHECK_FALSE(oracle.log()[0].served_from_cache);
  CHECK(oracle.log()[1].served_from_cache);
  CHECK_THROWS_AS(oracle.query("missing"), UnknownVertex);
}

TEST_CASE("seeding inserts verdicts without counting") {
  auto oracle = ValidityOracle::recorded({});
  oracle.seed({{"root", true}, {"p", false}});
  CHECK(oracle.distinct_queries() == 0);
  CHECK(oracle.query("root") == true);
  CHECK(oracle.distinct_queries() == 0);  // served from cache
  oracle.seed(std::map<VertexId, bool>{});  // no-op
  oracle.seed("p", false);                  // same verdict, fine
  CHECK_THROWS_AS(oracle.seed("p", true), ConflictingSeed);
}

TEST_CASE("external oracle") {
  auto oracle = ValidityOracle::external();
  CHECK_THROWS_AS(oracle.query("v"), AwaitingAnswer);
  oracle.record("v", false);
  CHECK(oracle.query("v") == false);
  CHECK(oracle.distinct_queries() == 1);
  CHECK_THROWS_AS(oracle.record("v", false), ConflictingSeed);
}

TEST_CASE("interactive oracle reads verdict tokens") {
  std::istringstream in("valid\nbad\nbogus good\n");
  std::ostringstream out;
  auto oracle = ValidityOracle::interactive(in, out);
  CHECK(oracle.query("one") == true);
  CHECK(oracle.query("two") == false);   // 'bad' alias
  CHECK(oracle.query("three") == true);  // re-prompts past 'bogus'
  CHECK(oracle.distinct_queries() == 3);
  CHECK(out.str().find("one? [valid/invalid]") != std::string::npos);
  CHECK(out.str().find("unrecognized answer 'bogus'") != std::string::npos);
}

TEST_CASE("command oracle maps exit codes to verdicts") {
  CommandSpec spec;
  spec.workdir = ".";
  spec.checkout = [](const VertexId&) {};
  spec.timeout_seconds = 30.0;

  auto with_command = [&](std::vector<std::string> cmd) {
    CommandSpec s = spec;
    s.test_command = std::move(cmd);
    return ValidityOracle::command(std::move(s));
  };

  SUBCASE("exit 0 is valid") {
    auto oracle = with_command({"true"});
    CHECK(oracle.query("c1") == true);
  }
  SUBCASE("exit 1 is invalid") {
    auto oracle = with_command({"false"});
    CHECK(oracle.query("c1") == false);
  }
  SUBCASE("exit 7 is invalid") {
    auto oracle = with_command({"sh", "-c", "exit 7"});
    CHECK(oracle.query("c1") == false);
  }
  SUBCASE("exit 127 is invalid") {
    auto oracle = with_command({"sh", "-c", "exit 127"});
    CHECK(oracle.query("c1") == false);
  }
  SUBCASE("exit 125 aborts") {
    auto oracle = with_command({"sh", "-c", "exit 125"});
    CHECK_THROWS_AS(oracle.query("c1"), CommandAbort);
  }
  SUBCASE("timeout") {
    CommandSpec s = spec;
    s.test_command = {"sleep", "5"};
    s.timeout_seconds = 0.2;
    auto oracle = ValidityOracle::command(std::move(s));
    CHECK_THROWS_AS(oracle.query("c1"), CommandTimeout);
  }
  SUBCASE("empty command is rejected up front") {
    CommandSpec s = spec;
    CHECK_THROWS_AS(ValidityOracle::command(std::move(s)), Error);
  }
}

TEST_CASE("label file round trip") {
  std::map<VertexId, bool> labels = {{"a", true}, {"b", false}, {"z", true}};
  std::string text = serialize_labels(labels);
  std::istringstream in(text);
  CHECK(parse_labels(in) == labels);
  CHECK(serialize_labels(labels) == text);

  std::istringstream commented("# note\na valid\n\nb invalid\n");
  CHECK(parse_labels(commented) == std::map<VertexId, bool>{{"a", true}, {"b", false}});

  std::istringstream bad("a valid\nb maybe\n");
  try {
    parse_labels(bad);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line_number() == 2);
  }
}

TEST_CASE("replay determinism: identical logs across runs") {
  auto run_once = [] {
    auto oracle = ValidityOracle::recorded(testsupport::trace_validity());
    for (const auto& v : {"o", "c", "o", "n", "j"}) oracle.query(v);
    std::ostringstream out;
    for (const auto& entry : oracle.log())
      out << entry.vertex << ':' << entry.verdict << ':' << entry.served_from_cache << ';';
    return out.str();
  };
  CHECK(run_once() == run_once());
}
