// Integration tests of the command-line tool: exit-code contract,
// deterministic output, and the JSON surfaces. The binary path arrives as
// argv[1] from the test harness.

#define DOCTEST_CONFIG_IMPLEMENT
#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

std::string g_binary;

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = g_binary + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  std::array<char, 4096> buf;
  size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    r.out.append(buf.data(), got);
  }
  int status = pclose(pipe);
  r.exit_code = WEXITSTATUS(status);
  return r;
}

using Json = nlohmann::json;

}  // namespace

TEST_CASE("homeo: decided queries exit 0") {
  RunResult r = run_cli("homeo \"X{;2+2k}*X{;2+2k}\" \"X{;2+2k}\"");
  CHECK(r.exit_code == 0);
  Json j = Json::parse(r.out);
  CHECK(j["verdict"] == "homeo");
}

TEST_CASE("homeo: unknown verdicts exit 2") {
  RunResult r = run_cli("homeo \"Z(2)*Z(3)\" \"Z(4)\"");
  CHECK(r.exit_code == 2);
  Json j = Json::parse(r.out);
  CHECK(j["verdict"] == "unknown");
}

TEST_CASE("homeo: certificates ride along") {
  RunResult r = run_cli("homeo \"X{;2+2k}\" \"X{;1+2k}\"");
  CHECK(r.exit_code == 0);
  Json j = Json::parse(r.out);
  CHECK(j["verdict"] == "not-homeo");
  CHECK(j["certificate"]["invariant"] == "open-z");
  CHECK(j["certificate"]["witness"] == 2);
}

TEST_CASE("errors exit 1 with a diagnostic") {
  CHECK(run_cli("homeo \"Z(0)\" \"Z(1)\"").exit_code == 1);
  CHECK(run_cli("normalize \"Fin(\"").exit_code == 1);
  CHECK(run_cli("partition \"Z(2)\" --stage 2 --epsilon 1/50").exit_code == 1);
  CHECK(run_cli("square-witness \"Z(2)\" --stage 3").exit_code == 1);
  CHECK(run_cli("family --count 1").exit_code == 1);
}

TEST_CASE("family emits the requested sets and all pair certificates") {
  RunResult r = run_cli("family --count 8");
  CHECK(r.exit_code == 0);
  Json j = Json::parse(r.out);
  CHECK(j["members"].size() == 8);
  CHECK(j["certificates"].size() == 28);
  for (const auto& c : j["certificates"]) {
    CHECK(c["invariant"] == "open-z");
  }
}

TEST_CASE("present: the JSON schema fields are all there") {
  RunResult r = run_cli("present \"O(1)\" --stage 3");
  CHECK(r.exit_code == 0);
  Json j = Json::parse(r.out);
  CHECK(j["stage"] == 3);
  CHECK(j["points"].size() == 4);
  for (const auto& pt : j["points"]) {
    CHECK(pt.contains("xy"));
    CHECK(pt.contains("cell"));
    CHECK(pt.contains("kernel"));
    CHECK(pt.contains("isoRank"));
  }
  CHECK(j["cells"].size() == 1);
  // Points arrive in coordinate order.
  CHECK(j["points"][0]["xy"][0] == "0");
  CHECK(j["points"][1]["xy"][0] == "1/27");
}

TEST_CASE("present: svg for atoms, cell grid for products") {
  RunResult atom = run_cli("present \"Z(2)\" --stage 3 --format svg");
  CHECK(atom.exit_code == 0);
  CHECK(atom.out.find("<svg") == 0);
  CHECK(atom.out.find("<circle") != std::string::npos);

  RunResult prod = run_cli("present \"O(1)*O(1)\" --stage 2 --format svg");
  CHECK(prod.exit_code == 0);
  CHECK(prod.out.find("<rect") != std::string::npos);
  CHECK(prod.out.find("<text") != std::string::npos);
}

TEST_CASE("partition emits the cell family schema") {
  RunResult r = run_cli("partition \"O(1)*Z(2)\" --stage 3 --epsilon 1/2");
  CHECK(r.exit_code == 0);
  Json j = Json::parse(r.out);
  CHECK(j.is_array());
  CHECK(j.size() >= 2);
  for (const auto& c : j) {
    CHECK(c.contains("cellId"));
    CHECK(c.contains("label"));
    CHECK(c.contains("diameter"));
    CHECK(c.contains("memberPoints"));
    CHECK(c.contains("provenance"));
  }
}

TEST_CASE("partition --all-ranks reports levels and conditions") {
  RunResult r = run_cli("partition \"Z(2)\" --stage 4 --all-ranks --alpha 2");
  CHECK(r.exit_code == 0);
  Json j = Json::parse(r.out);
  CHECK(j["levels"].size() >= 2);
  CHECK(j.contains("coverageBounds"));
  CHECK(j.contains("family"));
}

TEST_CASE("square-witness summarizes the matching") {
  RunResult r = run_cli("square-witness \"X{;2+2k}\" --stage 2");
  CHECK(r.exit_code == 0);
  Json j = Json::parse(r.out);
  CHECK(j["labelsPreserved"] == true);
  CHECK(j["pairs"].size() == j["familySize"]);
}

TEST_CASE("oracle-rank prints every derivative stage") {
  RunResult r = run_cli("oracle-rank \"O(1)*O(1)\"");
  CHECK(r.exit_code == 0);
  Json j = Json::parse(r.out);
  CHECK(j["rank"] == "2");
  CHECK(j["mult"] == 1);
  CHECK(j["stages"].size() == 3);  // the space, one derivative, the top
  CHECK(run_cli("oracle-rank \"Z(2)\"").exit_code == 1);
}

TEST_CASE("output is byte-identical across repeated runs") {
  for (const char* args :
       {"normalize \"X{2+2k}*X{2+2k}*O(1)*Fin(2)\"",
        "present \"Z(2)\" --stage 3", "family --count 6",
        "square-witness \"X{;2+2k}\" --stage 2",
        "partition \"Z(2)\" --stage 3 --epsilon 1/2"}) {
    RunResult a = run_cli(args);
    RunResult b = run_cli(args);
    CHECK(a.exit_code == b.exit_code);
    CHECK(a.out == b.out);
  }
}

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: cli_tests <path-to-binary>\n");
    return 1;
  }
  g_binary = argv[1];
  doctest::Context ctx;
  ctx.applyCommandLine(argc - 1, argv + 1);
  return ctx.run();
}

TEST_CASE("partition --refine-null emits the refined schedule") {
  RunResult r =
      run_cli("partition \"O(1)*Z(2)\" --stage 3 --epsilon 1/2 --refine-null");
  CHECK(r.exit_code == 0);
  Json j = Json::parse(r.out);
  CHECK(j.is_array());
  for (const auto& c : j) {
    std::string prov = c["provenance"];
    CHECK(prov.find("refined") == std::string::npos);  // per-cell provenance
  }
}
