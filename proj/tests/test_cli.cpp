#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include <unistd.h>

#include <nlohmann/json.hpp>

#include "graphlang/cli.hpp"
#include "graphlang/io.hpp"
#include "support.hpp"

using namespace graphlang;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() / ("graphlang_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

}  // namespace

TEST_CASE("gen-structure is deterministic and validates flags") {
  TempDir dir;
  CHECK(cli({"gen-structure", "--task", "cycle", "--count", "10", "--nodes", "6", "--seed", "7", "--out", dir / "a"})
            .code == 0);
  CHECK(cli({"gen-structure", "--task", "cycle", "--count", "10", "--nodes", "6", "--seed", "7", "--jobs", "1",
             "--out", dir / "b"})
            .code == 0);
  CHECK(read_text(dir / "a") == read_text(dir / "b"));
  CHECK(parse_json_lines(read_text(dir / "a")).size() == 10);

  auto sp = cli({"gen-structure", "--task", "shortest-path", "--count", "2"});
  CHECK(sp.code == 2);
  CHECK(sp.err.find("--weighted") != std::string::npos);
  CHECK(cli({"gen-structure", "--task", "cycle", "--count", "0", "--out", dir / "e"}).code == 0);
  CHECK(read_text(dir / "e").empty());
  CHECK(cli({"gen-structure", "--task", "flow"}).code == 2);
  CHECK(cli({"gen-structure"}).code == 2);
  CHECK(cli({"gen-structure", "--task", "hamilton", "--nodes", "30"}).code == 2);
}

TEST_CASE("config overlay and environment seed") {
  TempDir dir;
  write_text(dir / "cfg", "# shared settings\ncount = 4\nnodes=5\nseed=7\nbeta=0.3\nweighted=true\n");
  CHECK(cli({"gen-structure", "--task", "degree", "--config", dir / "cfg", "--out", dir / "a"}).code == 0);
  CHECK(cli({"gen-structure", "--task", "degree", "--count", "4", "--nodes", "5", "--seed", "7", "--weighted",
             "--out", dir / "b"})
            .code == 0);
  CHECK(read_text(dir / "a") == read_text(dir / "b"));
  CHECK(cli({"gen-structure", "--task", "degree", "--config", dir / "cfg", "--count", "2", "--out", dir / "c"}).code ==
        0);
  CHECK(parse_json_lines(read_text(dir / "c")).size() == 2);
  CHECK(cli({"gen-structure", "--task", "degree", "--config", dir / "missing"}).code == 2);

  ::setenv("GRAPHLANG_SEED", "7", 1);
  CHECK(cli({"gen-structure", "--task", "degree", "--count", "4", "--nodes", "5", "--weighted", "--out", dir / "d"})
            .code == 0);
  ::unsetenv("GRAPHLANG_SEED");
  CHECK(read_text(dir / "d") == read_text(dir / "b"));
}

TEST_CASE("verbalize and parse round trip") {
  TempDir dir;
  std::vector<Json> lines;
  std::vector<Graph> graphs;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Graph g = test::random_rich_graph(seed);
    graphs.push_back(g);
    Json j;
    j["task"] = "kg";
    j["cluster"] = "Graph QA";
    j["instruction"] = "Answer.";
    j["graph"] = graph_to_json(g);
    j["passage"] = "Q?";
    j["answer"] = "A";
    j["meta"] = {{"id", std::to_string(seed)}};
    lines.push_back(j);
  }
  write_text(dir / "tasks", dump_json_lines(lines));
  REQUIRE(cli({"verbalize", "--in", dir / "tasks", "--out", dir / "verbal"}).code == 0);
  REQUIRE(cli({"parse", "--in", dir / "verbal", "--field", "graph_text", "--strict", "--out", dir / "parsed"}).code ==
          0);
  auto parsed = parse_json_lines(read_text(dir / "parsed"));
  REQUIRE(parsed.size() == graphs.size());
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    CHECK(parsed[i].value["id"] == std::to_string(i));
    CHECK(graph_equal(graph_from_json(parsed[i].value["graph"], 1), graphs[i]));
  }
}

TEST_CASE("parse reports diagnostics and strict failures") {
  TempDir dir;
  auto r = cli({"parse", "--in", test::fixture_path("data/bluesman_model.txt"), "--out", dir / "p"});
  CHECK(r.code == 0);
  auto out = parse_json_lines(read_text(dir / "p"));
  REQUIRE(out.size() == 1);
  std::size_t recovered = 0;
  for (const auto& d : out[0].value["diagnostics"]) recovered += d["recovered"].get<bool>();
  CHECK(recovered == 1);

  write_text(dir / "bad", "{\"id\":\"a\",\"output\":\"Graph[name='g'] {}\"}\n{\"id\":\"b\",\"output\":\"garbage\"}\n");
  auto strict = cli({"parse", "--in", dir / "bad", "--strict", "--out", dir / "q"});
  CHECK(strict.code == 1);
  CHECK(strict.err.find("record line 2") != std::string::npos);
  CHECK(cli({"parse", "--in", dir / "bad", "--out", dir / "q"}).code == 0);
}

TEST_CASE("corrupt writes preference pairs") {
  TempDir dir;
  std::vector<Json> lines;
  Json qa;
  qa["task"] = "kgqa";
  qa["cluster"] = "Graph QA";
  qa["instruction"] = "Answer the question.";
  qa["graph"] = Json::parse(R"({"name":"knowledge-graph","edges":[
      {"source":"Bluesman","target":"Tak Matsumoto","relation":"performer"},
      {"source":"Bluesman","target":"Japan","relation":"country of origin"}]})");
  qa["passage"] = "Q: Who performed Bluesman?";
  qa["answer"] = "Tak Matsumoto";
  lines.push_back(qa);
  write_text(dir / "qa", dump_json_lines(lines));
  REQUIRE(cli({"corrupt", "--in", dir / "qa", "--scenario", "missing", "--seed", "1", "--out", dir / "c1"}).code == 0);
  REQUIRE(cli({"corrupt", "--in", dir / "qa", "--scenario", "missing", "--seed", "1", "--out", dir / "c2"}).code == 0);
  CHECK(read_text(dir / "c1") == read_text(dir / "c2"));
  auto pairs = read_preference_jsonl(dir / "c1");
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].chosen ==
        "Based on the world knowledge, the correct answer to the question is Tak Matsumoto, but the answer does not "
        "exist in the graph.");

  CHECK(cli({"corrupt", "--in", dir / "qa", "--scenario", "unfactual", "--edits", "0"}).code == 2);
  CHECK(cli({"corrupt", "--in", dir / "qa", "--scenario", "sideways"}).code == 2);
  // Graph QA records cannot take generation-only scenarios.
  CHECK(cli({"corrupt", "--in", dir / "qa", "--scenario", "wrong-input", "--out", dir / "c3"}).code == 1);
}

TEST_CASE("dpo and ppl-acc") {
  TempDir dir;
  write_text(dir / "quads", "{\"id\":\"0\",\"policy_chosen\":-3,\"policy_rejected\":-3,\"ref_chosen\":-3,"
                            "\"ref_rejected\":-3}\n");
  auto r = cli({"dpo", "--quads", dir / "quads", "--beta", "0.1"});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["loss"].get<double>() == doctest::Approx(std::log(2.0)));
  CHECK(cli({"dpo", "--quads", dir / "quads", "--beta", "0"}).code == 2);
  write_text(dir / "broken", "{\"id\":\"0\"}\n{\"id\":\"1\",\"policy_chosen\":1}\n");
  auto bad = cli({"dpo", "--quads", dir / "broken"});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("line 1") != std::string::npos);

  write_text(dir / "pairs",
             "{\"id\":\"a\",\"chosen_token_logprobs\":[-0.1],\"rejected_token_logprobs\":[-1]}\n"
             "{\"id\":\"b\",\"chosen_token_logprobs\":[-0.2],\"rejected_token_logprobs\":[-2]}\n"
             "{\"id\":\"c\",\"chosen_token_logprobs\":[-3],\"rejected_token_logprobs\":[-0.3]}\n"
             "{\"id\":\"d\",\"chosen_token_logprobs\":[-0.4,-0.4],\"rejected_token_logprobs\":[-0.5]}\n");
  auto acc = cli({"ppl-acc", "--pairs", dir / "pairs"});
  REQUIRE(acc.code == 0);
  CHECK(nlohmann::json::parse(acc.out)["accuracy"].get<double>() == doctest::Approx(0.75));
}

TEST_CASE("grade") {
  TempDir dir;
  REQUIRE(cli({"gen-structure", "--task", "connectivity", "--count", "5", "--nodes", "5", "--out", dir / "gold"})
              .code == 0);
  std::vector<Json> preds;
  for (const auto& r : read_corpus_jsonl(dir / "gold")) preds.push_back({{"id", r.meta.at("id")}, {"output", r.target}});
  write_text(dir / "pred", dump_json_lines(preds));
  auto r = cli({"grade", "--pred", dir / "pred", "--gold", dir / "gold", "--metric", "em", "--report", dir / "rep"});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(read_text(dir / "rep"))["value"].get<double>() == 1.0);
  CHECK(r.out.find("EM") != std::string::npos);
  CHECK(cli({"grade", "--pred", dir / "pred", "--gold", dir / "gold", "--metric", "rouge"}).code == 2);

  preds.pop_back();
  write_text(dir / "short", dump_json_lines(preds));
  CHECK(cli({"grade", "--pred", dir / "short", "--gold", dir / "gold"}).code == 1);

  write_text(dir / "baseline", dump_json_lines({Json{{"id", "0"}, {"output", test::fixture("data/bluesman_baseline.txt")}}}));
  Json ref;
  ref["task"] = "ie";
  ref["cluster"] = "IE";
  ref["instruction"] = "Extract.";
  ref["graph_text"] = test::fixture("data/bluesman_reference.txt");
  ref["passage"] = "text";
  ref["prompt"] = "p";
  ref["target"] = test::fixture("data/bluesman_reference.txt");
  ref["meta"] = {{"id", "0"}};
  write_text(dir / "ref", dump_json_lines({ref}));
  auto f1 = cli({"grade", "--pred", dir / "baseline", "--gold", dir / "ref", "--metric", "f1-re", "--report", "-"});
  REQUIRE(f1.code == 0);
  CHECK(nlohmann::json::parse(f1.out)["value"].get<double>() > 0.0);
}

TEST_CASE("help and usage errors") {
  auto help = cli({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("Exit codes") != std::string::npos);
  auto sub = cli({"corrupt", "--help"});
  CHECK(sub.code == 0);
  CHECK(sub.out.find("--edits") != std::string::npos);
  CHECK(cli({}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
}
