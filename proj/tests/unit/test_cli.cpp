#include <doctest.h>

#include <condition_variable>
#include <cstdlib>
#include <filesystem>
#include <mutex>
#include <thread>

#include "pragproof/cli/cli.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using pragproof::cli::dispatch;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fx(const std::string& relative) { return test_support::fixture_path(relative); }

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("pragproof_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Set PRAGPROOF_UPDATE_GOLDEN=1 to rewrite the files.
void golden(const std::string& name, const std::string& actual) {
  fs::path path = fs::path(PRAGPROOF_GOLDEN) / name;
  if (const char* update = std::getenv("PRAGPROOF_UPDATE_GOLDEN"); update && std::string(update) == "1") {
    std::ofstream(path, std::ios::binary) << actual;
    return;
  }
  INFO("golden " << name);
  CHECK(actual == test_support::read_file(path.string()));
}

std::vector<std::string> image_inputs() {
  return {"--data", fx("image/agent_knowledge.n3"), "--rules", fx("image/descs"), "--goal", fx("image/agent_goal.n3")};
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// Hands the first complete line to a waiting thread.
class FirstLine : public std::streambuf {
 public:
  std::string wait() {
    std::unique_lock lock(mutex_);
    ready_.wait(lock, [&] { return done_; });
    return line_;
  }

 protected:
  int overflow(int c) override {
    std::lock_guard lock(mutex_);
    if (done_ || c == EOF) return c;
    if (c == '\n') {
      done_ = true;
      ready_.notify_all();
    } else {
      line_.push_back(static_cast<char>(c));
    }
    return c;
  }

 private:
  std::mutex mutex_;
  std::condition_variable ready_;
  std::string line_;
  bool done_ = false;
};

}  // namespace

TEST_CASE("no arguments, unknown subcommands and bad options are usage errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"prove", "--data"}).code == 2);
  CHECK(run({"descgen", "--trace", fx("descgen/upload_trace.txt"), "--out", "x", "--threshold", "2"}).code == 2);
  Run missing = run(concat({"prove"}, {"--data", "/nonexistent.n3", "--rules", fx("image/descs"), "--goal", "g.n3"}));
  CHECK(missing.code == 2);
  CHECK(missing.err.find("/nonexistent.n3") != std::string::npos);
}

TEST_CASE("help goes to stdout with exit 0") {
  Run r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("execute") != std::string::npos);
  CHECK(run({"prove", "--help"}).code == 0);
}

TEST_CASE("parse prints one triple per statement when expanded") {
  Run r = run({"parse", "--expand", fx("image/agent_knowledge.n3")});
  CHECK(r.code == 0);
  golden("parse_expand.n3", r.out);
  Run descs = run({"parse", fx("image/descs/desc_thumbnail.n3")});
  CHECK(descs.code == 0);
  golden("parse_thumbnail.n3", descs.out);
}

TEST_CASE("prove prints the image pre-proof") {
  Run full = run(concat({"prove"}, image_inputs()));
  CHECK(full.code == 0);
  golden("prove_image.n3", full.out);
  Run terse = run(concat({"prove", "--elide-extractions"}, image_inputs()));
  CHECK(terse.code == 0);
  golden("prove_image_elided.n3", terse.out);
}

TEST_CASE("prove reports an unreachable goal as a domain failure") {
  Run r = run({"prove", "--data", fx("image/agent_knowledge.n3"), "--rules", fx("image/descs/desc_thumbnail.n3"), "--goal",
               fx("image/agent_goal.n3")});
  CHECK(r.code == 1);
  CHECK(r.out.empty());
}

TEST_CASE("budget from the environment and the flag") {
  CHECK(run(concat({"prove", "--budget-steps", "1"}, image_inputs())).code == 1);
  CHECK(run(concat({"prove", "--budget-steps", "0"}, image_inputs())).code == 2);
  setenv("PRAGPROOF_BUDGET_STEPS", "1", 1);
  CHECK(run(concat({"prove"}, image_inputs())).code == 1);
  CHECK(run(concat({"prove", "--budget-steps", "100000"}, image_inputs())).code == 0);
  setenv("PRAGPROOF_BUDGET_STEPS", "many", 1);
  CHECK(run(concat({"prove"}, image_inputs())).code == 2);
  unsetenv("PRAGPROOF_BUDGET_STEPS");
}

TEST_CASE("check accepts the printed proof and rejects a tampered one") {
  fs::path dir = scratch("check");
  std::string proof = run(concat({"prove"}, image_inputs())).out;
  std::ofstream(dir / "proof.n3") << proof;
  std::vector<std::string> sources{"--sources", fx("image/agent_knowledge.n3"), fx("image/agent_goal.n3"),
                                   fx("image/descs")};
  Run ok = run(concat({"check", "--proof", (dir / "proof.n3").string()}, sources));
  CHECK(ok.code == 0);
  CHECK(ok.out == "valid\n");

  std::string bad = proof;
  auto at = bad.find("80.0");
  REQUIRE(at != std::string::npos);
  bad.replace(at, 4, "81.0");
  std::ofstream(dir / "bad.n3") << bad;
  Run rejected = run(concat({"check", "--proof", (dir / "bad.n3").string()}, sources));
  CHECK(rejected.code == 1);
  CHECK_FALSE(rejected.out.empty());

  Run terse = run(concat({"check", "--proof", fx("image/terse_proof.n3")}, sources));
  CHECK(terse.code == 0);
}

TEST_CASE("validate") {
  Run ok = run({"validate", fx("image/descs/desc_images.n3")});
  CHECK(ok.code == 0);
  CHECK(ok.out == "valid\n");
  fs::path dir = scratch("validate");
  std::ofstream(dir / "bad.n3") << "@prefix ex: <http://example.org/#>.\n{ ?x ex:p ?y. } => { ?x ex:q ?y. }.\n";
  Run bad = run({"validate", (dir / "bad.n3").string()});
  CHECK(bad.code == 1);
  golden("validate_bad.txt", bad.out);
  CHECK(run({"validate", fx("image/agent_knowledge.n3")}).code == 1);
}

TEST_CASE("requests lists the pre-proof requests in order") {
  fs::path dir = scratch("requests");
  std::ofstream(dir / "proof.n3") << run(concat({"prove"}, image_inputs())).out;
  Run r = run({"requests", "--proof", (dir / "proof.n3").string(), "--rules", fx("image/descs"), "--sources",
               fx("image/agent_knowledge.n3"), fx("image/agent_goal.n3")});
  CHECK(r.code == 0);
  golden("requests_image.txt", r.out);
}

TEST_CASE("execute against the image simulator") {
  fs::path dir = scratch("execute");
  Run r = run(concat({"execute", "--server", "simulator-image", "--trace", (dir / "trace.n3").string()}, image_inputs()));
  CHECK(r.code == 0);
  golden("execute_image.txt", r.out);
  golden("execute_image_trace.n3", test_support::read_file((dir / "trace.n3").string()));
  CHECK(run(concat({"execute", "--server", "ftp://x"}, image_inputs())).code == 2);
  CHECK(run(concat({"execute", "--server", "simulator-chain"}, image_inputs())).code == 2);
}

TEST_CASE("benchgen output executes against the chain simulator") {
  fs::path dir = scratch("benchgen");
  Run gen = run({"benchgen", "--n", "4", "--d", "2", "--dummies", "3", "--seed", "5", "--out", dir.string()});
  CHECK(gen.code == 0);
  CHECK(pragproof::cli::expand_inputs({(dir / "descs").string()}).size() == 7);
  golden("benchgen_plan.txt", test_support::read_file((dir / "plan.txt").string()));

  Run exec = run({"execute", "--data", (dir / "initial.n3").string(), "--rules", (dir / "descs").string(), "--goal",
                  (dir / "goal.n3").string(), "--server", "simulator-chain", "--spec", (dir / "spec.json").string()});
  CHECK(exec.code == 0);
  golden("execute_chain.txt", exec.out);
  CHECK(run({"benchgen", "--n", "1", "--d", "1", "--out", dir.string()}).code == 1);
}

TEST_CASE("bench writes one CSV row per timed trial") {
  fs::path dir = scratch("bench");
  std::ofstream(dir / "grid.json") << R"({"n": [2, 3], "d": 1, "dummies": 0})";
  Run r = run({"bench", "--grid", (dir / "grid.json").string(), "--trials", "2", "--csv", (dir / "out.csv").string()});
  CHECK(r.code == 0);
  std::istringstream csv(test_support::read_file((dir / "out.csv").string()));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "n,d,dummies,trial,parse_ms,reason_ms,total_ms,n_pre");
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 4);
  std::ofstream(dir / "bad.json") << "[1, 2]";
  CHECK(run({"bench", "--grid", (dir / "bad.json").string(), "--csv", (dir / "x.csv").string()}).code == 1);
}

TEST_CASE("descgen writes one skeleton per cluster") {
  fs::path dir = scratch("descgen");
  Run r = run({"descgen", "--trace", fx("descgen/upload_trace.txt"), "--out", dir.string()});
  CHECK(r.code == 0);
  golden("descgen_clusters.txt", r.out);
  golden("descgen_skeleton_1.n3", test_support::read_file((dir / "skeleton_1.n3").string()));
  golden("descgen_skeleton_2.n3", test_support::read_file((dir / "skeleton_2.n3").string()));
  CHECK_FALSE(fs::exists(dir / "skeleton_3.n3"));
}

TEST_CASE("serve and execute over HTTP") {
  CHECK(run({"serve", "--api", "image", "--spec", "x.json"}).code == 2);
  CHECK(run({"serve", "--api", "chain"}).code == 2);
  CHECK(run({"serve", "--api", "video"}).code == 2);

  FirstLine line;
  std::ostream announce(&line);
  std::ostringstream serve_err;
  int serve_code = -1;
  std::thread server([&] {
    serve_code = dispatch({"serve", "--api", "image", "--port", "0", "--max-requests", "2"}, announce, serve_err);
  });
  std::string listening = line.wait();
  REQUIRE(listening.rfind("listening on http://127.0.0.1:", 0) == 0);
  std::string url = listening.substr(std::string("listening on ").size());
  Run r = run(concat({"execute", "--server", url, "--entity-dir", fx("image")}, image_inputs()));
  server.join();
  CHECK(serve_code == 0);
  CHECK(r.code == 0);
  CHECK(r.out.find("Success\n<lena.jpg> dbpedia-owl:thumbnail </images/24/thumbnail>.") != std::string::npos);
}
