#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "support.hpp"

using namespace golsynth;
namespace fs = std::filesystem;

namespace {

struct Workdir {
  fs::path dir;
  Workdir() {
    dir = fs::temp_directory_path() / ("golsynth-cli-" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Workdir() { fs::remove_all(dir); }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

// Runs the CLI with stdout and stderr captured in out; returns the exit code.
int run(const std::string& args, const Workdir& w, std::string* out = nullptr) {
  std::string log = w.path("log.txt");
  std::string cmd = std::string(GOLSYNTH_CLI) + " " + args + " > " + log + " 2>&1";
  int status = std::system(cmd.c_str());
  if (out) *out = read_file(log);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string problem(const std::string& name) { return testing::problem_path(name); }

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

}  // namespace

TEST_CASE("check validates problems") {
  Workdir w;
  std::string out;
  CHECK(run("check " + problem("cell.gsp"), w, &out) == 0);
  CHECK(out.find("5 resources") != std::string::npos);
  write(w.path("bad.gsp"), "(problem bad (sort part (p)) (resource R1 (zap p)) (target nil))");
  CHECK(run("check " + w.path("bad.gsp"), w, &out) == 2);
  CHECK(out.find("bad.gsp:1:") != std::string::npos);
  CHECK(run("check " + w.path("missing.gsp"), w) == 2);
}

TEST_CASE("synthesize writes a bundle or reports unrealizability") {
  Workdir w;
  std::string out;
  CHECK(run("synthesize " + problem("micro.gsp") + " -o " + w.path("m.ctl"), w, &out) == 0);
  CHECK(out.find("quotient states 6") != std::string::npos);
  REQUIRE(fs::exists(w.path("m.ctl")));
  CHECK(read_file(w.path("m.ctl")).rfind("golsynth-controller 1\n", 0) == 0);
  CHECK(run("synthesize " + problem("micro-no-a2.gsp") + " -o " + w.path("n.ctl"), w, &out) == 1);
  CHECK(out.find("NotRealizable") != std::string::npos);
  CHECK_FALSE(fs::exists(w.path("n.ctl")));
  CHECK(run("synthesize " + problem("parts-unbounded.gsp") + " -o " + w.path("u.ctl"), w, &out) == 2);
  CHECK(out.find("BoundExceeded") != std::string::npos);
  CHECK(out.find("T-MOVE {Proc(#3)}") != std::string::npos);
}

TEST_CASE("replay and playout use a stored controller") {
  Workdir w;
  std::string out;
  REQUIRE(run("synthesize " + problem("micro.gsp") + " -o " + w.path("m.ctl"), w) == 0);
  write(w.path("trace.txt"), "A(p)\nT-MOVE {A(p)}\n");
  CHECK(run("replay " + problem("micro.gsp") + " " + w.path("trace.txt") + " --controller " + w.path("m.ctl"), w,
            &out) == 0);
  CHECK(out.find("S-MOVE {a2(p),nop(1)}") != std::string::npos);
  CHECK(out.find("VERDICT PASS") != std::string::npos);
  write(w.path("illegal.txt"), "B(p)\n");
  CHECK(run("replay " + problem("micro.gsp") + " " + w.path("illegal.txt") + " --controller " + w.path("m.ctl"), w,
            &out) == 1);
  CHECK(out.find("VERDICT FAIL") != std::string::npos);
  CHECK(run("playout " + problem("micro.gsp") + " --mode exhaustive --depth 6 --controller " + w.path("m.ctl") +
                " -o " + w.path("p.txt"),
            w) == 0);
  CHECK(read_file(w.path("p.txt")).find("VERDICT PASS") != std::string::npos);
  CHECK(run("playout " + problem("parts.gsp") + " --mode random --seed 3 --runs 5 --steps 4", w, &out) == 0);
  CHECK(out.rfind("SEED 3\n", 0) == 0);
}

TEST_CASE("a bundle for another problem is rejected") {
  Workdir w;
  std::string out;
  REQUIRE(run("synthesize " + problem("parts.gsp") + " -o " + w.path("p.ctl"), w) == 0);
  CHECK(run("playout " + problem("micro.gsp") + " --controller " + w.path("p.ctl"), w, &out) == 2);
  CHECK(out.find("different problem") != std::string::npos);
  write(w.path("junk.ctl"), "junk\n");
  CHECK(run("playout " + problem("micro.gsp") + " --controller " + w.path("junk.ctl"), w) == 2);
}

TEST_CASE("dump-arena is byte-identical across runs") {
  Workdir w;
  std::string a, b;
  CHECK(run("dump-arena " + problem("parts.gsp"), w, &a) == 0);
  CHECK(run("dump-arena " + problem("parts.gsp"), w, &b) == 0);
  CHECK(a == b);
  CHECK(a.rfind("arena states 8", 0) == 0);
  CHECK(run("dump-arena --concrete --anon-pool 2 " + problem("parts.gsp"), w, &a) == 0);
  CHECK(a.rfind("arena states 26", 0) == 0);
}
