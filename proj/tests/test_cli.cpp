#include "doctest.h"

#include "eqrl/parser.hpp"
#include "eqrl/taskgen.hpp"

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace eqrl;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

// Runs the CLI with stderr folded into stdout.
Result cli(const std::string& args) {
  std::string cmd = std::string("\"") + EQRL_CLI + "\" " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("eqrl_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cli: usage errors exit with 2") {
  CHECK(cli("").code == 2);
  CHECK(cli("frobnicate").code == 2);
  auto r = cli("train --preset nope");
  CHECK(r.code == 2);
  CHECK(r.out.find("R1-mini") != std::string::npos);
  r = cli("solve --preset R1 \"x +* 2\"");
  CHECK(r.code == 2);
  CHECK(r.out.find("parse") != std::string::npos);
  CHECK(cli("train --preset R1-mini --set S=0 --epochs 1").code == 2);
}

TEST_CASE("cli: solve") {
  auto r = cli("solve --preset R2 \"-1/5 + 3/4*x = 5/8 + 2*x\"");
  CHECK(r.code == 0);
  CHECK(r.out.find("x = -33/50") != std::string::npos);
  r = cli("solve --preset R1 \"x = 1\"");
  CHECK(r.code == 0);
  CHECK(r.out.find("0     start") != std::string::npos);
  CHECK(r.out.find("1     ") == std::string::npos);
}

TEST_CASE("cli: gen-dataset") {
  auto dir = scratch("gen");
  auto file = dir / "q.txt";
  auto r = cli("gen-dataset --field Q --n 1000 --seed 3 --out " + file.string());
  REQUIRE(r.code == 0);
  auto eqs = load_dataset(file.string());
  CHECK(eqs.size() == 1000);
  r = cli("gen-dataset --field Z+iZ --n 200 --seed 3");
  REQUIRE(r.code == 0);
  auto z = parse_dataset(r.out);
  CHECK(z.size() == 200);
  for (const auto& eq : z) {
    for (long x : {0L, 1L}) {
      auto l = evaluate(eq.lhs, Number(x), Number(0));
      REQUIRE(l.has_value());
      CHECK(l->re().get_den() == 1);
      CHECK(l->im().get_den() == 1);
    }
  }
  CHECK(cli("gen-dataset --field R --n 3").code == 2);
  CHECK(cli("gen-dataset --field Q --n 5 --seed 9").out == cli("gen-dataset --field Q --n 5 --seed 9").out);
}

TEST_CASE("cli: eval with the scripted oracle, traces and analysis") {
  auto dir = scratch("eval");
  auto data = dir / "shift.txt";
  std::ofstream(data) << "# x + a = b\n1 + x = 3\nx - 2 = 0\nx = 5\n-3 + x = -3\n";
  auto csv = dir / "out.csv";
  auto r = cli("eval --preset R1-mini --checkpoint oracle --dataset " + data.string() + " --csv " + csv.string());
  CHECK(r.code == 0);
  CHECK(r.out.find("success_rate 1") != std::string::npos);
  std::string table = slurp(csv);
  CHECK(std::count(table.begin(), table.end(), '\n') == 5);
  CHECK(table.find(",solved,") != std::string::npos);

  auto traces = dir / "t.jsonl";
  r = cli("solve --preset R1-mini --dataset " + data.string() + " --traces " + traces.string());
  CHECK(r.code == 0);
  auto dot = dir / "g.dot";
  r = cli("analyze --traces " + traces.string() + " --dot " + dot.string());
  CHECK(r.code == 0);
  std::string g = slurp(dot);
  CHECK(g.rfind("digraph", 0) == 0);
  CHECK(g.find("x=N") != std::string::npos);
  CHECK(g.find('}') != std::string::npos);

  CHECK(cli("eval --preset R1-mini --checkpoint oracle --dataset /nonexistent.txt").code == 2);
  std::ofstream(dir / "bad.txt") << "x = 1\nx ** 2 = 1\n";
  r = cli("eval --preset R1-mini --checkpoint oracle --dataset " + (dir / "bad.txt").string());
  CHECK(r.code == 2);
  CHECK(r.out.find("line 2") != std::string::npos);
}

TEST_CASE("cli: train is deterministic and checkpoints are checked against the preset") {
  auto a = scratch("train_a"), b = scratch("train_b");
  std::string common = "train --preset R1-mini --quiet --set hidden=16 test_size=20 eval_every=100 "
                       "checkpoint_every=100 B=8 target_success=0 --epochs 300 --seed 4 --out ";
  REQUIRE(cli(common + a.string()).code == 0);
  REQUIRE(cli(common + b.string()).code == 0);
  std::string metrics = slurp(a / "metrics.txt");
  CHECK(std::count(metrics.begin(), metrics.end(), '\n') == 4);  // header + 3 rows
  CHECK(metrics == slurp(b / "metrics.txt"));
  for (const char* f : {"solver_100.ckpt", "solver_300.ckpt", "solver_final.ckpt"}) {
    CAPTURE(f);
    REQUIRE(fs::exists(a / f));
    CHECK(slurp(a / f) == slurp(b / f));
  }

  auto data = a / "d.txt";
  std::ofstream(data) << "1 + x = 3\n";
  auto ckpt = (a / "solver_final.ckpt").string();
  auto r = cli("eval --preset R1-mini --set hidden=16 --checkpoint " + ckpt + " --dataset " + data.string());
  CHECK(r.code == 0);
  CHECK(r.out.find("success_rate") != std::string::npos);
  r = cli("eval --preset R1-mini --checkpoint " + ckpt + " --dataset " + data.string());
  CHECK(r.code == 2);
  CHECK(r.out.find("[280, 16, 18]") != std::string::npos);
  CHECK(r.out.find("[280, 256, 128, 64, 18]") != std::string::npos);

  // Metrics convert to CSV.
  r = cli("analyze --metrics " + (a / "metrics.txt").string());
  CHECK(r.code == 0);
  CHECK(r.out.rfind("epoch,episodes,", 0) == 0);
}

TEST_CASE("cli: adversarial preset selects co-training") {
  auto a = scratch("co_a"), b = scratch("co_b");
  std::string common = "train --preset AR-mini --quiet --set hidden=16 test_size=10 eval_every=50 --episodes 100 "
                       "--seed 2 --out ";
  auto r = cli(common + a.string());
  CHECK(r.code == 0);
  CHECK(r.out.find("co-training done") != std::string::npos);
  REQUIRE(cli(common + b.string()).code == 0);
  CHECK(fs::exists(a / "tasks.txt"));
  CHECK(slurp(a / "tasks.txt") == slurp(b / "tasks.txt"));
  CHECK(slurp(a / "metrics.txt") == slurp(b / "metrics.txt"));
  CHECK(slurp(a / "generator_final.ckpt") == slurp(b / "generator_final.ckpt"));
}
