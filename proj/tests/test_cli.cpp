#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(CLI_BINARY) + " " + args + " > cli_stdout.txt 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("probe fixture reports no grid equilibrium and exits cleanly") {
  CHECK(run("probe --fixture tullock-counter --delta 0.01 --out cli_probe.json") == 0);
  CHECK(slurp("cli_stdout.txt").find("no grid PNE found") != std::string::npos);
  CHECK(slurp("cli_probe.json").find("\"count\": 0") != std::string::npos);
  std::remove("cli_probe.json");
}

TEST_CASE("gen and solve happy path") {
  CHECK(run("gen --kind random-graph --n 8 --r 0.5 --seed 3 --out cli_inst.json") == 0);
  CHECK(run("solve --instance cli_inst.json --algo gcs --out cli_solve.json") == 0);
  const std::string out = slurp("cli_solve.json");
  CHECK(out.find("\"algorithm\": \"gcs\"") != std::string::npos);
  CHECK(out.find("\"elapsed_sec\"") == std::string::npos);  // timings are opt-in
  std::remove("cli_solve.json");
}

TEST_CASE("solve hop on a non-tree instance exits 1 with a diagnostic") {
  CHECK(run("gen --kind random-graph --n 6 --r 0.9 --seed 4 --out cli_dense.json") == 0);
  CHECK(run("solve --instance cli_dense.json --algo hop") == 1);
  CHECK(slurp("cli_stdout.txt").find("not a tree") != std::string::npos);
  std::remove("cli_dense.json");
}

TEST_CASE("usage errors exit 2") {
  CHECK(run("solve --instance x.json --algo gcs --no-such-flag") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("") == 2);
}

TEST_CASE("missing instance file exits 1") {
  CHECK(run("solve --instance does_not_exist.json --algo gcs") == 1);
}

TEST_CASE("gen is byte-deterministic per seed") {
  CHECK(run("gen --kind random-graph --n 10 --r 0.4 --seed 11 --out cli_a.json") == 0);
  CHECK(run("gen --kind random-graph --n 10 --r 0.4 --seed 11 --out cli_b.json") == 0);
  CHECK(slurp("cli_a.json") == slurp("cli_b.json"));
  CHECK(run("gen --kind random-graph --n 10 --r 0.4 --seed 12 --out cli_c.json") == 0);
  CHECK(slurp("cli_a.json") != slurp("cli_c.json"));
  std::remove("cli_a.json");
  std::remove("cli_b.json");
  std::remove("cli_c.json");
}

TEST_CASE("gen covers the fixture kinds") {
  CHECK(run("gen --kind wta-counter --out cli_wta.json") == 0);
  CHECK(slurp("cli_wta.json").find("relax_quality_cap") != std::string::npos);
  CHECK(run("gen --kind tullock-counter --out cli_tl.json") == 0);
  CHECK(run("gen --kind clique --n 3 --edges 0-1,1-2,0-2 --out cli_k3.json") == 0);
  CHECK(run("gen --kind random-tree --n 7 --seed 5 --out cli_tree.json") == 0);
  CHECK(run("solve --instance cli_tree.json --algo hop --epsilon 0.1") == 0);
  for (const char* f : {"cli_wta.json", "cli_tl.json", "cli_k3.json", "cli_tree.json"})
    std::remove(f);
}

TEST_CASE("equilibrium subcommand writes a trace") {
  CHECK(run("gen --kind clique --n 2 --edges 0-1 --out cli_k2.json") == 0);
  CHECK(run("equilibrium --instance cli_k2.json --p 0.5,0.5 --out cli_eq.json "
            "--trace cli_trace.csv") == 0);
  CHECK(slurp("cli_eq.json").find("\"converged\": true") != std::string::npos);
  const std::string trace = slurp("cli_trace.csv");
  CHECK(trace.rfind("iter,x_1,x_2\n", 0) == 0);
  std::remove("cli_k2.json");
  std::remove("cli_eq.json");
  std::remove("cli_trace.csv");
}

TEST_CASE("check subcommand succeeds on a generated instance") {
  CHECK(run("gen --kind random-graph --n 5 --r 0.5 --seed 6 --out cli_chk.json") == 0);
  CHECK(run("check --instance cli_chk.json --samples 50") == 0);
  CHECK(run("check --instance cli_chk.json --mech tullock --samples 50") == 1);
  std::remove("cli_chk.json");
}

TEST_CASE("worker env var overrides the flag without changing output") {
  CHECK(run("gen --kind tullock-counter --out cli_fx.json") == 0);
  const std::string base = std::string(CLI_BINARY);
  CHECK(WEXITSTATUS(std::system(
            ("SPILLOVER_FORGE_WORKERS=3 " + base +
             " probe --fixture tullock-counter --delta 0.1 --out cli_p3.json > /dev/null 2>&1")
                .c_str())) == 0);
  CHECK(WEXITSTATUS(std::system(
            (base +
             " probe --fixture tullock-counter --delta 0.1 --out cli_p1.json > /dev/null 2>&1")
                .c_str())) == 0);
  CHECK(slurp("cli_p3.json") == slurp("cli_p1.json"));
  std::remove("cli_fx.json");
  std::remove("cli_p1.json");
  std::remove("cli_p3.json");
}
