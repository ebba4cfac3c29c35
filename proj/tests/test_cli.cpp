#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace {

std::string binary() {
  const char* env = std::getenv("FRACMATCH_BIN");
  REQUIRE_MESSAGE(env != nullptr, "FRACMATCH_BIN must point at the CLI");
  return env;
}

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string tmp =
      (std::filesystem::temp_directory_path() / "fracmatch_cli_out.txt").string();
  const std::string cmd = binary() + " " + args + " > " + tmp + " 2>&1";
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream in(tmp);
  std::ostringstream os;
  os << in.rdbuf();
  r.out = os.str();
  return r;
}

struct TempDir {
  std::filesystem::path dir;
  TempDir() {
    dir = std::filesystem::temp_directory_path() /
          ("fracmatch_cli_" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(dir);
  }
  ~TempDir() { std::filesystem::remove_all(dir); }
  std::string path(const char* name) const { return (dir / name).string(); }
};

}  // namespace

TEST_CASE("eval prints both forms and the complement") {
  const RunResult r = run("eval --n 10 --k 3");
  CHECK(r.code == 0);
  CHECK(r.out.find("p(10,3) = 85") != std::string::npos);
  CHECK(r.out.find("argmax a = {3}") != std::string::npos);
  CHECK(r.out.find("q(10,3) = 35") != std::string::npos);
  CHECK(r.out.find("shifted form value = 85") != std::string::npos);
  CHECK(r.out.find("complement holds") != std::string::npos);
}

TEST_CASE("usage errors exit 1") {
  CHECK(run("eval --n 10").code == 1);          // missing --k
  CHECK(run("nonsense").code == 1);             // unknown subcommand
  CHECK(run("oracle q --n 12 --k 3").code == 1);  // over the cap: refusal
}

TEST_CASE("help exits 0") {
  CHECK(run("--help").code == 0);
}

TEST_CASE("sweep runs clean, flags violations, interrupts and resumes") {
  TempDir tmp;
  const std::string out = tmp.path("r.jsonl");
  const std::string cp = tmp.path("c.json");

  const RunResult clean =
      run("sweep --n-min 2 --n-max 60 --out " + out + " --checkpoint " + cp + " --jobs 2");
  CHECK(clean.code == 0);
  CHECK(clean.out.find("violations 0") != std::string::npos);

  const RunResult viol = run("sweep --n-min 10 --n-max 10 --k-rule list --k 3 --out " +
                             tmp.path("v.jsonl") + " --checkpoint " + tmp.path("vc.json"));
  CHECK(viol.code == 2);

  const RunResult part = run("sweep --n-min 2 --n-max 80 --stop-after 20 --out " +
                             tmp.path("p.jsonl") + " --checkpoint " + tmp.path("pc.json"));
  CHECK(part.code == 3);
  const RunResult rest = run("sweep --n-min 2 --n-max 80 --resume --out " + tmp.path("p.jsonl") +
                             " --checkpoint " + tmp.path("pc.json"));
  CHECK(rest.code == 0);
}

TEST_CASE("oracle pfm on an edge-list file") {
  TempDir tmp;
  {
    std::ofstream f(tmp.path("star.txt"));
    f << "# star\n4 2\n1 2\n1 3\n1 4\n";
  }
  const RunResult sep = run("oracle pfm --input " + tmp.path("star.txt"));
  CHECK(sep.code == 0);
  CHECK(sep.out.find("\"separated\"") != std::string::npos);
  CHECK(sep.out.find("\"verified\":true") != std::string::npos);

  {
    std::ofstream f(tmp.path("full.txt"));
    f << "4 2\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n";
  }
  const RunResult pfm = run("oracle pfm --input " + tmp.path("full.txt"));
  CHECK(pfm.code == 0);
  CHECK(pfm.out.find("perfect_fractional_matching") != std::string::npos);
  CHECK(pfm.out.find("\"verified\":true") != std::string::npos);
}

TEST_CASE("oracle count-u") {
  const RunResult r = run("oracle count-u --beta 3,-1,-1,-1 --k 2");
  CHECK(r.code == 0);
  CHECK(r.out.find("\"count\":3") != std::string::npos);
}

TEST_CASE("optimize returns the conjectured count with step detection") {
  const RunResult r = run("optimize --n 10 --k 3 --a 3 --restarts 3 --json");
  CHECK(r.code == 0);
  CHECK(r.out.find("\"count\": \"85\"") != std::string::npos);
  CHECK(r.out.find("\"is_uniform_step\": true") != std::string::npos);
}

TEST_CASE("bounds report and strict mode") {
  TempDir tmp;
  const RunResult plain = run("bounds --report");
  CHECK(plain.code == 0);
  CHECK(plain.out.find("chebyshev_term") != std::string::npos);
  CHECK(plain.out.find("fail_as_printed") != std::string::npos);
  CHECK(plain.out.find("boundary") != std::string::npos);

  const RunResult strict = run("bounds --report --strict --json " + tmp.path("b.json"));
  CHECK(strict.code == 2);  // the audit always carries fail-as-printed lines
  std::ifstream jf(tmp.path("b.json"));
  std::ostringstream js;
  js << jf.rdbuf();
  CHECK(js.str().find("\"status\": \"fail_as_printed\"") != std::string::npos);
}

TEST_CASE("selftest is deterministic for a fixed seed") {
  const RunResult a = run("selftest --seed 5");
  const RunResult b = run("selftest --seed 5");
  CHECK(a.code == 0);
  CHECK(b.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("selftest passed") != std::string::npos);
}
