#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "quench/model.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

RunResult run_cli(const std::string& args) {
  const char* exe = std::getenv("QUENCH_CLI");
  REQUIRE_MESSAGE(exe != nullptr, "QUENCH_CLI must point at the built binary");
  const std::string cmd = std::string(exe) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  char buffer[4096];
  while (std::fgets(buffer, sizeof(buffer), pipe) != nullptr) result.output += buffer;
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("quench_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  const std::string missing = path.string() + " should exist";
  REQUIRE_MESSAGE(in.good(), missing);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::size_t count_lines(const std::string& text) {
  std::size_t lines = 0;
  for (char ch : text) {
    if (ch == '\n') ++lines;
  }
  return lines;
}

}  // namespace

TEST_CASE("help succeeds and bad invocations exit with the usage code") {
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("fig2 --help").exit_code == 0);
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("--bogus-flag").exit_code == 2);
  CHECK(run_cli("fig2 --samples notanumber").exit_code == 2);
}

TEST_CASE("hamiltonian writes a reloadable spec and summarizes the spectrum") {
  const fs::path dir = fresh_dir("ham");
  const RunResult res =
      run_cli("hamiltonian --n 5 --sigma0 1.0 --sigma1 0.4 --seed 42 --out " + dir.string());
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("dim = 32") != std::string::npos);
  CHECK(res.output.find("nondegenerate") != std::string::npos);
  CHECK(res.output.find("warning") == std::string::npos);

  const nlohmann::json j = nlohmann::json::parse(read_file(dir / "spec.json"));
  const quench::SpinChainSpec loaded = quench::spec_from_json(j);
  const quench::SpinChainSpec expected = quench::sample_spec(5, 1.0, 0.4, 42);
  CHECK(loaded.n == expected.n);
  CHECK(loaded.h == expected.h);
  CHECK(loaded.b == expected.b);
  fs::remove_all(dir);
}

TEST_CASE("hamiltonian warns when spectral gaps coincide") {
  const fs::path dir = fresh_dir("ham_uncoupled");
  const RunResult res = run_cli("hamiltonian --n 4 --sigma1 0 --seed 7 --out " + dir.string());
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("warning: coinciding spectral gaps detected") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("unwritable output paths exit with the io error code") {
  const RunResult res = run_cli("hamiltonian --n 3 --out /dev/null/nope");
  CHECK(res.exit_code == 2);
  CHECK(res.output.find("error:") != std::string::npos);
}

TEST_CASE("fig2 writes the three output files with consistent shapes") {
  const fs::path dir = fresh_dir("fig2");
  const RunResult res =
      run_cli("fig2 --n 3,4 --samples 2 --seed 5 --workers 1 --out " + dir.string());
  CHECK(res.exit_code == 0);

  const std::string records = read_file(dir / "records.csv");
  CHECK(count_lines(records) == 1 + 2 * 8 + 2 * 16);
  CHECK(records.rfind("n,sample_index,seed,", 0) == 0);

  const std::string panels = read_file(dir / "panels.csv");
  CHECK(count_lines(panels) == 1 + 2);

  const nlohmann::json meta = nlohmann::json::parse(read_file(dir / "metadata.json"));
  CHECK(meta["plan"]["samples_per_n"] == 2);
  CHECK(meta["plan"]["n_values"] == nlohmann::json({3, 4}));
  CHECK(meta["plan"]["master_seed"] == 5);

  // Re-running the same plan reproduces the records byte for byte.
  const fs::path dir2 = fresh_dir("fig2_again");
  const RunResult res2 =
      run_cli("fig2 --n 3,4 --samples 2 --seed 5 --workers 2 --out " + dir2.string());
  CHECK(res2.exit_code == 0);
  CHECK(read_file(dir2 / "records.csv") == records);
  CHECK(read_file(dir2 / "panels.csv") == panels);
  fs::remove_all(dir);
  fs::remove_all(dir2);
}

TEST_CASE("fig2 refuses chain lengths beyond the hard cap") {
  const fs::path dir = fresh_dir("fig2_cap");
  const RunResult res = run_cli("fig2 --n 13 --samples 1 --out " + dir.string());
  CHECK(res.exit_code == 3);
  CHECK(res.output.find("resource cap") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "records.csv"));
  fs::remove_all(dir);
}

TEST_CASE("quench prints a self-consistent record as JSON") {
  const RunResult res = run_cli("quench --n 4 --sigma1 0.4 --seed 11 --k 6 --subsystem-site 2");
  CHECK(res.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(res.output);
  CHECK(j["n"] == 4);
  CHECK(j["k_config_bits"] == 6);
  CHECK(j["D_init"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(j["Delta"].get<double>() ==
        doctest::Approx(j["D_omega"].get<double>() - j["C_eq_1"].get<double>() -
                        j["C_eq_2"].get<double>())
            .epsilon(1e-12));
  CHECK(j["thm1_lb"].get<double>() ==
        doctest::Approx(j["D_init"].get<double>() - j["R_1"].get<double>() -
                        j["R_2"].get<double>())
            .epsilon(1e-12));
}

TEST_CASE("verify passes, reports every check, and honors fault injection") {
  const fs::path dir = fresh_dir("verify");
  const RunResult res = run_cli("verify --out " + dir.string());
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("[PASS] hermiticity") != std::string::npos);
  CHECK(res.output.find("[FAIL]") == std::string::npos);
  CHECK(res.output.find("all checks passed") != std::string::npos);

  const nlohmann::json j = nlohmann::json::parse(read_file(dir / "verification.json"));
  CHECK(j["all_pass"].get<bool>());
  CHECK(j["checks"].size() == 10);
  fs::remove_all(dir);

  const RunResult faulty = run_cli("verify --inject-fault hermiticity");
  CHECK(faulty.exit_code == 1);
  CHECK(faulty.output.find("[FAIL] hermiticity") != std::string::npos);
  CHECK(faulty.output.find("verification FAILED") != std::string::npos);

  const RunResult unknown = run_cli("verify --inject-fault bogus");
  CHECK(unknown.exit_code == 2);
  CHECK(unknown.output.find("unknown fault") != std::string::npos);
}

TEST_CASE("config files fill in defaults and the command line wins") {
  const fs::path dir = fresh_dir("config");
  const fs::path cfg = dir / "run.ini";
  {
    std::ofstream out(cfg);
    out << "[fig2]\n"
        << "samples=1\n"
        << "n=3\n";
  }

  const fs::path out1 = dir / "from_config";
  const RunResult res1 =
      run_cli("--config " + cfg.string() + " fig2 --workers 1 --out " + out1.string());
  CHECK(res1.exit_code == 0);
  const nlohmann::json meta1 = nlohmann::json::parse(read_file(out1 / "metadata.json"));
  CHECK(meta1["plan"]["samples_per_n"] == 1);
  CHECK(meta1["plan"]["n_values"] == nlohmann::json({3}));

  const fs::path out2 = dir / "overridden";
  const RunResult res2 = run_cli("--config " + cfg.string() + " fig2 --samples 2 --workers 1 --out " +
                                 out2.string());
  CHECK(res2.exit_code == 0);
  const nlohmann::json meta2 = nlohmann::json::parse(read_file(out2 / "metadata.json"));
  CHECK(meta2["plan"]["samples_per_n"] == 2);
  CHECK(meta2["plan"]["n_values"] == nlohmann::json({3}));
  fs::remove_all(dir);
}
