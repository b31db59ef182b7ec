#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "quench/experiments.hpp"
#include "quench/format.hpp"
#include "quench/model.hpp"
#include "quench/spectral.hpp"

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

int cmd_hamiltonian(int n, double sigma0, double sigma1, std::uint64_t seed,
                    const std::string& out_dir) {
  const quench::SpinChainSpec spec = quench::sample_spec(n, sigma0, sigma1, seed);
  fs::create_directories(out_dir);
  write_file(fs::path(out_dir) / "spec.json", quench::spec_to_json(spec).dump(2) + "\n");

  const quench::SpectralData sd = quench::diagonalize(quench::build_hamiltonian(spec).h);
  std::cout << "spec written to " << (fs::path(out_dir) / "spec.json").string() << "\n"
            << "dim = " << sd.dim() << "\n"
            << "eigenvalue range = [" << quench::format_double(sd.eigenvalues(0)) << ", "
            << quench::format_double(sd.eigenvalues(sd.dim() - 1)) << "]\n"
            << "degeneracy blocks = " << sd.blocks.size() << " of " << sd.dim()
            << (sd.nondegenerate() ? " (nondegenerate)" : " (degenerate)") << "\n";
  if (sd.gap_degenerate) {
    std::cout << "warning: coinciding spectral gaps detected\n";
  }
  return 0;
}

int cmd_fig2(const quench::ExperimentPlan& plan, const std::string& out_dir) {
  const quench::Figure2Result result = quench::run_figure2(plan);
  fs::create_directories(out_dir);
  write_file(fs::path(out_dir) / "records.csv", quench::records_csv(result.records));
  write_file(fs::path(out_dir) / "panels.csv", quench::panels_csv(result.panels));
  write_file(fs::path(out_dir) / "metadata.json", quench::plan_metadata(plan).dump(2) + "\n");
  std::cout << "wrote " << result.records.size() << " records and " << result.panels.size()
            << " aggregate rows to " << out_dir << "\n";
  return 0;
}

int cmd_verify(const quench::VerificationOptions& opts, const std::string& out_dir) {
  const quench::VerificationReport report = quench::run_verification_suite(opts);
  for (const quench::CheckResult& check : report.checks) {
    std::cout << (check.pass ? "[PASS] " : "[FAIL] ") << check.name << ": " << check.details
              << "\n";
  }
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "verification.json", report.to_json().dump(2) + "\n");
  }
  std::cout << (report.all_pass() ? "all checks passed" : "verification FAILED") << "\n";
  return report.all_pass() ? 0 : 1;
}

int cmd_quench(int n, double sigma0, double sigma1, std::uint64_t seed, std::uint64_t k,
               int subsystem_site) {
  const quench::SpinChainSpec spec = quench::sample_spec(n, sigma0, sigma1, seed);
  const quench::QuenchRecord record = quench::run_quench_pair(spec, k, subsystem_site);
  std::cout << quench::record_to_json(record).dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Disordered spin-chain quench ensembles: exact time-averaged states and "
      "equilibration diagnostics"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file with [subcommand] sections");

  int ham_n = 6;
  double ham_sigma0 = 1.0, ham_sigma1 = 0.4;
  std::uint64_t ham_seed = 1;
  std::string ham_out = "out";
  CLI::App* ham = app.add_subcommand(
      "hamiltonian", "Draw one disorder realization, write its spec, summarize its spectrum");
  ham->add_option("--n", ham_n, "chain length")->capture_default_str();
  ham->add_option("--sigma0", ham_sigma0, "field std dev (energy unit)")->capture_default_str();
  ham->add_option("--sigma1", ham_sigma1, "coupling std dev")->capture_default_str();
  ham->add_option("--seed", ham_seed, "spec seed")->capture_default_str();
  ham->add_option("--out", ham_out, "output directory")->capture_default_str();

  quench::ExperimentPlan plan;
  std::string fig2_out = "out";
  CLI::App* fig2 = app.add_subcommand(
      "fig2",
      "Ensemble sweep over chain lengths: per-pair records plus per-n aggregates. "
      "Reference protocol: --samples 100 --sigma1-ratio 0.4 --subsystem-site 1");
  fig2->add_option("--n", plan.n_values, "chain lengths (comma separated)")
      ->delimiter(',')
      ->capture_default_str();
  fig2->add_option("--samples", plan.samples_per_n, "disorder samples per n")
      ->capture_default_str();
  fig2->add_option("--sigma0", plan.sigma0, "field std dev (energy unit)")
      ->capture_default_str();
  fig2->add_option("--sigma1-ratio", plan.sigma1_ratio, "coupling/field std-dev ratio")
      ->capture_default_str();
  fig2->add_option("--subsystem-site", plan.subsystem_site, "site kept as the subsystem")
      ->capture_default_str();
  fig2->add_option("--seed", plan.master_seed, "master seed")->capture_default_str();
  fig2->add_option("--workers", plan.workers, "worker threads (0 = hardware)")
      ->capture_default_str();
  fig2->add_option("--eigenstate-cap", plan.eigenstate_cap,
                   "initial configurations per sample beyond the full-enumeration range")
      ->capture_default_str();
  fig2->add_option("--n-cap", plan.n_hard_cap, "hard cap on chain length")
      ->capture_default_str();
  fig2->add_option("--out", fig2_out, "output directory")->capture_default_str();

  quench::VerificationOptions vopts;
  std::string verify_out;
  CLI::App* verify = app.add_subcommand("verify", "Run the identity/inequality check suite");
  verify->add_option("--seed", vopts.seed, "suite seed")->capture_default_str();
  verify->add_option("--workers", vopts.workers, "worker threads")->capture_default_str();
  verify->add_option("--inject-fault", vopts.inject_fault,
                     "deliberately corrupt a check input (test hook; 'hermiticity')");
  verify->add_option("--out", verify_out, "directory for verification.json (optional)");

  int q_n = 6;
  double q_sigma0 = 1.0, q_sigma1 = 0.4;
  std::uint64_t q_seed = 1, q_k = 0;
  int q_site = 1;
  CLI::App* quench_cmd = app.add_subcommand(
      "quench", "Run one flip-protocol pair and print the record as JSON");
  quench_cmd->add_option("--n", q_n, "chain length")->capture_default_str();
  quench_cmd->add_option("--sigma0", q_sigma0, "field std dev")->capture_default_str();
  quench_cmd->add_option("--sigma1", q_sigma1, "coupling std dev")->capture_default_str();
  quench_cmd->add_option("--seed", q_seed, "spec seed")->capture_default_str();
  quench_cmd->add_option("--k", q_k, "initial configuration (bit pattern)")
      ->capture_default_str();
  quench_cmd->add_option("--subsystem-site", q_site, "site to flip and keep")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(ham)) {
      return cmd_hamiltonian(ham_n, ham_sigma0, ham_sigma1, ham_seed, ham_out);
    }
    if (app.got_subcommand(fig2)) return cmd_fig2(plan, fig2_out);
    if (app.got_subcommand(verify)) return cmd_verify(vopts, verify_out);
    if (app.got_subcommand(quench_cmd)) {
      return cmd_quench(q_n, q_sigma0, q_sigma1, q_seed, q_k, q_site);
    }
    std::cerr << "no subcommand\n";
    return 2;
  } catch (const quench::ResourceCapError& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return 3;
  } catch (const quench::VerificationError& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
