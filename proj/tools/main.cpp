// nostcap command-line tool: load NOST channels, solve the feedback-capacity
// programs with and without encoder CSI, certify CSI gain, sweep the
// noisy-POST family, run Monte Carlo simulations and validate channel files.
//
// Exit codes: 0 ok, 1 certificate not found, 2 channel not connected,
// 3 invalid input, 64 usage error.

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "nostcap/channel.hpp"
#include "nostcap/errors.hpp"
#include "nostcap/io.hpp"
#include "nostcap/markov.hpp"
#include "nostcap/simulate.hpp"
#include "nostcap/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNoCertificate = 1;
constexpr int kExitNotConnected = 2;
constexpr int kExitInvalidInput = 3;
constexpr int kExitUsage = 64;

struct SolveArgs {
  std::string channel;
  std::string setting = "fb";
  double tol = 1e-9;
  std::string out;
  bool normalize = false;
};

struct SweepArgs {
  double alpha = 0.5;
  double eta_start = 0.0;
  double eta_end = 1.0;
  double eta_step = 0.05;
  double tol = 1e-9;
  std::string out;
};

struct CertifyArgs {
  std::string channel;
  double tol = 1e-9;
  std::string out;
  bool normalize = false;
};

struct SimulateArgs {
  std::string channel;
  std::string policy;
  long long steps = 0;
  std::uint64_t seed = 0;
  std::string out;
  bool normalize = false;
};

struct ValidateArgs {
  std::string channel;
  bool normalize = false;
};

struct OracleArgs {
  std::string channel;
  std::string setting = "fb";
  double step = 0.01;
  bool normalize = false;
};

nostcap::NostChannel load(const std::string& path, bool normalize) {
  nostcap::NostChannel c = nostcap::load_channel(path);
  return normalize ? nostcap::normalized_rows(c) : c;
}

// Locale-independent with at least 6 significant decimals.
std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

int run_solve(const SolveArgs& args) {
  const nostcap::NostChannel c = load(args.channel, args.normalize);
  nostcap::SolverConfig cfg;
  cfg.tolerance = args.tol;
  const nostcap::CapacityResult res = args.setting == "fb"
                                          ? nostcap::solve_cfb(c, cfg)
                                          : nostcap::solve_cfb_csi(c, cfg);
  std::printf("%.6f\n", res.value_bits);
  if (!args.out.empty())
    nostcap::write_text_file(args.out, nostcap::capacity_result_to_json(res));
  return kExitOk;
}

int run_sweep(const SweepArgs& args) {
  std::vector<double> etas;
  for (int k = 0;; ++k) {
    const double eta = args.eta_start + k * args.eta_step;
    if (eta > args.eta_end + 1e-12) break;
    etas.push_back(std::min(eta, 1.0));
  }
  if (etas.empty()) {
    std::fprintf(stderr, "sweep-noisy-post: empty eta grid\n");
    return kExitUsage;
  }

  struct Row {
    double eta, c_fb, c_fb_csi, a_opt, b_opt;
  };
  std::vector<Row> rows(etas.size());

  unsigned n_threads = std::thread::hardware_concurrency();
  if (n_threads == 0) n_threads = 1;
  if (const char* env = std::getenv("NOSTCAP_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(cap));
  }
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(etas.size()));

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= etas.size()) return;
      try {
        const nostcap::NostChannel c = nostcap::make_noisy_post(args.alpha, etas[i]);
        nostcap::SolverConfig cfg;
        cfg.tolerance = args.tol;
        const nostcap::CapacityResult fb = nostcap::solve_cfb(c, cfg);
        const nostcap::CapacityResult csi = nostcap::solve_cfb_csi(c, cfg);
        rows[i] = {etas[i], fb.value_bits, csi.value_bits,
                   fb.policy.p(0, 1), fb.policy.p(1, 0)};
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);

  std::string csv = "eta,c_fb,c_fb_csi,a_opt,b_opt\n";
  for (const Row& r : rows) {
    // snap eta for display; the grid values are multiples of the step
    const double eta_shown = std::round(r.eta * 1e9) / 1e9;
    csv += fmt(eta_shown) + "," + fmt(r.c_fb) + "," + fmt(r.c_fb_csi) + "," +
           fmt(r.a_opt) + "," + fmt(r.b_opt) + "\n";
  }
  if (args.out.empty())
    std::fputs(csv.c_str(), stdout);
  else
    nostcap::write_text_file(args.out, csv);
  return kExitOk;
}

int run_certify(const CertifyArgs& args) {
  const nostcap::NostChannel c = load(args.channel, args.normalize);
  nostcap::SolverConfig cfg;
  cfg.tolerance = args.tol;
  const nostcap::CapacityResult csi = nostcap::solve_cfb_csi(c, cfg);
  const nostcap::CsiCertificate cert = nostcap::csi_gain_certificate(c, csi, cfg);
  const bool ok = cert.status == nostcap::CertificateStatus::NoGainCertified;
  std::printf("%s max_kernel_mismatch=%s\n",
              ok ? "no_gain_certified" : "no_certificate_found",
              fmt(cert.max_kernel_mismatch).c_str());
  if (!args.out.empty())
    nostcap::write_text_file(args.out, nostcap::csi_certificate_to_json(cert));
  return ok ? kExitOk : kExitNoCertificate;
}

int run_simulate(const SimulateArgs& args) {
  const nostcap::NostChannel c = load(args.channel, args.normalize);
  const nostcap::Policy policy = nostcap::load_policy(args.policy);
  nostcap::SimConfig cfg;
  cfg.steps = args.steps;
  cfg.seed = args.seed;

  nostcap::SimReport rep;
  if (policy.p.dim1() == c.alphabets.x_size) {
    rep = nostcap::simulate_policy(c, policy, cfg);
  } else {
    const nostcap::StrategySet strategies = nostcap::enumerate_strategies(c.alphabets);
    if (policy.p.dim1() != static_cast<int>(strategies.size()))
      throw nostcap::Error(
          "simulate: policy must have |X| columns (input mode) or |X|^|S| "
          "columns (strategy mode); got " + std::to_string(policy.p.dim1()));
    rep = nostcap::simulate_policy(c, policy, strategies, cfg);
  }
  std::printf("%.6f\n", rep.empirical_rate_bits);
  if (!args.out.empty()) {
    const bool csv = args.out.size() > 4 &&
                     args.out.compare(args.out.size() - 4, 4, ".csv") == 0;
    nostcap::write_text_file(args.out, csv ? nostcap::sim_counts_to_csv(rep)
                                           : nostcap::sim_report_to_json(rep));
  }
  return kExitOk;
}

int run_validate(const ValidateArgs& args) {
  const nostcap::NostChannel c = load(args.channel, args.normalize);
  const nostcap::ValidationReport report = nostcap::validate_channel(c);
  if (report.empty()) {
    std::printf("valid\n");
    return kExitOk;
  }
  for (const auto& v : report)
    std::fprintf(stderr, "%s\n", nostcap::to_string(v).c_str());
  return kExitInvalidInput;
}

int run_oracle(const OracleArgs& args) {
  const nostcap::NostChannel c = load(args.channel, args.normalize);
  const nostcap::AveragedChannel av =
      args.setting == "fb"
          ? nostcap::average_channel(c)
          : nostcap::build_strategy_channel(
                c, nostcap::enumerate_strategies(c.alphabets));
  std::printf("%.6f\n", nostcap::grid_oracle(av, args.step));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feedback capacity of NOST channels (with and without encoder CSI)"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  CLI::App* solve = app.add_subcommand(
      "solve", "Solve the feedback-capacity program for a channel file");
  solve->add_option("--channel", solve_args.channel, "Channel JSON file")->required();
  solve->add_option("--setting", solve_args.setting, "fb (no CSI) or fb-csi")
      ->check(CLI::IsMember({"fb", "fb-csi"}));
  solve->add_option("--tol", solve_args.tol, "Optimality-gap target")
      ->check(CLI::PositiveNumber);
  solve->add_option("--out", solve_args.out, "Write the result JSON here");
  solve->add_flag("--normalize", solve_args.normalize, "Rescale rows to sum to 1");

  SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand(
      "sweep-noisy-post", "Sweep the noisy-POST state-noise parameter, CSV out");
  sweep->add_option("--alpha", sweep_args.alpha, "Output-noise parameter")
      ->check(CLI::Range(0.0, 1.0));
  sweep->add_option("--eta-start", sweep_args.eta_start)->check(CLI::Range(0.0, 1.0));
  sweep->add_option("--eta-end", sweep_args.eta_end)->check(CLI::Range(0.0, 1.0));
  sweep->add_option("--eta-step", sweep_args.eta_step)->check(CLI::PositiveNumber);
  sweep->add_option("--tol", sweep_args.tol, "Optimality-gap target")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--out", sweep_args.out, "CSV path (default stdout)");

  CertifyArgs certify_args;
  CLI::App* certify = app.add_subcommand(
      "certify-csi", "Check the no-gain-from-CSI sufficient condition");
  certify->add_option("--channel", certify_args.channel, "Channel JSON file")->required();
  certify->add_option("--tol", certify_args.tol, "Optimality-gap target")
      ->check(CLI::PositiveNumber);
  certify->add_option("--out", certify_args.out, "Write the certificate JSON here");
  certify->add_flag("--normalize", certify_args.normalize, "Rescale rows to sum to 1");

  SimulateArgs sim_args;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Monte Carlo simulation of a policy on a channel");
  simulate->add_option("--channel", sim_args.channel, "Channel JSON file")->required();
  simulate->add_option("--policy", sim_args.policy, "Policy JSON file")->required();
  simulate->add_option("--steps", sim_args.steps, "Number of steps")
      ->required()
      ->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim_args.seed, "RNG seed");
  simulate->add_option("--out", sim_args.out,
                       "Report path (.csv writes the count table as CSV)");
  simulate->add_flag("--normalize", sim_args.normalize, "Rescale rows to sum to 1");

  ValidateArgs validate_args;
  CLI::App* validate = app.add_subcommand("validate", "Validate a channel file");
  validate->add_option("--channel", validate_args.channel, "Channel JSON file")->required();
  validate->add_flag("--normalize", validate_args.normalize, "Rescale rows to sum to 1");

  OracleArgs oracle_args;
  CLI::App* oracle = app.add_subcommand(
      "oracle", "Exhaustive policy-grid lower bound (slow, small channels)");
  oracle->add_option("--channel", oracle_args.channel, "Channel JSON file")->required();
  oracle->add_option("--setting", oracle_args.setting, "fb or fb-csi")
      ->check(CLI::IsMember({"fb", "fb-csi"}));
  oracle->add_option("--tol", oracle_args.step, "Grid step (default 0.01)")
      ->check(CLI::PositiveNumber);
  oracle->add_flag("--normalize", oracle_args.normalize, "Rescale rows to sum to 1");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (app.got_subcommand(solve)) return run_solve(solve_args);
    if (app.got_subcommand(sweep)) return run_sweep(sweep_args);
    if (app.got_subcommand(certify)) return run_certify(certify_args);
    if (app.got_subcommand(simulate)) return run_simulate(sim_args);
    if (app.got_subcommand(validate)) return run_validate(validate_args);
    if (app.got_subcommand(oracle)) return run_oracle(oracle_args);
  } catch (const nostcap::NotConnectedError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNotConnected;
  } catch (const nostcap::InvalidChannelError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    for (const auto& v : e.report())
      std::fprintf(stderr, "  %s\n", nostcap::to_string(v).c_str());
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalidInput;
  }
  return kExitUsage;
}
