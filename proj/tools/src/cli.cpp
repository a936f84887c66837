#include "goom_cli/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "goom/harness.hpp"
#include "goom/lyapunov.hpp"
#include "goom/parallel.hpp"
#include "goom/rng.hpp"
#include "goom/ssm.hpp"
#include "goom/systems.hpp"

namespace goom::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Common {
  std::uint64_t seed = 1;
  int workers = 0;
  std::string out_path;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--workers", c.workers, "Worker threads (0: GOOM_WORKERS or all cores)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("-o,--out", c.out_path, "Write CSV here instead of stdout");
}

// Writes the manifest followed by the buffered CSV body.
class Report {
 public:
  Report(std::string command, const Common& common, std::string backing)
      : command_(std::move(command)),
        common_(common),
        backing_(std::move(backing)),
        started_(utc_now()),
        start_(std::chrono::steady_clock::now()) {}

  std::ostream& body() { return body_; }

  void emit(std::ostream& fallback) const {
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    std::ofstream file;
    std::ostream* dst = &fallback;
    if (!common_.out_path.empty()) {
      file.open(common_.out_path);
      if (!file) throw std::runtime_error("cannot open '" + common_.out_path + "' for writing");
      dst = &file;
    }
    *dst << "# command: " << command_ << '\n'
         << "# seed: " << common_.seed << '\n'
         << "# backing: " << backing_ << '\n'
         << "# workers: " << resolved_workers(common_.workers) << '\n'
         << "# rng: " << kRngId << '\n'
         << "# version: " << kVersion << '\n'
         << "# started_utc: " << started_ << '\n'
         << "# wall_seconds: " << num(elapsed) << '\n'
         << body_.str();
    dst->flush();
    if (!*dst) throw std::runtime_error("failed to write CSV output");
  }

  static int resolved_workers(int w) { return w > 0 ? w : default_workers(); }

 private:
  std::string command_;
  Common common_;
  std::string backing_;
  std::string started_;
  std::chrono::steady_clock::time_point start_;
  std::ostringstream body_;
};

// chain ----------------------------------------------------------------------

struct ChainOpts {
  Common common;
  std::vector<std::size_t> d;
  std::size_t steps = 100000;
  std::string backend = "goom64";
  std::size_t trials = 30;
};

int cmd_chain(const ChainOpts& o, const std::string& command, std::ostream& out) {
  Backend backend;
  try {
    backend = backend_from_string(o.backend);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  Report report(command, o.common, o.backend);
  report.body() << "d,trial,backend,survived_steps,failure_mode\n";
  for (std::size_t d : o.d) {
    ChainConfig cfg;
    cfg.d = d;
    cfg.T_max = o.steps;
    cfg.backend = backend;
    cfg.seed = o.common.seed;
    cfg.trials = o.trials;
    cfg.workers = Report::resolved_workers(o.common.workers);
    const ChainResult r = run_chain(cfg);
    for (std::size_t k = 0; k < r.trials.size(); ++k)
      report.body() << d << ',' << k << ',' << o.backend << ',' << r.trials[k].survived_steps << ','
                    << to_string(r.trials[k].failure_mode) << '\n';
  }
  report.emit(out);
  return kOk;
}

// lyapunov -------------------------------------------------------------------

struct LyapOpts {
  Common common;
  std::string system;
  std::size_t steps = 100000;
  std::size_t burn_in = 10000;
  std::string method = "seq";
  double threshold = 0.99;
  std::size_t block = 64;
};

JacobianChain load_chain(const LyapOpts& o) {
  if (o.system.rfind("file:", 0) == 0) return read_goomjac_file(o.system.substr(5));
  DynamicalSystem sys;
  try {
    sys = builtin_system(o.system);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return integrate_chain(sys, sys.default_initial_state, o.burn_in, o.steps, o.common.seed);
}

void check_system_name(const std::string& s) {
  if (s.rfind("file:", 0) == 0) {
    if (s.size() == 5) throw UsageError("--system file: needs a path");
    return;
  }
  if (s != "lorenz" && s != "rossler" && s != "henon")
    throw UsageError("unknown system '" + s + "' (expected lorenz, rossler, henon or file:<path>)");
}

int cmd_lyapunov(const LyapOpts& o, bool spectrum, const std::string& command, std::ostream& out) {
  check_system_name(o.system);
  if (o.method != "seq" && o.method != "par") throw UsageError("--method must be seq or par");
  Report report(command, o.common, "goom64");
  const JacobianChain chain = load_chain(o);
  const int workers = Report::resolved_workers(o.common.workers);

  report.body() << "exponent_index,lambda,method,wall_seconds,resets\n";
  if (spectrum) {
    const Eigen::MatrixXd S0 = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(chain.dim),
                                                         static_cast<Eigen::Index>(chain.dim));
    const SpectrumResult r = o.method == "seq"
                                 ? spectrum_sequential(chain, S0)
                                 : spectrum_parallel(chain, S0, ParallelOptions{o.threshold, o.block, workers});
    for (std::size_t i = 0; i < r.lambdas.size(); ++i)
      report.body() << i << ',' << num(r.lambdas[i]) << ',' << to_string(r.method) << ',' << num(r.wall_seconds)
                    << ',' << r.resets << '\n';
  } else {
    Eigen::VectorXd u0 = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(chain.dim));
    u0.normalize();
    const auto start = std::chrono::steady_clock::now();
    const double lle = o.method == "seq" ? lle_sequential(chain, u0) : lle_parallel(chain, u0, o.block, workers);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.body() << 0 << ',' << num(lle) << ',' << o.method << ',' << num(secs) << ',' << 0 << '\n';
  }
  report.emit(out);
  return kOk;
}

struct ExportOpts {
  LyapOpts base;
  std::string path;
};

int cmd_export(const ExportOpts& o, const std::string& command, std::ostream& out) {
  check_system_name(o.base.system);
  if (o.base.system.rfind("file:", 0) == 0) throw UsageError("export needs a built-in system");
  const JacobianChain chain = load_chain(o.base);
  write_goomjac_file(o.path, chain);
  Report report(command, o.base.common, "binary64");
  report.body() << "path,d,T,dt\n" << o.path << ',' << chain.dim << ',' << chain.T() << ',' << num(chain.dt) << '\n';
  report.emit(out);
  return kOk;
}

// ssm ------------------------------------------------------------------------

struct SsmOpts {
  Common common;
  std::size_t d = 8;
  std::size_t T = 512;
  double rho = 1.5;
  bool check = false;
  std::size_t block = 64;
};

int cmd_ssm(const SsmOpts& o, const std::string& command, std::ostream& out) {
  const int workers = Report::resolved_workers(o.common.workers);
  const SsmParams p = random_ssm_params(o.d, o.rho, o.common.seed);
  const std::vector<Eigen::VectorXd> u = random_inputs(o.d, o.T, o.common.seed);
  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(o.d));
  const SsmRun par = ssm_forward_parallel(p, x0, u, o.block, workers);

  Report report(command, o.common, "goom64");
  if (!o.check) {
    report.body() << "t,log_scale,max_abs_scaled,y_norm\n";
    for (std::size_t t = 0; t < par.states.size(); ++t)
      report.body() << t + 1 << ',' << num(par.scales[t]) << ',' << num(par.scaled[t].cwiseAbs().maxCoeff()) << ','
                    << num(par.y[t].norm()) << '\n';
    report.emit(out);
    return kOk;
  }

  const SsmRun seq = ssm_forward_sequential(p, x0, u);
  const SsmOracleReport oracle = ssm_oracle_check(p, x0, u, par);
  double par_seq = 0.0;
  std::size_t signs = 0;
  for (std::size_t t = 0; t < par.states.size(); ++t) {
    par_seq = std::max(par_seq, max_relative_log_diff(par.states[t], seq.states[t]));
    signs += sign_mismatches(par.states[t], seq.states[t]);
  }
  std::size_t nonfinite = 0;
  for (const auto& x : ssm_states_direct(p, x0, u))
    if (!x.allFinite()) ++nonfinite;

  const bool oracle_ok = oracle.max_relative_error <= 1e-9;
  const bool agree_ok = par_seq <= 1e-8 && signs == 0;
  auto yes = [](bool b) { return b ? "yes" : "no"; };
  report.body() << "check,value,tolerance,pass\n"
                << "oracle_max_relative_error," << num(oracle.max_relative_error) << ",1e-09," << yes(oracle_ok) << '\n'
                << "parallel_sequential_max_rel_log_diff," << num(par_seq) << ",1e-08," << yes(par_seq <= 1e-8)
                << '\n'
                << "parallel_sequential_sign_mismatches," << signs << ",0," << yes(signs == 0) << '\n'
                << "direct_binary64_nonfinite_states," << nonfinite << ",>0," << yes(nonfinite > 0) << '\n';
  report.emit(out);
  return oracle_ok && agree_ok ? kOk : kRuntimeFailure;
}

// errbench -------------------------------------------------------------------

struct ErrOpts {
  Common common;
  std::string op;
  double low = 0.0;
  double high = 0.0;
  std::size_t samples = 10000;
  int backing = 64;
  std::string arith = "goom";
};

int cmd_errbench(const ErrOpts& o, const std::string& command, std::ostream& out) {
  OracleOp op;
  try {
    op = oracle_op_from_string(o.op);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (!(o.low > 0.0) || !(o.low < o.high)) throw UsageError("need 0 < --low < --high");
  std::vector<Arithmetic> kinds;
  if (o.arith == "goom" || o.arith == "both") kinds.push_back(Arithmetic::Goom);
  if (o.arith == "direct" || o.arith == "both") kinds.push_back(Arithmetic::Direct);

  Report report(command, o.common, "binary" + std::to_string(o.backing));
  report.body() << "op,low,high,backing,arithmetic,samples,max_abs_log10_error,mean_abs_log10_error,"
                   "mean_relative_error\n";
  for (Arithmetic a : kinds) {
    const ErrorStats s = errbench(op, o.low, o.high, o.samples, o.backing, a, o.common.seed);
    report.body() << s.op_name << ',' << num(s.range_low) << ',' << num(s.range_high) << ',' << s.backing_bits << ','
                  << to_string(s.arithmetic) << ',' << s.samples << ',' << num(s.max_abs_log10_error) << ','
                  << num(s.mean_abs_log10_error) << ',' << num(s.mean_relative_error) << '\n';
  }
  report.emit(out);
  return kOk;
}

// scanselftest ---------------------------------------------------------------

struct ScanOpts {
  Common common;
  std::size_t len = 1024;
  std::size_t d = 8;
  std::vector<std::size_t> blocks{4, 16, 64};
  double tol = 1e-10;
  double log_threshold = 12.0;
};

int cmd_scanselftest(const ScanOpts& o, const std::string& command, std::ostream& out) {
  const auto checks = scan_selftest(o.len, o.d, o.blocks, o.common.seed, Report::resolved_workers(o.common.workers),
                                    o.tol, o.log_threshold);
  Report report(command, o.common, "goom64");
  report.body() << "combiner,block_size,max_rel_log_diff,sign_mismatches,resets,sites_match,pass\n";
  bool ok = true;
  for (const auto& c : checks) {
    ok = ok && c.pass;
    report.body() << c.combiner << ',' << c.block_size << ',' << num(c.diff.max_rel_log_diff) << ','
                  << c.diff.sign_mismatches << ',' << c.resets << ',' << (c.sites_match ? "yes" : "no") << ','
                  << (c.pass ? "yes" : "no") << '\n';
  }
  report.emit(out);
  return ok ? kOk : kRuntimeFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Log-domain (GOOM) numerics: matrix chains, prefix scans, Lyapunov spectra, SSM recurrences"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  ChainOpts chain;
  auto* chain_cmd = app.add_subcommand("chain", "Random matrix-product chain survival");
  add_common(chain_cmd, chain.common);
  chain_cmd->add_option("--d", chain.d, "Matrix dimension(s)")->required()->delimiter(',')->check(CLI::PositiveNumber);
  chain_cmd->add_option("--steps", chain.steps, "Maximum chain length")->capture_default_str()->check(CLI::PositiveNumber);
  chain_cmd->add_option("--backend", chain.backend, "real64|real32|goom64|goom32")->capture_default_str();
  chain_cmd->add_option("--trials", chain.trials, "Independent trials")->capture_default_str()->check(CLI::PositiveNumber);

  auto* lyap_cmd = app.add_subcommand("lyapunov", "Lyapunov exponents of a Jacobian chain");
  lyap_cmd->require_subcommand(1);
  LyapOpts spec_opts;
  LyapOpts lle_opts;
  ExportOpts export_opts;
  auto add_lyap = [](CLI::App* cmd, LyapOpts& o) {
    add_common(cmd, o.common);
    cmd->add_option("--system", o.system, "lorenz|rossler|henon|file:<path>")->required();
    cmd->add_option("--steps", o.steps, "Recorded steps T")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--burn-in", o.burn_in, "Discarded steps")->capture_default_str();
    cmd->add_option("--method", o.method, "seq|par")->capture_default_str();
    cmd->add_option("--threshold", o.threshold, "Colinearity threshold for resets")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--block", o.block, "Scan block size")->capture_default_str()->check(CLI::PositiveNumber);
  };
  auto* spectrum_cmd = lyap_cmd->add_subcommand("spectrum", "Full spectrum");
  add_lyap(spectrum_cmd, spec_opts);
  auto* lle_cmd = lyap_cmd->add_subcommand("lle", "Largest exponent");
  add_lyap(lle_cmd, lle_opts);
  auto* export_cmd = lyap_cmd->add_subcommand("export", "Write a goomjac v1 chain file");
  add_lyap(export_cmd, export_opts.base);
  export_cmd->add_option("--file", export_opts.path, "Destination goomjac file")->required();

  SsmOpts ssm;
  auto* ssm_cmd = app.add_subcommand("ssm", "Stabilization-free state-space recurrence");
  add_common(ssm_cmd, ssm.common);
  ssm_cmd->add_option("--d", ssm.d, "State dimension")->capture_default_str()->check(CLI::PositiveNumber);
  ssm_cmd->add_option("--T", ssm.T, "Sequence length")->capture_default_str()->check(CLI::PositiveNumber);
  ssm_cmd->add_option("--rho", ssm.rho, "Spectral radius of A")->capture_default_str()->check(CLI::PositiveNumber);
  ssm_cmd->add_flag("--check", ssm.check, "Compare against the 50-digit oracle and the sequential path");
  ssm_cmd->add_option("--block", ssm.block, "Scan block size")->capture_default_str()->check(CLI::PositiveNumber);

  ErrOpts errb;
  auto* err_cmd = app.add_subcommand("errbench", "Error of one operation against the 50-digit oracle");
  add_common(err_cmd, errb.common);
  err_cmd->add_option("--op", errb.op, "identity|reciprocal|sqrt|square|log|exp|add|mul")->required();
  err_cmd->add_option("--low", errb.low, "Lower end of the sampled range")->required();
  err_cmd->add_option("--high", errb.high, "Upper end of the sampled range")->required();
  err_cmd->add_option("--samples", errb.samples, "Sample count")->capture_default_str()->check(CLI::PositiveNumber);
  err_cmd->add_option("--backing", errb.backing, "32|64")->capture_default_str()->check(CLI::IsMember({32, 64}));
  err_cmd->add_option("--arith", errb.arith, "goom|direct|both")
      ->capture_default_str()
      ->check(CLI::IsMember({"goom", "direct", "both"}));

  ScanOpts scan;
  auto* scan_cmd = app.add_subcommand("scanselftest", "Parallel vs reference prefix-scan equivalence");
  add_common(scan_cmd, scan.common);
  scan_cmd->add_option("--len", scan.len, "Leaves")->capture_default_str()->check(CLI::PositiveNumber);
  scan_cmd->add_option("--d", scan.d, "Matrix dimension")->capture_default_str()->check(CLI::PositiveNumber);
  scan_cmd->add_option("--blocks", scan.blocks, "Block sizes")->delimiter(',')->check(CLI::PositiveNumber);
  scan_cmd->add_option("--tol", scan.tol, "Relative log-magnitude tolerance")->capture_default_str();
  scan_cmd->add_option("--log-threshold", scan.log_threshold, "Reset when log ||A||_F exceeds this")
      ->capture_default_str();

  std::string command = "goom";
  for (const auto& a : args) command += " " + a;

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*chain_cmd) return cmd_chain(chain, command, out);
    if (*spectrum_cmd) return cmd_lyapunov(spec_opts, true, command, out);
    if (*lle_cmd) return cmd_lyapunov(lle_opts, false, command, out);
    if (*export_cmd) return cmd_export(export_opts, command, out);
    if (*ssm_cmd) return cmd_ssm(ssm, command, out);
    if (*err_cmd) return cmd_errbench(errb, command, out);
    if (*scan_cmd) return cmd_scanselftest(scan, command, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\nRun with --help for usage.\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
  err << app.help();
  return kUsageError;
}

}  // namespace goom::cli
