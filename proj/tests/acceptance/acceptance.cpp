// Acceptance runner: one PASS/FAIL line per criterion (sub-criteria get their
// own line). `--only <id>` restricts the run to one criterion so each can be
// registered as its own ctest entry.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "goom/harness.hpp"
#include "goom/lyapunov.hpp"
#include "goom/oracle.hpp"
#include "goom/parallel.hpp"
#include "goom/pscan.hpp"
#include "goom/ssm.hpp"
#include "properties.hpp"

namespace {

using namespace goom;
using Clock = std::chrono::steady_clock;

struct Line {
  std::string id;
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

Eigen::MatrixXd normal_matrix(std::mt19937_64& gen, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = nd(gen);
  return m;
}

// 1: chain survival -------------------------------------------------------

std::vector<Line> chain_survival(int workers) {
  std::vector<Line> out;
  const auto t0 = Clock::now();
  bool all_survive = true;
  std::string detail;
  for (std::size_t d : {8u, 16u, 32u, 64u}) {
    ChainConfig cfg;
    cfg.d = d;
    cfg.T_max = 100000;
    cfg.backend = Backend::Goom64;
    cfg.trials = 30;
    cfg.workers = workers;
    const auto r = run_chain(cfg);
    const auto done = std::count_if(r.trials.begin(), r.trials.end(), [](const TrialOutcome& t) { return t.completed; });
    all_survive = all_survive && done == 30;
    detail += "d=" + std::to_string(d) + ": " + std::to_string(done) + "/30 completed; ";
  }
  out.push_back({"1a", all_survive, detail + "goom64 wall " + fmt(seconds_since(t0)) + " s"});

  ChainConfig real;
  real.d = 8;
  real.T_max = 100000;
  real.backend = Backend::Real64;
  real.trials = 30;
  real.workers = workers;
  const auto r = run_chain(real);
  std::size_t early = 0, latest = 0;
  for (const auto& t : r.trials) {
    const bool nonfinite = t.failure_mode == FailureMode::Overflow || t.failure_mode == FailureMode::NaN;
    if (!t.completed && nonfinite && t.survived_steps < 5000) ++early;
    latest = std::max(latest, t.survived_steps);
  }
  out.push_back({"1b", early == 30,
                 "real64 d=8: " + std::to_string(early) + "/30 non-finite before step 5000, latest failure after " +
                     std::to_string(latest) + " steps"});
  return out;
}

// 2: LMME accuracy --------------------------------------------------------

std::vector<Line> lmme_accuracy() {
  const auto t0 = Clock::now();
  std::mt19937_64 gen(2);
  const Eigen::MatrixXd a = normal_matrix(gen, 64, 64), b = normal_matrix(gen, 64, 64);
  const double e64 =
      normalized_frobenius_error(lmme(GoomMatrix<double>::from_real(a), GoomMatrix<double>::from_real(b)),
                                 oracle_matmul(to_high(a), to_high(b)));
  const Eigen::MatrixXf af = a.cast<float>(), bf = b.cast<float>();
  const double e32 = normalized_frobenius_error(lmme(GoomMatrix<float>::from_real(af), GoomMatrix<float>::from_real(bf)),
                                                oracle_matmul(to_high(af), to_high(bf)));
  const double wall = seconds_since(t0);
  return {{"2", e64 <= 1e-12 && e32 <= 1e-5 && wall < 10,
           "binary64 error " + fmt(e64) + " (<= 1e-12), binary32 error " + fmt(e32) + " (<= 1e-5), " + fmt(wall) +
               " s (< 10)"}};
}

// 3: scan equivalence -----------------------------------------------------

std::vector<Line> scan_equivalence(int workers) {
  const auto t0 = Clock::now();
  const auto checks = scan_selftest(1024, 8, {4, 16, 64}, 3, workers, 1e-10);
  const double wall = seconds_since(t0);
  bool affine_ok = true, selective_ok = true;
  std::string affine_detail, selective_detail;
  for (const auto& c : checks) {
    const std::string part = "b=" + std::to_string(c.block_size) + " diff " + fmt(c.diff.max_rel_log_diff) + " signs " +
                             std::to_string(c.diff.sign_mismatches);
    if (c.combiner == "affine") {
      affine_ok = affine_ok && c.pass;
      affine_detail += part + "; ";
    } else {
      selective_ok = selective_ok && c.pass && c.sites_match && c.resets >= 3;
      selective_detail += part + " resets " + std::to_string(c.resets) + (c.sites_match ? " sites match" : " SITES DIFFER") + "; ";
    }
  }
  return {{"3a", affine_ok && wall < 10, "affine vs sequential: " + affine_detail + fmt(wall) + " s"},
          {"3b", selective_ok && wall < 10, "selective vs reference: " + selective_detail}};
}

// 4: worked example with one reset ---------------------------------------

std::vector<Line> worked_example() {
  std::mt19937_64 gen(4);
  double worst = 0;
  bool sites_ok = true;
  for (int rep = 0; rep < 50; ++rep) {
    const Eigen::MatrixXd x0 = normal_matrix(gen, 4, 4), a1 = normal_matrix(gen, 4, 4), a2 = normal_matrix(gen, 4, 4),
                          a3 = normal_matrix(gen, 4, 4);
    const auto g = [](const Eigen::MatrixXd& m) { return GoomMatrix<double>::from_real(m); };
    const auto target = g(a1 * x0);
    GoomMatrix<double> seen;
    const ResetPolicy<double> policy{[&](const GoomMatrix<double>& m) {
                                       const bool hit = max_relative_log_diff(m, target) < 1e-12;
                                       if (hit) seen = m;
                                       return hit;
                                     },
                                     [](const GoomMatrix<double>& m) { return orthonormal_reset(m); }};
    const std::vector<ScanPair<double>> leaves{ScanPair<double>::transition(g(x0), 4), ScanPair<double>::transition(g(a1), 4),
                                               ScanPair<double>::transition(g(a2), 4), ScanPair<double>::transition(g(a3), 4)};
    const auto res = scan_parallel<double>(leaves, combine_selective<double>(policy), 1);
    sites_ok = sites_ok && res.reset_sites == std::vector<std::size_t>{1} && seen.size() == 16;
    if (!sites_ok) break;
    const Eigen::MatrixXd fr = orthonormal_reset(g(a1 * x0)).to_real();
    const std::vector<Eigen::MatrixXd> want{x0, fr, a2 * fr, a3 * a2 * fr};
    const auto rel = [](const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) { return (x - y).norm() / y.norm(); };
    worst = std::max(worst, rel(seen.to_real(), a1 * x0));
    for (std::size_t t = 0; t < 4; ++t) worst = std::max(worst, rel(res.prefixes[t].state().to_real(), want[t]));
  }
  return {{"4", sites_ok && worst <= 1e-12,
           "outputs (X0, f_R(A1 X0), A2 f_R(A1 X0), A3 A2 f_R(A1 X0)) over 50 draws, worst relative error " + fmt(worst) +
               (sites_ok ? "" : ", reset site mismatch")}};
}

// 5: sum rules ------------------------------------------------------------

std::vector<Line> sum_rules() {
  const auto t0 = Clock::now();
  const auto lorenz = lorenz_system();
  const auto lc = integrate_chain(lorenz, lorenz.default_initial_state, 10000, 100000, 1);
  const auto lr = spectrum_sequential(lc, Eigen::MatrixXd::Identity(3, 3));
  const double lsum = std::accumulate(lr.lambdas.begin(), lr.lambdas.end(), 0.0);
  const double lerr = std::abs(lsum + 13.667) / 13.667;

  const auto henon = henon_map();
  const auto hc = integrate_chain(henon, henon.default_initial_state, 10000, 100000, 1);
  const auto hr = spectrum_sequential(hc, Eigen::MatrixXd::Identity(2, 2));
  const double hsum = hr.lambdas[0] + hr.lambdas[1];
  const double herr = std::abs(hsum - std::log(0.3)) / std::abs(std::log(0.3));
  const double wall = seconds_since(t0);
  return {{"5a", lerr <= 0.02 && wall < 120,
           "lorenz sum " + fmt(lsum) + " vs -13.667, relative " + fmt(lerr) + " (<= 0.02)"},
          {"5b", herr <= 0.01 && wall < 120,
           "henon sum " + fmt(hsum) + " vs log 0.3, relative " + fmt(herr) + " (<= 0.01), " + fmt(wall) + " s (< 120)"}};
}

// 6: parallel spectrum ----------------------------------------------------

std::string lambdas(const std::vector<double>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s + ")";
}

std::vector<Line> spectrum_fidelity(int workers) {
  std::vector<Line> out;
  bool ok = true;
  std::string detail;
  for (const std::string name : {"lorenz", "henon"}) {
    const auto sys = builtin_system(name);
    const auto chain = integrate_chain(sys, sys.default_initial_state, 10000, 100000, 1);
    const auto s0 = Eigen::MatrixXd::Identity(sys.dim, sys.dim);
    const auto seq = spectrum_sequential(chain, s0);
    ParallelOptions opts;
    opts.workers = workers;
    double worst = 0;
    try {
      const auto par = spectrum_parallel(chain, s0, opts);
      for (std::size_t i = 0; i < seq.lambdas.size(); ++i) worst = std::max(worst, std::abs(par.lambdas[i] - seq.lambdas[i]));
      detail += name + ": seq " + lambdas(seq.lambdas) + " par " + lambdas(par.lambdas) + " resets " +
                std::to_string(par.resets) + " max diff " + fmt(worst) + "; ";
    } catch (const std::exception& e) {
      worst = INFINITY;
      detail += name + ": parallel failed (" + e.what() + "); ";
    }
    ok = ok && worst <= 0.05;
  }
  out.push_back({"6a", ok, detail + "threshold 0.99, tolerance 0.05"});
  return out;
}

std::vector<Line> spectrum_speedup() {
  const auto sys = lorenz_system();
  const auto chain = integrate_chain(sys, sys.default_initial_state, 10000, 100000, 1);
  const auto s0 = Eigen::MatrixXd::Identity(3, 3);
  const auto seq = spectrum_sequential(chain, s0);
  ParallelOptions opts;
  opts.workers = 8;
  double par_wall = INFINITY;
  try {
    par_wall = spectrum_parallel(chain, s0, opts).wall_seconds;
  } catch (const std::exception&) {
  }
  const double speedup = seq.wall_seconds / par_wall;
  return {{"6b", speedup >= 3,
           "sequential " + fmt(seq.wall_seconds) + " s, parallel (8 workers) " + fmt(par_wall) + " s, speedup " +
               fmt(speedup) + " (>= 3); hardware threads available: " + std::to_string(default_workers())}};
}

// 7: LLE identity ---------------------------------------------------------

std::vector<Line> lle_identity() {
  const auto t0 = Clock::now();
  std::mt19937_64 gen(7);
  double worst = 0;
  for (int c = 0; c < 100; ++c) {
    JacobianChain chain{3, 1.0, {}};
    for (int t = 0; t < 100; ++t) chain.mats.push_back(normal_matrix(gen, 3, 3));
    const Eigen::VectorXd u0 = normal_matrix(gen, 3, 1).normalized();
    worst = std::max(worst, std::abs(lle_parallel(chain, u0) - lle_sequential(chain, u0)));
  }
  const double wall = seconds_since(t0);
  return {{"7", worst <= 1e-8 && wall < 5,
           "100 chains: max |parallel - sequential| " + fmt(worst) + " (<= 1e-8), " + fmt(wall) + " s (< 5)"}};
}

// 8: SSM ------------------------------------------------------------------

std::vector<Line> ssm_forward(int workers) {
  const auto t0 = Clock::now();
  const std::size_t d = 8, T = 512;
  const auto p = random_ssm_params(d, 1.5, 1);
  const auto u = random_inputs(d, T, 1);
  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(d);
  const auto par = ssm_forward_parallel(p, x0, u, 64, workers);
  const auto seq = ssm_forward_sequential(p, x0, u);
  const auto oracle = ssm_oracle_check(p, x0, u, par);
  double agree = 0;
  std::size_t signs = 0;
  for (std::size_t t = 0; t < T; ++t) {
    agree = std::max(agree, max_relative_log_diff(par.states[t], seq.states[t]));
    signs += sign_mismatches(par.states[t], seq.states[t]);
  }
  std::size_t nonfinite = 0;
  double peak = 0;
  for (const auto& x : ssm_states_direct(p, x0, u)) {
    if (!x.allFinite()) ++nonfinite;
    else peak = std::max(peak, x.cwiseAbs().maxCoeff());
  }
  const double wall = seconds_since(t0);
  const bool fast = wall < 10;
  return {{"8a", oracle.max_relative_error <= 1e-9 && fast,
           "oracle relative error " + fmt(oracle.max_relative_error) + " (<= 1e-9), final log-scale " +
               fmt(par.scales.back())},
          {"8b", nonfinite > 0,
           "direct binary64 non-finite states " + std::to_string(nonfinite) + " (> 0 required), largest finite |x| " +
               fmt(peak)},
          {"8c", agree <= 1e-8 && signs == 0 && fast,
           "parallel vs sequential " + fmt(agree) + " (<= 1e-8), sign mismatches " + std::to_string(signs) + ", " +
               fmt(wall) + " s (< 10)"}};
}

// 9: property suites ------------------------------------------------------

std::vector<Line> property_suites() {
  bool ok = true;
  std::string detail;
  for (const auto& r : props::all(10000, 9)) {
    ok = ok && r.pass();
    detail += r.name + " " + std::to_string(r.cases - r.failures) + "/" + std::to_string(r.cases);
    if (!r.pass()) detail += " [" + r.first_failure + "]";
    detail += "; ";
  }
  return {{"9", ok, detail}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria runner"};
  std::string only;
  int workers = 0;
  app.add_option("--only", only, "Run one criterion: 1 2 3 4 5 6a 6b 7 8 9");
  app.add_option("--workers", workers, "Worker threads (0: default)");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<std::vector<Line>()>>> criteria{
      {"1", [&] { return chain_survival(workers); }},
      {"2", lmme_accuracy},
      {"3", [&] { return scan_equivalence(workers); }},
      {"4", worked_example},
      {"5", sum_rules},
      {"6a", [&] { return spectrum_fidelity(workers); }},
      {"6b", spectrum_speedup},
      {"7", lle_identity},
      {"8", [&] { return ssm_forward(workers); }},
      {"9", property_suites},
  };

  bool any = false, all_pass = true;
  for (const auto& [id, run] : criteria) {
    if (!only.empty() && only != id) continue;
    any = true;
    const auto t0 = Clock::now();
    std::vector<Line> lines;
    try {
      lines = run();
    } catch (const std::exception& e) {
      lines = {{id, false, std::string("threw: ") + e.what()}};
    }
    for (const auto& l : lines) {
      all_pass = all_pass && l.pass;
      std::cout << "criterion " << l.id << ": " << (l.pass ? "PASS" : "FAIL") << " - " << l.detail << '\n';
    }
    std::cout << "  (" << fmt(seconds_since(t0)) << " s)\n" << std::flush;
  }
  if (!any) {
    std::cerr << "unknown criterion '" << only << "'\n";
    return 2;
  }
  return all_pass ? 0 : 1;
}
