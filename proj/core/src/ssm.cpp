#include "goom/ssm.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "goom/parallel.hpp"
#include "goom/pscan.hpp"
#include "goom/rng.hpp"

namespace goom {

void SsmParams::validate() const {
  const auto n = A.rows();
  auto shape = [](const Eigen::MatrixXd& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); };
  if (n == 0 || A.cols() != n) throw std::invalid_argument("ssm: A must be square and non-empty, got " + shape(A));
  if (B.rows() != n || B.cols() != n) throw std::invalid_argument("ssm: B must match A, got " + shape(B));
  if (C.rows() != 2 * n || C.cols() != n) throw std::invalid_argument("ssm: C must be 2d x d, got " + shape(C));
  if (D.rows() != 2 * n || D.cols() != n) throw std::invalid_argument("ssm: D must be 2d x d, got " + shape(D));
  if (!A.allFinite() || !B.allFinite() || !C.allFinite() || !D.allFinite())
    throw std::invalid_argument("ssm: parameters must be finite");
}

namespace {

void check_inputs(const SsmParams& p, const Eigen::VectorXd& x0, const std::vector<Eigen::VectorXd>& u) {
  p.validate();
  const auto d = static_cast<Eigen::Index>(p.d());
  if (x0.size() != d) throw std::invalid_argument("ssm: x0 has dimension " + std::to_string(x0.size()));
  if (u.empty()) throw std::invalid_argument("ssm: empty input sequence");
  for (std::size_t t = 0; t < u.size(); ++t)
    if (u[t].size() != d) throw std::invalid_argument("ssm: input " + std::to_string(t) + " has wrong dimension");
}

void finish(const SsmParams& p, SsmRun& run, int workers) {
  const std::size_t T = run.states.size();
  run.scaled.resize(T);
  run.scales.resize(T);
  run.y.resize(T);
  parallel_for(T, workers, 64, [&](std::size_t t) {
    const ScaledReal<double> s = to_real_scaled(run.states[t]);
    run.scaled[t] = s.values.col(0);
    run.scales[t] = s.log_scale;
    run.y[t] = p.C * run.scaled[t] + p.D * run.u[t];
  });
}

}  // namespace

SsmRun ssm_forward_parallel(const SsmParams& p, const Eigen::VectorXd& x0, const std::vector<Eigen::VectorXd>& u,
                            std::size_t block_size, int workers) {
  check_inputs(p, x0, u);
  const std::size_t T = u.size();
  const std::size_t chunk = std::max<std::size_t>(block_size, 1);
  const auto a = GoomMatrix<double>::from_real(p.A);
  const auto b = GoomMatrix<double>::from_real(p.B);
  const auto x0g = GoomMatrix<double>::from_real(x0);

  std::vector<ScanPair<double>> leaves(T);
  parallel_for(T, workers, chunk, [&](std::size_t t) {
    leaves[t] = ScanPair<double>(a, lmme(b, GoomMatrix<double>::from_real(u[t])));
  });
  const ScanResult<double> scan = scan_parallel<double>(leaves, affine_combiner<double>(), block_size, workers);

  SsmRun run;
  run.x0 = x0;
  run.u = u;
  run.states.resize(T);
  parallel_for(T, workers, chunk, [&](std::size_t t) {
    const ScanPair<double>& pre = scan.prefixes[t];
    run.states[t] = gadd(lmme(pre.A, x0g), pre.B);
  });
  finish(p, run, workers);
  return run;
}

SsmRun ssm_forward_sequential(const SsmParams& p, const Eigen::VectorXd& x0, const std::vector<Eigen::VectorXd>& u) {
  check_inputs(p, x0, u);
  const auto a = GoomMatrix<double>::from_real(p.A);
  const auto b = GoomMatrix<double>::from_real(p.B);

  SsmRun run;
  run.x0 = x0;
  run.u = u;
  run.states.reserve(u.size());
  GoomMatrix<double> x = GoomMatrix<double>::from_real(x0);
  for (const auto& ut : u) {
    x = gadd(lmme(a, x), lmme(b, GoomMatrix<double>::from_real(ut)));
    run.states.push_back(x);
  }
  finish(p, run, 1);
  return run;
}

std::vector<Eigen::VectorXd> ssm_states_direct(const SsmParams& p, const Eigen::VectorXd& x0,
                                               const std::vector<Eigen::VectorXd>& u) {
  check_inputs(p, x0, u);
  std::vector<Eigen::VectorXd> out;
  out.reserve(u.size());
  Eigen::VectorXd x = x0;
  for (const auto& ut : u) {
    x = p.A * x + p.B * ut;
    out.push_back(x);
  }
  return out;
}

namespace {

Eigen::MatrixXd normal_matrix(CounterRng& rng, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = rng.normal();
  return m;
}

}  // namespace

SsmParams random_ssm_params(std::size_t d, double spectral_radius, std::uint64_t seed) {
  if (d == 0) throw std::invalid_argument("ssm: d must be positive");
  const auto n = static_cast<Eigen::Index>(d);
  CounterRng rng(seed, 0x73736d);
  SsmParams p;
  p.A = normal_matrix(rng, n, n);
  const double radius = p.A.eigenvalues().cwiseAbs().maxCoeff();
  if (radius == 0.0) throw std::runtime_error("ssm: sampled A has zero spectral radius");
  p.A *= spectral_radius / radius;
  p.B = normal_matrix(rng, n, n);
  p.C = normal_matrix(rng, 2 * n, n);
  p.D = normal_matrix(rng, 2 * n, n);
  return p;
}

std::vector<Eigen::VectorXd> random_inputs(std::size_t d, std::size_t T, std::uint64_t seed) {
  CounterRng rng(seed, 0x696e70);
  std::vector<Eigen::VectorXd> u(T);
  for (auto& v : u) v = normal_matrix(rng, static_cast<Eigen::Index>(d), 1);
  return u;
}

}  // namespace goom
