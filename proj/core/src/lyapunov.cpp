#include "goom/lyapunov.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "goom/parallel.hpp"
#include "goom/pscan.hpp"
#include "goom/qr.hpp"
#include "goom/rng.hpp"

namespace goom {

void JacobianChain::validate() const {
  if (mats.empty()) throw std::invalid_argument("Jacobian chain is empty");
  if (dim == 0) throw std::invalid_argument("Jacobian chain has dimension 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("Jacobian chain needs a positive finite dt");
  for (std::size_t t = 0; t < mats.size(); ++t) {
    const auto& m = mats[t];
    if (static_cast<std::size_t>(m.rows()) != dim || static_cast<std::size_t>(m.cols()) != dim)
      throw std::invalid_argument("Jacobian " + std::to_string(t) + " is " + std::to_string(m.rows()) + "x" +
                                  std::to_string(m.cols()) + ", expected " + std::to_string(dim) + "x" +
                                  std::to_string(dim));
  }
}

JacobianChain integrate_chain(const DynamicalSystem& sys, const Eigen::VectorXd& x0, std::size_t burn_in,
                              std::size_t T, std::uint64_t seed) {
  if (T == 0) throw std::invalid_argument("integrate_chain: T must be at least 1");
  if (static_cast<std::size_t>(x0.size()) != sys.dim)
    throw std::invalid_argument("integrate_chain: initial state has wrong dimension");

  CounterRng rng(seed, 0x6a6163);
  Eigen::VectorXd x = x0;
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) += 1e-9 * rng.normal();

  auto check = [&](std::size_t step, const char* phase) {
    if (!x.allFinite())
      throw std::runtime_error("integrate_chain: " + sys.name + " state became non-finite at " + phase + " step " +
                               std::to_string(step));
  };

  for (std::size_t k = 0; k < burn_in; ++k) {
    x = sys.step(x);
    check(k + 1, "burn-in");
  }

  JacobianChain chain;
  chain.dim = sys.dim;
  chain.dt = sys.dt;
  chain.mats.reserve(T);
  for (std::size_t t = 0; t < T; ++t) {
    chain.mats.push_back(sys.jacobian(x));
    x = sys.step(x);
    check(t + 1, "recorded");
  }
  return chain;
}

std::string to_string(Method m) { return m == Method::Sequential ? "seq" : "par"; }

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_basis(const JacobianChain& chain, const Eigen::MatrixXd& S0) {
  chain.validate();
  if (static_cast<std::size_t>(S0.rows()) != chain.dim || S0.rows() != S0.cols())
    throw std::invalid_argument("initial basis must be " + std::to_string(chain.dim) + "x" + std::to_string(chain.dim));
}

double log_diag(const Eigen::MatrixXd& r, Eigen::Index i, std::size_t t) {
  const double v = r(i, i);
  if (v == 0.0)
    throw std::domain_error("degenerate Jacobian chain: zero diagonal in R at step " + std::to_string(t + 1));
  return std::log(v);
}

std::vector<double> descending(std::vector<double> v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

}  // namespace

SpectrumResult spectrum_sequential(const JacobianChain& chain, const Eigen::MatrixXd& S0) {
  const auto start = Clock::now();
  check_basis(chain, S0);
  const auto d = static_cast<Eigen::Index>(chain.dim);

  Eigen::MatrixXd q = qr_factor(S0).Q;
  std::vector<double> sums(chain.dim, 0.0);
  for (std::size_t t = 0; t < chain.T(); ++t) {
    QrFactors f = qr_factor(chain.mats[t] * q);
    for (Eigen::Index i = 0; i < d; ++i) sums[i] += log_diag(f.R, i, t);
    q = std::move(f.Q);
  }

  const double scale = 1.0 / (chain.dt * static_cast<double>(chain.T()));
  for (double& s : sums) s *= scale;

  SpectrumResult out;
  out.lambdas = descending(std::move(sums));
  out.method = Method::Sequential;
  out.wall_seconds = seconds_since(start);
  return out;
}

bool colinearity_select(const GoomMatrix<double>& m, double threshold) {
  ColumnNormalized<double> unit;
  try {
    unit = log_unit_norm_columns(m);
  } catch (const std::domain_error&) {
    return true;
  }
  const std::size_t n = m.rows();
  std::vector<Goom<double>> terms(n);
  for (std::size_t i = 0; i < m.cols(); ++i) {
    for (std::size_t j = i + 1; j < m.cols(); ++j) {
      for (std::size_t r = 0; r < n; ++r) terms[r] = gmul(unit.matrix(r, i), unit.matrix(r, j));
      const Goom<double> cosine = lse_reduce<double>(terms);
      if (std::min(1.0, std::exp(cosine.log_mag)) > threshold) return true;
    }
  }
  return false;
}

GoomMatrix<double> orthonormal_reset(const GoomMatrix<double>& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("orthonormal_reset: matrix must be square");
  const ColumnNormalized<double> unit = log_unit_norm_columns(m);
  const QrFactors f = qr_factor(unit.matrix.to_real());
  for (Eigen::Index i = 0; i < f.R.rows(); ++i)
    if (f.R(i, i) == 0.0) throw std::domain_error("orthonormal_reset: rank-deficient basis");
  return GoomMatrix<double>::from_real(f.Q);
}

SpectrumResult spectrum_parallel(const JacobianChain& chain, const Eigen::MatrixXd& S0, const ParallelOptions& opts) {
  const auto start = Clock::now();
  check_basis(chain, S0);
  const std::size_t d = chain.dim;
  const std::size_t T = chain.T();
  const std::size_t chunk = std::max<std::size_t>(opts.block_size, 1);

  // Leaf 0 is the orthonormalized initial basis so the scan never has to
  // select a leaf before its first combine.
  std::vector<ScanPair<double>> leaves(T);
  leaves[0] = ScanPair<double>::transition(GoomMatrix<double>::from_real(qr_factor(S0).Q), d);
  parallel_for(T - 1, opts.workers, chunk, [&](std::size_t k) {
    leaves[k + 1] = ScanPair<double>::transition(GoomMatrix<double>::from_real(chain.mats[k]), d);
  });

  const double threshold = opts.colinearity_threshold;
  ResetPolicy<double> policy{[threshold](const GoomMatrix<double>& a) { return colinearity_select(a, threshold); },
                             [](const GoomMatrix<double>& a) { return orthonormal_reset(a); }};
  const ScanResult<double> scan =
      scan_parallel<double>(leaves, combine_selective<double>(std::move(policy)), opts.block_size, opts.workers);

  std::vector<double> logs(T * d);
  parallel_for(T, opts.workers, chunk, [&](std::size_t t) {
    const ColumnNormalized<double> unit = log_unit_norm_columns(scan.prefixes[t].state());
    const Eigen::MatrixXd q = qr_factor(unit.matrix.to_real()).Q;
    const QrFactors f = qr_factor(chain.mats[t] * q);
    for (std::size_t i = 0; i < d; ++i) logs[t * d + i] = log_diag(f.R, static_cast<Eigen::Index>(i), t);
  });

  std::vector<double> sums(d, 0.0);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t i = 0; i < d; ++i) sums[i] += logs[t * d + i];
  const double scale = 1.0 / (chain.dt * static_cast<double>(T));
  for (double& s : sums) s *= scale;

  SpectrumResult out;
  out.lambdas = descending(std::move(sums));
  out.method = Method::Parallel;
  out.resets = scan.reset_sites.size();
  out.wall_seconds = seconds_since(start);
  return out;
}

namespace {

void check_direction(const JacobianChain& chain, const Eigen::VectorXd& u0) {
  chain.validate();
  if (static_cast<std::size_t>(u0.size()) != chain.dim)
    throw std::invalid_argument("deviation vector has dimension " + std::to_string(u0.size()) + ", expected " +
                                std::to_string(chain.dim));
  const double norm = u0.norm();
  if (norm == 0.0) throw std::invalid_argument("deviation vector is zero");
  if (std::abs(norm - 1.0) > 1e-10) throw std::invalid_argument("deviation vector must have unit norm");
}

}  // namespace

double lle_sequential(const JacobianChain& chain, const Eigen::VectorXd& u0) {
  check_direction(chain, u0);
  Eigen::VectorXd u = u0;
  double sum = 0.0;
  for (std::size_t t = 0; t < chain.T(); ++t) {
    const Eigen::VectorXd s = chain.mats[t] * u;
    const double n = s.norm();
    if (n == 0.0) throw std::domain_error("lle_sequential: deviation vanished at step " + std::to_string(t + 1));
    sum += std::log(n);
    u = s / n;
  }
  return sum / (chain.dt * static_cast<double>(chain.T()));
}

double lle_parallel(const JacobianChain& chain, const Eigen::VectorXd& u0, std::size_t block_size, int workers) {
  check_direction(chain, u0);
  const std::size_t d = chain.dim;
  const std::size_t T = chain.T();
  const std::size_t chunk = std::max<std::size_t>(block_size, 1);

  std::vector<ScanPair<double>> leaves(T + 1);
  leaves[0] = ScanPair<double>::transition(GoomMatrix<double>::from_real(u0), 1);
  parallel_for(T, workers, chunk, [&](std::size_t k) {
    leaves[k + 1] = ScanPair<double>::transition(GoomMatrix<double>::from_real(chain.mats[k]), 1);
  });
  const ScanResult<double> scan = scan_parallel<double>(leaves, affine_combiner<double>(), block_size, workers);

  const GoomMatrix<double>& s = scan.prefixes.back().A;
  std::vector<Goom<double>> squares(d);
  for (std::size_t i = 0; i < d; ++i) squares[i] = Goom<double>(2.0 * s(i, 0).log_mag, Sign::Positive);
  const Goom<double> total = lse_reduce<double>(squares);
  if (total.is_zero()) throw std::domain_error("lle_parallel: deviation vanished");
  return total.log_mag / (2.0 * chain.dt * static_cast<double>(T));
}

}  // namespace goom
