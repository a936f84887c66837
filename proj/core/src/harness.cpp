#include "goom/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "goom/lyapunov.hpp"
#include "goom/matrix.hpp"
#include "goom/parallel.hpp"
#include "goom/rng.hpp"

namespace goom {

std::string to_string(Backend b) {
  switch (b) {
    case Backend::Real64: return "real64";
    case Backend::Real32: return "real32";
    case Backend::Goom64: return "goom64";
    case Backend::Goom32: return "goom32";
  }
  return "unknown";
}

std::string to_string(FailureMode f) {
  switch (f) {
    case FailureMode::None: return "none";
    case FailureMode::Overflow: return "overflow";
    case FailureMode::Underflow: return "underflow";
    case FailureMode::NaN: return "nan";
  }
  return "unknown";
}

Backend backend_from_string(const std::string& name) {
  for (Backend b : {Backend::Real64, Backend::Real32, Backend::Goom64, Backend::Goom32})
    if (to_string(b) == name) return b;
  throw std::invalid_argument("unknown backend '" + name + "' (expected real64, real32, goom64 or goom32)");
}

std::string to_string(Arithmetic a) { return a == Arithmetic::Goom ? "goom" : "direct"; }

void ChainConfig::validate() const {
  if (d == 0) throw std::invalid_argument("chain: d must be at least 1");
  if (T_max == 0) throw std::invalid_argument("chain: T_max must be at least 1");
  if (trials == 0) throw std::invalid_argument("chain: trials must be at least 1");
  if (fixed_factor && (static_cast<std::size_t>(fixed_factor->rows()) != d || fixed_factor->cols() != fixed_factor->rows()))
    throw std::invalid_argument("chain: fixed factor must be d x d");
}

namespace {

template <class S>
Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> next_factor(const ChainConfig& cfg, CounterRng& rng) {
  const auto n = static_cast<Eigen::Index>(cfg.d);
  if (cfg.fixed_factor) return cfg.fixed_factor->template cast<S>();
  Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> a(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) a(r, c) = static_cast<S>(rng.normal());
  return a;
}

template <class S>
TrialOutcome real_trial(const ChainConfig& cfg, CounterRng rng) {
  const auto n = static_cast<Eigen::Index>(cfg.d);
  using M = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
  M s = M::Identity(n, n);
  TrialOutcome out;
  auto mean_log = [](const M& m) {
    double sum = 0.0;
    std::size_t count = 0;
    for (Eigen::Index i = 0; i < m.size(); ++i)
      if (m.data()[i] != S(0)) {
        sum += std::log(std::abs(static_cast<double>(m.data()[i])));
        ++count;
      }
    return count ? sum / static_cast<double>(count) : 0.0;
  };
  for (std::size_t t = 1; t <= cfg.T_max; ++t) {
    M next = next_factor<S>(cfg, rng) * s;
    FailureMode f = FailureMode::None;
    if (next.hasNaN()) f = FailureMode::NaN;
    else if (!next.allFinite()) f = FailureMode::Overflow;
    else if (next.isZero(0)) f = FailureMode::Underflow;
    if (f != FailureMode::None) {
      out.failure_mode = f;
      out.survived_steps = t - 1;
      out.final_mean_log_mag = mean_log(s);
      return out;
    }
    s = std::move(next);
  }
  out.survived_steps = cfg.T_max;
  out.completed = true;
  out.final_mean_log_mag = mean_log(s);
  return out;
}

template <class S>
TrialOutcome goom_trial(const ChainConfig& cfg, CounterRng rng) {
  GoomMatrix<S> s = GoomMatrix<S>::identity(cfg.d);
  TrialOutcome out;
  auto mean_log = [](const GoomMatrix<S>& m) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& g : m.data())
      if (!g.is_zero()) {
        sum += static_cast<double>(g.log_mag);
        ++count;
      }
    return count ? sum / static_cast<double>(count) : 0.0;
  };
  for (std::size_t t = 1; t <= cfg.T_max; ++t) {
    GoomMatrix<S> next = lmme(GoomMatrix<S>::from_real(next_factor<S>(cfg, rng)), s);
    FailureMode f = FailureMode::None;
    for (const auto& g : next.data()) {
      if (std::isnan(g.log_mag)) {
        f = FailureMode::NaN;
        break;
      }
      if (g.log_mag == std::numeric_limits<S>::infinity()) f = FailureMode::Overflow;
    }
    if (f == FailureMode::None && next.all_zero()) f = FailureMode::Underflow;
    if (f != FailureMode::None) {
      out.failure_mode = f;
      out.survived_steps = t - 1;
      out.final_mean_log_mag = mean_log(s);
      return out;
    }
    s = std::move(next);
  }
  out.survived_steps = cfg.T_max;
  out.completed = true;
  out.final_mean_log_mag = mean_log(s);
  return out;
}

}  // namespace

ChainResult run_chain(const ChainConfig& cfg) {
  cfg.validate();
  ChainResult result{cfg, std::vector<TrialOutcome>(cfg.trials)};
  parallel_for(cfg.trials, cfg.workers, 1, [&](std::size_t k) {
    CounterRng rng(cfg.seed, k);
    switch (cfg.backend) {
      case Backend::Real64: result.trials[k] = real_trial<double>(cfg, rng); break;
      case Backend::Real32: result.trials[k] = real_trial<float>(cfg, rng); break;
      case Backend::Goom64: result.trials[k] = goom_trial<double>(cfg, rng); break;
      case Backend::Goom32: result.trials[k] = goom_trial<float>(cfg, rng); break;
    }
  });
  return result;
}

namespace {

template <class T>
T eval_goom(OracleOp op, T x, T y) {
  const Goom<T> a = from_real(x);
  switch (op) {
    case OracleOp::Identity: return to_real(a);
    case OracleOp::Reciprocal: return to_real(Goom<T>(-a.log_mag, a.sign));
    case OracleOp::Sqrt: return to_real(Goom<T>(a.log_mag / T(2), a.sign));
    case OracleOp::Square: return to_real(Goom<T>(T(2) * a.log_mag, Sign::Positive));
    case OracleOp::Log: return a.log_mag;
    case OracleOp::Exp: return to_real(Goom<T>(to_real(a), Sign::Positive));
    case OracleOp::Add: return to_real(gadd(a, from_real(y)));
    case OracleOp::Mul: return to_real(gmul(a, from_real(y)));
  }
  return std::numeric_limits<T>::quiet_NaN();
}

template <class T>
T eval_direct(OracleOp op, T x, T y) {
  switch (op) {
    case OracleOp::Identity: return x;
    case OracleOp::Reciprocal: return T(1) / x;
    case OracleOp::Sqrt: return std::sqrt(x);
    case OracleOp::Square: return x * x;
    case OracleOp::Log: return std::log(x);
    case OracleOp::Exp: return std::exp(x);
    case OracleOp::Add: return x + y;
    case OracleOp::Mul: return x * y;
  }
  return std::numeric_limits<T>::quiet_NaN();
}

template <class T>
ErrorStats errbench_impl(OracleOp op, double low, double high, std::size_t samples, Arithmetic arithmetic,
                         std::uint64_t seed) {
  ErrorStats stats;
  stats.op_name = to_string(op);
  stats.range_low = low;
  stats.range_high = high;
  stats.backing_bits = sizeof(T) == 4 ? 32 : 64;
  stats.arithmetic = arithmetic;
  stats.samples = samples;

  const CounterRng xs(seed, 0x78);
  const CounterRng ys(seed, 0x79);
  const double l0 = std::log10(low);
  const double l1 = std::log10(high);
  auto draw = [&](const CounterRng& rng, std::size_t k) {
    const double u = (static_cast<double>(rng.at(k) >> 11) + 0.5) * 0x1.0p-53;
    return static_cast<T>(std::pow(10.0, l0 + (l1 - l0) * u));
  };

  double sum_digits = 0.0;
  double sum_rel = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const T x = draw(xs, k);
    const T y = is_binary(op) ? draw(ys, k) : T(0);
    const T got = arithmetic == Arithmetic::Goom ? eval_goom<T>(op, x, y) : eval_direct<T>(op, x, y);
    const HighPrec ref = oracle_eval(op, HighPrec(static_cast<double>(x)), HighPrec(static_cast<double>(y)));

    double digits = std::numeric_limits<double>::infinity();
    double rel = std::numeric_limits<double>::infinity();
    const HighPrec g(static_cast<double>(got));
    if (ref == 0) {
      digits = got == T(0) ? 0.0 : std::numeric_limits<double>::infinity();
      rel = got == T(0) ? 0.0 : std::numeric_limits<double>::infinity();
    } else if (std::isfinite(got) && got != T(0)) {
      digits = static_cast<double>(abs(log10(abs(g)) - log10(abs(ref))));
      rel = static_cast<double>(abs(g - ref) / abs(ref));
    }
    stats.max_abs_log10_error = std::max(stats.max_abs_log10_error, digits);
    sum_digits += digits;
    sum_rel += rel;
  }
  stats.mean_abs_log10_error = sum_digits / static_cast<double>(samples);
  stats.mean_relative_error = sum_rel / static_cast<double>(samples);
  return stats;
}

}  // namespace

ErrorStats errbench(OracleOp op, double low, double high, std::size_t samples, int backing_bits,
                    Arithmetic arithmetic, std::uint64_t seed) {
  if (!(low > 0.0) || !(low < high) || !std::isfinite(high))
    throw std::invalid_argument("errbench: need 0 < low < high");
  if (samples == 0) throw std::invalid_argument("errbench: samples must be positive");
  if (backing_bits == 32) return errbench_impl<float>(op, low, high, samples, arithmetic, seed);
  if (backing_bits == 64) return errbench_impl<double>(op, low, high, samples, arithmetic, seed);
  throw std::invalid_argument("errbench: backing must be 32 or 64");
}

std::vector<ScanPair<double>> random_scan_leaves(std::size_t len, std::size_t d, std::uint64_t seed, bool zero_bias) {
  if (len == 0 || d == 0) throw std::invalid_argument("random_scan_leaves: len and d must be positive");
  CounterRng rng(seed, 0x7363616e);
  const auto n = static_cast<Eigen::Index>(d);
  auto sample = [&] {
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < n; ++c) m(r, c) = rng.normal();
    return GoomMatrix<double>::from_real(m);
  };
  std::vector<ScanPair<double>> leaves;
  leaves.reserve(len);
  for (std::size_t t = 0; t < len; ++t) {
    GoomMatrix<double> a = sample();
    if (zero_bias) {
      leaves.push_back(ScanPair<double>::transition(std::move(a), d));
    } else {
      GoomMatrix<double> b = sample();
      leaves.emplace_back(std::move(a), std::move(b));
    }
  }
  return leaves;
}

ResetPolicy<double> log_norm_reset_policy(double log_threshold) {
  return {[log_threshold](const GoomMatrix<double>& a) {
            std::vector<Goom<double>> squares;
            squares.reserve(a.size());
            for (const auto& g : a.data()) squares.emplace_back(2.0 * g.log_mag, Sign::Positive);
            return lse_reduce<double>(squares).log_mag / 2.0 > log_threshold;
          },
          [](const GoomMatrix<double>& a) { return orthonormal_reset(a); }};
}

PrefixDiff compare_prefixes(const std::vector<ScanPair<double>>& a, const std::vector<ScanPair<double>>& b) {
  PrefixDiff out;
  if (a.size() != b.size()) {
    out.max_rel_log_diff = std::numeric_limits<double>::infinity();
    return out;
  }
  for (std::size_t t = 0; t < a.size(); ++t) {
    out.max_rel_log_diff = std::max({out.max_rel_log_diff, max_relative_log_diff(a[t].A, b[t].A),
                                     max_relative_log_diff(a[t].B, b[t].B)});
    out.sign_mismatches += sign_mismatches(a[t].A, b[t].A) + sign_mismatches(a[t].B, b[t].B);
  }
  return out;
}

std::vector<ScanCheck> scan_selftest(std::size_t len, std::size_t d, const std::vector<std::size_t>& blocks,
                                     std::uint64_t seed, int workers, double tolerance, double log_threshold) {
  if (blocks.empty()) throw std::invalid_argument("scan_selftest: no block sizes given");
  std::vector<ScanCheck> checks;

  const auto affine_leaves = random_scan_leaves(len, d, seed, false);
  const auto affine = affine_combiner<double>();
  const ScanResult<double> fold = scan_sequential<double>(affine_leaves, affine);
  for (std::size_t block : blocks) {
    const ScanResult<double> par = scan_parallel<double>(affine_leaves, affine, block, workers);
    ScanCheck c{"affine", block, compare_prefixes(par.prefixes, fold.prefixes), 0, true, false};
    c.pass = c.diff.max_rel_log_diff <= tolerance && c.diff.sign_mismatches == 0;
    checks.push_back(c);
  }

  const auto plain_leaves = random_scan_leaves(len, d, seed + 1, true);
  const auto selective = combine_selective<double>(log_norm_reset_policy(log_threshold));
  const ScanResult<double> ref = scan_tree_reference<double>(plain_leaves, selective);
  for (std::size_t block : blocks) {
    const ScanResult<double> par = scan_parallel<double>(plain_leaves, selective, block, workers);
    ScanCheck c{"selective", block, compare_prefixes(par.prefixes, ref.prefixes), par.reset_sites.size(),
                par.reset_sites == ref.reset_sites, false};
    c.pass = c.sites_match && c.diff.max_rel_log_diff <= tolerance && c.diff.sign_mismatches == 0;
    checks.push_back(c);
  }
  return checks;
}

SsmOracleReport ssm_oracle_check(const SsmParams& p, const Eigen::VectorXd& x0,
                                 const std::vector<Eigen::VectorXd>& u, const SsmRun& run) {
  p.validate();
  if (run.states.size() != u.size()) throw std::invalid_argument("ssm_oracle_check: run length differs from input");
  const std::size_t d = p.d();
  const HighMatrix a = to_high<double>(p.A);
  const HighMatrix b = to_high<double>(p.B);
  std::vector<HighPrec> x(d);
  for (std::size_t i = 0; i < d; ++i) x[i] = HighPrec(x0(static_cast<Eigen::Index>(i)));

  SsmOracleReport report;
  report.steps = u.size();
  std::vector<HighPrec> next(d);
  for (std::size_t t = 0; t < u.size(); ++t) {
    for (std::size_t i = 0; i < d; ++i) {
      HighPrec acc = 0;
      for (std::size_t j = 0; j < d; ++j)
        acc += a(i, j) * x[j] + b(i, j) * HighPrec(u[t](static_cast<Eigen::Index>(j)));
      next[i] = acc;
    }
    x.swap(next);

    const GoomMatrix<double>& g = run.states[t];
    double c = -std::numeric_limits<double>::infinity();
    for (const auto& e : g.data()) c = std::max(c, e.log_mag);
    if (c == -std::numeric_limits<double>::infinity()) c = 0.0;
    const HighPrec shift = exp(HighPrec(-c));

    HighPrec err = 0;
    HighPrec norm = 0;
    for (std::size_t i = 0; i < d; ++i) {
      const Goom<double>& e = g(i, 0);
      const HighPrec mine(e.is_zero() ? 0.0 : to_factor<double>(e.sign) * std::exp(e.log_mag - c));
      const HighPrec ref = x[i] * shift;
      err = std::max(err, HighPrec(abs(mine - ref)));
      norm = std::max(norm, HighPrec(abs(ref)));
    }
    const double rel = norm == 0 ? (err == 0 ? 0.0 : std::numeric_limits<double>::infinity())
                                 : static_cast<double>(err / norm);
    report.max_relative_error = std::max(report.max_relative_error, rel);
  }
  return report;
}

}  // namespace goom
