#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "goom/lyapunov.hpp"
#include "goom/qr.hpp"
#include "goom/rng.hpp"
#include "goom/systems.hpp"
#include "support.hpp"

namespace goom {
namespace {

TEST(QrFactor, Identity) {
  const auto f = qr_factor(Eigen::MatrixXd::Identity(4, 4));
  EXPECT_LE((f.Q - Eigen::MatrixXd::Identity(4, 4)).norm(), 1e-15);
  EXPECT_LE((f.R - Eigen::MatrixXd::Identity(4, 4)).norm(), 1e-15);
}

TEST(QrFactor, Diagonal) {
  Eigen::MatrixXd m = Eigen::Vector2d(2, 3).asDiagonal();
  const auto f = qr_factor(m);
  EXPECT_LE((f.Q - Eigen::MatrixXd::Identity(2, 2)).norm(), 1e-15);
  EXPECT_LE((f.R - m).norm(), 1e-15);
}

TEST(QrFactor, RandomReconstructionAndSignConvention) {
  std::mt19937_64 gen(1);
  for (int rep = 0; rep < 20; ++rep) {
    const Eigen::MatrixXd m = test::normal_matrix(gen, 8, 8);
    const auto f = qr_factor(m);
    EXPECT_LE((f.Q * f.R - m).norm() / m.norm(), 1e-13);
    EXPECT_LE((f.Q.transpose() * f.Q - Eigen::MatrixXd::Identity(8, 8)).norm(), 1e-13);
    EXPECT_TRUE(f.R.isUpperTriangular(1e-14));
    for (int i = 0; i < 8; ++i) EXPECT_GE(f.R(i, i), 0.0);
  }
}

TEST(QrFactor, NonFiniteRejected) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2, 2);
  m(0, 1) = NAN;
  EXPECT_THROW(qr_factor(m), std::domain_error);
}

TEST(Systems, HenonJacobianAtVisitedPoints) {
  const auto sys = henon_map();
  Eigen::VectorXd x = sys.default_initial_state;
  for (int t = 0; t < 10; ++t) {
    const Eigen::MatrixXd j = sys.jacobian(x);
    EXPECT_DOUBLE_EQ(j(0, 0), -2.8 * x(0));
    EXPECT_EQ(j(0, 1), 1.0);
    EXPECT_EQ(j(1, 0), 0.3);
    EXPECT_EQ(j(1, 1), 0.0);
    const Eigen::VectorXd next = sys.step(x);
    EXPECT_DOUBLE_EQ(next(0), 1 - 1.4 * x(0) * x(0) + x(1));
    EXPECT_DOUBLE_EQ(next(1), 0.3 * x(0));
    x = next;
  }
}

TEST(Systems, IdentitySystemHasIdentityJacobians) {
  const auto chain = integrate_chain(identity_system(3), Eigen::VectorXd::Ones(3), 5, 20, 1);
  ASSERT_EQ(chain.T(), 20u);
  for (const auto& j : chain.mats) EXPECT_EQ(j, Eigen::MatrixXd::Identity(3, 3));
}

TEST(Systems, LorenzChainIsFinite) {
  const auto sys = lorenz_system();
  const auto chain = integrate_chain(sys, sys.default_initial_state, 0, 1000, 1);
  ASSERT_EQ(chain.T(), 1000u);
  EXPECT_EQ(chain.dim, 3u);
  EXPECT_DOUBLE_EQ(chain.dt, 0.01);
  for (const auto& j : chain.mats) {
    EXPECT_EQ(j.rows(), 3);
    EXPECT_TRUE(j.allFinite());
  }
}

// The RK4 step Jacobian must agree with central differences of the step.
TEST(Systems, Rk4JacobianMatchesFiniteDifferences) {
  for (const auto& sys : {lorenz_system(), rossler_system()}) {
    Eigen::VectorXd x = sys.default_initial_state;
    for (int t = 0; t < 500; ++t) x = sys.step(x);
    const Eigen::MatrixXd j = sys.jacobian(x);
    const double h = 1e-6;
    for (Eigen::Index c = 0; c < 3; ++c) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(3);
      e(c) = h;
      const Eigen::VectorXd fd = (sys.step(x + e) - sys.step(x - e)) / (2 * h);
      EXPECT_LE((fd - j.col(c)).norm(), 1e-7) << sys.name << " column " << c;
    }
  }
}

TEST(Systems, Rk4OnLinearFieldMatchesTaylorPolynomial) {
  Eigen::MatrixXd a(2, 2);
  a << -0.3, 1.0, -1.0, -0.2;
  const double dt = 0.1;
  const auto step = rk4_with_jacobian([&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return a * x; },
                                      [&](const Eigen::VectorXd&) -> Eigen::MatrixXd { return a; },
                                      Eigen::Vector2d(1, 2), dt);
  const Eigen::MatrixXd h = a * dt;
  const Eigen::MatrixXd taylor =
      Eigen::MatrixXd::Identity(2, 2) + h + h * h / 2 + h * h * h / 6 + h * h * h * h / 24;
  EXPECT_LE((step.jacobian - taylor).norm(), 1e-15);
  EXPECT_LE((step.next - taylor * Eigen::Vector2d(1, 2)).norm(), 1e-15);
}

TEST(Systems, LookupByName) {
  EXPECT_EQ(builtin_system("lorenz").dim, 3u);
  EXPECT_EQ(builtin_system("rossler").dim, 3u);
  EXPECT_EQ(builtin_system("henon").dim, 2u);
  EXPECT_THROW(builtin_system("duffing"), std::invalid_argument);
}

TEST(IntegrateChain, DivergentStateReportsStep) {
  DynamicalSystem blowup{"blowup", 1, 1.0, [](const Eigen::VectorXd& x) -> Eigen::VectorXd { return x * 1e200; },
                         [](const Eigen::VectorXd&) -> Eigen::MatrixXd { return Eigen::MatrixXd::Constant(1, 1, 1e200); },
                         Eigen::VectorXd::Ones(1)};
  try {
    integrate_chain(blowup, blowup.default_initial_state, 10, 10, 1);
    FAIL() << "expected a runtime_error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("burn-in"), std::string::npos) << e.what();
  }
}

TEST(CounterRng, ReproducibleAndIndexable) {
  CounterRng a(42, 3), b(42, 3), c(42, 4);
  const auto first = a.next_u64();
  EXPECT_EQ(first, b.next_u64());
  EXPECT_NE(first, c.next_u64());
  EXPECT_EQ(a.at(0), first);
  EXPECT_EQ(a.position(), 1u);

  CounterRng n(9);
  double sum = 0, sq = 0;
  const int count = 200000;
  for (int i = 0; i < count; ++i) {
    const double x = n.normal();
    sum += x;
    sq += x * x;
  }
  EXPECT_NEAR(sum / count, 0.0, 0.01);
  EXPECT_NEAR(sq / count, 1.0, 0.01);
}

}  // namespace
}  // namespace goom
