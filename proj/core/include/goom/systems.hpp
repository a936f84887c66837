#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace goom {

/// A discrete-time map x_t = step(x_{t-1}) together with its analytic
/// Jacobian d step / d x. Flows are discretized with classical RK4 at a fixed
/// dt, and the Jacobian is that of the RK4 step itself.
struct DynamicalSystem {
  std::string name;
  std::size_t dim = 0;
  double dt = 1.0;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> step;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> jacobian;
  Eigen::VectorXd default_initial_state;
};

DynamicalSystem lorenz_system(double sigma = 10.0, double rho = 28.0, double beta = 8.0 / 3.0, double dt = 0.01);
DynamicalSystem rossler_system(double a = 0.2, double b = 0.2, double c = 5.7, double dt = 0.01);
DynamicalSystem henon_map(double a = 1.4, double b = 0.3);
/// step = identity, Jacobian = I.
DynamicalSystem identity_system(std::size_t dim, double dt = 1.0);

/// Looks up "lorenz", "rossler" or "henon". Throws std::invalid_argument.
DynamicalSystem builtin_system(const std::string& name);

/// One RK4 step of dx/dt = f(x) and its exact Jacobian, obtained by pushing
/// the variational equation through the same four stages.
struct Rk4Step {
  Eigen::VectorXd next;
  Eigen::MatrixXd jacobian;
};

Rk4Step rk4_with_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& field,
                          const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& field_jacobian,
                          const Eigen::VectorXd& x, double dt);

}  // namespace goom
