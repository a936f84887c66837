#include "goom/systems.hpp"

#include <stdexcept>

namespace goom {

Rk4Step rk4_with_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& field,
                          const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& field_jacobian,
                          const Eigen::VectorXd& x, double dt) {
  const auto n = x.size();
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);

  const Eigen::VectorXd k1 = field(x);
  const Eigen::MatrixXd dk1 = field_jacobian(x);

  const Eigen::VectorXd x2 = x + 0.5 * dt * k1;
  const Eigen::VectorXd k2 = field(x2);
  const Eigen::MatrixXd dk2 = field_jacobian(x2) * (eye + 0.5 * dt * dk1);

  const Eigen::VectorXd x3 = x + 0.5 * dt * k2;
  const Eigen::VectorXd k3 = field(x3);
  const Eigen::MatrixXd dk3 = field_jacobian(x3) * (eye + 0.5 * dt * dk2);

  const Eigen::VectorXd x4 = x + dt * k3;
  const Eigen::VectorXd k4 = field(x4);
  const Eigen::MatrixXd dk4 = field_jacobian(x4) * (eye + dt * dk3);

  return {x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4), eye + (dt / 6.0) * (dk1 + 2.0 * dk2 + 2.0 * dk3 + dk4)};
}

namespace {

DynamicalSystem make_flow(std::string name, double dt, Eigen::VectorXd x0,
                          std::function<Eigen::VectorXd(const Eigen::VectorXd&)> field,
                          std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> field_jacobian) {
  DynamicalSystem sys;
  sys.name = std::move(name);
  sys.dim = static_cast<std::size_t>(x0.size());
  sys.dt = dt;
  sys.default_initial_state = std::move(x0);
  sys.step = [field, field_jacobian, dt](const Eigen::VectorXd& x) {
    return rk4_with_jacobian(field, field_jacobian, x, dt).next;
  };
  sys.jacobian = [field, field_jacobian, dt](const Eigen::VectorXd& x) {
    return rk4_with_jacobian(field, field_jacobian, x, dt).jacobian;
  };
  return sys;
}

}  // namespace

DynamicalSystem lorenz_system(double sigma, double rho, double beta, double dt) {
  auto field = [=](const Eigen::VectorXd& x) {
    Eigen::VectorXd dx(3);
    dx << sigma * (x(1) - x(0)), x(0) * (rho - x(2)) - x(1), x(0) * x(1) - beta * x(2);
    return dx;
  };
  auto field_jacobian = [=](const Eigen::VectorXd& x) {
    Eigen::MatrixXd j(3, 3);
    j << -sigma, sigma, 0.0,  //
        rho - x(2), -1.0, -x(0),  //
        x(1), x(0), -beta;
    return j;
  };
  Eigen::VectorXd x0(3);
  x0 << 1.0, 1.0, 1.0;
  return make_flow("lorenz", dt, x0, field, field_jacobian);
}

DynamicalSystem rossler_system(double a, double b, double c, double dt) {
  auto field = [=](const Eigen::VectorXd& x) {
    Eigen::VectorXd dx(3);
    dx << -x(1) - x(2), x(0) + a * x(1), b + x(2) * (x(0) - c);
    return dx;
  };
  auto field_jacobian = [=](const Eigen::VectorXd& x) {
    Eigen::MatrixXd j(3, 3);
    j << 0.0, -1.0, -1.0,  //
        1.0, a, 0.0,  //
        x(2), 0.0, x(0) - c;
    return j;
  };
  Eigen::VectorXd x0(3);
  x0 << 1.0, 1.0, 0.0;
  return make_flow("rossler", dt, x0, field, field_jacobian);
}

DynamicalSystem henon_map(double a, double b) {
  DynamicalSystem sys;
  sys.name = "henon";
  sys.dim = 2;
  sys.dt = 1.0;
  sys.default_initial_state = Eigen::Vector2d(0.1, 0.1);
  sys.step = [=](const Eigen::VectorXd& x) {
    Eigen::VectorXd next(2);
    next << 1.0 - a * x(0) * x(0) + x(1), b * x(0);
    return next;
  };
  sys.jacobian = [=](const Eigen::VectorXd& x) {
    Eigen::MatrixXd j(2, 2);
    j << -2.0 * a * x(0), 1.0,  //
        b, 0.0;
    return j;
  };
  return sys;
}

DynamicalSystem identity_system(std::size_t dim, double dt) {
  DynamicalSystem sys;
  sys.name = "identity";
  sys.dim = dim;
  sys.dt = dt;
  sys.default_initial_state = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(dim));
  sys.step = [](const Eigen::VectorXd& x) { return x; };
  sys.jacobian = [dim](const Eigen::VectorXd&) {
    return Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  };
  return sys;
}

DynamicalSystem builtin_system(const std::string& name) {
  if (name == "lorenz") return lorenz_system();
  if (name == "rossler") return rossler_system();
  if (name == "henon") return henon_map();
  throw std::invalid_argument("unknown system '" + name + "' (expected lorenz, rossler or henon)");
}

}  // namespace goom
