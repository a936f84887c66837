#pragma once

#include <Eigen/Dense>

namespace goom {

struct QrFactors {
  Eigen::MatrixXd Q;
  Eigen::MatrixXd R;
};

/// Householder QR of a square matrix with the sign convention R(i,i) >= 0.
/// Throws std::domain_error on non-finite input.
QrFactors qr_factor(const Eigen::MatrixXd& m);

}  // namespace goom
