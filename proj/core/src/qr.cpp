#include "goom/qr.hpp"

#include <cmath>
#include <stdexcept>

namespace goom {

QrFactors qr_factor(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("qr_factor: matrix must be square");
  if (!m.allFinite()) throw std::domain_error("qr_factor: non-finite entries");
  const Eigen::Index n = m.rows();

  Eigen::MatrixXd r = m;
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd v(n);

  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    const Eigen::Index len = n - k;
    auto x = r.col(k).tail(len);
    const double norm = x.norm();
    if (norm == 0.0) continue;
    // Reflect x onto -sign(x0) * |x| e1 to avoid cancellation.
    const double alpha = x(0) >= 0.0 ? -norm : norm;
    auto head = v.head(len);
    head = x;
    head(0) -= alpha;
    const double vnorm2 = head.squaredNorm();
    if (vnorm2 == 0.0) continue;
    const double beta = 2.0 / vnorm2;

    r.bottomRightCorner(len, n - k) -= (beta * head) * (head.transpose() * r.bottomRightCorner(len, n - k));
    q.rightCols(len) -= (q.rightCols(len) * head) * (beta * head.transpose());
    r.col(k).tail(len - 1).setZero();
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    if (r(i, i) < 0.0) {
      r.row(i) = -r.row(i);
      q.col(i) = -q.col(i);
    }
  }
  return {std::move(q), std::move(r)};
}

}  // namespace goom
