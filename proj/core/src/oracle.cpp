#include "goom/oracle.hpp"

#include <limits>
#include <stdexcept>

namespace goom {

std::string to_string(OracleOp op) {
  switch (op) {
    case OracleOp::Identity: return "identity";
    case OracleOp::Reciprocal: return "reciprocal";
    case OracleOp::Sqrt: return "sqrt";
    case OracleOp::Square: return "square";
    case OracleOp::Log: return "log";
    case OracleOp::Exp: return "exp";
    case OracleOp::Add: return "add";
    case OracleOp::Mul: return "mul";
  }
  return "unknown";
}

OracleOp oracle_op_from_string(const std::string& name) {
  for (OracleOp op : {OracleOp::Identity, OracleOp::Reciprocal, OracleOp::Sqrt, OracleOp::Square, OracleOp::Log,
                      OracleOp::Exp, OracleOp::Add, OracleOp::Mul})
    if (to_string(op) == name) return op;
  throw std::invalid_argument("unknown operation '" + name + "'");
}

bool is_binary(OracleOp op) noexcept { return op == OracleOp::Add || op == OracleOp::Mul; }

HighPrec oracle_eval(OracleOp op, const HighPrec& a, const HighPrec& b) {
  switch (op) {
    case OracleOp::Identity: return a;
    case OracleOp::Reciprocal:
      if (a == 0) throw std::domain_error("oracle: reciprocal of zero");
      return HighPrec(1) / a;
    case OracleOp::Sqrt:
      if (a < 0) throw std::domain_error("oracle: sqrt of a negative value");
      return sqrt(a);
    case OracleOp::Square: return a * a;
    case OracleOp::Log:
      if (a <= 0) throw std::domain_error("oracle: log of a non-positive value");
      return log(a);
    case OracleOp::Exp: return exp(a);
    case OracleOp::Add: return a + b;
    case OracleOp::Mul: return a * b;
  }
  throw std::invalid_argument("oracle: unknown operation");
}

HighMatrix oracle_matmul(const HighMatrix& a, const HighMatrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("oracle_matmul: inner dimensions differ");
  HighMatrix out{a.rows, b.cols, std::vector<HighPrec>(a.rows * b.cols)};
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < b.cols; ++k) {
      HighPrec acc = 0;
      for (std::size_t j = 0; j < a.cols; ++j) acc += a(i, j) * b(j, k);
      out(i, k) = acc;
    }
  return out;
}

template <std::floating_point T>
double normalized_frobenius_error(const GoomMatrix<T>& g, const HighMatrix& ref) {
  if (g.rows() != ref.rows || g.cols() != ref.cols)
    throw std::invalid_argument("normalized_frobenius_error: shapes differ");
  HighPrec diff2 = 0;
  HighPrec ref2 = 0;
  for (std::size_t r = 0; r < ref.rows; ++r)
    for (std::size_t c = 0; c < ref.cols; ++c) {
      const Goom<T>& e = g(r, c);
      HighPrec v = 0;
      if (!e.is_zero()) {
        v = exp(HighPrec(static_cast<double>(e.log_mag)));
        if (e.sign == Sign::Negative) v = -v;
      }
      const HighPrec delta = v - ref(r, c);
      diff2 += delta * delta;
      ref2 += ref(r, c) * ref(r, c);
    }
  if (ref2 == 0) return diff2 == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  return static_cast<double>(sqrt(diff2 / ref2));
}

template double normalized_frobenius_error<float>(const GoomMatrix<float>&, const HighMatrix&);
template double normalized_frobenius_error<double>(const GoomMatrix<double>&, const HighMatrix&);

}  // namespace goom
