#include "betaproc/matrix.hpp"

#include <algorithm>
#include <stdexcept>

namespace betaproc {

JacobiMatrix::JacobiMatrix(std::vector<double> d, std::vector<double> e)
    : diag(std::move(d)), offdiag(std::move(e)) {
  if (diag.empty() ? !offdiag.empty() : offdiag.size() + 1 != diag.size())
    throw std::invalid_argument("JacobiMatrix: offdiag must have n - 1 entries");
}

JacobiMatrix JacobiMatrix::zeros(std::size_t n) {
  return JacobiMatrix(std::vector<double>(n, 0.0), std::vector<double>(n == 0 ? 0 : n - 1, 0.0));
}

bool JacobiMatrix::is_generic() const {
  return std::all_of(offdiag.begin(), offdiag.end(), [](double b) { return b > 0.0; });
}

BidiagonalMatrix::BidiagonalMatrix(std::vector<double> x, std::vector<double> y)
    : diag(std::move(x)), superdiag(std::move(y)) {
  if (diag.empty() ? !superdiag.empty() : superdiag.size() + 1 != diag.size())
    throw std::invalid_argument("BidiagonalMatrix: superdiag must have n - 1 entries");
}

BidiagonalMatrix BidiagonalMatrix::zeros(std::size_t n) {
  return BidiagonalMatrix(std::vector<double>(n, 0.0),
                          std::vector<double>(n == 0 ? 0 : n - 1, 0.0));
}

}  // namespace betaproc
