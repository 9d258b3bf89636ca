#pragma once

#include <cstddef>
#include <vector>

namespace betaproc {

/// Symmetric tridiagonal matrix: diag has n entries, offdiag n - 1.
/// A Jacobi matrix in the strict sense has offdiag > 0; zero-diagonal
/// Golub-Kahan matrices and limiting operators also use this type.
struct JacobiMatrix {
  std::vector<double> diag;
  std::vector<double> offdiag;

  JacobiMatrix() = default;
  JacobiMatrix(std::vector<double> d, std::vector<double> e);
  static JacobiMatrix zeros(std::size_t n);

  std::size_t size() const { return diag.size(); }
  bool is_generic() const;
  bool operator==(const JacobiMatrix&) const = default;
};

/// Upper bidiagonal matrix: diag x has n entries, superdiag y has n - 1.
struct BidiagonalMatrix {
  std::vector<double> diag;
  std::vector<double> superdiag;

  BidiagonalMatrix() = default;
  BidiagonalMatrix(std::vector<double> x, std::vector<double> y);
  static BidiagonalMatrix zeros(std::size_t n);

  std::size_t size() const { return diag.size(); }
  bool operator==(const BidiagonalMatrix&) const = default;
};

}  // namespace betaproc
