#pragma once

#include <cmath>
#include <vector>

#include "tcff/common.hpp"

namespace tcff {

/// Fermion-parity sector of the effective chain. Only the even sector is
/// supported: the even-parity ground state is the one the stabilizer model
/// selects, and even n_sites keeps it non-degenerate away from criticality.
enum class Parity { Even };

/// One 1D effective transverse-field chain, H = -sum_j (J_j x_j x_{j+1} + lambda_j z_j),
/// with couplings[j] the bond <j, j+1> and couplings[N-1] the boundary bond.
struct ChainSpec {
  int n_sites = 0;
  std::vector<double> couplings;
  std::vector<double> fields;
  Parity parity = Parity::Even;

  static ChainSpec uniform(int n, double coupling, double field) {
    ChainSpec s;
    s.n_sites = n;
    s.couplings.assign(static_cast<std::size_t>(n), coupling);
    s.fields.assign(static_cast<std::size_t>(n), field);
    s.validate();
    return s;
  }

  void validate() const {
    if (n_sites < 2 || n_sites % 2 != 0) {
      throw std::invalid_argument("ChainSpec: n_sites must be even and >= 2");
    }
    if (couplings.size() != static_cast<std::size_t>(n_sites) ||
        fields.size() != static_cast<std::size_t>(n_sites)) {
      throw std::invalid_argument("ChainSpec: couplings/fields must have n_sites entries");
    }
    for (double j : couplings) {
      if (!std::isfinite(j)) throw std::invalid_argument("ChainSpec: non-finite coupling");
    }
    for (double l : fields) {
      if (!std::isfinite(l)) throw std::invalid_argument("ChainSpec: non-finite field");
    }
  }
};

/// Quadratic-fermion form 1/2 C^dag M C with M = [[A, B], [B^t, -A]].
/// A is symmetric, B antisymmetric, both exactly by construction.
struct BdgSystem {
  Matrix a_matrix;
  Matrix b_matrix;

  Index size() const { return a_matrix.rows(); }
};

/// Matrix elements for the even-parity sector:
///   A[j][j] = 2 lambda_j, A[j][j+1] = A[j+1][j] = -J_j,
///   B[j][j+1] = -B[j+1][j] = -J_j,
/// boundary bond with flipped sign: A[N-1][0] = A[0][N-1] = +J_N,
/// B[N-1][0] = -B[0][N-1] = +J_N.
inline BdgSystem build_bdg(const ChainSpec& spec) {
  spec.validate();
  const int n = spec.n_sites;
  Matrix a = Matrix::Zero(n, n);
  Matrix b = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) a(j, j) = 2.0 * spec.fields[static_cast<std::size_t>(j)];
  for (int j = 0; j + 1 < n; ++j) {
    const double jj = spec.couplings[static_cast<std::size_t>(j)];
    a(j, j + 1) += -jj;
    a(j + 1, j) += -jj;
    b(j, j + 1) += -jj;
    b(j + 1, j) += +jj;
  }
  const double jb = spec.couplings[static_cast<std::size_t>(n - 1)];
  a(n - 1, 0) += +jb;
  a(0, n - 1) += +jb;
  b(n - 1, 0) += +jb;
  b(0, n - 1) += -jb;
  return BdgSystem{std::move(a), std::move(b)};
}

}  // namespace tcff
