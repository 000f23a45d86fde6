#pragma once

#include <utility>

#include <Eigen/SVD>

#include "tcff/chain.hpp"
#include "tcff/common.hpp"

namespace tcff {

/// Bogoliubov data of one quadratic chain. R = [[G, H], [H, G]] is orthogonal
/// and R M R^t = diag(W, -W); Phi = G + H and Psi = G - H are orthogonal with
/// rows indexed by quasiparticle mode.
struct SpectralData {
  Vector energies;  // quasiparticle energies, nonnegative, ascending
  Matrix g_matrix;
  Matrix h_matrix;
  Matrix phi;  // G + H
  Matrix psi;  // G - H

  Index size() const { return energies.size(); }
};

/// Diagonalizes via the SVD of C = A + B:  C = Psi^t W Phi, which is exactly
/// the pair of mode equations Phi C^t = W Psi, Psi C = W Phi. Singular values
/// give the energies; gauge is fixed by making the largest-magnitude entry of
/// each row of Phi positive.
inline SpectralData diagonalize(const BdgSystem& bdg) {
  const Index n = bdg.size();
  const Matrix c = bdg.a_matrix + bdg.b_matrix;

  Eigen::BDCSVD<Matrix> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) {
    throw NumericalError("diagonalize: SVD failed to converge");
  }

  SpectralData out;
  out.energies = Vector(n);
  out.phi = Matrix(n, n);
  out.psi = Matrix(n, n);
  // BDCSVD sorts singular values descending; store ascending.
  for (Index k = 0; k < n; ++k) {
    const Index src = n - 1 - k;
    out.energies(k) = svd.singularValues()(src);
    out.phi.row(k) = svd.matrixV().col(src).transpose();
    out.psi.row(k) = svd.matrixU().col(src).transpose();
  }
  for (Index k = 0; k < n; ++k) {
    Index imax = 0;
    out.phi.row(k).cwiseAbs().maxCoeff(&imax);
    if (out.phi(k, imax) < 0.0) {
      out.phi.row(k) = -out.phi.row(k);
      out.psi.row(k) = -out.psi.row(k);
    }
  }
  out.g_matrix = 0.5 * (out.phi + out.psi);
  out.h_matrix = 0.5 * (out.phi - out.psi);
  return out;
}

inline SpectralData diagonalize(const ChainSpec& spec) { return diagonalize(build_bdg(spec)); }

}  // namespace tcff
