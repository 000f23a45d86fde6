#pragma once

#include <cmath>
#include <utility>

#include <Eigen/LU>

#include "tcff/chain.hpp"
#include "tcff/momentum.hpp"
#include "tcff/pfaffian.hpp"

namespace tcff {

/// Uniform external fields on the two sublattice directions of the 2D code,
/// plus the star/plaquette coupling strengths.
struct ToricFieldPoint {
  double lambda_x = 0.0;
  double lambda_z = 0.0;
  double j_a = 1.0;
  double j_b = 1.0;

  void validate() const {
    if (!std::isfinite(lambda_x) || !std::isfinite(lambda_z) || !std::isfinite(j_a) ||
        !std::isfinite(j_b)) {
      throw std::invalid_argument("ToricFieldPoint: non-finite entry");
    }
    if (j_a <= 0.0 || j_b <= 0.0) {
      throw std::invalid_argument("ToricFieldPoint: couplings must be positive");
    }
  }
};

/// Row decomposition of the 2D model into uncoupled chains. The electric
/// sector (even rows) couples with J^B and sees lambda_x; the magnetic sector
/// (odd rows) couples with J^A and sees lambda_z. The reduced Wilson loops
/// w^e_D, w^m_D are the x-x correlators of chain_e, chain_m at distance D.
inline std::pair<ChainSpec, ChainSpec> map_toric_to_chains(const ToricFieldPoint& p, int n_sites) {
  p.validate();
  ChainSpec chain_e = ChainSpec::uniform(n_sites, p.j_b, p.lambda_x);
  ChainSpec chain_m = ChainSpec::uniform(n_sites, p.j_a, p.lambda_z);
  return {std::move(chain_e), std::move(chain_m)};
}

/// x-x correlator at distance d from a contraction set. Stationary sets
/// (g_a = delta, g_b = -delta) reduce to the d x d Toeplitz determinant with
/// entries g_{1+m-n}; otherwise the full 2d x 2d Pfaffian is evaluated.
inline double xx_from_contractions(const ContractionSet& set, int d) {
  if (d < 1 || d > set.d_max) {
    throw std::invalid_argument("xx_from_contractions: need 1 <= d <= d_max");
  }
  if (set.stationary) {
    Matrix t(d, d);
    for (int m = 0; m < d; ++m) {
      for (int n = 0; n < d; ++n) t(m, n) = set.g_at(1 + m - n);
    }
    return Eigen::PartialPivLU<Matrix>(t).determinant();
  }
  const int n = 2 * d;
  CMatrix k(n, n);
  k.setZero();
  auto off = [&](int a) { return (a + 1) / 2; };
  auto is_b = [&](int a) { return a % 2 == 0; };
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const int r = off(b) - off(a);
      Complex val;
      if (is_b(a) && is_b(b)) {
        val = set.gb_at(r);
      } else if (!is_b(a) && !is_b(b)) {
        val = set.ga_at(r);
      } else if (is_b(a)) {
        val = Complex(set.g_at(r), 0);
      } else {
        val = Complex(-set.g_at(-r), 0);
      }
      k(a, b) = val;
      k(b, a) = -val;
    }
  }
  const Complex pf = pfaffian(SkewMatrix(std::move(k)));
  return pf.real();
}

/// Ground-state reduced Wilson loop for a D x D region: the Toeplitz
/// determinant of equilibrium contractions. O(D^3) after the momentum sums.
inline double ground_wd(int region_d, double lambda, int n_sites) {
  if (region_d < 1 || region_d > n_sites / 2 - 1) {
    throw std::invalid_argument("ground_wd: need 1 <= D <= N/2 - 1");
  }
  return xx_from_contractions(ground_contractions(lambda, n_sites, region_d), region_d);
}

/// Long-time contraction g_r(inf) after the quench lambda: 0 -> lambda,
/// from the residue-theorem tables. lambda = 1 follows the lambda < 1 branch;
/// the branches agree there.
inline double quench_g_infty(int r, double lambda) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("quench_g_infty: lambda must be positive");
  }
  if (lambda <= 1.0) {
    if (r >= 2) return 0.5 * (1.0 - lambda * lambda) * std::pow(lambda, r - 1);
    if (r == 1) return 1.0 - 0.5 * lambda * lambda;
    if (r == 0) return -0.5 * lambda;
    return 0.0;
  }
  if (r >= 2) return 0.0;
  if (r == 1) return 0.5;
  if (r == 0) return -0.5 / lambda;
  return 0.5 * (lambda * lambda - 1.0) * std::pow(lambda, r - 1);
}

/// Long-time reduced Wilson loop after the quench:
/// [(1 + sqrt(1 - lambda^2)) / 2]^D for 0 < lambda <= 1, 2^-D beyond.
inline double quench_wd_infty(int region_d, double lambda) {
  if (region_d < 1) throw std::invalid_argument("quench_wd_infty: D must be >= 1");
  if (lambda < 0.0) throw std::invalid_argument("quench_wd_infty: lambda must be >= 0");
  if (lambda == 0.0) return 1.0;
  if (lambda > 1.0) return std::pow(2.0, -region_d);
  const double base = 0.5 * (1.0 + std::sqrt(1.0 - lambda * lambda));
  return std::pow(base, region_d);
}

/// Exact finite-d long-time correlator,
/// [(1+s)^{d+1} + (1-s)^{d+1}] / 2^{d+1} with s = sqrt(1 - lambda^2) for
/// lambda <= 1 (the cosh closed form, rewritten overflow-free), and 2^-d for
/// lambda > 1. Approaches quench_wd_infty's base to the power d+1 as d grows.
inline double quench_cxd_infty_exact(int d, double lambda) {
  if (d < 1) throw std::invalid_argument("quench_cxd_infty_exact: d must be >= 1");
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("quench_cxd_infty_exact: lambda must be positive");
  }
  if (lambda > 1.0) return std::pow(2.0, -d);
  const double s = std::sqrt(1.0 - lambda * lambda);
  return (std::pow(1.0 + s, d + 1) + std::pow(1.0 - s, d + 1)) / std::pow(2.0, d + 1);
}

}  // namespace tcff
