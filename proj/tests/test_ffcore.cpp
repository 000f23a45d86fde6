#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "support/ed_oracle.hpp"
#include "tcff/kernel.hpp"
#include "tcff/rng.hpp"

using namespace tcff;

namespace {

ChainSpec random_chain(int n, CounterStream& rng, double lam_lo = 0.0, double lam_hi = 1.5) {
  ChainSpec s;
  s.n_sites = n;
  for (int i = 0; i < n; ++i) {
    s.couplings.push_back(rng.next_uniform(0.2, 1.5));
    s.fields.push_back(rng.next_uniform(lam_lo, lam_hi));
  }
  return s;
}

Matrix full_bdg_matrix(const BdgSystem& bdg) {
  const Index n = bdg.size();
  Matrix m(2 * n, 2 * n);
  m.topLeftCorner(n, n) = bdg.a_matrix;
  m.topRightCorner(n, n) = bdg.b_matrix;
  m.bottomLeftCorner(n, n) = bdg.b_matrix.transpose();
  m.bottomRightCorner(n, n) = -bdg.a_matrix;
  return m;
}

}  // namespace

TEST_CASE("build_bdg: field-only chain is diagonal", "[ffcore]") {
  ChainSpec s;
  s.n_sites = 4;
  s.couplings = {0, 0, 0, 0};
  s.fields = {1, 2, 3, 4};
  const BdgSystem bdg = build_bdg(s);
  Matrix expect = Matrix::Zero(4, 4);
  expect.diagonal() << 2, 4, 6, 8;
  REQUIRE((bdg.a_matrix - expect).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(bdg.b_matrix.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("build_bdg: uniform coupling chain has flipped boundary signs", "[ffcore]") {
  const BdgSystem bdg = build_bdg(ChainSpec::uniform(4, 1.0, 0.0));
  REQUIRE(bdg.a_matrix(0, 1) == -1.0);
  REQUIRE(bdg.a_matrix(1, 0) == -1.0);
  REQUIRE(bdg.a_matrix(3, 0) == +1.0);
  REQUIRE(bdg.a_matrix(0, 3) == +1.0);
  REQUIRE(bdg.b_matrix(0, 1) == -1.0);
  REQUIRE(bdg.b_matrix(1, 0) == +1.0);
  REQUIRE(bdg.b_matrix(3, 0) == +1.0);
  REQUIRE(bdg.b_matrix(0, 3) == -1.0);
  REQUIRE(bdg.a_matrix.diagonal().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("build_bdg: A symmetric and B antisymmetric exactly", "[ffcore]") {
  CounterStream rng(11, 0);
  for (int trial = 0; trial < 5; ++trial) {
    const BdgSystem bdg = build_bdg(random_chain(8, rng));
    REQUIRE((bdg.a_matrix - bdg.a_matrix.transpose()).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE((bdg.b_matrix + bdg.b_matrix.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("build_bdg rejects invalid chains", "[ffcore]") {
  ChainSpec s;
  s.n_sites = 3;
  s.couplings = {1, 1, 1};
  s.fields = {0, 0, 0};
  REQUIRE_THROWS_AS(build_bdg(s), std::invalid_argument);
  s.n_sites = 1;
  s.couplings = {1};
  s.fields = {0};
  REQUIRE_THROWS_AS(build_bdg(s), std::invalid_argument);
  ChainSpec bad = ChainSpec::uniform(4, 1.0, 0.0);
  bad.fields[2] = std::numeric_limits<double>::infinity();
  REQUIRE_THROWS_AS(build_bdg(bad), std::invalid_argument);
}

TEST_CASE("diagonalize: decoupled modes give energies sorted(2 lambda)", "[ffcore]") {
  ChainSpec s;
  s.n_sites = 4;
  s.couplings = {0, 0, 0, 0};
  s.fields = {0.9, 0.1, 0.5, 1.3};
  const SpectralData sd = diagonalize(s);
  Vector expect(4);
  expect << 0.2, 1.0, 1.8, 2.6;
  REQUIRE((sd.energies - expect).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("diagonalize: flat band at lambda = 0", "[ffcore]") {
  for (int n : {4, 8, 12}) {
    const SpectralData sd = diagonalize(ChainSpec::uniform(n, 1.0, 0.0));
    REQUIRE((sd.energies.array() - 2.0).abs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("diagonalize: critical chain matches the dispersion minimum", "[ffcore]") {
  const int n = 8;
  const SpectralData sd = diagonalize(ChainSpec::uniform(n, 1.0, 1.0));
  double wmin = 1e300;
  for (int k = 0; k < n; ++k) {
    const double q = (2.0 * k + 1.0) * M_PI / n;
    wmin = std::min(wmin, 2.0 * std::sqrt(2.0 + 2.0 * std::cos(q)));
  }
  REQUIRE(std::abs(sd.energies(0) - wmin) < 1e-12);
}

TEST_CASE("diagonalize invariants: orthogonality and block diagonalization", "[ffcore]") {
  CounterStream rng(21, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 4 + 2 * static_cast<int>(rng.next_u64() % 4);
    const BdgSystem bdg = build_bdg(random_chain(n, rng));
    const SpectralData sd = diagonalize(bdg);

    REQUIRE(sd.energies.minCoeff() >= 0.0);
    for (Index k = 0; k + 1 < sd.energies.size(); ++k) {
      REQUIRE(sd.energies(k) <= sd.energies(k + 1));
    }
    const Matrix id = Matrix::Identity(n, n);
    REQUIRE((sd.phi * sd.phi.transpose() - id).cwiseAbs().maxCoeff() < 1e-10);
    REQUIRE((sd.psi * sd.psi.transpose() - id).cwiseAbs().maxCoeff() < 1e-10);

    Matrix r(2 * n, 2 * n);
    r.topLeftCorner(n, n) = sd.g_matrix;
    r.topRightCorner(n, n) = sd.h_matrix;
    r.bottomLeftCorner(n, n) = sd.h_matrix;
    r.bottomRightCorner(n, n) = sd.g_matrix;
    REQUIRE((r * r.transpose() - Matrix::Identity(2 * n, 2 * n)).cwiseAbs().maxCoeff() < 1e-10);

    const Matrix m = full_bdg_matrix(bdg);
    Matrix v = r * m * r.transpose();
    for (Index k = 0; k < n; ++k) {
      v(k, k) -= sd.energies(k);
      v(n + k, n + k) += sd.energies(k);
    }
    REQUIRE(v.cwiseAbs().maxCoeff() < 1e-9 * std::max(1.0, m.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("gauge convention: largest |entry| of each Phi row is positive", "[ffcore]") {
  CounterStream rng(31, 0);
  const SpectralData sd = diagonalize(random_chain(8, rng));
  for (Index k = 0; k < 8; ++k) {
    Index imax = 0;
    sd.phi.row(k).cwiseAbs().maxCoeff(&imax);
    REQUIRE(sd.phi(k, imax) > 0.0);
  }
}

TEST_CASE("evolve_kernel: trivial quench is stationary", "[ffcore]") {
  CounterStream rng(41, 0);
  const SpectralData sd = diagonalize(random_chain(8, rng));
  const double c0 = xx_correlator(evolve_kernel(sd, sd, 0.0), 1, 3);
  for (double t : {1.0, 10.0, 100.0}) {
    REQUIRE(std::abs(xx_correlator(evolve_kernel(sd, sd, t), 1, 3) - c0) < 1e-9);
  }
}

TEST_CASE("evolve_kernel: t = 0 reproduces initial ground-state correlators", "[ffcore]") {
  CounterStream rng(43, 0);
  const ChainSpec a = random_chain(8, rng);
  const ChainSpec b = random_chain(8, rng);
  const SpectralData sa = diagonalize(a);
  const SpectralData sb = diagonalize(b);
  for (int d = 1; d <= 3; ++d) {
    const double eq = xx_correlator(evolve_kernel(sa, sa, 0.0), 0, d);
    const double quench0 = xx_correlator(evolve_kernel(sa, sb, 0.0), 0, d);
    REQUIRE(std::abs(eq - quench0) < 1e-12);
  }
}

TEST_CASE("evolve_kernel rejects mismatched sizes and non-finite t", "[ffcore]") {
  CounterStream rng(47, 0);
  const SpectralData s6 = diagonalize(random_chain(6, rng));
  const SpectralData s8 = diagonalize(random_chain(8, rng));
  REQUIRE_THROWS_AS(evolve_kernel(s6, s8, 1.0), std::invalid_argument);
  REQUIRE_THROWS_AS(evolve_kernel(s6, s6, std::numeric_limits<double>::infinity()),
                    std::invalid_argument);
}

TEST_CASE("kernel unitality: diagonals of AA~ and BB~ are one", "[ffcore]") {
  CounterStream rng(53, 0);
  for (int trial = 0; trial < 5; ++trial) {
    const SpectralData s0 = diagonalize(random_chain(8, rng));
    const SpectralData s1 = diagonalize(random_chain(8, rng));
    const CorrelationKernel k = evolve_kernel(s0, s1, rng.next_uniform(0.0, 20.0));
    const CMatrix aa = k.phi_tilde * k.phi_tilde.adjoint();
    const CMatrix bb = k.psi_tilde * k.psi_tilde.adjoint();
    REQUIRE((aa - aa.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
    REQUIRE((bb - bb.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
    REQUIRE((aa.diagonal().array() - 1.0).abs().maxCoeff() < 1e-9);
    REQUIRE((bb.diagonal().array() - 1.0).abs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("contraction_matrices: d = 1 gives the single contraction", "[ffcore]") {
  CounterStream rng(61, 0);
  const SpectralData s0 = diagonalize(random_chain(8, rng));
  const SpectralData s1 = diagonalize(random_chain(8, rng));
  const WickContractions w = wick_contractions(evolve_kernel(s0, s1, 1.3));
  const SkewMatrix t = contraction_matrices(w, 2, 1);
  REQUIRE(t.dim() == 2);
  REQUIRE(std::abs(t.entries()(0, 1) - w.ba(2, 3)) < 1e-14);
  REQUIRE(std::abs(pfaffian(t) - w.ba(2, 3)) < 1e-14);
}

TEST_CASE("contraction_matrices: field-free stationary chain gives pf = 1", "[ffcore]") {
  const SpectralData sd = diagonalize(ChainSpec::uniform(12, 1.0, 0.0));
  const WickContractions w = wick_contractions(evolve_kernel(sd, sd, 3.7));
  for (int d = 1; d <= 5; ++d) {
    REQUIRE(std::abs(pfaffian(contraction_matrices(w, 0, d)) - Complex(1, 0)) < 1e-9);
  }
}

TEST_CASE("contraction_matrices range checks", "[ffcore]") {
  CounterStream rng(67, 0);
  const SpectralData sd = diagonalize(random_chain(8, rng));
  const WickContractions w = wick_contractions(evolve_kernel(sd, sd, 0.0));
  REQUIRE_THROWS_AS(contraction_matrices(w, 0, 4), std::invalid_argument);  // d > N/2 - 1
  REQUIRE_THROWS_AS(contraction_matrices(w, 0, 0), std::invalid_argument);
  REQUIRE_THROWS_AS(contraction_matrices(w, 5, 3), std::invalid_argument);  // site 8 wraps
  REQUIRE_NOTHROW(contraction_matrices(w, 4, 3));  // sites 4..7 fit
}

TEST_CASE("ground-state correlator matches exact diagonalization", "[ffcore][oracle]") {
  CounterStream rng(71, 0);
  for (int n : {4, 6, 8}) {
    for (int trial = 0; trial < 5; ++trial) {
      const ChainSpec spec = random_chain(n, rng);
      const SpectralData sd = diagonalize(spec);
      const WickContractions w = wick_contractions(evolve_kernel(sd, sd, 0.0));
      for (int d = 1; d <= n / 2 - 1; ++d) {
        const double ff = xx_correlator(w, 0, d);
        const double ed = ed_oracle::ground_xx(spec.couplings, spec.fields, 0, d);
        REQUIRE(std::abs(ff - ed) < 1e-10);
      }
    }
  }
}

TEST_CASE("quenched correlator matches exact state-vector evolution", "[ffcore][oracle]") {
  CounterStream rng(73, 0);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 6;
    const ChainSpec s0 = random_chain(n, rng);
    ChainSpec s1 = s0;
    for (auto& f : s1.fields) f = rng.next_uniform(0.0, 1.5);
    const WickContractions w =
        wick_contractions(evolve_kernel(diagonalize(s0), diagonalize(s1), 1.7));
    for (int d = 1; d <= 2; ++d) {
      const double ff = xx_correlator(w, 1, d);
      const double ed = ed_oracle::quench_xx(s0.couplings, s0.fields, s1.fields, 1.7, 1, d);
      REQUIRE(std::abs(ff - ed) < 1e-10);
    }
  }
}

TEST_CASE("disordered ground state at d = 3 matches the oracle", "[ffcore][oracle]") {
  CounterStream rng(79, 0);
  const ChainSpec spec = random_chain(8, rng);
  const SpectralData sd = diagonalize(spec);
  const double ff = xx_correlator(evolve_kernel(sd, sd, 0.0), 0, 3);
  const double ed = ed_oracle::ground_xx(spec.couplings, spec.fields, 0, 3);
  REQUIRE(std::abs(ff - ed) < 1e-10);
}

TEST_CASE("imaginary part of pf(T) stays negligible", "[ffcore]") {
  CounterStream rng(83, 0);
  const ChainSpec s0 = random_chain(8, rng);
  ChainSpec s1 = s0;
  for (auto& f : s1.fields) f = rng.next_uniform(0.0, 1.5);
  const WickContractions w =
      wick_contractions(evolve_kernel(diagonalize(s0), diagonalize(s1), 4.2));
  for (int d = 1; d <= 3; ++d) {
    const XxValue v = xx_correlator_diag(w, 0, d);
    REQUIRE(v.imag_abs <= 1e-6);
    REQUIRE(!v.imag_suspect());
  }
}
