#pragma once

#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include <Eigen/LU>

#include "tcff/kernel.hpp"
#include "tcff/qfi.hpp"
#include "tcff/rng.hpp"
#include "tcff/uniform.hpp"

namespace tcff {

namespace detail {

inline CMatrix random_skew(int n, CounterStream& rng) {
  CMatrix m = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Complex v(rng.next_uniform(-1, 1), rng.next_uniform(-1, 1));
      m(i, j) = v;
      m(j, i) = -v;
    }
  }
  return m;
}

}  // namespace detail

/// Fast consistency checks runnable from the CLI; prints one line per check.
/// Returns true iff all pass.
inline bool run_selftest(bool verbose = true) {
  struct Check {
    std::string name;
    bool ok;
  };
  std::vector<Check> checks;
  auto record = [&](const std::string& name, bool ok) { checks.push_back({name, ok}); };

  // Pfaffian closed forms and determinant identity
  {
    CMatrix m2(2, 2);
    m2 << 0, Complex(1.5, -0.5), Complex(-1.5, 0.5), 0;
    record("pfaffian 2x2 closed form",
           std::abs(pfaffian(SkewMatrix(m2)) - Complex(1.5, -0.5)) < 1e-15);

    CounterStream rng(0x5E1F7E57, 0);
    bool ok = true;
    for (int trial = 0; trial < 40 && ok; ++trial) {
      const int n = 2 * (1 + static_cast<int>(rng.next_u64() % 15));
      const CMatrix m = detail::random_skew(n, rng);
      const Complex pf = pfaffian(SkewMatrix(m));
      const Complex det = Eigen::PartialPivLU<CMatrix>(m).determinant();
      ok = std::abs(pf * pf - det) <= 1e-9 * std::abs(det);
    }
    record("pfaffian^2 = det on random skew matrices", ok);
  }

  // Long-time closed forms
  {
    record("c_xd(inf) identity at lambda=1/2, d=2",
           std::abs(quench_cxd_infty_exact(2, 0.5) - 0.8125) < 1e-12);
    record("w_D(inf) branch continuity at lambda=1",
           std::abs(quench_wd_infty(3, 1.0) - 0.125) < 1e-12 &&
               std::abs(quench_wd_infty(3, 1.0 + 1e-12) - 0.125) < 1e-9);
    record("g_r(inf) table values",
           std::abs(quench_g_infty(2, 0.5) - 0.1875) < 1e-15 &&
               std::abs(quench_g_infty(0, 0.5) + 0.25) < 1e-15 &&
               std::abs(quench_g_infty(-1, 2.0) - 0.375) < 1e-15);
  }

  // Kernel stationarity and unitality on a random chain
  {
    CounterStream rng(0xABCD, 1);
    const int n = 8;
    ChainSpec spec;
    spec.n_sites = n;
    for (int i = 0; i < n; ++i) {
      spec.couplings.push_back(rng.next_uniform(0.2, 1.5));
      spec.fields.push_back(rng.next_uniform(0.0, 1.5));
    }
    const SpectralData s = diagonalize(spec);
    bool stationary = true;
    const double c0 = xx_correlator(evolve_kernel(s, s, 0.0), 0, 2);
    for (double t : {1.0, 10.0, 100.0}) {
      stationary = stationary && std::abs(xx_correlator(evolve_kernel(s, s, t), 0, 2) - c0) < 1e-9;
    }
    record("stationarity under trivial quench", stationary);

    ChainSpec spec2 = spec;
    for (auto& f : spec2.fields) f = 1.5 - f;
    const CorrelationKernel k = evolve_kernel(s, diagonalize(spec2), 2.7);
    const CMatrix aa = k.phi_tilde * k.phi_tilde.adjoint();
    const CMatrix bb = k.psi_tilde * k.psi_tilde.adjoint();
    record("kernel unitality diag(AA~) = diag(BB~) = 1",
           (aa.diagonal().array() - 1.0).abs().maxCoeff() < 1e-9 &&
               (bb.diagonal().array() - 1.0).abs().maxCoeff() < 1e-9);
  }

  // Thermal bound: closed form vs direct series
  {
    bool ok = true;
    for (double temp : {0.5, 1.0, 2.0}) {
      for (long long l : {2LL, 17LL, 301LL}) {
        const double x = std::tanh(1.0 / temp);
        double series = 1.0;
        double p = 1.0;
        for (long long d = 1; d < l; ++d) {
          p *= x;
          series += p;
        }
        ok = ok && std::abs(series - thermal_bound_fq(1.0, temp, l)) < 1e-12;
      }
    }
    record("thermal bound closed form = series", ok);
  }

  bool all = true;
  for (const auto& c : checks) {
    all = all && c.ok;
    if (verbose) std::printf("[%s] %s\n", c.ok ? "PASS" : "FAIL", c.name.c_str());
  }
  return all;
}

}  // namespace tcff
