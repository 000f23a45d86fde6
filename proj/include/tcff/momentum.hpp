#pragma once

#include <cmath>
#include <vector>

#include "tcff/common.hpp"

namespace tcff {

/// One antiperiodic momentum mode of the uniform chain (J = 1). The even
/// sector selects q = +-(2k-1) pi / N, k = 1..N/2. Theta is the Bogoliubov
/// angle of the ground state: sin(Theta) = -y/omega, cos(Theta) = z/omega.
struct MomentumMode {
  double q = 0.0;
  double y = 0.0;      // -sin q
  double z = 0.0;      // lambda - cos q
  double omega = 0.0;  // sqrt(y^2 + z^2); quasiparticle energy is 2*omega
  double theta = 0.0;
  double u = 0.0;  // cos(Theta/2)
  double v = 0.0;  // sin(Theta/2)
};

inline std::vector<MomentumMode> momentum_modes(int n_sites, double lambda) {
  if (n_sites < 2 || n_sites % 2 != 0) {
    throw std::invalid_argument("momentum_modes: n_sites must be even and >= 2");
  }
  if (!std::isfinite(lambda)) {
    throw std::invalid_argument("momentum_modes: field must be finite");
  }
  std::vector<MomentumMode> modes;
  modes.reserve(static_cast<std::size_t>(n_sites));
  for (int k = 1; k <= n_sites / 2; ++k) {
    const double qp = (2.0 * k - 1.0) * M_PI / n_sites;
    for (double q : {qp, -qp}) {
      MomentumMode m;
      m.q = q;
      m.y = -std::sin(q);
      m.z = lambda - std::cos(q);
      m.omega = std::hypot(m.y, m.z);
      m.theta = std::atan2(-m.y, m.z);
      m.u = std::cos(0.5 * m.theta);
      m.v = std::sin(0.5 * m.theta);
      modes.push_back(m);
    }
  }
  return modes;
}

/// Heisenberg factors of one mode after a quench, with initial constraints
/// U_q(0) = u0 and V_q(0) = -i v0. Unitarity |U|^2 + |V|^2 = 1 holds for all t.
struct BogoliubovFactors {
  Complex u_t;
  Complex v_t;
};

inline BogoliubovFactors evolve_mode(const MomentumMode& initial, const MomentumMode& quench,
                                     double t) {
  const double c = std::cos(2.0 * quench.omega * t);
  const double s = std::sin(2.0 * quench.omega * t);
  const double yh = quench.y / quench.omega;
  const double zh = quench.z / quench.omega;
  BogoliubovFactors f;
  f.u_t = Complex(initial.u * c, (initial.v * yh - initial.u * zh) * s);
  f.v_t = Complex((initial.u * yh + initial.v * zh) * s, -initial.v * c);
  return f;
}

/// The three translation-invariant contractions for r in [-d_max, d_max]:
/// g[r] = <B_j A_{j+r}> (real for all t), g_a[r] = <A_j A_{j+r}> and
/// g_b[r] = <B_j B_{j+r}> (delta at r = 0; purely imaginary elsewhere).
struct ContractionSet {
  int d_max = 0;
  double time = 0.0;
  bool stationary = false;  // g_a = delta, g_b = -delta exactly
  std::vector<double> g;
  std::vector<Complex> g_a;
  std::vector<Complex> g_b;

  double g_at(int r) const { return g[static_cast<std::size_t>(r + d_max)]; }
  Complex ga_at(int r) const { return g_a[static_cast<std::size_t>(r + d_max)]; }
  Complex gb_at(int r) const { return g_b[static_cast<std::size_t>(r + d_max)]; }
};

namespace detail {

inline void check_momentum_range(int n_sites, int d_max) {
  if (d_max < 0) throw std::invalid_argument("d_max must be nonnegative");
  if (2 * d_max >= n_sites) {
    throw std::invalid_argument("d_max must satisfy d_max < N/2");
  }
}

}  // namespace detail

/// Equilibrium contractions of the uniform-chain ground state,
/// g_r = -(1/N) sum_q cos(q r + Theta_q); g_a, g_b collapse to +-delta.
inline ContractionSet ground_contractions(double lambda, int n_sites, int d_max) {
  detail::check_momentum_range(n_sites, d_max);
  const auto modes = momentum_modes(n_sites, lambda);
  ContractionSet set;
  set.d_max = d_max;
  set.time = 0.0;
  set.stationary = true;
  set.g.resize(static_cast<std::size_t>(2 * d_max + 1));
  set.g_a.assign(static_cast<std::size_t>(2 * d_max + 1), Complex(0, 0));
  set.g_b.assign(static_cast<std::size_t>(2 * d_max + 1), Complex(0, 0));
  for (int r = -d_max; r <= d_max; ++r) {
    detail::CompensatedSum acc;
    for (const auto& m : modes) acc.add(std::cos(m.q * r + m.theta));
    set.g[static_cast<std::size_t>(r + d_max)] = -acc.value() / n_sites;
  }
  set.g_a[static_cast<std::size_t>(d_max)] = Complex(1, 0);
  set.g_b[static_cast<std::size_t>(d_max)] = Complex(-1, 0);
  return set;
}

/// Contractions of the quenched state at time t, summed over the antiperiodic
/// momentum set with the evolved mode factors. Reduces to the equilibrium set
/// when the quench is trivial (lambda0 == lambda), for every t.
inline ContractionSet quench_contractions(double lambda0, double lambda, double t, int n_sites,
                                          int d_max) {
  detail::check_momentum_range(n_sites, d_max);
  const auto m0 = momentum_modes(n_sites, lambda0);
  const auto m1 = momentum_modes(n_sites, lambda);
  const std::size_t n_modes = m0.size();

  std::vector<Complex> u(n_modes), v(n_modes);
  for (std::size_t i = 0; i < n_modes; ++i) {
    const auto f = evolve_mode(m0[i], m1[i], t);
    u[i] = f.u_t;
    v[i] = f.v_t;
  }

  ContractionSet set;
  set.d_max = d_max;
  set.time = t;
  set.stationary = false;
  set.g.resize(static_cast<std::size_t>(2 * d_max + 1));
  set.g_a.resize(static_cast<std::size_t>(2 * d_max + 1));
  set.g_b.resize(static_cast<std::size_t>(2 * d_max + 1));

  for (int r = -d_max; r <= d_max; ++r) {
    detail::CompensatedSum g_re, diag_re, cross_re, cross_im;
    for (std::size_t i = 0; i < n_modes; ++i) {
      const double qr = m0[i].q * r;
      const Complex em(std::cos(qr), -std::sin(qr));  // e^{-i q r}
      const Complex ep = std::conj(em);               // e^{+i q r}
      const double v2 = std::norm(v[i]);
      const double u2 = std::norm(u[i]);
      const Complex cross = ep * std::conj(u[i]) * v[i];  // e^{iqr} U* V
      const Complex crossm = em * u[i] * std::conj(v[i]); // e^{-iqr} U V*
      // g_r: |V|^2 e^{-iqr} - |U|^2 e^{+iqr} + cross + crossm  (real by parity)
      g_re.add(v2 * em.real() - u2 * ep.real() + cross.real() + crossm.real());
      // g_a: |V|^2 e^{-iqr} + |U|^2 e^{+iqr} + cross - crossm
      // g_b: -|V|^2 e^{-iqr} - |U|^2 e^{+iqr} + cross - crossm
      diag_re.add(v2 * em.real() + u2 * ep.real());
      cross_re.add(cross.real() - crossm.real());
      cross_im.add(cross.imag() - crossm.imag());
    }
    const std::size_t idx = static_cast<std::size_t>(r + d_max);
    set.g[idx] = g_re.value() / n_sites;
    const Complex cr(cross_re.value() / n_sites, cross_im.value() / n_sites);
    const double diag = diag_re.value() / n_sites;
    set.g_a[idx] = Complex(diag, 0) + cr;
    set.g_b[idx] = Complex(-diag, 0) + cr;
  }
  return set;
}

}  // namespace tcff
