#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "tcff/common.hpp"

namespace tcff {

enum class SectorLabel { Electric, Magnetic };

struct QfiSample {
  int region_size = 0;  // side length L of the square region
  double f_q = 1.0;
};

/// QFI densities over increasing region sizes; samples strictly increasing
/// in L. Tiny negative roundoff in the correlator sum is clamped so that
/// f_q >= 1 holds in reported curves.
struct QfiCurve {
  std::vector<QfiSample> samples;
  SectorLabel label = SectorLabel::Electric;

  void add(int region_size, double f_q) {
    if (!samples.empty() && region_size <= samples.back().region_size) {
      throw std::invalid_argument("QfiCurve: region sizes must be strictly increasing");
    }
    samples.push_back({region_size, std::max(f_q, 1.0)});
  }
};

/// f_Q = 1 + sum_D w_D over D = 1..L-1. The empty list (L = 1) gives 1.
inline double qfi_density(const std::vector<double>& wd) {
  detail::CompensatedSum acc;
  for (double w : wd) {
    if (!(std::abs(w) <= 1.0 + 1e-6)) {
      throw std::invalid_argument("qfi_density: reduced Wilson loop outside [-1, 1]");
    }
    acc.add(w);
  }
  return 1.0 + acc.value();
}

struct FitWindow {
  int l_min = 0;
  int l_max = 0;

  bool operator==(const FitWindow&) const = default;
};

/// Power-law fit f_q = 1 + alpha L^beta on a window of the curve. The
/// saturated branch (area-law curves with f_q - 1 below 1e-9 on at least half
/// the window) pins beta = 0 instead of fitting noise; `saturated` records it.
struct ScalingFit {
  double alpha = 0.0;
  double beta = 0.0;
  double residual = 0.0;  // RMS of log-residuals; meaningless when saturated
  FitWindow window;
  bool saturated = false;
};

inline ScalingFit fit_scaling(const QfiCurve& curve, FitWindow window) {
  std::vector<QfiSample> in;
  for (const auto& s : curve.samples) {
    if (s.region_size >= window.l_min && s.region_size <= window.l_max) in.push_back(s);
  }
  if (in.size() < 4) {
    throw std::invalid_argument("fit_scaling: need at least 4 samples in window");
  }

  ScalingFit fit;
  fit.window = window;

  std::size_t n_tiny = 0;
  for (const auto& s : in) {
    if (s.f_q - 1.0 <= 1e-9) ++n_tiny;
  }
  if (2 * n_tiny >= in.size()) {
    double mean = 0.0;
    for (const auto& s : in) mean += s.f_q - 1.0;
    mean /= static_cast<double>(in.size());
    fit.alpha = std::max(mean, 0.0);
    fit.beta = 0.0;
    fit.residual = 0.0;
    fit.saturated = true;
    return fit;
  }

  // least squares through (log L, log(f_q - 1)); drop nonpositive strays
  std::vector<double> xs, ys;
  for (const auto& s : in) {
    const double e = s.f_q - 1.0;
    if (e > 1e-12) {
      xs.push_back(std::log(static_cast<double>(s.region_size)));
      ys.push_back(std::log(e));
    }
  }
  if (xs.size() < 4) {
    fit.alpha = 0.0;
    fit.beta = 0.0;
    fit.residual = 0.0;
    fit.saturated = true;
    return fit;
  }
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (intercept + slope * xs[i]);
    rss += r * r;
  }
  fit.beta = slope;
  fit.alpha = std::exp(intercept);
  fit.residual = std::sqrt(rss / n);
  return fit;
}

/// Default window: the upper half of the available region sizes, at least 4.
inline FitWindow default_fit_window(const QfiCurve& curve) {
  const std::size_t n = curve.samples.size();
  if (n < 4) throw std::invalid_argument("default_fit_window: need at least 4 samples");
  const std::size_t take = std::max<std::size_t>(4, (n + 1) / 2);
  const std::size_t first = n - take;
  return FitWindow{curve.samples[first].region_size, curve.samples[n - 1].region_size};
}

struct TopoIndexResult {
  double beta_e = 0.0;
  double beta_m = 0.0;
  double index = 0.0;
};

/// I = beta_e * beta_m. Tiny negative betas from fit noise are clamped to 0
/// in the index; the raw betas are preserved in the result.
inline TopoIndexResult topological_index(const ScalingFit& fit_e, const ScalingFit& fit_m) {
  if (!(fit_e.window == fit_m.window)) {
    throw std::invalid_argument("topological_index: fits must share the L-window");
  }
  TopoIndexResult r;
  r.beta_e = fit_e.beta;
  r.beta_m = fit_m.beta;
  r.index = std::max(fit_e.beta, 0.0) * std::max(fit_m.beta, 0.0);
  return r;
}

/// Largest certified entanglement depth: kappa+1 where kappa is the largest
/// integer with f_q > kappa; 1 when f_q <= 1 certifies nothing.
inline int entanglement_depth(double f_q) {
  if (f_q < 0.0) throw std::invalid_argument("entanglement_depth: f_q must be >= 0");
  if (f_q <= 1.0) return 1;
  return static_cast<int>(std::ceil(f_q));
}

/// Thermal upper bound 1 + sum_{D=1}^{L-1} tanh(J/T)^D, evaluated as the
/// closed geometric sum. Converges to 1/(1 - tanh(J/T)) as L grows, so the
/// fitted scaling exponent of the bound is 0 at every finite temperature.
/// The sum is hypersensitive to the rounding of x itself (a shift of one ulp
/// in x moves it by ~x/(1-x)^2 ulp), so everything is derived from the one
/// double value tanh(J/T); 1 - x is then exact (Sterbenz) and the result
/// agrees with direct term-by-term summation of the same x to ~1e-13.
inline double thermal_bound_fq(double coupling, double temperature, long long region_l) {
  if (!(coupling > 0.0)) throw std::invalid_argument("thermal_bound_fq: J must be > 0");
  if (!(temperature > 0.0)) {
    throw std::invalid_argument("thermal_bound_fq: T must be > 0 (T = 0 degenerates)");
  }
  if (region_l < 1) throw std::invalid_argument("thermal_bound_fq: L must be >= 1");
  if (region_l == 1) return 1.0;
  const double x = std::tanh(coupling / temperature);
  if (x == 1.0) return static_cast<double>(region_l);  // tanh saturated in double
  const double p = std::pow(x, static_cast<double>(region_l - 1));
  return 1.0 + x * (1.0 - p) / (1.0 - x);
}

}  // namespace tcff
