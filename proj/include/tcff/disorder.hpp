#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "tcff/chain.hpp"
#include "tcff/kernel.hpp"
#include "tcff/qfi.hpp"
#include "tcff/rng.hpp"

namespace tcff {

/// Parameters of the disordered-coupling quench experiment: couplings drawn
/// i.i.d. uniform on [J - dJ, J + dJ], fields quenched from 0 to
/// lambda_quench at t = 0, ensemble-averaged over seeded realizations.
struct DisorderSpec {
  double j_base = 1.0;
  double delta_j = 0.0;  // in [0, 1): keeps all couplings positive
  double lambda_quench = 0.5;
  int n_sites = 0;
  int l_region = 0;  // N = 5 L unless allow_custom_n
  int n_realizations = 0;
  std::uint64_t master_seed = 0;
  std::vector<double> times;
  bool allow_custom_n = false;

  void validate() const {
    if (!(j_base > 0.0)) throw std::invalid_argument("DisorderSpec: j_base must be > 0");
    if (!(delta_j >= 0.0 && delta_j < 1.0)) {
      throw std::invalid_argument("DisorderSpec: delta_j must be in [0, 1)");
    }
    if (l_region < 2) throw std::invalid_argument("DisorderSpec: l_region must be >= 2");
    if (!allow_custom_n && n_sites != 5 * l_region) {
      throw std::invalid_argument("DisorderSpec: n_sites must equal 5 * l_region");
    }
    if (n_sites < 2 || n_sites % 2 != 0) {
      throw std::invalid_argument("DisorderSpec: n_sites must be even and >= 2");
    }
    if (2 * l_region > n_sites) {
      throw std::invalid_argument("DisorderSpec: need n_sites >= 2 * l_region");
    }
    if (n_realizations < 1) throw std::invalid_argument("DisorderSpec: need realizations >= 1");
    if (times.empty()) throw std::invalid_argument("DisorderSpec: need at least one time");
    for (double t : times) {
      if (!(t >= 0.0)) throw std::invalid_argument("DisorderSpec: times must be >= 0");
    }
  }
};

/// Chain pair of one realization: couplings shared exactly between the two
/// specs (disorder lives in the stabilizer strengths), fields 0 before the
/// quench and lambda_quench after.
inline std::pair<ChainSpec, ChainSpec> sample_couplings(const DisorderSpec& spec,
                                                        int realization_index) {
  spec.validate();
  if (realization_index < 0 || realization_index >= spec.n_realizations) {
    throw std::invalid_argument("sample_couplings: realization_index out of range");
  }
  CounterStream stream(spec.master_seed, static_cast<std::uint64_t>(realization_index));
  ChainSpec initial;
  initial.n_sites = spec.n_sites;
  initial.couplings.resize(static_cast<std::size_t>(spec.n_sites));
  initial.fields.assign(static_cast<std::size_t>(spec.n_sites), 0.0);
  for (auto& j : initial.couplings) {
    j = stream.next_uniform(spec.j_base - spec.delta_j, spec.j_base + spec.delta_j);
  }
  ChainSpec quenched = initial;
  quenched.fields.assign(static_cast<std::size_t>(spec.n_sites), spec.lambda_quench);
  return {std::move(initial), std::move(quenched)};
}

/// w_D(t) of one realization: one kernel per time, x-x correlators averaged
/// over floor(N/4) start sites spaced evenly over the non-wrapping placements.
/// Row index = time, column index = entry of d_values. `inner_threads` spreads
/// the (start, D) grid of one realization across workers; results are stored
/// by slot and reduced in index order, so the output does not depend on it.
inline Matrix run_realization(const ChainSpec& initial, const ChainSpec& quenched,
                              const std::vector<double>& times, const std::vector<int>& d_values,
                              int inner_threads = 1) {
  const int n = initial.n_sites;
  int d_max = 0;
  for (int d : d_values) {
    if (d < 1 || d > n / 2 - 1) {
      throw std::invalid_argument("run_realization: d_values must lie in [1, N/2 - 1]");
    }
    d_max = std::max(d_max, d);
  }
  const SpectralData s0 = diagonalize(initial);
  const SpectralData s1 = diagonalize(quenched);

  const int n_starts = std::max(1, n / 4);
  std::vector<int> starts(static_cast<std::size_t>(n_starts));
  const double span = static_cast<double>(n - d_max);  // placements with j + d_max < N
  for (int i = 0; i < n_starts; ++i) {
    starts[static_cast<std::size_t>(i)] =
        std::min(n - 1 - d_max, static_cast<int>(i * span / n_starts));
  }

  const std::size_t n_d = d_values.size();
  std::vector<double> slots(static_cast<std::size_t>(n_starts) * n_d);
  Matrix out(static_cast<Index>(times.size()), static_cast<Index>(n_d));
  for (std::size_t it = 0; it < times.size(); ++it) {
    const auto w = wick_contractions(evolve_kernel(s0, s1, times[it]));
    auto fill = [&](std::size_t task) {
      const std::size_t is = task / n_d;
      const std::size_t id = task % n_d;
      slots[task] = xx_correlator(w, starts[is], d_values[id]);
    };
    const std::size_t n_tasks = slots.size();
    if (inner_threads <= 1) {
      for (std::size_t task = 0; task < n_tasks; ++task) fill(task);
    } else {
      std::atomic<std::size_t> cursor{0};
      auto worker = [&]() {
        for (;;) {
          const std::size_t task = cursor.fetch_add(1);
          if (task >= n_tasks) return;
          fill(task);
        }
      };
      std::vector<std::thread> pool;
      for (int i = 0; i < inner_threads; ++i) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }
    for (std::size_t id = 0; id < n_d; ++id) {
      detail::CompensatedSum acc;
      for (std::size_t is = 0; is < starts.size(); ++is) acc.add(slots[is * n_d + id]);
      out(static_cast<Index>(it), static_cast<Index>(id)) = acc.value() / n_starts;
    }
  }
  return out;
}

/// Mean and standard error of the mean, reduced in index order.
inline std::pair<double, double> mean_and_stderr(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  detail::CompensatedSum s;
  for (double x : xs) s.add(x);
  const double mean = s.value() / n;
  if (xs.size() < 2) return {mean, 0.0};
  detail::CompensatedSum ss;
  for (double x : xs) ss.add((x - mean) * (x - mean));
  return {mean, std::sqrt(ss.value() / (n * (n - 1.0)))};
}

struct DisorderResult {
  std::vector<double> times;
  std::vector<int> d_values;
  Matrix mean_wd;    // (time, D)
  Matrix stderr_wd;  // same shape
  std::vector<int> region_sizes;
  Matrix mean_fq;    // (time, L')
  Matrix stderr_fq;  // same shape
  ScalingFit fit;    // of the final-time mean f_Q curve
  std::uint64_t master_seed = 0;
  int n_realizations = 0;
  int n_failures = 0;
};

/// Geometric ladder of region sizes up to l, each step ~sqrt(2), smallest 4;
/// padded downward with consecutive integers (>= 2) so a scaling fit always
/// has at least four sizes when l permits.
inline std::vector<int> default_region_sizes(int l) {
  std::vector<int> sizes;
  double v = l;
  while (v >= 4.0) {
    const int s = static_cast<int>(std::lround(v));
    if (sizes.empty() || s < sizes.back()) sizes.push_back(s);
    v /= 1.4142135623730951;
  }
  while (sizes.size() < 4 && (sizes.empty() ? l : sizes.back()) > 2) {
    sizes.push_back((sizes.empty() ? l + 1 : sizes.back()) - 1);
  }
  std::reverse(sizes.begin(), sizes.end());
  return sizes;
}

/// Runs the ensemble. Realizations execute on `threads` workers with no
/// shared mutable state; per-realization rows are stored by index and reduced
/// sequentially afterwards, so the result is bit-identical for any thread
/// count. Fails if more than 1% of realizations error.
inline DisorderResult average_ensemble(const DisorderSpec& spec, int threads = 1) {
  spec.validate();
  const int l = spec.l_region;
  std::vector<int> d_values;
  for (int d = 1; d <= l - 1; ++d) d_values.push_back(d);

  const std::size_t n_real = static_cast<std::size_t>(spec.n_realizations);
  std::vector<Matrix> rows(n_real);
  std::vector<std::string> errors(n_real);
  std::vector<char> failed(n_real, 0);

  // realizations few enough to leave workers idle get inner parallelism
  const int outer = std::max(1, std::min(threads, spec.n_realizations));
  const int inner = std::max(1, threads / outer);

  std::atomic<int> cursor{0};
  auto worker = [&]() {
    for (;;) {
      const int i = cursor.fetch_add(1);
      if (i >= spec.n_realizations) return;
      try {
        auto [initial, quenched] = sample_couplings(spec, i);
        rows[static_cast<std::size_t>(i)] =
            run_realization(initial, quenched, spec.times, d_values, inner);
      } catch (const std::exception& e) {
        failed[static_cast<std::size_t>(i)] = 1;
        errors[static_cast<std::size_t>(i)] = e.what();
      }
    }
  };
  if (outer <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < outer; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  DisorderResult res;
  res.times = spec.times;
  res.d_values = d_values;
  res.region_sizes = default_region_sizes(l);
  res.master_seed = spec.master_seed;
  res.n_realizations = spec.n_realizations;
  for (std::size_t i = 0; i < n_real; ++i) {
    if (failed[i]) ++res.n_failures;
  }
  if (res.n_failures * 100 > spec.n_realizations) {
    std::string first;
    for (std::size_t i = 0; i < n_real; ++i) {
      if (failed[i]) {
        first = errors[i];
        break;
      }
    }
    throw NumericalError("average_ensemble: more than 1% of realizations failed; first: " + first);
  }

  const Index n_t = static_cast<Index>(spec.times.size());
  const Index n_d = static_cast<Index>(d_values.size());
  const Index n_l = static_cast<Index>(res.region_sizes.size());
  res.mean_wd = Matrix(n_t, n_d);
  res.stderr_wd = Matrix(n_t, n_d);
  res.mean_fq = Matrix(n_t, n_l);
  res.stderr_fq = Matrix(n_t, n_l);

  std::vector<double> buf;
  for (Index it = 0; it < n_t; ++it) {
    for (Index id = 0; id < n_d; ++id) {
      buf.clear();
      for (std::size_t i = 0; i < n_real; ++i) {
        if (!failed[i]) buf.push_back(rows[i](it, id));
      }
      const auto [m, se] = mean_and_stderr(buf);
      res.mean_wd(it, id) = m;
      res.stderr_wd(it, id) = se;
    }
    for (Index il = 0; il < n_l; ++il) {
      const int lp = res.region_sizes[static_cast<std::size_t>(il)];
      buf.clear();
      for (std::size_t i = 0; i < n_real; ++i) {
        if (failed[i]) continue;
        detail::CompensatedSum acc;
        for (Index id = 0; id < n_d; ++id) {
          if (d_values[static_cast<std::size_t>(id)] < lp) acc.add(rows[i](it, id));
        }
        buf.push_back(1.0 + acc.value());
      }
      const auto [m, se] = mean_and_stderr(buf);
      res.mean_fq(it, il) = m;
      res.stderr_fq(it, il) = se;
    }
  }

  QfiCurve curve;
  for (Index il = 0; il < n_l; ++il) {
    curve.add(res.region_sizes[static_cast<std::size_t>(il)], res.mean_fq(n_t - 1, il));
  }
  if (curve.samples.size() >= 4) {
    res.fit = fit_scaling(curve, default_fit_window(curve));
  } else {
    res.fit.saturated = true;  // too few region sizes for a meaningful fit
  }
  return res;
}

}  // namespace tcff
