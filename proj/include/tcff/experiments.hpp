#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tcff/disorder.hpp"
#include "tcff/io.hpp"
#include "tcff/qfi.hpp"
#include "tcff/svg.hpp"
#include "tcff/uniform.hpp"

namespace tcff {

struct RunContext {
  std::filesystem::path out_dir;
  std::uint64_t seed = 0;
  int threads = 1;
};

namespace detail {

inline Manifest make_manifest(const std::string& experiment, const Config& cfg,
                              const RunContext& ctx,
                              const std::map<std::string, std::string>& resolved) {
  Manifest m;
  m.experiment = experiment;
  for (const auto& [k, v] : cfg.values()) m.entries[k] = v;
  for (const auto& [k, v] : resolved) m.entries[k] = v;
  // thread count is an execution detail, not an input: results do not depend
  // on it, and recording it would break byte-identical reruns
  m.entries["seed"] = std::to_string(ctx.seed);
  return m;
}

inline std::vector<int> int_list(const Config& cfg, const std::string& key,
                                 const std::vector<int>& fallback) {
  std::vector<double> fb;
  for (int v : fallback) fb.push_back(v);
  std::vector<int> out;
  for (double v : cfg.get_list(key, fb)) out.push_back(static_cast<int>(std::lround(v)));
  return out;
}

inline std::string list_to_string(const std::vector<int>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + std::to_string(xs[i]);
  return s;
}

inline void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string());
}

}  // namespace detail

/// Ground-state reduced Wilson loops and QFI densities over a field grid.
/// Emits wd_vs_D.csv (lambda, D, w_D) and fq_vs_L.csv (lambda, L, f_q).
inline void run_ground(const Config& cfg, const RunContext& ctx) {
  cfg.require_known({"lambda", "l", "n", "plot"});
  const std::vector<double> lambdas = cfg.get_list("lambda", {0.5, 1.0, 1.5});
  const int l = cfg.get_int("l", 64);
  const int n = cfg.get_int("n", 5 * l);
  const bool plot = cfg.get_bool("plot", false);
  if (l < 1) throw ConfigError("run_ground: l must be >= 1");
  if (n < 2 * l) throw ConfigError("run_ground: need n >= 2 * l");

  detail::ensure_dir(ctx.out_dir);
  Manifest manifest = detail::make_manifest(
      "ground", cfg, ctx,
      {{"l", std::to_string(l)}, {"n", std::to_string(n)}});

  std::vector<SvgSeries> wd_series;
  CsvFile wd_csv(ctx.out_dir / "wd_vs_D.csv", manifest, {"lambda", "D", "w_D"});
  CsvFile fq_csv(ctx.out_dir / "fq_vs_L.csv", manifest, {"lambda", "L", "f_q"});
  bool any_fit = false;
  for (double lambda : lambdas) {
    std::vector<double> wd;
    if (l >= 2) {
      const ContractionSet set = ground_contractions(lambda, n, l - 1);
      for (int d = 1; d <= l - 1; ++d) {
        wd.push_back(xx_from_contractions(set, d));
        wd_csv.row({lambda, static_cast<double>(d), wd.back()});
      }
    }
    QfiCurve curve;
    for (int lp = 1; lp <= l; ++lp) {
      const double fq =
          qfi_density(std::vector<double>(wd.begin(), wd.begin() + (lp - 1)));
      fq_csv.row({lambda, static_cast<double>(lp), fq});
      if (lp >= 2) curve.add(lp, fq);
    }
    if (static_cast<int>(curve.samples.size()) >= 4) {
      const ScalingFit fit = fit_scaling(curve, default_fit_window(curve));
      manifest.results["fit_lambda_" + format_double(lambda)] =
          fit.saturated ? "refused:saturated"
                        : "alpha=" + format_double(fit.alpha) + " beta=" + format_double(fit.beta);
      any_fit = true;
    } else {
      manifest.results["fit_lambda_" + format_double(lambda)] = "refused:saturated";
    }
    if (plot) {
      SvgSeries s;
      s.name = "lambda=" + format_double(lambda);
      for (std::size_t i = 0; i < wd.size(); ++i) {
        s.x.push_back(static_cast<double>(i + 1));
        s.y.push_back(wd[i]);
      }
      wd_series.push_back(std::move(s));
    }
  }
  (void)any_fit;
  if (plot) write_svg_chart(ctx.out_dir / "wd_vs_D.svg", "reduced Wilson loop", "D", "w_D",
                            wd_series);
  manifest.write(ctx.out_dir);
}

/// Scaling topological index over a (lambda_x, lambda_z) grid.
/// Emits index.csv with both fitted exponents and their residuals.
inline void run_phase_diagram(const Config& cfg, const RunContext& ctx) {
  cfg.require_known({"lambda_x", "lambda_z", "l_values", "n_over_l", "j_a", "j_b", "plot"});
  const std::vector<double> lxs = cfg.get_list("lambda_x", {0.5, 1.5});
  const std::vector<double> lzs = cfg.get_list("lambda_z", {0.5, 1.5});
  const std::vector<int> l_values = detail::int_list(cfg, "l_values", {16, 24, 32, 48, 64});
  const int n_over_l = cfg.get_int("n_over_l", 5);
  const double j_a = cfg.get_double("j_a", 1.0);
  const double j_b = cfg.get_double("j_b", 1.0);
  if (l_values.size() < 4) throw ConfigError("run_phase_diagram: need >= 4 region sizes");
  if (n_over_l < 2) throw ConfigError("run_phase_diagram: need n_over_l >= 2");

  detail::ensure_dir(ctx.out_dir);
  Manifest manifest = detail::make_manifest(
      "phase-diagram", cfg, ctx, {{"l_values", detail::list_to_string(l_values)}});

  // QFI curve of one sector at effective field lambda/J.
  auto sector_curve = [&](double lambda_over_j) {
    QfiCurve curve;
    for (int l : l_values) {
      const int n = n_over_l * l;
      std::vector<double> wd;
      const ContractionSet set = ground_contractions(lambda_over_j, n, l - 1);
      for (int d = 1; d <= l - 1; ++d) wd.push_back(xx_from_contractions(set, d));
      curve.add(l, qfi_density(wd));
    }
    return curve;
  };

  CsvFile csv(ctx.out_dir / "index.csv", manifest,
              {"lambda_x", "lambda_z", "beta_e", "beta_m", "index", "residual_e", "residual_m"});
  for (double lz : lzs) {
    for (double lx : lxs) {
      QfiCurve ce = sector_curve(lx / j_b);
      ce.label = SectorLabel::Electric;
      QfiCurve cm = sector_curve(lz / j_a);
      cm.label = SectorLabel::Magnetic;
      const FitWindow window = default_fit_window(ce);
      const ScalingFit fe = fit_scaling(ce, window);
      const ScalingFit fm = fit_scaling(cm, window);
      const TopoIndexResult idx = topological_index(fe, fm);
      csv.row({lx, lz, idx.beta_e, idx.beta_m, idx.index, fe.residual, fm.residual});
    }
  }
  manifest.write(ctx.out_dir);
}

/// Uniform quench lambda0 -> lambda: correlator time series next to the
/// long-time closed forms. Emits quench_vs_t.csv.
inline void run_quench_uniform(const Config& cfg, const RunContext& ctx) {
  cfg.require_known({"lambda0", "lambda", "n", "d_values", "t_min", "t_max", "t_samples", "plot"});
  const double lambda0 = cfg.get_double("lambda0", 0.0);
  const double lambda = cfg.get_double("lambda", 0.5);
  const int n = cfg.get_int("n", 400);
  const std::vector<int> d_values = detail::int_list(cfg, "d_values", {1, 2, 3, 4, 5, 6, 7, 8});
  const double t_min = cfg.get_double("t_min", 400.0);
  const double t_max = cfg.get_double("t_max", 500.0);
  const int t_samples = cfg.get_int("t_samples", 20);
  const bool plot = cfg.get_bool("plot", false);
  if (t_samples < 1) throw ConfigError("run_quench_uniform: t_samples must be >= 1");
  if (!(t_max >= t_min)) throw ConfigError("run_quench_uniform: need t_max >= t_min");
  int d_max = 0;
  for (int d : d_values) {
    if (d < 1 || d > n / 2 - 1) throw ConfigError("run_quench_uniform: d outside [1, n/2-1]");
    d_max = std::max(d_max, d);
  }

  detail::ensure_dir(ctx.out_dir);
  Manifest manifest = detail::make_manifest("quench-uniform", cfg, ctx,
                                            {{"n", std::to_string(n)}});
  CsvFile csv(ctx.out_dir / "quench_vs_t.csv", manifest,
              {"t", "d", "c_xd", "c_xd_infinity", "w_d_infinity"});
  std::vector<SvgSeries> series(d_values.size());
  for (int i = 0; i < t_samples; ++i) {
    const double t =
        t_samples == 1 ? t_min : t_min + (t_max - t_min) * i / (t_samples - 1.0);
    const ContractionSet set = quench_contractions(lambda0, lambda, t, n, d_max);
    for (std::size_t k = 0; k < d_values.size(); ++k) {
      const int d = d_values[k];
      const double c = xx_from_contractions(set, d);
      csv.row({t, static_cast<double>(d), c, quench_cxd_infty_exact(d, std::max(lambda, 1e-300)),
               quench_wd_infty(d, lambda)});
      if (plot) {
        series[k].name = "d=" + std::to_string(d);
        series[k].x.push_back(t);
        series[k].y.push_back(c);
      }
    }
  }
  if (plot) write_svg_chart(ctx.out_dir / "quench_vs_t.svg", "quench correlator", "t", "C_x",
                            series);
  manifest.write(ctx.out_dir);
}

/// Disordered-coupling quench ensemble. Emits wbar_vs_t.csv, wbar_vs_D.csv
/// and fqbar_vs_L.csv with standard-error columns; the fitted scaling of the
/// final-time QFI curve lands in the manifest.
inline void run_quench_disorder(const Config& cfg, const RunContext& ctx) {
  cfg.require_known({"delta_j", "lambda", "l", "n", "realizations", "times", "j_base", "plot"});
  DisorderSpec spec;
  spec.delta_j = cfg.get_double("delta_j", 0.5);
  spec.lambda_quench = cfg.get_double("lambda", 0.5);
  spec.l_region = cfg.get_int("l", 40);
  spec.n_sites = cfg.get_int("n", 5 * spec.l_region);
  spec.allow_custom_n = cfg.has("n");
  spec.j_base = cfg.get_double("j_base", 1.0);
  spec.n_realizations = cfg.get_int("realizations", 100);
  spec.times = cfg.get_list("times", {1000.0});
  spec.master_seed = ctx.seed;
  spec.validate();

  detail::ensure_dir(ctx.out_dir);
  Manifest manifest = detail::make_manifest(
      "quench-disorder", cfg, ctx,
      {{"n", std::to_string(spec.n_sites)},
       {"l", std::to_string(spec.l_region)},
       {"start_site_policy", "floor(N/4) sites evenly spaced over non-wrapping placements"}});

  const DisorderResult res = average_ensemble(spec, ctx.threads);

  CsvFile wt(ctx.out_dir / "wbar_vs_t.csv", manifest, {"t", "D", "wbar_D", "stderr"});
  for (std::size_t it = 0; it < res.times.size(); ++it) {
    for (std::size_t id = 0; id < res.d_values.size(); ++id) {
      wt.row({res.times[it], static_cast<double>(res.d_values[id]),
              res.mean_wd(static_cast<Index>(it), static_cast<Index>(id)),
              res.stderr_wd(static_cast<Index>(it), static_cast<Index>(id))});
    }
  }
  const Index last = static_cast<Index>(res.times.size()) - 1;
  CsvFile wd(ctx.out_dir / "wbar_vs_D.csv", manifest, {"D", "wbar_D", "stderr"});
  for (std::size_t id = 0; id < res.d_values.size(); ++id) {
    wd.row({static_cast<double>(res.d_values[id]), res.mean_wd(last, static_cast<Index>(id)),
            res.stderr_wd(last, static_cast<Index>(id))});
  }
  CsvFile fq(ctx.out_dir / "fqbar_vs_L.csv", manifest, {"L", "fqbar", "stderr"});
  for (std::size_t il = 0; il < res.region_sizes.size(); ++il) {
    fq.row({static_cast<double>(res.region_sizes[il]), res.mean_fq(last, static_cast<Index>(il)),
            res.stderr_fq(last, static_cast<Index>(il))});
  }
  manifest.results["fit_beta"] = format_double(res.fit.beta);
  manifest.results["fit_alpha"] = format_double(res.fit.alpha);
  manifest.results["fit_residual"] = format_double(res.fit.residual);
  manifest.results["fit_window"] =
      std::to_string(res.fit.window.l_min) + ".." + std::to_string(res.fit.window.l_max);
  manifest.results["failed_realizations"] = std::to_string(res.n_failures);
  if (cfg.get_bool("plot", false)) {
    SvgSeries s;
    s.name = "t=" + format_double(res.times.back());
    for (std::size_t id = 0; id < res.d_values.size(); ++id) {
      s.x.push_back(res.d_values[id]);
      s.y.push_back(res.mean_wd(last, static_cast<Index>(id)));
    }
    write_svg_chart(ctx.out_dir / "wbar_vs_D.svg", "ensemble Wilson loop", "D", "wbar", {s});
  }
  manifest.write(ctx.out_dir);
}

/// Thermal QFI upper bound over a (T, L) grid; demonstrates L-convergence.
inline void run_thermal(const Config& cfg, const RunContext& ctx) {
  cfg.require_known({"j", "t_values", "l_values", "plot"});
  const double j = cfg.get_double("j", 1.0);
  const std::vector<double> ts = cfg.get_list("t_values", {0.5, 1.0, 2.0});
  const std::vector<int> ls =
      detail::int_list(cfg, "l_values", {2, 4, 8, 16, 32, 64, 128, 256, 512, 1024, 10000});
  if (!(j > 0.0)) throw ConfigError("run_thermal: j must be > 0");

  detail::ensure_dir(ctx.out_dir);
  Manifest manifest = detail::make_manifest("thermal-bound", cfg, ctx, {});
  CsvFile csv(ctx.out_dir / "bound_vs_L.csv", manifest, {"T", "L", "bound"});
  std::vector<SvgSeries> series;
  for (double t : ts) {
    SvgSeries s;
    s.name = "T=" + format_double(t);
    for (int l : ls) {
      const double b = thermal_bound_fq(j, t, l);
      csv.row({t, static_cast<double>(l), b});
      s.x.push_back(l);
      s.y.push_back(b);
    }
    series.push_back(std::move(s));
  }
  if (cfg.get_bool("plot", false)) {
    write_svg_chart(ctx.out_dir / "bound_vs_L.svg", "thermal QFI bound", "L", "bound", series,
                    true, false);
  }
  manifest.write(ctx.out_dir);
}

}  // namespace tcff
