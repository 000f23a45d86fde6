// Acceptance gate: end-to-end checks at desk scale, one line per criterion.
// Exit code 0 iff every criterion passes.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include "../support/ed_oracle.hpp"
#include "tcff/disorder.hpp"
#include "tcff/experiments.hpp"
#include "tcff/kernel.hpp"
#include "tcff/qfi.hpp"
#include "tcff/rng.hpp"
#include "tcff/uniform.hpp"

using namespace tcff;
namespace fs = std::filesystem;

namespace {

struct Gate {
  bool pass = true;
  int failures = 0;

  void report(const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] %s — %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) {
      pass = false;
      ++failures;
    }
  }
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

// ---- criterion 1: exact-diagonalization oracle equivalence ----
void criterion_1(Gate& gate) {
  CounterStream rng(0xACCE91, 0);
  double max_err = 0.0;
  double max_imag = 0.0;
  for (int n : {4, 6, 8}) {
    for (int inst = 0; inst < 30; ++inst) {
      ChainSpec initial, quench;
      initial.n_sites = quench.n_sites = n;
      for (int i = 0; i < n; ++i) {
        initial.couplings.push_back(rng.next_uniform(0.2, 1.5));
        initial.fields.push_back(rng.next_uniform(0.0, 1.5));
        quench.couplings.push_back(rng.next_uniform(0.2, 1.5));
        quench.fields.push_back(rng.next_uniform(0.0, 1.5));
      }
      const SpectralData s0 = diagonalize(initial);
      const SpectralData s1 = diagonalize(quench);
      for (double t : {0.0, 0.5, 1.7, 10.0}) {
        const WickContractions w = wick_contractions(evolve_kernel(s0, s1, t));
        for (int d = 1; d <= n / 2 - 1; ++d) {
          const XxValue v = xx_correlator_diag(w, 0, d);
          const double ed = ed_oracle::quench_xx_general(
              initial.couplings, initial.fields, quench.couplings, quench.fields, t, 0, d);
          max_err = std::max(max_err, std::abs(v.value - ed));
          max_imag = std::max(max_imag, v.imag_abs);
        }
      }
    }
  }
  gate.report("criterion 1 (ED oracle equivalence)", max_err <= 1e-8 && max_imag <= 1e-6,
              "max |C_pf - C_ed| = " + fmt(max_err) + ", max |Im pf| = " + fmt(max_imag) +
                  " over 90 random quenches");
}

// ---- criterion 2: pfaffian suite ----
void criterion_2(Gate& gate) {
  CMatrix m2(2, 2);
  const Complex a(0.9, -0.4);
  m2 << 0, a, -a, 0;
  const bool ok2 = std::abs(pfaffian(SkewMatrix(m2)) - a) < 1e-15;

  const Complex ca(0.3, 0.1), cb(-1.2, 0.4), cc(0.5, -0.9), cd(1.1, 0.0), ce(-0.2, 0.7),
      cf(0.8, -0.3);
  CMatrix m4(4, 4);
  m4 << 0, ca, cb, cc, -ca, 0, cd, ce, -cb, -cd, 0, cf, -cc, -ce, -cf, 0;
  const bool ok4 = std::abs(pfaffian(SkewMatrix(m4)) - (ca * cf - cb * ce + cc * cd)) < 1e-14;

  CounterStream rng(0xACCE92, 0);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 * (1 + static_cast<int>(rng.next_u64() % 30));
    CMatrix m = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const Complex v(rng.next_uniform(-1, 1), rng.next_uniform(-1, 1));
        m(i, j) = v;
        m(j, i) = -v;
      }
    }
    const Complex pf = pfaffian(SkewMatrix(m));
    const Complex det = Eigen::PartialPivLU<CMatrix>(m).determinant();
    worst = std::max(worst, std::abs(pf * pf - det) / std::max(1e-30, std::abs(det)));
  }
  gate.report("criterion 2 (Pfaffian suite)", ok2 && ok4 && worst <= 1e-9,
              "closed forms " + std::string(ok2 && ok4 ? "exact" : "WRONG") +
                  ", max rel |pf^2 - det| = " + fmt(worst) + " over 200 matrices (n <= 60)");
}

// ---- criterion 3: ground-state Wilson loops at desk scale ----
void criterion_3(Gate& gate) {
  const int n = 320;
  const double w40 = ground_wd(40, 0.5, n);
  const double w50 = ground_wd(50, 0.5, n);
  const double w30_strong = ground_wd(30, 1.5, n);
  bool ordered = true;
  const ContractionSet half = ground_contractions(0.5, n, 50);
  const ContractionSet crit = ground_contractions(1.0, n, 50);
  const ContractionSet strong = ground_contractions(1.5, n, 50);
  for (int d = 5; d <= 50; ++d) {
    const double a = xx_from_contractions(half, d);
    const double b = xx_from_contractions(crit, d);
    const double c = xx_from_contractions(strong, d);
    ordered = ordered && a > b && b > c;
  }
  const bool pass =
      std::abs(w50 - w40) <= 1e-3 && w50 >= 0.92 && w50 <= 0.94 && w30_strong < 1e-2 && ordered;
  gate.report("criterion 3 (ground-state plateau and decay)", pass,
              "w50(0.5) = " + fmt(w50) + ", |w50 - w40| = " + fmt(std::abs(w50 - w40)) +
                  ", w30(1.5) = " + fmt(w30_strong) + ", ordering " +
                  (ordered ? "holds" : "VIOLATED"));
}

// ---- criterion 4: long-time quench values ----
void criterion_4(Gate& gate) {
  const bool exact_id = std::abs(quench_cxd_infty_exact(2, 0.5) - 0.8125) <= 1e-12;
  const int n = 400;
  const int samples = 20;
  double worst_rel = 0.0;
  std::vector<double> acc(9, 0.0);
  for (int i = 0; i < samples; ++i) {
    const double t = 400.0 + 100.0 * i / (samples - 1.0);
    const ContractionSet set = quench_contractions(0.0, 0.5, t, n, 8);
    for (int d = 1; d <= 8; ++d) acc[static_cast<std::size_t>(d)] += xx_from_contractions(set, d);
  }
  for (int d = 1; d <= 8; ++d) {
    const double mean = acc[static_cast<std::size_t>(d)] / samples;
    const double exact = quench_cxd_infty_exact(d, 0.5);
    worst_rel = std::max(worst_rel, std::abs(mean - exact) / std::abs(exact));
  }
  gate.report("criterion 4 (long-time quench window)", exact_id && worst_rel <= 0.02,
              "identity at (d=2, lambda=1/2) " + std::string(exact_id ? "exact" : "WRONG") +
                  ", max rel deviation over d <= 8: " + fmt(worst_rel));
}

// ---- criterion 5: scaling topological index at desk scale ----
void criterion_5(Gate& gate) {
  const std::vector<int> l_values = {16, 24, 32, 48, 64};
  auto sector_beta = [&](double lambda, FitWindow& window_out) {
    QfiCurve curve;
    for (int l : l_values) {
      std::vector<double> wd;
      const ContractionSet set = ground_contractions(lambda, 5 * l, l - 1);
      for (int d = 1; d <= l - 1; ++d) wd.push_back(xx_from_contractions(set, d));
      curve.add(l, qfi_density(wd));
    }
    window_out = default_fit_window(curve);
    return fit_scaling(curve, window_out);
  };
  auto index_at = [&](double lx, double lz) {
    FitWindow we, wm;
    const ScalingFit fe = sector_beta(lx, we);
    const ScalingFit fm = sector_beta(lz, wm);
    return topological_index(fe, fm).index;
  };
  const double i_topo = index_at(0.5, 0.5);
  const double i_t1 = index_at(1.5, 0.5);
  const double i_t2 = index_at(0.5, 1.5);
  const double i_t3 = index_at(1.5, 1.5);
  const bool pass = i_topo >= 0.9 && i_t1 <= 0.1 && i_t2 <= 0.1 && i_t3 <= 0.1;
  gate.report("criterion 5 (topological index map)", pass,
              "I(0.5,0.5) = " + fmt(i_topo) + ", I(1.5,0.5) = " + fmt(i_t1) + ", I(0.5,1.5) = " +
                  fmt(i_t2) + ", I(1.5,1.5) = " + fmt(i_t3));
}

// ---- criteria 6 and 8: disorder ensemble and determinism ----
double csv_wbar_at_d(const fs::path& file, int d_wanted) {
  const CsvData data = read_csv(file);
  for (const auto& row : data.rows) {
    if (static_cast<int>(row[0]) == d_wanted) return row[1];
  }
  throw std::runtime_error("D row not found in " + file.string());
}

double manifest_fit_beta(const fs::path& file) {
  std::ifstream in(file);
  std::string line;
  while (std::getline(in, line)) {
    const std::string key = "fit_beta = ";
    const auto pos = line.find(key);
    if (pos != std::string::npos) return std::strtod(line.c_str() + pos + key.size(), nullptr);
  }
  throw std::runtime_error("fit_beta missing from " + file.string());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void criteria_6_and_8(Gate& gate, int threads) {
  const fs::path base = fs::temp_directory_path() / "tcff_acceptance";
  fs::remove_all(base);

  Config cfg;
  cfg.set("lambda", "0.5");
  cfg.set("l", "40");
  cfg.set("n", "200");
  cfg.set("realizations", "100");
  cfg.set("times", "1000");

  Config disordered = cfg;
  disordered.set("delta_j", "0.5");
  Config clean = cfg;
  clean.set("delta_j", "0");

  run_quench_disorder(disordered, RunContext{base / "dj05", 20240, threads});
  run_quench_disorder(clean, RunContext{base / "dj00", 20240, threads});

  const double beta_dis = manifest_fit_beta(base / "dj05" / "manifest.txt");
  const double beta_clean = manifest_fit_beta(base / "dj00" / "manifest.txt");
  const double w20_dis = csv_wbar_at_d(base / "dj05" / "wbar_vs_D.csv", 20);
  const double w20_clean = csv_wbar_at_d(base / "dj00" / "wbar_vs_D.csv", 20);

  gate.report("criterion 6a (disordered ensemble scales, beta >= 0.8)", beta_dis >= 0.8,
              "beta(dJ=0.5) = " + fmt(beta_dis));
  gate.report("criterion 6b (clean ensemble saturates, beta <= 0.2)", beta_clean <= 0.2,
              "beta(dJ=0) = " + fmt(beta_clean) +
                  " — at L=40 the clean post-quench decay length (~14 sites) has not yet "
                  "saturated f_Q; the contrast needs L >~ 150");
  gate.report("criterion 6c (w20 contrast >= 10x)", w20_dis >= 10.0 * w20_clean,
              "w20(dJ=0.5) = " + fmt(w20_dis) + ", w20(dJ=0) = " + fmt(w20_clean) + ", ratio = " +
                  fmt(w20_dis / std::max(1e-300, w20_clean)) +
                  " — clean w20 at t=10^3 sits near its stationary value "
                  "[(1+sqrt(1-l^2))/2]^21 ~ 0.23, so a 10x gap cannot open at D=20");

  run_quench_disorder(disordered, RunContext{base / "dj05_rerun", 20240, 1});
  bool identical = true;
  for (const char* name : {"wbar_vs_t.csv", "wbar_vs_D.csv", "fqbar_vs_L.csv"}) {
    identical = identical && slurp(base / "dj05" / name) == slurp(base / "dj05_rerun" / name);
  }
  gate.report("criterion 8 (seeded rerun is byte-identical)", identical,
              identical ? "all three CSVs identical across thread counts"
                        : "CSV bytes differ between reruns");
}

// ---- criterion 7: thermal bound ----
void criterion_7(Gate& gate) {
  double worst = 0.0;
  for (double j : {0.5, 1.0, 2.0}) {
    for (double temp : {0.5, 1.0, 2.0}) {
      for (long long l : {2LL, 10LL, 100LL, 1000LL, 10000LL}) {
        // direct series, each term at full precision (a running product
        // accumulates ~1e-10 of drift by x = tanh(4))
        const double x = std::tanh(j / temp);
        detail::CompensatedSum series;
        series.add(1.0);
        for (long long d = 1; d < l; ++d) {
          series.add(std::pow(x, static_cast<double>(d)));
        }
        worst = std::max(worst, std::abs(series.value() - thermal_bound_fq(j, temp, l)));
      }
    }
  }
  const double v = thermal_bound_fq(1.0, 1.0, 10000);
  const double b200 = thermal_bound_fq(1.0, 1.0, 200) - 1.0;
  const double b400 = thermal_bound_fq(1.0, 1.0, 400) - 1.0;
  const double slope = std::log(b400 / b200) / std::log(2.0);
  const bool pass = worst <= 1e-12 && std::abs(v - 4.19454) <= 1e-4 && std::abs(slope) <= 0.01;
  gate.report("criterion 7 (thermal bound)", pass,
              "max |closed - series| = " + fmt(worst) + ", bound(J=T=1, L=1e4) = " + fmt(v) +
                  ", log-log slope on [200,400] = " + fmt(slope));
}

}  // namespace

int main() {
  const int threads = std::max(1u, std::thread::hardware_concurrency());
  Gate gate;
  criterion_1(gate);
  criterion_2(gate);
  criterion_3(gate);
  criterion_4(gate);
  criterion_5(gate);
  criterion_7(gate);
  criteria_6_and_8(gate, threads);
  std::printf("%s: %d check(s) failed\n", gate.pass ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
              gate.failures);
  return gate.pass ? 0 : 1;
}
