// spinchain: state transfer through dual-rail spin chains with end-modulated
// couplings. Each subcommand emits one figure- or table-style dataset as CSV
// (or JSON where noted); see the per-subcommand help.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spinchain/chain_model.hpp"
#include "spinchain/evolution.hpp"
#include "spinchain/imperfections.hpp"
#include "spinchain/io.hpp"
#include "spinchain/optimize.hpp"
#include "spinchain/protocol.hpp"

namespace {

using namespace spinchain;

Range parse_range(const std::string& text) {
  double lo = 0.0, hi = 0.0, step = 0.0;
  char extra = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &lo, &hi, &step, &extra) != 3)
    throw std::invalid_argument("bad range '" + text + "', expected lo:hi:step");
  Range r{lo, hi, step};
  r.validate();
  return r;
}

std::vector<double> range_values(const Range& r) {
  std::vector<double> out(r.count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = r.at(i);
  return out;
}

struct Output {
  std::ofstream file;
  std::ostream& stream() { return file.is_open() ? file : std::cout; }
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file.open(path);
      if (!file) throw std::invalid_argument("cannot open output " + path);
    }
  }
};

void csv_header(std::ostream& os, const std::string& names) { os << names << '\n'; }

ChainSpec load_spec(const std::string& spec_path, int n, double a,
                    const std::string& model) {
  if (!spec_path.empty()) {
    std::ifstream in(spec_path);
    if (!in) throw std::invalid_argument("cannot read spec " + spec_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return chain_spec_from_json(ss.str());
  }
  ChainSpec spec{n, model == "heisenberg" ? ChainModel::HeisenbergUniform
                                          : ChainModel::XYEndModulated,
                 a};
  if (model != "xy" && model != "heisenberg")
    throw std::invalid_argument("model must be xy or heisenberg");
  spec.validate();
  return spec;
}

// Optimal-time operating points (N, a, t1, t2); interval-valued couplings are
// listed at their midpoint.
struct Table1Row {
  int n;
  double a, t1, t2;
};
const std::vector<Table1Row> kTable1 = {
    {150, 0.05, 709, 100}, {150, 0.07, 411, 49}, {150, 0.08, 395, 24},
    {150, 0.14, 839, 59},  {150, 0.45, 81, 7},   {200, 0.06, 548, 73},
    {200, 0.07, 521, 100}, {200, 0.425, 106, 8}, {250, 0.05, 705, 100},
    {250, 0.06, 668, 44},  {250, 0.40, 131, 8},  {300, 0.05, 821, 88},
    {300, 0.39, 157, 9}};

int cmd_spectrum(int n, double a, const std::string& out_path) {
  Output out(out_path);
  auto sd = decompose(k_excitation_block({n, ChainModel::XYEndModulated, a}, 1));
  std::vector<double> numeric(sd.eigenvalues.data(), sd.eigenvalues.data() + n);
  auto roots = secular_roots(n, a);
  std::vector<std::pair<double, int>> analytic;
  for (const auto& r : roots) analytic.emplace_back(2.0 * std::cos(r.k), r.mu);
  std::sort(numeric.begin(), numeric.end());
  std::sort(analytic.begin(), analytic.end());

  csv_header(out.stream(), "index,lambda_numeric,lambda_secular,mu,residual");
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double res = std::abs(numeric[i] - analytic[i].first);
    worst = std::max(worst, res);
    write_csv_row(out.stream(), {static_cast<double>(i), numeric[i],
                                 analytic[i].first,
                                 static_cast<double>(analytic[i].second), res});
  }
  if (worst >= 1e-6) {
    std::cerr << "spectrum: secular/numeric residual " << format_double(worst)
              << " exceeds 1e-6\n";
    return 3;
  }
  return 0;
}

int cmd_sweep_table1(const std::string& out_path, int threads) {
  Output out(out_path);
  csv_header(out.stream(), "n,a,t1,t2,p");
  for (const auto& row : kTable1) {
    ChainSpec spec{row.n, ChainModel::XYEndModulated, row.a};
    (void)threads;
    write_csv_row(out.stream(), {static_cast<double>(row.n), row.a, row.t1,
                                 row.t2,
                                 joint_success_two(spec, row.t1, row.t2)});
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Quantum-state transfer through dual-rail spin-chain channels with\n"
      "end-modulated couplings: spectra, two-measurement success sweeps,\n"
      "coupling-disorder ensembles and imperfect-initialization curves."};
  app.require_subcommand(1);

  std::string out_path;
  int threads = 0;
  app.add_option("--output,-o", out_path, "Output file (default stdout)")
      ->capture_default_str();
  app.add_option("--threads", threads,
                 "Worker threads, 0 = available parallelism")
      ->capture_default_str();

  // spectrum
  auto* spectrum = app.add_subcommand(
      "spectrum",
      "Single-excitation spectrum: numeric eigenvalues against the secular\n"
      "roots 2cos(k) (spectrum cross-check table). Exit 3 if they disagree\n"
      "beyond 1e-6.");
  int sp_n = 30;
  double sp_a = 0.5;
  spectrum->add_option("--n", sp_n, "Chain length")->required();
  spectrum->add_option("--a", sp_a, "End coupling a in units of J")->required();

  // sweep
  auto* sweep = app.add_subcommand(
      "sweep",
      "Two-measurement joint success over (t1, t2) grids: the optimal-time\n"
      "operating-point table (--table1), the success surface for one chain,\n"
      "or maxima as a function of N or a.");
  int sw_n = 150;
  double sw_a = 0.05;
  std::string sw_t1 = "1:900:1", sw_t2 = "1:100:1";
  bool sw_table1 = false, sw_surface = false;
  std::string sw_pmax_n, sw_pmax_a;
  sweep->add_option("--n", sw_n, "Chain length");
  sweep->add_option("--a", sw_a, "End coupling");
  sweep->add_option("--t1", sw_t1, "First interval grid lo:hi:step");
  sweep->add_option("--t2", sw_t2, "Second interval grid lo:hi:step");
  sweep->add_flag("--table1", sw_table1,
                  "Emit the 13 tabulated operating points (n,a,t1,t2,p)");
  sweep->add_flag("--surface", sw_surface, "Emit the full (t1,t2) surface");
  sweep->add_option("--pmax-vs-n", sw_pmax_n,
                    "Maximum success per chain length, lengths lo:hi:step");
  sweep->add_option("--pmax-vs-a", sw_pmax_a,
                    "Maximum success per end coupling, couplings lo:hi:step");

  // disorder
  auto* disorder = app.add_subcommand(
      "disorder",
      "Static coupling disorder on the two rails: best intersection-time\n"
      "success per sample and the seeded ensemble average (scatter/average\n"
      "curves). --fixture replays the two built-in N=30 samples.");
  int dis_n = 30, dis_samples = 20;
  double dis_delta = 0.01, dis_tmax = 1000.0;
  std::string dis_a = "0.11:0.11:1";
  std::uint64_t dis_seed = 0;
  bool dis_fixture = false, dis_per_sample = false;
  bool dis_seed_set = false;
  disorder->add_option("--n", dis_n, "Chain length");
  disorder->add_option("--a", dis_a, "End coupling grid lo:hi:step");
  disorder->add_option("--delta", dis_delta, "Disorder bound");
  disorder->add_option("--samples", dis_samples, "Sample-pair count");
  disorder
      ->add_option_function<std::uint64_t>(
          "--seed",
          [&](std::uint64_t v) {
            dis_seed = v;
            dis_seed_set = true;
          },
          "RNG seed (required unless --fixture)")
      ->expected(1);
  disorder->add_option("--tmax", dis_tmax, "Intersection search horizon");
  disorder->add_flag("--fixture", dis_fixture,
                     "Use the two built-in disorder samples");
  disorder->add_flag("--per-sample", dis_per_sample,
                     "Emit one row per (a, sample) instead of averages");

  // init-noise
  auto* noise = app.add_subcommand(
      "init-noise",
      "Imperfect receiver-register initialization: stray-excitation noise\n"
      "profiles and averages (single) or the collective product-state curves\n"
      "(collective).");
  noise->require_subcommand(1);

  auto* single = noise->add_subcommand(
      "single",
      "One stray excitation at site m with probability x: per-m success\n"
      "profile at fixed time (--profile-m) or the site-averaged optimum as a\n"
      "function of a (--avg).");
  int sn_n = 30;
  double sn_a = 0.06, sn_t = 488.0, sn_x = 0.1, sn_tmax = 1000.0;
  std::string sn_agrid = "0.05:1.0:0.05";
  bool sn_profile = false, sn_avg = false;
  single->add_option("--n", sn_n, "Chain length");
  single->add_option("--a", sn_a, "End coupling (profile mode)");
  single->add_option("--t", sn_t, "Measurement time (profile mode)");
  single->add_option("--x", sn_x, "Excitation probability");
  single->add_option("--a-grid", sn_agrid, "Coupling grid lo:hi:step (avg mode)");
  single->add_option("--tmax", sn_tmax, "Integer time horizon (avg mode)");
  single->add_flag("--profile-m", sn_profile, "Emit p1 versus stray site m");
  single->add_flag("--avg", sn_avg, "Emit the m-averaged optimum versus a");

  auto* collective = noise->add_subcommand(
      "collective",
      "Every receiver site excited with probability x: success versus x,\n"
      "exact in all orders (--exact, N <= 12) or truncated to the first two\n"
      "(--truncated, x <= 0.1).");
  int cn_n = 4;
  double cn_a = 0.06, cn_t = 18.0;
  std::string cn_xgrid = "0:1:0.01";
  bool cn_exact = false, cn_trunc = false;
  collective->add_option("--n", cn_n, "Chain length");
  collective->add_option("--a", cn_a, "End coupling");
  collective->add_option("--t", cn_t, "Measurement time");
  collective->add_option("--x-grid", cn_xgrid, "Probability grid lo:hi:step");
  collective->add_flag("--exact", cn_exact, "All orders (N <= 12)");
  collective->add_flag("--truncated", cn_trunc, "First two orders (x <= 0.1)");

  // amplitude
  auto* amp = app.add_subcommand(
      "amplitude",
      "End-to-end transfer amplitude f_{N,1}(t) time series for one chain\n"
      "(transfer-probability curves). Accepts --spec JSON for disordered\n"
      "chains.");
  int am_n = 30;
  double am_a = 0.11, am_tmax = 500.0, am_step = 0.5;
  std::string am_spec, am_model = "xy";
  amp->add_option("--n", am_n, "Chain length");
  amp->add_option("--a", am_a, "End coupling");
  amp->add_option("--model", am_model, "xy or heisenberg");
  amp->add_option("--spec", am_spec, "Chain spec JSON file (overrides flags)");
  amp->add_option("--tmax", am_tmax, "Time horizon");
  amp->add_option("--step", am_step, "Time step");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*spectrum) return cmd_spectrum(sp_n, sp_a, out_path);

    if (*sweep) {
      if (sw_table1) return cmd_sweep_table1(out_path, threads);
      Output out(out_path);
      if (!sw_pmax_n.empty()) {
        const Range r = parse_range(sw_pmax_n);
        std::vector<int> ns(r.count());
        for (std::size_t i = 0; i < ns.size(); ++i)
          ns[i] = static_cast<int>(std::lround(r.at(i)));
        auto pts = pmax_vs_n(ns, sw_a, parse_range(sw_t1), parse_range(sw_t2),
                             threads);
        csv_header(out.stream(), "n,t1,t2,p");
        for (const auto& p : pts)
          write_csv_row(out.stream(),
                        {static_cast<double>(p.n_sites), p.t1, p.t2, p.p});
        return 0;
      }
      if (!sw_pmax_a.empty()) {
        auto rows = pmax_vs_a(sw_n, range_values(parse_range(sw_pmax_a)),
                              parse_range(sw_t1), parse_range(sw_t2), threads);
        csv_header(out.stream(), "a,t1,t2,p");
        for (const auto& r : rows)
          write_csv_row(out.stream(), {r.a, r.t1, r.t2, r.p});
        return 0;
      }
      ChainSpec spec{sw_n, ChainModel::XYEndModulated, sw_a};
      auto res = sweep_surface(spec, parse_range(sw_t1), parse_range(sw_t2),
                               sw_surface, threads);
      if (sw_surface) {
        const Range r1 = parse_range(sw_t1), r2 = parse_range(sw_t2);
        csv_header(out.stream(), "t1,t2,p");
        for (Eigen::Index i = 0; i < res.surface.rows(); ++i)
          for (Eigen::Index j = 0; j < res.surface.cols(); ++j)
            write_csv_row(out.stream(),
                          {r1.at(i), r2.at(j), res.surface(i, j)});
      } else {
        csv_header(out.stream(), "n,a,t1,t2,p");
        write_csv_row(out.stream(), {static_cast<double>(sw_n), sw_a, res.t1,
                                     res.t2, res.max_value});
      }
      return 0;
    }

    if (*disorder) {
      Output out(out_path);
      if (dis_fixture) {
        const auto a_grid = range_values(parse_range(dis_a));
        csv_header(out.stream(), "a,tau,p");
        for (double a : a_grid) {
          ChainSpec c1{dis_n, ChainModel::XYEndModulated, a};
          c1.bond_disorder = disorder_fixture(0);
          ChainSpec c2 = c1;
          c2.bond_disorder = disorder_fixture(1);
          auto best = best_intersection_success(c1, c2, dis_tmax);
          write_csv_row(out.stream(),
                        {a, best.found ? best.tau : -1.0,
                         best.found ? best.success : 0.0});
        }
        return 0;
      }
      if (!dis_seed_set)
        throw std::invalid_argument("disorder: --seed required unless --fixture");
      auto ens =
          DisorderEnsemble::generate(dis_delta, dis_n - 1, dis_samples, dis_seed);
      auto pts = disorder_average_success(dis_n, range_values(parse_range(dis_a)),
                                          ens, dis_tmax, threads);
      if (dis_per_sample) {
        csv_header(out.stream(), "a,sample,p");
        for (const auto& p : pts)
          for (std::size_t s = 0; s < p.per_sample.size(); ++s)
            write_csv_row(out.stream(),
                          {p.a, static_cast<double>(s), p.per_sample[s]});
      } else {
        csv_header(out.stream(), "a,p_ave,stderr,n_empty");
        for (const auto& p : pts)
          write_csv_row(out.stream(),
                        {p.a, p.p_ave, p.stderr_,
                         static_cast<double>(p.n_empty)});
      }
      return 0;
    }

    if (*single) {
      if (sn_profile == sn_avg)
        throw std::invalid_argument(
            "init-noise single: pass exactly one of --profile-m, --avg");
      Output out(out_path);
      if (sn_profile) {
        ChainSpec spec{sn_n, ChainModel::XYEndModulated, sn_a};
        csv_header(out.stream(), "m,p1,p0,p");
        for (int m = 2; m <= sn_n; ++m) {
          auto r = single_excitation_success(spec, {sn_x, m, true}, sn_t);
          write_csv_row(out.stream(),
                        {static_cast<double>(m), r.p1, r.p0, r.p_success});
        }
      } else {
        auto pts = average_single_excitation_success(
            sn_n, range_values(parse_range(sn_agrid)), sn_x, sn_tmax, threads);
        csv_header(out.stream(), "a,p_ave,t_opt");
        for (const auto& p : pts)
          write_csv_row(out.stream(), {p.a, p.p_ave, p.t_opt});
      }
      return 0;
    }

    if (*collective) {
      if (cn_exact == cn_trunc)
        throw std::invalid_argument(
            "init-noise collective: pass exactly one of --exact, --truncated");
      Output out(out_path);
      ChainSpec spec{cn_n, ChainModel::XYEndModulated, cn_a};
      csv_header(out.stream(), "x,p");
      for (double x : range_values(parse_range(cn_xgrid))) {
        const auto r = cn_exact ? collective_success_exact(spec, x, cn_t)
                                : collective_success_truncated(spec, x, cn_t);
        write_csv_row(out.stream(), {x, r.p_success});
      }
      return 0;
    }

    if (*amp) {
      Output out(out_path);
      ChainSpec spec = load_spec(am_spec, am_n, am_a, am_model);
      auto sd = decompose(k_excitation_block(spec, 1));
      AmplitudeSeries series;
      for (double t = 0.0; t <= am_tmax + 0.5 * am_step; t += am_step) {
        series.t.push_back(t);
        series.f.push_back(amplitude(sd, 0, sd.basis.dim() - 1, t));
      }
      write_amplitude_csv(out.stream(), series);
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
