#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "weylab/config.hpp"
#include "weylab/csv.hpp"
#include "weylab/experiments.hpp"
#include "weylab/heatkernel.hpp"
#include "weylab/invariants.hpp"
#include "weylab/phase.hpp"
#include "weylab/spectral.hpp"
#include "weylab/tauberian.hpp"

using namespace weylab;

namespace {

struct Common {
  std::string output;
};

// Writes the table, then the assertion lines on stderr. Returns the exit code.
int emit(const Common& common, const CsvTable& table, const std::string& hash,
         const std::vector<Assertion>& assertions) {
  if (common.output.empty()) {
    table.write(std::cout, hash);
  } else {
    std::ofstream out(common.output);
    if (!out) throw PreconditionError("cannot write " + common.output);
    table.write(out, hash);
  }
  for (const auto& a : assertions) std::cerr << a.line() << '\n';
  return all_pass(assertions) ? 0 : 1;
}

std::string args_hash(const std::vector<std::string>& parts) {
  std::string joined;
  for (const auto& p : parts) joined += p + '\n';
  return hex64(fnv1a64(joined));
}

struct ModelArgs {
  std::string geometry = "line";
  std::string potential = "power:2";
  double floor = 1.0;

  void add(CLI::App* app) {
    app->add_option("--geometry", geometry, "line | cylinder | h3 | euclidean:<n>")->capture_default_str();
    app->add_option("--potential", potential,
                    "power:<a> | logpower:<c>,<a> | iterlog:<k> | piecewise:<file>")->capture_default_str();
    app->add_option("--floor", floor, "lower clamp of V")->capture_default_str();
  }
  std::vector<std::string> key() const { return {geometry, potential, format_number(floor)}; }
};

std::vector<double> grid_option(const std::string& text) { return parse_grid(text); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Eigenvalue counting, Weyl-law invariants and heat-kernel checks"};
  app.require_subcommand(1);
  Common common;
  app.add_option("-o,--output", common.output, "CSV destination (default stdout)");

  // invariants
  auto* inv = app.add_subcommand("invariants", "a, d_delta, b_delta, c_delta on a lambda grid");
  ModelArgs inv_model;
  inv_model.add(inv);
  double inv_delta = 0.2;
  std::string inv_grid = "25,50,100,200";
  bool delta_sweep = false;
  inv->add_option("--delta", inv_delta)->capture_default_str();
  inv->add_option("--lambda,--lambda-grid", inv_grid, "list, arith:lo,hi,n or geom:lo,hi,n")->capture_default_str();
  inv->add_flag("--delta-sweep", delta_sweep, "repeat for delta in {0.4, 0.2, 0.1}");

  // phi
  auto* ph = app.add_subcommand("phi", "sublevel volume and Weyl integral");
  ModelArgs ph_model;
  ph_model.add(ph);
  std::string ph_grid = "10,20,40";
  ph->add_option("--lambda,--lambda-grid", ph_grid)->capture_default_str();

  // count
  auto* cnt = app.add_subcommand("count", "eigenvalue counting function");
  ModelArgs cnt_model;
  cnt_model.add(cnt);
  std::string cnt_grid = "10";
  MeshControl cnt_mesh;
  cnt->add_option("--lambda,--lambda-grid", cnt_grid)->capture_default_str();
  cnt->add_option("--mesh-h", cnt_mesh.h_initial, "initial mesh width")->capture_default_str();
  cnt->add_option("--rounds", cnt_mesh.refinement_rounds)->capture_default_str();
  cnt->add_option("--rel-tol", cnt_mesh.rel_tol, "0 = exact integer convergence")->capture_default_str();

  // weyl-ratio
  auto* wr = app.add_subcommand("weyl-ratio", "N/Phi against the invariant criterion");
  std::string wr_config;
  wr->add_option("--config", wr_config, "key=value experiment file")->required()->check(CLI::ExistingFile);

  // tauberian
  auto* tb = app.add_subcommand("tauberian", "Tauberian comparison of two monotone measures");
  std::string mu_spec = "lattice:1,2,1", nu_spec = "power:0,1,0.5";
  double eps = 0.1, lambda1 = 1.0, s_lo = 20.0, s_hi = 2000.0, s_step = 0.25, c1_cap = 1e3;
  tb->add_option("--mu", mu_spec, "lattice:<start>,<step>,<w> | power:<C>,<a>[,<scale>] | atoms:<r>:<w>,...; join with +")
      ->capture_default_str();
  tb->add_option("--nu", nu_spec)->capture_default_str();
  tb->add_option("--epsilon", eps)->capture_default_str();
  tb->add_option("--lambda1", lambda1)->capture_default_str();
  tb->add_option("--s-lo", s_lo)->capture_default_str();
  tb->add_option("--s-hi", s_hi)->capture_default_str();
  tb->add_option("--s-step", s_step)->capture_default_str();
  tb->add_option("--c1-cap", c1_cap)->capture_default_str();

  // heat-check
  auto* hc = app.add_subcommand("heat-check", "heat-kernel identities and estimates");
  std::string hc_case = "remainder";
  hc->add_option("--case", hc_case)->check(CLI::IsMember({"parametrix", "h3", "lemma21", "remainder"}))
      ->capture_default_str();

  // example
  auto* ex = app.add_subcommand("example", "canned experiments");
  std::string ex_name;
  double ex_delta = 0.2;
  ex->add_option("name", ex_name)->required()->check(CLI::IsMember({"rxs1", "h3-fail", "positive", "doubling"}));
  ex->add_option("--delta", ex_delta, "positive: delta")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*inv) {
      const auto g = parse_geometry(inv_model.geometry);
      const auto V = parse_potential(inv_model.potential, inv_model.floor);
      const auto grid = grid_option(inv_grid);
      const std::vector<double> deltas =
          delta_sweep ? std::vector<double>{0.4, 0.2, 0.1} : std::vector<double>{inv_delta};
      CsvTable table({"delta", "lambda", "a", "d_delta", "b_delta", "K", "c_delta", "log_c_delta",
                      "doubling_ratio", "criterion_flag"});
      for (double d : deltas) {
        const auto v = criterion_trend(g, V, d, grid);
        for (const auto& r : v.reports)
          table.add_row({d, r.lambda, r.a, r.d_delta, r.b.value, r.K, r.c_delta, r.log_c_delta,
                         r.doubling_ratio(), std::string(v.satisfied ? "satisfied" : "fails")});
        std::cerr << "verdict,delta=" << format_number(d) << ',' << (v.satisfied ? "satisfied" : "fails")
                  << ",slope=" << format_number(v.slope) << '\n';
      }
      auto key = inv_model.key();
      key.insert(key.begin(), "invariants");
      key.push_back(inv_grid);
      key.push_back(delta_sweep ? "sweep" : format_number(inv_delta));
      return emit(common, table, args_hash(key), {});
    }
    if (*ph) {
      const auto g = parse_geometry(ph_model.geometry);
      const auto V = parse_potential(ph_model.potential, ph_model.floor);
      CsvTable table({"lambda", "sigma", "phi", "quadrature_error", "log_sigma", "log_phi"});
      for (double l : grid_option(ph_grid)) {
        const auto p = phi(g, V, l);
        const double ls = log_sigma(g, V, l);
        table.add_row({l, std::exp(ls), p.value, p.error, ls, p.log_value});
      }
      auto key = ph_model.key();
      key.insert(key.begin(), "phi");
      key.push_back(ph_grid);
      return emit(common, table, args_hash(key), {});
    }
    if (*cnt) {
      const auto g = parse_geometry(cnt_model.geometry);
      const auto V = parse_potential(cnt_model.potential, cnt_model.floor);
      const auto grid = grid_option(cnt_grid);
      const auto cf = count_model(g, V, grid, cnt_mesh);
      CsvTable table({"lambda", "N_lower", "N_upper", "phi", "ratio_lower", "ratio_upper", "mesh_h",
                      "truncation_X"});
      for (const auto& s : cf.samples) {
        const double p = phi(g, V, s.lambda).value;
        table.add_row({s.lambda, (long long)s.lower, (long long)s.upper, p, double(s.lower) / p,
                       double(s.upper) / p, s.h, s.truncation});
      }
      auto key = cnt_model.key();
      key.insert(key.begin(), "count");
      key.insert(key.end(), {cnt_grid, format_number(cnt_mesh.h_initial),
                             std::to_string(cnt_mesh.refinement_rounds), format_number(cnt_mesh.rel_tol)});
      return emit(common, table, args_hash(key), {{"bracket_ordered", true, cf.provenance}});
    }
    if (*wr) {
      const auto config = ExperimentConfig::load(wr_config);
      Common c = common;
      if (c.output.empty()) c.output = config.output;
      const auto r = run_weyl_ratio(config);
      return emit(c, r.table, hex64(config.hash()), r.assertions);
    }
    if (*tb) {
      const auto mu = MonotoneMeasure::parse(mu_spec);
      const auto nu = MonotoneMeasure::parse(nu_spec);
      if (!(s_step > 0.0) || !(s_hi >= s_lo)) throw PreconditionError("s grid: need s_lo <= s_hi, step > 0");
      std::vector<double> s_grid;
      for (double s = s_lo; s <= s_hi * (1 + 1e-15); s += s_step) s_grid.push_back(s);
      const auto v = verify_conclusion(mu, nu, lambda1, eps, s_grid, c1_cap);
      CsvTable table({"kind", "x", "value1", "value2", "value3"});
      for (const auto& b : v.beta_profile) table.add_row({std::string("beta"), b.t, b.beta, 0.0, 0.0});
      for (const auto& r : v.rows) table.add_row({std::string("conclusion"), r.s, r.mu, r.nu, r.bound});
      const auto key = args_hash({"tauberian", mu_spec, nu_spec, format_number(eps), format_number(lambda1),
                                  format_number(s_lo), format_number(s_hi), format_number(s_step),
                                  format_number(c1_cap)});
      std::cerr << "verdict," << csv_escape(v.describe()) << '\n';
      return emit(common, table, key, {{"conclusion_found", v.found(), v.describe()}});
    }
    if (*hc) {
      CsvTable table({"x", "lhs", "rhs", "margin", "slope"});
      std::vector<Assertion> asserts;
      if (hc_case == "h3") {
        for (double t : {0.1, 1.0, 10.0}) {
          const double m = h3_kernel_mass(t).value;
          table.add_row({t, m, 1.0, std::abs(m - 1.0), 0.0});
          asserts.push_back({"h3_mass_t" + format_number(t), std::abs(m - 1.0) <= 1e-6, format_number(m)});
        }
      } else if (hc_case == "lemma21") {
        const auto T = discretize_1d([](double x) { return x * x; }, -8.0, 8.0, 0.02, BoundaryCondition::Dirichlet);
        const auto spec = dense_spectrum(T);
        const std::size_t mid = spec.nodes.size() / 2;
        const std::vector<double> lambdas{2.0, 6.0, 10.0};
        bool ok = true;
        for (const auto& r : lemma21_check(spec, lambdas, mid)) {
          table.add_row({r.lambda, r.counting, r.bound, r.bound - r.counting, 0.0});
          ok = ok && r.holds();
        }
        asserts.push_back({"lemma21_mid_node", ok, "V = x^2 on [-8, 8]"});
      } else {
        auto V = [](double x) { return 5.0 + std::sin(2.0 * kPi * x); };
        const auto ts = log_grid(1e-4, 1e-2, 10);
        RemainderOptions opt;
        opt.sup_v = 6.0;
        const auto fit = remainder_scaling_fit(V, 0.0, 1.0, 0.5, ts, opt);
        for (const auto& p : fit.points) {
          if (hc_case == "parametrix")
            table.add_row({p.t, p.kernel, p.parametrix, p.kernel / p.parametrix - 1.0, fit.slope});
          else
            table.add_row({p.t, p.defect, fit.bound_constant * std::sqrt(p.t) * opt.sup_v,
                           fit.bound_constant * std::sqrt(p.t) * opt.sup_v - p.defect, fit.slope});
        }
        if (hc_case == "parametrix") {
          asserts.push_back({"parametrix_limit", std::abs(fit.points.front().kernel /
                                                              fit.points.front().parametrix - 1.0) <= 0.02,
                             "t = 1e-4"});
        } else {
          asserts.push_back({"remainder_slope_in_band", fit.slope >= 0.35 && fit.slope <= 0.65,
                             "slope " + format_number(fit.slope) + " vs band [0.35, 0.65]"});
          asserts.push_back({"remainder_decays_at_least_sqrt_t", fit.slope >= 0.35,
                             "slope " + format_number(fit.slope)});
        }
      }
      return emit(common, table, args_hash({"heat-check", hc_case}), asserts);
    }
    if (*ex) {
      ExperimentResult r;
      if (ex_name == "rxs1") {
        const std::vector<double> grid{2.0, 2.5, 3.0, 3.5, 4.0};
        r = run_counterexample_rxs1(grid);
      } else if (ex_name == "h3-fail") {
        r = run_h3_failure();
      } else if (ex_name == "positive") {
        r = run_positive_examples(ex_delta);
      } else {
        r = run_doubling_survey();
      }
      return emit(common, r.table, args_hash({"example", ex_name, format_number(ex_delta)}), r.assertions);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
