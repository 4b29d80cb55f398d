// Command-line front end.
//
//   axmhd run         --config FILE [--out DIR] [--threads N]
//   axmhd verify      [--suite NAME]... [--threads N]
//   axmhd convergence --config FILE --levels L [--out FILE]
//   axmhd plot        --csv FILE --quantity NAME [--phi K] [--out FILE]
//
// Exit codes: 0 ok / verification green, 1 verification red, 2 bad config or
// arguments, 3 step failure mid-run (partial diagnostics are flushed).
#include "axmhd/config.hpp"
#include "axmhd/diagnostics.hpp"
#include "axmhd/dynamics.hpp"
#include "axmhd/plot.hpp"
#include "axmhd/snapshot.hpp"
#include "axmhd/threading.hpp"
#include "axmhd/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace axmhd;

namespace {

void write_text(const fs::path& p, const std::string& body) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + p.string() + " for writing");
  os << body;
}

json check_to_json(const CheckReport& c) {
  return {{"pass", c.pass},
          {"worst_margin", c.worst_margin},
          {"worst_index", c.worst_index},
          {"message", c.message}};
}

int cmd_run(const std::string& config_path, std::string out_dir) {
  Config cfg = load_config(config_path);
  if (!out_dir.empty()) cfg.output.out_dir = out_dir;
  const fs::path out(cfg.output.out_dir);
  fs::create_directories(out / "snapshots");

  const Grid g = grid_of(cfg);
  EllipticSolver solver(g, cfg.solver.tolerance);
  State s0 = build_initial_state(cfg, solver);
  DiagnosticsEngine eng(solver, cfg.params);
  StepControl ctrl{cfg.step.cfl, cfg.step.dt_max, cfg.step.t_end, cfg.step.fixed_dt};

  int snap_counter = 0;
  bool boundary_warned = false;
  auto flush_csv = [&]() {
    std::ostringstream os;
    write_csv(os, eng.series());
    write_text(out / "diagnostics.csv", os.str());
  };

  bool failed = false;
  std::string fail_what;
  try {
    run(std::move(s0), cfg.params, ctrl, solver, cfg.output.record_interval,
        cfg.output.snapshot_interval,
        [&](const State& s, double dt, const State* prev) {
          const DiagnosticsRecord rec = eng.record(s, dt, prev);
          if (rec.boundary_flux_max > cfg.diagnostics.boundary_warn && !boundary_warned) {
            boundary_warned = true;
            std::fprintf(stderr,
                         "warning: boundary activity %.3e exceeds %.3e at t = %.6f; "
                         "the outer wall is no longer quiet\n",
                         rec.boundary_flux_max, cfg.diagnostics.boundary_warn, rec.t);
          }
        },
        [&](const State& s) {
          char name[32];
          std::snprintf(name, sizeof name, "%06d.fld", snap_counter++);
          write_snapshot((out / "snapshots" / name).string(), s);
        });
  } catch (const std::exception& e) {
    failed = true;
    fail_what = e.what();
  }
  flush_csv();

  const Series& s = eng.series();
  json report;
  report["format"] = "axmhd-report v1";
  report["config"] = serialize_config(cfg);
  report["completed"] = !failed;
  if (failed) report["failure"] = fail_what;
  report["records"] = s.size();
  report["snapshots"] = snap_counter;
  report["final_t"] = s.empty() ? 0.0 : s.back().t;
  report["boundary_warning"] = boundary_warned;
  if (!s.empty()) {
    report["checks"]["energy_bound"] = check_to_json(check_energy_bound(s));
    if (cfg.params.nu == 0.0 && cfg.params.kappa == 0.0)
      report["checks"]["max_principle"] = check_to_json(check_max_principle(s, cfg.params.mode));
    std::vector<double> t, v;
    for (const auto& r : s) {
      t.push_back(r.t - s.front().t);
      v.push_back(r.Omega_L2);
    }
    bool positive = true;
    for (double x : v) positive = positive && x > 0.0;
    if (positive && v.size() >= 2) {
      const PhiFit fit = phi_fit(t, v, 1, cfg.diagnostics.c_cap);
      report["checks"]["omega_envelope"] = {{"k", 1}, {"c", fit.c}, {"satisfied", fit.satisfied}};
    }
  }
  write_text(out / "report.json", report.dump(2) + "\n");

  if (failed) {
    std::fprintf(stderr, "error: run aborted: %s\n", fail_what.c_str());
    std::fprintf(stderr, "partial diagnostics flushed to %s\n",
                 (out / "diagnostics.csv").string().c_str());
    return 3;
  }
  std::printf("run complete: t = %.6f, %zu records, %d snapshots -> %s\n",
              s.empty() ? 0.0 : s.back().t, s.size(), snap_counter, out.string().c_str());
  return 0;
}

int cmd_verify(std::vector<std::string> suites) {
  if (suites.empty() || (suites.size() == 1 && suites[0] == "all")) suites = suite_names();
  bool all_pass = true;
  for (const std::string& name : suites) {
    const SuiteResult res = run_suite(name);
    std::printf("== suite %s: %s\n", res.name.c_str(), res.pass ? "PASS" : "FAIL");
    for (const auto& c : res.checks)
      std::printf("   [%s] %s\n", c.pass ? "PASS" : "FAIL", c.text.c_str());
    all_pass = all_pass && res.pass;
  }
  std::printf("verify: %s\n", all_pass ? "PASS" : "FAIL");
  return all_pass ? 0 : 1;
}

int cmd_convergence(const std::string& config_path, int levels, const std::string& out_file) {
  Config base = load_config(config_path);
  if (levels < 2) throw CLI::ValidationError("--levels", "need at least 2 levels");

  // Refuse runs that would outgrow the desk-scale budget.
  {
    const long nf = static_cast<long>(base.grid.nr) << (levels - 1);
    const long mf = static_cast<long>(base.grid.nz) << (levels - 1);
    if (nf * mf > 2048L * 2048L) {
      std::fprintf(stderr, "error: finest level would be %ldx%ld (> 2048^2 cells); "
                           "refusing\n", nf, mf);
      return 2;
    }
  }

  std::vector<State> finals;
  for (int lev = 0; lev < levels; ++lev) {
    Config cfg = base;
    cfg.grid.nr = base.grid.nr << lev;
    cfg.grid.nz = base.grid.nz << lev;
    if (base.step.fixed_dt) cfg.step.fixed_dt = *base.step.fixed_dt / (1 << lev);
    cfg.validate();
    EllipticSolver solver(grid_of(cfg), cfg.solver.tolerance);
    State s0 = build_initial_state(cfg, solver);
    StepControl ctrl{cfg.step.cfl, cfg.step.dt_max, cfg.step.t_end, cfg.step.fixed_dt};
    State last;
    run(std::move(s0), cfg.params, ctrl, solver, cfg.step.t_end, 0.0,
        [&](const State& s, double, const State*) { last = s; }, [](const State&) {});
    finals.push_back(std::move(last));
    std::printf("level %d: %dx%d done (t = %.6f)\n", lev, cfg.grid.nr, cfg.grid.nz, finals.back().t);
  }

  std::ostringstream os;
  os << "# self-refinement errors (coarse vs restricted fine, weighted L2)\n";
  os << "# pair        wtheta        H             rho           order(wtheta,H,rho)\n";
  std::vector<std::array<double, 3>> errs;
  for (int lev = 0; lev + 1 < levels; ++lev) {
    const auto e = [&](const ScalarField& c, const ScalarField& f) {
      return lp_norm(c - restrict_half(f), 2.0);
    };
    errs.push_back({e(finals[lev].wtheta, finals[lev + 1].wtheta),
                    e(finals[lev].H, finals[lev + 1].H), e(finals[lev].rho, finals[lev + 1].rho)});
    char line[256];
    std::snprintf(line, sizeof line, "%d->%d   %13.6e %13.6e %13.6e", lev, lev + 1,
                  errs.back()[0], errs.back()[1], errs.back()[2]);
    os << line;
    if (errs.size() >= 2) {
      const auto& p = errs[errs.size() - 2];
      const auto& q = errs.back();
      std::snprintf(line, sizeof line, "   %.3f %.3f %.3f", std::log2(p[0] / q[0]),
                    std::log2(p[1] / q[1]), std::log2(p[2] / q[2]));
      os << line;
    }
    os << "\n";
  }
  std::fputs(os.str().c_str(), stdout);
  if (!out_file.empty()) write_text(out_file, os.str());
  return 0;
}

int cmd_plot(const std::string& csv_path, const std::string& quantity, int phi_k,
             std::string out_file) {
  std::ifstream is(csv_path);
  if (!is) throw std::runtime_error("cannot open " + csv_path);
  const Series s = read_csv(is);
  PlotOptions opt;
  opt.quantity = quantity;
  if (phi_k > 0) opt.phi_k = phi_k;
  const std::string svg = render_svg(s, opt);
  if (out_file.empty()) out_file = quantity + ".svg";
  write_text(out_file, svg);
  std::printf("wrote %s\n", out_file.c_str());
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"axisymmetric swirl-free MHD-Boussinesq simulator and verification harness"};
  app.require_subcommand(1);

  int threads = 1;
  long seed = 0; // reserved; all initial data is deterministic
  app.add_option("--threads", threads, "worker threads (results are thread-count independent)");
  app.add_option("--seed", seed, "reserved for future stochastic initial data (ignored)");

  std::string config_path, out_dir, csv_path, quantity, out_file;
  std::vector<std::string> suites;
  int levels = 3, phi_k = 0;

  auto* c_run = app.add_subcommand("run", "integrate a configuration and write diagnostics");
  c_run->add_option("--config", config_path, "configuration file")->required();
  c_run->add_option("--out", out_dir, "output directory (overrides [output] out_dir)");

  auto* c_verify = app.add_subcommand("verify", "run named verification suites");
  c_verify->add_option("--suite", suites, "suite name (repeatable; default: all)");

  auto* c_conv = app.add_subcommand("convergence", "self-refinement study over doubled meshes");
  c_conv->add_option("--config", config_path, "base configuration file")->required();
  c_conv->add_option("--levels", levels, "number of doubling levels (>= 2)");
  c_conv->add_option("--out", out_file, "also write the table to this file");

  auto* c_plot = app.add_subcommand("plot", "render a diagnostics column as SVG");
  c_plot->add_option("--csv", csv_path, "diagnostics.csv from a run")->required();
  c_plot->add_option("--quantity", quantity, "column name to plot")->required();
  c_plot->add_option("--phi", phi_k, "overlay fitted tower envelope with k nested exps");
  c_plot->add_option("--out", out_file, "output SVG path (default <quantity>.svg)");

  try {
    app.parse(argc, argv);
    set_num_threads(threads);
    if (*c_run) return cmd_run(config_path, out_dir);
    if (*c_verify) return cmd_verify(suites);
    if (*c_conv) return cmd_convergence(config_path, levels, out_file);
    if (*c_plot) return cmd_plot(csv_path, quantity, phi_k, out_file);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const SolveFailure& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
