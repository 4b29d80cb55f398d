#include "axmhd/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace axmhd {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw std::runtime_error("config line " + std::to_string(line) + ": " + msg);
}

double num(int line, const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double x;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    fail(line, "key '" + key + "': not a number: '" + v + "'");
  }
  if (pos != v.size()) fail(line, "key '" + key + "': trailing characters in '" + v + "'");
  return x;
}

int integer(int line, const std::string& key, const std::string& v) {
  const double x = num(line, key, v);
  if (x != std::floor(x)) fail(line, "key '" + key + "': expected an integer, got '" + v + "'");
  return static_cast<int>(x);
}

std::string unquote(const std::string& v) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
  return v;
}

} // namespace

bool Config::operator==(const Config& o) const {
  return grid.nr == o.grid.nr && grid.nz == o.grid.nz && grid.R == o.grid.R &&
         grid.Lz == o.grid.Lz && params.mu == o.params.mu && params.nu == o.params.nu &&
         params.kappa == o.params.kappa && params.mode == o.params.mode &&
         step.cfl == o.step.cfl && step.dt_max == o.step.dt_max && step.t_end == o.step.t_end &&
         step.fixed_dt == o.step.fixed_dt && output.record_interval == o.output.record_interval &&
         output.snapshot_interval == o.output.snapshot_interval &&
         output.out_dir == o.output.out_dir && solver.tolerance == o.solver.tolerance &&
         solver.max_iter == o.solver.max_iter && diagnostics.c_cap == o.diagnostics.c_cap &&
         diagnostics.boundary_warn == o.diagnostics.boundary_warn &&
         wtheta_bumps == o.wtheta_bumps && H_bumps == o.H_bumps && rho_bumps == o.rho_bumps;
}

void Config::validate() const {
  if (grid.nr < 4 || grid.nz < 4) throw std::runtime_error("config: grid.nr and grid.nz must be >= 4");
  if (!(grid.R > 0.0) || !(grid.Lz > 0.0)) throw std::runtime_error("config: grid.R and grid.Lz must be positive");
  params.validate();
  if (!(step.cfl > 0.0 && step.cfl <= 1.0)) throw std::runtime_error("config: step.cfl must lie in (0, 1]");
  if (!(step.dt_max > 0.0)) throw std::runtime_error("config: step.dt_max must be positive");
  if (step.t_end < 0.0) throw std::runtime_error("config: step.t_end must be non-negative");
  if (step.fixed_dt && !(*step.fixed_dt > 0.0)) throw std::runtime_error("config: step.fixed_dt must be positive");
  if (!(output.record_interval > 0.0)) throw std::runtime_error("config: output.record_interval must be positive");
  if (output.snapshot_interval < 0.0) throw std::runtime_error("config: output.snapshot_interval must be non-negative");
  if (!(solver.tolerance > 0.0 && solver.tolerance <= 1e-6))
    throw std::runtime_error("config: solver.tolerance must lie in (0, 1e-6]");
  if (solver.max_iter < 1) throw std::runtime_error("config: solver.max_iter must be >= 1");
  if (!(diagnostics.c_cap > 0.0)) throw std::runtime_error("config: diagnostics.c_cap must be positive");
  if (!(diagnostics.boundary_warn > 0.0)) throw std::runtime_error("config: diagnostics.boundary_warn must be positive");
  for (const auto* bumps : {&wtheta_bumps, &H_bumps, &rho_bumps})
    for (const auto& b : *bumps)
      if (!(b.sigma > 0.0)) throw std::runtime_error("config: bump sigma must be positive");
}

Config parse_config(const std::string& text) {
  Config cfg;
  std::istringstream is(text);
  std::string raw;
  int line = 0;
  std::string section;
  std::vector<Bump>* bump_list = nullptr;
  Bump* bump = nullptr;
  bool saw_fixed_dt = false;

  while (std::getline(is, raw)) {
    ++line;
    std::string s = trim(raw);
    if (const auto h = s.find('#'); h != std::string::npos) s = trim(s.substr(0, h));
    if (s.empty()) continue;

    if (s.size() > 4 && s.substr(0, 2) == "[[" && s.substr(s.size() - 2) == "]]") {
      const std::string name = trim(s.substr(2, s.size() - 4));
      if (name == "initial.wtheta") bump_list = &cfg.wtheta_bumps;
      else if (name == "initial.H") bump_list = &cfg.H_bumps;
      else if (name == "initial.rho") bump_list = &cfg.rho_bumps;
      else fail(line, "unknown table '" + name + "'");
      bump_list->emplace_back();
      bump = &bump_list->back();
      section = "bump";
      continue;
    }
    if (s.front() == '[' && s.back() == ']') {
      section = trim(s.substr(1, s.size() - 2));
      bump = nullptr;
      if (section != "grid" && section != "params" && section != "step" && section != "output" &&
          section != "solver" && section != "diagnostics")
        fail(line, "unknown section '" + section + "'");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected 'key = value', got '" + s + "'");
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (section.empty()) fail(line, "key '" + key + "' outside any section");

    if (section == "bump") {
      if (key == "amplitude") bump->amplitude = num(line, key, val);
      else if (key == "r0") bump->r0 = num(line, key, val);
      else if (key == "z0") bump->z0 = num(line, key, val);
      else if (key == "sigma") bump->sigma = num(line, key, val);
      else fail(line, "unknown key '" + key + "' in bump table");
    } else if (section == "grid") {
      if (key == "nr") cfg.grid.nr = integer(line, key, val);
      else if (key == "nz") cfg.grid.nz = integer(line, key, val);
      else if (key == "R") cfg.grid.R = num(line, key, val);
      else if (key == "Lz") cfg.grid.Lz = num(line, key, val);
      else fail(line, "unknown key '" + key + "' in [grid]");
    } else if (section == "params") {
      if (key == "mu") cfg.params.mu = num(line, key, val);
      else if (key == "nu") cfg.params.nu = num(line, key, val);
      else if (key == "kappa") cfg.params.kappa = num(line, key, val);
      else if (key == "mode") {
        try {
          cfg.params.mode = mode_from_string(unquote(val));
        } catch (const std::exception& e) {
          fail(line, e.what());
        }
      } else fail(line, "unknown key '" + key + "' in [params]");
    } else if (section == "step") {
      if (key == "cfl") cfg.step.cfl = num(line, key, val);
      else if (key == "dt_max") cfg.step.dt_max = num(line, key, val);
      else if (key == "t_end") cfg.step.t_end = num(line, key, val);
      else if (key == "fixed_dt") { cfg.step.fixed_dt = num(line, key, val); saw_fixed_dt = true; }
      else fail(line, "unknown key '" + key + "' in [step]");
    } else if (section == "output") {
      if (key == "record_interval") cfg.output.record_interval = num(line, key, val);
      else if (key == "snapshot_interval") cfg.output.snapshot_interval = num(line, key, val);
      else if (key == "out_dir") cfg.output.out_dir = unquote(val);
      else fail(line, "unknown key '" + key + "' in [output]");
    } else if (section == "solver") {
      if (key == "tolerance") cfg.solver.tolerance = num(line, key, val);
      else if (key == "max_iter") cfg.solver.max_iter = integer(line, key, val);
      else fail(line, "unknown key '" + key + "' in [solver]");
    } else if (section == "diagnostics") {
      if (key == "c_cap") cfg.diagnostics.c_cap = num(line, key, val);
      else if (key == "boundary_warn") cfg.diagnostics.boundary_warn = num(line, key, val);
      else fail(line, "unknown key '" + key + "' in [diagnostics]");
    }
  }
  (void)saw_fixed_dt;
  cfg.validate();
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const Config& cfg) {
  std::ostringstream os;
  os.precision(17);
  os << "[grid]\n"
     << "nr = " << cfg.grid.nr << "\nnz = " << cfg.grid.nz << "\nR = " << cfg.grid.R
     << "\nLz = " << cfg.grid.Lz << "\n\n";
  os << "[params]\n"
     << "mu = " << cfg.params.mu << "\nnu = " << cfg.params.nu
     << "\nkappa = " << cfg.params.kappa << "\nmode = \"" << to_string(cfg.params.mode)
     << "\"\n\n";
  os << "[step]\n"
     << "cfl = " << cfg.step.cfl << "\ndt_max = " << cfg.step.dt_max
     << "\nt_end = " << cfg.step.t_end << "\n";
  if (cfg.step.fixed_dt) os << "fixed_dt = " << *cfg.step.fixed_dt << "\n";
  os << "\n[output]\n"
     << "record_interval = " << cfg.output.record_interval
     << "\nsnapshot_interval = " << cfg.output.snapshot_interval << "\nout_dir = \""
     << cfg.output.out_dir << "\"\n\n";
  os << "[solver]\n"
     << "tolerance = " << cfg.solver.tolerance << "\nmax_iter = " << cfg.solver.max_iter
     << "\n\n";
  os << "[diagnostics]\n"
     << "c_cap = " << cfg.diagnostics.c_cap << "\nboundary_warn = " << cfg.diagnostics.boundary_warn
     << "\n";
  auto emit = [&](const char* name, const std::vector<Bump>& bumps) {
    for (const auto& b : bumps) {
      os << "\n[[initial." << name << "]]\n"
         << "amplitude = " << b.amplitude << "\nr0 = " << b.r0 << "\nz0 = " << b.z0
         << "\nsigma = " << b.sigma << "\n";
    }
  };
  emit("wtheta", cfg.wtheta_bumps);
  emit("H", cfg.H_bumps);
  emit("rho", cfg.rho_bumps);
  return os.str();
}

Grid grid_of(const Config& cfg) {
  return build_grid(cfg.grid.nr, cfg.grid.nz, cfg.grid.R, cfg.grid.Lz);
}

State build_initial_state(const Config& cfg, const EllipticSolver& solver) {
  const Grid g = grid_of(cfg);
  State st(g);
  auto fill = [&](ScalarField& f, const std::vector<Bump>& bumps, bool radial_prefactor) {
    for (int j = 0; j < g.nz; ++j)
      for (int i = 0; i < g.nr; ++i) {
        const double r = g.r(i), z = g.z(j);
        double v = 0.0;
        for (const auto& b : bumps) {
          double dzp = std::remainder(z - b.z0, g.Lz); // periodic minimum image
          const double d2 = (r - b.r0) * (r - b.r0) + dzp * dzp;
          v += b.amplitude * std::exp(-d2 / (b.sigma * b.sigma));
        }
        f(i, j) = radial_prefactor ? r * v : v;
      }
  };
  fill(st.wtheta, cfg.wtheta_bumps, true);
  fill(st.H, cfg.H_bumps, false);
  fill(st.rho, cfg.rho_bumps, false);
  st.rebuild_cache(solver);
  return st;
}

} // namespace axmhd
