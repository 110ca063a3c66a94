#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "bstar/asymptotics.hpp"
#include "bstar/csv.hpp"
#include "bstar/dynamics.hpp"
#include "bstar/field_io.hpp"
#include "bstar/ground_state.hpp"
#include "bstar/profile.hpp"

namespace bstar::cli {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

class Run {
 public:
  Run(const RunConfig& cfg, std::string command, std::string command_line)
      : cfg_(cfg), command_(std::move(command)), line_(std::move(command_line)),
        start_(Clock::now()) {
    fs::create_directories(cfg_.out);
  }

  fs::path path(const std::string& name) const { return cfg_.out / name; }

  void write(const std::string& name, const std::string& text) {
    write_file_atomic(path(name), text);
    artifacts_.push_back(name);
  }

  void save(const std::string& name, const ComplexField& f, const ModelParams& p) {
    save_field(f, p, path(name));
    artifacts_.push_back(name);
  }

  void note(const std::string& key, const std::string& value) {
    notes_ += key + "=" + value + "\n";
  }

  void finish() {
    const double wall = std::chrono::duration<double>(Clock::now() - start_).count();
    std::string m = "tool=bstar\nversion=" BSTAR_VERSION "\ncommand=" + command_ +
                    "\ncommand_line=" + line_ + "\n" + echo(cfg_) + notes_;
    for (const auto& a : artifacts_) m += "artifact=" + a + "\n";
    m += "wall_time_s=" + format_double(wall) + "\n";
    write_file_atomic(path("manifest.txt"), m);
  }

 private:
  const RunConfig& cfg_;
  std::string command_;
  std::string line_;
  Clock::time_point start_;
  std::vector<std::string> artifacts_;
  std::string notes_;
};

SolverConfig solver_config(const RunConfig& cfg) {
  SolverConfig s;
  s.residual_tol = cfg.tol;
  s.max_iters = cfg.max_iters;
  s.gaussian_width = cfg.width;
  s.discretization = cfg.discretization;
  s.kinetic_growth = cfg.kinetic_growth;
  return s;
}

QProfile load_q(const RunConfig& cfg) {
  if (cfg.q_file.empty()) throw ConfigError("q_file: required (run compute-q first, pass --q)");
  StoredField stored = load_field(cfg.q_file);
  QProfile q{std::move(stored.field)};
  q.nc = stored.params.constraint_n();
  q.pohozaev = pohozaev_report(q.field, Discretization::dealiased);
  q.width = rms_width(q.field);
  return q;
}

/// Stored field on `grid`: unchanged when the grids agree, otherwise
/// interpolated with zero extension.
ComplexField load_on(const fs::path& path, const Grid& grid) {
  ComplexField f = load_field(path).field;
  if (f.grid() == grid) return f;
  return resample_trilinear(recenter(f), grid, Extension::zero);
}

double target_mass(const RunConfig& cfg) {
  if (cfg.n_target) return *cfg.n_target;
  if (!cfg.q_file.empty()) return load_field(cfg.q_file).params.constraint_n();
  throw ConfigError("n_target: required unless q_file supplies N_c");
}

}  // namespace

int cmd_compute_q(const RunConfig& cfg, const std::string& command_line) {
  const Grid grid(cfg.grid, cfg.box);
  const SolverConfig sc = solver_config(cfg);
  sc.validate();
  Run run(cfg, "compute-q", command_line);

  const QProfile q = compute_q(grid, sc, {cfg.box_study});
  const NcEstimate est = estimate_nc(q);
  const auto& p = q.pohozaev;
  const double gn_scaled = 2.0 * (p.massless_kinetic * p.mass / p.coulomb_quadruple) / est.value;

  std::ostringstream csv;
  csv << "n,L,mass,massless_kinetic,coulomb_quadruple,r1,r2,r3,gn_scaled,nc_est,nc_error,"
         "nc_drift,el_residual,width,iterations\n";
  csv << q.field.grid().n() << ',' << format_double(q.field.grid().length()) << ','
      << format_double(p.mass) << ',' << format_double(p.massless_kinetic) << ','
      << format_double(p.coulomb_quadruple) << ',' << format_double(p.r1) << ','
      << format_double(p.r2) << ',' << format_double(p.r3) << ',' << format_double(gn_scaled)
      << ',' << format_double(est.value) << ',' << format_double(est.error_bar) << ','
      << format_double(q.box_study ? q.box_study->drift : std::nan("")) << ','
      << format_double(q.el_residual) << ',' << format_double(q.width) << ',' << q.iterations
      << '\n';
  run.save("q.qfld", q.field, ModelParams(cfg.alpha, 0.0, 0.0, est.value));
  run.write("pohozaev.csv", csv.str());
  run.note("nc_est", format_double(est.value));
  run.finish();
  std::cout << "nc_est=" << format_double(est.value) << " max_pohozaev_deviation="
            << format_double(p.max_deviation()) << '\n';
  return 0;
}

int cmd_ground_state(const RunConfig& cfg, const std::string& command_line) {
  const Grid grid(cfg.grid, cfg.box);
  const double n = target_mass(cfg);
  const ModelParams params(cfg.alpha, cfg.beta, cfg.mass, n);
  SolverConfig sc = solver_config(cfg);
  sc.energy_floor = -cfg.energy_floor_factor * std::max(cfg.mass, 1.0) * n;
  if (!cfg.input.empty()) {
    sc.seed = Initializer::loaded_field;
    sc.initial_field = load_on(cfg.input, grid);
  }
  sc.validate();
  Run run(cfg, "ground-state", command_line);

  const GroundStateResult r = minimize(params, grid, sc);
  const auto& e = r.energy;
  std::ostringstream csv;
  csv << "status,alpha,beta,m,N,n,L,E,kinetic,coulomb,riesz,massless_kinetic,mu_projected,"
         "mu_formula,residual,iterations,width\n";
  csv << to_string(r.status) << ',' << format_double(cfg.alpha) << ','
      << format_double(cfg.beta) << ',' << format_double(cfg.mass) << ',' << format_double(n)
      << ',' << grid.n() << ',' << format_double(grid.length()) << ',' << format_double(e.total)
      << ',' << format_double(e.kinetic) << ',' << format_double(e.coulomb) << ','
      << format_double(e.riesz_alpha) << ',' << format_double(e.massless_kinetic) << ','
      << format_double(r.mu.projected) << ',' << format_double(r.mu.formula) << ','
      << format_double(r.residual) << ',' << r.iterations << ','
      << format_double(r.field.all_finite() ? rms_width(r.field) : std::nan("")) << '\n';
  run.write("summary.csv", csv.str());
  run.write("trace.csv", trace_csv(r.trace));
  if (r.field.all_finite()) run.save("ground_state.qfld", r.field, params);
  run.note("status", to_string(r.status));
  run.finish();
  std::cout << "status=" << to_string(r.status) << " E=" << format_double(e.total)
            << " residual=" << format_double(r.residual) << '\n';
  switch (r.status) {
    case SolveStatus::converged: return 0;
    case SolveStatus::unbounded_below: return 3;
    default: return 2;
  }
}

int cmd_evolve(const RunConfig& cfg, const std::string& command_line) {
  std::optional<ComplexField> reference;
  ComplexField phi = [&] {
    if (!cfg.input.empty()) {
      ComplexField f = load_field(cfg.input).field;
      reference = f;
      return f;
    }
    const Grid grid(cfg.grid, cfg.box);
    if (!cfg.n_target) throw ConfigError("n_target: required for Gaussian initial data");
    return gaussian_field(grid, cfg.width, *cfg.n_target);
  }();
  const double cap = cfg.n_target ? *cfg.n_target : mass(phi);
  const ComplexField psi0 = cfg.delta > 0.0 ? perturb(phi, cfg.delta, cfg.seed, cap)
                                            : normalize(phi, std::min(mass(phi), cap));
  const ModelParams params(cfg.alpha, cfg.beta, cfg.mass, mass(psi0));

  EvolveConfig ec;
  ec.t_max = cfg.tmax;
  ec.dt = cfg.dt;
  ec.sample_every = cfg.sample_every;
  ec.discretization = cfg.discretization;
  ec.reference = reference;
  ec.validate();
  Run run(cfg, "evolve", command_line);
  if (cfg.snapshot_every > 0) {
    fs::create_directories(run.path("snapshots"));
    ec.on_sample = [&](int index, double, const ComplexField& psi) {
      if (index % cfg.snapshot_every != 0) return;
      char name[48];
      std::snprintf(name, sizeof(name), "snapshots/snap_%06d.qfld", index);
      run.save(name, psi, params);
    };
  }

  try {
    const EvolveResult res = evolve(psi0, params, ec);
    const auto& d = res.diagnostics;
    run.write("diagnostics.csv", diagnostics_csv(d, ec.blowup_growth));
    run.save("final.qfld", res.final_state, params);
    run.note("verdict", to_string(d.verdict));
    run.note("max_mass_deviation", format_double(d.max_mass_deviation));
    run.note("steps", std::to_string(d.steps));
    run.finish();
    std::cout << "verdict=" << to_string(d.verdict)
              << " energy_drift=" << format_double(d.energy.back().total - d.energy.front().total)
              << " max_mass_deviation=" << format_double(d.max_mass_deviation) << '\n';
    return 0;
  } catch (const IntegratorError& err) {
    run.write("diagnostics.csv", diagnostics_csv(err.diagnostics(), ec.blowup_growth));
    run.save("last_good.qfld", err.last_good(), params);
    run.note("verdict", "non-finite");
    run.note("failure_time", format_double(err.time()));
    run.finish();
    std::cerr << "evolve: " << err.what() << '\n';
    return 4;
  }
}

int cmd_beta_scan(const RunConfig& cfg, const std::string& command_line) {
  ScanConfig sc;
  sc.alpha = cfg.alpha;
  sc.mass_m = cfg.mass;
  sc.betas = cfg.betas;
  sc.policy.min_box = cfg.min_box;
  sc.policy.hard_min_box = cfg.hard_min_box;
  sc.policy.points_per_width = cfg.points_per_width;
  sc.policy.max_n = cfg.max_grid;
  sc.solver = solver_config(cfg);
  sc.gamma_convention = cfg.gamma;
  sc.validate();
  const QProfile q = load_q(cfg);
  Run run(cfg, "beta-scan", command_line);

  const ScanResult res = beta_scan(q, sc);
  run.write("scan.csv", scan_csv(res.rows));

  std::ostringstream status;
  status << "beta,converged,residual,mu_discrepancy,iterations\n";
  for (const auto& r : res.rows) {
    status << format_double(r.beta) << ',' << (r.converged ? 1 : 0) << ','
           << format_double(r.residual) << ',' << format_double(r.mu_discrepancy) << ','
           << r.iterations << '\n';
  }
  run.write("scan_status.csv", status.str());

  const LimitInputs in = limit_inputs(q, cfg.alpha, cfg.mass);
  std::string fits = "gamma=" + format_double(res.gamma) + "\n" +
                     "nc=" + format_double(res.nc) + "\n" +
                     "limit_constant=" + format_double(limit_constant(in, cfg.alpha, cfg.gamma)) +
                     "\n";
  for (const ScanColumn c : {ScanColumn::energy, ScanColumn::kinetic_massless,
                             ScanColumn::coulomb_quadruple, ScanColumn::riesz_quadruple,
                             ScanColumn::mu}) {
    try {
      fits += fit_record(fit_exponent(res.rows, c), to_string(c));
    } catch (const DomainError& e) {
      fits += std::string(to_string(c)) + ".error=" + e.what() + "\n";
    }
  }
  run.write("fits.txt", fits);
  run.finish();
  std::cout << fits;
  int unconverged = 0;
  for (const auto& r : res.rows) unconverged += r.converged ? 0 : 1;
  return unconverged == 0 ? 0 : 2;
}

}  // namespace bstar::cli
