#include "bstar/ground_state.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "bstar/csv.hpp"
#include "bstar/fft.hpp"
#include "bstar/profile.hpp"
#include "bstar/rng.hpp"

namespace bstar {

void SolverConfig::validate() const {
  if (max_iters <= 0) throw DomainError("solver: max_iters must be positive");
  if (!(residual_tol > 0.0)) throw DomainError("solver: residual_tol must be positive");
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0)) {
    throw DomainError("solver: backtrack_factor must lie in (0,1)");
  }
  if (!(growth_factor >= 1.0)) throw DomainError("solver: growth_factor must be >= 1");
  if (!(gaussian_width > 0.0)) throw DomainError("solver: gaussian_width must be positive");
  if (!(perturbation >= 0.0)) throw DomainError("solver: perturbation must be >= 0");
  if (!(kinetic_growth > 1.0)) throw DomainError("solver: kinetic_growth must exceed 1");
  if (seed == Initializer::loaded_field && !initial_field) {
    throw DomainError("solver: loaded_field seed requires an initial field");
  }
  if (energy_floor && !std::isfinite(*energy_floor)) {
    throw DomainError("solver: energy_floor must be finite");
  }
}

const char* to_string(SolveStatus status) noexcept {
  switch (status) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iterations: return "max_iterations";
    case SolveStatus::stagnated: return "stagnated";
    case SolveStatus::unbounded_below: return "unbounded_below";
  }
  return "unknown";
}

namespace {

using Spectrum = std::vector<cplx>;

class Spectral {
 public:
  explicit Spectral(const Grid& grid)
      : grid_(grid),
        fft_(FourierTransform::for_size(grid.n())),
        scale_(grid.weight() / static_cast<double>(grid.size())) {}

  Spectrum forward(const ComplexField& f) const {
    Spectrum s(grid_.size());
    fft_.forward(f.values(), s);
    return s;
  }

  ComplexField inverse(const Spectrum& s) const {
    std::vector<cplx> v(grid_.size());
    fft_.inverse(s, v);
    const double inv = 1.0 / static_cast<double>(grid_.size());
    for (auto& x : v) x *= inv;
    return ComplexField(grid_, std::move(v));
  }

  /// Re<a, b> from spectra.
  double dot(const Spectrum& a, const Spectrum& b) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      sum += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    }
    return scale_ * sum;
  }

  /// Re<a, S b> for a real symbol S.
  double dot(const Spectrum& a, std::span<const double> symbol, const Spectrum& b) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      sum += symbol[i] * (a[i].real() * b[i].real() + a[i].imag() * b[i].imag());
    }
    return scale_ * sum;
  }

 private:
  Grid grid_;
  FourierTransform& fft_;
  double scale_;
};

/// Solves the (at most 2x2) symmetric system G c = r in place of r.
void solve_small(const std::array<std::array<double, 2>, 2>& g, std::array<double, 2>& r,
                 int dim) {
  if (dim == 1) {
    r[0] /= g[0][0];
    return;
  }
  const double det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
  const double c0 = (g[1][1] * r[0] - g[0][1] * r[1]) / det;
  const double c1 = (g[0][0] * r[1] - g[1][0] * r[0]) / det;
  r = {c0, c1};
}

struct FlowProblem {
  const EnergyModel* model = nullptr;
  double target_mass = 1.0;
  /// Optional constraint <psi, B psi> = ratio * mass(psi).
  const Multiplier* ratio_symbol = nullptr;
  double ratio = 0.0;
  /// Preconditioner P = symbol + shift.
  const Multiplier* precond_symbol = nullptr;
  /// Optional 0/1 spectral band the iterate is confined to.
  const Multiplier* band = nullptr;
  bool detect_unbounded = true;
};

struct FlowOutcome {
  ComplexField psi;
  EnergyBreakdown energy;
  double residual = 0.0;
  int iterations = 0;
  std::vector<TraceEntry> trace;
  SolveStatus status = SolveStatus::max_iterations;
};

class Flow {
 public:
  Flow(const FlowProblem& problem, const SolverConfig& cfg)
      : pb_(problem), cfg_(cfg), grid_(problem.model->grid()), sp_(grid_) {}

  FlowOutcome run(ComplexField psi) {
    const std::size_t total = grid_.size();
    const double nmass = pb_.target_mass;
    psi = retract_start(std::move(psi));

    double t_guess = cfg_.dt0 > 0.0 ? cfg_.dt0 : default_step();
    const double t_floor = 1e-14 * t_guess;

    FlowOutcome out{psi, {}, 0.0, 0, {}, SolveStatus::max_iterations};
    Spectrum z_prev, d_hat;
    double gz_prev = 0.0;
    double kinetic0 = 0.0;
    int since_restart = 0;
    double best_residual = std::numeric_limits<double>::infinity();
    int best_iter = 0;

    for (int iter = 0;; ++iter) {
      auto eval = pb_.model->evaluate(psi);
      const Spectrum psi_hat = restrict_band(sp_.forward(psi));
      const Spectrum g_hat = restrict_band(sp_.forward(eval.h_phi));
      if (iter == 0) kinetic0 = eval.energy.kinetic;

      Normals nrm = normals(psi_hat);
      const double residual = tangent_residual(nrm, g_hat);
      const double mu = sp_.dot(psi_hat, g_hat) / nmass;

      out.psi = psi;
      out.energy = eval.energy;
      out.residual = residual;
      out.iterations = iter;
      out.trace.push_back({iter, eval.energy.total, residual, iter == 0 ? 0.0 : last_step_});

      if (residual <= cfg_.residual_tol) {
        out.status = SolveStatus::converged;
        return out;
      }
      if (pb_.detect_unbounded) {
        const double floor = cfg_.energy_floor.value_or(-10.0 * pb_.model->params().mass_m() *
                                                         nmass);
        if (eval.energy.total < floor && eval.energy.kinetic > cfg_.kinetic_growth * kinetic0) {
          out.status = SolveStatus::unbounded_below;
          return out;
        }
      }
      if (residual < 0.9 * best_residual) {
        best_residual = residual;
        best_iter = iter;
      } else if (iter - best_iter > kStallWindow) {
        out.status = SolveStatus::stagnated;
        return out;
      }
      if (iter >= cfg_.max_iters) {
        out.status = SolveStatus::max_iterations;
        return out;
      }

      // Preconditioner and preconditioned tangent gradient z.
      precond_.assign(total, 1.0);
      if (cfg_.preconditioned) {
        const double shift = std::max(-mu, 0.25 * kinetic_ratio(eval.energy));
        const auto base = pb_.precond_symbol->values();
        for (std::size_t i = 0; i < total; ++i) precond_[i] = base[i] + std::max(shift, 1e-12);
      }
      Spectrum z(total);
      for (std::size_t i = 0; i < total; ++i) z[i] = g_hat[i] / precond_[i];
      project_tangent(nrm, z);
      const double gz = sp_.dot(g_hat, z);

      bool restart = !cfg_.conjugate || d_hat.empty() || since_restart >= 200;
      double beta_cg = 0.0;
      if (!restart) {
        double num = gz;
        num -= sp_.dot(g_hat, z_prev);
        beta_cg = std::max(0.0, num / gz_prev);
        project_tangent(nrm, d_hat);
      }
      if (restart) {
        d_hat.assign(total, cplx{});
        beta_cg = 0.0;
        since_restart = 0;
      }
      for (std::size_t i = 0; i < total; ++i) d_hat[i] = -z[i] + beta_cg * d_hat[i];
      double slope = sp_.dot(g_hat, d_hat);
      if (!(slope < 0.0)) {
        for (std::size_t i = 0; i < total; ++i) d_hat[i] = -z[i];
        slope = -gz;
        since_restart = 0;
      }
      ++since_restart;
      z_prev = std::move(z);
      gz_prev = gz;

      const ComplexField d = sp_.inverse(d_hat);
      auto step = line_search(psi, psi_hat, d, d_hat, eval.energy.total, slope, t_guess);
      if (!step) {
        // Energy differences are at roundoff level: restart from the
        // preconditioned gradient and step on the derivative instead.
        for (std::size_t i = 0; i < total; ++i) d_hat[i] = -z_prev[i];
        const ComplexField d_sd = sp_.inverse(d_hat);
        const auto& e = eval.energy;
        const double noise =
            1e-12 * (std::abs(e.kinetic) + std::abs(e.coulomb) + std::abs(e.riesz_alpha));
        step = secant_step(psi, psi_hat, d_sd, d_hat, e.total, noise, -gz,
                           std::max(t_guess, default_step()));
        d_hat.clear();
        if (!step) {
          out.status = SolveStatus::stagnated;
          return out;
        }
      }
      psi = std::move(step->psi);
      last_step_ = step->t;
      t_guess = std::max(step->first_try ? step->t * cfg_.growth_factor : step->t, t_floor);
    }
  }

 private:
  static constexpr int kStallWindow = 100;

  struct Normals {
    std::array<Spectrum, 2> n;
    std::array<Spectrum, 2> pn;  // n / P, filled by project_tangent
    int dim = 1;
  };

  struct Step {
    ComplexField psi;
    double t;
    bool first_try;
  };

  double default_step() const {
    if (cfg_.preconditioned) return 1.0;
    const double xi = grid_.max_wavenumber();
    const double m = pb_.model->params().mass_m();
    return 0.5 / std::sqrt(xi * xi + m * m);
  }

  double kinetic_ratio(const EnergyBreakdown& e) const {
    return 2.0 * e.kinetic / pb_.target_mass;
  }

  Normals normals(const Spectrum& psi_hat) const {
    Normals nrm;
    nrm.n[0] = psi_hat;
    if (pb_.ratio_symbol) {
      const auto b = pb_.ratio_symbol->values();
      nrm.n[1].resize(psi_hat.size());
      for (std::size_t i = 0; i < psi_hat.size(); ++i) nrm.n[1][i] = b[i] * psi_hat[i];
      nrm.dim = 2;
    }
    return nrm;
  }

  /// Component of g_hat L2-orthogonal to the constraint normals.
  Spectrum tangent_part(const Normals& nrm, const Spectrum& g_hat) const {
    std::array<std::array<double, 2>, 2> gram{};
    std::array<double, 2> c{};
    for (int a = 0; a < nrm.dim; ++a) {
      c[a] = sp_.dot(nrm.n[a], g_hat);
      for (int b = 0; b < nrm.dim; ++b) gram[a][b] = sp_.dot(nrm.n[a], nrm.n[b]);
    }
    solve_small(gram, c, nrm.dim);
    Spectrum r = g_hat;
    for (int a = 0; a < nrm.dim; ++a)
      for (std::size_t i = 0; i < r.size(); ++i) r[i] -= c[a] * nrm.n[a][i];
    return r;
  }

  /// ||tangent gradient|| / ||psi||.
  double tangent_residual(const Normals& nrm, const Spectrum& g_hat) const {
    const Spectrum r = tangent_part(nrm, g_hat);
    return std::sqrt(sp_.dot(r, r) / pb_.target_mass);
  }

  /// Removes from v its P-metric components along the normals, leaving
  /// Re<n_a, v> = 0.
  void project_tangent(Normals& nrm, Spectrum& v) const {
    std::array<std::array<double, 2>, 2> gram{};
    std::array<double, 2> c{};
    for (int a = 0; a < nrm.dim; ++a) {
      if (nrm.pn[a].empty()) {
        nrm.pn[a].resize(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) nrm.pn[a][i] = nrm.n[a][i] / precond_[i];
      }
    }
    for (int a = 0; a < nrm.dim; ++a) {
      c[a] = sp_.dot(nrm.n[a], v);
      for (int b = 0; b < nrm.dim; ++b) gram[a][b] = sp_.dot(nrm.n[a], nrm.pn[b]);
    }
    solve_small(gram, c, nrm.dim);
    for (int a = 0; a < nrm.dim; ++a)
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c[a] * nrm.pn[a][i];
  }

  Spectrum restrict_band(Spectrum s) const {
    if (pb_.band) {
      for (std::size_t i = 0; i < s.size(); ++i) s[i] *= (*pb_.band)[i];
    }
    return s;
  }

  ComplexField retract_start(ComplexField psi) const {
    if (pb_.ratio_symbol) return retract_spectrum(restrict_band(sp_.forward(psi)));
    if (pb_.band) psi = sp_.inverse(restrict_band(sp_.forward(psi)));
    return normalize(psi, pb_.target_mass);
  }

  /// Moves v onto the ratio constraint along (B - r) v / (B + r), then onto the
  /// mass sphere.
  ComplexField retract_spectrum(Spectrum v) const {
    v = restrict_band(std::move(v));
    const auto b = pb_.ratio_symbol->values();
    const double r = pb_.ratio;
    const std::size_t total = v.size();
    std::vector<double> shifted(total);
    for (std::size_t i = 0; i < total; ++i) shifted[i] = b[i] - r;
    Spectrum u(total);
    for (int pass = 0; pass < 8; ++pass) {
      const double f = sp_.dot(v, shifted, v);
      const double scale = sp_.dot(v, b, v);
      if (std::abs(f) <= 1e-15 * std::abs(scale)) break;
      for (std::size_t i = 0; i < total; ++i) {
        u[i] = shifted[i] * v[i] / (b[i] + r);
      }
      const double qa = sp_.dot(u, shifted, u);
      const double qb = 2.0 * sp_.dot(u, shifted, v);
      double s = -f / qb;
      const double disc = qb * qb - 4.0 * qa * f;
      if (std::abs(qa) > 1e-300 && disc >= 0.0) {
        // Root of smallest magnitude, computed without cancellation.
        const double q = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
        s = f / q;
      }
      for (std::size_t i = 0; i < total; ++i) v[i] += s * u[i];
    }
    return normalize(sp_.inverse(v), pb_.target_mass);
  }

  ComplexField trial_point(const ComplexField& psi, const Spectrum& psi_hat, const ComplexField& d,
                           const Spectrum& d_hat, double t) const {
    if (!pb_.ratio_symbol) {
      ComplexField moved = psi;
      moved.add_scaled(t, d);
      return normalize(moved, pb_.target_mass);
    }
    Spectrum v(psi_hat.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = psi_hat[i] + t * d_hat[i];
    return retract_spectrum(std::move(v));
  }

  std::optional<Step> line_search(const ComplexField& psi, const Spectrum& psi_hat,
                                  const ComplexField& d, const Spectrum& d_hat, double f0,
                                  double slope, double t) const {
    constexpr double c1 = 1e-4;
    const double t_min = 1e-4 * t;
    bool first = true;
    while (t >= t_min) {
      ComplexField trial = trial_point(psi, psi_hat, d, d_hat, t);
      const double ft = pb_.model->breakdown(trial).total;
      if (std::isfinite(ft) && ft <= f0 + c1 * t * slope && ft < f0) {
        // Quadratic model through f0, slope and ft refines the step.
        const double curv = ft - f0 - slope * t;
        if (curv > 0.0) {
          const double tq = -slope * t * t / (2.0 * curv);
          if (tq > 0.0 && std::abs(tq - t) > 0.2 * t && tq < 8.0 * t) {
            ComplexField alt = trial_point(psi, psi_hat, d, d_hat, tq);
            const double fq = pb_.model->breakdown(alt).total;
            if (std::isfinite(fq) && fq < ft) return Step{std::move(alt), tq, first && tq >= t};
          }
        }
        return Step{std::move(trial), t, first};
      }
      double next = cfg_.backtrack_factor * t;
      if (std::isfinite(ft)) {
        const double curv = ft - f0 - slope * t;
        if (curv > 0.0) {
          const double tq = -slope * t * t / (2.0 * curv);
          next = std::clamp(tq, 0.1 * t, cfg_.backtrack_factor * t);
        }
      }
      t = next;
      first = false;
    }
    return std::nullopt;
  }

  /// Derivative-based step for when energy differences drown in roundoff:
  /// one secant update of the tangential directional derivative along d,
  /// accepted while the energy stays within `noise` of f0.
  std::optional<Step> secant_step(const ComplexField& psi, const Spectrum& psi_hat,
                                  const ComplexField& d, const Spectrum& d_hat, double f0,
                                  double noise, double slope, double t) const {
    for (int k = 0; k < 6; ++k, t *= 0.25) {
      ComplexField trial = trial_point(psi, psi_hat, d, d_hat, t);
      const Spectrum h_hat = restrict_band(sp_.forward(pb_.model->el_operator(trial)));
      const double st = sp_.dot(tangent_part(normals(sp_.forward(trial)), h_hat), d_hat);
      if (!std::isfinite(st)) continue;
      double ts = t;
      if (st > slope) ts = std::min(t * slope / (slope - st), 8.0 * t);
      ComplexField cand = ts == t ? std::move(trial) : trial_point(psi, psi_hat, d, d_hat, ts);
      const double fc = pb_.model->breakdown(cand).total;
      if (std::isfinite(fc) && fc <= f0 + noise) return Step{std::move(cand), ts, false};
      t = std::min(t, ts);
    }
    return std::nullopt;
  }

  FlowProblem pb_;
  const SolverConfig& cfg_;
  Grid grid_;
  Spectral sp_;
  std::vector<double> precond_;
  double last_step_ = 0.0;
};

ComplexField initial_field(const Grid& grid, const SolverConfig& cfg, double target_mass) {
  ComplexField psi = cfg.seed == Initializer::loaded_field
                         ? resample_trilinear(*cfg.initial_field, grid)
                         : gaussian_field(grid, cfg.gaussian_width, target_mass);
  if (cfg.perturbation > 0.0) {
    double peak = 0.0;
    for (const auto& v : psi.values()) peak = std::max(peak, std::abs(v));
    Rng rng(cfg.perturbation_seed);
    Rng re = rng.split(0), im = rng.split(1);
    for (auto& v : psi.data()) {
      v += cfg.perturbation * peak * cplx{re.normal(), im.normal()};
    }
  }
  return normalize(psi, target_mass);
}

/// Zero-padded copy of f on (2n, 2L), same spacing, same physical center.
ComplexField embed_double(const ComplexField& f) {
  const Grid& g = f.grid();
  const int n = g.n();
  const Grid fine(2 * n, 2.0 * g.length());
  ComplexField out(fine);
  const int off = n / 2;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        out[fine.index(i + off, j + off, k + off)] = f[g.index(i, j, k)];
      }
  return out;
}

struct SliceSolution {
  ComplexField q;
  int iterations = 0;
};

/// Minimizes K0/2 - C/4 at fixed mass and fixed K0/mass, then rescales to the
/// normalization K0 = mass, C = 2 mass.
SliceSolution solve_slice(ComplexField seed, const SolverConfig& cfg) {
  const Grid grid = seed.grid();
  const double n0 = mass(seed);
  const ModelParams params(0.5, 0.0, 0.0, n0);
  const EnergyModel model(grid, params, ZeroModeRule::lattice_matched, cfg.discretization);
  const Multiplier mask = dealias_mask(grid);
  const double r0 = model.breakdown(seed).massless_kinetic / n0;

  FlowProblem pb;
  pb.model = &model;
  pb.target_mass = n0;
  pb.ratio_symbol = &model.massless_symbol();
  pb.ratio = r0;
  pb.precond_symbol = &model.massless_symbol();
  pb.detect_unbounded = false;
  if (cfg.discretization == Discretization::dealiased) pb.band = &mask;

  SolverConfig flow_cfg = cfg;
  Flow flow(pb, flow_cfg);
  FlowOutcome res = flow.run(std::move(seed));
  if (res.status != SolveStatus::converged) {
    throw ConvergenceError(std::string("compute_q: slice flow ended with status ") +
                               to_string(res.status) + ", residual " +
                               std::to_string(res.residual),
                           std::move(res.trace), res.status);
  }

  const double k0 = res.energy.massless_kinetic;
  const double c4 = res.energy.coulomb_quadruple();
  const double b = k0 / n0;
  const double a = std::sqrt(2.0 * n0 / (b * b * c4));
  const Grid scaled(grid.n(), grid.length() * b);
  std::vector<cplx> samples(res.psi.values().begin(), res.psi.values().end());
  for (auto& v : samples) v *= a;
  ComplexField q(scaled, std::move(samples));
  q = remove_global_phase(recenter(q));
  return {std::move(q), res.iterations};
}

double q_el_residual(const ComplexField& q, Discretization disc) {
  const EnergyModel model(q.grid(), ModelParams(0.5, 0.0, 0.0, mass(q)),
                          ZeroModeRule::lattice_matched, disc);
  ComplexField r = model.el_operator(q);
  r += q;
  return std::sqrt(mass(r) / mass(q));
}

}  // namespace

ComplexField gaussian_field(const Grid& grid, double width, double target_mass) {
  if (!(width > 0.0)) throw DomainError("gaussian_field: width must be positive");
  const int n = grid.n();
  std::vector<double> g1(n);
  for (int i = 0; i < n; ++i) {
    const double x = grid.coordinate(i);
    g1[i] = std::exp(-x * x / (2.0 * width * width));
  }
  ComplexField f(grid);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) f[grid.index(i, j, k)] = g1[i] * g1[j] * g1[k];
  return normalize(f, target_mass);
}

GroundStateResult minimize(const ModelParams& params, const Grid& grid, const SolverConfig& cfg) {
  cfg.validate();
  const EnergyModel model(grid, params, ZeroModeRule::lattice_matched, cfg.discretization);
  const Multiplier mask = dealias_mask(grid);
  FlowProblem pb;
  pb.model = &model;
  pb.target_mass = params.constraint_n();
  pb.precond_symbol = &model.kinetic_symbol();
  if (cfg.discretization == Discretization::dealiased) pb.band = &mask;

  Flow flow(pb, cfg);
  FlowOutcome res = flow.run(initial_field(grid, cfg, params.constraint_n()));

  GroundStateResult out{std::move(res.psi), res.energy, {}, res.residual, res.iterations,
                        std::move(res.trace), res.status};
  out.mu = lagrange_multiplier(model, out.field, out.energy.total);
  return out;
}

const GroundStateResult& require_converged(const GroundStateResult& result) {
  if (!result.converged()) {
    throw ConvergenceError(std::string("ground state: ") + to_string(result.status) +
                               " after " + std::to_string(result.iterations) +
                               " iterations, residual " + std::to_string(result.residual),
                           result.trace, result.status);
  }
  return result;
}

std::string trace_csv(const std::vector<TraceEntry>& trace) {
  std::ostringstream os;
  os << "iter,energy,residual,dt\n";
  for (const auto& e : trace) {
    os << e.iter << ',' << format_double(e.energy) << ',' << format_double(e.residual) << ','
       << format_double(e.dt) << '\n';
  }
  return os.str();
}

QProfile compute_q(const Grid& grid, const SolverConfig& cfg, const QSolverOptions& opts) {
  cfg.validate();
  SliceSolution coarse = solve_slice(initial_field(grid, cfg, 1.0), cfg);

  QProfile out{coarse.q};
  out.nc = mass(coarse.q);
  out.pohozaev = pohozaev_report(coarse.q, cfg.discretization);
  out.el_residual = q_el_residual(coarse.q, cfg.discretization);
  out.width = rms_width(coarse.q);
  out.iterations = coarse.iterations;

  if (opts.box_study) {
    SliceSolution fine = solve_slice(embed_double(coarse.q), cfg);
    BoxStudy study{coarse.q.grid(), fine.q.grid(), out.nc, mass(fine.q), 0.0};
    study.drift = (study.nc_fine - study.nc_coarse) / study.nc_fine;
    out.box_study = study;
  }
  return out;
}

NcEstimate estimate_nc(const QProfile& q) {
  if (!q.box_study) return {q.nc, 0.0};
  return {q.box_study->nc_fine, std::abs(q.box_study->nc_fine - q.box_study->nc_coarse)};
}

}  // namespace bstar
