#include "bstar/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "bstar/csv.hpp"
#include "bstar/fft.hpp"
#include "bstar/profile.hpp"
#include "bstar/rng.hpp"
#include "bstar/spectral.hpp"

namespace bstar {

Propagator::Propagator(const Grid& grid, const ModelParams& params, Discretization disc)
    : Propagator(grid, params, disc, true) {}

Propagator Propagator::linear(const Grid& grid, const ModelParams& params) {
  return Propagator(grid, params, Discretization::collocation, false);
}

Propagator::Propagator(const Grid& grid, const ModelParams& params, Discretization disc,
                       bool interacting)
    : grid_(grid),
      params_(params),
      interacting_(interacting),
      kinetic_(relativistic_multiplier(grid, params.mass_m())) {
  if (!interacting_) return;
  const EnergyModel model(grid, params, ZeroModeRule::lattice_matched, disc);
  const auto c = model.coulomb_kernel().multiplier.values();
  const auto r = model.riesz_kernel().multiplier.values();
  interaction_.resize(grid.size());
  for (std::size_t i = 0; i < interaction_.size(); ++i) {
    interaction_[i] = params.beta() * r[i] - c[i];
  }
}

ComplexField Propagator::step(const ComplexField& psi, double dt) const {
  require_same_grid(grid_, psi.grid(), "step");
  auto& fft = FourierTransform::for_size(grid_.n());
  const std::size_t total = grid_.size();
  const double inv = 1.0 / static_cast<double>(total);

  ComplexField out = psi;
  auto data = out.data();
  auto kinetic_half = [&] {
    fft.forward(data, data);
    for (std::size_t i = 0; i < total; ++i) {
      data[i] *= std::polar(inv, -0.5 * dt * kinetic_[i]);
    }
    fft.inverse(data, data);
  };

  kinetic_half();
  if (interacting_) {
    std::vector<cplx> pot(total);
    for (std::size_t i = 0; i < total; ++i) pot[i] = std::norm(data[i]);
    fft.forward(pot, pot);
    for (std::size_t i = 0; i < total; ++i) pot[i] *= interaction_[i] * inv;
    fft.inverse(pot, pot);
    for (std::size_t i = 0; i < total; ++i) data[i] *= std::polar(1.0, -dt * pot[i].real());
  }
  kinetic_half();
  return out;
}

ComplexField step_strang(const ComplexField& psi, const ModelParams& params, double dt) {
  return Propagator(psi.grid(), params).step(psi, dt);
}

double max_phase_step(const Grid& grid, double mass_m) {
  const double xi = grid.max_wavenumber();
  return std::numbers::pi / std::sqrt(xi * xi + mass_m * mass_m);
}

const char* to_string(Verdict verdict) noexcept {
  return verdict == Verdict::completed ? "completed" : "blowup-indicated";
}

void EvolveConfig::validate() const {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw DomainError("evolve: T must be positive");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("evolve: dt must be positive");
  if (sample_every <= 0) throw DomainError("evolve: sample_every must be positive");
  if (!(blowup_growth > 1.0)) throw DomainError("evolve: blowup_growth must exceed 1");
}

namespace {

void record(TrajectoryDiagnostics& diag, const EnergyModel& model, const ComplexField& psi,
            double t, const std::optional<ComplexField>& reference) {
  const EnergyBreakdown e = model.breakdown(psi);
  const double m = mass(psi);
  diag.times.push_back(t);
  diag.mass.push_back(m);
  diag.energy.push_back(e);
  diag.kinetic.push_back(e.massless_kinetic);
  if (reference) diag.mod_distance.push_back(modulated_distance(psi, *reference));
  const double dev = std::abs(m - diag.mass.front()) / diag.mass.front();
  diag.max_mass_deviation = std::max(diag.max_mass_deviation, dev);
}

}  // namespace

EvolveResult evolve(const ComplexField& psi0, const ModelParams& params, const EvolveConfig& cfg) {
  cfg.validate();
  psi0.require_finite("evolve");
  const Grid& grid = psi0.grid();
  if (cfg.reference) require_same_grid(grid, cfg.reference->grid(), "evolve reference");
  if (cfg.phase_guard && cfg.dt > max_phase_step(grid, params.mass_m()) * (1.0 + 1e-12)) {
    throw DomainError("evolve: dt violates the phase-wrap guard dt*sqrt(xi_max^2+m^2) <= pi "
                      "(max dt " + format_double(max_phase_step(grid, params.mass_m())) + ")");
  }
  const Propagator prop(grid, params, cfg.discretization);
  const EnergyModel model(grid, params, ZeroModeRule::lattice_matched, cfg.discretization);

  const int steps = static_cast<int>(std::ceil(cfg.t_max / cfg.dt - 1e-9));
  TrajectoryDiagnostics diag;
  ComplexField psi = psi0;
  record(diag, model, psi, 0.0, cfg.reference);
  if (cfg.on_sample) cfg.on_sample(0, 0.0, psi);

  for (int s = 1; s <= steps; ++s) {
    ComplexField next = prop.step(psi, cfg.dt);
    const double t = s * cfg.dt;
    if (!next.all_finite()) {
      diag.steps = s - 1;
      diag.verdict = blowup_indicator(diag.kinetic, cfg.blowup_growth);
      throw IntegratorError("evolve: non-finite state at t=" + format_double(t), std::move(psi),
                            std::move(diag), t - cfg.dt);
    }
    psi = std::move(next);
    if (s % cfg.sample_every == 0 || s == steps) {
      record(diag, model, psi, t, cfg.reference);
      if (cfg.on_sample) cfg.on_sample(static_cast<int>(diag.times.size()) - 1, t, psi);
    }
  }
  diag.steps = steps;
  diag.verdict = blowup_indicator(diag.kinetic, cfg.blowup_growth);
  return {std::move(diag), std::move(psi)};
}

double h_half_norm(const ComplexField& f) {
  const ComplexField g = apply_multiplier(bessel_multiplier(f.grid(), 0.5), f);
  return std::sqrt(mass(g));
}

ComplexField perturb(const ComplexField& phi, double delta, std::uint64_t seed, double mass_cap) {
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw DomainError("perturb: delta must be >= 0");
  if (!(mass_cap > 0.0)) throw DomainError("perturb: mass cap must be positive");
  const Grid& grid = phi.grid();
  Rng rng = Rng(seed).split(0);
  ComplexField h(grid);
  for (auto& v : h.data()) {
    const double re = rng.normal();
    v = cplx{re, rng.normal()};
  }
  const Multiplier smooth = bessel_multiplier(grid, -2.0);
  const Multiplier band = dealias_mask(grid);
  std::vector<double> filter(grid.size());
  for (std::size_t i = 0; i < filter.size(); ++i) filter[i] = smooth[i] * band[i];
  h = apply_multiplier(Multiplier(grid, std::move(filter)), h);
  ComplexField psi = phi;
  psi.add_scaled(delta * std::sqrt(mass(phi) / mass(h)), h);
  return normalize(psi, std::min(mass(psi), mass_cap));
}

double modulated_distance(const ComplexField& psi, const ComplexField& reference) {
  require_same_grid(psi.grid(), reference.grid(), "modulated_distance");
  if (!(mass(reference) > 0.0)) throw DomainError("modulated_distance: zero reference");
  const int n = psi.grid().n();
  const auto cp = center_of_mass_index(psi);
  const auto cr = center_of_mass_index(reference);
  std::array<int, 3> shift{};
  for (int a = 0; a < 3; ++a) {
    double d = cp[a] - cr[a];
    d -= n * std::round(d / n);
    shift[a] = static_cast<int>(std::lround(d));
  }
  ComplexField aligned = lattice_shift(reference, shift);
  const cplx overlap = inner(aligned, psi);
  if (std::abs(overlap) > 0.0) aligned *= overlap / std::abs(overlap);
  return h_half_norm(psi - aligned);
}

Verdict blowup_indicator(const std::vector<double>& kinetic, double growth_factor) {
  const std::size_t len = kinetic.size();
  if (len < 2) return Verdict::completed;
  const std::size_t quartile = std::max<std::size_t>(2, (len + 3) / 4);
  for (std::size_t i = len - quartile + 1; i < len; ++i) {
    if (!(kinetic[i] > kinetic[i - 1])) return Verdict::completed;
  }
  return kinetic.back() > growth_factor * kinetic.front() ? Verdict::blowup_indicated
                                                          : Verdict::completed;
}

Verdict blowup_indicator(const TrajectoryDiagnostics& diag, double growth_factor) {
  return blowup_indicator(diag.kinetic, growth_factor);
}

std::string diagnostics_csv(const TrajectoryDiagnostics& diag, double growth_factor) {
  std::ostringstream os;
  os << "t,mass,E_total,E_kinetic_half,E_coulomb,E_riesz,kinetic_massless,mod_distance,"
        "verdict_flag\n";
  std::vector<double> prefix;
  for (std::size_t i = 0; i < diag.times.size(); ++i) {
    const auto& e = diag.energy[i];
    prefix.push_back(diag.kinetic[i]);
    const bool flag = blowup_indicator(prefix, growth_factor) == Verdict::blowup_indicated;
    os << format_double(diag.times[i]) << ',' << format_double(diag.mass[i]) << ','
       << format_double(e.total) << ',' << format_double(e.kinetic) << ','
       << format_double(e.coulomb) << ',' << format_double(e.riesz_alpha) << ','
       << format_double(diag.kinetic[i]) << ','
       << (i < diag.mod_distance.size() ? format_double(diag.mod_distance[i]) : "nan") << ','
       << (flag ? 1 : 0) << '\n';
  }
  return os.str();
}

}  // namespace bstar
