#include "bstar/energy.hpp"

#include <algorithm>
#include <cmath>

#include "bstar/errors.hpp"
#include "bstar/fft.hpp"
#include "bstar/profile.hpp"

namespace bstar {

struct EnergyModel::Spectra {
  std::vector<cplx> phi_hat;
  std::vector<cplx> rho_hat;
  EnergyBreakdown energy;
};

namespace {

RieszKernel band_limited(RieszKernel kernel, Discretization disc) {
  if (disc == Discretization::collocation) return kernel;
  const Multiplier mask = dealias_mask(kernel.multiplier.grid());
  std::vector<double> v(kernel.multiplier.values().begin(), kernel.multiplier.values().end());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= mask[i];
  return {kernel.theta, kernel.rule, Multiplier(kernel.multiplier.grid(), std::move(v))};
}

}  // namespace

EnergyModel::EnergyModel(const Grid& grid, const ModelParams& params, ZeroModeRule rule,
                         Discretization disc)
    : grid_(grid),
      params_(params),
      disc_(disc),
      kinetic_(relativistic_multiplier(grid, params.mass_m())),
      massless_(fractional_multiplier(grid, 1.0)),
      inverse_(fractional_multiplier(grid, -1.0)),
      coulomb_(band_limited(bstar::riesz_kernel(grid, 1.0, rule), disc)),
      riesz_(band_limited(bstar::riesz_kernel(grid, params.alpha(), rule), disc)) {}

EnergyModel::Spectra EnergyModel::spectra(const ComplexField& phi) const {
  require_same_grid(grid_, phi.grid(), "energy");
  auto& fft = FourierTransform::for_size(grid_.n());
  const std::size_t total = grid_.size();
  Spectra s;
  s.phi_hat.resize(total);
  s.rho_hat.resize(total);
  fft.forward(phi.values(), s.phi_hat);

  const auto v = phi.values();
  for (std::size_t i = 0; i < total; ++i) s.rho_hat[i] = std::norm(v[i]);
  fft.forward(s.rho_hat, s.rho_hat);

  double k_rel = 0.0, k0 = 0.0, k_inv = 0.0, c4 = 0.0, r4 = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    const double p = std::norm(s.phi_hat[i]);
    k_rel += kinetic_[i] * p;
    k0 += massless_[i] * p;
    k_inv += inverse_[i] * p;
    const double r = std::norm(s.rho_hat[i]);
    c4 += coulomb_.multiplier[i] * r;
    r4 += riesz_.multiplier[i] * r;
  }
  const double scale = grid_.weight() / static_cast<double>(total);
  auto& e = s.energy;
  e.kinetic = 0.5 * scale * k_rel;
  e.massless_kinetic = scale * k0;
  e.inv_kinetic = scale * k_inv;
  e.coulomb = 0.25 * scale * c4;
  e.riesz_alpha = 0.25 * scale * r4;
  e.total = e.kinetic - e.coulomb + params_.beta() * e.riesz_alpha;
  return s;
}

EnergyBreakdown EnergyModel::breakdown(const ComplexField& phi) const {
  return spectra(phi).energy;
}

EnergyModel::Evaluation EnergyModel::evaluate(const ComplexField& phi) const {
  Spectra s = spectra(phi);
  auto& fft = FourierTransform::for_size(grid_.n());
  const std::size_t total = grid_.size();
  const double inv = 1.0 / static_cast<double>(total);
  const double beta = params_.beta();

  for (std::size_t i = 0; i < total; ++i) s.phi_hat[i] *= kinetic_[i] * inv;
  fft.inverse(s.phi_hat, s.phi_hat);
  for (std::size_t i = 0; i < total; ++i) {
    s.rho_hat[i] *= (beta * riesz_.multiplier[i] - coulomb_.multiplier[i]) * inv;
  }
  fft.inverse(s.rho_hat, s.rho_hat);

  ComplexField h(grid_);
  const auto v = phi.values();
  for (std::size_t i = 0; i < total; ++i) {
    h[i] = s.phi_hat[i] + s.rho_hat[i].real() * v[i];
  }
  h.require_finite("el_operator");
  return {s.energy, std::move(h)};
}

ComplexField EnergyModel::el_operator(const ComplexField& phi) const {
  return evaluate(phi).h_phi;
}

RealField EnergyModel::potential(const ComplexField& phi) const {
  RealField rho = density(phi);
  RealField out(grid_);
  const RealField c = convolve_riesz(coulomb_, rho);
  const RealField r = convolve_riesz(riesz_, rho);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = params_.beta() * r[i] - c[i];
  return out;
}

EnergyBreakdown energy(const ComplexField& phi, const ModelParams& params) {
  return EnergyModel(phi.grid(), params).breakdown(phi);
}

ComplexField el_operator(const ComplexField& phi, const ModelParams& params) {
  return EnergyModel(phi.grid(), params).el_operator(phi);
}

MultiplierEstimate lagrange_multiplier(const EnergyModel& model, const ComplexField& phi,
                                       double e_value) {
  const double n = mass(phi);
  if (!(n > 0.0)) throw DomainError("lagrange_multiplier: zero field");
  const auto eval = model.evaluate(phi);
  MultiplierEstimate mu;
  mu.projected = inner(phi, eval.h_phi).real() / n;
  const double beta = model.params().beta();
  mu.formula = (2.0 * e_value - 0.5 * eval.energy.coulomb_quadruple() +
                0.5 * beta * eval.energy.riesz_quadruple()) /
               n;
  mu.discrepancy = std::abs(mu.projected - mu.formula);
  return mu;
}

MultiplierEstimate lagrange_multiplier(const ComplexField& phi, const ModelParams& params,
                                       double e_value) {
  return lagrange_multiplier(EnergyModel(phi.grid(), params), phi, e_value);
}

double gn_ratio(const ComplexField& psi) {
  const double n = mass(psi);
  if (!(n > 0.0)) throw DomainError("gn_ratio: zero field");
  const double k0 = quadratic_form(fractional_multiplier(psi.grid(), 1.0), psi);
  const auto kernel = riesz_kernel(psi.grid(), 1.0);
  const RealField rho = density(psi);
  const RealField pot = convolve_riesz(kernel, rho);
  double c4 = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) c4 += pot[i] * rho[i];
  c4 *= psi.grid().weight();
  if (!(c4 > 0.0)) throw DomainError("gn_ratio: Coulomb interaction is not positive");
  return k0 * n / c4;
}

double PohozaevReport::max_deviation() const noexcept {
  return std::max({std::abs(r1 - 1.0), std::abs(r2 - 1.0), std::abs(r3 - 1.0)});
}

PohozaevReport pohozaev_report(const ComplexField& q, Discretization disc) {
  PohozaevReport rep;
  rep.mass = mass(q);
  if (!(rep.mass > 0.0)) throw DomainError("pohozaev_report: zero field");
  // alpha and m do not enter the massless kinetic or Coulomb terms.
  const auto e = EnergyModel(q.grid(), ModelParams(0.5, 0.0, 0.0, rep.mass),
                             ZeroModeRule::lattice_matched, disc)
                     .breakdown(q);
  rep.massless_kinetic = e.massless_kinetic;
  rep.coulomb_quadruple = e.coulomb_quadruple();
  rep.r1 = rep.massless_kinetic / rep.mass;
  rep.r2 = rep.coulomb_quadruple / (2.0 * rep.mass);
  rep.r3 = rep.massless_kinetic / (rep.coulomb_quadruple / 2.0);
  return rep;
}

double test_function_energy(double lambda, const ModelParams& params, const ComplexField& q,
                            const std::optional<Grid>& target) {
  if (!(lambda > 0.0)) throw DomainError("test_function_energy: lambda must be positive");
  const double nc = mass(q);
  if (!(nc > 0.0)) throw DomainError("test_function_energy: zero profile");
  ComplexField trial = dilate(q, lambda);
  trial *= std::sqrt(params.constraint_n() / nc);
  if (target) {
    trial = resample_trilinear(trial, *target);
  }
  require_resolved(trial, "test_function_energy");
  return energy(trial, params).total;
}

}  // namespace bstar
