#include "bstar/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bstar/csv.hpp"
#include "bstar/profile.hpp"

namespace bstar {

LimitInputs limit_inputs(const QProfile& q, double alpha, double m, Discretization disc) {
  if (!(m > 0.0)) throw DomainError("limit_inputs: m must be positive");
  const double nc = mass(q.field);
  if (!(nc > 0.0)) throw DomainError("limit_inputs: zero profile");
  const EnergyModel model(q.field.grid(), ModelParams(alpha, 0.0, m, nc),
                          ZeroModeRule::lattice_matched, disc);
  const EnergyBreakdown e = model.breakdown(q.field);
  LimitInputs in{m * m * e.inv_kinetic, e.riesz_quadruple()};
  if (!(in.inv_kinetic > 0.0) || !(in.riesz_quadruple > 0.0)) {
    throw DomainError("limit_inputs: degenerate quadratic or quartic term");
  }
  return in;
}

double gamma_from_inputs(const LimitInputs& in, double alpha, GammaConvention convention) {
  if (!(in.inv_kinetic > 0.0) || !(in.riesz_quadruple > 0.0)) {
    throw DomainError("gamma: degenerate inputs");
  }
  const double denom =
      convention == GammaConvention::minimizing ? alpha * in.riesz_quadruple : in.riesz_quadruple;
  return std::pow(in.inv_kinetic / denom, 1.0 / (1.0 + alpha));
}

double gamma_from_q(const QProfile& q, double alpha, double m, GammaConvention convention) {
  return gamma_from_inputs(limit_inputs(q, alpha, m), alpha, convention);
}

double limit_constant_from_gamma(const LimitInputs& in, double alpha, double gamma) {
  return in.inv_kinetic / (4.0 * gamma) + std::pow(gamma, alpha) * in.riesz_quadruple / 4.0;
}

double limit_constant(const LimitInputs& in, double alpha, GammaConvention convention) {
  const double p = alpha / (1.0 + alpha);
  const double common =
      std::pow(in.inv_kinetic, p) * std::pow(in.riesz_quadruple, 1.0 / (1.0 + alpha));
  if (convention == GammaConvention::as_published) return 0.5 * common;
  return 0.25 * (1.0 + alpha) * std::pow(alpha, -p) * common;
}

double limit_constant(const QProfile& q, double alpha, double m, GammaConvention convention) {
  return limit_constant(limit_inputs(q, alpha, m), alpha, convention);
}

double rescaled_profile_error(const ComplexField& phi_beta, double beta, double alpha,
                              const ComplexField& q, double gamma) {
  if (!(beta > 0.0) || !(gamma > 0.0)) {
    throw DomainError("rescaled_profile_error: beta and gamma must be positive");
  }
  const double eps = std::pow(beta, 1.0 / (1.0 + alpha));
  const ComplexField target = dilate(q, gamma);
  ComplexField w = dilate(phi_beta, eps);
  require_resolved(w, "rescaled_profile_error (minimizer)");
  require_resolved(target, "rescaled_profile_error (target)");
  if (!(w.grid() == target.grid())) w = resample_trilinear(w, target.grid());

  const int n = target.grid().n();
  const auto cw = center_of_mass_index(w);
  const auto ct = center_of_mass_index(target);
  std::array<int, 3> shift{};
  for (int a = 0; a < 3; ++a) {
    double d = ct[a] - cw[a];
    d -= n * std::round(d / n);
    shift[a] = static_cast<int>(std::lround(d));
  }
  w = lattice_shift(w, shift);
  const cplx overlap = inner(w, target);
  if (std::abs(overlap) > 0.0) w *= overlap / std::abs(overlap);
  return std::sqrt(mass(w - target) / mass(target));
}

Grid GridPolicy::grid_for(double predicted_width, double dilated_q_box, double m) const {
  if (!(predicted_width > 0.0)) throw DomainError("grid policy: width must be positive");
  double length = std::max(box_scale * dilated_q_box, min_box / m);
  const double resolvable = max_n * predicted_width / points_per_width;
  if (resolvable < length) length = std::max(resolvable, hard_min_box / m);
  const double wanted = points_per_width * length / predicted_width;
  int n = min_n;
  while (n < max_n && n < wanted) n *= 2;
  return Grid(n, length);
}

void GridPolicy::validate() const {
  if (!(min_box > 0.0) || !(box_scale > 0.0) || !(points_per_width > 0.0)) {
    throw DomainError("grid policy: min_box, box_scale and points_per_width must be positive");
  }
  if (!(hard_min_box > 0.0 && hard_min_box <= min_box)) {
    throw DomainError("grid policy: need 0 < hard_min_box <= min_box");
  }
  if (min_n < 8 || max_n < min_n) throw DomainError("grid policy: need 8 <= min_n <= max_n");
  Grid(min_n, 1.0);
  Grid(max_n, 1.0);
}

void ScanConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("scan: alpha must lie in (0,1)");
  if (!(mass_m > 0.0)) throw DomainError("scan: m must be positive");
  if (betas.empty()) throw DomainError("scan: empty beta ladder");
  for (std::size_t i = 0; i < betas.size(); ++i) {
    if (!(betas[i] > 0.0)) throw DomainError("scan: betas must be positive");
    if (i > 0 && !(betas[i] < betas[i - 1])) {
      throw DomainError("scan: betas must be strictly decreasing");
    }
  }
  policy.validate();
  solver.validate();
}

namespace {

/// (lambda^(3/2) f(lambda x)) sampled on `grid`, zero outside the source box.
ComplexField warm_start(const ComplexField& f, double lambda, const Grid& grid) {
  return resample_trilinear(dilate(recenter(f), lambda), grid, Extension::zero);
}

}  // namespace

ScanResult beta_scan(const QProfile& q, const ScanConfig& cfg) {
  cfg.validate();
  ScanResult out;
  out.gamma = gamma_from_q(q, cfg.alpha, cfg.mass_m, cfg.gamma_convention);
  out.nc = estimate_nc(q).value;
  const double expo = 1.0 / (1.0 + cfg.alpha);

  const ComplexField* source = &q.field;
  double lambda = 0.0;
  double width = 0.0;
  for (std::size_t k = 0; k < cfg.betas.size(); ++k) {
    const double beta = cfg.betas[k];
    const double eps = std::pow(beta, expo);
    if (k == 0) {
      lambda = out.gamma / eps;
      width = rms_width(q.field) / lambda;
    } else {
      lambda = std::pow(cfg.betas[k - 1] / beta, expo);
      width = rms_width(*source) / lambda;
    }
    const double q_box = q.field.grid().length() * eps / out.gamma;
    const Grid grid = cfg.policy.grid_for(width, q_box, cfg.mass_m);

    SolverConfig solver = cfg.solver;
    solver.seed = Initializer::loaded_field;
    solver.initial_field = warm_start(*source, lambda, grid);
    const ModelParams params(cfg.alpha, beta, cfg.mass_m, out.nc);
    GroundStateResult res = minimize(params, grid, solver);

    ScanRow row;
    row.beta = beta;
    row.energy = res.energy.total;
    row.kinetic_massless = res.energy.massless_kinetic;
    row.coulomb_quadruple = res.energy.coulomb_quadruple();
    row.riesz_quadruple = res.energy.riesz_quadruple();
    row.mu = res.mu.projected;
    row.mu_discrepancy = res.mu.discrepancy;
    row.n = grid.n();
    row.box = grid.length();
    row.converged = res.converged();
    row.residual = res.residual;
    row.iterations = res.iterations;
    try {
      row.profile_error = rescaled_profile_error(res.field, beta, cfg.alpha, q.field, out.gamma);
    } catch (const ResolutionError&) {
      row.profile_error = std::numeric_limits<double>::quiet_NaN();
    }
    out.rows.push_back(row);
    out.fields.push_back(std::move(res.field));
    source = &out.fields.back();
  }
  return out;
}

const char* to_string(ScanColumn column) noexcept {
  switch (column) {
    case ScanColumn::energy: return "energy";
    case ScanColumn::kinetic_massless: return "kinetic_massless";
    case ScanColumn::coulomb_quadruple: return "coulomb_quadruple";
    case ScanColumn::riesz_quadruple: return "riesz_quadruple";
    case ScanColumn::mu: return "mu";
  }
  return "unknown";
}

FitResult fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ShapeError("fit: size mismatch");
  if (x.size() < 2) throw DomainError("fit: need at least two points");
  const std::size_t k = x.size();
  double mx = 0.0, my = 0.0;
  std::vector<double> lx(k), ly(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("fit: values must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw DomainError("fit: abscissae must not coincide");
  FitResult fit;
  fit.exponent = sxy / sxx;
  fit.prefactor = std::exp(my - fit.exponent * mx);
  double ss_res = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double r = ly[i] - (my + fit.exponent * (lx[i] - mx));
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  fit.rows_used = static_cast<int>(k);
  return fit;
}

FitResult fit_exponent(const std::vector<ScanRow>& rows, ScanColumn column) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : rows) {
    if (!r.converged) continue;
    double v = 0.0;
    switch (column) {
      case ScanColumn::energy: v = r.energy; break;
      case ScanColumn::kinetic_massless: v = r.kinetic_massless; break;
      case ScanColumn::coulomb_quadruple: v = r.coulomb_quadruple; break;
      case ScanColumn::riesz_quadruple: v = r.riesz_quadruple; break;
      case ScanColumn::mu: v = r.mu; break;
    }
    if (!std::isfinite(v)) continue;
    pts.emplace_back(r.beta, v);
  }
  if (pts.size() < 4) {
    throw DomainError(std::string("fit_exponent: fewer than 4 converged rows for ") +
                      to_string(column));
  }
  const bool negative = pts.front().second < 0.0;
  for (const auto& [b, v] : pts) {
    if ((v < 0.0) != negative || v == 0.0) {
      throw DomainError(std::string("fit_exponent: mixed-sign column ") + to_string(column));
    }
  }
  std::sort(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.first > b.first; });
  auto fit_from = [&](std::size_t first) {
    std::vector<double> x, y;
    for (std::size_t i = first; i < pts.size(); ++i) {
      x.push_back(pts[i].first);
      y.push_back(std::abs(pts[i].second));
    }
    return fit_power_law(x, y);
  };
  FitResult all = fit_from(0);
  if (pts.size() >= 5) {
    FitResult trimmed = fit_from(1);
    if (trimmed.r_squared > all.r_squared + 0.01) {
      trimmed.excluded_largest = true;
      return trimmed;
    }
  }
  return all;
}

std::string scan_csv(const std::vector<ScanRow>& rows) {
  std::ostringstream os;
  os << "beta,E,kin,coulomb,riesz,mu,profile_err,n,L\n";
  for (const auto& r : rows) {
    os << format_double(r.beta) << ',' << format_double(r.energy) << ','
       << format_double(r.kinetic_massless) << ',' << format_double(r.coulomb_quadruple) << ','
       << format_double(r.riesz_quadruple) << ',' << format_double(r.mu) << ','
       << format_double(r.profile_error) << ',' << r.n << ',' << format_double(r.box) << '\n';
  }
  return os.str();
}

std::string fit_record(const FitResult& fit, const std::string& prefix) {
  std::ostringstream os;
  os << prefix << ".exponent=" << format_double(fit.exponent) << '\n'
     << prefix << ".prefactor=" << format_double(fit.prefactor) << '\n'
     << prefix << ".r_squared=" << format_double(fit.r_squared) << '\n'
     << prefix << ".rows_used=" << fit.rows_used << '\n'
     << prefix << ".excluded_largest=" << (fit.excluded_largest ? "true" : "false") << '\n';
  return os.str();
}

}  // namespace bstar
