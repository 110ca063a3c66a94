#include "bstar/spectral.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "bstar/errors.hpp"
#include "bstar/fft.hpp"

namespace bstar {
namespace {

constexpr double kPi = std::numbers::pi;

std::atomic<double> g_fast_path_scale{1.0};

void require_theta(double theta, const char* where) {
  if (!(theta > 0.0 && theta < 2.0)) {
    throw DomainError(std::string(where) + ": theta must lie in (0,2), got " +
                      std::to_string(theta));
  }
}

double compute_lattice_offset(double theta) {
  using boost::math::tgamma;
  // Ewald split of r^-theta = Gamma(theta/2)^-1 int_0^inf t^(theta/2-1) e^(-t r^2) dt
  // at t = eta^2, unit box.
  const double eta = std::sqrt(kPi);
  const double g = tgamma(theta / 2.0);
  const double a_long = (3.0 - theta) / 2.0;
  const int cut = 6;

  double real_sum = 0.0;
  for (int i = -cut; i <= cut; ++i)
    for (int j = -cut; j <= cut; ++j)
      for (int k = -cut; k <= cut; ++k) {
        if (i == 0 && j == 0 && k == 0) continue;
        const double r = std::sqrt(double(i * i + j * j + k * k));
        real_sum += tgamma(theta / 2.0, eta * eta * r * r) / (g * std::pow(r, theta));
      }

  double recip_sum = 0.0;
  for (int i = -cut; i <= cut; ++i)
    for (int j = -cut; j <= cut; ++j)
      for (int k = -cut; k <= cut; ++k) {
        if (i == 0 && j == 0 && k == 0) continue;
        const double xi = 2.0 * kPi * std::sqrt(double(i * i + j * j + k * k));
        recip_sum += std::pow(kPi, 1.5) / g * std::pow(2.0 / xi, 3.0 - theta) *
                     tgamma(a_long, xi * xi / (4.0 * eta * eta));
      }

  const double long_at_origin = 2.0 * std::pow(eta, theta) / (theta * g);
  const double short_integral =
      2.0 * std::pow(kPi, 1.5) * std::pow(eta, theta - 3.0) / ((3.0 - theta) * g);
  return long_at_origin - real_sum + short_integral - recip_sum;
}

}  // namespace

Multiplier::Multiplier(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw ShapeError("multiplier: expected " + std::to_string(grid_.size()) + " values");
  }
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0) {
      throw DomainError("multiplier: values must be finite and non-negative");
    }
  }
}

double Multiplier::max_value() const noexcept {
  return *std::max_element(values_.begin(), values_.end());
}

Multiplier relativistic_multiplier(const Grid& grid, double m) {
  if (!(m >= 0.0)) throw DomainError("relativistic_multiplier: m must be >= 0");
  return radial_multiplier(
      grid, [m](double k) { return std::sqrt(k * k + m * m); }, m);
}

Multiplier fractional_multiplier(const Grid& grid, double s) {
  return radial_multiplier(
      grid, [s](double k) { return std::pow(k, s); }, 0.0);
}

Multiplier bessel_multiplier(const Grid& grid, double s) {
  return radial_multiplier(
      grid, [s](double k) { return std::pow(1.0 + k * k, s / 2.0); }, 1.0);
}

Multiplier dealias_mask(const Grid& grid) {
  const int n = grid.n();
  std::vector<char> keep(n);
  for (int q = 0; q < n; ++q) {
    const int shifted = q < n / 2 ? q : q - n;
    keep[q] = 3 * std::abs(shifted) < n;
  }
  std::vector<double> values(grid.size());
  std::size_t idx = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c, ++idx) values[idx] = keep[a] && keep[b] && keep[c] ? 1.0 : 0.0;
  return Multiplier(grid, std::move(values));
}

ComplexField apply_multiplier(const Multiplier& mult, const ComplexField& f) {
  require_same_grid(mult.grid(), f.grid(), "apply_multiplier");
  auto& fft = FourierTransform::for_size(f.grid().n());
  ComplexField out(f.grid());
  auto data = out.data();
  fft.forward(f.values(), data);
  const double inv = 1.0 / static_cast<double>(f.size());
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= mult[i] * inv;
  fft.inverse(data, data);
  out.require_finite("apply_multiplier");
  return out;
}

double quadratic_form(const Multiplier& mult, const ComplexField& f) {
  require_same_grid(mult.grid(), f.grid(), "quadratic_form");
  auto& fft = FourierTransform::for_size(f.grid().n());
  std::vector<cplx> hat(f.size());
  fft.forward(f.values(), hat);
  double sum = 0.0;
  for (std::size_t i = 0; i < hat.size(); ++i) sum += mult[i] * std::norm(hat[i]);
  return f.grid().weight() * sum / static_cast<double>(f.size());
}

double riesz_constant(double theta) {
  require_theta(theta, "riesz_constant");
  return std::pow(2.0, 3.0 - theta) * std::pow(kPi, 1.5) * std::tgamma((3.0 - theta) / 2.0) /
         std::tgamma(theta / 2.0);
}

double lattice_offset_constant(double theta) {
  require_theta(theta, "lattice_offset_constant");
  static std::mutex mu;
  static std::map<double, double> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(theta);
  if (it != cache.end()) return it->second;
  const double value = compute_lattice_offset(theta);
  cache.emplace(theta, value);
  return value;
}

double riesz_zero_mode(double theta, double length, ZeroModeRule rule) {
  require_theta(theta, "riesz_zero_mode");
  switch (rule) {
    case ZeroModeRule::truncated_mean:
      return 4.0 * kPi * std::pow(length / 2.0, 3.0 - theta) / (3.0 - theta);
    case ZeroModeRule::lattice_matched:
      return lattice_offset_constant(theta) * std::pow(length, 3.0 - theta);
  }
  return 0.0;
}

RieszKernel riesz_kernel(const Grid& grid, double theta, ZeroModeRule rule) {
  require_theta(theta, "riesz_kernel");
  const double c = riesz_constant(theta);
  const double p = 3.0 - theta;
  auto mult = radial_multiplier(
      grid, [c, p](double k) { return c / std::pow(k, p); },
      riesz_zero_mode(theta, grid.length(), rule));
  return {theta, rule, std::move(mult)};
}

RealField convolve_riesz(const RieszKernel& kernel, const RealField& rho) {
  require_same_grid(kernel.multiplier.grid(), rho.grid(), "convolve_riesz");
  const Grid& grid = rho.grid();
  auto& fft = FourierTransform::for_size(grid.n());
  std::vector<cplx> work(grid.size());
  for (std::size_t i = 0; i < work.size(); ++i) work[i] = rho[i];
  fft.forward(work, work);
  const double scale = g_fast_path_scale.load(std::memory_order_relaxed) /
                       static_cast<double>(grid.size());
  for (std::size_t i = 0; i < work.size(); ++i) work[i] *= kernel.multiplier[i] * scale;
  fft.inverse(work, work);
  RealField out(grid);
  for (std::size_t i = 0; i < work.size(); ++i) out[i] = work[i].real();
  return out;
}

RealField convolve_riesz(const RieszKernel& kernel, const ComplexField& rho) {
  double max_re = 0.0;
  double max_im = 0.0;
  for (const auto& v : rho.values()) {
    max_re = std::max(max_re, std::abs(v.real()));
    max_im = std::max(max_im, std::abs(v.imag()));
  }
  if (max_im > 1e-12 * max_re) {
    throw DomainError("convolve_riesz: density must be real-valued");
  }
  RealField real(rho.grid());
  for (std::size_t i = 0; i < rho.size(); ++i) real[i] = rho[i].real();
  return convolve_riesz(kernel, real);
}

RealField tabulate_kernel(const RieszKernel& kernel) {
  const Grid& grid = kernel.multiplier.grid();
  const int n = grid.n();
  if (n > kOracleMaxN) {
    throw DomainError("tabulate_kernel: direct summation limited to n <= " +
                      std::to_string(kOracleMaxN));
  }
  // phase[q][d] = exp(2 pi i q d / n)
  std::vector<cplx> phase(static_cast<std::size_t>(n) * n);
  for (int q = 0; q < n; ++q)
    for (int d = 0; d < n; ++d)
      phase[q * n + d] = std::polar(1.0, 2.0 * kPi * q * d / n);

  RealField table(grid);
  const double inv_volume = 1.0 / grid.volume();
  for (int dx = 0; dx < n; ++dx)
    for (int dy = 0; dy < n; ++dy)
      for (int dz = 0; dz < n; ++dz) {
        cplx sum{0.0, 0.0};
        std::size_t q = 0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) {
            const cplx ab = phase[a * n + dx] * phase[b * n + dy];
            for (int c = 0; c < n; ++c, ++q) sum += kernel.multiplier[q] * ab * phase[c * n + dz];
          }
        table[grid.index(dx, dy, dz)] = sum.real() * inv_volume;
      }
  return table;
}

RealField direct_convolution_oracle(double theta, const RealField& rho, ZeroModeRule rule) {
  const Grid& grid = rho.grid();
  const int n = grid.n();
  if (n > kOracleMaxN) {
    throw DomainError("direct_convolution_oracle: grid too large (n=" + std::to_string(n) +
                      ", limit " + std::to_string(kOracleMaxN) + ")");
  }
  const RealField table = tabulate_kernel(riesz_kernel(grid, theta, rule));
  const double w = grid.weight();
  RealField out(grid);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double sum = 0.0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
              const int dx = (i - a + n) % n;
              const int dy = (j - b + n) % n;
              const int dz = (k - c + n) % n;
              sum += table[grid.index(dx, dy, dz)] * rho[grid.index(a, b, c)];
            }
        out[grid.index(i, j, k)] = w * sum;
      }
  return out;
}

namespace testing {

void set_fast_path_kernel_scale(double scale) noexcept {
  g_fast_path_scale.store(scale, std::memory_order_relaxed);
}

double fast_path_kernel_scale() noexcept {
  return g_fast_path_scale.load(std::memory_order_relaxed);
}

}  // namespace testing
}  // namespace bstar
