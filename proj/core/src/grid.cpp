#include "bstar/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "bstar/errors.hpp"

namespace bstar {

Grid::Grid(int n, double length) : n_(n), length_(length) {
  if (n < 8 || (n & (n - 1)) != 0) {
    throw DomainError("grid: n must be a power of two >= 8, got " +
                      std::to_string(n));
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw DomainError("grid: box length must be positive and finite");
  }
}

double Grid::wavenumber(int q) const noexcept {
  const int shifted = q < n_ / 2 ? q : q - n_;
  return 2.0 * std::numbers::pi / length_ * shifted;
}

double Grid::max_wavenumber() const noexcept {
  return std::sqrt(3.0) * std::numbers::pi / spacing();
}

ComplexField::ComplexField(const Grid& grid)
    : grid_(grid), values_(grid.size(), cplx{0.0, 0.0}) {}

ComplexField::ComplexField(const Grid& grid, std::vector<cplx> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw ShapeError("field: expected " + std::to_string(grid_.size()) +
                     " samples, got " + std::to_string(values_.size()));
  }
  require_finite("field construction");
}

bool ComplexField::all_finite() const noexcept {
  for (const auto& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

void ComplexField::require_finite(const char* where) const {
  if (!all_finite()) {
    throw DomainError(std::string(where) + ": non-finite sample in field");
  }
}

ComplexField& ComplexField::operator+=(const ComplexField& other) {
  return add_scaled(1.0, other);
}

ComplexField& ComplexField::operator-=(const ComplexField& other) {
  return add_scaled(-1.0, other);
}

ComplexField& ComplexField::operator*=(cplx factor) noexcept {
  for (auto& v : values_) v *= factor;
  return *this;
}

ComplexField& ComplexField::add_scaled(cplx factor, const ComplexField& other) {
  require_same_grid(grid_, other.grid_, "add_scaled");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    values_[i] += factor * other.values_[i];
  }
  return *this;
}

ComplexField operator+(ComplexField a, const ComplexField& b) {
  a += b;
  return a;
}

ComplexField operator-(ComplexField a, const ComplexField& b) {
  a -= b;
  return a;
}

ComplexField operator*(cplx factor, ComplexField a) {
  a *= factor;
  return a;
}

RealField::RealField(const Grid& grid) : grid_(grid), values_(grid.size(), 0.0) {}

RealField::RealField(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw ShapeError("real field: expected " + std::to_string(grid_.size()) +
                     " samples, got " + std::to_string(values_.size()));
  }
}

ModelParams::ModelParams(double alpha, double beta, double mass_m,
                         double constraint_n)
    : alpha_(alpha), beta_(beta), mass_m_(mass_m), constraint_n_(constraint_n) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("params: alpha must lie in (0,1), got " +
                      std::to_string(alpha));
  }
  if (!std::isfinite(beta)) throw DomainError("params: beta must be finite");
  if (!(mass_m >= 0.0) || !std::isfinite(mass_m)) {
    throw DomainError("params: particle mass m must be >= 0");
  }
  if (!(constraint_n > 0.0) || !std::isfinite(constraint_n)) {
    throw DomainError("params: mass constraint N must be > 0");
  }
}

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
  if (!(a == b)) {
    throw ShapeError(std::string(where) + ": grid mismatch (n=" +
                     std::to_string(a.n()) + ", L=" + std::to_string(a.length()) +
                     " vs n=" + std::to_string(b.n()) +
                     ", L=" + std::to_string(b.length()) + ")");
  }
}

cplx inner(const ComplexField& f, const ComplexField& g) {
  require_same_grid(f.grid(), g.grid(), "inner");
  cplx sum{0.0, 0.0};
  const auto fv = f.values();
  const auto gv = g.values();
  for (std::size_t i = 0; i < fv.size(); ++i) sum += std::conj(fv[i]) * gv[i];
  return f.grid().weight() * sum;
}

double mass(const ComplexField& f) {
  double sum = 0.0;
  for (const auto& v : f.values()) sum += std::norm(v);
  return f.grid().weight() * sum;
}

ComplexField normalize(const ComplexField& f, double target_mass) {
  if (!(target_mass > 0.0)) {
    throw DomainError("normalize: target mass must be positive");
  }
  const double current = mass(f);
  if (!(current > 0.0)) throw DomainError("normalize: zero field");
  ComplexField out = f;
  out *= std::sqrt(target_mass / current);
  out.require_finite("normalize");
  return out;
}

RealField density(const ComplexField& f) {
  RealField rho(f.grid());
  const auto v = f.values();
  for (std::size_t i = 0; i < v.size(); ++i) rho[i] = std::norm(v[i]);
  return rho;
}

ComplexField to_complex(const RealField& f) {
  ComplexField out(f.grid());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i];
  return out;
}

}  // namespace bstar
