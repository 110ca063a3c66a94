#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace bstar {

using cplx = std::complex<double>;

/// Periodic cubic box [-L/2, L/2)^3 sampled with n points per axis.
///
/// Sample (i, j, k) sits at ((i - n/2) h, (j - n/2) h, (k - n/2) h), so the
/// box center is the sample with all indices equal to n/2. Frequency index
/// q in [0, n) maps to the lattice wavenumber (2 pi / L) * (q < n/2 ? q : q - n),
/// which covers (2 pi / L) * {-n/2, ..., n/2 - 1}.
class Grid {
 public:
  Grid(int n, double length);

  int n() const noexcept { return n_; }
  double length() const noexcept { return length_; }
  double spacing() const noexcept { return length_ / n_; }
  double weight() const noexcept {
    const double h = spacing();
    return h * h * h;
  }
  double volume() const noexcept { return length_ * length_ * length_; }
  std::size_t size() const noexcept {
    return static_cast<std::size_t>(n_) * n_ * n_;
  }

  std::size_t index(int i, int j, int k) const noexcept {
    return (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
  }
  double coordinate(int i) const noexcept { return (i - n_ / 2) * spacing(); }
  double wavenumber(int q) const noexcept;
  /// Largest |xi| on the lattice (the Nyquist corner).
  double max_wavenumber() const noexcept;

  /// Same sample count, box scaled by 1/factor. Sample values carried over
  /// unchanged then represent f(factor * x).
  Grid dilated(double factor) const { return Grid(n_, length_ / factor); }

  friend bool operator==(const Grid& a, const Grid& b) noexcept {
    return a.n_ == b.n_ && a.length_ == b.length_;
  }

 private:
  int n_;
  double length_;
};

/// Complex samples of a function on a Grid, row-major (i slowest).
class ComplexField {
 public:
  explicit ComplexField(const Grid& grid);
  ComplexField(const Grid& grid, std::vector<cplx> values);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const cplx> values() const noexcept { return values_; }
  /// Raw mutable access for kernels that build a field in place.
  std::span<cplx> data() noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

  const cplx& operator[](std::size_t i) const noexcept { return values_[i]; }
  cplx& operator[](std::size_t i) noexcept { return values_[i]; }

  bool all_finite() const noexcept;
  /// Throws DomainError if any sample is NaN or infinite.
  void require_finite(const char* where) const;

  ComplexField& operator+=(const ComplexField& other);
  ComplexField& operator-=(const ComplexField& other);
  ComplexField& operator*=(cplx factor) noexcept;
  /// this += factor * other
  ComplexField& add_scaled(cplx factor, const ComplexField& other);

 private:
  Grid grid_;
  std::vector<cplx> values_;
};

ComplexField operator+(ComplexField a, const ComplexField& b);
ComplexField operator-(ComplexField a, const ComplexField& b);
ComplexField operator*(cplx factor, ComplexField a);

/// Real samples (densities, potentials) on a Grid.
class RealField {
 public:
  explicit RealField(const Grid& grid);
  RealField(const Grid& grid, std::vector<double> values);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> data() noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  const double& operator[](std::size_t i) const noexcept { return values_[i]; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// Model constants: Riesz exponent alpha in (0,1), perturbation strength
/// beta, particle mass m >= 0 and the mass constraint N > 0.
class ModelParams {
 public:
  ModelParams(double alpha, double beta, double mass_m, double constraint_n);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double mass_m() const noexcept { return mass_m_; }
  double constraint_n() const noexcept { return constraint_n_; }

  ModelParams with_beta(double beta) const {
    return {alpha_, beta, mass_m_, constraint_n_};
  }
  ModelParams with_mass_m(double m) const {
    return {alpha_, beta_, m, constraint_n_};
  }
  ModelParams with_constraint(double n) const {
    return {alpha_, beta_, mass_m_, n};
  }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  double alpha_;
  double beta_;
  double mass_m_;
  double constraint_n_;
};

void require_same_grid(const Grid& a, const Grid& b, const char* where);

/// L2 product w * sum conj(f_i) g_i.
cplx inner(const ComplexField& f, const ComplexField& g);
/// ||f||_2^2.
double mass(const ComplexField& f);
/// Returns sqrt(target / mass(f)) * f.
ComplexField normalize(const ComplexField& f, double target_mass);
/// |f|^2 sampled pointwise.
RealField density(const ComplexField& f);
/// Embeds a real field as a complex one with zero imaginary part.
ComplexField to_complex(const RealField& f);

}  // namespace bstar
