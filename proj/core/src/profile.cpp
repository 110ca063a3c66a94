#include "bstar/profile.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "bstar/errors.hpp"

namespace bstar {
namespace {

int wrap(int i, int n) {
  const int r = i % n;
  return r < 0 ? r + n : r;
}

}  // namespace

ComplexField dilate(const ComplexField& f, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("dilate: lambda must be positive");
  }
  std::vector<cplx> values(f.values().begin(), f.values().end());
  const double amp = std::pow(lambda, 1.5);
  for (auto& v : values) v *= amp;
  return ComplexField(f.grid().dilated(lambda), std::move(values));
}

ComplexField resample_trilinear(const ComplexField& f, const Grid& target, Extension ext) {
  const Grid& src = f.grid();
  if (src == target) return f;
  const int ns = src.n();
  const double hs = src.spacing();
  const int nt = target.n();

  std::vector<int> i0(nt);
  std::vector<double> t(nt);
  for (int i = 0; i < nt; ++i) {
    const double u = target.coordinate(i) / hs + ns / 2;
    const double fl = std::floor(u);
    i0[i] = static_cast<int>(fl);
    t[i] = u - fl;
  }

  ComplexField out(target);
  const auto v = f.values();
  const bool zero = ext == Extension::zero;
  auto inside = [&](int i) { return !zero || (i >= 0 && i < ns); };
  for (int a = 0; a < nt; ++a)
    for (int b = 0; b < nt; ++b)
      for (int c = 0; c < nt; ++c) {
        cplx acc{0.0, 0.0};
        for (int da = 0; da < 2; ++da) {
          if (!inside(i0[a] + da)) continue;
          const double wa = da ? t[a] : 1.0 - t[a];
          const int ia = wrap(i0[a] + da, ns);
          for (int db = 0; db < 2; ++db) {
            if (!inside(i0[b] + db)) continue;
            const double wb = db ? t[b] : 1.0 - t[b];
            const int ib = wrap(i0[b] + db, ns);
            for (int dc = 0; dc < 2; ++dc) {
              if (!inside(i0[c] + dc)) continue;
              const double wc = dc ? t[c] : 1.0 - t[c];
              const int ic = wrap(i0[c] + dc, ns);
              acc += wa * wb * wc * v[src.index(ia, ib, ic)];
            }
          }
        }
        out[target.index(a, b, c)] = acc;
      }
  return out;
}

std::array<double, 3> center_of_mass_index(const ComplexField& f) {
  const Grid& g = f.grid();
  const int n = g.n();
  std::array<std::vector<double>, 3> marginal;
  for (auto& m : marginal) m.assign(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double r = std::norm(f[g.index(i, j, k)]);
        marginal[0][i] += r;
        marginal[1][j] += r;
        marginal[2][k] += r;
      }
  std::array<double, 3> com{};
  for (int axis = 0; axis < 3; ++axis) {
    cplx z{0.0, 0.0};
    for (int i = 0; i < n; ++i) {
      z += marginal[axis][i] * std::polar(1.0, 2.0 * std::numbers::pi * i / n);
    }
    double angle = std::arg(z);
    if (angle < 0) angle += 2.0 * std::numbers::pi;
    com[axis] = angle * n / (2.0 * std::numbers::pi);
  }
  return com;
}

ComplexField lattice_shift(const ComplexField& f, const std::array<int, 3>& shift) {
  const Grid& g = f.grid();
  const int n = g.n();
  ComplexField out(g);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        out[g.index(i, j, k)] =
            f[g.index(wrap(i - shift[0], n), wrap(j - shift[1], n), wrap(k - shift[2], n))];
      }
  return out;
}

ComplexField recenter(const ComplexField& f) {
  const auto com = center_of_mass_index(f);
  const int n = f.grid().n();
  std::array<int, 3> shift{};
  for (int a = 0; a < 3; ++a) shift[a] = static_cast<int>(std::lround(n / 2 - com[a]));
  return lattice_shift(f, shift);
}

ComplexField remove_global_phase(const ComplexField& f) {
  cplx z{0.0, 0.0};
  for (const auto& v : f.values()) z += std::abs(v) * v;
  if (std::abs(z) == 0.0) return f;
  ComplexField out = f;
  out *= std::conj(z) / std::abs(z);
  return out;
}

double rms_width(const ComplexField& f) {
  const Grid& g = f.grid();
  const int n = g.n();
  const auto com = center_of_mass_index(f);
  const double h = g.spacing();
  auto displacement = [n, h](int i, double c) {
    double d = i - c;
    d -= n * std::round(d / n);
    return d * h;
  };
  double total = 0.0;
  double second = 0.0;
  for (int i = 0; i < n; ++i) {
    const double dx = displacement(i, com[0]);
    for (int j = 0; j < n; ++j) {
      const double dy = displacement(j, com[1]);
      for (int k = 0; k < n; ++k) {
        const double dz = displacement(k, com[2]);
        const double r = std::norm(f[g.index(i, j, k)]);
        total += r;
        second += r * (dx * dx + dy * dy + dz * dz);
      }
    }
  }
  if (total == 0.0) throw DomainError("rms_width: zero field");
  return std::sqrt(second / total);
}

void require_resolved(const ComplexField& f, const char* where) {
  const double width = rms_width(f);
  const Grid& g = f.grid();
  if (width < 4.0 * g.spacing() || width > g.length() / 4.0) {
    throw ResolutionError(std::string(where) + ": profile RMS width " + std::to_string(width) +
                          " outside [4h, L/4] = [" + std::to_string(4.0 * g.spacing()) + ", " +
                          std::to_string(g.length() / 4.0) + "]");
  }
}

}  // namespace bstar
