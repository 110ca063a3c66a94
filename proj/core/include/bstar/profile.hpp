#pragma once

#include <array>

#include "bstar/grid.hpp"

namespace bstar {

/// lambda^(3/2) f(lambda x), realized exactly by keeping the samples and
/// shrinking the box to L / lambda. Preserves the L2 mass.
ComplexField dilate(const ComplexField& f, double lambda);

/// How samples outside the source box are obtained.
enum class Extension { periodic, zero };

/// Trilinear interpolation of f at the sample points of `target`. With
/// Extension::zero the source is treated as vanishing outside its box.
ComplexField resample_trilinear(const ComplexField& f, const Grid& target,
                                Extension ext = Extension::periodic);

/// Density center in fractional index units, per axis, from the circular
/// mean of the marginal densities.
std::array<double, 3> center_of_mass_index(const ComplexField& f);

/// out(i) = f(i - shift), periodic.
ComplexField lattice_shift(const ComplexField& f, const std::array<int, 3>& shift);

/// Lattice shift that moves the density center to the box center.
ComplexField recenter(const ComplexField& f);

/// Global phase rotation making sum |f| f real and positive.
ComplexField remove_global_phase(const ComplexField& f);

/// Root-mean-square radius of |f|^2 about its (periodic) center.
double rms_width(const ComplexField& f);

/// Throws ResolutionError when the RMS width is below 4h or above L/4.
void require_resolved(const ComplexField& f, const char* where);

}  // namespace bstar
