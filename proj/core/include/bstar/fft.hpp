#pragma once

#include <memory>
#include <span>

#include "bstar/grid.hpp"

namespace bstar {

/// Unnormalized 3-D DFT of size n^3 backed by FFTW.
///
/// Instances are per thread (see `for_size`); plans use FFTW_ESTIMATE so the
/// same input always produces the same bits.
class FourierTransform {
 public:
  static FourierTransform& for_size(int n);

  ~FourierTransform();
  FourierTransform(const FourierTransform&) = delete;
  FourierTransform& operator=(const FourierTransform&) = delete;

  int n() const noexcept { return n_; }

  /// out[q] = sum_j in[j] exp(-2 pi i q.j / n). `in` and `out` may alias.
  void forward(std::span<const cplx> in, std::span<cplx> out);
  /// out[j] = sum_q in[q] exp(+2 pi i q.j / n), no 1/n^3 factor.
  void inverse(std::span<const cplx> in, std::span<cplx> out);

 private:
  explicit FourierTransform(int n);
  void run(bool forward, std::span<const cplx> in, std::span<cplx> out);

  struct Plans;
  int n_;
  std::unique_ptr<Plans> plans_;
};

}  // namespace bstar
