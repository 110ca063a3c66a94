#include "bstar/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>

#include "bstar/errors.hpp"

namespace bstar {
namespace {

// The FFTW planner is not reentrant; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct FourierTransform::Plans {
  fftw_complex* buffer = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

FourierTransform& FourierTransform::for_size(int n) {
  thread_local std::map<int, std::unique_ptr<FourierTransform>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache.emplace(n, std::unique_ptr<FourierTransform>(new FourierTransform(n))).first;
  }
  return *it->second;
}

FourierTransform::FourierTransform(int n) : n_(n), plans_(std::make_unique<Plans>()) {
  const std::size_t total = static_cast<std::size_t>(n) * n * n;
  std::lock_guard lock(planner_mutex());
  plans_->buffer = fftw_alloc_complex(total);
  if (plans_->buffer == nullptr) throw Error("fft: allocation failed");
  plans_->fwd = fftw_plan_dft_3d(n, n, n, plans_->buffer, plans_->buffer, FFTW_FORWARD,
                                 FFTW_ESTIMATE);
  plans_->bwd = fftw_plan_dft_3d(n, n, n, plans_->buffer, plans_->buffer, FFTW_BACKWARD,
                                 FFTW_ESTIMATE);
  if (plans_->fwd == nullptr || plans_->bwd == nullptr) throw Error("fft: planning failed");
}

FourierTransform::~FourierTransform() {
  std::lock_guard lock(planner_mutex());
  if (plans_->fwd) fftw_destroy_plan(plans_->fwd);
  if (plans_->bwd) fftw_destroy_plan(plans_->bwd);
  if (plans_->buffer) fftw_free(plans_->buffer);
}

void FourierTransform::forward(std::span<const cplx> in, std::span<cplx> out) {
  run(true, in, out);
}

void FourierTransform::inverse(std::span<const cplx> in, std::span<cplx> out) {
  run(false, in, out);
}

void FourierTransform::run(bool forward, std::span<const cplx> in, std::span<cplx> out) {
  const std::size_t total = static_cast<std::size_t>(n_) * n_ * n_;
  if (in.size() != total || out.size() != total) {
    throw ShapeError("fft: buffer size does not match n^3");
  }
  auto* buf = reinterpret_cast<cplx*>(plans_->buffer);
  std::copy(in.begin(), in.end(), buf);
  fftw_execute(forward ? plans_->fwd : plans_->bwd);
  std::copy(buf, buf + total, out.begin());
}

}  // namespace bstar
