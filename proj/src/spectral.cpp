#include "nlse/spectral.hpp"

#include <fftw3.h>

#include <mutex>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "nlse/error.hpp"

namespace nlse {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }
fftw_complex* as_fftw(const std::complex<double>* p) {
  return reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(p));
}

}  // namespace

FourierTransform::FourierTransform(std::size_t n) : n_(n) {
  if (n == 0) {
    throw DomainError("FourierTransform: length must be positive");
  }
  std::lock_guard lock(planner_mutex());
  std::vector<std::complex<double>> a(n), b(n);
  const int len = static_cast<int>(n);
  constexpr unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  forward_plan_ = fftw_plan_dft_1d(len, as_fftw(a.data()), as_fftw(b.data()), FFTW_FORWARD, flags);
  inverse_plan_ = fftw_plan_dft_1d(len, as_fftw(a.data()), as_fftw(b.data()), FFTW_BACKWARD, flags);
  if (!forward_plan_ || !inverse_plan_) {
    release();
    throw std::runtime_error("FFTW plan creation failed");
  }
}

FourierTransform::~FourierTransform() {
  if (forward_plan_ || inverse_plan_) {
    std::lock_guard lock(planner_mutex());
    release();
  }
}

FourierTransform::FourierTransform(FourierTransform&& other) noexcept
    : n_(other.n_),
      forward_plan_(std::exchange(other.forward_plan_, nullptr)),
      inverse_plan_(std::exchange(other.inverse_plan_, nullptr)) {}

FourierTransform& FourierTransform::operator=(FourierTransform&& other) noexcept {
  if (this != &other) {
    {
      std::lock_guard lock(planner_mutex());
      release();
    }
    n_ = other.n_;
    forward_plan_ = std::exchange(other.forward_plan_, nullptr);
    inverse_plan_ = std::exchange(other.inverse_plan_, nullptr);
  }
  return *this;
}

void FourierTransform::release() noexcept {
  if (forward_plan_) {
    fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    forward_plan_ = nullptr;
  }
  if (inverse_plan_) {
    fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
    inverse_plan_ = nullptr;
  }
}

void FourierTransform::forward(std::span<const std::complex<double>> in,
                               std::span<std::complex<double>> out) const {
  if (in.size() != n_ || out.size() != n_ || in.data() == out.data()) {
    throw std::invalid_argument("FourierTransform::forward: size mismatch or aliasing buffers");
  }
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), as_fftw(in.data()), as_fftw(out.data()));
}

void FourierTransform::inverse(std::span<const std::complex<double>> in,
                               std::span<std::complex<double>> out) const {
  if (in.size() != n_ || out.size() != n_ || in.data() == out.data()) {
    throw std::invalid_argument("FourierTransform::inverse: size mismatch or aliasing buffers");
  }
  fftw_execute_dft(static_cast<fftw_plan>(inverse_plan_), as_fftw(in.data()), as_fftw(out.data()));
  const double scale = 1.0 / static_cast<double>(n_);
  for (auto& v : out) {
    v *= scale;
  }
}

std::vector<double> angular_wavenumbers(std::size_t n, double length) {
  std::vector<double> q(n);
  const double base = 2.0 * std::numbers::pi / length;
  const auto half = static_cast<std::ptrdiff_t>(n / 2);
  for (std::size_t j = 0; j < n; ++j) {
    auto index = static_cast<std::ptrdiff_t>(j);
    if (index >= half && n > 1) {
      index -= static_cast<std::ptrdiff_t>(n);
    }
    q[j] = base * static_cast<double>(index);
  }
  return q;
}

}  // namespace nlse
