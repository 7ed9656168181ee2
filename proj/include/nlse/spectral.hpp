#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace nlse {

/// Out-of-place complex DFT of fixed length backed by FFTW. forward() is
/// unnormalized; inverse() divides by n. Executing a plan is thread-safe;
/// construction serializes plan creation internally.
class FourierTransform {
 public:
  explicit FourierTransform(std::size_t n);
  ~FourierTransform();
  FourierTransform(const FourierTransform&) = delete;
  FourierTransform& operator=(const FourierTransform&) = delete;
  FourierTransform(FourierTransform&& other) noexcept;
  FourierTransform& operator=(FourierTransform&& other) noexcept;

  std::size_t size() const noexcept { return n_; }
  void forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;
  void inverse(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;

 private:
  void release() noexcept;

  std::size_t n_ = 0;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

/// Angular wavenumbers 2 pi j / L in FFT order (0, 1, ..., n/2 - 1, -n/2, ..., -1).
std::vector<double> angular_wavenumbers(std::size_t n, double length);

}  // namespace nlse
