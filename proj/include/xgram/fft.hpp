#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace xgram {

/**
 * Real-to-complex DFT of fixed length backed by FFTW.
 *
 * forward() computes X_k = sum_{t=0}^{n-1} x_t exp(-2 pi i k t / n) for
 * k = 0..n/2. inverse() maps n/2+1 half-spectrum bins back to the
 * unnormalized real sequence sum_k X_k exp(+2 pi i k t / n).
 *
 * Buffers are owned by the object and allocated with FFTW's aligned
 * allocator, so the chosen codelets (and therefore the bits of the output)
 * never depend on where the caller's data lives. One instance per thread.
 */
class RealDft {
public:
    explicit RealDft(std::size_t n);
    ~RealDft();

    RealDft(const RealDft&) = delete;
    RealDft& operator=(const RealDft&) = delete;
    RealDft(RealDft&& other) noexcept;
    RealDft& operator=(RealDft&& other) noexcept;

    std::size_t size() const { return n_; }
    std::size_t bins() const { return n_ / 2 + 1; }

    std::span<const std::complex<double>> forward(std::span<const double> input);
    std::span<const double> inverse(std::span<const std::complex<double>> spectrum);

private:
    void release() noexcept;

    std::size_t n_ = 0;
    double* real_ = nullptr;
    std::complex<double>* complex_ = nullptr;
    void* forward_plan_ = nullptr;
    void* inverse_plan_ = nullptr;
};

}  // namespace xgram
