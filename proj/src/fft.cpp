#include "xgram/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <new>
#include <stdexcept>
#include <utility>

namespace xgram {

namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

RealDft::RealDft(std::size_t n) : n_(n) {
    if (n == 0) {
        throw std::invalid_argument("RealDft: length must be positive");
    }
    std::lock_guard lock(planner_mutex());
    real_ = static_cast<double*>(fftw_malloc(sizeof(double) * n));
    complex_ = reinterpret_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)));
    if (real_ == nullptr || complex_ == nullptr) {
        fftw_free(real_);
        fftw_free(complex_);
        throw std::bad_alloc();
    }
    const int len = static_cast<int>(n);
    auto* cplx = reinterpret_cast<fftw_complex*>(complex_);
    forward_plan_ = fftw_plan_dft_r2c_1d(len, real_, cplx, FFTW_ESTIMATE);
    inverse_plan_ = fftw_plan_dft_c2r_1d(len, cplx, real_, FFTW_ESTIMATE);
}

RealDft::~RealDft() { release(); }

RealDft::RealDft(RealDft&& other) noexcept
    : n_(std::exchange(other.n_, 0)),
      real_(std::exchange(other.real_, nullptr)),
      complex_(std::exchange(other.complex_, nullptr)),
      forward_plan_(std::exchange(other.forward_plan_, nullptr)),
      inverse_plan_(std::exchange(other.inverse_plan_, nullptr)) {}

RealDft& RealDft::operator=(RealDft&& other) noexcept {
    if (this != &other) {
        release();
        n_ = std::exchange(other.n_, 0);
        real_ = std::exchange(other.real_, nullptr);
        complex_ = std::exchange(other.complex_, nullptr);
        forward_plan_ = std::exchange(other.forward_plan_, nullptr);
        inverse_plan_ = std::exchange(other.inverse_plan_, nullptr);
    }
    return *this;
}

void RealDft::release() noexcept {
    if (real_ == nullptr && forward_plan_ == nullptr) {
        return;
    }
    std::lock_guard lock(planner_mutex());
    if (forward_plan_ != nullptr) {
        fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    }
    if (inverse_plan_ != nullptr) {
        fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
    }
    fftw_free(real_);
    fftw_free(complex_);
    real_ = nullptr;
    complex_ = nullptr;
    forward_plan_ = nullptr;
    inverse_plan_ = nullptr;
}

std::span<const std::complex<double>> RealDft::forward(std::span<const double> input) {
    if (input.size() != n_) {
        throw std::invalid_argument("RealDft::forward: length mismatch");
    }
    std::copy(input.begin(), input.end(), real_);
    fftw_execute(static_cast<fftw_plan>(forward_plan_));
    return {complex_, bins()};
}

std::span<const double> RealDft::inverse(std::span<const std::complex<double>> spectrum) {
    if (spectrum.size() != bins()) {
        throw std::invalid_argument("RealDft::inverse: bin count mismatch");
    }
    std::copy(spectrum.begin(), spectrum.end(), complex_);
    fftw_execute(static_cast<fftw_plan>(inverse_plan_));
    return {real_, n_};
}

}  // namespace xgram
