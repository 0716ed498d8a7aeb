#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <new>
#include <vector>

namespace sqg {

/// 64-byte aligned allocator so every coefficient buffer lands in the same
/// FFTW alignment class as the buffers the plans were created with.
template <class T>
struct AlignedAllocator {
    using value_type = T;
    static constexpr std::size_t alignment = 64;

    AlignedAllocator() = default;
    template <class U>
    AlignedAllocator(const AlignedAllocator<U>&) {}

    T* allocate(std::size_t n) {
        return static_cast<T*>(::operator new(n * sizeof(T), std::align_val_t(alignment)));
    }
    void deallocate(T* p, std::size_t) noexcept {
        ::operator delete(p, std::align_val_t(alignment));
    }
    template <class U>
    bool operator==(const AlignedAllocator<U>&) const { return true; }
    template <class U>
    bool operator!=(const AlignedAllocator<U>&) const { return false; }
};

using complex_vector = std::vector<std::complex<double>, AlignedAllocator<std::complex<double>>>;

/// Cached out-of-place complex-to-complex 2D transforms for an N x N grid.
/// Plans are created once per grid size (FFTW_ESTIMATE, deterministic) and
/// shared; execution on distinct caller buffers is thread-safe.
class FftPlan {
  public:
    /// Unnormalized forward DFT, e^{-2 pi i k.x/N} convention.
    void forward(const std::complex<double>* in, std::complex<double>* out) const;
    /// Unnormalized inverse DFT, e^{+2 pi i k.x/N} convention.
    void backward(const std::complex<double>* in, std::complex<double>* out) const;

    int n() const { return n_; }

    static const FftPlan& get(int n);

  private:
    explicit FftPlan(int n);
    int n_;
    void* fwd_;  // fftw_plan, kept opaque here
    void* bwd_;
};

}  // namespace sqg
