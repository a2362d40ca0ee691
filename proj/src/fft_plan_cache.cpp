#include "fft_plan_cache.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace aggdiff::detail {

namespace {

// Plans are created once per size under a lock (the FFTW planner is not
// thread-safe) and then executed through the new-array interface, which is.
struct PlanPair {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;

    explicit PlanPair(std::size_t n) {
        const int len = static_cast<int>(n);
        std::vector<double> real(n);
        fftw_complex* spec = fftw_alloc_complex(n / 2 + 1);
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        forward = fftw_plan_dft_r2c_1d(len, real.data(), spec, flags);
        backward = fftw_plan_dft_c2r_1d(len, spec, real.data(), flags);
        fftw_free(spec);
    }
    ~PlanPair() {
        fftw_destroy_plan(forward);
        fftw_destroy_plan(backward);
    }
    PlanPair(const PlanPair&) = delete;
    PlanPair& operator=(const PlanPair&) = delete;
};

const PlanPair& plans_for(std::size_t n) {
    static std::mutex mutex;
    static std::map<std::size_t, std::unique_ptr<PlanPair>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<PlanPair>(n);
    return *slot;
}

}  // namespace

void fft_forward(std::span<const double> in, std::span<std::complex<double>> out) {
    const auto& plans = plans_for(in.size());
    // r2c preserves its input; the cast only satisfies the C signature.
    fftw_execute_dft_r2c(plans.forward, const_cast<double*>(in.data()),
                         reinterpret_cast<fftw_complex*>(out.data()));
}

void fft_backward(std::span<const std::complex<double>> in, std::span<double> out) {
    const auto& plans = plans_for(out.size());
    std::vector<std::complex<double>> scratch(in.begin(), in.end());
    fftw_execute_dft_c2r(plans.backward, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
}

}  // namespace aggdiff::detail
