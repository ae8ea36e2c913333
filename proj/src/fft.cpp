#include "rofsim/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace rofsim {
namespace fft {

namespace {

// FFTW plan creation is not thread safe; execution with the new-array
// interface is. Plans are cached per (size, direction) and created with
// FFTW_UNALIGNED so they can execute on any caller buffer.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(std::size_t n, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto key = std::make_pair(n, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;

        std::vector<std::complex<double>> dummy(n);
        auto* ptr = reinterpret_cast<fftw_complex*>(dummy.data());
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), ptr, ptr, sign,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!plan) throw std::runtime_error("fft: planner failed for size " + std::to_string(n));
        plans_.emplace(key, plan);
        return plan;
    }

private:
    PlanCache() = default;
    std::mutex mutex_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

void execute(cvec& data, int sign) {
    if (data.empty()) throw std::invalid_argument("fft: empty input");
    fftw_plan plan = PlanCache::instance().get(data.size(), sign);
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, ptr, ptr);
}

} // namespace

void forward(cvec& data) { execute(data, FFTW_FORWARD); }

void inverse(cvec& data) {
    execute(data, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(data.size());
    for (auto& x : data) x *= scale;
}

cvec forward_copy(const cvec& data) {
    cvec out = data;
    forward(out);
    return out;
}

cvec inverse_copy(const cvec& data) {
    cvec out = data;
    inverse(out);
    return out;
}

double bin_frequency(std::size_t k, std::size_t n, double sample_rate) {
    const double df = sample_rate / static_cast<double>(n);
    if (k < (n + 1) / 2) return static_cast<double>(k) * df;
    return (static_cast<double>(k) - static_cast<double>(n)) * df;
}

} // namespace fft
} // namespace rofsim
