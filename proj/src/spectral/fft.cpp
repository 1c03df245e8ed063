#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace sobolab::spectral::detail {

namespace {

using PlanKey = std::tuple<int, std::size_t, std::size_t, std::size_t, int, int>;

// FFTW planning is not thread-safe; execution through fftw_execute_dft with a
// shared plan is. Plans are built once per shape and kept for the process.
class PlanCache {
public:
    fftw_plan get(const GridSpec& grid, int sign) {
        const PlanKey key{grid.dimension, grid.points[0], grid.points[1], grid.points[2],
                          grid.components, sign};
        std::lock_guard lock(mutex_);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;

        int dims[3];
        for (int a = 0; a < grid.dimension; ++a) dims[a] = static_cast<int>(grid.points[a]);
        const int howmany = grid.components;
        const auto total = grid.value_count();
        auto* in = fftw_alloc_complex(total);
        auto* out = fftw_alloc_complex(total);
        fftw_plan plan = fftw_plan_many_dft(grid.dimension, dims, howmany, in, nullptr, howmany, 1,
                                            out, nullptr, howmany, 1, sign,
                                            FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(in);
        fftw_free(out);
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<PlanKey, fftw_plan> plans_;
};

PlanCache& plan_cache() {
    static PlanCache cache;
    return cache;
}

// (-1)^{k_0 + k_1 + k_2} for flat point index p; shifts the origin to the box centre.
double centre_phase(const GridSpec& grid, std::size_t p) {
    const auto idx = grid.unflatten(p);
    return ((idx[0] + idx[1] + idx[2]) & 1U) ? -1.0 : 1.0;
}

void execute(const GridSpec& grid, int sign, std::span<const Complex> in, std::span<Complex> out) {
    fftw_plan plan = plan_cache().get(grid, sign);
    // fftw_execute_dft takes a non-const input even for out-of-place transforms.
    auto* src = reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data()));
    auto* dst = reinterpret_cast<fftw_complex*>(out.data());
    fftw_execute_dft(plan, src, dst);
}

}  // namespace

void forward_transform(const GridSpec& grid, std::span<const Complex> in, std::span<Complex> out) {
    execute(grid, FFTW_FORWARD, in, out);
    const double h = grid.cell_volume();
    const auto m = static_cast<std::size_t>(grid.components);
    for (std::size_t p = 0; p < grid.point_count(); ++p) {
        const double f = h * centre_phase(grid, p);
        for (std::size_t k = 0; k < m; ++k) out[p * m + k] *= f;
    }
}

void inverse_transform(const GridSpec& grid, std::span<const Complex> in, std::span<Complex> out) {
    const auto m = static_cast<std::size_t>(grid.components);
    std::vector<Complex> phased(in.begin(), in.end());
    for (std::size_t p = 0; p < grid.point_count(); ++p) {
        const double f = centre_phase(grid, p);
        for (std::size_t k = 0; k < m; ++k) phased[p * m + k] *= f;
    }
    execute(grid, FFTW_BACKWARD, phased, out);
    const double w = grid.frequency_weight();
    for (auto& z : out) z *= w;
}

}  // namespace sobolab::spectral::detail
