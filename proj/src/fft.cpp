#include "zlab/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace zlab::fft {

namespace {

// FFTW planning is not thread-safe; execution with new arrays is. Plans are
// built with FFTW_ESTIMATE so the chosen algorithm, and hence every rounding
// error, is identical from run to run.
class PlanRegistry {
public:
    fftw_plan get(const std::vector<int>& shape, int sign)
    {
        std::lock_guard lock(mutex_);
        auto key = std::make_pair(shape, sign);
        if (auto it = plans_.find(key); it != plans_.end())
            return it->second;

        long total = 1;
        for (int n : shape)
            total *= n;
        auto* a = fftw_alloc_complex(total);
        auto* b = fftw_alloc_complex(total);
        fftw_plan p = fftw_plan_dft(static_cast<int>(shape.size()), shape.data(), a, b, sign,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(a);
        fftw_free(b);
        if (!p)
            throw std::runtime_error("FFTW failed to create a plan");
        plans_.emplace(key, p);
        return p;
    }

    ~PlanRegistry()
    {
        for (auto& [key, plan] : plans_)
            fftw_destroy_plan(plan);
    }

private:
    std::mutex mutex_;
    std::map<std::pair<std::vector<int>, int>, fftw_plan> plans_;
};

PlanRegistry& registry()
{
    static PlanRegistry r;
    return r;
}

} // namespace

void execute(std::span<const int> shape, int sign, const complex* in, complex* out)
{
    if (in == out)
        throw std::invalid_argument("fft::execute requires distinct input and output");
    std::vector<int> s(shape.begin(), shape.end());
    fftw_plan p = registry().get(s, sign);
    // Out-of-place complex DFTs preserve their input.
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<complex*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

Refined refine(const Field& field, std::span<const int> factor)
{
    const Grid& g = field.grid();
    if (static_cast<int>(factor.size()) != g.dim())
        throw std::invalid_argument("refine: one factor per axis required");
    Field f = to_fourier(field);

    const int n = g.points();
    Refined r;
    Eigen::Index total = 1;
    for (int a = 0; a < g.dim(); ++a) {
        if (factor[a] < 1)
            throw std::invalid_argument("refine: factors must be positive");
        r.shape.push_back(n * factor[a]);
        total *= r.shape.back();
    }

    // Place coefficient k at k mod N_fine. The Nyquist column is split
    // evenly between +N/2 and -N/2 so real fields stay real.
    Eigen::ArrayXcd padded = Eigen::ArrayXcd::Zero(total);
    std::array<Eigen::Index, 3> fine_stride{1, 1, 1};
    for (int a = g.dim() - 2; a >= 0; --a)
        fine_stride[a] = fine_stride[a + 1] * r.shape[a + 1];

    const auto& v = f.values();
    for (Eigen::Index j = 0; j < g.size(); ++j) {
        if (v[j] == complex(0.0))
            continue;
        int nyquist_axes = 0;
        std::array<Eigen::Index, 3> lo{}, hi{};
        for (int a = 0; a < g.dim(); ++a) {
            int k = g.lattice_index(g.coordinate(j, a));
            int nf = r.shape[a];
            lo[a] = hi[a] = ((k % nf) + nf) % nf;
            if (factor[a] > 1 && k == -n / 2) {
                hi[a] = n / 2;
                ++nyquist_axes;
            }
        }
        const double w = std::ldexp(1.0, -nyquist_axes);
        // Enumerate the 2^nyquist_axes images.
        for (int mask = 0; mask < (1 << g.dim()); ++mask) {
            Eigen::Index idx = 0;
            bool valid = true;
            for (int a = 0; a < g.dim(); ++a) {
                bool use_hi = (mask >> a) & 1;
                if (use_hi && hi[a] == lo[a]) {
                    valid = false;
                    break;
                }
                idx += (use_hi ? hi[a] : lo[a]) * fine_stride[a];
            }
            if (valid)
                padded[idx] += w * v[j];
        }
    }

    r.values.resize(total);
    execute(r.shape, FFTW_BACKWARD, padded.data(), r.values.data());
    r.values /= std::sqrt(static_cast<double>(g.size()));
    return r;
}

} // namespace zlab::fft
