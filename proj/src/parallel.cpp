#include "zlab/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace zlab {

int worker_count()
{
    if (const char* env = std::getenv("ZLAB_THREADS")) {
        try {
            int n = std::stoi(env);
            if (n > 0)
                return n;
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(int n, const std::function<void(int)>& body)
{
    if (n <= 0)
        return;
    const int workers = std::min(worker_count(), n);
    std::vector<std::exception_ptr> errors(n);
    auto run = [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        run(0, n);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(run, n * w / workers, n * (w + 1) / workers);
        for (auto& t : pool)
            t.join();
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

} // namespace zlab
