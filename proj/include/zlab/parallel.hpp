#pragma once

#include <functional>

namespace zlab {

// Worker count: ZLAB_THREADS if set and positive, else the hardware count.
int worker_count();

// Runs body(i) for i in [0, n) over worker_count() threads, statically
// chunked. Callers write only to slot i, so results do not depend on the
// thread count. The exception of the lowest failing index is rethrown.
void parallel_for(int n, const std::function<void(int)>& body);

} // namespace zlab
