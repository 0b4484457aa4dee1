#pragma once

#include <cstddef>

namespace gregus {

/// Deterministic parallel "best element" reduction. Evaluates eval(i) for
/// i in [0, n) and keeps the candidate preferred by better(a, b) (a strict
/// total order). Because the order is total and eval is pure, the result
/// is independent of thread count and schedule.
template <class Candidate, class Eval, class Better>
Candidate reduce_best(std::ptrdiff_t n, Candidate init, Eval&& eval, Better&& better) {
    Candidate best = init;
#pragma omp parallel
    {
        Candidate local = init;
#pragma omp for schedule(static) nowait
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            Candidate c = eval(i);
            if (better(c, local)) local = c;
        }
#pragma omp critical(gregus_reduce_best)
        {
            if (better(local, best)) best = local;
        }
    }
    return best;
}

}  // namespace gregus
