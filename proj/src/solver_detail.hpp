#ifndef SMPX_SOLVER_DETAIL_HPP
#define SMPX_SOLVER_DETAIL_HPP

// Internal entry points; not installed and not part of the public surface.

#include "smpx/solver.hpp"

namespace smpx::detail {

// smp_run / rmsa_run with an explicit starting point instead of the prox
// center (unit tests only).
RunRecord smp_run_from(const Point& r0, const VIProblem& problem,
                       const StochasticOracle& oracle, const StepsizePolicy& policy,
                       RandomStream stream, const RunOptions& options);
RunRecord rmsa_run_from(const Point& r0, const VIProblem& problem,
                        const StochasticOracle& oracle, const StepsizePolicy& policy,
                        RandomStream stream, const RunOptions& options);

}  // namespace smpx::detail

#endif
