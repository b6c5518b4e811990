#pragma once

#include "mgoig/matching.hpp"

namespace mgoig {

struct LpMatchingSolution {
  Rat value;
  Matching matching;
};

// Exact rational simplex (Bland's rule) on the matching linear program.
// A route entirely separate from the residual-network search; also used as
// the solver's completeness fallback. `max_rows` guards the tableau size.
LpMatchingSolution lp_solve_matching(const MgNetwork& net, size_t max_rows = 6000);

// Independent optimum for solver tests, guarded to oracle-sized instances.
Rat lp_optimum_oracle(const MgNetwork& net, size_t max_edges = 8);

}  // namespace mgoig
