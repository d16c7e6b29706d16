#ifndef DDSC_LP_HPP_
#define DDSC_LP_HPP_

#include "ddsc/types.hpp"

namespace ddsc::lp
{

enum class Status
{
    Optimal,
    Infeasible,
    Unbounded
};

const char* to_string(Status s);

struct Result
{
    Status status = Status::Infeasible;
    Vector x;          ///< primal solution (valid when Optimal)
    double value = 0;  ///< objective at x
    Vector duals;      ///< one multiplier per equality row (bounded form only)
    double infeasibility = 0; ///< phase-1 residual; meaningful for every status
};

/**
 * Bounded-variable primal simplex.
 *
 * Solves  min c'x  s.t.  A x = b,  lo <= x <= hi.
 * Every variable needs at least one finite bound. Pivoting uses Dantzig's rule
 * and switches to Bland's rule after a run of degenerate pivots, which rules
 * out cycling. Feasibility is declared when the phase-1 residual (l1 norm of
 * A x - b) does not exceed feas_tol.
 */
Result solve_bounded(const Matrix& A, const Vector& b, const Vector& c, const Vector& lo,
                     const Vector& hi, double feas_tol = kFeasTol);

/**
 * min c'x  s.t.  H x <= h,  x free.
 *
 * Solved through its dual in standard form, which keeps the tableau at
 * dim(x) rows no matter how many inequalities there are. The primal point is
 * read back from the simplex multipliers.
 */
Result minimize(const Vector& c, const Matrix& H, const Vector& h);

/// Convenience: max c'x over {H x <= h}.
Result maximize(const Vector& c, const Matrix& H, const Vector& h);

} // namespace ddsc::lp

#endif
