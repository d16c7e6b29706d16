#ifndef DDSC_REACH_HPP_
#define DDSC_REACH_HPP_

#include <vector>

#include "ddsc/matrix_zonotope.hpp"
#include "ddsc/zonotope.hpp"

namespace ddsc
{

/// M [x; u] + W, exact for a point state and input.
Zonotope rors_point(const MatrixZonotope& M, const Vector& x, const Vector& u, const Zonotope& W);

/**
 * Outer one-step reachable set from a state set X under an input set U.
 * Center and first-order terms are exact; the generator-times-generator cross
 * terms are bounded by an interval box. The result is reduced to max_order
 * generators (0 keeps everything).
 */
Zonotope rors_set(const MatrixZonotope& M, const Zonotope& X, const Zonotope& U, const Zonotope& W,
                  std::size_t max_order = 30);
Zonotope rors_set(const MatrixZonotope& M, const Zonotope& X, const Vector& u, const Zonotope& W,
                  std::size_t max_order = 30);

/// Forward tube anchored at a trusted measurement. Inputs are zonotopes so that
/// an unknown applied input can be replayed as the whole input set.
struct ReachTube
{
    int anchor_time = 0;
    std::vector<Zonotope> sets;
    std::vector<Zonotope> inputs;

    const Zonotope& back() const { return sets.back(); }
    std::size_t steps() const { return inputs.size(); }
};

constexpr std::size_t kTubeHorizonCap = 200;

ReachTube reset_tube(const Vector& x_trusted, int k);
ReachTube extend_tube(ReachTube tube, const MatrixZonotope& M, const Zonotope& u, const Zonotope& W,
                      std::size_t max_order = 30);
ReachTube extend_tube(ReachTube tube, const MatrixZonotope& M, const Vector& u, const Zonotope& W,
                      std::size_t max_order = 30);

} // namespace ddsc

#endif
