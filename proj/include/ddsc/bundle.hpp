#ifndef DDSC_BUNDLE_HPP_
#define DDSC_BUNDLE_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "ddsc/ctrlsets.hpp"
#include "ddsc/safety.hpp"
#include "ddsc/sim.hpp"
#include "ddsc/supervisor.hpp"
#include "ddsc/sysid.hpp"

namespace ddsc
{

/// Everything simulate needs, produced offline by synthesize.
struct SynthesisBundle
{
    MatrixZonotope M;
    Zonotope W;
    HPolytope X;
    HPolytope U;
    HPolytope X_eta;
    std::vector<RoscFamily> families;
    IndexTable table;
    Matrix Kt;

    Matrix A_model() const;
    Matrix B_model() const;
    std::vector<Vector> seeds() const;
    SafetyModel safety_model() const;
};

/// Progress lines are written to log when it is non-null.
SynthesisBundle synthesize(const TrajectoryBank& bank, const ScenarioConfig& cfg, std::ostream* log = nullptr);

} // namespace ddsc

#endif
