#ifndef DDSC_SAFETY_HPP_
#define DDSC_SAFETY_HPP_

#include <optional>
#include <string>
#include <vector>

#include "ddsc/ctrlsets.hpp"

namespace ddsc
{

enum class Verdict
{
    Safe,
    UnsafeInput,
    UnsafeReach
};

std::string to_string(Verdict v);

/// Everything the plant-side modules need, all read-only.
struct SafetyModel
{
    MatrixZonotope M;
    Zonotope W;
    HPolytope U;
    HPolytope X_eta;
    std::vector<RoscFamily> families;

    std::vector<Vector> seeds() const;
};

struct SafetyState
{
    int f = 1;
    std::optional<int> cell;
    std::optional<int> level;
    bool alarm = false;
};

/// Unsafe when u leaves U or the one-step reachable set leaves X_eta.
Verdict verify(const Vector& u, const Vector& x, const MatrixZonotope& M, const HPolytope& U,
               const HPolytope& X_eta, const Zonotope& W);

struct EcResult
{
    Vector u;
    SafetyState st;
};

/**
 * One emergency-controller step. The cell is latched while f = 0. Inside T0
 * the terminal law is applied and f returns to 1; otherwise u is the input in
 * the level's Xi slice closest to the terminal-law input. States outside every
 * level get the smallest-slack input and raise the alarm flag.
 */
EcResult ec_step(const Vector& x, SafetyState st, const SafetyModel& model);

/// Closest point of {u : A u <= b} to target; nullopt when the slice is empty.
std::optional<Vector> project_onto_polytope(const Matrix& A, const Vector& b, const Vector& target);

struct PlantSideResult
{
    Vector u_applied;
    Verdict verdict;
    SafetyState st;
    bool ec_active;
};

PlantSideResult plant_side_step(const Vector& u_recv, const Vector& x, const SafetyState& st,
                                const SafetyModel& model);

} // namespace ddsc

#endif
