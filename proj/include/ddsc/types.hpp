#ifndef DDSC_TYPES_HPP_
#define DDSC_TYPES_HPP_

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ddsc
{

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Tolerance on every membership and subset test.
inline constexpr double kFeasTol = 1e-9;
/// Relative singular-value threshold for rank and pseudoinverse decisions.
inline constexpr double kRankTol = 1e-10;

class DimensionError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when an operation needs a nonempty set and receives an empty one.
class EmptySetError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

class UnboundedError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

inline void require_dim(Eigen::Index got, Eigen::Index want, const char* what)
{
    if (got != want)
        throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(want)
                             + ", got " + std::to_string(got));
}

} // namespace ddsc

#endif
