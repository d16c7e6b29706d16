#ifndef DDSC_TEST_HELPERS_HPP_
#define DDSC_TEST_HELPERS_HPP_

#include <initializer_list>
#include <random>

#include "ddsc/types.hpp"

namespace testutil
{

inline ddsc::Vector v(std::initializer_list<double> xs)
{
    ddsc::Vector out(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs)
        out(i++) = x;
    return out;
}

inline ddsc::Matrix m(std::initializer_list<std::initializer_list<double>> rows)
{
    const auto r = static_cast<Eigen::Index>(rows.size());
    const auto c = static_cast<Eigen::Index>(rows.begin()->size());
    ddsc::Matrix out(r, c);
    Eigen::Index i = 0;
    for (const auto& row : rows)
    {
        Eigen::Index j = 0;
        for (double x : row)
            out(i, j++) = x;
        ++i;
    }
    return out;
}

inline ddsc::Matrix cstr_A()
{
    return m({{0.9719, 0.0013}, {0.0340, 0.8628}});
}

inline ddsc::Matrix cstr_B()
{
    return m({{-0.0839, 0.0232}, {0.0761, 0.4144}});
}

inline ddsc::Vector uniform_in(std::mt19937_64& rng, const ddsc::Vector& lo, const ddsc::Vector& hi)
{
    std::uniform_real_distribution<double> U(0.0, 1.0);
    ddsc::Vector x(lo.size());
    for (Eigen::Index i = 0; i < lo.size(); ++i)
        x(i) = lo(i) + (hi(i) - lo(i)) * U(rng);
    return x;
}

} // namespace testutil

#endif
