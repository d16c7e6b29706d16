#include "ddsc/hpolytope.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "ddsc/lp.hpp"

namespace ddsc
{

HPolytope::HPolytope(Matrix H, Vector h) : H_(std::move(H)), h_(std::move(h))
{
    require_dim(h_.size(), H_.rows(), "HPolytope rhs");
    if (!H_.allFinite() || !h_.allFinite())
        throw std::invalid_argument("HPolytope: non-finite entries");
}

HPolytope HPolytope::box(const Vector& lower, const Vector& upper)
{
    const Eigen::Index n = lower.size();
    require_dim(upper.size(), n, "HPolytope::box");
    Matrix H(2 * n, n);
    H << Matrix::Identity(n, n), -Matrix::Identity(n, n);
    Vector h(2 * n);
    h << upper, -lower;
    return HPolytope(std::move(H), std::move(h));
}

HPolytope HPolytope::empty(Eigen::Index n)
{
    return HPolytope(Matrix::Zero(1, n), Vector::Constant(1, -1.0));
}

bool HPolytope::contains(const Vector& x, double tol) const
{
    require_dim(x.size(), dim(), "HPolytope::contains");
    return rows() == 0 || violation(x) <= tol;
}

double HPolytope::violation(const Vector& x) const
{
    if (rows() == 0)
        return -std::numeric_limits<double>::infinity();
    return (H_ * x - h_).maxCoeff();
}

double HPolytope::support(const Vector& dir) const
{
    const lp::Result r = lp::maximize(dir, H_, h_);
    if (r.status == lp::Status::Infeasible)
        throw EmptySetError("HPolytope::support on empty set");
    if (r.status == lp::Status::Unbounded)
        throw UnboundedError("HPolytope::support unbounded");
    return r.value;
}

Vector HPolytope::maximizer(const Vector& dir) const
{
    const lp::Result r = lp::maximize(dir, H_, h_);
    if (r.status == lp::Status::Infeasible)
        throw EmptySetError("HPolytope::maximizer on empty set");
    if (r.status == lp::Status::Unbounded)
        throw UnboundedError("HPolytope::maximizer unbounded");
    return r.x;
}

bool HPolytope::is_empty() const
{
    return lp::minimize(Vector::Zero(dim()), H_, h_).status == lp::Status::Infeasible;
}

bool HPolytope::is_bounded() const
{
    for (Eigen::Index i = 0; i < dim(); ++i)
    {
        for (double s : {1.0, -1.0})
        {
            Vector e = Vector::Zero(dim());
            e(i) = s;
            const auto r = lp::maximize(e, H_, h_);
            if (r.status == lp::Status::Unbounded)
                return false;
            if (r.status == lp::Status::Infeasible)
                return true;
        }
    }
    return true;
}

std::pair<Vector, Vector> HPolytope::bounding_box() const
{
    Vector lo(dim()), hi(dim());
    for (Eigen::Index i = 0; i < dim(); ++i)
    {
        Vector e = Vector::Zero(dim());
        e(i) = 1.0;
        hi(i) = support(e);
        lo(i) = -support(-e);
    }
    return {lo, hi};
}

std::optional<HPolytope::Ball> HPolytope::chebyshev_center() const
{
    const Eigen::Index n = dim();
    Matrix A(rows() + 1, n + 1);
    Vector b(rows() + 1);
    A.topLeftCorner(rows(), n) = H_;
    A.topRightCorner(rows(), 1) = H_.rowwise().norm();
    b.head(rows()) = h_;
    A.bottomRows(1).setZero();
    A(rows(), n) = -1.0; // r >= 0
    b(rows()) = 0.0;
    Vector c = Vector::Zero(n + 1);
    c(n) = 1.0;
    const auto r = lp::maximize(c, A, b);
    if (r.status == lp::Status::Infeasible)
        return std::nullopt;
    if (r.status == lp::Status::Unbounded)
        throw UnboundedError("chebyshev_center: unbounded polytope");
    return Ball{r.x.head(n), r.x(n)};
}

HPolytope HPolytope::intersect(const HPolytope& other) const
{
    require_dim(other.dim(), dim(), "HPolytope::intersect");
    Matrix H(rows() + other.rows(), dim());
    Vector h(rows() + other.rows());
    H << H_, other.H_;
    h << h_, other.h_;
    return HPolytope(std::move(H), std::move(h));
}

HPolytope HPolytope::normalized() const
{
    std::vector<Vector> normals;
    std::vector<double> rhs;
    for (Eigen::Index r = 0; r < rows(); ++r)
    {
        const double nrm = H_.row(r).norm();
        if (nrm <= 1e-14)
        {
            if (h_(r) < -kFeasTol)
                return empty(dim());
            continue;
        }
        Vector a = H_.row(r).transpose() / nrm;
        const double b = h_(r) / nrm;
        bool dup = false;
        for (std::size_t k = 0; k < normals.size(); ++k)
        {
            if ((normals[k] - a).lpNorm<Eigen::Infinity>() <= 1e-12)
            {
                rhs[k] = std::min(rhs[k], b);
                dup = true;
                break;
            }
        }
        if (!dup)
        {
            normals.push_back(std::move(a));
            rhs.push_back(b);
        }
    }
    Matrix H(static_cast<Eigen::Index>(normals.size()), dim());
    Vector h(static_cast<Eigen::Index>(normals.size()));
    for (std::size_t k = 0; k < normals.size(); ++k)
    {
        H.row(static_cast<Eigen::Index>(k)) = normals[k].transpose();
        h(static_cast<Eigen::Index>(k)) = rhs[k];
    }
    return HPolytope(std::move(H), std::move(h));
}

HPolytope HPolytope::remove_redundant() const
{
    HPolytope p = normalized();
    if (p.rows() == 0)
        return p;
    if (p.is_empty())
        return empty(dim());

    std::vector<bool> keep(static_cast<std::size_t>(p.rows()), true);
    if (p.rows() > 4 * p.dim() && p.is_bounded())
    {
        // rows strictly slack over the bounding box need no LP
        const auto [lo, hi] = p.bounding_box();
        const Vector mid = 0.5 * (lo + hi);
        const Vector rad = 0.5 * (hi - lo);
        for (Eigen::Index r = 0; r < p.rows(); ++r)
        {
            const double s = p.H_.row(r).dot(mid) + p.H_.row(r).cwiseAbs().dot(rad);
            if (s < p.h_(r) - 1e-9 * (1.0 + std::abs(p.h_(r))))
                keep[static_cast<std::size_t>(r)] = false;
        }
    }
    for (Eigen::Index r = 0; r < p.rows(); ++r)
    {
        if (!keep[static_cast<std::size_t>(r)])
            continue;
        // maximize row r over the kept rows, with row r relaxed to stay bounded
        std::vector<Eigen::Index> idx;
        for (Eigen::Index k = 0; k < p.rows(); ++k)
            if (keep[static_cast<std::size_t>(k)])
                idx.push_back(k);
        Matrix A(static_cast<Eigen::Index>(idx.size()), dim());
        Vector b(static_cast<Eigen::Index>(idx.size()));
        for (std::size_t k = 0; k < idx.size(); ++k)
        {
            A.row(static_cast<Eigen::Index>(k)) = p.H_.row(idx[k]);
            b(static_cast<Eigen::Index>(k)) = p.h_(idx[k]) + (idx[k] == r ? 1.0 : 0.0);
        }
        const auto res = lp::maximize(p.H_.row(r).transpose(), A, b);
        if (res.status == lp::Status::Optimal && res.value <= p.h_(r) + kFeasTol)
            keep[static_cast<std::size_t>(r)] = false;
    }
    std::vector<Eigen::Index> idx;
    for (Eigen::Index k = 0; k < p.rows(); ++k)
        if (keep[static_cast<std::size_t>(k)])
            idx.push_back(k);
    Matrix H(static_cast<Eigen::Index>(idx.size()), dim());
    Vector h(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k)
    {
        H.row(static_cast<Eigen::Index>(k)) = p.H_.row(idx[k]);
        h(static_cast<Eigen::Index>(k)) = p.h_(idx[k]);
    }
    return HPolytope(std::move(H), std::move(h));
}

} // namespace ddsc
