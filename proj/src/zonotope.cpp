#include "ddsc/zonotope.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace ddsc
{

Zonotope::Zonotope(Vector center, Matrix generators) : c_(std::move(center)), G_(std::move(generators))
{
    if (G_.cols() == 0)
        G_.resize(c_.size(), 0);
    require_dim(G_.rows(), c_.size(), "Zonotope generators");
    if (!c_.allFinite() || !G_.allFinite())
        throw std::invalid_argument("Zonotope: non-finite entries");
}

Zonotope Zonotope::point(Vector center)
{
    const auto n = center.size();
    return Zonotope(std::move(center), Matrix(n, 0));
}

Zonotope Zonotope::box(const Vector& lower, const Vector& upper)
{
    require_dim(upper.size(), lower.size(), "Zonotope::box");
    if ((upper.array() < lower.array()).any())
        throw std::invalid_argument("Zonotope::box: lower > upper");
    return centered_box(0.5 * (lower + upper), 0.5 * (upper - lower));
}

Zonotope Zonotope::centered_box(const Vector& center, const Vector& radius)
{
    require_dim(radius.size(), center.size(), "Zonotope::centered_box");
    // zero-radius axes get no generator
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < radius.size(); ++i)
        if (radius(i) > 0.0)
            keep.push_back(i);
    Matrix G = Matrix::Zero(center.size(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k)
        G(keep[k], static_cast<Eigen::Index>(k)) = radius(keep[k]);
    return Zonotope(center, std::move(G));
}

Vector Zonotope::radius() const
{
    if (G_.cols() == 0)
        return Vector::Zero(dim());
    return G_.cwiseAbs().rowwise().sum();
}

double Zonotope::support(const Vector& dir) const
{
    require_dim(dir.size(), dim(), "Zonotope::support");
    double s = dir.dot(c_);
    if (G_.cols() > 0)
        s += (dir.transpose() * G_).cwiseAbs().sum();
    return s;
}

bool Zonotope::is_point(double tol) const
{
    return G_.cols() == 0 || G_.cwiseAbs().maxCoeff() <= tol;
}

bool Zonotope::is_degenerate() const
{
    if (G_.cols() < dim())
        return true;
    Eigen::ColPivHouseholderQR<Matrix> qr(G_);
    qr.setThreshold(kRankTol);
    return qr.rank() < dim();
}

Zonotope Zonotope::compact(double tol) const
{
    std::vector<Vector> dirs;
    const double scale = G_.cols() > 0 ? std::max(1.0, G_.cwiseAbs().maxCoeff()) : 1.0;
    for (Eigen::Index k = 0; k < G_.cols(); ++k)
    {
        Vector g = G_.col(k);
        const double nrm = g.norm();
        if (nrm <= tol * scale)
            continue;
        // canonical sign: first significant entry positive
        Eigen::Index lead = 0;
        g.cwiseAbs().maxCoeff(&lead);
        if (g(lead) < 0)
            g = -g;
        bool merged = false;
        for (auto& d : dirs)
        {
            const double dn = d.norm();
            if ((d / dn - g / nrm).lpNorm<Eigen::Infinity>() <= 1e-12)
            {
                d += g;
                merged = true;
                break;
            }
        }
        if (!merged)
            dirs.push_back(g);
    }
    Matrix G(dim(), static_cast<Eigen::Index>(dirs.size()));
    for (std::size_t k = 0; k < dirs.size(); ++k)
        G.col(static_cast<Eigen::Index>(k)) = dirs[k];
    return Zonotope(c_, std::move(G));
}

Zonotope Zonotope::reduce(Eigen::Index max_generators) const
{
    const Eigen::Index n = dim();
    if (G_.cols() <= max_generators)
        return *this;
    if (max_generators < n)
        throw std::invalid_argument("Zonotope::reduce: budget below dimension");

    const Eigen::Index keep = max_generators - n;
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(G_.cols()));
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [this](Eigen::Index a, Eigen::Index b) {
        return G_.col(a).norm() > G_.col(b).norm();
    });

    Matrix G = Matrix::Zero(n, max_generators);
    Vector box = Vector::Zero(n);
    for (Eigen::Index k = 0; k < G_.cols(); ++k)
    {
        const Eigen::Index col = idx[static_cast<std::size_t>(k)];
        if (k < keep)
            G.col(k) = G_.col(col);
        else
            box += G_.col(col).cwiseAbs();
    }
    for (Eigen::Index i = 0; i < n; ++i)
        G(i, keep + i) = box(i);
    return Zonotope(c_, std::move(G));
}

} // namespace ddsc
