#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "wedgeproj/core.hpp"

namespace wedgeproj {

/** A finitely generated wedge W = cone{g_1, ..., g_k}, stored as the
 * columns of an ambient_dim x k matrix.  This is the universal input
 * representation; wedges given by inequalities must be converted by the
 * caller.  The degenerate wedge {0} is represented by a single zero
 * generator.
 */
class GeneratedWedge {
  public:
    explicit GeneratedWedge(Matrix generators) : gens_(std::move(generators)) {
        if (gens_.rows() < 1) throw std::invalid_argument("wedge needs ambient dim >= 1");
        if (gens_.cols() < 1) throw std::invalid_argument("wedge needs at least one generator");
        if (!gens_.allFinite()) throw std::invalid_argument("wedge generators must be finite");
    }

    static GeneratedWedge zero(Index ambient_dim) {
        return GeneratedWedge(Matrix::Zero(ambient_dim, 1));
    }

    Index ambient_dim() const { return gens_.rows(); }
    Index count() const { return gens_.cols(); }
    const Matrix& generators() const { return gens_; }
    Vector generator(Index i) const { return gens_.col(i); }

    /// True when every generator is numerically zero, i.e. W = {0}.
    bool is_trivial(const Tolerance& tol = {}) const {
        for (Index j = 0; j < gens_.cols(); ++j)
            if (gens_.col(j).norm() > tol.eps_eq) return false;
        return true;
    }

  private:
    Matrix gens_;
};

/** Outcome of a conic membership test.  When member is true the
 * coefficients witness x = sum t_i g_i with t >= 0 up to the residual.
 */
struct MembershipCertificate {
    bool member = false;
    std::optional<Vector> coefficients;
    double residual_norm = 0.0;
};

/** The orthogonal split W = K (+) L: an orthonormal basis of the lineality
 * space L and generators of the pointed cone part K inside L-perp, all in
 * ambient coordinates.  cone_part_index[j] is the index of the original
 * generator that produced cone_part generator j.
 */
struct WedgeDecomposition {
    SubspaceBasis lineality;
    GeneratedWedge cone_part;
    std::vector<Index> cone_part_index;
};

namespace detail {

struct NnlsResult {
    Vector coefficients;
    double residual_norm = 0.0;
};

/** Nonnegative least squares min_{t>=0} |G t - x| by the active-set method
 * of Lawson and Hanson.  Rank-deficient passive sets are solved in the
 * minimum-norm sense.  Iteration caps make the routine robust to floating
 * point cycling; at desk scale they are never reached.
 */
inline NnlsResult nnls(const Matrix& G, const Vector& x) {
    const Index k = G.cols();
    Vector t = Vector::Zero(k);
    std::vector<char> passive(static_cast<size_t>(k), 0);
    Vector r = x;

    double colmax = 0.0;
    for (Index j = 0; j < k; ++j) colmax = std::max(colmax, G.col(j).norm());
    const double entry_tol = 1e-12 * std::max(colmax, 1.0) * (1.0 + x.norm());

    auto solve_passive = [&](std::vector<Index>& idx) -> Vector {
        idx.clear();
        for (Index j = 0; j < k; ++j)
            if (passive[static_cast<size_t>(j)]) idx.push_back(j);
        Matrix gp(G.rows(), static_cast<Index>(idx.size()));
        for (Index c = 0; c < gp.cols(); ++c) gp.col(c) = G.col(idx[static_cast<size_t>(c)]);
        Eigen::CompleteOrthogonalDecomposition<Matrix> cod(gp);
        return cod.solve(x);
    };

    std::vector<Index> idx;
    const int outer_cap = static_cast<int>(3 * k + 30);
    for (int outer = 0; outer < outer_cap; ++outer) {
        const Vector w = G.transpose() * r;
        Index enter = -1;
        double best = entry_tol;
        for (Index j = 0; j < k; ++j)
            if (!passive[static_cast<size_t>(j)] && w[j] > best) {
                best = w[j];
                enter = j;
            }
        if (enter < 0) break;
        passive[static_cast<size_t>(enter)] = 1;

        const int inner_cap = static_cast<int>(k + 10);
        for (int inner = 0; inner < inner_cap; ++inner) {
            const Vector z = solve_passive(idx);
            bool feasible = true;
            double alpha = std::numeric_limits<double>::infinity();
            for (size_t c = 0; c < idx.size(); ++c) {
                if (z[static_cast<Index>(c)] <= 0.0) {
                    feasible = false;
                    const double ti = t[idx[c]];
                    const double denom = ti - z[static_cast<Index>(c)];
                    if (denom > 0.0) alpha = std::min(alpha, ti / denom);
                }
            }
            if (feasible) {
                for (size_t c = 0; c < idx.size(); ++c) t[idx[c]] = z[static_cast<Index>(c)];
                break;
            }
            if (!std::isfinite(alpha)) alpha = 0.0;
            for (size_t c = 0; c < idx.size(); ++c)
                t[idx[c]] += alpha * (z[static_cast<Index>(c)] - t[idx[c]]);
            for (size_t c = 0; c < idx.size(); ++c) {
                if (t[idx[c]] <= 1e-14 * (1.0 + colmax)) {
                    t[idx[c]] = 0.0;
                    passive[static_cast<size_t>(idx[c])] = 0;
                }
            }
        }
        r = x - G * t;
    }
    return {t, (x - G * t).norm()};
}

}  // namespace detail

/** Conic membership x in W, decided by nonnegative least squares.  Member
 * when the relative residual is at or below eps_feas; the returned
 * coefficients witness the membership.
 */
inline MembershipCertificate contains(const GeneratedWedge& W, const Vector& x,
                                      const Tolerance& tol = {}) {
    if (x.size() != W.ambient_dim())
        throw DimensionMismatch("point dim " + std::to_string(x.size()) + " vs ambient " +
                                std::to_string(W.ambient_dim()));
    const auto fit = detail::nnls(W.generators(), x);
    MembershipCertificate cert;
    cert.residual_norm = fit.residual_norm;
    cert.member = fit.residual_norm <= tol.eps_feas * (1.0 + x.norm());
    if (cert.member) cert.coefficients = fit.coefficients;
    return cert;
}

/** Orthonormal basis of the lineality space L = W n (-W).
 *
 * L is the span of the generators whose negation lies back in W: any x in L
 * is a nonnegative combination of generators, and each generator carrying a
 * positive coefficient then has its negation in W as well.
 */
inline SubspaceBasis lineality_space(const GeneratedWedge& W, const Tolerance& tol = {}) {
    std::vector<Vector> reversible;
    for (Index j = 0; j < W.count(); ++j) {
        const Vector g = W.generator(j);
        if (g.norm() <= tol.eps_eq) continue;
        if (contains(W, Vector(-g), tol).member) reversible.push_back(g);
    }
    return orthonormal_basis(reversible, W.ambient_dim(), tol);
}

/** Splits W into lineality space and pointed cone part, W = K (+) L.
 *
 * The cone part is generated by the projections of the original generators
 * onto L-perp; each generator g = k + l with k in K, so the projected set
 * generates exactly K.  Projections of relative norm at most eps_eq are
 * dropped.  When nothing survives the cone part is the trivial wedge {0}.
 */
inline WedgeDecomposition decompose(const GeneratedWedge& W, const Tolerance& tol = {}) {
    SubspaceBasis lin = lineality_space(W, tol);
    std::vector<Vector> kept;
    std::vector<Index> kept_index;
    for (Index j = 0; j < W.count(); ++j) {
        const Vector g = W.generator(j);
        const Vector k = g - project_subspace(g, lin);
        if (k.norm() > tol.eps_eq * (1.0 + g.norm())) {
            kept.push_back(k);
            kept_index.push_back(j);
        }
    }
    Matrix cone(W.ambient_dim(), static_cast<Index>(kept.size()));
    for (Index c = 0; c < cone.cols(); ++c) cone.col(c) = kept[static_cast<size_t>(c)];
    GeneratedWedge cone_part =
        kept.empty() ? GeneratedWedge::zero(W.ambient_dim()) : GeneratedWedge(std::move(cone));
    if (kept.empty()) kept_index.assign(1, Index{-1});
    return WedgeDecomposition{std::move(lin), std::move(cone_part), std::move(kept_index)};
}

/// True when the generators span the whole ambient space (W - W = R^m).
inline bool is_generating(const GeneratedWedge& W, const Tolerance& tol = {}) {
    return orthonormal_basis(W.generators(), tol).dim() == W.ambient_dim();
}

namespace detail {

/// Rank of a set of coordinate vectors, by the library's own basis routine.
inline Index rank_of(const std::vector<Vector>& vs, Index dim, const Tolerance& tol) {
    return orthonormal_basis(vs, dim, tol).dim();
}

/// Extremality test inside {y : <c_i, y> <= 0}: a unit ray is extreme iff
/// its active constraints have rank d - 1.
inline bool is_extreme_ray(const Vector& ray, const Matrix& constraints,
                           const std::vector<Index>& processed, const Tolerance& tol) {
    const Index d = ray.size();
    std::vector<Vector> active;
    for (Index i : processed) {
        const Vector c = constraints.col(i);
        if (std::abs(c.dot(ray)) <= tol.eps_eq * std::max(c.norm(), 1.0)) active.push_back(c);
    }
    return rank_of(active, d, tol) == d - 1;
}

}  // namespace detail

/** Extreme rays of the polar of K inside span(within), i.e. the unit
 * generators of {y in span(within) : <y, g> <= 0 for all generators g}.
 *
 * Requires K to generate the subspace (the polar is pointed exactly then);
 * otherwise a PolarNotPointed error is raised.  Works in the coordinates of
 * `within` by the double description method: start from the polar of a
 * simplicial subcone, whose rays are the negated dual basis, then clip with
 * the remaining generators one at a time, combining adjacent rays across
 * each new halfspace and keeping only rays whose active constraints have
 * rank d - 1.  When K is simplicial the initial rays are already the
 * answer.  Desk scale only: subspace dim <= 12, at most 24 generators.
 */
inline std::vector<Vector> polar_generators(const GeneratedWedge& K, const SubspaceBasis& within,
                                            const Tolerance& tol = {}) {
    if (K.ambient_dim() != within.ambient_dim())
        throw DimensionMismatch("wedge ambient " + std::to_string(K.ambient_dim()) +
                                " vs basis ambient " + std::to_string(within.ambient_dim()));
    if (within.dim() > 12 || K.count() > 24)
        throw ScaleLimitExceeded("polar_generators handles dim <= 12 and <= 24 generators");

    const Index d = within.dim();
    for (Index j = 0; j < K.count(); ++j) {
        const Vector g = K.generator(j);
        const double off = (g - project_subspace(g, within)).norm();
        if (off > tol.eps_eq * (1.0 + g.norm()))
            throw std::invalid_argument("generator " + std::to_string(j) +
                                        " lies outside the subspace");
    }

    if (d == 0) return {};

    // Subspace coordinates; drop zero generators.
    std::vector<Vector> coord;
    for (Index j = 0; j < K.count(); ++j) {
        Vector c = within.vectors().transpose() * K.generator(j);
        if (c.norm() > tol.eps_eq) coord.push_back(std::move(c));
    }
    if (detail::rank_of(coord, d, tol) < d)
        throw PolarNotPointed("polar is not pointed here: cone does not generate the subspace");

    Matrix C(d, static_cast<Index>(coord.size()));
    for (Index j = 0; j < C.cols(); ++j) C.col(j) = coord[static_cast<size_t>(j)];

    // Greedy independent subset of size d for the simplicial start.
    std::vector<Index> start;
    {
        Matrix q(d, 0);
        double scale = 0.0;
        for (Index j = 0; j < C.cols(); ++j) scale = std::max(scale, C.col(j).norm());
        for (Index j = 0; j < C.cols() && q.cols() < d; ++j) {
            Vector w = detail::reorthogonalize(q, C.col(j));
            if (w.norm() > tol.eps_rank * scale) {
                q.conservativeResize(d, q.cols() + 1);
                q.col(q.cols() - 1) = w / w.norm();
                start.push_back(j);
            }
        }
    }

    Matrix cs(d, d);
    for (Index c = 0; c < d; ++c) cs.col(c) = C.col(start[static_cast<size_t>(c)]);
    Matrix rays = (-cs.transpose().lu().solve(Matrix::Identity(d, d)));
    std::vector<Vector> current;
    for (Index c = 0; c < d; ++c) current.push_back(rays.col(c).normalized());

    std::vector<Index> processed = start;
    for (Index j = 0; j < C.cols(); ++j) {
        if (std::find(start.begin(), start.end(), j) != start.end()) continue;
        const Vector c = C.col(j);
        const double split_tol = tol.eps_eq * std::max(c.norm(), 1.0);

        std::vector<Vector> keep;
        std::vector<std::pair<Vector, double>> pos, neg;
        for (const Vector& r : current) {
            const double s = c.dot(r);
            if (s > split_tol)
                pos.emplace_back(r, s);
            else {
                keep.push_back(r);
                if (s < -split_tol) neg.emplace_back(r, s);
            }
        }
        processed.push_back(j);
        for (const auto& [p, sp] : pos) {
            for (const auto& [q, sq] : neg) {
                Vector cand = sp * q - sq * p;
                if (cand.norm() <= 1e-12) continue;
                cand.normalize();
                if (!detail::is_extreme_ray(cand, C, processed, tol)) continue;
                bool dup = false;
                for (const Vector& r : keep)
                    if ((r - cand).norm() <= 1e-8) {
                        dup = true;
                        break;
                    }
                if (!dup) keep.push_back(std::move(cand));
            }
        }
        current = std::move(keep);
    }

    std::vector<Vector> ambient;
    for (const Vector& r : current) ambient.push_back((within.vectors() * r).normalized());
    std::sort(ambient.begin(), ambient.end(), [](const Vector& a, const Vector& b) {
        return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                            b.data() + b.size());
    });
    return ambient;
}

}  // namespace wedgeproj
