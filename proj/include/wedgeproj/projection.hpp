#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "wedgeproj/core.hpp"
#include "wedgeproj/wedge.hpp"

namespace wedgeproj {

/** Evidence that a candidate point p is the metric projection of x: the
 * residual x - p must make a nonpositive inner product with every
 * generator (hence with all of the wedge), be orthogonal to p, and p
 * itself must be a member.  The raw inner products are kept so callers can
 * audit near-threshold outcomes.
 */
struct KktCertificate {
    double max_inner_generator = 0.0;  ///< max over generators g of <x - p, g>
    double complementarity = 0.0;      ///< <x - p, p>
    bool point_in_wedge = false;
    bool passed = false;
};

/** Projection output.  active_coefficients maps generator indices of the
 * input wedge to nonnegative weights such that
 *
 *   point = sum_i active_coefficients[i] * generator(i) + lineality_component
 *
 * holds within the membership tolerance, with lineality_component in the
 * wedge's lineality space (the zero vector when the wedge is pointed).
 */
struct ProjectionResult {
    Vector point;
    Vector residual;  ///< x - point
    std::map<Index, double> active_coefficients;
    Vector lineality_component;
    KktCertificate certificate;
};

/** Checks the optimality conditions for p = P_W x: <x - p, g> <= 0 for
 * every generator g, <x - p, p> = 0, and p in W.  The inner products are
 * compared against eps_feas scaled by (1 + |x|) and (1 + |x|)^2, so the
 * verdict is meaningful for tiny and large inputs alike.
 */
inline KktCertificate verify_projection(const GeneratedWedge& W, const Vector& x, const Vector& p,
                                        const Tolerance& tol = {}) {
    if (x.size() != W.ambient_dim() || p.size() != W.ambient_dim())
        throw DimensionMismatch("verify_projection: point dims do not match the wedge");
    const Vector r = x - p;
    KktCertificate cert;
    cert.max_inner_generator = -std::numeric_limits<double>::infinity();
    for (Index j = 0; j < W.count(); ++j)
        cert.max_inner_generator = std::max(cert.max_inner_generator, r.dot(W.generator(j)));
    cert.complementarity = r.dot(p);
    cert.point_in_wedge = contains(W, p, tol).member;
    const double scale = 1.0 + x.norm();
    cert.passed = cert.point_in_wedge && cert.max_inner_generator <= tol.eps_feas * scale &&
                  std::abs(cert.complementarity) <= tol.eps_feas * scale * scale;
    return cert;
}

namespace detail {

/// Minimum-norm least squares fit of x over the chosen generator columns,
/// so rank-deficient faces are handled uniformly.
inline std::pair<Vector, Vector> face_fit(const Matrix& G, const std::vector<Index>& face,
                                          const Vector& x) {
    Matrix sub(G.rows(), static_cast<Index>(face.size()));
    for (Index c = 0; c < sub.cols(); ++c) sub.col(c) = G.col(face[static_cast<size_t>(c)]);
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(sub);
    Vector t = cod.solve(x);
    return {sub * t, std::move(t)};
}

/// Depth-first enumeration of index subsets of {0..k-1} up to max_size,
/// stopping as soon as the visitor returns true.
inline void enumerate_faces(Index k, Index max_size,
                            const std::function<bool(const std::vector<Index>&)>& visit) {
    std::vector<Index> face;
    std::function<bool(Index)> rec = [&](Index next) -> bool {
        if (visit(face)) return true;
        if (static_cast<Index>(face.size()) == max_size) return false;
        for (Index j = next; j < k; ++j) {
            face.push_back(j);
            if (rec(j + 1)) return true;
            face.pop_back();
        }
        return false;
    };
    rec(0);
}

}  // namespace detail

/** Metric projection onto a generated cone by exhaustive face search.
 *
 * The projection lies on some face of the cone, and an optimal conic
 * representation can always be thinned to a linearly independent support,
 * so subsets of at most min(count, ambient_dim) generators suffice.  For
 * each subset: project x onto its span by least squares, require the span
 * point to lie in the subset's own cone, then check the optimality
 * certificate against the full generator set.  The first passing candidate
 * is the projection (unique by convexity).  Cost is exponential in the
 * generator count, hence the desk-scale cap of 24 generators.
 */
inline ProjectionResult project_cone_oracle(const GeneratedWedge& W, const Vector& x,
                                            const Tolerance& tol = {}) {
    if (x.size() != W.ambient_dim())
        throw DimensionMismatch("project_cone_oracle: point dim does not match the wedge");
    if (W.count() > 24)
        throw ScaleLimitExceeded("project_cone_oracle handles at most 24 generators");

    const Matrix& G = W.generators();
    const Index max_face = std::min(W.count(), W.ambient_dim());
    const double scale = 1.0 + x.norm();

    // Members are their own projection; the membership run also yields the
    // nonnegative weights.
    {
        const auto cert = contains(W, x, tol);
        if (cert.member) {
            ProjectionResult res;
            res.point = x;
            res.residual = Vector::Zero(x.size());
            res.lineality_component = Vector::Zero(x.size());
            if (cert.coefficients)
                for (Index j = 0; j < cert.coefficients->size(); ++j)
                    if ((*cert.coefficients)[j] > 0.0)
                        res.active_coefficients[j] = (*cert.coefficients)[j];
            res.certificate = verify_projection(W, x, res.point, tol);
            return res;
        }
    }

    std::optional<ProjectionResult> found;
    double best_violation = std::numeric_limits<double>::infinity();
    Vector best_point;
    KktCertificate best_cert;

    detail::enumerate_faces(W.count(), max_face, [&](const std::vector<Index>& face) -> bool {
        Vector p;
        Vector t;
        if (face.empty()) {
            p = Vector::Zero(x.size());
            t = Vector();
        } else {
            auto fit = detail::face_fit(G, face, x);
            p = std::move(fit.first);
            t = std::move(fit.second);
        }
        const Vector r = x - p;

        KktCertificate cert;
        cert.max_inner_generator = -std::numeric_limits<double>::infinity();
        for (Index j = 0; j < W.count(); ++j)
            cert.max_inner_generator = std::max(cert.max_inner_generator, r.dot(G.col(j)));
        cert.complementarity = r.dot(p);
        const bool kkt_ok = cert.max_inner_generator <= tol.eps_feas * scale &&
                            std::abs(cert.complementarity) <= tol.eps_feas * scale * scale;
        {
            const double v = std::max(cert.max_inner_generator / scale,
                                      std::abs(cert.complementarity) / (scale * scale));
            if (v < best_violation) {
                best_violation = v;
                best_point = p;
                best_cert = cert;
            }
        }
        if (!kkt_ok) return false;

        // The span point must lie in the cone of the face's own generators.
        std::map<Index, double> weights;
        if (!face.empty()) {
            Matrix sub(G.rows(), static_cast<Index>(face.size()));
            for (Index c = 0; c < sub.cols(); ++c) sub.col(c) = G.col(face[static_cast<size_t>(c)]);
            const auto fm = contains(GeneratedWedge(sub), p, tol);
            if (!fm.member) return false;
            for (size_t c = 0; c < face.size(); ++c)
                if ((*fm.coefficients)[static_cast<Index>(c)] > 0.0)
                    weights[face[c]] += (*fm.coefficients)[static_cast<Index>(c)];
        }
        cert.point_in_wedge = true;
        cert.passed = true;

        ProjectionResult res;
        res.point = std::move(p);
        res.residual = x - res.point;
        res.active_coefficients = std::move(weights);
        res.lineality_component = Vector::Zero(x.size());
        res.certificate = cert;
        found = std::move(res);
        return true;
    });

    if (!found) {
        std::ostringstream msg;
        msg << "no face yields a certified projection at this tolerance; best candidate had "
            << "max generator inner product " << best_cert.max_inner_generator
            << ", complementarity " << best_cert.complementarity << ", distance "
            << (x - best_point).norm();
        throw NoPassingFace(msg.str());
    }
    return std::move(*found);
}

/** Metric projection onto a wedge via its split W = K (+) L: project x
 * onto L and onto L-perp, project the L-perp part onto the pointed cone K,
 * and add the two pieces.  The certificate is evaluated against the full
 * original generator set.  The overload taking a precomputed decomposition
 * serves tight loops over one fixed wedge.
 */
inline ProjectionResult project_wedge(const GeneratedWedge& W, const WedgeDecomposition& split,
                                      const Vector& x, const Tolerance& tol = {}) {
    if (x.size() != W.ambient_dim())
        throw DimensionMismatch("project_wedge: point dim does not match the wedge");
    const Vector xl = project_subspace(x, split.lineality);
    const Vector xk = x - xl;
    ProjectionResult cone = project_cone_oracle(split.cone_part, xk, tol);

    ProjectionResult res;
    res.point = cone.point + xl;
    res.residual = x - res.point;

    // Map the cone-part weights back to the indices of the original
    // generators; the lineality component absorbs the difference between
    // each original generator and its cone-part projection, so the
    // reconstruction over the wedge's own generators stays exact.
    Vector combo = Vector::Zero(W.ambient_dim());
    for (const auto& [cone_idx, weight] : cone.active_coefficients) {
        const Index orig = split.cone_part_index[static_cast<size_t>(cone_idx)];
        if (orig < 0) continue;
        res.active_coefficients[orig] += weight;
        combo += weight * W.generator(orig);
    }
    res.lineality_component = res.point - combo;
    res.certificate = verify_projection(W, x, res.point, tol);
    return res;
}

inline ProjectionResult project_wedge(const GeneratedWedge& W, const Vector& x,
                                      const Tolerance& tol = {}) {
    return project_wedge(W, decompose(W, tol), x, tol);
}

/** Two-sided split sanity check inside a subspace: x must equal its
 * projection onto K plus its projection onto the polar of K, with the two
 * pieces orthogonal.  The polar is projected onto via its computed extreme
 * rays, so this exercises the polar machinery and the oracle together.
 * Requires x in span(within) and K generating there.
 */
inline bool moreau_check(const GeneratedWedge& K, const SubspaceBasis& within, const Vector& x,
                         const Tolerance& tol = {}) {
    if (x.size() != K.ambient_dim())
        throw DimensionMismatch("moreau_check: point dim does not match the cone");
    if ((x - project_subspace(x, within)).norm() > tol.eps_eq * (1.0 + x.norm()))
        throw std::invalid_argument("moreau_check: x lies outside the subspace");

    const std::vector<Vector> rays = polar_generators(K, within, tol);
    GeneratedWedge polar = GeneratedWedge::zero(K.ambient_dim());
    if (!rays.empty()) {
        Matrix R(K.ambient_dim(), static_cast<Index>(rays.size()));
        for (Index c = 0; c < R.cols(); ++c) R.col(c) = rays[static_cast<size_t>(c)];
        polar = GeneratedWedge(std::move(R));
    }

    const Vector pk = project_cone_oracle(K, x, tol).point;
    const Vector pp = project_cone_oracle(polar, x, tol).point;
    const double scale = 1.0 + x.norm();
    return (x - pk - pp).norm() <= tol.eps_feas * scale &&
           std::abs(pk.dot(pp)) <= tol.eps_feas * scale * scale;
}

}  // namespace wedgeproj
