#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "wedgeproj/core.hpp"
#include "wedgeproj/monotone.hpp"
#include "wedgeproj/projection.hpp"
#include "wedgeproj/wedge.hpp"

namespace wedgeproj {

/// Verdict of the isotonicity decision procedure.
enum class Verdict { isotone, not_isotone, inapplicable };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::isotone: return "isotone";
        case Verdict::not_isotone: return "not_isotone";
        default: return "inapplicable";
    }
}

/// The most acute pair among the polar's extreme rays: indices into
/// polar_rays and their inner product.  The rays are unit vectors, so the
/// value is the cosine of their angle.
struct RayPair {
    Index i = 0;
    Index j = 0;
    double inner = 0.0;
};

/** Outcome of an isotonicity check.  The verdict is isotone exactly when
 * the polar's extreme rays are linearly independent and pairwise non-acute
 * (every off-diagonal inner product at most eps_feas); inapplicable means
 * the generating hypothesis of the criterion failed.  reason is a stable
 * text code naming which clause decided.
 */
struct IsotoneReport {
    Verdict verdict = Verdict::inapplicable;
    std::vector<Vector> polar_rays;
    std::optional<RayPair> worst_pair;
    std::string reason;
};

/** Applies the isotonicity criterion to a pointed cone K inside the
 * subspace it generates: compute the polar's extreme rays there, then
 * demand linear independence and pairwise non-acute angles.  A cone that
 * does not generate the subspace gets verdict inapplicable.  A
 * zero-dimensional subspace means the enclosing wedge was all lineality,
 * so the projection is linear and trivially isotone.
 */
inline IsotoneReport check_isotone_cone(const GeneratedWedge& K, const SubspaceBasis& within,
                                        const Tolerance& tol = {}) {
    IsotoneReport rep;
    if (within.dim() == 0) {
        rep.verdict = Verdict::isotone;
        rep.reason = "projection_linear";
        return rep;
    }
    try {
        rep.polar_rays = polar_generators(K, within, tol);
    } catch (const PolarNotPointed&) {
        rep.verdict = Verdict::inapplicable;
        rep.reason = "cone_not_generating_in_subspace";
        return rep;
    }

    const Index n = static_cast<Index>(rep.polar_rays.size());
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j) {
            const double ip = rep.polar_rays[static_cast<size_t>(i)].dot(
                rep.polar_rays[static_cast<size_t>(j)]);
            if (!rep.worst_pair || ip > rep.worst_pair->inner) rep.worst_pair = RayPair{i, j, ip};
        }

    const bool independent =
        orthonormal_basis(rep.polar_rays, K.ambient_dim(), tol).dim() == n;
    if (!independent) {
        rep.verdict = Verdict::not_isotone;
        rep.reason = "polar_rays_dependent";
    } else if (rep.worst_pair && rep.worst_pair->inner > tol.eps_feas) {
        rep.verdict = Verdict::not_isotone;
        rep.reason = "polar_rays_acute";
    } else {
        rep.verdict = Verdict::isotone;
        rep.reason = "criterion_satisfied";
    }
    return rep;
}

/** Decides isotonicity for a generating wedge by splitting off the
 * lineality space and applying the cone criterion to the pointed part
 * inside the lineality's orthogonal complement.  Non-generating wedges are
 * outside the criterion's hypothesis and come back inapplicable.
 */
inline IsotoneReport check_isotone_wedge(const GeneratedWedge& W, const Tolerance& tol = {}) {
    if (!is_generating(W, tol)) {
        IsotoneReport rep;
        rep.verdict = Verdict::inapplicable;
        rep.reason = "wedge_not_generating";
        return rep;
    }
    const WedgeDecomposition split = decompose(W, tol);
    const SubspaceBasis lperp = complement_basis(split.lineality, tol);
    if (split.cone_part.is_trivial(tol)) {
        IsotoneReport rep;
        rep.verdict = Verdict::isotone;
        rep.reason = "projection_linear";
        return rep;
    }
    return check_isotone_cone(split.cone_part, lperp, tol);
}

/** Expresses a wedge in orthonormal coordinates of the span of its own
 * generators, where it is generating by construction.  Returns the reduced
 * wedge together with the basis used, so results can be mapped back.
 * This is the reduction behind the --intrinsic switch; it extends the
 * criterion to wedges that do not generate the ambient space.
 */
inline std::pair<GeneratedWedge, SubspaceBasis> intrinsic_wedge(const GeneratedWedge& W,
                                                                const Tolerance& tol = {}) {
    const SubspaceBasis span = orthonormal_basis(W.generators(), tol);
    if (span.dim() == 0) return {GeneratedWedge::zero(1), span};
    Matrix G = span.vectors().transpose() * W.generators();
    return {GeneratedWedge(std::move(G)), span};
}

/** An ordered pair u <= v in the wedge's semiorder, v = u + w with w a
 * member.  witness certifies v - u in W.  When the pair violates
 * isotonicity the projections of u and v and the failed membership
 * certificate for their difference are attached.
 */
struct OrderPair {
    Vector u;
    Vector v;
    MembershipCertificate witness;
    std::optional<Vector> proj_u;
    std::optional<Vector> proj_v;
    std::optional<MembershipCertificate> failure;
};

/// Tally of a randomized isotonicity run.
struct SampleReport {
    long pairs_tested = 0;
    std::vector<OrderPair> violations;
};

namespace detail {

/** Draws one ordered pair: u standard normal with norm clamped to 10, and
 * v = u + sum t_i g_i with t_i uniform in [0,1] over all generators, so
 * v - u is a wedge member by construction.  Projects both and reports a
 * violation when the difference of projections fails membership.
 */
template <typename Rng>
std::optional<OrderPair> sample_one_pair(const GeneratedWedge& W, const WedgeDecomposition& split,
                                         Rng& rng, const Tolerance& tol) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    Vector u(W.ambient_dim());
    for (Index i = 0; i < u.size(); ++i) u[i] = normal(rng);
    const double n = u.norm();
    if (n > 10.0) u *= 10.0 / n;

    Vector t(W.count());
    for (Index i = 0; i < t.size(); ++i) t[i] = unit(rng);
    const Vector v = u + W.generators() * t;

    const Vector pu = project_wedge(W, split, u, tol).point;
    const Vector pv = project_wedge(W, split, v, tol).point;
    const auto diff_cert = contains(W, Vector(pv - pu), tol);
    if (diff_cert.member) return std::nullopt;

    OrderPair pair;
    pair.u = u;
    pair.v = v;
    pair.witness = contains(W, Vector(v - u), tol);
    pair.proj_u = pu;
    pair.proj_v = pv;
    pair.failure = diff_cert;
    return pair;
}

}  // namespace detail

/** Seeded randomized test of isotonicity: n_pairs ordered pairs u <= v,
 * each checked for P_W v - P_W u in W.  Violations are returned with full
 * witnesses.  For an isotone wedge the violation list is empty for every
 * seed; a nonempty list is a constructive disproof.
 */
inline SampleReport sample_isotonicity(const GeneratedWedge& W, long n_pairs, std::uint64_t seed,
                                       const Tolerance& tol = {}) {
    if (n_pairs < 1) throw std::invalid_argument("sample_isotonicity needs n_pairs >= 1");
    const WedgeDecomposition split = decompose(W, tol);
    std::mt19937_64 rng(seed);
    SampleReport rep;
    for (long i = 0; i < n_pairs; ++i) {
        ++rep.pairs_tested;
        auto bad = detail::sample_one_pair(W, split, rng, tol);
        if (bad) rep.violations.push_back(std::move(*bad));
    }
    return rep;
}

/** Random search for a single isotonicity violation, stopping at the first
 * hit.  Draws the same pair stream as sample_isotonicity with the same
 * seed.  Empty when the budget runs out, which is evidence (not proof) of
 * isotonicity.
 */
inline std::optional<OrderPair> find_violation_witness(const GeneratedWedge& W, long budget,
                                                       std::uint64_t seed,
                                                       const Tolerance& tol = {}) {
    if (budget < 1) throw std::invalid_argument("find_violation_witness needs budget >= 1");
    const WedgeDecomposition split = decompose(W, tol);
    std::mt19937_64 rng(seed);
    for (long i = 0; i < budget; ++i) {
        auto bad = detail::sample_one_pair(W, split, rng, tol);
        if (bad) return bad;
    }
    return std::nullopt;
}

/** Confirms the standing example end to end for one m: the monotone wedge
 * must come back isotone, and the polar rays must coincide, as a set, with
 * the normalized adjacent-difference vectors.  The returned report carries
 * reason monotone_polar_rays_match on success and
 * monotone_polar_rays_mismatch when the ray sets differ.
 */
inline IsotoneReport monotone_isotone_selfcheck(Index m, const Tolerance& tol = {}) {
    if (m < 2 || m > 12)
        throw std::invalid_argument("monotone_isotone_selfcheck covers 2 <= m <= 12");
    IsotoneReport rep = check_isotone_wedge(build_monotone_wedge(m), tol);
    if (rep.verdict != Verdict::isotone) return rep;

    const MonotoneBasis basis = monotone_basis(m);
    std::vector<Vector> expected;
    for (const Vector& u : basis.difference_rays) expected.push_back(u.normalized());

    bool match = expected.size() == rep.polar_rays.size();
    if (match) {
        std::vector<char> used(expected.size(), 0);
        for (const Vector& ray : rep.polar_rays) {
            bool hit = false;
            for (size_t i = 0; i < expected.size(); ++i) {
                if (!used[i] && (ray - expected[i]).norm() <= tol.eps_eq) {
                    used[i] = 1;
                    hit = true;
                    break;
                }
            }
            if (!hit) {
                match = false;
                break;
            }
        }
    }
    rep.reason = match ? "monotone_polar_rays_match" : "monotone_polar_rays_mismatch";
    return rep;
}

}  // namespace wedgeproj
