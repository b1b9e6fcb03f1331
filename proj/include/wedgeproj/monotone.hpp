#pragma once

#include <utility>
#include <vector>

#include "wedgeproj/core.hpp"
#include "wedgeproj/projection.hpp"
#include "wedgeproj/wedge.hpp"

namespace wedgeproj {

/** Named generator families for the monotone wedge
 * {x in R^m : x^1 >= x^2 >= ... >= x^m}.
 *
 * prefix_ones[j] has ones in the first j+1 slots and zeros after; the last
 * one is the all-ones vector, which spans the lineality space.
 * cone_generators[j] has j+1 leading entries equal to m-j-1 followed by
 * m-j-1 entries equal to -(j+1); it is m times the projection of
 * prefix_ones[j] onto the complement of the all-ones line, kept at integer
 * scale.  difference_rays[i] is -1 in slot i and +1 in slot i+1; divided by
 * sqrt(2) these are the unit extreme rays of the polar of the cone part
 * inside that complement.
 */
struct MonotoneBasis {
    Index m = 0;
    std::vector<Vector> prefix_ones;      ///< m vectors, j+1 leading ones
    std::vector<Vector> cone_generators;  ///< m-1 integer generators of the cone part
    std::vector<Vector> difference_rays;  ///< m-1 adjacent-difference vectors
    Vector ones;                          ///< the all-ones vector
};

/// Coordinates of x in the basis {cone_generators, ones}: x = sum_{j<m-1}
/// t[j] cone_generators[j] + t[m-1] ones.
struct MonotoneCoefficients {
    Vector t;
};

inline MonotoneBasis monotone_basis(Index m) {
    if (m < 2) throw std::invalid_argument("monotone wedge needs m >= 2");
    MonotoneBasis b;
    b.m = m;
    b.ones = Vector::Ones(m);
    for (Index j = 1; j <= m; ++j) {
        Vector e = Vector::Zero(m);
        e.head(j).setOnes();
        b.prefix_ones.push_back(std::move(e));
    }
    for (Index j = 1; j < m; ++j) {
        Vector ep(m);
        ep.head(j).setConstant(static_cast<double>(m - j));
        ep.tail(m - j).setConstant(static_cast<double>(-j));
        b.cone_generators.push_back(std::move(ep));
    }
    for (Index i = 0; i + 1 < m; ++i) {
        Vector u = Vector::Zero(m);
        u[i] = -1.0;
        u[i + 1] = 1.0;
        b.difference_rays.push_back(std::move(u));
    }
    return b;
}

/** The monotone wedge as a GeneratedWedge: the m-1 cone-part generators
 * plus the all-ones vector and its negation.  Nonnegative combinations of
 * these are exactly the nonincreasing vectors.
 */
inline GeneratedWedge build_monotone_wedge(Index m) {
    const MonotoneBasis b = monotone_basis(m);
    Matrix G(m, m + 1);
    for (Index j = 0; j + 1 < m; ++j) G.col(j) = b.cone_generators[static_cast<size_t>(j)];
    G.col(m - 1) = b.ones;
    G.col(m) = -b.ones;
    return GeneratedWedge(std::move(G));
}

/// True when the entries of x are nonincreasing up to eps_feas slack
/// scaled by (1 + |x|).
inline bool is_monotone(const Vector& x, const Tolerance& tol = {}) {
    const double slack = tol.eps_feas * (1.0 + x.norm());
    for (Index i = 0; i + 1 < x.size(); ++i)
        if (x[i] < x[i + 1] - slack) return false;
    return true;
}

/** Coordinates of an arbitrary x in the basis {cone_generators, ones}.
 *
 * The cone generators are mutually non-orthogonal, but the expansion is
 * triangular in the adjacent differences: cone_generators[j] is the only
 * basis vector with a jump at position j+1, of height m, and the all-ones
 * vector carries the mean.  Hence t[j] = (x^{j+1} - x^{j+2}) / m for the
 * cone part and t[m-1] = mean(x), and reconstruction is exact.  x lies in
 * the monotone wedge exactly when the cone coordinates are nonnegative.
 */
inline MonotoneCoefficients monotone_coefficients(const Vector& x) {
    const Index m = x.size();
    if (m < 2) throw std::invalid_argument("monotone coefficients need m >= 2");
    MonotoneCoefficients c;
    c.t = Vector::Zero(m);
    for (Index j = 0; j + 1 < m; ++j)
        c.t[j] = (x[j] - x[j + 1]) / static_cast<double>(m);
    c.t[m - 1] = x.mean();
    return c;
}

/** Metric projection onto the monotone wedge by the pool-adjacent-
 * violators algorithm: sweep left to right keeping a stack of blocks with
 * strictly decreasing means, merging whenever a new block's mean exceeds
 * the mean to its left, then write each block's mean across its extent.
 * Runs in O(m) and agrees with the exact face-search oracle.
 */
inline Vector pava_project(const Vector& x) {
    const Index m = x.size();
    if (m < 1) throw std::invalid_argument("pava needs at least one entry");
    struct Block {
        double sum;
        Index len;
    };
    std::vector<Block> stack;
    stack.reserve(static_cast<size_t>(m));
    for (Index i = 0; i < m; ++i) {
        Block cur{x[i], 1};
        while (!stack.empty() &&
               stack.back().sum * static_cast<double>(cur.len) <
                   cur.sum * static_cast<double>(stack.back().len)) {
            cur.sum += stack.back().sum;
            cur.len += stack.back().len;
            stack.pop_back();
        }
        stack.push_back(cur);
    }
    Vector p(m);
    Index pos = 0;
    for (const Block& b : stack) {
        const double mean = b.sum / static_cast<double>(b.len);
        p.segment(pos, b.len).setConstant(mean);
        pos += b.len;
    }
    return p;
}

}  // namespace wedgeproj
