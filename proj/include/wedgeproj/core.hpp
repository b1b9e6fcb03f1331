#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

/** Projection onto finitely generated wedges in R^m.
 *
 * A wedge is a closed nonempty set stable under addition and nonnegative
 * scaling (a closed convex cone that may contain lines).  Every wedge W
 * splits orthogonally as W = K (+) L, where L = W n (-W) is the lineality
 * space and K = L-perp n W is a pointed cone; the metric projection then
 * splits as P_W x = P_K x_k + x_l.  This library represents wedges by
 * finite generator lists, computes the split, projects exactly at desk
 * scale, and decides whether the projection is isotone for the semiorder
 * the wedge induces.
 */
namespace wedgeproj {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Operands disagree on ambient dimension.
class DimensionMismatch : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Input exceeds the desk-scale limits of an exact enumeration routine.
class ScaleLimitExceeded : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// The polar has no extreme-ray description because the cone does not
/// generate the subspace it was given (the polar contains a line there).
class PolarNotPointed : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// The exhaustive projection search exhausted every face without producing
/// a candidate that passes its optimality certificate.  Indicates input far
/// outside the routine's numerical comfort zone.
class NoPassingFace : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/** Numerical tolerances used throughout.
 *
 * All three are relative: rank decisions scale by the largest input norm,
 * membership and certificate checks by (1 + |x|).  Raw generators of the
 * monotone wedge grow linearly with the dimension, so absolute thresholds
 * would misclassify.
 */
struct Tolerance {
    double eps_rank = 1e-10;  ///< rank and linear-independence decisions
    double eps_feas = 1e-8;   ///< membership and optimality-certificate feasibility
    double eps_eq   = 1e-9;   ///< equality of vectors and inner products

    void validate() const {
        for (double e : {eps_rank, eps_feas, eps_eq}) {
            if (!(e > 0.0 && e < 1e-2))
                throw std::invalid_argument("tolerance out of range (0, 1e-2): " +
                                            std::to_string(e));
        }
    }
};

/** Orthonormal basis of a linear subspace, stored as the columns of an
 * ambient_dim x dim matrix.  An empty basis (dim 0) still carries its
 * ambient dimension.
 */
class SubspaceBasis {
  public:
    /// Wraps a matrix whose columns must already be orthonormal.
    explicit SubspaceBasis(Matrix columns, const Tolerance& tol = {}) : cols_(std::move(columns)) {
        if (cols_.rows() < 1) throw std::invalid_argument("subspace basis needs ambient dim >= 1");
        if (dim() > 0) {
            const Matrix gram = cols_.transpose() * cols_;
            const double dev = (gram - Matrix::Identity(dim(), dim())).cwiseAbs().maxCoeff();
            if (dev > 10.0 * tol.eps_eq)
                throw std::invalid_argument("columns are not orthonormal (deviation " +
                                            std::to_string(dev) + ")");
        }
    }

    static SubspaceBasis empty(Index ambient_dim) { return SubspaceBasis(Matrix(ambient_dim, 0)); }

    Index ambient_dim() const { return cols_.rows(); }
    Index dim() const { return cols_.cols(); }
    const Matrix& vectors() const { return cols_; }
    Vector vector(Index i) const { return cols_.col(i); }

  private:
    Matrix cols_;
};

namespace detail {

/// Two rounds of Gram-Schmidt of v against the orthonormal columns of Q.
inline Vector reorthogonalize(const Matrix& Q, Vector v) {
    for (int pass = 0; pass < 2; ++pass)
        if (Q.cols() > 0) v -= Q * (Q.transpose() * v);
    return v;
}

}  // namespace detail

/** Orthonormal basis of the span of the given vectors (matrix columns).
 *
 * Uses re-orthogonalized Gram-Schmidt; a column joins the basis when its
 * orthogonalized residual exceeds eps_rank times the largest input norm.
 * Zero columns contribute nothing and are not an error.  The ambient
 * dimension is preserved even for an empty input.
 */
inline SubspaceBasis orthonormal_basis(const Matrix& vectors, const Tolerance& tol = {}) {
    const Index n = vectors.rows();
    double scale = 0.0;
    for (Index j = 0; j < vectors.cols(); ++j) scale = std::max(scale, vectors.col(j).norm());

    Matrix q(n, 0);
    for (Index j = 0; j < vectors.cols(); ++j) {
        Vector w = detail::reorthogonalize(q, vectors.col(j));
        if (w.norm() > tol.eps_rank * scale) {
            q.conservativeResize(n, q.cols() + 1);
            q.col(q.cols() - 1) = w / w.norm();
        }
    }
    return SubspaceBasis(std::move(q), tol);
}

/// Convenience overload for a list of vectors sharing one ambient dimension.
inline SubspaceBasis orthonormal_basis(const std::vector<Vector>& vectors, Index ambient_dim,
                                       const Tolerance& tol = {}) {
    Matrix m(ambient_dim, static_cast<Index>(vectors.size()));
    for (Index j = 0; j < m.cols(); ++j) {
        if (vectors[static_cast<size_t>(j)].size() != ambient_dim)
            throw DimensionMismatch("vector dimension " +
                                    std::to_string(vectors[static_cast<size_t>(j)].size()) +
                                    " does not match ambient " + std::to_string(ambient_dim));
        m.col(j) = vectors[static_cast<size_t>(j)];
    }
    return orthonormal_basis(m, tol);
}

/// Orthogonal projection of x onto the subspace spanned by B.
inline Vector project_subspace(const Vector& x, const SubspaceBasis& B) {
    if (x.size() != B.ambient_dim())
        throw DimensionMismatch("point dim " + std::to_string(x.size()) + " vs ambient " +
                                std::to_string(B.ambient_dim()));
    if (B.dim() == 0) return Vector::Zero(x.size());
    return B.vectors() * (B.vectors().transpose() * x);
}

/** Orthonormal basis of the orthogonal complement of span(B).
 *
 * Greedy choice over the standard basis: repeatedly orthogonalize all
 * candidates and take the one with the largest residual, so the result has
 * exactly ambient_dim - dim(B) vectors without threshold trouble.
 */
inline SubspaceBasis complement_basis(const SubspaceBasis& B, const Tolerance& tol = {}) {
    const Index n = B.ambient_dim();
    const Index need = n - B.dim();
    Matrix q(n, 0);
    for (Index picked = 0; picked < need; ++picked) {
        Vector best;
        double best_norm = -1.0;
        for (Index i = 0; i < n; ++i) {
            Vector w = detail::reorthogonalize(B.vectors(), Vector::Unit(n, i));
            w = detail::reorthogonalize(q, w);
            if (w.norm() > best_norm) {
                best_norm = w.norm();
                best = w;
            }
        }
        q.conservativeResize(n, q.cols() + 1);
        q.col(q.cols() - 1) = best / best.norm();
    }
    return SubspaceBasis(std::move(q), tol);
}

}  // namespace wedgeproj
