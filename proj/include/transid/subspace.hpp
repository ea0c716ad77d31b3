#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace transid {

/// Numerical rank rule shared by every SVD-based decision in the library:
/// a singular value s counts iff s > relative_tolerance * s_max * max(rows, cols).
struct RankPolicy {
    double relative_tolerance = 1e-10;

    double threshold(double sigma_max, Eigen::Index rows, Eigen::Index cols) const;
    int rank(const Eigen::VectorXd& singular_values, Eigen::Index rows, Eigen::Index cols) const;
    void validate() const;
};

/// A linear subspace of R^M held as an M x k matrix with orthonormal columns.
/// Dimension 0 is represented by an M x 0 basis.
class Subspace {
public:
    /// Trivial subspace {0} of R^ambient_dim.
    explicit Subspace(Eigen::Index ambient_dim);

    /// Wraps a basis that is already orthonormal. No orthonormalization is done.
    static Subspace from_orthonormal(Eigen::MatrixXd basis);
    static Subspace whole(Eigen::Index ambient_dim);

    Eigen::Index ambient_dim() const { return ambient_dim_; }
    Eigen::Index dim() const { return basis_.cols(); }
    const Eigen::MatrixXd& basis() const { return basis_; }

    /// Orthogonal projection of v onto the subspace.
    Eigen::VectorXd project(const Eigen::VectorXd& v) const;
    /// Norm of the component of v orthogonal to the subspace.
    double residual(const Eigen::VectorXd& v) const;

private:
    Eigen::Index ambient_dim_;
    Eigen::MatrixXd basis_;
};

struct PrincipalDecomposition {
    std::vector<double> angles;        // ascending, in [0, pi/2]
    Eigen::MatrixXd left_vectors;      // columns in the first subspace
    Eigen::MatrixXd right_vectors;     // columns in the second subspace
};

/// Column space of `matrix` under `policy`. A matrix with zero columns yields {0}.
Subspace span(const Eigen::MatrixXd& matrix, const RankPolicy& policy = {});

/// Right kernel {v : matrix * v = 0} as a subspace of R^cols.
Subspace null_space(const Eigen::MatrixXd& matrix, const RankPolicy& policy = {});

/// Orthogonal complement of `sub` in its ambient space (the left kernel of its basis).
Subspace left_kernel(const Subspace& sub);

Subspace sum(const Subspace& a, const Subspace& b, const RankPolicy& policy = {});

/// Kernel of the stacked complements [a_perp^T; b_perp^T].
Subspace intersect(const Subspace& a, const Subspace& b, const RankPolicy& policy = {});

PrincipalDecomposition principal_decomposition(const Subspace& a, const Subspace& b);

/// Largest principal angle, computed over q = min(dim a, dim b) angles.
double distance(const Subspace& a, const Subspace& b);

/// True iff a has a nonzero vector orthogonal to all of b, or vice versa.
/// `cos_tolerance` is the cosine below which a principal angle counts as pi/2.
bool is_partially_orthogonal(const Subspace& a, const Subspace& b, double cos_tolerance = 1e-8);

/// Principal-vector bases (Q_a U, Q_b V) for equal-dimension subspaces,
/// signed so that column j of each has a nonnegative inner product.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> aligned_bases(const Subspace& a, const Subspace& b);

}  // namespace transid
