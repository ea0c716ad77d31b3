#include "transid/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "transid/errors.hpp"

namespace transid {

namespace {

void require_same_ambient(const Subspace& a, const Subspace& b, const char* op) {
    if (a.ambient_dim() != b.ambient_dim()) {
        throw InputError(std::string(op) + ": ambient dimension mismatch (" +
                         std::to_string(a.ambient_dim()) + " vs " +
                         std::to_string(b.ambient_dim()) + ")");
    }
}

double clamp_unit(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

double RankPolicy::threshold(double sigma_max, Eigen::Index rows, Eigen::Index cols) const {
    return relative_tolerance * sigma_max * static_cast<double>(std::max(rows, cols));
}

int RankPolicy::rank(const Eigen::VectorXd& singular_values, Eigen::Index rows,
                     Eigen::Index cols) const {
    if (singular_values.size() == 0) return 0;
    const double sigma_max = singular_values.maxCoeff();
    if (sigma_max <= 0.0) return 0;
    const double tol = threshold(sigma_max, rows, cols);
    int r = 0;
    for (Eigen::Index i = 0; i < singular_values.size(); ++i) {
        if (singular_values(i) > tol) ++r;
    }
    return r;
}

void RankPolicy::validate() const {
    if (!(relative_tolerance > 0.0) || !std::isfinite(relative_tolerance)) {
        throw InputError("rank tolerance must be a positive finite number");
    }
}

Subspace::Subspace(Eigen::Index ambient_dim)
    : ambient_dim_(ambient_dim), basis_(ambient_dim, 0) {
    if (ambient_dim <= 0) throw InputError("subspace ambient dimension must be positive");
}

Subspace Subspace::from_orthonormal(Eigen::MatrixXd basis) {
    Subspace s(basis.rows());
    s.basis_ = std::move(basis);
    return s;
}

Subspace Subspace::whole(Eigen::Index ambient_dim) {
    return from_orthonormal(Eigen::MatrixXd::Identity(ambient_dim, ambient_dim));
}

Eigen::VectorXd Subspace::project(const Eigen::VectorXd& v) const {
    if (v.size() != ambient_dim_) throw InputError("project: vector length mismatch");
    if (dim() == 0) return Eigen::VectorXd::Zero(ambient_dim_);
    return basis_ * (basis_.transpose() * v);
}

double Subspace::residual(const Eigen::VectorXd& v) const { return (v - project(v)).norm(); }

Subspace span(const Eigen::MatrixXd& matrix, const RankPolicy& policy) {
    policy.validate();
    if (matrix.rows() == 0) throw InputError("span: matrix has no rows");
    if (matrix.cols() == 0) return Subspace(matrix.rows());
    if (!matrix.allFinite()) throw InputError("span: matrix has non-finite entries");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(matrix, Eigen::ComputeThinU);
    const int r = policy.rank(svd.singularValues(), matrix.rows(), matrix.cols());
    return Subspace::from_orthonormal(svd.matrixU().leftCols(r));
}

Subspace null_space(const Eigen::MatrixXd& matrix, const RankPolicy& policy) {
    policy.validate();
    const Eigen::Index n = matrix.cols();
    if (n == 0) throw InputError("null_space: matrix has no columns");
    if (matrix.rows() == 0) return Subspace::whole(n);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(matrix, Eigen::ComputeFullV);
    const int r = policy.rank(svd.singularValues(), matrix.rows(), n);
    return Subspace::from_orthonormal(svd.matrixV().rightCols(n - r));
}

Subspace left_kernel(const Subspace& sub) {
    const Eigen::Index m = sub.ambient_dim();
    const Eigen::Index k = sub.dim();
    if (k == 0) return Subspace::whole(m);
    if (k == m) return Subspace(m);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(sub.basis());
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m, m);
    return Subspace::from_orthonormal(q.rightCols(m - k));
}

Subspace sum(const Subspace& a, const Subspace& b, const RankPolicy& policy) {
    require_same_ambient(a, b, "sum");
    Eigen::MatrixXd stacked(a.ambient_dim(), a.dim() + b.dim());
    stacked << a.basis(), b.basis();
    return span(stacked, policy);
}

Subspace intersect(const Subspace& a, const Subspace& b, const RankPolicy& policy) {
    require_same_ambient(a, b, "intersect");
    const Subspace ca = left_kernel(a);
    const Subspace cb = left_kernel(b);
    Eigen::MatrixXd rows(ca.dim() + cb.dim(), a.ambient_dim());
    rows << ca.basis().transpose(), cb.basis().transpose();
    return null_space(rows, policy);
}

PrincipalDecomposition principal_decomposition(const Subspace& a, const Subspace& b) {
    require_same_ambient(a, b, "principal_decomposition");
    if (a.dim() == 0 || b.dim() == 0) {
        throw InputError("principal angles are undefined for a zero-dimensional subspace");
    }
    const Eigen::MatrixXd& qa = a.basis();
    const Eigen::MatrixXd& qb = b.basis();
    const Eigen::MatrixXd gram = qa.transpose() * qb;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& cosines = svd.singularValues();
    const Eigen::Index q = cosines.size();

    // Sines come from the part of the smaller subspace orthogonal to the larger one.
    const Eigen::MatrixXd off =
        b.dim() <= a.dim() ? Eigen::MatrixXd(qb - qa * gram) : Eigen::MatrixXd(qa - qb * gram.transpose());
    Eigen::VectorXd sines = Eigen::JacobiSVD<Eigen::MatrixXd>(off).singularValues();
    std::sort(sines.data(), sines.data() + sines.size());

    PrincipalDecomposition out;
    out.angles.resize(static_cast<std::size_t>(q));
    double previous = 0.0;
    for (Eigen::Index j = 0; j < q; ++j) {
        const double c = clamp_unit(cosines(j));
        const double s = clamp_unit(j < sines.size() ? sines(j) : 0.0);
        double theta = c * c >= 0.5 ? std::asin(s) : std::acos(c);
        theta = std::max(theta, previous);
        out.angles[static_cast<std::size_t>(j)] = theta;
        previous = theta;
    }

    out.left_vectors = qa * svd.matrixU();
    out.right_vectors = qb * svd.matrixV();
    for (Eigen::Index j = 0; j < q; ++j) {
        if (out.left_vectors.col(j).dot(out.right_vectors.col(j)) < 0.0) {
            out.right_vectors.col(j) *= -1.0;
        }
    }
    return out;
}

double distance(const Subspace& a, const Subspace& b) {
    return principal_decomposition(a, b).angles.back();
}

bool is_partially_orthogonal(const Subspace& a, const Subspace& b, double cos_tolerance) {
    require_same_ambient(a, b, "is_partially_orthogonal");
    const Eigen::Index ka = a.dim();
    const Eigen::Index kb = b.dim();
    if (ka == 0 || kb == 0) return std::max(ka, kb) > 0;
    const Eigen::MatrixXd gram = a.basis().transpose() * b.basis();
    const Eigen::VectorXd cosines = Eigen::JacobiSVD<Eigen::MatrixXd>(gram).singularValues();
    Eigen::Index coupled = 0;
    for (Eigen::Index j = 0; j < cosines.size(); ++j) {
        if (cosines(j) > cos_tolerance) ++coupled;
    }
    // dim(a ∩ b⊥) = ka - coupled and dim(b ∩ a⊥) = kb - coupled.
    return coupled < std::max(ka, kb);
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> aligned_bases(const Subspace& a, const Subspace& b) {
    require_same_ambient(a, b, "aligned_bases");
    if (a.dim() != b.dim() || a.dim() == 0) {
        throw InputError("aligned_bases: subspaces must have the same positive dimension (" +
                         std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
    }
    PrincipalDecomposition pd = principal_decomposition(a, b);
    return {std::move(pd.left_vectors), std::move(pd.right_vectors)};
}

}  // namespace transid
