#include "transid/engine.hpp"

#include <algorithm>
#include <string>

#include <json.hpp>

#include "transid/errors.hpp"

namespace transid {

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::similar: return "similar";
        case Provenance::step: return "step";
        case Provenance::truth: return "truth";
    }
    return "unknown";
}

Eigen::MatrixXd LinearModel::stacked() const {
    Eigen::MatrixXd ab(A.rows(), A.cols() + B.cols());
    ab << A, B;
    return ab;
}

void LinearModel::validate() const {
    if (A.rows() < 1 || A.rows() != A.cols()) throw InputError("model A must be square and non-empty");
    if (B.rows() != A.rows()) throw InputError("model B must have as many rows as A");
    if (!A.allFinite() || !B.allFinite()) throw InputError("model has non-finite entries");
}

double parameter_distance(const LinearModel& a, const LinearModel& b) {
    if (a.n() != b.n() || a.m() != b.m()) throw InputError("parameter_distance: dimension mismatch");
    return (a.stacked() - b.stacked()).norm();
}

Subspace graph_subspace(const LinearModel& model) {
    model.validate();
    const int lambda = model.n() + model.m();
    Eigen::MatrixXd g(2 * model.n() + model.m(), lambda);
    g << Eigen::MatrixXd::Identity(lambda, lambda), model.stacked();
    return span(g);
}

namespace {

nlohmann::json matrix_rows(const Eigen::MatrixXd& M) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd rows_matrix(const nlohmann::json& rows, Eigen::Index n, Eigen::Index cols,
                            const char* name) {
    if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n) {
        throw InputError(std::string("model JSON: ") + name + " must have " + std::to_string(n) + " rows");
    }
    Eigen::MatrixXd M(n, cols);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
            throw InputError(std::string("model JSON: row ") + std::to_string(i + 1) + " of " + name +
                             " must have " + std::to_string(cols) + " entries");
        }
        for (Eigen::Index j = 0; j < cols; ++j) M(i, j) = row[static_cast<std::size_t>(j)].get<double>();
    }
    return M;
}

}  // namespace

std::string format_model_json(const LinearModel& model, int steps, bool completed) {
    nlohmann::json doc;
    doc["n"] = model.n();
    doc["m"] = model.m();
    doc["A"] = matrix_rows(model.A);
    doc["B"] = matrix_rows(model.B);
    doc["steps"] = steps;
    doc["completed"] = completed;
    doc["provenance"] = to_string(model.provenance);
    return doc.dump(2) + "\n";
}

LinearModel parse_model_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("model JSON: ") + e.what());
    }
    try {
        if (!doc.contains("A") || !doc["A"].is_array() || doc["A"].empty()) {
            throw InputError("model JSON: missing non-empty array \"A\"");
        }
        const auto n = static_cast<Eigen::Index>(doc["A"].size());
        Eigen::Index m = 0;
        if (doc.contains("B") && doc["B"].is_array() && !doc["B"].empty() && doc["B"][0].is_array()) {
            m = static_cast<Eigen::Index>(doc["B"][0].size());
        }
        if (doc.contains("m")) m = doc["m"].get<Eigen::Index>();
        if (doc.contains("n") && doc["n"].get<Eigen::Index>() != n) {
            throw InputError("model JSON: \"n\" disagrees with the number of rows of A");
        }
        LinearModel model;
        model.A = rows_matrix(doc["A"], n, n, "A");
        model.B = m == 0 && (!doc.contains("B") || doc["B"].empty() || doc["B"][0].empty())
                      ? Eigen::MatrixXd(n, 0)
                      : rows_matrix(doc["B"], n, m, "B");
        model.provenance = Provenance::truth;
        model.validate();
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("model JSON: ") + e.what());
    }
}

LinearModel extract_model(const Eigen::MatrixXd& basis, int n, int m, const RankPolicy& policy) {
    const int lambda = n + m;
    if (n < 1 || m < 0 || basis.rows() != 2 * n + m) {
        throw InputError("extract_model: basis has " + std::to_string(basis.rows()) +
                         " rows, expected 2n+m = " + std::to_string(2 * n + m));
    }
    const Eigen::MatrixXd regressor = basis.topRows(lambda);
    const Eigen::MatrixXd x_plus = basis.bottomRows(n);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(regressor, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const int r = policy.rank(sv, regressor.rows(), regressor.cols());
    if (r != lambda) {
        throw NumericalError("extract_model: [X^-; U^-] has rank " + std::to_string(r) +
                             ", expected " + std::to_string(lambda) +
                             " (partially orthogonal data or a corrupted basis)");
    }
    // Pseudo-inverse restricted to the numerically nonzero singular values.
    const Eigen::MatrixXd pinv =
        svd.matrixV().leftCols(r) * sv.head(r).cwiseInverse().asDiagonal() *
        svd.matrixU().leftCols(r).transpose();
    const Eigen::MatrixXd ab = x_plus * pinv;

    const double scale = x_plus.norm();
    const double resid = (x_plus - ab * regressor).norm();
    if (resid > 1e-8 * std::max(scale, 1e-300) && resid > 1e-14) {
        throw NumericalError("extract_model: basis is not consistent with any (A, B); residual " +
                             std::to_string(resid));
    }
    LinearModel out;
    out.A = ab.leftCols(n);
    out.B = ab.rightCols(m);
    out.provenance = Provenance::step;
    return out;
}

Identifier::Identifier(const StackedData& similar, RankPolicy policy)
    : mode_(similar.m == 0 ? IdentifierMode::autonomous : IdentifierMode::driven),
      n_(similar.n),
      m_(similar.m),
      policy_(policy),
      similar_(1),
      similar_perp_(1),
      complement_(1) {
    policy_.validate();
    if (n_ < 1 || m_ < 0) throw InputError("similar data must have n >= 1 and m >= 0");
    if (similar.matrix.rows() != similar.ambient_dim()) {
        throw InputError("similar data has " + std::to_string(similar.matrix.rows()) +
                         " rows, expected 2n+m = " + std::to_string(similar.ambient_dim()));
    }
    const int lambda = n_ + m_;
    const Eigen::Index cols = similar.matrix.cols();
    int reg_rank = 0;
    if (cols > 0) {
        const Eigen::MatrixXd reg = similar.regressor();
        reg_rank = policy_.rank(Eigen::JacobiSVD<Eigen::MatrixXd>(reg).singularValues(), reg.rows(),
                                reg.cols());
    }
    if (reg_rank != lambda) {
        throw InputError("similar data are not informative: rank [X^-; U^-] = " +
                         std::to_string(reg_rank) + " < n+m = " + std::to_string(lambda));
    }
    similar_ = span(similar.matrix, policy_);
    if (similar_.dim() != lambda) {
        throw InputError("similar data span a " + std::to_string(similar_.dim()) +
                         "-dimensional subspace; data from one LTI system span exactly n+m = " +
                         std::to_string(lambda));
    }
    similar_perp_ = left_kernel(similar_);
    similar_model_ = extract_model(similar_.basis(), n_, m_, policy_);
    similar_model_.provenance = Provenance::similar;
    model_ = similar_model_;

    const int ambient = similar.ambient_dim();
    log_.resize(ambient, 0);
    data_columns_.resize(ambient, 0);
    data_basis_.resize(ambient, 0);
    complement_ = similar_;
}

StepReport Identifier::push(const Eigen::VectorXd& h) {
    if (mode_ != IdentifierMode::driven) {
        throw InputError("push: identifier is autonomous; use push_autonomous");
    }
    return advance(h);
}

StepReport Identifier::push_autonomous(const Eigen::VectorXd& h) {
    if (mode_ != IdentifierMode::autonomous) {
        throw InputError("push_autonomous: identifier was built from driven (m > 0) data");
    }
    return advance(h);
}

StepReport Identifier::advance(const Eigen::VectorXd& h) {
    if (complete()) throw InputError("identification is already complete; no more data accepted");
    if (h.size() != ambient_dim()) {
        throw InputError("snapshot has length " + std::to_string(h.size()) + ", expected " +
                         std::to_string(ambient_dim()));
    }
    if (!h.allFinite()) throw InputError("snapshot has non-finite entries");

    ++step_;
    log_.conservativeResize(Eigen::NoChange, log_.cols() + 1);
    log_.col(log_.cols() - 1) = h;

    Eigen::MatrixXd candidate(ambient_dim(), data_columns_.cols() + 1);
    candidate << data_columns_, h;
    Subspace grown = span(candidate, policy_);
    const bool fresh = grown.dim() > data_basis_.cols();

    if (fresh) {
        data_columns_ = std::move(candidate);
        data_basis_ = grown.basis();

        // S_i = Ker [S_perp^T; Q_T^T] = T_i^perp ∩ S
        Eigen::MatrixXd rows(similar_perp_.dim() + data_basis_.cols(), ambient_dim());
        rows << similar_perp_.basis().transpose(), data_basis_.transpose();
        complement_ = null_space(rows, policy_);

        const Eigen::Index h_dim = data_basis_.cols() + complement_.dim();
        if (h_dim != lambda()) {
            throw NumericalError("step " + std::to_string(step_) + ": dim(H_i) = " +
                                 std::to_string(h_dim) + " != n+m = " + std::to_string(lambda()) +
                                 "; the data are probably partially orthogonal to the similar subspace");
        }
        model_ = extract_model(h_basis(), n_, m_, policy_);
        d_to_similar_ = distance(similar_, current_subspace());
    }
    model_.provenance = Provenance::step;
    model_.step = step_;

    StepReport report;
    report.step = step_;
    report.model = model_;
    report.remaining_rank = remaining_rank();
    report.rank_increased = fresh;
    report.d_to_similar = d_to_similar_;
    report.complete = complete();
    return report;
}

Eigen::MatrixXd Identifier::h_basis() const {
    Eigen::MatrixXd hb(ambient_dim(), data_columns_.cols() + complement_.dim());
    hb << data_columns_, complement_.basis();
    return hb;
}

Subspace Identifier::current_subspace() const {
    // Q_T and S_i are mutually orthogonal, so the concatenation is orthonormal.
    Eigen::MatrixXd q(ambient_dim(), data_basis_.cols() + complement_.dim());
    q << data_basis_, complement_.basis();
    return Subspace::from_orthonormal(std::move(q));
}

}  // namespace transid
