#include "transid/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "transid/errors.hpp"

namespace transid {

namespace {

using cd = std::complex<double>;

Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    Eigen::MatrixXd out(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = dist(rng);
    return out;
}

double target_scale(const std::vector<cd>& targets) {
    double s = 1.0;
    for (const auto& t : targets) s = std::max(s, std::abs(t));
    return s;
}

// Pairs each non-real target with its conjugate; throws if the set is not closed.
void check_conjugate_closed(const std::vector<cd>& targets) {
    const double tol = 1e-10 * target_scale(targets);
    std::vector<bool> used(targets.size(), false);
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (used[i] || std::abs(targets[i].imag()) <= tol) continue;
        used[i] = true;
        bool found = false;
        for (std::size_t j = 0; j < targets.size() && !found; ++j) {
            if (!used[j] && std::abs(targets[j] - std::conj(targets[i])) <= tol) {
                used[j] = true;
                found = true;
            }
        }
        if (!found) throw InputError("pole targets are not closed under complex conjugation");
    }
}

// Real matrix whose spectrum is the (conjugate-closed) target set.
Eigen::MatrixXd real_spectrum_matrix(const std::vector<cd>& targets) {
    const auto n = static_cast<Eigen::Index>(targets.size());
    const double tol = 1e-10 * target_scale(targets);
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(n, n);
    Eigen::Index k = 0;
    for (const auto& t : targets) {
        if (std::abs(t.imag()) <= tol) {
            f(k, k) = t.real();
            ++k;
        } else if (t.imag() > 0.0) {
            f(k, k) = t.real();
            f(k, k + 1) = t.imag();
            f(k + 1, k) = -t.imag();
            f(k + 1, k + 1) = t.real();
            k += 2;
        }
    }
    return f;
}

// Desired characteristic polynomial evaluated at A.
Eigen::MatrixXd char_poly_at(const Eigen::MatrixXd& A, const std::vector<cd>& targets) {
    const Eigen::Index n = A.rows();
    const double tol = 1e-10 * target_scale(targets);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd phi = I;
    for (const auto& t : targets) {
        if (std::abs(t.imag()) <= tol) {
            phi = phi * (A - t.real() * I);
        } else if (t.imag() > 0.0) {
            phi = phi * (A * A - 2.0 * t.real() * A + std::norm(t) * I);
        }
    }
    return phi;
}

// Single-input Ackermann: k^T = e_n^T C^-1 phi(A).
Eigen::RowVectorXd ackermann(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                             const std::vector<cd>& targets) {
    const Eigen::Index n = A.rows();
    Eigen::MatrixXd ctrb(n, n);
    ctrb.col(0) = b;
    for (Eigen::Index k = 1; k < n; ++k) ctrb.col(k) = A * ctrb.col(k - 1);
    Eigen::VectorXd en = Eigen::VectorXd::Zero(n);
    en(n - 1) = 1.0;
    const Eigen::VectorXd row = ctrb.transpose().fullPivLu().solve(en);
    return row.transpose() * char_poly_at(A, targets);
}

bool placement_ok(const LinearModel& model, const Eigen::MatrixXd& K, const std::vector<cd>& targets) {
    const auto eigs = closed_loop_eigs(model, FeedbackGain{K});
    return match_distance(eigs, targets) <= 1e-8 * target_scale(targets) * 10.0;
}

}  // namespace

Trajectory simulate(const LinearModel& model, const Eigen::VectorXd& x0,
                    const std::vector<Eigen::VectorXd>& inputs) {
    model.validate();
    if (x0.size() != model.n()) throw InputError("simulate: initial state has wrong length");
    Trajectory traj;
    traj.n = model.n();
    traj.m = model.m();
    traj.states.reserve(inputs.size() + 1);
    traj.states.push_back(x0);
    for (std::size_t k = 0; k < inputs.size(); ++k) {
        if (inputs[k].size() != model.m()) {
            throw InputError("simulate: input " + std::to_string(k) + " has wrong length");
        }
        traj.states.push_back(model.A * traj.states.back() + model.B * inputs[k]);
    }
    traj.inputs = inputs;
    return traj;
}

LinearModel perturb(const LinearModel& model, const PerturbationSpec& spec) {
    model.validate();
    if (!(spec.sigma > 0.0)) throw InputError("perturbation sigma must be positive");
    std::mt19937_64 rng(spec.seed);
    auto draw = [&]() {
        if (spec.distribution == Distribution::uniform) {
            return std::uniform_real_distribution<double>(0.0, spec.sigma)(rng);
        }
        return std::normal_distribution<double>(0.0, spec.sigma)(rng);
    };
    LinearModel out = model;
    for (Eigen::Index j = 0; j < out.A.cols(); ++j)
        for (Eigen::Index i = 0; i < out.A.rows(); ++i) out.A(i, j) += draw();
    for (Eigen::Index j = 0; j < out.B.cols(); ++j)
        for (Eigen::Index i = 0; i < out.B.rows(); ++i) out.B(i, j) += draw();
    out.provenance = Provenance::similar;
    return out;
}

std::vector<Eigen::VectorXd> pe_inputs(int m, int length, int order, std::uint64_t seed) {
    if (m < 1 || order < 1) throw InputError("pe_inputs: m and order must be positive");
    if (length < (m + 1) * order) {
        throw InputError("pe_inputs: length " + std::to_string(length) +
                         " is below the minimum (m+1)*order = " + std::to_string((m + 1) * order));
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<Eigen::VectorXd> u(static_cast<std::size_t>(length), Eigen::VectorXd(m));
        for (auto& v : u)
            for (int i = 0; i < m; ++i) v(i) = dist(rng);
        if (persistency_order(u, order)) return u;
    }
    throw NumericalError("pe_inputs: could not draw a persistently exciting sequence");
}

double spectral_radius(const Eigen::MatrixXd& A) {
    return Eigen::EigenSolver<Eigen::MatrixXd>(A, false).eigenvalues().cwiseAbs().maxCoeff();
}

LinearModel random_model(int n, int m, double spectral_radius_target, std::uint64_t seed) {
    if (n < 1 || m < 0) throw InputError("random_model: need n >= 1 and m >= 0");
    if (!(spectral_radius_target > 0.0)) throw InputError("random_model: spectral radius must be positive");
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < 100; ++attempt) {
        LinearModel model;
        model.A = gaussian_matrix(n, n, rng);
        const double rho = spectral_radius(model.A);
        if (rho < 1e-8) continue;
        model.A *= spectral_radius_target / rho;
        model.B = gaussian_matrix(n, m, rng);
        model.provenance = Provenance::truth;
        if (m == 0 || is_controllable(model)) return model;
    }
    throw NumericalError("random_model: failed to draw a controllable system");
}

bool is_controllable(const LinearModel& model, const RankPolicy& policy) {
    model.validate();
    const Eigen::Index n = model.n();
    if (model.m() == 0) return false;
    const Eigen::VectorXcd eigs = Eigen::EigenSolver<Eigen::MatrixXd>(model.A, false).eigenvalues();
    Eigen::MatrixXcd pbh(n, n + model.m());
    pbh.rightCols(model.m()) = model.B.cast<cd>();
    for (Eigen::Index k = 0; k < eigs.size(); ++k) {
        pbh.leftCols(n) = model.A.cast<cd>() - eigs(k) * Eigen::MatrixXcd::Identity(n, n);
        const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(pbh).singularValues();
        if (policy.rank(sv, pbh.rows(), pbh.cols()) < n) return false;
    }
    return true;
}

FeedbackGain pole_place(const LinearModel& model, const std::vector<cd>& targets, std::uint64_t seed) {
    model.validate();
    const int n = model.n();
    const int m = model.m();
    if (static_cast<int>(targets.size()) != n) {
        throw InputError("pole_place: need exactly n = " + std::to_string(n) + " targets");
    }
    check_conjugate_closed(targets);
    if (!is_controllable(model)) throw InputError("pole_place: (A, B) is not controllable");

    if (m == n) {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(model.B);
        const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(model.B).singularValues();
        if (lu.isInvertible() && sv(n - 1) > 1e-12 * sv(0)) {
            return FeedbackGain{lu.solve(model.A - real_spectrum_matrix(targets))};
        }
    }
    if (m == 1) {
        return FeedbackGain{ackermann(model.A, model.B.col(0), targets)};
    }

    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < 10; ++attempt) {
        const Eigen::MatrixXd k0 = gaussian_matrix(m, n, rng);
        Eigen::VectorXd v = gaussian_matrix(m, 1, rng);
        v.normalize();
        LinearModel reduced;
        reduced.A = model.A - model.B * k0;
        reduced.B = model.B * v;
        if (!is_controllable(reduced)) continue;
        const Eigen::RowVectorXd k = ackermann(reduced.A, reduced.B.col(0), targets);
        Eigen::MatrixXd K = k0 + v * k;
        if (placement_ok(model, K, targets)) return FeedbackGain{std::move(K)};
    }
    throw NumericalError("pole_place: single-input reduction failed after 10 attempts");
}

std::vector<cd> closed_loop_eigs(const LinearModel& model, const FeedbackGain& gain) {
    model.validate();
    if (gain.K.rows() != model.m() || gain.K.cols() != model.n()) {
        throw InputError("closed_loop_eigs: K must be m x n");
    }
    const Eigen::MatrixXd closed = model.A - model.B * gain.K;
    const Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(closed, false).eigenvalues();
    std::vector<cd> out(ev.data(), ev.data() + ev.size());
    std::sort(out.begin(), out.end(), [](const cd& a, const cd& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return out;
}

double match_distance(const std::vector<cd>& a, const std::vector<cd>& b) {
    if (a.size() != b.size()) throw InputError("match_distance: sets differ in size");
    const std::size_t n = a.size();
    if (n == 0) return 0.0;
    // Hungarian algorithm (shortest augmenting path, 1-based potentials).
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    std::vector<bool> used(n + 1);
    auto cost = [&](std::size_t i, std::size_t j) { return std::abs(a[i - 1] - b[j - 1]); };
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), false);
        do {
            used[j0] = true;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0, j) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    double worst = 0.0;
    for (std::size_t j = 1; j <= n; ++j) worst = std::max(worst, cost(p[j], j));
    return worst;
}

}  // namespace transid
