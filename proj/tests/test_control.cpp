#include <doctest.h>

#include "test_support.hpp"
#include "transid/demo_cases.hpp"
#include "transid/errors.hpp"

using namespace transid;
using testsupport::Gen;
using cd = std::complex<double>;

namespace {

std::vector<cd> oracle_eigs(const Eigen::MatrixXd& M) {
    return testsupport::poly_roots(testsupport::char_poly(M));
}

std::vector<cd> real_targets(Gen& g, int n) {
    std::vector<cd> t;
    for (int i = 0; i < n; ++i) t.emplace_back(g.uniform(-0.9, 0.9), 0.0);
    return t;
}

}  // namespace

TEST_CASE("simulate") {
    LinearModel pass;
    pass.A = Eigen::MatrixXd::Zero(2, 2);
    pass.B = Eigen::MatrixXd::Identity(2, 2);
    const std::vector<Eigen::VectorXd> u = {Eigen::Vector2d(1, 2), Eigen::Vector2d(-3, 4)};
    const Trajectory t = simulate(pass, Eigen::Vector2d(9, 9), u);
    REQUIRE(t.states.size() == 3);
    CHECK((t.states[1] - u[0]).norm() == 0.0);
    CHECK((t.states[2] - u[1]).norm() == 0.0);
    CHECK_THROWS_AS(simulate(pass, Eigen::Vector3d(1, 1, 1), u), InputError);
    CHECK_THROWS_AS(simulate(pass, Eigen::Vector2d(1, 1), {Eigen::Vector3d(1, 1, 1)}), InputError);

    const auto c = demo::pole_place_case();
    const Trajectory sim = simulate(c.truth, c.trajectory.states[0], c.trajectory.inputs);
    for (std::size_t k = 0; k < sim.states.size(); ++k) {
        CHECK((sim.states[k] - c.trajectory.states[k]).cwiseAbs().maxCoeff() < 1e-4);
    }
}

TEST_CASE("perturb") {
    Gen g(41);
    const LinearModel base = testsupport::random_model(g, 3, 2);
    for (double sigma : {1e-3, 0.05, 0.5}) {
        const LinearModel p = perturb(base, {Distribution::uniform, sigma, 7});
        CHECK(parameter_distance(p, base) <= sigma * std::sqrt(3.0 * 5.0));
        const Eigen::MatrixXd d = p.stacked() - base.stacked();
        CHECK(d.minCoeff() >= 0.0);
        CHECK(d.maxCoeff() <= sigma);
        CHECK(p.provenance == Provenance::similar);
    }
    const LinearModel a = perturb(base, {Distribution::gaussian, 0.1, 99});
    const LinearModel b = perturb(base, {Distribution::gaussian, 0.1, 99});
    CHECK(parameter_distance(a, b) == 0.0);
    CHECK(parameter_distance(a, perturb(base, {Distribution::gaussian, 0.1, 100})) > 0.0);
    CHECK_THROWS_AS(perturb(base, {Distribution::uniform, 0.0, 1}), InputError);

    // Gaussian perturbations average out.
    const double sigma = 0.5;
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(3, 5);
    for (int s = 0; s < 1000; ++s) {
        mean += perturb(base, {Distribution::gaussian, sigma, static_cast<std::uint64_t>(s)}).stacked() -
                base.stacked();
    }
    mean /= 1000.0;
    CHECK(mean.cwiseAbs().maxCoeff() <= 3.0 * sigma / std::sqrt(1000.0));
}

TEST_CASE("persistently exciting inputs") {
    const auto u = pe_inputs(1, 10, 2, 3);
    CHECK(u.size() == 10);
    CHECK(persistency_order(u, 2));
    const auto v = pe_inputs(1, 10, 2, 3);
    for (std::size_t k = 0; k < u.size(); ++k) CHECK(u[k](0) == v[k](0));
    CHECK_THROWS_AS(pe_inputs(2, 2 * 3 - 1, 3, 1), InputError);
    CHECK_THROWS_AS(pe_inputs(2, 8, 3, 1), InputError);  // below (m+1)*order
    const auto w = pe_inputs(3, 40, 4, 5);
    CHECK(persistency_order(w, 4));
    for (const auto& x : w) CHECK(x.cwiseAbs().maxCoeff() <= 1.0);
}

TEST_CASE("random models") {
    Gen g(42);
    for (int t = 0; t < 50; ++t) {
        const int n = g.integer(1, 6), m = g.integer(0, 3);
        const LinearModel model = testsupport::random_model(g, n, m, 0.8);
        CHECK(spectral_radius(model.A) == doctest::Approx(0.8).epsilon(1e-9));
        if (m > 0) CHECK(is_controllable(model));
    }
    const LinearModel a = random_model(3, 2, 0.9, 5), b = random_model(3, 2, 0.9, 5);
    CHECK(parameter_distance(a, b) == 0.0);
}

TEST_CASE("controllability") {
    LinearModel m;
    m.A = Eigen::MatrixXd::Identity(2, 2);
    m.B = Eigen::MatrixXd(2, 1);
    m.B << 1, 0;
    CHECK_FALSE(is_controllable(m));
    m.A << 1, 1, 0, 1;
    m.B << 0, 1;
    CHECK(is_controllable(m));
    // Decoupled pair with one unreachable mode.
    m.A << 0.5, 0, 0, 0.7;
    m.B << 1, 0;
    CHECK_FALSE(is_controllable(m));
}

TEST_CASE("closed-loop eigenvalues agree with characteristic polynomial roots") {
    Gen g(43);
    for (int t = 0; t < 100; ++t) {
        const int n = g.integer(1, 6), m = g.integer(1, 3);
        LinearModel model;
        model.A = g.matrix(n, n);
        model.B = g.matrix(n, m);
        const FeedbackGain K{g.matrix(m, n)};
        const auto eigs = closed_loop_eigs(model, K);
        const auto ref = oracle_eigs(model.A - model.B * K.K);
        CHECK(match_distance(eigs, ref) < 1e-8 * std::max(1.0, spectral_radius(model.A - model.B * K.K)));
        for (std::size_t i = 1; i < eigs.size(); ++i) {
            CHECK((eigs[i - 1].real() < eigs[i].real() ||
                   (eigs[i - 1].real() == eigs[i].real() && eigs[i - 1].imag() <= eigs[i].imag())));
        }
    }
    LinearModel model;
    model.A = g.matrix(3, 3);
    model.B = g.matrix(3, 2);
    const auto open = closed_loop_eigs(model, {Eigen::MatrixXd::Zero(2, 3)});
    CHECK(match_distance(open, oracle_eigs(model.A)) < 1e-9);
    CHECK_THROWS_AS(closed_loop_eigs(model, {Eigen::MatrixXd::Zero(3, 3)}), InputError);
}

TEST_CASE("match distance and spectral radius") {
    const std::vector<cd> a = {{1, 0}, {2, 0}, {0, 1}};
    const std::vector<cd> b = {{0, 1.1}, {1.05, 0}, {2, 0}};
    CHECK(match_distance(a, b) == doctest::Approx(0.1));
    CHECK_THROWS_AS(match_distance(a, {{1, 0}}), InputError);
    Eigen::MatrixXd R(2, 2);
    R << 0, -2, 2, 0;
    CHECK(spectral_radius(R) == doctest::Approx(2.0));
}

TEST_CASE("pole placement") {
    Gen g(44);
    int square = 0, single = 0;
    for (int t = 0; t < 100; ++t) {
        const int n = g.integer(1, 5);
        const int m = t % 2 ? n : 1;
        const LinearModel model = testsupport::random_model(g, n, m);
        std::vector<cd> targets = real_targets(g, n);
        if (n >= 2 && t % 3 == 0) {
            targets[0] = {0.2, 0.3};
            targets[1] = {0.2, -0.3};
        }
        const FeedbackGain K = pole_place(model, targets);
        CHECK(K.K.rows() == m);
        CHECK(match_distance(closed_loop_eigs(model, K), targets) < 1e-8);
        (m == n ? square : single) += 1;
    }
    CHECK(square > 0);
    CHECK(single > 0);

    // Fat input matrices go through the random single-input reduction.
    for (int t = 0; t < 20; ++t) {
        const int n = g.integer(3, 5), m = g.integer(2, n - 1);
        const LinearModel model = testsupport::random_model(g, n, m);
        const auto targets = real_targets(g, n);
        const FeedbackGain K = pole_place(model, targets, g.seed());
        CHECK(match_distance(closed_loop_eigs(model, K), targets) < 1e-6);
    }

    LinearModel unc;
    unc.A = Eigen::MatrixXd::Identity(2, 2);
    unc.B = Eigen::MatrixXd(2, 1);
    unc.B << 1, 0;
    CHECK_THROWS_AS(pole_place(unc, {0.1, 0.2}), InputError);
    const LinearModel ok = testsupport::random_model(g, 2, 1);
    CHECK_THROWS_AS(pole_place(ok, {cd(0.1, 0.2), cd(0.1, 0.3)}), InputError);
    CHECK_THROWS_AS(pole_place(ok, {0.1}), InputError);
}

TEST_CASE("printed feedback gains on the three-input case") {
    const auto c = demo::pole_place_case();
    const auto e3 = closed_loop_eigs(c.truth, {c.printed_k_estimate});
    const auto es = closed_loop_eigs(c.truth, {c.printed_k_similar});
    std::vector<cd> p3, ps;
    for (double v : c.printed_poles_estimate) p3.emplace_back(v, 0.0);
    for (double v : c.printed_poles_similar) ps.emplace_back(v, 0.0);
    CHECK(match_distance(e3, p3) < 1e-3);
    CHECK(match_distance(es, ps) < 1e-3);
    CHECK(spectral_radius(c.truth.A - c.truth.B * c.printed_k_similar) > 1.0);
    CHECK(spectral_radius(c.truth.A - c.truth.B * c.printed_k_estimate) < 1.0);
}
