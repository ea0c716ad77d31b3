#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "test_support.hpp"
#include "transid/errors.hpp"

using namespace transid;
using testsupport::Gen;

namespace {

Trajectory small_trajectory() {
    Trajectory t;
    t.n = 2;
    t.m = 1;
    t.states = {Eigen::Vector2d(1, 2), Eigen::Vector2d(3, 4), Eigen::Vector2d(5, 6)};
    t.inputs = {Eigen::VectorXd::Constant(1, 0.5), Eigen::VectorXd::Constant(1, -0.25)};
    return t;
}

std::string error_of(const std::string& csv) {
    try {
        parse_trajectory_csv(csv);
    } catch (const InputError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("snapshot and stack layout") {
    const Trajectory t = small_trajectory();
    Eigen::VectorXd h0(5);
    h0 << 1, 2, 0.5, 3, 4;
    CHECK((snapshot(t, 0) - h0).norm() == 0.0);
    CHECK_THROWS_AS(snapshot(t, 2), InputError);

    const StackedData d = stack(t);
    CHECK(d.matrix.rows() == 5);
    CHECK(d.matrix.cols() == 2);
    CHECK(d.lambda() == 3);
    CHECK(d.x_minus()(1, 1) == 4);
    CHECK(d.u_minus()(0, 1) == -0.25);
    CHECK(d.x_plus()(0, 1) == 5);

    const std::vector<Trajectory> two = {t, t};
    CHECK(stack(two).matrix.cols() == 4);

    Trajectory other = t;
    other.m = 0;
    other.inputs.assign(2, Eigen::VectorXd(0));
    const std::vector<Trajectory> mixed = {t, other};
    CHECK_THROWS_AS(stack(mixed), InputError);
}

TEST_CASE("trajectory validation") {
    Trajectory t = small_trajectory();
    CHECK_NOTHROW(t.validate());
    t.states.pop_back();
    CHECK_THROWS_AS(t.validate(), InputError);
    t = small_trajectory();
    t.inputs[1] = Eigen::Vector2d(1, 1);
    CHECK_THROWS_AS(t.validate(), InputError);
    t = small_trajectory();
    t.states[0](0) = std::nan("");
    CHECK_THROWS_AS(t.validate(), InputError);
}

TEST_CASE("stacked simulation satisfies the state equation") {
    Gen g(11);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = g.integer(1, 5), m = g.integer(0, 3);
        const LinearModel model = testsupport::random_model(g, n, m);
        const StackedData d = stack(testsupport::random_trajectory(g, model, 20));
        const Eigen::MatrixXd resid = d.x_plus() - model.A * d.x_minus() - model.B * d.u_minus();
        CHECK(resid.norm() < 1e-12 * std::max(1.0, d.matrix.norm()));
    }
}

TEST_CASE("persistency of excitation") {
    std::vector<Eigen::VectorXd> steps;
    for (int k = 0; k < 12; ++k) steps.push_back(Eigen::VectorXd::Constant(1, (k / 2) % 2 ? 1.0 : -1.0));
    CHECK(persistency_order(steps, 2));
    CHECK_FALSE(persistency_order(steps, 3));  // period 4, two modes

    std::vector<Eigen::VectorXd> constant(10, Eigen::VectorXd::Constant(1, 1.0));
    CHECK(persistency_order(constant, 1));
    CHECK_FALSE(persistency_order(constant, 2));

    // Too few Hankel columns for full row rank.
    std::vector<Eigen::VectorXd> two(3, Eigen::Vector2d(1, 0));
    two[1] = Eigen::Vector2d(0, 1);
    CHECK_FALSE(persistency_order(two, 2));
    CHECK_THROWS_AS(persistency_order(two, 4), InputError);
    CHECK_THROWS_AS(persistency_order(two, 0), InputError);
}

TEST_CASE("CSV round trip and layout") {
    const Trajectory t = small_trajectory();
    const std::string csv = format_trajectory_csv(t);
    CHECK(csv.rfind("t,x1,x2,u1\n0,1,2,0.5\n", 0) == 0);
    CHECK(csv.find("\n2,5,6,\n") != std::string::npos);
    const Trajectory back = parse_trajectory_csv(csv);
    CHECK(back.n == 2);
    CHECK(back.m == 1);
    CHECK(back.length() == 2);
    CHECK((stack(back).matrix - stack(t).matrix).norm() == 0.0);

    Gen g(12);
    const LinearModel model = testsupport::random_model(g, 3, 2);
    const Trajectory r = testsupport::random_trajectory(g, model, 7);
    CHECK((stack(parse_trajectory_csv(format_trajectory_csv(r))).matrix - stack(r).matrix).norm() == 0.0);
    CHECK((stack(parse_trajectory_json(format_trajectory_json(r))).matrix - stack(r).matrix).norm() == 0.0);
}

TEST_CASE("CSV with only the initial state has no transitions") {
    const Trajectory t = parse_trajectory_csv("t,x1,u1\n0,1.5,\n");
    CHECK(t.length() == 0);
    CHECK(t.states.size() == 1);
    CHECK_THROWS_AS(parse_trajectory_csv(""), InputError);
    CHECK_THROWS_AS(parse_trajectory_csv("t,x1,u1\n"), InputError);
}

TEST_CASE("CSV errors name the offending line") {
    CHECK(error_of("t,x1,u1\n0,1,2\n1,abc,3\n2,1,\n").find("line 3") != std::string::npos);
    CHECK(error_of("t,x1,u1\n0,1,2\n2,1,\n").find("line 3") != std::string::npos);
    CHECK(error_of("t,x1,u1\n0,1,2\n1,1\n").find("line 3") != std::string::npos);
    CHECK(error_of("t,x1,u1\n0,1,2\n1,1,4\n").find("line 3") != std::string::npos);
    CHECK(error_of("t,x1,u1\n0,1,\n1,1,\n").find("line 2") != std::string::npos);
    CHECK(error_of("time,x1\n0,1\n").find("line 1") != std::string::npos);
    CHECK(error_of("t,x2\n0,1\n").find("line 1") != std::string::npos);
    CHECK(error_of("t,x1\n0,inf\n").find("line 2") != std::string::npos);
}

TEST_CASE("JSON errors") {
    CHECK_THROWS_AS(parse_trajectory_json(""), InputError);
    CHECK_THROWS_AS(parse_trajectory_json("{"), InputError);
    CHECK_THROWS_AS(parse_trajectory_json(R"({"n":1,"m":1,"states":[[1],[2]],"inputs":[]})"), InputError);
    const Trajectory t = parse_trajectory_json(R"({"n":1,"m":1,"states":[[1],[2]],"inputs":[[3]]})");
    CHECK(t.length() == 1);
}

TEST_CASE("file round trip chooses the format from the extension") {
    const auto dir = std::filesystem::temp_directory_path() / "transid_datamat_test";
    std::filesystem::create_directories(dir);
    const Trajectory t = small_trajectory();
    CHECK(format_from_path(dir / "a.json") == TrajectoryFormat::json);
    CHECK(format_from_path(dir / "a.csv") == TrajectoryFormat::csv);
    for (const char* name : {"a.csv", "a.json"}) {
        save_trajectory(t, dir / name);
        CHECK((stack(load_trajectory(dir / name)).matrix - stack(t).matrix).norm() == 0.0);
    }
    CHECK_THROWS_AS(load_trajectory(dir / "missing.csv"), InputError);
    std::ofstream(dir / "empty.csv").close();
    CHECK_THROWS_AS(load_trajectory(dir / "empty.csv"), InputError);
    std::filesystem::remove_all(dir);
}
