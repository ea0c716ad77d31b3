#include <doctest.h>

#include "test_support.hpp"
#include "transid/errors.hpp"
#include "transid/experiment.hpp"

using namespace transid;

namespace {

std::vector<ExperimentConfig> mixed_configs(int count) {
    std::vector<ExperimentConfig> out;
    for (int i = 0; i < count; ++i) {
        ExperimentConfig c;
        c.n = 1 + i % 4;
        c.m = 1 + (i / 4) % 4;
        c.sigma = i % 2 ? 0.05 : 0.5;
        c.seed = static_cast<std::uint64_t>(1000 + i);
        out.push_back(c);
    }
    return out;
}

bool same(const ExperimentSummary& a, const ExperimentSummary& b) {
    return a.seed == b.seed && a.completed == b.completed && a.steps == b.steps &&
           a.fresh_steps == b.fresh_steps && a.final_d_to_truth == b.final_d_to_truth &&
           a.final_frob_err == b.final_frob_err && a.max_similar_drop == b.max_similar_drop &&
           a.max_truth_rise == b.max_truth_rise && a.max_truth_bound_excess == b.max_truth_bound_excess &&
           a.max_similar_bound_excess == b.max_similar_bound_excess && a.error == b.error;
}

}  // namespace

TEST_CASE("experiment setup") {
    ExperimentConfig c;
    c.n = 3;
    c.m = 2;
    c.seed = 4;
    const ExperimentSetup s = make_experiment(c);
    CHECK(s.similar_data.matrix.rows() == 8);
    CHECK(s.similar_data.matrix.cols() == c.similar_length);
    CHECK(s.true_trajectory.length() == static_cast<std::size_t>(5 + c.extra_true_steps));
    CHECK(is_controllable(s.truth));
    CHECK(spectral_radius(s.truth.A) == doctest::Approx(c.truth_radius));
    CHECK(parameter_distance(s.truth, s.similar) > 0.0);

    const ExperimentSetup again = make_experiment(c);
    CHECK((again.similar_data.matrix - s.similar_data.matrix).norm() == 0.0);
    CHECK(parameter_distance(again.truth, s.truth) == 0.0);

    ExperimentConfig bad = c;
    bad.sigma = 0.0;
    CHECK_THROWS_AS(make_experiment(bad), InputError);
    bad = c;
    bad.similar_length = 3;
    CHECK_THROWS_AS(make_experiment(bad), InputError);
}

TEST_CASE("runs complete with monotone distances") {
    for (const auto& c : mixed_configs(32)) {
        const ExperimentSetup s = make_experiment(c);
        const RunResult r = run_experiment(s, true);
        CHECK(r.completed);
        CHECK(r.steps == c.n + c.m);
        REQUIRE(!r.trace.empty());
        CHECK(*r.trace.back().d_to_truth < 1e-8);
        CHECK(r.trace.back().bounds->gamma == 0.0);
        CHECK(parameter_distance(r.final_model, s.truth) < 1e-7);

        const ExperimentSummary sum = summarize(s, true);
        CHECK_FALSE(sum.error);
        CHECK(sum.dims_preserved);
        CHECK(sum.max_similar_drop <= 1e-9);
        CHECK(sum.max_truth_rise <= 1e-9);
        CHECK(sum.max_consistency_residual < 1e-8);
        CHECK(sum.max_gap_excess <= 1e-9);
        CHECK(sum.max_truth_bound_excess <= 1e-9);
        CHECK(sum.max_similar_bound_excess <= 1e-9);
    }
}

TEST_CASE("one-state one-input runs finish within two fresh steps") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        ExperimentConfig c;
        c.n = 1;
        c.m = 1;
        c.seed = seed;
        const ExperimentSummary s = summarize(make_experiment(c), false);
        CHECK(s.completed);
        CHECK(s.fresh_steps <= 2);
    }
}

TEST_CASE("autonomous experiments") {
    ExperimentConfig c;
    c.n = 3;
    c.m = 0;
    c.seed = 9;
    const ExperimentSetup s = make_experiment(c);
    const RunResult r = run_experiment(s, false);
    CHECK(r.completed);
    CHECK(r.steps == 3);
    CHECK(parameter_distance(r.final_model, s.truth) < 1e-9);
}

TEST_CASE("identification without a known truth leaves truth fields empty") {
    ExperimentConfig c;
    c.seed = 3;
    const ExperimentSetup s = make_experiment(c);
    const RunResult r = run_identification(s.similar_data, s.true_trajectory, c.policy);
    REQUIRE(!r.trace.empty());
    CHECK_FALSE(r.trace.front().d_to_truth.has_value());
    CHECK_FALSE(r.trace.front().bounds.has_value());

    Trajectory empty;
    empty.n = c.n;
    empty.m = c.m;
    empty.states = {Eigen::VectorXd::Zero(c.n)};
    const RunResult none = run_identification(s.similar_data, empty, c.policy);
    CHECK(none.trace.empty());
    CHECK_FALSE(none.completed);
    CHECK(parameter_distance(none.final_model, s.similar) < 1e-9);
    CHECK(none.final_model.provenance == Provenance::similar);

    Trajectory wrong = empty;
    wrong.n = c.n + 1;
    wrong.states = {Eigen::VectorXd::Zero(c.n + 1)};
    CHECK_THROWS_AS(run_identification(s.similar_data, wrong, c.policy), InputError);
}

TEST_CASE("serial and parallel batches agree exactly") {
    const auto configs = mixed_configs(24);
    const auto serial = run_batch_serial(configs, true);
    const auto parallel = run_batch_parallel(configs, true);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) CHECK(same(serial[i], parallel[i]));

    // Errors are reported per entry, not thrown.
    auto bad = configs;
    bad[3].sigma = -1.0;
    const auto out = run_batch_parallel(bad, false);
    CHECK(out[3].error);
    CHECK_FALSE(out[2].error);
}
