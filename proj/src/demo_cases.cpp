#include "transid/demo_cases.hpp"

namespace transid::demo {

namespace {

Eigen::VectorXd vec3(double a, double b, double c) {
    Eigen::VectorXd v(3);
    v << a, b, c;
    return v;
}

}  // namespace

ScalarCase scalar_case() {
    ScalarCase c;
    c.similar.n = 1;
    c.similar.m = 1;
    c.similar.matrix.resize(3, 2);
    c.similar.matrix << 1, 0,
                        0, 1,
                        0.7, 0.7;
    c.snapshot = vec3(1, 1, 1);
    c.adversarial_basis.resize(3, 2);
    c.adversarial_basis << 1, 1.09302,
                           1, 1,
                           1, 1.4651;
    return c;
}

PolePlaceCase pole_place_case() {
    PolePlaceCase c;
    c.truth.A.resize(3, 3);
    c.truth.A << 1.01, 0.01, 0,
                 0.01, 1.01, 0.01,
                 0, 0.01, 1.01;
    c.truth.B = Eigen::MatrixXd::Identity(3, 3);
    c.truth.provenance = Provenance::truth;

    c.similar.A.resize(3, 3);
    c.similar.A << 0.0560, -0.2909, 0.1998,
                   -1.0053, 0.2756, -0.4477,
                   0.1049, 0.3415, 1.5790;
    c.similar.B.resize(3, 3);
    c.similar.B << 0.6828, 0.1730, 0.1366,
                   -0.0453, 1.6228, 0.0700,
                   -0.1402, 0.1571, 0.6139;
    c.similar.provenance = Provenance::similar;

    // u(1) is printed as [-1, 1, 1]; only [-1, 1, -1] reproduces the printed states.
    c.trajectory.n = 3;
    c.trajectory.m = 3;
    c.trajectory.inputs = {vec3(1, 1, 1), vec3(-1, 1, -1), vec3(1, -1, 1), vec3(1, -1, -1)};
    c.trajectory.states = {vec3(1, -1, -1), vec3(2, -0.01, -0.02), vec3(1.0199, 1.0097, -1.0203),
                           vec3(2.0402, 0.0198, -0.0204), vec3(3.0608, -0.9598, -1.0204)};

    c.printed_estimate.A.resize(3, 3);
    c.printed_estimate.A << 0.7857, 0.1184, -0.5471,
                            -0.3831, 1.0674, -1.0759,
                            0.0984, 0.3010, 1.5753;
    c.printed_estimate.B.resize(3, 3);
    c.printed_estimate.B << 1.1150, 0.1123, -0.4416,
                            0.0717, 1.0648, -0.7718,
                            0.2814, 0.2876, 1.1888;
    c.printed_estimate.provenance = Provenance::step;
    c.printed_estimate.step = 3;

    c.printed_k_estimate.resize(3, 3);
    c.printed_k_estimate << 0.3218, -0.0667, -0.1242,
                            -0.3204, 1.4221, -0.4062,
                            0.0841, -0.0751, 0.8219;
    c.printed_k_similar.resize(3, 3);
    c.printed_k_similar << -0.5301, -0.6005, 0.0865,
                           -0.6435, 0.4480, -0.3363,
                           0.2145, 0.3045, 1.4562;

    c.targets = {-0.5, 0.5, 0.75};
    c.printed_poles_estimate = {-0.4844, 0.2565, 0.6921};
    c.printed_poles_similar = {-0.3319, 0.1477, 1.8401};
    return c;
}

StackedData PolePlaceCase::similar_data() const {
    StackedData d;
    d.n = similar.n();
    d.m = similar.m();
    const int lambda = d.n + d.m;
    d.matrix.resize(2 * d.n + d.m, lambda);
    d.matrix.topRows(lambda).setIdentity();
    d.matrix.bottomRows(d.n) = similar.stacked();
    return d;
}

DistanceCase distance_case() {
    DistanceCase c;
    c.d0.resize(3, 2);
    c.d0 << 1, 0, 0, 1, 1, 1;
    c.d1.resize(3, 2);
    c.d1 << 1, 0, 0, 1, 1.0149, 1.0619;
    c.d2.resize(3, 2);
    c.d2 << 1, 0, 0, 1, 1.0268, 1.0633;
    return c;
}

}  // namespace transid::demo
