#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "sscosamp/recovery.hpp"
#include "sscosamp/rng.hpp"
#include "sscosamp/sensing.hpp"

using namespace sscosamp;

namespace {

CVector complex_normal(Rng& rng, int n) {
    CVector v(n);
    for (int i = 0; i < n; ++i) v[i] = Complex(rng.normal(), rng.normal());
    return v;
}

// A acting on a complex vector, written out the slow way
CVector apply_real(const RMatrix& A, const CVector& v) {
    return (A * v.real()).cast<Complex>() + Complex(0.0, 1.0) * (A * v.imag()).cast<Complex>();
}

} // namespace

TEST_CASE("zero measurements collapse to the zero estimate immediately") {
    Dictionary dict(8, 16);
    RMatrix A = RMatrix::Identity(8, 8);
    RecoveryConfig config;
    config.k = 2;
    config.backend = Backend::Oracle;
    auto [xhat, state] = recover(A, dict, CVector::Zero(8), config);
    CHECK(xhat.norm() == 0.0);
    CHECK(state.estimate.norm() == 0.0);
    CHECK(state.iteration == 1);
    CHECK(state.residual.norm() == 0.0);
}

TEST_CASE("one-sparse identity sensing recovers in a single iteration") {
    Dictionary dict(8, 16);
    RMatrix A = RMatrix::Identity(8, 8);
    CVector alpha = CVector::Zero(16);
    alpha[11] = Complex(0.8, -1.7);
    CVector y = dict.synthesize(alpha);

    RecoveryConfig config;
    config.k = 1;
    config.backend = Backend::Oracle;
    auto [xhat, state] = recover(A, dict, y, config);
    CHECK((xhat - y).norm() < 1e-10);
    CHECK(state.iteration == 1);
    CHECK(state.support.indices == std::vector<int>{11});
}

TEST_CASE("recovery validates dimensions") {
    Dictionary dict(8, 16);
    RecoveryConfig config;
    config.k = 2;
    CHECK_THROWS_AS(recover(RMatrix::Identity(8, 4), dict, CVector::Zero(8), config),
                    std::invalid_argument);
    CHECK_THROWS_AS(recover(RMatrix::Identity(8, 8), dict, CVector::Zero(4), config),
                    std::invalid_argument);
    CHECK_THROWS_AS(recover(RMatrix::Random(9, 8), dict, CVector::Zero(9), config),
                    std::invalid_argument);
    config.k = 5; // identification needs 2k <= n
    CHECK_THROWS_AS(recover(RMatrix::Identity(8, 8), dict, CVector::Zero(8), config),
                    std::invalid_argument);
    config.k = 0;
    CHECK_THROWS_AS(recover(RMatrix::Identity(8, 8), dict, CVector::Zero(8), config),
                    std::invalid_argument);
}

TEST_CASE("projection onto a support matches the normal-equations oracle") {
    Dictionary dict(8, 16);
    Rng rng(19);
    CVector w = complex_normal(rng, 8);

    SupportSet support({0, 8}, 16);
    CVector projected = project_onto_support(dict, support, w);
    CMatrix cols = dict.columns(support);
    CVector reference = oracles::project_via_normal_equations(cols, w);
    CHECK((projected - reference).norm() < 1e-10);

    // idempotence and contraction
    CHECK((project_onto_support(dict, support, projected) - projected).norm() < 1e-10);
    CHECK(projected.norm() <= w.norm() + 1e-12);

    // deflated vector is orthogonal to the span, so its projection vanishes
    CVector deflated = w - projected;
    CHECK(project_onto_support(dict, support, deflated).norm() < 1e-10);

    CHECK(project_onto_support(dict, SupportSet({}, 16), w).norm() == 0.0);

    Dictionary square(8, 8);
    std::vector<int> all;
    for (int i = 0; i < 8; ++i) all.push_back(i);
    CHECK((project_onto_support(square, SupportSet(all, 8), w) - w).norm() < 1e-10);
}

TEST_CASE("constrained least squares agrees with the dense oracle") {
    Dictionary dict(8, 16);
    Rng rng(37);
    RMatrix A = gaussian_matrix(6, 8, 91);

    CHECK(constrained_least_squares(A, dict, SupportSet({}, 16), CVector::Zero(6)).norm() == 0.0);

    SupportSet T({1, 6, 12}, 16);
    CMatrix composed(6, 3);
    CMatrix cols = dict.columns(T);
    for (int i = 0; i < 3; ++i) composed.col(i) = apply_real(A, cols.col(i));

    // consistent right-hand side: solution reproduces it exactly
    CVector beta_true = complex_normal(rng, 3);
    CVector y_consistent = composed * beta_true;
    CVector w_consistent = constrained_least_squares(A, dict, T, y_consistent);
    CHECK((apply_real(A, w_consistent) - y_consistent).norm() < 1e-10);

    // general right-hand side: matches the normal-equations solution and the
    // residual is orthogonal to the range of the composed operator
    CVector y = complex_normal(rng, 6);
    CVector w = constrained_least_squares(A, dict, T, y);
    CVector beta_ref = oracles::normal_equations_solve(composed, y);
    CHECK((w - cols * beta_ref).norm() < 1e-8);
    CVector residual = y - apply_real(A, w);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(composed.col(i).dot(residual)) < 1e-8);
}

TEST_CASE("state invariants hold after every iteration for every backend") {
    Dictionary dict(64, 128);
    RMatrix A = gaussian_matrix(40, 64, 7);
    Rng rng(43);
    for (Backend backend : {Backend::Omp, Backend::Cosamp, Backend::L1}) {
        CVector alpha = CVector::Zero(128);
        for (int i = 0; i < 4; ++i)
            alpha[32 * i + static_cast<int>(rng.uniform_int(8))] =
                Complex(rng.normal(), rng.normal());
        CVector y = apply_real(A, dict.synthesize(alpha));

        RecoveryConfig config;
        config.k = 4;
        config.backend = backend;
        int observed = 0;
        config.on_iteration = [&](const SSCoSaMPState& state) {
            ++observed;
            CHECK(state.support.size() <= config.k);
            CHECK((state.residual - (y - apply_real(A, state.estimate))).norm() < 1e-10);
            CVector reproj = project_onto_support(dict, state.support, state.estimate);
            CHECK((reproj - state.estimate).norm() < 1e-10);
            CHECK(state.residual_history.size() == static_cast<std::size_t>(state.iteration) + 1);
        };
        auto [xhat, state] = recover(A, dict, y, config);
        CHECK(observed == state.iteration);

        // the update step only ever improves on the previous iterate
        for (std::size_t i = 0; i < state.update_residual_history.size(); ++i)
            CHECK(state.update_residual_history[i] <= state.residual_history[i] + 1e-10);
    }
}

TEST_CASE("returned state is rewound to the best iterate") {
    Dictionary dict(64, 128);
    RMatrix A = gaussian_matrix(24, 64, 11);
    Rng rng(47);
    // clustered support makes greedy identification oscillate
    CVector alpha = CVector::Zero(128);
    int start = static_cast<int>(rng.uniform_int(128));
    for (int i = 0; i < 4; ++i) alpha[(start + i) % 128] = Complex(rng.normal(), rng.normal());
    CVector y = apply_real(A, dict.synthesize(alpha));

    RecoveryConfig config;
    config.k = 4;
    config.backend = Backend::Omp;
    auto [xhat, state] = recover(A, dict, y, config);
    double best = *std::min_element(state.residual_history.begin(), state.residual_history.end());
    CHECK(state.residual.norm() <= best + 1e-12);
    CHECK((state.residual - (y - apply_real(A, state.estimate))).norm() < 1e-10);
    CHECK((xhat - state.estimate).norm() == 0.0);
}

TEST_CASE("recovery is deterministic") {
    Dictionary dict(64, 128);
    RMatrix A = gaussian_matrix(32, 64, 5);
    Rng rng(53);
    CVector alpha = CVector::Zero(128);
    for (int i = 0; i < 4; ++i)
        alpha[32 * i + static_cast<int>(rng.uniform_int(8))] = Complex(rng.normal(), rng.normal());
    CVector y = apply_real(A, dict.synthesize(alpha));

    RecoveryConfig config;
    config.k = 4;
    config.backend = Backend::Cosamp;
    auto [x1, s1] = recover(A, dict, y, config);
    auto [x2, s2] = recover(A, dict, y, config);
    CHECK((x1 - x2).norm() == 0.0);
    REQUIRE(s1.residual_history.size() == s2.residual_history.size());
    for (std::size_t i = 0; i < s1.residual_history.size(); ++i)
        CHECK(s1.residual_history[i] == s2.residual_history[i]);
}

TEST_CASE("oracle backend with identity sensing is exact on separated supports") {
    Dictionary dict(8, 16);
    RMatrix A = RMatrix::Identity(8, 8);
    Rng rng(59);
    RecoveryConfig config;
    config.k = 2;
    config.backend = Backend::Oracle;
    for (const auto& indices : oracles::separated_supports(16, 2, 4)) {
        CVector alpha = CVector::Zero(16);
        for (int idx : indices) alpha[idx] = Complex(rng.normal(), rng.normal());
        CVector y = dict.synthesize(alpha);
        auto [xhat, state] = recover(A, dict, y, config);
        CHECK((xhat - y).norm() < 1e-8 * y.norm());
    }
}

TEST_CASE("gaussian sensing with separated spectra recovers at half-rate measurements") {
    Dictionary dict(256, 1024);
    RecoveryConfig config;
    config.k = 8;
    config.backend = Backend::Omp;
    int perfect = 0;
    const int trials = 12;
    for (int t = 0; t < trials; ++t) {
        InstanceOptions options;
        options.structure = SupportStructure::Separated;
        options.h_min = 64;
        options.model.kind = ValueModel::ComplexGaussian;
        SensingInstance instance = make_instance(dict, 128, 8, options, derive_seed(977, t));
        auto [xhat, state] = recover(instance.A, dict, instance.y, config);
        RecoveryReport report = evaluate(instance, xhat, state);
        if (report.perfect) ++perfect;
    }
    CHECK(perfect >= 10);
}
