// End-to-end acceptance checks at the published desk scale. Each check prints
// one [PASS]/[FAIL] line; the binary exits nonzero when any check fails.
// An optional argument selects a single check by number.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "sscosamp/harness.hpp"
#include "sscosamp/recovery.hpp"
#include "sscosamp/rng.hpp"
#include "sscosamp/sensing.hpp"
#include "sscosamp/separation.hpp"

using namespace sscosamp;

namespace {

struct RateRow {
    Backend backend;
    int m = 0;
    double rate = 0.0;
};

std::vector<RateRow> phase_rates(const ResultTable& table) {
    int backend_col = 0, m_col = 0, rate_col = 0;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (table.columns[i] == "backend") backend_col = static_cast<int>(i);
        if (table.columns[i] == "m") m_col = static_cast<int>(i);
        if (table.columns[i] == "success_rate") rate_col = static_cast<int>(i);
    }
    std::vector<RateRow> rows;
    for (const auto& row : table.rows)
        rows.push_back({backend_from_name(row[static_cast<std::size_t>(backend_col)]),
                        std::stoi(row[static_cast<std::size_t>(m_col)]),
                        std::stod(row[static_cast<std::size_t>(rate_col)])});
    return rows;
}

double rate_at(const std::vector<RateRow>& rows, Backend backend, int m) {
    for (const RateRow& row : rows)
        if (row.backend == backend && row.m == m) return row.rate;
    return -1.0;
}

ExperimentSpec desk_phase_spec(SupportStructure structure) {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::Phase;
    spec.n = 256;
    spec.d = 1024;
    spec.k = 8;
    spec.m_grid = {128, 256};
    spec.trials = 100;
    spec.epsilon = 0.0;
    spec.backends = {Backend::Omp, Backend::Cosamp, Backend::L1};
    spec.structure = structure;
    spec.master_seed = 20240801;
    return spec;
}

// 1: separated signals favor the omp and l1 projections at full measurements
bool check_separated_phase() {
    HarnessResult result = run_phase(desk_phase_spec(SupportStructure::Separated));
    auto rows = phase_rates(result.table);
    double omp = rate_at(rows, Backend::Omp, 256);
    double l1 = rate_at(rows, Backend::L1, 256);
    double cosamp = rate_at(rows, Backend::Cosamp, 256);
    std::printf("    separated m=256: omp %.2f l1 %.2f cosamp %.2f\n", omp, l1, cosamp);
    return omp >= 0.9 && l1 >= 0.9 && omp > cosamp && l1 > cosamp;
}

// 2: clustered signals invert the ordering in favor of cosamp
bool check_clustered_phase() {
    HarnessResult result = run_phase(desk_phase_spec(SupportStructure::Clustered));
    auto rows = phase_rates(result.table);
    double omp = rate_at(rows, Backend::Omp, 256);
    double l1 = rate_at(rows, Backend::L1, 256);
    double cosamp = rate_at(rows, Backend::Cosamp, 256);
    std::printf("    clustered m=256: omp %.2f l1 %.2f cosamp %.2f\n", omp, l1, cosamp);
    return cosamp > omp && cosamp > l1;
}

// 3: omp recovers every support exactly once the coefficient floor is met
bool check_exact_support_recovery() {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::VerifyTheorem;
    spec.n = 256;
    spec.d = 1024;
    spec.k = 8;
    spec.trials = 1000;
    spec.epsilon = 1e-3;
    spec.margin = 1.01;
    spec.mode = BoundMode::ExactGram;
    spec.master_seed = 7;
    HarnessResult result = run_verify_theorem(spec);
    const auto& row = result.table.rows.at(0);
    std::printf("    h_min=%s exact %s/%s\n", row[0].c_str(), row[9].c_str(), row[8].c_str());
    return result.passed && row[9] == "1000";
}

// 4: energy deviations stay under the separation bound, and the small-frame
// deviation is attained exactly by the extremal eigenvector
bool check_energy_deviation_bound() {
    bool ok = true;
    for (int k : {4, 8, 16}) {
        ExperimentSpec spec;
        spec.kind = ExperimentKind::VerifyLemma;
        spec.n = 256;
        spec.d = 1024;
        spec.k = k;
        spec.trials = 1000;
        spec.mode = BoundMode::ExactGram;
        spec.master_seed = 11 + k;
        for (int h : {1, 2, 4, 8, 16, 32, 64, 128})
            if (static_cast<long long>(h) * k <= 1024) spec.hmin_grid.push_back(h);
        HarnessResult result = run_verify_lemma(spec);
        ok = ok && result.passed;
        if (!result.passed) std::printf("    deviation bound violated at k=%d\n", k);
    }

    Dictionary dict(8, 16);
    double worst_gap = 0.0;
    std::vector<int> stack;
    // every two-atom support with separation at least four
    for (int p = 0; p < 16; ++p) {
        for (int q = p + 1; q < 16; ++q) {
            if (cyclic_distance(p, q, 16) < 4) continue;
            SupportSet support({p, q}, 16);
            CMatrix cols = dict.columns(support);
            CMatrix gram = cols.adjoint() * cols;
            Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram);
            double opnorm = 0.0;
            int extremal = 0;
            for (int i = 0; i < 2; ++i) {
                double dev = std::abs(eig.eigenvalues()(i) - 1.0);
                if (dev >= opnorm) {
                    opnorm = dev;
                    extremal = i;
                }
            }
            CVector alpha = CVector::Zero(16);
            alpha[p] = eig.eigenvectors()(0, extremal);
            alpha[q] = eig.eigenvectors()(1, extremal);
            double attained =
                std::abs(dict.synthesize(alpha).squaredNorm() - alpha.squaredNorm()) /
                alpha.squaredNorm();
            worst_gap = std::max(worst_gap, std::abs(attained - opnorm));
        }
    }
    std::printf("    extremal eigenvector gap %.3g\n", worst_gap);
    return ok && worst_gap <= 1e-8;
}

// 5: basis pursuit is exact at the prescribed minimum separation
bool check_l1_exactness() {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::VerifyL1;
    spec.n = 256;
    spec.d = 1024;
    spec.k = 8;
    spec.h_min = 16;
    spec.trials = 100;
    spec.master_seed = 13;
    HarnessResult result = run_verify_l1(spec);
    const auto& row = result.table.rows.at(0);
    std::printf("    max linf error %s, failures %s/100\n", row[4].c_str(), row[5].c_str());
    return result.passed && row[5] == "0";
}

// 6: backend outcomes obey the projection contract and never beat the oracle
bool check_projection_contracts() {
    Dictionary dict(8, 16);
    ProjectionConfig config;
    Rng rng(20240806);
    const Backend backends[] = {Backend::Oracle, Backend::Omp, Backend::Cosamp, Backend::L1};
    int violations = 0;
    const int calls = 10000;
    for (int call = 0; call < calls; ++call) {
        CVector w(8);
        for (int i = 0; i < 8; ++i) w[i] = Complex(rng.normal(), rng.normal());
        int s = 1 + static_cast<int>(rng.uniform_int(2));
        Backend backend = backends[call % 4];

        ProjectionOutcome outcome;
        try {
            outcome = project(backend, dict, w, s, config);
        } catch (const L1NonConvergence& e) {
            outcome = e.last;
        }
        ProjectionOutcome oracle = project_oracle(dict, w, s);

        bool good = outcome.support.size() <= s;
        CVector reproj = project_onto_support(dict, outcome.support, outcome.projected);
        good = good && (reproj - outcome.projected).norm() < 1e-10;
        CVector residual = w - outcome.projected;
        for (int idx : outcome.support.indices)
            good = good && std::abs(dict.entries().col(idx).dot(residual)) < 1e-8;
        double pyth =
            outcome.projected.squaredNorm() + outcome.residual_norm * outcome.residual_norm;
        good = good && std::abs(pyth - w.squaredNorm()) < 1e-8;
        good = good && outcome.residual_norm >= oracle.residual_norm - 1e-10;
        if (!good) ++violations;
    }
    std::printf("    %d/%d randomized calls clean\n", calls - violations, calls);
    return violations == 0;
}

// 7: brute-force bound monotonicity and the unit crossings of the exact curve
bool check_bound_curves() {
    Dictionary small(8, 16);
    bool monotone = true;
    for (int k : {2, 3}) {
        double previous = eta_bound(small, 1, k, BoundMode::BruteForce).eta;
        for (int h = 2; h * k <= 16; ++h) {
            double current = eta_bound(small, h, k, BoundMode::BruteForce).eta;
            monotone = monotone && current <= previous + 1e-12;
            previous = current;
        }
    }
    // growth in k holds below the packing limit, where supports still extend
    for (int h : {1, 2, 3}) {
        double k2 = eta_bound(small, h, 2, BoundMode::BruteForce).eta;
        double k3 = eta_bound(small, h, 3, BoundMode::BruteForce).eta;
        double k4 = eta_bound(small, h, 4, BoundMode::BruteForce).eta;
        monotone = monotone && k2 <= k3 + 1e-12 && k3 <= k4 + 1e-12;
    }

    Dictionary desk(256, 1024);
    bool crossings = true;
    for (int k : {4, 8, 16}) {
        int crossing = 0;
        for (int h = 1; static_cast<long long>(h) * k <= 1024; ++h) {
            if (eta_bound(desk, h, k, BoundMode::ExactGram).eta < 1.0) {
                crossing = h;
                break;
            }
        }
        std::printf("    k=%d eta<1 from h_min=%d\n", k, crossing);
        crossings = crossings && crossing >= 1;
    }
    return monotone && crossings;
}

// 8: csv output is byte-identical across worker counts and reruns
bool check_deterministic_output() {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::Phase;
    spec.n = 64;
    spec.d = 128;
    spec.k = 4;
    spec.m_grid = {24, 48};
    spec.trials = 20;
    spec.backends = {Backend::Omp, Backend::Cosamp, Backend::L1};
    spec.master_seed = 5150;

    spec.workers = 1;
    std::string serial = run_phase(spec).table.to_csv();
    spec.workers = 4;
    std::string parallel = run_phase(spec).table.to_csv();
    std::string repeat = run_phase(spec).table.to_csv();
    return serial == parallel && parallel == repeat;
}

struct Criterion {
    const char* label;
    bool (*check)();
};

} // namespace

int main(int argc, char** argv) {
    const Criterion criteria[] = {
        {"separated phase ordering (omp, l1 over cosamp)", check_separated_phase},
        {"clustered phase ordering (cosamp over omp, l1)", check_clustered_phase},
        {"exact support recovery above the coefficient floor", check_exact_support_recovery},
        {"energy deviation within the separation bound", check_energy_deviation_bound},
        {"basis pursuit exactness at the minimum separation", check_l1_exactness},
        {"projection contracts against the exhaustive oracle", check_projection_contracts},
        {"bound curve monotonicity and unit crossings", check_bound_curves},
        {"byte-identical output across worker counts", check_deterministic_output},
    };
    const int count = static_cast<int>(sizeof(criteria) / sizeof(criteria[0]));

    int selected = 0;
    if (argc > 1) selected = std::atoi(argv[1]);

    bool all_passed = true;
    for (int i = 0; i < count; ++i) {
        if (selected != 0 && selected != i + 1) continue;
        auto start = std::chrono::steady_clock::now();
        bool passed = false;
        try {
            passed = criteria[i].check();
        } catch (const std::exception& e) {
            std::printf("    unexpected error: %s\n", e.what());
        }
        double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] %d. %s (%.1fs)\n", passed ? "PASS" : "FAIL", i + 1, criteria[i].label,
                    seconds);
        std::fflush(stdout);
        all_passed = all_passed && passed;
    }
    return all_passed ? 0 : 1;
}
