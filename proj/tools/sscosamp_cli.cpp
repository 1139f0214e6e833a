// Command-line front end for the experiment harness. Every subcommand builds
// an ExperimentSpec, runs it, prints the result table, and optionally writes
// it to a CSV file. Verification subcommands exit nonzero when the asserted
// property fails so they can gate scripts.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "sscosamp/harness.hpp"
#include "sscosamp/recovery.hpp"
#include "sscosamp/sensing.hpp"

namespace {

using namespace sscosamp;

struct CommonArgs {
    ExperimentSpec spec;
    std::string mode_name = "exact";
    std::string structure_name = "separated";
    std::vector<std::string> backend_names;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--n", args.spec.n, "signal dimension")->check(CLI::PositiveNumber);
    cmd->add_option("--d", args.spec.d, "dictionary size")->check(CLI::PositiveNumber);
    cmd->add_option("--k", args.spec.k, "sparsity")->check(CLI::PositiveNumber);
    cmd->add_option("--trials", args.spec.trials, "trials per cell")->check(CLI::PositiveNumber);
    cmd->add_option("--epsilon", args.spec.epsilon, "noise level")->check(CLI::NonNegativeNumber);
    cmd->add_option("--seed", args.spec.master_seed, "master seed");
    cmd->add_option("--mode", args.mode_name, "bound mode: exact, envelope or brute");
    cmd->add_option("--out", args.spec.out_path, "write the result table to this CSV file");
    cmd->add_option("--workers", args.spec.workers, "worker threads (0 = auto)");
}

int run_spec(CommonArgs& args) {
    args.spec.mode = bound_mode_from_name(args.mode_name);
    args.spec.structure = structure_from_name(args.structure_name);
    for (const std::string& name : args.backend_names)
        args.spec.backends.push_back(backend_from_name(name));
    HarnessResult result = run(args.spec);
    std::fputs(result.table.to_csv().c_str(), stdout);
    return result.passed ? 0 : 1;
}

int run_replay(const std::string& path, const std::string& backend_name) {
    InstanceData data = load_instance(path);
    Dictionary dict(data.n, data.d);
    SensingInstance instance = materialize(data, dict);
    RecoveryConfig config;
    config.k = instance.alpha_true.k;
    config.backend = backend_from_name(backend_name);
    auto [xhat, state] = recover(instance.A, dict, instance.y, config);
    RecoveryReport report = evaluate(instance, xhat, state);
    std::printf("backend,snr_db,perfect,iterations,support_recovered,residual\n");
    std::printf("%s,%.17g,%d,%d,%d,%.17g\n", backend_name.c_str(), report.snr_db,
                report.perfect ? 1 : 0, report.iterations, report.support_recovered ? 1 : 0,
                state.residual.norm());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"signal-space CoSaMP experiments over overcomplete DFT dictionaries"};
    app.require_subcommand(1);

    CommonArgs phase;
    phase.spec.kind = ExperimentKind::Phase;
    auto* phase_cmd = app.add_subcommand("phase", "success-rate sweep over measurement counts");
    add_common(phase_cmd, phase);
    phase_cmd->add_option("--m-grid", phase.spec.m_grid, "measurement counts")->delimiter(',');
    phase_cmd->add_option("--hmin", phase.spec.h_min, "separation for separated supports");
    phase_cmd->add_option("--structure", phase.structure_name, "clustered or separated");
    phase_cmd->add_option("--backend", phase.backend_names, "projection backends")->delimiter(',');
    phase_cmd->add_flag("--identity-a", phase.spec.identity_a, "sense with A = I (m = n)");

    CommonArgs bounds;
    bounds.spec.kind = ExperimentKind::Bounds;
    auto* bounds_cmd = app.add_subcommand("bounds", "eta, eta' and B across separations");
    add_common(bounds_cmd, bounds);
    bounds_cmd->add_option("--hmin-grid", bounds.spec.hmin_grid, "separations")->delimiter(',');

    CommonArgs gram;
    gram.spec.kind = ExperimentKind::Gram;
    auto* gram_cmd = app.add_subcommand("gram", "gram magnitude and coherence envelope profile");
    add_common(gram_cmd, gram);

    CommonArgs theorem;
    theorem.spec.kind = ExperimentKind::VerifyTheorem;
    auto* theorem_cmd =
        app.add_subcommand("verify-theorem", "exact OMP recovery above the coefficient threshold");
    add_common(theorem_cmd, theorem);
    theorem_cmd->add_option("--hmin", theorem.spec.h_min, "separation (0 = first with B < 1)");
    theorem_cmd->add_option("--margin", theorem.spec.margin,
                            "coefficient magnitude as a multiple of the threshold");

    CommonArgs lemma;
    lemma.spec.kind = ExperimentKind::VerifyLemma;
    auto* lemma_cmd = app.add_subcommand("verify-lemma", "energy deviation against the eta bound");
    add_common(lemma_cmd, lemma);
    lemma_cmd->add_option("--hmin-grid", lemma.spec.hmin_grid, "separations")->delimiter(',');

    CommonArgs l1;
    l1.spec.kind = ExperimentKind::VerifyL1;
    auto* l1_cmd = app.add_subcommand("verify-l1", "basis-pursuit coefficient recovery");
    add_common(l1_cmd, l1);
    l1_cmd->add_option("--hmin", l1.spec.h_min, "separation (0 = corollary minimum)");

    CommonArgs oracle;
    oracle.spec.kind = ExperimentKind::OracleCompare;
    auto* oracle_cmd =
        app.add_subcommand("oracle-compare", "near-optimality ratios against the exhaustive oracle");
    add_common(oracle_cmd, oracle);
    oracle_cmd->add_option("--backend", oracle.backend_names, "projection backends")->delimiter(',');

    std::string replay_path;
    std::string replay_backend = "omp";
    auto* replay_cmd = app.add_subcommand("replay", "re-run recovery on a saved instance");
    replay_cmd->add_option("file", replay_path, "instance file")->required();
    replay_cmd->add_option("--backend", replay_backend, "projection backend");

    CLI11_PARSE(app, argc, argv);

    try {
        if (phase_cmd->parsed()) return run_spec(phase);
        if (bounds_cmd->parsed()) return run_spec(bounds);
        if (gram_cmd->parsed()) return run_spec(gram);
        if (theorem_cmd->parsed()) return run_spec(theorem);
        if (lemma_cmd->parsed()) return run_spec(lemma);
        if (l1_cmd->parsed()) return run_spec(l1);
        if (oracle_cmd->parsed()) return run_spec(oracle);
        if (replay_cmd->parsed()) return run_replay(replay_path, replay_backend);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
