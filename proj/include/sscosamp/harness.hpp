#pragma once

// Experiment orchestration: phase-transition sweeps, bound curves, gram
// profiles, the theorem/lemma/corollary verification suites, and backend
// oracle comparisons. Each runner produces a deterministic CSV-ready table
// whose header comment round-trips the spec that produced it.

#include <cstdint>
#include <string>
#include <vector>

#include "sscosamp/projections.hpp"
#include "sscosamp/sensing.hpp"
#include "sscosamp/separation.hpp"

namespace sscosamp {

enum class ExperimentKind { Phase, Bounds, Gram, VerifyTheorem, VerifyLemma, VerifyL1, OracleCompare };

ExperimentKind kind_from_name(const std::string& name);
std::string to_string(ExperimentKind kind);

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::Phase;
    int n = 256;
    int d = 1024;
    int k = 8;
    std::vector<int> m_grid;    // phase; empty selects the desk-scale default
    std::vector<int> hmin_grid; // bounds and verify-lemma; empty selects a default
    int h_min = 0;              // single-cell experiments; 0 selects a default
    int trials = 100;
    double epsilon = 0.0;
    std::vector<Backend> backends; // empty selects omp, cosamp, l1
    BoundMode mode = BoundMode::ExactGram;
    std::uint64_t master_seed = 1;
    double margin = 1.01; // coefficient floor multiplier for verify-theorem
    SupportStructure structure = SupportStructure::Separated;
    bool identity_a = false;
    std::string out_path; // optional CSV destination; not part of the table
    int workers = 0;      // 0 = SSCOSAMP_WORKERS or hardware concurrency

    // the "spec:" header comment; carries every field that affects the table
    std::string to_comment() const;
    static ExperimentSpec from_comment(const std::string& comment);
};

struct ResultTable {
    std::vector<std::string> comments; // without the leading "# "
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows; // cells preformatted

    std::string to_csv() const;
    void write(const std::string& path) const;
};

struct HarnessResult {
    ResultTable table;
    bool passed = true; // verification assertions; always true for reporting kinds
};

HarnessResult run_phase(const ExperimentSpec& spec);
HarnessResult run_bounds(const ExperimentSpec& spec);
HarnessResult run_gram(const ExperimentSpec& spec);
HarnessResult run_verify_theorem(const ExperimentSpec& spec);
HarnessResult run_verify_lemma(const ExperimentSpec& spec);
HarnessResult run_verify_l1(const ExperimentSpec& spec);
HarnessResult run_oracle_compare(const ExperimentSpec& spec);

// dispatch on spec.kind; writes spec.out_path when set
HarnessResult run(const ExperimentSpec& spec);

} // namespace sscosamp
