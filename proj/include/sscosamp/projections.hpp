#pragma once

// Near-optimal sparse projection S_D(w, s): pick at most s dictionary atoms and
// project w onto their span. Four interchangeable backends with a shared
// outcome contract; the exhaustive oracle is the ground truth the others are
// measured against.

#include <stdexcept>
#include <string>
#include <utility>

#include "sscosamp/dictionary.hpp"

namespace sscosamp {

struct ProjectionOutcome {
    SupportSet support;   // at most s atoms
    CVector projected;    // orthogonal projection of w onto their span
    CVector coefficients; // synthesis coefficients on the support
    double residual_norm = 0.0;
    int iterations = 0;
    bool converged = false;
};

struct ProjectionConfig {
    double epsilon = 1e-12;      // residual stopping threshold for the greedy backends
    int max_iterations = 100;    // CoSaMP outer iterations
    double l1_tolerance = 1e-8;  // basis pursuit primal feasibility
    int l1_max_iterations = 500;
    bool tie_break_lowest = true; // argmax ties resolve to the lowest column index
};

enum class Backend { Omp, Cosamp, L1, Oracle };

Backend backend_from_name(const std::string& name);
std::string to_string(Backend backend);

// Thrown when basis pursuit exhausts its iteration budget before reaching
// feasibility; carries the best-effort outcome so callers may continue.
struct L1NonConvergence : std::runtime_error {
    explicit L1NonConvergence(ProjectionOutcome outcome)
        : std::runtime_error("basis pursuit did not converge within the iteration budget"),
          last(std::move(outcome)) {}
    ProjectionOutcome last;
};

// Exhaustive search over all size-s supports (lexicographically smallest on
// ties). Refuses when C(d,s) exceeds the enumeration cap.
ProjectionOutcome project_oracle(const Dictionary& dict, const CVector& w, int s);

ProjectionOutcome project_omp(const Dictionary& dict, const CVector& w, int s,
                              const ProjectionConfig& config);
ProjectionOutcome project_cosamp(const Dictionary& dict, const CVector& w, int s,
                                 const ProjectionConfig& config);
ProjectionOutcome project_l1(const Dictionary& dict, const CVector& w, int s,
                             const ProjectionConfig& config);

// Dispatch by backend name; the oracle ignores config.
ProjectionOutcome project(Backend backend, const Dictionary& dict, const CVector& w, int s,
                          const ProjectionConfig& config);

// Full basis pursuit solution min ||z||_1 s.t. D z = w via ADMM splitting with
// step parameter fixed from ||D||_2; returns the feasible iterate. Throws
// L1NonConvergence (with the truncated outcome) via project_l1's wrapper only;
// here nonconvergence is reported through the flags.
CVector basis_pursuit(const Dictionary& dict, const CVector& w, const ProjectionConfig& config,
                      int* iterations_used = nullptr, bool* converged = nullptr);

// (C, c) residual and energy ratios of an outcome against the oracle outcome
// for the same (w, s); C is +inf when only the oracle residual vanishes.
std::pair<double, double> near_optimality_ratios(const ProjectionOutcome& outcome,
                                                 const ProjectionOutcome& oracle);

} // namespace sscosamp
