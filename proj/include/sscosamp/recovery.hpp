#pragma once

// Signal-space CoSaMP outer loop: proxy, identify (2k atoms through the chosen
// projection backend), merge, range-constrained least squares, prune to k.
// The measurement matrix is real while signals and atoms are complex; products
// with A act on real and imaginary parts independently.

#include <functional>
#include <utility>
#include <vector>

#include "sscosamp/projections.hpp"

namespace sscosamp {

struct SSCoSaMPState {
    CVector residual;  // y - A x_l
    CVector estimate;  // x_l, lies in the span of the active support
    SupportSet support;
    int iteration = 0;
    std::vector<double> residual_history;        // ||r|| after each iteration, seeded with ||y||
    std::vector<double> update_residual_history; // ||y - A w|| after each update step
    int l1_failures = 0;                         // basis pursuit budget exhaustions, best-effort used
};

struct RecoveryConfig {
    int k = 1;
    int max_outer_iterations = 50;
    double residual_tolerance = 1e-9; // relative to ||y||
    int stall_window = 5;
    double stall_factor = 1e-6;
    Backend backend = Backend::Omp;
    ProjectionConfig projection;
    // invoked after every completed iteration; for instrumentation and tests
    std::function<void(const SSCoSaMPState&)> on_iteration;
};

// Runs the loop until the residual tolerance, a stall of the best residual, or
// the iteration cap; returns the iterate with the smallest residual seen and
// the state rewound to it.
std::pair<CVector, SSCoSaMPState> recover(const RMatrix& A, const Dictionary& dict,
                                          const CVector& y, const RecoveryConfig& config);

// Orthogonal projection of w onto the span of the selected atoms.
CVector project_onto_support(const Dictionary& dict, const SupportSet& support, const CVector& w);

// argmin over z in range(D_T) of ||y - A z||, via minimum-norm least squares
// on the composed operator A D_T.
CVector constrained_least_squares(const RMatrix& A, const Dictionary& dict, const SupportSet& T,
                                  const CVector& y);

} // namespace sscosamp
