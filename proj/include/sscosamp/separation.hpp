#pragma once

// Separation analysis for the DFT dictionary: the strict-diagonal-dominance
// test, worst-case dominance factors over all supports with a given minimum
// cyclic separation, the Gershgorin RIP bound they imply, the OMP coefficient
// threshold, and the exact recovery constant M.

#include <string>
#include <vector>

#include "sscosamp/dictionary.hpp"

namespace sscosamp {

enum class BoundMode { ExactGram, Envelope, BruteForce };

BoundMode bound_mode_from_name(const std::string& name); // "exact" | "envelope" | "brute"
std::string to_string(BoundMode mode);

struct SeparationProfile {
    int h_min = 0;
    int k = 0;
    BoundMode mode = BoundMode::ExactGram;
    double eta = 0.0;
    double eta_prime = 0.0;
    double delta_bound = 0.0;       // = eta
    double b_ratio = 0.0;           // eta_prime/(1-eta), +inf sentinel when eta >= 1
    bool ordering_violated = false; // eta > eta_prime (possible in envelope mode)
};

struct DominanceReport {
    SupportSet support;
    std::vector<double> delta_per_row; // 1 - sum of off-diagonal |gram| per row
    bool well_separated = false;       // all delta_per_row > 0
    double lambda_min = 0.0;           // smallest eigenvalue of the gram submatrix
    double off_diag_max_row_sum = 0.0;
};

DominanceReport well_separated(const Dictionary& dict, const SupportSet& support);

// Worst-case in-support off-diagonal row sum over supports of size k whose
// minimum pairwise cyclic separation is at least h_min. The returned profile
// also carries the matching eta_prime and derived quantities.
SeparationProfile eta_bound(const Dictionary& dict, int h_min, int k, BoundMode mode);

// Worst-case off-support column sum over the same support class.
double eta_prime_bound(const Dictionary& dict, int h_min, int k, BoundMode mode);

// Lemma-style RIP constant bound delta_k <= eta for separated supports.
SeparationProfile rip_bound(const Dictionary& dict, int h_min, int k, BoundMode mode);

// Coefficient magnitude floor 2*epsilon/(1 - eta - eta_prime); requires
// eta + eta_prime < 1.
double omp_threshold(double eta, double eta_prime, double epsilon);

// M = max over off-support columns of || pinv(D_support) * column ||_1.
double erc_constant(const Dictionary& dict, const SupportSet& support);

// Smallest h_min in [1, d/k] whose profile satisfies b_ratio < 1; 0 when none.
int b_crossing_hmin(const Dictionary& dict, int k, BoundMode mode);

} // namespace sscosamp
