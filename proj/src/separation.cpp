#include "sscosamp/separation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sscosamp {

namespace {

constexpr double kEnumerationCap = 2e6;
constexpr double kSingularTol = 1e-10;

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double v = 1.0;
    for (int i = 1; i <= k; ++i) v *= static_cast<double>(n - k + i) / i;
    return v;
}

int reduced_distance(long long t, int d) {
    long long r = t % d;
    if (r < 0) r += d;
    return static_cast<int>(std::min(r, d - r));
}

void check_feasible(const Dictionary& dict, int h_min, int k) {
    if (h_min < 1) throw std::invalid_argument("separation bound: h_min must be >= 1");
    if (k < 1) throw std::invalid_argument("separation bound: k must be >= 1");
    if (static_cast<long long>(h_min) * k > dict.d())
        throw std::invalid_argument("separation bound: no support of size k with separation h_min exists");
}

// Nonincreasing majorant of the gram magnitudes on [1, d/2]:
// ghat(t) = max over h in [t, floor(d/2)] of gram_magnitude(h). Row sums over
// a separated support are bounded term by term by ghat at multiples of h_min,
// which keeps the equally-spaced recipe valid even where the raw gram
// magnitude oscillates through its zeros.
std::vector<double> gram_majorant(const Dictionary& dict) {
    int half = dict.d() / 2;
    std::vector<double> ghat(static_cast<std::size_t>(half) + 1, 0.0);
    for (int h = 1; h <= half; ++h) ghat[static_cast<std::size_t>(h)] = dict.gram_magnitude(h);
    for (int h = half - 1; h >= 1; --h)
        ghat[static_cast<std::size_t>(h)] = std::max(ghat[static_cast<std::size_t>(h)], ghat[static_cast<std::size_t>(h) + 1]);
    return ghat;
}

double majorant_at(const std::vector<double>& ghat, long long t, int d) {
    int r = reduced_distance(t, d);
    if (r == 0) r = 1; // distinct columns are at least one apart
    r = std::min(r, d / 2);
    return ghat[static_cast<std::size_t>(r)];
}

double envelope_at(const Dictionary& dict, long long t) {
    int r = reduced_distance(t, dict.d());
    if (r == 0) r = 1;
    return dict.coherence_envelope(r);
}

// visits every sorted support {i_0 < ... < i_{k-1}} in [0,d) whose minimum
// pairwise cyclic distance is >= h_min
template <typename Visit>
void enumerate_separated(int d, int k, int h_min, const Visit& visit) {
    std::vector<int> idx(static_cast<std::size_t>(k));
    auto recurse = [&](auto&& self, int depth, int start) -> void {
        if (depth == k) {
            if (k < 2 || d - (idx.back() - idx.front()) >= h_min) visit(idx);
            return;
        }
        // sorted tuples need room for the remaining picks, h_min apart each
        int remaining = k - depth - 1;
        for (int i = start; i + remaining * h_min < d; ++i) {
            idx[static_cast<std::size_t>(depth)] = i;
            self(self, depth + 1, i + h_min);
        }
    };
    recurse(recurse, 0, 0);
}

struct BrutePair {
    double eta = 0.0;
    double eta_prime = 0.0;
};

BrutePair brute_force_pair(const Dictionary& dict, int h_min, int k) {
    int d = dict.d();
    if (binomial(d, k) > kEnumerationCap)
        throw std::length_error("separation bound: brute-force enumeration above the configured cap");
    std::vector<double> g(static_cast<std::size_t>(d / 2) + 1, 0.0);
    for (int h = 1; h <= d / 2; ++h) g[static_cast<std::size_t>(h)] = dict.gram_magnitude(h);
    BrutePair out;
    enumerate_separated(d, k, h_min, [&](const std::vector<int>& idx) {
        for (int p : idx) {
            double row = 0.0;
            for (int q : idx)
                if (q != p) row += g[static_cast<std::size_t>(cyclic_distance(p, q, d))];
            out.eta = std::max(out.eta, row);
        }
        for (int p = 0; p < d; ++p) {
            if (std::find(idx.begin(), idx.end(), p) != idx.end()) continue;
            double col = 0.0;
            for (int q : idx) col += g[static_cast<std::size_t>(cyclic_distance(p, q, d))];
            out.eta_prime = std::max(out.eta_prime, col);
        }
    });
    return out;
}

double eta_value(const Dictionary& dict, int h_min, int k, BoundMode mode) {
    int c = (k - 1 + 1) / 2; // ceil((k-1)/2), rows of the equally-spaced worst case
    switch (mode) {
    case BoundMode::Envelope: {
        double sum = 0.0;
        for (int j = 1; j <= c; ++j) sum += envelope_at(dict, static_cast<long long>(j) * h_min);
        return 2.0 * sum;
    }
    case BoundMode::ExactGram: {
        auto ghat = gram_majorant(dict);
        double sum = 0.0;
        for (int j = 1; j <= c; ++j) sum += majorant_at(ghat, static_cast<long long>(j) * h_min, dict.d());
        return 2.0 * sum;
    }
    case BoundMode::BruteForce:
        return brute_force_pair(dict, h_min, k).eta;
    }
    throw std::logic_error("eta_value: unknown mode");
}

double eta_prime_value(const Dictionary& dict, int h_min, int k, BoundMode mode) {
    int r = (k + 1) / 2;
    switch (mode) {
    case BoundMode::Envelope: {
        double sum = envelope_at(dict, 1);
        for (int j = 1; j <= r; ++j) {
            sum += envelope_at(dict, static_cast<long long>(j) * h_min + 1);
            sum += envelope_at(dict, static_cast<long long>(j) * h_min - 1);
        }
        return sum;
    }
    case BoundMode::ExactGram: {
        auto ghat = gram_majorant(dict);
        double sum = majorant_at(ghat, 1, dict.d());
        for (int j = 1; j <= r; ++j) {
            sum += majorant_at(ghat, static_cast<long long>(j) * h_min + 1, dict.d());
            sum += majorant_at(ghat, static_cast<long long>(j) * h_min - 1, dict.d());
        }
        return sum;
    }
    case BoundMode::BruteForce:
        return brute_force_pair(dict, h_min, k).eta_prime;
    }
    throw std::logic_error("eta_prime_value: unknown mode");
}

SeparationProfile make_profile(const Dictionary& dict, int h_min, int k, BoundMode mode) {
    check_feasible(dict, h_min, k);
    SeparationProfile profile;
    profile.h_min = h_min;
    profile.k = k;
    profile.mode = mode;
    if (mode == BoundMode::BruteForce) {
        auto pair = brute_force_pair(dict, h_min, k);
        profile.eta = pair.eta;
        profile.eta_prime = pair.eta_prime;
    } else {
        profile.eta = eta_value(dict, h_min, k, mode);
        profile.eta_prime = eta_prime_value(dict, h_min, k, mode);
    }
    profile.delta_bound = profile.eta;
    profile.b_ratio = profile.eta < 1.0 ? profile.eta_prime / (1.0 - profile.eta)
                                        : std::numeric_limits<double>::infinity();
    profile.ordering_violated = profile.eta > profile.eta_prime;
    return profile;
}

} // namespace

BoundMode bound_mode_from_name(const std::string& name) {
    if (name == "exact") return BoundMode::ExactGram;
    if (name == "envelope") return BoundMode::Envelope;
    if (name == "brute") return BoundMode::BruteForce;
    throw std::invalid_argument("unknown bound mode: " + name);
}

std::string to_string(BoundMode mode) {
    switch (mode) {
    case BoundMode::ExactGram: return "exact";
    case BoundMode::Envelope: return "envelope";
    case BoundMode::BruteForce: return "brute";
    }
    return "?";
}

DominanceReport well_separated(const Dictionary& dict, const SupportSet& support) {
    if (support.empty()) throw std::invalid_argument("well_separated: empty support");
    DominanceReport report;
    report.support = support;
    CMatrix cols = dict.columns(support);
    CMatrix gram = cols.adjoint() * cols;
    int k = support.size();
    report.delta_per_row.resize(static_cast<std::size_t>(k));
    report.well_separated = true;
    for (int i = 0; i < k; ++i) {
        double off = 0.0;
        for (int j = 0; j < k; ++j)
            if (j != i) off += std::abs(gram(i, j));
        report.delta_per_row[static_cast<std::size_t>(i)] = gram(i, i).real() - off;
        report.off_diag_max_row_sum = std::max(report.off_diag_max_row_sum, off);
        if (report.delta_per_row[static_cast<std::size_t>(i)] <= 0.0) report.well_separated = false;
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram, Eigen::EigenvaluesOnly);
    report.lambda_min = eig.eigenvalues().minCoeff();
    return report;
}

SeparationProfile eta_bound(const Dictionary& dict, int h_min, int k, BoundMode mode) {
    return make_profile(dict, h_min, k, mode);
}

double eta_prime_bound(const Dictionary& dict, int h_min, int k, BoundMode mode) {
    check_feasible(dict, h_min, k);
    return mode == BoundMode::BruteForce ? brute_force_pair(dict, h_min, k).eta_prime
                                         : eta_prime_value(dict, h_min, k, mode);
}

SeparationProfile rip_bound(const Dictionary& dict, int h_min, int k, BoundMode mode) {
    return make_profile(dict, h_min, k, mode);
}

double omp_threshold(double eta, double eta_prime, double epsilon) {
    if (epsilon < 0.0) throw std::invalid_argument("omp_threshold: epsilon must be nonnegative");
    if (eta + eta_prime >= 1.0)
        throw std::domain_error("omp_threshold: hypothesis violated, eta + eta_prime >= 1");
    return 2.0 * epsilon / (1.0 - eta - eta_prime);
}

double erc_constant(const Dictionary& dict, const SupportSet& support) {
    if (support.empty()) throw std::invalid_argument("erc_constant: empty support");
    CMatrix cols = dict.columns(support);
    CMatrix gram = cols.adjoint() * cols;
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() <= kSingularTol)
        throw std::domain_error("erc_constant: gram submatrix is singular");
    Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(cols);
    double best = 0.0;
    for (int i = 0; i < dict.d(); ++i) {
        if (support.contains(i)) continue;
        CVector coef = cod.solve(dict.entries().col(i));
        best = std::max(best, coef.cwiseAbs().sum());
    }
    return best;
}

int b_crossing_hmin(const Dictionary& dict, int k, BoundMode mode) {
    for (int h = 1; static_cast<long long>(h) * k <= dict.d(); ++h) {
        SeparationProfile profile = make_profile(dict, h, k, mode);
        if (profile.eta < 1.0 && profile.b_ratio < 1.0) return h;
    }
    return 0;
}

} // namespace sscosamp
