#include "sscosamp/projections.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace sscosamp {

namespace {

constexpr double kOracleCap = 2e6;

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double v = 1.0;
    for (int i = 1; i <= k; ++i) v *= static_cast<double>(n - k + i) / i;
    return v;
}

// minimum-norm least squares of D restricted to `indices` against w; the
// rank-revealing threshold covers ill-conditioned merged supports
CVector solve_on_columns(const Dictionary& dict, const std::vector<int>& indices, const CVector& w) {
    CMatrix cols(dict.n(), static_cast<int>(indices.size()));
    for (std::size_t i = 0; i < indices.size(); ++i) cols.col(static_cast<int>(i)) = dict.entries().col(indices[i]);
    Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(cols);
    cod.setThreshold(1e-12);
    return cod.solve(w);
}

CVector synthesize_on(const Dictionary& dict, const std::vector<int>& indices, const CVector& coef) {
    CVector out = CVector::Zero(dict.n());
    for (std::size_t i = 0; i < indices.size(); ++i)
        out += dict.entries().col(indices[i]) * coef[static_cast<int>(i)];
    return out;
}

ProjectionOutcome finish_outcome(const Dictionary& dict, std::vector<int> indices, const CVector& w,
                                 int iterations, bool converged) {
    std::sort(indices.begin(), indices.end());
    ProjectionOutcome outcome;
    outcome.iterations = iterations;
    outcome.converged = converged;
    outcome.support = SupportSet(indices, dict.d());
    if (indices.empty()) {
        outcome.projected = CVector::Zero(dict.n());
        outcome.coefficients = CVector(0);
        outcome.residual_norm = w.norm();
        return outcome;
    }
    outcome.coefficients = solve_on_columns(dict, indices, w);
    outcome.projected = synthesize_on(dict, indices, outcome.coefficients);
    outcome.residual_norm = (w - outcome.projected).norm();
    return outcome;
}

// indices of the s largest magnitudes; ties resolve toward the lower index
std::vector<int> top_magnitudes(const CVector& values, int s, bool lowest_first) {
    std::vector<int> order(static_cast<std::size_t>(values.size()));
    std::iota(order.begin(), order.end(), 0);
    auto cmp = [&](int a, int b) {
        double ma = std::abs(values[a]);
        double mb = std::abs(values[b]);
        if (ma != mb) return ma > mb;
        return lowest_first ? a < b : a > b;
    };
    int keep = std::min<int>(s, static_cast<int>(order.size()));
    std::partial_sort(order.begin(), order.begin() + keep, order.end(), cmp);
    order.resize(static_cast<std::size_t>(keep));
    return order;
}

} // namespace

Backend backend_from_name(const std::string& name) {
    if (name == "omp") return Backend::Omp;
    if (name == "cosamp") return Backend::Cosamp;
    if (name == "l1") return Backend::L1;
    if (name == "oracle") return Backend::Oracle;
    throw std::invalid_argument("unknown projection backend: " + name);
}

std::string to_string(Backend backend) {
    switch (backend) {
    case Backend::Omp: return "omp";
    case Backend::Cosamp: return "cosamp";
    case Backend::L1: return "l1";
    case Backend::Oracle: return "oracle";
    }
    return "?";
}

ProjectionOutcome project_oracle(const Dictionary& dict, const CVector& w, int s) {
    if (w.size() != dict.n()) throw std::invalid_argument("project_oracle: signal length mismatch");
    if (s < 0 || s > dict.d()) throw std::invalid_argument("project_oracle: invalid sparsity");
    if (s == 0) return finish_outcome(dict, {}, w, 0, true);
    if (binomial(dict.d(), s) > kOracleCap)
        throw std::length_error("project_oracle: subset enumeration above the configured cap");

    std::vector<int> current(static_cast<std::size_t>(s));
    std::iota(current.begin(), current.end(), 0);
    std::vector<int> best = current;
    double best_residual = std::numeric_limits<double>::infinity();
    for (;;) {
        CVector coef = solve_on_columns(dict, current, w);
        double residual = (w - synthesize_on(dict, current, coef)).norm();
        // lexicographic enumeration order, so a strict improvement keeps the
        // lexicographically smallest among ties
        if (residual < best_residual) {
            best_residual = residual;
            best = current;
        }
        // advance to the next combination
        int i = s - 1;
        while (i >= 0 && current[static_cast<std::size_t>(i)] == dict.d() - s + i) --i;
        if (i < 0) break;
        ++current[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < s; ++j)
            current[static_cast<std::size_t>(j)] = current[static_cast<std::size_t>(j - 1)] + 1;
    }
    return finish_outcome(dict, best, w, 1, true);
}

ProjectionOutcome project_omp(const Dictionary& dict, const CVector& w, int s,
                              const ProjectionConfig& config) {
    if (w.size() != dict.n()) throw std::invalid_argument("project_omp: signal length mismatch");
    if (s < 0 || s > dict.n()) throw std::invalid_argument("project_omp: sparsity must be in [0, n]");
    std::vector<int> selected;
    std::vector<char> used(static_cast<std::size_t>(dict.d()), 0);
    CVector residual = w;
    double residual_norm = residual.norm();
    bool hit_epsilon = residual_norm <= config.epsilon;
    int steps = 0;
    while (static_cast<int>(selected.size()) < s && !hit_epsilon) {
        CVector corr = dict.analyze(residual);
        int pick = -1;
        double best = -1.0;
        for (int i = 0; i < dict.d(); ++i) {
            if (used[static_cast<std::size_t>(i)]) continue;
            double mag = std::abs(corr[i]);
            bool better = config.tie_break_lowest ? mag > best : mag >= best;
            if (better) {
                best = mag;
                pick = i;
            }
        }
        if (pick < 0) break;
        selected.push_back(pick);
        used[static_cast<std::size_t>(pick)] = 1;
        ++steps;
        CVector coef = solve_on_columns(dict, selected, w);
        residual = w - synthesize_on(dict, selected, coef);
        double next_norm = residual.norm();
        if (next_norm <= config.epsilon) {
            hit_epsilon = true;
        } else if (next_norm >= residual_norm * (1.0 - 1e-12)) {
            // no usable progress, stop before picking more atoms
            residual_norm = next_norm;
            break;
        }
        residual_norm = next_norm;
    }
    return finish_outcome(dict, selected, w, steps, hit_epsilon);
}

ProjectionOutcome project_cosamp(const Dictionary& dict, const CVector& w, int s,
                                 const ProjectionConfig& config) {
    if (w.size() != dict.n()) throw std::invalid_argument("project_cosamp: signal length mismatch");
    if (s < 1 || 3 * s > dict.d()) throw std::invalid_argument("project_cosamp: need 3*s <= d");
    CVector residual = w;
    std::vector<int> support;
    std::vector<int> best_support;
    double best_residual = residual.norm();
    std::vector<double> history{best_residual};
    bool stopped_early = false;
    int it = 0;
    while (it < config.max_iterations) {
        ++it;
        CVector proxy = dict.analyze(residual);
        std::vector<int> merged = top_magnitudes(proxy, 2 * s, config.tie_break_lowest);
        merged.insert(merged.end(), support.begin(), support.end());
        std::sort(merged.begin(), merged.end());
        merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
        CVector coef = solve_on_columns(dict, merged, w);
        std::vector<int> keep = top_magnitudes(coef, s, config.tie_break_lowest);
        std::vector<int> pruned;
        CVector pruned_coef(static_cast<int>(keep.size()));
        for (std::size_t i = 0; i < keep.size(); ++i) {
            pruned.push_back(merged[static_cast<std::size_t>(keep[i])]);
            pruned_coef[static_cast<int>(i)] = coef[keep[i]];
        }
        support = pruned;
        residual = w - synthesize_on(dict, pruned, pruned_coef);
        double rn = residual.norm();
        if (rn < best_residual) {
            best_residual = rn;
            best_support = support;
        }
        history.push_back(rn);
        if (rn <= config.epsilon) {
            stopped_early = true;
            break;
        }
        // residual stall over a three-iteration window
        if (history.size() >= 4) {
            double before = history[history.size() - 4];
            if (before - rn < 1e-7 * std::max(before, 1e-300)) {
                stopped_early = true;
                break;
            }
        }
    }
    if (best_support.empty() && !support.empty()) best_support = support;
    return finish_outcome(dict, best_support, w, it, stopped_early);
}

CVector basis_pursuit(const Dictionary& dict, const CVector& w, const ProjectionConfig& config,
                      int* iterations_used, bool* converged) {
    if (w.size() != dict.n()) throw std::invalid_argument("basis_pursuit: signal length mismatch");
    const int n = dict.n();
    const int d = dict.d();
    double scale = w.norm();
    if (iterations_used) *iterations_used = 0;
    if (converged) *converged = true;
    if (scale == 0.0) return CVector::Zero(d);

    // step parameter from the frame operator norm ||D||_2^2 = d/n
    const double rho = std::max(static_cast<double>(d) / n / 2.0, 0.5);
    const double thresh = 1.0 / rho;
    const double frame_inv = static_cast<double>(n) / d;

    CVector wn = w / scale;
    CVector z = CVector::Zero(d);
    CVector u = CVector::Zero(d);
    CVector x = CVector::Zero(d);
    bool ok = false;
    int used = config.l1_max_iterations;
    for (int it = 1; it <= config.l1_max_iterations; ++it) {
        CVector v = z - u;
        // projection onto the affine constraint set D x = wn (tight frame)
        x = v - frame_inv * dict.analyze(dict.synthesize(v) - wn);
        CVector shifted = x + u;
        CVector z_next(d);
        for (int i = 0; i < d; ++i) {
            double mag = std::abs(shifted[i]);
            z_next[i] = mag <= thresh ? Complex(0.0, 0.0) : shifted[i] * ((mag - thresh) / mag);
        }
        u += x - z_next;
        double gap = (x - z_next).norm();
        double dz = (z_next - z).norm();
        z = z_next;
        if (gap <= config.l1_tolerance * std::max(1.0, x.norm()) &&
            dz <= 1e-10 * std::max(1.0, z.norm())) {
            ok = true;
            used = it;
            break;
        }
    }
    if (iterations_used) *iterations_used = used;
    if (converged) *converged = ok;
    return x * scale;
}

ProjectionOutcome project_l1(const Dictionary& dict, const CVector& w, int s,
                             const ProjectionConfig& config) {
    if (s < 0 || s > dict.n()) throw std::invalid_argument("project_l1: sparsity must be in [0, n]");
    int iterations = 0;
    bool converged = false;
    CVector solution = basis_pursuit(dict, w, config, &iterations, &converged);
    std::vector<int> support = top_magnitudes(solution, s, config.tie_break_lowest);
    ProjectionOutcome outcome = finish_outcome(dict, std::move(support), w, iterations, converged);
    if (!converged) throw L1NonConvergence(std::move(outcome));
    return outcome;
}

ProjectionOutcome project(Backend backend, const Dictionary& dict, const CVector& w, int s,
                          const ProjectionConfig& config) {
    switch (backend) {
    case Backend::Omp: return project_omp(dict, w, s, config);
    case Backend::Cosamp: return project_cosamp(dict, w, s, config);
    case Backend::L1: return project_l1(dict, w, s, config);
    case Backend::Oracle: return project_oracle(dict, w, s);
    }
    throw std::logic_error("project: unknown backend");
}

std::pair<double, double> near_optimality_ratios(const ProjectionOutcome& outcome,
                                                 const ProjectionOutcome& oracle) {
    if (outcome.projected.size() != oracle.projected.size() || outcome.support.d != oracle.support.d)
        throw std::invalid_argument("near_optimality_ratios: outcomes are not for the same problem");
    const double inf = std::numeric_limits<double>::infinity();
    double w_norm = std::hypot(oracle.projected.norm(), oracle.residual_norm);
    double zero_tol = 1e-12 * std::max(1.0, w_norm);

    double c_residual;
    if (oracle.residual_norm <= zero_tol)
        c_residual = outcome.residual_norm <= zero_tol ? 1.0 : inf;
    else
        c_residual = outcome.residual_norm / oracle.residual_norm;

    double oracle_energy = oracle.projected.norm();
    double c_energy;
    if (oracle_energy <= zero_tol)
        c_energy = outcome.projected.norm() <= zero_tol ? 1.0 : inf;
    else
        c_energy = outcome.projected.norm() / oracle_energy;
    return {c_residual, c_energy};
}

} // namespace sscosamp
