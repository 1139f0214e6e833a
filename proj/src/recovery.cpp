#include "sscosamp/recovery.hpp"

#include <algorithm>
#include <stdexcept>

namespace sscosamp {

namespace {

CVector apply_real(const RMatrix& A, const CVector& v) {
    return A * v.real() + Complex(0.0, 1.0) * (A * v.imag());
}

CVector apply_real_adjoint(const RMatrix& A, const CVector& v) {
    return A.transpose() * v.real() + Complex(0.0, 1.0) * (A.transpose() * v.imag());
}

SupportSet merge_supports(const SupportSet& a, const SupportSet& b, int d) {
    std::vector<int> merged = a.indices;
    merged.insert(merged.end(), b.indices.begin(), b.indices.end());
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    return SupportSet(merged, d);
}

ProjectionOutcome project_recorded(Backend backend, const Dictionary& dict, const CVector& w,
                                   int s, const ProjectionConfig& config, int& l1_failures) {
    try {
        return project(backend, dict, w, s, config);
    } catch (const L1NonConvergence& e) {
        ++l1_failures;
        return e.last;
    }
}

} // namespace

CVector project_onto_support(const Dictionary& dict, const SupportSet& support, const CVector& w) {
    if (w.size() != dict.n()) throw std::invalid_argument("project_onto_support: length mismatch");
    if (support.empty()) return CVector::Zero(dict.n());
    CMatrix cols = dict.columns(support);
    Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(cols);
    cod.setThreshold(1e-12);
    return cols * cod.solve(w);
}

CVector constrained_least_squares(const RMatrix& A, const Dictionary& dict, const SupportSet& T,
                                  const CVector& y) {
    if (A.cols() != dict.n() || A.rows() != y.size())
        throw std::invalid_argument("constrained_least_squares: dimension mismatch");
    if (T.empty()) return CVector::Zero(dict.n());
    CMatrix cols = dict.columns(T);
    CMatrix composed = A * cols.real() + Complex(0.0, 1.0) * (A * cols.imag());
    Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(composed);
    cod.setThreshold(1e-12);
    return cols * cod.solve(y);
}

std::pair<CVector, SSCoSaMPState> recover(const RMatrix& A, const Dictionary& dict,
                                          const CVector& y, const RecoveryConfig& config) {
    const int m = static_cast<int>(A.rows());
    const int n = dict.n();
    if (A.cols() != n) throw std::invalid_argument("recover: A column count must match dict.n()");
    if (y.size() != m) throw std::invalid_argument("recover: measurement length mismatch");
    if (m > n) throw std::invalid_argument("recover: m must not exceed n");
    if (config.k < 1) throw std::invalid_argument("recover: k must be >= 1");
    if (2 * config.k > n) throw std::invalid_argument("recover: identification needs 2k <= n");

    SSCoSaMPState state;
    state.residual = y;
    state.estimate = CVector::Zero(n);
    state.support = SupportSet({}, dict.d());
    const double y_norm = y.norm();
    const double tolerance = config.residual_tolerance * y_norm;
    state.residual_history.push_back(y_norm);

    CVector best_estimate = state.estimate;
    SupportSet best_support = state.support;
    CVector best_residual = state.residual;
    double best_norm = y_norm;
    std::vector<double> best_by_iteration{y_norm};

    for (int iteration = 1; iteration <= config.max_outer_iterations; ++iteration) {
        CVector proxy = apply_real_adjoint(A, state.residual);
        ProjectionOutcome identified = project_recorded(config.backend, dict, proxy, 2 * config.k,
                                                        config.projection, state.l1_failures);
        SupportSet merged = merge_supports(identified.support, state.support, dict.d());
        CVector update = constrained_least_squares(A, dict, merged, y);
        state.update_residual_history.push_back((y - apply_real(A, update)).norm());

        ProjectionOutcome pruned = project_recorded(config.backend, dict, update, config.k,
                                                    config.projection, state.l1_failures);
        state.support = pruned.support;
        state.estimate = pruned.projected;
        state.residual = y - apply_real(A, state.estimate);
        state.iteration = iteration;
        double residual_norm = state.residual.norm();
        state.residual_history.push_back(residual_norm);

        if (residual_norm < best_norm) {
            best_norm = residual_norm;
            best_estimate = state.estimate;
            best_support = state.support;
            best_residual = state.residual;
        }
        best_by_iteration.push_back(best_norm);
        if (config.on_iteration) config.on_iteration(state);

        if (residual_norm <= tolerance) break;
        if (static_cast<int>(best_by_iteration.size()) > config.stall_window) {
            double before = best_by_iteration[best_by_iteration.size() - 1 -
                                              static_cast<std::size_t>(config.stall_window)];
            if (before - best_norm < config.stall_factor * std::max(before, 1e-300)) break;
        }
    }

    // hand back the best iterate with a consistent state
    state.estimate = best_estimate;
    state.support = best_support;
    state.residual = best_residual;
    return {best_estimate, state};
}

} // namespace sscosamp
