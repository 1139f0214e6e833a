#pragma once

// Self-contained reference computations for the tests. Everything here is
// built from first principles (explicit column construction, direct
// summation, normal equations, power iteration) so library results are
// checked against an independent code path, not against themselves.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "sscosamp/types.hpp"

namespace oracles {

using sscosamp::CMatrix;
using sscosamp::Complex;
using sscosamp::CVector;

// column k of the n x d overcomplete DFT frame, written out longhand
inline CVector dft_column(int n, int d, int k) {
    CVector col(n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int j = 0; j < n; ++j) {
        double angle = -2.0 * std::numbers::pi * static_cast<double>(j) * static_cast<double>(k) /
                       static_cast<double>(d);
        col[j] = Complex(scale * std::cos(angle), scale * std::sin(angle));
    }
    return col;
}

inline CMatrix dft_frame(int n, int d) {
    CMatrix frame(n, d);
    for (int k = 0; k < d; ++k) frame.col(k) = dft_column(n, d, k);
    return frame;
}

// |<phi_p, phi_{p+h}>| by summing the series directly
inline double gram_magnitude(int n, int d, int h) {
    Complex acc(0.0, 0.0);
    for (int j = 0; j < n; ++j) {
        double angle = -2.0 * std::numbers::pi * static_cast<double>(j) * static_cast<double>(h) /
                       static_cast<double>(d);
        acc += Complex(std::cos(angle), std::sin(angle));
    }
    return std::abs(acc) / static_cast<double>(n);
}

inline int cyclic_distance(int p, int q, int d) {
    int diff = std::abs(p - q);
    return std::min(diff, d - diff);
}

inline bool min_separation_at_least(const std::vector<int>& support, int d, int h_min) {
    for (std::size_t i = 0; i < support.size(); ++i)
        for (std::size_t j = i + 1; j < support.size(); ++j)
            if (cyclic_distance(support[i], support[j], d) < h_min) return false;
    return true;
}

// all size-k subsets of [0,d) with min pairwise cyclic distance >= h_min
inline std::vector<std::vector<int>> separated_supports(int d, int k, int h_min) {
    std::vector<std::vector<int>> out;
    std::vector<int> pick(static_cast<std::size_t>(k));
    auto rec = [&](auto&& self, int depth, int start) -> void {
        if (depth == k) {
            out.push_back(pick);
            return;
        }
        for (int i = start; i < d; ++i) {
            pick[static_cast<std::size_t>(depth)] = i;
            bool ok = true;
            for (int j = 0; j < depth; ++j)
                if (cyclic_distance(pick[static_cast<std::size_t>(j)], i, d) < h_min) ok = false;
            if (ok) self(self, depth + 1, i + 1);
        }
    };
    rec(rec, 0, 0);
    return out;
}

// worst row sum of off-diagonal gram magnitudes over all separated supports
inline double eta_brute(int n, int d, int k, int h_min) {
    CMatrix frame = dft_frame(n, d);
    double worst = 0.0;
    for (const auto& support : separated_supports(d, k, h_min)) {
        for (int p : support) {
            double row = 0.0;
            for (int q : support)
                if (q != p) row += std::abs(frame.col(p).dot(frame.col(q)));
            worst = std::max(worst, row);
        }
    }
    return worst;
}

// worst off-support column sum of gram magnitudes over all separated supports
inline double eta_prime_brute(int n, int d, int k, int h_min) {
    CMatrix frame = dft_frame(n, d);
    double worst = 0.0;
    for (const auto& support : separated_supports(d, k, h_min)) {
        for (int p = 0; p < d; ++p) {
            bool inside = false;
            for (int q : support) inside = inside || q == p;
            if (inside) continue;
            double col = 0.0;
            for (int q : support) col += std::abs(frame.col(p).dot(frame.col(q)));
            worst = std::max(worst, col);
        }
    }
    return worst;
}

// least squares on explicit columns via the normal equations
inline CVector normal_equations_solve(const CMatrix& B, const CVector& w) {
    CMatrix gram = B.adjoint() * B;
    return gram.fullPivLu().solve(B.adjoint() * w);
}

inline CVector project_via_normal_equations(const CMatrix& B, const CVector& w) {
    return B * normal_equations_solve(B, w);
}

// ||M||_2 via power iteration on M^H M; deterministic start vector
inline double operator_norm(const CMatrix& M) {
    CMatrix square = M.adjoint() * M;
    CVector v = CVector::Ones(square.cols());
    for (int i = 0; i < square.cols(); ++i) v[i] += Complex(0.0, 1.0 / (i + 2.0));
    v /= v.norm();
    double lambda = 0.0;
    for (int iter = 0; iter < 10000; ++iter) {
        CVector next = square * v;
        double norm = next.norm();
        if (norm == 0.0) return 0.0;
        next /= norm;
        double delta = (next - v).norm();
        v = next;
        lambda = norm;
        if (delta < 1e-14) break;
    }
    return std::sqrt(lambda);
}

// max over off-support columns of || pinv(B_support) * phi_i ||_1
inline double erc_constant(int n, int d, const std::vector<int>& support) {
    CMatrix frame = dft_frame(n, d);
    CMatrix B(n, static_cast<int>(support.size()));
    for (std::size_t i = 0; i < support.size(); ++i)
        B.col(static_cast<int>(i)) = frame.col(support[i]);
    double worst = 0.0;
    for (int p = 0; p < d; ++p) {
        bool inside = false;
        for (int q : support) inside = inside || q == p;
        if (inside) continue;
        CVector beta = normal_equations_solve(B, frame.col(p));
        worst = std::max(worst, beta.cwiseAbs().sum());
    }
    return worst;
}

} // namespace oracles
