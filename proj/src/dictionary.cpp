#include "sscosamp/dictionary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sscosamp {

int cyclic_distance(int p, int q, int d) {
    if (d <= 0) throw std::invalid_argument("cyclic_distance: modulus must be positive");
    if (p < 0 || p >= d || q < 0 || q >= d)
        throw std::invalid_argument("cyclic_distance: index out of range");
    int diff = std::abs(p - q);
    return std::min(diff, d - diff);
}

SupportSet::SupportSet(std::vector<int> idx, int modulus) : indices(std::move(idx)), d(modulus) {
    if (d <= 0) throw std::invalid_argument("SupportSet: modulus must be positive");
    std::sort(indices.begin(), indices.end());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (indices[i] < 0 || indices[i] >= d)
            throw std::invalid_argument("SupportSet: index out of range");
        if (i > 0 && indices[i] == indices[i - 1])
            throw std::invalid_argument("SupportSet: duplicate index");
    }
}

bool SupportSet::contains(int p) const {
    return std::binary_search(indices.begin(), indices.end(), p);
}

int SupportSet::min_separation() const {
    if (size() < 2) return d;
    // indices are sorted, so the minimum cyclic gap is attained between
    // neighbours on the circle, including the wrap-around pair
    int best = d;
    for (std::size_t i = 0; i + 1 < indices.size(); ++i)
        best = std::min(best, indices[i + 1] - indices[i]);
    best = std::min(best, d - (indices.back() - indices.front()));
    return best;
}

Dictionary::Dictionary(int n, int d) : n_(n), d_(d) {
    if (n < 1) throw std::invalid_argument("Dictionary: n must be positive");
    if (d < n) throw std::invalid_argument("Dictionary: d must be at least n");
    entries_.resize(n, d);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int k = 0; k < d; ++k) {
        for (int j = 0; j < n; ++j) {
            // reduce jk mod d before forming the angle so large products
            // cannot lose precision
            long long phase = (static_cast<long long>(j) * k) % d;
            entries_(j, k) = std::polar(scale, -2.0 * M_PI * static_cast<double>(phase) / d);
        }
    }
    if (detail::is_pow2(d)) fft_ = std::make_unique<detail::Fft>(d);
}

CMatrix Dictionary::columns(const SupportSet& support) const {
    if (support.d != d_) throw std::invalid_argument("Dictionary::columns: modulus mismatch");
    CMatrix sub(n_, support.size());
    for (int i = 0; i < support.size(); ++i) sub.col(i) = entries_.col(support.indices[static_cast<std::size_t>(i)]);
    return sub;
}

double Dictionary::gram_magnitude(int h) const {
    if (h < 0 || h >= d_) throw std::invalid_argument("gram_magnitude: offset out of range");
    double denom = std::sin(M_PI * h / d_);
    if (denom < 1e-15) return 1.0; // identical columns
    return std::abs(std::sin(M_PI * static_cast<double>(n_) * h / d_)) / (n_ * denom);
}

double Dictionary::coherence_envelope(int h) const {
    if (h < 1 || h >= d_) throw std::invalid_argument("coherence_envelope: offset out of range");
    return 1.0 / (n_ * std::sin(M_PI * h / d_));
}

CVector Dictionary::synthesize(const CVector& alpha) const {
    if (alpha.size() != d_) throw std::invalid_argument("synthesize: coefficient length mismatch");
    if (fft_) {
        std::vector<Complex> buf(alpha.data(), alpha.data() + d_);
        fft_->forward(buf.data());
        CVector out(n_);
        const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
        for (int j = 0; j < n_; ++j) out[j] = buf[static_cast<std::size_t>(j)] * scale;
        return out;
    }
    return entries_ * alpha;
}

CVector Dictionary::analyze(const CVector& x) const {
    if (x.size() != n_) throw std::invalid_argument("analyze: signal length mismatch");
    if (fft_) {
        // D^* x = conj(DFT(conj(x zero-padded to d))) / sqrt(n)
        std::vector<Complex> buf(static_cast<std::size_t>(d_), Complex(0.0, 0.0));
        for (int j = 0; j < n_; ++j) buf[static_cast<std::size_t>(j)] = std::conj(x[j]);
        fft_->forward(buf.data());
        CVector out(d_);
        const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
        for (int k = 0; k < d_; ++k) out[k] = std::conj(buf[static_cast<std::size_t>(k)]) * scale;
        return out;
    }
    return entries_.adjoint() * x;
}

} // namespace sscosamp
