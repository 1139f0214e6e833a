#pragma once

// The n x d overcomplete DFT dictionary: entry (j,k) = exp(-2*pi*i*j*k/d)/sqrt(n).
// Columns are unit-norm atoms; pairwise coherence depends only on the cyclic
// offset between column indices, with a csc-shaped closed form and envelope.

#include <memory>
#include <vector>

#include "sscosamp/detail/fft.hpp"
#include "sscosamp/types.hpp"

namespace sscosamp {

int cyclic_distance(int p, int q, int d);

// Sorted set of distinct column indices in [0, d) with cyclic-distance semantics.
struct SupportSet {
    std::vector<int> indices;
    int d = 0;

    SupportSet() = default;
    SupportSet(std::vector<int> idx, int modulus);

    int size() const { return static_cast<int>(indices.size()); }
    bool empty() const { return indices.empty(); }
    bool contains(int p) const;
    // min over distinct pairs of cyclic distance; returns d for sets of size < 2
    int min_separation() const;
};

class Dictionary {
  public:
    Dictionary(int n, int d);

    int n() const { return n_; }
    int d() const { return d_; }
    double f_lo() const { return n_ / 2.0; }
    const CMatrix& entries() const { return entries_; }
    CMatrix columns(const SupportSet& support) const;

    // |(D*D)_{p,p+h}| via the closed form |sin(pi*n*h/d)| / (n*sin(pi*h/d)),
    // with the h=0 (identical column) case pinned to 1
    double gram_magnitude(int h) const;

    // f(h) = 1/(n*sin(pi*h/d)), defined for h in [1,d); upper-bounds gram_magnitude
    double coherence_envelope(int h) const;

    // D * alpha (length-d coefficients -> length-n signal)
    CVector synthesize(const CVector& alpha) const;
    // D^* x (length-n signal -> length-d correlations)
    CVector analyze(const CVector& x) const;

  private:
    int n_;
    int d_;
    CMatrix entries_;
    std::unique_ptr<detail::Fft> fft_; // set when d is a power of two
};

} // namespace sscosamp
