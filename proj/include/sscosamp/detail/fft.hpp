#pragma once

// Iterative radix-2 Cooley-Tukey transform with precomputed twiddles. Used as
// a fast path for products with the DFT dictionary when the column count is a
// power of two; the dense definition is the reference everywhere else.

#include <cstddef>
#include <vector>

#include "sscosamp/types.hpp"

namespace sscosamp::detail {

inline bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

class Fft {
  public:
    explicit Fft(int len) : len_(len) {
        rev_.resize(static_cast<std::size_t>(len));
        int bits = 0;
        while ((1 << bits) < len) ++bits;
        for (int i = 0; i < len; ++i) {
            int r = 0;
            for (int b = 0; b < bits; ++b)
                if (i & (1 << b)) r |= 1 << (bits - 1 - b);
            rev_[static_cast<std::size_t>(i)] = r;
        }
        // forward kernel e^{-2*pi*i*j/len}; each twiddle from std::polar so
        // roundoff stays at the ulp level rather than accumulating
        w_.resize(static_cast<std::size_t>(len / 2));
        for (int j = 0; j < len / 2; ++j)
            w_[static_cast<std::size_t>(j)] = std::polar(1.0, -2.0 * M_PI * j / len);
    }

    int length() const { return len_; }

    // in-place DFT with kernel e^{-2*pi*i*jk/len}
    void forward(Complex* a) const {
        for (int i = 0; i < len_; ++i) {
            int j = rev_[static_cast<std::size_t>(i)];
            if (i < j) std::swap(a[i], a[j]);
        }
        for (int size = 2; size <= len_; size <<= 1) {
            int half = size / 2;
            int stride = len_ / size;
            for (int start = 0; start < len_; start += size) {
                for (int j = 0; j < half; ++j) {
                    Complex u = a[start + j];
                    Complex v = a[start + j + half] * w_[static_cast<std::size_t>(j * stride)];
                    a[start + j] = u + v;
                    a[start + j + half] = u - v;
                }
            }
        }
    }

  private:
    int len_;
    std::vector<int> rev_;
    std::vector<Complex> w_;
};

} // namespace sscosamp::detail
