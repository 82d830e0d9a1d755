#pragma once

#include <complex>
#include <vector>

namespace slab {

using cplx = std::complex<double>;

/// Unnormalized in-place DFT of length n with the given stride:
/// out[j] = sum_k a[k] e^{-2*pi*i*j*k/n} (sign = -1) or the conjugate
/// transform (sign = +1).  Radix-2 when n is a power of two, direct
/// summation otherwise (grids here are desk scale, so O(n^2) fallback
/// is acceptable for non-power-of-two even sizes).
void dft_inplace(cplx* a, int n, int stride, int sign);

/// 2D transforms on an N1 x N2 plane stored row-major (index i1*N2 + i2).
/// forward() produces Fourier coefficients normalized by 1/(N1*N2), so a
/// plane f(x') = e^{2 pi i n.x'} yields a single unit coefficient;
/// inverse() is the exact inverse.
class Fourier2D {
public:
    Fourier2D(int N1, int N2) : N1_(N1), N2_(N2) {}

    void forward(std::vector<cplx>& plane) const;
    void inverse(std::vector<cplx>& plane) const;

    /// Signed integer frequency of row/column index.
    static int freq(int idx, int n) { return idx <= n / 2 ? idx : idx - n; }
    /// True for the unpaired Nyquist index of an even-size transform.
    static bool is_nyquist(int idx, int n) { return 2 * idx == n; }

private:
    int N1_, N2_;
};

} // namespace slab
