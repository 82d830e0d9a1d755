#include "slab/fft.hpp"

#include <cmath>

namespace slab {

namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

void fft_pow2(cplx* a, int n, int stride, int sign) {
    // bit reversal
    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i * stride], a[j * stride]);
    }
    for (int len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * M_PI / len;
        const cplx wl(std::cos(ang), std::sin(ang));
        for (int i = 0; i < n; i += len) {
            cplx w(1.0);
            for (int k = 0; k < len / 2; ++k) {
                cplx u = a[(i + k) * stride];
                cplx v = a[(i + k + len / 2) * stride] * w;
                a[(i + k) * stride] = u + v;
                a[(i + k + len / 2) * stride] = u - v;
                w *= wl;
            }
        }
    }
}

void dft_direct(cplx* a, int n, int stride, int sign) {
    std::vector<cplx> out(n);
    for (int j = 0; j < n; ++j) {
        cplx s(0.0);
        for (int k = 0; k < n; ++k) {
            const double ang = sign * 2.0 * M_PI * j * k / n;
            s += a[k * stride] * cplx(std::cos(ang), std::sin(ang));
        }
        out[j] = s;
    }
    for (int j = 0; j < n; ++j) a[j * stride] = out[j];
}

} // namespace

void dft_inplace(cplx* a, int n, int stride, int sign) {
    if (n == 1) return;
    if (is_pow2(n))
        fft_pow2(a, n, stride, sign);
    else
        dft_direct(a, n, stride, sign);
}

void Fourier2D::forward(std::vector<cplx>& plane) const {
    for (int i1 = 0; i1 < N1_; ++i1) dft_inplace(plane.data() + i1 * N2_, N2_, 1, -1);
    for (int i2 = 0; i2 < N2_; ++i2) dft_inplace(plane.data() + i2, N1_, N2_, -1);
    const double scale = 1.0 / (static_cast<double>(N1_) * N2_);
    for (auto& c : plane) c *= scale;
}

void Fourier2D::inverse(std::vector<cplx>& plane) const {
    for (int i1 = 0; i1 < N1_; ++i1) dft_inplace(plane.data() + i1 * N2_, N2_, 1, +1);
    for (int i2 = 0; i2 < N2_; ++i2) dft_inplace(plane.data() + i2, N1_, N2_, +1);
}

} // namespace slab
