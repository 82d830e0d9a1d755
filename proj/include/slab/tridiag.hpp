#pragma once

#include <cassert>
#include <span>
#include <vector>

namespace slab {

/// LU factorization of a tridiagonal matrix (no pivoting; the systems here
/// are diagonally dominant).  solve() works for real or complex right-hand
/// sides against the same real factorization.
class TridiagLU {
public:
    TridiagLU() = default;

    void factor(std::span<const double> lower, std::span<const double> diag,
                std::span<const double> upper) {
        const std::size_t n = diag.size();
        assert(lower.size() == n - 1 && upper.size() == n - 1);
        dprime_.assign(diag.begin(), diag.end());
        m_.assign(n - 1, 0.0);
        upper_.assign(upper.begin(), upper.end());
        for (std::size_t k = 1; k < n; ++k) {
            m_[k - 1] = lower[k - 1] / dprime_[k - 1];
            dprime_[k] = diag[k] - m_[k - 1] * upper[k - 1];
        }
    }

    std::size_t size() const { return dprime_.size(); }

    template <typename T>
    void solve(std::span<T> rhs) const {
        const std::size_t n = dprime_.size();
        assert(rhs.size() == n);
        for (std::size_t k = 1; k < n; ++k) rhs[k] -= m_[k - 1] * rhs[k - 1];
        rhs[n - 1] /= dprime_[n - 1];
        for (std::size_t k = n - 1; k-- > 0;)
            rhs[k] = (rhs[k] - upper_[k] * rhs[k + 1]) / dprime_[k];
    }

private:
    std::vector<double> dprime_, m_, upper_;
};

} // namespace slab
