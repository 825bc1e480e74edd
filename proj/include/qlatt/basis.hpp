#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace qlatt {

inline std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i)
        r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
}

/// Fixed-magnetization computational basis: all n-bit masks with
/// popcount n_up, in ascending numeric order. Rank lookup uses the
/// combinatorial number system (numeric order of fixed-popcount masks
/// is colex order), so it runs in O(n_up) without a hash table.
class BandBasis {
public:
    BandBasis(int n, int n_up) : n_(n), n_up_(n_up) {
        if (n < 1 || n > 32) throw std::invalid_argument("BandBasis: n must be in [1, 32]");
        if (n_up < 0 || n_up > n) throw std::invalid_argument("BandBasis: n_up must be in [0, n]");
        const std::uint64_t dim = binomial(n, n_up);
        if (dim > max_dimension)
            throw std::length_error("BandBasis: dimension exceeds the configured capacity");

        choose_.assign(n + 1, std::vector<std::uint64_t>(n_up + 1, 0));
        for (int a = 0; a <= n; ++a)
            for (int b = 0; b <= n_up; ++b)
                choose_[a][b] = binomial(a, b);

        states_.reserve(dim);
        if (n_up == 0) {
            states_.push_back(0);
        } else {
            std::uint32_t v = (n_up == 32) ? 0xffffffffu : ((1u << n_up) - 1u);
            const std::uint32_t last = v << (n - n_up);
            for (;;) {
                states_.push_back(v);
                if (v == last) break;
                // Gosper's hack: next mask with the same popcount
                const std::uint32_t c = v & (0u - v);
                const std::uint32_t r = v + c;
                v = (((r ^ v) >> 2) / c) | r;
            }
        }
    }

    int n() const { return n_; }
    int n_up() const { return n_up_; }
    std::size_t dimension() const { return states_.size(); }
    const std::vector<std::uint32_t>& states() const { return states_; }
    std::uint32_t state(std::size_t k) const { return states_[k]; }

    /// Index of a mask in states(); the mask must have popcount n_up.
    std::size_t rank(std::uint32_t mask) const {
        std::size_t r = 0;
        int seen = 0;
        std::uint32_t m = mask;
        while (m != 0) {
            const int bit = std::countr_zero(m);
            ++seen;
            r += choose_[bit][seen];
            m &= m - 1;
        }
        return r;
    }

    // Memory budget for the enumerated state list (2^28 masks ~ 1 GiB).
    static constexpr std::uint64_t max_dimension = (1ull << 28);

private:
    int n_;
    int n_up_;
    std::vector<std::uint32_t> states_;
    std::vector<std::vector<std::uint64_t>> choose_;
};

inline BandBasis build_band_basis(int n, int n_up) { return BandBasis(n, n_up); }

/// Central-band filling: floor(n/2) up spins.
inline int central_n_up(int n) { return n / 2; }

} // namespace qlatt
