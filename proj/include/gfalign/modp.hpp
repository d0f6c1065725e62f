#ifndef GFALIGN_MODP_HPP
#define GFALIGN_MODP_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "gfalign/error.hpp"

namespace gfalign {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

// Scalar arithmetic in F_p for p < 2^31.
namespace modp {

inline u32 add(u32 a, u32 b, u32 p) {
    u64 s = u64(a) + b;
    return s >= p ? u32(s - p) : u32(s);
}

inline u32 sub(u32 a, u32 b, u32 p) { return a >= b ? a - b : u32(u64(a) + p - b); }

inline u32 neg(u32 a, u32 p) { return a == 0 ? 0 : p - a; }

inline u32 mul(u32 a, u32 b, u32 p) { return u32(u64(a) * b % p); }

inline u32 inv(u32 a, u32 p) {
    if (a % p == 0) throw Error(Errc::DivisionByZero, "inverse of 0 in F_p");
    std::int64_t t0 = 0, t1 = 1;
    std::int64_t r0 = p, r1 = a % p;
    while (r1 != 0) {
        std::int64_t q = r0 / r1;
        std::int64_t r2 = r0 - q * r1;
        r0 = r1;
        r1 = r2;
        std::int64_t t2 = t0 - q * t1;
        t0 = t1;
        t1 = t2;
    }
    t0 %= std::int64_t(p);
    if (t0 < 0) t0 += p;
    return u32(t0);
}

inline u32 pow(u32 a, u64 e, u32 p) {
    u64 r = 1 % p, x = a % p;
    while (e) {
        if (e & 1) r = r * x % p;
        x = x * x % p;
        e >>= 1;
    }
    return u32(r);
}

// Solves A x = b (A row-major, rows x cols) and returns one solution, or nullopt if inconsistent.
inline std::optional<std::vector<u32>> solve_any(std::vector<u32> a, std::size_t rows, std::size_t cols,
                                                 std::vector<u32> b, u32 p) {
    std::vector<std::size_t> pivot_cols;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = rows;
        for (std::size_t i = r; i < rows; ++i) {
            if (a[i * cols + c] != 0) {
                piv = i;
                break;
            }
        }
        if (piv == rows) continue;
        if (piv != r) {
            for (std::size_t k = 0; k < cols; ++k) std::swap(a[piv * cols + k], a[r * cols + k]);
            std::swap(b[piv], b[r]);
        }
        u32 iv = inv(a[r * cols + c], p);
        for (std::size_t k = 0; k < cols; ++k) a[r * cols + k] = mul(a[r * cols + k], iv, p);
        b[r] = mul(b[r], iv, p);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r) continue;
            u32 f = a[i * cols + c];
            if (f == 0) continue;
            for (std::size_t k = 0; k < cols; ++k)
                a[i * cols + k] = sub(a[i * cols + k], mul(f, a[r * cols + k], p), p);
            b[i] = sub(b[i], mul(f, b[r], p), p);
        }
        pivot_cols.push_back(c);
        ++r;
    }
    for (std::size_t i = r; i < rows; ++i)
        if (b[i] != 0) return std::nullopt;
    std::vector<u32> x(cols, 0);
    for (std::size_t i = 0; i < r; ++i) x[pivot_cols[i]] = b[i];
    return x;
}

} // namespace modp

inline bool is_prime(u64 n) {
    if (n < 2) return false;
    if (n < 4) return true;
    if (n % 2 == 0) return false;
    for (u64 d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

} // namespace gfalign

#endif // GFALIGN_MODP_HPP
