#ifndef GFALIGN_GF_HPP
#define GFALIGN_GF_HPP

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "gfalign/error.hpp"
#include "gfalign/modp.hpp"

namespace gfalign {

inline constexpr int kMaxDegree = 16;
inline constexpr u64 kMaxOrder = u64(1) << 31;

// Polynomial over F_p; coeffs[i] is the coefficient of s^i.
struct Poly {
    std::vector<u32> coeffs;

    Poly() = default;
    explicit Poly(std::vector<u32> c) : coeffs(std::move(c)) { trim(); }

    void trim() {
        while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
    }
    int degree() const { return int(coeffs.size()) - 1; }
    u32 operator[](std::size_t i) const { return i < coeffs.size() ? coeffs[i] : 0; }
    bool is_monic() const { return !coeffs.empty() && coeffs.back() == 1; }
    bool operator==(const Poly& o) const { return coeffs == o.coeffs; }

    std::string to_string(char var = 's') const {
        if (coeffs.empty()) return "0";
        std::string out;
        for (int i = degree(); i >= 0; --i) {
            u32 c = coeffs[std::size_t(i)];
            if (c == 0) continue;
            if (!out.empty()) out += '+';
            if (i == 0) {
                out += std::to_string(c);
                continue;
            }
            if (c != 1) out += std::to_string(c);
            out += var;
            if (i > 1) out += '^' + std::to_string(i);
        }
        return out;
    }
};

namespace detail {

// Remainder of a modulo b over F_p; b must be nonzero.
inline std::vector<u32> poly_rem(std::vector<u32> a, const std::vector<u32>& b, u32 p) {
    std::size_t db = b.size() - 1;
    u32 lead_inv = modp::inv(b.back(), p);
    while (!a.empty() && a.back() == 0) a.pop_back();
    while (a.size() > db) {
        u32 c = modp::mul(a.back(), lead_inv, p);
        std::size_t shift = a.size() - 1 - db;
        for (std::size_t i = 0; i <= db; ++i)
            a[shift + i] = modp::sub(a[shift + i], modp::mul(c, b[i], p), p);
        while (!a.empty() && a.back() == 0) a.pop_back();
    }
    return a;
}

inline void poly_divmod(std::vector<u32> a, const std::vector<u32>& b, u32 p, std::vector<u32>& q,
                        std::vector<u32>& r) {
    std::size_t db = b.size() - 1;
    u32 lead_inv = modp::inv(b.back(), p);
    while (!a.empty() && a.back() == 0) a.pop_back();
    q.assign(a.size() > db ? a.size() - db : 0, 0);
    while (a.size() > db) {
        u32 c = modp::mul(a.back(), lead_inv, p);
        std::size_t shift = a.size() - 1 - db;
        q[shift] = c;
        for (std::size_t i = 0; i <= db; ++i)
            a[shift + i] = modp::sub(a[shift + i], modp::mul(c, b[i], p), p);
        while (!a.empty() && a.back() == 0) a.pop_back();
    }
    r = std::move(a);
}

inline std::vector<u32> poly_mul(const std::vector<u32>& a, const std::vector<u32>& b, u32 p) {
    if (a.empty() || b.empty()) return {};
    std::vector<u32> out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            out[i + j] = modp::add(out[i + j], modp::mul(a[i], b[j], p), p);
    while (!out.empty() && out.back() == 0) out.pop_back();
    return out;
}

inline std::vector<u32> poly_sub(std::vector<u32> a, const std::vector<u32>& b, u32 p) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = modp::sub(a[i], b[i], p);
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

inline void check_poly_digits(const Poly& f, u32 p) {
    for (u32 c : f.coeffs)
        if (c >= p) throw Error(Errc::InvalidArgument, "polynomial coefficient out of range");
}

} // namespace detail

// Trial division by every monic polynomial of degree 1..deg(f)/2.
inline bool is_irreducible(const Poly& f, u32 p) {
    detail::check_poly_digits(f, p);
    if (!f.is_monic()) throw Error(Errc::NonMonic, "polynomial must be monic");
    int d = f.degree();
    if (d < 1) throw Error(Errc::InvalidArgument, "degree must be at least 1");
    for (int k = 1; k <= d / 2; ++k) {
        u64 count = 1;
        for (int i = 0; i < k; ++i) count *= p;
        std::vector<u32> g(std::size_t(k) + 1, 0);
        g[std::size_t(k)] = 1;
        for (u64 t = 0; t < count; ++t) {
            u64 x = t;
            for (int i = 0; i < k; ++i) {
                g[std::size_t(i)] = u32(x % p);
                x /= p;
            }
            if (detail::poly_rem(f.coeffs, g, p).empty()) return false;
        }
    }
    return true;
}

class Gfe;

class Field {
public:
    Field(u32 p, int n, Poly modulus) : p_(p), n_(n), modulus_(std::move(modulus)) {
        q_ = 1;
        pw_.resize(std::size_t(n_) + 1);
        for (int i = 0; i <= n_; ++i) {
            pw_[std::size_t(i)] = u32(q_);
            if (i < n_) q_ *= p_;
        }
        red_.assign(std::size_t(n_), 0);
        for (int i = 0; i < n_; ++i) red_[std::size_t(i)] = modp::neg(modulus_[std::size_t(i)], p_);
        if (n_ == 1)
            s_label_ = red_[0];
        else
            s_label_ = p_;
    }

    u32 p() const { return p_; }
    int n() const { return n_; }
    u32 order() const { return u32(q_); }
    const Poly& modulus() const { return modulus_; }
    u32 p_pow(int i) const { return pw_[std::size_t(i)]; }
    std::string name() const { return "GF(" + std::to_string(p_) + "^" + std::to_string(n_) + ")"; }

    bool same_as(const Field& o) const { return this == &o || (p_ == o.p_ && n_ == o.n_ && modulus_ == o.modulus_); }

    void to_digits(u32 a, u32* d) const {
        for (int i = 0; i < n_; ++i) {
            d[i] = a % p_;
            a /= p_;
        }
    }
    std::vector<u32> digits(u32 a) const {
        std::vector<u32> d(static_cast<std::size_t>(n_));
        to_digits(a, d.data());
        return d;
    }
    u32 from_digits(const u32* d) const {
        u64 a = 0;
        for (int i = n_ - 1; i >= 0; --i) a = a * p_ + d[i];
        return u32(a);
    }

    u32 add(u32 a, u32 b) const {
        if (p_ == 2) return a ^ b;
        u64 r = 0;
        for (int i = 0; i < n_; ++i) {
            r += u64(modp::add(a % p_, b % p_, p_)) * pw_[std::size_t(i)];
            a /= p_;
            b /= p_;
        }
        return u32(r);
    }
    u32 neg(u32 a) const {
        if (p_ == 2) return a;
        u64 r = 0;
        for (int i = 0; i < n_; ++i) {
            r += u64(modp::neg(a % p_, p_)) * pw_[std::size_t(i)];
            a /= p_;
        }
        return u32(r);
    }
    u32 sub(u32 a, u32 b) const { return add(a, neg(b)); }

    // Multiplies by an F_p scalar.
    u32 scale(u32 a, u32 c) const {
        c %= p_;
        if (c == 0) return 0;
        if (c == 1) return a;
        u64 r = 0;
        for (int i = 0; i < n_; ++i) {
            r += u64(modp::mul(a % p_, c, p_)) * pw_[std::size_t(i)];
            a /= p_;
        }
        return u32(r);
    }

    u32 mul(u32 a, u32 b) const {
        if (a == 0 || b == 0) return 0;
        if (n_ == 1) return modp::mul(a, b, p_);
        std::array<u32, kMaxDegree> da{}, db{};
        std::array<u64, 2 * kMaxDegree> prod{};
        to_digits(a, da.data());
        to_digits(b, db.data());
        for (int i = 0; i < n_; ++i) {
            if (da[std::size_t(i)] == 0) continue;
            for (int j = 0; j < n_; ++j)
                prod[std::size_t(i + j)] = (prod[std::size_t(i + j)] + u64(da[std::size_t(i)]) * db[std::size_t(j)]) % p_;
        }
        // s^n = sum red_[i] s^i
        for (int k = 2 * n_ - 2; k >= n_; --k) {
            u64 c = prod[std::size_t(k)] % p_;
            if (c == 0) continue;
            prod[std::size_t(k)] = 0;
            for (int i = 0; i < n_; ++i)
                prod[std::size_t(k - n_ + i)] = (prod[std::size_t(k - n_ + i)] + c * red_[std::size_t(i)]) % p_;
        }
        u64 r = 0;
        for (int i = n_ - 1; i >= 0; --i) r = r * p_ + prod[std::size_t(i)] % p_;
        return u32(r);
    }

    // Extended Euclid on polynomials.
    u32 inv(u32 a) const {
        if (a == 0) throw Error(Errc::DivisionByZero, "inverse of zero");
        if (n_ == 1) return modp::inv(a, p_);
        std::vector<u32> r0 = modulus_.coeffs;
        std::vector<u32> r1 = digits(a);
        while (!r1.empty() && r1.back() == 0) r1.pop_back();
        std::vector<u32> t0, t1{1};
        while (!r1.empty()) {
            std::vector<u32> q, r;
            detail::poly_divmod(r0, r1, p_, q, r);
            std::vector<u32> t2 = detail::poly_sub(t0, detail::poly_mul(q, t1, p_), p_);
            r0 = std::move(r1);
            r1 = std::move(r);
            t0 = std::move(t1);
            t1 = std::move(t2);
        }
        u32 c = modp::inv(r0[0], p_);
        std::vector<u32> res(std::size_t(n_), 0);
        for (std::size_t i = 0; i < t0.size() && i < res.size(); ++i) res[i] = modp::mul(t0[i], c, p_);
        return from_digits(res.data());
    }

    u32 div(u32 a, u32 b) const { return mul(a, inv(b)); }

    u32 pow(u32 a, u64 e) const {
        u32 r = 1, x = a;
        while (e) {
            if (e & 1) r = mul(r, x);
            x = mul(x, x);
            e >>= 1;
        }
        return r;
    }

    bool in_base_field(u32 a) const { return a < p_; }

    // Label of the residue class of s.
    u32 s_label() const { return s_label_; }

    // Reduces an arbitrary polynomial in s to a field label.
    u32 reduce(const Poly& f) const {
        std::vector<u32> r = detail::poly_rem(f.coeffs, modulus_.coeffs, p_);
        r.resize(std::size_t(n_), 0);
        return from_digits(r.data());
    }

    Gfe elem(u32 label) const;
    Gfe zero() const;
    Gfe one() const;

private:
    u32 p_;
    int n_;
    Poly modulus_;
    u64 q_ = 1;
    std::vector<u32> pw_;
    std::vector<u32> red_;
    u32 s_label_ = 0;
};

using FieldPtr = std::shared_ptr<const Field>;

inline void check_field_params(u32 p, int n) {
    if (!is_prime(p)) throw Error(Errc::NotPrime, std::to_string(p) + " is not prime");
    if (n < 1) throw Error(Errc::InvalidArgument, "degree must be at least 1");
    if (n > kMaxDegree) throw Error(Errc::DegreeTooLarge, "degree " + std::to_string(n) + " exceeds 16");
    u64 q = 1;
    for (int i = 0; i < n; ++i) {
        q *= p;
        if (q > kMaxOrder) throw Error(Errc::FieldTooLarge, "p^n exceeds 2^31");
    }
}

// Lex-smallest monic irreducible of degree n by (c_{n-1}, ..., c_0).
inline Poly canonical_modulus(u32 p, int n) {
    check_field_params(p, n);
    u64 q = 1;
    for (int i = 0; i < n; ++i) q *= p;
    std::vector<u32> c(std::size_t(n) + 1, 0);
    c[std::size_t(n)] = 1;
    for (u64 t = 0; t < q; ++t) {
        u64 x = t;
        for (int i = 0; i < n; ++i) {
            c[std::size_t(i)] = u32(x % p);
            x /= p;
        }
        Poly f(c);
        if (is_irreducible(f, p)) return f;
    }
    throw Error(Errc::NotIrreducible, "no irreducible polynomial found");
}

inline FieldPtr make_ctx(u32 p, int n) { return std::make_shared<const Field>(p, n, canonical_modulus(p, n)); }

inline FieldPtr make_ctx(u32 p, int n, const Poly& modulus) {
    check_field_params(p, n);
    if (modulus.degree() != n) throw Error(Errc::InvalidArgument, "modulus degree must equal n");
    if (!is_irreducible(modulus, p)) throw Error(Errc::NotIrreducible, modulus.to_string() + " is reducible");
    return std::make_shared<const Field>(p, n, modulus);
}

class Gfe {
public:
    Gfe() = default;
    Gfe(const Field& f, u32 label) : f_(&f), label_(label) {
        if (label >= f.order()) throw Error(Errc::InvalidArgument, "label out of range");
    }

    const Field& field() const { return *f_; }
    const Field* field_ptr() const { return f_; }
    u32 label() const { return label_; }
    std::vector<u32> digits() const { return f_->digits(label_); }
    bool is_zero() const { return label_ == 0; }
    bool is_one() const { return label_ == 1; }
    bool in_base_field() const { return f_->in_base_field(label_); }

    Gfe operator+(const Gfe& o) const { return {*f_, f_->add(label_, check(o).label_), 0}; }
    Gfe operator-(const Gfe& o) const { return {*f_, f_->sub(label_, check(o).label_), 0}; }
    Gfe operator-() const { return {*f_, f_->neg(label_), 0}; }
    Gfe operator*(const Gfe& o) const { return {*f_, f_->mul(label_, check(o).label_), 0}; }
    Gfe operator/(const Gfe& o) const { return {*f_, f_->div(label_, check(o).label_), 0}; }
    Gfe& operator+=(const Gfe& o) { return *this = *this + o; }
    Gfe& operator-=(const Gfe& o) { return *this = *this - o; }
    Gfe& operator*=(const Gfe& o) { return *this = *this * o; }
    Gfe inv() const { return {*f_, f_->inv(label_), 0}; }
    Gfe pow(u64 e) const { return {*f_, f_->pow(label_, e), 0}; }
    Gfe scaled(u32 c) const { return {*f_, f_->scale(label_, c), 0}; }

    bool operator==(const Gfe& o) const { return label_ == o.label_ && same_field(o); }
    bool operator!=(const Gfe& o) const { return !(*this == o); }

    bool same_field(const Gfe& o) const { return f_ == o.f_ || (f_ && o.f_ && f_->same_as(*o.f_)); }

    std::string to_label_string() const { return std::to_string(label_); }

    // High-to-low digit tuple, e.g. "[2,1,1]".
    std::string to_digit_string() const {
        std::vector<u32> d = digits();
        std::string out = "[";
        for (int i = int(d.size()) - 1; i >= 0; --i) {
            out += std::to_string(d[std::size_t(i)]);
            if (i > 0) out += ',';
        }
        return out + "]";
    }

    std::string to_poly_string() const { return Poly(digits()).to_string(); }

private:
    Gfe(const Field& f, u32 label, int) : f_(&f), label_(label) {}

    const Gfe& check(const Gfe& o) const {
        if (!same_field(o)) throw Error(Errc::CtxMismatch, "operands belong to different fields");
        return o;
    }

    const Field* f_ = nullptr;
    u32 label_ = 0;
};

inline Gfe Field::elem(u32 label) const { return Gfe(*this, label); }
inline Gfe Field::zero() const { return Gfe(*this, 0); }
inline Gfe Field::one() const { return Gfe(*this, 1); }

inline Gfe operator*(u32 c, const Gfe& a) { return a.scaled(c); }

// Accepts a decimal label ("22"), a high-to-low digit tuple ("[2,1,1]") or a polynomial ("2s^2+s+1").
inline Gfe parse_element(const Field& f, std::string_view text) {
    std::string t;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
    auto fail = [&](const std::string& why) -> Gfe {
        throw Error(Errc::ParseError, "element '" + std::string(text) + "': " + why);
    };
    if (t.empty()) return fail("empty");
    auto parse_uint = [&](std::size_t& pos, u64& out) {
        std::size_t start = pos;
        out = 0;
        while (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos]))) {
            out = out * 10 + u64(t[pos] - '0');
            if (out > (u64(1) << 40)) fail("number too large");
            ++pos;
        }
        return pos > start;
    };
    if (t.front() == '[') {
        if (t.back() != ']') return fail("unterminated digit tuple");
        std::vector<u32> hi_to_lo;
        std::size_t pos = 1;
        while (pos < t.size() - 1) {
            u64 v;
            if (!parse_uint(pos, v)) return fail("expected digit");
            if (v >= f.p()) return fail("digit out of range");
            hi_to_lo.push_back(u32(v));
            if (pos < t.size() - 1) {
                if (t[pos] != ',' && t[pos] != ';') return fail("expected separator");
                ++pos;
            }
        }
        if (hi_to_lo.size() != std::size_t(f.n())) return fail("expected " + std::to_string(f.n()) + " digits");
        std::reverse(hi_to_lo.begin(), hi_to_lo.end());
        return f.elem(f.from_digits(hi_to_lo.data()));
    }
    if (std::all_of(t.begin(), t.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
        std::size_t pos = 0;
        u64 v;
        parse_uint(pos, v);
        if (v >= f.order()) return fail("label out of range");
        return f.elem(u32(v));
    }
    std::vector<u32> coeffs;
    std::size_t pos = 0;
    bool first = true;
    while (pos < t.size()) {
        bool negative = false;
        if (t[pos] == '+' || t[pos] == '-') {
            negative = t[pos] == '-';
            ++pos;
        } else if (!first) {
            return fail("expected '+' or '-'");
        }
        first = false;
        u64 coef = 1;
        bool has_coef = parse_uint(pos, coef);
        if (!has_coef) coef = 1;
        if (has_coef && pos < t.size() && t[pos] == '*') ++pos;
        u64 exponent = 0;
        if (pos < t.size() && (t[pos] == 's' || t[pos] == 'x')) {
            ++pos;
            exponent = 1;
            if (pos < t.size() && t[pos] == '^') {
                ++pos;
                if (!parse_uint(pos, exponent)) return fail("expected exponent");
                if (exponent > 4096) return fail("exponent too large");
            }
        } else if (!has_coef) {
            return fail("expected term");
        }
        u32 c = u32(coef % f.p());
        if (negative) c = modp::neg(c, f.p());
        if (coeffs.size() <= exponent) coeffs.resize(std::size_t(exponent) + 1, 0);
        coeffs[std::size_t(exponent)] = modp::add(coeffs[std::size_t(exponent)], c, f.p());
    }
    return f.elem(f.reduce(Poly(coeffs)));
}

// First linear dependence among 1, a, a^2, ... over F_p.
inline Poly minimal_poly(const Gfe& a) {
    const Field& f = a.field();
    std::size_t n = std::size_t(f.n());
    std::vector<std::vector<u32>> powers{f.digits(1)};
    Gfe x = f.one();
    for (std::size_t d = 1; d <= n; ++d) {
        x = x * a;
        std::vector<u32> mat(n * d);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < d; ++c) mat[r * d + c] = powers[c][r];
        auto sol = modp::solve_any(mat, n, d, x.digits(), f.p());
        if (sol) {
            std::vector<u32> m(d + 1, 0);
            m[d] = 1;
            for (std::size_t i = 0; i < d; ++i) m[i] = modp::neg((*sol)[i], f.p());
            return Poly(m);
        }
        powers.push_back(x.digits());
    }
    throw Error(Errc::InvalidArgument, "no dependence found");
}

inline u32 quadratic_nonresidue(u32 p) {
    if (!is_prime(p)) throw Error(Errc::NotPrime, std::to_string(p) + " is not prime");
    if (p == 2) throw Error(Errc::NoNonResidue, "F_2 has no quadratic non-residue");
    if (p <= (u32(1) << 20)) {
        std::vector<bool> square(p, false);
        for (u64 x = 0; x < p; ++x) square[std::size_t(x * x % p)] = true;
        for (u32 c = 2; c < p; ++c)
            if (!square[c]) return c;
    } else {
        for (u32 c = 2; c < p; ++c)
            if (modp::pow(c, (p - 1) / 2, p) == p - 1) return c;
    }
    throw Error(Errc::NoNonResidue, "none found");
}

} // namespace gfalign

#endif // GFALIGN_GF_HPP
