#include <gtest/gtest.h>

#include <optional>
#include <set>
#include <tuple>
#include <vector>

#include "gfalign/gf.hpp"
#include "oracles.hpp"

using namespace gfalign;

namespace {

std::uint64_t ipow64(unsigned p, int n) {
    std::uint64_t q = 1;
    for (int i = 0; i < n; ++i) q *= p;
    return q;
}

oracle::Vec modulus_vec(const Field& f) {
    oracle::Vec m;
    for (int i = 0; i <= f.n(); ++i) m.push_back(f.modulus()[std::size_t(i)]);
    return m;
}

const std::vector<std::pair<unsigned, int>> kSmallFields = {{2, 2}, {2, 3}, {3, 2}, {3, 3}, {5, 2}};

} // namespace

TEST(Irreducibility, MatchesProductEnumeration) {
    for (auto [p, n] : std::vector<std::pair<unsigned, int>>{{2, 2}, {2, 3}, {2, 4}, {2, 5}, {2, 6}, {3, 2}, {3, 3}, {3, 4}, {5, 2}, {5, 3}, {7, 2}}) {
        auto reducible = oracle::reducible_monics(p, n);
        std::uint64_t q = ipow64(p, n);
        for (std::uint64_t t = 0; t < q; ++t) {
            oracle::Vec c = oracle::digits(t, p, n);
            c.push_back(1);
            std::vector<u32> cc(c.begin(), c.end());
            bool expect = reducible.count(oracle::label(c, p)) == 0;
            ASSERT_EQ(is_irreducible(Poly(cc), p), expect) << "p=" << p << " n=" << n << " t=" << t;
        }
    }
}

TEST(CanonicalModulus, IsLexSmallestIrreducible) {
    for (auto [p, n] : std::vector<std::pair<unsigned, int>>{{2, 2}, {2, 3}, {2, 4}, {3, 2}, {3, 3}, {3, 4}, {5, 2}, {5, 3}, {7, 2}}) {
        auto reducible = oracle::reducible_monics(p, n);
        std::uint64_t q = ipow64(p, n);
        oracle::Vec want;
        for (std::uint64_t t = 0; t < q; ++t) {
            // Ascending t orders (c_{n-1}, ..., c_0) lexicographically.
            oracle::Vec c = oracle::digits(t, p, n);
            c.push_back(1);
            if (!reducible.count(oracle::label(c, p))) {
                want = c;
                break;
            }
        }
        Poly got = canonical_modulus(p, n);
        EXPECT_EQ(std::vector<u32>(want.begin(), want.end()), got.coeffs) << "p=" << p << " n=" << n;
    }
}

TEST(CanonicalModulus, KnownValues) {
    EXPECT_EQ(make_ctx(3, 3)->modulus().to_string(), "s^3+2s+1");
    EXPECT_EQ(make_ctx(2, 2)->modulus().to_string(), "s^2+s+1");
    EXPECT_EQ(make_ctx(2, 3)->modulus().to_string(), "s^3+s+1");
    EXPECT_EQ(make_ctx(3, 2)->modulus().to_string(), "s^2+1");
}

TEST(FieldAxioms, ExhaustiveSmallFields) {
    for (auto [p, n] : kSmallFields) {
        FieldPtr fp = make_ctx(p, n);
        const Field& f = *fp;
        const u32 q = f.order();
        ASSERT_EQ(q, ipow64(p, n));
        for (u32 a = 0; a < q; ++a) {
            Gfe x = f.elem(a);
            EXPECT_EQ(x + f.zero(), x);
            EXPECT_EQ(x * f.one(), x);
            EXPECT_TRUE((x - x).is_zero());
            EXPECT_TRUE((x + (-x)).is_zero());
            EXPECT_EQ(x.pow(q), x);
            if (a != 0) {
                EXPECT_TRUE((x * x.inv()).is_one());
            }
            for (u32 b = 0; b < q; ++b) {
                Gfe y = f.elem(b);
                ASSERT_EQ(x + y, y + x);
                ASSERT_EQ(x * y, y * x);
                for (u32 c = 0; c < q; ++c) {
                    Gfe z = f.elem(c);
                    ASSERT_EQ((x + y) + z, x + (y + z));
                    ASSERT_EQ((x * y) * z, x * (y * z));
                    ASSERT_EQ(x * (y + z), x * y + x * z);
                }
            }
        }
    }
}

TEST(FieldArithmetic, MatchesPolynomialProductOracle) {
    for (auto [p, n] : std::vector<std::pair<unsigned, int>>{{2, 4}, {3, 3}, {5, 2}, {7, 2}, {2, 7}, {3, 4}}) {
        FieldPtr fp = make_ctx(p, n);
        const Field& f = *fp;
        oracle::Vec m = modulus_vec(f);
        for (u32 a = 0; a < f.order(); ++a)
            for (u32 b = 0; b < f.order(); ++b) {
                ASSERT_EQ(f.mul(a, b), oracle::field_mul(a, b, m, p));
                ASSERT_EQ(f.add(a, b), oracle::field_add(a, b, p, n));
            }
    }
}

TEST(FieldArithmetic, PowerAndDivision) {
    FieldPtr fp = make_ctx(5, 3);
    const Field& f = *fp;
    for (u32 a = 1; a < f.order(); ++a) {
        Gfe x = f.elem(a);
        EXPECT_TRUE(x.pow(f.order() - 1).is_one());
        Gfe y = f.elem((a * 7 + 3) % f.order());
        if (!y.is_zero()) {
            EXPECT_EQ((x / y) * y, x);
        }
    }
}

TEST(FieldArithmetic, LargePrimeField) {
    FieldPtr fp = make_ctx(2147483647, 1);
    const Field& f = *fp;
    Gfe a = f.elem(2147483646);
    EXPECT_TRUE((a * a).is_one());
    EXPECT_TRUE((a * a.inv()).is_one());
}

TEST(FieldErrors, Contracts) {
    auto code = [](auto&& fn) -> std::optional<Errc> {
        try {
            fn();
        } catch (const Error& e) {
            return e.code();
        }
        return std::nullopt;
    };
    EXPECT_EQ(code([] { make_ctx(4, 2); }), Errc::NotPrime);
    EXPECT_EQ(code([] { make_ctx(2, 17); }), Errc::DegreeTooLarge);
    EXPECT_EQ(code([] { make_ctx(3, 20); }), Errc::DegreeTooLarge);
    EXPECT_EQ(code([] { make_ctx(7, 12); }), Errc::FieldTooLarge);
    EXPECT_EQ(code([] { make_ctx(3, 2, Poly({1, 0, 2})); }), Errc::NonMonic);
    EXPECT_EQ(code([] { make_ctx(3, 2, Poly({2, 0, 1})); }), Errc::NotIrreducible);
    FieldPtr f = make_ctx(3, 3);
    FieldPtr g = make_ctx(5, 2);
    EXPECT_EQ(code([&] { f->zero().inv(); }), Errc::DivisionByZero);
    EXPECT_EQ(code([&] { (void)(f->one() + g->one()); }), Errc::CtxMismatch);
    EXPECT_EQ(code([&] { f->elem(27); }), Errc::InvalidArgument);
}

TEST(FieldErrors, SameModulusIsCompatible) {
    FieldPtr a = make_ctx(3, 3);
    FieldPtr b = make_ctx(3, 3);
    EXPECT_EQ(a->elem(5) * b->elem(7), a->elem(a->mul(5, 7)));
}

TEST(ElementParsing, LabelDigitsPolynomial) {
    FieldPtr fp = make_ctx(3, 3);
    const Field& f = *fp;
    EXPECT_EQ(parse_element(f, "22").label(), 22u);
    EXPECT_EQ(parse_element(f, "[2,1,1]").label(), 22u);
    EXPECT_EQ(parse_element(f, "2s^2+s+1").label(), 22u);
    EXPECT_EQ(parse_element(f, "s^3").label(), parse_element(f, "-2s-1").label());
    EXPECT_EQ(f.elem(22).to_digit_string(), "[2,1,1]");
    EXPECT_EQ(f.elem(22).to_poly_string(), "2s^2+s+1");
    for (const char* bad : {"", "27", "[1,2]", "[3,0,0]", "2q", "s^"}) EXPECT_THROW(parse_element(f, bad), Error) << bad;
}

TEST(MinimalPolynomial, RootIrreducibleDegreeDividesN) {
    for (auto [p, n] : std::vector<std::pair<unsigned, int>>{{3, 3}, {2, 4}, {5, 2}, {2, 6}}) {
        FieldPtr fp = make_ctx(p, n);
        const Field& f = *fp;
        for (u32 a = 0; a < f.order(); ++a) {
            Gfe x = f.elem(a);
            Poly m = minimal_poly(x);
            ASSERT_TRUE(m.is_monic());
            ASSERT_EQ(n % m.degree(), 0);
            ASSERT_TRUE(is_irreducible(m, p));
            Gfe acc = f.zero();
            for (int i = m.degree(); i >= 0; --i) acc = acc * x + f.one().scaled(m[std::size_t(i)]);
            ASSERT_TRUE(acc.is_zero());
            ASSERT_EQ(m.degree() == 1, x.in_base_field());
        }
    }
    FieldPtr f = make_ctx(3, 3);
    EXPECT_EQ(minimal_poly(f->one()).to_string(), "s+2");
}

TEST(QuadraticNonResidue, SmallestNonSquare) {
    for (u32 p : {3u, 5u, 7u, 11u, 13u, 17u, 23u}) {
        std::set<u32> squares;
        for (u32 x = 1; x < p; ++x) squares.insert(x * x % p);
        u32 c = 2;
        while (squares.count(c)) ++c;
        EXPECT_EQ(quadratic_nonresidue(p), c);
    }
    EXPECT_THROW(quadratic_nonresidue(2), Error);
}
