#include <gtest/gtest.h>

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gfalign/census.hpp"
#include "gfalign/gf.hpp"

using namespace gfalign;

namespace {

CensusSpec exhaustive(u32 p, int n, CensusTarget t) {
    CensusSpec s;
    s.p = p;
    s.n = n;
    s.target = t;
    s.threads = 2;
    return s;
}

CensusSpec sampled(u32 p, int n, CensusTarget t, u64 count, u64 seed, unsigned threads = 2) {
    CensusSpec s = exhaustive(p, n, t);
    s.exhaustive = false;
    s.sample_count = count;
    s.seed = seed;
    s.threads = threads;
    return s;
}

Rational fraction(const CensusReport& r, const std::string& name) { return Rational(BigInt(r.count_of(name)), r.total); }

const CensusComparison* find(const CensusReport& r, const std::string& name) {
    for (const auto& c : r.comparisons)
        if (c.name == name) return &c;
    return nullptr;
}

bool is_prime_slow(u32 x) {
    if (x < 2) return false;
    for (u32 d = 2; d * d <= x; ++d)
        if (x % d == 0) return false;
    return true;
}

std::optional<Errc> error_code(const CensusSpec& s) {
    try {
        run_census(s);
    } catch (const Error& e) {
        return e.code();
    }
    return std::nullopt;
}

} // namespace

TEST(CensusClosedForms, KnownValues) {
    EXPECT_EQ(degenerate_fraction_closed(2, 2), make_rational(1, 3));
    EXPECT_EQ(degenerate_fraction_closed(3, 3), make_rational(1, 13));
    EXPECT_EQ(eigen_fraction(5, 2), make_rational(64, 625));
    EXPECT_EQ(eigen_fraction(7, 1), make_rational(0, 1));
    EXPECT_LT(eigen_fraction(3, 2), eigen_fraction(5, 2));
    EXPECT_EQ(odd_n3_bound(5), make_rational(24, 25) * make_rational(64, 125));
    EXPECT_EQ(p2_bound(5), make_rational(64, 125) * make_rational(2, 5));
    // (p-1)/(p^n-1) = 1/(1+p+...+p^(n-1)).
    for (u32 p : {2u, 3u, 5u, 7u})
        for (int n = 1; n <= 6; ++n) {
            long long s = 0, pw = 1;
            for (int i = 0; i < n; ++i, pw *= p) s += pw;
            EXPECT_EQ(degenerate_fraction_closed(p, n), make_rational(1, s));
        }
}

TEST(CensusX, DegenerateFractionExactForAllSmallFields) {
    int fields = 0;
    for (u32 p = 2; p <= 4096; ++p) {
        if (!is_prime_slow(p)) continue;
        u64 q = p;
        for (int n = 1; q <= 4096; ++n, q *= p) {
            CensusReport r = run_census(exhaustive(p, n, CensusTarget::x_normalized_h));
            ASSERT_EQ(r.total, BigInt(q - 1));
            // The degenerate h are exactly the nonzero elements fixed by x -> x^p.
            FieldPtr fp = make_ctx(p, n);
            u64 fixed = 0;
            for (u32 x = 1; x < q; ++x) fixed += fp->elem(x).pow(p) == fp->elem(x);
            ASSERT_EQ(r.count_of("degenerate"), fixed);
            ASSERT_EQ(fraction(r, "degenerate"), degenerate_fraction_closed(p, n)) << "p=" << p << " n=" << n;
            ASSERT_TRUE(r.all_pass());
            ASSERT_EQ(r.count_of("degenerate") + r.count_of("feasible"), q - 1);
            ++fields;
        }
    }
    EXPECT_GT(fields, 560);
}

TEST(CensusX, FullCoordinatesMatchNormalizedFraction) {
    for (auto [p, n] : std::vector<std::pair<u32, int>>{{2, 2}, {3, 2}, {2, 3}, {5, 2}}) {
        CensusReport r = run_census(exhaustive(p, n, CensusTarget::x_full));
        EXPECT_EQ(fraction(r, "degenerate"), degenerate_fraction_closed(p, n));
        EXPECT_TRUE(r.all_pass());
    }
}

TEST(CensusIC, FactorizedCountsEqualBruteForce) {
    for (auto [p, n] : std::vector<std::pair<u32, int>>{{2, 2}, {3, 2}, {5, 2}, {2, 3}, {3, 3}, {2, 4}, {2, 5}}) {
        FieldPtr fp = make_ctx(p, n);
        auto exact = detail::ic_normalized_exact(*fp, 2);
        auto brute = ic_normalized_bruteforce(*fp, 2);
        EXPECT_EQ(exact, brute) << "p=" << p << " n=" << n;
    }
}

TEST(CensusIC, EigenFractionExact) {
    for (auto [p, n] : std::vector<std::pair<u32, int>>{{5, 2}, {3, 2}, {2, 3}, {5, 3}, {7, 2}, {3, 4}}) {
        CensusReport r = run_census(exhaustive(p, n, CensusTarget::ic_normalized));
        // Independent count: hbar in F_p and each hbar_kk outside F_p.
        FieldPtr fp = make_ctx(p, n);
        u64 in = 0, out = 0;
        for (u32 x = 0; x < fp->order(); ++x) (fp->elem(x).pow(p) == fp->elem(x) ? in : out) += 1;
        ASSERT_EQ(BigInt(r.count_of("eigen_conditions")), BigInt(in) * out * out * out);
        EXPECT_EQ(fraction(r, "eigen_conditions"), eigen_fraction(p, n));
        const CensusComparison* c = find(r, "eigen_fraction");
        ASSERT_NE(c, nullptr);
        EXPECT_TRUE(c->pass);
    }
    EXPECT_EQ(fraction(run_census(exhaustive(5, 2, CensusTarget::ic_normalized)), "eigen_conditions"), make_rational(64, 625));
}

TEST(CensusIC, ClassesPartitionTotal) {
    for (auto [p, n] : std::vector<std::pair<u32, int>>{{5, 2}, {3, 3}, {2, 5}}) {
        CensusReport r = run_census(exhaustive(p, n, CensusTarget::ic_normalized));
        BigInt sum = 0;
        for (const auto& c : r.classes) sum += c.count;
        EXPECT_EQ(sum, r.total);
        EXPECT_EQ(r.count_of("EigenCase"), r.count_of("eigen_conditions"));
    }
}

TEST(CensusIC, OddAndP2LowerBoundsHold) {
    CensusReport r53 = run_census(exhaustive(5, 3, CensusTarget::ic_normalized));
    const CensusComparison* r2 = find(r53, "odd_n3_bound");
    ASSERT_NE(r2, nullptr);
    EXPECT_TRUE(r2->pass);
    EXPECT_GE(fraction(r53, "odd_conditions"), odd_n3_bound(5));
    EXPECT_TRUE(r53.all_pass());
    for (auto [p, n] : std::vector<std::pair<u32, int>>{{3, 3}, {7, 3}, {2, 5}, {3, 5}, {2, 7}}) {
        CensusSpec s = exhaustive(p, n, CensusTarget::ic_normalized);
        s.threshold = u64(1) << 22;
        CensusReport r = run_census(s);
        int l = (n - 1) / 2;
        EXPECT_GE(fraction(r, "odd_conditions"), odd_bound(p, l)) << "p=" << p << " n=" << n;
        EXPECT_GE(fraction(r, "odd_conditions"), odd_prime_n_bound(p, l)) << "p=" << p << " n=" << n;
        EXPECT_NE(find(r, "odd_bound"), nullptr);
        EXPECT_NE(find(r, "odd_prime_n_bound"), nullptr);
        EXPECT_TRUE(r.all_pass()) << "p=" << p << " n=" << n;
    }
    for (u32 p : {5u, 7u, 11u}) {
        CensusReport r = run_census(exhaustive(p, 2, CensusTarget::ic_normalized));
        ASSERT_NE(find(r, "p2_bound"), nullptr);
        EXPECT_GE(fraction(r, "p2_conditions"), p2_bound(p));
        EXPECT_TRUE(r.all_pass());
    }
    EXPECT_EQ(find(run_census(exhaustive(3, 2, CensusTarget::ic_normalized)), "p2_bound"), nullptr);
}

TEST(CensusIC, FullChannelEigenFraction) {
    CensusReport r = run_census(exhaustive(2, 2, CensusTarget::ic_full));
    EXPECT_EQ(r.total, BigInt(19683));
    EXPECT_EQ(fraction(r, "eigen_conditions"), eigen_fraction_full(2, 2));
    EXPECT_TRUE(r.all_pass());
}

TEST(CensusTrends, MonotoneOverP) {
    std::vector<u32> ps{3, 5, 7, 11};
    for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
        u32 a = ps[i], b = ps[i + 1];
        EXPECT_GT(degenerate_fraction_closed(a, 3), degenerate_fraction_closed(b, 3));
        // At n = 2 the decrease starts from p = 5: p = 3 gives 8/81 < 64/625.
        if (a >= 5) {
            EXPECT_GT(eigen_fraction(a, 2), eigen_fraction(b, 2));
        }
        EXPECT_GT(eigen_fraction(a, 3), eigen_fraction(b, 3));
        EXPECT_LT(odd_n3_bound(a), odd_n3_bound(b));
        EXPECT_LT(odd_bound(a, 2), odd_bound(b, 2));
    }
    std::vector<Rational> odd, eig;
    for (u32 p : ps) {
        CensusSpec s = exhaustive(p, 3, CensusTarget::ic_normalized);
        s.threshold = u64(1) << 21;
        s.threads = 4;
        CensusReport r = run_census(s);
        odd.push_back(fraction(r, "odd_conditions"));
        eig.push_back(fraction(r, "eigen_conditions"));
    }
    for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
        EXPECT_LT(odd[i], odd[i + 1]);
        EXPECT_GT(eig[i], eig[i + 1]);
    }
}

TEST(CensusSampling, ReproducibleAcrossRunsAndThreads) {
    for (CensusTarget t : {CensusTarget::x_full, CensusTarget::ic_normalized, CensusTarget::ic_full}) {
        CensusReport a = run_census(sampled(3, 3, t, 20000, 7, 1));
        CensusReport b = run_census(sampled(3, 3, t, 20000, 7, 5));
        CensusReport c = run_census(sampled(3, 3, t, 20000, 8, 3));
        EXPECT_EQ(census_csv(a), census_csv(b));
        EXPECT_NE(census_csv(a), census_csv(c));
        EXPECT_TRUE(a.comparisons.empty());
        BigInt sum = 0;
        for (const auto& k : a.classes) sum += k.count;
        EXPECT_EQ(sum, BigInt(20000));
    }
}

TEST(CensusSampling, StreamDependsOnlyOnSeedAndIndex) {
    SplitMix64 a(42, 1000), b(42, 1000), c(42, 1001);
    u64 x = a.next();
    EXPECT_EQ(x, b.next());
    EXPECT_NE(x, c.next());
    SplitMix64 g(1, 2);
    for (int i = 0; i < 1000; ++i) EXPECT_LT(g.below(7), 7u);
}

TEST(CensusErrors, Contracts) {
    EXPECT_EQ(error_code(exhaustive(3, 20, CensusTarget::x_normalized_h)), Errc::TooLargeForExhaustive);
    EXPECT_EQ(error_code(exhaustive(3, 2, CensusTarget::ic_full)), Errc::TooLargeForExhaustive);
    EXPECT_EQ(error_code(exhaustive(2, 11, CensusTarget::ic_normalized)), Errc::TooLargeForExhaustive);
    EXPECT_EQ(error_code(exhaustive(4, 2, CensusTarget::x_normalized_h)), Errc::NotPrime);
    EXPECT_EQ(error_code(sampled(3, 2, CensusTarget::x_full, 0, 1)), Errc::InvalidArgument);
    EXPECT_EQ(error_code(exhaustive(2, 10, CensusTarget::ic_normalized)), std::nullopt);
    EXPECT_EQ(parse_census_target("ic_full"), CensusTarget::ic_full);
    EXPECT_THROW(parse_census_target("y"), Error);
}

TEST(CensusCsv, RowsAndComparisonColumns) {
    CensusReport r = run_census(exhaustive(3, 3, CensusTarget::x_normalized_h));
    std::string csv = census_csv(r);
    std::istringstream in(csv);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) lines.push_back(line);
    ASSERT_EQ(lines.size(), 3u);
    EXPECT_EQ(lines[0], "target,p,n,kind,name,count,total,fraction,fraction_decimal,closed_form_name,relation,closed_form,pass");
    EXPECT_EQ(lines[1], "x_normalized_h,3,3,class,feasible,24,26,12/13,0.923076923,,,,");
    EXPECT_EQ(lines[2], "x_normalized_h,3,3,class,degenerate,2,26,1/13,0.076923077,degenerate_fraction,==,1/13,true");
}
