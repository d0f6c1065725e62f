#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <random>
#include <vector>

#include "gfalign/fplinalg.hpp"
#include "gfalign/gf.hpp"
#include "gfalign/xch.hpp"

using namespace gfalign;

namespace {

XChannel normalized_x(const Field& f, u32 h) { return make_xchannel(f, {{{1, 1}, {h, 1}}}); }

// Every message tuple of length d over F_p in turn; returns false when f returns false.
template <class F>
bool for_all_messages(const std::array<int, 4>& streams, u32 p, F&& f) {
    int total = streams[0] + streams[1] + streams[2] + streams[3];
    std::vector<u32> flat(std::size_t(total), 0);
    while (true) {
        std::array<std::vector<u32>, 4> msgs;
        std::size_t off = 0;
        for (std::size_t k = 0; k < 4; ++k) {
            msgs[k].assign(flat.begin() + std::ptrdiff_t(off), flat.begin() + std::ptrdiff_t(off + std::size_t(streams[k])));
            off += std::size_t(streams[k]);
        }
        if (!f(msgs)) return false;
        std::size_t pos = 0;
        while (pos < flat.size() && flat[pos] == p - 1) flat[pos++] = 0;
        if (pos == flat.size()) return true;
        ++flat[pos];
    }
}

// Largest set of messages whose links are nonzero and whose sources never reach another chosen destination.
int interference_free_messages(const XChannel& ch) {
    int best = 0;
    for (unsigned mask = 1; mask < 16; ++mask) {
        bool ok = true;
        int count = 0;
        for (std::size_t a = 0; a < 4 && ok; ++a) {
            if (!(mask >> a & 1)) continue;
            ++count;
            auto [sa, da] = kXMessages[a];
            if (ch.h[std::size_t(da)][std::size_t(sa)].is_zero()) ok = false;
            for (std::size_t b = 0; b < 4 && ok; ++b) {
                if (a == b || !(mask >> b & 1)) continue;
                auto [sb, db] = kXMessages[b];
                if (sa == sb || da == db) ok = false;
                if (!ch.h[std::size_t(db)][std::size_t(sa)].is_zero()) ok = false;
            }
        }
        if (ok) best = std::max(best, count);
    }
    return best;
}

} // namespace

TEST(XNormalize, GainsBecomeCanonical) {
    FieldPtr fp = make_ctx(3, 2);
    const Field& f = *fp;
    for (u32 a = 1; a < 9; ++a)
        for (u32 b = 1; b < 9; ++b)
            for (u32 c = 1; c < 9; ++c)
                for (u32 d = 1; d < 9; ++d) {
                    XChannel ch = make_xchannel(f, {{{a, b}, {c, d}}});
                    XNormalization nz = normalize(ch);
                    for (std::size_t j = 0; j < 2; ++j)
                        for (std::size_t i = 0; i < 2; ++i) {
                            Gfe g = nz.dest_scale[j] * ch.h[j][i] * nz.source_scale[i];
                            Gfe want = (j == 1 && i == 0) ? nz.h : f.one();
                            ASSERT_EQ(g, want);
                        }
                    ASSERT_EQ(nz.h, f.elem(b) * f.elem(c) / (f.elem(a) * f.elem(d)));
                }
}

TEST(XNormalize, Errors) {
    FieldPtr fp = make_ctx(3, 3);
    EXPECT_THROW(normalize(make_xchannel(*fp, {{{0, 1}, {1, 1}}})), Error);
    EXPECT_THROW(feasible(fp->zero()), Error);
    EXPECT_THROW(classify_zero(normalized_x(*fp, 5)), Error);
}

TEST(XZeroPatterns, AllSixteenPatterns) {
    FieldPtr fp = make_ctx(3, 2);
    const Field& f = *fp;
    int fully = 0;
    for (unsigned mask = 0; mask < 16; ++mask) {
        std::array<std::array<u32, 2>, 2> l{};
        for (std::size_t k = 0; k < 4; ++k) l[k / 2][k % 2] = (mask >> k & 1) ? 5 : 0;
        XChannel ch = make_xchannel(f, l);
        if (ch.fully_connected()) {
            ++fully;
            continue;
        }
        XZeroReport z = classify_zero(ch);
        EXPECT_EQ(z.C, interference_free_messages(ch)) << "mask " << mask;
        EXPECT_EQ(z.C_linear, z.C);
        XScheme s = construct_x(ch);
        EXPECT_EQ(s.mode, XMode::zero_pattern);
        XVerifyReport v = verify_x(s, ch);
        ASSERT_TRUE(v.pass) << v.failure;
        EXPECT_EQ(s.sum_rate, Rational(z.C_linear));
        bool z11 = l[0][0] == 0, z12 = l[0][1] == 0, z21 = l[1][0] == 0, z22 = l[1][1] == 0;
        int want_case = (z12 && z21 && !z11 && !z22) ? 1 : (z11 && z22 && !z12 && !z21) ? 2 : mask == 0 ? 3 : 4;
        EXPECT_EQ(z.case_id, want_case);
        std::array<std::vector<u32>, 4> msgs;
        for (std::size_t k = 0; k < 4; ++k)
            for (int c = 0; c < s.streams[k]; ++c) msgs[k].push_back(u32(c + k) % 3);
        EXPECT_EQ(simulate_x(s, ch, msgs), msgs);
    }
    EXPECT_EQ(fully, 1);
}

TEST(XScalar, ExclusionSetMatchesRankTests) {
    for (auto [p, n] : std::vector<std::pair<u32, int>>{{3, 3}, {5, 3}, {2, 3}, {7, 3}}) {
        FieldPtr fp = make_ctx(p, n);
        const Field& f = *fp;
        for (u32 t = p; t < f.order(); ++t) {
            Gfe h = f.elem(t);
            auto excl = x_p3_excluded_set(h);
            std::vector<u32> by_rank;
            for (u32 e = 0; e < f.order(); ++e) {
                Gfe x = f.elem(e);
                bool a = rank(cols_from_elements({x, h * x, f.one()})) < 3;
                bool b = rank(cols_from_elements({h, f.one(), h * x})) < 3;
                if (e == 0 || a || b) by_rank.push_back(e);
            }
            ASSERT_EQ(excl, by_rank) << "p=" << p << " h=" << t;
            // |A u {0}| = p^2 and |B| <= p^2.
            EXPECT_LE(excl.size(), std::size_t(2 * p * p));
            XScheme s = construct_x_p3(h);
            EXPECT_FALSE(std::binary_search(excl.begin(), excl.end(), s.precoders[0].label(0, 0)));
        }
    }
}

TEST(XScalar, AllFeasibleGF27ExhaustiveRoundTrip) {
    FieldPtr fp = make_ctx(3, 3);
    const Field& f = *fp;
    int feasible_count = 0;
    for (u32 t = 1; t < 27; ++t) {
        XChannel ch = normalized_x(f, t);
        if (!feasible(f.elem(t))) {
            XScheme s = construct_x(ch);
            EXPECT_EQ(s.mode, XMode::degenerate_rate1);
            EXPECT_TRUE(verify_x(s, ch).pass);
            EXPECT_THROW(construct_x(ch, XModeRequest::scalar_p3), Error);
            continue;
        }
        ++feasible_count;
        for (bool alt : {false, true}) {
            XScheme s = construct_x_p3(f.elem(t), alt);
            XVerifyReport v = verify_x(s, ch);
            ASSERT_TRUE(v.pass) << v.failure;
            EXPECT_EQ(v.rank_S1, 3u);
            EXPECT_EQ(v.rank_S2, 3u);
            EXPECT_EQ(s.sum_rate, Rational(4, 3));
            bool all = for_all_messages(s.streams, 3, [&](const auto& m) { return simulate_x(s, ch, m) == m; });
            EXPECT_TRUE(all);
        }
    }
    EXPECT_EQ(feasible_count, 24);
}

TEST(XScalar, RawChannelsVerify) {
    FieldPtr fp = make_ctx(5, 3);
    const Field& f = *fp;
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 300; ++trial) {
        std::array<std::array<u32, 2>, 2> l{};
        for (auto& row : l)
            for (auto& x : row) x = u32(1 + rng() % 124);
        XChannel ch = make_xchannel(f, l);
        XScheme s = construct_x(ch);
        XVerifyReport v = verify_x(s, ch);
        ASSERT_TRUE(v.pass) << v.failure;
        std::array<std::vector<u32>, 4> msgs;
        for (std::size_t k = 0; k < 4; ++k)
            for (int c = 0; c < s.streams[k]; ++c) msgs[k].push_back(u32(rng() % 5));
        ASSERT_EQ(simulate_x(s, ch, msgs), msgs);
    }
}

TEST(XExtension, AllFeasibleQuadraticFields) {
    for (u32 p : {2u, 3u, 5u, 7u}) {
        FieldPtr fp = make_ctx(p, 2);
        const Field& f = *fp;
        for (u32 t = p; t < f.order(); ++t) {
            XChannel ch = normalized_x(f, t);
            XScheme s = construct_x(ch);
            ASSERT_EQ(s.mode, XMode::ext_p2);
            XVerifyReport v = verify_x(s, ch);
            ASSERT_TRUE(v.pass) << v.failure;
            EXPECT_EQ(v.rank_S1, 6u);
            EXPECT_EQ(v.rank_S2, 6u);
            EXPECT_EQ(s.sum_rate, Rational(4, 3));
            if (p == 3) {
                bool all = for_all_messages(s.streams, 3, [&](const auto& m) { return simulate_x(s, ch, m) == m; });
                EXPECT_TRUE(all);
            }
        }
    }
}

TEST(XExtension, DeterminantIdentities) {
    for (u32 p : {3u, 5u, 7u}) {
        FieldPtr fp = make_ctx(p, 2);
        const Field& f = *fp;
        for (u32 t = p; t < f.order(); ++t) {
            XScheme s = construct_x_p2(f.elem(t));
            P2DeterminantCheck c = p2_determinants(s);
            EXPECT_EQ(c.det_S1, c.formula_S1) << "p=" << p << " h=" << t;
            EXPECT_EQ(c.det_S2, c.formula_S2) << "p=" << p << " h=" << t;
            EXPECT_NE(c.det_S1, 0u);
            EXPECT_NE(c.det_S2, 0u);
            EXPECT_NE(c.h1, 0u);
        }
    }
}

// Multiplication by h on the digit stacks and the sigma-coordinate block matrix are the same map.
TEST(XExtension, SigmaMatrixSimilarToExtendedChannel) {
    for (u32 p : {3u, 5u}) {
        FieldPtr fp = make_ctx(p, 2);
        const Field& f = *fp;
        SigmaBasis sb = sigma_basis(f);
        EXPECT_EQ((sb.sigma * sb.sigma).label(), sb.c);
        for (u32 t = p; t < f.order(); ++t) {
            Gfe h = f.elem(t);
            MatFp ext = extend(h, 3);
            MatFp hb = sigma_channel_matrix(h, 3);
            MatFp P(p, 6, 0);
            for (std::size_t k = 0; k < 6; ++k) {
                std::vector<u32> e(6, 0);
                e[k] = 1;
                std::vector<Gfe> v{unvec(f, &e[0]), unvec(f, &e[2]), unvec(f, &e[4])};
                P.append_column(sigma_stack(sb, v));
            }
            ASSERT_NE(det(P), 0u);
            ASSERT_EQ(P * ext, hb * P);
        }
    }
}

TEST(XGeneral, GreedySucceedsOnLargerFields) {
    for (auto [p, n, limit] : std::vector<std::tuple<u32, int, u32>>{{3, 4, 81}, {2, 5, 32}, {2, 4, 16}, {5, 3, 125}, {3, 5, 80}}) {
        FieldPtr fp = make_ctx(p, n);
        const Field& f = *fp;
        int built = 0;
        for (u32 t = p; t < limit; ++t) {
            XChannel ch = normalized_x(f, t);
            XScheme s = construct_x(ch, XModeRequest::general_pn);
            XVerifyReport v = verify_x(s, ch);
            ASSERT_TRUE(v.pass) << v.failure << " p=" << p << " n=" << n << " h=" << t;
            EXPECT_EQ(v.rank_S1, std::size_t(3 * n));
            EXPECT_EQ(s.sum_rate, Rational(4, 3));
            ++built;
        }
        EXPECT_GT(built, 0);
    }
}

TEST(XDegenerate, SpanCoincidenceForBaseFieldGains) {
    FieldPtr fp = make_ctx(3, 2);
    const Field& f = *fp;
    std::mt19937_64 rng(22);
    for (u32 h = 1; h < 3; ++h)
        for (int m = 1; m <= 3; ++m)
            for (int trial = 0; trial < 20; ++trial) {
                auto rnd = [&](std::size_t cols) {
                    GfMatrix g(f, std::size_t(m), cols);
                    for (int r = 0; r < m; ++r)
                        for (std::size_t c = 0; c < cols; ++c) g.set_label(std::size_t(r), c, u32(rng() % 9));
                    return g;
                };
                EXPECT_TRUE(degenerate_span_coincidence(f.elem(h), m, rnd(1), rnd(2), rnd(1), rnd(2)));
            }
}

TEST(XVerify, RejectsPerturbedSchemes) {
    FieldPtr fp = make_ctx(3, 3);
    const Field& f = *fp;
    XChannel ch = normalized_x(f, 22);
    XScheme good = construct_x(ch);
    ASSERT_TRUE(verify_x(good, ch).pass);

    XScheme a = good;
    a.precoders[1] = a.precoders[0];
    EXPECT_FALSE(verify_x(a, ch).pass);

    XScheme b = good;
    b.precoders[3] = b.precoders[2].scaled(f.elem(2));
    EXPECT_FALSE(verify_x(b, ch).pass);

    XScheme c = good;
    c.h = f.elem(23);
    EXPECT_FALSE(verify_x(c, ch).pass);

    XChannel other = normalized_x(f, 23);
    EXPECT_FALSE(verify_x(good, other).pass);

    // v11 inside A or B: one destination loses rank.
    auto excl = x_p3_excluded_set(f.elem(22));
    XScheme d = good;
    d.precoders[0] = GfMatrix::from_columns(f, 1, {{f.elem(excl[1])}});
    d.precoders[1] = d.precoders[0].scaled(f.elem(22));
    EXPECT_FALSE(verify_x(d, ch).pass);
}

TEST(XConstruct, ModeRequests) {
    FieldPtr f3 = make_ctx(3, 3);
    FieldPtr f2 = make_ctx(5, 2);
    EXPECT_EQ(construct_x(normalized_x(*f3, 22)).mode, XMode::scalar_p3);
    EXPECT_EQ(construct_x(normalized_x(*f3, 22), XModeRequest::altproof_p3).mode, XMode::altproof_p3);
    EXPECT_EQ(construct_x(normalized_x(*f2, 7)).mode, XMode::ext_p2);
    EXPECT_THROW(construct_x(normalized_x(*f2, 7), XModeRequest::scalar_p3), Error);
    try {
        construct_x(normalized_x(*f3, 2), XModeRequest::scalar_p3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::Infeasible);
    }
}
