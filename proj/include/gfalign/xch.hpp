#ifndef GFALIGN_XCH_HPP
#define GFALIGN_XCH_HPP

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gfalign/error.hpp"
#include "gfalign/fplinalg.hpp"
#include "gfalign/gf.hpp"
#include "gfalign/rational.hpp"
#include "gfalign/signal.hpp"

namespace gfalign {

// 2x2 X channel; h[j][i] is the gain from source i to destination j (0-based).
struct XChannel {
    const Field* field = nullptr;
    std::array<std::array<Gfe, 2>, 2> h;

    bool fully_connected() const {
        for (const auto& row : h)
            for (const auto& g : row)
                if (g.is_zero()) return false;
        return true;
    }
};

inline XChannel make_xchannel(const Field& f, const std::array<std::array<u32, 2>, 2>& labels) {
    XChannel ch;
    ch.field = &f;
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i) ch.h[std::size_t(j)][std::size_t(i)] = f.elem(labels[std::size_t(j)][std::size_t(i)]);
    return ch;
}

struct XZeroReport {
    int C = 0;
    int C_linear = 0;
    int case_id = 0;
};

inline XZeroReport classify_zero(const XChannel& ch) {
    bool z11 = ch.h[0][0].is_zero(), z12 = ch.h[0][1].is_zero();
    bool z21 = ch.h[1][0].is_zero(), z22 = ch.h[1][1].is_zero();
    if (!(z11 || z12 || z21 || z22)) throw Error(Errc::FullyConnected, "no channel coefficient is zero");
    if (z12 && z21 && !z11 && !z22) return {2, 2, 1};
    if (z11 && z22 && !z12 && !z21) return {2, 2, 2};
    if (z11 && z12 && z21 && z22) return {0, 0, 3};
    return {1, 1, 4};
}

struct XNormalization {
    Gfe h;
    std::array<Gfe, 2> source_scale;
    std::array<Gfe, 2> dest_scale;
};

// Normalized gain g_ji = dest_scale[j] * h_ji * source_scale[i] gives (1, 1; h, 1).
inline XNormalization normalize(const XChannel& ch) {
    if (!ch.fully_connected()) throw Error(Errc::ZeroCoefficient, "normalization needs all four gains nonzero");
    const Field& f = *ch.field;
    const Gfe &h11 = ch.h[0][0], &h12 = ch.h[0][1], &h21 = ch.h[1][0], &h22 = ch.h[1][1];
    XNormalization n;
    n.h = h12 * h21 / (h11 * h22);
    n.source_scale = {f.one(), h11 / h12};
    n.dest_scale = {h11.inv(), h12 / (h11 * h22)};
    return n;
}

inline bool feasible(const Gfe& h) {
    if (h.is_zero()) throw Error(Errc::ZeroH, "normalized coefficient is zero");
    return !h.in_base_field();
}

enum class XMode { scalar_p3, altproof_p3, ext_p2, general_pn, degenerate_rate1, zero_pattern };

inline std::string_view xmode_name(XMode m) {
    switch (m) {
    case XMode::scalar_p3: return "scalar_p3";
    case XMode::altproof_p3: return "altproof_p3";
    case XMode::ext_p2: return "ext_p2";
    case XMode::general_pn: return "general_pn";
    case XMode::degenerate_rate1: return "degenerate_rate1";
    case XMode::zero_pattern: return "zero_pattern";
    }
    return "unknown";
}

inline XMode parse_xmode(std::string_view s) {
    for (XMode m : {XMode::scalar_p3, XMode::altproof_p3, XMode::ext_p2, XMode::general_pn, XMode::degenerate_rate1,
                    XMode::zero_pattern})
        if (xmode_name(m) == s) return m;
    throw Error(Errc::ParseError, "unknown X mode '" + std::string(s) + "'");
}

// Messages in order W11, W12, W21, W22 as (source, destination).
inline constexpr std::array<std::array<int, 2>, 4> kXMessages = {{{0, 0}, {1, 0}, {0, 1}, {1, 1}}};
inline constexpr std::array<std::string_view, 4> kXMessageNames = {"W11", "W12", "W21", "W22"};

struct XCertificates {
    std::size_t rank_S1 = 0;
    std::size_t rank_S2 = 0;
    std::array<std::size_t, 2> aligned_dims{};
};

struct XScheme {
    XMode mode = XMode::degenerate_rate1;
    const Field* field = nullptr;
    int m = 1;
    std::array<int, 4> streams{};
    std::array<GfMatrix, 4> precoders;
    std::optional<Gfe> h;
    int zero_case = 0;
    Rational sum_rate;
    XCertificates cert;
};

namespace detail {

inline LinkSystem x_system(const XScheme& s, const std::array<std::array<Gfe, 2>, 2>& gains,
                           const std::array<Gfe, 2>& source_scale) {
    LinkSystem sys;
    sys.field = s.field;
    sys.m = s.m;
    sys.gain = {{gains[0][0], gains[0][1]}, {gains[1][0], gains[1][1]}};
    for (std::size_t k = 0; k < 4; ++k) {
        LinkBlock b;
        b.source = kXMessages[k][0];
        b.dest = kXMessages[k][1];
        b.precoder = s.precoders[k].scaled(source_scale[std::size_t(b.source)]);
        sys.blocks.push_back(std::move(b));
    }
    return sys;
}

inline Rational x_rate(const XScheme& s) {
    long long total = 0;
    for (int d : s.streams) total += d;
    return make_rational(total, (long long)s.m * s.field->n());
}

// Certificates on the normalized channel (1, 1; h, 1), or the raw channel for zero patterns.
inline void certify(XScheme& s, const std::array<std::array<Gfe, 2>, 2>& gains) {
    const Field& f = *s.field;
    LinkSystem sys = x_system(s, gains, {f.one(), f.one()});
    auto r0 = analyze_dest(sys, 0), r1 = analyze_dest(sys, 1);
    s.cert.rank_S1 = r0.total_rank;
    s.cert.rank_S2 = r1.total_rank;
    s.cert.aligned_dims = {r0.interference_rank, r1.interference_rank};
    s.sum_rate = x_rate(s);
}

inline std::array<std::array<Gfe, 2>, 2> normalized_gains(const Gfe& h) {
    const Field& f = h.field();
    return {{{f.one(), f.one()}, {h, f.one()}}};
}

inline void aligned_scheme(XScheme& s, const Gfe& h, const GfMatrix& v11, const GfMatrix& v21) {
    s.h = h;
    s.precoders[0] = v11;
    s.precoders[1] = v11.scaled(h);
    s.precoders[2] = v21;
    s.precoders[3] = v21;
    int d = int(v11.cols());
    s.streams = {d, d, d, d};
    certify(s, normalized_gains(h));
}

inline void require_feasible(const Gfe& h) {
    if (!feasible(h)) throw Error(Errc::Infeasible, "h lies in the base field");
}

inline std::size_t elem_rank(const std::vector<Gfe>& v) { return rank(cols_from_elements(v)); }

// Candidate m-vector with the first entry most significant.
inline std::vector<Gfe> vector_from_index(const Field& f, u64 t, int m) {
    std::vector<Gfe> v(std::size_t(m), f.zero());
    for (int r = m - 1; r >= 0; --r) {
        v[std::size_t(r)] = f.elem(u32(t % f.order()));
        t /= f.order();
    }
    return v;
}

inline std::vector<Gfe> scale_vec(const std::vector<Gfe>& v, const Gfe& g) {
    std::vector<Gfe> out;
    for (const auto& x : v) out.push_back(x * g);
    return out;
}

} // namespace detail

inline XScheme degenerate_x(const Field& f, std::optional<Gfe> h = std::nullopt) {
    XScheme s;
    s.mode = XMode::degenerate_rate1;
    s.field = &f;
    s.m = 1;
    s.h = h;
    s.precoders[0] = full_rate_precoder(f, 1, 0);
    for (std::size_t k = 1; k < 4; ++k) s.precoders[k] = GfMatrix(f, 1, 0);
    s.streams = {f.n(), 0, 0, 0};
    detail::certify(s, detail::normalized_gains(h ? *h : f.one()));
    return s;
}

// Full-rate routing for channels with zero coefficients.
inline XScheme construct_x_zero(const XChannel& ch) {
    const Field& f = *ch.field;
    XZeroReport z = classify_zero(ch);
    XScheme s;
    s.mode = XMode::zero_pattern;
    s.field = &f;
    s.m = 1;
    s.zero_case = z.case_id;
    for (std::size_t k = 0; k < 4; ++k) s.precoders[k] = GfMatrix(f, 1, 0);
    std::vector<std::size_t> active;
    if (z.case_id == 1) active = {0, 3};
    if (z.case_id == 2) active = {1, 2};
    if (z.case_id == 4) {
        for (std::size_t k = 0; k < 4; ++k) {
            auto [src, dst] = kXMessages[k];
            if (!ch.h[std::size_t(dst)][std::size_t(src)].is_zero()) {
                active = {k};
                break;
            }
        }
    }
    for (std::size_t k : active) {
        s.precoders[k] = full_rate_precoder(f, 1, 0);
        s.streams[k] = f.n();
    }
    detail::certify(s, ch.h);
    return s;
}

// Scalar scheme over GF(p^3): default set-exclusion choice of v11, or the alternate v11 = h.
inline XScheme construct_x_p3(const Gfe& h, bool alt = false) {
    const Field& f = h.field();
    if (f.n() != 3) throw Error(Errc::InvalidArgument, "construct_x_p3 needs n = 3");
    detail::require_feasible(h);
    XScheme s;
    s.field = &f;
    s.m = 1;
    s.mode = alt ? XMode::altproof_p3 : XMode::scalar_p3;
    Gfe one = f.one();
    Gfe v11 = h;
    if (!alt) {
        bool found = false;
        for (u32 t = 1; t < f.order(); ++t) {
            Gfe e = f.elem(t);
            if (detail::elem_rank({e, h * e, one}) == 3 && detail::elem_rank({h, one, h * e}) == 3) {
                v11 = e;
                found = true;
                break;
            }
        }
        if (!found) throw Error(Errc::SearchExhausted, "no v11 outside A and B");
    }
    detail::aligned_scheme(s, h, GfMatrix::from_columns(f, 1, {{v11}}), GfMatrix::from_columns(f, 1, {{one}}));
    return s;
}

// Elements of A = {1/(a + b h)} and B = {a + b/h} together with 0.
inline std::vector<u32> x_p3_excluded_set(const Gfe& h) {
    const Field& f = h.field();
    std::vector<bool> in(f.order(), false);
    in[0] = true;
    for (u32 a = 0; a < f.p(); ++a)
        for (u32 b = 0; b < f.p(); ++b) {
            Gfe den = f.elem(a) + h.scaled(b);
            if (!den.is_zero()) in[den.inv().label()] = true;
            in[(f.elem(a) + h.inv().scaled(b)).label()] = true;
        }
    std::vector<u32> out;
    for (u32 t = 0; t < f.order(); ++t)
        if (in[t]) out.push_back(t);
    return out;
}

// Fixed 6x2 precoders; rows 0-2 are the constant parts over three uses, rows 3-5 the sigma parts.
inline constexpr std::array<std::array<u32, 2>, 6> kV11 = {{{1, 1}, {1, 0}, {0, 0}, {1, 1}, {0, 1}, {0, 1}}};
inline constexpr std::array<std::array<u32, 2>, 6> kV21 = {{{1, 0}, {1, 0}, {1, 1}, {0, 0}, {1, 1}, {1, 1}}};

// Basis {1, sigma} of GF(p^2) with sigma^2 = c, c the smallest quadratic non-residue.
struct SigmaBasis {
    u32 c = 0;
    Gfe sigma;
};

inline SigmaBasis sigma_basis(const Field& f) {
    if (f.n() != 2) throw Error(Errc::InvalidArgument, "sigma basis needs n = 2");
    SigmaBasis b;
    b.c = quadratic_nonresidue(f.p());
    for (u32 t = f.p(); t < f.order(); ++t) {
        Gfe x = f.elem(t);
        if ((x * x).label() == b.c) {
            b.sigma = x;
            return b;
        }
    }
    throw Error(Errc::NoNonResidue, "no square root of c");
}

// Coordinates (a, b) with z = a + b * sigma.
inline std::array<u32, 2> sigma_coords(const SigmaBasis& sb, const Gfe& z) {
    const Field& f = z.field();
    for (u32 b = 0; b < f.p(); ++b) {
        Gfe a = z - sb.sigma.scaled(b);
        if (a.in_base_field()) return {a.label(), b};
    }
    throw Error(Errc::InvalidArgument, "element outside span{1, sigma}");
}

// Component-major coordinates [a_1..a_m, b_1..b_m] of an m-vector.
inline std::vector<u32> sigma_stack(const SigmaBasis& sb, const std::vector<Gfe>& v) {
    std::vector<u32> out(2 * v.size());
    for (std::size_t t = 0; t < v.size(); ++t) {
        auto ab = sigma_coords(sb, v[t]);
        out[t] = ab[0];
        out[v.size() + t] = ab[1];
    }
    return out;
}

inline XScheme construct_x_p2(const Gfe& h) {
    const Field& f = h.field();
    if (f.n() != 2) throw Error(Errc::InvalidArgument, "construct_x_p2 needs n = 2");
    detail::require_feasible(h);
    XScheme s;
    s.field = &f;
    s.m = 3;
    s.mode = XMode::ext_p2;
    if (f.p() > 2) {
        SigmaBasis sb = sigma_basis(f);
        auto to_gf = [&](const std::array<std::array<u32, 2>, 6>& v) {
            GfMatrix m(f, 3, 2);
            for (std::size_t t = 0; t < 3; ++t)
                for (std::size_t k = 0; k < 2; ++k) m.set(t, k, f.elem(v[t][k]) + sb.sigma.scaled(v[3 + t][k]));
            return m;
        };
        detail::aligned_scheme(s, h, to_gf(kV11), to_gf(kV21));
        return s;
    }
    // F_2 has no non-residue: search column pairs in mixed-radix order.
    u64 space = u64(f.order()) * f.order() * f.order();
    std::size_t dim = 6;
    for (u64 a1 = 1; a1 < space; ++a1)
        for (u64 a2 = 1; a2 < space; ++a2) {
            auto w1 = detail::vector_from_index(f, a1, 3), w2 = detail::vector_from_index(f, a2, 3);
            SpanBasis s2(f.p(), dim);
            if (!s2.add(stack(detail::scale_vec(w1, h))) || !s2.add(stack(w1)) || !s2.add(stack(detail::scale_vec(w2, h))) ||
                !s2.add(stack(w2)))
                continue;
            for (u64 b1 = 1; b1 < space; ++b1)
                for (u64 b2 = 1; b2 < space; ++b2) {
                    auto u1 = detail::vector_from_index(f, b1, 3), u2 = detail::vector_from_index(f, b2, 3);
                    std::vector<std::vector<Gfe>> s1cols = {u1, u2, detail::scale_vec(u1, h), detail::scale_vec(u2, h), w1, w2};
                    SpanBasis s1(f.p(), dim);
                    bool ok = true;
                    for (const auto& c : s1cols) ok = ok && s1.add(stack(c));
                    if (!ok) continue;
                    SpanBasis t2 = s2;
                    if (!t2.add(stack(detail::scale_vec(u1, h))) || !t2.add(stack(detail::scale_vec(u2, h)))) continue;
                    detail::aligned_scheme(s, h, GfMatrix::from_columns(f, 3, {u1, u2}), GfMatrix::from_columns(f, 3, {w1, w2}));
                    return s;
                }
        }
    throw Error(Errc::SearchExhausted, "no F_4 precoders found");
}

struct P2DeterminantCheck {
    u32 c = 0;
    u32 h0 = 0, h1 = 0;
    u32 det_S1 = 0, det_S2 = 0;
    u32 formula_S1 = 0, formula_S2 = 0;
};

// Determinants of [V11, H V11, V21] and [V21, H V21, H V11] in sigma coordinates against c h1^2 and h1^2 (c h1^2 - h0^2).
inline P2DeterminantCheck p2_determinants(const XScheme& s) {
    const Field& f = *s.field;
    if (s.mode != XMode::ext_p2 || f.p() == 2) throw Error(Errc::InvalidArgument, "needs an ext_p2 scheme with p > 2");
    SigmaBasis sb = sigma_basis(f);
    P2DeterminantCheck out;
    out.c = sb.c;
    auto hc = sigma_coords(sb, *s.h);
    out.h0 = hc[0];
    out.h1 = hc[1];
    const u32 p = f.p();
    auto build = [&](std::vector<const GfMatrix*> blocks) {
        MatFp m(p, 6, 0);
        for (auto* b : blocks)
            for (std::size_t k = 0; k < b->cols(); ++k) m.append_column(sigma_stack(sb, b->column(k)));
        return m;
    };
    GfMatrix hv21 = s.precoders[2].scaled(*s.h);
    out.det_S1 = det(build({&s.precoders[0], &s.precoders[1], &s.precoders[2]}));
    out.det_S2 = det(build({&s.precoders[2], &hv21, &s.precoders[1]}));
    u32 h1sq = modp::mul(out.h1, out.h1, p);
    out.formula_S1 = modp::mul(out.c, h1sq, p);
    out.formula_S2 = modp::mul(h1sq, modp::sub(modp::mul(out.c, h1sq, p), modp::mul(out.h0, out.h0, p), p), p);
    return out;
}

// The 2m x 2m matrix [[h0 I, c h1 I], [h1 I, h0 I]] acting on component-major sigma coordinates.
inline MatFp sigma_channel_matrix(const Gfe& h, int m = 3) {
    const Field& f = h.field();
    SigmaBasis sb = sigma_basis(f);
    auto hc = sigma_coords(sb, h);
    std::size_t M = std::size_t(m);
    MatFp out(f.p(), 2 * M, 2 * M);
    for (std::size_t t = 0; t < M; ++t) {
        out(t, t) = hc[0];
        out(t, M + t) = modp::mul(sb.c, hc[1], f.p());
        out(M + t, t) = hc[1];
        out(M + t, M + t) = hc[0];
    }
    return out;
}

struct XGeneralOptions {
    u64 budget = 20'000'000;
};

// Recursive three-extension construction for general n.
inline XScheme construct_x_general(const Gfe& h, XGeneralOptions opt = {}) {
    const Field& f = h.field();
    const int n = f.n();
    if (n < 3) throw Error(Errc::InvalidArgument, "construct_x_general needs n >= 3");
    detail::require_feasible(h);
    Gfe one = f.one();
    std::optional<Gfe> g;
    for (u32 t = 1; t < f.order() && !g; ++t) {
        Gfe e = f.elem(t);
        if (detail::elem_rank({e, h * e, one}) == 3 && detail::elem_rank({h, h * e, one}) == 3) g = e;
    }
    if (!g) throw Error(Errc::SearchExhausted, "no g outside A and B");
    const Gfe hg = h * *g;
    const std::size_t dim = 3 * std::size_t(n);
    const u64 q = f.order();
    const long double space_ld = (long double)q * q * q;
    const u64 space = space_ld > 1.8e19L ? ~u64(0) : q * q * q;

    std::vector<std::vector<Gfe>> chosen{{one, one, one}};
    SpanBasis s1(f.p(), dim), s2(f.p(), dim);
    auto push = [&](SpanBasis& b1, SpanBasis& b2, const std::vector<Gfe>& v) {
        return b1.add(stack(detail::scale_vec(v, *g))) && b1.add(stack(detail::scale_vec(v, hg))) && b1.add(stack(v)) &&
               b2.add(stack(detail::scale_vec(v, h))) && b2.add(stack(detail::scale_vec(v, hg))) && b2.add(stack(v));
    };
    if (!push(s1, s2, chosen[0])) throw Error(Errc::SearchExhausted, "first column fails");

    u64 spent = 0;
    std::vector<SpanBasis> st1{s1}, st2{s2};
    std::vector<u64> next{1};
    // Depth-first over columns 2..n; without dead ends this is the plain greedy sweep.
    while (int(chosen.size()) < n) {
        std::size_t k = chosen.size();
        if (next.size() < k + 1) next.push_back(1);
        bool placed = false;
        for (u64 t = next[k]; t < space; ++t) {
            if (++spent > opt.budget) throw Error(Errc::SearchExhausted, "search budget exhausted");
            auto v = detail::vector_from_index(f, scan_label(t, space, f.p()), 3);
            SpanBasis b1 = st1.back(), b2 = st2.back();
            if (!push(b1, b2, v)) continue;
            next[k] = t + 1;
            chosen.push_back(v);
            st1.push_back(std::move(b1));
            st2.push_back(std::move(b2));
            placed = true;
            break;
        }
        if (placed) continue;
        if (k == 1) throw Error(Errc::SearchExhausted, "no precoder columns exist");
        next.resize(k);
        chosen.pop_back();
        st1.pop_back();
        st2.pop_back();
    }
    XScheme s;
    s.field = &f;
    s.m = 3;
    s.mode = XMode::general_pn;
    GfMatrix v21 = GfMatrix::from_columns(f, 3, chosen);
    detail::aligned_scheme(s, h, v21.scaled(*g), v21);
    return s;
}

enum class XModeRequest { automatic, scalar_p3, altproof_p3, ext_p2, general_pn };

inline XScheme construct_x(const XChannel& ch, XModeRequest req = XModeRequest::automatic) {
    const Field& f = *ch.field;
    if (!ch.fully_connected()) {
        if (req != XModeRequest::automatic) throw Error(Errc::Infeasible, "channel has zero coefficients");
        return construct_x_zero(ch);
    }
    XNormalization nz = normalize(ch);
    if (!feasible(nz.h)) {
        if (req != XModeRequest::automatic) throw Error(Errc::Infeasible, "h lies in the base field");
        return degenerate_x(f, nz.h);
    }
    switch (req) {
    case XModeRequest::scalar_p3: return construct_x_p3(nz.h, false);
    case XModeRequest::altproof_p3: return construct_x_p3(nz.h, true);
    case XModeRequest::ext_p2: return construct_x_p2(nz.h);
    case XModeRequest::general_pn: return construct_x_general(nz.h);
    case XModeRequest::automatic: break;
    }
    if (f.n() == 2) return construct_x_p2(nz.h);
    if (f.n() == 3) return construct_x_p3(nz.h, false);
    return construct_x_general(nz.h);
}

struct XVerifyReport {
    bool pass = false;
    std::string failure;
    std::size_t rank_S1 = 0;
    std::size_t rank_S2 = 0;
    std::array<std::size_t, 2> desired_dims{};
    std::array<std::size_t, 2> aligned_dims{};
    Rational sum_rate;
};

namespace detail {

inline LinkSystem x_raw_system(const XScheme& s, const XChannel& ch) {
    const Field& f = *ch.field;
    if (s.mode == XMode::zero_pattern) return x_system(s, ch.h, {f.one(), f.one()});
    XNormalization nz = normalize(ch);
    return x_system(s, ch.h, nz.source_scale);
}

} // namespace detail

// Rebuilds S1, S2 on the raw channel and checks alignment and full rank.
inline XVerifyReport verify_x(const XScheme& s, const XChannel& ch) {
    XVerifyReport r;
    auto fail = [&](const std::string& why) {
        r.pass = false;
        if (r.failure.empty()) r.failure = why;
        return r;
    };
    if (!s.field || !s.field->same_as(*ch.field)) return fail("scheme and channel use different fields");
    for (std::size_t k = 0; k < 4; ++k)
        if (s.precoders[k].rows() != std::size_t(s.m) || int(s.precoders[k].cols()) != s.streams[k])
            return fail("precoder shape of " + std::string(kXMessageNames[k]));
    if (s.mode == XMode::zero_pattern) {
        if (ch.fully_connected()) return fail("zero-pattern scheme on a fully connected channel");
        if (classify_zero(ch).case_id != s.zero_case) return fail("zero pattern case differs");
    } else {
        if (!ch.fully_connected()) return fail("channel has zero coefficients");
        XNormalization nz = normalize(ch);
        if (!s.h || *s.h != nz.h) return fail("scheme was built for a different normalized h");
    }
    bool aligned_mode = s.mode != XMode::degenerate_rate1 && s.mode != XMode::zero_pattern;
    if (aligned_mode) {
        if (!(s.precoders[3] == s.precoders[2])) return fail("alignment: v22 != v21");
        if (!(s.precoders[1] == s.precoders[0].scaled(*s.h))) return fail("alignment: v12 != h*v11");
    }
    LinkSystem sys = detail::x_raw_system(s, ch);
    auto d0 = analyze_dest(sys, 0), d1 = analyze_dest(sys, 1);
    r.rank_S1 = d0.total_rank;
    r.rank_S2 = d1.total_rank;
    r.desired_dims = {d0.desired_streams, d1.desired_streams};
    r.aligned_dims = {d0.interference_rank, d1.interference_rank};
    r.sum_rate = detail::x_rate(s);
    if (!d0.decodable) return fail("destination 1 cannot resolve its streams");
    if (!d1.decodable) return fail("destination 2 cannot resolve its streams");
    if (aligned_mode) {
        std::size_t full = std::size_t(s.m) * std::size_t(s.field->n());
        if (r.rank_S1 != full) return fail("rank(S1) != m*n");
        if (r.rank_S2 != full) return fail("rank(S2) != m*n");
        // Interference spans coincide at each destination.
        if (!same_span(received_columns(sys, 0, sys.blocks[2]), received_columns(sys, 0, sys.blocks[3])))
            return fail("interference not aligned at destination 1");
        if (!same_span(received_columns(sys, 1, sys.blocks[0]), received_columns(sys, 1, sys.blocks[1])))
            return fail("interference not aligned at destination 2");
        if (r.aligned_dims[0] != full - r.desired_dims[0] || r.aligned_dims[1] != full - r.desired_dims[1])
            return fail("aligned dimension count");
    }
    r.pass = true;
    return r;
}

inline std::array<std::vector<u32>, 4> simulate_x(const XScheme& s, const XChannel& ch,
                                                  const std::array<std::vector<u32>, 4>& msgs) {
    LinkSystem sys = detail::x_raw_system(s, ch);
    std::vector<std::vector<u32>> sym(msgs.begin(), msgs.end());
    auto y = transmit(sys, sym);
    auto dec = decode(sys, y);
    return {dec[0], dec[1], dec[2], dec[3]};
}

// For h in F_p every extended link matrix is a scaled identity, so any precoders give S1 and S2 the same span.
inline bool degenerate_span_coincidence(const Gfe& h, int m, const GfMatrix& v11, const GfMatrix& v12, const GfMatrix& v21,
                                        const GfMatrix& v22) {
    const Field& f = h.field();
    MatFp hm = extend(h, m);
    MatFp scaled_id = MatFp::identity(f.p(), std::size_t(m * f.n())).scaled(h.label());
    if (!(hm == scaled_id)) return false;
    MatFp s1 = cols_from_vectors(v11).hcat(cols_from_vectors(v12)).hcat(cols_from_vectors(v21)).hcat(cols_from_vectors(v22));
    MatFp s2 = signal_columns(v11, h).hcat(cols_from_vectors(v12)).hcat(signal_columns(v21, h)).hcat(cols_from_vectors(v22));
    return same_span(s1, s2);
}

} // namespace gfalign

#endif // GFALIGN_XCH_HPP
