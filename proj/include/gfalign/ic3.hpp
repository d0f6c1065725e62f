#ifndef GFALIGN_IC3_HPP
#define GFALIGN_IC3_HPP

#include <algorithm>
#include <array>
#include <numeric>
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

// 3-user interference channel; h[j][i] is the gain from source i to destination j (0-based).
struct IC3Channel {
    const Field* field = nullptr;
    std::array<std::array<Gfe, 3>, 3> h;

    bool fully_connected() const {
        for (const auto& row : h)
            for (const auto& g : row)
                if (g.is_zero()) return false;
        return true;
    }

    // Row-major h11..h33, '1' for a nonzero gain.
    std::string incidence() const {
        std::string s;
        for (const auto& row : h)
            for (const auto& g : row) s += g.is_zero() ? '0' : '1';
        return s;
    }
};

inline IC3Channel make_ic3channel(const Field& f, const std::array<std::array<u32, 3>, 3>& labels) {
    IC3Channel ch;
    ch.field = &f;
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t i = 0; i < 3; ++i) ch.h[j][i] = f.elem(labels[j][i]);
    return ch;
}

struct ICNormalization {
    Gfe hbar11, hbar22, hbar33, hbar;
    std::array<Gfe, 3> source_scale;
    std::array<Gfe, 3> dest_scale;

    const Field& field() const { return hbar.field(); }
    Gfe hkk(int k) const { return k == 0 ? hbar11 : k == 1 ? hbar22 : hbar33; }

    // Normalized gains: cross gains 1 except destination 3 / source 2, which carries hbar.
    std::array<std::array<Gfe, 3>, 3> gains() const {
        Gfe one = field().one();
        return {{{hbar11, one, one}, {one, hbar22, one}, {one, hbar, hbar33}}};
    }
};

inline ICNormalization normalize_ic(const IC3Channel& ch) {
    if (!ch.fully_connected()) throw Error(Errc::ZeroCoefficient, "normalization needs all nine gains nonzero");
    const auto& h = ch.h;
    const Gfe &h11 = h[0][0], &h12 = h[0][1], &h13 = h[0][2];
    const Gfe &h21 = h[1][0], &h22 = h[1][1], &h23 = h[1][2];
    const Gfe &h31 = h[2][0], &h32 = h[2][1], &h33 = h[2][2];
    ICNormalization n;
    n.hbar11 = h11 * h23 / (h13 * h21);
    n.hbar22 = h22 * h13 / (h23 * h12);
    n.hbar33 = h33 * h21 / (h31 * h23);
    n.hbar = h13 * h21 * h32 / (h12 * h23 * h31);
    n.dest_scale = {h12.inv(), h13 / (h12 * h23), h13 * h21 / (h12 * h23 * h31)};
    n.source_scale = {h12 * h23 / (h13 * h21), ch.field->one(), h12 / h13};
    return n;
}

// A normalized tuple with unit scalings.
inline ICNormalization normalization_from_hbar(const Gfe& h11, const Gfe& h22, const Gfe& h33, const Gfe& h) {
    const Field& f = h.field();
    ICNormalization n;
    n.hbar11 = h11;
    n.hbar22 = h22;
    n.hbar33 = h33;
    n.hbar = h;
    n.dest_scale = {f.one(), f.one(), f.one()};
    n.source_scale = n.dest_scale;
    return n;
}

inline IC3Channel normalized_channel(const ICNormalization& n) {
    IC3Channel ch;
    ch.field = &n.field();
    ch.h = n.gains();
    return ch;
}

// One rank test over F_p on a list of field elements.
struct ICCondition {
    std::string family;
    std::string name;
    std::vector<u32> elements;
    bool want_independent = true;
    bool pass = false;
    std::vector<u32> witness;
};

namespace detail {

inline ICCondition rank_condition(std::string family, std::string name, const std::vector<Gfe>& elems,
                                  bool want_independent = true) {
    ICCondition c;
    c.family = std::move(family);
    c.name = std::move(name);
    c.want_independent = want_independent;
    for (const auto& e : elems) c.elements.push_back(e.label());
    MatFp m = cols_from_elements(elems);
    auto ker = kernel(m);
    bool independent = ker.empty();
    c.pass = independent == want_independent;
    if (!ker.empty() && want_independent) c.witness = ker.front();
    return c;
}

// [h^k, ..., h, 1]
inline std::vector<Gfe> powers_desc(const Gfe& h, int k) {
    std::vector<Gfe> out;
    for (int i = k; i >= 0; --i) out.push_back(h.pow(u64(i)));
    return out;
}

inline std::vector<Gfe> scaled_list(const Gfe& c, std::vector<Gfe> v) {
    for (auto& x : v) x = c * x;
    return v;
}

inline std::vector<Gfe> concat(std::vector<Gfe> a, const std::vector<Gfe>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

} // namespace detail

// Elements whose F_p-independence decides the odd-n conditions, n = 2l+1.
inline std::vector<Gfe> odd_s1_elements(const Gfe& h11, const Gfe& h, int l) {
    return detail::concat(detail::scaled_list(h11, detail::powers_desc(h, l)), detail::powers_desc(h, l - 1));
}

inline std::vector<Gfe> odd_s23_elements(const Gfe& hkk, const Gfe& h, int l) {
    return detail::concat(detail::scaled_list(hkk, detail::powers_desc(h, l - 1)), detail::powers_desc(h, l));
}

inline std::vector<ICCondition> eigen_conditions(const ICNormalization& n) {
    const Gfe one = n.field().one();
    return {detail::rank_condition("eigen", "hbar_in_Fp", {n.hbar, one}, false),
            detail::rank_condition("eigen", "hbar11_notin_Fp", {n.hbar11, one}),
            detail::rank_condition("eigen", "hbar22_notin_Fp", {n.hbar22, one}),
            detail::rank_condition("eigen", "hbar33_notin_Fp", {n.hbar33, one})};
}

inline std::vector<ICCondition> odd_conditions(const ICNormalization& n) {
    const Field& f = n.field();
    if (f.n() % 2 == 0 || f.n() < 3) throw Error(Errc::InvalidArgument, "odd-power conditions need odd n >= 3");
    int l = (f.n() - 1) / 2;
    return {detail::rank_condition("odd_powers", "hbar_powers_independent", detail::powers_desc(n.hbar, l)),
            detail::rank_condition("odd_powers", "S1_full_rank", odd_s1_elements(n.hbar11, n.hbar, l)),
            detail::rank_condition("odd_powers", "S2_full_rank", odd_s23_elements(n.hbar22, n.hbar, l)),
            detail::rank_condition("odd_powers", "S3_full_rank", odd_s23_elements(n.hbar33, n.hbar, l))};
}

inline std::vector<ICCondition> p2_conditions(const ICNormalization& n) {
    const Field& f = n.field();
    if (f.n() != 2) throw Error(Errc::InvalidArgument, "n = 2 conditions need n = 2");
    const Gfe one = f.one();
    auto cond = [&](std::string name, const Gfe& x) { return detail::rank_condition("p2", std::move(name), {x, one}); };
    auto ratio = [](const Gfe& a, const Gfe& b) { return b.is_zero() ? a.field().zero() : a / b; };
    return {cond("hbar11_notin_Fp", n.hbar11),
            cond("hbar*hbar11_notin_Fp", n.hbar * n.hbar11),
            cond("hbar22_notin_Fp", n.hbar22),
            cond("hbar/hbar22_notin_Fp", ratio(n.hbar, n.hbar22)),
            cond("hbar33_notin_Fp", n.hbar33),
            cond("hbar/hbar33_notin_Fp", ratio(n.hbar, n.hbar33))};
}

enum class ICClass { ZeroPattern, EigenCase, OddPowersCase, P2Case, Unclassified };

inline std::string_view icclass_name(ICClass c) {
    switch (c) {
    case ICClass::ZeroPattern: return "ZeroPattern";
    case ICClass::EigenCase: return "EigenCase";
    case ICClass::OddPowersCase: return "OddPowersCase";
    case ICClass::P2Case: return "P2Case";
    case ICClass::Unclassified: return "Unclassified";
    }
    return "unknown";
}

// Zero-pattern analysis.
struct ICZeroReport {
    int case_id = 0;
    int direct_zeros = 0;
    int cross_zeros = 0;
    std::optional<Rational> C;
    Rational C_linear;
    char structure = 0;
    std::string canonical;
    std::array<int, 3> perm{0, 1, 2};
    std::vector<ICCondition> conditions;
    bool open_case = false;
    std::vector<int> users;
};

struct ICClassification {
    ICClass cls = ICClass::Unclassified;
    std::vector<ICCondition> conditions;
    std::vector<std::string> failed;
    std::optional<ICZeroReport> zero;
};

inline bool all_pass(const std::vector<ICCondition>& cs) {
    return std::all_of(cs.begin(), cs.end(), [](const ICCondition& c) { return c.pass; });
}

inline ICClassification classify_normalized(const ICNormalization& n) {
    const Field& f = n.field();
    ICClassification r;
    auto take = [&](std::vector<ICCondition> cs) {
        bool ok = all_pass(cs);
        for (auto& c : cs) r.conditions.push_back(std::move(c));
        return ok;
    };
    bool eigen = f.n() >= 2 && take(eigen_conditions(n));
    bool odd = f.n() % 2 == 1 && f.n() >= 3 && take(odd_conditions(n));
    bool p2 = f.n() == 2 && take(p2_conditions(n));
    if (eigen)
        r.cls = ICClass::EigenCase;
    else if (odd)
        r.cls = ICClass::OddPowersCase;
    else if (p2)
        r.cls = ICClass::P2Case;
    else
        r.cls = ICClass::Unclassified;
    if (r.cls == ICClass::Unclassified)
        for (const auto& c : r.conditions)
            if (!c.pass) r.failed.push_back(c.family + ":" + c.name);
    return r;
}

// Condition sets met by a normalized tuple, as bits of kEigenSet, kOddSet, kP2Set.
inline constexpr unsigned kEigenSet = 1, kOddSet = 2, kP2Set = 4;

inline unsigned ic_condition_sets(const Gfe& h11, const Gfe& h22, const Gfe& h33, const Gfe& h) {
    const Field& f = h.field();
    auto out = [](const Gfe& x) { return !x.in_base_field(); };
    unsigned bits = 0;
    if (f.n() >= 2 && h.in_base_field() && out(h11) && out(h22) && out(h33)) bits |= kEigenSet;
    if (f.n() % 2 == 1 && f.n() >= 3) {
        int l = (f.n() - 1) / 2;
        auto indep = [](const std::vector<Gfe>& v) { return rank(cols_from_elements(v)) == v.size(); };
        if (indep(detail::powers_desc(h, l)) && indep(odd_s1_elements(h11, h, l)) && indep(odd_s23_elements(h22, h, l)) &&
            indep(odd_s23_elements(h33, h, l)))
            bits |= kOddSet;
    }
    if (f.n() == 2) {
        auto ratio = [&](const Gfe& a, const Gfe& b) { return b.is_zero() ? f.zero() : a / b; };
        if (out(h11) && out(h * h11) && out(h22) && out(ratio(h, h22)) && out(h33) && out(ratio(h, h33))) bits |= kP2Set;
    }
    return bits;
}

inline ICClass class_from_sets(unsigned bits) {
    if (bits & kEigenSet) return ICClass::EigenCase;
    if (bits & kOddSet) return ICClass::OddPowersCase;
    if (bits & kP2Set) return ICClass::P2Case;
    return ICClass::Unclassified;
}

inline ICClass classify_hbar(const Gfe& h11, const Gfe& h22, const Gfe& h33, const Gfe& h) {
    return class_from_sets(ic_condition_sets(h11, h22, h33, h));
}

enum class ICMode { eigen_even, eigen_odd, odd_powers, ext5_p2, zero_structure, zero_routing, degenerate_rate1 };

inline std::string_view icmode_name(ICMode m) {
    switch (m) {
    case ICMode::eigen_even: return "eigen_even";
    case ICMode::eigen_odd: return "eigen_odd";
    case ICMode::odd_powers: return "odd_powers";
    case ICMode::ext5_p2: return "ext5_p2";
    case ICMode::zero_structure: return "zero_structure";
    case ICMode::zero_routing: return "zero_routing";
    case ICMode::degenerate_rate1: return "degenerate_rate1";
    }
    return "unknown";
}

inline ICMode parse_icmode(std::string_view s) {
    for (ICMode m : {ICMode::eigen_even, ICMode::eigen_odd, ICMode::odd_powers, ICMode::ext5_p2, ICMode::zero_structure,
                     ICMode::zero_routing, ICMode::degenerate_rate1})
        if (icmode_name(m) == s) return m;
    throw Error(Errc::ParseError, "unknown IC mode '" + std::string(s) + "'");
}

struct ICCertificates {
    std::array<std::size_t, 3> rank_S{};
    std::array<std::size_t, 3> desired_dims{};
    std::array<std::size_t, 3> aligned_dims{};
};

struct ICScheme {
    ICMode mode = ICMode::degenerate_rate1;
    const Field* field = nullptr;
    int m = 1;
    std::array<int, 3> streams{};
    // Normalized-coordinate precoders for fully connected modes, raw precoders otherwise.
    std::array<GfMatrix, 3> precoders;
    std::optional<std::array<Gfe, 4>> hbar;  // hbar11, hbar22, hbar33, hbar
    std::string pattern;                     // incidence of the channel for zero modes
    int zero_case = 0;
    char structure = 0;
    Rational sum_rate;
    ICCertificates cert;
    std::vector<std::string> notes;

    bool normalized() const { return mode != ICMode::zero_structure && mode != ICMode::zero_routing; }
};

namespace detail {

inline LinkSystem ic_system(const Field& f, int m, const std::array<std::array<Gfe, 3>, 3>& gains,
                            const std::array<GfMatrix, 3>& precoders, const std::array<Gfe, 3>& source_scale) {
    LinkSystem sys;
    sys.field = &f;
    sys.m = m;
    for (const auto& row : gains) sys.gain.push_back({row.begin(), row.end()});
    for (int i = 0; i < 3; ++i) {
        LinkBlock b;
        b.source = i;
        b.dest = i;
        b.precoder = precoders[std::size_t(i)].scaled(source_scale[std::size_t(i)]);
        sys.blocks.push_back(std::move(b));
    }
    return sys;
}

inline Rational ic_rate(const ICScheme& s) {
    long long total = s.streams[0] + s.streams[1] + s.streams[2];
    return make_rational(total, (long long)s.m * s.field->n());
}

inline void certify_ic(ICScheme& s, const std::array<std::array<Gfe, 3>, 3>& gains) {
    const Field& f = *s.field;
    LinkSystem sys = ic_system(f, s.m, gains, s.precoders, {f.one(), f.one(), f.one()});
    for (int j = 0; j < 3; ++j) {
        auto r = analyze_dest(sys, j);
        s.cert.rank_S[std::size_t(j)] = r.total_rank;
        s.cert.desired_dims[std::size_t(j)] = r.desired_rank;
        s.cert.aligned_dims[std::size_t(j)] = r.interference_rank;
    }
    s.sum_rate = ic_rate(s);
}

inline std::array<Gfe, 4> hbar_tuple(const ICNormalization& n) { return {n.hbar11, n.hbar22, n.hbar33, n.hbar}; }

} // namespace detail

// Greedy column search with backtracking. Each space lists columns coef * free[k]; every space must stay independent.
struct SearchTerm {
    std::size_t free = 0;
    Gfe coef;
};

struct ColumnSearch {
    const Field* field = nullptr;
    int m = 1;
    std::size_t num_free = 0;
    std::vector<std::vector<SearchTerm>> spaces;
    bool anchor_ones = true;
    u64 budget = 4'000'000;
};

namespace detail {

inline u64 candidate_space(const Field& f, int m) {
    long double s = 1;
    for (int i = 0; i < m; ++i) s *= (long double)f.order();
    return s > 9.0e18L ? u64(9'000'000'000'000'000'000ULL) : u64(s);
}

// 0/1 vectors with all-ones first; per-coordinate scalings make these a complete set of first columns.
inline std::vector<std::vector<Gfe>> anchor_candidates(const Field& f, int m) {
    std::vector<std::vector<Gfe>> out{std::vector<Gfe>(std::size_t(m), f.one())};
    for (u64 t = 1; t + 1 < (u64(1) << m); ++t) {
        std::vector<Gfe> v(std::size_t(m), f.zero());
        for (int r = 0; r < m; ++r)
            if ((t >> (m - 1 - r)) & 1) v[std::size_t(r)] = f.one();
        out.push_back(v);
    }
    return out;
}

inline std::vector<Gfe> mixed_radix(const Field& f, u64 t, int m) {
    std::vector<Gfe> v(std::size_t(m), f.zero());
    for (int r = m - 1; r >= 0; --r) {
        v[std::size_t(r)] = f.elem(u32(t % f.order()));
        t /= f.order();
    }
    return v;
}

struct SearchState {
    const ColumnSearch& cs;
    std::vector<std::vector<std::vector<Gfe>>> coefs;  // [space][free] -> coefficients

    explicit SearchState(const ColumnSearch& c) : cs(c) {
        coefs.assign(c.spaces.size(), std::vector<std::vector<Gfe>>(c.num_free));
        for (std::size_t s = 0; s < c.spaces.size(); ++s)
            for (const auto& t : c.spaces[s]) coefs[s][t.free].push_back(t.coef);
    }

    std::vector<SpanBasis> empty_bases() const {
        std::size_t dim = std::size_t(cs.m) * std::size_t(cs.field->n());
        return std::vector<SpanBasis>(cs.spaces.size(), SpanBasis(cs.field->p(), dim));
    }

    bool extend(std::vector<SpanBasis>& bases, std::size_t k, const std::vector<Gfe>& v) const {
        for (std::size_t s = 0; s < bases.size(); ++s)
            for (const auto& c : coefs[s][k]) {
                std::vector<Gfe> col(v.size(), cs.field->zero());
                for (std::size_t r = 0; r < v.size(); ++r) col[r] = c * v[r];
                if (!bases[s].add(stack(col))) return false;
            }
        return true;
    }
};

} // namespace detail

inline std::vector<std::vector<Gfe>> run_column_search(const ColumnSearch& cs) {
    const Field& f = *cs.field;
    detail::SearchState st(cs);
    std::vector<std::vector<SpanBasis>> bases{st.empty_bases()};
    std::vector<std::vector<Gfe>> chosen;
    std::vector<u64> next(cs.num_free, 0);
    const u64 space = detail::candidate_space(f, cs.m);
    const auto anchors = detail::anchor_candidates(f, cs.m);
    u64 spent = 0;
    while (chosen.size() < cs.num_free) {
        std::size_t k = chosen.size();
        bool anchored = k == 0 && cs.anchor_ones;
        u64 limit = anchored ? u64(anchors.size()) : space;
        if (!anchored && next[k] == 0) next[k] = 1;
        bool placed = false;
        for (u64 t = next[k]; t < limit; ++t) {
            if (++spent > cs.budget) throw Error(Errc::SearchExhausted, "search budget exhausted");
            u64 label = cs.m == 1 ? t : scan_label(t, space, f.p());
            std::vector<Gfe> v = anchored ? anchors[t] : detail::mixed_radix(f, label, cs.m);
            auto b = bases.back();
            if (!st.extend(b, k, v)) continue;
            next[k] = t + 1;
            chosen.push_back(std::move(v));
            bases.push_back(std::move(b));
            placed = true;
            break;
        }
        if (placed) continue;
        if (k == 0) throw Error(Errc::SearchExhausted, "no precoder columns exist");
        next[k] = 0;
        chosen.pop_back();
        bases.pop_back();
    }
    return chosen;
}

// Number of candidates for free vector k (zero included) that break independence after the given prefix.
inline u64 count_exclusions(const ColumnSearch& cs, const std::vector<std::vector<Gfe>>& prefix) {
    const Field& f = *cs.field;
    detail::SearchState st(cs);
    auto bases = st.empty_bases();
    for (std::size_t k = 0; k < prefix.size(); ++k)
        if (!st.extend(bases, k, prefix[k])) throw Error(Errc::InvalidArgument, "prefix is not independent");
    const std::size_t k = prefix.size();
    const u64 space = detail::candidate_space(f, cs.m);
    u64 excluded = 0;
    for (u64 t = 0; t < space; ++t) {
        auto b = bases;
        if (!st.extend(b, k, detail::mixed_radix(f, t, cs.m))) ++excluded;
    }
    return excluded;
}

inline ICScheme degenerate_ic(const Field& f, std::optional<ICNormalization> n = std::nullopt) {
    ICScheme s;
    s.mode = ICMode::degenerate_rate1;
    s.field = &f;
    s.m = 1;
    s.precoders = {full_rate_precoder(f, 1, 0), GfMatrix(f, 1, 0), GfMatrix(f, 1, 0)};
    s.streams = {f.n(), 0, 0};
    if (n) s.hbar = detail::hbar_tuple(*n);
    Gfe one = f.one();
    detail::certify_ic(s, n ? n->gains() : std::array<std::array<Gfe, 3>, 3>{{{one, one, one}, {one, one, one}, {one, one, one}}});
    return s;
}

inline ColumnSearch eigen_search(const ICNormalization& n) {
    const Field& f = n.field();
    ColumnSearch cs;
    cs.field = &f;
    bool even = f.n() % 2 == 0;
    cs.m = even ? 1 : 2;
    cs.num_free = even ? std::size_t(f.n() / 2) : std::size_t(f.n());
    for (int k = 0; k < 3; ++k) {
        std::vector<SearchTerm> sp;
        for (std::size_t j = 0; j < cs.num_free; ++j) {
            sp.push_back({j, n.hkk(k)});
            sp.push_back({j, f.one()});
        }
        cs.spaces.push_back(std::move(sp));
    }
    return cs;
}

// Shared precoder at all three sources; hbar in F_p aligns all interference.
inline ICScheme construct_eigen(const ICNormalization& n, u64 budget = 4'000'000) {
    const Field& f = n.field();
    if (!all_pass(eigen_conditions(n))) throw Error(Errc::ConditionsNotMet, "eigen conditions fail");
    ColumnSearch cs = eigen_search(n);
    cs.budget = budget;
    auto cols = run_column_search(cs);
    ICScheme s;
    s.mode = f.n() % 2 == 0 ? ICMode::eigen_even : ICMode::eigen_odd;
    s.field = &f;
    s.m = cs.m;
    GfMatrix v = GfMatrix::from_columns(f, std::size_t(cs.m), cols);
    s.precoders = {v, v, v};
    int d = int(cs.num_free);
    s.streams = {d, d, d};
    s.hbar = detail::hbar_tuple(n);
    detail::certify_ic(s, n.gains());
    return s;
}

// Source 1 sends [hbar^l v .. v], sources 2 and 3 send [hbar^(l-1) v .. v] with v = 1.
inline ICScheme construct_odd(const ICNormalization& n) {
    const Field& f = n.field();
    if (f.n() % 2 == 0 || f.n() < 3) throw Error(Errc::InvalidArgument, "construct_odd needs odd n >= 3");
    if (!all_pass(odd_conditions(n))) throw Error(Errc::ConditionsNotMet, "odd-power conditions fail");
    int l = (f.n() - 1) / 2;
    auto as_row = [&](const std::vector<Gfe>& elems) {
        GfMatrix m(f, 1, 0);
        for (const auto& e : elems) m.append_column({e});
        return m;
    };
    ICScheme s;
    s.mode = ICMode::odd_powers;
    s.field = &f;
    s.m = 1;
    GfMatrix v1 = as_row(detail::powers_desc(n.hbar, l));
    GfMatrix v2 = as_row(detail::powers_desc(n.hbar, l - 1));
    s.precoders = {v1, v2, v2};
    s.streams = {l + 1, l, l};
    s.hbar = detail::hbar_tuple(n);
    detail::certify_ic(s, n.gains());
    return s;
}

// Free vectors of the five-extension scheme: V1^1, V1^2, V2^1, V2^2, V3^1, V3^2.
inline ColumnSearch ext5_search(const ICNormalization& n) {
    const Field& f = n.field();
    ColumnSearch cs;
    cs.field = &f;
    cs.m = 5;
    cs.num_free = 6;
    const Gfe one = f.one(), hb = n.hbar, hi = n.hbar.inv();
    const Gfe a = n.hbar11, b = n.hbar22, c = n.hbar33;
    cs.spaces = {
        {{0, a}, {1, a}, {2, a * hb}, {5, a}, {2, one}, {3, one}, {4, one}, {1, hi}, {5, one}, {0, one}},
        {{2, b}, {3, b}, {4, b}, {1, b * hi}, {4, one}, {5, one}, {0, one}, {3, one}, {1, one}, {2, hb}},
        {{4, c}, {5, c}, {0, c}, {3, c}, {0, one}, {1, one}, {2, hb}, {5, one}, {3, hb}, {4, hb}},
    };
    return cs;
}

// Expands the six free vectors into the three 5x4 precoders.
inline std::array<GfMatrix, 3> ext5_precoders(const Field& f, const Gfe& hbar, const std::vector<std::vector<Gfe>>& fr) {
    auto sc = [](const std::vector<Gfe>& v, const Gfe& g) {
        std::vector<Gfe> o;
        for (const auto& x : v) o.push_back(g * x);
        return o;
    };
    GfMatrix v1 = GfMatrix::from_columns(f, 5, {fr[0], fr[1], sc(fr[2], hbar), fr[5]});
    GfMatrix v2 = GfMatrix::from_columns(f, 5, {fr[2], fr[3], fr[4], sc(fr[1], hbar.inv())});
    GfMatrix v3 = GfMatrix::from_columns(f, 5, {fr[4], fr[5], fr[0], fr[3]});
    return {v1, v2, v3};
}

inline ICScheme construct_p2(const ICNormalization& n, u64 budget = 4'000'000) {
    const Field& f = n.field();
    if (f.n() != 2) throw Error(Errc::InvalidArgument, "construct_p2 needs n = 2");
    if (!all_pass(p2_conditions(n))) throw Error(Errc::ConditionsNotMet, "n = 2 conditions fail");
    ColumnSearch cs = ext5_search(n);
    cs.budget = budget;
    auto fr = run_column_search(cs);
    ICScheme s;
    s.mode = ICMode::ext5_p2;
    s.field = &f;
    s.m = 5;
    s.precoders = ext5_precoders(f, n.hbar, fr);
    s.streams = {4, 4, 4};
    s.hbar = detail::hbar_tuple(n);
    detail::certify_ic(s, n.gains());
    return s;
}

// ---- zero patterns ----

inline IC3Channel relabel(const IC3Channel& ch, const std::array<int, 3>& pi) {
    IC3Channel out;
    out.field = ch.field;
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t i = 0; i < 3; ++i) out.h[std::size_t(pi[j])][std::size_t(pi[i])] = ch.h[j][i];
    return out;
}

// Smallest incidence string over the six simultaneous relabelings.
inline std::pair<std::array<int, 3>, std::string> canonical_relabel(const IC3Channel& ch) {
    std::array<int, 3> pi{0, 1, 2}, best = pi;
    std::string best_s = ch.incidence();
    do {
        std::string s = relabel(ch, pi).incidence();
        if (s < best_s) {
            best_s = s;
            best = pi;
        }
    } while (std::next_permutation(pi.begin(), pi.end()));
    return {best, best_s};
}

inline int ic_direct_zeros(const IC3Channel& ch) {
    int z = 0;
    for (std::size_t k = 0; k < 3; ++k) z += ch.h[k][k].is_zero();
    return z;
}

inline int ic_cross_zeros(const IC3Channel& ch) {
    int z = 0;
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t i = 0; i < 3; ++i) z += i != j && ch.h[j][i].is_zero();
    return z;
}

inline bool ic_symmetric_zero_pair(const IC3Channel& ch) {
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j)
            if (ch.h[i][j].is_zero() && ch.h[j][i].is_zero()) return true;
    return false;
}

inline int ic_zero_case(const IC3Channel& ch) {
    if (ch.fully_connected()) throw Error(Errc::FullyConnected, "no channel coefficient is zero");
    int dz = ic_direct_zeros(ch), cz = ic_cross_zeros(ch);
    if (dz == 3) return 1;
    if (dz == 2) return 2;
    if (dz == 1) return 3;
    if (cz == 6) return 4;
    if (cz >= 4) return 5;
    if (cz >= 2 && ic_symmetric_zero_pair(ch)) return 6;
    return 7;
}

// Structure letter of a case-7 pattern; the two-zero path orbit is reported as H.
inline char ic_structure_letter(const IC3Channel& ch) {
    std::vector<std::pair<int, int>> z;  // (dest, source)
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i)
            if (i != j && ch.h[std::size_t(j)][std::size_t(i)].is_zero()) z.push_back({j, i});
    if (z.size() == 1) return 'K';
    if (z.size() == 2) {
        if (z[0].first == z[1].first) return 'G';
        if (z[0].second == z[1].second) return 'J';
        return 'H';
    }
    std::array<int, 3> per_dest{}, per_src{};
    for (auto [j, i] : z) {
        ++per_dest[std::size_t(j)];
        ++per_src[std::size_t(i)];
    }
    bool cyclic = per_dest == std::array<int, 3>{1, 1, 1} && per_src == std::array<int, 3>{1, 1, 1};
    return cyclic ? 'E' : 'D';
}

// Users that can all send at full rate: nonzero direct links and no cross links among them.
inline std::vector<int> ic_routing_users(const IC3Channel& ch) {
    std::vector<int> best;
    for (int mask = 1; mask < 8; ++mask) {
        std::vector<int> u;
        bool ok = true;
        for (int i = 0; i < 3; ++i)
            if (mask >> i & 1) {
                if (ch.h[std::size_t(i)][std::size_t(i)].is_zero()) ok = false;
                u.push_back(i);
            }
        for (int a : u)
            for (int b : u)
                if (a != b && !ch.h[std::size_t(a)][std::size_t(b)].is_zero()) ok = false;
        if (ok && (u.size() > best.size() || (u.size() == best.size() && u < best))) best = u;
    }
    return best;
}

// Alignment plan for a case-7 channel: a shared V (scaled per source) and at most one free V'.
struct ZeroPlan {
    std::array<bool, 3> in_group{};
    std::array<Gfe, 3> scale;
    std::vector<int> cond_dests;
    std::vector<Gfe> cond_values;
    bool time_sharing = false;
};

inline ZeroPlan zero_plan(const IC3Channel& ch) {
    const Field& f = *ch.field;
    ZeroPlan plan;
    std::array<std::vector<int>, 3> interferers;
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i)
            if (i != j && !ch.h[std::size_t(j)][std::size_t(i)].is_zero()) interferers[std::size_t(j)].push_back(i);
    std::vector<std::array<int, 3>> edges;  // (dest, src a, src b)
    for (int j = 0; j < 3; ++j)
        if (interferers[std::size_t(j)].size() == 2) edges.push_back({j, interferers[std::size_t(j)][0], interferers[std::size_t(j)][1]});
    if (edges.empty()) {
        plan.time_sharing = true;
        return plan;
    }
    std::array<std::optional<Gfe>, 3> c;
    c[std::size_t(edges[0][1])] = f.one();
    for (int round = 0; round < 3; ++round)
        for (const auto& e : edges) {
            auto j = std::size_t(e[0]), a = std::size_t(e[1]), b = std::size_t(e[2]);
            if (c[a] && !c[b]) c[b] = ch.h[j][a] * *c[a] / ch.h[j][b];
            if (c[b] && !c[a]) c[a] = ch.h[j][b] * *c[b] / ch.h[j][a];
        }
    for (std::size_t i = 0; i < 3; ++i) {
        plan.in_group[i] = c[i].has_value();
        plan.scale[i] = c[i] ? *c[i] : f.one();
    }
    for (int j = 0; j < 3; ++j) {
        auto J = std::size_t(j);
        if (!plan.in_group[J]) continue;
        for (int i : interferers[J])
            if (plan.in_group[std::size_t(i)]) {
                plan.cond_dests.push_back(j);
                plan.cond_values.push_back(ch.h[J][J] * plan.scale[J] / (ch.h[J][std::size_t(i)] * plan.scale[std::size_t(i)]));
                break;
            }
    }
    return plan;
}

inline std::vector<ICCondition> zero_plan_conditions(const ZeroPlan& plan, const Field& f) {
    std::vector<ICCondition> out;
    for (std::size_t k = 0; k < plan.cond_dests.size(); ++k)
        out.push_back(detail::rank_condition("zero_structure", "hbar" + std::to_string(plan.cond_dests[k] + 1) +
                                                                   std::to_string(plan.cond_dests[k] + 1) + "_notin_Fp",
                                             {plan.cond_values[k], f.one()}));
    return out;
}

inline ICZeroReport classify_ic_zero(const IC3Channel& ch) {
    ICZeroReport r;
    r.case_id = ic_zero_case(ch);
    r.direct_zeros = ic_direct_zeros(ch);
    r.cross_zeros = ic_cross_zeros(ch);
    if (r.case_id != 7) {
        r.users = ic_routing_users(ch);
        int c = 0;
        switch (r.case_id) {
        case 1: c = 0; break;
        case 2: c = 1; break;
        case 3: {
            int a = -1, b = -1;
            for (int k = 0; k < 3; ++k)
                if (!ch.h[std::size_t(k)][std::size_t(k)].is_zero()) (a < 0 ? a : b) = k;
            c = ch.h[std::size_t(a)][std::size_t(b)].is_zero() && ch.h[std::size_t(b)][std::size_t(a)].is_zero() ? 2 : 1;
            break;
        }
        case 4: c = 3; break;
        default: c = 2; break;
        }
        r.C = make_rational(c, 1);
        r.C_linear = make_rational(c, 1);
        return r;
    }
    auto [pi, canon] = canonical_relabel(ch);
    r.perm = pi;
    r.canonical = canon;
    IC3Channel cc = relabel(ch, pi);
    r.structure = ic_structure_letter(cc);
    ZeroPlan plan = zero_plan(cc);
    r.conditions = zero_plan_conditions(plan, *ch.field);
    if (all_pass(r.conditions)) {
        r.C_linear = make_rational(3, 2);
        r.C = r.C_linear;
        r.users = {0, 1, 2};
    } else {
        r.C_linear = make_rational(1, 1);
        r.users = {0};
        bool all_one = true;
        for (std::size_t k = 0; k < r.conditions.size(); ++k)
            if (!r.conditions[k].pass && plan.cond_values[k] != ch.field->one()) all_one = false;
        if (all_one)
            r.C = make_rational(1, 1);
        else
            r.open_case = true;
    }
    return r;
}

inline ICClassification classify_ic(const IC3Channel& ch) {
    if (ch.fully_connected()) return classify_normalized(normalize_ic(ch));
    ICClassification r;
    r.cls = ICClass::ZeroPattern;
    r.zero = classify_ic_zero(ch);
    r.conditions = r.zero->conditions;
    return r;
}

namespace detail {

inline ICScheme zero_base(const IC3Channel& ch, ICMode mode, int m) {
    ICScheme s;
    s.mode = mode;
    s.field = ch.field;
    s.m = m;
    s.pattern = ch.incidence();
    s.zero_case = ic_zero_case(ch);
    for (auto& p : s.precoders) p = GfMatrix(*ch.field, std::size_t(m), 0);
    return s;
}

inline ICScheme zero_routing(const IC3Channel& ch, const std::vector<int>& users) {
    const Field& f = *ch.field;
    ICScheme s = zero_base(ch, ICMode::zero_routing, 1);
    for (int u : users) {
        s.precoders[std::size_t(u)] = full_rate_precoder(f, 1, 0);
        s.streams[std::size_t(u)] = f.n();
    }
    certify_ic(s, ch.h);
    return s;
}

// Built on a canonical channel; the caller pulls the precoders back.
inline ICScheme zero_structure_canonical(const IC3Channel& cc, u64 budget) {
    const Field& f = *cc.field;
    ZeroPlan plan = zero_plan(cc);
    char letter = ic_structure_letter(cc);
    if (plan.time_sharing) {
        ICScheme s = zero_base(cc, ICMode::zero_structure, 2);
        s.structure = letter;
        s.precoders[0] = full_rate_precoder(f, 2, 0);
        s.precoders[1] = full_rate_precoder(f, 2, 1);
        GfMatrix rep = full_rate_precoder(f, 2, 0);
        for (int k = 0; k < f.n(); ++k) rep.set_label(1, std::size_t(k), f.p_pow(k));
        s.precoders[2] = rep;
        s.streams = {f.n(), f.n(), f.n()};
        certify_ic(s, cc.h);
        return s;
    }
    if (!all_pass(zero_plan_conditions(plan, f))) throw Error(Errc::ConditionsNotMet, "structure conditions fail");
    bool even = f.n() % 2 == 0;
    int m = even ? 1 : 2;
    std::size_t c = even ? std::size_t(f.n() / 2) : std::size_t(f.n());
    bool has_single = !(plan.in_group[0] && plan.in_group[1] && plan.in_group[2]);
    ColumnSearch cs;
    cs.field = &f;
    cs.m = m;
    cs.num_free = has_single ? 2 * c : c;
    cs.budget = budget;
    for (std::size_t j = 0; j < 3; ++j) {
        std::vector<SearchTerm> sp;
        auto add_block = [&](bool group, const Gfe& coef) {
            for (std::size_t k = 0; k < c; ++k) sp.push_back({group ? k : c + k, coef});
        };
        add_block(plan.in_group[j], cc.h[j][j] * plan.scale[j]);
        bool group_done = false;
        for (std::size_t i = 0; i < 3; ++i) {
            if (i == j || cc.h[j][i].is_zero()) continue;
            if (plan.in_group[i]) {
                if (!group_done) add_block(true, cc.h[j][i] * plan.scale[i]);
                group_done = true;
            } else {
                add_block(false, cc.h[j][i]);
            }
        }
        cs.spaces.push_back(std::move(sp));
    }
    auto cols = run_column_search(cs);
    ICScheme s = zero_base(cc, ICMode::zero_structure, m);
    s.structure = letter;
    GfMatrix v = GfMatrix::from_columns(f, std::size_t(m), {cols.begin(), cols.begin() + std::ptrdiff_t(c)});
    GfMatrix vp = has_single ? GfMatrix::from_columns(f, std::size_t(m), {cols.begin() + std::ptrdiff_t(c), cols.end()}) : v;
    for (std::size_t i = 0; i < 3; ++i) {
        s.precoders[i] = plan.in_group[i] ? v.scaled(plan.scale[i]) : vp;
        s.streams[i] = int(c);
    }
    certify_ic(s, cc.h);
    return s;
}

} // namespace detail

inline ICScheme construct_zero_structure(const IC3Channel& ch, u64 budget = 4'000'000) {
    ICZeroReport z = classify_ic_zero(ch);
    if (z.case_id != 7) return detail::zero_routing(ch, z.users);
    if (z.C_linear != make_rational(3, 2)) {
        ICScheme s = detail::zero_routing(ch, z.users);
        s.structure = z.structure;
        if (z.open_case) s.notes.push_back("open_case: hbar_kk in F_p outside {0,1}");
        return s;
    }
    ICScheme canon = detail::zero_structure_canonical(relabel(ch, z.perm), budget);
    ICScheme s = detail::zero_base(ch, ICMode::zero_structure, canon.m);
    s.structure = canon.structure;
    for (std::size_t i = 0; i < 3; ++i) {
        s.precoders[i] = canon.precoders[std::size_t(z.perm[i])];
        s.streams[i] = canon.streams[std::size_t(z.perm[i])];
    }
    detail::certify_ic(s, ch.h);
    return s;
}

enum class ICModeRequest { automatic, eigen, odd_powers, ext5_p2, zero_structure, degenerate_rate1 };

// Best-rate scheme for the channel; unclassified channels fall back to rate 1.
inline ICScheme construct_ic(const IC3Channel& ch, ICModeRequest req = ICModeRequest::automatic) {
    const Field& f = *ch.field;
    if (!ch.fully_connected()) {
        if (req != ICModeRequest::automatic && req != ICModeRequest::zero_structure)
            throw Error(Errc::ConditionsNotMet, "channel has zero coefficients");
        return construct_zero_structure(ch);
    }
    if (req == ICModeRequest::zero_structure) throw Error(Errc::FullyConnected, "no channel coefficient is zero");
    ICNormalization n = normalize_ic(ch);
    switch (req) {
    case ICModeRequest::eigen: return construct_eigen(n);
    case ICModeRequest::odd_powers: return construct_odd(n);
    case ICModeRequest::ext5_p2: return construct_p2(n);
    case ICModeRequest::degenerate_rate1: return degenerate_ic(f, n);
    default: break;
    }
    ICClassification c = classify_normalized(n);
    try {
        if (c.cls == ICClass::EigenCase) return construct_eigen(n);
        if (c.cls == ICClass::OddPowersCase) return construct_odd(n);
        if (c.cls == ICClass::P2Case) return construct_p2(n);
    } catch (const Error& e) {
        if (e.code() != Errc::SearchExhausted) throw;
        ICScheme s = degenerate_ic(f, n);
        s.notes.push_back(std::string("search exhausted for ") + std::string(icclass_name(c.cls)));
        return s;
    }
    ICScheme s = degenerate_ic(f, n);
    for (const auto& name : c.failed) s.notes.push_back("failed " + name);
    return s;
}

struct ICVerifyReport {
    bool pass = false;
    std::string failure;
    std::array<std::size_t, 3> rank_S{};
    std::array<std::size_t, 3> desired_dims{};
    std::array<std::size_t, 3> aligned_dims{};
    Rational sum_rate;
};

namespace detail {

inline LinkSystem ic_raw_system(const ICScheme& s, const IC3Channel& ch) {
    const Field& f = *ch.field;
    if (!s.normalized()) return ic_system(f, s.m, ch.h, s.precoders, {f.one(), f.one(), f.one()});
    ICNormalization n = normalize_ic(ch);
    return ic_system(f, s.m, ch.h, s.precoders, n.source_scale);
}

inline std::size_t equal_column_pairs(const std::vector<std::vector<Gfe>>& cols) {
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < cols.size(); ++a)
        for (std::size_t b = a + 1; b < cols.size(); ++b) pairs += cols[a] == cols[b];
    return pairs;
}

} // namespace detail

// Rebuilds S1, S2, S3 on the raw channel and checks mode alignment and ranks.
inline ICVerifyReport verify_ic(const ICScheme& s, const IC3Channel& ch) {
    ICVerifyReport r;
    auto fail = [&](const std::string& why) {
        r.pass = false;
        if (r.failure.empty()) r.failure = why;
        return r;
    };
    if (!s.field || !s.field->same_as(*ch.field)) return fail("scheme and channel use different fields");
    const Field& f = *ch.field;
    for (std::size_t i = 0; i < 3; ++i)
        if (s.precoders[i].rows() != std::size_t(s.m) || int(s.precoders[i].cols()) != s.streams[i])
            return fail("precoder shape of source " + std::to_string(i + 1));
    std::optional<ICNormalization> n;
    if (s.normalized()) {
        if (!ch.fully_connected()) return fail("channel has zero coefficients");
        n = normalize_ic(ch);
        if (s.hbar && *s.hbar != detail::hbar_tuple(*n)) return fail("scheme was built for different normalized coefficients");
        if (!s.hbar && s.mode != ICMode::degenerate_rate1) return fail("scheme lacks normalized coefficients");
    } else if (s.pattern != ch.incidence()) {
        return fail("zero pattern differs");
    }
    const auto& P = s.precoders;
    switch (s.mode) {
    case ICMode::eigen_even:
    case ICMode::eigen_odd:
        if (!(P[0] == P[1]) || !(P[1] == P[2])) return fail("alignment: sources must share V");
        if (!n->hbar.in_base_field()) return fail("alignment: hbar not in F_p");
        break;
    case ICMode::odd_powers: {
        if (!(P[1] == P[2])) return fail("alignment: V2 != V3");
        std::size_t l = P[1].cols();
        if (P[0].cols() != l + 1) return fail("alignment: V1 width");
        for (std::size_t k = 0; k < l; ++k) {
            if (P[0].at(0, k) != n->hbar * P[1].at(0, k)) return fail("alignment: V1 column " + std::to_string(k + 1));
            if (P[0].at(0, k + 1) != P[1].at(0, k)) return fail("alignment: V1 shift at column " + std::to_string(k + 2));
        }
        break;
    }
    case ICMode::ext5_p2: {
        const Gfe hb = n->hbar;
        auto col = [&](int src, int k) { return P[std::size_t(src)].column(std::size_t(k)); };
        auto scaled = [](std::vector<Gfe> v, const Gfe& g) {
            for (auto& x : v) x = g * x;
            return v;
        };
        if (col(0, 2) != scaled(col(1, 0), hb)) return fail("alignment: V1^3 != hbar V2^1");
        if (col(0, 3) != col(2, 1)) return fail("alignment: V1^4 != V3^2");
        if (col(1, 2) != col(2, 0)) return fail("alignment: V2^3 != V3^1");
        if (col(1, 3) != scaled(col(0, 1), hb.inv())) return fail("alignment: V2^4 != V1^2 / hbar");
        if (col(2, 2) != col(0, 0)) return fail("alignment: V3^3 != V1^1");
        if (col(2, 3) != col(1, 1)) return fail("alignment: V3^4 != V2^2");
        break;
    }
    default: break;
    }
    LinkSystem sys = detail::ic_raw_system(s, ch);
    for (int j = 0; j < 3; ++j) {
        auto d = analyze_dest(sys, j);
        auto J = std::size_t(j);
        r.rank_S[J] = d.total_rank;
        r.desired_dims[J] = d.desired_rank;
        r.aligned_dims[J] = d.interference_rank;
        if (!d.decodable) return fail("destination " + std::to_string(j + 1) + " cannot resolve its streams");
    }
    r.sum_rate = detail::ic_rate(s);
    const std::size_t full = std::size_t(s.m) * std::size_t(f.n());
    auto interferer_blocks = [&](int j) {
        std::vector<MatFp> out;
        for (int i = 0; i < 3; ++i)
            if (i != j && !ch.h[std::size_t(j)][std::size_t(i)].is_zero() && P[std::size_t(i)].cols() > 0)
                out.push_back(received_columns(sys, j, sys.blocks[std::size_t(i)]));
        return out;
    };
    bool aligned_mode = s.mode == ICMode::eigen_even || s.mode == ICMode::eigen_odd || s.mode == ICMode::odd_powers ||
                        s.mode == ICMode::ext5_p2;
    if (aligned_mode)
        for (std::size_t j = 0; j < 3; ++j)
            if (r.rank_S[j] != full) return fail("rank(S" + std::to_string(j + 1) + ") != m*n");
    if (s.mode == ICMode::eigen_even || s.mode == ICMode::eigen_odd) {
        for (int j = 0; j < 3; ++j) {
            auto b = interferer_blocks(j);
            if (b.size() == 2 && !same_span(b[0], b[1]))
                return fail("interference spans differ at destination " + std::to_string(j + 1));
        }
    }
    if (s.mode == ICMode::ext5_p2) {
        for (int j = 0; j < 3; ++j) {
            std::vector<std::vector<Gfe>> cols;
            for (int i = 0; i < 3; ++i) {
                if (i == j) continue;
                const Gfe g = ch.h[std::size_t(j)][std::size_t(i)] * n->source_scale[std::size_t(i)];
                for (std::size_t k = 0; k < P[std::size_t(i)].cols(); ++k) {
                    auto c = P[std::size_t(i)].column(k);
                    for (auto& x : c) x = g * x;
                    cols.push_back(c);
                }
            }
            if (detail::equal_column_pairs(cols) != 2)
                return fail("destination " + std::to_string(j + 1) + " does not see exactly two aligned pairs");
        }
    }
    if (s.mode == ICMode::zero_structure && s.structure != 'E') {
        for (int j = 0; j < 3; ++j) {
            auto b = interferer_blocks(j);
            if (b.size() == 2 && !same_span(b[0], b[1]))
                return fail("interference spans differ at destination " + std::to_string(j + 1));
        }
    }
    r.pass = true;
    return r;
}

inline std::array<std::vector<u32>, 3> simulate_ic(const ICScheme& s, const IC3Channel& ch,
                                                   const std::array<std::vector<u32>, 3>& msgs) {
    LinkSystem sys = detail::ic_raw_system(s, ch);
    auto y = transmit(sys, {msgs.begin(), msgs.end()});
    auto dec = decode(sys, y);
    return {dec[0], dec[1], dec[2]};
}

struct DepthCertificate {
    bool pass = false;
    int n = 0;
    int l = 0;
    int D = 0;
    int chain_bound = 0;
    u64 tuples_checked = 0;
};

inline int alignment_depth_bound(int n) { return 2 * n - n / 2 - 1; }

// For every nonzero scalar tuple, the chain elements at destination 1 stay F_p-independent.
inline DepthCertificate check_alignment_depth(const ICNormalization& norm) {
    const Field& f = norm.field();
    if (f.n() % 2 == 0 || f.n() < 3) throw Error(Errc::InvalidArgument, "depth certificate needs odd n >= 3");
    if (!all_pass(odd_conditions(norm))) throw Error(Errc::ConditionsNotMet, "odd-power conditions fail");
    DepthCertificate c;
    c.n = f.n();
    c.l = (f.n() - 1) / 2;
    c.D = alignment_depth_bound(f.n());
    c.chain_bound = 3 * c.l + 1;
    std::vector<Gfe> base = odd_s1_elements(norm.hbar11, norm.hbar, c.l);
    const std::size_t k = base.size();
    std::vector<u32> alpha(k, 1);
    c.pass = true;
    while (true) {
        std::vector<Gfe> scaled;
        for (std::size_t i = 0; i < k; ++i) scaled.push_back(base[i].scaled(alpha[i]));
        ++c.tuples_checked;
        if (rank(cols_from_elements(scaled)) != k) {
            c.pass = false;
            break;
        }
        std::size_t pos = 0;
        while (pos < k && alpha[pos] == f.p() - 1) alpha[pos++] = 1;
        if (pos == k) break;
        ++alpha[pos];
    }
    c.pass = c.pass && c.D == c.chain_bound;
    return c;
}

} // namespace gfalign

#endif // GFALIGN_IC3_HPP
