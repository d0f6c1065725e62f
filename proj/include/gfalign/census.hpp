#ifndef GFALIGN_CENSUS_HPP
#define GFALIGN_CENSUS_HPP

#include <algorithm>
#include <array>
#include <cstdio>
#include <functional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "gfalign/error.hpp"
#include "gfalign/gf.hpp"
#include "gfalign/ic3.hpp"
#include "gfalign/rational.hpp"

namespace gfalign {

// Counter-based generator: the stream for instance i depends only on (seed, i).
class SplitMix64 {
public:
    SplitMix64(u64 seed, u64 index) : state_(seed ^ (index * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL)) { next(); }

    u64 next() {
        u64 z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound) by rejection.
    u64 below(u64 bound) {
        u64 threshold = (0 - bound) % bound;
        for (;;) {
            u64 r = next();
            if (r >= threshold) return r % bound;
        }
    }

private:
    u64 state_;
};

enum class CensusTarget { x_normalized_h, x_full, ic_normalized, ic_full };

inline std::string_view census_target_name(CensusTarget t) {
    switch (t) {
    case CensusTarget::x_normalized_h: return "x_normalized_h";
    case CensusTarget::x_full: return "x_full";
    case CensusTarget::ic_normalized: return "ic_normalized";
    case CensusTarget::ic_full: return "ic_full";
    }
    return "unknown";
}

inline CensusTarget parse_census_target(std::string_view s) {
    for (CensusTarget t : {CensusTarget::x_normalized_h, CensusTarget::x_full, CensusTarget::ic_normalized, CensusTarget::ic_full})
        if (census_target_name(t) == s) return t;
    throw Error(Errc::ParseError, "unknown census target '" + std::string(s) + "'");
}

inline constexpr u64 kDefaultThreshold = u64(1) << 20;

struct CensusSpec {
    u32 p = 2;
    int n = 1;
    CensusTarget target = CensusTarget::x_normalized_h;
    bool exhaustive = true;
    u64 sample_count = 0;
    u64 seed = 0;
    u64 threshold = kDefaultThreshold;
    unsigned threads = 0;
};

struct CensusCount {
    std::string name;
    u64 count = 0;
};

struct CensusComparison {
    std::string name;
    std::string subject;
    std::string relation;  // "==" or ">="
    Rational closed_form;
    Rational measured;
    bool pass = false;
};

struct CensusReport {
    CensusSpec spec;
    std::string coordinates;
    std::string modulus;
    BigInt total = 0;
    std::vector<CensusCount> classes;
    std::vector<CensusCount> condition_sets;
    std::vector<CensusComparison> comparisons;

    bool all_pass() const {
        return std::all_of(comparisons.begin(), comparisons.end(), [](const CensusComparison& c) { return c.pass; });
    }

    u64 count_of(std::string_view name) const {
        for (const auto& c : classes)
            if (c.name == name) return c.count;
        for (const auto& c : condition_sets)
            if (c.name == name) return c.count;
        throw Error(Errc::InvalidArgument, "no census class '" + std::string(name) + "'");
    }
};

// Closed forms.
inline Rational degenerate_fraction_closed(u32 p, int n) { return Rational(BigInt(p - 1), ipow(p, unsigned(n)) - 1); }

inline Rational eigen_fraction(u32 p, int n) {
    BigInt q = ipow(p, unsigned(n));
    Rational a(BigInt(p), q), b(q - p, q);
    return a * b * b * b;
}

inline Rational eigen_fraction_full(u32 p, int n) {
    BigInt q = ipow(p, unsigned(n));
    Rational b(q - p, q - 1);
    return Rational(BigInt(p - 1), q - 1) * b * b * b;
}

namespace detail {

inline Rational inv_power_sum(u32 p, int k) {
    Rational s = 0;
    for (int i = 1; i <= k; ++i) s += Rational(BigInt(1), ipow(p, unsigned(i)));
    return s;
}

} // namespace detail

inline Rational odd_n3_bound(u32 p) {
    Rational a = 1 - Rational(BigInt(1), BigInt(p) * p), b = 1 - Rational(BigInt(1), BigInt(p));
    return a * b * b * b;
}

inline Rational odd_bound(u32 p, int l) {
    Rational a = 1 - Rational(BigInt(l), ipow(p, unsigned(l)));
    Rational b = 1 - detail::inv_power_sum(p, l + 1), c = 1 - detail::inv_power_sum(p, l);
    return a * b * c * c;
}

inline Rational odd_prime_n_bound(u32 p, int l) {
    Rational a = 1 - Rational(BigInt(1), ipow(p, unsigned(2 * l)));
    Rational b = 1 - detail::inv_power_sum(p, l + 1), c = 1 - detail::inv_power_sum(p, l);
    return a * b * c * c;
}

inline Rational p2_bound(u32 p) {
    Rational b = 1 - Rational(BigInt(1), BigInt(p));
    return b * b * b * (1 - Rational(BigInt(3), BigInt(p)));
}

// Instances in the target universe.
inline BigInt census_universe(u32 p, int n, CensusTarget t) {
    BigInt q = ipow(p, unsigned(n));
    switch (t) {
    case CensusTarget::x_normalized_h: return q - 1;
    case CensusTarget::x_full: return (q - 1) * (q - 1) * (q - 1) * (q - 1);
    case CensusTarget::ic_normalized: return q * q * q * q;
    case CensusTarget::ic_full: {
        BigInt r = 1;
        for (int i = 0; i < 9; ++i) r *= q - 1;
        return r;
    }
    }
    return 0;
}

// Work units an exhaustive run performs; normalized IC censuses factor over (hbar, one direct gain).
inline BigInt census_work(u32 p, int n, CensusTarget t) {
    BigInt q = ipow(p, unsigned(n));
    if (t == CensusTarget::ic_normalized) return q * q;
    return census_universe(p, n, t);
}

namespace detail {

inline unsigned worker_count(const CensusSpec& s) {
    unsigned t = s.threads ? s.threads : std::max(1u, std::thread::hardware_concurrency());
    return std::min(t, 64u);
}

// Runs body(begin, end, counts) over [0, total) split across workers; counts are summed.
inline std::vector<u64> parallel_counts(u64 total, std::size_t slots, unsigned workers,
                                        const std::function<void(u64, u64, std::vector<u64>&)>& body) {
    workers = unsigned(std::max<u64>(1, std::min<u64>(workers, total)));
    std::vector<std::vector<u64>> part(workers, std::vector<u64>(slots, 0));
    std::vector<std::thread> pool;
    u64 chunk = (total + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        u64 b = std::min(total, u64(w) * chunk), e = std::min(total, b + chunk);
        pool.emplace_back([&, w, b, e] { body(b, e, part[w]); });
    }
    for (auto& t : pool) t.join();
    std::vector<u64> out(slots, 0);
    for (const auto& p : part)
        for (std::size_t k = 0; k < slots; ++k) out[k] += p[k];
    return out;
}

inline void compare(CensusReport& r, std::string name, std::string subject, std::string relation, const Rational& closed) {
    CensusComparison c;
    c.name = std::move(name);
    c.subject = std::move(subject);
    c.relation = std::move(relation);
    c.closed_form = closed;
    c.measured = Rational(BigInt(r.count_of(c.subject)), r.total);
    c.pass = c.relation == "==" ? c.measured == c.closed_form : c.measured >= c.closed_form;
    r.comparisons.push_back(std::move(c));
}

// Exact normalized-IC counts: for each hbar the three direct gains contribute independent factors.
inline std::array<u64, 7> ic_normalized_exact(const Field& f, unsigned workers) {
    const u32 q = f.order();
    const int n = f.n();
    const int l = (n - 1) / 2;
    auto per_h = [&](u64 b, u64 e, std::vector<u64>& out) {
        for (u64 hl = b; hl < e; ++hl) {
            Gfe h = f.elem(u32(hl));
            u64 E = 0, O1 = 0, O2 = 0, P1 = 0, P2 = 0;
            bool odd = n % 2 == 1 && n >= 3;
            bool nv = odd && rank(cols_from_elements(powers_desc(h, l))) == std::size_t(l + 1);
            for (u32 xl = 0; xl < q; ++xl) {
                Gfe x = f.elem(xl);
                bool outx = !x.in_base_field();
                E += outx;
                if (nv) {
                    auto s1 = odd_s1_elements(x, h, l), s2 = odd_s23_elements(x, h, l);
                    O1 += rank(cols_from_elements(s1)) == s1.size();
                    O2 += rank(cols_from_elements(s2)) == s2.size();
                }
                if (n == 2) {
                    P1 += outx && !(h * x).in_base_field();
                    P2 += outx && !(x.is_zero() ? f.zero() : h / x).in_base_field();
                }
            }
            bool hin = h.in_base_field();
            u64 eig = (n >= 2 && hin) ? E * E * E : 0;
            u64 oddc = nv ? O1 * O2 * O2 : 0;
            u64 p2c = n == 2 ? P1 * P2 * P2 : 0;
            out[0] += eig;
            out[1] += oddc;
            out[2] += hin ? 0 : p2c;
            out[4] += eig;
            out[5] += oddc;
            out[6] += p2c;
        }
    };
    auto c = parallel_counts(q, 7, workers, per_h);
    BigInt total = BigInt(q) * q * q * q;
    c[3] = u64(total - c[0] - c[1] - c[2]);
    return {c[0], c[1], c[2], c[3], c[4], c[5], c[6]};
}

inline std::array<u64, 7> ic_set_slots(unsigned bits) {
    std::array<u64, 7> s{};
    s[std::size_t(class_from_sets(bits)) - 1] = 1;
    s[4] = (bits & kEigenSet) != 0;
    s[5] = (bits & kOddSet) != 0;
    s[6] = (bits & kP2Set) != 0;
    return s;
}

inline void add_slots(std::vector<u64>& out, const std::array<u64, 7>& s) {
    for (std::size_t k = 0; k < 7; ++k) out[k] += s[k];
}

} // namespace detail

// Brute-force normalized-IC counts over GF(q)^4, used as an oracle for the factorized count.
inline std::array<u64, 7> ic_normalized_bruteforce(const Field& f, unsigned workers = 1) {
    const u64 q = f.order();
    auto c = detail::parallel_counts(q * q * q * q, 7, workers, [&](u64 b, u64 e, std::vector<u64>& out) {
        for (u64 t = b; t < e; ++t) {
            u64 r = t;
            Gfe h = f.elem(u32(r % q));
            r /= q;
            Gfe a = f.elem(u32(r % q));
            r /= q;
            Gfe bb = f.elem(u32(r % q));
            Gfe cc = f.elem(u32(r / q));
            detail::add_slots(out, detail::ic_set_slots(ic_condition_sets(a, bb, cc, h)));
        }
    });
    return {c[0], c[1], c[2], c[3], c[4], c[5], c[6]};
}

inline CensusReport run_census(const CensusSpec& spec) {
    if (!is_prime(spec.p)) throw Error(Errc::NotPrime, std::to_string(spec.p) + " is not prime");
    if (spec.n < 1) throw Error(Errc::InvalidArgument, "n must be at least 1");
    if (!spec.exhaustive && spec.sample_count < 1) throw Error(Errc::InvalidArgument, "sample count must be at least 1");
    if (spec.exhaustive && census_work(spec.p, spec.n, spec.target) > spec.threshold)
        throw Error(Errc::TooLargeForExhaustive, "instance count exceeds threshold " + std::to_string(spec.threshold));
    FieldPtr fp = make_ctx(spec.p, spec.n);
    const Field& f = *fp;
    const u64 q = f.order();
    const unsigned workers = detail::worker_count(spec);
    CensusReport r;
    r.spec = spec;
    r.modulus = f.modulus().to_string();
    bool x = spec.target == CensusTarget::x_normalized_h || spec.target == CensusTarget::x_full;
    r.coordinates = spec.target == CensusTarget::x_normalized_h ? "normalized h over GF(q)*"
                    : spec.target == CensusTarget::x_full       ? "raw (h11,h12,h21,h22) over (GF(q)*)^4"
                    : spec.target == CensusTarget::ic_normalized ? "normalized (hbar11,hbar22,hbar33,hbar) over GF(q)^4"
                                                                 : "raw 3x3 gains over (GF(q)*)^9";
    auto nonzero = [&](SplitMix64& g) { return f.elem(u32(1 + g.below(q - 1))); };
    auto any = [&](SplitMix64& g) { return f.elem(u32(g.below(q))); };
    if (x) {
        std::vector<u64> c;
        if (spec.target == CensusTarget::x_normalized_h && spec.exhaustive) {
            c = detail::parallel_counts(q - 1, 2, workers, [&](u64 b, u64 e, std::vector<u64>& out) {
                for (u64 t = b; t < e; ++t) ++out[f.elem(u32(t + 1)).in_base_field() ? 1 : 0];
            });
        } else if (spec.target == CensusTarget::x_full && spec.exhaustive) {
            const u64 m = q - 1;
            c = detail::parallel_counts(m * m * m * m, 2, workers, [&](u64 b, u64 e, std::vector<u64>& out) {
                for (u64 t = b; t < e; ++t) {
                    Gfe h11 = f.elem(u32(1 + t % m)), h12 = f.elem(u32(1 + t / m % m));
                    Gfe h21 = f.elem(u32(1 + t / (m * m) % m)), h22 = f.elem(u32(1 + t / (m * m * m)));
                    ++out[(h12 * h21 / (h11 * h22)).in_base_field() ? 1 : 0];
                }
            });
        } else {
            c = detail::parallel_counts(spec.sample_count, 2, workers, [&](u64 b, u64 e, std::vector<u64>& out) {
                for (u64 t = b; t < e; ++t) {
                    SplitMix64 g(spec.seed, t);
                    Gfe h = spec.target == CensusTarget::x_normalized_h
                                ? nonzero(g)
                                : [&] {
                                      Gfe h11 = nonzero(g), h12 = nonzero(g), h21 = nonzero(g), h22 = nonzero(g);
                                      return h12 * h21 / (h11 * h22);
                                  }();
                    ++out[h.in_base_field() ? 1 : 0];
                }
            });
        }
        r.classes = {{"feasible", c[0]}, {"degenerate", c[1]}};
        r.total = spec.exhaustive ? census_universe(spec.p, spec.n, spec.target) : BigInt(spec.sample_count);
        if (spec.exhaustive) detail::compare(r, "degenerate_fraction", "degenerate", "==", degenerate_fraction_closed(spec.p, spec.n));
        return r;
    }
    std::array<u64, 7> c{};
    if (spec.target == CensusTarget::ic_normalized && spec.exhaustive) {
        c = detail::ic_normalized_exact(f, workers);
    } else if (spec.target == CensusTarget::ic_full && spec.exhaustive) {
        const u64 m = q - 1;
        u64 total = u64(census_universe(spec.p, spec.n, spec.target));
        auto v = detail::parallel_counts(total, 7, workers, [&](u64 b, u64 e, std::vector<u64>& out) {
            for (u64 t = b; t < e; ++t) {
                IC3Channel ch;
                ch.field = &f;
                u64 r0 = t;
                for (std::size_t k = 0; k < 9; ++k) {
                    ch.h[k / 3][k % 3] = f.elem(u32(1 + r0 % m));
                    r0 /= m;
                }
                ICNormalization nz = normalize_ic(ch);
                detail::add_slots(out, detail::ic_set_slots(ic_condition_sets(nz.hbar11, nz.hbar22, nz.hbar33, nz.hbar)));
            }
        });
        std::copy(v.begin(), v.end(), c.begin());
    } else {
        bool full = spec.target == CensusTarget::ic_full;
        auto v = detail::parallel_counts(spec.sample_count, 7, workers, [&](u64 b, u64 e, std::vector<u64>& out) {
            for (u64 t = b; t < e; ++t) {
                SplitMix64 g(spec.seed, t);
                unsigned bits = 0;
                if (full) {
                    IC3Channel ch;
                    ch.field = &f;
                    for (std::size_t k = 0; k < 9; ++k) ch.h[k / 3][k % 3] = nonzero(g);
                    ICNormalization nz = normalize_ic(ch);
                    bits = ic_condition_sets(nz.hbar11, nz.hbar22, nz.hbar33, nz.hbar);
                } else {
                    Gfe a = any(g), bb = any(g), cc = any(g), h = any(g);
                    bits = ic_condition_sets(a, bb, cc, h);
                }
                detail::add_slots(out, detail::ic_set_slots(bits));
            }
        });
        std::copy(v.begin(), v.end(), c.begin());
    }
    r.classes = {{"EigenCase", c[0]}, {"OddPowersCase", c[1]}, {"P2Case", c[2]}, {"Unclassified", c[3]}};
    r.condition_sets = {{"eigen_conditions", c[4]}, {"odd_conditions", c[5]}, {"p2_conditions", c[6]}};
    r.total = spec.exhaustive ? census_universe(spec.p, spec.n, spec.target) : BigInt(spec.sample_count);
    if (!spec.exhaustive) return r;
    const u32 p = spec.p;
    const int n = spec.n;
    if (spec.target == CensusTarget::ic_full) {
        if (n >= 2) detail::compare(r, "eigen_fraction_full", "eigen_conditions", "==", eigen_fraction_full(p, n));
        return r;
    }
    if (n >= 2) detail::compare(r, "eigen_fraction", "eigen_conditions", "==", eigen_fraction(p, n));
    if (n % 2 == 1 && n >= 3) {
        int l = (n - 1) / 2;
        if (n == 3) detail::compare(r, "odd_n3_bound", "odd_conditions", ">=", odd_n3_bound(p));
        detail::compare(r, "odd_bound", "odd_conditions", ">=", odd_bound(p, l));
        if (is_prime(u64(n))) detail::compare(r, "odd_prime_n_bound", "odd_conditions", ">=", odd_prime_n_bound(p, l));
    }
    if (n == 2 && p > 3) detail::compare(r, "p2_bound", "p2_conditions", ">=", p2_bound(p));
    return r;
}

inline std::string fraction_decimal(const Rational& r) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9f", rational_to_double(r));
    return buf;
}

// One row per class or condition set; comparison columns filled where a closed form applies.
inline std::string census_csv(const CensusReport& r) {
    std::string out = "target,p,n,kind,name,count,total,fraction,fraction_decimal,closed_form_name,relation,closed_form,pass\n";
    auto rows = [&](const std::vector<CensusCount>& list, const char* kind) {
        for (const auto& c : list) {
            Rational frac(BigInt(c.count), r.total);
            std::string head = std::string(census_target_name(r.spec.target)) + "," + std::to_string(r.spec.p) + "," +
                               std::to_string(r.spec.n) + "," + kind + "," + c.name + "," + std::to_string(c.count) + "," +
                               r.total.str() + "," + rational_string(frac) + "," + fraction_decimal(frac);
            bool any = false;
            for (const auto& cmp : r.comparisons)
                if (cmp.subject == c.name) {
                    out += head + "," + cmp.name + "," + cmp.relation + "," + rational_string(cmp.closed_form) + "," +
                           (cmp.pass ? "true" : "false") + "\n";
                    any = true;
                }
            if (!any) out += head + ",,,,\n";
        }
    };
    rows(r.classes, "class");
    rows(r.condition_sets, "condition_set");
    return out;
}

} // namespace gfalign

#endif // GFALIGN_CENSUS_HPP
