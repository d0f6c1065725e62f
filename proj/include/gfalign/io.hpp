#ifndef GFALIGN_IO_HPP
#define GFALIGN_IO_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "gfalign/census.hpp"
#include "gfalign/error.hpp"
#include "gfalign/gf.hpp"
#include "gfalign/ic3.hpp"
#include "gfalign/rational.hpp"
#include "gfalign/xch.hpp"

namespace gfalign {

using Json = nlohmann::ordered_json;

namespace detail {

inline const Json& need(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw Error(Errc::ParseError, std::string("missing key '") + key + "'");
    return j.at(key);
}

template <class T>
T need_as(const Json& j, const char* key) {
    const Json& v = need(j, key);
    try {
        return v.get<T>();
    } catch (const nlohmann::json::exception&) {
        throw Error(Errc::ParseError, std::string("bad value for '") + key + "'");
    }
}

inline u32 need_label(const Json& v, const Field& f) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        throw Error(Errc::ParseError, "field labels must be non-negative integers");
    unsigned long long x = v.get<unsigned long long>();
    if (x >= f.order()) throw Error(Errc::ParseError, "label " + std::to_string(x) + " outside " + f.name());
    return u32(x);
}

inline Json label_columns(const GfMatrix& m) {
    Json cols = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) {
        Json col = Json::array();
        for (std::size_t r = 0; r < m.rows(); ++r) col.push_back(m.label(r, c));
        cols.push_back(std::move(col));
    }
    return cols;
}

inline GfMatrix matrix_from_columns(const Json& cols, const Field& f, int m) {
    if (!cols.is_array()) throw Error(Errc::ParseError, "precoder must be a list of columns");
    GfMatrix out(f, std::size_t(m), cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        const Json& col = cols[c];
        if (!col.is_array() || col.size() != std::size_t(m))
            throw Error(Errc::ParseError, "precoder column length must equal m");
        for (std::size_t r = 0; r < std::size_t(m); ++r) out.set_label(r, c, need_label(col[r], f));
    }
    return out;
}

template <std::size_t N>
Json sizes_json(const std::array<std::size_t, N>& a) {
    Json out = Json::array();
    for (auto v : a) out.push_back(v);
    return out;
}

template <std::size_t N>
std::array<std::size_t, N> sizes_from(const Json& j, const char* key) {
    auto v = need_as<std::vector<std::size_t>>(j, key);
    if (v.size() != N) throw Error(Errc::ParseError, std::string("'") + key + "' has the wrong length");
    std::array<std::size_t, N> a{};
    for (std::size_t i = 0; i < N; ++i) a[i] = v[i];
    return a;
}

inline Json rational_or_null(const std::optional<Rational>& r) {
    return r ? Json(rational_string(*r)) : Json(nullptr);
}

} // namespace detail

namespace detail {

inline bool flat_array(const Json& j) {
    for (const auto& e : j) {
        if (e.is_object()) return false;
        if (e.is_array())
            for (const auto& x : e)
                if (x.is_structured()) return false;
    }
    return true;
}

inline void write_json(const Json& j, std::string& out, int indent) {
    std::string pad(std::size_t(indent + 2), ' ');
    if (j.is_object() && !j.empty()) {
        out += "{\n";
        std::size_t k = 0;
        for (auto it = j.begin(); it != j.end(); ++it, ++k) {
            out += pad + Json(it.key()).dump() + ": ";
            write_json(it.value(), out, indent + 2);
            out += k + 1 < j.size() ? ",\n" : "\n";
        }
        out += std::string(std::size_t(indent), ' ') + "}";
    } else if (j.is_array() && !j.empty() && !flat_array(j)) {
        out += "[\n";
        for (std::size_t k = 0; k < j.size(); ++k) {
            out += pad;
            write_json(j[k], out, indent + 2);
            out += k + 1 < j.size() ? ",\n" : "\n";
        }
        out += std::string(std::size_t(indent), ' ') + "]";
    } else {
        out += j.dump();
    }
}

} // namespace detail

// Indented JSON with label vectors and matrices kept on one line.
inline std::string to_text(const Json& j) {
    std::string out;
    detail::write_json(j, out, 0);
    return out + "\n";
}

// Field header shared by every report: p, n, modulus digits low-to-high and its text.
inline Json field_json(const Field& f) {
    Json j;
    j["p"] = f.p();
    j["n"] = f.n();
    Json mod = Json::array();
    for (int i = 0; i <= f.n(); ++i) mod.push_back(f.modulus()[std::size_t(i)]);
    j["modulus"] = mod;
    j["modulus_text"] = f.modulus().to_string();
    return j;
}

inline FieldPtr field_from_json(const Json& j) {
    long long p = detail::need_as<long long>(j, "p");
    long long n = detail::need_as<long long>(j, "n");
    if (p < 2 || p > 0xFFFFFFFFLL) throw Error(Errc::NotPrime, std::to_string(p) + " is not prime");
    if (n < 1 || n > 64) throw Error(Errc::InvalidArgument, "degree " + std::to_string(n) + " out of range");
    if (!j.contains("modulus") || j.at("modulus").is_null()) return make_ctx(u32(p), int(n));
    auto digits = detail::need_as<std::vector<long long>>(j, "modulus");
    std::vector<u32> c;
    for (long long d : digits) {
        if (d < 0 || d >= p) throw Error(Errc::ParseError, "modulus digit outside [0,p)");
        c.push_back(u32(d));
    }
    return make_ctx(u32(p), int(n), Poly(c));
}

// Parsed channel file: the field is owned here so channel views stay valid.
struct ChannelInput {
    FieldPtr field;
    std::vector<std::vector<u32>> matrix;
};

inline ChannelInput channel_from_json(const Json& j, std::size_t size) {
    ChannelInput in;
    in.field = field_from_json(j);
    const Json& m = detail::need(j, "matrix");
    if (!m.is_array() || m.size() != size)
        throw Error(Errc::ParseError, "matrix must have " + std::to_string(size) + " rows");
    for (const auto& row : m) {
        if (!row.is_array() || row.size() != size)
            throw Error(Errc::ParseError, "matrix rows must have " + std::to_string(size) + " entries");
        std::vector<u32> r;
        for (const auto& v : row) r.push_back(detail::need_label(v, *in.field));
        in.matrix.push_back(std::move(r));
    }
    return in;
}

inline Json parse_json_text(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::ParseError, e.what());
    }
}

inline XChannel to_xchannel(const ChannelInput& in) {
    std::array<std::array<u32, 2>, 2> l{};
    for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t i = 0; i < 2; ++i) l[j][i] = in.matrix.at(j).at(i);
    return make_xchannel(*in.field, l);
}

inline IC3Channel to_ic3channel(const ChannelInput& in) {
    std::array<std::array<u32, 3>, 3> l{};
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t i = 0; i < 3; ++i) l[j][i] = in.matrix.at(j).at(i);
    return make_ic3channel(*in.field, l);
}

template <std::size_t N>
Json matrix_json(const std::array<std::array<Gfe, N>, N>& h) {
    Json m = Json::array();
    for (const auto& row : h) {
        Json r = Json::array();
        for (const auto& g : row) r.push_back(g.label());
        m.push_back(std::move(r));
    }
    return m;
}

template <std::size_t N>
Json channel_json(const Field& f, const std::array<std::array<Gfe, N>, N>& h) {
    Json j = field_json(f);
    j["matrix"] = matrix_json(h);
    return j;
}

// X channel.

inline Json xscheme_json(const XScheme& s, const XChannel& ch) {
    Json j = channel_json(*s.field, ch.h);
    j["kind"] = "xch_scheme";
    j["mode"] = xmode_name(s.mode);
    j["m"] = s.m;
    j["messages"] = Json::array();
    for (auto name : kXMessageNames) j["messages"].push_back(name);
    j["streams"] = s.streams;
    j["h"] = s.h ? Json(s.h->label()) : Json(nullptr);
    j["zero_case"] = s.zero_case;
    Json pre = Json::array();
    for (const auto& v : s.precoders) pre.push_back(detail::label_columns(v));
    j["precoders"] = pre;
    j["certificates"] = {{"rank_S1", s.cert.rank_S1},
                         {"rank_S2", s.cert.rank_S2},
                         {"aligned_dims", detail::sizes_json(s.cert.aligned_dims)}};
    j["sum_rate"] = rational_string(s.sum_rate);
    return j;
}

inline XScheme xscheme_from_json(const Json& j, const Field& f) {
    XScheme s;
    s.field = &f;
    s.mode = parse_xmode(detail::need_as<std::string>(j, "mode"));
    s.m = detail::need_as<int>(j, "m");
    if (s.m < 1 || s.m > 64) throw Error(Errc::ParseError, "m out of range");
    auto streams = detail::need_as<std::vector<int>>(j, "streams");
    if (streams.size() != 4) throw Error(Errc::ParseError, "X scheme needs four stream counts");
    const Json& h = detail::need(j, "h");
    if (!h.is_null()) s.h = f.elem(detail::need_label(h, f));
    if (j.contains("zero_case")) s.zero_case = detail::need_as<int>(j, "zero_case");
    const Json& pre = detail::need(j, "precoders");
    if (!pre.is_array() || pre.size() != 4) throw Error(Errc::ParseError, "X scheme needs four precoders");
    for (std::size_t k = 0; k < 4; ++k) {
        s.streams[k] = streams[k];
        s.precoders[k] = detail::matrix_from_columns(pre[k], f, s.m);
    }
    const Json& cert = detail::need(j, "certificates");
    s.cert.rank_S1 = detail::need_as<std::size_t>(cert, "rank_S1");
    s.cert.rank_S2 = detail::need_as<std::size_t>(cert, "rank_S2");
    s.cert.aligned_dims = detail::sizes_from<2>(cert, "aligned_dims");
    s.sum_rate = parse_rational(detail::need_as<std::string>(j, "sum_rate"));
    return s;
}

inline Json xclassification_json(const XChannel& ch) {
    Json j;
    if (!ch.fully_connected()) {
        XZeroReport z = classify_zero(ch);
        j["C"] = z.C;
        j["C_linear"] = z.C_linear;
        j["case"] = z.case_id;
    } else {
        XNormalization nz = normalize(ch);
        bool ok = feasible(nz.h);
        j["C_linear"] = ok ? "4/3" : "1";
        j["case"] = "fully_connected";
        j["h"] = nz.h.label();
        j["h_poly"] = nz.h.to_poly_string();
        j["feasible"] = ok;
        j["source_scale"] = {nz.source_scale[0].label(), nz.source_scale[1].label()};
        j["dest_scale"] = {nz.dest_scale[0].label(), nz.dest_scale[1].label()};
    }
    j.update(channel_json(*ch.field, ch.h));
    return j;
}

inline Json xverify_json(const XVerifyReport& r) {
    Json j;
    j["pass"] = r.pass;
    j["failure"] = r.failure;
    j["rank_S1"] = r.rank_S1;
    j["rank_S2"] = r.rank_S2;
    j["desired_dims"] = detail::sizes_json(r.desired_dims);
    j["aligned_dims"] = detail::sizes_json(r.aligned_dims);
    j["sum_rate"] = rational_string(r.sum_rate);
    return j;
}

// Three-user interference channel.

inline Json condition_json(const ICCondition& c) {
    Json j;
    j["family"] = c.family;
    j["name"] = c.name;
    j["elements"] = c.elements;
    j["want"] = c.want_independent ? "independent" : "dependent";
    j["pass"] = c.pass;
    j["witness"] = c.witness.empty() ? Json(nullptr) : Json(c.witness);
    return j;
}

inline Json conditions_json(const std::vector<ICCondition>& cs) {
    Json out = Json::array();
    for (const auto& c : cs) out.push_back(condition_json(c));
    return out;
}

inline Json hbar_json(const std::array<Gfe, 4>& hb) {
    return {{"hbar11", hb[0].label()}, {"hbar22", hb[1].label()}, {"hbar33", hb[2].label()}, {"hbar", hb[3].label()}};
}

inline Json iczero_json(const ICZeroReport& z) {
    Json j;
    j["case"] = z.case_id;
    j["direct_zeros"] = z.direct_zeros;
    j["cross_zeros"] = z.cross_zeros;
    j["C"] = detail::rational_or_null(z.C);
    j["C_linear"] = rational_string(z.C_linear);
    j["structure"] = z.structure ? Json(std::string(1, z.structure)) : Json(nullptr);
    j["canonical"] = z.canonical;
    j["perm"] = z.perm;
    j["users"] = z.users;
    j["open_case"] = z.open_case;
    j["conditions"] = conditions_json(z.conditions);
    return j;
}

inline Json icclassification_json(const ICClassification& c, const IC3Channel& ch) {
    Json j;
    j["class"] = icclass_name(c.cls);
    if (ch.fully_connected()) {
        ICNormalization n = normalize_ic(ch);
        j["hbar"] = hbar_json(detail::hbar_tuple(n));
    } else {
        j["hbar"] = nullptr;
    }
    j["conditions"] = conditions_json(c.conditions);
    j["failed"] = c.failed;
    j["zero"] = c.zero ? iczero_json(*c.zero) : Json(nullptr);
    j["pattern"] = ch.incidence();
    j.update(channel_json(*ch.field, ch.h));
    return j;
}

inline Json icscheme_json(const ICScheme& s, const IC3Channel& ch) {
    Json j = channel_json(*s.field, ch.h);
    j["kind"] = "ic3_scheme";
    j["mode"] = icmode_name(s.mode);
    j["m"] = s.m;
    j["streams"] = s.streams;
    j["hbar"] = s.hbar ? hbar_json(*s.hbar) : Json(nullptr);
    j["pattern"] = s.pattern;
    j["zero_case"] = s.zero_case;
    j["structure"] = s.structure ? Json(std::string(1, s.structure)) : Json(nullptr);
    Json pre = Json::array();
    for (const auto& v : s.precoders) pre.push_back(detail::label_columns(v));
    j["precoders"] = pre;
    j["certificates"] = {{"rank_S1", s.cert.rank_S[0]},
                         {"rank_S2", s.cert.rank_S[1]},
                         {"rank_S3", s.cert.rank_S[2]},
                         {"desired_dims", detail::sizes_json(s.cert.desired_dims)},
                         {"aligned_dims", detail::sizes_json(s.cert.aligned_dims)}};
    j["sum_rate"] = rational_string(s.sum_rate);
    j["notes"] = s.notes;
    return j;
}

inline ICScheme icscheme_from_json(const Json& j, const Field& f) {
    ICScheme s;
    s.field = &f;
    s.mode = parse_icmode(detail::need_as<std::string>(j, "mode"));
    s.m = detail::need_as<int>(j, "m");
    if (s.m < 1 || s.m > 64) throw Error(Errc::ParseError, "m out of range");
    auto streams = detail::need_as<std::vector<int>>(j, "streams");
    if (streams.size() != 3) throw Error(Errc::ParseError, "IC scheme needs three stream counts");
    const Json& hb = detail::need(j, "hbar");
    if (!hb.is_null()) {
        std::array<Gfe, 4> t;
        const char* keys[] = {"hbar11", "hbar22", "hbar33", "hbar"};
        for (std::size_t k = 0; k < 4; ++k) t[k] = f.elem(detail::need_label(detail::need(hb, keys[k]), f));
        s.hbar = t;
    }
    if (j.contains("pattern")) s.pattern = detail::need_as<std::string>(j, "pattern");
    if (j.contains("zero_case")) s.zero_case = detail::need_as<int>(j, "zero_case");
    if (j.contains("structure") && !j.at("structure").is_null()) {
        auto st = detail::need_as<std::string>(j, "structure");
        if (st.size() != 1) throw Error(Errc::ParseError, "structure must be one letter");
        s.structure = st[0];
    }
    const Json& pre = detail::need(j, "precoders");
    if (!pre.is_array() || pre.size() != 3) throw Error(Errc::ParseError, "IC scheme needs three precoders");
    for (std::size_t k = 0; k < 3; ++k) {
        s.streams[k] = streams[k];
        s.precoders[k] = detail::matrix_from_columns(pre[k], f, s.m);
    }
    const Json& cert = detail::need(j, "certificates");
    s.cert.rank_S = {detail::need_as<std::size_t>(cert, "rank_S1"), detail::need_as<std::size_t>(cert, "rank_S2"),
                     detail::need_as<std::size_t>(cert, "rank_S3")};
    s.cert.desired_dims = detail::sizes_from<3>(cert, "desired_dims");
    s.cert.aligned_dims = detail::sizes_from<3>(cert, "aligned_dims");
    s.sum_rate = parse_rational(detail::need_as<std::string>(j, "sum_rate"));
    if (j.contains("notes")) s.notes = detail::need_as<std::vector<std::string>>(j, "notes");
    return s;
}

inline Json icverify_json(const ICVerifyReport& r) {
    Json j;
    j["pass"] = r.pass;
    j["failure"] = r.failure;
    j["rank_S1"] = r.rank_S[0];
    j["rank_S2"] = r.rank_S[1];
    j["rank_S3"] = r.rank_S[2];
    j["desired_dims"] = detail::sizes_json(r.desired_dims);
    j["aligned_dims"] = detail::sizes_json(r.aligned_dims);
    j["sum_rate"] = rational_string(r.sum_rate);
    return j;
}

// Census.

inline Json census_json(const CensusReport& r) {
    Json j;
    j["target"] = census_target_name(r.spec.target);
    j["p"] = r.spec.p;
    j["n"] = r.spec.n;
    j["modulus_text"] = r.modulus;
    j["coordinates"] = r.coordinates;
    j["mode"] = r.spec.exhaustive ? "exhaustive" : "sample";
    if (!r.spec.exhaustive) {
        j["sample_count"] = r.spec.sample_count;
        j["seed"] = r.spec.seed;
    }
    j["total"] = r.total.str();
    auto counts = [&](const std::vector<CensusCount>& list) {
        Json out = Json::array();
        for (const auto& c : list) {
            Rational frac(BigInt(c.count), r.total);
            out.push_back({{"name", c.name},
                           {"count", c.count},
                           {"fraction", rational_string(frac)},
                           {"fraction_decimal", fraction_decimal(frac)}});
        }
        return out;
    };
    j["classes"] = counts(r.classes);
    j["condition_sets"] = counts(r.condition_sets);
    Json cmp = Json::array();
    for (const auto& c : r.comparisons)
        cmp.push_back({{"name", c.name},
                       {"subject", c.subject},
                       {"relation", c.relation},
                       {"closed_form", rational_string(c.closed_form)},
                       {"measured", rational_string(c.measured)},
                       {"pass", c.pass}});
    j["comparisons"] = cmp;
    j["pass"] = r.all_pass();
    return j;
}

// Field inspection.

inline Json element_json(const Gfe& a) {
    const Field& f = a.field();
    Json j;
    j["label"] = a.label();
    std::vector<u32> d = a.digits();
    j["digits"] = Json(std::vector<u32>(d.rbegin(), d.rend()));
    j["poly"] = a.to_poly_string();
    MatFp m = rep_matrix(a);
    Json rows = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    j["matrix"] = rows;
    Poly mp = minimal_poly(a);
    j["minimal_polynomial"] = mp.to_string();
    j["minimal_polynomial_coeffs"] = mp.coeffs;
    j["in_base_field"] = a.in_base_field();
    Json subs = Json::array();
    u64 pd = 1;
    for (int d = 1; d <= f.n(); ++d) {
        pd *= f.p();
        if (f.n() % d == 0 && a.pow(pd) == a) subs.push_back(d);
    }
    j["subfield_degrees"] = subs;
    return j;
}

} // namespace gfalign

#endif // GFALIGN_IO_HPP
