#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gfalign/census.hpp"
#include "gfalign/error.hpp"
#include "gfalign/gf.hpp"
#include "gfalign/ic3.hpp"
#include "gfalign/io.hpp"
#include "gfalign/xch.hpp"

using namespace gfalign;

namespace {

// Exit codes.
constexpr int kOk = 0;
constexpr int kOther = 1;
constexpr int kUsage = 2;
constexpr int kInfeasible = 3;
constexpr int kConditionsNotMet = 4;
constexpr int kTooLarge = 5;
constexpr int kMismatch = 6;

int exit_code_for(Errc e) {
    switch (e) {
    case Errc::NotPrime:
    case Errc::DegreeTooLarge:
    case Errc::FieldTooLarge:
    case Errc::InvalidArgument:
    case Errc::NonMonic:
    case Errc::NotIrreducible:
    case Errc::ParseError:
    case Errc::DimensionMismatch:
    case Errc::CtxMismatch: return kUsage;
    case Errc::Infeasible:
    case Errc::ZeroH: return kInfeasible;
    case Errc::ConditionsNotMet:
    case Errc::FullyConnected: return kConditionsNotMet;
    case Errc::TooLargeForExhaustive: return kTooLarge;
    case Errc::VerificationFailed:
    case Errc::DecodeAmbiguous: return kMismatch;
    default: return kOther;
    }
}

struct IoOptions {
    std::string in;
    std::string inline_json;
    long long p = 0;
    long long n = 0;
    std::string modulus;
    std::string matrix;
    std::string out;
    std::string format = "json";
    std::string channel;
    std::string mode = "auto";
    std::string messages;
    unsigned long long seed = 0;
};

std::string read_file(const std::string& path) {
    if (path == "-") {
        std::stringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(Errc::ParseError, "cannot open '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void emit(const std::string& text, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw Error(Errc::InvalidArgument, "cannot write '" + out + "'");
    f << text;
}

void emit_json(const Json& j, const std::string& out) { emit(to_text(j), out); }

std::vector<long long> parse_int_list(const std::string& s, char sep) {
    std::vector<long long> out;
    std::string tok;
    std::stringstream ss(s);
    while (std::getline(ss, tok, sep)) {
        std::size_t a = tok.find_first_not_of(" \t"), b = tok.find_last_not_of(" \t");
        if (a == std::string::npos) throw Error(Errc::ParseError, "empty entry in '" + s + "'");
        tok = tok.substr(a, b - a + 1);
        try {
            std::size_t used = 0;
            long long v = std::stoll(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            out.push_back(v);
        } catch (const std::exception&) {
            throw Error(Errc::ParseError, "bad integer '" + tok + "'");
        }
    }
    return out;
}

// Input document: a file, inline JSON, or --p/--n/--matrix flags.
Json load_input(const IoOptions& o) {
    int sources = int(!o.in.empty()) + int(!o.inline_json.empty()) + int(!o.matrix.empty());
    if (sources != 1) throw Error(Errc::ParseError, "give exactly one of --in, --json, --matrix");
    if (!o.in.empty()) return parse_json_text(read_file(o.in));
    if (!o.inline_json.empty()) return parse_json_text(o.inline_json);
    if (o.p == 0 || o.n == 0) throw Error(Errc::ParseError, "--matrix needs --p and --n");
    Json j;
    j["p"] = o.p;
    j["n"] = o.n;
    if (!o.modulus.empty()) j["modulus"] = parse_int_list(o.modulus, ',');
    Json m = Json::array();
    std::stringstream rows(o.matrix);
    std::string row;
    while (std::getline(rows, row, ';')) m.push_back(parse_int_list(row, ','));
    j["matrix"] = m;
    return j;
}

void require_json_format(const IoOptions& o) {
    if (o.format != "json") throw Error(Errc::ParseError, "only --format json is available for this command");
}

// Per-message F_p symbols from a JSON file or random:SEED.
std::vector<std::vector<u32>> load_messages(const std::string& spec, const std::vector<int>& lengths, u32 p) {
    std::vector<std::vector<u32>> out(lengths.size());
    if (spec.rfind("random:", 0) == 0) {
        auto seed = parse_int_list(spec.substr(7), ',');
        if (seed.size() != 1 || seed[0] < 0) throw Error(Errc::ParseError, "random:SEED needs one non-negative seed");
        for (std::size_t k = 0; k < lengths.size(); ++k) {
            SplitMix64 g(u64(seed[0]), k);
            for (int c = 0; c < lengths[k]; ++c) out[k].push_back(u32(g.below(p)));
        }
        return out;
    }
    Json j = parse_json_text(read_file(spec));
    if (j.is_object()) j = detail::need(j, "messages");
    if (!j.is_array() || j.size() != lengths.size())
        throw Error(Errc::ParseError, "messages file needs " + std::to_string(lengths.size()) + " symbol lists");
    for (std::size_t k = 0; k < lengths.size(); ++k) {
        if (!j[k].is_array() || j[k].size() != std::size_t(lengths[k]))
            throw Error(Errc::ParseError, "message " + std::to_string(k + 1) + " needs " + std::to_string(lengths[k]) +
                                              " symbols");
        for (const auto& v : j[k]) {
            if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<long long>() >= (long long)p)
                throw Error(Errc::ParseError, "message symbols must lie in [0,p)");
            out[k].push_back(v.get<u32>());
        }
    }
    return out;
}

Json simulation_json(const std::vector<std::string>& names, const std::vector<std::vector<u32>>& sent,
                     const std::vector<std::vector<u32>>& decoded, bool match) {
    Json j;
    Json msgs = Json::array();
    for (std::size_t k = 0; k < names.size(); ++k)
        msgs.push_back({{"name", names[k]}, {"sent", sent[k]}, {"decoded", decoded[k]}});
    j["messages"] = msgs;
    j["match"] = match;
    return j;
}

// field

int cmd_field(long long p, long long n, const std::string& element, const std::string& modulus, const std::string& out) {
    if (p < 2 || p > 0xFFFFFFFFLL) throw Error(Errc::NotPrime, std::to_string(p) + " is not prime");
    if (n < 1 || n > 64) throw Error(Errc::InvalidArgument, "degree out of range");
    FieldPtr f;
    if (modulus.empty()) {
        f = make_ctx(u32(p), int(n));
    } else {
        std::vector<u32> c;
        for (long long d : parse_int_list(modulus, ',')) {
            if (d < 0 || d >= p) throw Error(Errc::ParseError, "modulus digit outside [0,p)");
            c.push_back(u32(d));
        }
        f = make_ctx(u32(p), int(n), Poly(c));
    }
    Json j = field_json(*f);
    j["order"] = f->order();
    if (!element.empty()) j["element"] = element_json(parse_element(*f, element));
    emit_json(j, out);
    return kOk;
}

// xch

XModeRequest x_request(const std::string& m) {
    if (m == "auto") return XModeRequest::automatic;
    if (m == "scalar_p3") return XModeRequest::scalar_p3;
    if (m == "altproof_p3") return XModeRequest::altproof_p3;
    if (m == "ext_p2") return XModeRequest::ext_p2;
    if (m == "general_pn") return XModeRequest::general_pn;
    throw Error(Errc::ParseError, "unknown X mode '" + m + "'");
}

int cmd_xch(const std::string& action, const IoOptions& o) {
    require_json_format(o);
    Json doc = load_input(o);
    ChannelInput in = channel_from_json(doc, 2);
    XChannel ch = to_xchannel(in);
    if (action == "classify") {
        emit_json(xclassification_json(ch), o.out);
        return kOk;
    }
    if (action == "construct") {
        XScheme s = construct_x(ch, x_request(o.mode));
        XVerifyReport v = verify_x(s, ch);
        emit_json(xscheme_json(s, ch), o.out);
        if (!v.pass) std::cerr << "verification failed: " << v.failure << "\n";
        return v.pass ? kOk : kMismatch;
    }
    // verify and simulate accept a scheme document or, for simulate, a bare channel.
    std::optional<ChannelInput> other;
    XChannel target = ch;
    if (!o.channel.empty()) {
        other = channel_from_json(parse_json_text(read_file(o.channel)), 2);
        if (!other->field->same_as(*in.field)) throw Error(Errc::CtxMismatch, "channel and scheme use different fields");
        target = to_xchannel(*other);
        target.field = in.field.get();
        for (auto& row : target.h)
            for (auto& g : row) g = in.field->elem(g.label());
    }
    bool has_scheme = doc.contains("precoders");
    if (action == "verify") {
        if (!has_scheme) throw Error(Errc::ParseError, "verify needs a scheme document");
        XScheme s = xscheme_from_json(doc, *in.field);
        XVerifyReport v = verify_x(s, target);
        emit_json(xverify_json(v), o.out);
        return v.pass ? kOk : kMismatch;
    }
    if (action == "simulate") {
        if (o.messages.empty()) throw Error(Errc::ParseError, "simulate needs --messages FILE or random:SEED");
        XScheme s = has_scheme ? xscheme_from_json(doc, *in.field) : construct_x(target, x_request(o.mode));
        XVerifyReport v = verify_x(s, target);
        if (!v.pass) {
            std::cerr << "verification failed: " << v.failure << "\n";
            return kMismatch;
        }
        std::vector<int> lengths(s.streams.begin(), s.streams.end());
        auto sent = load_messages(o.messages, lengths, in.field->p());
        std::array<std::vector<u32>, 4> msgs{sent[0], sent[1], sent[2], sent[3]};
        auto dec = simulate_x(s, target, msgs);
        std::vector<std::vector<u32>> decoded(dec.begin(), dec.end());
        bool match = decoded == sent;
        std::vector<std::string> names(kXMessageNames.begin(), kXMessageNames.end());
        Json j = simulation_json(names, sent, decoded, match);
        j["sum_rate"] = rational_string(s.sum_rate);
        emit_json(j, o.out);
        return match ? kOk : kMismatch;
    }
    throw Error(Errc::ParseError, "unknown action '" + action + "'");
}

// ic3

ICModeRequest ic_request(const std::string& m) {
    if (m == "auto") return ICModeRequest::automatic;
    if (m == "eigen") return ICModeRequest::eigen;
    if (m == "odd_powers") return ICModeRequest::odd_powers;
    if (m == "ext5_p2") return ICModeRequest::ext5_p2;
    if (m == "zero_structure") return ICModeRequest::zero_structure;
    if (m == "degenerate_rate1") return ICModeRequest::degenerate_rate1;
    throw Error(Errc::ParseError, "unknown IC mode '" + m + "'");
}

int cmd_ic3(const std::string& action, const IoOptions& o) {
    require_json_format(o);
    Json doc = load_input(o);
    ChannelInput in = channel_from_json(doc, 3);
    IC3Channel ch = to_ic3channel(in);
    if (action == "classify") {
        emit_json(icclassification_json(classify_ic(ch), ch), o.out);
        return kOk;
    }
    if (action == "construct") {
        ICScheme s = construct_ic(ch, ic_request(o.mode));
        ICVerifyReport v = verify_ic(s, ch);
        emit_json(icscheme_json(s, ch), o.out);
        if (!v.pass) std::cerr << "verification failed: " << v.failure << "\n";
        return v.pass ? kOk : kMismatch;
    }
    IC3Channel target = ch;
    if (!o.channel.empty()) {
        ChannelInput other = channel_from_json(parse_json_text(read_file(o.channel)), 3);
        if (!other.field->same_as(*in.field)) throw Error(Errc::CtxMismatch, "channel and scheme use different fields");
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t i = 0; i < 3; ++i) target.h[j][i] = in.field->elem(other.matrix[j][i]);
    }
    bool has_scheme = doc.contains("precoders");
    if (action == "verify") {
        if (!has_scheme) throw Error(Errc::ParseError, "verify needs a scheme document");
        ICScheme s = icscheme_from_json(doc, *in.field);
        ICVerifyReport v = verify_ic(s, target);
        emit_json(icverify_json(v), o.out);
        return v.pass ? kOk : kMismatch;
    }
    if (action == "simulate") {
        if (o.messages.empty()) throw Error(Errc::ParseError, "simulate needs --messages FILE or random:SEED");
        ICScheme s = has_scheme ? icscheme_from_json(doc, *in.field) : construct_ic(target, ic_request(o.mode));
        ICVerifyReport v = verify_ic(s, target);
        if (!v.pass) {
            std::cerr << "verification failed: " << v.failure << "\n";
            return kMismatch;
        }
        std::vector<int> lengths(s.streams.begin(), s.streams.end());
        auto sent = load_messages(o.messages, lengths, in.field->p());
        std::array<std::vector<u32>, 3> msgs{sent[0], sent[1], sent[2]};
        auto dec = simulate_ic(s, target, msgs);
        std::vector<std::vector<u32>> decoded(dec.begin(), dec.end());
        bool match = decoded == sent;
        Json j = simulation_json({"W1", "W2", "W3"}, sent, decoded, match);
        j["sum_rate"] = rational_string(s.sum_rate);
        emit_json(j, o.out);
        return match ? kOk : kMismatch;
    }
    throw Error(Errc::ParseError, "unknown action '" + action + "'");
}

// census

struct CensusOptions {
    std::string target;
    bool full = false;
    long long p = 0;
    long long n = 0;
    bool exhaustive = false;
    unsigned long long sample = 0;
    unsigned long long seed = 0;
    unsigned long long threshold = kDefaultThreshold;
    unsigned threads = 0;
    bool check = false;
    std::string format = "json";
    std::string out;
    std::string csv_out;
    std::string json_out;
};

int cmd_census(const CensusOptions& o) {
    CensusSpec spec;
    if (o.target == "x")
        spec.target = o.full ? CensusTarget::x_full : CensusTarget::x_normalized_h;
    else if (o.target == "ic3")
        spec.target = o.full ? CensusTarget::ic_full : CensusTarget::ic_normalized;
    else
        spec.target = parse_census_target(o.target);
    if (o.p < 2 || o.p > 0xFFFFFFFFLL) throw Error(Errc::NotPrime, std::to_string(o.p) + " is not prime");
    if (o.n < 1 || o.n > 64) throw Error(Errc::InvalidArgument, "n out of range");
    if (o.exhaustive && o.sample > 0) throw Error(Errc::ParseError, "--exhaustive and --sample are exclusive");
    spec.p = u32(o.p);
    spec.n = int(o.n);
    spec.exhaustive = o.sample == 0;
    spec.sample_count = o.sample;
    spec.seed = o.seed;
    spec.threshold = o.threshold;
    spec.threads = o.threads;
    if (o.format != "json" && o.format != "csv") throw Error(Errc::ParseError, "--format must be json or csv");
    CensusReport r = run_census(spec);
    std::string csv = census_csv(r);
    std::string json = to_text(census_json(r));
    if (!o.csv_out.empty()) emit(csv, o.csv_out);
    if (!o.json_out.empty()) emit(json, o.json_out);
    emit(o.format == "csv" ? csv : json, o.out);
    if (o.check && !r.all_pass()) {
        for (const auto& c : r.comparisons)
            if (!c.pass)
                std::cerr << "check failed: " << c.name << " " << rational_string(c.measured) << " " << c.relation << " "
                          << rational_string(c.closed_form) << "\n";
        return kMismatch;
    }
    return kOk;
}

void add_io_options(CLI::App* app, IoOptions& o, bool modes) {
    app->add_option("--in", o.in, "input JSON file ('-' for stdin)");
    app->add_option("--json", o.inline_json, "inline input JSON");
    app->add_option("--p", o.p, "characteristic, with --matrix");
    app->add_option("--n", o.n, "extension degree, with --matrix");
    app->add_option("--modulus", o.modulus, "modulus digits low-to-high, comma separated");
    app->add_option("--matrix", o.matrix, "gain labels, rows separated by ';'");
    app->add_option("--out", o.out, "output file (default stdout)");
    app->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv"}));
    app->add_option("--channel", o.channel, "channel file to verify or simulate against");
    app->add_option("--messages", o.messages, "message file or random:SEED");
    app->add_option("--seed", o.seed, "seed (default 0)");
    if (modes) app->add_option("--mode", o.mode, "construction mode (default auto)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-field interference alignment toolkit"};
    app.require_subcommand(1, 1);

    long long fp = 0, fn = 0;
    std::string element, fmod, fout;
    auto* field = app.add_subcommand("field", "field modulus and element inspection");
    field->add_option("p", fp, "characteristic")->required();
    field->add_option("n", fn, "extension degree")->required();
    field->add_option("element", element, "label, [digits] or polynomial in s");
    field->add_option("--modulus", fmod, "modulus digits low-to-high, comma separated");
    field->add_option("--out", fout, "output file (default stdout)");

    const std::vector<std::string> actions{"classify", "construct", "verify", "simulate"};
    std::string xaction, iaction;
    IoOptions xo, io;
    auto* xch = app.add_subcommand("xch", "two-user X channel");
    xch->add_option("action", xaction, "classify|construct|verify|simulate")->required()->check(CLI::IsMember(actions));
    add_io_options(xch, xo, true);
    auto* ic3 = app.add_subcommand("ic3", "three-user interference channel");
    ic3->add_option("action", iaction, "classify|construct|verify|simulate")->required()->check(CLI::IsMember(actions));
    add_io_options(ic3, io, true);

    CensusOptions co;
    auto* census = app.add_subcommand("census", "feasibility census");
    census->add_option("target", co.target, "x, ic3, or x_normalized_h|x_full|ic_normalized|ic_full")->required();
    census->add_flag("--full", co.full, "raw channel coordinates for x and ic3");
    census->add_option("--p", co.p, "characteristic")->required();
    census->add_option("--n", co.n, "extension degree")->required();
    census->add_flag("--exhaustive", co.exhaustive, "enumerate every instance (default)");
    census->add_option("--sample", co.sample, "sample N instances instead")->check(CLI::PositiveNumber);
    census->add_option("--seed", co.seed, "sampling seed (default 0)");
    census->add_option("--threshold", co.threshold, "exhaustive cutoff on instance count");
    census->add_option("--threads", co.threads, "worker threads (default: hardware)");
    census->add_flag("--check", co.check, "exit 6 unless every closed-form comparison holds");
    census->add_option("--format", co.format, "stdout format")->check(CLI::IsMember({"json", "csv"}));
    census->add_option("--out", co.out, "output file (default stdout)");
    census->add_option("--csv", co.csv_out, "also write CSV here");
    census->add_option("--json-out", co.json_out, "also write JSON here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (field->parsed()) return cmd_field(fp, fn, element, fmod, fout);
        if (xch->parsed()) return cmd_xch(xaction, xo);
        if (ic3->parsed()) return cmd_ic3(iaction, io);
        if (census->parsed()) return cmd_census(co);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kOther;
    }
    return kUsage;
}
