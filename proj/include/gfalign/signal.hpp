#ifndef GFALIGN_SIGNAL_HPP
#define GFALIGN_SIGNAL_HPP

#include <string>
#include <vector>

#include "gfalign/error.hpp"
#include "gfalign/fplinalg.hpp"
#include "gfalign/gf.hpp"

namespace gfalign {

// One message: F_p streams leaving `source` for `dest` along the columns of a raw precoder.
struct LinkBlock {
    int source = 0;
    int dest = 0;
    GfMatrix precoder;
};

// A linear scheme on a raw channel with gain[j][i] from source i to destination j.
struct LinkSystem {
    const Field* field = nullptr;
    int m = 1;
    std::vector<std::vector<Gfe>> gain;
    std::vector<LinkBlock> blocks;

    std::size_t dim() const { return std::size_t(m) * std::size_t(field->n()); }
    std::size_t num_dests() const { return gain.size(); }
};

struct DestReport {
    std::size_t desired_streams = 0;
    std::size_t desired_rank = 0;
    std::size_t interference_rank = 0;
    std::size_t total_rank = 0;
    bool decodable = false;
};

inline MatFp received_columns(const LinkSystem& sys, int dest, const LinkBlock& b) {
    return signal_columns(b.precoder, sys.gain[std::size_t(dest)][std::size_t(b.source)]);
}

inline MatFp desired_space(const LinkSystem& sys, int dest) {
    MatFp m(sys.field->p(), sys.dim(), 0);
    for (const auto& b : sys.blocks)
        if (b.dest == dest) m = m.hcat(received_columns(sys, dest, b));
    return m;
}

inline MatFp interference_space(const LinkSystem& sys, int dest) {
    MatFp m(sys.field->p(), sys.dim(), 0);
    for (const auto& b : sys.blocks)
        if (b.dest != dest && !sys.gain[std::size_t(dest)][std::size_t(b.source)].is_zero())
            m = m.hcat(received_columns(sys, dest, b));
    return m;
}

inline std::size_t safe_rank(const MatFp& m) { return m.cols() == 0 ? 0 : rank(m); }

inline DestReport analyze_dest(const LinkSystem& sys, int dest) {
    DestReport r;
    MatFp d = desired_space(sys, dest);
    MatFp i = interference_space(sys, dest);
    r.desired_streams = d.cols();
    r.desired_rank = safe_rank(d);
    r.interference_rank = safe_rank(i);
    r.total_rank = safe_rank(d.hcat(i));
    r.decodable = r.desired_rank == r.desired_streams && r.total_rank == r.desired_rank + r.interference_rank;
    return r;
}

inline std::vector<DestReport> analyze(const LinkSystem& sys) {
    std::vector<DestReport> out;
    for (std::size_t j = 0; j < sys.num_dests(); ++j) out.push_back(analyze_dest(sys, int(j)));
    return out;
}

// Received m-vectors per destination for the given per-block F_p symbols.
inline std::vector<std::vector<Gfe>> transmit(const LinkSystem& sys, const std::vector<std::vector<u32>>& symbols) {
    const Field& f = *sys.field;
    if (symbols.size() != sys.blocks.size()) throw Error(Errc::DimensionMismatch, "one symbol block per message");
    std::size_t sources = sys.gain.empty() ? 0 : sys.gain[0].size();
    std::vector<std::vector<Gfe>> x(sources, std::vector<Gfe>(std::size_t(sys.m), f.zero()));
    for (std::size_t k = 0; k < sys.blocks.size(); ++k) {
        const auto& b = sys.blocks[k];
        if (symbols[k].size() != b.precoder.cols()) throw Error(Errc::DimensionMismatch, "symbol block length");
        for (std::size_t c = 0; c < b.precoder.cols(); ++c) {
            u32 sym = symbols[k][c];
            if (sym >= f.p()) throw Error(Errc::InvalidArgument, "symbol outside F_p");
            for (std::size_t r = 0; r < std::size_t(sys.m); ++r)
                x[std::size_t(b.source)][r] += b.precoder.at(r, c).scaled(sym);
        }
    }
    std::vector<std::vector<Gfe>> y(sys.num_dests(), std::vector<Gfe>(std::size_t(sys.m), f.zero()));
    for (std::size_t j = 0; j < sys.num_dests(); ++j)
        for (std::size_t i = 0; i < sources; ++i)
            for (std::size_t r = 0; r < std::size_t(sys.m); ++r) y[j][r] += sys.gain[j][i] * x[i][r];
    return y;
}

// Zero-forcing decode: solve [desired | interference basis] z = y at every destination.
inline std::vector<std::vector<u32>> decode(const LinkSystem& sys, const std::vector<std::vector<Gfe>>& received) {
    std::vector<std::vector<u32>> out(sys.blocks.size());
    for (std::size_t j = 0; j < sys.num_dests(); ++j) {
        std::vector<std::size_t> mine;
        for (std::size_t k = 0; k < sys.blocks.size(); ++k)
            if (sys.blocks[k].dest == int(j)) mine.push_back(k);
        if (mine.empty()) continue;
        MatFp d = desired_space(sys, int(j));
        MatFp i = interference_space(sys, int(j));
        SpanBasis span(sys.field->p(), sys.dim());
        for (std::size_t c = 0; c < d.cols(); ++c)
            if (!span.add(d.column(c))) throw Error(Errc::DecodeAmbiguous, "desired streams are dependent");
        MatFp system = d;
        for (std::size_t c = 0; c < i.cols(); ++c) {
            auto col = i.column(c);
            if (span.add(col)) system.append_column(col);
        }
        if (safe_rank(i) + d.cols() != system.cols())
            throw Error(Errc::DecodeAmbiguous, "interference overlaps desired space");
        std::vector<u32> z = solve(system, stack(received[j]));
        std::size_t off = 0;
        for (std::size_t k : mine) {
            std::size_t len = sys.blocks[k].precoder.cols();
            out[k].assign(z.begin() + std::ptrdiff_t(off), z.begin() + std::ptrdiff_t(off + len));
            off += len;
        }
    }
    return out;
}

// Whether two column sets span the same subspace.
inline bool same_span(const MatFp& a, const MatFp& b) {
    std::size_t ra = safe_rank(a), rb = safe_rank(b);
    return ra == rb && safe_rank(a.hcat(b)) == ra;
}

// F_p streams carried by each source: columns of gf^n spanned by powers of s, one per digit.
inline GfMatrix full_rate_precoder(const Field& f, int m, int use) {
    GfMatrix pm(f, std::size_t(m), std::size_t(f.n()));
    for (int k = 0; k < f.n(); ++k) pm.set_label(std::size_t(use), std::size_t(k), f.p_pow(k));
    return pm;
}

} // namespace gfalign

#endif // GFALIGN_SIGNAL_HPP
