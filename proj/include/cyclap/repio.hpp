#pragma once

#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "cyclerep.hpp"
#include "text_io.hpp"

namespace cyclap {

using AnyCycleRep = std::variant<CycleRep<RationalField>, CycleRep<PrimeField>>;
using AnyMorphism = std::variant<MorphismFamily<RationalField>, MorphismFamily<PrimeField>>;

/// `cyclerep v1` writer; inverse of parse_cyclerep.
template <Field F>
std::string write_cyclerep(const CycleRep<F>& u) {
    std::ostringstream out;
    out << "cyclerep v1\n";
    if constexpr (std::is_same_v<F, RationalField>) {
        out << "field Q\n";
    } else {
        out << "field Fp " << u.field().modulus() << "\n";
    }
    out << "n " << u.n() << "\n";
    out << "dims";
    for (std::size_t d : u.dims()) out << ' ' << d;
    out << "\n";
    for (std::size_t k = 0; k < u.n(); ++k) {
        out << "map " << k << "\n";
        if (u.dim(k + 1) > 0) out << u.map(k).str();
    }
    if (!u.saturated().empty()) {
        out << "saturated";
        for (const auto& [base, card] : u.saturated()) {
            out << ' ' << base << ':' << (card.is_aleph0() ? "inf" : card.str());
        }
        out << "\n";
    }
    return out.str();
}

namespace detail {

template <Field F>
Matrix<F> parse_matrix_rows(const F& f, LineReader& reader, std::size_t rows, std::size_t cols) {
    Matrix<F> m(f, rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        auto [lineno, toks] = reader.next_raw();
        if (toks.size() != cols) {
            throw ParseError(lineno, "expected " + std::to_string(cols) + " entries, found " +
                                         std::to_string(toks.size()));
        }
        for (std::size_t j = 0; j < cols; ++j) {
            auto e = f.parse(toks[j]);
            if (!e) throw ParseError(lineno, "bad field element '" + toks[j] + "'");
            m.at(i, j) = *e;
        }
    }
    return m;
}

template <Field F>
CycleRep<F> parse_cyclerep_body(const F& f, LineReader& reader) {
    auto expect = [&](const char* what) {
        auto d = reader.next_directive();
        if (!d) throw ParseError(reader.last_line(), std::string("expected ") + what);
        return *d;
    };

    auto [nline, ntoks] = expect("'n <int>'");
    if (ntoks.size() != 2 || ntoks[0] != "n") throw ParseError(nline, "expected 'n <int>'");
    auto n = parse_uint(ntoks[1]);
    if (!n || *n == 0) throw ParseError(nline, "n must be a positive integer");

    auto [dline, dtoks] = expect("'dims ...'");
    if (dtoks.empty() || dtoks[0] != "dims" || dtoks.size() != *n + 1) {
        throw ParseError(dline, "expected 'dims' with " + std::to_string(*n) + " entries");
    }
    std::vector<std::size_t> dims;
    for (std::size_t k = 0; k < *n; ++k) {
        auto d = parse_uint(dtoks[k + 1]);
        if (!d) throw ParseError(dline, "bad dimension '" + dtoks[k + 1] + "'");
        if (*d > 1024) throw ParseError(dline, "dimension exceeds the supported bound of 1024");
        dims.push_back(static_cast<std::size_t>(*d));
    }

    std::vector<Matrix<F>> maps;
    for (std::size_t k = 0; k < *n; ++k) {
        auto [mline, mtoks] = expect("'map <k>'");
        if (mtoks.size() != 2 || mtoks[0] != "map" || mtoks[1] != std::to_string(k)) {
            throw ParseError(mline, "expected 'map " + std::to_string(k) + "'");
        }
        std::size_t rows = dims[(k + 1) % *n];
        maps.push_back(rows == 0 ? Matrix<F>(f, 0, dims[k]) : parse_matrix_rows(f, reader, rows, dims[k]));
    }

    std::map<std::size_t, Card> cells;
    if (auto d = reader.next_directive()) {
        auto [sline, stoks] = *d;
        if (stoks[0] != "saturated") throw ParseError(sline, "unexpected directive '" + stoks[0] + "'");
        for (std::size_t i = 1; i < stoks.size(); ++i) {
            auto colon = stoks[i].find(':');
            if (colon == std::string::npos) throw ParseError(sline, "expected '<base>:<mult>'");
            auto base = parse_uint(stoks[i].substr(0, colon));
            auto card = Card::parse(stoks[i].substr(colon + 1));
            if (!base || *base >= *n || !card) throw ParseError(sline, "bad saturated entry '" + stoks[i] + "'");
            if (!card->is_zero()) cells.emplace(static_cast<std::size_t>(*base), *card);
        }
        if (auto extra = reader.next_directive()) throw ParseError(extra->first, "trailing content");
    }
    return CycleRep<F>(f, *n, std::move(dims), std::move(maps), std::move(cells));
}

}  // namespace detail

inline AnyCycleRep parse_cyclerep(const std::string& text) {
    LineReader reader(text);
    auto header = reader.next_directive();
    if (!header || header->second.size() != 2 || header->second[0] != "cyclerep" || header->second[1] != "v1") {
        throw ParseError(header ? header->first : 1, "expected 'cyclerep v1' header");
    }
    auto fieldline = reader.next_directive();
    if (!fieldline) throw ParseError(reader.last_line(), "expected field directive");
    const auto& toks = fieldline->second;
    if (toks[0] == "field" && toks.size() == 2 && toks[1] == "Q") {
        return detail::parse_cyclerep_body(RationalField{}, reader);
    }
    if (toks[0] == "field" && toks.size() == 3 && toks[1] == "Fp") {
        auto p = parse_uint(toks[2]);
        if (!p) throw ParseError(fieldline->first, "bad modulus '" + toks[2] + "'");
        try {
            return detail::parse_cyclerep_body(PrimeField(*p), reader);
        } catch (const Error& e) {
            if (dynamic_cast<const ParseError*>(&e)) throw;
            throw ParseError(fieldline->first, e.what());
        }
    }
    throw ParseError(fieldline->first, "expected 'field Q' or 'field Fp <p>'");
}

/// `morphism v1` certificate: per vertex, `phi <k>` and the rows of phi_k.
/// Consumers re-verify against the two cyclerep files by multiplication only.
template <Field F>
std::string write_morphism(const MorphismFamily<F>& fam) {
    std::ostringstream out;
    out << "morphism v1\n";
    for (std::size_t k = 0; k < fam.phi.size(); ++k) {
        out << "phi " << k << "\n";
        if (fam.phi[k].rows() > 0) out << fam.phi[k].str();
    }
    return out.str();
}

template <Field F>
MorphismFamily<F> parse_morphism(const F& f, const std::string& text, const std::vector<std::size_t>& target_dims,
                                 const std::vector<std::size_t>& source_dims) {
    LineReader reader(text);
    auto header = reader.next_directive();
    if (!header || header->second.size() != 2 || header->second[0] != "morphism" || header->second[1] != "v1") {
        throw ParseError(header ? header->first : 1, "expected 'morphism v1' header");
    }
    MorphismFamily<F> fam;
    for (std::size_t k = 0; k < target_dims.size(); ++k) {
        auto d = reader.next_directive();
        if (!d || d->second.size() != 2 || d->second[0] != "phi" || d->second[1] != std::to_string(k)) {
            throw ParseError(d ? d->first : reader.last_line(), "expected 'phi " + std::to_string(k) + "'");
        }
        fam.phi.push_back(target_dims[k] == 0 ? Matrix<F>(f, 0, source_dims[k])
                                              : detail::parse_matrix_rows(f, reader, target_dims[k], source_dims[k]));
    }
    if (auto extra = reader.next_directive()) throw ParseError(extra->first, "trailing content");
    return fam;
}

}  // namespace cyclap
