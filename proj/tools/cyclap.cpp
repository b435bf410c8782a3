// Command-line front end: exact computation of cyclic Kaplansky invariants,
// isomorphism decisions with certificates, canonical-cell decompositions,
// realizations of admissible invariant families, and the randomized
// self-check harness. Exit codes: 0 success (or isomorphic), 1 negative
// verdict, 2 error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "cyclap/cyclap.hpp"

namespace {

using namespace cyclap;

std::variant<RationalField, PrimeField> parse_field_spec(const std::string& spec) {
    if (spec == "Q") return RationalField{};
    if (spec.rfind("Fp:", 0) == 0) {
        auto p = parse_uint(spec.substr(3));
        if (!p) throw Error("bad field spec '" + spec + "'");
        return PrimeField(*p);
    }
    throw Error("field must be Q or Fp:<p>");
}

AnyCycleRep load_rep(const std::string& path) { return parse_cyclerep(read_file(path)); }

template <typename Fn>
int with_pair(const std::string& file_u, const std::string& file_v, Fn&& fn) {
    AnyCycleRep u = load_rep(file_u);
    AnyCycleRep v = load_rep(file_v);
    if (u.index() != v.index()) throw Error("representations live over different fields");
    if (auto* uq = std::get_if<CycleRep<RationalField>>(&u)) {
        return fn(*uq, std::get<CycleRep<RationalField>>(v));
    }
    return fn(std::get<CycleRep<PrimeField>>(u), std::get<CycleRep<PrimeField>>(v));
}

int cmd_invariants(const std::string& file) {
    return std::visit(
        [&](const auto& u) {
            std::cout << write_invariant_table(kaplansky_invariants(u));
            return 0;
        },
        load_rep(file));
}

int cmd_iso(const std::string& file_u, const std::string& file_v, const std::string& out,
            bool require_certificate) {
    return with_pair(file_u, file_v, [&](const auto& u, const auto& v) {
        auto decision = decide_isomorphic(u, v);
        if (!decision.isomorphic) {
            std::cout << "not isomorphic: " << decision.reason << "\n";
            return 1;
        }
        std::cout << "isomorphic\n";
        if (!out.empty()) {
            write_file(out, write_morphism(*decision.certificate));
            std::cout << "certificate written to " << out << "\n";
        } else if (require_certificate) {
            throw Error("build-iso needs an output path (-o)");
        }
        return 0;
    });
}

int cmd_decompose(const std::string& file) {
    return std::visit(
        [&](const auto& u) {
            auto dec = decompose(u);
            std::cout << dec.cells.str();
            return 0;
        },
        load_rep(file));
}

int cmd_adapted_basis(const std::string& file) {
    return std::visit(
        [&](const auto& u) {
            auto basis = adapted_basis(u);
            std::cout << basis.str(u.field());
            return 0;
        },
        load_rep(file));
}

InvariantTable table_of_family(const AdmissibleFamily& fam) {
    if (!fam.support.ladders.empty()) throw UnsupportedTransfinite();
    InvariantTable table;
    table.n = fam.support.n;
    for (const auto& [key, card] : fam.point_mult) table.add_finite(key.first, key.second, card);
    for (const auto& [k, card] : fam.inf_entries) table.add_infinite(k, card);
    return table;
}

int cmd_realize(const std::string& support_file, const std::string& out, const std::string& field_spec) {
    AdmissibleFamily fam = parse_support(read_file(support_file));
    InvariantTable table = table_of_family(fam);
    std::visit(
        [&](const auto& field) {
            auto rep = realize_finite(table, field);
            write_file(out, write_cyclerep(rep));
        },
        parse_field_spec(field_spec));
    std::cout << "wrote " << out << "\n";
    return 0;
}

int cmd_check_admissible(const std::string& support_file) {
    AdmissibleFamily fam = parse_support(read_file(support_file));
    if (auto counterexample = admissibility_counterexample(fam.support)) {
        std::cout << "not admissible: " << counterexample->str() << "\n";
        return 1;
    }
    std::cout << "admissible\n";
    return 0;
}

int cmd_gen(std::size_t n, const std::string& cells_spec, const std::string& infcells_spec, std::uint64_t seed,
            const std::string& field_spec, const std::string& out) {
    CellMultiset cells;
    auto parse_triplets = [](const std::string& spec, auto&& sink) {
        if (spec.empty()) return;
        std::size_t start = 0;
        while (start <= spec.size()) {
            std::size_t comma = spec.find(',', start);
            std::string item = spec.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            if (!item.empty()) sink(item);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    };
    parse_triplets(cells_spec, [&](const std::string& item) {
        auto c1 = item.find(':');
        if (c1 == std::string::npos) throw Error("cell must be <base>:<size>[:<count>]");
        auto c2 = item.find(':', c1 + 1);
        auto base = parse_uint(item.substr(0, c1));
        auto size = parse_uint(item.substr(c1 + 1, c2 == std::string::npos ? std::string::npos : c2 - c1 - 1));
        std::uint64_t count = 1;
        if (c2 != std::string::npos) {
            auto c = parse_uint(item.substr(c2 + 1));
            if (!c) throw Error("bad cell count in '" + item + "'");
            count = *c;
        }
        if (!base || !size || *size == 0) throw Error("bad cell '" + item + "'");
        cells.finite[{static_cast<std::size_t>(*base % n), static_cast<std::size_t>(*size)}] += count;
    });
    parse_triplets(infcells_spec, [&](const std::string& item) {
        auto c1 = item.find(':');
        if (c1 == std::string::npos) throw Error("infcell must be <base>:<card>");
        auto base = parse_uint(item.substr(0, c1));
        auto card = Card::parse(item.substr(c1 + 1));
        if (!base || !card) throw Error("bad infcell '" + item + "'");
        if (!card->is_zero()) cells.infinite[static_cast<std::size_t>(*base % n)] = *card;
    });
    std::visit(
        [&](const auto& field) {
            auto realized = realize_cells(cells, field, n).rep;
            auto changed = random_basis_change(realized, seed).first;
            write_file(out, write_cyclerep(changed));
        },
        parse_field_spec(field_spec));
    std::cout << "wrote " << out << "\n";
    return 0;
}

int cmd_selfcheck(std::uint64_t seed, std::uint64_t iters) {
    auto results = run_selfcheck(seed, iters);
    std::uint64_t failures = 0;
    for (const auto& suite : results) {
        std::cout << suite.name << ": " << suite.passes << " passed, " << suite.failures << " failed\n";
        for (const auto& note : suite.notes) std::cout << "  failed: " << note << "\n";
        failures += suite.failures;
    }
    std::cout << "selfcheck: " << (failures == 0 ? "PASS" : "FAIL") << "\n";
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact classification of cycles of linear maps"};
    app.require_subcommand(1);

    std::string file_u, file_v, out, field_spec = "Q", cells_spec, infcells_spec;
    std::uint64_t seed = 0, iters = 50;
    std::size_t n = 1;

    auto* invariants = app.add_subcommand("invariants", "print the Kaplansky invariant table");
    invariants->add_option("file", file_u)->required();

    auto* iso = app.add_subcommand("iso", "decide isomorphism (exit 0 iso / 1 not / 2 error)");
    iso->add_option("file_u", file_u)->required();
    iso->add_option("file_v", file_v)->required();
    iso->add_option("-o,--out", out, "write the certificate here when isomorphic");

    auto* build = app.add_subcommand("build-iso", "construct and write an isomorphism certificate");
    build->add_option("file_u", file_u)->required();
    build->add_option("file_v", file_v)->required();
    build->add_option("-o,--out", out)->required();

    auto* dec = app.add_subcommand("decompose", "canonical-cell decomposition");
    dec->add_option("file", file_u)->required();

    auto* basis = app.add_subcommand("adapted-basis", "emit an adapted basis");
    basis->add_option("file", file_u)->required();

    auto* realize = app.add_subcommand("realize", "realize a finite admissible support file");
    realize->add_option("support", file_u)->required();
    realize->add_option("-o,--out", out)->required();
    realize->add_option("--field", field_spec, "Q or Fp:<p>");

    auto* check = app.add_subcommand("check-admissible", "admissibility of a support file");
    check->add_option("support", file_u)->required();

    auto* gen = app.add_subcommand("gen", "seeded random representation with known cells");
    gen->add_option("--n", n, "cycle length")->required();
    gen->add_option("--cells", cells_spec, "comma list of <base>:<size>[:<count>]");
    gen->add_option("--infcells", infcells_spec, "comma list of <base>:<card>");
    gen->add_option("--seed", seed)->required();
    gen->add_option("--field", field_spec, "Q or Fp:<p>");
    gen->add_option("-o,--out", out)->required();

    auto* self = app.add_subcommand("selfcheck", "run the randomized property suites");
    self->add_option("--seed", seed);
    self->add_option("--iters", iters);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (invariants->parsed()) return cmd_invariants(file_u);
        if (iso->parsed()) return cmd_iso(file_u, file_v, out, false);
        if (build->parsed()) return cmd_iso(file_u, file_v, out, true);
        if (dec->parsed()) return cmd_decompose(file_u);
        if (basis->parsed()) return cmd_adapted_basis(file_u);
        if (realize->parsed()) return cmd_realize(file_u, out, field_spec);
        if (check->parsed()) return cmd_check_admissible(file_u);
        if (gen->parsed()) return cmd_gen(n, cells_spec, infcells_spec, seed, field_spec, out);
        if (self->parsed()) return cmd_selfcheck(seed, iters);
    } catch (const cyclap::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
