#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vknot/vknot.hpp"

using namespace vknot;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

LinkDiagram load_diagram(const std::string& path) {
    return parse_gauss_code(slurp(path));
}

// "builtin:<name>", a bare builtin name, or a path to a table file
Biquandle load_biquandle(const std::string& spec) {
    if (spec.rfind("builtin:", 0) == 0)
        return builtin_biquandle(spec.substr(8));
    try {
        return builtin_biquandle(spec);
    } catch (const std::runtime_error&) {
    }
    return parse_biquandle(slurp(spec));
}

std::string biquandle_descriptor(const std::string& spec) {
    if (spec.rfind("builtin:", 0) == 0)
        return spec;
    try {
        builtin_biquandle(spec);
        return "builtin:" + spec;
    } catch (const std::runtime_error&) {
        return spec;
    }
}

BracketCoefficients load_coefficients(const std::string& path) {
    return parse_coefficients(slurp(path), [](const std::string& name) {
        return load_biquandle(name);
    });
}

ParityKind parity_kind(bool gp, bool comp, bool bp) {
    if (gp + comp + bp > 1)
        throw std::runtime_error("choose at most one of --gp, --comp, --bp");
    if (comp)
        return ParityKind::Component;
    if (bp)
        return ParityKind::Biquandle;
    return ParityKind::Gaussian;
}

struct Output {
    bool as_json = false;
    json j;

    void field(const std::string& key, const json& value) {
        if (as_json)
            j[key] = value;
    }
    void line(const std::string& key, const std::string& text) {
        if (as_json)
            j[key] = text;
        else
            std::cout << text << '\n';
    }
    void flush() {
        if (as_json)
            std::cout << j.dump(2) << '\n';
    }
};

json multiset_json(const InvariantMultiset& ms) {
    json out = json::object();
    out["domain"] = ms.domain();
    json entries = json::array();
    for (const auto& [value, mult] : ms.counts())
        entries.push_back({{"value", value}, {"count", mult}});
    out["entries"] = entries;
    out["total"] = ms.total();
    return out;
}

void print_multiset(Output& out, const std::string& key,
                    const InvariantMultiset& ms) {
    if (out.as_json) {
        out.j[key] = multiset_json(ms);
    } else {
        std::cout << ms.to_string();
    }
}

std::string parity_line(const ParityMap& pm) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [label, value] : pm) {
        os << (first ? "" : " ") << label << ':' << value;
        first = false;
    }
    return os.str();
}

// ring-element constraint list of the form NAME=VALUE
CoefficientConstraints parse_fixes(const Ring& ring,
                                   const std::vector<std::string>& fixes) {
    CoefficientConstraints out;
    const std::string names = "ABCDEF";
    for (const std::string& fx : fixes) {
        size_t eq = fx.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("--fix expects NAME=VALUE, got '" + fx +
                                     "'");
        std::string name = fx.substr(0, eq);
        RingElem value = ring.parse(fx.substr(eq + 1));
        if (name == "delta")
            out.delta = value;
        else if (name == "w")
            out.w = value;
        else if (name.size() == 1 && names.find(name[0]) != std::string::npos)
            out.tables[names.find(name[0])] = value;
        else
            throw std::runtime_error("unknown --fix target '" + name + "'");
    }
    return out;
}

InvariantMultiset scalar_multiset_wrap(const LinkDiagram& d,
                                       const Biquandle& X, const Ring& ring,
                                       const RingElem& a, const RingElem& b,
                                       const RingElem& delta,
                                       const RingElem& w) {
    int n = X.size();
    CoeffTable A(n, std::vector<RingElem>(n, a));
    CoeffTable B(n, std::vector<RingElem>(n, b));
    return biquandle_bracket_multiset(d, X, ring, A, B, delta, w);
}

struct NorParams {
    Ring ring;
    RingElem a, b, delta, w;
};

NorParams resolve_nor_params(const std::string& ring_name,
                             const std::string& a_text,
                             const std::string& b_text,
                             const std::string& delta_text,
                             const std::string& w_text) {
    Ring ring = Ring::from_descriptor(ring_name);
    RingElem a = ring.parse(a_text), b = ring.parse(b_text);
    RingElem delta = delta_text.empty()
                         ? ring.neg(ring.add(ring.mul(a, ring.inverse(b)),
                                             ring.mul(b, ring.inverse(a))))
                         : ring.parse(delta_text);
    RingElem w = w_text.empty() ? ring.add(ring.mul(delta, a), b)
                                : ring.parse(w_text);
    return {std::move(ring), std::move(a), std::move(b), std::move(delta),
            std::move(w)};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"picture-valued and scalar invariants of virtual links"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "emit JSON with the same canonical strings");

    std::string in_path, in_path_b, biq_spec = "singleton", coeff_path;
    std::string ring_name = "Z2", a_text = "1", b_text = "1";
    std::string delta_text, w_text, invariant = "pbracket", parity_name = "gp";
    std::vector<std::string> fixes;
    int steps = 10, pairs = 20, max_crossings = 9;
    std::uint64_t seed = 1;
    bool gp = false, comp = false, bp = false;
    bool strict_printed = false, parity_even = false;

    auto* parse_cmd = app.add_subcommand("parse", "normalize a Gauss code");
    parse_cmd->add_option("file", in_path)->required();

    auto* writhe_cmd = app.add_subcommand("writhe", "signed crossing sum");
    writhe_cmd->add_option("file", in_path)->required();

    auto* parity_cmd =
        app.add_subcommand("parity", "per-crossing parity assignment");
    parity_cmd->add_option("file", in_path)->required();
    parity_cmd->add_flag("--gp", gp, "interlacement parity (default)");
    parity_cmd->add_flag("--comp", comp, "component parity");
    parity_cmd->add_flag("--bp", bp, "flip-colouring parity");

    auto* real_cmd =
        app.add_subcommand("realizable", "classical planarity of the code");
    real_cmd->add_option("file", in_path)->required();

    auto* perturb_cmd = app.add_subcommand(
        "perturb", "apply random Reidemeister moves, seed-reproducible");
    perturb_cmd->add_option("file", in_path)->required();
    perturb_cmd->add_option("--steps", steps);
    perturb_cmd->add_option("--seed", seed);
    perturb_cmd->add_option("--max-crossings", max_crossings);
    perturb_cmd->add_flag("--parity-even", parity_even,
                          "restrict double moves to interlacement-even pairs");

    auto* biq_cmd = app.add_subcommand("biquandle-check",
                                       "verify the axioms of a biquandle");
    biq_cmd->add_option("biquandle", biq_spec)->required();

    auto* col_cmd =
        app.add_subcommand("colorings", "count proper colourings");
    col_cmd->add_option("file", in_path)->required();
    col_cmd->add_option("--biquandle", biq_spec);

    auto* pbr_cmd = app.add_subcommand(
        "paritybracket", "picture-valued bracket driven by a parity");
    pbr_cmd->add_option("file", in_path)->required();
    pbr_cmd->add_option("--parity", parity_name)
        ->check(CLI::IsMember({"gp", "comp", "bp", "zero"}));

    auto* nor_cmd = app.add_subcommand(
        "nor-bracket", "scalar two-smoothing bracket multiset");
    nor_cmd->add_option("file", in_path)->required();
    nor_cmd->add_option("--ring", ring_name);
    nor_cmd->add_option("--a", a_text);
    nor_cmd->add_option("--b", b_text);
    nor_cmd->add_option("--delta", delta_text,
                        "defaults to -(a/b + b/a)");
    nor_cmd->add_option("--w", w_text, "defaults to delta*a + b");
    nor_cmd->add_option("--biquandle", biq_spec);

    auto* pb_cmd = app.add_subcommand(
        "pbracket", "picture-valued bracket multiset over all colourings");
    pb_cmd->add_option("file", in_path)->required();
    pb_cmd->add_option("--coeffs", coeff_path)->required();

    auto* verify_cmd = app.add_subcommand(
        "verify-coeffs", "check a coefficient pack against the relations");
    verify_cmd->add_option("file", coeff_path)->required();
    verify_cmd->add_flag("--strict-printed", strict_printed,
                         "use the literal triple-relation transcription");

    auto* search_cmd = app.add_subcommand(
        "search-coeffs", "enumerate coefficient packs passing the relations");
    search_cmd->add_option("--biquandle", biq_spec);
    search_cmd->add_option("--ring", ring_name);
    search_cmd->add_option("--fix", fixes,
                           "pin delta, w, or a whole table: A=0, delta=2, ...");

    auto* cmp_cmd =
        app.add_subcommand("compare", "evaluate one invariant on two codes");
    cmp_cmd->add_option("file", in_path)->required();
    cmp_cmd->add_option("file_b", in_path_b)->required();
    cmp_cmd->add_option("--invariant", invariant)
        ->check(CLI::IsMember(
            {"pbracket", "paritybracket", "colorings", "nor-bracket"}));
    cmp_cmd->add_option("--coeffs", coeff_path);
    cmp_cmd->add_option("--biquandle", biq_spec);
    cmp_cmd->add_option("--parity", parity_name)
        ->check(CLI::IsMember({"gp", "comp", "bp", "zero"}));
    cmp_cmd->add_option("--ring", ring_name);
    cmp_cmd->add_option("--a", a_text);
    cmp_cmd->add_option("--b", b_text);
    cmp_cmd->add_option("--delta", delta_text);
    cmp_cmd->add_option("--w", w_text);

    auto* equiv_cmd = app.add_subcommand(
        "equiv-test", "sample move-equivalent pairs and compare an invariant");
    equiv_cmd->add_option("file", in_path)->required();
    equiv_cmd->add_option("--pairs", pairs);
    equiv_cmd->add_option("--steps", steps);
    equiv_cmd->add_option("--seed", seed);
    equiv_cmd->add_option("--max-crossings", max_crossings);
    equiv_cmd->add_option("--invariant", invariant)
        ->check(CLI::IsMember(
            {"pbracket", "paritybracket", "colorings", "nor-bracket"}));
    equiv_cmd->add_option("--coeffs", coeff_path);
    equiv_cmd->add_option("--biquandle", biq_spec);
    equiv_cmd->add_option("--parity", parity_name)
        ->check(CLI::IsMember({"gp", "comp", "bp", "zero"}));
    equiv_cmd->add_option("--ring", ring_name);
    equiv_cmd->add_option("--a", a_text);
    equiv_cmd->add_option("--b", b_text);
    equiv_cmd->add_option("--delta", delta_text);
    equiv_cmd->add_option("--w", w_text);
    equiv_cmd->add_flag("--parity-even", parity_even,
                        "restrict double moves to interlacement-even pairs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help and friends exit 0; genuine argument errors exit 2
        return app.exit(e) == 0 ? 0 : 2;
    }

    Output out;
    out.as_json = as_json;

    auto named_parity = [&](const std::string& name) {
        if (name == "gp")
            return ParityKind::Gaussian;
        if (name == "comp")
            return ParityKind::Component;
        if (name == "bp")
            return ParityKind::Biquandle;
        return ParityKind::Zero;
    };

    try {
        if (parse_cmd->parsed()) {
            LinkDiagram d = load_diagram(in_path);
            out.line("gauss_code", d.gauss_code());
            out.field("crossings", d.crossing_count());
            out.field("components", (int)d.components().size());
            if (!as_json)
                std::cout << "crossings=" << d.crossing_count()
                          << " components=" << d.components().size() << '\n';
        } else if (writhe_cmd->parsed()) {
            LinkDiagram d = load_diagram(in_path);
            out.line("writhe", std::to_string(d.writhe()));
        } else if (parity_cmd->parsed()) {
            LinkDiagram d = load_diagram(in_path);
            out.line("parity", parity_line(parity_map(d, parity_kind(gp, comp, bp))));
        } else if (real_cmd->parsed()) {
            LinkDiagram d = load_diagram(in_path);
            out.line("realizable", classical_realizability(d)
                                       ? "realizable"
                                       : "non-realizable");
        } else if (perturb_cmd->parsed()) {
            LinkDiagram d = load_diagram(in_path);
            MoveMenu menu =
                parity_even ? MoveMenu::ParityEven : MoveMenu::All;
            LinkDiagram w =
                random_equivalent_diagram(d, steps, seed, max_crossings, menu);
            if (!as_json)
                std::cout << "# seed=" << seed << " steps=" << steps << '\n';
            out.field("seed", seed);
            out.field("steps", steps);
            out.line("gauss_code", w.gauss_code());
        } else if (biq_cmd->parsed()) {
            Biquandle X = load_biquandle(biq_spec);
            auto bad = check_axioms(X);
            if (bad.empty()) {
                out.line("result", "axioms hold");
            } else {
                json witnesses = json::array();
                for (const auto& v : bad) {
                    witnesses.push_back(v.describe());
                    if (!as_json)
                        std::cout << v.describe() << '\n';
                }
                out.field("violations", witnesses);
                out.flush();
                return 1;
            }
        } else if (col_cmd->parsed()) {
            LinkDiagram d = load_diagram(in_path);
            Biquandle X = load_biquandle(biq_spec);
            out.line("colorings",
                     std::to_string(enumerate_colorings(d, X).size()));
        } else if (pbr_cmd->parsed()) {
            LinkDiagram d = load_diagram(in_path);
            out.line("bracket",
                     parity_bracket(d, named_parity(parity_name)).to_string());
        } else if (nor_cmd->parsed()) {
            LinkDiagram d = load_diagram(in_path);
            Biquandle X = load_biquandle(biq_spec);
            NorParams np = resolve_nor_params(ring_name, a_text, b_text,
                                              delta_text, w_text);
            auto ms = scalar_multiset_wrap(d, X, np.ring, np.a, np.b, np.delta,
                                           np.w);
            if (!as_json)
                std::cout << "# ring=" << np.ring.descriptor() << " a="
                          << np.ring.to_string(np.a) << " b="
                          << np.ring.to_string(np.b) << " delta="
                          << np.ring.to_string(np.delta) << " w="
                          << np.ring.to_string(np.w) << '\n';
            print_multiset(out, "multiset", ms);
        } else if (pb_cmd->parsed()) {
            LinkDiagram d = load_diagram(in_path);
            BracketCoefficients beta = load_coefficients(coeff_path);
            auto ms = pb_bracket_multiset(d, beta);
            if (!as_json)
                std::cout << "# ring=" << beta.ring.descriptor()
                          << " colorings=" << ms.total() << '\n';
            print_multiset(out, "multiset", ms);
        } else if (verify_cmd->parsed()) {
            BracketCoefficients beta = load_coefficients(coeff_path);
            auto rep = verify_pbbr_relations(beta, strict_printed);
            if (rep.empty()) {
                out.line("result", "relations hold");
            } else {
                json witnesses = json::array();
                for (const auto& v : rep) {
                    witnesses.push_back(v.describe());
                    if (!as_json)
                        std::cout << v.describe() << '\n';
                }
                out.field("violations", witnesses);
                out.flush();
                return 1;
            }
        } else if (search_cmd->parsed()) {
            Biquandle X = load_biquandle(biq_spec);
            Ring ring = Ring::from_descriptor(ring_name);
            auto found =
                search_coefficients(X, ring, parse_fixes(ring, fixes));
            out.field("count", (int)found.size());
            if (!as_json)
                std::cout << "found " << found.size() << " packs\n";
            json packs = json::array();
            for (size_t i = 0; i < found.size(); ++i) {
                found[i].x_descriptor = biquandle_descriptor(biq_spec);
                std::string text = serialize_coefficients(found[i]);
                packs.push_back(text);
                if (!as_json)
                    std::cout << "-- pack " << i << " --\n" << text;
            }
            out.field("packs", packs);
        } else if (cmp_cmd->parsed() || equiv_cmd->parsed()) {
            LinkDiagram d = load_diagram(in_path);
            std::optional<BracketCoefficients> beta;
            if (invariant == "pbracket")
                beta = load_coefficients(coeff_path);
            std::optional<NorParams> np;
            if (invariant == "nor-bracket")
                np = resolve_nor_params(ring_name, a_text, b_text, delta_text,
                                        w_text);
            Biquandle X = load_biquandle(biq_spec);
            auto evaluate = [&](const LinkDiagram& dia) -> std::string {
                if (invariant == "pbracket")
                    return pb_bracket_multiset(dia, *beta).to_string();
                if (invariant == "paritybracket")
                    return parity_bracket(dia, named_parity(parity_name))
                        .to_string();
                if (invariant == "nor-bracket")
                    return scalar_multiset_wrap(dia, X, np->ring, np->a, np->b,
                                                np->delta, np->w)
                        .to_string();
                return std::to_string(enumerate_colorings(dia, X).size());
            };
            if (cmp_cmd->parsed()) {
                std::string va = evaluate(d);
                std::string vb = evaluate(load_diagram(in_path_b));
                out.field("first", va);
                out.field("second", vb);
                bool equal = va == vb;
                out.line("result", equal ? "EQUAL" : "DIFFERENT");
                out.flush();
                return equal ? 0 : 1;
            }
            MoveMenu menu =
                parity_even ? MoveMenu::ParityEven : MoveMenu::All;
            std::string base = evaluate(d);
            int bad = 0;
            if (!as_json)
                std::cout << "# seed=" << seed << " pairs=" << pairs
                          << " steps=" << steps << '\n';
            out.field("seed", seed);
            out.field("pairs", pairs);
            for (int p = 0; p < pairs; ++p) {
                LinkDiagram w = random_equivalent_diagram(
                    d, steps, seed + (std::uint64_t)p, max_crossings, menu);
                if (evaluate(w) != base)
                    ++bad;
            }
            out.field("mismatches", bad);
            out.line("result", bad == 0 ? "all pairs equal"
                                        : std::to_string(bad) +
                                              " mismatching pairs");
            out.flush();
            return bad == 0 ? 0 : 1;
        }
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    }
    out.flush();
    return 0;
}
