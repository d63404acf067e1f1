// Batch command-line front end: formula parsing/shifting/schema instances,
// exact field arithmetic and shadows, embeddings, the ultrafilter lab,
// Ramsey and density computations. One subcommand per invocation, --json
// for machine-readable output.
//
// Exit codes: 0 success, 1 domain error, 2 parse/usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mlns/mlns.hpp"

using json = nlohmann::ordered_json;
using namespace mlns;

namespace {

struct Output {
    std::string command;
    bool use_json = false;
    json result;
    json witness;
    std::vector<std::string> lines;

    void text(std::string line) { lines.push_back(std::move(line)); }

    int emit_ok()
    {
        if (use_json) {
            json doc;
            doc["command"] = command;
            doc["status"] = "ok";
            doc["result"] = result;
            if (!witness.is_null()) doc["witness"] = witness;
            std::cout << doc.dump(2) << "\n";
        } else {
            for (const auto& l : lines) std::cout << l << "\n";
        }
        return 0;
    }

    int emit_error(const Error& e)
    {
        if (use_json) {
            json doc;
            doc["command"] = command;
            doc["status"] = "error";
            doc["error"] = {{"kind", e.kind_name()}, {"message", e.what()}};
            if (e.position()) doc["error"]["position"] = *e.position();
            if (e.detail()) doc["error"]["detail"] = *e.detail();
            std::cout << doc.dump(2) << "\n";
        } else {
            std::cerr << "error [" << e.kind_name() << "]: " << e.what();
            if (e.position()) std::cerr << " (at position " << *e.position() << ")";
            std::cerr << "\n";
        }
        return 1;
    }
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::bad_argument, "cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

IntSet load_intset(const std::string& path)
{
    std::string text = read_file(path);
    std::size_t i = 0;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i < text.size() && text[i] == '[') {
        json doc = json::parse(text, nullptr, true, true);
        std::vector<unsigned> xs;
        for (const auto& v : doc) xs.push_back(v.get<unsigned>());
        return IntSet(std::move(xs));
    }
    return IntSet::parse_text(text);
}

Coloring load_coloring(const std::string& path)
{
    json doc = json::parse(read_file(path), nullptr, true, true);
    unsigned n = doc.at("n").get<unsigned>();
    unsigned r = doc.at("r").get<unsigned>();
    unsigned N = doc.at("N").get<unsigned>();
    if (doc.contains("generator")) {
        std::string g = doc["generator"].get<std::string>();
        if (g == "parity-sum") return Coloring::parity_sum(n, r, N);
        if (g == "pentagon") return Coloring::pentagon();
        if (g.rfind("constant:", 0) == 0)
            return Coloring::constant(n, r, N,
                                      static_cast<std::uint8_t>(std::stoul(g.substr(9))));
        throw Error(ErrorKind::bad_argument, "unknown coloring generator: " + g);
    }
    Coloring c(n, r, N);
    for (const auto& entry : doc.at("colors")) {
        std::vector<unsigned> subset;
        for (const auto& v : entry.at("subset")) subset.push_back(v.get<unsigned>());
        std::sort(subset.begin(), subset.end());
        c.set_color(subset, entry.at("color").get<std::uint8_t>());
    }
    return c;
}

json intvec_json(const std::vector<unsigned>& xs)
{
    json out = json::array();
    for (unsigned v : xs) out.push_back(v);
    return out;
}

std::string intvec_text(const std::vector<unsigned>& xs)
{
    std::string out = "{";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(xs[i]);
    }
    return out + "}";
}

// Value syntax for eval: a number expression, or {e1, e2, ...} for a set.
Value parse_value(const std::string& text, unsigned scales)
{
    std::size_t i = 0;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i < text.size() && text[i] == '{') {
        std::size_t close = text.rfind('}');
        if (close == std::string::npos || close < i)
            throw Error(ErrorKind::parse_error, "unterminated set value", i);
        std::string body = text.substr(i + 1, close - i - 1);
        std::vector<Num> xs;
        std::size_t start = 0;
        int depth = 0;
        for (std::size_t k = 0; k <= body.size(); ++k) {
            if (k < body.size() && body[k] == '(') ++depth;
            if (k < body.size() && body[k] == ')') --depth;
            if (k == body.size() || (body[k] == ',' && depth == 0)) {
                std::string piece = body.substr(start, k - start);
                bool blank = true;
                for (char ch : piece)
                    if (!std::isspace(static_cast<unsigned char>(ch))) blank = false;
                if (!blank) xs.push_back(Num::parse(piece, scales));
                start = k + 1;
            }
        }
        return Value(std::move(xs));
    }
    return Value(Num::parse(text, scales));
}

json family_json(const FiniteUltrafilter& u, std::size_t max_ground = 12)
{
    json out;
    out["ground"] = u.ground.names;
    out["principal_point"] = u.ground.names[principal_point(u)];
    if (u.ground.size() <= max_ground) {
        json fam = json::array();
        std::uint64_t n = u.family.subset_count();
        for (std::uint64_t y = 0; y < n; ++y) {
            if (!u.family.get(y)) continue;
            json subset = json::array();
            for (std::size_t i = 0; i < u.ground.size(); ++i)
                if ((y >> i) & 1) subset.push_back(u.ground.names[i]);
            fam.push_back(subset);
        }
        out["family"] = fam;
    } else {
        out["family"] = "omitted (ground too large)";
    }
    return out;
}

std::vector<std::pair<unsigned, unsigned>> parse_edges(const std::string& text)
{
    std::vector<std::pair<unsigned, unsigned>> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && (text[i] == ',' || std::isspace(static_cast<unsigned char>(text[i])))) ++i;
        if (i >= text.size()) break;
        std::size_t gt = text.find('>', i);
        if (gt == std::string::npos)
            throw Error(ErrorKind::parse_error, "edges look like '0>1,1>2'", i);
        std::size_t end = text.find(',', gt);
        if (end == std::string::npos) end = text.size();
        unsigned u = static_cast<unsigned>(std::stoul(text.substr(i, gt - i)));
        unsigned v = static_cast<unsigned>(std::stoul(text.substr(gt + 1, end - gt - 1)));
        out.emplace_back(u, v);
        i = end;
    }
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"workbench for multi-level nonstandard arithmetic"};
    app.require_subcommand(1);

    bool use_json = false;
    unsigned scales = default_scales;
    std::uint64_t seed = 1;
    app.add_flag("--json", use_json, "emit a single JSON document");
    app.add_option("--scales", scales, "number of infinite scales (default 8)")
        ->check(CLI::Range(1u, 12u));
    app.add_option("--seed", seed, "seed for randomized sampling");

    // parse
    auto* cmd_parse = app.add_subcommand("parse", "parse a formula and print its canonical form");
    std::string arg_formula, arg_formula_file;
    bool arg_extended = false;
    cmd_parse->add_option("formula", arg_formula, "formula text");
    cmd_parse->add_option("--file", arg_formula_file,
                          "formula file (one per line, '#' comments)");
    cmd_parse->add_flag("--extended", arg_extended, "allow Aall (GT instances)");

    // shift
    auto* cmd_shift = app.add_subcommand("shift", "apply the level shift to a formula");
    unsigned arg_r = 0;
    std::string shift_formula;
    cmd_shift->add_option("--r", arg_r, "shift amount")->required();
    cmd_shift->add_option("formula", shift_formula, "formula text")->required();

    // ho
    auto* cmd_ho = app.add_subcommand("ho", "emit a homogeneous-shift schema instance");
    unsigned ho_r = 0;
    std::string ho_label, ho_formula;
    cmd_ho->add_option("--r", ho_r, "shift amount")->required();
    cmd_ho->add_option("--a", ho_label, "parameter level label")->required();
    cmd_ho->add_option("formula", ho_formula, "formula text")->required();

    // gt
    auto* cmd_gt = app.add_subcommand("gt", "emit a generalized-transfer schema instance");
    std::string gt_label, gt_formula, gt_var;
    cmd_gt->add_option("--a", gt_label, "level label")->required();
    cmd_gt->add_option("--var", gt_var, "distinguished variable (default: least free)");
    cmd_gt->add_option("formula", gt_formula, "pure ∈-formula")->required();

    // eval
    auto* cmd_eval = app.add_subcommand("eval", "evaluate a formula over finite domains");
    std::string eval_formula_text;
    std::vector<std::string> eval_lets, eval_domains;
    bool eval_extended = false;
    cmd_eval->add_option("formula", eval_formula_text, "formula text")->required();
    cmd_eval->add_option("--let", eval_lets, "binding var=value (value: number expr or {e1,e2})");
    cmd_eval->add_option("--domain", eval_domains, "quantifier domain var=v1;v2;...");
    cmd_eval->add_flag("--extended", eval_extended, "allow Aall");

    // num
    auto* cmd_num = app.add_subcommand("num", "canonicalize a number expression");
    std::string num_expr;
    cmd_num->add_option("expr", num_expr, "number expression")->required();

    // cmp
    auto* cmd_cmp = app.add_subcommand("cmp", "compare two numbers");
    std::string cmp_x, cmp_y;
    cmd_cmp->add_option("x", cmp_x)->required();
    cmd_cmp->add_option("y", cmp_y)->required();

    // shadow
    auto* cmd_shadow = app.add_subcommand("shadow", "standard part at a level");
    unsigned shadow_r = 0;
    std::string shadow_expr;
    cmd_shadow->add_option("--r", shadow_r, "level")->required();
    cmd_shadow->add_option("expr", shadow_expr)->required();

    // classify
    auto* cmd_classify = app.add_subcommand("classify", "limited/infinitesimal at a level");
    unsigned classify_r = 0;
    std::string classify_expr;
    cmd_classify->add_option("--r", classify_r, "level")->required();
    cmd_classify->add_option("expr", classify_expr)->required();

    // level
    auto* cmd_level = app.add_subcommand("level", "support of a number, optionally test membership");
    std::string level_expr, level_label;
    cmd_level->add_option("expr", level_expr)->required();
    cmd_level->add_option("--a", level_label, "test membership in S_a");

    // embed
    auto* cmd_embed = app.add_subcommand("embed", "apply a level embedding");
    std::string embed_from, embed_to, embed_expr;
    cmd_embed->add_option("--from", embed_from, "source label")->required();
    cmd_embed->add_option("--to", embed_to, "target label")->required();
    cmd_embed->add_option("expr", embed_expr)->required();

    // deriv
    auto* cmd_deriv = app.add_subcommand("deriv", "derivative of a rational function at a point");
    std::string deriv_f, deriv_at;
    cmd_deriv->add_option("--f", deriv_f, "expression in x")->required();
    cmd_deriv->add_option("--at", deriv_at, "evaluation point")->required();

    // uf-check
    auto* cmd_ufcheck = app.add_subcommand("uf-check", "verify ultrafilters on a finite index set");
    unsigned uf_size = 2;
    bool uf_exhaustive = false;
    std::string uf_family;
    cmd_ufcheck->add_option("--size", uf_size, "index set size")->required();
    cmd_ufcheck->add_flag("--exhaustive", uf_exhaustive, "re-derive by filtering all families");
    cmd_ufcheck->add_option("--family", uf_family,
                            "JSON list of subsets (element indices) to check instead");

    // uf-tensor
    auto* cmd_uft = app.add_subcommand("uf-tensor", "tensor products, powers, projections, coherence");
    unsigned uft_isize = 2, uft_ipoint = 0;
    int uft_jsize = -1, uft_jpoint = -1;
    int uft_power = -1;
    std::string uft_project, uft_coh_a, uft_coh_b;
    cmd_uft->add_option("--i-size", uft_isize, "|I|")->required();
    cmd_uft->add_option("--i-point", uft_ipoint, "principal point of U")->required();
    cmd_uft->add_option("--j-size", uft_jsize, "|J| for a binary tensor");
    cmd_uft->add_option("--j-point", uft_jpoint, "principal point of V");
    cmd_uft->add_option("--power", uft_power, "tensor power n");
    cmd_uft->add_option("--project", uft_project, "project the power to this label");
    cmd_uft->add_option("--coherence-a", uft_coh_a, "check U_a = restriction of U_b: label a");
    cmd_uft->add_option("--coherence-b", uft_coh_b, "label b");

    // uf-los
    auto* cmd_los = app.add_subcommand("uf-los", "brute-force Łoś checks on a digraph ultrapower");
    unsigned los_nodes = 2, los_isize = 2, los_ipoint = 0;
    std::string los_edges;
    bool los_all = false;
    cmd_los->add_option("--nodes", los_nodes, "digraph nodes (1..4)")->required();
    cmd_los->add_option("--edges", los_edges, "edges like '0>1,1>0'");
    cmd_los->add_option("--i-size", los_isize, "|I|")->required();
    cmd_los->add_option("--i-point", los_ipoint, "principal point of U")->required();
    cmd_los->add_flag("--all", los_all, "sweep every formula and parameter assignment");

    // ramsey
    auto* cmd_ramsey = app.add_subcommand("ramsey", "homogeneous-set search on a coloring");
    std::string ramsey_file, ramsey_gen;
    unsigned ramsey_h = 0, ramsey_n = 2, ramsey_r = 2, ramsey_N = 6;
    bool ramsey_greedy = false;
    cmd_ramsey->add_option("--coloring", ramsey_file, "coloring JSON file");
    cmd_ramsey->add_option("--generator", ramsey_gen, "parity-sum | pentagon | constant:c");
    cmd_ramsey->add_option("--n", ramsey_n, "tuple size (with --generator)");
    cmd_ramsey->add_option("--r", ramsey_r, "color count (with --generator)");
    cmd_ramsey->add_option("--N", ramsey_N, "ground size (with --generator)");
    cmd_ramsey->add_option("--hsize", ramsey_h, "homogeneous set size to search for");
    cmd_ramsey->add_flag("--greedy", ramsey_greedy, "run the greedy construction instead");

    // replay
    auto* cmd_replay = app.add_subcommand("replay", "replay the embedding side conditions");
    unsigned replay_n = 3, replay_p = 1;
    cmd_replay->add_option("--n", replay_n, "tuple size n >= 2")->required();
    cmd_replay->add_option("--p", replay_p, "pivot 1 <= p < n")->required();

    // density
    auto* cmd_density = app.add_subcommand("density", "finite-window upper Banach density");
    std::string density_set;
    unsigned density_window = 1;
    cmd_density->add_option("--window", density_window, "minimum window length")->required();
    cmd_density->add_option("--set", density_set, "integer set file")->required();

    // rel-density
    auto* cmd_rel = app.add_subcommand("rel-density", "density of A relative to S");
    std::string rel_a, rel_s, rel_tol = "0";
    unsigned rel_window = 1;
    cmd_rel->add_option("--window", rel_window, "minimum window length")->required();
    cmd_rel->add_option("--set", rel_a, "file for A")->required();
    cmd_rel->add_option("--ambient", rel_s, "file for S")->required();
    cmd_rel->add_option("--tol", rel_tol, "ambient density tolerance (exact rational)");

    // ap
    auto* cmd_ap = app.add_subcommand("ap", "least k-term arithmetic progression");
    std::string ap_set;
    unsigned ap_k = 3;
    cmd_ap->add_option("--k", ap_k, "progression length")->required();
    cmd_ap->add_option("--set", ap_set, "integer set file")->required();

    // ap-free
    auto* cmd_apfree = app.add_subcommand("ap-free", "largest AP-free subset of [0,N)");
    unsigned apfree_N = 9, apfree_k = 3;
    cmd_apfree->add_option("--N", apfree_N, "ground bound (<= 25)")->required();
    cmd_apfree->add_option("--k", apfree_k, "progression length (>= 3)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 2 : 0;
    }

    Output out;
    out.use_json = use_json;

    try {
        if (*cmd_parse) {
            out.command = "parse";
            if (!arg_formula_file.empty()) {
                std::istringstream in(read_file(arg_formula_file));
                json items = json::array();
                std::string line;
                std::size_t lineno = 0;
                while (std::getline(in, line)) {
                    ++lineno;
                    if (line.empty() || line[0] == '#') continue;
                    try {
                        Formula f = parse_formula(line, arg_extended);
                        std::string canon = render(f);
                        items.push_back({{"line", lineno}, {"formula", canon}});
                        out.text(canon);
                    } catch (const Error& e) {
                        throw Error(e.kind(),
                                    arg_formula_file + ":" + std::to_string(lineno) + ": " +
                                        e.what());
                    }
                }
                out.result = {{"formulas", items}};
            } else {
                if (arg_formula.empty())
                    throw Error(ErrorKind::bad_argument, "need a formula or --file");
                Formula f = parse_formula(arg_formula, arg_extended);
                std::string canon = render(f);
                out.result = {{"formula", canon},
                              {"admissible", is_admissible(f)},
                              {"free_variables", free_variables(f)}};
                out.text(canon);
            }
        } else if (*cmd_shift) {
            out.command = "shift";
            Formula f = parse_formula(shift_formula);
            std::string canon = render(shift_up(f, arg_r));
            out.result = {{"formula", canon}};
            out.text(canon);
        } else if (*cmd_ho) {
            out.command = "ho";
            Formula f = parse_formula(ho_formula);
            std::string canon = render(ho_instance(f, ho_r, Label::parse(ho_label)));
            out.result = {{"formula", canon}};
            out.text(canon);
        } else if (*cmd_gt) {
            out.command = "gt";
            Formula f = parse_formula(gt_formula, true);
            std::string canon = render(gt_instance(f, Label::parse(gt_label), gt_var));
            out.result = {{"formula", canon}};
            out.text(canon);
        } else if (*cmd_eval) {
            out.command = "eval";
            Formula f = parse_formula(eval_formula_text, eval_extended);
            Env env;
            for (const auto& binding : eval_lets) {
                auto eq = binding.find('=');
                if (eq == std::string::npos)
                    throw Error(ErrorKind::bad_argument, "--let expects var=value");
                env[binding.substr(0, eq)] = parse_value(binding.substr(eq + 1), scales);
            }
            Domains dom;
            for (const auto& d : eval_domains) {
                auto eq = d.find('=');
                if (eq == std::string::npos)
                    throw Error(ErrorKind::bad_argument, "--domain expects var=v1;v2;...");
                std::string var = d.substr(0, eq);
                std::string body = d.substr(eq + 1);
                std::vector<Value> values;
                std::size_t start = 0;
                for (std::size_t k = 0; k <= body.size(); ++k) {
                    if (k == body.size() || body[k] == ';') {
                        std::string piece = body.substr(start, k - start);
                        bool blank = true;
                        for (char ch : piece)
                            if (!std::isspace(static_cast<unsigned char>(ch))) blank = false;
                        if (!blank) values.push_back(parse_value(piece, scales));
                        start = k + 1;
                    }
                }
                dom[var] = std::move(values);
            }
            bool v = eval_formula(f, env, dom);
            out.result = {{"value", v}};
            out.text(v ? "true" : "false");
        } else if (*cmd_num) {
            out.command = "num";
            Num x = Num::parse(num_expr, scales);
            out.result = {{"value", x.render()}, {"support", x.support().render()}};
            out.text(x.render());
        } else if (*cmd_cmp) {
            out.command = "cmp";
            Cmp c = cmp(Num::parse(cmp_x, scales), Num::parse(cmp_y, scales));
            out.result = {{"order", cmp_name(c)}};
            out.text(cmp_name(c));
        } else if (*cmd_shadow) {
            out.command = "shadow";
            if (shadow_r > scales)
                throw Error(ErrorKind::bad_argument,
                            "level exceeds the configured scale count");
            Num x = shadow(Num::parse(shadow_expr, scales), shadow_r);
            out.result = {{"value", x.render()}};
            out.text(x.render());
        } else if (*cmd_classify) {
            out.command = "classify";
            auto c = classify(Num::parse(classify_expr, scales), classify_r);
            out.result = {{"limited", c.limited}, {"infinitesimal", c.infinitesimal}};
            out.text(std::string("limited: ") + (c.limited ? "true" : "false") +
                     ", infinitesimal: " + (c.infinitesimal ? "true" : "false"));
        } else if (*cmd_level) {
            out.command = "level";
            Num x = Num::parse(level_expr, scales);
            Label s = x.support();
            out.result = {{"support", s.render()}};
            std::string line = s.render();
            if (!level_label.empty()) {
                bool inl = x.in_level(Label::parse(level_label));
                out.result["in_level"] = inl;
                line += inl ? " (in level)" : " (not in level)";
            }
            out.text(line);
        } else if (*cmd_embed) {
            out.command = "embed";
            Label from = Label::parse(embed_from);
            Label to = Label::parse(embed_to);
            if ((!from.empty() && from.max() >= scales) || (!to.empty() && to.max() >= scales))
                throw Error(ErrorKind::bad_argument,
                            "label index exceeds the configured scale count");
            Num x = embed(Num::parse(embed_expr, scales), from, to);
            out.result = {{"value", x.render()}};
            out.text(x.render());
        } else if (*cmd_deriv) {
            out.command = "deriv";
            RatFunc f = RatFunc::parse(deriv_f, scales);
            Num d = derivative_at(f, Num::parse(deriv_at, scales), scales);
            out.result = {{"value", d.render()}};
            out.text(d.render());
        } else if (*cmd_ufcheck) {
            out.command = "uf-check";
            if (!uf_family.empty()) {
                json fam = json::parse(uf_family);
                std::vector<std::uint64_t> masks;
                for (const auto& subset : fam) {
                    std::uint64_t m = 0;
                    for (const auto& el : subset) m |= std::uint64_t(1) << el.get<unsigned>();
                    masks.push_back(m);
                }
                bool ok = is_ultrafilter(masks, uf_size);
                out.result = {{"is_ultrafilter", ok}};
                out.text(ok ? "ultrafilter" : "not an ultrafilter");
            } else {
                auto list = all_ultrafilters(uf_size, uf_exhaustive);
                bool all_ok = true;
                json items = json::array();
                for (const auto& u : list) {
                    bool ok = is_ultrafilter(u);
                    all_ok = all_ok && ok;
                    items.push_back({{"principal_point", u.ground.names[principal_point(u)]},
                                     {"is_ultrafilter", ok}});
                }
                out.result = {{"count", list.size()},
                              {"mode", uf_exhaustive ? "exhaustive" : "principal"},
                              {"all_pass", all_ok},
                              {"ultrafilters", items}};
                out.text(std::to_string(list.size()) + " ultrafilters over a " +
                         std::to_string(uf_size) + "-element set; verification " +
                         (all_ok ? "passed" : "FAILED"));
            }
        } else if (*cmd_uft) {
            out.command = "uf-tensor";
            auto U = principal_ultrafilter(base_ground(uft_isize), uft_ipoint);
            if (!uft_coh_a.empty() || !uft_coh_b.empty()) {
                Label a = Label::parse(uft_coh_a);
                Label b = Label::parse(uft_coh_b);
                bool ok = check_coherence(U, a, b);
                out.result = {{"coherent", ok}};
                out.text(std::string("coherence ") + (ok ? "holds" : "FAILS") + " for " +
                         a.render() + " within " + b.render());
            } else if (!uft_project.empty()) {
                Label a = Label::parse(uft_project);
                auto P = project_to_label(U, a, static_cast<unsigned>(a.size()));
                bool ok = verify_ultrafilter_fast(P);
                out.result = family_json(P);
                out.result["is_ultrafilter"] = ok;
                out.text("principal at " + P.ground.names[principal_point(P)] +
                         (ok ? " (ultrafilter verified)" : " (VERIFICATION FAILED)"));
            } else if (uft_power >= 0) {
                auto P = tensor_power(U, static_cast<unsigned>(uft_power));
                bool ok = verify_ultrafilter_fast(P);
                out.result = family_json(P);
                out.result["is_ultrafilter"] = ok;
                out.text("principal at " + P.ground.names[principal_point(P)] +
                         (ok ? " (ultrafilter verified)" : " (VERIFICATION FAILED)"));
            } else {
                if (uft_jsize < 0 || uft_jpoint < 0)
                    throw Error(ErrorKind::bad_argument,
                                "need --j-size/--j-point, --power, --project or --coherence-a/b");
                auto V = principal_ultrafilter(base_ground(static_cast<unsigned>(uft_jsize)),
                                               static_cast<unsigned>(uft_jpoint));
                auto T = tensor(U, V);
                bool ok = verify_ultrafilter_fast(T);
                out.result = family_json(T);
                out.result["is_ultrafilter"] = ok;
                out.text("principal at " + T.ground.names[principal_point(T)] +
                         (ok ? " (ultrafilter verified)" : " (VERIFICATION FAILED)"));
            }
        } else if (*cmd_los) {
            out.command = "uf-los";
            auto M = FiniteStructure::digraph(los_nodes, parse_edges(los_edges));
            auto U = principal_ultrafilter(base_ground(los_isize), los_ipoint);
            auto up = ultrapower(M, U);
            auto family = struct_formula_family(M);
            std::size_t checked = 0, failed = 0;
            std::string first_failure;
            for (const auto& f : family) {
                unsigned fs = f.free_slots();
                std::vector<std::size_t> params(fs, 0);
                for (;;) {
                    ++checked;
                    if (!los_check(M, U, f, params, &up)) {
                        ++failed;
                        if (first_failure.empty()) first_failure = f.render();
                    }
                    unsigned i = 0;
                    for (; i < fs; ++i) {
                        if (++params[i] < up.function_count) break;
                        params[i] = 0;
                    }
                    if (i == fs) break;
                    if (!los_all) break;
                }
            }
            out.result = {{"formulas", family.size()},
                          {"checks", checked},
                          {"failures", failed},
                          {"quotient_size", up.quotient.size()},
                          {"quotient_universe", up.quotient.universe}};
            if (!first_failure.empty()) out.result["first_failure"] = first_failure;
            out.text("checked " + std::to_string(checked) + " instances over " +
                     std::to_string(family.size()) + " formulas: " +
                     (failed ? std::to_string(failed) + " FAILURES" : "all equivalences hold"));
        } else if (*cmd_ramsey) {
            out.command = "ramsey";
            Coloring c = !ramsey_file.empty()
                             ? load_coloring(ramsey_file)
                             : (ramsey_gen == "parity-sum"
                                    ? Coloring::parity_sum(ramsey_n, ramsey_r, ramsey_N)
                                : ramsey_gen == "pentagon"
                                    ? Coloring::pentagon()
                                : ramsey_gen.rfind("constant:", 0) == 0
                                    ? Coloring::constant(ramsey_n, ramsey_r, ramsey_N,
                                                         static_cast<std::uint8_t>(
                                                             std::stoul(ramsey_gen.substr(9))))
                                    : throw Error(ErrorKind::bad_argument,
                                                  "need --coloring or a known --generator"));
            if (ramsey_greedy) {
                auto g = greedy_homogeneous(c);
                out.result = {{"set", intvec_json(g.set)},
                              {"sentinels", intvec_json(g.sentinels)},
                              {"base_color", g.base_color},
                              {"verified", g.verified}};
                out.text("A = " + intvec_text(g.set) + ", sentinels " + intvec_text(g.sentinels) +
                         ", color " + std::to_string(g.base_color) +
                         (g.verified ? " (verified)" : " (VERIFICATION FAILED)"));
            } else {
                if (ramsey_h == 0)
                    throw Error(ErrorKind::bad_argument, "--hsize is required for the search");
                auto H = find_homogeneous(c, ramsey_h);
                if (H) {
                    out.result = {{"homogeneous", intvec_json(*H)}};
                    out.text(intvec_text(*H));
                } else {
                    out.result = {{"homogeneous", nullptr}};
                    out.text("none");
                }
            }
        } else if (*cmd_replay) {
            out.command = "replay";
            auto rep = replay_side_conditions(replay_n, replay_p, scales, seed);
            json clauses = json::array();
            for (const auto& cl : rep.clauses)
                clauses.push_back({{"name", cl.name}, {"pass", cl.pass}, {"detail", cl.detail}});
            out.result = {{"n", rep.n}, {"p", rep.p}, {"all_pass", rep.all_pass()},
                          {"clauses", clauses}};
            for (const auto& cl : rep.clauses)
                out.text(std::string(cl.pass ? "pass" : "FAIL") + "  " + cl.name + ": " + cl.detail);
            out.text(rep.all_pass() ? "all clauses pass" : "CLAUSE FAILURES");
        } else if (*cmd_density) {
            out.command = "density";
            auto d = upper_banach_density(load_intset(density_set), density_window);
            out.result = {{"density", rat_to_string(d.value)}};
            if (d.witness) {
                out.witness = {{"start", d.witness->start}, {"length", d.witness->length}};
                out.text(rat_to_string(d.value) + " witness (" + std::to_string(d.witness->start) +
                         "," + std::to_string(d.witness->length) + ")");
            } else {
                out.text(rat_to_string(d.value));
            }
        } else if (*cmd_rel) {
            out.command = "rel-density";
            auto d = relative_density(load_intset(rel_a), load_intset(rel_s), rel_window,
                                      rat_parse(rel_tol));
            out.result = {{"density", rat_to_string(d.value)},
                          {"ambient_density", rat_to_string(d.ambient_density)}};
            if (d.witness) {
                out.witness = {{"start", d.witness->start}, {"length", d.witness->length}};
                out.text(rat_to_string(d.value) + " witness (" + std::to_string(d.witness->start) +
                         "," + std::to_string(d.witness->length) + ") at ambient density " +
                         rat_to_string(d.ambient_density));
            } else {
                out.text(rat_to_string(d.value));
            }
        } else if (*cmd_ap) {
            out.command = "ap";
            auto ap = find_k_ap(load_intset(ap_set), ap_k);
            if (ap) {
                out.result = {{"start", ap->first}, {"step", ap->second}};
                out.text("(" + std::to_string(ap->first) + "," + std::to_string(ap->second) + ")");
            } else {
                out.result = {{"progression", nullptr}};
                out.text("none");
            }
        } else if (*cmd_apfree) {
            out.command = "ap-free";
            auto r = max_ap_free_subset(apfree_N, apfree_k);
            out.result = {{"size", r.size}};
            out.witness = intvec_json(r.witness);
            out.text(std::to_string(r.size) + " witness " + intvec_text(r.witness));
        }
        return out.emit_ok();
    } catch (const Error& e) {
        return out.emit_error(e);
    } catch (const json::exception& e) {
        return out.emit_error(Error(ErrorKind::parse_error, e.what()));
    } catch (const std::exception& e) {
        return out.emit_error(Error(ErrorKind::bad_argument, e.what()));
    }
}
