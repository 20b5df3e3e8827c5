// vnalg_cli.cpp — JSON front end: dim, index, fuse, normalize, eval, l2map, check
//
// Exit codes: 0 all requested assertions hold, 1 an assertion failed, 2 malformed input.

#include "vnalg/functor.hpp"
#include "vnalg/scene.hpp"
#include "vnalg/suites.hpp"
#include "vnalg/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>

#ifndef VNALG_DATA_DIR
#define VNALG_DATA_DIR "data"
#endif

namespace {

using json = nlohmann::ordered_json;
using namespace vnalg;
namespace bm = vnalg::bimodule;
namespace du = vnalg::duality;
namespace ix = vnalg::index;
namespace fn = vnalg::functor;
namespace dg = vnalg::diagram;

struct settings {
    std::string scene_path, env_path, diagram_path, term, suite = "all", data_dir = VNALG_DATA_DIR;
    std::uint64_t seed = 20240607;
    double tol = 1e-8;
    double trials = 1.0;
    int indent = 2;
    bool assert_identity = false, assert_normalized = false, assert_inequalities = false, longo = false;
    bool with_matrix = false;
    bool tol_given = false;  // otherwise suites keep their per-check thresholds
};

// ------------------------------------------------------------------ output helpers

json number(double x) {
    if (!std::isfinite(x)) return nullptr;
    return x;
}

// integer if every entry is within 1e-9 of one, otherwise doubles
json real_matrix(const cmat& m) {
    bool integral = true;
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c)
            integral = integral && std::abs(m(r, c) - std::round(m(r, c).real())) < 1e-9;
    json out = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c)
            if (integral) row.push_back(static_cast<long>(std::lround(m(r, c).real())));
            else row.push_back(number(m(r, c).real()));
        out.push_back(row);
    }
    return out;
}

json int_matrix(const imat& m) {
    json out = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        out.push_back(row);
    }
    return out;
}

// {"rows","cols","re","im"}; "im" omitted for real matrices
json complex_matrix(const cmat& m) {
    json re = json::array(), im = json::array();
    bool real = true;
    for (int r = 0; r < m.rows(); ++r) {
        json rr = json::array(), ri = json::array();
        for (int c = 0; c < m.cols(); ++c) {
            rr.push_back(number(m(r, c).real()));
            ri.push_back(number(m(r, c).imag()));
            real = real && std::abs(m(r, c).imag()) < 1e-14;
        }
        re.push_back(rr);
        im.push_back(ri);
    }
    json out = {{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}};
    if (!real) out["im"] = im;
    return out;
}

json complex_number(cplx z) { return json::array({number(z.real()), number(z.imag())}); }

json header(const std::string& command, const settings& s) {
    return {{"tool", "vnalg"},
            {"version", vnalg::version},
            {"command", command},
            {"seed", s.seed},
            {"tolerances",
             {{"assert", s.tol},
              {"kernel", tol::kernel},
              {"normalization", tol::normalization},
              {"inner", tol::inner}}}};
}

scene::scene require_scene(const settings& s) {
    if (s.scene_path.empty()) throw error("ParseError", "--scene is required");
    return scene::load_scene_file(s.scene_path);
}

json algebra_json(const algebra::algebra& A) { return A.blocks(); }

// ------------------------------------------------------------------ commands

int cmd_dim(const settings& s, json& out) {
    const scene::scene sc = require_scene(s);
    json homs = json::object(), bims = json::object();
    std::optional<json> first;
    for (const auto& name : sc.homomorphism_order) {
        const auto& f = sc.homomorphisms.at(name);
        const json d = real_matrix(ix::dim_matrix(f));
        homs[name] = {{"source", algebra_json(f.source)},
                      {"target", algebra_json(f.target)},
                      {"dim", d},
                      {"minimal_index", real_matrix(ix::minimal_index(f))}};
        if (!first) first = d;
    }
    for (const auto& name : sc.bimodule_order) {
        const auto& H = sc.bimodules.at(name);
        const json d = real_matrix(du::statistical_dimension(du::canonical_duality(H)));
        bims[name] = {{"multiplicities", int_matrix(H.mult)}, {"dim", d}};
        if (!first) first = d;
    }
    out["dim"] = first ? *first : json(nullptr);
    out["homomorphisms"] = homs;
    out["bimodules"] = bims;
    return 0;
}

json pp_json(const ix::pp_result& r) {
    return {{"value", number(r.value)},
            {"faithful", r.faithful},
            {"watatani_norm", number(r.watatani_norm)},
            {"consistent", r.consistent},
            {"quasi_basis_residual", number(r.quasi_basis_residual)}};
}

int cmd_index(const settings& s, json& out) {
    const scene::scene sc = require_scene(s);
    json homs = json::object(), configs = json::object();
    int failed = 0;
    for (const auto& name : sc.homomorphism_order) {
        const auto& f = sc.homomorphisms.at(name);
        const ix::cond_exp E0 = ix::minimal_expectation(f);
        const auto chk = ix::check_expectation(E0);
        json h = {{"dim", real_matrix(ix::dim_matrix(f))},
                  {"minimal_index", real_matrix(ix::minimal_index(f))},
                  {"minimal_expectation",
                   {{"unit_residual", chk.unit},
                    {"bimodularity_residual", chk.bimodularity},
                    {"positivity_defect", chk.positivity},
                    {"pp_index", pp_json(ix::pp_index(E0, s.seed))}}}};
        if (s.longo) {
            if (f.source.is_factor() && f.target.is_factor()) {
                const auto L = ix::longo_index(f, s.seed);
                h["longo"] = {{"value", number(L.value)},
                              {"minimal_value", number(L.minimal_value)},
                              {"distance_to_minimal", number(L.distance_to_minimal)},
                              {"evaluations", L.evaluations}};
            } else {
                h["longo"] = {{"skipped", "needs a factor inclusion"}};
            }
        }
        homs[name] = h;
    }
    for (const auto& name : sc.configuration_order) {
        json entries = json::array();
        for (const auto& e : ix::check_inequalities(sc.configurations.at(name), s.seed)) {
            json x = {{"name", e.name},
                      {"lhs", number(e.lhs)},
                      {"rhs", number(e.rhs)},
                      {"hypothesis", e.hypothesis},
                      {"informational", e.informational},
                      {"holds", e.holds}};
            if (!e.norms.empty()) {
                json n = json::object();
                for (const auto& [k, v] : e.norms) n[k] = number(v);
                x["norms"] = n;
            }
            if (e.hypothesis && !e.informational && !e.holds) ++failed;
            entries.push_back(x);
        }
        configs[name] = entries;
    }
    out["homomorphisms"] = homs;
    out["configurations"] = configs;
    out["violations"] = failed;
    return s.assert_inequalities && failed ? 1 : 0;
}

int cmd_fuse(const settings& s, json& out) {
    const scene::scene sc = require_scene(s);
    std::vector<std::pair<std::string, std::string>> pairs = sc.fusions;
    if (pairs.empty())
        for (const auto& h : sc.bimodule_order)
            for (const auto& k : sc.bimodule_order)
                if (sc.bimodules.at(h).right == sc.bimodules.at(k).left) pairs.emplace_back(h, k);
    json res = json::array();
    for (const auto& [h, k] : pairs) {
        const auto& H = sc.bimodules.at(h);
        const auto& K = sc.bimodules.at(k);
        if (H.right != K.left)
            throw error("TypeError", h + " ⊠ " + k + ": middle algebras " + H.right.str() + " and " + K.left.str() +
                                         " differ");
        const auto fr = bm::fuse(H, K, s.tol);
        const cmat lu = bm::left_unitor(fr.object).matrix(), ru = bm::right_unitor(fr.object).matrix();
        res.push_back({{"left", h},
                       {"right", k},
                       {"multiplicities", int_matrix(fr.object.mult)},
                       {"dim", fr.object.dim()},
                       {"gram_dim", fr.gram_dim},
                       {"generators", fr.generators},
                       {"unitarity_residual", number(fr.unitarity_residual)},
                       {"gram_residual", number(fr.gram_residual)},
                       {"left_unitor_residual", number(numerics::unitary_residual(lu))},
                       {"right_unitor_residual", number(numerics::unitary_residual(ru))}});
    }
    out["fusions"] = res;
    return 0;
}

int cmd_normalize(const settings& s, json& out) {
    const scene::scene sc = require_scene(s);
    rng_t rng(s.seed);
    json res = json::object();
    bool ok = true;
    for (const auto& name : sc.bimodule_order) {
        const auto& H = sc.bimodules.at(name);
        const du::duality_data D = du::canonical_duality(H);
        const du::duality_data Ds = du::skew(D, bm::random_invertible_endo(H, rng));
        const auto n = du::normalize(H, Ds.Hbar, Ds.R, Ds.S);
        const double zz = du::zigzag_residual(D), nz = du::normalization_residual(D);
        ok = ok && zz <= s.tol && nz <= s.tol && n.zigzag_residual <= s.tol && n.normalization_residual <= s.tol;
        res[name] = {{"canonical", {{"zigzag_residual", number(zz)}, {"normalization_residual", number(nz)}}},
                     {"skewed",
                      {{"zigzag_residual", number(du::zigzag_residual(Ds))},
                       {"normalization_residual", number(du::normalization_residual(Ds))}}},
                     {"normalized",
                      {{"zigzag_residual", number(n.zigzag_residual)},
                       {"normalization_residual", number(n.normalization_residual)}}},
                     {"dim", real_matrix(du::statistical_dimension(n.D))}};
    }
    out["bimodules"] = res;
    out["pass"] = ok;
    return s.assert_normalized && !ok ? 1 : 0;
}

json evaluation_json(const dg::evaluation& ev, bool with_matrix) {
    json j = {{"source", ev.type.source.str()},
              {"target", ev.type.target.str()},
              {"linearity", bm::to_string(ev.type.lin)},
              {"structural", ev.type.log},
              {"shape", {ev.map.target.dim(), ev.map.source.dim()}}};
    if (with_matrix) j["matrix"] = complex_matrix(ev.map.matrix());
    const auto [c, r] = dg::scalar_value(ev.map);
    if (r <= 1e-9) j["scalar"] = complex_number(c);
    return j;
}

int cmd_eval(const settings& s, json& out) {
    std::optional<scene::scene> sc;
    if (!s.scene_path.empty()) sc = scene::load_scene_file(s.scene_path);
    dg::environment env;
    if (!s.env_path.empty()) env = dg::load_environment_file(s.env_path);
    else if (sc && sc->env) env = *sc->env;
    else throw error("ParseError", "--env or a scene with an environment is required");

    std::string text = s.term;
    if (!s.diagram_path.empty()) text = scene::read_file(s.diagram_path);
    if (text.empty()) {
        // no term given: run the scene's diagram assertions
        if (!sc || sc->diagrams.empty()) throw error("ParseError", "--diagram or --term is required");
        json res = json::array();
        int bad = 0;
        for (const auto& d : sc->diagrams) {
            const auto r = scene::run_diagram_check(d, env, s.tol);
            bad += !r.pass;
            res.push_back({{"name", d.name},
                           {"expect", d.expect},
                           {"pass", r.pass},
                           {"residual", number(r.residual)},
                           {"detail", r.detail}});
        }
        out["diagrams"] = res;
        out["failures"] = bad;
        return bad ? 1 : 0;
    }
    const dg::term_ptr t = dg::parse(text);
    const dg::evaluation ev = dg::evaluate(*t, env);
    out["term"] = dg::to_string(*t);
    out["result"] = evaluation_json(ev, s.with_matrix || !s.assert_identity);
    if (s.assert_identity) {
        const double r = ev.type.source == ev.type.target ? dg::identity_residual(ev.map)
                                                          : std::numeric_limits<double>::infinity();
        out["identity_residual"] = number(r);
        out["pass"] = r <= s.tol;
        return r <= s.tol ? 0 : 1;
    }
    return 0;
}

int cmd_l2map(const settings& s, json& out) {
    const scene::scene sc = require_scene(s);
    json res = json::object();
    for (const auto& name : sc.homomorphism_order) {
        const auto& f = sc.homomorphisms.at(name);
        const fn::l2_map L = fn::l2_of_hom(f);
        const fn::l2_map V = fn::l2_iso(f);
        json j = {{"source", algebra_json(f.source)},
                  {"target", algebra_json(f.target)},
                  {"scale", L.scale},
                  {"defect", L.defect},
                  {"extension_residual", number(L.extension_residual)},
                  {"center_in_image", fn::center_in_image(f)},
                  {"isometry_residual", number(numerics::isometry_residual(V.matrix))},
                  {"matrix", complex_matrix(L.matrix)}};
        if (s.with_matrix) j["isometric_part"] = complex_matrix(V.matrix);
        res[name] = j;
    }
    out["homomorphisms"] = res;
    return 0;
}

int cmd_check(const settings& s, json& out) {
    std::optional<scene::scene> sc;
    if (!s.scene_path.empty()) sc = scene::load_scene_file(s.scene_path);
    suites::options opt;
    opt.seed = s.seed;
    opt.tol = s.tol_given ? s.tol : 0;
    opt.trials = s.trials;
    opt.data_dir = s.data_dir;
    opt.sc = sc ? &*sc : nullptr;
    std::vector<std::string> names;
    if (s.suite == "all") names = suites::suite_names();
    else names.push_back(s.suite);
    json res = json::array();
    int passed = 0, failed = 0, known_red = 0;
    for (const auto& name : names) {
        const auto r = suites::run_suite(name, opt);
        json checks = json::array();
        for (const auto& c : r.checks) {
            json x = {{"name", c.name},
                      {"pass", c.pass},
                      {"value", number(c.value)},
                      {"threshold", number(c.threshold)},
                      {"detail", c.detail}};
            if (c.known_red) x["known_red"] = true;
            checks.push_back(x);
            if (c.pass) ++passed;
            else if (c.known_red) ++known_red;
            else ++failed;
        }
        res.push_back({{"suite", r.name},
                       {"title", r.title},
                       {"passed", r.passed()},
                       {"failed", r.failed()},
                       {"seconds", r.seconds},
                       {"checks", checks}});
    }
    out["suites"] = res;
    out["passed"] = passed;
    out["failed"] = failed;
    out["known_red"] = known_red;
    return failed ? 1 : 0;
}

void emit(const json& j, int indent) { std::cout << j.dump(indent < 0 ? -1 : indent) << "\n"; }

} // namespace

int main(int argc, char** argv) {
    settings s;
    CLI::App app{"vnalg: bimodules, duality and index over multi-matrix algebras"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--scene", s.scene_path, "JSON scene file");
    app.add_option("--seed", s.seed, "random seed")->capture_default_str();
    app.add_option("--tol", s.tol, "tolerance for assertions")->capture_default_str();
    app.add_option("--json-indent", s.indent, "JSON indentation (-1: compact)")->capture_default_str();

    auto* dim = app.add_subcommand("dim", "statistical dimension matrices");
    auto* idx = app.add_subcommand("index", "conditional expectations, indices, inequalities");
    idx->add_flag("--longo", s.longo, "minimize the Pimsner–Popa index over expectations (factor inclusions)");
    idx->add_flag("--assert-inequalities", s.assert_inequalities, "exit 1 if an inequality is violated");
    auto* fuse = app.add_subcommand("fuse", "Connes fusion of scene bimodules");
    auto* norm = app.add_subcommand("normalize", "normalize skewed duality data");
    norm->add_flag("--assert-normalized", s.assert_normalized, "exit 1 if a residual exceeds --tol");
    auto* eval = app.add_subcommand("eval", "evaluate a string diagram");
    eval->add_option("--env", s.env_path, "JSON environment file");
    eval->add_option("--diagram", s.diagram_path, ".vnd diagram file");
    eval->add_option("--term", s.term, "diagram term given inline");
    eval->add_flag("--assert-identity", s.assert_identity, "exit 1 unless the result is the identity");
    eval->add_flag("--matrix", s.with_matrix, "include the evaluated matrix");
    auto* l2 = app.add_subcommand("l2map", "the L² map of each scene homomorphism");
    l2->add_flag("--matrix", s.with_matrix, "include the isometric part");
    auto* chk = app.add_subcommand("check", "run property suites");
    chk->add_option("--suite", s.suite, "suite name or 'all'")->capture_default_str();
    chk->add_option("--trials", s.trials, "multiplier on random trial counts")->capture_default_str();
    chk->add_option("--data", s.data_dir, "bundled data directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        emit({{"error", {{"kind", "UsageError"}, {"message", e.what()}}}}, s.indent);
        return 2;
    }
    s.tol_given = app.get_option("--tol")->count() > 0;

    const std::vector<std::pair<CLI::App*, int (*)(const settings&, json&)>> commands = {
        {dim, cmd_dim}, {idx, cmd_index}, {fuse, cmd_fuse}, {norm, cmd_normalize},
        {eval, cmd_eval}, {l2, cmd_l2map}, {chk, cmd_check}};
    for (const auto& [sub, run] : commands) {
        if (!sub->parsed()) continue;
        json out = header(sub->get_name(), s);
        try {
            const int code = run(s, out);
            emit(out, s.indent);
            return code;
        } catch (const vnalg::error& e) {
            std::string msg = e.what();
            if (const auto p = msg.find(": "); p != std::string::npos) msg = msg.substr(p + 2);
            emit({{"error", {{"kind", e.kind()}, {"message", msg}}}}, s.indent);
            return 2;
        } catch (const std::exception& e) {
            emit({{"error", {{"kind", "InternalError"}, {"message", e.what()}}}}, s.indent);
            return 2;
        }
    }
    return 2;
}
