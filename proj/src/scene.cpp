// scene.cpp — JSON scene loading

#include "vnalg/scene.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace vnalg::scene {

using json = nlohmann::ordered_json;
using vnalg::algebra::element;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error("IOError", "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

imat to_imat(const json& j, const std::string& what) {
    if (!j.is_array() || j.empty() || !j[0].is_array()) throw error("ParseError", what + ": expected a nested integer array");
    imat m(j.size(), j[0].size());
    for (std::size_t r = 0; r < j.size(); ++r) {
        if (j[r].size() != j[0].size()) throw error("ParseError", what + ": ragged matrix");
        for (std::size_t c = 0; c < j[r].size(); ++c) m(r, c) = j[r][c].get<int>();
    }
    return m;
}

cmat to_cmat(const json& j, const std::string& what) {
    if (!j.is_array() || j.empty() || !j[0].is_array()) throw error("ParseError", what + ": expected a nested array");
    cmat m(j.size(), j[0].size());
    for (std::size_t r = 0; r < j.size(); ++r) {
        if (j[r].size() != j[0].size()) throw error("ParseError", what + ": ragged matrix");
        for (std::size_t c = 0; c < j[r].size(); ++c) {
            const json& x = j[r][c];
            m(r, c) = x.is_array() ? cplx(x.at(0).get<double>(), x.at(1).get<double>()) : cplx(x.get<double>(), 0);
        }
    }
    return m;
}

std::string resolve(const std::string& base_dir, const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? p : (std::filesystem::path(base_dir) / path).string();
}

// a term given inline or as a .vnd path
std::string term_text(const std::string& s, const std::string& base_dir) {
    if (s.size() > 4 && s.substr(s.size() - 4) == ".vnd") return read_file(resolve(base_dir, s));
    return s;
}

const algebra& find_algebra(const scene& sc, const json& j, const std::string& what) {
    const std::string name = j.get<std::string>();
    const auto it = sc.algebras.find(name);
    if (it == sc.algebras.end()) throw error("TypeError", what + ": unknown algebra '" + name + "'");
    return it->second;
}

bm::concrete_algebra concrete(const scene& sc, const json& j, const cmat& W, const std::string& what) {
    bm::concrete_algebra X{find_algebra(sc, j.at("algebra"), what), j.at("multiplicities").get<std::vector<int>>(), W};
    int D = 0;
    if (static_cast<int>(X.mult.size()) != X.abs.num_blocks())
        throw error("DimensionMismatch", what + ": one multiplicity per block required");
    for (int i = 0; i < X.abs.num_blocks(); ++i) D += X.abs.block(i) * X.mult[i];
    if (D != W.rows()) throw error("DimensionMismatch", what + ": representation has dimension " + std::to_string(D) +
                                                            ", space has " + std::to_string(W.rows()));
    return X;
}

} // namespace

scene load_scene(const std::string& text, const std::string& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw error("ParseError", std::string("scene: ") + e.what());
    }
    scene sc;
    try {
        sc.algebras["C"] = vnalg::algebra::trivial();
        const json algebras = j.value("algebras", json::object());
        for (const auto& [name, spec] : algebras.items()) {
            const json& blocks = spec.is_array() ? spec : spec.at("blocks");
            sc.algebras[name] = algebra(blocks.get<std::vector<int>>());
            sc.algebra_order.push_back(name);
        }
        const json homomorphisms = j.value("homomorphisms", json::object());
        for (const auto& [name, spec] : homomorphisms.items()) {
            const algebra& A = find_algebra(sc, spec.at("source"), name);
            const algebra& B = find_algebra(sc, spec.at("target"), name);
            homomorphism f = vnalg::algebra::canonical_embedding(A, B, to_imat(spec.at("multiplicities"), name));
            if (spec.contains("seed")) {
                rng_t rng(spec["seed"].get<std::uint64_t>());
                f = vnalg::algebra::random_conjugate(f, rng);
            }
            sc.homomorphisms[name] = f;
            sc.homomorphism_order.push_back(name);
        }
        const json bimodules = j.value("bimodules", json::object());
        for (const auto& [name, spec] : bimodules.items()) {
            const algebra& A = find_algebra(sc, spec.at("left"), name);
            const algebra& B = find_algebra(sc, spec.at("right"), name);
            sc.bimodules[name] = bm::bimodule(A, B, to_imat(spec.at("multiplicities"), name));
            sc.bimodule_order.push_back(name);
        }
        const json functionals = j.value("functionals", json::object());
        for (const auto& [name, spec] : functionals.items()) {
            const algebra& A = find_algebra(sc, spec.at("algebra"), name);
            functional phi;
            if (spec.contains("densities")) {
                phi.parent = A;
                const json& d = spec["densities"];
                if (static_cast<int>(d.size()) != A.num_blocks()) throw error("DimensionMismatch", name + ": one density per block");
                for (int i = 0; i < A.num_blocks(); ++i) {
                    cmat m = to_cmat(d[i], name);
                    if (m.rows() != A.block(i) || m.cols() != A.block(i))
                        throw error("DimensionMismatch", name + ": density block " + std::to_string(i) + " has the wrong size");
                    phi.densities.push_back(m);
                }
                if (!phi.is_positive()) throw error("TypeError", name + ": densities are not positive");
            } else if (spec.contains("random")) {
                rng_t rng(spec["random"].get<std::uint64_t>());
                phi = functional::random_positive(A, rng);
            } else {
                phi = functional::from_density(element::unit(A));
            }
            sc.functionals[name] = phi;
            sc.functional_algebra[name] = spec.at("algebra").get<std::string>();
            sc.functional_order.push_back(name);
        }
        const json configurations = j.value("configurations", json::object());
        for (const auto& [name, spec] : configurations.items()) {
            index::inequality_config c;
            if (spec.contains("random")) {
                const std::string kind = spec["random"];
                if (kind != "containing" && kind != "commuting")
                    throw error("ParseError", name + ": random configuration must be containing or commuting");
                rng_t rng(spec.value("seed", std::uint64_t(1)));
                c = index::random_config(rng, kind == "commuting");
            } else {
                const int D = spec.at("space").get<int>();
                cmat W = numerics::identity(D);
                if (spec.contains("unitary_seed")) {
                    rng_t rng(spec["unitary_seed"].get<std::uint64_t>());
                    W = numerics::random_unitary(D, rng);
                }
                c.N = concrete(sc, spec.at("N"), W, name + ".N");
                c.M = concrete(sc, spec.at("M"), W, name + ".M");
                c.A = concrete(sc, spec.at("A"), W, name + ".A");
            }
            c.name = name;
            sc.configurations[name] = c;
            sc.configuration_order.push_back(name);
        }
        const json fusions = j.value("fusions", json::array());
        for (const auto& pair : fusions) {
            const std::string h = pair.at(0), k = pair.at(1);
            if (!sc.bimodules.count(h) || !sc.bimodules.count(k)) throw error("TypeError", "fusion of unknown bimodules");
            sc.fusions.emplace_back(h, k);
        }
        if (j.contains("environment")) {
            const json& e = j["environment"];
            sc.env = e.is_string() ? diagram::load_environment_file(resolve(base_dir, e.get<std::string>()))
                                   : diagram::load_environment(e.dump());
        }
        const json diagrams = j.value("diagrams", json::array());
        for (const auto& d : diagrams) {
            diagram_check c{d.at("name"), term_text(d.at("lhs"), base_dir),
                            d.contains("rhs") ? term_text(d["rhs"], base_dir) : std::string(), d.at("expect")};
            if (!sc.env) throw error("TypeError", "diagram '" + c.name + "' needs an environment");
            sc.diagrams.push_back(c);
        }
    } catch (const json::exception& e) {
        throw error("ParseError", std::string("scene: ") + e.what());
    }
    return sc;
}

scene load_scene_file(const std::string& path) {
    return load_scene(read_file(path), std::filesystem::path(path).parent_path().string());
}

diagram_outcome run_diagram_check(const diagram_check& c, const diagram::environment& env, double tol) {
    diagram_outcome out;
    if (c.expect == "type_error") {
        try {
            diagram::typecheck(*diagram::parse(c.lhs), env);
            out.detail = "accepted an ill-typed term";
        } catch (const error& e) {
            out.pass = e.kind() == "TypeError";
            out.detail = e.what();
        }
        return out;
    }
    try {
        const auto lhs = diagram::evaluate(*diagram::parse(c.lhs), env);
        if (c.expect == "identity") {
            out.residual = diagram::identity_residual(lhs.map);
        } else if (c.expect == "equal" || c.expect == "equal_scalar") {
            const auto rhs = diagram::evaluate(*diagram::parse(c.rhs), env);
            // scalars may live on different L² spaces; maps must share a boundary
            if (c.expect == "equal" && (lhs.type.source != rhs.type.source || lhs.type.target != rhs.type.target)) {
                out.detail = "boundaries differ: " + lhs.type.source.str() + " → " + lhs.type.target.str() + " vs " +
                             rhs.type.source.str() + " → " + rhs.type.target.str();
                out.residual = std::numeric_limits<double>::infinity();
                return out;
            }
            if (c.expect == "equal") {
                out.residual = numerics::rel_diff(lhs.map.matrix(), rhs.map.matrix());
            } else {
                const auto [a, ra] = diagram::scalar_value(lhs.map);
                const auto [b, rb] = diagram::scalar_value(rhs.map);
                out.residual = std::abs(a - b) + ra + rb;
            }
        } else {
            throw error("ParseError", "unknown expectation '" + c.expect + "'");
        }
        out.pass = out.residual <= tol;
        if (out.detail.empty()) out.detail = lhs.type.source.str() + " → " + lhs.type.target.str();
    } catch (const error& e) {
        if (e.kind() == "ParseError") throw;
        out.detail = e.what();
        out.residual = std::numeric_limits<double>::infinity();
    }
    return out;
}

} // namespace vnalg::scene
