// scene.hpp — JSON scenes consumed by the command-line tool

#pragma once

#include "vnalg/diagram.hpp"
#include "vnalg/index.hpp"

#include <optional>
#include <string>
#include <vector>

namespace vnalg::scene {

namespace bm = vnalg::bimodule;
using vnalg::algebra::algebra;
using vnalg::algebra::functional;
using vnalg::algebra::homomorphism;

// A pair of diagram terms with the relation they should satisfy.
struct diagram_check {
    std::string name;
    std::string lhs, rhs;    // term text; rhs empty unless expect is "equal" or "equal_scalar"
    std::string expect;      // "identity", "equal", "equal_scalar", "type_error"
};

// Named objects; vectors of names keep the file order for deterministic output.
struct scene {
    std::map<std::string, algebra> algebras;
    std::map<std::string, homomorphism> homomorphisms;
    std::map<std::string, bm::bimodule> bimodules;
    std::map<std::string, functional> functionals;
    std::map<std::string, index::inequality_config> configurations;
    std::vector<std::string> algebra_order, homomorphism_order, bimodule_order, functional_order, configuration_order;
    std::map<std::string, std::string> functional_algebra;  // functional -> algebra name
    std::vector<std::pair<std::string, std::string>> fusions;  // requested H ⊠ K pairs
    std::optional<diagram::environment> env;
    std::vector<diagram_check> diagrams;
};

// ParseError / TypeError / DimensionMismatch on malformed scenes. Relative paths resolve against base_dir.
scene load_scene(const std::string& json_text, const std::string& base_dir = ".");
scene load_scene_file(const std::string& path);

std::string read_file(const std::string& path);

// Outcome of a diagram check; residual compared against tol by the caller.
struct diagram_outcome {
    bool pass = false;
    double residual = 0;
    std::string detail;
};
diagram_outcome run_diagram_check(const diagram_check& c, const diagram::environment& env, double tol = 1e-9);

} // namespace vnalg::scene
