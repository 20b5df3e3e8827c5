// diagram.hpp — string-diagram terms: parse, typecheck, evaluate
//
// Grammar (.vnd files, '#' starts a comment):
//   term   := layer (';' layer)*          layers stacked top to bottom, input on top
//   layer  := atom ('|' atom)*            horizontal juxtaposition = fusion, left to right
//   atom   := '(' term ')' | 'id' '(' object ')' | NAME ['*']
//   object := NAME (',' NAME)* | '@' NAME  wires, or the empty wire list over an algebra

#pragma once

#include "vnalg/duality.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace vnalg::diagram {

namespace bm = vnalg::bimodule;
using vnalg::algebra::algebra;

// Wire list between two shaded regions; an empty list over A is realized as L²A.
struct object {
    std::string left, right;          // algebra names
    std::vector<std::string> wires;   // bimodule names
    std::string str() const;
    friend bool operator==(const object& x, const object& y) {
        return x.left == y.left && x.right == y.right && x.wires == y.wires;
    }
    friend bool operator!=(const object& x, const object& y) { return !(x == y); }
};

enum class node { id, gen, vcomp, hcomp };

struct term {
    node kind = node::gen;
    std::string name;                 // gen: generator name (a trailing '*' denotes the adjoint)
    std::vector<std::string> wires;   // id: wire names, or {"@A"} for the empty list over A
    std::shared_ptr<const term> a, b; // vcomp: a on top of b; hcomp: a left of b
    int line = 1, col = 1;
};
using term_ptr = std::shared_ptr<const term>;

// SyntaxError with line:column.
term_ptr parse(const std::string& text);
std::string to_string(const term& t);

struct binding {
    object source, target;
    bm::bimodule_map map;  // realized on the folded objects
    std::string kind;      // "duality", "endo", "map", "multiplier", "vector"
};

struct environment {
    std::map<std::string, algebra> algebras;  // always contains "C" = ℂ
    std::map<std::string, bm::bimodule> bimodules;
    std::map<std::string, std::string> bimodule_left, bimodule_right;  // algebra names
    std::map<std::string, binding> bindings;

    environment();
    void add_algebra(const std::string& name, const algebra& A);
    void add_bimodule(const std::string& name, const std::string& left, const std::string& right, const imat& mult);
    void add_binding(const std::string& name, binding b);  // checks dimensions against the objects
    const binding& lookup(const std::string& name) const;  // UnboundGenerator
    // ((H₁ ⊠ H₂) ⊠ ...) ⊠ H_n, or L²A for the empty list
    bm::bimodule realize(const object& o) const;
    object wire_object(const std::vector<std::string>& wires) const;  // TypeError on mismatched wires
};

// JSON environment: {"algebras":{..}, "bimodules":{..}, "bindings":{..}}; see README.
environment load_environment(const std::string& json_text);
environment load_environment_file(const std::string& path);

struct boundary {
    object source, target;
    bm::linearity lin = bm::linearity::bilinear;
    std::vector<std::string> log;  // structural isomorphisms inserted by the checker
};
// TypeError naming the offending node.
boundary typecheck(const term& t, const environment& env);

struct evaluation {
    boundary type;
    bm::bimodule_map map;
};
evaluation evaluate(const term& t, const environment& env);

// Helpers for assertions on evaluated diagrams.
double identity_residual(const bm::bimodule_map& f);
// c with f ≈ c·1 and the residual |f - c·1|
std::pair<cplx, double> scalar_value(const bm::bimodule_map& f);

} // namespace vnalg::diagram
