// test_diagram.cpp — parser, type checker and evaluator for string-diagram terms

#include "doctest.h"
#include "vnalg/diagram.hpp"
#include "vnalg/scene.hpp"

#include <string>

using vnalg::cmat;
using vnalg::cplx;
using vnalg::error;
using vnalg::imat;
namespace numerics = vnalg::numerics;
using namespace vnalg::diagram;

namespace {
const std::string data_dir = VNALG_DATA_DIR;

environment factor_env() { return load_environment_file(data_dir + "/env/factor.json"); }
environment multiblock_env() { return load_environment_file(data_dir + "/env/multiblock.json"); }

std::string error_kind(const std::function<void()>& f) {
    try {
        f();
    } catch (const error& e) {
        return e.kind();
    }
    return "";
}
} // namespace

TEST_CASE("';' binds looser than '|', both left-associative") {
    CHECK(to_string(*parse("a | b ; c")) == "((a | b) ; c)");
    CHECK(to_string(*parse("a ; b ; c")) == "((a ; b) ; c)");
    CHECK(to_string(*parse("a | (b ; c)")) == "(a | (b ; c))");
    CHECK(to_string(*parse("R* ; id(H, Hbar) # comment")) == "(R* ; id(H, Hbar))");
    CHECK(to_string(*parse("id(@A)")) == "id(@A)");
}

TEST_CASE("printing and reparsing is stable") {
    for (const char* s : {"(id(H) | S) ; (R* | id(H))", "x ; y*", "id(@B) | (a ; b)"}) {
        const std::string once = to_string(*parse(s));
        CHECK(to_string(*parse(once)) == once);
    }
}

TEST_CASE("syntax errors carry line and column") {
    try {
        parse("x ;\n  | y");
        FAIL("no exception");
    } catch (const error& e) {
        CHECK(e.kind() == "SyntaxError");
        CHECK(std::string(e.what()).find("2:3") != std::string::npos);
    }
    CHECK(error_kind([] { parse("R* ;"); }) == "SyntaxError");
    CHECK(error_kind([] { parse("id()"); }) == "SyntaxError");
    CHECK(error_kind([] { parse("x $ y"); }) == "SyntaxError");
    CHECK(error_kind([] { parse("(x"); }) == "SyntaxError");
}

TEST_CASE("objects print as left|wires|right") {
    const object o{"A", "B", {"H", "Hbar"}};
    CHECK(o.str() == "A|H,Hbar|B");
    CHECK(object{"A", "A", {}}.str() == "A|@|A");
}

TEST_CASE("environment: wire objects and realizations") {
    const environment env = factor_env();
    const object o = env.wire_object({"H", "Hbar"});
    CHECK(o.left == "A");
    CHECK(o.right == "A");
    CHECK(env.realize(o).dim() == 16);  // (ℂ² ⊗ Mat(2,3)) ⊠ (ℂ² ⊗ Mat(3,2)) = ℂ⁴ ⊗ Mat(2,2)
    CHECK(env.realize(object{"A", "A", {}}).dim() == 4);
    CHECK(error_kind([&] { env.wire_object({"H", "H"}); }) == "TypeError");
    CHECK(error_kind([&] { env.lookup("nope"); }) == "UnboundGenerator");
}

TEST_CASE("typecheck: boundaries of R, S and their adjoints") {
    const environment env = factor_env();
    const boundary r = typecheck(*parse("R"), env);
    CHECK(r.source.str() == "A|@|A");
    CHECK(r.target.str() == "A|H,Hbar|A");
    const boundary rs = typecheck(*parse("R*"), env);
    CHECK(rs.source == r.target);
    CHECK(rs.target == r.source);
}

TEST_CASE("typecheck rejects forbidden assemblies") {
    const environment env = factor_env();
    CHECK(error_kind([&] { typecheck(*parse("xi | eta"), env); }) == "TypeError");
    CHECK(error_kind([&] { typecheck(*parse("id(H) | id(H)"), env); }) == "TypeError");
    CHECK(error_kind([&] { typecheck(*parse("x ; R"), env); }) == "TypeError");
    CHECK(error_kind([&] { typecheck(*parse("zz"), env); }) == "UnboundGenerator");
    const environment mb = multiblock_env();
    CHECK(error_kind([&] { typecheck(*parse("xi | eta"), mb); }) == "TypeError");
}

TEST_CASE("zig-zags evaluate to identities on both environments") {
    for (const environment& env : {factor_env(), multiblock_env()}) {
        const evaluation l = evaluate(*parse("(id(H) | S) ; (R* | id(H))"), env);
        CHECK(l.type.source == l.type.target);
        CHECK(identity_residual(l.map) < 1e-10);
        CHECK(!l.type.log.empty());
        const evaluation r = evaluate(*parse("(S | id(Hbar)) ; (id(Hbar) | R*)"), env);
        CHECK(identity_residual(r.map) < 1e-10);
    }
}

TEST_CASE("R* R on a factor is the scalar dimension") {
    const environment env = factor_env();
    const auto [c, res] = scalar_value(evaluate(*parse("R ; R*"), env).map);
    CHECK(res < 1e-10);
    CHECK(c.real() == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(std::abs(c.imag()) < 1e-12);
}

TEST_CASE("vertical composition reads top to bottom") {
    const environment env = factor_env();
    const auto& x = env.lookup("x").map;
    const auto& y = env.lookup("y").map;
    const cmat xy = evaluate(*parse("x ; y"), env).map.matrix();
    CHECK(numerics::rel_diff(xy, (y * x).matrix()) < 1e-12);
    const cmat xs = evaluate(*parse("x*"), env).map.matrix();
    CHECK(numerics::rel_diff(xs, x.matrix().adjoint()) < 1e-12);
}

TEST_CASE("id(@A) is a two-sided unit for juxtaposition") {
    const environment env = factor_env();
    const cmat x = evaluate(*parse("x"), env).map.matrix();
    CHECK(numerics::rel_diff(evaluate(*parse("id(@A) | x"), env).map.matrix(), x) < 1e-12);
    CHECK(numerics::rel_diff(evaluate(*parse("x | id(@B)"), env).map.matrix(), x) < 1e-12);
}

TEST_CASE("interchange law") {
    const environment env = factor_env();
    const cmat a = evaluate(*parse("(x | id(Hbar)) ; (id(H) | xb)"), env).map.matrix();
    const cmat b = evaluate(*parse("x | xb"), env).map.matrix();
    CHECK(numerics::rel_diff(a, b) < 1e-12);
}

TEST_CASE("bundled corpus passes through the scene runner") {
    const auto env = factor_env();
    const vnalg::scene::diagram_check ok{"zz", "(id(H) | S) ; (R* | id(H))", "", "identity"};
    CHECK(vnalg::scene::run_diagram_check(ok, env).pass);
    const vnalg::scene::diagram_check bad{"v", "xi | eta", "", "type_error"};
    CHECK(vnalg::scene::run_diagram_check(bad, env).pass);
    const vnalg::scene::diagram_check wrong{"w", "x", "", "identity"};
    CHECK(!vnalg::scene::run_diagram_check(wrong, env).pass);
}

TEST_CASE("inline environments: algebra C is reserved, bindings validated") {
    CHECK(error_kind([] { load_environment(R"({"algebras":{"C":[2]}})"); }) == "TypeError");
    CHECK(error_kind([] { load_environment("{not json"); }) == "ParseError");
    const environment env = load_environment(R"({
        "algebras": {"A": [2]},
        "bimodules": {"H": {"left": "A", "right": "C", "multiplicities": [[1]]}, "Hb": {"conjugate": "H"}},
        "bindings": {"R": {"duality": "canonical", "of": "H", "bar": "Hb", "map": "R"},
                     "S": {"duality": "canonical", "of": "H", "bar": "Hb", "map": "S"}}})");
    CHECK(identity_residual(evaluate(*parse("(id(H) | S) ; (R* | id(H))"), env).map) < 1e-12);
    const auto [c, r] = scalar_value(evaluate(*parse("S ; S*"), env).map);
    CHECK(r < 1e-12);
    CHECK(c.real() == doctest::Approx(1.0));
}
