// diagram.cpp — parser, type checker and evaluator for string-diagram terms

#include "vnalg/diagram.hpp"

#include <json.hpp>

#include <cctype>
#include <fstream>
#include <functional>
#include <sstream>

namespace vnalg::diagram {

using vnalg::algebra::element;
using json = nlohmann::json;

std::string object::str() const {
    std::string s = left + "|";
    for (std::size_t k = 0; k < wires.size(); ++k) s += (k ? "," : "") + wires[k];
    if (wires.empty()) s += "@";
    return s + "|" + right;
}

// ------------------------------------------------------------------ parser

namespace {

enum class tok { name, star, semi, bar, lparen, rparen, comma, at, end };

struct token {
    tok kind;
    std::string text;
    int line, col;
};

std::string where(int line, int col) { return std::to_string(line) + ":" + std::to_string(col); }

std::vector<token> lex(const std::string& s) {
    std::vector<token> out;
    int line = 1, col = 1;
    std::size_t k = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t m = 0; m < n; ++m) {
            if (s[k] == '\n') ++line, col = 1;
            else ++col;
            ++k;
        }
    };
    while (k < s.size()) {
        const char c = s[k];
        if (c == '#') {
            while (k < s.size() && s[k] != '\n') advance(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        const int l = line, cc = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t e = k;
            while (e < s.size() && (std::isalnum(static_cast<unsigned char>(s[e])) || s[e] == '_')) ++e;
            out.push_back({tok::name, s.substr(k, e - k), l, cc});
            advance(e - k);
            continue;
        }
        tok t;
        switch (c) {
        case '*': t = tok::star; break;
        case ';': t = tok::semi; break;
        case '|': t = tok::bar; break;
        case '(': t = tok::lparen; break;
        case ')': t = tok::rparen; break;
        case ',': t = tok::comma; break;
        case '@': t = tok::at; break;
        default:
            throw error("SyntaxError", where(l, cc) + ": unexpected character '" + std::string(1, c) + "'");
        }
        out.push_back({t, std::string(1, c), l, cc});
        advance(1);
    }
    out.push_back({tok::end, "", line, col});
    return out;
}

std::string describe(const token& t) { return t.kind == tok::end ? "end of input" : "'" + t.text + "'"; }

class parser {
public:
    explicit parser(std::vector<token> toks) : toks_(std::move(toks)) {}

    term_ptr run() {
        term_ptr t = parse_term();
        if (peek().kind != tok::end) fail("expected ';', '|' or end of input");
        return t;
    }

private:
    std::vector<token> toks_;
    std::size_t pos_ = 0;

    const token& peek() const { return toks_[pos_]; }
    const token& take() { return toks_[pos_++]; }
    [[noreturn]] void fail(const std::string& what) const {
        throw error("SyntaxError", where(peek().line, peek().col) + ": " + what + ", found " + describe(peek()));
    }
    void expect(tok k, const char* what) {
        if (peek().kind != k) fail(std::string("expected ") + what);
        take();
    }

    term_ptr binary(node k, term_ptr a, term_ptr b, const token& at) {
        auto t = std::make_shared<term>();
        t->kind = k;
        t->a = std::move(a);
        t->b = std::move(b);
        t->line = at.line;
        t->col = at.col;
        return t;
    }

    term_ptr parse_term() {
        term_ptr t = parse_layer();
        while (peek().kind == tok::semi) {
            const token op = take();
            t = binary(node::vcomp, t, parse_layer(), op);
        }
        return t;
    }

    term_ptr parse_layer() {
        term_ptr t = parse_atom();
        while (peek().kind == tok::bar) {
            const token op = take();
            t = binary(node::hcomp, t, parse_atom(), op);
        }
        return t;
    }

    term_ptr parse_atom() {
        const token start = peek();
        if (start.kind == tok::lparen) {
            take();
            term_ptr t = parse_term();
            expect(tok::rparen, "')'");
            return t;
        }
        if (start.kind != tok::name) fail("expected a generator, 'id(...)' or '('");
        take();
        auto t = std::make_shared<term>();
        t->line = start.line;
        t->col = start.col;
        if (start.text == "id" && peek().kind == tok::lparen) {
            take();
            t->kind = node::id;
            if (peek().kind == tok::at) {
                take();
                if (peek().kind != tok::name) fail("expected an algebra name after '@'");
                t->wires.push_back("@" + take().text);
            } else {
                if (peek().kind != tok::name) fail("expected a wire name");
                t->wires.push_back(take().text);
                while (peek().kind == tok::comma) {
                    take();
                    if (peek().kind != tok::name) fail("expected a wire name");
                    t->wires.push_back(take().text);
                }
            }
            expect(tok::rparen, "')'");
            return t;
        }
        t->kind = node::gen;
        t->name = start.text;
        if (peek().kind == tok::star) {
            take();
            t->name += "*";
        }
        return t;
    }
};

} // namespace

term_ptr parse(const std::string& text) { return parser(lex(text)).run(); }

std::string to_string(const term& t) {
    switch (t.kind) {
    case node::id: {
        std::string s = "id(";
        for (std::size_t k = 0; k < t.wires.size(); ++k) s += (k ? ", " : "") + t.wires[k];
        return s + ")";
    }
    case node::gen: return t.name;
    case node::vcomp: return "(" + to_string(*t.a) + " ; " + to_string(*t.b) + ")";
    case node::hcomp: return "(" + to_string(*t.a) + " | " + to_string(*t.b) + ")";
    }
    return "";
}

// ------------------------------------------------------------- environment

environment::environment() { algebras["C"] = vnalg::algebra::trivial(); }

void environment::add_algebra(const std::string& name, const algebra& A) {
    if (name == "C" && !A.is_trivial()) throw error("TypeError", "algebra name 'C' is reserved for the complex numbers");
    algebras[name] = A;
}

void environment::add_bimodule(const std::string& name, const std::string& left, const std::string& right,
                               const imat& mult) {
    if (!algebras.count(left) || !algebras.count(right))
        throw error("TypeError", "bimodule " + name + ": unknown algebra " + (algebras.count(left) ? right : left));
    bimodules[name] = bm::bimodule(algebras.at(left), algebras.at(right), mult);
    bimodule_left[name] = left;
    bimodule_right[name] = right;
}

void environment::add_binding(const std::string& name, binding b) {
    if (b.map.source != realize(b.source) || b.map.target != realize(b.target))
        throw error("DimensionMismatch", "binding " + name + ": map does not match its declared boundary");
    bindings[name] = std::move(b);
}

const binding& environment::lookup(const std::string& name) const {
    const auto it = bindings.find(name);
    if (it == bindings.end()) throw error("UnboundGenerator", "generator '" + name + "' is not bound");
    return it->second;
}

object environment::wire_object(const std::vector<std::string>& wires) const {
    object o;
    for (std::size_t k = 0; k < wires.size(); ++k) {
        const auto it = bimodule_left.find(wires[k]);
        if (it == bimodule_left.end()) throw error("TypeError", "unknown wire '" + wires[k] + "'");
        if (k == 0) o.left = it->second;
        else if (bimodule_right.at(wires[k - 1]) != it->second)
            throw error("TypeError", "wires " + wires[k - 1] + " and " + wires[k] + " meet over different algebras (" +
                                         bimodule_right.at(wires[k - 1]) + " vs " + it->second + ")");
        o.wires.push_back(wires[k]);
    }
    if (!wires.empty()) o.right = bimodule_right.at(wires.back());
    return o;
}

bm::bimodule environment::realize(const object& o) const {
    if (o.wires.empty()) {
        if (o.left != o.right) throw error("TypeError", "empty wire list between different algebras");
        return bm::l2_bimodule(algebras.at(o.left));
    }
    bm::bimodule H = bimodules.at(o.wires[0]);
    for (std::size_t k = 1; k < o.wires.size(); ++k) H = bm::fuse_object(H, bimodules.at(o.wires[k]));
    return H;
}

namespace {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) h = (h ^ c) * 1099511628211ull;
    return h;
}

imat json_imat(const json& j) {
    if (!j.is_array() || j.empty() || !j[0].is_array()) throw error("ParseError", "multiplicity matrix must be a nested array");
    imat m(j.size(), j[0].size());
    for (std::size_t r = 0; r < j.size(); ++r) {
        if (j[r].size() != j[0].size()) throw error("ParseError", "ragged multiplicity matrix");
        for (std::size_t c = 0; c < j[r].size(); ++c) m(r, c) = j[r][c].get<int>();
    }
    return m;
}

const std::string& find_conjugate(const environment& env, const std::map<std::string, std::string>& conj_of,
                                  const std::string& of, const json& spec) {
    if (spec.contains("bar")) {
        const std::string& bar = spec["bar"].get_ref<const std::string&>();
        if (!env.bimodules.count(bar) || env.bimodules.at(bar) != bm::conjugate(env.bimodules.at(of)))
            throw error("TypeError", "'" + bar + "' is not the conjugate of '" + of + "'");
        return spec["bar"].get_ref<const std::string&>();
    }
    for (const auto& [name, base] : conj_of)
        if (base == of) return name;
    throw error("TypeError", "no conjugate of '" + of + "' declared");
}

} // namespace

environment load_environment(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw error("ParseError", std::string("environment: ") + e.what());
    }
    environment env;
    try {
        const std::uint64_t seed = j.value("seed", std::uint64_t(1));
        const json algs = j.value("algebras", json::object());
        for (const auto& [name, blocks] : algs.items())
            env.add_algebra(name, algebra(blocks.get<std::vector<int>>()));
        std::map<std::string, std::string> conj_of;
        // plain bimodules first, then conjugates and L² modules
        const json mods = j.value("bimodules", json::object());
        for (const auto& [name, spec] : mods.items())
            if (spec.contains("multiplicities"))
                env.add_bimodule(name, spec.at("left"), spec.at("right"), json_imat(spec["multiplicities"]));
        for (const auto& [name, spec] : mods.items()) {
            if (spec.contains("conjugate")) {
                const std::string base = spec["conjugate"];
                if (!env.bimodules.count(base)) throw error("TypeError", "conjugate of unknown bimodule '" + base + "'");
                const bm::bimodule Hb = bm::conjugate(env.bimodules.at(base));
                env.add_bimodule(name, env.bimodule_right.at(base), env.bimodule_left.at(base), Hb.mult);
                conj_of[name] = base;
            } else if (spec.contains("l2")) {
                const std::string A = spec["l2"];
                if (!env.algebras.count(A)) throw error("TypeError", "L² of unknown algebra '" + A + "'");
                env.add_bimodule(name, A, A, imat::Identity(env.algebras.at(A).num_blocks(), env.algebras.at(A).num_blocks()));
            } else if (!spec.contains("multiplicities")) {
                throw error("ParseError", "bimodule '" + name + "' needs multiplicities, conjugate or l2");
            }
        }
        std::map<std::string, duality::duality_data> dual_cache;
        const json binds = j.value("bindings", json::object());
        for (const auto& [name, spec] : binds.items()) {
            rng_t rng(spec.contains("seed") ? spec["seed"].get<std::uint64_t>() : seed * 1000003ull + fnv1a(name));
            auto bimod = [&](const char* key) -> const std::string& {
                const std::string& n = spec.at(key).get_ref<const std::string&>();
                if (!env.bimodules.count(n)) throw error("TypeError", "binding " + name + ": unknown bimodule '" + n + "'");
                return n;
            };
            binding b;
            if (spec.contains("duality")) {
                const std::string kind = spec["duality"], of = bimod("of");
                const std::string bar = find_conjugate(env, conj_of, of, spec);
                const std::string key = kind + "/" + of + "/" + std::to_string(spec.value("seed", std::uint64_t(0)));
                if (!dual_cache.count(key)) {
                    duality::duality_data D = duality::canonical_duality(env.bimodules.at(of));
                    if (kind == "skewed" || kind == "normalized") {
                        rng_t g(spec.value("seed", std::uint64_t(7)));
                        D = duality::skew(D, bm::random_invertible_endo(D.H, g));
                        if (kind == "normalized") D = duality::normalize(D.H, D.Hbar, D.R, D.S).D;
                    } else if (kind != "canonical") {
                        throw error("ParseError", "binding " + name + ": unknown duality kind '" + kind + "'");
                    }
                    dual_cache[key] = D;
                }
                const auto& D = dual_cache.at(key);
                const std::string A = env.bimodule_left.at(of), B = env.bimodule_right.at(of);
                const std::string which = spec.value("map", std::string(name.substr(0, 1)));
                if (which == "R") b = {object{A, A, {}}, object{A, A, {of, bar}}, D.R, "duality"};
                else if (which == "S") b = {object{B, B, {}}, object{B, B, {bar, of}}, D.S, "duality"};
                else throw error("ParseError", "binding " + name + ": map must be R or S");
            } else if (spec.contains("endo")) {
                const std::string of = bimod("of"), kind = spec["endo"];
                const bm::bimodule& H = env.bimodules.at(of);
                bm::bimodule_map m = kind == "identity" ? bm::identity_map(H) : bm::random_bilinear(H, H, rng);
                if (kind == "hermitian") m = (m + m.adjoint()) * 0.5;
                else if (kind == "positive") m = m.adjoint() * m;
                else if (kind != "random" && kind != "identity")
                    throw error("ParseError", "binding " + name + ": unknown endo kind '" + kind + "'");
                b = {env.wire_object({of}), env.wire_object({of}), m, "endo"};
            } else if (spec.contains("map")) {
                const std::string from = bimod("from"), to = bimod("to");
                const bm::bimodule &H = env.bimodules.at(from), &K = env.bimodules.at(to);
                if (H.left != K.left || H.right != K.right)
                    throw error("TypeError", "binding " + name + ": bilinear map between modules over different algebras");
                b = {env.wire_object({from}), env.wire_object({to}), bm::random_bilinear(H, K, rng), "map"};
            } else if (spec.contains("multiplier")) {
                const std::string of = bimod("of"), side = spec["multiplier"];
                const bm::bimodule& H = env.bimodules.at(of);
                const object o = env.wire_object({of});
                if (side == "left") {
                    const element a = element::random(H.left, rng);
                    b = {o, o, bm::bimodule_map{H, H, bm::linearity::right, {}, bm::left_action(H, a)}, "multiplier"};
                } else if (side == "right") {
                    const element a = element::random(H.right, rng);
                    b = {o, o, bm::bimodule_map{H, H, bm::linearity::left, {}, bm::right_action(H, a)}, "multiplier"};
                } else {
                    throw error("ParseError", "binding " + name + ": multiplier side must be left or right");
                }
            } else if (spec.contains("vector")) {
                const std::string of = bimod("of");
                const bm::bimodule& H = env.bimodules.at(of);
                const bm::bimodule one = bm::l2_bimodule(vnalg::algebra::trivial());
                cvec v = numerics::random_unit_vector(H.dim(), rng);
                b = {object{"C", "C", {}}, env.wire_object({of}), bm::bimodule_map{one, H, bm::linearity::plain, {}, cmat(v)}, "vector"};
            } else {
                throw error("ParseError", "binding " + name + ": unknown binding form");
            }
            env.add_binding(name, std::move(b));
        }
    } catch (const json::exception& e) {
        throw error("ParseError", std::string("environment: ") + e.what());
    }
    return env;
}

environment load_environment_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error("IOError", "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_environment(ss.str());
}

// -------------------------------------------------------------- checking

namespace {

std::string at(const term& t) { return where(t.line, t.col); }

object concat(const object& x, const object& y) {
    object o{x.left, y.right, x.wires};
    o.wires.insert(o.wires.end(), y.wires.begin(), y.wires.end());
    return o;
}

object split_prefix(const object& o, std::size_t n, const std::string& right) {
    return object{o.left, n == 0 ? o.left : right, {o.wires.begin(), o.wires.begin() + n}};
}

// Unitary R(u) ⊠ R(v) → R(u ++ v) built from unitors and associators; appends to log when given.
bm::bimodule_map structural(const environment& env, const object& u, const object& v, std::vector<std::string>* log,
                            const std::string& pos) {
    const bm::bimodule U = env.realize(u), V = env.realize(v);
    if (u.wires.empty()) {
        if (log) log->push_back("left unitor L²" + u.left + " ⊠ " + v.str() + " at " + pos);
        return bm::left_unitor(V);
    }
    if (v.wires.empty()) {
        if (log) log->push_back("right unitor " + u.str() + " ⊠ L²" + v.right + " at " + pos);
        return bm::right_unitor(U);
    }
    if (v.wires.size() == 1) return bm::identity_map(bm::fuse_object(U, V));
    const object head = split_prefix(v, v.wires.size() - 1, env.bimodule_right.at(v.wires[v.wires.size() - 2]));
    const object last{head.right, v.right, {v.wires.back()}};
    const bm::bimodule Vh = env.realize(head), W = env.realize(last);
    if (log) log->push_back("associator (" + u.str() + ", " + head.str() + ", " + last.str() + ") at " + pos);
    const bm::bimodule_map inner = structural(env, u, head, log, pos);
    return bm::fuse_maps(inner, bm::identity_map(W)) * bm::associator(U, Vh, W).adjoint();
}

bm::linearity meet(bm::linearity a, bm::linearity b) {
    const bool L = bm::is_left_linear(a) && bm::is_left_linear(b);
    const bool R = bm::is_right_linear(a) && bm::is_right_linear(b);
    return L && R ? bm::linearity::bilinear : L ? bm::linearity::left : R ? bm::linearity::right : bm::linearity::plain;
}

boundary check(const term& t, const environment& env) {
    switch (t.kind) {
    case node::id: {
        boundary out;
        if (t.wires.size() == 1 && t.wires[0][0] == '@') {
            const std::string A = t.wires[0].substr(1);
            if (!env.algebras.count(A)) throw error("TypeError", at(t) + ": id over unknown algebra '" + A + "'");
            out.source = out.target = object{A, A, {}};
        } else {
            try {
                out.source = out.target = env.wire_object(t.wires);
            } catch (const error& e) {
                const std::string msg = e.what();
                throw error("TypeError", at(t) + ": " + to_string(t) + ": " + msg.substr(msg.find(": ") + 2));
            }
        }
        return out;
    }
    case node::gen: {
        const bool adj = !t.name.empty() && t.name.back() == '*';
        const std::string base = adj ? t.name.substr(0, t.name.size() - 1) : t.name;
        if (!env.bindings.count(base)) throw error("UnboundGenerator", at(t) + ": generator '" + base + "' is not bound");
        const binding& b = env.bindings.at(base);
        boundary out;
        out.source = adj ? b.target : b.source;
        out.target = adj ? b.source : b.target;
        out.lin = b.map.lin;
        return out;
    }
    case node::vcomp: {
        boundary x = check(*t.a, env), y = check(*t.b, env);
        if (x.target != y.source)
            throw error("TypeError", at(t) + ": vertical composition of " + to_string(*t.a) + " (output " + x.target.str() +
                                         ") with " + to_string(*t.b) + " (input " + y.source.str() + ")");
        boundary out{x.source, y.target, meet(x.lin, y.lin), x.log};
        out.log.insert(out.log.end(), y.log.begin(), y.log.end());
        return out;
    }
    case node::hcomp: {
        boundary x = check(*t.a, env), y = check(*t.b, env);
        if (x.source.right != y.source.left || x.target.right != y.target.left)
            throw error("TypeError", at(t) + ": mismatched middle algebras between " + to_string(*t.a) + " (" +
                                         x.source.right + "/" + x.target.right + ") and " + to_string(*t.b) + " (" +
                                         y.source.left + "/" + y.target.left + ")");
        const bool trivial = env.algebras.at(x.source.right).is_trivial() && env.algebras.at(x.target.right).is_trivial();
        if (!trivial) {
            if (!bm::is_right_linear(x.lin))
                throw error("TypeError", at(t) + ": " + to_string(*t.a) + " is not right-linear and meets " +
                                             to_string(*t.b) + " across the nontrivial region " + x.target.right);
            if (!bm::is_left_linear(y.lin))
                throw error("TypeError", at(t) + ": " + to_string(*t.b) + " is not left-linear and meets " +
                                             to_string(*t.a) + " across the nontrivial region " + y.target.left);
        }
        boundary out;
        out.source = concat(x.source, y.source);
        out.target = concat(x.target, y.target);
        const bool L = bm::is_left_linear(x.lin), R = bm::is_right_linear(y.lin);
        out.lin = L && R ? bm::linearity::bilinear : L ? bm::linearity::left : R ? bm::linearity::right : bm::linearity::plain;
        out.log = x.log;
        out.log.insert(out.log.end(), y.log.begin(), y.log.end());
        structural(env, x.source, y.source, &out.log, at(t));
        structural(env, x.target, y.target, &out.log, at(t));
        return out;
    }
    }
    throw error("TypeError", "unknown node");
}

bm::bimodule_map eval(const term& t, const environment& env, const boundary& type) {
    switch (t.kind) {
    case node::id: return bm::identity_map(env.realize(type.source));
    case node::gen: {
        const bool adj = t.name.back() == '*';
        const binding& b = env.lookup(adj ? t.name.substr(0, t.name.size() - 1) : t.name);
        return adj ? b.map.adjoint() : b.map;
    }
    case node::vcomp: {
        const bm::bimodule_map top = eval(*t.a, env, check(*t.a, env));
        const bm::bimodule_map bottom = eval(*t.b, env, check(*t.b, env));
        return bottom * top;
    }
    case node::hcomp: {
        const boundary x = check(*t.a, env), y = check(*t.b, env);
        const bm::bimodule_map f = eval(*t.a, env, x), g = eval(*t.b, env, y);
        const bm::bimodule_map F = bm::fused_map(f, g);
        const bm::bimodule_map in = structural(env, x.source, y.source, nullptr, "");
        const bm::bimodule_map out = structural(env, x.target, y.target, nullptr, "");
        bm::bimodule_map r = out * F * in.adjoint();
        r.lin = type.lin;
        return r;
    }
    }
    throw error("EvaluationError", "unknown node");
}

} // namespace

boundary typecheck(const term& t, const environment& env) { return check(t, env); }

evaluation evaluate(const term& t, const environment& env) {
    evaluation out;
    out.type = typecheck(t, env);
    out.map = eval(t, env, out.type);
    if (out.map.source != env.realize(out.type.source) || out.map.target != env.realize(out.type.target))
        throw error("EvaluationError", "evaluated map does not match the checked boundary");
    return out;
}

double identity_residual(const bm::bimodule_map& f) { return duality::identity_residual(f); }

std::pair<cplx, double> scalar_value(const bm::bimodule_map& f) {
    const cmat m = f.matrix();
    if (m.rows() != m.cols() || m.rows() == 0) return {cplx(0), std::numeric_limits<double>::infinity()};
    const cplx c = m.trace() / double(m.rows());
    return {c, (m - c * numerics::identity(m.rows())).norm() / std::sqrt(double(m.rows()))};
}

} // namespace vnalg::diagram
