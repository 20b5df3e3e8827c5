// suites.cpp — randomized and exhaustive property suites

#include "vnalg/suites.hpp"

#include "vnalg/functor.hpp"
#include "vnalg/l2.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <sstream>

namespace vnalg::suites {

namespace va = vnalg::algebra;
namespace bm = vnalg::bimodule;
namespace du = vnalg::duality;
namespace ix = vnalg::index;
namespace fn = vnalg::functor;
using va::algebra;
using va::element;
using va::functional;
using va::homomorphism;

int suite_result::passed() const {
    int n = 0;
    for (const auto& c : checks) n += c.pass;
    return n;
}
int suite_result::failed() const { return static_cast<int>(checks.size()) - passed(); }

namespace {

// Worst-case residual accumulated over many trials.
struct worst {
    std::string name;
    double threshold = 0;
    double value = 0;
    int trials = 0;
    std::string where = {};

    void add(double r, const std::string& ctx = "") {
        ++trials;
        if (!(r <= value)) {  // also catches NaN
            value = r;
            where = ctx;
        }
    }
    check done() const {
        check c{name, value <= threshold && trials > 0, value, threshold, std::to_string(trials) + " trials"};
        if (!where.empty() && !c.pass) c.detail += "; worst at " + where;
        return c;
    }
};

check count_check(const std::string& name, int bad, int total, const std::string& what = "violations") {
    return {name, bad == 0 && total > 0, double(bad), 0, std::to_string(bad) + " " + what + " in " + std::to_string(total)};
}

int trials(const options& o, int n) { return std::max(1, static_cast<int>(std::lround(n * o.trials))); }
double thr(const options& o, double def) { return o.tol > 0 ? o.tol : def; }

std::string str(const imat& m) {
    std::ostringstream s;
    s << "[";
    for (int r = 0; r < m.rows(); ++r) {
        s << (r ? ";" : "");
        for (int c = 0; c < m.cols(); ++c) s << (c ? " " : "") << m(r, c);
    }
    return s.str() + "]";
}

// Integer matrix nearest to m and the distance to it.
std::pair<imat, double> round_int(const cmat& m) {
    imat r(m.rows(), m.cols());
    double d = 0;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            r(i, j) = static_cast<int>(std::lround(m(i, j).real()));
            d = std::max(d, std::abs(m(i, j) - double(r(i, j))));
        }
    return {r, d};
}

bm::bimodule random_bimodule_nz(const algebra& A, const algebra& B, int max_mult, rng_t& rng) {
    return bm::random_bimodule(A, B, max_mult, rng, true);
}

// --------------------------------------------------------------- 1

void inner_product(const options& o, suite_result& out) {
    rng_t rng(o.seed);
    worst eq{"inner_direct = inner_analytic on random positive pairs", thr(o, 1e-8)};
    worst norm{"|√φ|² = φ(1)", thr(o, 1e-10)};
    worst imag{"imaginary part of the analytic continuation vanishes", thr(o, 1e-8)};
    int deficient = 0;
    const int n = trials(o, 500);
    for (int t = 0; t < n; ++t) {
        const algebra A = va::random_algebra(3, 4, rng);
        const functional phi = functional::random_positive(A, rng, true);
        const functional psi = functional::random_positive(A, rng, true);
        for (const auto& d : phi.densities)
            if (numerics::range_basis(d).cols() < d.rows()) {
                ++deficient;
                break;
            }
        const double direct = l2::inner_direct(phi, psi);
        const auto analytic = l2::inner_analytic(phi, psi);
        eq.add(std::abs(direct - analytic.value) / (1 + std::abs(direct)), A.str());
        imag.add(std::abs(analytic.imag), A.str());
        const double s = l2::sqrt_state(phi).norm();
        norm.add(std::abs(s * s - phi(element::unit(A)).real()), A.str());
    }
    out.checks.push_back(eq.done());
    out.checks.push_back(imag.done());
    out.checks.push_back(norm.done());
    out.checks.push_back({"rank-deficient densities are exercised", deficient > 0, double(deficient), 1,
                          std::to_string(deficient) + " of " + std::to_string(n) + " pairs"});
}

// --------------------------------------------------------------- 2

void standard_form(const options& o, suite_result& out) {
    rng_t rng(o.seed);
    int bad = 0, control_bad = 0;
    std::string first;
    const int n = trials(o, 50);
    for (int t = 0; t < n; ++t) {
        const algebra A = va::random_algebra(3, 4, rng);
        const auto rep = l2::check_standard_form(A, l2::conjugation::adjoint, o.seed + t);
        if (!rep.all_pass() || rep.axioms.size() != 5) {
            ++bad;
            if (first.empty()) first = A.str();
        }
        const auto neg = l2::check_standard_form(A, l2::conjugation::transpose, o.seed + t);
        if (neg.axioms.size() != 5 || neg.axioms[4].pass) ++control_bad;
    }
    out.checks.push_back(count_check("all five axioms on random algebras", bad, n, "failures"));
    out.checks.push_back(count_check("corrupted J fails the fifth axiom", control_bad, n, "missed detections"));
}

// --------------------------------------------------------------- 3

void fusion(const options& o, suite_result& out) {
    rng_t rng(o.seed);
    int mismatch = 0, sweep = 0;
    std::string first;
    worst unit{"fusion unitary Gram model → canonical object", thr(o, 1e-9)};
    worst lunit{"left unitor L²A ⊠ H → H on products", thr(o, 1e-9)};
    worst runit{"right unitor H ⊠ L²B → H on products", thr(o, 1e-9)};
    worst assoc{"associator on triple products", thr(o, 1e-9)};
    worst assoc_u{"associator unitary", thr(o, 1e-9)};

    auto one_pair = [&](const bm::bimodule& H, const bm::bimodule& K) {
        const auto fr = bm::fuse(H, K);
        const bm::bimodule F = bm::fuse_object(H, K);
        const imat expect = H.mult * K.mult;
        if (fr.gram_dim != F.dim() || F.mult != expect || fr.object != F) {
            ++mismatch;
            if (first.empty()) first = H.str() + " ⊠ " + K.str();
        }
        unit.add(fr.unitarity_residual, H.str() + " ⊠ " + K.str());
    };

    // exhaustive over the parameters of one block pair: M_n –(m)– M_k –(m')– M_c
    for (int n = 1; n <= 3; ++n)
        for (int k = 1; k <= 3; ++k)
            for (int c = 1; c <= 3; ++c)
                for (int m = 0; m <= 3; ++m)
                    for (int mp = 0; mp <= 3; ++mp) {
                        one_pair(bm::bimodule(algebra({n}), algebra({k}), imat::Constant(1, 1, m)),
                                 bm::bimodule(algebra({k}), algebra({c}), imat::Constant(1, 1, mp)));
                        ++sweep;
                    }
    // full multiplicity matrices over multi-block algebras
    const int n_random = trials(o, 120);
    for (int t = 0; t < n_random; ++t) {
        const algebra A = va::random_algebra(3, 3, rng), B = va::random_algebra(3, 3, rng),
                      C = va::random_algebra(3, 3, rng);
        const bm::bimodule H = bm::random_bimodule(A, B, 3, rng, false), K = bm::random_bimodule(B, C, 3, rng, false);
        one_pair(H, K);
        ++sweep;
    }
    // unit and associativity on vectors
    const int n_struct = trials(o, 60);
    for (int t = 0; t < n_struct; ++t) {
        const algebra A = va::random_algebra(3, 3, rng), B = va::random_algebra(3, 3, rng),
                      C = va::random_algebra(2, 3, rng), D = va::random_algebra(2, 3, rng);
        const bm::bimodule H = random_bimodule_nz(A, B, 2, rng), K = random_bimodule_nz(B, C, 2, rng),
                           L = random_bimodule_nz(C, D, 2, rng);
        const cvec xi = numerics::random_unit_vector(H.dim(), rng);
        const cvec ka = numerics::random_unit_vector(K.dim(), rng);
        const cvec ze = numerics::random_unit_vector(L.dim(), rng);
        const bm::bimodule LA = bm::l2_bimodule(A), LB = bm::l2_bimodule(B);
        lunit.add((bm::left_unitor(H).apply(bm::product(LA, H, element::unit(A).vec(), xi)) - xi).norm(), H.str());
        runit.add((bm::right_unitor(H).apply(bm::product(H, LB, xi, element::unit(B).vec())) - xi).norm(), H.str());
        const bm::bimodule HK = bm::fuse_object(H, K), KL = bm::fuse_object(K, L);
        const bm::bimodule_map a = bm::associator(H, K, L);
        const cvec lhs = a.apply(bm::product(HK, L, bm::product(H, K, xi, ka), ze));
        const cvec rhs = bm::product(H, KL, xi, bm::product(K, L, ka, ze));
        assoc.add((lhs - rhs).norm(), H.str());
        assoc_u.add(numerics::unitary_residual(a.matrix()), H.str());
    }
    check c = count_check("Gram-model dimension = canonical multiplicities", mismatch, sweep, "mismatches");
    if (!first.empty()) c.detail += "; first " + first;
    out.checks.push_back(c);
    for (const worst* w : {&unit, &lunit, &runit, &assoc, &assoc_u}) out.checks.push_back(w->done());
}

// --------------------------------------------------------------- 4

void zigzag_scene(const options& o, suite_result& out) {
    const scene::scene& sc = *o.sc;
    worst zz{"zig-zag of the canonical duality on scene bimodules", thr(o, 1e-8)};
    worst nz{"normalization of the canonical duality on scene bimodules", thr(o, 1e-8)};
    worst rn{"normalize recovers normalized data from skewed data", thr(o, 1e-8)};
    worst dsl{"zig-zag diagrams evaluate to identities", thr(o, 1e-9)};
    rng_t rng(o.seed);
    for (const auto& name : sc.bimodule_order) {
        const bm::bimodule& H = sc.bimodules.at(name);
        const du::duality_data D = du::canonical_duality(H);
        zz.add(du::zigzag_residual(D), name);
        nz.add(du::normalization_residual(D), name);
        const du::duality_data Ds = du::skew(D, bm::random_invertible_endo(H, rng));
        const auto nr = du::normalize(H, D.Hbar, Ds.R, Ds.S);
        rn.add(std::max(nr.zigzag_residual, nr.normalization_residual), name);
        // the same identities through the diagram language
        diagram::environment env;
        env.add_algebra("A", H.left);
        env.add_algebra("B", H.right);
        env.add_bimodule("H", "A", "B", H.mult);
        env.add_bimodule("Hbar", "B", "A", D.Hbar.mult);
        env.add_binding("R", {{"A", "A", {}}, {"A", "A", {"H", "Hbar"}}, D.R, "duality"});
        env.add_binding("S", {{"B", "B", {}}, {"B", "B", {"Hbar", "H"}}, D.S, "duality"});
        for (const char* t : {"(id(H) | S) ; (R* | id(H))", "(id(Hbar) | R) ; (S* | id(Hbar))"})
            dsl.add(diagram::identity_residual(diagram::evaluate(*diagram::parse(t), env).map), name);
    }
    out.checks.push_back(zz.done());
    out.checks.push_back(nz.done());
    out.checks.push_back(rn.done());
    out.checks.push_back(dsl.done());
    if (sc.env) {
        int bad = 0;
        std::string first;
        for (const auto& d : sc.diagrams) {
            const auto r = scene::run_diagram_check(d, *sc.env, thr(o, 1e-9));
            if (!r.pass && first.empty()) first = d.name + ": " + r.detail;
            bad += !r.pass;
        }
        check c = count_check("scene diagram assertions", bad, static_cast<int>(sc.diagrams.size()), "failures");
        if (sc.diagrams.empty()) c.pass = true, c.detail = "no diagrams in scene";
        if (!first.empty()) c.detail += "; " + first;
        out.checks.push_back(c);
    }
}

void zigzag(const options& o, suite_result& out) {
    if (o.sc) return zigzag_scene(o, out);
    rng_t rng(o.seed);
    worst zz{"zig-zag of the canonical duality over the sweep", thr(o, 1e-8)};
    worst nz{"normalization of the canonical duality over the sweep", thr(o, 1e-8)};
    auto one = [&](const bm::bimodule& H) {
        const du::duality_data D = du::canonical_duality(H);
        zz.add(du::zigzag_residual(D), H.str());
        nz.add(du::normalization_residual(D), H.str());
    };
    for (int n = 1; n <= 3; ++n)
        for (int k = 1; k <= 3; ++k)
            for (int m = 1; m <= 3; ++m) one(bm::bimodule(algebra({n}), algebra({k}), imat::Constant(1, 1, m)));
    for (int t = 0, n = trials(o, 120); t < n; ++t)
        one(bm::random_bimodule(va::random_algebra(3, 3, rng), va::random_algebra(3, 3, rng), 3, rng, false));

    worst rn{"normalize recovers normalization from skewed data", thr(o, 1e-8)};
    worst rz{"normalize preserves the zig-zag equations", thr(o, 1e-8)};
    int skew_visible = 0;
    const int n_skew = trials(o, 100);
    for (int t = 0; t < n_skew; ++t) {
        const bm::bimodule H = random_bimodule_nz(va::random_algebra(2, 3, rng), va::random_algebra(2, 3, rng), 2, rng);
        const du::duality_data D = du::canonical_duality(H);
        const du::duality_data Ds = du::skew(D, bm::random_invertible_endo(H, rng));
        skew_visible += du::normalization_residual(Ds) > 1e-6;
        const auto nr = du::normalize(H, D.Hbar, Ds.R, Ds.S);
        rn.add(nr.normalization_residual, H.str());
        rz.add(nr.zigzag_residual, H.str());
    }
    worst sol{"solve_normalization_element on positive-definite pairs", thr(o, 1e-8)};
    for (int t = 0, n = trials(o, 100); t < n; ++t) {
        const int d = numerics::random_int(1, 4, rng);
        const cmat a = numerics::random_pd(d, rng), b = numerics::random_pd(d, rng);
        const cmat x = du::solve_normalization_element(a, b);
        const cmat xi = x.inverse();
        sol.add(numerics::rel_diff(x * a * x, xi * b * xi) + numerics::hermitian_residual(x), std::to_string(d));
    }
    worst scalar{"scalar case x = (b/a)^{1/4}", thr(o, 1e-12)};
    for (int t = 0; t < 50; ++t) {
        const double a = numerics::random_real(0.01, 10, rng), b = numerics::random_real(0.01, 10, rng);
        const cmat x = du::solve_normalization_element(cmat::Constant(1, 1, a), cmat::Constant(1, 1, b));
        const double expect = std::pow(b / a, 0.25);
        scalar.add(std::abs(x(0, 0) - expect) / expect);
    }
    for (const worst* w : {&zz, &nz, &rn, &rz, &sol, &scalar}) out.checks.push_back(w->done());
    out.checks.push_back({"skewing breaks normalization before repair", skew_visible == n_skew, double(skew_visible),
                          double(n_skew), std::to_string(skew_visible) + " of " + std::to_string(n_skew)});
}

// --------------------------------------------------------------- 5

void dimension(const options& o, suite_result& out) {
    rng_t rng(o.seed);
    auto dim_of = [](const bm::bimodule& H) { return du::statistical_dimension(du::canonical_duality(H)); };
    int bad_sum = 0, bad_prod = 0, bad_tower = 0;
    worst integral{"dimension matrices are integral", thr(o, 1e-9)};
    std::string first;
    const int n = trials(o, 200);
    for (int t = 0; t < n; ++t) {
        const algebra A = va::random_algebra(3, 3, rng), B = va::random_algebra(3, 3, rng), C = va::random_algebra(3, 3, rng);
        const bm::bimodule H = random_bimodule_nz(A, B, 2, rng), K = random_bimodule_nz(A, B, 2, rng),
                           L = random_bimodule_nz(B, C, 2, rng);
        const auto [dH, eH] = round_int(dim_of(H));
        const auto [dK, eK] = round_int(dim_of(K));
        const auto [dL, eL] = round_int(dim_of(L));
        const auto [dS, eS] = round_int(dim_of(bm::direct_sum(H, K)));
        const auto [dF, eF] = round_int(dim_of(bm::fuse_object(H, L)));
        integral.add(std::max({eH, eK, eL, eS, eF}), H.str());
        if (dS != dH + dK) ++bad_sum;
        if (dF != dH * dL) {
            ++bad_prod;
            if (first.empty()) first = str(dF) + " vs " + str(dH * dL);
        }
    }
    const int n_tower = trials(o, 100);
    for (int t = 0; t < n_tower; ++t) {
        const algebra A = va::random_algebra(2, 2, rng);
        const homomorphism f = va::random_inclusion(A, 3, 4, rng);
        const homomorphism g = va::random_inclusion(f.target, 3, 8, rng);
        const auto [dBA, e1] = round_int(ix::dim_matrix(f));
        const auto [dCB, e2] = round_int(ix::dim_matrix(g));
        const auto [dCA, e3] = round_int(ix::dim_matrix(va::compose_hom(f, g)));
        integral.add(std::max({e1, e2, e3}), A.str());
        if (dCA != dBA * dCB) ++bad_tower;
    }
    out.checks.push_back(count_check("dim(H ⊕ K) = dim H + dim K", bad_sum, n));
    check c = count_check("dim(H ⊠ K) = dim H · dim K", bad_prod, n);
    if (!first.empty()) c.detail += "; first " + first;
    out.checks.push_back(c);
    out.checks.push_back(count_check("[[C:A]] = [[B:A]] [[C:B]] on towers", bad_tower, n_tower));
    out.checks.push_back(integral.done());
}

// --------------------------------------------------------------- 6

void index_suite(const options& o, suite_result& out) {
    rng_t rng(o.seed);
    for (int n = 2; n <= 4; ++n) {
        const homomorphism io = va::canonical_embedding(algebra({1}), algebra({n}), imat::Constant(1, 1, n));
        const auto pp = ix::pp_index(ix::minimal_expectation(io), o.seed);
        out.checks.push_back({"pp_index(trace, C ⊂ M_" + std::to_string(n) + ") = " + std::to_string(n),
                              std::abs(pp.value - n) <= 1e-6, pp.value, double(n),
                              "Watatani cross-check " + std::to_string(pp.watatani_norm)});
        const double mi = ix::minimal_index(io)(0, 0).real();
        out.checks.push_back({"minimal_index(C ⊂ M_" + std::to_string(n) + ") = " + std::to_string(n * n),
                              std::abs(mi - n * n) <= 1e-9, mi, double(n * n), "differs from the PP value"});
    }
    for (const auto& [k, m] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}, {2, 3}}) {
        const homomorphism io = va::random_conjugate(
            va::canonical_embedding(algebra({k}), algebra({k * m}), imat::Constant(1, 1, m)), rng);
        const std::string tag = "M_" + std::to_string(k) + " ⊂ M_" + std::to_string(k * m);
        const auto pp = ix::pp_index(ix::minimal_expectation(io), o.seed);
        check c{"pp_index(E0, " + tag + ") = " + std::to_string(m * m), std::abs(pp.value - m * m) <= 1e-5, pp.value,
                double(m * m), "Watatani index " + std::to_string(pp.watatani_norm)};
        if (k < m) {
            c.known_red = true;
            c.detail += "; the optimal constant is m·min(k,m) = " + std::to_string(m * std::min(k, m)) +
                        ", attained by a maximally entangled projection";
        }
        out.checks.push_back(c);
        const auto lg = ix::longo_index(io, o.seed);
        out.checks.push_back({"longo_index minimizer = E0 on " + tag, lg.distance_to_minimal <= 1e-4,
                              lg.distance_to_minimal, 1e-4,
                              "Ind = " + std::to_string(lg.value) + ", Ind(E0) = " + std::to_string(lg.minimal_value)});
    }
}

// --------------------------------------------------------------- 7

void extremality(const options& o, suite_result& out) {
    rng_t rng(o.seed);
    worst tr{"canonical_state is a trace on End(H)", thr(o, 1e-9)};
    for (int t = 0, n = trials(o, 50); t < n; ++t) {
        const bm::bimodule H = random_bimodule_nz(va::random_algebra(2, 3, rng), va::random_algebra(2, 3, rng), 2, rng);
        const du::duality_data D = du::canonical_duality(H);
        const bm::bimodule_map x = bm::random_bilinear(H, H, rng), y = bm::random_bilinear(H, H, rng);
        tr.add(numerics::rel_diff(du::canonical_state(D, x * y), du::canonical_state(D, y * x)), H.str());
    }
    worst ex{"E0(p_i) = d_i / Σ d_i on relative-commutant partitions", thr(o, 1e-8)};
    worst ext{"E0 restricted to the relative commutant is a trace", thr(o, 1e-9)};
    for (int t = 0, n = trials(o, 50); t < n; ++t) {
        const int k = numerics::random_int(1, 3, rng), L = numerics::random_int(2, 4, rng);
        const homomorphism io = va::random_conjugate(
            va::canonical_embedding(algebra({k}), algebra({k * L}), imat::Constant(1, 1, L)), rng);
        const auto rep = ix::extremality(io, rng);
        const std::string tag = "M_" + std::to_string(k) + " ⊂ M_" + std::to_string(k * L);
        ex.add(rep.residual, tag);
        ext.add(rep.trace_residual, tag);
    }
    out.checks.push_back(tr.done());
    out.checks.push_back(ex.done());
    out.checks.push_back(ext.done());
}

// --------------------------------------------------------------- 8

void l2_suite(const options& o, suite_result& out) {
    rng_t rng(o.seed);
    worst func{"L²(g∘f) = L²(g) L²(f) on random towers", thr(o, 1e-8)};
    worst ext{"linear extension reproduces √(φ∘E)", thr(o, 1e-8)};
    for (int t = 0, n = trials(o, 200); t < n; ++t) {
        const algebra A = va::random_algebra(2, 2, rng);
        const homomorphism f = va::random_inclusion(A, 2, 4, rng);
        const homomorphism g = va::random_inclusion(f.target, 2, 6, rng);
        const auto Lf = fn::l2_of_hom(f), Lg = fn::l2_of_hom(g), Lgf = fn::l2_of_hom(va::compose_hom(f, g));
        func.add(numerics::rel_diff(Lg.matrix * Lf.matrix, Lgf.matrix), A.str() + " → " + f.target.str());
        ext.add(std::max({Lf.extension_residual, Lg.extension_residual, Lgf.extension_residual}));
    }
    worst scal{"L²(ι) = √Λ · isometry on factor inclusions", thr(o, 1e-9)};
    for (int t = 0, n = trials(o, 50); t < n; ++t) {
        const int k = numerics::random_int(1, 3, rng), L = numerics::random_int(1, 4, rng);
        const homomorphism io = va::random_conjugate(
            va::canonical_embedding(algebra({k}), algebra({k * L}), imat::Constant(1, 1, L)), rng);
        const auto Lm = fn::l2_of_hom(io);
        scal.add(std::abs(Lm.scale[0] - std::sqrt(double(L))) + Lm.defect[0], std::to_string(k) + "," + std::to_string(L));
    }
    worst phi{"Φ : H̄ → L²B is unitary", thr(o, 1e-8)};
    worst sq{"Φ intertwines the duality with L²(ι)", thr(o, 1e-8)};
    for (int t = 0, n = trials(o, 100); t < n; ++t) {
        const homomorphism f = va::random_inclusion(va::random_algebra(2, 2, rng), 2, 4, rng);
        const auto P = fn::phi_identification(f);
        phi.add(P.unitary_residual, f.source.str() + " → " + f.target.str());
        sq.add(P.square_residual, f.source.str() + " → " + f.target.str());
    }
    worst iso{"l2_iso functorial when Z(B) ⊆ f(A)", thr(o, 1e-8)};
    for (int t = 0, n = trials(o, 100); t < n; ++t) {
        const algebra A = va::random_algebra(2, 2, rng);
        const homomorphism f = fn::random_central_inclusion(A, 2, 4, rng);
        const homomorphism g = fn::random_central_inclusion(f.target, 2, 6, rng);
        iso.add(fn::iso_composition_residual(f, g), A.str() + " → " + f.target.str() + " → " + g.target.str());
    }
    for (const worst* w : {&func, &ext, &scal, &phi, &sq, &iso}) out.checks.push_back(w->done());
    const auto ce = fn::find_iso_counterexample();
    bool commutative = false;
    std::string detail = "none found";
    if (ce) {
        commutative = true;
        for (const algebra* X : {&ce->f.source, &ce->f.target, &ce->g.target})
            for (int b : X->blocks()) commutative = commutative && b == 1;
        detail = ce->f.source.str() + " ⊂ " + ce->f.target.str() + " ⊂ " + ce->g.target.str() +
                 ", residual " + std::to_string(ce->residual);
    }
    out.checks.push_back({"commutative counterexample to unrestricted l2_iso functoriality", commutative,
                          ce ? ce->residual : 0.0, 1e-6, detail});
}

// --------------------------------------------------------------- 9

void fusion_functor(const options& o, suite_result& out) {
    rng_t rng(o.seed);
    worst comp{"(h'⊠k')(h⊠k) = (h'h) ⊠_{α'α} (k'k)", thr(o, 1e-8)};
    worst bal{"fused map independent of generators", thr(o, 1e-8)};
    worst id{"α = id reduces to fuse_maps", thr(o, 1e-9)};
    const int n = trials(o, 100);
    for (int t = 0; t < n; ++t) {
        const algebra A1 = va::random_algebra(2, 2, rng);
        const homomorphism a = va::random_inclusion(A1, 2, 3, rng);
        const homomorphism a2 = va::random_inclusion(a.target, 2, 4, rng);
        const algebra X = va::random_algebra(2, 2, rng), Y = va::random_algebra(2, 2, rng);
        const bm::bimodule H1 = bm::random_bimodule(X, A1, 1, rng), H2 = bm::random_bimodule(X, a.target, 1, rng),
                           H3 = bm::random_bimodule(X, a2.target, 1, rng);
        const bm::bimodule K1 = bm::random_bimodule(A1, Y, 1, rng), K2 = bm::random_bimodule(a.target, Y, 1, rng),
                           K3 = bm::random_bimodule(a2.target, Y, 1, rng);
        const auto h = fn::random_along(H1, H2, a, bm::side::right, rng);
        const auto h2 = fn::random_along(H2, H3, a2, bm::side::right, rng);
        const auto k = fn::random_along(K1, K2, a, bm::side::left, rng);
        const auto k2 = fn::random_along(K2, K3, a2, bm::side::left, rng);
        const auto F1 = fn::fuse_functor(h, a, k), F2 = fn::fuse_functor(h2, a2, k2);
        const auto F12 = fn::fuse_functor(h2 * h, va::compose_hom(a, a2), k2 * k);
        const std::string tag = A1.str() + " → " + a.target.str() + " → " + a2.target.str();
        comp.add(numerics::rel_diff(F2.map.matrix() * F1.map.matrix(), F12.map.matrix()), tag);
        bal.add(std::max({F1.balance_residual, F2.balance_residual, F12.balance_residual}), tag);
    }
    for (int t = 0, m = trials(o, 20); t < m; ++t) {
        const algebra A = va::random_algebra(2, 2, rng), X = va::random_algebra(2, 2, rng), Y = va::random_algebra(2, 2, rng);
        const bm::bimodule H = random_bimodule_nz(X, A, 2, rng), H2 = random_bimodule_nz(X, A, 2, rng),
                           K = random_bimodule_nz(A, Y, 2, rng), K2 = random_bimodule_nz(A, Y, 2, rng);
        const auto h = bm::random_bilinear(H, H2, rng), k = bm::random_bilinear(K, K2, rng);
        id.add(numerics::rel_diff(fn::fuse_functor(h, va::identity_hom(A), k).map.matrix(), bm::fuse_maps(h, k).matrix()));
    }
    out.checks.push_back(comp.done());
    out.checks.push_back(bal.done());
    out.checks.push_back(id.done());
}

// --------------------------------------------------------------- 10

void inequalities(const options& o, suite_result& out) {
    rng_t rng(o.seed);
    int bad_corner = 0;
    std::string first;
    const int n = trials(o, 50);
    for (int t = 0; t < n; ++t) {
        const algebra A = va::random_algebra(3, 3, rng);
        imat lam(A.num_blocks(), 1);
        int size = 0;
        do {  // keep the factor at most M_12
            size = 0;
            for (int i = 0; i < A.num_blocks(); ++i) {
                lam(i, 0) = numerics::random_int(1, 3, rng);
                size += lam(i, 0) * A.block(i);
            }
        } while (size > 12);
        const homomorphism io = va::random_conjugate(va::canonical_embedding(A, algebra({size}), lam), rng);
        const auto ci = ix::corner_index_sum(io);
        if (std::abs(ci.corner_sum - ci.norm_squared) > 1e-9 || std::abs(ci.norm_squared - std::round(ci.norm_squared)) > 1e-9) {
            ++bad_corner;
            if (first.empty()) first = A.str() + ": " + std::to_string(ci.corner_sum) + " vs " + std::to_string(ci.norm_squared);
        }
    }
    check c = count_check("Σ [p_i B p_i : p_i A] = |[[B:A]]|²", bad_corner, n);
    if (!first.empty()) c.detail += "; first " + first;
    out.checks.push_back(c);

    const auto run = [&](bool commuting, const std::string& entry, const std::string& label) {
        int bad = 0, tested = 0;
        std::string where;
        for (int t = 0, m = trials(o, 50); t < m; ++t) {
            const auto cfg = ix::random_config(rng, commuting);
            for (const auto& e : ix::check_inequalities(cfg, o.seed + t))
                if (e.name == entry && e.hypothesis && !e.informational) {
                    ++tested;
                    if (!e.holds) {
                        ++bad;
                        if (where.empty()) where = cfg.name;
                    }
                }
        }
        check k = count_check(label, bad, tested);
        if (!where.empty()) k.detail += "; first " + where;
        out.checks.push_back(k);
    };
    run(false, "relative_commutant_bound", "|[[N'∩A : M'∩A]]| ≤ [[M:N]] for M ⊂ A");
    run(true, "join_bound", "|[[M∨A : N∨A]]| ≤ [[M:N]] for A ⊂ M'");
}

// --------------------------------------------------------------- 11

void diagram_suite(const options& o, suite_result& out) {
    const std::filesystem::path dir = std::filesystem::path(o.data_dir) / "diagrams";
    const auto manifest = nlohmann::json::parse(scene::read_file((dir / "corpus.json").string()));
    std::map<std::string, diagram::environment> envs;
    int bad_id = 0, n_id = 0, bad_err = 0, n_err = 0;
    for (const auto& e : manifest.at("entries")) {
        const std::string env_path = e.at("env");
        if (!envs.count(env_path))
            envs.emplace(env_path, diagram::load_environment_file((std::filesystem::path(o.data_dir) / env_path).string()));
        auto text = [&](const std::string& s) {
            return s.size() > 4 && s.substr(s.size() - 4) == ".vnd" ? scene::read_file((dir / s).string()) : s;
        };
        const scene::diagram_check dc{e.at("name"), text(e.at("lhs")), e.contains("rhs") ? text(e["rhs"]) : "", e.at("expect")};
        const auto r = scene::run_diagram_check(dc, envs.at(env_path), thr(o, 1e-9));
        const bool is_err = dc.expect == "type_error";
        (is_err ? n_err : n_id) += 1;
        (is_err ? bad_err : bad_id) += !r.pass;
        out.checks.push_back({dc.name + " (" + dc.expect + ")", r.pass, r.residual, is_err ? 0.0 : thr(o, 1e-9), r.detail});
    }
    // parser round trip and error positions
    const auto t = diagram::parse("(id(H) | S) ; (R* | id(H))");
    const bool round = diagram::to_string(*diagram::parse(diagram::to_string(*t))) == diagram::to_string(*t);
    out.checks.push_back({"parse ∘ print round trip", round, 0, 0, diagram::to_string(*t)});
    bool syntax = false;
    std::string msg;
    try {
        diagram::parse("R* ;");
    } catch (const error& e) {
        syntax = e.kind() == "SyntaxError";
        msg = e.what();
    }
    out.checks.push_back({"malformed input raises SyntaxError", syntax, 0, 0, msg});
}

struct entry {
    const char* name;
    const char* title;
    void (*run)(const options&, suite_result&);
};

const std::vector<entry>& registry() {
    static const std::vector<entry> r = {
        {"inner_product", "inner-product equivalence", inner_product},
        {"standard_form", "standard-form axioms", standard_form},
        {"fusion", "fusion multiplicities and structural unitaries", fusion},
        {"zigzag", "duality equations and normalization", zigzag},
        {"dimension", "dimension laws", dimension},
        {"index", "index numerics", index_suite},
        {"extremality", "trace and extremality", extremality},
        {"l2", "L² functor", l2_suite},
        {"fusion_functor", "fusion functoriality", fusion_functor},
        {"inequalities", "index inequalities", inequalities},
        {"diagram", "diagram language corpus", diagram_suite},
    };
    return r;
}

} // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& e : registry()) v.push_back(e.name);
        return v;
    }();
    return names;
}

std::string suite_title(const std::string& name) {
    for (const auto& e : registry())
        if (name == e.name) return e.title;
    throw error("UnknownSuite", "no suite named '" + name + "'");
}

suite_result run_suite(const std::string& name, const options& opt) {
    for (const auto& e : registry()) {
        if (name != e.name) continue;
        suite_result out{e.name, e.title, {}, 0};
        const auto t0 = std::chrono::steady_clock::now();
        try {
            e.run(opt, out);
        } catch (const error& x) {
            out.checks.push_back({"suite completed", false, 0, 0, x.what()});
        }
        out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return out;
    }
    throw error("UnknownSuite", "no suite named '" + name + "'");
}

} // namespace vnalg::suites
