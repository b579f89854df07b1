#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "vxa/binomial.hpp"
#include "vxa/report.hpp"
#include "vxa/zhu.hpp"

using namespace vxa;

namespace {

Voa heis2(int cap = 20) { return Voa({Family::heisenberg, Scalar(1), 2}, cap); }
Voa heis1(int cap = 20) { return Voa({Family::heisenberg, Scalar(1), 1}, cap); }
Voa vir(const Scalar& c, int cap = 20) { return Voa({Family::virasoro, c, 1}, cap); }

// Independent level-n product formulas for the trivial twist:
//   circle: Res (1+z)^{wt u + n} / z^{2n+2},  star: the alternating sum over
//   m of C(m+n, n) Res (1+z)^{wt u + n} / z^{n+m+1}.
SparseVector untwisted_circle_oracle(const Voa& voa, const SparseVector& u, const SparseVector& v,
                                     int n) {
    int wt = 0;
    REQUIRE(voa.homogeneous(u, &wt));
    SparseVector out;
    int denom = 2 * n + 2;
    for (int j = 0; j <= wt + voa.top_weight(v) + denom - 1; ++j) {
        Scalar c = rat_binomial(Scalar(wt + n), j);
        if (c == 0) continue;
        out.add_scaled(voa.mode(u, j - denom, v), c);
    }
    return out;
}

SparseVector untwisted_star_oracle(const Voa& voa, const SparseVector& u, const SparseVector& v,
                                   int n) {
    int wt = 0;
    REQUIRE(voa.homogeneous(u, &wt));
    SparseVector out;
    for (int m = 0; m <= n; ++m) {
        Scalar front = rat_binomial(Scalar(m + n), n);
        if (m % 2 == 1) front = -front;
        int denom = n + m + 1;
        for (int j = 0; j <= wt + voa.top_weight(v) + denom - 1; ++j) {
            Scalar c = rat_binomial(Scalar(wt + n), j);
            if (c == 0) continue;
            out.add_scaled(voa.mode(u, j - denom, v), front * c);
        }
    }
    return out;
}

// Independent bottom-level twisted product: sector r gives numerator
// exponent wt u - 1 + r/T plus one for r = 0, denominator z for r != 0 and
// z^2 for r = 0.
SparseVector order_two_bottom_circle_oracle(const Voa& voa, const SparseVector& u,
                                            const SparseVector& v) {
    int wt = 0, r = 0;
    REQUIRE(voa.homogeneous(u, &wt, &r));
    Scalar expo = r == 0 ? Scalar(wt) : Scalar(wt - 1) + make_scalar(r, 2);
    int denom = r == 0 ? 2 : 1;
    SparseVector out;
    for (int j = 0; j <= wt + voa.top_weight(v) + denom - 1; ++j) {
        Scalar c = rat_binomial(expo, j);
        if (c == 0) continue;
        out.add_scaled(voa.mode(u, j - denom, v), c);
    }
    return out;
}

}  // namespace

TEST_CASE("level parsing") {
    Level a = parse_level("0", 2);
    CHECK(a.l == 0);
    CHECK(a.i == 0);
    Level b = parse_level("1/2", 2);
    CHECK(b.l == 0);
    CHECK(b.i == 1);
    Level c = parse_level("1+1/2", 2);
    CHECK(c.l == 1);
    CHECK(c.i == 1);
    CHECK(c.str() == "1+1/2");
    CHECK(parse_level("1", 2).str() == "1");
    CHECK_THROWS(parse_level("2/3+1", 2));
    CHECK_THROWS(parse_level("1/2", 1));
    CHECK_THROWS(parse_level("3/2", 2));
    CHECK(parse_level("1/2", 2).predecessor() == parse_level("0", 2));
    CHECK(parse_level("1", 2).predecessor() == parse_level("1/2", 2));
}

TEST_CASE("delta table") {
    CHECK(delta_fn(0, 0, 2) == 1);
    CHECK(delta_fn(0, 1, 2) == 0);
    CHECK(delta_fn(1, 2, 2) == 1);  // r = T
    for (int T = 1; T <= 4; ++T) {
        for (int i = 0; i < T; ++i) {
            for (int r = 0; r <= T; ++r) {
                int expect = (r == T || i >= r) ? 1 : 0;
                CHECK(delta_fn(i, r, T) == expect);
            }
        }
    }
}

TEST_CASE("circle product parameters at the bottom level") {
    Level n0 = parse_level("0", 2);
    // sector 1, weight 1: series (1+z)^{1/2}, single z downstairs
    ResidueParams p = circle_params(1, 1, n0);
    CHECK(p.exponent == make_scalar(1, 2));
    CHECK(p.denom == 1);
    // sector 0 reproduces the classical z^2 shape
    ResidueParams q = circle_params(2, 0, n0);
    CHECK(q.exponent == Scalar(2));
    CHECK(q.denom == 2);
}

TEST_CASE("vacuum circle vanishes") {
    Voa h = heis2();
    for (const char* s : {"0", "1/2", "1", "1+1/2"}) {
        Level lvl = parse_level(s, 2);
        for (int id : h.basis_up_to(4)) {
            CHECK(circle_product(h, h.vacuum(), SparseVector(id), lvl).zero());
        }
    }
}

TEST_CASE("order-two bottom-level circle product, term by term") {
    Voa h = heis2();
    SparseVector alpha = h.state({-1});
    Level n0 = parse_level("0", 2);
    SparseVector got = circle_product(h, alpha, alpha, n0);
    // terms: C(1/2,0) a_{-1}a + C(1/2,1) a_0 a + C(1/2,2) a_1 a
    CHECK(h.gen_mode(0, h.id_of({-1})).zero());
    SparseVector expect = h.state({-1, -1});
    expect.add_scaled(h.vacuum(), make_scalar(-1, 8));
    CHECK(got == expect);
}

TEST_CASE("trivial-twist specialization equals the independent level oracle") {
    Voa h = heis1();
    Voa v = vir(make_scalar(1, 2));
    for (int n = 0; n <= 1; ++n) {
        Level lvl = parse_level(std::to_string(n), 1);
        for (const Voa* voa : {&h, &v}) {
            for (int u_id : voa->basis_up_to(6)) {
                for (int v_id : voa->basis_up_to(6 - voa->weight(u_id))) {
                    SparseVector u(u_id), w(v_id);
                    CHECK(circle_product(*voa, u, w, lvl) ==
                          untwisted_circle_oracle(*voa, u, w, n));
                    CHECK(star_product(*voa, u, w, lvl) ==
                          untwisted_star_oracle(*voa, u, w, n));
                }
            }
        }
    }
}

TEST_CASE("bottom-level twisted specialization equals the independent oracle") {
    Voa h = heis2();
    Level n0 = parse_level("0", 2);
    for (int u_id : h.basis_up_to(6)) {
        for (int v_id : h.basis_up_to(6 - h.weight(u_id))) {
            SparseVector u(u_id), w(v_id);
            CHECK(circle_product(h, u, w, n0) == order_two_bottom_circle_oracle(h, u, w));
            SparseVector star = star_product(h, u, w, n0);
            if (h.sector(u_id) != 0) {
                CHECK(star.zero());
            } else {
                SparseVector expect;
                for (int j = 0; j <= h.weight(u_id) + h.weight(v_id); ++j) {
                    Scalar c = rat_binomial(Scalar(h.weight(u_id)), j);
                    if (c != 0) expect.add_scaled(h.mode(u, j - 1, w), c);
                }
                CHECK(star == expect);
            }
        }
    }
}

TEST_CASE("star identity element") {
    Voa h = heis2();
    for (const char* s : {"0", "1/2", "1", "1+1/2"}) {
        Level lvl = parse_level(s, 2);
        for (int id : h.basis_up_to(4)) {
            CHECK(star_product(h, h.vacuum(), SparseVector(id), lvl) == SparseVector(id));
        }
    }
    // nonzero sector annihilates
    Level half = parse_level("1/2", 2);
    CHECK(star_product(h, h.state({-1}), h.state({-1}), half).zero());
}

TEST_CASE("trivial-twist bottom star, term by term") {
    Voa h = heis1();
    SparseVector alpha = h.state({-1});
    Level n0 = parse_level("0", 1);
    // terms C(1,0) a_{-1}a + C(1,1) a_0 a, and a_0 a = 0
    CHECK(star_product(h, alpha, alpha, n0) == h.state({-1, -1}));
}

TEST_CASE("spanning set at cutoff zero") {
    Voa h1 = heis1();
    Level n0 = parse_level("0", 1);
    auto elems = o_spanning_elements(h1, n0, 0, 2);
    CHECK(elems.empty());  // the vacuum class survives: the algebra is unital
}

TEST_CASE("depth family stays inside the span of the plain generators") {
    Voa h = heis2();
    for (const char* s : {"0", "1/2"}) {
        Level lvl = parse_level(s, 2);
        auto plain = o_spanning_elements(h, lvl, 7, 0);
        SubspaceBasis span;
        for (const auto& e : plain) span.insert(e.vec);
        for (const auto& e : o_spanning_elements(h, lvl, 5, 2)) {
            CHECK(span.reduce(e.vec).zero());
        }
    }
}

TEST_CASE("presentation: trivial twist collapse of the boson at the bottom") {
    Voa h = heis1();
    Presentation p = build_algebra(h, parse_level("0", 1), 4, 2);
    // a(-2) = -a(-1) in the quotient
    SparseVector rel = h.state({-2}) + h.state({-1});
    CHECK(p.relations.reduce(rel).zero());
    CHECK(p.identity_class >= 0);
    for (int w = 0; w <= 4; ++w) CHECK(p.dims_per_weight[w] == 1);
}

TEST_CASE("presentation: order-two twist kills the odd part") {
    Voa h = heis2();
    Presentation p = build_algebra(h, parse_level("0", 2), 4, 2);
    for (int id : h.sector_basis(1, 4)) {
        CHECK(p.relations.reduce(SparseVector(id)).zero());
    }
    CHECK(p.identity_class >= 0);
}

TEST_CASE("presentation: Virasoro bottom level is polynomial in the conformal class") {
    Voa v = vir(make_scalar(1, 2));
    Presentation p = build_algebra(v, parse_level("0", 1), 6, 2);
    CHECK(p.identity_class >= 0);
    for (int w = 0; w <= 6; ++w) {
        CHECK(p.dims_per_weight[w] <= 1);
        if (w % 2 == 1) CHECK(p.dims_per_weight[w] == 0);
    }
}

TEST_CASE("structure checks pass on small configurations") {
    struct Config {
        Family fam;
        int T;
        const char* lvl;
        int W;
    };
    for (const Config& cfg : {Config{Family::heisenberg, 2, "0", 5},
                              Config{Family::heisenberg, 2, "1/2", 5},
                              Config{Family::heisenberg, 1, "1", 5},
                              Config{Family::virasoro, 1, "0", 6}}) {
        Voa voa({cfg.fam, make_scalar(1, 2), cfg.T}, 20);
        Level lvl = parse_level(cfg.lvl, cfg.T);
        Presentation p = build_algebra(voa, lvl, cfg.W, 2);
        auto elems = o_spanning_elements(voa, lvl, cfg.W, 2);
        CAPTURE(cfg.lvl);
        CheckResult assoc = check_associativity(voa, p);
        CHECK(assoc.pass);
        CHECK(assoc.cases > 0);
        CHECK(check_identity(voa, p).pass);
        CHECK(check_center(voa, p).pass);
        CHECK(check_ideal(voa, p, elems).pass);
        CHECK(check_anti_isomorphism(voa, p, elems).pass);
        CHECK(check_commutator_formula(voa, p).pass);
        if (cfg.T == 2) {
            CheckResult collapse = check_sector_collapse(voa, p);
            CHECK(collapse.pass);
            CHECK(collapse.cases > 0);
        }
        if (lvl.has_predecessor()) {
            CheckResult surj = check_surjection(voa, lvl, cfg.W, 2);
            CHECK(surj.pass);
            CHECK(surj.cases > 0);
        }
    }
}

TEST_CASE("negative control: a perturbed table fails associativity with a witness") {
    Voa h = heis1();
    Presentation p = build_algebra(h, parse_level("0", 1), 5, 2);
    Presentation bad = perturb_presentation(p);
    CheckResult res = check_associativity(h, bad);
    CHECK_FALSE(res.pass);
    CHECK_FALSE(res.witness.empty());
}

TEST_CASE("monotone stabilization in cutoff and depth") {
    Voa h = heis2();
    Level lvl = parse_level("1/2", 2);
    std::vector<std::vector<int>> cum;
    for (int W : {4, 5, 6}) {
        Presentation p = build_algebra(h, lvl, W, 2);
        std::vector<int> c(5, 0);
        int acc = 0;
        for (int w = 0; w <= 4; ++w) {
            acc += p.dims_per_weight[w];
            c[w] = acc;
        }
        cum.push_back(c);
    }
    for (std::size_t t = 1; t < cum.size(); ++t) {
        for (int w = 0; w <= 4; ++w) CHECK(cum[t][w] <= cum[t - 1][w]);
    }
    std::vector<int> prev;
    for (int depth : {0, 1, 2}) {
        Presentation p = build_algebra(h, lvl, 5, depth);
        std::vector<int> c;
        int acc = 0;
        for (int w = 0; w <= 5; ++w) {
            acc += p.dims_per_weight[w];
            c.push_back(acc);
        }
        if (!prev.empty()) {
            for (std::size_t w = 0; w < c.size(); ++w) CHECK(c[w] <= prev[w]);
        }
        prev = c;
    }
}

TEST_CASE("vacuum-insertion certificates at twisted levels") {
    Voa h = heis2();
    for (const char* s : {"0", "1/2", "1"}) {
        Presentation p = build_algebra(h, parse_level(s, 2), 5, 2);
        CheckResult res = check_sector_collapse(h, p);
        CAPTURE(s);
        CHECK(res.pass);
    }
}

TEST_CASE("presentation serialization is deterministic and thread-independent") {
    Voa h = heis2();
    Level lvl = parse_level("1/2", 2);
    Presentation a = build_algebra(h, lvl, 5, 2, 1);
    Presentation b = build_algebra(h, lvl, 5, 2, 4);
    CHECK(presentation_json(h, a) == presentation_json(h, b));
    CHECK(presentation_csv(h, a) == presentation_csv(h, b));
}

TEST_CASE("csv quoting") {
    CHECK(csv_quote("plain") == "plain");
    CHECK(csv_quote("a,b") == "\"a,b\"");
    CHECK(csv_quote("say \"hi\"") == "\"say \"\"hi\"\"\"");
}
