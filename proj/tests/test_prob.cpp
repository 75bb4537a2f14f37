#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"

using namespace ergolab;
using testutil::Rng;

TEST_CASE("probability space invariants") {
    CHECK_THROWS_AS(ProbSpace({"a"}, {Rat(1, 2)}), Error);     // mass != 1
    CHECK_THROWS_AS(ProbSpace({"a", "a"}, {Rat(1, 2), Rat(1, 2)}), Error);
    CHECK_THROWS_AS(ProbSpace({"a"}, {Rat(-1), Rat(2)}), Error);
    auto x = ProbSpace::make({"a", "b", "c"}, {Rat(1, 2), Rat(0), Rat(1, 2)});
    CHECK(x->support() == std::vector<int>{0, 2});
    CHECK(x->has_null_points());
    CHECK(x->index_of("b") == 1);
    CHECK(x->index_of("zz") == -1);
}

TEST_CASE("sigma algebra cells live on the support") {
    auto x = ProbSpace::make({"a", "b", "c"}, {Rat(1, 2), Rat(0), Rat(1, 2)});
    SigmaAlg s = SigmaAlg::singletons(x);
    CHECK(s.cell_count() == 2);
    CHECK(s.cell_of(1) == -1);  // null point sits in the null cell
    CHECK_THROWS_AS(SigmaAlg(x, {{0, 1}, {2}}), Error);  // null point inside a cell
    CHECK_THROWS_AS(SigmaAlg(x, {{0}}), Error);          // support not covered
}

TEST_CASE("conditional expectation: frozen example and defining identity") {
    auto x = testutil::uniform4();
    SigmaAlg phi(x, {{0, 1}, {2, 3}});
    Obs f(x, {GaussRat(1), GaussRat(0), GaussRat(1), GaussRat(1)});
    Obs e = cond_exp(f, phi);
    CHECK(e.value(0) == GaussRat(Rat(1, 2)));
    CHECK(e.value(1) == GaussRat(Rat(1, 2)));
    CHECK(e.value(2) == GaussRat(1));
    CHECK(e.value(3) == GaussRat(1));

    // Adjointness against every cell indicator is the defining property.
    for (int c = 0; c < phi.cell_count(); ++c) {
        Obs g = Obs::indicator(x, phi.cell(c));
        CHECK(integral(e * g) == integral(f * g));
    }

    CHECK(cond_exp(f, SigmaAlg::singletons(x)) == f);
    Obs e1 = cond_exp(f, SigmaAlg::trivial(x));
    for (int p = 0; p < 4; ++p) CHECK(e1.value(p) == integral(f));
}

TEST_CASE("conditional expectation is an idempotent contraction") {
    Rng rng;
    auto x = ProbSpace::make({"a", "b", "c", "d", "e"},
                             {Rat(1, 10), Rat(2, 10), Rat(3, 10), Rat(1, 10), Rat(3, 10)});
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<GaussRat> vals;
        for (int p = 0; p < 5; ++p) vals.push_back(rng.gauss());
        Obs f(x, vals);
        SigmaAlg phi = SigmaAlg::from_cell_ids(x, {rng.below(3), rng.below(3), rng.below(3),
                                                   rng.below(3), rng.below(3)});
        Obs e = cond_exp(f, phi);
        CHECK(cond_exp(e, phi) == e);
        CHECK(l2_norm_sq(e) <= l2_norm_sq(f));
        // Adjointness for every pair of cell indicators, exhaustively.
        for (int c = 0; c < phi.cell_count(); ++c) {
            Obs g = Obs::indicator(x, phi.cell(c));
            CHECK(integral(e * g) == integral(f * g));
        }
    }
}

TEST_CASE("join of partitions") {
    auto x = testutil::uniform4();
    SigmaAlg a(x, {{0, 1}, {2, 3}});
    SigmaAlg b(x, {{0, 2}, {1, 3}});
    CHECK(join_sigma({a, b}) == SigmaAlg::singletons(x));
    CHECK(join_sigma({a, a}) == a);
    CHECK(join_sigma({a, SigmaAlg::trivial(x)}) == a);
    CHECK(join_sigma(x, {}) == SigmaAlg::trivial(x));
}

TEST_CASE("join is the least upper bound in the refinement order") {
    const int n = 6;
    auto x = ProbSpace::uniform(n);
    std::vector<SigmaAlg> parts;
    for (const auto& cells : testutil::all_partitions(n))
        if (cells.size() <= 5) parts.emplace_back(x, cells);

    for (const auto& p : parts) CHECK(p.refines(p));
    for (const auto& p : parts)
        for (const auto& q : parts) {
            if (p.refines(q) && q.refines(p)) CHECK(p == q);
            SigmaAlg j = join_sigma({p, q});
            CHECK(j.refines(p));
            CHECK(j.refines(q));
            // Least: any common refinement of p and q refines the join.
            for (const auto& r : parts)
                if (r.refines(p) && r.refines(q)) CHECK(r.refines(j));
        }
}

TEST_CASE("refinement order is transitive") {
    auto x = ProbSpace::uniform(4);
    std::vector<SigmaAlg> parts;
    for (const auto& cells : testutil::all_partitions(4)) parts.emplace_back(x, cells);
    for (const auto& p : parts)
        for (const auto& q : parts)
            for (const auto& r : parts)
                if (p.refines(q) && q.refines(r)) CHECK(p.refines(r));
}

TEST_CASE("l2 forms") {
    auto x = ProbSpace::uniform(2);
    CHECK(l2_norm_sq(Obs::constant(x, GaussRat(1))) == Rat(1));
    auto y = testutil::uniform4();
    CHECK(l2_norm_sq(Obs::indicator(y, {0, 1})) == Rat(1, 2));
    Obs f(x, {GaussRat(1), GaussRat::i()});
    CHECK(l2_norm_sq(f) == Rat(1));
    CHECK(l2_inner(f, f) == GaussRat(1));
    // Sesquilinearity in the second argument.
    Obs g(x, {GaussRat::i(), GaussRat(1)});
    CHECK(l2_inner(f, g) == l2_inner(g, f).conj());
}

TEST_CASE("relative product") {
    auto x = testutil::uniform4();
    SUBCASE("singleton cells give the diagonal") {
        Coupling c = rel_product(x, SigmaAlg::singletons(x));
        CHECK(c.mass().size() == 4);
        for (int p = 0; p < 4; ++p) CHECK(c.mass_of({p, p}) == Rat(1, 4));
    }
    SUBCASE("trivial algebra gives the independent square") {
        Coupling c = rel_product(x, SigmaAlg::trivial(x));
        CHECK(c.mass().size() == 16);
        CHECK(c.mass_of({1, 3}) == Rat(1, 16));
    }
    SUBCASE("two cells give 1/8 within cells, 0 across") {
        SigmaAlg phi(x, {{0, 1}, {2, 3}});
        Coupling c = rel_product(x, phi);
        CHECK(c.mass_of({0, 1}) == Rat(1, 8));
        CHECK(c.mass_of({2, 2}) == Rat(1, 8));
        CHECK(c.mass_of({0, 2}) == Rat(0));
        for (int i = 0; i < 2; ++i) {
            auto marg = c.marginal(i);
            for (int p = 0; p < 4; ++p) CHECK(marg[p] == x->weight(p));
        }
        // Coordinates relatively independent over the lifted algebra.
        SigmaAlg s1 = c.lift(0, SigmaAlg::singletons(x));
        SigmaAlg s2 = c.lift(1, SigmaAlg::singletons(x));
        SigmaAlg lifted_phi = c.lift(0, phi);
        CHECK(rel_indep_report(s1, s2, lifted_phi).pass);
    }
}

TEST_CASE("coupling validation rejects bad marginals") {
    auto x = ProbSpace::uniform(2);
    std::map<std::vector<int>, Rat> mass;
    mass[{0, 0}] = Rat(1, 2);
    mass[{0, 1}] = Rat(1, 2);  // first marginal puts everything on point 0
    CHECK_THROWS_AS(Coupling({x, x}, mass), Error);
}

TEST_CASE("relative independence report") {
    auto x = testutil::uniform4();  // model of {0,1} x {0,1}
    SigmaAlg coord1(x, {{0, 1}, {2, 3}});
    SigmaAlg coord2(x, {{0, 2}, {1, 3}});
    CHECK(rel_indep_report(coord1, coord2, SigmaAlg::trivial(x)).pass);
    CHECK(rel_indep_report(coord1, coord1, coord1).pass);
    auto bad = rel_indep_report(SigmaAlg::singletons(x), SigmaAlg::singletons(x),
                                SigmaAlg::trivial(x));
    CHECK_FALSE(bad.pass);
    CHECK_FALSE(bad.witness.empty());
    CHECK(bad.lhs != bad.rhs);
}

TEST_CASE("coupling rectangle mass and lifts") {
    auto x = testutil::uniform4();
    Coupling diag = Coupling::diagonal(x, 3);
    CHECK(diag.rectangle_mass({{0, 1}, {1, 2}, {1}}) == Rat(1, 4));
    Obs f = Obs::indicator(x, {1});
    Obs lifted = diag.lift(2, f);
    CHECK(integral(lifted) == GaussRat(Rat(1, 4)));
}
