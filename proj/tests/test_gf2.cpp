#include <doctest.h>

#include <random>

#include "nuca/constructions.hpp"
#include "nuca/engine.hpp"
#include "nuca/gf2.hpp"

using namespace nuca;
using namespace nuca::gf2;
using constructions::Family;

namespace {

Gf2System dense(std::size_t n_vars, const std::vector<std::vector<int>>& rows,
                const std::vector<int>& rhs) {
    Gf2System sys;
    sys.n_vars = n_vars;
    sys.n_eqs = rows.size();
    sys.rhs = BitVec(sys.n_eqs);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        BitVec row(n_vars);
        for (int c : rows[r]) row.set(static_cast<std::size_t>(c), true);
        sys.rows.push_back(row);
        if (rhs[r]) sys.rhs.set(r, true);
    }
    return sys;
}

}  // namespace

TEST_CASE("identity system") {
    Gf2System sys = dense(3, {{0}, {1}, {2}}, {1, 0, 1});
    CHECK(rank(sys) == 3);
    auto x = solve(sys);
    REQUIRE(x.has_value());
    CHECK(x->get(0));
    CHECK_FALSE(x->get(1));
    CHECK(x->get(2));
    CHECK(nullspace_basis(sys).empty());
}

TEST_CASE("duplicate rows: rank drop, orphan rhs, nullspace dimension") {
    // Both image cells read e0 xor e1 over four variables.
    Gf2System sys = dense(4, {{1, 2}, {1, 2}}, {0, 0});
    CHECK(rank(sys) == 1);

    Gf2System bad = dense(4, {{1, 2}, {1, 2}}, {1, 0});
    CHECK_FALSE(solve(bad).has_value());

    CHECK(nullspace_basis(sys).size() == 3);
}

TEST_CASE("solve returns the lexicographically least solution") {
    // x0 xor x1 = 1: solutions (1,0) and (0,1); lex-least prefers x0 = 0.
    Gf2System sys = dense(2, {{0, 1}}, {1});
    auto x = solve(sys);
    REQUIRE(x.has_value());
    CHECK_FALSE(x->get(0));
    CHECK(x->get(1));
}

TEST_CASE("lex_min_nonzero picks the latest-leading element") {
    // span{ (1,0,1), (0,1,0) }: lex order zeros early coordinates first.
    std::vector<BitVec> basis;
    BitVec a(3), b(3);
    a.set(0, true);
    a.set(2, true);
    b.set(1, true);
    basis = {a, b};
    auto m = lex_min_nonzero(basis);
    REQUIRE(m.has_value());
    CHECK_FALSE(m->get(0));
    CHECK(m->get(1));
    CHECK_FALSE(m->get(2));
    CHECK_FALSE(lex_min_nonzero({}).has_value());
}

TEST_CASE("lex_least_unattainable") {
    SUBCASE("full rank: nothing unattainable") {
        Gf2System sys = dense(2, {{0}, {1}}, {0, 0});
        CHECK_FALSE(lex_least_unattainable(sys).has_value());
    }
    SUBCASE("duplicate rows, homogeneous: least violation flips the later bit") {
        Gf2System sys = dense(4, {{1, 2}, {1, 2}}, {0, 0});
        auto t = lex_least_unattainable(sys);
        REQUIRE(t.has_value());
        CHECK_FALSE(t->get(0));
        CHECK(t->get(1));
    }
    SUBCASE("affine offset violating a check: zero target is unattainable") {
        Gf2System sys = dense(4, {{1, 2}, {1, 2}}, {1, 0});
        auto t = lex_least_unattainable(sys);
        REQUIRE(t.has_value());
        CHECK_FALSE(t->any());
    }
}

TEST_CASE("window system for the block distribution") {
    RuleSet rs = constructions::build_paper_rules(Family::Moore, 1);
    DistPresentation dist = constructions::build_paper_distribution(Family::Moore, 1, {false, 1});
    // D = [0,1]: g at 0 and f at 1 both read {e0, e1}.
    Gf2System sys =
        build_linear_system(rs, dist, {.eq_window = Box::interval(0, 1)}, std::nullopt);
    CHECK(sys.n_eqs == 2);
    CHECK(sys.n_vars == 4);  // hull [-1, 2]
    CHECK(rank(sys) == 1);
    CHECK(nullspace_basis(sys).size() == 3);

    // rhs (1,0) has no pre-image: the paper's orphan shape.
    Pattern target;
    target.domain = Box::interval(0, 1);
    target.states = {1, 0};
    Gf2System with_target = build_linear_system(rs, dist, {.eq_window = target.domain}, target);
    CHECK_FALSE(solve(with_target).has_value());
}

TEST_CASE("cyclic system (g f g f) has rank 2") {
    RuleSet rs = constructions::build_paper_rules(Family::Moore, 1);
    DistPresentation dist{CyclicWord{4, {1, 0, 1, 0}}};
    Gf2System sys = build_linear_system(
        rs, dist, {.eq_window = Box::interval(0, 3), .cyclic_length = 4}, std::nullopt);
    CHECK(sys.n_vars == 4);
    CHECK(sys.n_eqs == 4);
    CHECK(rank(sys) == 2);
}

TEST_CASE("empty window") {
    RuleSet rs = constructions::build_paper_rules(Family::Moore, 1);
    DistPresentation dist = constructions::build_paper_distribution(Family::Moore, 1, {true, 0});
    Gf2System sys = build_linear_system(rs, dist, {.eq_window = Box::interval(0, -1)}, std::nullopt);
    CHECK(sys.n_eqs == 0);
    CHECK(rank(sys) == 0);
}

TEST_CASE("oracle equivalence on small windows") {
    // Attainable image sets and pre-image counts from brute force must match
    // the rank computations exactly.
    RuleSet rs = constructions::build_paper_rules(Family::Moore, 1);
    std::vector<DistPresentation> dists{
        constructions::build_paper_distribution(Family::Moore, 1, {true, 0}),
        constructions::build_paper_distribution(Family::Moore, 1, {false, 1}),
        DistPresentation{PeriodicWord{{1}, 0}},
    };
    for (const auto& dist : dists) {
        for (Coord width = 1; width <= 3; ++width) {
            Box d = Box::interval(0, width - 1);
            Box pre = rs.neighborhood.hull(d);
            Gf2System sys = build_linear_system(rs, dist, {.eq_window = d}, std::nullopt);
            std::size_t rk = rank(sys);

            std::map<std::uint64_t, int> image_counts;
            const Coord cells = pre.cell_count();
            for (std::uint64_t bits = 0; bits < (1ull << cells); ++bits) {
                std::map<Cell, State> m;
                for (Coord i = 0; i < cells; ++i)
                    if (bits >> i & 1) m[pre.cell_at(i)] = 1;
                Configuration c = Configuration::finite_support(0, std::move(m));
                Pattern img = apply_global_window(rs, dist, c, d);
                std::uint64_t key = 0;
                for (State s : img.states) key = key * 2 + s;
                image_counts[key]++;
            }
            // surjective iff rank == n_eqs
            CHECK((image_counts.size() == (1ull << width)) == (rk == sys.n_eqs));
            // every attainable image has 2^(n_vars - rank) pre-images
            for (const auto& [key, count] : image_counts)
                CHECK(count == (1ll << (sys.n_vars - rk)));
        }
    }
}

TEST_CASE("solving then applying reproduces the target") {
    RuleSet rs = constructions::build_paper_rules(Family::Moore, 2);
    DistPresentation dist = constructions::build_paper_distribution(Family::Moore, 2, {true, 0});
    Box d = Box::interval(-1, 3);
    std::mt19937 gen(7);
    for (int trial = 0; trial < 20; ++trial) {
        Pattern target;
        target.domain = d;
        for (Coord i = 0; i < d.cell_count(); ++i)
            target.states.push_back(static_cast<State>(gen() & 1u));
        Gf2System sys = build_linear_system(rs, dist, {.eq_window = d}, target);
        auto sol = solve(sys);
        if (!sol) continue;
        std::map<Cell, State> m;
        for (std::size_t v = 0; v < sys.n_vars; ++v)
            if (sol->get(v)) m[sys.var_keys[v].cell] = 1;
        Configuration e = Configuration::finite_support(0, std::move(m));
        CHECK(apply_global_window(rs, dist, e, d) == target);
    }
}
