#include <doctest.h>

#include "nuca/constructions.hpp"
#include "nuca/core.hpp"

using namespace nuca;

namespace {

RuleSet moore1() { return constructions::build_paper_rules(constructions::Family::Moore, 1); }

}  // namespace

TEST_CASE("mixed-radix round trip") {
    Alphabet a({2, 3, 2});
    CHECK(a.size() == 12);
    for (State v = 0; v < a.size(); ++v) {
        auto d = a.decode(v);
        CHECK(a.encode(d) == v);
        for (std::size_t t = 0; t < a.num_tracks(); ++t) CHECK(a.track(v, t) == d[t]);
    }
    CHECK_THROWS_AS(a.decode(12), std::invalid_argument);
    CHECK_THROWS_AS(Alphabet({2, 0}), std::invalid_argument);
}

TEST_CASE("two-track encoding matches (a1, a2) order") {
    Alphabet a({2, 2});
    CHECK(a.encode(std::vector<std::uint32_t>{1, 0}) == 2);
    CHECK(a.encode(std::vector<std::uint32_t>{0, 1}) == 1);
    CHECK(a.track(2, 0) == 1);
    CHECK(a.track(2, 1) == 0);
}

TEST_CASE("eval_local on the XOR pair") {
    RuleSet rs = moore1();
    // f1(a-1, a0, a1) = a-1 xor a0; g1 = a0 xor a1
    std::vector<State> in{1, 0, 0};
    CHECK(eval_local(rs.rules[0], in) == 1);
    in = {0, 0, 1};
    CHECK(eval_local(rs.rules[1], in) == 1);
    in = {0, 0, 0};
    CHECK(eval_local(rs.rules[0], in) == 0);
    CHECK(eval_local(rs.rules[1], in) == 0);
    std::vector<State> bad{1, 0};
    CHECK_THROWS_AS(eval_local(rs.rules[0], bad), std::invalid_argument);
    std::vector<State> oob{2, 0, 0};
    CHECK_THROWS_AS(eval_local(rs.rules[0], oob), std::invalid_argument);
}

TEST_CASE("rule_as_linear recovers and rejects") {
    SUBCASE("f1 has the two-term form") {
        RuleSet rs = moore1();
        auto form = rule_as_linear(rs.rules[0]);
        REQUIRE(form.has_value());
        REQUIRE(form->tracks.size() == 1);
        CHECK(form->tracks[0].terms == std::vector<LinearTerm>{{0, 0}, {1, 0}});
        CHECK(form->tracks[0].constant == 0);
    }
    SUBCASE("majority of three is not linear") {
        Alphabet a({2});
        std::vector<State> table(8);
        for (int i = 0; i < 8; ++i) {
            int b2 = i >> 2 & 1, b1 = i >> 1 & 1, b0 = i & 1;
            table[static_cast<std::size_t>(i)] = static_cast<State>((b2 + b1 + b0) >= 2);
        }
        LocalRule r = LocalRule::from_table(a, 3, table);
        CHECK_FALSE(r.linear.has_value());
    }
    SUBCASE("constant rules") {
        Alphabet a({2});
        LocalRule zero = LocalRule::from_table(a, 2, {0, 0, 0, 0});
        REQUIRE(zero.linear.has_value());
        CHECK(zero.linear->tracks[0].terms.empty());
        CHECK(zero.linear->tracks[0].constant == 0);
        LocalRule one = LocalRule::from_table(a, 2, {1, 1, 1, 1});
        REQUIRE(one.linear.has_value());
        CHECK(one.linear->tracks[0].terms.empty());
        CHECK(one.linear->tracks[0].constant == 1);
    }
    SUBCASE("linear evaluation always equals table lookup") {
        RuleSet rs = constructions::build_paper_rules(constructions::Family::Myhill, 2);
        for (const LocalRule& r : rs.rules) {
            REQUIRE(r.linear.has_value());
            std::vector<State> tuple(r.arity, 0);
            for (std::size_t idx = 0; idx < r.table.size(); ++idx) {
                std::size_t rem = idx;
                for (std::uint32_t k = r.arity; k-- > 0;) {
                    tuple[k] = static_cast<State>(rem % r.alphabet.size());
                    rem /= r.alphabet.size();
                }
                CHECK(eval_linear(*r.linear, r.alphabet, tuple) == r.table[idx]);
            }
        }
    }
}

TEST_CASE("dist_at across presentations") {
    DistPresentation per{PeriodicWord{{1, 0}, 0}};  // word [g, f] as indices 1, 0
    CHECK(dist_at(per, 5) == 0);
    CHECK(dist_at(per, 0) == 1);
    CHECK(dist_at(per, -1) == 0);
    CHECK(dist_at(per, -2) == 1);

    EventuallyPeriodicWord ep;
    ep.left = {1};
    ep.middle = {1, 0};
    ep.right = {1};
    ep.middle_start = 0;
    DistPresentation dep{ep};
    CHECK(dist_at(dep, 1) == 0);
    CHECK(dist_at(dep, -7) == 1);
    CHECK(dist_at(dep, 0) == 1);
    CHECK(dist_at(dep, 2) == 1);

    DistPresentation cyc{CyclicWord{4, {1, 0, 1, 0}}};
    CHECK(dist_at(cyc, -1) == 0);
    CHECK(dist_at(cyc, 4) == 1);

    DistPresentation ex{ExplicitWindowWord{{0, 0}, 3, 1}};
    CHECK(dist_at(ex, 3) == 0);
    CHECK(dist_at(ex, 2) == 1);
    CHECK(dist_at(ex, 100) == 1);
}

TEST_CASE("periodicity of periodic presentations") {
    DistPresentation per{PeriodicWord{{2, 0, 1}, -4}};
    for (Coord x = -30; x <= 30; ++x) CHECK(dist_at(per, x) == dist_at(per, x + 3));
    Configuration c = Configuration::periodic({0, 1}, 0);
    for (Coord x = -10; x <= 10; ++x) CHECK(config_at(c, {x, 0}) == config_at(c, {x + 2, 0}));
}

TEST_CASE("substitutive expansion is prefix-stable and mirrored") {
    std::map<int, std::vector<int>> tm{{0, {0, 1}}, {1, {1, 0}}};
    SubstitutiveWord d9 = SubstitutiveWord::make(tm, 0, 9, 0, 1u << 20);
    SubstitutiveWord d10 = SubstitutiveWord::make(tm, 0, 10, 0, 1u << 20);
    REQUIRE(d9.expansion.size() == 512);
    REQUIRE(d10.expansion.size() == 1024);
    for (std::size_t i = 0; i < d9.expansion.size(); ++i) CHECK(d9.expansion[i] == d10.expansion[i]);

    DistPresentation dist{d10};
    CHECK(dist_at(dist, 0) == 0);
    CHECK(dist_at(dist, 1) == 1);
    CHECK(dist_at(dist, -1) == dist_at(dist, 0));  // mirror
    CHECK(dist_at(dist, -5) == dist_at(dist, 4));
    CHECK_THROWS_AS(dist_at(dist, 5000), BudgetError);
    CHECK_THROWS_AS(SubstitutiveWord::make(tm, 0, 25, 0, 1u << 20), BudgetError);
}

TEST_CASE("config_at across variants") {
    Configuration fs = Configuration::finite_support(0, {{{0, 0}, 1}});
    CHECK(fs.at1(0) == 1);
    CHECK(fs.at1(3) == 0);
    Configuration per = Configuration::periodic({0, 1}, 0);
    CHECK(per.at1(-2) == 0);
    Configuration cyc = Configuration::cyclic({1, 0, 0});
    CHECK(cyc.at1(4) == 0);
    CHECK(cyc.at1(3) == 1);
}

TEST_CASE("finite support stores no background cells") {
    Configuration fs = Configuration::finite_support(7, {{{1, 0}, 7}, {{2, 0}, 3}});
    const auto& f = std::get<FiniteSupportConf>(fs.v);
    CHECK(f.cells.size() == 1);
    CHECK(f.cells.begin()->first == Cell{2, 0});
}

TEST_CASE("diff_set") {
    Configuration a = Configuration::finite_support(0, {{{0, 0}, 1}});
    Configuration b = Configuration::finite_support(0, {{{1, 0}, 1}});
    SUBCASE("identical configurations") {
        DiffResult d = diff_set(a, a, Box::interval(-5, 5));
        CHECK(d.cells.empty());
        CHECK(d.complete);
    }
    SUBCASE("two finite supports") {
        DiffResult d = diff_set(a, b, Box::interval(-5, 5));
        CHECK(d.cells == std::vector<Cell>{{0, 0}, {1, 0}});
        CHECK(d.complete);
    }
    SUBCASE("window misses a difference") {
        DiffResult d = diff_set(a, b, Box::interval(1, 5));
        CHECK(d.cells == std::vector<Cell>{{1, 0}});
        CHECK_FALSE(d.complete);
    }
    SUBCASE("periodic vs periodic is never complete") {
        Configuration p1 = Configuration::periodic({0, 1}, 0);
        Configuration p2 = Configuration::periodic({1, 0}, 0);
        DiffResult d = diff_set(p1, p2, Box::interval(0, 3));
        CHECK(d.cells.size() == 4);
        CHECK_FALSE(d.complete);
    }
}

TEST_CASE("shift_config") {
    Configuration fs = Configuration::finite_support(0, {{{0, 0}, 1}});
    Configuration s = shift_config(fs, {2, 0});
    CHECK(s.at1(2) == 1);
    CHECK(s.at1(0) == 0);
    Configuration back = shift_config(s, {-2, 0});
    for (Coord x = -4; x <= 4; ++x) CHECK(back.at1(x) == fs.at1(x));

    Configuration per = Configuration::periodic({0, 1, 1}, 0);
    Configuration ps = shift_config(per, {5, 0});
    for (Coord x = -6; x <= 6; ++x) CHECK(ps.at1(x) == per.at1(x - 5));

    Configuration cyc = Configuration::cyclic({1, 0, 0, 0});
    Configuration cs = shift_config(cyc, {1, 0});
    for (Coord x = 0; x < 4; ++x) CHECK(cs.at1(x) == cyc.at1(x - 1));
}

TEST_CASE("extract_pattern and translated copies") {
    Configuration fs = Configuration::finite_support(0, {{{0, 0}, 1}});
    Pattern p = extract_pattern(fs, Box::interval(0, 1));
    CHECK(p.states == std::vector<State>{1, 0});

    SUBCASE("pattern vs itself") { CHECK(is_translated_copy(p, p) == Cell{0, 0}); }
    SUBCASE("same values, shifted domain") {
        Pattern q = p;
        q.domain = Box::interval(5, 6);
        CHECK(is_translated_copy(p, q) == Cell{5, 0});
    }
    SUBCASE("values differ") {
        Pattern q;
        q.domain = Box::interval(5, 6);
        q.states = {0, 1};
        CHECK_FALSE(is_translated_copy(p, q).has_value());
    }
    SUBCASE("domain shape mismatch") {
        Pattern q = extract_pattern(fs, Box::interval(0, 2));
        CHECK_FALSE(is_translated_copy(p, q).has_value());
    }
}

TEST_CASE("two-dimensional patterns and copies") {
    std::map<Cell, State> cells{{{0, 0}, 1}, {{1, 1}, 1}};
    Configuration fs = Configuration::finite_support(0, cells);
    Box dom{{0, 0}, 2, 2, 2};
    Pattern p = extract_pattern(fs, dom);
    CHECK(p.states == std::vector<State>{1, 0, 0, 1});
    CHECK(p.at({1, 1}) == 1);

    Box shifted{{3, -2}, 2, 2, 2};
    std::map<Cell, State> cells2{{{3, -2}, 1}, {{4, -1}, 1}};
    Pattern q = extract_pattern(Configuration::finite_support(0, cells2), shifted);
    CHECK(is_translated_copy(p, q) == Cell{3, -2});
}

TEST_CASE("neighborhood radius and hull") {
    Neighborhood nb = Neighborhood::line(-2, 1);
    CHECK(nb.radius() == 2);
    Box h = nb.hull(Box::interval(0, 3));
    CHECK(h.x_min() == -2);
    CHECK(h.x_max() == 4);
}
