#include <doctest.h>

#include <random>

#include "nuca/recurrence.hpp"

using namespace nuca;
using namespace nuca::recurrence;

namespace {

DistPresentation ep(std::vector<int> l, std::vector<int> m, std::vector<int> r, Coord i = 0) {
    EventuallyPeriodicWord w;
    w.left = std::move(l);
    w.middle = std::move(m);
    w.right = std::move(r);
    w.middle_start = i;
    return DistPresentation{w};
}

DistPresentation thue_morse(std::uint32_t depth = 10) {
    std::map<int, std::vector<int>> tm{{0, {0, 1}}, {1, {1, 0}}};
    return DistPresentation{SubstitutiveWord::make(tm, 0, depth, 0, 1u << 20)};
}

// Independent oracle: count factor occurrences by scanning two nested
// windows; a count that is stable under widening is the global count.
struct ScanOracle {
    const DistPresentation& dist;
    Coord lo, hi;

    long long count(const std::vector<int>& p, Coord wlo, Coord whi) const {
        long long c = 0;
        for (Coord a = wlo; a + static_cast<Coord>(p.size()) - 1 <= whi; ++a) {
            bool ok = true;
            for (std::size_t k = 0; k < p.size() && ok; ++k)
                if (dist.at(a + static_cast<Coord>(k)) != p[k]) ok = false;
            if (ok) ++c;
        }
        return c;
    }
};

}  // namespace

TEST_CASE("factor occurrences") {
    SUBCASE("periodic closures are infinite") {
        DistPresentation d{PeriodicWord{{1, 0}, 0}};
        CHECK(factor_occurrences(d, {0, 1}).infinite);
        CHECK_FALSE(factor_occurrences(d, {1, 1}).infinite);
        CHECK(factor_occurrences(d, {1, 1}).count == 0);
    }
    SUBCASE("single f in a g sea") {
        DistPresentation d = ep({1}, {0}, {1});
        Occurrences o = factor_occurrences(d, {0});
        CHECK_FALSE(o.infinite);
        CHECK(o.count == 1);
        CHECK(o.positions == std::vector<Coord>{0});
        Occurrences o3 = factor_occurrences(d, {1, 0, 1});
        CHECK(o3.count == 1);
        CHECK(o3.positions == std::vector<Coord>{-1});
    }
    SUBCASE("tail factor is infinite") {
        DistPresentation d = ep({1}, {0}, {1});
        CHECK(factor_occurrences(d, {1, 1}).infinite);
    }
}

TEST_CASE("is_recurrent") {
    SUBCASE("periodic word") {
        DistPresentation d{PeriodicWord{{1, 0}, 0}};
        RecurrenceVerdict v = is_recurrent(d);
        CHECK(v.kind == RecurrenceKind::Recurrent);
        CHECK(v.period == 2);
    }
    SUBCASE("one f makes it non-recurrent with witness [f]") {
        DistPresentation d = ep({1}, {0}, {1});
        RecurrenceVerdict v = is_recurrent(d);
        CHECK(v.kind == RecurrenceKind::NonRecurrent);
        CHECK(v.witness == std::vector<int>{0});
    }
    SUBCASE("eventually periodic that is globally periodic") {
        // left (gf)^w, middle gf, right (gf)^w continues the same phase.
        DistPresentation d = ep({1, 0}, {1, 0}, {1, 0});
        RecurrenceVerdict v = is_recurrent(d);
        CHECK(v.kind == RecurrenceKind::Recurrent);
        CHECK(v.period == 2);
    }
    SUBCASE("phase-broken tails are not recurrent") {
        // ...gfgfgf f gfgfgf...: the doubled f is unique-ish.
        DistPresentation d = ep({1, 0}, {0}, {1, 0});
        RecurrenceVerdict v = is_recurrent(d);
        // middle f, then right starts g: ...g f | f | g f... The factor
        // [f,f] appears exactly once.
        CHECK(v.kind == RecurrenceKind::NonRecurrent);
        Occurrences o = factor_occurrences(d, v.witness);
        CHECK_FALSE(o.infinite);
        CHECK(o.count == 1);
    }
    SUBCASE("Thue-Morse is bounded-recurrent at depth 10") {
        RecurrenceVerdict v = is_recurrent(thue_morse(), 10);
        CHECK(v.kind == RecurrenceKind::BoundedRecurrent);
        CHECK(v.bound == 10);
        CHECK_FALSE(v.scan_counterexample.has_value());
    }
}

TEST_CASE("uniform recurrence") {
    SUBCASE("(g f)^w has w(1) = 2") {
        DistPresentation d{PeriodicWord{{1, 0}, 0}};
        UniformReport r = uniform_recurrence_check(d, 3);
        CHECK(r.uniform);
        CHECK(r.exact);
        CHECK(r.window_width[1] == 2);
        CHECK(r.window_width[2] == 3);
    }
    SUBCASE("single f fails at k = 1") {
        DistPresentation d = ep({1}, {0}, {1});
        UniformReport r = uniform_recurrence_check(d, 3);
        CHECK_FALSE(r.uniform);
        CHECK(r.failing_pattern == std::vector<int>{0});
        // The reported window really lacks the pattern.
        for (Coord x = r.failing_window_lo; x <= r.failing_window_hi; ++x) CHECK(d.at(x) == 1);
    }
    SUBCASE("Thue-Morse gap table is finite through length 10") {
        UniformReport r = uniform_recurrence_check(thue_morse(), 10);
        CHECK(r.uniform);
        CHECK_FALSE(r.exact);
        for (Coord k = 1; k <= 10; ++k) CHECK(r.window_width[static_cast<std::size_t>(k)] > 0);
    }
}

TEST_CASE("periodic implies recurrent and uniformly recurrent") {
    std::mt19937 gen(23);
    for (int t = 0; t < 10; ++t) {
        std::vector<int> word;
        Coord len = 1 + static_cast<Coord>(gen() % 5);
        for (Coord i = 0; i < len; ++i) word.push_back(static_cast<int>(gen() % 3));
        DistPresentation d{PeriodicWord{word, static_cast<Coord>(gen() % 7) - 3}};
        CHECK(is_recurrent(d).kind == RecurrenceKind::Recurrent);
        CHECK(uniform_recurrence_check(d, 4).uniform);
    }
}

TEST_CASE("recurrence verdict matches the factor-count oracle on random instances") {
    std::mt19937 gen(41);
    for (int t = 0; t < 30; ++t) {
        std::vector<int> l, m, r;
        auto rnd_word = [&](Coord max_len) {
            std::vector<int> w;
            Coord len = 1 + static_cast<Coord>(gen() % max_len);
            for (Coord i = 0; i < len; ++i) w.push_back(static_cast<int>(gen() % 2));
            return w;
        };
        l = rnd_word(3);
        m = rnd_word(4);
        r = rnd_word(3);
        DistPresentation d = ep(l, m, r);
        RecurrenceVerdict v = is_recurrent(d);
        if (v.kind == RecurrenceKind::Recurrent) {
            // Oracle: every short factor near the middle occurs at least twice.
            for (Coord k = 1; k <= 4; ++k)
                for (Coord a = -4; a <= 4; ++a) {
                    std::vector<int> f;
                    for (Coord i = 0; i < k; ++i) f.push_back(d.at(a + i));
                    Occurrences o = factor_occurrences(d, f);
                    CHECK((o.infinite || o.count >= 2));
                }
        } else {
            REQUIRE(v.kind == RecurrenceKind::NonRecurrent);
            Occurrences o = factor_occurrences(d, v.witness);
            CHECK_FALSE(o.infinite);
            CHECK(o.count == 1);
        }
    }
}

TEST_CASE("shortest unique pattern") {
    SUBCASE("A^w B A^w") {
        DistPresentation d = ep({0}, {1}, {0});
        UniquePattern u = shortest_unique_pattern(d);
        CHECK(u.length == 1);
        CHECK(u.pattern == std::vector<int>{1});
        CHECK(u.position == 0);
    }
    SUBCASE("recurrent input throws") {
        DistPresentation d = ep({0}, {0}, {0});
        CHECK_THROWS_AS(shortest_unique_pattern(d), std::invalid_argument);
    }
    SUBCASE("minimality: every strictly shorter factor occurs at least twice") {
        DistPresentation d = ep({0}, {1, 0, 1}, {0}, 2);
        UniquePattern u = shortest_unique_pattern(d);
        Occurrences o = factor_occurrences(d, u.pattern);
        CHECK(o.count == 1);
        for (Coord k = 1; k < u.length; ++k)
            for (Coord a = 2 - k; a <= 4; ++a) {
                std::vector<int> f;
                for (Coord i = 0; i < k; ++i) f.push_back(d.at(a + i));
                Occurrences fo = factor_occurrences(d, f);
                CHECK((fo.infinite || fo.count >= 2));
            }
    }
    SUBCASE("agrees with the exhaustive window-scan oracle on random instances") {
        std::mt19937 gen(97);
        int tested = 0;
        while (tested < 20) {
            std::vector<int> l, m, r;
            auto rnd_word = [&](Coord max_len) {
                std::vector<int> w;
                Coord len = 1 + static_cast<Coord>(gen() % max_len);
                for (Coord i = 0; i < len; ++i) w.push_back(static_cast<int>(gen() % 3));
                return w;
            };
            DistPresentation d = ep(rnd_word(3), rnd_word(5), rnd_word(3));
            if (is_recurrent(d).kind != RecurrenceKind::NonRecurrent) continue;
            ++tested;
            UniquePattern u = shortest_unique_pattern(d);

            // Oracle: enumerate factors by brute force over a wide window and
            // keep those whose count is stable under widening.
            ScanOracle oracle{d, -40, 40};
            bool found = false;
            for (Coord k = 1; k <= u.length && !found; ++k) {
                for (Coord a = -6; a <= 6 && !found; ++a) {
                    std::vector<int> f;
                    for (Coord i = 0; i < k; ++i) f.push_back(d.at(a + i));
                    long long c1 = oracle.count(f, -40, 40);
                    long long c2 = oracle.count(f, -60, 60);
                    if (c1 == 1 && c2 == 1) {
                        found = true;
                        CHECK(k == u.length);
                    }
                }
            }
            CHECK(found);
        }
    }
}

TEST_CASE("tail subword property") {
    SUBCASE("all-g tails: both directions") {
        CHECK(tail_subword_property(ep({1}, {0}, {1})).verdict == TailVerdict::Both);
    }
    SUBCASE("f left tail vs g right tail: neither") {
        TailReport r = tail_subword_property(ep({0}, {0}, {1}), 1);
        CHECK(r.verdict == TailVerdict::NeitherUpTo);
        CHECK(r.checked_length == 1);
    }
    SUBCASE("tails sharing the factor set: both") {
        CHECK(tail_subword_property(ep({1, 0}, {0}, {0, 1})).verdict == TailVerdict::Both);
    }
    SUBCASE("one-sided at a truncated length") {
        // left (01)^w, right (01011)^w: the prefix side fails at length 5
        // while alternating suffixes survive through 5.
        TailReport r = tail_subword_property(ep({0, 1}, {0}, {0, 1, 0, 1, 1}), 5);
        CHECK(r.verdict == TailVerdict::SuffixesInRight);
        TailReport mirrored = tail_subword_property(ep({0, 1, 0, 1, 1}, {0}, {0, 1}), 4);
        CHECK(mirrored.verdict == TailVerdict::PrefixesInLeft);
    }
}

TEST_CASE("recurrent verdict, uniform recurrence, and periodic equality coincide") {
    std::mt19937 gen(53);
    for (int t = 0; t < 25; ++t) {
        auto rnd_word = [&](Coord max_len) {
            std::vector<int> w;
            Coord len = 1 + static_cast<Coord>(gen() % max_len);
            for (Coord i = 0; i < len; ++i) w.push_back(static_cast<int>(gen() % 2));
            return w;
        };
        DistPresentation d = ep(rnd_word(3), rnd_word(4), rnd_word(3));
        RecurrenceVerdict v = is_recurrent(d);
        UniformReport u = uniform_recurrence_check(d, 4);
        bool recurrent = v.kind == RecurrenceKind::Recurrent;
        CHECK(recurrent == u.uniform);
        if (recurrent) {
            // The presentation equals a periodic presentation on a window.
            DistPresentation p{PeriodicWord{[&] {
                                                std::vector<int> w;
                                                for (Coord x = 0; x < v.period; ++x)
                                                    w.push_back(d.at(x));
                                                return w;
                                            }(),
                                            0}};
            for (Coord x = -30; x <= 30; ++x) CHECK(d.at(x) == p.at(x));
        }
    }
}

TEST_CASE("recurrent eventually periodic instances satisfy the tail property") {
    std::mt19937 gen(7);
    int tested = 0;
    while (tested < 15) {
        std::vector<int> l, m;
        auto rnd_word = [&](Coord max_len) {
            std::vector<int> w;
            Coord len = 1 + static_cast<Coord>(gen() % max_len);
            for (Coord i = 0; i < len; ++i) w.push_back(static_cast<int>(gen() % 2));
            return w;
        };
        l = rnd_word(3);
        m = rnd_word(3);
        DistPresentation d = ep(l, m, l);
        if (is_recurrent(d).kind != RecurrenceKind::Recurrent) continue;
        ++tested;
        CHECK(tail_subword_property(d).verdict != TailVerdict::NeitherUpTo);
    }
}
