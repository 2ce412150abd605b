#include "nuca/constructions.hpp"

#include <algorithm>
#include <set>

#include "nuca/engine.hpp"
#include "nuca/gf2.hpp"
#include "nuca/recurrence.hpp"

namespace nuca {
namespace constructions {

namespace {

constexpr int kF = 0;  // f_n / gamma_n
constexpr int kG = 1;  // g_n / delta_n

}  // namespace

RuleSet build_paper_rules(Family family, Coord n) {
    if (n < 1) throw std::invalid_argument("constructions: n must be >= 1");
    if (family == Family::Moore) {
        Alphabet a({2});
        Neighborhood nb = Neighborhood::line(-n, n);
        LinearForm f, g;
        f.tracks.push_back({{{0, 0}, {static_cast<std::uint32_t>(n), 0}}, 0});
        TrackForm gt;
        for (Coord k = 1; k <= 2 * n; ++k) gt.terms.push_back({static_cast<std::uint32_t>(k), 0});
        g.tracks.push_back(gt);
        std::vector<LocalRule> rules;
        rules.push_back(LocalRule::from_linear(a, static_cast<std::uint32_t>(2 * n + 1), f));
        rules.push_back(LocalRule::from_linear(a, static_cast<std::uint32_t>(2 * n + 1), g));
        return RuleSet(a, nb, std::move(rules), {"f", "g"});
    }
    Alphabet a({2, 2});
    Neighborhood nb = Neighborhood::line(0, n + 1);
    const auto u = [](Coord v) { return static_cast<std::uint32_t>(v); };
    LinearForm gamma, delta;
    gamma.tracks.resize(2);
    delta.tracks.resize(2);
    gamma.tracks[0].terms = {{0, 0}, {u(n + 1), 0}, {0, 1}};
    for (Coord k = 1; k <= n; ++k) delta.tracks[0].terms.push_back({u(k), 0});
    for (Coord k = 1; k <= n + 1; ++k) {
        gamma.tracks[1].terms.push_back({u(k), 1});
        delta.tracks[1].terms.push_back({u(k), 1});
    }
    std::vector<LocalRule> rules;
    rules.push_back(LocalRule::from_linear(a, u(n + 2), gamma));
    rules.push_back(LocalRule::from_linear(a, u(n + 2), delta));
    return RuleSet(a, nb, std::move(rules), {"gamma", "delta"});
}

DistPresentation build_paper_distribution(Family family, Coord n, const Placement& placement) {
    if (n < 1) throw std::invalid_argument("constructions: n must be >= 1");
    (void)family;  // both families share the one-block shape
    if (placement.periodic) {
        std::vector<int> word{kG};
        word.insert(word.end(), static_cast<std::size_t>(n), kF);
        return DistPresentation{PeriodicWord{word, 0}};
    }
    EventuallyPeriodicWord ep;
    ep.left = {kG};
    ep.middle.assign(static_cast<std::size_t>(n), kF);
    ep.right = {kG};
    ep.middle_start = placement.position;
    return DistPresentation{ep};
}

PaperWitness paper_witness(Family family, Coord n, const RuleSet& rules,
                           const DistPresentation& dist, Coord block_position) {
    PaperWitness out;
    if (family == Family::Moore) {
        // 1 at the g-cell left of the block, 0 across the block.
        Coord x = block_position - 1;
        if (dist.at(x) != kG) throw std::invalid_argument("constructions: no g-cell left of the block");
        for (Coord t = 0; t < n; ++t)
            if (dist.at(block_position + t) != kF)
                throw std::invalid_argument("constructions: distribution lacks the f-block");
        Box d = Box::interval(x, x + n);
        Pattern p;
        p.domain = d;
        p.states.assign(static_cast<std::size_t>(n) + 1, 0);
        p.states[0] = 1;
        analysis::OrphanWitness w{d, p, "exhaustive"};
        if (analysis::has_preimage(rules, dist, p, analysis::CheckMode::Exhaustive) ||
            analysis::has_preimage(rules, dist, p, analysis::CheckMode::Rank))
            throw VerificationError("constructions: paper orphan has a pre-image");
        out.orphan = w;
        return out;
    }
    // Myhill: all-zero against a single (1,0) cell right of the gamma-block.
    Coord x = block_position;
    for (Coord t = 0; t < n; ++t)
        if (dist.at(x + t) != kF)
            throw std::invalid_argument("constructions: distribution lacks the gamma-block");
    State one_zero = rules.alphabet.encode(std::vector<std::uint32_t>{1, 0});
    Configuration c1 = Configuration::uniform(0);
    Configuration c2 = Configuration::finite_support(0, {{{x + n, 0}, one_zero}});
    Box diff = Box::interval(x + n, x + n);
    if (!analysis::verify_collision(rules, dist, c1, c2, diff))
        throw VerificationError("constructions: paper collision failed engine re-check");
    out.collision = analysis::PreInjWitness{c1, c2, diff};
    return out;
}

Pattern myhill_preimage(const RuleSet& rules, const DistPresentation& dist, const Pattern& target) {
    const Coord n = rules.neighborhood.x_max() - 1;
    if (n < 1 || rules.neighborhood.x_min() != 0)
        throw std::invalid_argument("constructions: pre-image builder expects the (0..n+1) neighborhood");
    const Box& d = target.domain;

    // Scoped block check: visible gamma-runs must have length <= n, at most
    // one of exactly n, and neither tail may be uniformly gamma.
    if (const auto* ep = std::get_if<EventuallyPeriodicWord>(&dist.v)) {
        auto all_gamma = [](const std::vector<int>& w) {
            return std::ranges::all_of(w, [](int r) { return r == kF; });
        };
        if (all_gamma(ep->left) || all_gamma(ep->right))
            throw std::invalid_argument("constructions: tail is an infinite gamma-block");
    }
    Coord lo = d.x_min() - 2 * (n + 2), hi = d.x_max() + 2 * (n + 2);
    Coord run = 0, full_runs = 0;
    for (Coord x = lo; x <= hi + 1; ++x) {
        if (x <= hi && dist.at(x) == kF) {
            ++run;
        } else {
            if (run > n)
                throw std::invalid_argument("constructions: gamma-block longer than n in scope");
            if (run == n && ++full_runs > 1)
                throw std::invalid_argument("constructions: two length-n gamma-blocks in scope");
            run = 0;
        }
    }

    gf2::Gf2System sys = gf2::build_linear_system(rules, dist, {.eq_window = d}, target);
    auto sol = gf2::solve(sys);
    if (!sol) throw VerificationError("constructions: pre-image system unsolvable");

    Box ewin = Box::interval(d.x_min(), d.x_max() + n + 1);
    Pattern e;
    e.domain = ewin;
    const std::size_t tracks = rules.alphabet.num_tracks();
    for (Coord i = 0; i < ewin.cell_count(); ++i) {
        std::vector<std::uint32_t> digits(tracks, 0);
        for (std::size_t t = 0; t < tracks; ++t) {
            auto it = sys.var_index.find({ewin.cell_at(i), static_cast<std::uint32_t>(t)});
            if (it != sys.var_index.end() && sol->get(it->second)) digits[t] = 1;
        }
        e.states.push_back(rules.alphabet.encode(digits));
    }
    if (!(apply_partial(rules, dist, d, e) == target))
        throw VerificationError("constructions: pre-image failed engine re-check");
    return e;
}

// ---------------------------------------------------------------------------
// Template lift

namespace {

// Guess window m[-n..n] (1-based guess values), centered at index n.
bool f_condition(const Lift& lift, int symbol, std::span<const std::uint32_t> m) {
    const Coord n = lift.n;
    const Coord c = n;
    const std::uint32_t m0 = m[static_cast<std::size_t>(c)];
    if (lift.unique_word[m0 - 1] != symbol) return false;
    for (Coord jj = 1; jj <= n; ++jj)
        if (m[static_cast<std::size_t>(c + jj - m0)] != static_cast<std::uint32_t>(jj)) return false;
    if (m[static_cast<std::size_t>(c - m0)] == static_cast<std::uint32_t>(n)) return false;
    if (m[static_cast<std::size_t>(c + n - m0 + 1)] == 1u) return false;
    return true;
}

}  // namespace

Lift template_lift(const Template& tpl, const RuleSet& base_fg) {
    if (base_fg.size() != 2) throw std::invalid_argument("constructions: lift needs exactly two base rules");

    recurrence::UniquePattern up = recurrence::shortest_unique_pattern(tpl.tau);
    Lift lift;
    lift.tpl = tpl;
    lift.base = base_fg;
    lift.unique_pos = up.position;
    lift.unique_word = up.pattern;
    if (lift.unique_word.size() == 1) {
        // A length-1 run condition is unsatisfiable over a 1-symbol guess
        // alphabet; any extension of a unique pattern stays unique.
        lift.unique_word.push_back(tpl.tau.at(up.position + 1));
    }
    lift.n = static_cast<Coord>(lift.unique_word.size());

    const Coord n = lift.n;
    const Coord base_r = std::max(std::abs(base_fg.neighborhood.x_min()),
                                  std::abs(base_fg.neighborhood.x_max()));
    const Coord r = std::max(n, base_r);

    std::vector<std::uint32_t> shape{static_cast<std::uint32_t>(n)};
    shape.insert(shape.end(), base_fg.alphabet.track_shape.begin(), base_fg.alphabet.track_shape.end());
    Alphabet lifted_alpha(shape);
    Neighborhood lifted_nb = Neighborhood::line(-r, r);
    const std::uint32_t arity = static_cast<std::uint32_t>(2 * r + 1);

    // Padded offset -> base neighbor index, or -1 for a dummy.
    std::vector<std::ptrdiff_t> base_idx(arity, -1);
    for (std::size_t k = 0; k < base_fg.neighborhood.arity(); ++k) {
        Coord off = base_fg.neighborhood.offsets[k].x;
        base_idx[static_cast<std::size_t>(off + r)] = static_cast<std::ptrdiff_t>(k);
    }

    const std::uint64_t ls = lifted_alpha.size();
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < arity; ++i) {
        count *= ls;
        if (count > (1ull << 22)) throw BudgetError("constructions: lifted rule table too large");
    }

    std::vector<LocalRule> rules;
    std::vector<std::string> names;
    for (std::size_t ti = 0; ti < tpl.symbols.size(); ++ti) {
        std::vector<State> table(count);
        std::vector<State> tuple(arity);
        std::vector<std::uint32_t> guesses(static_cast<std::size_t>(2 * n + 1));
        std::vector<State> base_tuple(base_fg.neighborhood.arity());
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            std::uint64_t rem = idx;
            for (std::uint32_t k = arity; k-- > 0;) {
                tuple[k] = static_cast<State>(rem % ls);
                rem /= ls;
            }
            for (Coord o = -n; o <= n; ++o)
                guesses[static_cast<std::size_t>(o + n)] =
                    lifted_alpha.track(tuple[static_cast<std::size_t>(o + r)], 0) + 1;
            // Dummy guesses outside the lifted state are impossible here: the
            // whole window is part of the tuple since r >= n.
            Lift probe;  // only the fields f_condition reads
            probe.n = n;
            probe.unique_word = lift.unique_word;
            bool use_f = f_condition(probe, static_cast<int>(ti), guesses);

            for (std::size_t k = 0; k < base_tuple.size(); ++k) base_tuple[k] = 0;
            for (std::uint32_t k = 0; k < arity; ++k) {
                if (base_idx[k] < 0) continue;
                State lifted_state = tuple[k];
                // Strip the guess track: the remainder is the base state.
                base_tuple[static_cast<std::size_t>(base_idx[k])] =
                    lifted_state % base_fg.alphabet.size();
            }
            State action = base_fg.rules[use_f ? kF : kG].eval(base_tuple);
            std::uint32_t g0 = lifted_alpha.track(tuple[r], 0);
            table[idx] = static_cast<State>(g0 * base_fg.alphabet.size() + action);
        }
        rules.push_back(LocalRule::from_table(lifted_alpha, arity, std::move(table)));
        names.push_back("h_" + tpl.symbols[ti]);
    }
    lift.lifted = RuleSet(lifted_alpha, lifted_nb, std::move(rules), std::move(names));
    lift.assignment.rule_for_symbol.resize(tpl.symbols.size());
    for (std::size_t k = 0; k < tpl.symbols.size(); ++k)
        lift.assignment.rule_for_symbol[k] = static_cast<int>(k);
    lift.tau_alpha = tpl.tau;  // identity assignment: symbol indices are rule indices
    return lift;
}

std::vector<int> induced_rule_word(const Lift& lift, const Configuration& c, const Box& window) {
    const Coord n = lift.n;
    std::vector<int> word;
    std::vector<std::uint32_t> guesses(static_cast<std::size_t>(2 * n + 1));
    for (Coord i = 0; i < window.cell_count(); ++i) {
        Coord x = window.cell_at(i).x;
        for (Coord o = -n; o <= n; ++o)
            guesses[static_cast<std::size_t>(o + n)] =
                lift.lifted.alphabet.track(c.at1(x + o), 0) + 1;
        word.push_back(f_condition(lift, lift.tau_alpha.at(x), guesses) ? kF : kG);
    }
    return word;
}

namespace {

// Correct guesses across the unique word, guess 2 on the right flank so the
// run condition's b != 1 holds, guess 1 elsewhere.
Configuration correct_guess_background(const Lift& lift) {
    const Coord pos = lift.unique_pos;
    const Coord n = lift.n;
    const std::uint32_t bs = lift.base.alphabet.size();
    std::map<Cell, State> cells;
    for (Coord t = 0; t < n; ++t)
        cells[{pos + t, 0}] = static_cast<State>(static_cast<std::uint32_t>(t) * bs);
    cells[{pos + n, 0}] = static_cast<State>(1u * bs);  // guess 2
    return Configuration::finite_support(0, std::move(cells));
}

State with_action(const Lift& lift, State lifted_state, State action) {
    const std::uint32_t bs = lift.base.alphabet.size();
    return static_cast<State>((lifted_state / bs) * bs + action);
}

}  // namespace

LiftWitness lift_witness_with_background(const Lift& lift, Family kind,
                                         const Configuration& background) {
    const Coord pos = lift.unique_pos;
    const Coord n = lift.n;

    Box check = Box::interval(pos - 2 * n - 2, pos + 3 * n + 2);
    std::vector<int> induced = induced_rule_word(lift, background, check);
    Coord block_lo = 0, block_len = 0, best_len = 0, best_lo = 0;
    for (Coord i = 0; i <= check.cell_count(); ++i) {
        if (i < check.cell_count() && induced[static_cast<std::size_t>(i)] == kF) {
            if (block_len == 0) block_lo = check.x_min() + i;
            ++block_len;
        } else {
            if (block_len > best_len) {
                best_len = block_len;
                best_lo = block_lo;
            }
            block_len = 0;
        }
    }
    if (best_len != n || best_lo != pos)
        throw std::invalid_argument("constructions: background does not induce the f-block at the unique word");

    LiftWitness out;
    out.background = background;
    if (kind == Family::Moore) {
        // The domain must pin every guess the f/g conditions at the block
        // read: cells [pos-1, pos+n-1] read guesses over [pos-1-n, pos+2n-1].
        // Narrower windows are always attainable because a pre-image can
        // break the guess run from outside.
        Box d = Box::interval(pos - 1 - n, pos + 2 * n - 1);
        Pattern target = extract_pattern(background, d);
        target.states[static_cast<std::size_t>(d.index_of({pos - 1, 0}))] =
            with_action(lift, target.at1(pos - 1), 1);
        analysis::OrphanWitness w{d, target, "exhaustive"};
        if (!analysis::verify_orphan(lift.lifted, lift.tau_alpha, w))
            throw VerificationError("constructions: lifted orphan has a pre-image");
        out.orphan = w;
        return out;
    }
    // Myhill: flip the action track to (1,0) one cell right of the block.
    State one_zero = lift.base.alphabet.encode(std::vector<std::uint32_t>{1, 0});
    Configuration c2 = background;
    auto& fs = std::get<FiniteSupportConf>(c2.v);
    Cell target_cell{pos + n, 0};
    State cur = c2.at(target_cell);
    std::map<Cell, State> cells = fs.cells;
    cells[target_cell] = with_action(lift, cur, one_zero);
    c2 = Configuration::finite_support(fs.background, std::move(cells));
    Box diff = Box::interval(pos + n, pos + n);
    if (!analysis::verify_collision(lift.lifted, lift.tau_alpha, background, c2, diff))
        throw VerificationError("constructions: lifted collision failed engine re-check");
    out.collision = analysis::PreInjWitness{background, c2, diff};
    return out;
}

LiftWitness lift_counterexample(const Lift& lift, Family kind) {
    return lift_witness_with_background(lift, kind, correct_guess_background(lift));
}

// ---------------------------------------------------------------------------
// Joint background/difference reachability for the lifted kernel

std::optional<LiftKernelWitness> lift_kernel_search(const Lift& lift, Coord width) {
    if (!lift.base.all_linear() || !lift.base.alphabet.all_binary())
        throw std::invalid_argument("constructions: lift kernel search needs linear base rules");
    const Coord n = lift.n;
    const Coord r = lift.lifted.neighborhood.radius();
    const Coord K = std::max(n, r);
    const std::uint64_t nb = static_cast<std::uint64_t>(n);        // guess values per cell
    const std::uint64_t sb = lift.base.alphabet.size();            // difference values per cell
    const std::uint64_t digit = nb * sb;

    const Coord p0 = -r - K;          // first appended cell
    const Coord p1 = width - 1 + r + K;
    const Coord q0 = -r, q1 = width - 1 + r;  // constrained image cells

    std::uint64_t win_states = 1;
    for (Coord t = 0; t < 2 * K; ++t) {
        win_states *= digit;
        if (win_states > (1ull << 26)) throw BudgetError("constructions: lift kernel window too large");
    }

    struct Parent {
        std::uint32_t prev_code = 0;
        std::uint8_t prev_flag = 0;
        std::uint8_t b_digit = 0;
        std::uint8_t e_digit = 0;
        bool reached = false;
    };
    // visited[pos - p0][code * 2 + flag]
    std::vector<std::vector<Parent>> layers;
    layers.emplace_back(win_states * 2);

    auto decode_window = [&](std::uint64_t wide, Coord t) -> std::pair<std::uint32_t, State> {
        // wide covers 2K+1 cells, oldest most significant; t = 0 is oldest.
        for (Coord skip = 2 * K; skip > t; --skip) wide /= digit;
        std::uint64_t d = wide % digit;
        return {static_cast<std::uint32_t>(d / sb), static_cast<State>(d % sb)};
    };

    std::vector<State> base_tuple(lift.base.neighborhood.arity());
    auto image_zero = [&](Coord q, std::uint64_t code_with_new) -> bool {
        // Window cells cover [q-K, q+K]; evaluate the induced rule at q on
        // the difference track, constants dropped.
        std::vector<std::uint32_t> guesses(static_cast<std::size_t>(2 * n + 1));
        for (Coord o = -n; o <= n; ++o)
            guesses[static_cast<std::size_t>(o + n)] =
                decode_window(code_with_new, o + K).first + 1;
        bool use_f = f_condition(lift, lift.tau_alpha.at(q), guesses);
        const LocalRule& rule = lift.base.rules[use_f ? kF : kG];
        const LinearForm& form = *rule.linear;
        for (std::size_t t = 0; t < form.tracks.size(); ++t) {
            std::uint32_t bit = 0;
            for (const LinearTerm& term : form.tracks[t].terms) {
                Coord off = lift.base.neighborhood.offsets[term.neighbor].x;
                State e = decode_window(code_with_new, off + K).second;
                bit ^= lift.base.alphabet.track(e, term.track) & 1u;
            }
            if (bit) return false;
        }
        return true;
    };

    layers[0][0].reached = true;  // empty window, flag 0
    layers[0][0].prev_flag = 2;   // root marker
    Coord steps = p1 - p0 + 1;
    for (Coord step = 0; step < steps; ++step) {
        Coord p = p0 + step;
        layers.emplace_back(win_states * 2);
        auto& cur = layers[static_cast<std::size_t>(step)];
        auto& nxt = layers[static_cast<std::size_t>(step) + 1];
        for (std::uint64_t code = 0; code < win_states; ++code) {
            for (int flag = 0; flag < 2; ++flag) {
                if (!cur[code * 2 + flag].reached) continue;
                for (std::uint64_t bd = 0; bd < nb; ++bd) {
                    for (std::uint64_t ed = 0; ed < sb; ++ed) {
                        if ((p < 0 || p >= width) && ed != 0) continue;  // support pinned
                        std::uint64_t wide = code * digit + bd * sb + ed;  // cells [p-2K, p]
                        Coord q = p - K;
                        if (q >= q0 && q <= q1 && !image_zero(q, wide)) continue;
                        std::uint64_t ncode = wide % win_states;
                        int nflag = flag | (ed != 0 ? 1 : 0);
                        auto& slot = nxt[ncode * 2 + nflag];
                        if (!slot.reached) {
                            slot.reached = true;
                            slot.prev_code = static_cast<std::uint32_t>(code);
                            slot.prev_flag = static_cast<std::uint8_t>(flag);
                            slot.b_digit = static_cast<std::uint8_t>(bd);
                            slot.e_digit = static_cast<std::uint8_t>(ed);
                        }
                    }
                }
            }
        }
    }

    // Accept any final state with a nonzero difference seen.
    const auto& last = layers.back();
    std::uint64_t accept = win_states;
    for (std::uint64_t code = 0; code < win_states; ++code)
        if (last[code * 2 + 1].reached) {
            accept = code;
            break;
        }
    if (accept == win_states) return std::nullopt;

    // Reconstruct the background and difference words.
    std::vector<std::uint32_t> b_digits;
    std::vector<State> e_digits;
    std::uint64_t code = accept;
    int flag = 1;
    for (Coord step = steps; step-- > 0;) {
        const Parent& par = layers[static_cast<std::size_t>(step) + 1][code * 2 + flag];
        b_digits.push_back(par.b_digit);
        e_digits.push_back(par.e_digit);
        code = par.prev_code;
        flag = par.prev_flag;
    }
    std::reverse(b_digits.begin(), b_digits.end());
    std::reverse(e_digits.begin(), e_digits.end());

    const std::uint32_t bs = lift.base.alphabet.size();
    std::map<Cell, State> cells1, cells2;
    for (Coord step = 0; step < steps; ++step) {
        Coord x = p0 + step;
        State guess_part = static_cast<State>(b_digits[static_cast<std::size_t>(step)] * bs);
        cells1[{x, 0}] = guess_part;
        cells2[{x, 0}] = static_cast<State>(guess_part + e_digits[static_cast<std::size_t>(step)]);
    }
    LiftKernelWitness w;
    w.c1 = Configuration::finite_support(0, cells1);
    w.c2 = Configuration::finite_support(0, cells2);
    w.background = w.c1;
    w.support = Box::interval(0, width - 1);
    if (!analysis::verify_collision(lift.lifted, lift.tau_alpha, w.c1, w.c2, Box::interval(p0, p1)))
        throw VerificationError("constructions: lift kernel witness failed engine re-check");
    return w;
}

// ---------------------------------------------------------------------------
// Cyclic wrap

std::optional<WrapResult> wrap_distribution(const DistPresentation& dist, Coord n,
                                            Coord search_budget) {
    if (n < 1) throw std::invalid_argument("constructions: wrap needs n >= 1");
    const auto* ep = std::get_if<EventuallyPeriodicWord>(&dist.v);
    if (!ep) throw std::invalid_argument("constructions: wrap needs an eventually periodic presentation");
    const Coord i = ep->middle_start;
    const Coord j = ep->middle_end();

    std::vector<int> suffix;
    for (Coord t = i - n; t < i; ++t) suffix.push_back(dist.at(t));

    for (Coord a = j + 1; a <= j + search_budget; ++a) {
        bool match = true;
        for (Coord t = 0; t < n && match; ++t)
            if (dist.at(a + t) != suffix[static_cast<std::size_t>(t)]) match = false;
        if (!match) continue;
        WrapResult out;
        out.occurrence = a;
        out.m_n = a + n - i;
        out.suffix = suffix;
        CyclicWord cw;
        cw.length = out.m_n;
        for (Coord x = i; x < i + out.m_n; ++x) cw.word.push_back(dist.at(x));
        // Seam invariant: the wrap's last n cells are the suffix copy.
        for (Coord t = 0; t < n; ++t)
            if (cw.word[static_cast<std::size_t>(out.m_n - n + t)] != suffix[static_cast<std::size_t>(t)])
                throw VerificationError("constructions: wrap seam mismatch");
        out.psi = DistPresentation{cw};
        return out;
    }
    return std::nullopt;
}

}  // namespace constructions
}  // namespace nuca
