#include "nuca/core.hpp"

#include <algorithm>
#include <cmath>

namespace nuca {

namespace {

Coord floor_mod(Coord a, Coord m) {
    Coord r = a % m;
    return r < 0 ? r + m : r;
}

}  // namespace

// --------------------------------------------------------------------------
// Alphabet

Alphabet::Alphabet(std::vector<std::uint32_t> shape) : track_shape(std::move(shape)) {
    if (track_shape.empty()) throw std::invalid_argument("alphabet: empty track shape");
    std::uint64_t s = 1;
    for (auto t : track_shape) {
        if (t == 0) throw std::invalid_argument("alphabet: zero-size track");
        s *= t;
        if (s > (1u << 30)) throw std::invalid_argument("alphabet: state set too large");
    }
    size_ = static_cast<std::uint32_t>(s);
}

bool Alphabet::all_binary() const {
    return std::ranges::all_of(track_shape, [](std::uint32_t t) { return t == 2; });
}

State Alphabet::encode(std::span<const std::uint32_t> digits) const {
    if (digits.size() != track_shape.size())
        throw std::invalid_argument("alphabet: digit count mismatch");
    State v = 0;
    for (std::size_t t = 0; t < digits.size(); ++t) {
        if (digits[t] >= track_shape[t]) throw std::invalid_argument("alphabet: digit out of range");
        v = v * track_shape[t] + digits[t];
    }
    return v;
}

std::vector<std::uint32_t> Alphabet::decode(State v) const {
    if (v >= size_) throw std::invalid_argument("alphabet: state out of range");
    std::vector<std::uint32_t> digits(track_shape.size());
    for (std::size_t t = track_shape.size(); t-- > 0;) {
        digits[t] = v % track_shape[t];
        v /= track_shape[t];
    }
    return digits;
}

std::uint32_t Alphabet::track(State v, std::size_t t) const {
    if (t >= track_shape.size()) throw std::invalid_argument("alphabet: track out of range");
    for (std::size_t k = track_shape.size(); k-- > t + 1;) v /= track_shape[k];
    return v % track_shape[t];
}

// --------------------------------------------------------------------------
// Neighborhood

Neighborhood Neighborhood::line(Coord lo, Coord hi) {
    if (hi < lo) throw std::invalid_argument("neighborhood: empty offset range");
    Neighborhood n;
    n.dim = 1;
    for (Coord o = lo; o <= hi; ++o) n.offsets.push_back({o, 0});
    return n;
}

Coord Neighborhood::radius() const {
    Coord r = 0;
    for (auto o : offsets) r = std::max({r, std::abs(o.x), std::abs(o.y)});
    return r;
}

Coord Neighborhood::x_min() const {
    Coord m = offsets.front().x;
    for (auto o : offsets) m = std::min(m, o.x);
    return m;
}

Coord Neighborhood::x_max() const {
    Coord m = offsets.front().x;
    for (auto o : offsets) m = std::max(m, o.x);
    return m;
}

Box Neighborhood::hull(const Box& d) const {
    Coord xlo = offsets.front().x, xhi = xlo, ylo = offsets.front().y, yhi = ylo;
    for (auto o : offsets) {
        xlo = std::min(xlo, o.x);
        xhi = std::max(xhi, o.x);
        ylo = std::min(ylo, o.y);
        yhi = std::max(yhi, o.y);
    }
    Box h = d;
    h.origin.x += xlo;
    h.width += xhi - xlo;
    if (d.dim == 2 || ylo != 0 || yhi != 0) {
        h.origin.y += ylo;
        h.height += yhi - ylo;
    }
    return h;
}

// --------------------------------------------------------------------------
// LocalRule

LocalRule LocalRule::from_table(Alphabet a, std::uint32_t arity, std::vector<State> table) {
    if (arity == 0) throw std::invalid_argument("rule: zero arity");
    std::uint64_t want = 1;
    for (std::uint32_t i = 0; i < arity; ++i) {
        want *= a.size();
        if (want > (1ull << 40)) throw std::invalid_argument("rule: table too large");
    }
    if (table.size() != want) throw std::invalid_argument("rule: table length != size^arity");
    for (State s : table)
        if (s >= a.size()) throw std::invalid_argument("rule: table state out of range");
    LocalRule r;
    r.alphabet = std::move(a);
    r.arity = arity;
    r.table = std::move(table);
    r.linear = rule_as_linear(r);
    return r;
}

LocalRule LocalRule::from_linear(Alphabet a, std::uint32_t arity, LinearForm form) {
    if (form.tracks.size() != a.num_tracks())
        throw std::invalid_argument("rule: linear form track count mismatch");
    if (!a.all_binary()) throw std::invalid_argument("rule: linear form needs binary tracks");
    for (auto& tf : form.tracks) {
        for (auto& t : tf.terms)
            if (t.neighbor >= arity || t.track >= a.num_tracks())
                throw std::invalid_argument("rule: linear term out of range");
        std::ranges::sort(tf.terms);
        tf.terms.erase(std::unique(tf.terms.begin(), tf.terms.end()), tf.terms.end());
    }
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < arity; ++i) count *= a.size();
    LocalRule r;
    r.alphabet = std::move(a);
    r.arity = arity;
    r.table.resize(count);
    std::vector<State> tuple(arity, 0);
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        std::uint64_t rem = idx;
        for (std::uint32_t k = arity; k-- > 0;) {
            tuple[k] = static_cast<State>(rem % r.alphabet.size());
            rem /= r.alphabet.size();
        }
        r.table[idx] = eval_linear(form, r.alphabet, tuple);
    }
    r.linear = std::move(form);
    return r;
}

std::size_t LocalRule::table_index(std::span<const State> neighbor_states) const {
    if (neighbor_states.size() != arity) throw std::invalid_argument("rule: arity mismatch");
    std::size_t idx = 0;
    for (State s : neighbor_states) {
        if (s >= alphabet.size()) throw std::invalid_argument("rule: state out of range");
        idx = idx * alphabet.size() + s;
    }
    return idx;
}

State LocalRule::eval(std::span<const State> neighbor_states) const {
    return table[table_index(neighbor_states)];
}

State eval_local(const LocalRule& rule, std::span<const State> neighbor_states) {
    return rule.eval(neighbor_states);
}

State eval_linear(const LinearForm& form, const Alphabet& a, std::span<const State> neighbor_states) {
    std::vector<std::uint32_t> digits(form.tracks.size());
    for (std::size_t t = 0; t < form.tracks.size(); ++t) {
        std::uint32_t bit = form.tracks[t].constant & 1u;
        for (const auto& term : form.tracks[t].terms)
            bit ^= a.track(neighbor_states[term.neighbor], term.track) & 1u;
        digits[t] = bit;
    }
    return a.encode(digits);
}

// Solves for XOR coefficients track by track. The rows (all input bit
// vectors augmented with a constant column) have full column rank, so when
// a form exists it is unique, hence canonical.
std::optional<LinearForm> rule_as_linear(const LocalRule& rule) {
    const Alphabet& a = rule.alphabet;
    if (!a.all_binary()) return std::nullopt;
    if (rule.table.size() > (1u << 20)) return std::nullopt;

    const std::size_t tracks = a.num_tracks();
    const std::size_t nbits = rule.arity * tracks + 1;  // +1 constant column
    if (nbits > 63) return std::nullopt;

    LinearForm form;
    form.tracks.resize(tracks);
    const std::size_t count = rule.table.size();

    for (std::size_t out = 0; out < tracks; ++out) {
        // Incremental elimination over (row bits, rhs) pairs.
        std::vector<std::uint64_t> pivot_row(nbits, 0);
        std::vector<std::uint32_t> pivot_rhs(nbits, 0);
        std::vector<bool> has_pivot(nbits, false);
        std::vector<State> tuple(rule.arity, 0);

        for (std::size_t idx = 0; idx < count; ++idx) {
            std::size_t rem = idx;
            for (std::uint32_t k = rule.arity; k-- > 0;) {
                tuple[k] = static_cast<State>(rem % a.size());
                rem /= a.size();
            }
            std::uint64_t row = 1ull << (nbits - 1);  // constant column last-significant
            for (std::uint32_t nb = 0; nb < rule.arity; ++nb)
                for (std::size_t t = 0; t < tracks; ++t)
                    if (a.track(tuple[nb], t) & 1u) row |= 1ull << (nb * tracks + t);
            std::uint32_t rhs = a.track(rule.table[idx], out) & 1u;
            bool installed = false;
            for (std::size_t b = 0; b < nbits; ++b) {
                if (!(row >> b & 1u)) continue;
                if (has_pivot[b]) {
                    row ^= pivot_row[b];
                    rhs ^= pivot_rhs[b];
                } else {
                    has_pivot[b] = true;
                    pivot_row[b] = row;
                    pivot_rhs[b] = rhs;
                    installed = true;
                    break;
                }
            }
            if (!installed && rhs != 0) return std::nullopt;  // inconsistent: not linear
        }
        // Back-substitute to reduced form, then read off coefficients.
        for (std::size_t b = nbits; b-- > 0;) {
            if (!has_pivot[b]) continue;
            for (std::size_t c = 0; c < b; ++c) {
                if (has_pivot[c] && (pivot_row[c] >> b & 1u)) {
                    pivot_row[c] ^= pivot_row[b];
                    pivot_rhs[c] ^= pivot_rhs[b];
                }
            }
        }
        TrackForm tf;
        for (std::uint32_t nb = 0; nb < rule.arity; ++nb)
            for (std::size_t t = 0; t < tracks; ++t) {
                std::size_t b = nb * tracks + t;
                if (has_pivot[b] && pivot_rhs[b]) tf.terms.push_back({nb, static_cast<std::uint32_t>(t)});
            }
        if (has_pivot[nbits - 1] && pivot_rhs[nbits - 1]) tf.constant = 1;
        form.tracks[out] = std::move(tf);
    }
    return form;
}

// --------------------------------------------------------------------------
// RuleSet

RuleSet::RuleSet(Alphabet a, Neighborhood n, std::vector<LocalRule> r, std::vector<std::string> nm)
    : alphabet(std::move(a)), neighborhood(std::move(n)), rules(std::move(r)), names(std::move(nm)) {
    if (rules.empty()) throw std::invalid_argument("ruleset: no rules");
    if (names.size() != rules.size()) throw std::invalid_argument("ruleset: name count mismatch");
    for (const auto& rule : rules) {
        if (!(rule.alphabet == alphabet)) throw std::invalid_argument("ruleset: alphabet mismatch");
        if (rule.arity != neighborhood.arity()) throw std::invalid_argument("ruleset: arity mismatch");
    }
    // Dependency support per rule: neighbor k matters iff flipping it can
    // change the output. Skipped (all neighbors assumed live) for huge tables.
    effective_.resize(rules.size());
    for (std::size_t ri = 0; ri < rules.size(); ++ri) {
        const auto& rule = rules[ri];
        const std::size_t count = rule.table.size();
        if (count > (1u << 22)) {
            for (std::uint32_t k = 0; k < rule.arity; ++k) effective_[ri].push_back(k);
            continue;
        }
        const std::uint64_t s = alphabet.size();
        for (std::uint32_t k = 0; k < rule.arity; ++k) {
            std::uint64_t stride = 1;
            for (std::uint32_t j = k + 1; j < rule.arity; ++j) stride *= s;
            bool live = false;
            for (std::size_t idx = 0; idx < count && !live; ++idx) {
                std::uint64_t digit = (idx / stride) % s;
                if (digit + 1 < s && rule.table[idx] != rule.table[idx + stride]) live = true;
            }
            if (live) effective_[ri].push_back(k);
        }
    }
}

int RuleSet::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<int>(i);
    return -1;
}

bool RuleSet::all_linear() const {
    return std::ranges::all_of(rules, [](const LocalRule& r) { return r.linear.has_value(); });
}

const std::vector<std::uint32_t>& RuleSet::effective_neighbors(std::size_t rule) const {
    return effective_.at(rule);
}

// --------------------------------------------------------------------------
// Presentations

SubstitutiveWord SubstitutiveWord::make(std::map<int, std::vector<int>> substitution, int seed,
                                        std::uint32_t depth, Coord anchor, std::uint64_t cell_budget) {
    if (substitution.empty()) throw std::invalid_argument("substitutive: empty substitution");
    for (const auto& [sym, img] : substitution)
        if (img.empty()) throw std::invalid_argument("substitutive: empty image word");
    if (!substitution.contains(seed)) throw std::invalid_argument("substitutive: seed has no image");
    if (depth == 0) throw std::invalid_argument("substitutive: zero depth");

    std::vector<int> cur{seed};
    for (std::uint32_t d = 0; d < depth; ++d) {
        std::vector<int> next;
        for (int sym : cur) {
            auto it = substitution.find(sym);
            if (it == substitution.end()) throw std::invalid_argument("substitutive: symbol has no image");
            next.insert(next.end(), it->second.begin(), it->second.end());
            if (next.size() > cell_budget) throw BudgetError("substitutive expansion exceeds cell budget");
        }
        cur = std::move(next);
    }
    SubstitutiveWord w;
    w.substitution = std::move(substitution);
    w.seed = seed;
    w.depth = depth;
    w.anchor = anchor;
    w.expansion = std::move(cur);
    return w;
}

int DistPresentation::at(Coord x) const {
    return std::visit(
        [&](const auto& p) -> int {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, PeriodicWord>) {
                return p.word[static_cast<std::size_t>(
                    floor_mod(x - p.anchor, static_cast<Coord>(p.word.size())))];
            } else if constexpr (std::is_same_v<T, EventuallyPeriodicWord>) {
                if (x < p.middle_start)
                    return p.left[static_cast<std::size_t>(
                        floor_mod(x - p.middle_start, static_cast<Coord>(p.left.size())))];
                if (x <= p.middle_end())
                    return p.middle[static_cast<std::size_t>(x - p.middle_start)];
                return p.right[static_cast<std::size_t>(
                    floor_mod(x - p.middle_end() - 1, static_cast<Coord>(p.right.size())))];
            } else if constexpr (std::is_same_v<T, SubstitutiveWord>) {
                Coord idx = x - p.anchor;
                Coord len = static_cast<Coord>(p.expansion.size());
                if (idx < 0) idx = -1 - idx;  // mirror the expansion leftward
                if (idx >= len) throw BudgetError("substitutive presentation read past materialized range");
                return p.expansion[static_cast<std::size_t>(idx)];
            } else if constexpr (std::is_same_v<T, ExplicitWindowWord>) {
                Coord idx = x - p.start;
                if (idx >= 0 && idx < static_cast<Coord>(p.window.size()))
                    return p.window[static_cast<std::size_t>(idx)];
                return p.fallback;
            } else {
                static_assert(std::is_same_v<T, CyclicWord>);
                return p.word[static_cast<std::size_t>(floor_mod(x, p.length))];
            }
        },
        v);
}

int dist_at(const DistPresentation& dist, Coord x) { return dist.at(x); }

// --------------------------------------------------------------------------
// Configurations

FiniteSupportConf::FiniteSupportConf(State q, std::map<Cell, State> cells_in) : background(q) {
    for (auto& [c, s] : cells_in)
        if (s != q) cells.emplace(c, s);
}

State Configuration::at(Cell c) const {
    return std::visit(
        [&](const auto& p) -> State {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, FiniteSupportConf>) {
                auto it = p.cells.find(c);
                return it == p.cells.end() ? p.background : it->second;
            } else if constexpr (std::is_same_v<T, PeriodicConf>) {
                return p.word[static_cast<std::size_t>(
                    floor_mod(c.x - p.anchor, static_cast<Coord>(p.word.size())))];
            } else if constexpr (std::is_same_v<T, CyclicConf>) {
                return p.word[static_cast<std::size_t>(floor_mod(c.x, p.length))];
            } else {
                static_assert(std::is_same_v<T, WindowConf>);
                Coord idx = c.x - p.start;
                if (idx >= 0 && idx < static_cast<Coord>(p.window.size()))
                    return p.window[static_cast<std::size_t>(idx)];
                return p.fallback;
            }
        },
        v);
}

Configuration Configuration::finite_support(State background, std::map<Cell, State> cells) {
    return {FiniteSupportConf(background, std::move(cells))};
}

Configuration Configuration::periodic(std::vector<State> word, Coord anchor) {
    if (word.empty()) throw std::invalid_argument("configuration: empty periodic word");
    return {PeriodicConf{std::move(word), anchor}};
}

Configuration Configuration::cyclic(std::vector<State> word) {
    if (word.empty()) throw std::invalid_argument("configuration: empty cyclic word");
    CyclicConf c;
    c.length = static_cast<Coord>(word.size());
    c.word = std::move(word);
    return {c};
}

Configuration Configuration::window(std::vector<State> w, Coord start, State fallback) {
    return {WindowConf{std::move(w), start, fallback}};
}

State config_at(const Configuration& c, Cell x) { return c.at(x); }

DiffResult diff_set(const Configuration& c, const Configuration& e, const Box& search_window) {
    DiffResult r;
    for (Coord i = 0; i < search_window.cell_count(); ++i) {
        Cell cell = search_window.cell_at(i);
        if (c.at(cell) != e.at(cell)) r.cells.push_back(cell);
    }
    const auto* fc = std::get_if<FiniteSupportConf>(&c.v);
    const auto* fe = std::get_if<FiniteSupportConf>(&e.v);
    if (fc && fe && fc->background == fe->background) {
        r.complete = true;
        auto check = [&](const std::map<Cell, State>& cells) {
            for (const auto& [cell, _] : cells)
                if (!search_window.contains(cell) && c.at(cell) != e.at(cell)) r.complete = false;
        };
        check(fc->cells);
        check(fe->cells);
    }
    return r;
}

Configuration shift_config(const Configuration& c, Cell r) {
    return std::visit(
        [&](const auto& p) -> Configuration {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, FiniteSupportConf>) {
                std::map<Cell, State> shifted;
                for (const auto& [cell, s] : p.cells) shifted.emplace(cell + r, s);
                return Configuration::finite_support(p.background, std::move(shifted));
            } else if constexpr (std::is_same_v<T, PeriodicConf>) {
                return {PeriodicConf{p.word, p.anchor + r.x}};
            } else if constexpr (std::is_same_v<T, CyclicConf>) {
                // result(x) = c(x - r): rotate the word.
                CyclicConf out;
                out.length = p.length;
                out.word.resize(p.word.size());
                for (Coord x = 0; x < p.length; ++x)
                    out.word[static_cast<std::size_t>(x)] =
                        p.word[static_cast<std::size_t>(floor_mod(x - r.x, p.length))];
                return {out};
            } else {
                static_assert(std::is_same_v<T, WindowConf>);
                return {WindowConf{p.window, p.start + r.x, p.fallback}};
            }
        },
        c.v);
}

// --------------------------------------------------------------------------
// Patterns

Pattern extract_pattern(const Configuration& c, const Box& domain) {
    Pattern p;
    p.domain = domain;
    p.states.reserve(static_cast<std::size_t>(domain.cell_count()));
    for (Coord i = 0; i < domain.cell_count(); ++i) p.states.push_back(c.at(domain.cell_at(i)));
    return p;
}

std::optional<Cell> is_translated_copy(const Pattern& p1, const Pattern& p2) {
    if (p1.domain.width != p2.domain.width || p1.domain.height != p2.domain.height ||
        p1.domain.dim != p2.domain.dim)
        return std::nullopt;
    Cell r = p2.domain.origin - p1.domain.origin;
    if (p1.states != p2.states) return std::nullopt;
    return r;
}

}  // namespace nuca
