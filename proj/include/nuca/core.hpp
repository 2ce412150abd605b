// Core data model for non-uniform cellular automata: alphabets with track
// structure, neighborhoods, local rules (tables + optional GF(2) forms),
// finite presentations of infinite configurations and rule distributions,
// and finite patterns over box domains.
#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace nuca {

using State = std::uint32_t;
using Coord = std::int64_t;

// Raised when a configured cell/enumeration budget would be exceeded.
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when a constructed witness fails its mandatory engine re-check.
struct VerificationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Cell {
    Coord x = 0;
    Coord y = 0;
    auto operator<=>(const Cell&) const = default;
};

inline Cell operator+(Cell a, Cell b) { return {a.x + b.x, a.y + b.y}; }
inline Cell operator-(Cell a, Cell b) { return {a.x - b.x, a.y - b.y}; }

// Axis-aligned box domain. 1-D intervals are boxes of height 1.
// Cells are enumerated row-major (y outer, x inner).
struct Box {
    Cell origin;
    Coord width = 0;
    Coord height = 1;
    int dim = 1;

    static Box interval(Coord a, Coord b) {
        Box d;
        d.origin = {a, 0};
        d.width = (b >= a) ? b - a + 1 : 0;
        d.height = 1;
        d.dim = 1;
        return d;
    }

    Coord cell_count() const {
        return (width <= 0 || height <= 0) ? 0 : width * height;
    }
    bool empty() const { return cell_count() == 0; }
    Coord x_min() const { return origin.x; }
    Coord x_max() const { return origin.x + width - 1; }
    Coord y_min() const { return origin.y; }
    Coord y_max() const { return origin.y + height - 1; }

    bool contains(Cell c) const {
        return c.x >= x_min() && c.x <= x_max() && c.y >= y_min() && c.y <= y_max();
    }
    Cell cell_at(Coord idx) const {
        return {origin.x + idx % width, origin.y + idx / width};
    }
    Coord index_of(Cell c) const {
        return (c.y - origin.y) * width + (c.x - origin.x);
    }
    // Grow by `left`/`right` along x (and along y too when dim == 2).
    Box inflated(Coord left, Coord right) const {
        Box d = *this;
        d.origin.x -= left;
        d.width += left + right;
        if (dim == 2) {
            d.origin.y -= left;
            d.height += left + right;
        }
        return d;
    }
    auto operator<=>(const Box&) const = default;
};

// Finite state set with a mixed-radix track decomposition. Track 0 is the
// most significant digit; a state of Z2 x Z2 with digits (t0, t1) encodes
// as 2*t0 + t1.
struct Alphabet {
    std::vector<std::uint32_t> track_shape;

    Alphabet() : track_shape{2} {}
    explicit Alphabet(std::vector<std::uint32_t> shape);

    std::uint32_t size() const { return size_; }
    std::size_t num_tracks() const { return track_shape.size(); }
    bool all_binary() const;

    State encode(std::span<const std::uint32_t> digits) const;
    std::vector<std::uint32_t> decode(State v) const;
    std::uint32_t track(State v, std::size_t t) const;

    bool operator==(const Alphabet&) const = default;

  private:
    std::uint32_t size_ = 2;
};

// Ordered tuple of offset vectors; the order is significant because rule
// tables are indexed with the first neighbor most significant.
struct Neighborhood {
    int dim = 1;
    std::vector<Cell> offsets;

    static Neighborhood line(Coord lo, Coord hi);  // offsets lo..hi, 1-D

    std::size_t arity() const { return offsets.size(); }
    Coord radius() const;
    Coord x_min() const;
    Coord x_max() const;
    // Box hull of N(D) = { x + n : x in D, n in offsets }.
    Box hull(const Box& d) const;

    bool operator==(const Neighborhood&) const = default;
};

// One XOR clause per output track: XOR of selected (neighbor, input track)
// bits plus a constant bit. Only meaningful over all-binary alphabets.
struct LinearTerm {
    std::uint32_t neighbor = 0;
    std::uint32_t track = 0;
    auto operator<=>(const LinearTerm&) const = default;
};

struct TrackForm {
    std::vector<LinearTerm> terms;
    std::uint32_t constant = 0;
    bool operator==(const TrackForm&) const = default;
};

struct LinearForm {
    std::vector<TrackForm> tracks;  // one per output track
    bool operator==(const LinearForm&) const = default;
};

struct LocalRule {
    Alphabet alphabet;
    std::uint32_t arity = 0;
    std::vector<State> table;  // length size^arity
    std::optional<LinearForm> linear;

    static LocalRule from_table(Alphabet a, std::uint32_t arity, std::vector<State> table);
    static LocalRule from_linear(Alphabet a, std::uint32_t arity, LinearForm form);

    State eval(std::span<const State> neighbor_states) const;
    std::size_t table_index(std::span<const State> neighbor_states) const;
};

State eval_local(const LocalRule& rule, std::span<const State> neighbor_states);

// Recovers the canonical XOR form reproducing the table on every input, or
// absent if none exists (or the table is too large to certify: size^arity
// above 2^20) or some track is non-binary.
std::optional<LinearForm> rule_as_linear(const LocalRule& rule);

State eval_linear(const LinearForm& form, const Alphabet& a, std::span<const State> neighbor_states);

struct RuleSet {
    Alphabet alphabet;
    Neighborhood neighborhood;
    std::vector<LocalRule> rules;
    std::vector<std::string> names;

    RuleSet() = default;
    RuleSet(Alphabet a, Neighborhood n, std::vector<LocalRule> r, std::vector<std::string> names);

    std::size_t size() const { return rules.size(); }
    int index_of(const std::string& name) const;  // -1 if unknown
    bool all_linear() const;
    // Indices of neighbors the rule actually depends on.
    const std::vector<std::uint32_t>& effective_neighbors(std::size_t rule) const;

  private:
    std::vector<std::vector<std::uint32_t>> effective_;
};

// ---------------------------------------------------------------------------
// Finite presentations of bi-infinite rule distributions (values are rule
// indices into some RuleSet) and of state configurations.

struct PeriodicWord {
    std::vector<int> word;
    Coord anchor = 0;
};

struct EventuallyPeriodicWord {
    std::vector<int> left;    // periodic tail for x < middle_start
    std::vector<int> middle;  // explicit values on [middle_start, middle_end]
    std::vector<int> right;   // periodic tail for x > middle_end
    Coord middle_start = 0;

    Coord middle_end() const { return middle_start + static_cast<Coord>(middle.size()) - 1; }
};

struct SubstitutiveWord {
    std::map<int, std::vector<int>> substitution;
    int seed = 0;
    std::uint32_t depth = 1;
    Coord anchor = 0;
    std::vector<int> expansion;  // materialized at construction

    static SubstitutiveWord make(std::map<int, std::vector<int>> substitution, int seed,
                                 std::uint32_t depth, Coord anchor, std::uint64_t cell_budget);
};

struct ExplicitWindowWord {
    std::vector<int> window;
    Coord start = 0;
    int fallback = 0;
};

struct CyclicWord {
    Coord length = 1;
    std::vector<int> word;
};

struct DistPresentation {
    std::variant<PeriodicWord, EventuallyPeriodicWord, SubstitutiveWord, ExplicitWindowWord, CyclicWord> v;

    int at(Coord x) const;
    bool is_cyclic() const { return std::holds_alternative<CyclicWord>(v); }
    const CyclicWord& cyclic() const { return std::get<CyclicWord>(v); }
};

int dist_at(const DistPresentation& dist, Coord x);

// ---------------------------------------------------------------------------

struct FiniteSupportConf {
    State background = 0;
    std::map<Cell, State> cells;  // values always differ from background

    FiniteSupportConf() = default;
    FiniteSupportConf(State q, std::map<Cell, State> cells_in);
};

struct PeriodicConf {
    std::vector<State> word;
    Coord anchor = 0;
};

struct CyclicConf {
    Coord length = 1;
    std::vector<State> word;
};

struct WindowConf {
    std::vector<State> window;
    Coord start = 0;
    State fallback = 0;
};

struct Configuration {
    std::variant<FiniteSupportConf, PeriodicConf, CyclicConf, WindowConf> v;

    State at(Cell c) const;
    State at1(Coord x) const { return at({x, 0}); }
    bool is_cyclic() const { return std::holds_alternative<CyclicConf>(v); }

    static Configuration finite_support(State background, std::map<Cell, State> cells);
    static Configuration uniform(State q) { return finite_support(q, {}); }
    static Configuration periodic(std::vector<State> word, Coord anchor = 0);
    static Configuration cyclic(std::vector<State> word);
    static Configuration window(std::vector<State> w, Coord start, State fallback);
};

State config_at(const Configuration& c, Cell x);

struct DiffResult {
    std::vector<Cell> cells;  // differing cells inside the search window
    bool complete = false;    // no differences exist outside either
};

DiffResult diff_set(const Configuration& c, const Configuration& e, const Box& search_window);

Configuration shift_config(const Configuration& c, Cell r);

// ---------------------------------------------------------------------------

struct Pattern {
    Box domain;
    std::vector<State> states;  // row-major over domain

    State at(Cell c) const { return states.at(static_cast<std::size_t>(domain.index_of(c))); }
    State at1(Coord x) const { return at({x, domain.origin.y}); }
    bool operator==(const Pattern&) const = default;
};

Pattern extract_pattern(const Configuration& c, const Box& domain);
std::optional<Cell> is_translated_copy(const Pattern& p1, const Pattern& p2);

// ---------------------------------------------------------------------------

struct Template {
    std::vector<std::string> symbols;
    DistPresentation tau;  // values are indices into `symbols`
};

struct Assignment {
    std::vector<int> rule_for_symbol;  // total on the template alphabet
};

}  // namespace nuca
