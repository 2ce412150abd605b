// Explicit rule families and counterexample machinery: the XOR pair f_n/g_n
// over Z2, the two-track pair gamma_n/delta_n over Z2 x Z2, their block
// distributions and witnesses, the streaming pre-image builder for the
// two-track family, the guess-track product lift of a template, and the
// cyclic wrap of an eventually periodic distribution.
#pragma once

#include <optional>
#include <string>

#include "nuca/analysis.hpp"
#include "nuca/core.hpp"

namespace nuca {
namespace constructions {

enum class Family { Moore, Myhill };

// Moore family: {f_n, g_n} over Z2 with neighborhood (-n..n),
//   f_n = a_{-n} xor a_0,   g_n = a_{-n+1} xor ... xor a_n.
// Myhill family: {gamma_n, delta_n} over Z2 x Z2 with neighborhood (0..n+1),
//   gamma^(1) = a_0^(1) xor a_{n+1}^(1) xor a_0^(2),
//   delta^(1) = a_1^(1) xor ... xor a_n^(1),
//   gamma^(2) = delta^(2) = a_1^(2) xor ... xor a_{n+1}^(2).
// All rules carry linear forms. Rule 0 is f (resp. gamma), rule 1 is g
// (resp. delta).
RuleSet build_paper_rules(Family family, Coord n);

struct Placement {
    bool periodic = false;
    Coord position = 0;  // left end of the f-block (resp. gamma-block)
};

// single block: eventually periodic with uniform g (resp. delta) tails and
// one block of exactly n f-cells (resp. gamma-cells) at the position.
// periodic: the word g f^n (resp. delta gamma^n) repeated.
DistPresentation build_paper_distribution(Family family, Coord n, const Placement& placement);

struct PaperWitness {
    std::optional<analysis::OrphanWitness> orphan;      // Moore
    std::optional<analysis::PreInjWitness> collision;   // Myhill
};

// The hand-built witness from the block distribution: the 1 0^n orphan at
// the g-cell for Moore, the colliding pair (all-zero, one (1,0) cell) for
// Myhill. Engine-verified before returning.
PaperWitness paper_witness(Family family, Coord n, const RuleSet& rules,
                           const DistPresentation& dist, Coord block_position);

// Pre-image window for a target pattern over [A,B] under a distribution
// whose gamma-blocks are all of length <= n with at most one of length n.
// Returns e on [A, B+n+1]; the result is engine-verified before returning.
Pattern myhill_preimage(const RuleSet& rules, const DistPresentation& dist, const Pattern& target);

// --- template lift ---------------------------------------------------------

struct Lift {
    RuleSet lifted;              // one rule h_t per template symbol
    Assignment assignment;       // symbol -> rule index (identity)
    DistPresentation tau_alpha;  // the template presentation over rule indices
    Template tpl;
    Coord n = 0;                 // unique word length (after extension)
    Coord unique_pos = 0;        // left end of the unique word occurrence
    std::vector<int> unique_word;
    RuleSet base;                // the f/g pair being lifted
    Coord guess_tracks = 1;      // number of alphabet tracks used by guesses
};

// Product-alphabet lift: states are (guess, base state) with the guess track
// static. A cell applies f on the action tracks iff its template matches the
// guessed unique-word symbol and the guess window carries a run 1..n with
// flanks a != n, b != 1 positioned at the cell's own slot; otherwise g.
// Length-1 unique words are extended to length 2 first.
Lift template_lift(const Template& tpl, const RuleSet& base_fg);

// Rule word (indices into lift.base) induced on `window` by the guess track
// of a configuration, evaluating each cell's f/g condition.
std::vector<int> induced_rule_word(const Lift& lift, const Configuration& c, const Box& window);

struct LiftWitness {
    std::optional<analysis::OrphanWitness> orphan;
    std::optional<analysis::PreInjWitness> collision;
    Configuration background;  // the guess assignment used
};

// Builds the correct-guess background around the unique word and the
// matching action-track witness; verifies it (orphan: no pre-image;
// collision: equal images) before returning.
LiftWitness lift_counterexample(const Lift& lift, Family kind);

// As above but over a caller-supplied guess background; refuses (throws
// std::invalid_argument) when the background does not induce an f-block of
// length n at the unique word.
LiftWitness lift_witness_with_background(const Lift& lift, Family kind,
                                         const Configuration& background);

struct LiftKernelWitness {
    Configuration background;  // full lifted configuration pair differs only on action tracks
    Configuration c1;
    Configuration c2;
    Box support;
};

// Complete search for a pre-injectivity failure of the lifted update with
// action-track difference supported in a width-W window: joint reachability
// over sliding (guess, difference) windows, using that equal backgrounds
// reduce the action dynamics to the induced linear f/g distribution.
std::optional<LiftKernelWitness> lift_kernel_search(const Lift& lift, Coord width);

// --- cyclic wrap ------------------------------------------------------------

struct WrapResult {
    DistPresentation psi;   // cyclic, length m_n
    Coord m_n = 0;
    Coord occurrence = 0;   // left end of the suffix copy right of the middle
    std::vector<int> suffix;
};

// u_n = values on [i-n, i-1]; finds the leftmost copy of u_n with left end
// right of the middle within `search_budget` cells and wraps [i, copy_end]
// into a cycle. Absent when the suffix does not reoccur in budget (the
// probe may need the mirrored direction).
std::optional<WrapResult> wrap_distribution(const DistPresentation& dist, Coord n,
                                            Coord search_budget);

}  // namespace constructions
}  // namespace nuca
