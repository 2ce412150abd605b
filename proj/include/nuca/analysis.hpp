// Decision procedures over finitely presented NUCA: windowed surjectivity
// (orphans), kernel and pre-injectivity search for linear rules, cyclic
// bijectivity, pigeonhole image counting, the Moore/Myhill counting bounds,
// Garden-of-Eden consistency reports, and the cyclic-wrap surjunctivity
// probe. Every returned witness has passed an engine re-check.
#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nuca/core.hpp"
#include "nuca/gf2.hpp"

namespace nuca {
namespace analysis {

struct Budget {
    std::uint64_t max_enum_states = 1ull << 24;  // exhaustive enumeration cap
    std::uint64_t max_cells = 1ull << 22;        // materialization cap
};

struct Exec {
    int jobs = 1;  // worker count for partitioned searches
};

enum class CheckMode { Auto, Exhaustive, Rank };

struct PartialSurjectivity {
    bool surjective = false;
    std::optional<Pattern> orphan;  // lexicographically least unattainable pattern
    std::string mode;               // "exhaustive" or "rank"
};

// Is every pattern over D attainable by the partial update? Rank mode needs
// linear rules; exhaustive mode enumerates pre-patterns within budget.
PartialSurjectivity partial_surjectivity_check(const RuleSet& rules, const DistPresentation& dist,
                                               const Box& d, CheckMode mode = CheckMode::Auto,
                                               const Budget& budget = {});

// Does `target` have a pre-image under the partial update over its domain?
bool has_preimage(const RuleSet& rules, const DistPresentation& dist, const Pattern& target,
                  CheckMode mode = CheckMode::Auto, const Budget& budget = {});

struct OrphanWitness {
    Box domain;
    Pattern pattern;
    std::string mode;
};

// First failing domain in (width, left end) order, widths 1..max_width,
// left ends over `scan` (default: a presentation-derived region that is
// complete up to periodicity for periodic/eventually periodic inputs).
std::optional<OrphanWitness> orphan_search(const RuleSet& rules, const DistPresentation& dist,
                                           Coord max_width, std::optional<Box> scan = {},
                                           CheckMode mode = CheckMode::Auto,
                                           const Budget& budget = {}, const Exec& exec = {});

struct KernelWitness {
    Configuration element;  // nonzero finite-support e with H(e) = H(0)
    Box support_window;
};

// Nonzero finite-support kernel element of a linear NUCA, complete for
// support widths up to max_support_width over the scan region.
std::optional<KernelWitness> kernel_search(const RuleSet& rules, const DistPresentation& dist,
                                           Coord max_support_width, std::optional<Box> scan = {},
                                           const Exec& exec = {});

struct PreInjWitness {
    Configuration c1;
    Configuration c2;
    Box diff_window;
};

std::optional<PreInjWitness> preinjectivity_search(const RuleSet& rules,
                                                   const DistPresentation& dist,
                                                   Coord max_support_width,
                                                   const std::vector<State>& backgrounds = {0},
                                                   std::optional<Box> scan = {},
                                                   const Budget& budget = {},
                                                   const Exec& exec = {});

struct CyclicReport {
    bool injective = false;
    bool surjective = false;
    std::string method;  // "rank" or "enumeration"
    std::optional<std::pair<Configuration, Configuration>> collision;  // when not injective
};

// Injectivity and surjectivity coincide over the finite cyclic state space;
// both are computed and asserted equal.
CyclicReport cyclic_bijectivity_check(const RuleSet& rules, const DistPresentation& dist,
                                      const Budget& budget = {});

struct ImageCount {
    std::uint64_t domain_count = 0;  // |K|
    std::uint64_t image_count = 0;   // |H(K)| restricted to N(C')
};

// K = configurations with q-support inside c_prime; counts distinct images
// on the neighborhood hull (outside it all images coincide).
ImageCount image_count_finite_support(const RuleSet& rules, const DistPresentation& dist,
                                      const Box& c_prime, State q, const Budget& budget = {});

enum class BoundKind { MooreD, Myhill1D };

struct CountingBound {
    long long value = 0;      // minimal k (resp. m) making the inequality hold
    bool range_verified = false;  // inequality also checked at value+1..value+10
};

CountingBound counting_bound(BoundKind kind, int d, long long s, long long n, long long r);

struct GoeWidths {
    Coord orphan_max_width = 4;
    Coord kernel_max_support = 12;
};

struct GoeReport {
    std::optional<OrphanWitness> orphan;
    Coord surjective_up_to = 0;
    std::optional<KernelWitness> kernel;
    std::optional<PreInjWitness> collision;
    Coord preinjective_up_to = 0;
    bool consistent = false;  // both failures found, or both clean at the bounds
    bool recurrent = false;
    std::string note;
};

GoeReport goe_consistency_check(const RuleSet& rules, const DistPresentation& dist,
                                const GoeWidths& widths = {}, const Budget& budget = {},
                                const Exec& exec = {});

// --- surjunctivity probe -------------------------------------------------

struct WrapReport {
    Coord n = 0;
    bool wrap_found = false;
    std::string error;           // set when the tail suffix never reoccurs
    Coord m_n = 0;
    Coord occurrence = 0;        // left end of the reoccurring suffix copy
    bool injective = false;
    bool surjective = false;
    bool small_wrap = false;     // m_n < 2r+1: seam artifacts possible
    std::string lift_case;       // "case1_periodic" or "case2_splice"
    bool lift_verified = false;  // engine re-check outcome
    bool witness_reported = false;  // verified and not a small wrap
    std::optional<std::pair<Configuration, Configuration>> witness;
    std::string note;
};

struct ProbeReport {
    std::vector<WrapReport> wraps;
    bool stopped_early = false;
    std::string stop_reason;  // e.g. suffix not found; mirroring may be needed
};

// For n = 1..n_max: wrap the distribution, decide cyclic bijectivity, and
// when the wrap is not injective lift the collision to a line witness and
// re-verify it with the engine. Small wraps (m_n < 2r+1) are evaluated but
// flagged; their lifts are never reported as witnesses.
ProbeReport surjunctivity_probe(const RuleSet& rules, const DistPresentation& dist, Coord n_max,
                                Coord search_budget = 4096, const Budget& budget = {});

// --- witness re-verification ---------------------------------------------

bool verify_orphan(const RuleSet& rules, const DistPresentation& dist, const OrphanWitness& w,
                   const Budget& budget = {});
bool verify_kernel(const RuleSet& rules, const DistPresentation& dist, const KernelWitness& w);
bool verify_collision(const RuleSet& rules, const DistPresentation& dist, const Configuration& c1,
                      const Configuration& c2, const Box& diff_window);

// Default scan region giving finite completeness for the scanned widths.
Box default_scan_region(const RuleSet& rules, const DistPresentation& dist, Coord max_width);

}  // namespace analysis
}  // namespace nuca
