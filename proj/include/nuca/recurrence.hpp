// Recurrence and uniform recurrence of 1-D distribution presentations,
// factor occurrence counting, unique-pattern extraction, and the
// tail-subword property of eventually periodic presentations.
//
// Periodic and eventually periodic verdicts are exact. Substitutive
// presentations only get bounded verdicts over the materialized range.
#pragma once

#include <optional>
#include <vector>

#include "nuca/core.hpp"

namespace nuca {
namespace recurrence {

struct Occurrences {
    bool infinite = false;
    long long count = 0;               // meaningful when !infinite
    std::vector<Coord> positions;      // left ends, ascending (when finite)
    bool exact = true;                 // false for bounded (substitutive) scans
    Coord scan_lo = 0, scan_hi = -1;   // scanned left-end range
};

Occurrences factor_occurrences(const DistPresentation& dist, const std::vector<int>& p);

enum class RecurrenceKind { Recurrent, NonRecurrent, BoundedRecurrent };

struct RecurrenceVerdict {
    RecurrenceKind kind = RecurrenceKind::Recurrent;
    std::vector<int> witness;           // a pattern occurring exactly once (NonRecurrent)
    Coord witness_pos = 0;
    Coord period = 0;                   // global period when Recurrent and known
    Coord bound = 0;                    // L for BoundedRecurrent
    std::optional<std::vector<int>> scan_counterexample;  // factor seen once in a bounded scan
};

RecurrenceVerdict is_recurrent(const DistPresentation& dist, Coord bounded_scan_length = 10);

struct UniformReport {
    bool uniform = false;
    bool exact = true;
    std::vector<Coord> window_width;    // w(k) for k = 1..L (0 = unused)
    std::vector<int> failing_pattern;
    Coord failing_window_lo = 0, failing_window_hi = -1;
};

UniformReport uniform_recurrence_check(const DistPresentation& dist, Coord max_len);

struct UniquePattern {
    Coord position = 0;
    Coord length = 0;
    std::vector<int> pattern;
};

// Shortest (then leftmost) factor occurring exactly once. Exact for
// eventually periodic presentations; requires a NonRecurrent verdict.
UniquePattern shortest_unique_pattern(const DistPresentation& dist);

enum class TailVerdict { SuffixesInRight, PrefixesInLeft, Both, NeitherUpTo };

struct TailReport {
    TailVerdict verdict = TailVerdict::Both;
    Coord checked_length = 0;
    bool conclusive = false;  // periodic tails make the bounded check exact
};

// Checks whether every length<=L suffix of the left tail occurs in the right
// tail's periodic closure, and symmetrically. L defaults to the conclusive
// bound |middle| + 2*lcm(|left|,|right|).
TailReport tail_subword_property(const DistPresentation& dist, Coord max_len = 0);

// Conclusive scan length for an eventually periodic presentation.
Coord conclusive_tail_length(const EventuallyPeriodicWord& w);

}  // namespace recurrence
}  // namespace nuca
