// Windowed evaluation of the global update, the partial update over a
// domain, cyclic updates, and space-time traces. Windowed evaluation always
// reads the presentation directly, so no boundary condition is invented.
#pragma once

#include <functional>

#include "nuca/core.hpp"

namespace nuca {

using RuleAtFn = std::function<int(Cell)>;
using ValueAtFn = std::function<State(Cell)>;

// Dimension-generic core evaluator: one output per cell of `window`.
Pattern eval_window(const RuleSet& rules, const RuleAtFn& rule_at, const ValueAtFn& value_at,
                    const Box& window);

// H_theta(c) restricted to D, with c read from its presentation.
Pattern apply_global_window(const RuleSet& rules, const DistPresentation& dist,
                            const Configuration& c, const Box& d);

// Partial update over D: p must cover the neighborhood hull of D.
Pattern apply_partial(const RuleSet& rules, const DistPresentation& dist, const Box& d,
                      const Pattern& p);

// Cyclic update: dist and c must be cyclic of equal length; all cell
// indices are taken mod the length (offsets may wrap more than once).
Configuration apply_cyclic(const RuleSet& rules, const DistPresentation& dist,
                           const Configuration& c);

// Rows 0..steps of the orbit restricted to `window`. Row t is computed by
// evaluating t steps from the original configuration on a window inflated
// by radius*(steps-t), so every variant of Configuration is supported.
std::vector<Pattern> trace_spacetime(const RuleSet& rules, const DistPresentation& dist,
                                     const Configuration& c, const Box& window, int steps);

}  // namespace nuca
