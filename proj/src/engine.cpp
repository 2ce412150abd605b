#include "nuca/engine.hpp"

#include <algorithm>

namespace nuca {

Pattern eval_window(const RuleSet& rules, const RuleAtFn& rule_at, const ValueAtFn& value_at,
                    const Box& window) {
    Pattern out;
    out.domain = window;
    out.states.reserve(static_cast<std::size_t>(window.cell_count()));
    std::vector<State> nb(rules.neighborhood.arity());
    for (Coord i = 0; i < window.cell_count(); ++i) {
        Cell x = window.cell_at(i);
        int ri = rule_at(x);
        if (ri < 0 || static_cast<std::size_t>(ri) >= rules.rules.size())
            throw std::invalid_argument("engine: rule index out of range");
        for (std::size_t k = 0; k < nb.size(); ++k) nb[k] = value_at(x + rules.neighborhood.offsets[k]);
        out.states.push_back(rules.rules[static_cast<std::size_t>(ri)].eval(nb));
    }
    return out;
}

Pattern apply_global_window(const RuleSet& rules, const DistPresentation& dist,
                            const Configuration& c, const Box& d) {
    return eval_window(
        rules, [&](Cell x) { return dist.at(x.x); }, [&](Cell x) { return c.at(x); }, d);
}

Pattern apply_partial(const RuleSet& rules, const DistPresentation& dist, const Box& d,
                      const Pattern& p) {
    Box need = rules.neighborhood.hull(d);
    if (!d.empty() &&
        (p.domain.x_min() > need.x_min() || p.domain.x_max() < need.x_max() ||
         p.domain.y_min() > need.y_min() || p.domain.y_max() < need.y_max()))
        throw std::invalid_argument("engine: pattern domain does not cover N(D)");
    return eval_window(
        rules, [&](Cell x) { return dist.at(x.x); }, [&](Cell x) { return p.at(x); }, d);
}

Configuration apply_cyclic(const RuleSet& rules, const DistPresentation& dist,
                           const Configuration& c) {
    if (!dist.is_cyclic() || !c.is_cyclic())
        throw std::invalid_argument("engine: apply_cyclic needs cyclic presentations");
    const CyclicWord& dw = dist.cyclic();
    const CyclicConf& cw = std::get<CyclicConf>(c.v);
    if (dw.length != cw.length) throw std::invalid_argument("engine: cyclic length mismatch");
    const Coord m = dw.length;
    std::vector<State> out(static_cast<std::size_t>(m));
    std::vector<State> nb(rules.neighborhood.arity());
    for (Coord x = 0; x < m; ++x) {
        for (std::size_t k = 0; k < nb.size(); ++k) {
            Coord nx = x + rules.neighborhood.offsets[k].x;
            nb[k] = cw.word[static_cast<std::size_t>(((nx % m) + m) % m)];
        }
        out[static_cast<std::size_t>(x)] =
            rules.rules[static_cast<std::size_t>(dw.word[static_cast<std::size_t>(x)])].eval(nb);
    }
    return Configuration::cyclic(std::move(out));
}

std::vector<Pattern> trace_spacetime(const RuleSet& rules, const DistPresentation& dist,
                                     const Configuration& c, const Box& window, int steps) {
    if (steps < 0) throw std::invalid_argument("engine: negative step count");
    std::vector<Pattern> rows;
    rows.reserve(static_cast<std::size_t>(steps) + 1);

    if (dist.is_cyclic() && c.is_cyclic()) {
        Configuration cur = c;
        for (int t = 0; t <= steps; ++t) {
            rows.push_back(extract_pattern(cur, window));
            if (t < steps) cur = apply_cyclic(rules, dist, cur);
        }
        return rows;
    }

    const Coord r = rules.neighborhood.radius();
    // Pyramid evaluation: row t is valid on window inflated by r*(steps-t).
    Box base = window.inflated(r * steps, r * steps);
    Pattern cur = extract_pattern(c, base);
    rows.push_back(extract_pattern(c, window));
    for (int t = 1; t <= steps; ++t) {
        Box next = window.inflated(r * (steps - t), r * (steps - t));
        cur = eval_window(
            rules, [&](Cell x) { return dist.at(x.x); }, [&](Cell x) { return cur.at(x); }, next);
        Pattern row;
        row.domain = window;
        for (Coord i = 0; i < window.cell_count(); ++i) row.states.push_back(cur.at(window.cell_at(i)));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace nuca
