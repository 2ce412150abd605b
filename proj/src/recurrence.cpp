#include "nuca/recurrence.hpp"

#include <algorithm>
#include <numeric>

namespace nuca {
namespace recurrence {

namespace {

struct EpView {
    EventuallyPeriodicWord w;
    bool exact = true;
};

void validate_word(const std::vector<int>& w, const char* what) {
    if (w.empty()) throw std::invalid_argument(std::string("recurrence: empty word in ") + what);
}

// Periodic-tail normal form when one exists (exact for eventually periodic
// and explicit-window presentations).
std::optional<EpView> as_ep(const DistPresentation& dist) {
    if (const auto* ep = std::get_if<EventuallyPeriodicWord>(&dist.v)) {
        validate_word(ep->left, "left tail");
        validate_word(ep->middle, "middle");
        validate_word(ep->right, "right tail");
        return EpView{*ep, true};
    }
    if (const auto* ex = std::get_if<ExplicitWindowWord>(&dist.v)) {
        validate_word(ex->window, "window");
        EventuallyPeriodicWord ep;
        ep.left = {ex->fallback};
        ep.middle = ex->window;
        ep.right = {ex->fallback};
        ep.middle_start = ex->start;
        return EpView{ep, true};
    }
    return std::nullopt;
}

std::optional<std::vector<int>> as_period_word(const DistPresentation& dist) {
    if (const auto* p = std::get_if<PeriodicWord>(&dist.v)) {
        validate_word(p->word, "periodic word");
        return p->word;
    }
    if (const auto* c = std::get_if<CyclicWord>(&dist.v)) {
        validate_word(c->word, "cyclic word");
        return c->word;
    }
    return std::nullopt;
}

bool matches_at(const DistPresentation& dist, Coord a, const std::vector<int>& p) {
    for (std::size_t k = 0; k < p.size(); ++k)
        if (dist.at(a + static_cast<Coord>(k)) != p[k]) return false;
    return true;
}

// Is p a factor of the periodic closure of `word`?
bool in_closure(const std::vector<int>& word, const std::vector<int>& p) {
    const std::size_t n = word.size();
    for (std::size_t a = 0; a < n; ++a) {
        bool ok = true;
        for (std::size_t k = 0; k < p.size() && ok; ++k)
            if (word[(a + k) % n] != p[k]) ok = false;
        if (ok) return true;
    }
    return false;
}

Coord tail_lcm(const EventuallyPeriodicWord& w) {
    return std::lcm(static_cast<Coord>(w.left.size()), static_cast<Coord>(w.right.size()));
}

// Decides whether the whole configuration has period P. The window check
// transfers to all of Z when its margins cover one tail period plus P on
// each side, because far cells can be slid into the window along the tails.
bool has_period(const EventuallyPeriodicWord& w, Coord p) {
    DistPresentation dist{w};
    Coord margin = p + tail_lcm(w) + static_cast<Coord>(std::max(w.left.size(), w.right.size()));
    Coord lo = w.middle_start - margin;
    Coord hi = w.middle_end() + margin;
    for (Coord x = lo; x + p <= hi; ++x)
        if (dist.at(x) != dist.at(x + p)) return false;
    return true;
}

Coord substitutive_lo(const SubstitutiveWord& s) {
    return s.anchor - static_cast<Coord>(s.expansion.size());
}
Coord substitutive_hi(const SubstitutiveWord& s) {
    return s.anchor + static_cast<Coord>(s.expansion.size()) - 1;
}

}  // namespace

Occurrences factor_occurrences(const DistPresentation& dist, const std::vector<int>& p) {
    if (p.empty()) throw std::invalid_argument("recurrence: empty factor");
    Occurrences occ;

    if (auto word = as_period_word(dist)) {
        occ.infinite = in_closure(*word, p);
        occ.exact = true;
        return occ;
    }
    if (auto ep = as_ep(dist)) {
        const auto& w = ep->w;
        if (in_closure(w.left, p) || in_closure(w.right, p)) {
            occ.infinite = true;
            return occ;
        }
        // Any remaining occurrence overlaps the middle; the scan window is
        // generous on both sides.
        Coord plen = static_cast<Coord>(p.size());
        occ.scan_lo = w.middle_start - plen - static_cast<Coord>(w.left.size());
        occ.scan_hi = w.middle_end() + plen + static_cast<Coord>(w.right.size());
        for (Coord a = occ.scan_lo; a + plen - 1 <= occ.scan_hi; ++a)
            if (matches_at(dist, a, p)) occ.positions.push_back(a);
        occ.count = static_cast<long long>(occ.positions.size());
        occ.exact = true;
        return occ;
    }
    // Substitutive: bounded scan over the materialized (mirrored) range.
    const auto& s = std::get<SubstitutiveWord>(dist.v);
    occ.scan_lo = substitutive_lo(s);
    occ.scan_hi = substitutive_hi(s);
    for (Coord a = occ.scan_lo; a + static_cast<Coord>(p.size()) - 1 <= occ.scan_hi; ++a)
        if (matches_at(dist, a, p)) occ.positions.push_back(a);
    occ.count = static_cast<long long>(occ.positions.size());
    occ.exact = false;
    return occ;
}

namespace {

// Shortest (then leftmost) factor with exactly one occurrence. Only factors
// overlapping the middle can be unique; tail factors recur forever.
std::optional<UniquePattern> find_unique_factor(const DistPresentation& dist,
                                                const EventuallyPeriodicWord& w) {
    Coord cap = static_cast<Coord>(w.middle.size()) + 2 * tail_lcm(w) +
                2 * static_cast<Coord>(w.left.size() + w.right.size()) + 4;
    for (Coord k = 1; k <= cap; ++k) {
        for (Coord a = w.middle_start - k + 1; a <= w.middle_end(); ++a) {
            std::vector<int> factor;
            factor.reserve(static_cast<std::size_t>(k));
            for (Coord t = 0; t < k; ++t) factor.push_back(dist.at(a + t));
            Occurrences occ = factor_occurrences(dist, factor);
            if (!occ.infinite && occ.count == 1) {
                UniquePattern u;
                u.position = occ.positions.front();
                u.length = k;
                u.pattern = std::move(factor);
                return u;
            }
        }
    }
    return std::nullopt;
}

}  // namespace

RecurrenceVerdict is_recurrent(const DistPresentation& dist, Coord bounded_scan_length) {
    RecurrenceVerdict v;
    if (auto word = as_period_word(dist)) {
        v.kind = RecurrenceKind::Recurrent;
        v.period = static_cast<Coord>(word->size());
        return v;
    }
    if (auto ep = as_ep(dist)) {
        const auto& w = ep->w;
        Coord bound = static_cast<Coord>(w.middle.size()) + 2 * tail_lcm(w);
        for (Coord p = 1; p <= bound; ++p) {
            if (has_period(w, p)) {
                v.kind = RecurrenceKind::Recurrent;
                v.period = p;
                return v;
            }
        }
        auto u = find_unique_factor(dist, w);
        if (!u)
            throw VerificationError("recurrence: non-periodic presentation with no unique factor found");
        v.kind = RecurrenceKind::NonRecurrent;
        v.witness = u->pattern;
        v.witness_pos = u->position;
        return v;
    }
    // Substitutive: bounded verdict only.
    const auto& s = std::get<SubstitutiveWord>(dist.v);
    Coord lo = substitutive_lo(s), hi = substitutive_hi(s);
    v.kind = RecurrenceKind::BoundedRecurrent;
    v.bound = bounded_scan_length;
    for (Coord k = 1; k <= bounded_scan_length && !v.scan_counterexample; ++k) {
        std::map<std::vector<int>, int> seen;
        for (Coord a = lo; a + k - 1 <= hi; ++a) {
            std::vector<int> f;
            for (Coord t = 0; t < k; ++t) f.push_back(dist.at(a + t));
            seen[f]++;
        }
        for (const auto& [f, n] : seen)
            if (n < 2) {
                v.scan_counterexample = f;
                break;
            }
    }
    return v;
}

namespace {

struct FactorIndex {
    std::map<std::vector<int>, std::vector<Coord>> positions;
};

FactorIndex collect_factors(const DistPresentation& dist, Coord lo, Coord hi, Coord k) {
    FactorIndex fi;
    for (Coord a = lo; a + k - 1 <= hi; ++a) {
        std::vector<int> f;
        f.reserve(static_cast<std::size_t>(k));
        for (Coord t = 0; t < k; ++t) f.push_back(dist.at(a + t));
        fi.positions[f].push_back(a);
    }
    return fi;
}

}  // namespace

UniformReport uniform_recurrence_check(const DistPresentation& dist, Coord max_len) {
    if (max_len < 1) throw std::invalid_argument("recurrence: max_len must be >= 1");
    UniformReport rep;
    rep.window_width.assign(static_cast<std::size_t>(max_len) + 1, 0);

    if (auto word = as_period_word(dist)) {
        // Exact by periodicity: occurrence gaps repeat with the period.
        Coord period = static_cast<Coord>(word->size());
        DistPresentation unrolled{PeriodicWord{*word, 0}};
        for (Coord k = 1; k <= max_len; ++k) {
            FactorIndex fi = collect_factors(unrolled, 0, period + k - 2, k);
            Coord worst = 0;
            for (auto& [f, pos] : fi.positions) {
                std::vector<Coord> mod;
                for (Coord a : pos) mod.push_back(((a % period) + period) % period);
                std::sort(mod.begin(), mod.end());
                mod.erase(std::unique(mod.begin(), mod.end()), mod.end());
                for (std::size_t i = 0; i < mod.size(); ++i) {
                    Coord next = (i + 1 < mod.size()) ? mod[i + 1] : mod.front() + period;
                    worst = std::max(worst, next - mod[i]);
                }
            }
            rep.window_width[static_cast<std::size_t>(k)] = worst + k - 1;
        }
        rep.uniform = true;
        rep.exact = true;
        return rep;
    }

    if (auto ep = as_ep(dist)) {
        RecurrenceVerdict rv = is_recurrent(dist);
        if (rv.kind == RecurrenceKind::Recurrent) {
            // Globally periodic: delegate to the periodic path.
            std::vector<int> word;
            for (Coord x = 0; x < rv.period; ++x) word.push_back(dist.at(x));
            return uniform_recurrence_check(DistPresentation{PeriodicWord{word, 0}}, max_len);
        }
        // A unique factor fails uniform recurrence outright: windows past its
        // only occurrence never contain it.
        rep.uniform = false;
        rep.exact = true;
        rep.failing_pattern = rv.witness;
        Coord width = static_cast<Coord>(rv.witness.size()) +
                      static_cast<Coord>(ep->w.right.size()) + tail_lcm(ep->w);
        rep.failing_window_lo = ep->w.middle_end() + static_cast<Coord>(rv.witness.size()) + 1;
        rep.failing_window_hi = rep.failing_window_lo + width - 1;
        return rep;
    }

    // Substitutive: bounded gap table verified directly over the scan range.
    const auto& s = std::get<SubstitutiveWord>(dist.v);
    Coord lo = substitutive_lo(s), hi = substitutive_hi(s);
    rep.exact = false;
    for (Coord k = 1; k <= max_len; ++k) {
        FactorIndex fi = collect_factors(dist, lo, hi, k);
        Coord worst = 0;
        for (auto& [f, pos] : fi.positions)
            for (std::size_t i = 0; i + 1 < pos.size(); ++i) worst = std::max(worst, pos[i + 1] - pos[i]);
        Coord w = worst + k - 1;
        rep.window_width[static_cast<std::size_t>(k)] = w;
        // Verify the claim on every in-range window.
        for (auto& [f, pos] : fi.positions) {
            for (Coord a = lo; a + w - 1 <= hi; ++a) {
                auto it = std::lower_bound(pos.begin(), pos.end(), a);
                if (it == pos.end() || *it > a + w - k) {
                    rep.uniform = false;
                    rep.failing_pattern = f;
                    rep.failing_window_lo = a;
                    rep.failing_window_hi = a + w - 1;
                    return rep;
                }
            }
        }
    }
    rep.uniform = true;
    return rep;
}

UniquePattern shortest_unique_pattern(const DistPresentation& dist) {
    auto ep = as_ep(dist);
    if (!ep) throw std::invalid_argument("recurrence: unique patterns need an eventually periodic presentation");
    RecurrenceVerdict rv = is_recurrent(dist);
    if (rv.kind != RecurrenceKind::NonRecurrent)
        throw std::invalid_argument("recurrence: presentation is recurrent, no unique pattern exists");
    auto u = find_unique_factor(dist, ep->w);
    if (!u) throw VerificationError("recurrence: unique factor disappeared on re-scan");
    return *u;
}

Coord conclusive_tail_length(const EventuallyPeriodicWord& w) {
    return static_cast<Coord>(w.middle.size()) + 2 * tail_lcm(w);
}

TailReport tail_subword_property(const DistPresentation& dist, Coord max_len) {
    auto ep = as_ep(dist);
    if (!ep) throw std::invalid_argument("recurrence: tail property needs an eventually periodic presentation");
    const auto& w = ep->w;
    Coord conclusive = conclusive_tail_length(w);
    Coord len = max_len > 0 ? max_len : conclusive;

    TailReport rep;
    rep.checked_length = len;
    rep.conclusive = len >= conclusive;

    bool suffix_ok = true, prefix_ok = true;
    DistPresentation d{w};
    for (Coord k = 1; k <= len && (suffix_ok || prefix_ok); ++k) {
        if (suffix_ok) {
            std::vector<int> u_k;
            for (Coord t = w.middle_start - k; t < w.middle_start; ++t) u_k.push_back(d.at(t));
            if (!in_closure(w.right, u_k)) suffix_ok = false;
        }
        if (prefix_ok) {
            std::vector<int> w_k;
            for (Coord t = w.middle_end() + 1; t <= w.middle_end() + k; ++t) w_k.push_back(d.at(t));
            if (!in_closure(w.left, w_k)) prefix_ok = false;
        }
    }
    if (suffix_ok && prefix_ok)
        rep.verdict = TailVerdict::Both;
    else if (suffix_ok)
        rep.verdict = TailVerdict::SuffixesInRight;
    else if (prefix_ok)
        rep.verdict = TailVerdict::PrefixesInLeft;
    else
        rep.verdict = TailVerdict::NeitherUpTo;
    return rep;
}

}  // namespace recurrence
}  // namespace nuca
