#include "nuca/gf2.hpp"

#include <algorithm>
#include <bit>

namespace nuca {
namespace gf2 {

std::size_t BitVec::leading() const {
    for (std::size_t w = 0; w < words.size(); ++w)
        if (words[w]) {
            std::size_t i = (w << 6) + static_cast<std::size_t>(std::countr_zero(words[w]));
            return i < bits ? i : bits;
        }
    return bits;
}

std::size_t BitVec::popcount() const {
    std::size_t n = 0;
    for (auto w : words) n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

namespace {

// In-place forward elimination; returns pivot column per reduced row.
struct Echelon {
    std::vector<BitVec> rows;
    std::vector<std::uint32_t> rhs;      // parallel rhs bits
    std::vector<std::size_t> pivot_col;  // per kept row, ascending
};

Echelon eliminate(const Gf2System& sys) {
    Echelon e;
    std::vector<BitVec> work = sys.rows;
    std::vector<std::uint32_t> wrhs(sys.n_eqs);
    for (std::size_t r = 0; r < sys.n_eqs; ++r) wrhs[r] = sys.rhs.get(r);

    std::size_t done = 0;
    for (std::size_t col = 0; col < sys.n_vars && done < work.size(); ++col) {
        std::size_t pr = work.size();
        for (std::size_t r = done; r < work.size(); ++r)
            if (work[r].get(col)) {
                pr = r;
                break;
            }
        if (pr == work.size()) continue;
        std::swap(work[done], work[pr]);
        std::swap(wrhs[done], wrhs[pr]);
        for (std::size_t r = 0; r < work.size(); ++r) {
            if (r != done && work[r].get(col)) {
                work[r] ^= work[done];
                wrhs[r] ^= wrhs[done];
            }
        }
        e.pivot_col.push_back(col);
        ++done;
    }
    e.rows.assign(work.begin(), work.begin() + static_cast<std::ptrdiff_t>(done));
    e.rhs.assign(wrhs.begin(), wrhs.begin() + static_cast<std::ptrdiff_t>(done));
    // Inconsistency marker: keep one all-zero row with rhs 1 if present.
    for (std::size_t r = done; r < work.size(); ++r) {
        if (wrhs[r]) {
            e.rows.push_back(work[r]);
            e.rhs.push_back(1);
            e.pivot_col.push_back(sys.n_vars);
            break;
        }
    }
    return e;
}

}  // namespace

std::size_t rank(const Gf2System& sys) {
    Echelon e = eliminate(sys);
    std::size_t r = e.pivot_col.size();
    if (r > 0 && e.pivot_col.back() == sys.n_vars) --r;  // drop inconsistency marker
    return r;
}

std::optional<BitVec> solve(const Gf2System& sys) {
    Echelon e = eliminate(sys);
    if (!e.pivot_col.empty() && e.pivot_col.back() == sys.n_vars) return std::nullopt;

    // Greedy bit-by-bit: prefer 0, accept a forced 1, appending unit
    // constraints x_j = b into the running reduced basis.
    std::size_t n = sys.n_vars;
    std::vector<BitVec> basis = e.rows;
    std::vector<std::uint32_t> brhs = e.rhs;
    std::vector<std::size_t> bpiv = e.pivot_col;

    BitVec x(n);
    for (std::size_t j = 0; j < n; ++j) {
        BitVec row(n);
        row.set(j, true);
        std::uint32_t r = 0;
        for (std::size_t k = 0; k < basis.size(); ++k) {
            std::size_t p = bpiv[k];
            if (p < n && row.get(p)) {
                row ^= basis[k];
                r ^= brhs[k];
            }
        }
        std::size_t lead = row.leading();
        if (lead == n) {
            if (r) x.set(j, true);  // value forced to 1
        } else {
            // Free so far: pin to 0.
            for (std::size_t k = 0; k < basis.size(); ++k)
                if (basis[k].get(lead)) {
                    basis[k] ^= row;
                    brhs[k] ^= r;
                }
            basis.push_back(row);
            brhs.push_back(r);
            bpiv.push_back(lead);
        }
    }
    return x;
}

std::vector<BitVec> nullspace_basis(const Gf2System& sys) {
    Echelon e = eliminate(sys);
    std::vector<bool> is_pivot(sys.n_vars, false);
    for (std::size_t p : e.pivot_col)
        if (p < sys.n_vars) is_pivot[p] = true;

    std::vector<BitVec> basis;
    for (std::size_t f = 0; f < sys.n_vars; ++f) {
        if (is_pivot[f]) continue;
        BitVec v(sys.n_vars);
        v.set(f, true);
        for (std::size_t k = 0; k < e.pivot_col.size(); ++k) {
            std::size_t p = e.pivot_col[k];
            if (p < sys.n_vars && e.rows[k].get(f)) v.set(p, true);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<BitVec> lex_min_nonzero(std::vector<BitVec> basis) {
    if (basis.empty()) return std::nullopt;
    std::size_t n = basis.front().bits;
    // Row-reduce the basis over ascending columns; the row with the latest
    // leading column has the longest zero prefix and any further combination
    // only moves the first set bit earlier.
    std::size_t done = 0;
    for (std::size_t col = 0; col < n && done < basis.size(); ++col) {
        std::size_t pr = basis.size();
        for (std::size_t r = done; r < basis.size(); ++r)
            if (basis[r].get(col)) {
                pr = r;
                break;
            }
        if (pr == basis.size()) continue;
        std::swap(basis[done], basis[pr]);
        for (std::size_t r = 0; r < basis.size(); ++r)
            if (r != done && basis[r].get(col)) basis[r] ^= basis[done];
        ++done;
    }
    if (done == 0) return std::nullopt;
    std::size_t best = 0, best_lead = basis[0].leading();
    for (std::size_t r = 1; r < done; ++r) {
        std::size_t l = basis[r].leading();
        if (l > best_lead && l < n) {
            best = r;
            best_lead = l;
        }
    }
    return basis[best];
}

std::optional<BitVec> lex_least_unattainable(const Gf2System& sys) {
    // Left null space of A = null space of A^T: checks y with y^T A = 0.
    // rhs t is attainable iff y . (t ^ c0) = 0 for every check y, where c0
    // is the affine offset already folded into sys.rhs.
    Gf2System tr;
    tr.n_vars = sys.n_eqs;
    tr.n_eqs = sys.n_vars;
    tr.rhs = BitVec(sys.n_vars);
    tr.rows.assign(sys.n_vars, BitVec(sys.n_eqs));
    for (std::size_t r = 0; r < sys.n_eqs; ++r)
        for (std::size_t c = 0; c < sys.n_vars; ++c)
            if (sys.rows[r].get(c)) tr.rows[c].set(r, true);
    std::vector<BitVec> checks = nullspace_basis(tr);
    if (checks.empty()) return std::nullopt;  // full row space: surjective

    // If c0 itself violates a check, the zero target is unattainable.
    bool zero_bad = false;
    for (const auto& y : checks) {
        std::size_t par = 0;
        for (std::size_t r = 0; r < sys.n_eqs; ++r)
            if (y.get(r) && sys.rhs.get(r)) par ^= 1u;
        if (par) {
            zero_bad = true;
            break;
        }
    }
    BitVec t(sys.n_eqs);
    if (zero_bad) return t;
    // Otherwise the least violating target has a single bit at the last
    // equation touched by any check (later set bits sort lexicographically
    // smaller, and columns past it cannot violate anything).
    std::size_t jmax = 0;
    for (const auto& y : checks)
        for (std::size_t r = 0; r < sys.n_eqs; ++r)
            if (y.get(r)) jmax = std::max(jmax, r);
    t.set(jmax, true);
    return t;
}

// ---------------------------------------------------------------------------

Gf2System build_linear_system(const RuleSet& rules, const DistPresentation& dist,
                              const SystemSpec& spec, const std::optional<Pattern>& target) {
    const Alphabet& a = rules.alphabet;
    if (!a.all_binary()) throw std::invalid_argument("gf2: alphabet tracks must be binary");
    const std::size_t tracks = a.num_tracks();

    Gf2System sys;
    Box vwin = spec.var_window ? *spec.var_window : rules.neighborhood.hull(spec.eq_window);
    if (spec.cyclic_length) {
        Coord m = *spec.cyclic_length;
        for (Coord x = 0; x < m; ++x)
            for (std::size_t t = 0; t < tracks; ++t)
                sys.var_keys.push_back({{x, 0}, static_cast<std::uint32_t>(t)});
    } else {
        for (Coord i = 0; i < vwin.cell_count(); ++i) {
            Cell c = vwin.cell_at(i);
            if (spec.var_support && !spec.var_support->contains(c)) continue;
            for (std::size_t t = 0; t < tracks; ++t)
                sys.var_keys.push_back({c, static_cast<std::uint32_t>(t)});
        }
    }
    sys.n_vars = sys.var_keys.size();
    for (std::size_t i = 0; i < sys.var_keys.size(); ++i) sys.var_index[sys.var_keys[i]] = i;

    for (Coord i = 0; i < spec.eq_window.cell_count(); ++i) {
        Cell c = spec.eq_window.cell_at(i);
        for (std::size_t t = 0; t < tracks; ++t)
            sys.eq_keys.push_back({c, static_cast<std::uint32_t>(t)});
    }
    sys.n_eqs = sys.eq_keys.size();
    for (std::size_t i = 0; i < sys.eq_keys.size(); ++i) sys.eq_index[sys.eq_keys[i]] = i;

    if (target && !(target->domain == spec.eq_window))
        throw std::invalid_argument("gf2: target domain must equal the equation window");

    sys.rows.assign(sys.n_eqs, BitVec(sys.n_vars));
    sys.rhs = BitVec(sys.n_eqs);

    for (std::size_t e = 0; e < sys.n_eqs; ++e) {
        const VarKey& eq = sys.eq_keys[e];
        int ri = dist.at(eq.cell.x);
        const LocalRule& rule = rules.rules.at(static_cast<std::size_t>(ri));
        if (!rule.linear) throw std::invalid_argument("gf2: non-linear rule in window");
        const TrackForm& tf = rule.linear->tracks.at(eq.track);
        std::uint32_t rhs_bit = tf.constant & 1u;
        for (const LinearTerm& term : tf.terms) {
            Cell nc = eq.cell + rules.neighborhood.offsets.at(term.neighbor);
            if (spec.cyclic_length) {
                Coord m = *spec.cyclic_length;
                nc.x = ((nc.x % m) + m) % m;
            }
            auto it = sys.var_index.find({nc, term.track});
            if (it == sys.var_index.end()) continue;  // pinned to 0 outside support
            sys.rows[e].flip(it->second);
        }
        if (target) {
            std::uint32_t bit = a.track(target->at(eq.cell), eq.track) & 1u;
            rhs_bit ^= bit;
        }
        if (rhs_bit) sys.rhs.set(e, true);
    }
    return sys;
}

}  // namespace gf2
}  // namespace nuca
