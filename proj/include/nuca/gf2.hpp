// Bit-packed GF(2) linear systems tying pre-image cell/track bits to image
// cell/track bits of a linear NUCA over a window or a cycle. Plain Gaussian
// elimination; every result is deterministic so witnesses reproduce exactly.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "nuca/core.hpp"

namespace nuca {
namespace gf2 {

struct BitVec {
    std::vector<std::uint64_t> words;
    std::size_t bits = 0;

    BitVec() = default;
    explicit BitVec(std::size_t n) : words((n + 63) / 64, 0), bits(n) {}

    bool get(std::size_t i) const { return words[i >> 6] >> (i & 63) & 1u; }
    void set(std::size_t i, bool v) {
        std::uint64_t m = 1ull << (i & 63);
        if (v)
            words[i >> 6] |= m;
        else
            words[i >> 6] &= ~m;
    }
    void flip(std::size_t i) { words[i >> 6] ^= 1ull << (i & 63); }
    void operator^=(const BitVec& o) {
        for (std::size_t w = 0; w < words.size(); ++w) words[w] ^= o.words[w];
    }
    bool any() const {
        for (auto w : words)
            if (w) return true;
        return false;
    }
    // Index of the first set bit, or bits if none.
    std::size_t leading() const;
    std::size_t popcount() const;
    bool operator==(const BitVec&) const = default;
};

struct VarKey {
    Cell cell;
    std::uint32_t track = 0;
    auto operator<=>(const VarKey&) const = default;
};

struct Gf2System {
    std::size_t n_vars = 0;
    std::size_t n_eqs = 0;
    std::vector<BitVec> rows;       // one per equation, n_vars bits each
    BitVec rhs;                     // n_eqs bits
    std::vector<VarKey> var_keys;   // column -> (cell, track)
    std::vector<VarKey> eq_keys;    // row -> (cell, track)
    std::map<VarKey, std::size_t> var_index;
    std::map<VarKey, std::size_t> eq_index;
};

std::size_t rank(const Gf2System& sys);

// Lexicographically least solution over the column order, if any.
std::optional<BitVec> solve(const Gf2System& sys);

// Basis of { v : A v = 0 } derived from the reduced echelon form, ordered by
// free column. Deterministic.
std::vector<BitVec> nullspace_basis(const Gf2System& sys);

// Lexicographically least nonzero element of span(basis), columns ordered
// ascending with column 0 most significant. Empty optional for trivial span.
std::optional<BitVec> lex_min_nonzero(std::vector<BitVec> basis);

// Least rhs vector (same lex order over equation bits) for which A v = rhs
// has no solution, or absent when the row space is full (map surjective).
std::optional<BitVec> lex_least_unattainable(const Gf2System& sys);

// ---------------------------------------------------------------------------
// System construction for linear NUCA.

struct SystemSpec {
    Box eq_window;                       // image cells (one equation per cell/track)
    std::optional<Box> var_window;       // defaults to neighborhood hull of eq_window
    std::optional<Box> var_support;      // variables outside are pinned to 0 (kernel mode)
    std::optional<Coord> cyclic_length;  // wrap all cell indices mod this length
};

// Precondition: every rule reachable in the equation window carries a linear
// form and the alphabet is all-binary. Solutions of the system are exactly
// the pre-images of `target` under the windowed partial update (rhs folds in
// affine constant bits; absent target means the kernel system, rhs 0).
Gf2System build_linear_system(const RuleSet& rules, const DistPresentation& dist,
                              const SystemSpec& spec, const std::optional<Pattern>& target);

}  // namespace gf2
}  // namespace nuca
