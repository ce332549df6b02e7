#pragma once

#include "flagorb/flag.hpp"

#include <string>
#include <vector>

namespace flagorb {

struct JEntry {
    std::vector<int> J;  // 0-based, sorted
    int s = 1;           // prefix index, 1-based

    bool operator==(const JEntry& o) const { return s == o.s && J == o.J; }
    bool operator<(const JEntry& o) const { return s != o.s ? s < o.s : J < o.J; }
};

using JFamily = std::vector<JEntry>;

// Blockwise suffix unions for nn crossed with s = 1..l-1 (l = length of mm),
// sorted by (s, J).
JFamily invariant_family(const Composition& nn, const Composition& mm);

template <class F>
std::size_t rank_Js(const Flag<F>& f, const std::vector<int>& J, int s) {
    if (s < 1 || static_cast<std::size_t>(s) >= f.type.length()) throw std::out_of_range("prefix index s");
    std::vector<std::size_t> rows;
    for (int j : J) {
        if (j < 0 || j >= static_cast<int>(f.n())) throw std::out_of_range("row index in J");
        rows.push_back(static_cast<std::size_t>(j));
    }
    return rank(f.prefix(static_cast<std::size_t>(s)).select_rows(rows));
}

struct Signature {
    std::vector<int> values;  // aligned with the family

    bool operator==(const Signature& o) const { return values == o.values; }
    bool operator!=(const Signature& o) const { return values != o.values; }
    bool operator<(const Signature& o) const { return values < o.values; }
};

template <class F>
Signature signature(const Flag<F>& f, const JFamily& fam) {
    Signature sig;
    sig.values.reserve(fam.size());
    for (const auto& e : fam) sig.values.push_back(static_cast<int>(rank_Js(f, e.J, e.s)));
    return sig;
}

// a <= b entrywise.
bool dominates(const Signature& a, const Signature& b);

// Lines "s=<idx> J={...} r=<value>" in family order, 1-based indices.
std::string serialize_signature(const Signature& sig, const JFamily& fam);
std::string format_J(const std::vector<int>& J);

// #{s <= j : sigma(s) >= n-i+1}, 1-based i, j in 1..n-1; sigma 0-based.
int bruhat_rij(const Permutation& sigma, int i, int j);
std::vector<int> bruhat_vector(const Permutation& sigma);

}  // namespace flagorb
