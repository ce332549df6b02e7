#pragma once

#include "flagorb/matrix.hpp"

#include <optional>
#include <string>
#include <vector>

namespace flagorb {

struct Composition {
    std::vector<int> parts;

    Composition() = default;
    explicit Composition(std::vector<int> p);
    Composition(std::initializer_list<int> p) : Composition(std::vector<int>(p)) {}

    int n() const;
    std::size_t length() const { return parts.size(); }
    int min() const;
    int operator[](std::size_t i) const { return parts[i]; }
    // Sum of the first s parts.
    int prefix(std::size_t s) const;
    Composition reversed() const;
    std::string to_string() const;  // "1,2,1"
    static Composition parse(const std::string& s);

    bool operator==(const Composition& o) const { return parts == o.parts; }
    bool operator!=(const Composition& o) const { return parts != o.parts; }
    bool operator<(const Composition& o) const { return parts < o.parts; }
};

std::vector<Composition> all_compositions(int n);

// Grouping (i_1,...,i_l) of n's parts summing to m's parts, if m is a
// subcomposition of n.
std::optional<std::vector<int>> subcomposition_witness(const Composition& m, const Composition& n);

// 0-based; sigma[j] is the image of j.
using Permutation = std::vector<int>;

Permutation compose(const Permutation& a, const Permutation& b);  // a∘b
Permutation inverse_permutation(const Permutation& s);
bool is_permutation(const Permutation& s);
std::vector<Permutation> all_permutations(int n);

// Column j carries a 1 in row sigma[j].
template <class F>
Matrix<F> permutation_matrix(const F& K, const Permutation& sigma) {
    Matrix<F> m(K, sigma.size(), sigma.size());
    for (std::size_t j = 0; j < sigma.size(); ++j) m(sigma[j], j) = K.one();
    return m;
}

// Row relabelling that reorders the blocks of nn: the new block t is the old
// block order[t]; rows keep their order inside a block.
Permutation block_permutation(const Composition& nn, const std::vector<int>& order);
Composition permute_blocks(const Composition& nn, const std::vector<int>& order);

// A flag of type m stored through the first m_1+...+m_{l-1} columns of a
// basis adapted to it, always in canonical form.
template <class F>
struct Flag {
    Composition type;
    Matrix<F> rep;

    std::size_t n() const { return rep.rows(); }
    std::size_t blocks() const { return type.length() ? type.length() - 1 : 0; }
    std::size_t block_begin(std::size_t b) const { return type.prefix(b); }
    std::size_t block_end(std::size_t b) const { return type.prefix(b + 1); }
    // Representative of the prefix subspace V_s (s in 1..l-1).
    Matrix<F> prefix(std::size_t s) const { return rep.left_cols(type.prefix(s)); }

    bool operator==(const Flag& o) const { return type == o.type && rep == o.rep; }
    bool operator!=(const Flag& o) const { return !(*this == o); }
};

using QFlag = Flag<Rational>;
using FpFlag = Flag<PrimeField>;

// Canonical representative of the flag spanned by `rep`: blocks are reduced
// left to right, each to reduced column echelon form after clearing the pivot
// rows of earlier blocks. Throws on rank deficiency.
template <class F>
Flag<F> canonicalize(const Composition& type, Matrix<F> rep) {
    const std::size_t l = type.length();
    const std::size_t d = l ? type.prefix(l - 1) : 0;
    if (static_cast<int>(rep.rows()) != type.n()) throw std::invalid_argument("flag rows do not match type");
    if (rep.cols() != d) throw std::invalid_argument("flag columns do not match type");
    std::vector<std::pair<std::size_t, std::size_t>> piv;
    for (std::size_t b = 0; b + 1 < l; ++b) {
        std::size_t c0 = type.prefix(b), c1 = type.prefix(b + 1);
        if (column_reduce_block(rep, c0, c1, piv) != c1 - c0) throw std::invalid_argument("rank-deficient flag");
    }
    return Flag<F>{type, std::move(rep)};
}

template <class F>
Flag<F> canonicalize(const Flag<F>& f) {
    return canonicalize(f.type, f.rep);
}

template <class F>
bool flags_equal(const Flag<F>& a, const Flag<F>& b) {
    if (a.type != b.type) throw std::invalid_argument("flags of different types");
    return canonicalize(a).rep == canonicalize(b).rep;
}

template <class F>
Flag<F> flag_from_permutation(const F& K, const Permutation& sigma, const Composition& m) {
    if (static_cast<int>(sigma.size()) != m.n() || !is_permutation(sigma))
        throw std::invalid_argument("permutation does not match composition");
    Matrix<F> p = permutation_matrix(K, sigma);
    return canonicalize(m, p.left_cols(m.prefix(m.length() - 1)));
}

template <class F>
Flag<F> project(const Flag<F>& f, const Composition& target) {
    auto w = subcomposition_witness(target, f.type);
    if (!w) throw std::invalid_argument("not a subcomposition");
    return canonicalize(target, f.rep.left_cols(target.prefix(target.length() - 1)));
}

template <class F>
Flag<F> act(const Matrix<F>& g, const Flag<F>& f) {
    if (g.rows() != g.cols() || g.cols() != f.n()) throw std::invalid_argument("size mismatch in action");
    return canonicalize(f.type, g * f.rep);
}

// Extend the columns of rep to a basis by appending standard basis vectors in
// index order whenever they enlarge the span.
template <class F>
Matrix<F> complete_to_invertible(const Matrix<F>& rep) {
    const F& K = rep.field();
    const std::size_t n = rep.rows();
    Matrix<F> cur = rep;
    std::size_t r = rank(cur);
    if (r != rep.cols()) throw std::invalid_argument("completion of a rank-deficient matrix");
    for (std::size_t i = 0; i < n && cur.cols() < n; ++i) {
        Matrix<F> e(K, n, 1);
        e(i, 0) = K.one();
        Matrix<F> cand = cur.hconcat(e);
        if (rank(cand) > r) {
            cur = std::move(cand);
            ++r;
        }
    }
    return cur;
}

// Orthogonal duality: each V_s goes to V_s^perp; a flag of type (m_1,...,m_l)
// becomes one of type (m_l,...,m_1).
template <class F>
Flag<F> dual(const Flag<F>& f) {
    const F& K = f.rep.field();
    const std::size_t l = f.type.length();
    Composition rt = f.type.reversed();
    Matrix<F> cols(K, f.n(), 0);
    std::size_t r = 0;
    for (std::size_t s = l - 1; s >= 1; --s) {
        Matrix<F> ker = kernel_basis(f.prefix(s).transpose());
        for (std::size_t j = 0; j < ker.cols(); ++j) {
            Matrix<F> cand = cols.hconcat(ker.column(j));
            if (rank(cand) > r) {
                cols = std::move(cand);
                ++r;
            }
        }
    }
    return canonicalize(rt, cols);
}

// M_tau P_shape M_tau^{-1}.
struct ParabolicSpec {
    Composition shape;
    Permutation perm;
    std::string label;
};

// Standard maximal parabolic P_(|J^c|,|J|) conjugated so that it becomes
// {a_ij = 0 for i in J, j not in J}. J is 0-based.
ParabolicSpec parabolic_for_rows(int n, const std::vector<int>& J);

template <class F>
bool contains(const ParabolicSpec& P, const Matrix<F>& g) {
    const F& K = g.field();
    auto inv = inverse_permutation(P.perm);
    Matrix<F> pm = permutation_matrix(K, P.perm);
    Matrix<F> pi = permutation_matrix(K, inv);
    Matrix<F> h = pi * g * pm;
    std::vector<int> blk(h.rows());
    for (std::size_t b = 0, r = 0; b < P.shape.length(); ++b)
        for (int t = 0; t < P.shape[b]; ++t) blk[r++] = static_cast<int>(b);
    for (std::size_t i = 0; i < h.rows(); ++i)
        for (std::size_t j = 0; j < h.cols(); ++j)
            if (blk[i] > blk[j] && !K.is_zero(h(i, j))) return false;
    return true;
}

// Sets J (0-based, sorted) that are unions over the blocks of nn of suffix
// intervals of each block's rows, J nonempty. When proper_only, J = {all} is
// dropped as well.
std::vector<std::vector<int>> blockwise_suffix_sets(const Composition& nn, bool proper_only = false);

enum class QTarget { BPrime, Parabolic };

// Maximal parabolics containing B' (for nn) or containing P_m (for mm).
std::vector<ParabolicSpec> qfamily(QTarget which, const Composition& c);

// g is block diagonal for nn with invertible upper triangular blocks.
template <class F>
bool in_bprime(const Composition& nn, const Matrix<F>& g) {
    const F& K = g.field();
    std::vector<int> blk(g.rows());
    for (std::size_t b = 0, r = 0; b < nn.length(); ++b)
        for (int t = 0; t < nn[b]; ++t) blk[r++] = static_cast<int>(b);
    for (std::size_t i = 0; i < g.rows(); ++i) {
        if (K.is_zero(g(i, i))) return false;
        for (std::size_t j = 0; j < g.cols(); ++j)
            if (i != j && !K.is_zero(g(i, j)) && (blk[i] != blk[j] || j < i)) return false;
    }
    return true;
}

// Block upper triangular for m (the right parabolic P_m).
template <class F>
bool in_parabolic(const Composition& m, const Matrix<F>& g) {
    ParabolicSpec p{m, {}, ""};
    p.perm.resize(g.rows());
    for (std::size_t i = 0; i < g.rows(); ++i) p.perm[i] = static_cast<int>(i);
    return contains(p, g) && inverse(g).has_value();
}

}  // namespace flagorb
