#pragma once

#include "flagorb/flag.hpp"
#include "flagorb/rank.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

namespace testing {

using namespace flagorb;

inline const Rational QQ{};

inline std::mt19937_64& rng() {
    static std::mt19937_64 g(20240611);
    return g;
}

inline long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng()); }

// mpq_class(a, b) does not reduce; equality needs canonical values.
inline mpq_class frac(long a, long b) {
    mpq_class q(a, b);
    q.canonicalize();
    return q;
}

inline Composition random_composition(int n) {
    std::vector<int> parts;
    int cur = 1;
    for (int i = 1; i < n; ++i) {
        if (uniform(0, 1)) {
            parts.push_back(cur);
            cur = 1;
        } else {
            ++cur;
        }
    }
    parts.push_back(cur);
    return Composition(parts);
}

inline QMatrix random_qmatrix(std::size_t r, std::size_t c, long span = 3) {
    QMatrix m(QQ, r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = frac(uniform(-span, span), uniform(1, 2));
    return m;
}

inline FpMatrix random_fpmatrix(const PrimeField& K, std::size_t r, std::size_t c) {
    FpMatrix m(K, r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = static_cast<std::uint32_t>(uniform(0, K.p - 1));
    return m;
}

inline long nonzero(long span) {
    long v = 0;
    while (v == 0) v = uniform(-span, span);
    return v;
}

// Block diagonal for nn, blocks invertible upper triangular.
inline QMatrix random_bprime(const Composition& nn) {
    const int n = nn.n();
    QMatrix g(QQ, n, n);
    for (std::size_t b = 0; b < nn.length(); ++b) {
        int s = nn.prefix(b), e = nn.prefix(b + 1);
        for (int i = s; i < e; ++i) {
            g(i, i) = frac(nonzero(2), uniform(1, 2));
            for (int j = i + 1; j < e; ++j) g(i, j) = uniform(-2, 2);
        }
    }
    return g;
}

// Top-left d x d block of an element of P_mm, enough to act on a flag basis.
inline QMatrix random_parabolic_block(const Composition& mm) {
    const int d = mm.prefix(mm.length() - 1);
    QMatrix p(QQ, d, d);
    std::vector<int> blk;
    for (std::size_t b = 0; b + 1 < mm.length(); ++b)
        for (int t = 0; t < mm[b]; ++t) blk.push_back(static_cast<int>(b));
    while (true) {
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) p(i, j) = blk[i] <= blk[j] ? mpq_class(uniform(-2, 2)) : mpq_class(0);
        if (inverse(p)) return p;
    }
}

inline QFlag random_flag(const Composition& mm, long span = 2) {
    const int n = mm.n(), d = mm.prefix(mm.length() - 1);
    while (true) {
        QMatrix m(QQ, n, d);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < d; ++j) m(i, j) = uniform(-span, span);
        if (rank(m) == static_cast<std::size_t>(d)) return canonicalize(mm, m);
    }
}

// Sparse 0/1 flags reach the small orbits that dense random flags miss.
inline QFlag random_sparse_flag(const Composition& mm) {
    const int n = mm.n(), d = mm.prefix(mm.length() - 1);
    while (true) {
        QMatrix m(QQ, n, d);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < d; ++j) m(i, j) = uniform(0, 3) == 0 ? 1 : 0;
        if (rank(m) == static_cast<std::size_t>(d)) return canonicalize(mm, m);
    }
}

// Fraction-free (Bareiss) rank over Z after clearing denominators row by row.
inline std::size_t bareiss_rank(const QMatrix& q) {
    const std::size_t r = q.rows(), c = q.cols();
    std::vector<std::vector<mpz_class>> a(r, std::vector<mpz_class>(c));
    for (std::size_t i = 0; i < r; ++i) {
        mpz_class l = 1;
        for (std::size_t j = 0; j < c; ++j) l = lcm(l, q(i, j).get_den());
        for (std::size_t j = 0; j < c; ++j) {
            mpq_class v = q(i, j) * l;
            a[i][j] = v.get_num();
        }
    }
    mpz_class prev = 1;
    std::size_t rk = 0;
    for (std::size_t col = 0; col < c && rk < r; ++col) {
        std::size_t p = rk;
        while (p < r && a[p][col] == 0) ++p;
        if (p == r) continue;
        std::swap(a[p], a[rk]);
        for (std::size_t i = rk + 1; i < r; ++i) {
            for (std::size_t j = col + 1; j < c; ++j) a[i][j] = (a[rk][col] * a[i][j] - a[i][col] * a[rk][j]) / prev;
            a[i][col] = 0;
        }
        prev = a[rk][col];
        ++rk;
    }
    return rk;
}

// Rank over GF(p) by brute force: the largest k with a nonzero k x k minor,
// minors by permutation expansion. Small matrices only.
inline std::size_t minor_rank(const FpMatrix& m) {
    const PrimeField& K = m.field();
    const std::size_t r = m.rows(), c = m.cols();
    std::size_t best = 0;
    for (unsigned rm = 1; rm < (1u << r); ++rm)
        for (unsigned cm = 1; cm < (1u << c); ++cm) {
            std::vector<std::size_t> rs, cs;
            for (std::size_t i = 0; i < r; ++i)
                if (rm & (1u << i)) rs.push_back(i);
            for (std::size_t j = 0; j < c; ++j)
                if (cm & (1u << j)) cs.push_back(j);
            if (rs.size() != cs.size() || rs.size() <= best) continue;
            std::vector<std::size_t> perm(cs.size());
            for (std::size_t t = 0; t < perm.size(); ++t) perm[t] = t;
            std::uint32_t det = 0;
            do {
                std::uint32_t term = 1;
                std::size_t inv = 0;
                for (std::size_t t = 0; t < perm.size(); ++t) {
                    term = K.mul(term, m(rs[t], cs[perm[t]]));
                    for (std::size_t u = t + 1; u < perm.size(); ++u) inv += perm[u] < perm[t];
                }
                det = inv % 2 ? K.sub(det, term) : K.add(det, term);
            } while (std::next_permutation(perm.begin(), perm.end()));
            if (det != 0) best = rs.size();
        }
    return best;
}

inline Permutation random_permutation(int n) {
    Permutation p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    std::shuffle(p.begin(), p.end(), rng());
    return p;
}

// Elements below tau in the Bruhat order by the subword criterion: products
// of subwords of one reduced word of tau. One-line notation, 0-based.
inline std::set<Permutation> bruhat_below(const Permutation& tau) {
    const std::size_t n = tau.size();
    Permutation x = tau;
    std::vector<std::size_t> word;  // x s_{w1} s_{w2} ... = id
    for (bool moved = true; moved;) {
        moved = false;
        for (std::size_t i = 0; i + 1 < n; ++i)
            if (x[i] > x[i + 1]) {
                std::swap(x[i], x[i + 1]);
                word.push_back(i);
                moved = true;
            }
    }
    std::set<Permutation> out;
    for (unsigned mask = 0; mask < (1u << word.size()); ++mask) {
        Permutation y(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = static_cast<int>(i);
        // tau = s_{wk} ... s_{w1}, multiplied on the right letter by letter.
        for (std::size_t t = word.size(); t-- > 0;)
            if (mask & (1u << t)) std::swap(y[word[t]], y[word[t] + 1]);
        out.insert(y);
    }
    return out;
}

// A few injective pairs for every finite row of the table.
inline std::vector<std::pair<Composition, Composition>> sample_injective_pairs() {
    return {
        {Composition{2, 2}, Composition{1, 3}},       {Composition{3, 2}, Composition{2, 3}},
        {Composition{1, 3}, Composition{2, 2}},       {Composition{1, 3, 1}, Composition{2, 3}},
        {Composition{1, 2, 2}, Composition{2, 3}},    {Composition{2, 2, 2}, Composition{2, 4}},
        {Composition{1, 1, 1}, Composition{2, 1}},    {Composition{2, 1, 1}, Composition{3, 1}},
        {Composition{2, 2}, Composition{1, 1, 2}},    {Composition{3, 2}, Composition{2, 1, 2}},
        {Composition{2, 1}, Composition{1, 1, 1}},    {Composition{3, 1}, Composition{1, 2, 1}},
        {Composition{4, 1}, Composition{1, 1, 1, 2}}, {Composition{1, 3}, Composition{2, 1, 1}},
    };
}

}  // namespace testing
