#include "support.hpp"

#include <doctest.h>

#include <map>

using namespace testing;

TEST_CASE("invariant family layout") {
    auto fam = invariant_family(Composition{2, 1}, Composition{1, 1, 1});
    CHECK(fam.size() == 10);
    CHECK(std::is_sorted(fam.begin(), fam.end()));
    CHECK(fam.front().s == 1);
    CHECK(fam.back().s == 2);
    CHECK(invariant_family(Composition{2, 2}, Composition{1, 3}).size() == 8);
    CHECK_THROWS_AS(invariant_family(Composition{2, 2}, Composition{1, 2}), std::invalid_argument);
    CHECK(format_J({0, 3}) == "{1,4}");
}

TEST_CASE("rank of a row selection of a prefix") {
    // Complete flag spanned by e1+2e2, e1+e3, e4.
    QFlag f = canonicalize(Composition{1, 1, 1, 1}, QMatrix::from_rows(QQ, {{1, 1, 0}, {2, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
    CHECK(rank_Js(f, {0, 3}, 2) == 1);
    CHECK(rank_Js(f, {1, 2}, 2) == 2);
    CHECK(rank_Js(f, {3}, 3) == 1);
    CHECK(rank_Js(f, {3}, 2) == 0);
    CHECK_THROWS_AS(rank_Js(f, {0}, 4), std::out_of_range);
    CHECK_THROWS_AS(rank_Js(f, {4}, 1), std::out_of_range);
    for (int t = 0; t < 100; ++t) {
        Composition mm = random_composition(static_cast<int>(uniform(2, 6)));
        if (mm.length() < 2) continue;
        QFlag g = random_flag(mm, 1);
        std::vector<int> J;
        std::vector<std::size_t> rows;
        for (int i = 0; i < mm.n(); ++i)
            if (uniform(0, 1)) {
                J.push_back(i);
                rows.push_back(static_cast<std::size_t>(i));
            }
        int s = static_cast<int>(uniform(1, static_cast<long>(mm.length()) - 1));
        CHECK(rank_Js(g, J, s) == bareiss_rank(g.prefix(static_cast<std::size_t>(s)).select_rows(rows)));
    }
}

TEST_CASE("signature is invariant under B' on the left and P_m on the right") {
    for (int t = 0; t < 150; ++t) {
        int n = static_cast<int>(uniform(2, 6));
        Composition nn = random_composition(n), mm = random_composition(n);
        if (mm.length() < 2) continue;
        auto fam = invariant_family(nn, mm);
        QFlag f = uniform(0, 1) ? random_flag(mm) : random_sparse_flag(mm);
        Signature s = signature(f, fam);
        QFlag g = act(random_bprime(nn), f);
        CHECK(signature(g, fam) == s);
        CHECK(signature(canonicalize(mm, f.rep * random_parabolic_block(mm)), fam) == s);
    }
    // A set outside the family is not invariant: row 1 of a line in Q^2.
    QFlag f = canonicalize(Composition{1, 1}, QMatrix::from_rows(QQ, {{0}, {1}}));
    QMatrix b = QMatrix::from_rows(QQ, {{1, 1}, {0, 1}});
    CHECK(rank_Js(f, {0}, 1) == 0);
    CHECK(rank_Js(act(b, f), {0}, 1) == 1);
    CHECK(rank_Js(act(b, f), {1}, 1) == rank_Js(f, {1}, 1));
}

TEST_CASE("dominance and serialization") {
    Signature a{{0, 1, 1}}, b{{1, 1, 2}}, c{{1, 0, 2}};
    CHECK(dominates(a, b));
    CHECK_FALSE(dominates(b, a));
    CHECK_FALSE(dominates(a, c));
    CHECK_THROWS_AS(dominates(a, Signature{{0}}), std::invalid_argument);
    auto fam = invariant_family(Composition{1, 1}, Composition{1, 1});
    QFlag f = canonicalize(Composition{1, 1}, QMatrix::from_rows(QQ, {{1}, {0}}));
    CHECK(serialize_signature(signature(f, fam), fam) == "s=1 J={1} r=1\ns=1 J={1,2} r=1\ns=1 J={2} r=0\n");
}

TEST_CASE("Bruhat rank vector") {
    // sigma = 2 3 1 (1-based): r_ij counts s <= j with sigma(s) >= n-i+1.
    Permutation s{1, 2, 0};
    CHECK(bruhat_rij(s, 1, 1) == 0);
    CHECK(bruhat_rij(s, 1, 2) == 1);
    CHECK(bruhat_rij(s, 2, 1) == 1);
    CHECK(bruhat_rij(s, 2, 2) == 2);
    CHECK_THROWS_AS(bruhat_rij(s, 3, 1), std::out_of_range);
    // It is the rank of the bottom-left corners of the permutation matrix.
    for (int n = 2; n <= 4; ++n)
        for (const auto& p : all_permutations(n)) {
            QMatrix m = permutation_matrix(QQ, p);
            for (int i = 1; i < n; ++i)
                for (int j = 1; j < n; ++j) {
                    std::vector<std::size_t> rows, cols;
                    for (int r = n - i; r < n; ++r) rows.push_back(static_cast<std::size_t>(r));
                    QMatrix corner = m.select_rows(rows);
                    QMatrix left(QQ, corner.rows(), static_cast<std::size_t>(j));
                    for (std::size_t r = 0; r < corner.rows(); ++r)
                        for (int c = 0; c < j; ++c) left(r, static_cast<std::size_t>(c)) = corner(r, static_cast<std::size_t>(c));
                    CHECK(bruhat_rij(p, i, j) == static_cast<int>(rank(left)));
                }
        }
}

TEST_CASE("Bruhat order from rank vectors matches the subword criterion") {
    for (int n = 2; n <= 4; ++n) {
        auto perms = all_permutations(n);
        std::map<std::vector<int>, Permutation> seen;
        for (const auto& p : perms) seen[bruhat_vector(p)] = p;
        CHECK(seen.size() == perms.size());
        for (const auto& tau : perms) {
            auto below = bruhat_below(tau);
            for (const auto& sigma : perms) {
                Signature a{bruhat_vector(sigma)}, b{bruhat_vector(tau)};
                CHECK(dominates(a, b) == (below.count(sigma) == 1));
            }
        }
    }
}
