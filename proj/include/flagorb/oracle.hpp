#pragma once

#include "flagorb/orbit_space.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace flagorb {

constexpr std::size_t kDefaultBudget = 1'000'000;

struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Every flag of type mm in GF(q)^n, each as its canonical representative,
// listed cell by cell (pivot rows, then free entries).
std::vector<FpFlag> enumerate_flags(int n, const Composition& mm, std::uint32_t q,
                                    std::size_t budget = kDefaultBudget);

// Number of points of the flag variety: [n]_q! / prod [m_i]_q!.
mpz_class gaussian_flag_count(int n, const Composition& mm, std::uint32_t q);

// Torus generators (a primitive root at one diagonal position, only when
// q > 2) and I + E_ij for i < j in one block.
std::vector<FpMatrix> group_generators(const Composition& nn, std::uint32_t q);

// Generators of P_J = {a_ij = 0 for i in J, j not in J}.
std::vector<FpMatrix> parabolic_generators(int n, const std::vector<int>& J, std::uint32_t q);

// prod over blocks of (q-1)^{n_i} q^{n_i(n_i-1)/2}.
mpz_class bprime_order(const Composition& nn, std::uint32_t q);

// Order of the group generated by gens, by closure; throws past `budget`.
std::size_t generated_order(const std::vector<FpMatrix>& gens, std::size_t budget = kDefaultBudget);

std::string flag_key(const FpFlag& f);

struct OrbitPartition {
    std::uint32_t q = 2;
    std::vector<FpFlag> flags;
    std::vector<std::size_t> class_of;              // per flag
    std::vector<std::vector<std::size_t>> classes;  // flag indices, in discovery order
    std::unordered_map<std::string, std::size_t> index;

    // Position of f in flags.
    std::optional<std::size_t> find(const FpFlag& f) const;
};

OrbitPartition orbit_partition(std::vector<FpFlag> flags, const std::vector<FpMatrix>& gens);

// True when d2 lies in the GF(q) B'-orbit of d1 (both reduced mod q).
bool same_orbit_mod(const Composition& nn, const QFlag& d1, const QFlag& d2, std::uint32_t q,
                    std::size_t budget = kDefaultBudget);

struct CheckResult {
    std::string name;
    bool pass = true;
    std::string detail;
    bool expected = false;  // a failure the theory predicts; ok() ignores it
};

struct ValidationReport {
    Composition nn, mm;
    std::uint32_t q = 2;
    std::size_t flags = 0, classes = 0, catalog = 0;
    std::vector<CheckResult> checks;

    bool ok() const;
    std::string to_string() const;
};

struct ValidateOptions {
    bool intersections = false;      // check (e)
    bool all_signatures = true;      // (c) on every flag rather than one per class
    bool expect_collisions = false;  // non-injective pair: (c) is meant to fail
    bool strict = false;             // run_oracle: never mark collisions as expected
};

// Checks (a)-(c) against the catalog when given, (d) on the witness when
// given, (e) when requested.
ValidationReport cross_validate(const Composition& nn, const OrbitPartition& part, const OrbitCatalog* cat,
                                const WitnessPair* witness, const ValidateOptions& opt = {});

// Convenience: enumerate, partition and validate one pair.
ValidationReport run_oracle(const Composition& nn, const Composition& mm, std::uint32_t q,
                            const ValidateOptions& opt = {}, std::size_t budget = kDefaultBudget);

// Two GF(q) classes whose lifted representatives share the rational
// signature; the lifts are 0..q-1 matrices.
std::optional<WitnessPair> search_witness(const Composition& nn, const Composition& mm, std::uint32_t q,
                                          std::size_t budget = kDefaultBudget);

// counterexample_pair, falling back to search_witness over GF(2).
WitnessPair find_witness(const Composition& nn, const Composition& mm);

// P_J-orbits of the Grassmannian of d-planes against the level sets of
// rank_J, for every nonempty proper J. Returns the mismatching J's.
std::vector<std::vector<int>> check_rank_lemma(int n, int d, std::uint32_t q);

}  // namespace flagorb
