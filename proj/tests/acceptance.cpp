// One line per acceptance criterion; exit status 1 when any fails.
#include "support.hpp"

#include "flagorb/oracle.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

using namespace testing;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Accumulates failures; the first few go into the detail.
struct Tally {
    std::size_t checks = 0, failures = 0;
    std::ostringstream first;

    void expect(bool ok, const std::string& what) {
        ++checks;
        if (ok) return;
        if (failures < 3) first << (failures ? "; " : "") << what;
        ++failures;
    }
    Outcome outcome(const std::string& summary) const {
        if (failures == 0) return {true, summary};
        return {false, std::to_string(failures) + "/" + std::to_string(checks) + " failed: " + first.str()};
    }
};

std::string pair_name(const Composition& nn, const Composition& mm) {
    return "nn=" + nn.to_string() + " mm=" + mm.to_string();
}

using Rows = std::vector<std::vector<long>>;

Outcome diagram(const Composition& nn, const Composition& mm, const std::vector<std::pair<std::string, Rows>>& nodes,
                const std::map<int, int>& dims, const std::vector<std::pair<std::string, std::string>>& edges) {
    Tally t;
    auto cat = enumerate(nn, mm);
    t.expect(cat.entries.size() == nodes.size(), "orbit count " + std::to_string(cat.entries.size()));
    std::map<int, int> got_dims;
    for (const auto& e : cat.entries) ++got_dims[e.dim];
    t.expect(got_dims == dims, "dimension multiset");
    std::map<std::string, std::size_t> at;
    const int d = mm.prefix(mm.length() - 1);
    for (const auto& [name, rows] : nodes) {
        QMatrix b = QMatrix::from_rows(QQ, rows), cols(QQ, b.rows(), static_cast<std::size_t>(d));
        for (std::size_t r = 0; r < b.rows(); ++r)
            for (int c = 0; c < d; ++c) cols(r, static_cast<std::size_t>(c)) = b(r, static_cast<std::size_t>(c));
        std::size_t i = cat.find(reduce(canonicalize(mm, cols), nn).text);
        t.expect(i != OrbitCatalog::npos, name + " not in catalog");
        at[name] = i;
    }
    std::set<std::size_t> distinct;
    for (const auto& [n, i] : at) distinct.insert(i);
    t.expect(distinct.size() == nodes.size(), "nodes not matched one to one");
    if (t.failures) return t.outcome("");
    auto h = hasse_candidate(cat);
    std::set<std::pair<std::size_t, std::size_t>> want, got(h.edges.begin(), h.edges.end());
    for (const auto& [a, b] : edges) {
        std::size_t x = at[a], y = at[b];
        want.insert(cat.entries[x].dim < cat.entries[y].dim ? std::pair{x, y} : std::pair{y, x});
    }
    t.expect(got == want, std::to_string(got.size()) + " edges, not the reference edge set");
    return t.outcome(std::to_string(cat.entries.size()) + " orbits, " + std::to_string(got.size()) + " edges match");
}

Outcome criterion1() {
    std::vector<std::pair<std::string, Rows>> nodes = {
        {"X1", {{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}}, {"X2", {{1, 0, 0}, {0, 0, 1}, {0, 1, 0}}},
        {"X3", {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}, {"Y1", {{0, 0, 1}, {0, 1, 0}, {1, 0, 0}}},
        {"Y2", {{1, 1, 0}, {0, 0, 1}, {1, 0, 0}}}, {"Y3", {{0, 0, 1}, {1, 0, 0}, {0, 1, 0}}},
        {"Y4", {{1, 0, 0}, {0, 1, 1}, {0, 1, 0}}}, {"Y5", {{0, 1, 0}, {1, 0, 0}, {0, 0, 1}}},
        {"Z1", {{0, 0, 1}, {1, 1, 0}, {1, 0, 0}}}, {"Z2", {{1, 0, 1}, {0, 1, 0}, {1, 0, 0}}},
        {"Z3", {{0, 1, 0}, {1, 0, 1}, {1, 0, 0}}}, {"Z4", {{0, 1, 1}, {1, 0, 0}, {0, 1, 0}}},
        {"T", {{1, 0, 1}, {1, 1, 0}, {1, 0, 0}}},
    };
    std::vector<std::pair<std::string, std::string>> edges = {
        {"X1", "Y1"}, {"X1", "Y2"}, {"X2", "Y2"}, {"X2", "Y3"}, {"X2", "Y4"}, {"X3", "Y4"},
        {"X3", "Y5"}, {"Y1", "Z1"}, {"Y1", "Z2"}, {"Y2", "Z1"}, {"Y2", "Z2"}, {"Y2", "Z3"},
        {"Y3", "Z1"}, {"Y3", "Z4"}, {"Y4", "Z2"}, {"Y4", "Z3"}, {"Y4", "Z4"}, {"Y5", "Z3"},
        {"Y5", "Z4"}, {"Z1", "T"},  {"Z2", "T"},  {"Z3", "T"},  {"Z4", "T"},
    };
    return diagram(Composition{2, 1}, Composition{1, 1, 1}, nodes, {{0, 3}, {1, 5}, {2, 4}, {3, 1}}, edges);
}

Outcome criterion2() {
    std::vector<std::pair<std::string, Rows>> nodes = {
        {"E1", {{0}, {0}, {1}, {0}}},   {"F1", {{1}, {0}, {0}, {0}}},   {"E2", {{0}, {0}, {0}, {1}}},
        {"F2", {{0}, {1}, {0}, {0}}},   {"EF11", {{1}, {0}, {1}, {0}}}, {"EF12", {{0}, {1}, {1}, {0}}},
        {"EF21", {{1}, {0}, {0}, {1}}}, {"EF22", {{0}, {1}, {0}, {1}}},
    };
    std::vector<std::pair<std::string, std::string>> edges = {
        {"F1", "F2"},     {"F1", "EF11"},   {"E1", "E2"},     {"E1", "EF11"},   {"F2", "EF12"},
        {"E2", "EF21"},   {"EF11", "EF12"}, {"EF11", "EF21"}, {"EF12", "EF22"}, {"EF21", "EF22"},
    };
    return diagram(Composition{2, 2}, Composition{1, 3}, nodes, {{0, 2}, {1, 3}, {2, 2}, {3, 1}}, edges);
}

Outcome criterion3() {
    Tally t;
    std::size_t pairs = 0;
    for (int n = 2; n <= 6; ++n)
        for (const auto& mm : all_compositions(n)) {
            if (mm.length() < 2) continue;
            Composition nn{n - 1, 1};
            mpz_class c = count_multiplicity_free(n, mm);
            auto cat = enumerate(nn, mm);
            t.expect(c == cat.entries.size(), "catalog " + pair_name(nn, mm));
            if (n <= 5) {
                auto part = orbit_partition(enumerate_flags(n, mm, 2), group_generators(nn, 2));
                t.expect(c == part.classes.size(), "GF(2) " + pair_name(nn, mm));
            }
            ++pairs;
        }
    return t.outcome(std::to_string(pairs) + " types, formula = catalog, formula = GF(2) classes for n<=5");
}

// Every pair with n <= 5 that some row of the table covers injectively.
std::vector<std::pair<Composition, Composition>> injective_pairs(int max_n) {
    std::vector<std::pair<Composition, Composition>> out;
    for (int n = 2; n <= max_n; ++n)
        for (const auto& nn : all_compositions(n))
            for (const auto& mm : all_compositions(n)) {
                if (mm.length() < 2) continue;
                auto tag = classify_pair(nn, mm);
                if (tag && tag->injective) out.emplace_back(nn, mm);
            }
    return out;
}

Outcome criterion4() {
    Tally t;
    auto pairs = injective_pairs(5);
    std::size_t runs = 0;
    for (std::uint32_t q : {2u, 3u})
        for (const auto& [nn, mm] : pairs) {
            auto rep = run_oracle(nn, mm, q);
            t.expect(rep.ok() && rep.classes == rep.catalog, pair_name(nn, mm) + " q=" + std::to_string(q));
            ++runs;
        }
    return t.outcome(std::to_string(pairs.size()) + " pairs x q in {2,3}: " + std::to_string(runs) + " oracle runs agree");
}

Outcome criterion5() {
    Tally t;
    std::vector<WitnessPair> ws = {reference_witness_Iprime(), reference_witness_Iprime_dual(), reference_witness_IIprime(),
                                   counterexample_pair(Composition{2, 2}, Composition{1, 2, 1})};
    for (const auto& w : ws) {
        auto fam = invariant_family(w.nn, w.mm);
        t.expect(signature(w.d1, fam) == signature(w.d2, fam), pair_name(w.nn, w.mm) + " signatures differ");
        t.expect(!same_orbit_mod(w.nn, w.d1, w.d2, 2), pair_name(w.nn, w.mm) + " same GF(2) class");
    }
    return t.outcome("I', I'-dual, II' and nn=2,2 mm=1,2,1: equal signatures, distinct GF(2) classes");
}

Outcome criterion6() {
    Tally t;
    for (int n = 2; n <= 4; ++n) {
        auto perms = all_permutations(n);
        std::set<std::vector<int>> vecs;
        for (const auto& p : perms) vecs.insert(bruhat_vector(p));
        t.expect(vecs.size() == perms.size(), "r not injective on S_" + std::to_string(n));
        for (const auto& tau : perms) {
            auto below = bruhat_below(tau);
            for (const auto& sigma : perms)
                t.expect(dominates(Signature{bruhat_vector(sigma)}, Signature{bruhat_vector(tau)}) == (below.count(sigma) == 1),
                         "order mismatch in S_" + std::to_string(n));
        }
    }
    return t.outcome("S_2..S_4: r injective, componentwise order = subword Bruhat order");
}

Outcome criterion7() {
    Tally t;
    for (int n = 2; n <= 4; ++n)
        for (int d = 1; d < n; ++d) {
            auto bad = check_rank_lemma(n, d, 2);
            t.expect(bad.empty(), "n=" + std::to_string(n) + " d=" + std::to_string(d) + " J=" + (bad.empty() ? "" : format_J(bad.front())));
        }
    return t.outcome("n<=4, every d and J: P_J orbits = rank_J level sets over GF(2)");
}

Outcome criterion8() {
    Tally t;
    std::size_t forms = 0;
    for (const auto& [nn, mm] : injective_pairs(5))
        for (const auto& nf : enumerate_normal_forms(nn, mm)) {
            QFlag f = realize(nf);
            bool zero = orbit_dimension(f, nn) == 0;
            t.expect(is_closed(nf) == zero && is_bprime_fixed(f, nn) == zero, pair_name(nn, mm) + " " + nf.text);
            ++forms;
        }
    return t.outcome(std::to_string(forms) + " normal forms: closed <=> dim 0 <=> B'-fixed");
}

Outcome criterion9() {
    Tally t;
    // One pair per row of the table, plus a few larger ones.
    std::map<std::string, std::pair<Composition, Composition>> per_case;
    for (const auto& [nn, mm] : injective_pairs(5)) per_case.emplace(classify_pair(nn, mm)->describe(), std::pair{nn, mm});
    for (const auto& [nn, mm] : sample_injective_pairs()) per_case.emplace(classify_pair(nn, mm)->describe() + " " + pair_name(nn, mm), std::pair{nn, mm});
    std::size_t perturb = 0, invariance = 0, roundtrip = 0;
    for (const auto& [name, p] : per_case) {
        const auto& [nn, mm] = p;
        auto fam = invariant_family(nn, mm);
        // Soundness: perturbing by (b', p) keeps the normal form; reducing twice is reducing once.
        for (int i = 0; i < 1000; ++i) {
            QFlag f = i % 2 ? random_flag(mm) : random_sparse_flag(mm);
            NormalForm nf = reduce(f, nn);
            QFlag g = canonicalize(mm, random_bprime(nn) * f.rep * random_parabolic_block(mm));
            t.expect(reduce(g, nn) == nf, name + " perturbation");
            t.expect(reduce(realize(nf), nn) == nf, name + " idempotence");
            ++perturb;
        }
        // B'-invariance of each rank, 100 draws per (J, s).
        for (std::size_t e = 0; e < fam.size(); ++e)
            for (int i = 0; i < 100; ++i) {
                QFlag f = i % 2 ? random_flag(mm) : random_sparse_flag(mm);
                t.expect(rank_Js(act(random_bprime(nn), f), fam[e].J, fam[e].s) == rank_Js(f, fam[e].J, fam[e].s),
                         name + " J=" + format_J(fam[e].J));
                ++invariance;
            }
        // Signature then normal form gives back every catalog entry.
        auto cat = enumerate(nn, mm);
        for (const auto& e : cat.entries) {
            Signature s = signature(realize(e.nf), fam);
            if (e.nf.c0) t.expect(decode_signature_case0(s, nn, mm) == e.nf, name + " decode");
            std::size_t hits = 0;
            for (const auto& o : cat.entries) hits += o.sig == s;
            t.expect(hits == 1 && reduce(realize(e.nf), nn) == e.nf, name + " round trip");
            ++roundtrip;
        }
    }
    return t.outcome(std::to_string(per_case.size()) + " pairs: " + std::to_string(perturb) + " perturbations, " +
                     std::to_string(invariance) + " invariance draws, " + std::to_string(roundtrip) + " round trips");
}

}  // namespace

int main() {
    std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"reference diagram nn=2,1 mm=1,1,1", criterion1},
        {"reference diagram nn=2,2 mm=1,3", criterion2},
        {"orbit count formula", criterion3},
        {"oracle concordance", criterion4},
        {"non-injectivity witnesses", criterion5},
        {"Bruhat baseline", criterion6},
        {"P_J orbits and rank_J", criterion7},
        {"closed orbits", criterion8},
        {"property suites", criterion9},
    };
    bool all = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::ostringstream line;
        line.setf(std::ios::fixed);
        line.precision(2);
        line << "criterion " << i + 1 << " " << (o.pass ? "PASS" : "FAIL") << " " << criteria[i].first << ": " << o.detail
             << " (" << secs << " s)";
        std::cout << line.str() << std::endl;
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
