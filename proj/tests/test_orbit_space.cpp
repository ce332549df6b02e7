#include "support.hpp"

#include "flagorb/orbit_space.hpp"

#include <doctest.h>

#include <map>

using namespace testing;

namespace {

struct Node {
    std::string name;
    int dim;
    std::vector<std::vector<long>> rows;
};

// Index of the catalog entry holding the orbit of f, checked through the
// normal form and the signature.
std::size_t locate(const OrbitCatalog& cat, const QFlag& f) {
    NormalForm nf = reduce(f, cat.nn);
    std::size_t i = cat.find(nf.text);
    REQUIRE(i != OrbitCatalog::npos);
    CHECK(cat.entries[i].sig == signature(f, cat.fam));
    return i;
}

void check_diagram(const Composition& nn, const Composition& mm, const std::vector<Node>& nodes,
                   const std::vector<std::pair<std::string, std::string>>& edges) {
    auto cat = enumerate(nn, mm);
    REQUIRE(cat.entries.size() == nodes.size());
    std::map<std::string, std::size_t> at;
    std::set<std::size_t> hit;
    for (const auto& nd : nodes) {
        CAPTURE(nd.name);
        QMatrix basis = QMatrix::from_rows(QQ, nd.rows);
        QMatrix cols(QQ, basis.rows(), static_cast<std::size_t>(mm.prefix(mm.length() - 1)));
        for (std::size_t r = 0; r < cols.rows(); ++r)
            for (std::size_t c = 0; c < cols.cols(); ++c) cols(r, c) = basis(r, c);
        QFlag f = canonicalize(mm, cols);
        std::size_t i = locate(cat, f);
        at[nd.name] = i;
        hit.insert(i);
        CHECK(cat.entries[i].dim == nd.dim);
        CHECK(orbit_dimension(f, nn) == nd.dim);
    }
    CHECK(hit.size() == nodes.size());
    std::set<std::pair<std::size_t, std::size_t>> want, got(cat.covers.begin(), cat.covers.end());
    for (const auto& [a, b] : edges) {
        std::size_t x = at.at(a), y = at.at(b);
        want.insert(cat.entries[x].dim < cat.entries[y].dim ? std::pair{x, y} : std::pair{y, x});
    }
    CHECK(got == want);
    CHECK(hasse_candidate(cat).issues.empty());
}

}  // namespace

TEST_CASE("reference diagram for nn=(2,1), m=(1,1,1)") {
    std::vector<Node> nodes = {
        {"X1", 0, {{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}}, {"X2", 0, {{1, 0, 0}, {0, 0, 1}, {0, 1, 0}}},
        {"X3", 0, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}, {"Y1", 1, {{0, 0, 1}, {0, 1, 0}, {1, 0, 0}}},
        {"Y2", 1, {{1, 1, 0}, {0, 0, 1}, {1, 0, 0}}}, {"Y3", 1, {{0, 0, 1}, {1, 0, 0}, {0, 1, 0}}},
        {"Y4", 1, {{1, 0, 0}, {0, 1, 1}, {0, 1, 0}}}, {"Y5", 1, {{0, 1, 0}, {1, 0, 0}, {0, 0, 1}}},
        {"Z1", 2, {{0, 0, 1}, {1, 1, 0}, {1, 0, 0}}}, {"Z2", 2, {{1, 0, 1}, {0, 1, 0}, {1, 0, 0}}},
        {"Z3", 2, {{0, 1, 0}, {1, 0, 1}, {1, 0, 0}}}, {"Z4", 2, {{0, 1, 1}, {1, 0, 0}, {0, 1, 0}}},
        {"T", 3, {{1, 0, 1}, {1, 1, 0}, {1, 0, 0}}},
    };
    std::vector<std::pair<std::string, std::string>> edges = {
        {"X1", "Y1"}, {"X1", "Y2"}, {"X2", "Y2"}, {"X2", "Y3"}, {"X2", "Y4"}, {"X3", "Y4"},
        {"X3", "Y5"}, {"Y1", "Z1"}, {"Y1", "Z2"}, {"Y2", "Z1"}, {"Y2", "Z2"}, {"Y2", "Z3"},
        {"Y3", "Z1"}, {"Y3", "Z4"}, {"Y4", "Z2"}, {"Y4", "Z3"}, {"Y4", "Z4"}, {"Y5", "Z3"},
        {"Y5", "Z4"}, {"Z1", "T"},  {"Z2", "T"},  {"Z3", "T"},  {"Z4", "T"},
    };
    CHECK(edges.size() == 23);
    check_diagram(Composition{2, 1}, Composition{1, 1, 1}, nodes, edges);
}

TEST_CASE("reference diagram for nn=(2,2), m=(1,3)") {
    // Lines: one column each.
    std::vector<Node> nodes = {
        {"E1", 0, {{0}, {0}, {1}, {0}}},   {"F1", 0, {{1}, {0}, {0}, {0}}},   {"E2", 1, {{0}, {0}, {0}, {1}}},
        {"F2", 1, {{0}, {1}, {0}, {0}}},   {"EF11", 1, {{1}, {0}, {1}, {0}}}, {"EF12", 2, {{0}, {1}, {1}, {0}}},
        {"EF21", 2, {{1}, {0}, {0}, {1}}}, {"EF22", 3, {{0}, {1}, {0}, {1}}},
    };
    std::vector<std::pair<std::string, std::string>> edges = {
        {"F1", "F2"},     {"F1", "EF11"},   {"E1", "E2"},     {"E1", "EF11"},   {"F2", "EF12"},
        {"E2", "EF21"},   {"EF11", "EF12"}, {"EF11", "EF21"}, {"EF12", "EF22"}, {"EF21", "EF22"},
    };
    check_diagram(Composition{2, 2}, Composition{1, 3}, nodes, edges);
}

TEST_CASE("orbit count formula for nn=(n-1,1)") {
    CHECK(count_multiplicity_free(3, Composition{1, 1, 1}) == 13);
    for (int n = 2; n <= 6; ++n)
        for (const auto& mm : all_compositions(n)) {
            if (mm.length() < 2) continue;
            CAPTURE(mm.to_string());
            auto cat = enumerate(Composition{n - 1, 1}, mm);
            CHECK(count_multiplicity_free(n, mm) == cat.entries.size());
        }
}

TEST_CASE("catalog text and DOT output") {
    auto cat = enumerate(Composition{2, 2}, Composition{1, 3});
    std::string text = catalog_text(cat);
    CHECK(text.rfind("catalog case=0 nn=2,2 mm=1,3 count=8\n", 0) == 0);
    CHECK(text.find("\tdim=3\tclosed=0\n") != std::string::npos);
    std::size_t covers = 0;
    for (std::size_t p = text.find("\ncover "); p != std::string::npos; p = text.find("\ncover ", p + 1)) ++covers;
    CHECK(covers == 10);
    auto h = hasse_candidate(cat);
    std::string dot = emit_dot(h, cat, "note here");
    CHECK(dot.find("// note here\n") != std::string::npos);
    CHECK(dot.find("digraph orbits {") != std::string::npos);
    std::size_t arrows = 0;
    for (std::size_t p = dot.find(" -> "); p != std::string::npos; p = dot.find(" -> ", p + 1)) ++arrows;
    CHECK(arrows == 10);
    // Signature hashes are 16 hex digits and differ across the catalog.
    std::set<std::string> hashes;
    for (const auto& e : cat.entries) {
        std::string hs = signature_hash(e.sig, cat.fam);
        CHECK(hs.size() == 16);
        CHECK(hs.find_first_not_of("0123456789abcdef") == std::string::npos);
        hashes.insert(hs);
    }
    CHECK(hashes.size() == cat.entries.size());
}

TEST_CASE("catalog entries are consistent") {
    for (const auto& [nn, mm] : sample_injective_pairs()) {
        auto cat = enumerate(nn, mm);
        std::set<Signature> sigs;
        for (const auto& e : cat.entries) {
            sigs.insert(e.sig);
            CHECK(e.sig == signature(e.flag, cat.fam));
            CHECK(e.dim == orbit_dimension(e.flag, nn));
            CHECK(e.closed == (e.dim == 0));
            CHECK(reduce(e.flag, nn) == e.nf);
        }
        CHECK(sigs.size() == cat.entries.size());
        // Covers respect dominance and raise the dimension.
        for (auto [a, b] : cat.covers) {
            CHECK(dominates(cat.entries[a].sig, cat.entries[b].sig));
            CHECK(cat.entries[a].dim < cat.entries[b].dim);
        }
    }
    CHECK_THROWS_AS(enumerate(Composition{3, 2}, Composition{1, 2, 2}), NonInjective);
    CHECK_THROWS_AS(enumerate(Composition{3, 3}, Composition{2, 2, 2}), InfinitePair);
}

TEST_CASE("orbit dimension of the open and closed orbits") {
    // A flag with large random entries lies in the open orbit.
    for (const auto& [nn, mm] : sample_injective_pairs()) {
        auto cat = enumerate(nn, mm);
        int top = 0;
        for (const auto& e : cat.entries) top = std::max(top, e.dim);
        CHECK(orbit_dimension(random_flag(mm, 1000), nn) == top);
        int bdim = 0;
        for (std::size_t b = 0; b < nn.length(); ++b) bdim += nn[b] * (nn[b] + 1) / 2;
        CHECK(top <= bdim);
    }
}
