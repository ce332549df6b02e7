#include "flagorb/orbit_space.hpp"

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>

namespace flagorb {

namespace {

const Rational QQ{};

std::vector<int> blocks_of(const Composition& c) {
    std::vector<int> b;
    for (std::size_t i = 0; i < c.length(); ++i)
        for (int t = 0; t < c[i]; ++t) b.push_back(static_cast<int>(i));
    return b;
}

mpz_class factorial(int k) {
    mpz_class r = 1;
    for (int i = 2; i <= k; ++i) r *= i;
    return r;
}

}  // namespace

std::size_t OrbitCatalog::find(const std::string& text) const {
    for (std::size_t i = 0; i < entries.size(); ++i)
        if (entries[i].nf.text == text) return i;
    return npos;
}

int orbit_dimension(const QFlag& f, const Composition& nn) {
    if (nn.n() != static_cast<int>(f.n())) throw std::invalid_argument("orbit_dimension: size mismatch");
    QMatrix g = complete_to_invertible(f.rep);
    QMatrix gi = *inverse(g);
    const std::size_t n = f.n();
    auto nb = blocks_of(nn), mb = blocks_of(f.type);
    std::vector<std::pair<std::size_t, std::size_t>> below;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (mb[a] > mb[b]) below.emplace_back(a, b);
    std::vector<std::pair<std::size_t, std::size_t>> basis;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            if (nb[i] == nb[j]) basis.emplace_back(i, j);
    // g^{-1} E_ij g has entry (a, b) = gi(a, i) g(j, b).
    QMatrix m(QQ, basis.size(), below.size());
    for (std::size_t r = 0; r < basis.size(); ++r)
        for (std::size_t c = 0; c < below.size(); ++c)
            m(r, c) = gi(below[c].first, basis[r].first) * g(basis[r].second, below[c].second);
    return static_cast<int>(rank(m));
}

bool is_closed(const NormalForm& nf) { return closed_criterion(nf); }

bool is_bprime_fixed(const QFlag& f, const Composition& nn) {
    const std::size_t n = f.n();
    auto nb = blocks_of(nn);
    for (std::size_t i = 0; i < n; ++i) {
        QMatrix t = QMatrix::identity(QQ, n);
        t(i, i) = 2;
        if (act(t, f) != f) return false;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (nb[i] != nb[j]) continue;
            QMatrix u = QMatrix::identity(QQ, n);
            u(i, j) = 1;
            if (act(u, f) != f) return false;
        }
    }
    return true;
}

mpz_class count_multiplicity_free(int n, const Composition& mm) {
    if (mm.n() != n) throw std::invalid_argument("count: composition does not sum to n");
    const std::size_t l = mm.length();
    mpz_class multi = factorial(n);
    for (int m : mm.parts) multi /= factorial(m);
    // Elementary symmetric functions by the usual recurrence.
    std::vector<mpz_class> e(l + 1, 0);
    e[0] = 1;
    for (int m : mm.parts)
        for (std::size_t k = l; k >= 1; --k) e[k] += e[k - 1] * m;
    mpq_class sum = 0;
    for (std::size_t k = 1; k <= l; ++k) sum += mpq_class(e[k], factorial(static_cast<int>(k) - 1));
    mpq_class total = mpq_class(multi, n) * sum;
    total.canonicalize();
    if (total.get_den() != 1) throw std::logic_error("count: non-integer result " + total.get_str());
    return total.get_num();
}

OrbitCatalog enumerate(const Composition& nn, const Composition& mm) {
    static std::mutex mu;
    static std::map<std::pair<Composition, Composition>, OrbitCatalog> memo;
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = memo.find({nn, mm});
        if (it != memo.end()) return it->second;
    }
    auto tag = classify_pair(nn, mm);
    if (!tag) throw InfinitePair("no row of the table matches nn=" + nn.to_string() + " mm=" + mm.to_string());
    if (!tag->injective) {
        std::shared_ptr<const WitnessPair> w;
        try {
            w = std::make_shared<WitnessPair>(counterexample_pair(nn, mm));
        } catch (const std::exception&) {
        }
        throw NonInjective(*tag, "case " + tag->describe() + ": refusing to enumerate", w);
    }
    OrbitCatalog cat;
    cat.tag = *tag;
    cat.nn = nn;
    cat.mm = mm;
    cat.fam = invariant_family(nn, mm);
    for (auto& nf : enumerate_normal_forms(nn, mm)) {
        CatalogEntry e;
        e.flag = realize(nf);
        e.sig = signature(e.flag, cat.fam);
        e.dim = orbit_dimension(e.flag, nn);
        e.closed = is_closed(nf);
        e.nf = std::move(nf);
        cat.entries.push_back(std::move(e));
    }
    cat.covers = hasse_candidate(cat).edges;
    std::lock_guard<std::mutex> lk(mu);
    memo.emplace(std::make_pair(nn, mm), cat);
    return cat;
}

OrbitCatalog enumerate(const CaseTag& tag, const Composition& nn, const Composition& mm) {
    auto t = classify_pair(nn, mm);
    if (!t) throw InfinitePair("no row of the table matches nn=" + nn.to_string() + " mm=" + mm.to_string());
    if (!(*t == tag)) throw std::invalid_argument("pair is classified as " + t->describe() + ", not " + tag.describe());
    return enumerate(nn, mm);
}

HasseDiagram hasse_candidate(const OrbitCatalog& cat) {
    const std::size_t N = cat.entries.size();
    HasseDiagram h;
    for (std::size_t i = 0; i < N; ++i) h.nodes.push_back(i);
    std::vector<std::vector<char>> lt(N, std::vector<char>(N, 0));
    for (std::size_t a = 0; a < N; ++a)
        for (std::size_t b = 0; b < N; ++b)
            lt[a][b] = a != b && dominates(cat.entries[a].sig, cat.entries[b].sig);
    for (std::size_t a = 0; a < N; ++a)
        for (std::size_t b = 0; b < N; ++b) {
            if (!lt[a][b]) continue;
            if (lt[b][a]) {
                h.issues.push_back("equal signatures: " + cat.entries[a].nf.text + " and " + cat.entries[b].nf.text);
                continue;
            }
            bool cover = true;
            for (std::size_t c = 0; c < N && cover; ++c)
                if (lt[a][c] && lt[c][b]) cover = false;
            if (!cover) continue;
            h.edges.emplace_back(a, b);
            if (cat.entries[a].dim >= cat.entries[b].dim)
                h.issues.push_back("cover without dimension increase: " + cat.entries[a].nf.text + " -> " +
                                   cat.entries[b].nf.text);
        }
    return h;
}

std::string emit_dot(const HasseDiagram& h, const OrbitCatalog& cat, const std::string& note) {
    std::ostringstream os;
    os << "// candidate closure order: signature dominance, transitive reduction\n";
    if (!note.empty()) os << "// " << note << "\n";
    os << "digraph orbits {\n";
    os << "  rankdir=BT;\n  node [shape=box, fontname=\"monospace\"];\n";
    std::map<int, std::vector<std::size_t>> by_dim;
    for (std::size_t i : h.nodes) by_dim[cat.entries[i].dim].push_back(i);
    for (const auto& [d, ids] : by_dim) {
        os << "  subgraph dim" << d << " {\n    rank=same;\n";
        for (std::size_t i : ids)
            os << "    n" << i << " [label=\"" << cat.entries[i].nf.text << "\\ndim=" << d << "\"];\n";
        os << "  }\n";
    }
    for (auto [a, b] : h.edges) os << "  n" << a << " -> n" << b << ";\n";
    os << "}\n";
    return os.str();
}

std::string signature_hash(const Signature& sig, const JFamily& fam) {
    std::uint64_t hsh = 1469598103934665603ull;
    for (unsigned char c : serialize_signature(sig, fam)) {
        hsh ^= c;
        hsh *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << hsh;
    return os.str();
}

std::string catalog_text(const OrbitCatalog& cat) {
    std::ostringstream os;
    os << "catalog case=" << cat.tag.describe() << " nn=" << cat.nn.to_string() << " mm=" << cat.mm.to_string()
       << " count=" << cat.entries.size() << "\n";
    for (std::size_t i = 0; i < cat.entries.size(); ++i) {
        const auto& e = cat.entries[i];
        os << i << "\t" << e.nf.text << "\tsig=" << signature_hash(e.sig, cat.fam) << "\tdim=" << e.dim
           << "\tclosed=" << (e.closed ? 1 : 0) << "\n";
    }
    for (auto [a, b] : cat.covers) os << "cover " << a << " " << b << "\n";
    return os.str();
}

}  // namespace flagorb
