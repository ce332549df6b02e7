#include "flagorb/oracle.hpp"

#include "flagorb/io.hpp"

#include <deque>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace flagorb {

namespace {

mpz_class q_factorial(int k, std::uint32_t q) {
    mpz_class r = 1, qi = 1;
    for (int i = 1; i <= k; ++i) {
        qi *= q;
        r *= (qi - 1) / (q - 1);
    }
    return r;
}

std::string matrix_key(const FpMatrix& m) {
    std::string s;
    s.reserve(m.data().size() * (m.field().p < 256 ? 1 : 4));
    for (auto v : m.data()) {
        if (m.field().p < 256) {
            s.push_back(static_cast<char>(v));
        } else {
            for (int b = 0; b < 4; ++b) s.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
        }
    }
    return s;
}

FpMatrix elementary(const PrimeField& K, int n, int i, int j) {
    FpMatrix g = FpMatrix::identity(K, n);
    g(i, j) = K.one();
    return g;
}

FpMatrix torus(const PrimeField& K, int n, int i) {
    FpMatrix g = FpMatrix::identity(K, n);
    g(i, i) = primitive_root(K.p);
    return g;
}

// Reduction of a rational flag mod p through primitive integer columns.
std::optional<FpFlag> reduce_flag(const QFlag& f, const PrimeField& K) {
    QMatrix m = f.rep;
    for (std::size_t c = 0; c < m.cols(); ++c) {
        mpz_class l = 1, g = 0;
        for (std::size_t i = 0; i < m.rows(); ++i) l = lcm(l, m(i, c).get_den());
        for (std::size_t i = 0; i < m.rows(); ++i) {
            m(i, c) *= l;
            g = gcd(g, m(i, c).get_num());
        }
        if (g != 0)
            for (std::size_t i = 0; i < m.rows(); ++i) m(i, c) /= g;
    }
    FpMatrix r = reduce_mod(m, K);
    for (std::size_t s = 1; s < f.type.length(); ++s)
        if (rank(r.left_cols(f.type.prefix(s))) != static_cast<std::size_t>(f.type.prefix(s))) return std::nullopt;
    return canonicalize(f.type, r);
}

std::string indent(const std::string& s) {
    std::istringstream in(s);
    std::ostringstream os;
    std::string line;
    while (std::getline(in, line)) os << "    " << line << "\n";
    return os.str();
}

}  // namespace

std::vector<FpFlag> enumerate_flags(int n, const Composition& mm, std::uint32_t q, std::size_t budget) {
    if (mm.n() != n) throw std::invalid_argument("enumerate_flags: composition does not sum to n");
    PrimeField K(q);
    mpz_class total = gaussian_flag_count(n, mm, q);
    if (total > budget)
        throw BudgetExceeded("enumerate_flags: " + total.get_str() + " flags exceed the budget of " +
                             std::to_string(budget));
    const std::size_t l = mm.length();
    const int d = mm.prefix(l - 1);
    std::vector<FpFlag> out;
    out.reserve(total.get_ui());
    std::vector<int> pivot(d, -1);
    std::vector<bool> used(n, false);
    std::function<void(std::size_t, int)> choose = [&](std::size_t b, int start_col) {
        if (b + 1 == l) {
            // Free entries: below the pivot, off the pivots of this and earlier blocks.
            std::vector<std::pair<int, int>> freepos;
            std::vector<bool> upto(n, false);
            for (std::size_t bb = 0, c = 0; bb + 1 < l; ++bb) {
                std::size_t e = mm.prefix(bb + 1);
                for (std::size_t t = c; t < e; ++t) upto[pivot[t]] = true;
                for (; c < e; ++c)
                    for (int r = pivot[c] + 1; r < n; ++r)
                        if (!upto[r]) freepos.emplace_back(r, static_cast<int>(c));
            }
            FpMatrix base(K, n, d);
            for (int c = 0; c < d; ++c) base(pivot[c], c) = 1;
            std::vector<std::uint32_t> digit(freepos.size(), 0);
            while (true) {
                FpMatrix m = base;
                for (std::size_t t = 0; t < freepos.size(); ++t) m(freepos[t].first, freepos[t].second) = digit[t];
                out.push_back(FpFlag{mm, std::move(m)});
                std::size_t t = 0;
                while (t < digit.size() && digit[t] == q - 1) digit[t++] = 0;
                if (t == digit.size()) break;
                ++digit[t];
            }
            return;
        }
        // Pivot rows of block b: an increasing subset of the unused rows.
        const int size = mm[b];
        std::function<void(int, int)> pick = [&](int k, int from) {
            if (k == size) {
                choose(b + 1, start_col + size);
                return;
            }
            for (int r = from; r < n; ++r) {
                if (used[r]) continue;
                used[r] = true;
                pivot[start_col + k] = r;
                pick(k + 1, r + 1);
                used[r] = false;
            }
        };
        pick(0, 0);
    };
    choose(0, 0);
    if (out.size() != total.get_ui()) throw std::logic_error("enumerate_flags: cell count disagrees with formula");
    return out;
}

mpz_class gaussian_flag_count(int n, const Composition& mm, std::uint32_t q) {
    mpz_class r = q_factorial(n, q);
    for (int m : mm.parts) r /= q_factorial(m, q);
    return r;
}

std::vector<FpMatrix> group_generators(const Composition& nn, std::uint32_t q) {
    PrimeField K(q);
    const int n = nn.n();
    std::vector<FpMatrix> gens;
    if (q > 2)
        for (int i = 0; i < n; ++i) gens.push_back(torus(K, n, i));
    for (std::size_t b = 0; b < nn.length(); ++b) {
        int s = nn.prefix(b), e = nn.prefix(b + 1);
        for (int i = s; i < e; ++i)
            for (int j = i + 1; j < e; ++j) gens.push_back(elementary(K, n, i, j));
    }
    return gens;
}

std::vector<FpMatrix> parabolic_generators(int n, const std::vector<int>& J, std::uint32_t q) {
    PrimeField K(q);
    std::vector<bool> in(n, false);
    for (int j : J) in[j] = true;
    std::vector<FpMatrix> gens;
    if (q > 2)
        for (int i = 0; i < n; ++i) gens.push_back(torus(K, n, i));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && !(in[i] && !in[j])) gens.push_back(elementary(K, n, i, j));
    return gens;
}

mpz_class bprime_order(const Composition& nn, std::uint32_t q) {
    mpz_class r = 1;
    for (int m : nn.parts) {
        mpz_class t;
        mpz_pow_ui(t.get_mpz_t(), mpz_class(q - 1).get_mpz_t(), m);
        r *= t;
        mpz_pow_ui(t.get_mpz_t(), mpz_class(q).get_mpz_t(), m * (m - 1) / 2);
        r *= t;
    }
    return r;
}

std::size_t generated_order(const std::vector<FpMatrix>& gens, std::size_t budget) {
    if (gens.empty()) return 1;
    FpMatrix id = FpMatrix::identity(gens[0].field(), gens[0].rows());
    std::set<std::string> seen{matrix_key(id)};
    std::deque<FpMatrix> todo{id};
    while (!todo.empty()) {
        FpMatrix x = std::move(todo.front());
        todo.pop_front();
        for (const auto& g : gens) {
            FpMatrix y = g * x;
            if (seen.insert(matrix_key(y)).second) {
                if (seen.size() > budget) throw BudgetExceeded("generated_order: budget exceeded");
                todo.push_back(std::move(y));
            }
        }
    }
    return seen.size();
}

std::string flag_key(const FpFlag& f) { return matrix_key(f.rep); }

std::optional<std::size_t> OrbitPartition::find(const FpFlag& f) const {
    auto it = index.find(flag_key(canonicalize(f)));
    if (it == index.end()) return std::nullopt;
    return it->second;
}

OrbitPartition orbit_partition(std::vector<FpFlag> flags, const std::vector<FpMatrix>& gens) {
    OrbitPartition p;
    if (!flags.empty()) p.q = flags[0].rep.field().p;
    p.flags = std::move(flags);
    const std::size_t N = p.flags.size();
    p.index.reserve(N * 2);
    for (std::size_t i = 0; i < N; ++i)
        if (!p.index.emplace(flag_key(p.flags[i]), i).second)
            throw std::invalid_argument("orbit_partition: repeated flag");
    const std::size_t none = static_cast<std::size_t>(-1);
    p.class_of.assign(N, none);
    for (std::size_t s = 0; s < N; ++s) {
        if (p.class_of[s] != none) continue;
        const std::size_t id = p.classes.size();
        p.classes.emplace_back();
        std::vector<std::size_t> todo{s};
        p.class_of[s] = id;
        while (!todo.empty()) {
            std::size_t x = todo.back();
            todo.pop_back();
            p.classes[id].push_back(x);
            for (const auto& g : gens) {
                auto it = p.index.find(flag_key(act(g, p.flags[x])));
                if (it == p.index.end()) throw std::logic_error("orbit_partition: image is not an enumerated flag");
                if (p.class_of[it->second] == none) {
                    p.class_of[it->second] = id;
                    todo.push_back(it->second);
                }
            }
        }
    }
    return p;
}

bool same_orbit_mod(const Composition& nn, const QFlag& d1, const QFlag& d2, std::uint32_t q, std::size_t budget) {
    PrimeField K(q);
    auto a = reduce_flag(d1, K), b = reduce_flag(d2, K);
    if (!a || !b) throw std::invalid_argument("same_orbit_mod: flag does not reduce mod " + std::to_string(q));
    const std::string target = flag_key(*b);
    auto gens = group_generators(nn, q);
    std::set<std::string> seen{flag_key(*a)};
    std::vector<FpFlag> todo{*a};
    while (!todo.empty()) {
        FpFlag x = std::move(todo.back());
        todo.pop_back();
        if (flag_key(x) == target) return true;
        for (const auto& g : gens) {
            FpFlag y = act(g, x);
            if (seen.insert(flag_key(y)).second) {
                if (seen.size() > budget) throw BudgetExceeded("same_orbit_mod: budget exceeded");
                todo.push_back(std::move(y));
            }
        }
    }
    return false;
}

bool ValidationReport::ok() const {
    for (const auto& c : checks)
        if (!c.pass && !c.expected) return false;
    return true;
}

std::string ValidationReport::to_string() const {
    std::ostringstream os;
    os << "oracle nn=" << nn.to_string() << " mm=" << mm.to_string() << " q=" << q << " flags=" << flags
       << " classes=" << classes << " catalog=" << catalog << "\n";
    for (const auto& c : checks) {
        os << "check " << c.name << " " << (c.pass ? "PASS" : c.expected ? "FAIL (expected)" : "FAIL");
        if (!c.detail.empty()) {
            if (c.detail.find('\n') == std::string::npos) {
                os << " " << c.detail << "\n";
            } else {
                os << "\n" << indent(c.detail);
            }
        } else {
            os << "\n";
        }
    }
    os << "result " << (ok() ? "PASS" : "FAIL") << "\n";
    return os.str();
}

ValidationReport cross_validate(const Composition& nn, const OrbitPartition& part, const OrbitCatalog* cat,
                                const WitnessPair* witness, const ValidateOptions& opt) {
    ValidationReport rep;
    rep.nn = nn;
    rep.q = part.q;
    rep.flags = part.flags.size();
    rep.classes = part.classes.size();
    if (part.flags.empty()) throw std::invalid_argument("cross_validate: empty partition");
    rep.mm = part.flags[0].type;
    PrimeField K(part.q);
    const JFamily fam = invariant_family(nn, rep.mm);

    std::size_t total = 0;
    for (const auto& c : part.classes) total += c.size();
    rep.checks.push_back({"partition", total == part.flags.size(),
                          std::to_string(total) + " of " + std::to_string(part.flags.size()) + " flags placed in classes"});

    if (cat) {
        rep.catalog = cat->entries.size();
        rep.checks.push_back({"a-count", cat->entries.size() == part.classes.size(),
                              std::to_string(part.classes.size()) + " classes, " +
                                  std::to_string(cat->entries.size()) + " normal forms"});
        std::vector<int> hits(part.classes.size(), 0);
        std::ostringstream bad;
        for (const auto& e : cat->entries) {
            auto idx = part.find(realize_mod(e.nf, K));
            if (!idx) {
                bad << "not a flag: " << e.nf.text << "\n";
                continue;
            }
            ++hits[part.class_of[*idx]];
        }
        for (std::size_t c = 0; c < hits.size(); ++c)
            if (hits[c] != 1)
                bad << "class with " << hits[c] << " normal forms, representative\n"
                    << flag_literal(part.flags[part.classes[c][0]]);
        rep.checks.push_back({"b-one-form-per-class", bad.str().empty(), bad.str()});
    }

    {
        std::vector<Signature> sig(part.classes.size());
        std::ostringstream bad;
        for (std::size_t c = 0; c < part.classes.size(); ++c) {
            sig[c] = signature(part.flags[part.classes[c][0]], fam);
            if (!opt.all_signatures) continue;
            for (std::size_t x : part.classes[c])
                if (signature(part.flags[x], fam) != sig[c]) {
                    bad << "signature not constant on class of\n" << flag_literal(part.flags[x]);
                    break;
                }
        }
        std::map<Signature, std::size_t> seen;
        std::size_t collisions = 0;
        for (std::size_t c = 0; c < sig.size(); ++c) {
            auto [it, fresh] = seen.emplace(sig[c], c);
            if (!fresh) {
                if (collisions++ == 0)
                    bad << "equal signatures on distinct classes:\n"
                        << flag_literal(part.flags[part.classes[it->second][0]])
                        << flag_literal(part.flags[part.classes[c][0]]);
            }
        }
        if (collisions) bad << collisions << " colliding classes\n";
        CheckResult c{"c-signatures-separate", bad.str().empty(), bad.str()};
        c.expected = opt.expect_collisions && collisions > 0 && bad.str().find("not constant") == std::string::npos;
        rep.checks.push_back(c);
    }

    if (witness) {
        auto a = reduce_flag(witness->d1, K), b = reduce_flag(witness->d2, K);
        std::ostringstream det;
        bool pass = false;
        if (!a || !b) {
            det << "witness does not reduce mod " << part.q;
        } else {
            bool qsig = signature(witness->d1, fam) == signature(witness->d2, fam);
            bool fsig = signature(*a, fam) == signature(*b, fam);
            auto ia = part.find(*a), ib = part.find(*b);
            bool distinct = ia && ib && part.class_of[*ia] != part.class_of[*ib];
            det << "rational signatures " << (qsig ? "equal" : "differ") << ", mod-q signatures "
                << (fsig ? "equal" : "differ") << ", classes " << (distinct ? "distinct" : "same");
            pass = qsig && fsig && distinct;
        }
        rep.checks.push_back({"d-witness", pass, det.str()});
    }

    if (opt.intersections) {
        // Class id of each flag's prefix under each P_J, J proper.
        const int n = nn.n();
        std::vector<std::vector<std::size_t>> tuple(part.flags.size());
        std::map<int, std::vector<FpFlag>> grass;
        for (const auto& e : fam) {
            if (static_cast<int>(e.J.size()) == n) continue;
            const int d = rep.mm.prefix(e.s);
            Composition gt{d, n - d};
            if (!grass.count(d)) grass[d] = enumerate_flags(n, gt, part.q);
            auto gp = orbit_partition(grass[d], parabolic_generators(n, e.J, part.q));
            for (std::size_t x = 0; x < part.flags.size(); ++x) {
                auto idx = gp.find(canonicalize(gt, part.flags[x].prefix(e.s)));
                tuple[x].push_back(gp.class_of[*idx]);
            }
        }
        std::map<std::vector<std::size_t>, std::size_t> cls;
        std::ostringstream bad;
        for (std::size_t x = 0; x < part.flags.size(); ++x) {
            auto [it, fresh] = cls.emplace(tuple[x], part.class_of[x]);
            if (!fresh && it->second != part.class_of[x]) {
                bad << "intersection of double cosets is larger than the orbit of\n" << flag_literal(part.flags[x]);
                break;
            }
        }
        std::set<std::size_t> covered;
        for (const auto& [t, c] : cls) covered.insert(c);
        bool pass = bad.str().empty() && cls.size() == part.classes.size();
        if (bad.str().empty() && !pass) bad << "some orbit meets two intersections";
        rep.checks.push_back({"e-coset-intersections", pass, bad.str()});
    }
    return rep;
}

ValidationReport run_oracle(const Composition& nn, const Composition& mm, std::uint32_t q,
                            const ValidateOptions& opt, std::size_t budget) {
    auto part = orbit_partition(enumerate_flags(nn.n(), mm, q, budget), group_generators(nn, q));
    std::optional<OrbitCatalog> cat;
    std::optional<WitnessPair> wit;
    auto tag = classify_pair(nn, mm);
    if (tag && tag->injective) cat = enumerate(nn, mm);
    ValidateOptions o = opt;
    if (tag && !tag->injective) {
        o.expect_collisions = !opt.strict;
        try {
            wit = find_witness(nn, mm);
        } catch (const std::exception&) {
        }
    }
    return cross_validate(nn, part, cat ? &*cat : nullptr, wit ? &*wit : nullptr, o);
}

std::optional<WitnessPair> search_witness(const Composition& nn, const Composition& mm, std::uint32_t q,
                                          std::size_t budget) {
    auto part = orbit_partition(enumerate_flags(nn.n(), mm, q, budget), group_generators(nn, q));
    auto fam = invariant_family(nn, mm);
    std::map<Signature, QFlag> seen;
    for (const auto& c : part.classes) {
        QFlag f = canonicalize(mm, lift(part.flags[c[0]].rep));
        auto sig = signature(f, fam);
        auto [it, fresh] = seen.emplace(sig, f);
        if (!fresh) {
            WitnessPair w;
            w.d1 = it->second;
            w.d2 = f;
            w.nn = nn;
            w.mm = mm;
            for (const auto& t : matching_rows(nn, mm))
                if (!t.injective) w.tag = t;
            w.construction = "search over GF(" + std::to_string(q) + ")";
            return w;
        }
    }
    return std::nullopt;
}

WitnessPair find_witness(const Composition& nn, const Composition& mm) {
    try {
        return counterexample_pair(nn, mm);
    } catch (const InfinitePair&) {
        throw;
    } catch (const std::invalid_argument& e) {
        bool non_injective = false;
        for (const auto& t : matching_rows(nn, mm)) non_injective |= !t.injective;
        if (!non_injective) throw;
    }
    auto w = search_witness(nn, mm, 2);
    if (!w) throw std::runtime_error("no witness found over GF(2)");
    return *w;
}

std::vector<std::vector<int>> check_rank_lemma(int n, int d, std::uint32_t q) {
    Composition gt{d, n - d};
    auto grass = enumerate_flags(n, gt, q);
    std::vector<std::vector<int>> bad;
    for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
        std::vector<int> J;
        std::vector<std::size_t> rows;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) J.push_back(i), rows.push_back(i);
        auto part = orbit_partition(grass, parabolic_generators(n, J, q));
        std::map<std::size_t, std::size_t> level_of_class;
        std::map<std::size_t, std::size_t> class_of_level;
        bool ok = true;
        for (std::size_t x = 0; x < grass.size() && ok; ++x) {
            std::size_t r = rank(grass[x].rep.select_rows(rows));
            auto [a, fa] = level_of_class.emplace(part.class_of[x], r);
            auto [b, fb] = class_of_level.emplace(r, part.class_of[x]);
            if (a->second != r || b->second != part.class_of[x]) ok = false;
        }
        if (!ok) bad.push_back(J);
    }
    return bad;
}

}  // namespace flagorb
