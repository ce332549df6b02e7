#include "flagorb/normal_forms.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>

namespace flagorb {

namespace {

const Rational QQ{};

std::string join(const std::vector<int>& v, const char* sep = ",") {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? sep : "") << v[i];
    return os.str();
}

std::vector<int> identity_order(std::size_t k) {
    std::vector<int> o(k);
    std::iota(o.begin(), o.end(), 0);
    return o;
}

bool is_identity(const std::vector<int>& o) { return o == identity_order(o.size()); }

// Frame coordinates: frame row sigma[r] is original row r.
template <class F>
Flag<F> to_frame(const Flag<F>& f, const Composition& nn, const std::vector<int>& order) {
    if (is_identity(order)) return f;
    return act(permutation_matrix(f.rep.field(), block_permutation(nn, order)), f);
}

template <class F>
Flag<F> from_frame(const Flag<F>& f, const Composition& nn, const std::vector<int>& order) {
    if (is_identity(order)) return f;
    return act(permutation_matrix(f.rep.field(), inverse_permutation(block_permutation(nn, order))), f);
}

template <class F>
Matrix<F> zero_one_over(const F& K, int n, const std::vector<std::vector<int>>& cols) {
    Matrix<F> m(K, n, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (int r : cols[c]) m(r, c) = K.one();
    return m;
}

template <class F>
Flag<F> realize_over(const NormalForm& nf, const F& K) {
    Composition ft = nf.dual ? nf.mm.reversed() : nf.mm;
    Flag<F> frame = canonicalize(ft, zero_one_over(K, nf.nn.n(), nf.columns));
    if (nf.dual) frame = dual(frame);
    return from_frame(frame, nf.nn, nf.order);
}

QMatrix zero_one(int n, const std::vector<std::vector<int>>& cols) {
    QMatrix m(QQ, n, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (int r : cols[c]) m(r, c) = 1;
    return m;
}

QMatrix reverse_within_blocks(const Composition& nn) {
    Permutation w(nn.n());
    for (std::size_t b = 0; b < nn.length(); ++b) {
        int s = nn.prefix(b), e = nn.prefix(b + 1);
        for (int r = s; r < e; ++r) w[r] = s + e - 1 - r;
    }
    return permutation_matrix(QQ, w);
}

void add_col(QMatrix& a, std::size_t dst, std::size_t src, const mpq_class& x) {
    if (x == 0) return;
    for (std::size_t i = 0; i < a.rows(); ++i) a(i, dst) += x * a(i, src);
}

void scale_col(QMatrix& a, std::size_t c, const mpq_class& x) {
    for (std::size_t i = 0; i < a.rows(); ++i) a(i, c) *= x;
}

void add_row(QMatrix& a, std::size_t dst, std::size_t src, const mpq_class& x) {
    if (x == 0) return;
    for (std::size_t j = 0; j < a.cols(); ++j) a(dst, j) += x * a(src, j);
}

void scale_row(QMatrix& a, std::size_t r, const mpq_class& x) {
    for (std::size_t j = 0; j < a.cols(); ++j) a(r, j) *= x;
}

std::vector<int> block_of_columns(const Composition& t) {
    std::vector<int> cb;
    for (std::size_t b = 0; b < t.length(); ++b)
        for (int i = 0; i < t[b]; ++i) cb.push_back(static_cast<int>(b));
    return cb;
}

// Triangular pivoting on the rows [r0, r1) and the listed columns of a: row
// operations stay upper triangular inside [r0, r1), column operations stay
// inside `cols`. Returns pivots (row, column), largest row first; each pivot
// column ends as the unit vector at its row within [r0, r1).
std::vector<std::pair<std::size_t, std::size_t>> triangular_pivots(QMatrix& a, std::size_t r0, std::size_t r1,
                                                                   std::vector<std::size_t> cols) {
    std::vector<std::pair<std::size_t, std::size_t>> piv;
    while (true) {
        std::size_t m = r1, c = a.cols();
        for (std::size_t i = r1; i-- > r0 && m == r1;)
            for (std::size_t cc : cols)
                if (a(i, cc) != 0) {
                    m = i, c = cc;
                    break;
                }
        if (m == r1) break;
        scale_col(a, c, 1 / a(m, c));
        for (std::size_t cc : cols)
            if (cc != c) add_col(a, cc, c, -a(m, cc));
        for (std::size_t i = r0; i < m; ++i) add_row(a, i, m, -a(i, c));
        piv.emplace_back(m, c);
        cols.erase(std::find(cols.begin(), cols.end(), c));
    }
    return piv;
}

std::string columns_text(const std::vector<std::vector<int>>& cols, const Composition& t) {
    std::ostringstream os;
    auto cb = block_of_columns(t);
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (c) os << (cb[c] != cb[c - 1] ? "|" : ",");
        if (cols[c].empty()) os << "0";
        std::vector<int> one;
        for (int r : cols[c]) one.push_back(r + 1);
        os << join(one, "+");
    }
    return os.str();
}

NormalForm make_columns_form(const CaseTag& tag, const Composition& nn, const Composition& mm,
                             const std::vector<int>& order, bool dual_side, std::vector<std::vector<int>> cols) {
    NormalForm nf;
    nf.tag = tag;
    nf.nn = nn;
    nf.mm = mm;
    nf.order = order;
    nf.dual = dual_side;
    nf.columns = std::move(cols);
    std::ostringstream os;
    os << "case=" << tag.name();
    if (!tag.subcase.empty()) os << " sub=" << tag.subcase;
    if (!is_identity(order)) {
        std::vector<int> one;
        for (int b : order) one.push_back(b + 1);
        os << " frame=" << join(one);
    }
    if (dual_side) os << " dual";
    os << " cols=[" << columns_text(nf.columns, dual_side ? mm.reversed() : mm) << "]";
    nf.text = os.str();
    return nf;
}

std::size_t nonzeros(const NormalForm& nf) {
    std::size_t c = 0;
    for (const auto& col : nf.columns) c += col.size();
    return c;
}

// Collect candidates, keep one normal form per signature: the one with fewest
// nonzero entries, then smallest text.
class CatalogBuilder {
public:
    CatalogBuilder(CaseTag tag, Composition nn, Composition mm, std::vector<int> order, bool dual_side)
        : tag_(std::move(tag)), nn_(std::move(nn)), mm_(std::move(mm)), order_(std::move(order)),
          dual_(dual_side), fam_(invariant_family(nn_, mm_)) {}

    void add(std::vector<std::vector<int>> cols) {
        const int n = nn_.n();
        Composition ft = dual_ ? mm_.reversed() : mm_;
        QMatrix m = zero_one(n, cols);
        if (rank(m) != m.cols()) return;
        QFlag frame = canonicalize(ft, m);
        NormalForm nf = make_columns_form(tag_, nn_, mm_, order_, dual_, std::move(cols));
        std::string key = frame.rep.to_string();
        auto seen = seen_.find(key);
        Signature sig;
        if (seen != seen_.end()) {
            sig = seen->second;
        } else {
            if (dual_) frame = dual(frame);
            sig = signature(from_frame(frame, nn_, order_), fam_);
            seen_.emplace(key, sig);
        }
        auto it = best_.find(sig);
        if (it == best_.end()) {
            best_.emplace(sig, std::move(nf));
            return;
        }
        auto a = std::make_pair(nonzeros(nf), nf.text);
        auto b = std::make_pair(nonzeros(it->second), it->second.text);
        if (a < b) it->second = std::move(nf);
    }

    std::vector<NormalForm> result() const {
        std::vector<NormalForm> out;
        for (const auto& [sig, nf] : best_) out.push_back(nf);
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    CaseTag tag_;
    Composition nn_, mm_;
    std::vector<int> order_;
    bool dual_;
    JFamily fam_;
    std::map<std::string, Signature> seen_;
    std::map<Signature, NormalForm> best_;
};

// All case 0 data for blocks of sizes (n1, n2) and m1 columns.
std::vector<Case0Data> all_case0(int n1, int n2, int m1) {
    std::vector<Case0Data> out;
    // Assign to each V index 0 (unused), 1 (zero-U column) or 2 (paired).
    std::vector<int> state(n2, 0);
    while (true) {
        std::vector<int> zi, pi;
        for (int i = 0; i < n2; ++i) {
            if (state[i] == 1) zi.push_back(i + 1);
            if (state[i] == 2) pi.push_back(i + 1);
        }
        int s = static_cast<int>(zi.size() + pi.size());
        if (s <= m1 && static_cast<int>(pi.size()) + (m1 - s) <= n1) {
            int nj = m1 - static_cast<int>(zi.size());  // distinct j's needed
            // Choose an injective j assignment: paired j's in order, then a set.
            std::vector<int> js(nj);
            std::function<void(int, std::vector<bool>&)> rec = [&](int t, std::vector<bool>& used) {
                if (t == static_cast<int>(pi.size())) {
                    int need = m1 - s;
                    std::vector<int> rest;
                    for (int j = 1; j <= n1; ++j)
                        if (!used[j]) rest.push_back(j);
                    std::vector<bool> pick(rest.size(), false);
                    std::fill(pick.begin(), pick.begin() + need, true);
                    do {
                        Case0Data d;
                        d.i_zero = zi;
                        for (std::size_t p = 0; p < pi.size(); ++p) d.pairs.emplace_back(pi[p], js[p]);
                        for (std::size_t q = 0; q < rest.size(); ++q)
                            if (pick[q]) d.j_zero.push_back(rest[q]);
                        out.push_back(d);
                    } while (std::prev_permutation(pick.begin(), pick.end()));
                    return;
                }
                for (int j = 1; j <= n1; ++j) {
                    if (used[j]) continue;
                    used[j] = true;
                    js[t] = j;
                    rec(t + 1, used);
                    used[j] = false;
                }
            };
            std::vector<bool> used(n1 + 1, false);
            rec(0, used);
        }
        int i = 0;
        while (i < n2 && state[i] == 2) state[i++] = 0;
        if (i == n2) break;
        ++state[i];
    }
    return out;
}

// Columns of a case 0 form with U rows at u0.. and V rows at v0.., 0-based.
std::vector<std::vector<int>> case0_columns(const Case0Data& d, int u0, int v0) {
    std::vector<std::vector<int>> cols;
    for (int i : d.i_zero) cols.push_back({v0 + i - 1});
    for (auto [i, j] : d.pairs) cols.push_back({u0 + j - 1, v0 + i - 1});
    for (int j : d.j_zero) cols.push_back({u0 + j - 1});
    return cols;
}

// Options for one column restricted to a block: 0 or a single basis vector.
std::vector<std::vector<int>> unit_or_zero(int start, int size) {
    std::vector<std::vector<int>> out{{}};
    for (int t = 0; t < size; ++t) out.push_back({start + t});
    return out;
}

std::vector<std::vector<int>> per_block_units(const Composition& nn) {
    std::vector<std::vector<int>> out{{}};
    for (std::size_t b = 0; b < nn.length(); ++b) {
        std::vector<std::vector<int>> next;
        for (const auto& base : out)
            for (const auto& opt : unit_or_zero(nn.prefix(b), nn[b])) {
                auto v = base;
                v.insert(v.end(), opt.begin(), opt.end());
                next.push_back(v);
            }
        out = std::move(next);
    }
    return out;
}

std::vector<NormalForm> catalog_I(const CaseTag& tag, const Composition& nn, const Composition& mm) {
    auto order = frame_order(tag, nn);
    Composition fn = permute_blocks(nn, order);
    CatalogBuilder cb(tag, nn, mm, order, false);
    const int u0 = 1, v0 = 1 + fn[1];
    // Every 0/1 first column: unit U and V parts miss the orbits where the
    // first column meets a paired e_j + f_i (the open orbit of (1,2,2)/(2,3)).
    std::vector<std::vector<int>> firsts;
    const int rows = nn.n();
    for (unsigned mask = 1; mask < (1u << rows); ++mask) {
        std::vector<int> col;
        for (int r = 0; r < rows; ++r)
            if (mask & (1u << r)) col.push_back(r);
        firsts.push_back(col);
    }
    for (const auto& d : all_case0(fn[1], fn[2], mm[0] - 1)) {
        auto rest = case0_columns(d, u0, v0);
        for (const auto& f : firsts) {
            std::vector<std::vector<int>> cols{f};
            cols.insert(cols.end(), rest.begin(), rest.end());
            cb.add(cols);
        }
    }
    return cb.result();
}

std::vector<NormalForm> catalog_pair_units(const CaseTag& tag, const Composition& nn, const Composition& mm,
                                           bool dual_side) {
    // Unit-or-zero blocks miss orbits such as U_2 = e_1 + e_2 at (2,2,2)/(2,4),
    // so every 0/1 column is tried.
    CatalogBuilder cb(tag, nn, mm, identity_order(nn.length()), dual_side);
    const int n = nn.n();
    std::vector<std::vector<int>> opts;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<int> col;
        for (int r = 0; r < n; ++r)
            if (mask & (1u << r)) col.push_back(r);
        opts.push_back(col);
    }
    for (const auto& u : opts)
        for (const auto& v : opts) cb.add({u, v});
    return cb.result();
}

std::vector<NormalForm> catalog_single_units(const CaseTag& tag, const Composition& nn, const Composition& mm,
                                             bool dual_side) {
    CatalogBuilder cb(tag, nn, mm, identity_order(nn.length()), dual_side);
    for (const auto& u : per_block_units(nn))
        if (!u.empty()) cb.add({u});
    return cb.result();
}

std::vector<NormalForm> catalog_Iprime_m2(const CaseTag& tag, const Composition& nn, const Composition& mm) {
    CatalogBuilder cb(tag, nn, mm, identity_order(2), false);
    const int n = nn.n();
    for (const auto& d : all_case0(nn[0], nn[1], mm[0])) {
        auto base = case0_columns(d, 0, nn[0]);
        for (unsigned mask = 1; mask < (1u << n); ++mask) {
            std::vector<int> last;
            for (int r = 0; r < n; ++r)
                if (mask & (1u << r)) last.push_back(r);
            auto cols = base;
            cols.push_back(last);
            cb.add(cols);
        }
    }
    return cb.result();
}

std::vector<IIIpData> all_caseIIIprime(const Composition& mm) {
    const int n = mm.n(), l = static_cast<int>(mm.length());
    std::vector<IIIpData> out;
    for (int j0 = 1; j0 <= l; ++j0) {
        std::vector<int> sz(l);
        for (int j = 0; j < l; ++j) sz[j] = mm[j] - (j + 1 == j0 ? 1 : 0);
        std::vector<std::vector<int>> blocks(l);
        std::function<void(int, std::vector<int>)> place = [&](int j, std::vector<int> avail) {
            if (j == l) {
                // Chains through blocks after j0 with strictly decreasing indices.
                std::vector<std::pair<int, int>> chain;
                std::function<void(int, int)> grow = [&](int b, int bound) {
                    IIIpData d{j0, blocks, chain};
                    out.push_back(d);
                    for (int nb = b; nb < l; ++nb)
                        for (int idx : blocks[nb])
                            if (idx < bound) {
                                chain.emplace_back(idx, nb + 1);
                                grow(nb + 1, idx);
                                chain.pop_back();
                            }
                };
                grow(j0, n);
                return;
            }
            std::vector<bool> pick(avail.size(), false);
            std::fill(pick.begin(), pick.begin() + sz[j], true);
            do {
                std::vector<int> mine, rest;
                for (std::size_t q = 0; q < avail.size(); ++q) (pick[q] ? mine : rest).push_back(avail[q]);
                blocks[j] = mine;
                place(j + 1, rest);
            } while (std::prev_permutation(pick.begin(), pick.end()));
        };
        std::vector<int> all(n - 1);
        std::iota(all.begin(), all.end(), 1);
        place(0, all);
    }
    return out;
}

struct CatalogCache {
    std::mutex mu;
    std::map<std::string, std::shared_ptr<const std::pair<std::vector<NormalForm>, std::map<Signature, std::size_t>>>>
        entries;
};

CatalogCache& cache() {
    static CatalogCache c;
    return c;
}

}  // namespace

std::string label_name(CaseLabel l) {
    switch (l) {
        case CaseLabel::Zero: return "0";
        case CaseLabel::I: return "I";
        case CaseLabel::II: return "II";
        case CaseLabel::III: return "III";
        case CaseLabel::Iprime: return "I'";
        case CaseLabel::IIprime: return "II'";
        case CaseLabel::IIIprime: return "III'";
    }
    return "?";
}

std::string CaseTag::name() const { return label_name(label); }

std::string CaseTag::describe() const {
    std::string s = name();
    if (!subcase.empty()) s += " " + subcase;
    if (!injective) s += " (non-injective)";
    return s;
}

std::vector<CaseTag> matching_rows(const Composition& nn, const Composition& mm) {
    if (nn.n() != mm.n()) throw std::invalid_argument("compositions of different totals");
    const std::size_t k = nn.length(), l = mm.length();
    const int N = nn.min(), M = mm.min();
    std::vector<CaseTag> rows;
    if (k == 2 && l == 2) rows.push_back({CaseLabel::Zero, "", true});
    if (k == 3 && N == 1 && l == 2 && M >= 2) rows.push_back({CaseLabel::I, "", true});
    if (k == 3 && N >= 2 && l == 2 && M == 2)
        rows.push_back({CaseLabel::II, mm[0] == 2 ? "(2,n-2)" : "(n-2,2)", true});
    if (l == 2 && M == 1) rows.push_back({CaseLabel::III, mm[0] == 1 ? "(1,n-1)" : "(n-1,1)", true});
    if (k == 2 && N >= 2 && l == 3 && M == 1) {
        std::string sub = mm[1] == 1 ? "m2=1" : mm[0] == 1 ? "m1=1" : "m3=1";
        rows.push_back({CaseLabel::Iprime, sub, mm[1] == 1});
    }
    if (k == 2 && N == 2 && l == 3 && M >= 2) rows.push_back({CaseLabel::IIprime, "", false});
    if (k == 2 && N == 1) rows.push_back({CaseLabel::IIIprime, nn[1] == 1 ? "(n-1,1)" : "(1,n-1)", true});
    return rows;
}

std::optional<CaseTag> classify_pair(const Composition& nn, const Composition& mm) {
    auto rows = matching_rows(nn, mm);
    if (rows.empty()) return std::nullopt;
    return rows.front();
}

std::vector<int> frame_order(const CaseTag& tag, const Composition& nn) {
    auto order = identity_order(nn.length());
    if (tag.label == CaseLabel::I) {
        std::size_t b1 = 0;
        while (nn[b1] != 1) ++b1;
        order = {static_cast<int>(b1)};
        for (std::size_t b = 0; b < nn.length(); ++b)
            if (b != b1) order.push_back(static_cast<int>(b));
    } else if (tag.label == CaseLabel::IIIprime && nn[1] != 1) {
        order = {1, 0};
    }
    return order;
}

int sig_value(const Signature& sig, const JFamily& fam, const std::vector<int>& J, int s) {
    if (J.empty()) return 0;
    JEntry key{J, s};
    auto it = std::lower_bound(fam.begin(), fam.end(), key);
    if (it == fam.end() || !(*it == key)) throw std::out_of_range("J=" + format_J(J) + " not in the family");
    return sig.values[static_cast<std::size_t>(it - fam.begin())];
}

TriangularReduction triangular_reduce(const QMatrix& a) {
    const std::size_t p = a.rows(), q = a.cols();
    // Stack [a; I_q]: column operations then also build B^{-1}.
    QMatrix st(QQ, p + q, q);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < q; ++j) st(i, j) = a(i, j);
    for (std::size_t j = 0; j < q; ++j) st(p + j, j) = 1;
    // Row operations are recorded on A by replaying them on [a | I_p].
    QMatrix work = a.hconcat(QMatrix::identity(QQ, p));
    std::vector<std::size_t> cols(q);
    std::iota(cols.begin(), cols.end(), 0);
    std::vector<std::pair<std::size_t, std::size_t>> piv;
    while (true) {
        std::size_t m = p, c = q;
        for (std::size_t i = p; i-- > 0 && m == p;)
            for (std::size_t cc : cols)
                if (st(i, cc) != 0) {
                    m = i, c = cc;
                    break;
                }
        if (m == p) break;
        scale_col(st, c, 1 / st(m, c));
        for (std::size_t cc : cols)
            if (cc != c) add_col(st, cc, c, -st(m, cc));
        for (std::size_t i = 0; i < m; ++i) {
            mpq_class x = -st(i, c);
            if (x == 0) continue;
            for (std::size_t j = 0; j < q; ++j) st(i, j) += x * st(m, j);
            add_row(work, i, m, x);
        }
        piv.emplace_back(m, c);
        cols.erase(std::find(cols.begin(), cols.end(), c));
    }
    // Order pivot columns by row, zero columns last.
    std::reverse(piv.begin(), piv.end());
    std::vector<std::size_t> perm;
    TriangularReduction out;
    for (auto [r, c] : piv) {
        perm.push_back(c);
        out.indices.push_back(static_cast<int>(r) + 1);
    }
    for (std::size_t c : cols) perm.push_back(c);
    QMatrix binv(QQ, q, q);
    for (std::size_t j = 0; j < q; ++j)
        for (std::size_t i = 0; i < q; ++i) binv(i, j) = st(p + i, perm[j]);
    std::vector<std::size_t> right(p);
    std::iota(right.begin(), right.end(), q);
    out.A = work.select_cols(right);
    out.B = *inverse(binv);
    out.result = out.A * a * binv;
    return out;
}

NormalForm make_case0(const Composition& nn, const Composition& mm, Case0Data d) {
    if (nn.length() != 2 || mm.length() != 2) throw std::invalid_argument("case 0 needs two blocks on each side");
    std::sort(d.i_zero.begin(), d.i_zero.end());
    std::sort(d.pairs.begin(), d.pairs.end());
    std::sort(d.j_zero.begin(), d.j_zero.end());
    std::set<int> is, js;
    for (int i : d.i_zero) is.insert(i);
    for (auto [i, j] : d.pairs) is.insert(i), js.insert(j);
    for (int j : d.j_zero) js.insert(j);
    if (is.size() != static_cast<std::size_t>(d.s()) || js.size() != d.pairs.size() + d.j_zero.size())
        throw std::invalid_argument("case 0 indices must be distinct");
    if (d.s() + static_cast<int>(d.j_zero.size()) != mm[0]) throw std::invalid_argument("case 0 column count");
    if ((!is.empty() && (*is.begin() < 1 || *is.rbegin() > nn[1])) ||
        (!js.empty() && (*js.begin() < 1 || *js.rbegin() > nn[0])))
        throw std::invalid_argument("case 0 index out of range");
    NormalForm nf;
    nf.tag = {CaseLabel::Zero, "", true};
    nf.nn = nn;
    nf.mm = mm;
    nf.order = identity_order(2);
    nf.columns = case0_columns(d, 0, nn[0]);
    std::vector<int> iv = d.i_zero, pj, zj = d.j_zero;
    for (auto [i, j] : d.pairs) iv.push_back(i), pj.push_back(j);
    std::ostringstream os;
    os << "case=0 r=" << d.r() << " s=" << d.s() << " i=[" << join(iv) << "] j=[" << join(pj) << ";" << join(zj)
       << "]";
    nf.text = os.str();
    nf.c0 = std::move(d);
    return nf;
}

NormalForm make_caseIIIprime(const Composition& nn, const Composition& mm, IIIpData d) {
    if (nn.length() != 2 || (nn[0] != 1 && nn[1] != 1)) throw std::invalid_argument("case III' needs nn=(n-1,1)");
    const int n = nn.n(), l = static_cast<int>(mm.length());
    if (static_cast<int>(d.blocks.size()) != l || d.j0 < 1 || d.j0 > l)
        throw std::invalid_argument("case III' block data");
    std::set<int> seen;
    for (int j = 0; j < l; ++j) {
        std::sort(d.blocks[j].begin(), d.blocks[j].end());
        if (static_cast<int>(d.blocks[j].size()) != mm[j] - (j + 1 == d.j0 ? 1 : 0))
            throw std::invalid_argument("case III' block sizes");
        for (int i : d.blocks[j]) {
            if (i < 1 || i > n - 1 || !seen.insert(i).second) throw std::invalid_argument("case III' indices");
        }
    }
    int pb = d.j0, pi = n;
    for (auto [i, b] : d.chain) {
        if (b <= pb || i >= pi) throw std::invalid_argument("case III' chain must go right with decreasing index");
        if (!std::count(d.blocks[b - 1].begin(), d.blocks[b - 1].end(), i))
            throw std::invalid_argument("case III' chain index not in its block");
        pb = b, pi = i;
    }
    NormalForm nf;
    nf.tag = {CaseLabel::IIIprime, nn[1] == 1 ? "(n-1,1)" : "(1,n-1)", true};
    nf.nn = nn;
    nf.mm = mm;
    nf.order = frame_order(nf.tag, nn);
    for (int j = 0; j + 1 < l; ++j) {
        if (j + 1 == d.j0) {
            std::vector<int> sp;
            for (auto [i, b] : d.chain) sp.push_back(i - 1);
            sp.push_back(n - 1);
            std::sort(sp.begin(), sp.end());
            nf.columns.push_back(sp);
        }
        for (int i : d.blocks[j]) nf.columns.push_back({i - 1});
    }
    std::ostringstream os;
    os << "case=III' sub=" << nf.tag.subcase << " j0=" << d.j0 << " blocks=[";
    for (int j = 0; j < l; ++j) os << (j ? "|" : "") << join(d.blocks[j]);
    os << "] chain=[";
    for (std::size_t t = 0; t < d.chain.size(); ++t)
        os << (t ? "," : "") << d.chain[t].first << "@" << d.chain[t].second;
    os << "]";
    nf.text = os.str();
    nf.c3p = std::move(d);
    return nf;
}

QFlag realize(const NormalForm& nf) { return realize_over(nf, QQ); }

FpFlag realize_mod(const NormalForm& nf, const PrimeField& K) { return realize_over(nf, K); }

NormalForm reduce_case0(const QFlag& f, const Composition& nn) {
    if (nn.length() != 2 || f.type.length() != 2) throw std::invalid_argument("reduce_case0: not case 0");
    const std::size_t n1 = nn[0], n = nn.n(), m1 = f.type[0];
    QMatrix a = f.rep;
    std::vector<std::size_t> all(m1);
    std::iota(all.begin(), all.end(), 0);
    // V part.
    auto vp = triangular_pivots(a, n1, n, all);
    std::vector<bool> paired_col(m1, false);
    std::vector<int> iof(m1, 0);
    for (auto [r, c] : vp) paired_col[c] = true, iof[c] = static_cast<int>(r - n1) + 1;
    std::vector<std::size_t> grpA, grpB;
    for (std::size_t c = 0; c < m1; ++c) (paired_col[c] ? grpA : grpB).push_back(c);
    // U part of the V = 0 columns.
    auto up = triangular_pivots(a, 0, n1, grpB);
    Case0Data d;
    for (auto [r, c] : up) {
        d.j_zero.push_back(static_cast<int>(r) + 1);
        for (std::size_t ca : grpA) add_col(a, ca, c, -a(r, ca));
    }
    // Peel off paired columns from the bottom U row upwards.
    std::vector<std::size_t> active = grpA;
    while (true) {
        std::size_t m = n1;
        for (std::size_t i = n1; i-- > 0 && m == n1;)
            for (std::size_t c : active)
                if (a(i, c) != 0) {
                    m = i;
                    break;
                }
        if (m == n1) break;
        std::size_t j0 = m1;
        for (std::size_t c : active)
            if (a(m, c) != 0 && (j0 == m1 || iof[c] < iof[j0])) j0 = c;
        scale_row(a, m, 1 / a(m, j0));
        for (std::size_t i = 0; i < m; ++i) add_row(a, i, m, -a(i, j0));
        const std::size_t vr = n1 + iof[j0] - 1;
        for (std::size_t c : active) {
            if (c == j0) continue;
            mpq_class y = a(m, c);
            if (y == 0) continue;
            add_col(a, c, j0, -y);
            add_row(a, vr, n1 + iof[c] - 1, y);
        }
        d.pairs.emplace_back(iof[j0], static_cast<int>(m) + 1);
        active.erase(std::find(active.begin(), active.end(), j0));
    }
    for (std::size_t c : active) d.i_zero.push_back(iof[c]);
    return make_case0(nn, f.type, std::move(d));
}

NormalForm decode_signature_case0(const Signature& sig, const Composition& nn, const Composition& mm) {
    if (nn.length() != 2 || mm.length() != 2) throw std::invalid_argument("decode: not case 0");
    auto fam = invariant_family(nn, mm);
    if (sig.values.size() != fam.size()) throw std::invalid_argument("decode: signature does not match family");
    const int n1 = nn[0], n = nn.n();
    auto range = [](int a, int b) {  // 0-based [a, b)
        std::vector<int> v;
        for (int i = a; i < b; ++i) v.push_back(i);
        return v;
    };
    auto uni = [](std::vector<int> a, const std::vector<int>& b) {
        a.insert(a.end(), b.begin(), b.end());
        std::sort(a.begin(), a.end());
        return a;
    };
    auto R = [&](const std::vector<int>& J) { return sig_value(sig, fam, J, 1); };
    std::vector<int> is, js;
    for (int p = 1; p <= nn[1]; ++p) {
        int diff = R(range(n1 + p - 1, n)) - R(range(n1 + p, n));
        if (diff == 1) is.push_back(p);
        else if (diff != 0) throw std::invalid_argument("inconsistent signature");
    }
    for (int p = 1; p <= n1; ++p) {
        int diff = R(range(p - 1, n1)) - R(range(p, n1));
        if (diff == 1) js.push_back(p);
        else if (diff != 0) throw std::invalid_argument("inconsistent signature");
    }
    Case0Data d;
    std::set<int> pi, pj;
    for (int j : js)
        for (int i : is) {
            auto V0 = range(n1 + i - 1, n), V1 = range(n1 + i, n);
            bool c1 = R(uni(range(j - 1, n1), V0)) - R(uni(range(j, n1), V0)) == 0;
            bool c2 = R(uni(range(j - 1, n1), V1)) - R(uni(range(j, n1), V1)) == 1;
            if (c1 && c2) {
                if (pi.count(i) || pj.count(j)) throw std::invalid_argument("inconsistent signature");
                d.pairs.emplace_back(i, j);
                pi.insert(i), pj.insert(j);
            }
        }
    for (int i : is)
        if (!pi.count(i)) d.i_zero.push_back(i);
    for (int j : js)
        if (!pj.count(j)) d.j_zero.push_back(j);
    NormalForm nf = make_case0(nn, mm, std::move(d));
    if (nf.c0->s() != R(range(n1, n)) || mm[0] - nf.c0->r() != R(range(0, n1)))
        throw std::invalid_argument("inconsistent signature");
    return nf;
}

NormalForm reduce_caseIIIprime(const QFlag& f, const Composition& nn) {
    if (nn.length() != 2 || (nn[0] != 1 && nn[1] != 1)) throw std::invalid_argument("reduce_caseIIIprime: not III'");
    CaseTag tag{CaseLabel::IIIprime, nn[1] == 1 ? "(n-1,1)" : "(1,n-1)", true};
    auto order = frame_order(tag, nn);
    QFlag g = to_frame(f, nn, order);
    const std::size_t n = g.n(), l = g.type.length(), last = n - 1;
    QMatrix a = complete_to_invertible(g.rep);
    auto cb = block_of_columns(g.type);

    std::size_t sc = n;
    for (std::size_t c = 0; c < n && sc == n; ++c)
        if (a(last, c) != 0) sc = c;
    const int j0 = cb[sc];
    scale_col(a, sc, 1 / a(last, sc));
    for (std::size_t c = 0; c < n; ++c)
        if (c != sc && cb[c] >= j0) add_col(a, c, sc, -a(last, c));

    // Bruhat-type elimination of the other columns, block by block.
    std::vector<std::size_t> pivcol(n - 1, n);  // row -> column
    std::vector<std::pair<std::size_t, std::size_t>> done;
    for (std::size_t b = 0; b < l; ++b) {
        std::vector<std::size_t> cs;
        for (std::size_t c = 0; c < n; ++c)
            if (cb[c] == static_cast<int>(b) && c != sc) cs.push_back(c);
        for (auto [pr, pc] : done)
            for (std::size_t c : cs) add_col(a, c, pc, -a(pr, c));
        auto piv = triangular_pivots(a, 0, last, cs);
        if (piv.size() != cs.size()) throw std::logic_error("reduce_caseIIIprime: singular completion");
        for (auto [r, c] : piv) pivcol[r] = c, done.emplace_back(r, c);
    }
    for (std::size_t r = 0; r < last; ++r)
        if (cb[pivcol[r]] <= j0) add_col(a, sc, pivcol[r], -a(r, sc));

    // Keep the summands that no later-or-equal block dominates from above.
    while (true) {
        bool changed = false;
        for (std::size_t x = 0; x < last && !changed; ++x) {
            if (a(x, sc) == 0) continue;
            for (std::size_t y = x + 1; y < last; ++y)
                if (a(y, sc) != 0 && cb[pivcol[y]] >= cb[pivcol[x]]) {
                    mpq_class t = a(x, sc) / a(y, sc);
                    add_row(a, x, y, -t);
                    add_col(a, pivcol[y], pivcol[x], t);
                    changed = true;
                    break;
                }
        }
        if (!changed) break;
    }
    IIIpData d;
    d.j0 = j0 + 1;
    d.blocks.resize(l);
    for (std::size_t r = 0; r < last; ++r) {
        d.blocks[cb[pivcol[r]]].push_back(static_cast<int>(r) + 1);
        if (a(r, sc) != 0) d.chain.emplace_back(static_cast<int>(r) + 1, cb[pivcol[r]] + 1);
    }
    std::sort(d.chain.begin(), d.chain.end(), [](auto x, auto y) { return x.second < y.second; });
    return make_caseIIIprime(nn, g.type, std::move(d));
}

std::vector<NormalForm> enumerate_normal_forms(const Composition& nn, const Composition& mm) {
    auto tag = classify_pair(nn, mm);
    if (!tag) throw InfinitePair("no row of the table matches nn=" + nn.to_string() + " mm=" + mm.to_string());
    if (!tag->injective) throw NonInjective(*tag, "case " + tag->describe() + ": invariant ranks do not separate orbits");
    std::string key = tag->name() + "|" + nn.to_string() + "|" + mm.to_string();
    {
        std::lock_guard<std::mutex> lk(cache().mu);
        auto it = cache().entries.find(key);
        if (it != cache().entries.end()) return it->second->first;
    }
    std::vector<NormalForm> out;
    switch (tag->label) {
        case CaseLabel::Zero:
            for (auto& d : all_case0(nn[0], nn[1], mm[0])) out.push_back(make_case0(nn, mm, d));
            break;
        case CaseLabel::IIIprime:
            for (auto& d : all_caseIIIprime(mm)) out.push_back(make_caseIIIprime(nn, mm, d));
            break;
        case CaseLabel::I: out = catalog_I(*tag, nn, mm); break;
        case CaseLabel::II:
            out = tag->subcase == "(2,n-2)" ? catalog_pair_units(*tag, nn, mm, false)
                                            : catalog_pair_units(*tag, nn, mm, true);
            break;
        case CaseLabel::III:
            out = tag->subcase == "(1,n-1)" ? catalog_single_units(*tag, nn, mm, false)
                                            : catalog_single_units(*tag, nn, mm, true);
            break;
        case CaseLabel::Iprime:
            out = catalog_Iprime_m2(*tag, nn, mm);
            break;
        case CaseLabel::IIprime: break;
    }
    std::sort(out.begin(), out.end());
    auto fam = invariant_family(nn, mm);
    auto entry = std::make_shared<std::pair<std::vector<NormalForm>, std::map<Signature, std::size_t>>>();
    entry->first = out;
    for (std::size_t i = 0; i < out.size(); ++i) entry->second.emplace(signature(realize(out[i]), fam), i);
    if (entry->second.size() != out.size())
        throw std::logic_error("catalog for " + key + " has colliding signatures");
    std::lock_guard<std::mutex> lk(cache().mu);
    cache().entries.emplace(key, entry);
    return out;
}

NormalForm reduce_by_catalog(const QFlag& f, const Composition& nn, const CaseTag& tag) {
    auto rows = matching_rows(nn, f.type);
    if (std::find(rows.begin(), rows.end(), tag) == rows.end())
        throw std::invalid_argument("reduce_by_catalog: pair does not satisfy case " + tag.describe());
    if (!tag.injective) throw NonInjective(tag, "case " + tag.describe() + " is not separated by invariant ranks");
    auto first = classify_pair(nn, f.type);
    if (!(*first == tag))
        throw std::invalid_argument("reduce_by_catalog: catalogs are indexed by the first matching row " +
                                    first->describe());
    enumerate_normal_forms(nn, f.type);
    std::string key = tag.name() + "|" + nn.to_string() + "|" + f.type.to_string();
    std::shared_ptr<const std::pair<std::vector<NormalForm>, std::map<Signature, std::size_t>>> entry;
    {
        std::lock_guard<std::mutex> lk(cache().mu);
        entry = cache().entries.at(key);
    }
    auto sig = signature(f, invariant_family(nn, f.type));
    auto it = entry->second.find(sig);
    if (it == entry->second.end())
        throw std::logic_error("reduce_by_catalog: signature missing from the " + tag.describe() + " catalog");
    return entry->first[it->second];
}

NormalForm reduce(const QFlag& f, const Composition& nn) {
    auto tag = classify_pair(nn, f.type);
    if (!tag) throw InfinitePair("no row of the table matches nn=" + nn.to_string() + " mm=" + f.type.to_string());
    if (!tag->injective) throw NonInjective(*tag, "case " + tag->describe() + ": no normal form by invariant ranks");
    if (tag->label == CaseLabel::Zero) return reduce_case0(f, nn);
    if (tag->label == CaseLabel::IIIprime) return reduce_caseIIIprime(f, nn);
    return reduce_by_catalog(f, nn, *tag);
}

bool closed_criterion(const NormalForm& nf) {
    if (nf.c0) {
        const auto& d = *nf.c0;
        if (!d.pairs.empty()) return false;
        for (int t = 0; t < d.r(); ++t)
            if (d.i_zero[t] != t + 1) return false;
        for (std::size_t t = 0; t < d.j_zero.size(); ++t)
            if (d.j_zero[t] != static_cast<int>(t) + 1) return false;
        return true;
    }
    if (nf.c3p) {
        const auto& d = *nf.c3p;
        if (d.k() != 0) return false;
        int hi = 0;
        for (const auto& b : d.blocks) {
            if (b.empty()) continue;
            if (b.front() < hi) return false;
            hi = b.back();
        }
        return true;
    }
    // Column forms: every column a basis vector, and at each step of the flag
    // the vectors used in each block form an initial segment of that block
    // (final segment on the dual side).
    Composition fn = permute_blocks(nf.nn, nf.order);
    Composition ft = nf.dual ? nf.mm.reversed() : nf.mm;
    std::vector<int> blk;
    for (std::size_t b = 0; b < fn.length(); ++b)
        for (int i = 0; i < fn[b]; ++i) blk.push_back(static_cast<int>(b));
    std::vector<int> used(fn.length(), 0);
    std::vector<bool> seen(fn.n(), false);
    std::size_t c = 0;
    for (std::size_t s = 1; s < ft.length(); ++s) {
        for (; c < static_cast<std::size_t>(ft.prefix(s)); ++c) {
            if (nf.columns[c].size() != 1) return false;
            int r = nf.columns[c][0];
            seen[r] = true;
            ++used[blk[r]];
        }
        for (std::size_t b = 0; b < fn.length(); ++b) {
            int st = fn.prefix(b);
            for (int t = 0; t < fn[b]; ++t) {
                bool want = nf.dual ? t >= fn[b] - used[b] : t < used[b];
                if (seen[st + t] != want) return false;
            }
        }
    }
    return true;
}

namespace {

QFlag qflag(const Composition& mm, const std::vector<std::vector<long>>& rows) {
    return canonicalize(mm, QMatrix::from_rows(QQ, rows));
}

const std::vector<std::vector<long>> kI1 = {{0, 1, 0}, {0, 0, 1}, {1, 0, 0}, {0, 0, 1}, {1, 1, 0}};
const std::vector<std::vector<long>> kI2 = {{0, 1, 0}, {0, 0, 1}, {1, 0, 0}, {0, 1, 1}, {1, 1, 0}};
const std::vector<std::vector<long>> kII1 = {{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1},
                                             {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 1, 1, 0}};
const std::vector<std::vector<long>> kII2 = {{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1},
                                             {0, 1, 0, 0}, {0, 0, 1, 1}, {0, 1, 1, 0}};

// Embed a base witness (rows `base`, columns grouped by `base_cols`) into a
// frame of size n: base row r goes to frame row rowmap[r], the remaining frame
// rows become extra basis vectors appended to the listed column blocks.
QMatrix pad_witness(const std::vector<std::vector<long>>& base, const std::vector<int>& rowmap, int n,
                    const std::vector<int>& base_cols, const std::vector<int>& target_cols) {
    std::vector<bool> taken(n, false);
    for (int r : rowmap) taken[r] = true;
    std::vector<int> extra;
    for (int r = 0; r < n; ++r)
        if (!taken[r]) extra.push_back(r);
    int d = std::accumulate(target_cols.begin(), target_cols.end(), 0);
    QMatrix m(QQ, n, d);
    std::size_t e = 0;
    int bc = 0, tc = 0;
    for (std::size_t b = 0; b < target_cols.size(); ++b) {
        int have = b < base_cols.size() ? base_cols[b] : 0;
        if (have > target_cols[b]) throw std::invalid_argument("witness does not fit");
        for (int t = 0; t < have; ++t, ++bc, ++tc)
            for (std::size_t r = 0; r < base.size(); ++r) m(rowmap[r], tc) = base[r][bc];
        for (int t = have; t < target_cols[b]; ++t, ++tc) {
            if (e == extra.size()) throw std::invalid_argument("witness does not fit");
            m(extra[e++], tc) = 1;
        }
    }
    return m;
}

// nn=(2,2), mm=(1,2,1): the first-block part of the line pairs to zero or
// not with the first-block part of the hyperplane's normal, which B' keeps.
const std::vector<std::vector<long>> kJ1 = {{1, 0, 0}, {1, 1, 0}, {0, 0, 1}, {1, 0, 1}};
const std::vector<std::vector<long>> kJ2 = {{1, 0, 0}, {1, 1, 0}, {1, 0, 1}, {1, 1, 1}};

WitnessPair witness_m1(const Composition& nn, const Composition& mm) {
    if (mm[0] != 1 || mm[1] < 2 || nn.min() < 2)
        throw std::invalid_argument("no padded construction for mm=" + mm.to_string());
    if (mm[2] == 1) {
        const int n = nn.n();
        std::vector<int> rowmap{0, 1, nn[0], nn[0] + 1};
        std::vector<int> tgt{1, mm[1]};
        WitnessPair w;
        w.nn = nn;
        w.mm = mm;
        w.tag = {CaseLabel::Iprime, "m1=1", false};
        w.d1 = canonicalize(mm, pad_witness(kJ1, rowmap, n, {1, 2}, tgt));
        w.d2 = canonicalize(mm, pad_witness(kJ2, rowmap, n, {1, 2}, tgt));
        w.construction = nn == Composition{2, 2} ? "nn=(2,2) mm=(1,2,1) pair"
                                                 : "nn=(2,2) mm=(1,2,1) pair padded by basis vectors";
        return w;
    }
    if (nn.n() < 5) throw std::invalid_argument("no padded construction for mm=" + mm.to_string());
    std::vector<int> order = nn[0] >= 3 ? std::vector<int>{0, 1} : std::vector<int>{1, 0};
    Composition fn = permute_blocks(nn, order);
    const int a = fn[0], n = nn.n();
    std::vector<int> rowmap{0, 1, 2, a, a + 1};
    std::vector<int> tgt{1, mm[1]};
    WitnessPair w;
    w.nn = nn;
    w.mm = mm;
    w.tag = {CaseLabel::Iprime, "m1=1", false};
    w.d1 = from_frame(canonicalize(mm, pad_witness(kI1, rowmap, n, {1, 2}, tgt)), nn, order);
    w.d2 = from_frame(canonicalize(mm, pad_witness(kI2, rowmap, n, {1, 2}, tgt)), nn, order);
    w.construction = "nn=(3,2) mm=(1,2,2) pair padded by basis vectors";
    return w;
}

}  // namespace

WitnessPair reference_witness_Iprime() {
    Composition nn{3, 2}, mm{1, 2, 2};
    return {qflag(mm, kI1), qflag(mm, kI2), {CaseLabel::Iprime, "m1=1", false}, nn, mm, "reference pair"};
}

WitnessPair reference_witness_Iprime_dual() {
    Composition nn{3, 2}, mm{2, 2, 1}, rm{1, 2, 2};
    QMatrix w = reverse_within_blocks(nn);
    WitnessPair p;
    p.nn = nn;
    p.mm = mm;
    p.tag = {CaseLabel::Iprime, "m3=1", false};
    p.d1 = dual(canonicalize(rm, w * QMatrix::from_rows(QQ, kI1)));
    p.d2 = dual(canonicalize(rm, w * QMatrix::from_rows(QQ, kI2)));
    p.construction = "orthogonal complements of the reference pair";
    return p;
}

WitnessPair reference_witness_IIprime() {
    Composition nn{4, 2}, mm{2, 2, 2};
    return {qflag(mm, kII1), qflag(mm, kII2), {CaseLabel::IIprime, "", false}, nn, mm, "reference pair"};
}

WitnessPair counterexample_pair(const Composition& nn, const Composition& mm) {
    std::optional<CaseTag> tag;
    for (const auto& t : matching_rows(nn, mm))
        if (!t.injective) {
            tag = t;
            break;
        }
    if (!tag) {
        if (matching_rows(nn, mm).empty()) throw InfinitePair("no row of the table matches");
        throw std::invalid_argument("pair is injective: no witness exists");
    }
    const int n = nn.n();
    if (tag->label == CaseLabel::IIprime) {
        std::vector<int> order = nn[0] == 2 ? std::vector<int>{1, 0} : std::vector<int>{0, 1};
        std::vector<int> rowmap{0, 1, 2, 3, n - 2, n - 1};
        std::vector<int> tgt{mm[0], mm[1]};
        WitnessPair w;
        w.nn = nn;
        w.mm = mm;
        w.tag = *tag;
        w.d1 = from_frame(canonicalize(mm, pad_witness(kII1, rowmap, n, {2, 2}, tgt)), nn, order);
        w.d2 = from_frame(canonicalize(mm, pad_witness(kII2, rowmap, n, {2, 2}, tgt)), nn, order);
        w.construction = nn == Composition{4, 2} ? "reference pair" : "nn=(4,2) mm=(2,2,2) pair padded by basis vectors";
        return w;
    }
    if (tag->subcase == "m1=1") {
        auto w = witness_m1(nn, mm);
        if (nn == Composition{3, 2} && mm == Composition{1, 2, 2}) w.construction = "reference pair";
        return w;
    }
    // m3 = 1: complements of a pair for the reversed type and the opposite Borel.
    WitnessPair base = witness_m1(nn, mm.reversed());
    QMatrix w = reverse_within_blocks(nn);
    WitnessPair p;
    p.nn = nn;
    p.mm = mm;
    p.tag = *tag;
    p.d1 = dual(act(w, base.d1));
    p.d2 = dual(act(w, base.d2));
    p.construction = "orthogonal complements of the reversed-type pair (" + base.construction + ")";
    return p;
}

}  // namespace flagorb
