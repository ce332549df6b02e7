#include "flagorb/flag.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace flagorb {

Composition::Composition(std::vector<int> p) : parts(std::move(p)) {
    if (parts.empty()) throw std::invalid_argument("empty composition");
    for (int x : parts)
        if (x < 1) throw std::invalid_argument("composition parts must be positive");
}

int Composition::n() const { return std::accumulate(parts.begin(), parts.end(), 0); }

int Composition::min() const { return *std::min_element(parts.begin(), parts.end()); }

int Composition::prefix(std::size_t s) const {
    if (s > parts.size()) throw std::out_of_range("prefix index");
    return std::accumulate(parts.begin(), parts.begin() + static_cast<long>(s), 0);
}

Composition Composition::reversed() const {
    std::vector<int> r(parts.rbegin(), parts.rend());
    return Composition(r);
}

std::string Composition::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? "," : "") << parts[i];
    return os.str();
}

Composition Composition::parse(const std::string& s) {
    std::vector<int> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) throw std::invalid_argument("bad composition: " + s);
        std::size_t pos = 0;
        int x = std::stoi(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument("bad composition: " + s);
        v.push_back(x);
    }
    return Composition(v);
}

std::vector<Composition> all_compositions(int n) {
    std::vector<Composition> out;
    if (n < 1) return out;
    // Bit i of mask set = cut after position i+1.
    for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
        std::vector<int> parts;
        int cur = 1;
        for (int i = 0; i < n - 1; ++i) {
            if (mask & (1u << i)) {
                parts.push_back(cur);
                cur = 1;
            } else {
                ++cur;
            }
        }
        parts.push_back(cur);
        out.emplace_back(parts);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<std::vector<int>> subcomposition_witness(const Composition& m, const Composition& n) {
    if (m.n() != n.n()) throw std::invalid_argument("compositions of different totals");
    std::vector<int> w;
    std::size_t k = 0;
    for (int target : m.parts) {
        int sum = 0, cnt = 0;
        while (k < n.length() && sum < target) sum += n[k++], ++cnt;
        if (sum != target) return std::nullopt;
        w.push_back(cnt);
    }
    return w;
}

Permutation compose(const Permutation& a, const Permutation& b) {
    Permutation r(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = a[b[i]];
    return r;
}

Permutation inverse_permutation(const Permutation& s) {
    Permutation r(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) r[s[i]] = static_cast<int>(i);
    return r;
}

bool is_permutation(const Permutation& s) {
    std::vector<bool> seen(s.size(), false);
    for (int x : s) {
        if (x < 0 || x >= static_cast<int>(s.size()) || seen[x]) return false;
        seen[x] = true;
    }
    return true;
}

std::vector<Permutation> all_permutations(int n) {
    Permutation p(n);
    std::iota(p.begin(), p.end(), 0);
    std::vector<Permutation> out;
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

Composition permute_blocks(const Composition& nn, const std::vector<int>& order) {
    std::vector<int> parts;
    for (int b : order) parts.push_back(nn[b]);
    return Composition(parts);
}

Permutation block_permutation(const Composition& nn, const std::vector<int>& order) {
    if (order.size() != nn.length()) throw std::invalid_argument("block order length");
    Permutation sigma(nn.n());
    int pos = 0;
    for (int b : order) {
        int start = nn.prefix(b);
        for (int t = 0; t < nn[b]; ++t) sigma[start + t] = pos++;
    }
    if (!is_permutation(sigma)) throw std::invalid_argument("block order is not a permutation");
    return sigma;
}

ParabolicSpec parabolic_for_rows(int n, const std::vector<int>& J) {
    std::vector<bool> in(n, false);
    for (int j : J) in[j] = true;
    Permutation tau;
    for (int i = 0; i < n; ++i)
        if (!in[i]) tau.push_back(i);
    for (int i = 0; i < n; ++i)
        if (in[i]) tau.push_back(i);
    int q = static_cast<int>(J.size());
    std::ostringstream os;
    os << "P_J J={";
    for (std::size_t i = 0; i < J.size(); ++i) os << (i ? "," : "") << J[i] + 1;
    os << "}";
    std::vector<int> shape;
    if (n - q > 0) shape.push_back(n - q);
    if (q > 0) shape.push_back(q);
    return ParabolicSpec{Composition(shape), tau, os.str()};
}

std::vector<std::vector<int>> blockwise_suffix_sets(const Composition& nn, bool proper_only) {
    const std::size_t k = nn.length();
    std::vector<std::vector<int>> out;
    // Choice per block: how many trailing rows are taken (0..n_b).
    std::vector<int> take(k, 0);
    while (true) {
        std::vector<int> J;
        for (std::size_t b = 0; b < k; ++b) {
            int end = nn.prefix(b + 1);
            for (int r = end - take[b]; r < end; ++r) J.push_back(r);
        }
        bool full = static_cast<int>(J.size()) == nn.n();
        if (!J.empty() && !(proper_only && full)) out.push_back(J);
        std::size_t b = 0;
        while (b < k && take[b] == nn[b]) take[b++] = 0;
        if (b == k) break;
        ++take[b];
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<ParabolicSpec> qfamily(QTarget which, const Composition& c) {
    std::vector<ParabolicSpec> out;
    if (which == QTarget::BPrime) {
        for (const auto& J : blockwise_suffix_sets(c, true)) out.push_back(parabolic_for_rows(c.n(), J));
    } else {
        Permutation id(c.n());
        std::iota(id.begin(), id.end(), 0);
        for (std::size_t s = 1; s < c.length(); ++s) {
            int d = c.prefix(s);
            out.push_back(ParabolicSpec{Composition({d, c.n() - d}), id, "P_(" + std::to_string(d) + "," +
                                                                          std::to_string(c.n() - d) + ")"});
        }
    }
    return out;
}

}  // namespace flagorb
