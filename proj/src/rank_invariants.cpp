#include "flagorb/rank.hpp"

#include <algorithm>
#include <sstream>

namespace flagorb {

JFamily invariant_family(const Composition& nn, const Composition& mm) {
    if (nn.n() != mm.n()) throw std::invalid_argument("compositions of different totals");
    JFamily fam;
    auto sets = blockwise_suffix_sets(nn);
    for (std::size_t s = 1; s < mm.length(); ++s)
        for (const auto& J : sets) fam.push_back(JEntry{J, static_cast<int>(s)});
    std::sort(fam.begin(), fam.end());
    return fam;
}

bool dominates(const Signature& a, const Signature& b) {
    if (a.values.size() != b.values.size()) throw std::invalid_argument("signatures over different families");
    for (std::size_t i = 0; i < a.values.size(); ++i)
        if (a.values[i] > b.values[i]) return false;
    return true;
}

std::string format_J(const std::vector<int>& J) {
    std::ostringstream os;
    os << "{";
    for (std::size_t i = 0; i < J.size(); ++i) os << (i ? "," : "") << J[i] + 1;
    os << "}";
    return os.str();
}

std::string serialize_signature(const Signature& sig, const JFamily& fam) {
    if (sig.values.size() != fam.size()) throw std::invalid_argument("signature does not match family");
    std::ostringstream os;
    for (std::size_t i = 0; i < fam.size(); ++i)
        os << "s=" << fam[i].s << " J=" << format_J(fam[i].J) << " r=" << sig.values[i] << '\n';
    return os.str();
}

int bruhat_rij(const Permutation& sigma, int i, int j) {
    const int n = static_cast<int>(sigma.size());
    if (i < 1 || j < 1 || i > n - 1 || j > n - 1) throw std::out_of_range("bruhat index");
    int c = 0;
    for (int s = 0; s < j; ++s)
        if (sigma[s] + 1 >= n - i + 1) ++c;
    return c;
}

std::vector<int> bruhat_vector(const Permutation& sigma) {
    const int n = static_cast<int>(sigma.size());
    std::vector<int> v;
    for (int i = 1; i < n; ++i)
        for (int j = 1; j < n; ++j) v.push_back(bruhat_rij(sigma, i, j));
    return v;
}

}  // namespace flagorb
