#include "flagorb/matrix.hpp"

#include <vector>

namespace flagorb {

std::uint32_t primitive_root(std::uint32_t p) {
    if (p == 2) return 1;
    std::vector<std::uint32_t> factors;
    std::uint32_t m = p - 1;
    for (std::uint32_t d = 2; d * d <= m; ++d)
        if (m % d == 0) {
            factors.push_back(d);
            while (m % d == 0) m /= d;
        }
    if (m > 1) factors.push_back(m);
    PrimeField K(p);
    for (std::uint32_t g = 2; g < p; ++g) {
        bool ok = true;
        for (auto f : factors)
            if (K.pow(g, (p - 1) / f) == 1) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
    throw std::logic_error("no primitive root");
}

FpMatrix reduce_mod(const QMatrix& m, const PrimeField& K) {
    FpMatrix r(K, m.rows(), m.cols());
    mpz_class p(K.p);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const mpq_class& x = m(i, j);
            mpz_class num = x.get_num() % p, den = x.get_den() % p;
            if (num < 0) num += p;
            if (den == 0) throw std::domain_error("denominator vanishes mod " + std::to_string(K.p));
            r(i, j) = K.mul(static_cast<std::uint32_t>(num.get_ui()), K.inv(static_cast<std::uint32_t>(den.get_ui())));
        }
    return r;
}

QMatrix lift(const FpMatrix& m, bool balanced) {
    QMatrix r(Rational{}, m.rows(), m.cols());
    const std::uint32_t p = m.field().p;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            long v = m(i, j);
            if (balanced && v > static_cast<long>(p / 2)) v -= p;
            r(i, j) = v;
        }
    return r;
}

}  // namespace flagorb
