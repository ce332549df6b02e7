#pragma once

#include "flagorb/rank.hpp"

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace flagorb {

enum class CaseLabel { Zero, I, II, III, Iprime, IIprime, IIIprime };

struct CaseTag {
    CaseLabel label = CaseLabel::Zero;
    std::string subcase;  // "(2,n-2)", "m2=1", "(n-1,1)", ...
    bool injective = true;

    std::string name() const;  // "0", "I", ..., "III'"
    std::string describe() const;
    bool operator==(const CaseTag& o) const { return label == o.label && subcase == o.subcase; }
};

std::string label_name(CaseLabel l);

// First row of the finiteness table (in display order) that the pair satisfies.
std::optional<CaseTag> classify_pair(const Composition& nn, const Composition& mm);

// Every row the pair satisfies, in display order.
std::vector<CaseTag> matching_rows(const Composition& nn, const Composition& mm);

struct WitnessPair;

struct NonInjective : std::runtime_error {
    CaseTag tag;
    std::shared_ptr<const WitnessPair> witness;  // may be empty
    NonInjective(CaseTag t, const std::string& what, std::shared_ptr<const WitnessPair> w = nullptr)
        : std::runtime_error(what), tag(std::move(t)), witness(std::move(w)) {}
};

struct InfinitePair : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Normal form of case 0: columns (0; f_i) for i in i_zero, (e_j; f_i) for
// each pair, (e_j; 0) for j in j_zero. Indices 1-based.
struct Case0Data {
    std::vector<int> i_zero;                  // sorted
    std::vector<std::pair<int, int>> pairs;   // (i, j), sorted by i
    std::vector<int> j_zero;                  // sorted
    int r() const { return static_cast<int>(i_zero.size()); }
    int s() const { return static_cast<int>(i_zero.size() + pairs.size()); }
};

// Normal form of case III' in the frame nn = (n-1, 1). Blocks are 1-based,
// indices of e_1..e_{n-1} are 1-based. blocks[j] lists the e's of block j
// other than the special column of block j0; chain lists (index, block) of the
// summands of the special column, by increasing block.
struct IIIpData {
    int j0 = 1;
    std::vector<std::vector<int>> blocks;
    std::vector<std::pair<int, int>> chain;
    int k() const { return static_cast<int>(chain.size()); }
};

struct NormalForm {
    CaseTag tag;
    Composition nn, mm;
    std::string text;  // stable serialization, also the identity of the form
    std::optional<Case0Data> c0;
    std::optional<IIIpData> c3p;
    // Frame data for forms given by 0/1 columns: the frame is nn with blocks
    // reordered by `order`; with `dual` the columns describe the orthogonal
    // flag of type mm reversed.
    std::vector<int> order;
    bool dual = false;
    std::vector<std::vector<int>> columns;  // 0-based frame rows of each column

    bool operator==(const NormalForm& o) const { return text == o.text; }
    bool operator<(const NormalForm& o) const { return text < o.text; }
};

struct TriangularReduction {
    std::vector<int> indices;  // 1-based i_1 < ... < i_r
    QMatrix A;                 // upper triangular, p x p
    QMatrix B;                 // invertible, q x q
    QMatrix result;            // A * a * B^{-1}
};

// T(p) x GL(q) reduction of a p x q matrix to (e_{i_1} ... e_{i_r} 0 ... 0).
TriangularReduction triangular_reduce(const QMatrix& a);

NormalForm reduce_case0(const QFlag& f, const Composition& nn);
NormalForm decode_signature_case0(const Signature& sig, const Composition& nn, const Composition& mm);
NormalForm reduce_caseIIIprime(const QFlag& f, const Composition& nn);
NormalForm reduce_by_catalog(const QFlag& f, const Composition& nn, const CaseTag& tag);

// Dispatch on the first matching row.
NormalForm reduce(const QFlag& f, const Composition& nn);

QFlag realize(const NormalForm& nf);
// The same 0/1 construction carried out over GF(p).
FpFlag realize_mod(const NormalForm& nf, const PrimeField& K);

NormalForm make_case0(const Composition& nn, const Composition& mm, Case0Data d);
NormalForm make_caseIIIprime(const Composition& nn, const Composition& mm, IIIpData d);

// All normal forms of an injective pair, ordered by text.
std::vector<NormalForm> enumerate_normal_forms(const Composition& nn, const Composition& mm);

// Frame block order used for a case (identity unless the case relabels
// blocks).
std::vector<int> frame_order(const CaseTag& tag, const Composition& nn);

// Closed-orbit criterion read off the normal form.
bool closed_criterion(const NormalForm& nf);

struct WitnessPair {
    QFlag d1, d2;
    CaseTag tag;
    Composition nn, mm;
    std::string construction;
};

// Constructed witnesses for the non-injective rows; throws when the pair is
// injective or no construction applies.
WitnessPair counterexample_pair(const Composition& nn, const Composition& mm);

// Reference witnesses for the three base configurations.
WitnessPair reference_witness_Iprime();        // nn=(3,2), mm=(1,2,2)
WitnessPair reference_witness_Iprime_dual();   // nn=(3,2), mm=(2,2,1)
WitnessPair reference_witness_IIprime();       // nn=(4,2), mm=(2,2,2)

// Value of the family entry (J, s) in sig; J 0-based.
int sig_value(const Signature& sig, const JFamily& fam, const std::vector<int>& J, int s);

}  // namespace flagorb
