#pragma once

#include "flagorb/normal_forms.hpp"

#include <gmpxx.h>

#include <string>
#include <utility>
#include <vector>

namespace flagorb {

struct CatalogEntry {
    NormalForm nf;
    QFlag flag;
    Signature sig;
    int dim = 0;
    bool closed = false;
};

struct OrbitCatalog {
    CaseTag tag;
    Composition nn, mm;
    JFamily fam;
    std::vector<CatalogEntry> entries;
    std::vector<std::pair<std::size_t, std::size_t>> covers;  // (lower, upper)

    // Index of the entry whose normal form text is `text`, or npos.
    std::size_t find(const std::string& text) const;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

struct HasseDiagram {
    std::vector<std::size_t> nodes;
    std::vector<std::pair<std::size_t, std::size_t>> edges;  // (lower, upper)
    std::vector<std::string> issues;  // covers that do not raise the dimension
};

// Throws InfinitePair, or NonInjective carrying a witness when one can be
// constructed.
OrbitCatalog enumerate(const Composition& nn, const Composition& mm);
OrbitCatalog enumerate(const CaseTag& tag, const Composition& nn, const Composition& mm);

// (1/n) multinomial(n; m) sum_k sigma_k(m) / (k-1)!, exact.
mpz_class count_multiplicity_free(int n, const Composition& mm);

// dim B'.f over Q: rank of X -> (below-block part of g^{-1} X g) on Lie(B').
int orbit_dimension(const QFlag& f, const Composition& nn);

bool is_closed(const NormalForm& nf);

// Fixed by the torus and elementary unipotent generators of B' over Q.
bool is_bprime_fixed(const QFlag& f, const Composition& nn);

HasseDiagram hasse_candidate(const OrbitCatalog& cat);

// `note` goes into a leading comment line.
std::string emit_dot(const HasseDiagram& h, const OrbitCatalog& cat, const std::string& note = "");

std::string catalog_text(const OrbitCatalog& cat);

// 64-bit FNV-1a of the serialized signature, as 16 hex digits.
std::string signature_hash(const Signature& sig, const JFamily& fam);

}  // namespace flagorb
