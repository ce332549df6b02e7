#include "flagorb/io.hpp"
#include "flagorb/oracle.hpp"
#include "flagorb/orbit_space.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace flagorb;

namespace {

enum Exit { kOk = 0, kUsage = 1, kInfinite = 2, kNonInjective = 3, kMismatch = 4 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_source(const std::string& path) {
    if (path == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Composition comp(const std::string& s, const char* what) {
    try {
        return Composition::parse(s);
    } catch (const std::exception& e) {
        throw UsageError(std::string("bad ") + what + " '" + s + "': " + e.what());
    }
}

AnyFlag load_flag(const std::string& path, const Composition* mm, int n) {
    AnyFlag f;
    try {
        f = parse_flag_literal(read_source(path));
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    std::visit(
        [&](const auto& g) {
            if (mm && g.type != *mm) throw UsageError("flag type " + g.type.to_string() + " is not --mm " + mm->to_string());
            if (n >= 0 && static_cast<int>(g.n()) != n) throw UsageError("flag dimension does not match --nn");
        },
        f);
    return f;
}

QFlag rational(const AnyFlag& f) {
    if (auto q = std::get_if<QFlag>(&f)) return *q;
    throw UsageError("this command needs a flag over Q");
}

void write_output(const std::string& text, const std::string& out) {
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(out);
    if (!os) throw UsageError("cannot write " + out);
    os << text;
}

std::string transcript(const WitnessPair& w, bool oracle) {
    std::ostringstream os;
    auto fam = invariant_family(w.nn, w.mm);
    auto s1 = signature(w.d1, fam), s2 = signature(w.d2, fam);
    os << "case " << w.tag.describe() << " nn=" << w.nn.to_string() << " mm=" << w.mm.to_string() << "\n";
    os << "construction: " << w.construction << "\n";
    os << "D1:\n" << flag_literal(w.d1) << "D2:\n" << flag_literal(w.d2);
    os << "invariant ranks (D1 D2):\n";
    std::size_t agree = 0;
    for (std::size_t t = 0; t < fam.size(); ++t) {
        os << "s=" << fam[t].s << " J=" << format_J(fam[t].J) << " " << s1.values[t] << " " << s2.values[t]
           << (s1.values[t] == s2.values[t] ? "" : "  differ") << "\n";
        agree += s1.values[t] == s2.values[t];
    }
    os << agree << " of " << fam.size() << " invariant ranks agree\n";
    int a = orbit_dimension(w.d1, w.nn), b = orbit_dimension(w.d2, w.nn);
    os << "orbit dimensions: " << a << " " << b << (a != b ? " (so the orbits differ)" : "") << "\n";
    if (oracle) {
        try {
            bool same = same_orbit_mod(w.nn, w.d1, w.d2, 2);
            os << "GF(2) orbit of D1 contains D2: " << (same ? "yes" : "no") << "\n";
        } catch (const BudgetExceeded&) {
            os << "GF(2) orbit check skipped: budget exceeded\n";
        }
    }
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"B'-orbits on flag varieties"};
    app.require_subcommand(1);
    std::string nn_s, mm_s, flag_path, out_path, case_s;
    int n = 0;
    unsigned q = 2;
    std::size_t budget = kDefaultBudget;
    bool dot = false, intersections = false, strict = false, no_oracle = false;

    auto* classify = app.add_subcommand("classify", "Row of the finiteness table for the pair");
    classify->add_option("--nn", nn_s, "block sizes of G'")->required();
    classify->add_option("--mm", mm_s, "type of the flags")->required();

    auto* normalize = app.add_subcommand("normalize", "Normal form of a flag");
    normalize->add_option("--nn", nn_s)->required();
    normalize->add_option("--mm", mm_s);
    normalize->add_option("--flag", flag_path, "flag literal file, - for stdin")->required();

    auto* sigcmd = app.add_subcommand("signature", "Invariant ranks of a flag");
    sigcmd->add_option("--nn", nn_s)->required();
    sigcmd->add_option("--mm", mm_s);
    sigcmd->add_option("--flag", flag_path)->required();

    auto* enumcmd = app.add_subcommand("enumerate", "Catalog of all orbits");
    enumcmd->add_option("--nn", nn_s)->required();
    enumcmd->add_option("--mm", mm_s)->required();
    enumcmd->add_option("--out", out_path, "write the catalog here");

    auto* count = app.add_subcommand("count", "Number of orbits");
    auto* count_n = count->add_option("--n", n, "closed formula for nn=(n-1,1)");
    auto* count_nn = count->add_option("--nn", nn_s, "count the catalog instead");
    count->add_option("--mm", mm_s)->required();
    count_n->excludes(count_nn);

    auto* hasse = app.add_subcommand("hasse", "Candidate closure order");
    hasse->add_option("--nn", nn_s)->required();
    hasse->add_option("--mm", mm_s)->required();
    hasse->add_flag("--dot", dot, "emit DOT");

    auto* dimension = app.add_subcommand("dimension", "Orbit dimension of a flag");
    dimension->add_option("--nn", nn_s)->required();
    dimension->add_option("--mm", mm_s);
    dimension->add_option("--flag", flag_path)->required();

    auto* oracle = app.add_subcommand("oracle", "Brute-force check over GF(q)");
    oracle->add_option("--nn", nn_s)->required();
    oracle->add_option("--mm", mm_s)->required();
    oracle->add_option("--q", q, "prime")->check(CLI::Range(2u, 251u));
    oracle->add_option("--budget", budget, "maximum number of flags");
    oracle->add_flag("--intersections", intersections, "also check coset intersections");
    oracle->add_flag("--strict", strict, "signature collisions fail even for non-injective pairs");

    auto* counter = app.add_subcommand("counterexample", "Two orbits with equal invariant ranks");
    counter->add_option("--case", case_s, "Iprime, Iprime-dual or IIprime")
        ->check(CLI::IsMember({"Iprime", "Iprime-dual", "IIprime"}));
    counter->add_option("--nn", nn_s);
    counter->add_option("--mm", mm_s);
    counter->add_flag("--no-oracle", no_oracle, "skip the GF(2) orbit check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*classify) {
            auto tag = classify_pair(comp(nn_s, "--nn"), comp(mm_s, "--mm"));
            std::cout << (tag ? tag->describe() : "infinite") << "\n";
        } else if (*normalize) {
            Composition nn = comp(nn_s, "--nn");
            std::optional<Composition> mm;
            if (!mm_s.empty()) mm = comp(mm_s, "--mm");
            auto f = rational(load_flag(flag_path, mm ? &*mm : nullptr, nn.n()));
            std::cout << reduce(f, nn).text << "\n";
        } else if (*sigcmd) {
            Composition nn = comp(nn_s, "--nn");
            std::optional<Composition> mm;
            if (!mm_s.empty()) mm = comp(mm_s, "--mm");
            auto f = load_flag(flag_path, mm ? &*mm : nullptr, nn.n());
            std::visit(
                [&](const auto& g) {
                    auto fam = invariant_family(nn, g.type);
                    std::cout << serialize_signature(signature(g, fam), fam);
                },
                f);
        } else if (*enumcmd) {
            write_output(catalog_text(enumerate(comp(nn_s, "--nn"), comp(mm_s, "--mm"))), out_path);
        } else if (*count) {
            Composition mm = comp(mm_s, "--mm");
            if (*count_nn) {
                std::cout << enumerate(comp(nn_s, "--nn"), mm).entries.size() << "\n";
            } else {
                if (!*count_n) throw UsageError("count needs --n or --nn");
                std::cout << count_multiplicity_free(n, mm).get_str() << "\n";
            }
        } else if (*hasse) {
            auto cat = enumerate(comp(nn_s, "--nn"), comp(mm_s, "--mm"));
            auto h = hasse_candidate(cat);
            if (dot) {
                std::string note;
                if (!h.issues.empty()) note = std::to_string(h.issues.size()) + " issue(s): " + h.issues.front();
                std::cout << emit_dot(h, cat, note);
            } else {
                for (auto [a, b] : h.edges) std::cout << "cover " << a << " " << b << "\n";
                for (const auto& s : h.issues) std::cout << "issue " << s << "\n";
            }
        } else if (*dimension) {
            Composition nn = comp(nn_s, "--nn");
            std::optional<Composition> mm;
            if (!mm_s.empty()) mm = comp(mm_s, "--mm");
            std::cout << orbit_dimension(rational(load_flag(flag_path, mm ? &*mm : nullptr, nn.n())), nn) << "\n";
        } else if (*oracle) {
            Composition nn = comp(nn_s, "--nn"), mm = comp(mm_s, "--mm");
            if (nn.n() != mm.n()) throw UsageError("--nn and --mm have different totals");
            if (!is_prime(q)) throw UsageError("--q must be prime");
            if (!classify_pair(nn, mm)) throw InfinitePair("no row of the table matches");
            ValidateOptions opt;
            opt.intersections = intersections;
            opt.strict = strict;
            auto rep = run_oracle(nn, mm, q, opt, budget);
            std::cout << rep.to_string();
            return rep.ok() ? kOk : kMismatch;
        } else if (*counter) {
            WitnessPair w;
            if (!nn_s.empty() || !mm_s.empty()) {
                if (nn_s.empty() || mm_s.empty()) throw UsageError("give both --nn and --mm");
                Composition nn = comp(nn_s, "--nn"), mm = comp(mm_s, "--mm");
                w = find_witness(nn, mm);
                if (!case_s.empty() && w.tag.name() != (case_s == "IIprime" ? "II'" : "I'"))
                    throw UsageError("pair is case " + w.tag.describe() + ", not " + case_s);
            } else if (case_s == "Iprime") {
                w = reference_witness_Iprime();
            } else if (case_s == "Iprime-dual") {
                w = reference_witness_Iprime_dual();
            } else if (case_s == "IIprime") {
                w = reference_witness_IIprime();
            } else {
                throw UsageError("counterexample needs --case or --nn/--mm");
            }
            std::cout << transcript(w, !no_oracle);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const InfinitePair& e) {
        std::cerr << "infinite: " << e.what() << "\n";
        return kInfinite;
    } catch (const NonInjective& e) {
        std::cerr << "non-injective: " << e.what() << "\n";
        return kNonInjective;
    } catch (const BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kOk;
}
