#include "flagorb/io.hpp"

#include <algorithm>
#include <regex>
#include <sstream>

namespace flagorb {

namespace {

std::string strip_bars(std::string s) {
    std::replace(s.begin(), s.end(), '|', ' ');
    return s;
}

long parse_long(const std::string& tok) {
    std::size_t pos = 0;
    long v = std::stol(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("bad entry '" + tok + "'");
    return v;
}

template <class F>
Matrix<F> read_entries(const F& K, std::istream& in, std::size_t rows, std::size_t cols) {
    Matrix<F> m(K, rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            std::string tok;
            if (!(in >> tok)) throw std::invalid_argument("matrix literal: too few entries");
            auto slash = tok.find('/');
            if (slash == std::string::npos) {
                m(i, j) = K.from_int(parse_long(tok));
            } else {
                m(i, j) = K.from_fraction(parse_long(tok.substr(0, slash)), parse_long(tok.substr(slash + 1)));
            }
        }
    std::string extra;
    if (in >> extra) throw std::invalid_argument("matrix literal: trailing token '" + extra + "'");
    return m;
}

template <class F>
std::string write_matrix(const Matrix<F>& m, const std::string& tag) {
    std::ostringstream os;
    os << m.rows() << " " << m.cols() << " " << tag << "\n" << m.to_string();
    return os.str();
}

}  // namespace

AnyMatrix parse_matrix_literal(const std::string& text) {
    std::istringstream in(strip_bars(text));
    long rows = 0, cols = 0;
    std::string field;
    if (!(in >> rows >> cols >> field) || rows < 0 || cols < 0)
        throw std::invalid_argument("matrix literal: expected '<rows> <cols> Q|F<p>'");
    if (field == "Q") return read_entries(Rational{}, in, rows, cols);
    if (field.size() > 1 && field[0] == 'F') {
        long p = parse_long(field.substr(1));
        if (p < 2) throw std::invalid_argument("matrix literal: bad field " + field);
        return read_entries(PrimeField(static_cast<std::uint32_t>(p)), in, rows, cols);
    }
    throw std::invalid_argument("matrix literal: unknown field '" + field + "'");
}

AnyFlag parse_flag_literal(const std::string& text) {
    static const std::regex head(R"(^\s*m:\s*([0-9,\s]+?)\s+of\s+n\s*=\s*([0-9]+)\s*\n)");
    std::smatch mt;
    if (!std::regex_search(text, mt, head)) throw std::invalid_argument("flag literal: expected 'm: <parts> of n=<n>'");
    std::string parts = mt[1].str();
    parts.erase(std::remove_if(parts.begin(), parts.end(), ::isspace), parts.end());
    Composition m = Composition::parse(parts);
    int n = std::stoi(mt[2].str());
    if (m.n() != n) throw std::invalid_argument("flag literal: parts do not sum to n");
    AnyMatrix mat = parse_matrix_literal(mt.suffix().str());
    return std::visit(
        [&](auto&& a) -> AnyFlag {
            if (static_cast<int>(a.rows()) != n) throw std::invalid_argument("flag literal: row count is not n");
            return canonicalize(m, a);
        },
        mat);
}

std::string matrix_literal(const QMatrix& m) { return write_matrix(m, "Q"); }

std::string matrix_literal(const FpMatrix& m) { return write_matrix(m, "F" + std::to_string(m.field().p)); }

std::string flag_literal(const QFlag& f) {
    return "m: " + f.type.to_string() + " of n=" + std::to_string(f.n()) + "\n" + matrix_literal(f.rep);
}

std::string flag_literal(const FpFlag& f) {
    return "m: " + f.type.to_string() + " of n=" + std::to_string(f.n()) + "\n" + matrix_literal(f.rep);
}

}  // namespace flagorb
