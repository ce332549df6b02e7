#pragma once

#include "flagorb/flag.hpp"

#include <string>
#include <variant>

namespace flagorb {

// Matrix literal:  "<rows> <cols> Q" or "<rows> <cols> F<p>", then the
// entries row by row (integers, or a/b over Q). '|' characters are ignored.
// Flag literal:    "m: 1,2,1 of n=4" followed by a matrix literal whose
// columns span the flag (n rows, m_1+...+m_{l-1} columns).
using AnyMatrix = std::variant<QMatrix, FpMatrix>;
using AnyFlag = std::variant<QFlag, FpFlag>;

AnyMatrix parse_matrix_literal(const std::string& text);
AnyFlag parse_flag_literal(const std::string& text);

std::string matrix_literal(const QMatrix& m);
std::string matrix_literal(const FpMatrix& m);
std::string flag_literal(const QFlag& f);
std::string flag_literal(const FpFlag& f);

}  // namespace flagorb
