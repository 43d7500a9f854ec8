#ifndef TML_PARSER_HPP
#define TML_PARSER_HPP

#include "tml/patterns.hpp"
#include "tml/syntax.hpp"

namespace tml {

struct ParseError : Error {
    ParseError(const std::string& msg, SourceSpan span)
        : Error(msg + " at " + std::to_string(span.line) + ":" +
                std::to_string(span.column)),
          span(span) {}
    SourceSpan span;
};

// Surface grammar is documented in docs/grammar.ebnf.  `if` desugars to a
// case over the boolean sum conversion; list literals and :: desugar to the
// prelude list encoding; c@L parses to a labeled-literal marker.
ExprPtr parse_expr(const std::string& text);
TypePtr parse_type(const std::string& text);

// `_` is the hole, `=` the exact-match diamond; list and tuple sugar mirror
// the value syntax.
PatternPtr parse_pattern(const std::string& text);

std::string pretty_expr(const ExprPtr& e);
std::string pretty_trace(const TracePtr& t);

}  // namespace tml

#endif
