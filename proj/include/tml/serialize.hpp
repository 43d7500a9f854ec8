#ifndef TML_SERIALIZE_HPP
#define TML_SERIALIZE_HPP

#include "tml/annot.hpp"
#include "tml/patterns.hpp"
#include "tml/typecheck.hpp"

namespace tml {

struct MalformedDocument : Error {
    MalformedDocument(const std::string& msg, std::size_t offset)
        : Error(msg + " at byte " + std::to_string(offset)), offset(offset) {}
    std::size_t offset;
};

// Canonical tree encoding: prefix s-expressions with fixed tag names, single
// spaces, quoted identifiers.  Serialization of an unmodified document is
// byte-identical under a round trip.

std::string serialize_type(const TypePtr& t);
std::string serialize_expr(const ExprPtr& e);
std::string serialize_value(const ValuePtr& v);
std::string serialize_trace(const TracePtr& t);
std::string serialize_pattern(const PatternPtr& p);
std::string serialize_pattern_env(const PatternEnv& rho);
std::string serialize_annotated_env(const AnnotatedEnv<PathAnn>& env);

TypePtr deserialize_type(const std::string& bytes);
ExprPtr deserialize_expr(const std::string& bytes);
ValuePtr deserialize_value(const std::string& bytes);
TracePtr deserialize_trace_node(const std::string& bytes);
PatternPtr deserialize_pattern(const std::string& bytes);
PatternEnv deserialize_pattern_env(const std::string& bytes);
AnnotatedEnv<PathAnn> deserialize_annotated_env(const std::string& bytes);

// Versioned record of a traced run: label typings, the annotated input
// environment, the trace, and its value.
struct TraceDocument {
    int version = 1;
    TypeEnv label_types;
    AnnotatedEnv<PathAnn> env;
    TracePtr trace;
    ValuePtr value;
};

std::string serialize_document(const TraceDocument& doc);
TraceDocument deserialize_document(const std::string& bytes);

}  // namespace tml

#endif
