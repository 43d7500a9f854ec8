#ifndef TML_SECURITY_HPP
#define TML_SECURITY_HPP

#include <functional>

#include "tml/eval.hpp"
#include "tml/patterns.hpp"
#include "tml/typecheck.hpp"

namespace tml {

// The abstract framework: a finite universe of traces, boolean trace
// queries, provenance views into an observation space, and brute-force
// checks of (positive/negative) disclosure and obfuscation.

template <class Tr>
using TraceQuery = std::function<bool(const Tr&)>;

template <class Om>
using ProvQuery = std::function<bool(const Om&)>;

// Observations need an equality; we group universe elements by view image.
template <class Tr, class Om>
struct ProvView {
    std::function<Om(const Tr&)> view;
    std::function<bool(const Om&, const Om&)> equal;
};

template <class Tr, class Om>
std::vector<std::vector<const Tr*>> fibers(const std::vector<Tr>& universe,
                                           const ProvView<Tr, Om>& p) {
    std::vector<Om> images;
    std::vector<std::vector<const Tr*>> groups;
    for (const Tr& t : universe) {
        Om o = p.view(t);
        bool placed = false;
        for (std::size_t i = 0; i < images.size(); i++) {
            if (p.equal(images[i], o)) {
                groups[i].push_back(&t);
                placed = true;
                break;
            }
        }
        if (!placed) {
            images.push_back(std::move(o));
            groups.push_back({&t});
        }
    }
    return groups;
}

// Q is disclosed by P: equal views force equal answers.
template <class Tr, class Om>
bool check_disclosure(const std::vector<Tr>& universe, const ProvView<Tr, Om>& p,
                      const TraceQuery<Tr>& q) {
    for (const auto& group : fibers(universe, p)) {
        bool first = q(*group.front());
        for (const Tr* t : group)
            if (q(*t) != first) return false;
    }
    return true;
}

// Q is obfuscated by P: every trace has a view-equal partner answering
// differently.
template <class Tr, class Om>
bool check_obfuscation(const std::vector<Tr>& universe, const ProvView<Tr, Om>& p,
                       const TraceQuery<Tr>& q) {
    for (const auto& group : fibers(universe, p)) {
        bool seen_true = false, seen_false = false;
        for (const Tr* t : group) (q(*t) ? seen_true : seen_false) = true;
        if (!seen_true || !seen_false) return false;
    }
    return true;
}

template <class Tr, class Om>
bool check_positive_disclosure(const std::vector<Tr>& universe, const ProvView<Tr, Om>& p,
                               const TraceQuery<Tr>& q, const ProvQuery<Om>& pq) {
    for (const Tr& t : universe)
        if (pq(p.view(t)) && !q(t)) return false;
    return true;
}

template <class Tr, class Om>
bool check_negative_disclosure(const std::vector<Tr>& universe, const ProvView<Tr, Om>& p,
                               const TraceQuery<Tr>& q, const ProvQuery<Om>& pq) {
    for (const Tr& t : universe)
        if (!pq(p.view(t)) && q(t)) return false;
    return true;
}

template <class Tr, class Om>
bool check_positive_obfuscation(const std::vector<Tr>& universe, const ProvView<Tr, Om>& p,
                                const TraceQuery<Tr>& q) {
    for (const auto& group : fibers(universe, p)) {
        bool seen_true = false, seen_false = false;
        for (const Tr* t : group) (q(*t) ? seen_true : seen_false) = true;
        if (seen_true && !seen_false) return false;
    }
    return true;
}

template <class Tr, class Om>
bool check_negative_obfuscation(const std::vector<Tr>& universe, const ProvView<Tr, Om>& p,
                                const TraceQuery<Tr>& q) {
    for (const auto& group : fibers(universe, p)) {
        bool seen_true = false, seen_false = false;
        for (const Tr* t : group) (q(*t) ? seen_true : seen_false) = true;
        if (seen_false && !seen_true) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// TML instantiation: consistent triples as abstract traces.
// ---------------------------------------------------------------------------

struct TmlTriple {
    Env env;
    TracePtr trace;
    ValuePtr value;
};

// IN_rho and OUT_p.
TraceQuery<TmlTriple> in_query(const PatternEnv& rho);
TraceQuery<TmlTriple> out_query(const PatternPtr& p);
TraceQuery<TmlTriple> in_query_pred(std::function<bool(const Env&)> pred);
TraceQuery<TmlTriple> out_query_pred(std::function<bool(const ValuePtr&)> pred);

// All consistent triples of e over every environment drawing base-typed
// leaves from the given domain.  Free variables take the declared types;
// fuel exhaustion on any point aborts.
std::vector<TmlTriple> enumerate_triples(
    const ExprPtr& elaborated, const std::vector<std::int64_t>& base_domain,
    const std::vector<std::pair<std::string, TypePtr>>& free_var_types,
    long fuel = kDefaultFuel);

// All values of a type with integers from the given domain; recursive types
// unroll at most `depth` times.
std::vector<ValuePtr> enumerate_values(const TypePtr& type,
                                       const std::vector<std::int64_t>& base_domain,
                                       int depth);

// String universes for the automaton examples: all strings over {a,b} with
// length in [min_len, max_len].
std::vector<std::string> string_universe(int min_len, int max_len);

}  // namespace tml

#endif
