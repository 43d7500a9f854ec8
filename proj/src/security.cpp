#include "tml/security.hpp"

#include "tml/replay.hpp"

namespace tml {

TraceQuery<TmlTriple> in_query(const PatternEnv& rho) {
    return [rho](const TmlTriple& t) { return pattern_env_leq(rho, t.env); };
}

TraceQuery<TmlTriple> out_query(const PatternPtr& p) {
    return [p](const TmlTriple& t) { return pattern_leq_value(p, t.value); };
}

TraceQuery<TmlTriple> in_query_pred(std::function<bool(const Env&)> pred) {
    return [pred = std::move(pred)](const TmlTriple& t) { return pred(t.env); };
}

TraceQuery<TmlTriple> out_query_pred(std::function<bool(const ValuePtr&)> pred) {
    return [pred = std::move(pred)](const TmlTriple& t) { return pred(t.value); };
}

std::vector<ValuePtr> enumerate_values(const TypePtr& type,
                                       const std::vector<std::int64_t>& base_domain,
                                       int depth) {
    std::vector<ValuePtr> out;
    switch (type->kind) {
        case Type::Kind::Int:
            for (std::int64_t i : base_domain) out.push_back(v_int(i));
            return out;
        case Type::Kind::Bool:
            out.push_back(v_bool(false));
            out.push_back(v_bool(true));
            return out;
        case Type::Kind::Unit:
            out.push_back(v_unit());
            return out;
        case Type::Kind::Prod: {
            auto as = enumerate_values(type->a, base_domain, depth);
            auto bs = enumerate_values(type->b, base_domain, depth);
            for (const auto& a : as)
                for (const auto& b : bs) out.push_back(v_pair(a, b));
            return out;
        }
        case Type::Kind::Sum: {
            for (const auto& a : enumerate_values(type->a, base_domain, depth))
                out.push_back(v_inl(a, type));
            for (const auto& b : enumerate_values(type->b, base_domain, depth))
                out.push_back(v_inr(b, type));
            return out;
        }
        case Type::Kind::Mu: {
            if (depth <= 0) return out;  // no further unrollings
            for (const auto& a :
                 enumerate_values(mu_unfold(type), base_domain, depth - 1))
                out.push_back(v_roll(a, type));
            return out;
        }
        case Type::Kind::Arrow:
        case Type::Kind::Var:
            throw Error("cannot enumerate values of type " + pretty_type(type));
    }
    return out;
}

std::vector<TmlTriple> enumerate_triples(
    const ExprPtr& elaborated, const std::vector<std::int64_t>& base_domain,
    const std::vector<std::pair<std::string, TypePtr>>& free_var_types, long fuel) {
    std::vector<Env> envs{Env{}};
    for (const auto& [name, type] : free_var_types) {
        std::vector<ValuePtr> choices = enumerate_values(type, base_domain, 3);
        std::vector<Env> next;
        next.reserve(envs.size() * choices.size());
        for (const Env& env : envs)
            for (const ValuePtr& v : choices) next.push_back(env.extend(name, v));
        envs = std::move(next);
    }
    std::vector<TmlTriple> out;
    out.reserve(envs.size());
    for (const Env& env : envs) {
        EvalResult r = eval(env, elaborated, fuel);  // FuelExhausted aborts
        out.push_back({env, r.trace, r.value});
    }
    return out;
}

std::vector<std::string> string_universe(int min_len, int max_len) {
    std::vector<std::string> out;
    std::vector<std::string> layer{""};
    for (int len = 0; len <= max_len; len++) {
        if (len >= min_len)
            for (const auto& s : layer) out.push_back(s);
        if (len == max_len) break;
        std::vector<std::string> next;
        next.reserve(layer.size() * 2);
        for (const auto& s : layer) {
            next.push_back(s + "a");
            next.push_back(s + "b");
        }
        layer = std::move(next);
    }
    return out;
}

}  // namespace tml
