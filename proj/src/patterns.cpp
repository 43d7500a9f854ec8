#include "tml/patterns.hpp"

#include <algorithm>

namespace tml {

PatternPtr PatternEnv::find(const std::string& x) const {
    for (const auto& [n, p] : items)
        if (n == x) return p;
    return nullptr;
}

PatternPtr PatternEnv::get(const std::string& x) const {
    if (auto p = find(x)) return p;
    return p_hole();
}

PatternEnv PatternEnv::set(const std::string& x, PatternPtr p) const {
    PatternEnv next = *this;
    for (auto& [n, old] : next.items) {
        if (n == x) {
            old = std::move(p);
            return next;
        }
    }
    next.items.emplace_back(x, std::move(p));
    return next;
}

PatternEnv PatternEnv::without(const std::string& x) const {
    PatternEnv next;
    for (const auto& [n, p] : items)
        if (n != x) next.items.emplace_back(n, p);
    return next;
}

static PatternPtr mk_pattern(Pattern p) { return std::make_shared<Pattern>(std::move(p)); }

PatternPtr p_hole() {
    static PatternPtr p = mk_pattern({Pattern::Kind::Hole, {}, nullptr, nullptr, {}, {}});
    return p;
}
PatternPtr p_diamond() {
    static PatternPtr p = mk_pattern({Pattern::Kind::Diamond, {}, nullptr, nullptr, {}, {}});
    return p;
}
PatternPtr p_const(Constant c) {
    Pattern p{};
    p.kind = Pattern::Kind::Const;
    p.lit = c;
    return mk_pattern(std::move(p));
}
PatternPtr p_int(std::int64_t i) { return p_const(Constant::of_int(i)); }
PatternPtr p_pair(PatternPtr a, PatternPtr b) {
    Pattern p{};
    p.kind = Pattern::Kind::Pair;
    p.a = std::move(a);
    p.b = std::move(b);
    return mk_pattern(std::move(p));
}
PatternPtr p_inl(PatternPtr q) {
    Pattern p{};
    p.kind = Pattern::Kind::Inl;
    p.a = std::move(q);
    return mk_pattern(std::move(p));
}
PatternPtr p_inr(PatternPtr q) {
    Pattern p{};
    p.kind = Pattern::Kind::Inr;
    p.a = std::move(q);
    return mk_pattern(std::move(p));
}
PatternPtr p_roll(PatternPtr q) {
    Pattern p{};
    p.kind = Pattern::Kind::Roll;
    p.a = std::move(q);
    return mk_pattern(std::move(p));
}
PatternPtr p_closure(CodePointer kappa, PatternEnv env) {
    Pattern p{};
    p.kind = Pattern::Kind::Closure;
    p.kappa = std::move(kappa);
    p.env = std::move(env);
    return mk_pattern(std::move(p));
}

bool pattern_equal(const PatternPtr& a, const PatternPtr& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Pattern::Kind::Hole:
        case Pattern::Kind::Diamond: return true;
        case Pattern::Kind::Const: return a->lit == b->lit;
        case Pattern::Kind::Pair:
            return pattern_equal(a->a, b->a) && pattern_equal(a->b, b->b);
        case Pattern::Kind::Inl:
        case Pattern::Kind::Inr:
        case Pattern::Kind::Roll: return pattern_equal(a->a, b->a);
        case Pattern::Kind::Closure:
            return code_pointer_equal(a->kappa, b->kappa) && pattern_env_equal(a->env, b->env);
    }
    return false;
}

// Equal as total maps (missing = hole).
bool pattern_env_equal(const PatternEnv& a, const PatternEnv& b) {
    for (const auto& [n, p] : a.items)
        if (!pattern_equal(p, b.get(n))) return false;
    for (const auto& [n, p] : b.items)
        if (!a.find(n) && !pattern_equal(p, p_hole())) return false;
    return true;
}

bool diamond_free(const PatternPtr& p) {
    switch (p->kind) {
        case Pattern::Kind::Diamond: return false;
        case Pattern::Kind::Hole:
        case Pattern::Kind::Const: return true;
        case Pattern::Kind::Pair: return diamond_free(p->a) && diamond_free(p->b);
        case Pattern::Kind::Inl:
        case Pattern::Kind::Inr:
        case Pattern::Kind::Roll: return diamond_free(p->a);
        case Pattern::Kind::Closure: return diamond_free(p->env);
    }
    return true;
}

bool diamond_free(const PatternEnv& env) {
    for (const auto& [n, p] : env.items)
        if (!diamond_free(p)) return false;
    return true;
}

PatternPtr pattern_of_value(const ValuePtr& v) {
    switch (v->kind) {
        case Value::Kind::Const: return p_const(v->lit);
        case Value::Kind::Pair: return p_pair(pattern_of_value(v->a), pattern_of_value(v->b));
        case Value::Kind::Inl: return p_inl(pattern_of_value(v->a));
        case Value::Kind::Inr: return p_inr(pattern_of_value(v->a));
        case Value::Kind::Roll: return p_roll(pattern_of_value(v->a));
        case Value::Kind::Closure: {
            PatternEnv env;
            for (const auto& [n, bound] : v->env.items())
                env.items.emplace_back(n, pattern_of_value(bound));
            return p_closure(v->kappa, std::move(env));
        }
    }
    throw Error("unreachable value kind");
}

std::optional<ValuePtr> value_of_pattern(const PatternPtr& p) {
    switch (p->kind) {
        case Pattern::Kind::Hole:
        case Pattern::Kind::Diamond: return std::nullopt;
        case Pattern::Kind::Const: return v_const(p->lit);
        case Pattern::Kind::Pair: {
            auto a = value_of_pattern(p->a);
            auto b = value_of_pattern(p->b);
            if (!a || !b) return std::nullopt;
            return v_pair(*a, *b);
        }
        case Pattern::Kind::Inl: {
            auto a = value_of_pattern(p->a);
            return a ? std::optional(v_inl(*a)) : std::nullopt;
        }
        case Pattern::Kind::Inr: {
            auto a = value_of_pattern(p->a);
            return a ? std::optional(v_inr(*a)) : std::nullopt;
        }
        case Pattern::Kind::Roll: {
            auto a = value_of_pattern(p->a);
            return a ? std::optional(v_roll(*a)) : std::nullopt;
        }
        case Pattern::Kind::Closure: {
            Env env;
            for (const auto& [n, q] : p->env.items) {
                auto v = value_of_pattern(q);
                if (!v) return std::nullopt;
                env = env.extend(n, *v);
            }
            return v_closure(p->kappa, env);
        }
    }
    return std::nullopt;
}

PatternPtr diamond_subst(const PatternPtr& p) {
    switch (p->kind) {
        case Pattern::Kind::Hole: return p_diamond();
        case Pattern::Kind::Diamond:
        case Pattern::Kind::Const: return p;
        case Pattern::Kind::Pair: return p_pair(diamond_subst(p->a), diamond_subst(p->b));
        case Pattern::Kind::Inl: return p_inl(diamond_subst(p->a));
        case Pattern::Kind::Inr: return p_inr(diamond_subst(p->a));
        case Pattern::Kind::Roll: return p_roll(diamond_subst(p->a));
        case Pattern::Kind::Closure: {
            PatternEnv env;
            for (const auto& [n, q] : p->env.items)
                env.items.emplace_back(n, diamond_subst(q));
            return p_closure(p->kappa, std::move(env));
        }
    }
    return p;
}

std::optional<PatternPtr> join(const PatternPtr& p, const PatternPtr& q) {
    if (p->kind == Pattern::Kind::Hole) return q;
    if (q->kind == Pattern::Kind::Hole) return p;
    if (p->kind == Pattern::Kind::Diamond) return diamond_subst(q);
    if (q->kind == Pattern::Kind::Diamond) return diamond_subst(p);
    if (p->kind != q->kind) return std::nullopt;
    switch (p->kind) {
        case Pattern::Kind::Const:
            if (p->lit == q->lit) return p;
            return std::nullopt;
        case Pattern::Kind::Pair: {
            auto a = join(p->a, q->a);
            auto b = join(p->b, q->b);
            if (!a || !b) return std::nullopt;
            return p_pair(*a, *b);
        }
        case Pattern::Kind::Inl: {
            auto a = join(p->a, q->a);
            return a ? std::optional(p_inl(*a)) : std::nullopt;
        }
        case Pattern::Kind::Inr: {
            auto a = join(p->a, q->a);
            return a ? std::optional(p_inr(*a)) : std::nullopt;
        }
        case Pattern::Kind::Roll: {
            auto a = join(p->a, q->a);
            return a ? std::optional(p_roll(*a)) : std::nullopt;
        }
        case Pattern::Kind::Closure: {
            if (!code_pointer_equal(p->kappa, q->kappa)) return std::nullopt;
            auto env = join(p->env, q->env);
            if (!env) return std::nullopt;
            return p_closure(p->kappa, *env);
        }
        default:
            return std::nullopt;
    }
}

PatternPtr join_or_throw(const PatternPtr& p, const PatternPtr& q) {
    if (auto r = join(p, q)) return *r;
    throw IncompatiblePatterns("incompatible patterns: " + pretty_pattern(p) + " vs " +
                               pretty_pattern(q));
}

std::optional<PatternEnv> join(const PatternEnv& a, const PatternEnv& b) {
    PatternEnv out = a;
    for (const auto& [n, q] : b.items) {
        auto r = join(out.get(n), q);
        if (!r) return std::nullopt;
        out = out.set(n, *r);
    }
    return out;
}

PatternEnv join_env_or_throw(const PatternEnv& a, const PatternEnv& b) {
    if (auto r = join(a, b)) return *r;
    throw IncompatiblePatterns("incompatible pattern environments");
}

bool pattern_leq(const PatternPtr& p, const PatternPtr& q) {
    auto r = join(p, q);
    return r && pattern_equal(*r, q);
}

bool pattern_leq_value(const PatternPtr& p, const ValuePtr& v) {
    switch (p->kind) {
        case Pattern::Kind::Hole:
        case Pattern::Kind::Diamond: return true;
        case Pattern::Kind::Const:
            return v->kind == Value::Kind::Const && p->lit == v->lit;
        case Pattern::Kind::Pair:
            return v->kind == Value::Kind::Pair && pattern_leq_value(p->a, v->a) &&
                   pattern_leq_value(p->b, v->b);
        case Pattern::Kind::Inl:
            return v->kind == Value::Kind::Inl && pattern_leq_value(p->a, v->a);
        case Pattern::Kind::Inr:
            return v->kind == Value::Kind::Inr && pattern_leq_value(p->a, v->a);
        case Pattern::Kind::Roll:
            return v->kind == Value::Kind::Roll && pattern_leq_value(p->a, v->a);
        case Pattern::Kind::Closure: {
            if (v->kind != Value::Kind::Closure) return false;
            if (!code_pointer_equal(p->kappa, v->kappa)) return false;
            for (const auto& [n, q] : p->env.items) {
                const ValuePtr w = v->env.find_ptr(n);
                if (!w || !pattern_leq_value(q, w)) return false;
            }
            return true;
        }
    }
    return false;
}

bool pattern_env_leq(const PatternEnv& rho, const Env& env) {
    for (const auto& [n, p] : rho.items) {
        const ValuePtr v = env.find_ptr(n);
        if (!v || !pattern_leq_value(p, v)) return false;
    }
    return true;
}

bool matches_mod(const PatternPtr& p, const ValuePtr& v1, const ValuePtr& v2) {
    switch (p->kind) {
        case Pattern::Kind::Hole: return true;
        case Pattern::Kind::Diamond: return value_equal(v1, v2);
        case Pattern::Kind::Const:
            return v1->kind == Value::Kind::Const && v2->kind == Value::Kind::Const &&
                   v1->lit == p->lit && v2->lit == p->lit;
        case Pattern::Kind::Pair:
            return v1->kind == Value::Kind::Pair && v2->kind == Value::Kind::Pair &&
                   matches_mod(p->a, v1->a, v2->a) && matches_mod(p->b, v1->b, v2->b);
        case Pattern::Kind::Inl:
            return v1->kind == Value::Kind::Inl && v2->kind == Value::Kind::Inl &&
                   matches_mod(p->a, v1->a, v2->a);
        case Pattern::Kind::Inr:
            return v1->kind == Value::Kind::Inr && v2->kind == Value::Kind::Inr &&
                   matches_mod(p->a, v1->a, v2->a);
        case Pattern::Kind::Roll:
            return v1->kind == Value::Kind::Roll && v2->kind == Value::Kind::Roll &&
                   matches_mod(p->a, v1->a, v2->a);
        case Pattern::Kind::Closure: {
            if (v1->kind != Value::Kind::Closure || v2->kind != Value::Kind::Closure)
                return false;
            if (!code_pointer_equal(p->kappa, v1->kappa) ||
                !code_pointer_equal(p->kappa, v2->kappa))
                return false;
            for (const auto& [n, q] : p->env.items) {
                const ValuePtr w1 = v1->env.find_ptr(n);
                const ValuePtr w2 = v2->env.find_ptr(n);
                if (!w1 || !w2 || !matches_mod(q, w1, w2)) return false;
            }
            return true;
        }
    }
    return false;
}

bool matches_mod(const PatternEnv& rho, const Env& g1, const Env& g2) {
    for (const auto& [n, p] : rho.items) {
        const ValuePtr v1 = g1.find_ptr(n);
        const ValuePtr v2 = g2.find_ptr(n);
        if (!v1 || !v2 || !matches_mod(p, v1, v2)) return false;
    }
    return true;
}

PatternPtr restrict_value(const ValuePtr& v, const PatternPtr& p) {
    switch (p->kind) {
        case Pattern::Kind::Hole: return p_hole();
        case Pattern::Kind::Diamond: return pattern_of_value(v);
        case Pattern::Kind::Const:
            if (v->kind == Value::Kind::Const && v->lit == p->lit) return p;
            break;
        case Pattern::Kind::Pair:
            if (v->kind == Value::Kind::Pair)
                return p_pair(restrict_value(v->a, p->a), restrict_value(v->b, p->b));
            break;
        case Pattern::Kind::Inl:
            if (v->kind == Value::Kind::Inl) return p_inl(restrict_value(v->a, p->a));
            break;
        case Pattern::Kind::Inr:
            if (v->kind == Value::Kind::Inr) return p_inr(restrict_value(v->a, p->a));
            break;
        case Pattern::Kind::Roll:
            if (v->kind == Value::Kind::Roll) return p_roll(restrict_value(v->a, p->a));
            break;
        case Pattern::Kind::Closure:
            if (v->kind == Value::Kind::Closure && code_pointer_equal(p->kappa, v->kappa)) {
                PatternEnv env;
                for (const auto& [n, q] : p->env.items) {
                    const ValuePtr w = v->env.find_ptr(n);
                    if (!w) throw Error("restriction: environment lacks " + n);
                    env.items.emplace_back(n, restrict_value(w, q));
                }
                return p_closure(p->kappa, std::move(env));
            }
            break;
    }
    throw Error("restriction requires p to match v");
}

PatternEnv restrict_env(const Env& env, const PatternEnv& rho) {
    PatternEnv out;
    for (const auto& [n, p] : rho.items) {
        const ValuePtr v = env.find_ptr(n);
        if (!v) throw Error("restriction: environment lacks " + n);
        out.items.emplace_back(n, restrict_value(v, p));
    }
    return out;
}

// Prints list shapes with bracket sugar, mirroring the value printer.
static std::optional<std::vector<PatternPtr>> list_pattern_elements(const PatternPtr& p) {
    std::vector<PatternPtr> out;
    PatternPtr cur = p;
    while (true) {
        if (!cur || cur->kind != Pattern::Kind::Roll) return std::nullopt;
        const PatternPtr& s = cur->a;
        if (s->kind == Pattern::Kind::Inl) {
            if (s->a->kind != Pattern::Kind::Const ||
                s->a->lit.kind != Constant::Kind::Unit)
                return std::nullopt;
            return out;
        }
        if (s->kind != Pattern::Kind::Inr) return std::nullopt;
        if (s->a->kind != Pattern::Kind::Pair) return std::nullopt;
        out.push_back(s->a->a);
        cur = s->a->b;
    }
}

static const Pattern* pattern_cons_parts(const PatternPtr& p) {
    if (p->kind != Pattern::Kind::Roll) return nullptr;
    if (p->a->kind != Pattern::Kind::Inr) return nullptr;
    if (p->a->a->kind != Pattern::Kind::Pair) return nullptr;
    return p->a->a.get();
}

std::string pretty_pattern(const PatternPtr& p) {
    if (auto elems = list_pattern_elements(p)) {
        std::string out = "[";
        for (std::size_t i = 0; i < elems->size(); i++) {
            if (i) out += ",";
            out += pretty_pattern((*elems)[i]);
        }
        return out + "]";
    }
    if (const Pattern* cell = pattern_cons_parts(p))
        return pretty_pattern(cell->a) + "::" + pretty_pattern(cell->b);
    switch (p->kind) {
        case Pattern::Kind::Hole: return "_";
        case Pattern::Kind::Diamond: return "=";
        case Pattern::Kind::Const: return pretty_constant(p->lit);
        case Pattern::Kind::Pair:
            return "(" + pretty_pattern(p->a) + "," + pretty_pattern(p->b) + ")";
        case Pattern::Kind::Inl: return "inl(" + pretty_pattern(p->a) + ")";
        case Pattern::Kind::Inr: return "inr(" + pretty_pattern(p->a) + ")";
        case Pattern::Kind::Roll: return "roll(" + pretty_pattern(p->a) + ")";
        case Pattern::Kind::Closure:
            return "<fun " + p->kappa.fun->name + " " + pretty_pattern_env(p->env) + ">";
    }
    return "?";
}

std::string pretty_pattern_env(const PatternEnv& rho) {
    std::string out = "[";
    bool first = true;
    for (const auto& [n, p] : rho.items) {
        if (!first) out += ", ";
        first = false;
        out += n + "=" + pretty_pattern(p);
    }
    return out + "]";
}

}  // namespace tml
