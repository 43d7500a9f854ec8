#include "tml/typecheck.hpp"

namespace tml {

TypePtr TypeEnv::find(const std::string& x) const {
    for (const auto& [n, t] : items)
        if (n == x) return t;
    return nullptr;
}

TypePtr TypeEnv::lookup(const std::string& x) const {
    if (TypePtr t = find(x)) return t;
    throw TypeError("unbound variable in type environment: " + x);
}

TypeEnv TypeEnv::extend(const std::string& x, TypePtr t) const {
    TypeEnv next = *this;
    for (auto& [n, old] : next.items) {
        if (n == x) {
            old = std::move(t);
            return next;
        }
    }
    next.items.emplace_back(x, std::move(t));
    return next;
}

bool type_env_equal(const TypeEnv& a, const TypeEnv& b) {
    if (a.items.size() != b.items.size()) return false;
    for (const auto& [n, t] : a.items) {
        TypePtr u = b.find(n);
        if (!u || !type_equal(t, u)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Primitives
// ---------------------------------------------------------------------------

// "b2s" converts the boolean scrutinee of a desugared `if` into a sum.
bool is_primitive(const std::string& op) {
    return op == "+" || op == "-" || op == "*" || op == "=" || op == "<" ||
           op == "&&" || op == "||" || op == "not" || op == "b2s";
}

std::vector<TypePtr> primitive_arg_types(const std::string& op) {
    if (op == "+" || op == "-" || op == "*" || op == "=" || op == "<")
        return {t_int(), t_int()};
    if (op == "&&" || op == "||") return {t_bool(), t_bool()};
    if (op == "not" || op == "b2s") return {t_bool()};
    throw TypeError("unknown primitive: " + op);
}

TypePtr primitive_result_type(const std::string& op) {
    if (op == "+" || op == "-" || op == "*") return t_int();
    if (op == "=" || op == "<" || op == "&&" || op == "||" || op == "not") return t_bool();
    if (op == "b2s") return t_sum(t_unit(), t_unit());
    throw TypeError("unknown primitive: " + op);
}

// ---------------------------------------------------------------------------
// Expression checking (elaborating)
// ---------------------------------------------------------------------------

static std::string type_mismatch(const TypePtr& want, const TypePtr& got) {
    return "type mismatch: expected " + pretty_type(want) + ", got " + pretty_type(got);
}

// Recognizes a parsed cons spine roll(inr((h, t))) with at least one element.
// The head element drives synthesis of unannotated list literals and conses.
static bool cons_spine_head(const ExprPtr& e, ExprPtr& head) {
    if (!e || e->kind != Expr::Kind::Roll || e->ann) return false;
    const ExprPtr& s = e->kids[0];
    if (s->kind != Expr::Kind::Inr || s->ann) return false;
    const ExprPtr& cell = s->kids[0];
    if (cell->kind != Expr::Kind::Pair) return false;
    head = cell->kids[0];
    return true;
}

Elaborated check_expr(const TypeEnv& env, const ExprPtr& e) {
    if (!e) throw TypeError("null expression");
    switch (e->kind) {
        case Expr::Kind::Var:
            return {e, env.lookup(e->name)};
        case Expr::Kind::Const:
            return {e, constant_type(e->lit)};
        case Expr::Kind::Prim: {
            auto sig = primitive_arg_types(e->name);
            if (sig.size() != e->kids.size())
                throw TypeError("primitive " + e->name + " expects " +
                                std::to_string(sig.size()) + " arguments");
            std::vector<ExprPtr> kids;
            for (std::size_t i = 0; i < sig.size(); i++)
                kids.push_back(check_expr_against(env, e->kids[i], sig[i]));
            return {e_prim(e->name, std::move(kids)), primitive_result_type(e->name)};
        }
        case Expr::Kind::Let: {
            Elaborated bound = check_expr(env, e->kids[0]);
            Elaborated body = check_expr(env.extend(e->name, bound.type), e->kids[1]);
            return {e_let(e->name, bound.expr, body.expr), body.type};
        }
        case Expr::Kind::Pair: {
            Elaborated a = check_expr(env, e->kids[0]);
            Elaborated b = check_expr(env, e->kids[1]);
            return {e_pair(a.expr, b.expr), t_prod(a.type, b.type)};
        }
        case Expr::Kind::Fst: {
            Elaborated a = check_expr(env, e->kids[0]);
            if (a.type->kind != Type::Kind::Prod)
                throw TypeError("fst of non-pair type " + pretty_type(a.type));
            return {e_fst(a.expr), a.type->a};
        }
        case Expr::Kind::Snd: {
            Elaborated a = check_expr(env, e->kids[0]);
            if (a.type->kind != Type::Kind::Prod)
                throw TypeError("snd of non-pair type " + pretty_type(a.type));
            return {e_snd(a.expr), a.type->b};
        }
        case Expr::Kind::Inl: {
            if (!e->ann)
                throw TypeError("inl requires a sum type annotation here");
            if (e->ann->kind != Type::Kind::Sum)
                throw TypeError("inl annotation is not a sum type");
            ExprPtr inner = check_expr_against(env, e->kids[0], e->ann->a);
            return {e_inl(inner, e->ann), e->ann};
        }
        case Expr::Kind::Inr: {
            if (!e->ann)
                throw TypeError("inr requires a sum type annotation here");
            if (e->ann->kind != Type::Kind::Sum)
                throw TypeError("inr annotation is not a sum type");
            ExprPtr inner = check_expr_against(env, e->kids[0], e->ann->b);
            return {e_inr(inner, e->ann), e->ann};
        }
        case Expr::Kind::Case: {
            Elaborated scrut = check_expr(env, e->kids[0]);
            if (scrut.type->kind != Type::Kind::Sum)
                throw TypeError("case scrutinee has non-sum type " + pretty_type(scrut.type));
            Elaborated l = check_expr(env.extend(e->arms->left_var, scrut.type->a),
                                      e->arms->left_body);
            Elaborated r = check_expr(env.extend(e->arms->right_var, scrut.type->b),
                                      e->arms->right_body);
            if (!type_equal(l.type, r.type))
                throw TypeError("case branches disagree: " + pretty_type(l.type) +
                                " vs " + pretty_type(r.type));
            auto arms = std::make_shared<MatchArms>(
                MatchArms{e->arms->left_var, e->arms->right_var, l.expr, r.expr,
                          e->arms->from_if});
            return {e_case(scrut.expr, arms), l.type};
        }
        case Expr::Kind::Fun: {
            if (!e->arg_type || !e->ret_type)
                throw TypeError("fun binder requires argument and result type annotations");
            TypePtr fnty = t_arrow(e->arg_type, e->ret_type);
            TypeEnv inner = env.extend(e->name, fnty).extend(e->arg_name, e->arg_type);
            ExprPtr body = check_expr_against(inner, e->kids[0], e->ret_type);
            return {e_fun(e->name, e->arg_name, e->arg_type, e->ret_type, body), fnty};
        }
        case Expr::Kind::App: {
            Elaborated f = check_expr(env, e->kids[0]);
            if (f.type->kind != Type::Kind::Arrow)
                throw TypeError("application of non-function type " + pretty_type(f.type));
            ExprPtr arg = check_expr_against(env, e->kids[1], f.type->a);
            return {e_app(f.expr, arg), f.type->b};
        }
        case Expr::Kind::Roll: {
            if (!e->ann) {
                // list literals and conses synthesize from their head element
                ExprPtr head;
                if (cons_spine_head(e, head)) {
                    Elaborated h = check_expr(env, head);
                    TypePtr listty = t_list(h.type);
                    return {check_expr_against(env, e, listty), listty};
                }
                throw TypeError("roll requires a recursive type annotation here");
            }
            if (e->ann->kind != Type::Kind::Mu)
                throw TypeError("roll annotation is not a recursive type");
            ExprPtr inner = check_expr_against(env, e->kids[0], mu_unfold(e->ann));
            return {e_roll(inner, e->ann), e->ann};
        }
        case Expr::Kind::Unroll: {
            Elaborated a = check_expr(env, e->kids[0]);
            if (a.type->kind != Type::Kind::Mu)
                throw TypeError("unroll of non-recursive type " + pretty_type(a.type));
            return {e_unroll(a.expr), mu_unfold(a.type)};
        }
        case Expr::Kind::Labeled: {
            Elaborated a = check_expr(env, e->kids[0]);
            return {e_labeled(e->name, a.expr), a.type};
        }
        case Expr::Kind::Ascribe: {
            ExprPtr inner = check_expr_against(env, e->kids[0], e->ann);
            return {inner, e->ann};
        }
    }
    throw TypeError("unreachable expression kind");
}

ExprPtr check_expr_against(const TypeEnv& env, const ExprPtr& e, const TypePtr& expected) {
    switch (e->kind) {
        case Expr::Kind::Inl: {
            if (e->ann) break;  // fall through to synthesis
            if (expected->kind != Type::Kind::Sum)
                throw TypeError(type_mismatch(expected, t_sum(t_var("_"), t_var("_"))));
            return e_inl(check_expr_against(env, e->kids[0], expected->a), expected);
        }
        case Expr::Kind::Inr: {
            if (e->ann) break;
            if (expected->kind != Type::Kind::Sum)
                throw TypeError(type_mismatch(expected, t_sum(t_var("_"), t_var("_"))));
            return e_inr(check_expr_against(env, e->kids[0], expected->b), expected);
        }
        case Expr::Kind::Roll: {
            if (e->ann) break;
            if (expected->kind != Type::Kind::Mu)
                throw TypeError("roll against non-recursive type " + pretty_type(expected));
            return e_roll(check_expr_against(env, e->kids[0], mu_unfold(expected)), expected);
        }
        case Expr::Kind::Pair: {
            if (expected->kind != Type::Kind::Prod) break;
            return e_pair(check_expr_against(env, e->kids[0], expected->a),
                          check_expr_against(env, e->kids[1], expected->b));
        }
        case Expr::Kind::Let: {
            Elaborated bound = check_expr(env, e->kids[0]);
            ExprPtr body = check_expr_against(env.extend(e->name, bound.type),
                                              e->kids[1], expected);
            return e_let(e->name, bound.expr, body);
        }
        case Expr::Kind::Case: {
            Elaborated scrut = check_expr(env, e->kids[0]);
            if (scrut.type->kind != Type::Kind::Sum)
                throw TypeError("case scrutinee has non-sum type " + pretty_type(scrut.type));
            ExprPtr l = check_expr_against(env.extend(e->arms->left_var, scrut.type->a),
                                           e->arms->left_body, expected);
            ExprPtr r = check_expr_against(env.extend(e->arms->right_var, scrut.type->b),
                                           e->arms->right_body, expected);
            auto arms = std::make_shared<MatchArms>(
                MatchArms{e->arms->left_var, e->arms->right_var, l, r, e->arms->from_if});
            return e_case(scrut.expr, arms);
        }
        case Expr::Kind::Labeled: {
            return e_labeled(e->name, check_expr_against(env, e->kids[0], expected));
        }
        case Expr::Kind::Ascribe: {
            if (!type_equal(e->ann, expected))
                throw TypeError(type_mismatch(expected, e->ann));
            return check_expr_against(env, e->kids[0], expected);
        }
        default:
            break;
    }
    Elaborated got = check_expr(env, e);
    if (!type_equal(got.type, expected))
        throw TypeError(type_mismatch(expected, got.type));
    return got.expr;
}

// ---------------------------------------------------------------------------
// Value typing
// ---------------------------------------------------------------------------

struct IllTypedValue : TypeError {
    using TypeError::TypeError;
};

TypePtr value_type(const ValuePtr& v) {
    if (!v) throw TypeError("null value");
    switch (v->kind) {
        case Value::Kind::Const:
            return constant_type(v->lit);
        case Value::Kind::Pair:
            return t_prod(value_type(v->a), value_type(v->b));
        case Value::Kind::Inl:
        case Value::Kind::Inr:
            if (!v->ann) throw TypeError("sum value carries no type annotation");
            return v->ann;
        case Value::Kind::Roll:
            if (!v->ann) throw TypeError("roll value carries no type annotation");
            return v->ann;
        case Value::Kind::Closure:
            return t_arrow(v->kappa.fun->arg_type, v->kappa.fun->ret_type);
    }
    throw TypeError("unreachable value kind");
}

TypeEnv env_types(const Env& env) {
    TypeEnv out;
    for (const auto& [n, v] : env.items()) out.items.emplace_back(n, value_type(v));
    return out;
}

TypePtr check_value(const ValuePtr& v) {
    if (!v) throw TypeError("null value");
    switch (v->kind) {
        case Value::Kind::Const:
            return constant_type(v->lit);
        case Value::Kind::Pair:
            return t_prod(check_value(v->a), check_value(v->b));
        case Value::Kind::Inl: {
            if (!v->ann || v->ann->kind != Type::Kind::Sum)
                throw TypeError("ill-typed value: inl without sum annotation");
            TypePtr inner = check_value(v->a);
            if (!type_equal(inner, v->ann->a))
                throw TypeError("ill-typed value: " + type_mismatch(v->ann->a, inner));
            return v->ann;
        }
        case Value::Kind::Inr: {
            if (!v->ann || v->ann->kind != Type::Kind::Sum)
                throw TypeError("ill-typed value: inr without sum annotation");
            TypePtr inner = check_value(v->a);
            if (!type_equal(inner, v->ann->b))
                throw TypeError("ill-typed value: " + type_mismatch(v->ann->b, inner));
            return v->ann;
        }
        case Value::Kind::Roll: {
            if (!v->ann || v->ann->kind != Type::Kind::Mu)
                throw TypeError("ill-typed value: roll without mu annotation");
            TypePtr inner = check_value(v->a);
            if (!type_equal(inner, mu_unfold(v->ann)))
                throw TypeError("ill-typed value: " + type_mismatch(mu_unfold(v->ann), inner));
            return v->ann;
        }
        case Value::Kind::Closure: {
            const ExprPtr& fn = v->kappa.fun;
            TypeEnv env;
            for (const auto& [n, bound] : v->env.items())
                env.items.emplace_back(n, check_value(bound));
            Elaborated r = check_expr(env, fn);
            return r.type;
        }
    }
    throw TypeError("unreachable value kind");
}

// ---------------------------------------------------------------------------
// Trace typing
// ---------------------------------------------------------------------------

TypePtr check_trace(const TypeEnv& env, const TracePtr& t) {
    if (!t) throw TypeError("null trace");
    switch (t->kind) {
        case Trace::Kind::Hole:
            throw TypeError("ill-formed trace: hole");
        case Trace::Kind::Var:
            return env.lookup(t->name);
        case Trace::Kind::Const:
            return constant_type(t->lit);
        case Trace::Kind::Prim: {
            auto sig = primitive_arg_types(t->name);
            if (sig.size() != t->kids.size())
                throw TypeError("ill-formed trace: primitive arity");
            for (std::size_t i = 0; i < sig.size(); i++) {
                TypePtr got = check_trace(env, t->kids[i]);
                if (!type_equal(got, sig[i]))
                    throw TypeError("ill-formed trace: " + type_mismatch(sig[i], got));
            }
            return primitive_result_type(t->name);
        }
        case Trace::Kind::Let: {
            TypePtr t1 = check_trace(env, t->kids[0]);
            return check_trace(env.extend(t->name, t1), t->kids[1]);
        }
        case Trace::Kind::Pair:
            return t_prod(check_trace(env, t->kids[0]), check_trace(env, t->kids[1]));
        case Trace::Kind::Fst: {
            TypePtr p = check_trace(env, t->kids[0]);
            if (p->kind != Type::Kind::Prod)
                throw TypeError("ill-formed trace: fst of " + pretty_type(p));
            return p->a;
        }
        case Trace::Kind::Snd: {
            TypePtr p = check_trace(env, t->kids[0]);
            if (p->kind != Type::Kind::Prod)
                throw TypeError("ill-formed trace: snd of " + pretty_type(p));
            return p->b;
        }
        case Trace::Kind::Inl: {
            if (!t->ann || t->ann->kind != Type::Kind::Sum)
                throw TypeError("ill-formed trace: inl without sum annotation");
            TypePtr got = check_trace(env, t->kids[0]);
            if (!type_equal(got, t->ann->a))
                throw TypeError("ill-formed trace: " + type_mismatch(t->ann->a, got));
            return t->ann;
        }
        case Trace::Kind::Inr: {
            if (!t->ann || t->ann->kind != Type::Kind::Sum)
                throw TypeError("ill-formed trace: inr without sum annotation");
            TypePtr got = check_trace(env, t->kids[0]);
            if (!type_equal(got, t->ann->b))
                throw TypeError("ill-formed trace: " + type_mismatch(t->ann->b, got));
            return t->ann;
        }
        case Trace::Kind::CaseL: {
            TypePtr s = check_trace(env, t->kids[0]);
            if (s->kind != Type::Kind::Sum)
                throw TypeError("ill-formed trace: case scrutinee of " + pretty_type(s));
            return check_trace(env.extend(t->name, s->a), t->kids[1]);
        }
        case Trace::Kind::CaseR: {
            TypePtr s = check_trace(env, t->kids[0]);
            if (s->kind != Type::Kind::Sum)
                throw TypeError("ill-formed trace: case scrutinee of " + pretty_type(s));
            return check_trace(env.extend(t->name, s->b), t->kids[1]);
        }
        case Trace::Kind::Fun: {
            Elaborated r = check_expr(env, t->kappa.fun);
            return r.type;
        }
        case Trace::Kind::App: {
            TypePtr fnty = check_trace(env, t->kids[0]);
            if (fnty->kind != Type::Kind::Arrow)
                throw TypeError("ill-formed trace: application of " + pretty_type(fnty));
            TypePtr argty = check_trace(env, t->kids[1]);
            if (!type_equal(argty, fnty->a))
                throw TypeError("ill-formed trace: " + type_mismatch(fnty->a, argty));
            // The body trace checks in the recorded environment of the call.
            if (!t->kappa.env_types)
                throw TypeError("ill-formed trace: application lacks typing annotation");
            TypeEnv inner = *t->kappa.env_types;
            inner = inner.extend(t->name, fnty).extend(t->arg_name, fnty->a);
            TypePtr got = check_trace(inner, t->kids[2]);
            if (!type_equal(got, fnty->b))
                throw TypeError("ill-formed trace: " + type_mismatch(fnty->b, got));
            return fnty->b;
        }
        case Trace::Kind::Roll: {
            if (!t->ann || t->ann->kind != Type::Kind::Mu)
                throw TypeError("ill-formed trace: roll without mu annotation");
            TypePtr got = check_trace(env, t->kids[0]);
            if (!type_equal(got, mu_unfold(t->ann)))
                throw TypeError("ill-formed trace: " + type_mismatch(mu_unfold(t->ann), got));
            return t->ann;
        }
        case Trace::Kind::Unroll: {
            TypePtr got = check_trace(env, t->kids[0]);
            if (got->kind != Type::Kind::Mu)
                throw TypeError("ill-formed trace: unroll of " + pretty_type(got));
            return mu_unfold(got);
        }
    }
    throw TypeError("unreachable trace kind");
}

}  // namespace tml
