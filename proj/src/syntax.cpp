#include "tml/syntax.hpp"

#include <algorithm>
#include <map>

namespace tml {

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

static TypePtr mk_type(Type t) { return std::make_shared<Type>(std::move(t)); }

TypePtr t_int() {
    static TypePtr t = mk_type({Type::Kind::Int, nullptr, nullptr, ""});
    return t;
}
TypePtr t_bool() {
    static TypePtr t = mk_type({Type::Kind::Bool, nullptr, nullptr, ""});
    return t;
}
TypePtr t_unit() {
    static TypePtr t = mk_type({Type::Kind::Unit, nullptr, nullptr, ""});
    return t;
}
TypePtr t_prod(TypePtr a, TypePtr b) {
    return mk_type({Type::Kind::Prod, std::move(a), std::move(b), ""});
}
TypePtr t_sum(TypePtr a, TypePtr b) {
    return mk_type({Type::Kind::Sum, std::move(a), std::move(b), ""});
}
TypePtr t_arrow(TypePtr a, TypePtr b) {
    return mk_type({Type::Kind::Arrow, std::move(a), std::move(b), ""});
}
TypePtr t_mu(std::string binder, TypePtr body) {
    return mk_type({Type::Kind::Mu, std::move(body), nullptr, std::move(binder)});
}
TypePtr t_var(std::string name) {
    return mk_type({Type::Kind::Var, nullptr, nullptr, std::move(name)});
}

TypePtr t_list(TypePtr elem) {
    return t_mu("a", t_sum(t_unit(), t_prod(std::move(elem), t_var("a"))));
}

std::optional<TypePtr> list_elem_type(const TypePtr& t) {
    if (!t || t->kind != Type::Kind::Mu) return std::nullopt;
    const TypePtr& body = t->a;
    if (body->kind != Type::Kind::Sum) return std::nullopt;
    if (body->a->kind != Type::Kind::Unit) return std::nullopt;
    if (body->b->kind != Type::Kind::Prod) return std::nullopt;
    const TypePtr& tail = body->b->b;
    if (tail->kind != Type::Kind::Var || tail->name != t->name) return std::nullopt;
    return body->b->a;
}

static bool type_equal_rec(const TypePtr& a, const TypePtr& b,
                           std::vector<std::pair<std::string, std::string>>& binders) {
    if (a.get() == b.get()) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Type::Kind::Int:
        case Type::Kind::Bool:
        case Type::Kind::Unit:
            return true;
        case Type::Kind::Prod:
        case Type::Kind::Sum:
        case Type::Kind::Arrow:
            return type_equal_rec(a->a, b->a, binders) && type_equal_rec(a->b, b->b, binders);
        case Type::Kind::Mu: {
            binders.emplace_back(a->name, b->name);
            bool r = type_equal_rec(a->a, b->a, binders);
            binders.pop_back();
            return r;
        }
        case Type::Kind::Var: {
            for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
                bool la = it->first == a->name, lb = it->second == b->name;
                if (la || lb) return la && lb;
            }
            return a->name == b->name;
        }
    }
    return false;
}

bool type_equal(const TypePtr& a, const TypePtr& b) {
    std::vector<std::pair<std::string, std::string>> binders;
    return type_equal_rec(a, b, binders);
}

TypePtr type_subst(const TypePtr& t, const std::string& var, const TypePtr& repl) {
    if (!t) return t;
    switch (t->kind) {
        case Type::Kind::Int:
        case Type::Kind::Bool:
        case Type::Kind::Unit:
            return t;
        case Type::Kind::Prod:
            return t_prod(type_subst(t->a, var, repl), type_subst(t->b, var, repl));
        case Type::Kind::Sum:
            return t_sum(type_subst(t->a, var, repl), type_subst(t->b, var, repl));
        case Type::Kind::Arrow:
            return t_arrow(type_subst(t->a, var, repl), type_subst(t->b, var, repl));
        case Type::Kind::Mu:
            if (t->name == var) return t;  // shadowed
            return t_mu(t->name, type_subst(t->a, var, repl));
        case Type::Kind::Var:
            return t->name == var ? repl : t;
    }
    return t;
}

TypePtr mu_unfold(const TypePtr& mu) {
    if (!mu || mu->kind != Type::Kind::Mu) throw Error("mu_unfold: not a recursive type");
    return type_subst(mu->a, mu->name, mu);
}

static void pretty_type_rec(const TypePtr& t, std::string& out, int prec) {
    if (!t) {
        out += "?";
        return;
    }
    if (auto elem = list_elem_type(t)) {
        // element type binds tighter than `list`
        pretty_type_rec(*elem, out, 3);
        out += " list";
        return;
    }
    switch (t->kind) {
        case Type::Kind::Int: out += "int"; return;
        case Type::Kind::Bool: out += "bool"; return;
        case Type::Kind::Unit: out += "unit"; return;
        case Type::Kind::Var: out += t->name; return;
        case Type::Kind::Prod: {
            bool paren = prec > 2;
            if (paren) out += "(";
            pretty_type_rec(t->a, out, 3);
            out += "*";
            pretty_type_rec(t->b, out, 2);
            if (paren) out += ")";
            return;
        }
        case Type::Kind::Sum: {
            bool paren = prec > 1;
            if (paren) out += "(";
            pretty_type_rec(t->a, out, 2);
            out += "+";
            pretty_type_rec(t->b, out, 1);
            if (paren) out += ")";
            return;
        }
        case Type::Kind::Arrow: {
            bool paren = prec > 0;
            if (paren) out += "(";
            pretty_type_rec(t->a, out, 1);
            out += "->";
            pretty_type_rec(t->b, out, 0);
            if (paren) out += ")";
            return;
        }
        case Type::Kind::Mu: {
            out += "mu " + t->name + ".";
            pretty_type_rec(t->a, out, 0);
            return;
        }
    }
}

std::string pretty_type(const TypePtr& t) {
    std::string out;
    pretty_type_rec(t, out, 0);
    return out;
}

// ---------------------------------------------------------------------------
// Constants
// ---------------------------------------------------------------------------

bool operator==(const Constant& a, const Constant& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Constant::Kind::Int: return a.i == b.i;
        case Constant::Kind::Bool: return a.b == b.b;
        case Constant::Kind::Unit: return true;
    }
    return false;
}

std::string pretty_constant(const Constant& c) {
    switch (c.kind) {
        case Constant::Kind::Int: return std::to_string(c.i);
        case Constant::Kind::Bool: return c.b ? "true" : "false";
        case Constant::Kind::Unit: return "()";
    }
    return "?";
}

TypePtr constant_type(const Constant& c) {
    switch (c.kind) {
        case Constant::Kind::Int: return t_int();
        case Constant::Kind::Bool: return t_bool();
        case Constant::Kind::Unit: return t_unit();
    }
    return t_unit();
}

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

static ExprPtr mk_expr(Expr e) { return std::make_shared<Expr>(std::move(e)); }

ExprPtr e_var(std::string x) {
    Expr e{};
    e.kind = Expr::Kind::Var;
    e.name = std::move(x);
    return mk_expr(std::move(e));
}
ExprPtr e_const(Constant c) {
    Expr e{};
    e.kind = Expr::Kind::Const;
    e.lit = c;
    return mk_expr(std::move(e));
}
ExprPtr e_prim(std::string op, std::vector<ExprPtr> args) {
    Expr e{};
    e.kind = Expr::Kind::Prim;
    e.name = std::move(op);
    e.kids = std::move(args);
    return mk_expr(std::move(e));
}
ExprPtr e_let(std::string x, ExprPtr e1, ExprPtr e2) {
    Expr e{};
    e.kind = Expr::Kind::Let;
    e.name = std::move(x);
    e.kids = {std::move(e1), std::move(e2)};
    return mk_expr(std::move(e));
}
ExprPtr e_pair(ExprPtr a, ExprPtr b) {
    Expr e{};
    e.kind = Expr::Kind::Pair;
    e.kids = {std::move(a), std::move(b)};
    return mk_expr(std::move(e));
}
ExprPtr e_fst(ExprPtr e0) {
    Expr e{};
    e.kind = Expr::Kind::Fst;
    e.kids = {std::move(e0)};
    return mk_expr(std::move(e));
}
ExprPtr e_snd(ExprPtr e0) {
    Expr e{};
    e.kind = Expr::Kind::Snd;
    e.kids = {std::move(e0)};
    return mk_expr(std::move(e));
}
ExprPtr e_inl(ExprPtr e0, TypePtr ann) {
    Expr e{};
    e.kind = Expr::Kind::Inl;
    e.kids = {std::move(e0)};
    e.ann = std::move(ann);
    return mk_expr(std::move(e));
}
ExprPtr e_inr(ExprPtr e0, TypePtr ann) {
    Expr e{};
    e.kind = Expr::Kind::Inr;
    e.kids = {std::move(e0)};
    e.ann = std::move(ann);
    return mk_expr(std::move(e));
}
ExprPtr e_case(ExprPtr scrut, MatchPtr arms) {
    Expr e{};
    e.kind = Expr::Kind::Case;
    e.kids = {std::move(scrut)};
    e.arms = std::move(arms);
    return mk_expr(std::move(e));
}
ExprPtr e_fun(std::string f, std::string x, TypePtr arg_type, TypePtr ret_type, ExprPtr body) {
    Expr e{};
    e.kind = Expr::Kind::Fun;
    e.name = std::move(f);
    e.arg_name = std::move(x);
    e.arg_type = std::move(arg_type);
    e.ret_type = std::move(ret_type);
    e.kids = {std::move(body)};
    return mk_expr(std::move(e));
}
ExprPtr e_app(ExprPtr f, ExprPtr a) {
    Expr e{};
    e.kind = Expr::Kind::App;
    e.kids = {std::move(f), std::move(a)};
    return mk_expr(std::move(e));
}
ExprPtr e_roll(ExprPtr e0, TypePtr ann) {
    Expr e{};
    e.kind = Expr::Kind::Roll;
    e.kids = {std::move(e0)};
    e.ann = std::move(ann);
    return mk_expr(std::move(e));
}
ExprPtr e_unroll(ExprPtr e0) {
    Expr e{};
    e.kind = Expr::Kind::Unroll;
    e.kids = {std::move(e0)};
    return mk_expr(std::move(e));
}
ExprPtr e_labeled(std::string label, ExprPtr e0) {
    Expr e{};
    e.kind = Expr::Kind::Labeled;
    e.name = std::move(label);
    e.kids = {std::move(e0)};
    return mk_expr(std::move(e));
}
ExprPtr e_ascribe(ExprPtr e0, TypePtr t) {
    Expr e{};
    e.kind = Expr::Kind::Ascribe;
    e.kids = {std::move(e0)};
    e.ann = std::move(t);
    return mk_expr(std::move(e));
}

static bool opt_type_equal(const TypePtr& a, const TypePtr& b) {
    if (!a && !b) return true;
    if (!a || !b) return false;
    return type_equal(a, b);
}

static bool arms_equal(const MatchPtr& a, const MatchPtr& b);

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    if (a->name != b->name || a->arg_name != b->arg_name) return false;
    if (a->kind == Expr::Kind::Const && !(a->lit == b->lit)) return false;
    if (!opt_type_equal(a->ann, b->ann)) return false;
    if (!opt_type_equal(a->arg_type, b->arg_type)) return false;
    if (!opt_type_equal(a->ret_type, b->ret_type)) return false;
    if (!arms_equal(a->arms, b->arms)) return false;
    if (a->kids.size() != b->kids.size()) return false;
    for (std::size_t i = 0; i < a->kids.size(); i++)
        if (!expr_equal(a->kids[i], b->kids[i])) return false;
    return true;
}

static bool arms_equal(const MatchPtr& a, const MatchPtr& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b) return false;
    return a->left_var == b->left_var && a->right_var == b->right_var &&
           expr_equal(a->left_body, b->left_body) &&
           expr_equal(a->right_body, b->right_body);
}

static void free_vars_rec(const ExprPtr& e, std::set<std::string>& bound,
                          std::set<std::string>& out) {
    if (!e) return;
    switch (e->kind) {
        case Expr::Kind::Var:
            if (!bound.count(e->name)) out.insert(e->name);
            return;
        case Expr::Kind::Const:
            return;
        case Expr::Kind::Let: {
            free_vars_rec(e->kids[0], bound, out);
            bool fresh = bound.insert(e->name).second;
            free_vars_rec(e->kids[1], bound, out);
            if (fresh) bound.erase(e->name);
            return;
        }
        case Expr::Kind::Case: {
            free_vars_rec(e->kids[0], bound, out);
            bool fl = bound.insert(e->arms->left_var).second;
            free_vars_rec(e->arms->left_body, bound, out);
            if (fl) bound.erase(e->arms->left_var);
            bool fr = bound.insert(e->arms->right_var).second;
            free_vars_rec(e->arms->right_body, bound, out);
            if (fr) bound.erase(e->arms->right_var);
            return;
        }
        case Expr::Kind::Fun: {
            bool ff = bound.insert(e->name).second;
            bool fx = bound.insert(e->arg_name).second;
            free_vars_rec(e->kids[0], bound, out);
            if (fx) bound.erase(e->arg_name);
            if (ff) bound.erase(e->name);
            return;
        }
        default:
            for (const auto& k : e->kids) free_vars_rec(k, bound, out);
            return;
    }
}

std::set<std::string> free_vars(const ExprPtr& e) {
    std::set<std::string> bound, out;
    free_vars_rec(e, bound, out);
    return out;
}

// ---------------------------------------------------------------------------
// Values and environments
// ---------------------------------------------------------------------------

bool code_pointer_equal(const CodePointer& a, const CodePointer& b) {
    return expr_equal(a.fun, b.fun);
}

static const std::vector<std::pair<std::string, ValuePtr>> kEmptyItems;

const std::vector<std::pair<std::string, ValuePtr>>& Env::items() const {
    return data_ ? *data_ : kEmptyItems;
}

const Value* Env::find(const std::string& x) const {
    if (!data_) return nullptr;
    for (const auto& [n, v] : *data_)
        if (n == x) return v.get();
    return nullptr;
}

ValuePtr Env::find_ptr(const std::string& x) const {
    if (!data_) return nullptr;
    for (const auto& [n, v] : *data_)
        if (n == x) return v;
    return nullptr;
}

ValuePtr Env::lookup(const std::string& x) const {
    if (ValuePtr v = find_ptr(x)) return v;
    throw UnboundVariable(x);
}

Env Env::extend(const std::string& x, ValuePtr v) const {
    auto next = std::make_shared<std::vector<std::pair<std::string, ValuePtr>>>(items());
    for (auto& [n, old] : *next) {
        if (n == x) {
            old = std::move(v);
            Env r;
            r.data_ = std::move(next);
            return r;
        }
    }
    next->emplace_back(x, std::move(v));
    Env r;
    r.data_ = std::move(next);
    return r;
}

bool env_equal(const Env& a, const Env& b) {
    std::map<std::string, ValuePtr> ma, mb;
    for (const auto& [n, v] : a.items()) ma[n] = v;
    for (const auto& [n, v] : b.items()) mb[n] = v;
    if (ma.size() != mb.size()) return false;
    for (const auto& [n, v] : ma) {
        auto it = mb.find(n);
        if (it == mb.end() || !value_equal(v, it->second)) return false;
    }
    return true;
}

ValuePtr env_lookup(const Env& env, const std::string& x) { return env.lookup(x); }

static ValuePtr mk_value(Value v) { return std::make_shared<Value>(std::move(v)); }

ValuePtr v_const(Constant c) {
    Value v{};
    v.kind = Value::Kind::Const;
    v.lit = c;
    return mk_value(std::move(v));
}
ValuePtr v_int(std::int64_t i) { return v_const(Constant::of_int(i)); }
ValuePtr v_bool(bool b) { return v_const(Constant::of_bool(b)); }
ValuePtr v_unit() { return v_const(Constant::unit()); }
ValuePtr v_pair(ValuePtr a, ValuePtr b) {
    Value v{};
    v.kind = Value::Kind::Pair;
    v.a = std::move(a);
    v.b = std::move(b);
    return mk_value(std::move(v));
}
ValuePtr v_inl(ValuePtr v0, TypePtr ann) {
    Value v{};
    v.kind = Value::Kind::Inl;
    v.a = std::move(v0);
    v.ann = std::move(ann);
    return mk_value(std::move(v));
}
ValuePtr v_inr(ValuePtr v0, TypePtr ann) {
    Value v{};
    v.kind = Value::Kind::Inr;
    v.a = std::move(v0);
    v.ann = std::move(ann);
    return mk_value(std::move(v));
}
ValuePtr v_roll(ValuePtr v0, TypePtr ann) {
    Value v{};
    v.kind = Value::Kind::Roll;
    v.a = std::move(v0);
    v.ann = std::move(ann);
    return mk_value(std::move(v));
}
ValuePtr v_closure(CodePointer kappa, Env env) {
    Value v{};
    v.kind = Value::Kind::Closure;
    v.kappa = std::move(kappa);
    v.env = std::move(env);
    return mk_value(std::move(v));
}

bool value_equal(const ValuePtr& a, const ValuePtr& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Value::Kind::Const: return a->lit == b->lit;
        case Value::Kind::Pair: return value_equal(a->a, b->a) && value_equal(a->b, b->b);
        case Value::Kind::Inl:
        case Value::Kind::Inr:
        case Value::Kind::Roll: return value_equal(a->a, b->a);
        case Value::Kind::Closure:
            return code_pointer_equal(a->kappa, b->kappa) && env_equal(a->env, b->env);
    }
    return false;
}

// Returns the elements when v is a value of the prelude list shape.
static std::optional<std::vector<ValuePtr>> list_elements(const ValuePtr& v) {
    std::vector<ValuePtr> out;
    ValuePtr cur = v;
    while (true) {
        if (!cur || cur->kind != Value::Kind::Roll) return std::nullopt;
        const ValuePtr& s = cur->a;
        if (!s) return std::nullopt;
        if (s->kind == Value::Kind::Inl) {
            if (!s->a || s->a->kind != Value::Kind::Const ||
                s->a->lit.kind != Constant::Kind::Unit)
                return std::nullopt;
            return out;
        }
        if (s->kind != Value::Kind::Inr) return std::nullopt;
        const ValuePtr& cell = s->a;
        if (!cell || cell->kind != Value::Kind::Pair) return std::nullopt;
        out.push_back(cell->a);
        cur = cell->b;
    }
}

std::string pretty_value(const ValuePtr& v) {
    if (!v) return "?";
    if (auto elems = list_elements(v)) {
        std::string out = "[";
        for (std::size_t i = 0; i < elems->size(); i++) {
            if (i) out += ",";
            out += pretty_value((*elems)[i]);
        }
        return out + "]";
    }
    switch (v->kind) {
        case Value::Kind::Const: return pretty_constant(v->lit);
        case Value::Kind::Pair: {
            std::string out = "(" + pretty_value(v->a);
            ValuePtr rest = v->b;
            while (rest->kind == Value::Kind::Pair) {
                out += "," + pretty_value(rest->a);
                rest = rest->b;
            }
            return out + "," + pretty_value(rest) + ")";
        }
        case Value::Kind::Inl: return "inl(" + pretty_value(v->a) + ")";
        case Value::Kind::Inr: return "inr(" + pretty_value(v->a) + ")";
        case Value::Kind::Roll: return "roll(" + pretty_value(v->a) + ")";
        case Value::Kind::Closure: return "<fun " + v->kappa.fun->name + ">";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Traces
// ---------------------------------------------------------------------------

static TracePtr mk_trace(Trace t) { return std::make_shared<Trace>(std::move(t)); }

TracePtr tr_hole() {
    static TracePtr t = mk_trace({Trace::Kind::Hole, "", "", {}, {}, nullptr, {}, nullptr});
    return t;
}
TracePtr tr_var(std::string x) {
    Trace t{};
    t.kind = Trace::Kind::Var;
    t.name = std::move(x);
    return mk_trace(std::move(t));
}
TracePtr tr_const(Constant c) {
    Trace t{};
    t.kind = Trace::Kind::Const;
    t.lit = c;
    return mk_trace(std::move(t));
}
TracePtr tr_prim(std::string op, std::vector<TracePtr> kids) {
    Trace t{};
    t.kind = Trace::Kind::Prim;
    t.name = std::move(op);
    t.kids = std::move(kids);
    return mk_trace(std::move(t));
}
TracePtr tr_let(std::string x, TracePtr t1, TracePtr t2) {
    Trace t{};
    t.kind = Trace::Kind::Let;
    t.name = std::move(x);
    t.kids = {std::move(t1), std::move(t2)};
    return mk_trace(std::move(t));
}
TracePtr tr_pair(TracePtr a, TracePtr b) {
    Trace t{};
    t.kind = Trace::Kind::Pair;
    t.kids = {std::move(a), std::move(b)};
    return mk_trace(std::move(t));
}
TracePtr tr_fst(TracePtr t0) {
    Trace t{};
    t.kind = Trace::Kind::Fst;
    t.kids = {std::move(t0)};
    return mk_trace(std::move(t));
}
TracePtr tr_snd(TracePtr t0) {
    Trace t{};
    t.kind = Trace::Kind::Snd;
    t.kids = {std::move(t0)};
    return mk_trace(std::move(t));
}
TracePtr tr_inl(TracePtr t0, TypePtr ann) {
    Trace t{};
    t.kind = Trace::Kind::Inl;
    t.kids = {std::move(t0)};
    t.ann = std::move(ann);
    return mk_trace(std::move(t));
}
TracePtr tr_inr(TracePtr t0, TypePtr ann) {
    Trace t{};
    t.kind = Trace::Kind::Inr;
    t.kids = {std::move(t0)};
    t.ann = std::move(ann);
    return mk_trace(std::move(t));
}
TracePtr tr_case_l(MatchPtr arms, TracePtr scrut, std::string x1, TracePtr body) {
    Trace t{};
    t.kind = Trace::Kind::CaseL;
    t.arms = std::move(arms);
    t.name = std::move(x1);
    t.kids = {std::move(scrut), std::move(body)};
    return mk_trace(std::move(t));
}
TracePtr tr_case_r(MatchPtr arms, TracePtr scrut, std::string x2, TracePtr body) {
    Trace t{};
    t.kind = Trace::Kind::CaseR;
    t.arms = std::move(arms);
    t.name = std::move(x2);
    t.kids = {std::move(scrut), std::move(body)};
    return mk_trace(std::move(t));
}
TracePtr tr_fun(CodePointer kappa) {
    Trace t{};
    t.kind = Trace::Kind::Fun;
    t.kappa = std::move(kappa);
    return mk_trace(std::move(t));
}
TracePtr tr_app(CodePointer kappa, TracePtr t1, TracePtr t2,
                std::string f, std::string x, TracePtr body) {
    Trace t{};
    t.kind = Trace::Kind::App;
    t.kappa = std::move(kappa);
    t.name = std::move(f);
    t.arg_name = std::move(x);
    t.kids = {std::move(t1), std::move(t2), std::move(body)};
    return mk_trace(std::move(t));
}
TracePtr tr_roll(TracePtr t0, TypePtr ann) {
    Trace t{};
    t.kind = Trace::Kind::Roll;
    t.kids = {std::move(t0)};
    t.ann = std::move(ann);
    return mk_trace(std::move(t));
}
TracePtr tr_unroll(TracePtr t0) {
    Trace t{};
    t.kind = Trace::Kind::Unroll;
    t.kids = {std::move(t0)};
    return mk_trace(std::move(t));
}

bool trace_equal(const TracePtr& a, const TracePtr& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    if (a->name != b->name || a->arg_name != b->arg_name) return false;
    if (a->kind == Trace::Kind::Const && !(a->lit == b->lit)) return false;
    if ((a->kind == Trace::Kind::Fun || a->kind == Trace::Kind::App) &&
        !code_pointer_equal(a->kappa, b->kappa))
        return false;
    if (a->arms.get() != b->arms.get()) {
        if (!a->arms || !b->arms) return false;
        if (a->arms->left_var != b->arms->left_var ||
            a->arms->right_var != b->arms->right_var ||
            !expr_equal(a->arms->left_body, b->arms->left_body) ||
            !expr_equal(a->arms->right_body, b->arms->right_body))
            return false;
    }
    if (a->kids.size() != b->kids.size()) return false;
    for (std::size_t i = 0; i < a->kids.size(); i++)
        if (!trace_equal(a->kids[i], b->kids[i])) return false;
    return true;
}

bool trace_complete(const TracePtr& t) {
    if (!t) return false;
    if (t->kind == Trace::Kind::Hole) return false;
    for (const auto& k : t->kids)
        if (!trace_complete(k)) return false;
    return true;
}

bool trace_leq(const TracePtr& s, const TracePtr& t) {
    if (!s || !t) return false;
    if (s->kind == Trace::Kind::Hole) return true;
    if (s->kind != t->kind) return false;
    if (s->name != t->name || s->arg_name != t->arg_name) return false;
    if (s->kind == Trace::Kind::Const && !(s->lit == t->lit)) return false;
    if ((s->kind == Trace::Kind::Fun || s->kind == Trace::Kind::App) &&
        !code_pointer_equal(s->kappa, t->kappa))
        return false;
    if (s->kids.size() != t->kids.size()) return false;
    for (std::size_t i = 0; i < s->kids.size(); i++)
        if (!trace_leq(s->kids[i], t->kids[i])) return false;
    return true;
}

static void trace_free_vars_rec(const TracePtr& t, std::set<std::string>& bound,
                                std::set<std::string>& out) {
    if (!t) return;
    switch (t->kind) {
        case Trace::Kind::Var:
            if (!bound.count(t->name)) out.insert(t->name);
            return;
        case Trace::Kind::Let: {
            trace_free_vars_rec(t->kids[0], bound, out);
            bool fresh = bound.insert(t->name).second;
            trace_free_vars_rec(t->kids[1], bound, out);
            if (fresh) bound.erase(t->name);
            return;
        }
        case Trace::Kind::CaseL:
        case Trace::Kind::CaseR: {
            trace_free_vars_rec(t->kids[0], bound, out);
            bool fresh = bound.insert(t->name).second;
            trace_free_vars_rec(t->kids[1], bound, out);
            if (fresh) bound.erase(t->name);
            return;
        }
        case Trace::Kind::App:
            // the body trace replays in the closure environment, so its
            // variables are not inputs of this trace
            trace_free_vars_rec(t->kids[0], bound, out);
            trace_free_vars_rec(t->kids[1], bound, out);
            return;
        default:
            for (const auto& k : t->kids) trace_free_vars_rec(k, bound, out);
            return;
    }
}

std::set<std::string> trace_free_vars(const TracePtr& t) {
    std::set<std::string> bound, out;
    trace_free_vars_rec(t, bound, out);
    return out;
}

int trace_count(const TracePtr& t, Trace::Kind kind) {
    if (!t) return 0;
    int n = t->kind == kind ? 1 : 0;
    for (const auto& k : t->kids) n += trace_count(k, kind);
    return n;
}

}  // namespace tml
