#include "tml/serialize.hpp"

namespace tml {

// ---------------------------------------------------------------------------
// Writer
// ---------------------------------------------------------------------------

namespace {

void put_string(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
}

void put_type(std::string& out, const TypePtr& t) {
    switch (t->kind) {
        case Type::Kind::Int: out += "(int)"; return;
        case Type::Kind::Bool: out += "(bool)"; return;
        case Type::Kind::Unit: out += "(unit)"; return;
        case Type::Kind::Prod:
            out += "(prod ";
            put_type(out, t->a);
            out += ' ';
            put_type(out, t->b);
            out += ')';
            return;
        case Type::Kind::Sum:
            out += "(sum ";
            put_type(out, t->a);
            out += ' ';
            put_type(out, t->b);
            out += ')';
            return;
        case Type::Kind::Arrow:
            out += "(arrow ";
            put_type(out, t->a);
            out += ' ';
            put_type(out, t->b);
            out += ')';
            return;
        case Type::Kind::Mu:
            out += "(mu ";
            put_string(out, t->name);
            out += ' ';
            put_type(out, t->a);
            out += ')';
            return;
        case Type::Kind::Var:
            out += "(tvar ";
            put_string(out, t->name);
            out += ')';
            return;
    }
}

void put_opt_type(std::string& out, const TypePtr& t) {
    if (!t) {
        out += "(none)";
        return;
    }
    out += "(some ";
    put_type(out, t);
    out += ')';
}

void put_constant(std::string& out, const Constant& c) {
    switch (c.kind) {
        case Constant::Kind::Int:
            out += "(ci " + std::to_string(c.i) + ")";
            return;
        case Constant::Kind::Bool:
            out += c.b ? "(cb 1)" : "(cb 0)";
            return;
        case Constant::Kind::Unit:
            out += "(cu)";
            return;
    }
}

void put_expr(std::string& out, const ExprPtr& e);

void put_arms(std::string& out, const MatchPtr& m) {
    out += "(arms ";
    put_string(out, m->left_var);
    out += ' ';
    put_expr(out, m->left_body);
    out += ' ';
    put_string(out, m->right_var);
    out += ' ';
    put_expr(out, m->right_body);
    out += m->from_if ? " 1)" : " 0)";
}

void put_type_env(std::string& out, const TypeEnv& env) {
    out += "(tenv";
    for (const auto& [n, t] : env.items) {
        out += " (";
        put_string(out, n);
        out += ' ';
        put_type(out, t);
        out += ')';
    }
    out += ')';
}

void put_kappa(std::string& out, const CodePointer& k) {
    out += "(kappa ";
    put_expr(out, k.fun);
    out += ' ';
    if (k.env_types)
        put_type_env(out, *k.env_types);
    else
        out += "(none)";
    out += ')';
}

void put_expr(std::string& out, const ExprPtr& e) {
    switch (e->kind) {
        case Expr::Kind::Var:
            out += "(var ";
            put_string(out, e->name);
            out += ')';
            return;
        case Expr::Kind::Const:
            out += "(const ";
            put_constant(out, e->lit);
            out += ')';
            return;
        case Expr::Kind::Prim:
            out += "(prim ";
            put_string(out, e->name);
            for (const auto& k : e->kids) {
                out += ' ';
                put_expr(out, k);
            }
            out += ')';
            return;
        case Expr::Kind::Let:
            out += "(let ";
            put_string(out, e->name);
            out += ' ';
            put_expr(out, e->kids[0]);
            out += ' ';
            put_expr(out, e->kids[1]);
            out += ')';
            return;
        case Expr::Kind::Pair:
            out += "(pair ";
            put_expr(out, e->kids[0]);
            out += ' ';
            put_expr(out, e->kids[1]);
            out += ')';
            return;
        case Expr::Kind::Fst:
            out += "(fst ";
            put_expr(out, e->kids[0]);
            out += ')';
            return;
        case Expr::Kind::Snd:
            out += "(snd ";
            put_expr(out, e->kids[0]);
            out += ')';
            return;
        case Expr::Kind::Inl:
            out += "(inl ";
            put_opt_type(out, e->ann);
            out += ' ';
            put_expr(out, e->kids[0]);
            out += ')';
            return;
        case Expr::Kind::Inr:
            out += "(inr ";
            put_opt_type(out, e->ann);
            out += ' ';
            put_expr(out, e->kids[0]);
            out += ')';
            return;
        case Expr::Kind::Case:
            out += "(case ";
            put_expr(out, e->kids[0]);
            out += ' ';
            put_arms(out, e->arms);
            out += ')';
            return;
        case Expr::Kind::Fun:
            out += "(fun ";
            put_string(out, e->name);
            out += ' ';
            put_string(out, e->arg_name);
            out += ' ';
            put_type(out, e->arg_type);
            out += ' ';
            put_type(out, e->ret_type);
            out += ' ';
            put_expr(out, e->kids[0]);
            out += ')';
            return;
        case Expr::Kind::App:
            out += "(app ";
            put_expr(out, e->kids[0]);
            out += ' ';
            put_expr(out, e->kids[1]);
            out += ')';
            return;
        case Expr::Kind::Roll:
            out += "(roll ";
            put_opt_type(out, e->ann);
            out += ' ';
            put_expr(out, e->kids[0]);
            out += ')';
            return;
        case Expr::Kind::Unroll:
            out += "(unroll ";
            put_expr(out, e->kids[0]);
            out += ')';
            return;
        case Expr::Kind::Labeled:
            out += "(labeled ";
            put_string(out, e->name);
            out += ' ';
            put_expr(out, e->kids[0]);
            out += ')';
            return;
        case Expr::Kind::Ascribe:
            out += "(ascribe ";
            put_type(out, e->ann);
            out += ' ';
            put_expr(out, e->kids[0]);
            out += ')';
            return;
    }
}

void put_value(std::string& out, const ValuePtr& v) {
    switch (v->kind) {
        case Value::Kind::Const:
            out += "(vconst ";
            put_constant(out, v->lit);
            out += ')';
            return;
        case Value::Kind::Pair:
            out += "(vpair ";
            put_value(out, v->a);
            out += ' ';
            put_value(out, v->b);
            out += ')';
            return;
        case Value::Kind::Inl:
            out += "(vinl ";
            put_opt_type(out, v->ann);
            out += ' ';
            put_value(out, v->a);
            out += ')';
            return;
        case Value::Kind::Inr:
            out += "(vinr ";
            put_opt_type(out, v->ann);
            out += ' ';
            put_value(out, v->a);
            out += ')';
            return;
        case Value::Kind::Roll:
            out += "(vroll ";
            put_opt_type(out, v->ann);
            out += ' ';
            put_value(out, v->a);
            out += ')';
            return;
        case Value::Kind::Closure: {
            out += "(vclos ";
            put_kappa(out, v->kappa);
            out += " (env";
            for (const auto& [n, bound] : v->env.items()) {
                out += " (";
                put_string(out, n);
                out += ' ';
                put_value(out, bound);
                out += ')';
            }
            out += "))";
            return;
        }
    }
}

void put_trace(std::string& out, const TracePtr& t) {
    switch (t->kind) {
        case Trace::Kind::Hole:
            out += "(hole)";
            return;
        case Trace::Kind::Var:
            out += "(tvar ";
            put_string(out, t->name);
            out += ')';
            return;
        case Trace::Kind::Const:
            out += "(tconst ";
            put_constant(out, t->lit);
            out += ')';
            return;
        case Trace::Kind::Prim:
            out += "(tprim ";
            put_string(out, t->name);
            for (const auto& k : t->kids) {
                out += ' ';
                put_trace(out, k);
            }
            out += ')';
            return;
        case Trace::Kind::Let:
            out += "(tlet ";
            put_string(out, t->name);
            out += ' ';
            put_trace(out, t->kids[0]);
            out += ' ';
            put_trace(out, t->kids[1]);
            out += ')';
            return;
        case Trace::Kind::Pair:
            out += "(tpair ";
            put_trace(out, t->kids[0]);
            out += ' ';
            put_trace(out, t->kids[1]);
            out += ')';
            return;
        case Trace::Kind::Fst:
            out += "(tfst ";
            put_trace(out, t->kids[0]);
            out += ')';
            return;
        case Trace::Kind::Snd:
            out += "(tsnd ";
            put_trace(out, t->kids[0]);
            out += ')';
            return;
        case Trace::Kind::Inl:
            out += "(tinl ";
            put_opt_type(out, t->ann);
            out += ' ';
            put_trace(out, t->kids[0]);
            out += ')';
            return;
        case Trace::Kind::Inr:
            out += "(tinr ";
            put_opt_type(out, t->ann);
            out += ' ';
            put_trace(out, t->kids[0]);
            out += ')';
            return;
        case Trace::Kind::CaseL:
            out += "(tcasel ";
            put_arms(out, t->arms);
            out += ' ';
            put_trace(out, t->kids[0]);
            out += ' ';
            put_string(out, t->name);
            out += ' ';
            put_trace(out, t->kids[1]);
            out += ')';
            return;
        case Trace::Kind::CaseR:
            out += "(tcaser ";
            put_arms(out, t->arms);
            out += ' ';
            put_trace(out, t->kids[0]);
            out += ' ';
            put_string(out, t->name);
            out += ' ';
            put_trace(out, t->kids[1]);
            out += ')';
            return;
        case Trace::Kind::Fun:
            out += "(tfun ";
            put_kappa(out, t->kappa);
            out += ')';
            return;
        case Trace::Kind::App:
            out += "(tapp ";
            put_kappa(out, t->kappa);
            out += ' ';
            put_trace(out, t->kids[0]);
            out += ' ';
            put_trace(out, t->kids[1]);
            out += ' ';
            put_string(out, t->name);
            out += ' ';
            put_string(out, t->arg_name);
            out += ' ';
            put_trace(out, t->kids[2]);
            out += ')';
            return;
        case Trace::Kind::Roll:
            out += "(troll ";
            put_opt_type(out, t->ann);
            out += ' ';
            put_trace(out, t->kids[0]);
            out += ')';
            return;
        case Trace::Kind::Unroll:
            out += "(tunroll ";
            put_trace(out, t->kids[0]);
            out += ')';
            return;
    }
}

void put_pattern(std::string& out, const PatternPtr& p) {
    switch (p->kind) {
        case Pattern::Kind::Hole: out += "(phole)"; return;
        case Pattern::Kind::Diamond: out += "(pdia)"; return;
        case Pattern::Kind::Const:
            out += "(pconst ";
            put_constant(out, p->lit);
            out += ')';
            return;
        case Pattern::Kind::Pair:
            out += "(ppair ";
            put_pattern(out, p->a);
            out += ' ';
            put_pattern(out, p->b);
            out += ')';
            return;
        case Pattern::Kind::Inl:
            out += "(pinl ";
            put_pattern(out, p->a);
            out += ')';
            return;
        case Pattern::Kind::Inr:
            out += "(pinr ";
            put_pattern(out, p->a);
            out += ')';
            return;
        case Pattern::Kind::Roll:
            out += "(proll ";
            put_pattern(out, p->a);
            out += ')';
            return;
        case Pattern::Kind::Closure: {
            out += "(pclos ";
            put_kappa(out, p->kappa);
            out += " (penv";
            for (const auto& [n, q] : p->env.items) {
                out += " (";
                put_string(out, n);
                out += ' ';
                put_pattern(out, q);
                out += ')';
            }
            out += "))";
            return;
        }
    }
}

void put_path(std::string& out, const Path& p) {
    out += "(path";
    for (const auto& s : p.steps) {
        switch (s.kind) {
            case PathStep::Kind::Var:
                out += " (s ";
                put_string(out, s.var);
                out += ')';
                break;
            case PathStep::Kind::One: out += " (s1)"; break;
            case PathStep::Kind::Two: out += " (s2)"; break;
        }
    }
    out += ')';
}

void put_ann_value(std::string& out, const AnnPtr<PathAnn>& v) {
    out += "(a ";
    if (v->ann) {
        out += "(some ";
        put_path(out, *v->ann);
        out += ')';
    } else {
        out += "(none)";
    }
    out += ' ';
    using K = AnnotatedValue<PathAnn>::Kind;
    switch (v->kind) {
        case K::Const:
            out += "(vconst ";
            put_constant(out, v->lit);
            out += ')';
            break;
        case K::Pair:
            out += "(vpair ";
            put_ann_value(out, v->a);
            out += ' ';
            put_ann_value(out, v->b);
            out += ')';
            break;
        case K::Inl:
            out += "(vinl ";
            put_opt_type(out, v->type_ann);
            out += ' ';
            put_ann_value(out, v->a);
            out += ')';
            break;
        case K::Inr:
            out += "(vinr ";
            put_opt_type(out, v->type_ann);
            out += ' ';
            put_ann_value(out, v->a);
            out += ')';
            break;
        case K::Roll:
            out += "(vroll ";
            put_opt_type(out, v->type_ann);
            out += ' ';
            put_ann_value(out, v->a);
            out += ')';
            break;
        case K::Closure: {
            out += "(vclos ";
            put_kappa(out, v->kappa);
            out += " (aenv";
            for (const auto& [n, bound] : v->env.items) {
                out += " (";
                put_string(out, n);
                out += ' ';
                put_ann_value(out, bound);
                out += ')';
            }
            out += "))";
            break;
        }
    }
    out += ')';
}

void put_ann_env(std::string& out, const AnnotatedEnv<PathAnn>& env) {
    out += "(aenv";
    for (const auto& [n, v] : env.items) {
        out += " (";
        put_string(out, n);
        out += ' ';
        put_ann_value(out, v);
        out += ')';
    }
    out += ')';
}

}  // namespace

std::string serialize_type(const TypePtr& t) {
    std::string out;
    put_type(out, t);
    return out;
}
std::string serialize_expr(const ExprPtr& e) {
    std::string out;
    put_expr(out, e);
    return out;
}
std::string serialize_value(const ValuePtr& v) {
    std::string out;
    put_value(out, v);
    return out;
}
std::string serialize_trace(const TracePtr& t) {
    std::string out;
    put_trace(out, t);
    return out;
}
std::string serialize_pattern(const PatternPtr& p) {
    std::string out;
    put_pattern(out, p);
    return out;
}
std::string serialize_pattern_env(const PatternEnv& rho) {
    std::string out;
    out += "(penv";
    for (const auto& [n, q] : rho.items) {
        out += " (";
        put_string(out, n);
        out += ' ';
        put_pattern(out, q);
        out += ')';
    }
    out += ')';
    return out;
}
std::string serialize_annotated_env(const AnnotatedEnv<PathAnn>& env) {
    std::string out;
    put_ann_env(out, env);
    return out;
}

std::string serialize_document(const TraceDocument& doc) {
    std::string out = "tmltrace " + std::to_string(doc.version) + "\n";
    put_type_env(out, doc.label_types);
    out += '\n';
    put_ann_env(out, doc.env);
    out += '\n';
    put_trace(out, doc.trace);
    out += '\n';
    put_value(out, doc.value);
    out += '\n';
    return out;
}

// ---------------------------------------------------------------------------
// Reader
// ---------------------------------------------------------------------------

namespace {

struct Reader {
    const std::string& src;
    std::size_t pos = 0;

    explicit Reader(const std::string& s) : src(s) {}

    [[noreturn]] void fail(const std::string& msg) const {
        throw MalformedDocument(msg, pos);
    }

    void skip_space() {
        while (pos < src.size() && (src[pos] == ' ' || src[pos] == '\n')) pos++;
    }
    void open() {
        skip_space();
        if (pos >= src.size() || src[pos] != '(') fail("expected '('");
        pos++;
    }
    void close() {
        skip_space();
        if (pos >= src.size() || src[pos] != ')') fail("expected ')'");
        pos++;
    }
    std::string word() {
        skip_space();
        std::size_t start = pos;
        while (pos < src.size() && (std::isalnum(static_cast<unsigned char>(src[pos])) ||
                                    src[pos] == '_' || src[pos] == '-'))
            pos++;
        if (start == pos) fail("expected a tag");
        return src.substr(start, pos - start);
    }
    std::string tag() {
        open();
        return word();
    }
    std::string peek_tag() {
        std::size_t save = pos;
        std::string t = tag();
        pos = save;
        return t;
    }
    std::int64_t integer() {
        skip_space();
        std::size_t start = pos;
        if (pos < src.size() && src[pos] == '-') pos++;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) pos++;
        if (start == pos) fail("expected an integer");
        return std::stoll(src.substr(start, pos - start));
    }
    std::string quoted() {
        skip_space();
        if (pos >= src.size() || src[pos] != '"') fail("expected '\"'");
        pos++;
        std::string out;
        while (pos < src.size() && src[pos] != '"') {
            if (src[pos] == '\\') {
                pos++;
                if (pos >= src.size()) fail("truncated escape");
            }
            out += src[pos++];
        }
        if (pos >= src.size()) fail("unterminated string");
        pos++;
        return out;
    }
    bool at_close() {
        skip_space();
        return pos < src.size() && src[pos] == ')';
    }
    void done() {
        skip_space();
        if (pos != src.size()) fail("trailing bytes");
    }

    TypePtr type() {
        std::string t = tag();
        if (t == "int") { close(); return t_int(); }
        if (t == "bool") { close(); return t_bool(); }
        if (t == "unit") { close(); return t_unit(); }
        if (t == "prod") { TypePtr a = type(), b = type(); close(); return t_prod(a, b); }
        if (t == "sum") { TypePtr a = type(), b = type(); close(); return t_sum(a, b); }
        if (t == "arrow") { TypePtr a = type(), b = type(); close(); return t_arrow(a, b); }
        if (t == "mu") { std::string n = quoted(); TypePtr a = type(); close(); return t_mu(n, a); }
        if (t == "tvar") { std::string n = quoted(); close(); return t_var(n); }
        fail("unknown type tag " + t);
    }

    TypePtr opt_type() {
        std::string t = tag();
        if (t == "none") { close(); return nullptr; }
        if (t == "some") { TypePtr a = type(); close(); return a; }
        fail("expected (some ...) or (none)");
    }

    Constant constant() {
        std::string t = tag();
        if (t == "ci") { std::int64_t v = integer(); close(); return Constant::of_int(v); }
        if (t == "cb") { std::int64_t v = integer(); close(); return Constant::of_bool(v != 0); }
        if (t == "cu") { close(); return Constant::unit(); }
        fail("unknown constant tag " + t);
    }

    MatchPtr arms() {
        std::string t = tag();
        if (t != "arms") fail("expected (arms ...)");
        std::string x1 = quoted();
        ExprPtr e1 = expr();
        std::string x2 = quoted();
        ExprPtr e2 = expr();
        bool from_if = integer() != 0;
        close();
        return std::make_shared<MatchArms>(MatchArms{x1, x2, e1, e2, from_if});
    }

    TypeEnv type_env() {
        std::string t = tag();
        if (t != "tenv") fail("expected (tenv ...)");
        TypeEnv env;
        while (!at_close()) {
            open();
            std::string n = quoted();
            TypePtr ty = type();
            close();
            env.items.emplace_back(n, ty);
        }
        close();
        return env;
    }

    CodePointer kappa() {
        std::string t = tag();
        if (t != "kappa") fail("expected (kappa ...)");
        ExprPtr fn = expr();
        CodePointer k;
        k.fun = fn;
        if (peek_tag() == "none") {
            open();
            word();
            close();
        } else {
            k.env_types = std::make_shared<TypeEnv>(type_env());
        }
        close();
        return k;
    }

    ExprPtr expr() {
        std::string t = tag();
        if (t == "var") { std::string n = quoted(); close(); return e_var(n); }
        if (t == "const") { Constant c = constant(); close(); return e_const(c); }
        if (t == "prim") {
            std::string op = quoted();
            std::vector<ExprPtr> kids;
            while (!at_close()) kids.push_back(expr());
            close();
            return e_prim(op, std::move(kids));
        }
        if (t == "let") {
            std::string n = quoted();
            ExprPtr a = expr(), b = expr();
            close();
            return e_let(n, a, b);
        }
        if (t == "pair") { ExprPtr a = expr(), b = expr(); close(); return e_pair(a, b); }
        if (t == "fst") { ExprPtr a = expr(); close(); return e_fst(a); }
        if (t == "snd") { ExprPtr a = expr(); close(); return e_snd(a); }
        if (t == "inl") { TypePtr ty = opt_type(); ExprPtr a = expr(); close(); return e_inl(a, ty); }
        if (t == "inr") { TypePtr ty = opt_type(); ExprPtr a = expr(); close(); return e_inr(a, ty); }
        if (t == "case") { ExprPtr s = expr(); MatchPtr m = arms(); close(); return e_case(s, m); }
        if (t == "fun") {
            std::string f = quoted(), x = quoted();
            TypePtr ta = type(), tr = type();
            ExprPtr body = expr();
            close();
            return e_fun(f, x, ta, tr, body);
        }
        if (t == "app") { ExprPtr a = expr(), b = expr(); close(); return e_app(a, b); }
        if (t == "roll") { TypePtr ty = opt_type(); ExprPtr a = expr(); close(); return e_roll(a, ty); }
        if (t == "unroll") { ExprPtr a = expr(); close(); return e_unroll(a); }
        if (t == "labeled") { std::string n = quoted(); ExprPtr a = expr(); close(); return e_labeled(n, a); }
        if (t == "ascribe") { TypePtr ty = type(); ExprPtr a = expr(); close(); return e_ascribe(a, ty); }
        fail("unknown expression tag " + t);
    }

    Env env() {
        std::string t = tag();
        if (t != "env") fail("expected (env ...)");
        Env out;
        while (!at_close()) {
            open();
            std::string n = quoted();
            ValuePtr v = value();
            close();
            out = out.extend(n, v);
        }
        close();
        return out;
    }

    ValuePtr value() {
        std::string t = tag();
        if (t == "vconst") { Constant c = constant(); close(); return v_const(c); }
        if (t == "vpair") { ValuePtr a = value(), b = value(); close(); return v_pair(a, b); }
        if (t == "vinl") { TypePtr ty = opt_type(); ValuePtr a = value(); close(); return v_inl(a, ty); }
        if (t == "vinr") { TypePtr ty = opt_type(); ValuePtr a = value(); close(); return v_inr(a, ty); }
        if (t == "vroll") { TypePtr ty = opt_type(); ValuePtr a = value(); close(); return v_roll(a, ty); }
        if (t == "vclos") {
            CodePointer k = kappa();
            Env e = env();
            close();
            return v_closure(k, e);
        }
        fail("unknown value tag " + t);
    }

    TracePtr trace() {
        std::string t = tag();
        if (t == "hole") { close(); return tr_hole(); }
        if (t == "tvar") { std::string n = quoted(); close(); return tr_var(n); }
        if (t == "tconst") { Constant c = constant(); close(); return tr_const(c); }
        if (t == "tprim") {
            std::string op = quoted();
            std::vector<TracePtr> kids;
            while (!at_close()) kids.push_back(trace());
            close();
            return tr_prim(op, std::move(kids));
        }
        if (t == "tlet") {
            std::string n = quoted();
            TracePtr a = trace(), b = trace();
            close();
            return tr_let(n, a, b);
        }
        if (t == "tpair") { TracePtr a = trace(), b = trace(); close(); return tr_pair(a, b); }
        if (t == "tfst") { TracePtr a = trace(); close(); return tr_fst(a); }
        if (t == "tsnd") { TracePtr a = trace(); close(); return tr_snd(a); }
        if (t == "tinl") { TypePtr ty = opt_type(); TracePtr a = trace(); close(); return tr_inl(a, ty); }
        if (t == "tinr") { TypePtr ty = opt_type(); TracePtr a = trace(); close(); return tr_inr(a, ty); }
        if (t == "tcasel") {
            MatchPtr m = arms();
            TracePtr s = trace();
            std::string n = quoted();
            TracePtr b = trace();
            close();
            return tr_case_l(m, s, n, b);
        }
        if (t == "tcaser") {
            MatchPtr m = arms();
            TracePtr s = trace();
            std::string n = quoted();
            TracePtr b = trace();
            close();
            return tr_case_r(m, s, n, b);
        }
        if (t == "tfun") { CodePointer k = kappa(); close(); return tr_fun(k); }
        if (t == "tapp") {
            CodePointer k = kappa();
            TracePtr a = trace(), b = trace();
            std::string f = quoted(), x = quoted();
            TracePtr body = trace();
            close();
            return tr_app(k, a, b, f, x, body);
        }
        if (t == "troll") { TypePtr ty = opt_type(); TracePtr a = trace(); close(); return tr_roll(a, ty); }
        if (t == "tunroll") { TracePtr a = trace(); close(); return tr_unroll(a); }
        fail("unknown trace tag " + t);
    }

    PatternPtr pattern() {
        std::string t = tag();
        if (t == "phole") { close(); return p_hole(); }
        if (t == "pdia") { close(); return p_diamond(); }
        if (t == "pconst") { Constant c = constant(); close(); return p_const(c); }
        if (t == "ppair") { PatternPtr a = pattern(), b = pattern(); close(); return p_pair(a, b); }
        if (t == "pinl") { PatternPtr a = pattern(); close(); return p_inl(a); }
        if (t == "pinr") { PatternPtr a = pattern(); close(); return p_inr(a); }
        if (t == "proll") { PatternPtr a = pattern(); close(); return p_roll(a); }
        if (t == "pclos") {
            CodePointer k = kappa();
            PatternEnv env = pattern_env();
            close();
            return p_closure(k, env);
        }
        fail("unknown pattern tag " + t);
    }

    PatternEnv pattern_env() {
        std::string t = tag();
        if (t != "penv") fail("expected (penv ...)");
        PatternEnv out;
        while (!at_close()) {
            open();
            std::string n = quoted();
            PatternPtr p = pattern();
            close();
            out.items.emplace_back(n, p);
        }
        close();
        return out;
    }

    Path path() {
        std::string t = tag();
        if (t != "path") fail("expected (path ...)");
        Path p;
        while (!at_close()) {
            std::string s = tag();
            if (s == "s") {
                p.steps.push_back(PathStep::v(quoted()));
            } else if (s == "s1") {
                p.steps.push_back(PathStep::one());
            } else if (s == "s2") {
                p.steps.push_back(PathStep::two());
            } else {
                fail("unknown path step " + s);
            }
            close();
        }
        close();
        return p;
    }

    AnnPtr<PathAnn> ann_value() {
        std::string t = tag();
        if (t != "a") fail("expected (a ...)");
        PathAnn ann;
        std::string w = tag();
        if (w == "some") {
            ann = path();
            close();
        } else if (w == "none") {
            close();
        } else {
            fail("expected (some ...) or (none)");
        }
        std::string v = tag();
        AnnPtr<PathAnn> out;
        if (v == "vconst") {
            Constant c = constant();
            close();
            out = an_const<PathAnn>(c, ann);
        } else if (v == "vpair") {
            AnnPtr<PathAnn> a = ann_value(), b = ann_value();
            close();
            out = an_pair<PathAnn>(a, b, ann);
        } else if (v == "vinl") {
            TypePtr ty = opt_type();
            AnnPtr<PathAnn> a = ann_value();
            close();
            out = an_inl<PathAnn>(a, ann, ty);
        } else if (v == "vinr") {
            TypePtr ty = opt_type();
            AnnPtr<PathAnn> a = ann_value();
            close();
            out = an_inr<PathAnn>(a, ann, ty);
        } else if (v == "vroll") {
            TypePtr ty = opt_type();
            AnnPtr<PathAnn> a = ann_value();
            close();
            out = an_roll<PathAnn>(a, ann, ty);
        } else if (v == "vclos") {
            CodePointer k = kappa();
            AnnotatedEnv<PathAnn> env = ann_env();
            close();
            out = an_closure<PathAnn>(k, env, ann);
        } else {
            fail("unknown annotated value tag " + v);
        }
        close();
        return out;
    }

    AnnotatedEnv<PathAnn> ann_env() {
        std::string t = tag();
        if (t != "aenv") fail("expected (aenv ...)");
        AnnotatedEnv<PathAnn> out;
        while (!at_close()) {
            open();
            std::string n = quoted();
            AnnPtr<PathAnn> v = ann_value();
            close();
            out.items.emplace_back(n, v);
        }
        close();
        return out;
    }
};

}  // namespace

TypePtr deserialize_type(const std::string& b) {
    Reader r(b);
    TypePtr t = r.type();
    r.done();
    return t;
}
ExprPtr deserialize_expr(const std::string& b) {
    Reader r(b);
    ExprPtr e = r.expr();
    r.done();
    return e;
}
ValuePtr deserialize_value(const std::string& b) {
    Reader r(b);
    ValuePtr v = r.value();
    r.done();
    return v;
}
TracePtr deserialize_trace_node(const std::string& b) {
    Reader r(b);
    TracePtr t = r.trace();
    r.done();
    return t;
}
PatternPtr deserialize_pattern(const std::string& b) {
    Reader r(b);
    PatternPtr p = r.pattern();
    r.done();
    return p;
}
PatternEnv deserialize_pattern_env(const std::string& b) {
    Reader r(b);
    PatternEnv p = r.pattern_env();
    r.done();
    return p;
}
AnnotatedEnv<PathAnn> deserialize_annotated_env(const std::string& b) {
    Reader r(b);
    AnnotatedEnv<PathAnn> e = r.ann_env();
    r.done();
    return e;
}

TraceDocument deserialize_document(const std::string& bytes) {
    const std::string magic = "tmltrace ";
    if (bytes.rfind(magic, 0) != 0) throw MalformedDocument("missing header", 0);
    std::size_t nl = bytes.find('\n');
    if (nl == std::string::npos) throw MalformedDocument("missing header line", bytes.size());
    int version = 0;
    try {
        version = std::stoi(bytes.substr(magic.size(), nl - magic.size()));
    } catch (...) {
        throw MalformedDocument("bad version field", magic.size());
    }
    if (version != 1) throw MalformedDocument("unsupported version", magic.size());
    Reader r(bytes);
    r.pos = nl + 1;
    TraceDocument doc;
    doc.version = version;
    doc.label_types = r.type_env();
    doc.env = r.ann_env();
    doc.trace = r.trace();
    doc.value = r.value();
    r.done();
    return doc;
}

}  // namespace tml
