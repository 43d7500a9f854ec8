#include "tml/session.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "tml/parser.hpp"
#include "tml/typecheck.hpp"

namespace tml {

// ---------------------------------------------------------------------------
// Annotated value rendering
// ---------------------------------------------------------------------------

namespace {

template <class A>
std::optional<std::vector<AnnPtr<A>>> ann_list_elements(const AnnPtr<A>& v) {
    using K = typename AnnotatedValue<A>::Kind;
    std::vector<AnnPtr<A>> out;
    AnnPtr<A> cur = v;
    while (true) {
        if (!cur || cur->kind != K::Roll) return std::nullopt;
        AnnPtr<A> s = cur->a;
        if (s->kind == K::Inl) {
            if (s->a->kind != K::Const || s->a->lit.kind != Constant::Kind::Unit)
                return std::nullopt;
            return out;
        }
        if (s->kind != K::Inr) return std::nullopt;
        if (s->a->kind != K::Pair) return std::nullopt;
        out.push_back(s->a->a);
        cur = s->a->b;
    }
}

// Where-annotations: inside a list, constants always show their provenance
// set (possibly empty); elsewhere a label prints bare and a blank is silent.
std::string render_where_at(const AnnPtr<WhereAnn>& v, bool list_elem) {
    using K = AnnotatedValue<WhereAnn>::Kind;
    if (auto elems = ann_list_elements<WhereAnn>(v)) {
        std::string out = "[";
        for (std::size_t i = 0; i < elems->size(); i++) {
            if (i) out += ",";
            out += render_where_at((*elems)[i], true);
        }
        return out + "]";
    }
    auto suffix = [&](const std::string& body) {
        if (list_elem) return body + "@{" + (v->ann ? pretty_path(*v->ann) : "") + "}";
        if (v->ann) return body + "@" + pretty_path(*v->ann);
        return body;
    };
    switch (v->kind) {
        case K::Const:
            return suffix(pretty_constant(v->lit));
        case K::Pair: {
            std::string body = "(" + render_where_at(v->a, false) + "," +
                               render_where_at(v->b, false) + ")";
            return v->ann ? body + "@" + pretty_path(*v->ann) : body;
        }
        case K::Inl: {
            std::string body = "inl(" + render_where_at(v->a, false) + ")";
            return v->ann ? body + "@" + pretty_path(*v->ann) : body;
        }
        case K::Inr: {
            std::string body = "inr(" + render_where_at(v->a, false) + ")";
            return v->ann ? body + "@" + pretty_path(*v->ann) : body;
        }
        case K::Roll: {
            std::string body = "roll(" + render_where_at(v->a, false) + ")";
            return v->ann ? body + "@" + pretty_path(*v->ann) : body;
        }
        case K::Closure:
            return "<fun " + v->kappa.fun->name + ">";
    }
    return "?";
}

std::string render_dep_rec(const AnnPtr<DepAnn>& v) {
    using K = AnnotatedValue<DepAnn>::Kind;
    if (auto elems = ann_list_elements<DepAnn>(v)) {
        std::string out = "[";
        for (std::size_t i = 0; i < elems->size(); i++) {
            if (i) out += ",";
            out += render_dep_rec((*elems)[i]);
        }
        return out + "]";
    }
    switch (v->kind) {
        case K::Const: {
            std::string out = pretty_constant(v->lit) + "@{";
            for (std::size_t i = 0; i < v->ann.paths.size(); i++) {
                if (i) out += ",";
                out += pretty_path(v->ann.paths[i]);
            }
            return out + "}";
        }
        case K::Pair:
            return "(" + render_dep_rec(v->a) + "," + render_dep_rec(v->b) + ")";
        case K::Inl: return "inl(" + render_dep_rec(v->a) + ")";
        case K::Inr: return "inr(" + render_dep_rec(v->a) + ")";
        case K::Roll: return "roll(" + render_dep_rec(v->a) + ")";
        case K::Closure: return "<fun " + v->kappa.fun->name + ">";
    }
    return "?";
}

std::string render_expr_rec(const AnnPtr<TermPtr>& v) {
    using K = AnnotatedValue<TermPtr>::Kind;
    if (auto elems = ann_list_elements<TermPtr>(v)) {
        std::string out = "[";
        for (std::size_t i = 0; i < elems->size(); i++) {
            if (i) out += ",";
            out += render_expr_rec((*elems)[i]);
        }
        return out + "]";
    }
    switch (v->kind) {
        case K::Const: {
            bool blank = v->ann->kind == ExprAnnotation::Kind::Bottom;
            return pretty_constant(v->lit) + "@{" + (blank ? "" : pretty_term(v->ann)) + "}";
        }
        case K::Pair:
            return "(" + render_expr_rec(v->a) + "," + render_expr_rec(v->b) + ")";
        case K::Inl: return "inl(" + render_expr_rec(v->a) + ")";
        case K::Inr: return "inr(" + render_expr_rec(v->a) + ")";
        case K::Roll: return "roll(" + render_expr_rec(v->a) + ")";
        case K::Closure: return "<fun " + v->kappa.fun->name + ">";
    }
    return "?";
}

}  // namespace

std::string render_where(const AnnPtr<WhereAnn>& v) { return render_where_at(v, false); }
std::string render_dep(const AnnPtr<DepAnn>& v) { return render_dep_rec(v); }
std::string render_expr_ann(const AnnPtr<TermPtr>& v) { return render_expr_rec(v); }

// ---------------------------------------------------------------------------
// Label hoisting
// ---------------------------------------------------------------------------

namespace {

// A labeled subterm must be a closed literal (elaborated, so constructor
// annotations are present).
ValuePtr literal_value(const ExprPtr& e) {
    switch (e->kind) {
        case Expr::Kind::Const:
            return v_const(e->lit);
        case Expr::Kind::Pair:
            return v_pair(literal_value(e->kids[0]), literal_value(e->kids[1]));
        case Expr::Kind::Inl:
            return v_inl(literal_value(e->kids[0]), e->ann);
        case Expr::Kind::Inr:
            return v_inr(literal_value(e->kids[0]), e->ann);
        case Expr::Kind::Roll:
            return v_roll(literal_value(e->kids[0]), e->ann);
        default:
            throw Error("a labeled expression must be a literal value");
    }
}

struct Hoisted {
    ExprPtr expr;
    std::vector<std::pair<std::string, ValuePtr>> labels;
};

ExprPtr hoist_rec(const ExprPtr& e, std::vector<std::pair<std::string, ValuePtr>>& out) {
    if (!e) return e;
    if (e->kind == Expr::Kind::Labeled) {
        ValuePtr v = literal_value(e->kids[0]);
        for (const auto& [n, w] : out)
            if (n == e->name) throw Error("duplicate label " + e->name);
        out.emplace_back(e->name, v);
        return e_var(e->name);
    }
    std::vector<ExprPtr> kids;
    kids.reserve(e->kids.size());
    bool changed = false;
    for (const auto& k : e->kids) {
        ExprPtr nk = hoist_rec(k, out);
        changed |= nk.get() != k.get();
        kids.push_back(nk);
    }
    MatchPtr arms = e->arms;
    if (arms) {
        ExprPtr l = hoist_rec(arms->left_body, out);
        ExprPtr r = hoist_rec(arms->right_body, out);
        if (l.get() != arms->left_body.get() || r.get() != arms->right_body.get()) {
            arms = std::make_shared<MatchArms>(
                MatchArms{arms->left_var, arms->right_var, l, r, arms->from_if});
            changed = true;
        }
    }
    if (!changed) return e;
    Expr copy = *e;
    copy.kids = std::move(kids);
    copy.arms = arms;
    return std::make_shared<Expr>(std::move(copy));
}

Hoisted hoist_labels(const ExprPtr& e) {
    Hoisted h;
    h.expr = hoist_rec(e, h.labels);
    return h;
}

}  // namespace

// ---------------------------------------------------------------------------
// Session
// ---------------------------------------------------------------------------

Session::Session(SessionOptions opts) : canonical_(opts.canonical), fuel_(opts.fuel) {
    // prelude: the monomorphic list map used by the toplevel examples
    std::string map_src =
        "val map = fun map(g:int->int):(int list->int list). "
        "fun m(xs:int list):int list. "
        "case unroll xs of {inl(u). ([] : int list); "
        "inr(c). (g (fst c)) :: (map g (snd c))}";
    run_line(map_src);
}

const TraceDocument* Session::trace_entry(const std::string& name) const {
    auto it = traces_.find(name);
    return it == traces_.end() ? nullptr : &it->second;
}

const TraceDocument& Session::entry_or_throw(const std::string& name) const {
    if (const TraceDocument* doc = trace_entry(name)) return *doc;
    throw Error("no trace bound to '" + name + "'");
}

Session::Evaluated Session::evaluate(const ExprPtr& parsed) {
    Elaborated el = check_expr(tenv_, parsed);
    Hoisted h = hoist_labels(el.expr);
    for (const auto& [label, value] : h.labels) {
        if (tenv_.find(label)) throw Error("label " + label + " is already bound");
        Path root;
        root.steps.push_back(PathStep::v(label));
        env_ = env_.extend(label, path_annotate(value, root));
        tenv_ = tenv_.extend(label, value_type(value));
        labels_.push_back(label);
    }
    EvalResult r = eval(erase<PathAnn>(env_), h.expr, fuel_);
    return {h.expr, el.type, r.value, r.trace};
}

TypeEnv Session::trace_label_types(const AnnotatedEnv<PathAnn>& env,
                                   const TracePtr& t) const {
    std::set<std::string> fv = trace_free_vars(t);
    TypeEnv out;
    std::function<void(const AnnPtr<PathAnn>&)> collect =
        [&](const AnnPtr<PathAnn>& v) {
            using K = AnnotatedValue<PathAnn>::Kind;
            if (v->kind == K::Closure) return;  // captured labels stay hidden
            if (v->ann && !v->ann->steps.empty() &&
                v->ann->steps[0].kind == PathStep::Kind::Var) {
                const std::string& head = v->ann->steps[0].var;
                bool is_label = false;
                for (const auto& l : labels_) is_label |= (l == head);
                if (is_label && !out.find(head)) {
                    if (auto bound = env.find(head))
                        out.items.emplace_back(head, value_type(erase<PathAnn>(bound)));
                }
            }
            switch (v->kind) {
                case K::Pair:
                    collect(v->a);
                    collect(v->b);
                    break;
                case K::Inl:
                case K::Inr:
                case K::Roll:
                    collect(v->a);
                    break;
                default:
                    break;
            }
        };
    for (const auto& [n, v] : env.items)
        if (fv.count(n)) collect(v);
    return out;
}

std::string Session::bind_trace(const std::string& name, const Evaluated& r) {
    TraceDocument doc;
    doc.label_types = trace_label_types(env_, r.trace);
    doc.env = env_;
    doc.trace = r.trace;
    doc.value = r.value;
    traces_[name] = doc;
    std::string label_env = "{";
    bool first = true;
    for (const auto& [n, ty] : doc.label_types.items) {
        if (!first) label_env += ",";
        first = false;
        label_env += n + ":" + pretty_type(ty);
    }
    label_env += "}";
    return "val " + name + " = <trace> : (" + label_env + ", " +
           pretty_type(value_type(r.value)) + ") trace";
}

namespace {

// Hidden names are holed inside kept closure environments as well: hiding y
// hides every captured copy of it.
PatternPtr prune_hidden(const PatternPtr& p, const std::set<std::string>& hidden) {
    switch (p->kind) {
        case Pattern::Kind::Hole:
        case Pattern::Kind::Diamond:
        case Pattern::Kind::Const:
            return p;
        case Pattern::Kind::Pair:
            return p_pair(prune_hidden(p->a, hidden), prune_hidden(p->b, hidden));
        case Pattern::Kind::Inl: return p_inl(prune_hidden(p->a, hidden));
        case Pattern::Kind::Inr: return p_inr(prune_hidden(p->a, hidden));
        case Pattern::Kind::Roll: return p_roll(prune_hidden(p->a, hidden));
        case Pattern::Kind::Closure: {
            PatternEnv env;
            for (const auto& [n, q] : p->env.items) {
                if (hidden.count(n)) continue;  // absent means hole
                env.items.emplace_back(n, prune_hidden(q, hidden));
            }
            return p_closure(p->kappa, std::move(env));
        }
    }
    return p;
}

}  // namespace

PatternEnv Session::resolve_pattern_env(
    const TraceDocument& doc,
    const std::vector<std::pair<std::string, PatternPtr>>& items) {
    std::set<std::string> hidden;
    for (const auto& [name, pat] : items)
        if (pat && pat->kind == Pattern::Kind::Hole) hidden.insert(name);
    PatternEnv rho;
    for (const auto& [name, pat] : items) {
        if (pat) {
            rho.items.emplace_back(name, pat);
        } else {  // keep: the full recorded value, minus hidden captures
            auto bound = doc.env.find(name);
            if (!bound) throw Error("environment lacks " + name);
            rho.items.emplace_back(
                name, prune_hidden(pattern_of_value(erase<PathAnn>(bound)), hidden));
        }
    }
    return rho;
}

std::string Session::run_line(const std::string& line) {
    try {
        return dispatch(parse_command(line));
    } catch (const Error& e) {
        return std::string("error: ") + e.what();
    } catch (const std::exception& e) {
        return std::string("error: ") + e.what();
    }
}

std::string Session::dispatch(const Command& cmd) {
    switch (cmd.kind) {
        case Command::Kind::Empty:
            return "";
        case Command::Kind::Expr: {
            Evaluated r = evaluate(cmd.expr);
            return "val it = " + pretty_value(r.value);
        }
        case Command::Kind::Val: {
            Evaluated r = evaluate(cmd.expr);
            // where-extraction carries label annotations into the binding
            AnnPtr<WhereAnn> stored =
                extract<WhereAnn>(where_structure(), r.trace, env_, fuel_);
            env_ = env_.extend(cmd.name, stored);
            tenv_ = tenv_.extend(cmd.name, r.type);
            return "val " + cmd.name + " = " + pretty_value(r.value);
        }
        case Command::Kind::ValTrace: {
            Evaluated r = evaluate(cmd.expr);
            return bind_trace(cmd.name, r);
        }
        case Command::Kind::Trace: {
            Evaluated r = evaluate(cmd.expr);
            return bind_trace("it", r);
        }
        case Command::Kind::Where: {
            const TraceDocument& doc = entry_or_throw(cmd.name);
            auto out = extract<WhereAnn>(where_structure(), doc.trace, doc.env, fuel_);
            return "val it = " + render_where(out);
        }
        case Command::Kind::Dependency: {
            const TraceDocument& doc = entry_or_throw(cmd.name);
            auto out = extract<DepAnn>(dep_structure(), doc.trace,
                                       to_dep_annotations(doc.env), fuel_);
            return "val it = " + render_dep(out);
        }
        case Command::Kind::Expression: {
            const TraceDocument& doc = entry_or_throw(cmd.name);
            auto out = extract<TermPtr>(expr_structure(), doc.trace,
                                        to_expr_annotations(doc.env), fuel_);
            return "val it = " + render_expr_ann(out);
        }
        case Command::Kind::Slice: {
            const TraceDocument& doc = entry_or_throw(cmd.name);
            Slice s = disc_view(cmd.pattern, erase<PathAnn>(doc.env), doc.trace, doc.value);
            if (canonical_)
                return "rho = " + serialize_pattern_env(s.env_part) + "\nS = " +
                       serialize_trace(s.trace_part);
            return "rho = " + pretty_pattern_env(s.env_part) + "\nS = " +
                   pretty_trace(s.trace_part);
        }
        case Command::Kind::Obfuscate: {
            const TraceDocument& doc = entry_or_throw(cmd.name);
            PatternEnv rho = resolve_pattern_env(doc, cmd.env_items);
            ObfuscationResult r =
                obf_view(rho, erase<PathAnn>(doc.env), doc.trace, doc.value);
            if (canonical_)
                return "p = " + serialize_pattern(r.value) + "\nS = " +
                       serialize_trace(r.trace);
            return "p = " + pretty_pattern(r.value) + "\nS = " + pretty_trace(r.trace);
        }
        case Command::Kind::Replay: {
            const TraceDocument& doc = entry_or_throw(cmd.name);
            Env env = erase<PathAnn>(doc.env);
            for (const auto& [name, oe] : cmd.overrides) {
                Elaborated el = check_expr(tenv_, oe);
                EvalResult r = eval(erase<PathAnn>(env_), el.expr, fuel_);
                env = env.extend(name, r.value);
            }
            ValuePtr v = replay(env, doc.trace, fuel_);
            return "val it = " + pretty_value(v);
        }
        case Command::Kind::TypeOf: {
            Elaborated el = check_expr(tenv_, cmd.expr);
            return pretty_type(el.type);
        }
        case Command::Kind::Save: {
            const TraceDocument& doc =
                entry_or_throw(cmd.name.empty() ? "it" : cmd.name);
            std::ofstream out(cmd.file, std::ios::binary);
            if (!out) throw Error("cannot open " + cmd.file);
            out << serialize_document(doc);
            return "saved " + cmd.file;
        }
        case Command::Kind::Load: {
            std::ifstream in(cmd.file, std::ios::binary);
            if (!in) throw Error("cannot open " + cmd.file);
            std::stringstream buf;
            buf << in.rdbuf();
            traces_["it"] = deserialize_document(buf.str());
            return "loaded " + cmd.file;
        }
        case Command::Kind::Fuel:
            fuel_ = cmd.fuel;
            return "fuel = " + std::to_string(fuel_);
    }
    return "";
}

int batch_run(std::istream& script, std::ostream& out, SessionOptions opts,
              bool keep_going) {
    Session session(opts);
    std::string line;
    int status = 0;
    while (std::getline(script, line)) {
        std::string trimmed = line;
        while (!trimmed.empty() && (trimmed.back() == ' ' || trimmed.back() == '\r'))
            trimmed.pop_back();
        if (trimmed.empty() || trimmed[0] == '#') continue;
        out << "- " << trimmed << "\n";
        std::string result = session.run_line(trimmed);
        if (!result.empty()) out << result << "\n";
        if (result.rfind("error:", 0) == 0 && !keep_going) {
            status = 1;
            break;
        }
    }
    return status;
}

}  // namespace tml
