#include "tml/annot.hpp"

namespace tml {

Path Path::dot_var(const std::string& x) const {
    Path p = *this;
    p.steps.push_back(PathStep::v(x));
    return p;
}
Path Path::dot1() const {
    Path p = *this;
    p.steps.push_back(PathStep::one());
    return p;
}
Path Path::dot2() const {
    Path p = *this;
    p.steps.push_back(PathStep::two());
    return p;
}
Path Path::concat(const Path& rhs) const {
    Path p = *this;
    p.steps.insert(p.steps.end(), rhs.steps.begin(), rhs.steps.end());
    return p;
}

static int step_cmp(const PathStep& a, const PathStep& b) {
    if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
    if (a.kind == PathStep::Kind::Var) {
        if (a.var != b.var) return a.var < b.var ? -1 : 1;
    }
    return 0;
}

bool operator==(const Path& a, const Path& b) {
    if (a.steps.size() != b.steps.size()) return false;
    for (std::size_t i = 0; i < a.steps.size(); i++)
        if (step_cmp(a.steps[i], b.steps[i]) != 0) return false;
    return true;
}

bool operator<(const Path& a, const Path& b) {
    for (std::size_t i = 0; i < a.steps.size() && i < b.steps.size(); i++) {
        int c = step_cmp(a.steps[i], b.steps[i]);
        if (c != 0) return c < 0;
    }
    return a.steps.size() < b.steps.size();
}

std::string pretty_path(const Path& p) {
    if (p.steps.empty()) return "eps";
    std::string out;
    for (std::size_t i = 0; i < p.steps.size(); i++) {
        if (i) out += ".";
        switch (p.steps[i].kind) {
            case PathStep::Kind::Var: out += p.steps[i].var; break;
            case PathStep::Kind::One: out += "1"; break;
            case PathStep::Kind::Two: out += "2"; break;
        }
    }
    return out;
}

static ValuePtr path_lookup_from(const ValuePtr& v, const Path& p, std::size_t i) {
    if (i == p.steps.size()) return v;
    const PathStep& s = p.steps[i];
    if (s.kind == PathStep::Kind::Var)
        throw PathError("variable step inside a value at " + pretty_path(p));
    switch (v->kind) {
        case Value::Kind::Pair:
            return path_lookup_from(s.kind == PathStep::Kind::One ? v->a : v->b, p, i + 1);
        case Value::Kind::Inl:
        case Value::Kind::Inr:
        case Value::Kind::Roll:
            if (s.kind != PathStep::Kind::One)
                throw PathError("constructor has only child 1 at " + pretty_path(p));
            return path_lookup_from(v->a, p, i + 1);
        case Value::Kind::Closure: {
            if (s.kind != PathStep::Kind::One)
                throw PathError("closure has only child 1 at " + pretty_path(p));
            if (i + 1 == p.steps.size())
                throw PathError("path ends inside a closure environment");
            const PathStep& vs = p.steps[i + 1];
            if (vs.kind != PathStep::Kind::Var)
                throw PathError("closure environment step must name a variable");
            const auto bound = v->env.find_ptr(vs.var);
            if (!bound) throw PathError("closure environment lacks " + vs.var);
            return path_lookup_from(bound, p, i + 2);
        }
        case Value::Kind::Const:
            throw PathError("path descends into a constant at " + pretty_path(p));
    }
    throw PathError("unreachable value kind");
}

ValuePtr path_lookup(const ValuePtr& v, const Path& p) {
    return path_lookup_from(v, p, 0);
}

ValuePtr path_lookup(const Env& env, const Path& p) {
    if (p.steps.empty()) throw PathError("environment lookup needs a variable head");
    if (p.steps[0].kind != PathStep::Kind::Var)
        throw PathError("environment path must start with a variable");
    ValuePtr v = env.find_ptr(p.steps[0].var);
    if (!v) throw PathError("environment lacks " + p.steps[0].var);
    Path rest;
    rest.steps.assign(p.steps.begin() + 1, p.steps.end());
    return path_lookup_from(v, rest, 0);
}

AnnPtr<PathAnn> path_annotate(const ValuePtr& v, const Path& at) {
    switch (v->kind) {
        case Value::Kind::Const:
            return an_const<PathAnn>(v->lit, at);
        case Value::Kind::Pair:
            return an_pair<PathAnn>(path_annotate(v->a, at.dot1()),
                                    path_annotate(v->b, at.dot2()), at);
        case Value::Kind::Inl:
            return an_inl<PathAnn>(path_annotate(v->a, at.dot1()), at, v->ann);
        case Value::Kind::Inr:
            return an_inr<PathAnn>(path_annotate(v->a, at.dot1()), at, v->ann);
        case Value::Kind::Roll:
            return an_roll<PathAnn>(path_annotate(v->a, at.dot1()), at, v->ann);
        case Value::Kind::Closure: {
            AnnotatedEnv<PathAnn> env;
            Path inside = at.dot1();
            for (const auto& [n, bound] : v->env.items())
                env.items.emplace_back(n, path_annotate(bound, inside.dot_var(n)));
            return an_closure<PathAnn>(v->kappa, std::move(env), at);
        }
    }
    throw PathError("unreachable value kind");
}

AnnotatedEnv<PathAnn> path_annotate(const Env& env, const Path& at) {
    AnnotatedEnv<PathAnn> out;
    for (const auto& [n, v] : env.items())
        out.items.emplace_back(n, path_annotate(v, at.dot_var(n)));
    return out;
}

}  // namespace tml
