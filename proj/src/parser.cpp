#include "tml/parser.hpp"

#include "tml/session.hpp"

#include <cctype>

namespace tml {

namespace {

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

enum class Tok {
    End, Int, Ident, Keyword,
    LParen, RParen, LBracket, RBracket, LBrace, RBrace,
    Comma, Semi, Dot, Colon, ColonColon,
    Eq, Lt, Plus, Minus, Star, AndAnd, OrOr, Arrow, At, Underscore
};

struct Token {
    Tok kind;
    std::string text;
    std::int64_t value = 0;
    SourceSpan span;
};

const char* kKeywords[] = {"let", "in",   "fun",    "if",   "then", "else", "case",
                           "of",  "inl",  "inr",    "fst",  "snd",  "roll", "unroll",
                           "true", "false", "not",  "keep", "mu",   "int",  "bool",
                           "unit", "list"};

bool is_keyword(const std::string& s) {
    for (const char* k : kKeywords)
        if (s == k) return true;
    return false;
}

struct Lexer {
    const std::string& src;
    std::size_t pos = 0;
    int line = 1, col = 1;

    explicit Lexer(const std::string& s) : src(s) {}

    SourceSpan here() const { return {pos, pos, line, col}; }

    void advance(std::size_t n) {
        for (std::size_t i = 0; i < n && pos < src.size(); i++) {
            if (src[pos] == '\n') {
                line++;
                col = 1;
            } else {
                col++;
            }
            pos++;
        }
    }

    void skip_space() {
        while (pos < src.size()) {
            if (std::isspace(static_cast<unsigned char>(src[pos]))) {
                advance(1);
            } else if (src[pos] == '#') {  // comment to end of line
                while (pos < src.size() && src[pos] != '\n') advance(1);
            } else {
                break;
            }
        }
    }

    Token next() {
        skip_space();
        SourceSpan sp = here();
        if (pos >= src.size()) return {Tok::End, "", 0, sp};
        char c = src[pos];
        auto two = [&](char a, char b) {
            return c == a && pos + 1 < src.size() && src[pos + 1] == b;
        };
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos;
            while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos])))
                advance(1);
            std::string text = src.substr(start, pos - start);
            sp.end = pos;
            return {Tok::Int, text, std::stoll(text), sp};
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos;
            while (pos < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[pos])) ||
                    src[pos] == '_' || src[pos] == '\''))
                advance(1);
            std::string text = src.substr(start, pos - start);
            sp.end = pos;
            return {is_keyword(text) ? Tok::Keyword : Tok::Ident, text, 0, sp};
        }
        if (two(':', ':')) { advance(2); sp.end = pos; return {Tok::ColonColon, "::", 0, sp}; }
        if (two('&', '&')) { advance(2); sp.end = pos; return {Tok::AndAnd, "&&", 0, sp}; }
        if (two('|', '|')) { advance(2); sp.end = pos; return {Tok::OrOr, "||", 0, sp}; }
        if (two('-', '>')) { advance(2); sp.end = pos; return {Tok::Arrow, "->", 0, sp}; }
        advance(1);
        sp.end = pos;
        switch (c) {
            case '(': return {Tok::LParen, "(", 0, sp};
            case ')': return {Tok::RParen, ")", 0, sp};
            case '[': return {Tok::LBracket, "[", 0, sp};
            case ']': return {Tok::RBracket, "]", 0, sp};
            case '{': return {Tok::LBrace, "{", 0, sp};
            case '}': return {Tok::RBrace, "}", 0, sp};
            case ',': return {Tok::Comma, ",", 0, sp};
            case ';': return {Tok::Semi, ";", 0, sp};
            case '.': return {Tok::Dot, ".", 0, sp};
            case ':': return {Tok::Colon, ":", 0, sp};
            case '=': return {Tok::Eq, "=", 0, sp};
            case '<': return {Tok::Lt, "<", 0, sp};
            case '+': return {Tok::Plus, "+", 0, sp};
            case '-': return {Tok::Minus, "-", 0, sp};
            case '*': return {Tok::Star, "*", 0, sp};
            case '@': return {Tok::At, "@", 0, sp};
            case '_': return {Tok::Underscore, "_", 0, sp};
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", sp);
        }
    }
};

std::vector<Token> tokenize(const std::string& src) {
    Lexer lx(src);
    std::vector<Token> out;
    while (true) {
        Token t = lx.next();
        out.push_back(t);
        if (t.kind == Tok::End) break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct Parser {
    std::vector<Token> toks;
    std::size_t at = 0;

    const Token& peek(std::size_t k = 0) const {
        std::size_t i = at + k;
        return i < toks.size() ? toks[i] : toks.back();
    }
    Token take() { return toks[at < toks.size() - 1 ? at++ : at]; }

    bool is_kw(const std::string& k, std::size_t ahead = 0) const {
        return peek(ahead).kind == Tok::Keyword && peek(ahead).text == k;
    }
    bool eat_kw(const std::string& k) {
        if (is_kw(k)) {
            take();
            return true;
        }
        return false;
    }
    Token expect(Tok kind, const std::string& what) {
        if (peek().kind != kind) throw ParseError("expected " + what, peek().span);
        return take();
    }
    void expect_kw(const std::string& k) {
        if (!eat_kw(k)) throw ParseError("expected '" + k + "'", peek().span);
    }
    std::string ident() {
        if (peek().kind != Tok::Ident) throw ParseError("expected identifier", peek().span);
        return take().text;
    }

    // --- types ---

    TypePtr type() {
        if (eat_kw("mu")) {
            std::string binder = ident();
            expect(Tok::Dot, "'.'");
            return t_mu(binder, type());
        }
        TypePtr lhs = type_sum();
        if (peek().kind == Tok::Arrow) {
            take();
            return t_arrow(lhs, type());
        }
        return lhs;
    }
    TypePtr type_sum() {
        TypePtr lhs = type_prod();
        if (peek().kind == Tok::Plus) {
            take();
            return t_sum(lhs, type_sum());
        }
        return lhs;
    }
    TypePtr type_prod() {
        TypePtr lhs = type_post();
        if (peek().kind == Tok::Star) {
            take();
            return t_prod(lhs, type_prod());
        }
        return lhs;
    }
    TypePtr type_post() {
        TypePtr t = type_atom();
        while (is_kw("list")) {
            take();
            t = t_list(t);
        }
        return t;
    }
    TypePtr type_atom() {
        if (eat_kw("int")) return t_int();
        if (eat_kw("bool")) return t_bool();
        if (eat_kw("unit")) return t_unit();
        if (peek().kind == Tok::LParen) {
            take();
            TypePtr t = type();
            expect(Tok::RParen, "')'");
            return t;
        }
        if (peek().kind == Tok::Ident) return t_var(take().text);
        throw ParseError("expected a type", peek().span);
    }

    // --- expressions ---

    ExprPtr nil_expr() { return e_roll(e_inl(e_const(Constant::unit()))); }
    ExprPtr cons_expr(ExprPtr h, ExprPtr t) {
        return e_roll(e_inr(e_pair(std::move(h), std::move(t))));
    }

    ExprPtr expr() {
        SourceSpan sp = peek().span;
        if (eat_kw("let")) {
            std::string x = ident();
            expect(Tok::Eq, "'='");
            ExprPtr bound = expr();
            expect_kw("in");
            return e_let(x, bound, expr());
        }
        if (eat_kw("fun")) return fun_tail();
        if (eat_kw("if")) {
            ExprPtr cond = expr();
            expect_kw("then");
            ExprPtr then_branch = expr();
            expect_kw("else");
            ExprPtr else_branch = expr();
            auto arms = std::make_shared<MatchArms>(
                MatchArms{"_w", "_w", then_branch, else_branch, true});
            return e_case(e_prim("b2s", {cond}), arms);
        }
        if (eat_kw("case")) {
            ExprPtr scrut = expr();
            expect_kw("of");
            expect(Tok::LBrace, "'{'");
            expect_kw("inl");
            expect(Tok::LParen, "'('");
            std::string x1 = ident();
            expect(Tok::RParen, "')'");
            expect(Tok::Dot, "'.'");
            ExprPtr left = expr();
            expect(Tok::Semi, "';'");
            expect_kw("inr");
            expect(Tok::LParen, "'('");
            std::string x2 = ident();
            expect(Tok::RParen, "')'");
            expect(Tok::Dot, "'.'");
            ExprPtr right = expr();
            expect(Tok::RBrace, "'}'");
            auto arms = std::make_shared<MatchArms>(MatchArms{x1, x2, left, right, false});
            return e_case(scrut, arms);
        }
        (void)sp;
        return expr_or();
    }

    // fun f(x:t1):t2. e  — called with 'fun' consumed
    ExprPtr fun_tail() {
        std::string f = ident();
        expect(Tok::LParen, "'('");
        std::string x = ident();
        expect(Tok::Colon, "':'");
        TypePtr targ = type();
        expect(Tok::RParen, "')'");
        expect(Tok::Colon, "':'");
        TypePtr tret = type();
        expect(Tok::Dot, "'.'");
        return e_fun(f, x, targ, tret, expr());
    }

    ExprPtr expr_or() {
        ExprPtr lhs = expr_and();
        while (peek().kind == Tok::OrOr) {
            take();
            lhs = e_prim("||", {lhs, expr_and()});
        }
        return lhs;
    }
    ExprPtr expr_and() {
        ExprPtr lhs = expr_cmp();
        while (peek().kind == Tok::AndAnd) {
            take();
            lhs = e_prim("&&", {lhs, expr_cmp()});
        }
        return lhs;
    }
    ExprPtr expr_cmp() {
        ExprPtr lhs = expr_cons();
        if (peek().kind == Tok::Eq) {
            take();
            return e_prim("=", {lhs, expr_cons()});
        }
        if (peek().kind == Tok::Lt) {
            take();
            return e_prim("<", {lhs, expr_cons()});
        }
        return lhs;
    }
    ExprPtr expr_cons() {
        ExprPtr head = expr_add();
        if (peek().kind == Tok::ColonColon) {
            take();
            return cons_expr(head, expr_cons());
        }
        return head;
    }
    ExprPtr expr_add() {
        ExprPtr lhs = expr_mul();
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            std::string op = take().text;
            lhs = e_prim(op, {lhs, expr_mul()});
        }
        return lhs;
    }
    ExprPtr expr_mul() {
        ExprPtr lhs = expr_unary();
        while (peek().kind == Tok::Star) {
            take();
            lhs = e_prim("*", {lhs, expr_unary()});
        }
        return lhs;
    }
    ExprPtr expr_unary() {
        if (eat_kw("not")) return e_prim("not", {expr_unary()});
        return expr_app();
    }

    bool starts_operand() const {
        switch (peek().kind) {
            case Tok::Int:
            case Tok::Ident:
            case Tok::LParen:
            case Tok::LBracket:
                return true;
            case Tok::Keyword:
                return is_kw("true") || is_kw("false") || is_kw("fst") || is_kw("snd") ||
                       is_kw("inl") || is_kw("inr") || is_kw("roll") || is_kw("unroll");
            default:
                return false;
        }
    }

    ExprPtr expr_app() {
        ExprPtr lhs = operand();
        while (starts_operand()) lhs = e_app(lhs, operand());
        return lhs;
    }

    ExprPtr operand() {
        if (eat_kw("fst")) return labeled(e_fst(atom()));
        if (eat_kw("snd")) return labeled(e_snd(atom()));
        if (eat_kw("inl")) return labeled(e_inl(atom()));
        if (eat_kw("inr")) return labeled(e_inr(atom()));
        if (eat_kw("roll")) return labeled(e_roll(atom()));
        if (eat_kw("unroll")) return labeled(e_unroll(atom()));
        return atom();
    }

    ExprPtr labeled(ExprPtr e) {
        while (peek().kind == Tok::At) {
            take();
            std::string label = ident();
            e = e_labeled(label, e);
        }
        return e;
    }

    ExprPtr atom() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::Int: {
                take();
                return labeled(e_const(Constant::of_int(t.value)));
            }
            case Tok::Ident: {
                take();
                return labeled(e_var(t.text));
            }
            case Tok::Keyword:
                if (eat_kw("true")) return labeled(e_const(Constant::of_bool(true)));
                if (eat_kw("false")) return labeled(e_const(Constant::of_bool(false)));
                throw ParseError("unexpected keyword '" + t.text + "'", t.span);
            case Tok::LParen: {
                take();
                if (peek().kind == Tok::RParen) {
                    take();
                    return labeled(e_const(Constant::unit()));
                }
                std::vector<ExprPtr> parts;
                parts.push_back(expr());
                if (parts.size() == 1 && peek().kind == Tok::Colon) {
                    take();
                    TypePtr ty = type();
                    expect(Tok::RParen, "')'");
                    return labeled(e_ascribe(parts[0], ty));
                }
                while (peek().kind == Tok::Comma) {
                    take();
                    parts.push_back(expr());
                }
                expect(Tok::RParen, "')'");
                // tuples nest to the right
                ExprPtr out = parts.back();
                for (std::size_t i = parts.size() - 1; i-- > 0;)
                    out = e_pair(parts[i], out);
                return labeled(out);
            }
            case Tok::LBracket: {
                take();
                std::vector<ExprPtr> elems;
                if (peek().kind != Tok::RBracket) {
                    elems.push_back(expr());
                    while (peek().kind == Tok::Comma) {
                        take();
                        elems.push_back(expr());
                    }
                }
                expect(Tok::RBracket, "']'");
                ExprPtr out = nil_expr();
                for (std::size_t i = elems.size(); i-- > 0;) out = cons_expr(elems[i], out);
                return labeled(out);
            }
            default:
                throw ParseError("expected an expression", t.span);
        }
    }

    // --- patterns ---

    PatternPtr nil_pattern() { return p_roll(p_inl(p_const(Constant::unit()))); }
    PatternPtr cons_pattern(PatternPtr h, PatternPtr t) {
        return p_roll(p_inr(p_pair(std::move(h), std::move(t))));
    }

    PatternPtr pattern() {
        PatternPtr head = pattern_atom();
        if (peek().kind == Tok::ColonColon) {
            take();
            return cons_pattern(head, pattern());
        }
        return head;
    }

    PatternPtr pattern_atom() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::Underscore: take(); return p_hole();
            case Tok::Eq: take(); return p_diamond();
            case Tok::Int: take(); return p_const(Constant::of_int(t.value));
            case Tok::Keyword:
                if (eat_kw("true")) return p_const(Constant::of_bool(true));
                if (eat_kw("false")) return p_const(Constant::of_bool(false));
                if (eat_kw("inl")) return p_inl(pattern_atom());
                if (eat_kw("inr")) return p_inr(pattern_atom());
                if (eat_kw("roll")) return p_roll(pattern_atom());
                throw ParseError("unexpected keyword in pattern", t.span);
            case Tok::LParen: {
                take();
                if (peek().kind == Tok::RParen) {
                    take();
                    return p_const(Constant::unit());
                }
                std::vector<PatternPtr> parts;
                parts.push_back(pattern());
                while (peek().kind == Tok::Comma) {
                    take();
                    parts.push_back(pattern());
                }
                expect(Tok::RParen, "')'");
                PatternPtr out = parts.back();
                for (std::size_t i = parts.size() - 1; i-- > 0;)
                    out = p_pair(parts[i], out);
                return out;
            }
            case Tok::LBracket: {
                take();
                std::vector<PatternPtr> elems;
                if (peek().kind != Tok::RBracket) {
                    elems.push_back(pattern());
                    while (peek().kind == Tok::Comma) {
                        take();
                        elems.push_back(pattern());
                    }
                }
                expect(Tok::RBracket, "']'");
                PatternPtr out = nil_pattern();
                for (std::size_t i = elems.size(); i-- > 0;)
                    out = cons_pattern(elems[i], out);
                return out;
            }
            default:
                throw ParseError("expected a pattern", t.span);
        }
    }

    void done() {
        if (peek().kind != Tok::End) throw ParseError("trailing input", peek().span);
    }
};

}  // namespace

ExprPtr parse_expr(const std::string& text) {
    Parser p{tokenize(text)};
    ExprPtr e = p.expr();
    p.done();
    return e;
}

TypePtr parse_type(const std::string& text) {
    Parser p{tokenize(text)};
    TypePtr t = p.type();
    p.done();
    return t;
}

PatternPtr parse_pattern(const std::string& text) {
    Parser p{tokenize(text)};
    PatternPtr q = p.pattern();
    p.done();
    return q;
}

// ---------------------------------------------------------------------------
// Pretty printing
// ---------------------------------------------------------------------------

namespace {

// precedence levels: 0 top, 1 ||, 2 &&, 3 =/<, 4 ::, 5 +-, 6 *, 7 app, 8 atom
int prim_prec(const std::string& op) {
    if (op == "||") return 1;
    if (op == "&&") return 2;
    if (op == "=" || op == "<") return 3;
    if (op == "+" || op == "-") return 5;
    if (op == "*") return 6;
    return 8;
}

std::optional<std::vector<ExprPtr>> expr_list_spine(const ExprPtr& e) {
    std::vector<ExprPtr> out;
    ExprPtr cur = e;
    while (true) {
        if (!cur || cur->kind != Expr::Kind::Roll || cur->ann) return std::nullopt;
        const ExprPtr& s = cur->kids[0];
        if (s->kind == Expr::Kind::Inl && !s->ann) {
            const ExprPtr& u = s->kids[0];
            if (u->kind == Expr::Kind::Const && u->lit.kind == Constant::Kind::Unit)
                return out;
            return std::nullopt;
        }
        if (s->kind != Expr::Kind::Inr || s->ann) return std::nullopt;
        const ExprPtr& cell = s->kids[0];
        if (cell->kind != Expr::Kind::Pair) return std::nullopt;
        out.push_back(cell->kids[0]);
        cur = cell->kids[1];
    }
}

// roll(inr((h,t))) without annotations prints as h :: t
const Expr* cons_parts(const ExprPtr& e) {
    if (e->kind != Expr::Kind::Roll || e->ann) return nullptr;
    const ExprPtr& s = e->kids[0];
    if (s->kind != Expr::Kind::Inr || s->ann) return nullptr;
    if (s->kids[0]->kind != Expr::Kind::Pair) return nullptr;
    return s->kids[0].get();
}

void print_expr(const ExprPtr& e, std::string& out, int prec);

void print_atomish(const ExprPtr& e, std::string& out) {
    // operand of a projection keyword; parenthesized unless atomic
    bool atomic = e->kind == Expr::Kind::Var ||
                  e->kind == Expr::Kind::Const ||
                  e->kind == Expr::Kind::Pair ||
                  (e->kind == Expr::Kind::Roll && expr_list_spine(e).has_value());
    if (atomic) {
        print_expr(e, out, 8);
    } else {
        out += "(";
        print_expr(e, out, 0);
        out += ")";
    }
}

void print_expr(const ExprPtr& e, std::string& out, int prec) {
    auto wrap = [&](int level, auto body) {
        if (prec > level) out += "(";
        body();
        if (prec > level) out += ")";
    };
    (void)wrap;
    if (auto elems = expr_list_spine(e)) {
        out += "[";
        for (std::size_t i = 0; i < elems->size(); i++) {
            if (i) out += ",";
            print_expr((*elems)[i], out, 0);
        }
        out += "]";
        return;
    }
    if (const Expr* cell = cons_parts(e)) {
        wrap(4, [&] {
            print_expr(cell->kids[0], out, 5);
            out += " :: ";
            print_expr(cell->kids[1], out, 4);
        });
        return;
    }
    switch (e->kind) {
        case Expr::Kind::Var: out += e->name; return;
        case Expr::Kind::Const: out += pretty_constant(e->lit); return;
        case Expr::Kind::Labeled:
            print_atomish(e->kids[0], out);
            out += "@" + e->name;
            return;
        case Expr::Kind::Ascribe:
            out += "(";
            print_expr(e->kids[0], out, 0);
            out += " : " + pretty_type(e->ann) + ")";
            return;
        case Expr::Kind::Prim: {
            if (e->name == "not") {
                wrap(6, [&] {
                    out += "not ";
                    print_expr(e->kids[0], out, 7);
                });
                return;
            }
            if (e->name == "b2s") {  // internal; shown only in desugared form
                out += "b2s(";
                print_expr(e->kids[0], out, 0);
                out += ")";
                return;
            }
            int p = prim_prec(e->name);
            wrap(p, [&] {
                print_expr(e->kids[0], out, p);
                out += " " + e->name + " ";
                print_expr(e->kids[1], out, p + 1);
            });
            return;
        }
        case Expr::Kind::Let:
            wrap(0, [&] {
                out += "let " + e->name + " = ";
                print_expr(e->kids[0], out, 0);
                out += " in ";
                print_expr(e->kids[1], out, 0);
            });
            return;
        case Expr::Kind::Pair: {
            out += "(";
            print_expr(e->kids[0], out, 0);
            out += ",";
            print_expr(e->kids[1], out, 0);
            out += ")";
            return;
        }
        case Expr::Kind::Fst:
            wrap(7, [&] {
                out += "fst ";
                print_atomish(e->kids[0], out);
            });
            return;
        case Expr::Kind::Snd:
            wrap(7, [&] {
                out += "snd ";
                print_atomish(e->kids[0], out);
            });
            return;
        case Expr::Kind::Inl:
            wrap(7, [&] {
                out += "inl ";
                print_atomish(e->kids[0], out);
            });
            return;
        case Expr::Kind::Inr:
            wrap(7, [&] {
                out += "inr ";
                print_atomish(e->kids[0], out);
            });
            return;
        case Expr::Kind::Roll:
            wrap(7, [&] {
                out += "roll ";
                print_atomish(e->kids[0], out);
            });
            return;
        case Expr::Kind::Unroll:
            wrap(7, [&] {
                out += "unroll ";
                print_atomish(e->kids[0], out);
            });
            return;
        case Expr::Kind::Case: {
            if (e->arms->from_if && e->kids[0]->kind == Expr::Kind::Prim &&
                e->kids[0]->name == "b2s") {
                wrap(0, [&] {
                    out += "if ";
                    print_expr(e->kids[0]->kids[0], out, 0);
                    out += " then ";
                    print_expr(e->arms->left_body, out, 0);
                    out += " else ";
                    print_expr(e->arms->right_body, out, 0);
                });
                return;
            }
            wrap(0, [&] {
                out += "case ";
                print_expr(e->kids[0], out, 0);
                out += " of {inl(" + e->arms->left_var + "). ";
                print_expr(e->arms->left_body, out, 0);
                out += "; inr(" + e->arms->right_var + "). ";
                print_expr(e->arms->right_body, out, 0);
                out += "}";
            });
            return;
        }
        case Expr::Kind::Fun:
            wrap(0, [&] {
                out += "fun " + e->name + "(" + e->arg_name + ":" +
                       pretty_type(e->arg_type) + "):" + pretty_type(e->ret_type) + ". ";
                print_expr(e->kids[0], out, 0);
            });
            return;
        case Expr::Kind::App:
            wrap(7, [&] {
                print_expr(e->kids[0], out, 7);
                out += " ";
                print_expr(e->kids[1], out, 8);
            });
            return;
    }
}

void print_trace(const TracePtr& t, std::string& out, int prec);

void print_trace_atomish(const TracePtr& t, std::string& out) {
    bool atomic = t->kind == Trace::Kind::Var || t->kind == Trace::Kind::Const ||
                  t->kind == Trace::Kind::Hole || t->kind == Trace::Kind::Pair;
    if (atomic) {
        print_trace(t, out, 8);
    } else {
        out += "(";
        print_trace(t, out, 0);
        out += ")";
    }
}

void print_trace(const TracePtr& t, std::string& out, int prec) {
    auto wrap = [&](int level, auto body) {
        if (prec > level) out += "(";
        body();
        if (prec > level) out += ")";
    };
    switch (t->kind) {
        case Trace::Kind::Hole: out += "_"; return;
        case Trace::Kind::Var: out += t->name; return;
        case Trace::Kind::Const: out += pretty_constant(t->lit); return;
        case Trace::Kind::Prim: {
            if (t->name == "not") {
                wrap(6, [&] {
                    out += "not ";
                    print_trace(t->kids[0], out, 7);
                });
                return;
            }
            if (t->name == "b2s") {
                out += "b2s(";
                print_trace(t->kids[0], out, 0);
                out += ")";
                return;
            }
            int p = prim_prec(t->name);
            wrap(p, [&] {
                print_trace(t->kids[0], out, p);
                out += " " + t->name + " ";
                print_trace(t->kids[1], out, p + 1);
            });
            return;
        }
        case Trace::Kind::Let:
            wrap(0, [&] {
                out += "let " + t->name + " = ";
                print_trace(t->kids[0], out, 0);
                out += " in ";
                print_trace(t->kids[1], out, 0);
            });
            return;
        case Trace::Kind::Pair:
            out += "(";
            print_trace(t->kids[0], out, 0);
            out += ",";
            print_trace(t->kids[1], out, 0);
            out += ")";
            return;
        case Trace::Kind::Fst:
            out += "fst(";
            print_trace(t->kids[0], out, 0);
            out += ")";
            return;
        case Trace::Kind::Snd:
            out += "snd(";
            print_trace(t->kids[0], out, 0);
            out += ")";
            return;
        case Trace::Kind::Inl:
            out += "inl(";
            print_trace(t->kids[0], out, 0);
            out += ")";
            return;
        case Trace::Kind::Inr:
            out += "inr(";
            print_trace(t->kids[0], out, 0);
            out += ")";
            return;
        case Trace::Kind::Roll:
            out += "roll(";
            print_trace(t->kids[0], out, 0);
            out += ")";
            return;
        case Trace::Kind::Unroll:
            out += "unroll(";
            print_trace(t->kids[0], out, 0);
            out += ")";
            return;
        case Trace::Kind::CaseL:
        case Trace::Kind::CaseR: {
            bool left = t->kind == Trace::Kind::CaseL;
            wrap(1, [&] {
                TracePtr scrut = t->kids[0];
                std::string tag;
                if (t->arms && t->arms->from_if) {
                    // unwrap the boolean conversion for readability
                    if (scrut->kind == Trace::Kind::Prim && scrut->name == "b2s")
                        scrut = scrut->kids[0];
                    tag = left ? "then" : "else";
                    print_trace(scrut, out, 2);
                    out += " |>_" + tag + " (";
                    print_trace(t->kids[1], out, 0);
                    out += ")";
                } else {
                    tag = left ? "inl" : "inr";
                    print_trace(scrut, out, 2);
                    out += " |>_" + tag + " " + t->name + ".(";
                    print_trace(t->kids[1], out, 0);
                    out += ")";
                }
            });
            return;
        }
        case Trace::Kind::Fun:
            wrap(0, [&] { out += pretty_expr(t->kappa.fun); });
            return;
        case Trace::Kind::App:
            wrap(1, [&] {
                print_trace_atomish(t->kids[0], out);
                out += " ";
                print_trace_atomish(t->kids[1], out);
                out += " |> " + t->name + "(" + t->arg_name + ").(";
                print_trace(t->kids[2], out, 0);
                out += ")";
            });
            return;
    }
}

}  // namespace

std::string pretty_expr(const ExprPtr& e) {
    std::string out;
    print_expr(e, out, 0);
    return out;
}

std::string pretty_trace(const TracePtr& t) {
    std::string out;
    print_trace(t, out, 0);
    return out;
}

// ---------------------------------------------------------------------------
// Toplevel commands
// ---------------------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// [x = pattern, y = keep, ...]
void parse_env_items(Parser& p, Command& cmd) {
    p.expect(Tok::LBracket, "'['");
    if (p.peek().kind != Tok::RBracket) {
        while (true) {
            std::string name = p.ident();
            p.expect(Tok::Eq, "'='");
            if (p.is_kw("keep")) {
                p.take();
                cmd.env_items.emplace_back(name, nullptr);
            } else {
                cmd.env_items.emplace_back(name, p.pattern());
            }
            if (p.peek().kind != Tok::Comma) break;
            p.take();
        }
    }
    p.expect(Tok::RBracket, "']'");
}

void finish(Parser& p) {
    while (p.peek().kind == Tok::Semi) p.take();
    p.done();
}

}  // namespace

Command parse_command(const std::string& raw) {
    Command cmd;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') return cmd;

    // :save/:load take raw filenames
    if (line.rfind(":save", 0) == 0 || line.rfind(":load", 0) == 0) {
        bool save = line[1] == 's';
        std::string rest = trim(line.substr(5));
        while (!rest.empty() && rest.back() == ';') rest = trim(rest.substr(0, rest.size() - 1));
        std::size_t sp = rest.find(' ');
        cmd.kind = save ? Command::Kind::Save : Command::Kind::Load;
        if (sp == std::string::npos) {
            cmd.file = rest;
        } else {
            cmd.file = rest.substr(0, sp);
            cmd.name = trim(rest.substr(sp + 1));
        }
        if (cmd.file.empty()) throw Error("expected a file name");
        return cmd;
    }

    Parser p{tokenize(line)};
    if (p.peek().kind == Tok::Colon) {
        p.take();
        std::string w = p.ident();
        if (w == "type") {
            cmd.kind = Command::Kind::TypeOf;
            cmd.expr = p.expr();
            finish(p);
            return cmd;
        }
        if (w == "fuel") {
            cmd.kind = Command::Kind::Fuel;
            cmd.fuel = p.expect(Tok::Int, "a number").value;
            finish(p);
            return cmd;
        }
        throw Error("unknown meta command :" + w);
    }

    // fun f (x:t) : t' = e  — definition sugar; a '.' after the result type
    // means this is a fun expression instead.
    if (p.is_kw("fun")) {
        Parser probe = p;
        probe.take();
        try {
            std::string f = probe.ident();
            probe.expect(Tok::LParen, "'('");
            std::string x = probe.ident();
            probe.expect(Tok::Colon, "':'");
            TypePtr targ = probe.type();
            probe.expect(Tok::RParen, "')'");
            probe.expect(Tok::Colon, "':'");
            TypePtr tret = probe.type();
            if (probe.peek().kind == Tok::Eq) {
                probe.take();
                ExprPtr body = probe.expr();
                finish(probe);
                cmd.kind = Command::Kind::Val;
                cmd.name = f;
                cmd.expr = e_fun(f, x, targ, tret, body);
                return cmd;
            }
        } catch (const Error&) {
            // fall through to expression parsing
        }
    }

    if (p.peek().kind == Tok::Ident) {
        const std::string& w = p.peek().text;
        if (w == "val") {
            p.take();
            cmd.name = p.ident();
            p.expect(Tok::Eq, "'='");
            if (p.peek().kind == Tok::Ident && p.peek().text == "trace") {
                p.take();
                cmd.kind = Command::Kind::ValTrace;
                cmd.expr = p.expr();
            } else {
                cmd.kind = Command::Kind::Val;
                cmd.expr = p.expr();
            }
            finish(p);
            return cmd;
        }
        if (w == "trace") {
            p.take();
            cmd.kind = Command::Kind::Trace;
            cmd.expr = p.expr();
            finish(p);
            return cmd;
        }
        if (w == "where" || w == "dependency" || w == "expression") {
            p.take();
            cmd.kind = w == "where" ? Command::Kind::Where
                       : w == "dependency" ? Command::Kind::Dependency
                                           : Command::Kind::Expression;
            cmd.name = p.ident();
            finish(p);
            return cmd;
        }
        if (w == "slice") {
            p.take();
            cmd.kind = Command::Kind::Slice;
            cmd.name = p.ident();
            cmd.pattern = p.pattern();
            finish(p);
            return cmd;
        }
        if (w == "obfuscate") {
            p.take();
            cmd.kind = Command::Kind::Obfuscate;
            cmd.name = p.ident();
            parse_env_items(p, cmd);
            finish(p);
            return cmd;
        }
        if (w == "replay") {
            p.take();
            cmd.kind = Command::Kind::Replay;
            cmd.name = p.ident();
            if (p.peek().kind == Tok::LBracket) {
                p.take();
                if (p.peek().kind != Tok::RBracket) {
                    while (true) {
                        std::string name = p.ident();
                        p.expect(Tok::Eq, "'='");
                        cmd.overrides.emplace_back(name, p.expr());
                        if (p.peek().kind != Tok::Comma) break;
                        p.take();
                    }
                }
                p.expect(Tok::RBracket, "']'");
            }
            finish(p);
            return cmd;
        }
    }

    cmd.kind = Command::Kind::Expr;
    cmd.expr = p.expr();
    finish(p);
    return cmd;
}

}  // namespace tml
