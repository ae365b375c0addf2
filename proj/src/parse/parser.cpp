#include "xltlef/parser.hpp"

#include "xltlef/traversal.hpp"

#include <cctype>
#include <cstring>

namespace xltlef {

const char* time_model_str(TimeModelKind m) {
    switch (m) {
        case TimeModelKind::Discrete: return "discrete";
        case TimeModelKind::Dense: return "dense";
        case TimeModelKind::SuperDense: return "super_dense";
    }
    return "?";
}

std::string Diagnostic::render(const std::string& filename) const {
    std::string s = filename + ":" + std::to_string(pos.line) + ":" + std::to_string(pos.col) +
                    ": " + (severity == Severity::Error ? "error: " : "warning: ") + message;
    return s;
}

namespace {

enum class Tok : std::uint8_t {
    End, Ident, Number,
    LParen, RParen, LBracket, RBracket, Comma, Semi, Colon, At, Tilde, Caret,
    Not, And, Or, Implies, Iff,
    Eq, Neq, Le, Lt, Ge, Gt,
    Plus, Minus, Star, Slash,
    EvF, EvP,  // |>  <|
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    SrcPos pos;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) {}

    Token next() {
        skip_ws();
        Token t;
        t.pos = {line_, col_};
        if (i_ >= src_.size()) return t;
        char c = src_[i_];
        auto two = [&](char a, char b) {
            return c == a && i_ + 1 < src_.size() && src_[i_ + 1] == b;
        };
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i_;
            while (j < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_'))
                ++j;
            t.kind = Tok::Ident;
            t.text = src_.substr(i_, j - i_);
            advance(j - i_);
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i_;
            while (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) ++j;
            if (j < src_.size() && src_[j] == '.' && j + 1 < src_.size() &&
                std::isdigit(static_cast<unsigned char>(src_[j + 1]))) {
                ++j;
                while (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) ++j;
            }
            t.kind = Tok::Number;
            t.text = src_.substr(i_, j - i_);
            advance(j - i_);
            return t;
        }
        if (two('<', '-') && i_ + 2 < src_.size() && src_[i_ + 2] == '>') {
            t.kind = Tok::Iff; advance(3); return t;
        }
        if (two('-', '>')) { t.kind = Tok::Implies; advance(2); return t; }
        if (two('|', '>')) { t.kind = Tok::EvF; advance(2); return t; }
        if (two('<', '|')) { t.kind = Tok::EvP; advance(2); return t; }
        if (two('<', '=')) { t.kind = Tok::Le; advance(2); return t; }
        if (two('>', '=')) { t.kind = Tok::Ge; advance(2); return t; }
        if (two('!', '=')) { t.kind = Tok::Neq; advance(2); return t; }
        switch (c) {
            case '(': t.kind = Tok::LParen; break;
            case ')': t.kind = Tok::RParen; break;
            case '[': t.kind = Tok::LBracket; break;
            case ']': t.kind = Tok::RBracket; break;
            case ',': t.kind = Tok::Comma; break;
            case ';': t.kind = Tok::Semi; break;
            case ':': t.kind = Tok::Colon; break;
            case '@': t.kind = Tok::At; break;
            case '~': t.kind = Tok::Tilde; break;
            case '^': t.kind = Tok::Caret; break;
            case '!': t.kind = Tok::Not; break;
            case '&': t.kind = Tok::And; break;
            case '|': t.kind = Tok::Or; break;
            case '=': t.kind = Tok::Eq; break;
            case '<': t.kind = Tok::Lt; break;
            case '>': t.kind = Tok::Gt; break;
            case '+': t.kind = Tok::Plus; break;
            case '-': t.kind = Tok::Minus; break;
            case '*': t.kind = Tok::Star; break;
            case '/': t.kind = Tok::Slash; break;
            default:
                t.kind = Tok::End;
                t.text = std::string(1, c);
                advance(1);
                throw_err(t.pos, "unexpected character '" + t.text + "'");
        }
        advance(1);
        return t;
    }

    struct LexError {
        SrcPos pos;
        std::string message;
    };

private:
    [[noreturn]] void throw_err(SrcPos p, std::string msg) { throw LexError{p, std::move(msg)}; }

    void skip_ws() {
        for (;;) {
            while (i_ < src_.size() &&
                   (src_[i_] == ' ' || src_[i_] == '\t' || src_[i_] == '\r' || src_[i_] == '\n'))
                advance(1);
            if (i_ < src_.size() && src_[i_] == '#') {
                while (i_ < src_.size() && src_[i_] != '\n') advance(1);
                continue;
            }
            break;
        }
    }

    void advance(std::size_t n) {
        for (std::size_t k = 0; k < n && i_ < src_.size(); ++k, ++i_) {
            if (src_[i_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
        }
    }

    const std::string& src_;
    std::size_t i_ = 0;
    std::uint32_t line_ = 1, col_ = 1;
};

struct ParseError {
    SrcPos pos;
    std::string message;
};

bool is_reserved(const std::string& s) {
    static const char* words[] = {
        "xltlef", "time_model", "discrete", "dense", "super_dense", "var", "param", "fun",
        "pred", "sort", "check", "sat", "valid", "formula", "bool", "real", "int", "true",
        "false", "ite", "time", "next", "prev", "inf", "U", "S", "F", "G", "X", "Y", "Z",
        "P", "H", "U_C", "Cf", "Cp"};
    for (const char* w : words)
        if (s == w) return true;
    return false;
}

class Parser {
public:
    Parser(Workspace& ws, const std::string& text, const ParseOptions& opts,
           std::vector<Diagnostic>& diags, ProblemFile* pf)
        : ws_(ws), a_(ws.arena), opts_(opts), diags_(diags), pf_(pf), lex_(text) {
        toks_.push_back(lex_.next());
    }

    // ---- token plumbing ----
    const Token& peek(std::size_t k = 0) {
        while (toks_.size() <= pos_ + k) toks_.push_back(lex_.next());
        return toks_[pos_ + k];
    }
    Token take() {
        const Token t = peek();
        ++pos_;
        return t;
    }
    bool at(Tok k) { return peek().kind == k; }
    bool at_word(const char* w) { return at(Tok::Ident) && peek().text == w; }
    bool eat(Tok k) {
        if (!at(k)) return false;
        take();
        return true;
    }
    bool eat_word(const char* w) {
        if (!at_word(w)) return false;
        take();
        return true;
    }
    void expect(Tok k, const char* what) {
        if (!eat(k)) err(peek().pos, std::string("expected ") + what);
    }
    void expect_word(const char* w) {
        if (!eat_word(w)) err(peek().pos, std::string("expected '") + w + "'");
    }
    [[noreturn]] void err(SrcPos p, std::string msg) { throw ParseError{p, std::move(msg)}; }

    void warn(SrcPos p, std::string msg) {
        diags_.push_back({Diagnostic::Severity::Warning, p, std::move(msg)});
    }

    std::size_t mark() const { return pos_; }
    void rewind(std::size_t m) { pos_ = m; }

    void note_fpos(FormulaId f, SrcPos p) {
        if (pf_ && !pf_->formula_pos.count(f.v)) pf_->formula_pos.emplace(f.v, p);
    }
    void note_tpos(TermId t, SrcPos p) {
        if (pf_ && !pf_->term_pos.count(t.v)) pf_->term_pos.emplace(t.v, p);
    }

    // ---- declarations ----
    void parse_header() {
        expect_word("xltlef");
        if (!at(Tok::Number) || peek().text != "1") err(peek().pos, "unsupported format version");
        take();
        expect(Tok::Semi, "';'");
    }

    Sort parse_sort() {
        SrcPos p = peek().pos;
        if (eat_word("bool")) return Sort::boolean();
        if (eat_word("real")) return Sort::real();
        if (eat_word("int")) return Sort::integer();
        if (at(Tok::Ident)) {
            std::string name = take().text;
            if (auto id = ws_.sig.lookup_usort(name)) return Sort::uninterp(*id);
            err(p, "unknown sort '" + name + "'");
        }
        err(p, "expected a sort");
    }

    std::string parse_name() {
        if (!at(Tok::Ident)) err(peek().pos, "expected a name");
        SrcPos p = peek().pos;
        std::string n = take().text;
        if (is_reserved(n)) err(p, "'" + n + "' is reserved");
        if (ws_.sig.has(n)) err(p, "'" + n + "' is already declared");
        return n;
    }

    void parse_declarations(ProblemFile& out) {
        bool saw_model = false, saw_check = false;
        for (;;) {
            if (eat_word("time_model")) {
                SrcPos p = peek().pos;
                if (eat_word("discrete")) out.time_model = TimeModelKind::Discrete;
                else if (eat_word("dense")) out.time_model = TimeModelKind::Dense;
                else if (eat_word("super_dense")) out.time_model = TimeModelKind::SuperDense;
                else err(p, "expected discrete, dense, or super_dense");
                if (saw_model) err(p, "duplicate time_model declaration");
                saw_model = true;
                expect(Tok::Semi, "';'");
            } else if (eat_word("var")) {
                std::string n = parse_name();
                expect(Tok::Colon, "':'");
                Sort s = parse_sort();
                expect(Tok::Semi, "';'");
                ws_.sig.add_state_var(n, s);
            } else if (eat_word("param")) {
                std::string n = parse_name();
                expect(Tok::Colon, "':'");
                Sort s = parse_sort();
                expect(Tok::Semi, "';'");
                ws_.sig.add_parameter(n, s);
            } else if (eat_word("sort")) {
                SrcPos p = peek().pos;
                if (!at(Tok::Ident)) err(p, "expected a name");
                std::string n = take().text;
                if (is_reserved(n)) err(p, "'" + n + "' is reserved");
                if (ws_.sig.lookup_usort(n)) err(p, "duplicate sort '" + n + "'");
                expect(Tok::Semi, "';'");
                ws_.sig.add_usort(n);
            } else if (eat_word("fun")) {
                std::string n = parse_name();
                expect(Tok::LParen, "'('");
                std::vector<Sort> args;
                if (!at(Tok::RParen)) {
                    args.push_back(parse_sort());
                    while (eat(Tok::Comma)) args.push_back(parse_sort());
                }
                expect(Tok::RParen, "')'");
                expect(Tok::Colon, "':'");
                Sort r = parse_sort();
                expect(Tok::Semi, "';'");
                ws_.sig.add_function(n, std::move(args), r);
            } else if (eat_word("pred")) {
                std::string n = parse_name();
                expect(Tok::LParen, "'('");
                std::vector<Sort> args;
                if (!at(Tok::RParen)) {
                    args.push_back(parse_sort());
                    while (eat(Tok::Comma)) args.push_back(parse_sort());
                }
                expect(Tok::RParen, "')'");
                expect(Tok::Semi, "';'");
                ws_.sig.add_predicate(n, std::move(args));
            } else if (eat_word("check")) {
                SrcPos p = peek().pos;
                if (eat_word("sat")) out.check = CheckKind::Sat;
                else if (eat_word("valid")) out.check = CheckKind::Valid;
                else err(p, "expected sat or valid");
                if (saw_check) err(p, "duplicate check declaration");
                saw_check = true;
                expect(Tok::Semi, "';'");
            } else {
                break;
            }
        }
    }

    // ---- formulas ----

    FormulaId parse_formula() { return parse_iff(); }

    FormulaId parse_iff() {
        SrcPos p = peek().pos;
        FormulaId f = parse_impl();
        while (at(Tok::Iff)) {
            take();
            FormulaId g = parse_impl();
            f = a_.iff(f, g);
            note_fpos(f, p);
        }
        return f;
    }

    FormulaId parse_impl() {
        SrcPos p = peek().pos;
        FormulaId f = parse_or();
        if (at(Tok::Implies)) {
            take();
            FormulaId g = parse_impl();  // right associative
            f = a_.implies(f, g);
            note_fpos(f, p);
        }
        return f;
    }

    FormulaId parse_or() {
        SrcPos p = peek().pos;
        FormulaId f = parse_and();
        while (at(Tok::Or)) {
            take();
            f = a_.f_or(f, parse_and());
            note_fpos(f, p);
        }
        return f;
    }

    FormulaId parse_and() {
        SrcPos p = peek().pos;
        FormulaId f = parse_until();
        while (at(Tok::And)) {
            take();
            f = a_.f_and(f, parse_until());
            note_fpos(f, p);
        }
        return f;
    }

    bool at_until_family() {
        return at_word("U") || at_word("S") || at_word("U_C");
    }

    FormulaId parse_until() {
        SrcPos p = peek().pos;
        FormulaId lhs = parse_unary();
        if (!at_until_family()) return lhs;
        std::string op = take().text;
        bool strict = eat(Tok::Tilde);
        std::optional<Interval> iv;
        if (at(Tok::LBracket)) iv = parse_interval();
        FormulaId rhs = parse_until();  // right associative
        FormulaId f;
        if (op == "U_C") {
            if (strict || iv) err(p, "U_C takes no modifiers");
            f = a_.binary(FormulaKind::UntilC, lhs, rhs);
        } else if (iv) {
            f = a_.metric(op == "U" ? FormulaKind::MetricUntil : FormulaKind::MetricSince,
                          strict, *iv, lhs, rhs);
        } else if (op == "U") {
            f = strict ? a_.until_strict(lhs, rhs) : a_.binary(FormulaKind::Until, lhs, rhs);
        } else {
            f = strict ? a_.since_strict(lhs, rhs) : a_.binary(FormulaKind::Since, lhs, rhs);
        }
        note_fpos(f, p);
        return f;
    }

    // Interval in brackets: '<= e', '< e', '>= e', '> e', '= e', or the
    // explicit forms '[a,b]' '(a,b]' '[a,b)' '(a,b)' '[a,inf)' '(a,inf)'.
    Interval parse_interval() {
        SrcPos p = peek().pos;
        expect(Tok::LBracket, "'['");
        Interval iv;
        try {
            if (eat(Tok::Le)) iv = a_.interval_upto(CmpOp::Le, parse_rigid_term());
            else if (eat(Tok::Lt)) iv = a_.interval_upto(CmpOp::Lt, parse_rigid_term());
            else if (eat(Tok::Ge)) iv = a_.interval_upto(CmpOp::Ge, parse_rigid_term());
            else if (eat(Tok::Gt)) iv = a_.interval_upto(CmpOp::Gt, parse_rigid_term());
            else if (eat(Tok::Eq)) iv = a_.interval_singular(parse_rigid_term());
            else {
                bool lo_open;
                if (eat(Tok::LParen)) lo_open = true;
                else if (eat(Tok::LBracket)) lo_open = false;
                else err(p, "expected an interval");
                TermId lo = parse_rigid_term();
                expect(Tok::Comma, "','");
                std::optional<TermId> hi;
                if (!eat_word("inf")) hi = parse_rigid_term();
                bool hi_open;
                if (eat(Tok::RParen)) hi_open = true;
                else if (eat(Tok::RBracket)) hi_open = false;
                else err(peek().pos, "expected ')' or ']'");
                iv = a_.interval(lo, hi, lo_open, hi_open);
            }
        } catch (const SortError& e) {
            err(p, e.what());
        }
        expect(Tok::RBracket, "']'");
        return iv;
    }

    TermId parse_rigid_term() {
        SrcPos p = peek().pos;
        TermId t = parse_term();
        if (!a_.is_rigid(t)) err(p, "rigid endpoint required");
        if (a_.sort_of(t).kind != SortKind::Real) err(p, "interval endpoints must be real");
        return t;
    }

    FormulaId parse_unary() {
        SrcPos p = peek().pos;
        if (eat(Tok::Not)) {
            FormulaId f = a_.f_not(parse_unary());
            note_fpos(f, p);
            return f;
        }
        if (at(Tok::EvF) || at(Tok::EvP)) {
            bool future = take().kind == Tok::EvF;
            Interval iv = parse_interval();
            FormulaId f = a_.ev_clock(future ? FormulaKind::EvClockF : FormulaKind::EvClockP, iv,
                                      parse_unary());
            note_fpos(f, p);
            return f;
        }
        if (at_word("Cf") || at_word("Cp")) {
            bool future = take().text == "Cf";
            expect(Tok::LBracket, "'['");
            if (!at(Tok::Number)) err(peek().pos, "expected an occurrence count");
            std::string ktxt = take().text;
            auto kq = rat_parse(ktxt);
            if (!kq || !rat_is_int(*kq) || *kq < 1) err(p, "count must be a positive integer");
            auto k = static_cast<std::uint32_t>(kq->get_num().get_ui());
            expect(Tok::RBracket, "']'");
            expect(Tok::LBracket, "'['");
            expect(Tok::Lt, "'<'");
            TermId bound = parse_rigid_term();
            expect(Tok::RBracket, "']'");
            FormulaId body = parse_unary();
            FormulaId f = a_.counting(future ? FormulaKind::CountFuture : FormulaKind::CountPast,
                                      k, bound, body);
            note_fpos(f, p);
            return f;
        }
        static const struct {
            const char* word;
            FormulaKind plain;
            FormulaKind strict;
            FormulaKind metric;  // metric variant or same-as-plain marker
        } unops[] = {
            {"F", FormulaKind::Finally, FormulaKind::Finally, FormulaKind::MetricFinally},
            {"G", FormulaKind::Globally, FormulaKind::Globally, FormulaKind::MetricGlobally},
            {"P", FormulaKind::Once, FormulaKind::Once, FormulaKind::MetricOnce},
            {"H", FormulaKind::Historically, FormulaKind::Historically,
             FormulaKind::MetricHistorically},
            {"X", FormulaKind::Next, FormulaKind::NextTilde, FormulaKind::Next},
            {"Y", FormulaKind::Yesterday, FormulaKind::YesterdayTilde, FormulaKind::Yesterday},
            {"Z", FormulaKind::WeakYesterday, FormulaKind::WeakYesterdayTilde,
             FormulaKind::WeakYesterday},
        };
        for (const auto& u : unops) {
            if (!at_word(u.word)) continue;
            take();
            bool strict = eat(Tok::Tilde);
            if (at(Tok::LBracket)) {
                if (u.metric == u.plain || u.metric == u.strict)
                    err(p, std::string(u.word) + " takes no interval");
                Interval iv = parse_interval();
                FormulaId f = a_.metric(u.metric, strict, iv, parse_unary());
                note_fpos(f, p);
                return f;
            }
            if (strict && u.plain == u.strict)
                err(p, std::string("'") + u.word + "~' is not an operator");
            FormulaId f = a_.unary(strict ? u.strict : u.plain, parse_unary());
            note_fpos(f, p);
            return f;
        }
        return parse_atom();
    }

    bool at_cmp() {
        switch (peek().kind) {
            case Tok::Eq:
            case Tok::Neq:
            case Tok::Le:
            case Tok::Lt:
            case Tok::Ge:
            case Tok::Gt:
                return true;
            default:
                return false;
        }
    }

    FormulaId parse_atom() {
        SrcPos p = peek().pos;
        if (eat_word("true")) return a_.f_true();
        if (eat_word("false")) return a_.f_false();

        // Predicate application is unambiguous.
        if (at(Tok::Ident) && !is_reserved(peek().text)) {
            if (auto sym = ws_.sig.lookup(peek().text)) {
                if (ws_.sig.symbol(*sym).kind == SymbolKind::Predicate) {
                    take();
                    expect(Tok::LParen, "'('");
                    std::vector<TermId> args;
                    const Symbol& sy = ws_.sig.symbol(*sym);
                    std::size_t idx = 0;
                    if (!at(Tok::RParen)) {
                        do {
                            Sort want = idx < sy.arg_sorts.size() ? sy.arg_sorts[idx]
                                                                  : Sort::real();
                            args.push_back(coerce(parse_term(), want));
                            ++idx;
                        } while (eat(Tok::Comma));
                    }
                    expect(Tok::RParen, "')'");
                    FormulaId f = build_pred(p, *sym, std::move(args));
                    note_fpos(f, p);
                    return f;
                }
            }
        }

        // Try a term comparison (or a bare boolean term); on failure a
        // leading '(' reparses as a parenthesized formula.
        bool paren = at(Tok::LParen);
        std::size_t m = mark();
        try {
            TermId lhs = parse_term();
            if (at_cmp()) {
                Tok op = take().kind;
                TermId rhs = parse_term();
                FormulaId f = build_cmp(p, op, lhs, rhs);
                note_fpos(f, p);
                return f;
            }
            if (a_.sort_of(lhs).kind == SortKind::Bool) {
                FormulaId f = a_.bool_term(lhs);
                note_fpos(f, p);
                return f;
            }
            throw ParseError{p, "term is not boolean; expected a comparison"};
        } catch (const ParseError&) {
            if (!paren) throw;
            rewind(m);
        } catch (const SortError& e) {
            if (!paren) {
                sort_error(p, e.what());
                return a_.f_true();
            }
            rewind(m);
        }

        expect(Tok::LParen, "'('");
        FormulaId f = parse_formula();
        expect(Tok::RParen, "')'");
        return f;
    }

    FormulaId build_pred(SrcPos p, SymbolId sym, std::vector<TermId> args) {
        try {
            return a_.pred(sym, std::move(args));
        } catch (const SortError& e) {
            sort_error(p, e.what());
            return a_.f_true();
        }
    }

    bool is_time_term(TermId t) {
        const TermNode& n = a_.term(t);
        if (n.kind == TermKind::TimeSym) return true;
        if (n.kind == TermKind::Ef) return is_time_term(n.args[0]);
        return false;
    }

    bool mentions_time(TermId t) {
        const TermNode& n = a_.term(t);
        if (n.kind == TermKind::TimeSym) return true;
        for (auto x : n.args)
            if (mentions_time(x)) return true;
        return false;
    }

    CmpOp cmp_of(Tok t) {
        switch (t) {
            case Tok::Eq: return CmpOp::Eq;
            case Tok::Le: return CmpOp::Le;
            case Tok::Lt: return CmpOp::Lt;
            case Tok::Ge: return CmpOp::Ge;
            case Tok::Gt: return CmpOp::Gt;
            default: return CmpOp::Eq;
        }
    }

    FormulaId build_cmp(SrcPos p, Tok opk, TermId lhs, TermId rhs) {
        bool neq = opk == Tok::Neq;
        CmpOp op = neq ? CmpOp::Eq : cmp_of(opk);
        try {
            FormulaId f;
            if (mentions_time(lhs) || mentions_time(rhs)) {
                f = build_time_atom(p, op, neq, lhs, rhs);
            } else {
                // int literals adapt to the other side's sort
                Sort ls = a_.sort_of(lhs), rs = a_.sort_of(rhs);
                if (ls != rs) {
                    lhs = coerce(lhs, rs);
                    rhs = coerce(rhs, ls);
                }
                f = a_.cmp(op, lhs, rhs);
                if (neq) f = a_.f_not(f);
            }
            return f;
        } catch (const SortError& e) {
            sort_error(p, e.what());
            return a_.f_true();
        }
    }

    FormulaId build_time_atom(SrcPos p, CmpOp op, bool neq, TermId lhs, TermId rhs) {
        if (neq || op == CmpOp::Eq)
            throw SortError("explicit time supports only <, >, <=, >= comparisons");
        auto classify = [&](TermId side, TermId other, CmpOp o) -> std::optional<FormulaId> {
            // side must be tu or tu - tu'; other must be rigid.
            if (!a_.is_rigid(other)) return std::nullopt;
            if (is_time_term(side)) return a_.time_atom(side, std::nullopt, o, other);
            const TermNode& n = a_.term(side);
            if (n.kind == TermKind::Builtin && n.fn == BuiltinFn::Sub &&
                is_time_term(n.args[0]) && is_time_term(n.args[1])) {
                if (opts_.pedantic)
                    warn(p,
                         "difference time atoms (tu - tu' vs bound) extend the base "
                         "time-comparison grammar");
                return a_.time_atom(n.args[0], n.args[1], o, other);
            }
            return std::nullopt;
        };
        if (auto f = classify(lhs, rhs, op)) return *f;
        if (auto f = classify(rhs, lhs, cmp_flip(op))) return *f;
        throw SortError("explicit time may only be compared against rigid bounds");
    }

    // ---- terms ----

    TermId coerce(TermId t, Sort want) {
        const TermNode& n = a_.term(t);
        if (want.kind == SortKind::Int && n.kind == TermKind::RatConst && rat_is_int(n.value))
            return a_.int_const(n.value);
        return t;
    }

    TermId parse_term() { return parse_additive(); }

    TermId parse_additive() {
        SrcPos p = peek().pos;
        TermId t = parse_multiplicative();
        while (at(Tok::Plus) || at(Tok::Minus)) {
            BuiltinFn fn = take().kind == Tok::Plus ? BuiltinFn::Add : BuiltinFn::Sub;
            TermId u = parse_multiplicative();
            t = build_arith(p, fn, t, u);
        }
        return t;
    }

    TermId parse_multiplicative() {
        SrcPos p = peek().pos;
        TermId t = parse_term_unary();
        while (at(Tok::Star) || at(Tok::Slash)) {
            BuiltinFn fn = take().kind == Tok::Star ? BuiltinFn::Mul : BuiltinFn::Div;
            TermId u = parse_term_unary();
            t = build_arith(p, fn, t, u);
        }
        return t;
    }

    TermId build_arith(SrcPos p, BuiltinFn fn, TermId t, TermId u) {
        Sort ls = a_.sort_of(t), rs = a_.sort_of(u);
        if (ls != rs) {
            t = coerce(t, rs);
            u = coerce(u, ls);
        }
        try {
            return a_.builtin(fn, {t, u});
        } catch (const SortError& e) {
            err(p, e.what());
        }
    }

    TermId parse_term_unary() {
        SrcPos p = peek().pos;
        if (eat(Tok::Minus)) {
            TermId t = parse_term_unary();
            try {
                return a_.builtin(BuiltinFn::Neg, {t});
            } catch (const SortError& e) {
                err(p, e.what());
            }
        }
        return parse_postfix();
    }

    TermId parse_postfix() {
        TermId t = parse_primary();
        while (at(Tok::At)) {
            SrcPos p = take().pos;
            EfDir dir;
            if (eat_word("F")) dir = EfDir::Future;
            else if (eat_word("P")) dir = EfDir::Past;
            else err(peek().pos, "expected F or P after '@'");
            bool strict = eat(Tok::Tilde);
            std::uint32_t iter = 1;
            if (eat(Tok::Caret)) {
                if (!strict) err(p, "iteration applies to strict event freezing only");
                if (!at(Tok::Number)) err(peek().pos, "expected an iteration count");
                auto q = rat_parse(take().text);
                if (!q || !rat_is_int(*q) || *q < 1) err(p, "iteration count must be >= 1");
                iter = static_cast<std::uint32_t>(q->get_num().get_ui());
            }
            expect(Tok::LParen, "'('");
            FormulaId trigger = parse_formula();
            expect(Tok::RParen, "')'");
            try {
                t = a_.ef(dir, strict, iter, t, trigger);
                a_.ensure_default(t);
                note_tpos(t, p);
            } catch (const SortError& e) {
                err(p, e.what());
            }
        }
        return t;
    }

    TermId parse_primary() {
        SrcPos p = peek().pos;
        if (at(Tok::Number)) {
            auto q = rat_parse(take().text);
            if (!q) err(p, "bad numeric literal");
            TermId t = a_.rat_const(*q);
            note_tpos(t, p);
            return t;
        }
        if (eat_word("time")) {
            TermId t = a_.time_sym();
            note_tpos(t, p);
            return t;
        }
        if (eat_word("ite")) {
            expect(Tok::LParen, "'('");
            FormulaId c = parse_formula();
            expect(Tok::Comma, "','");
            TermId t1 = parse_term();
            expect(Tok::Comma, "','");
            TermId t2 = parse_term();
            expect(Tok::RParen, "')'");
            Sort s1 = a_.sort_of(t1), s2 = a_.sort_of(t2);
            if (s1 != s2) {
                t1 = coerce(t1, s2);
                t2 = coerce(t2, s1);
            }
            try {
                return a_.ite_term(c, t1, t2);
            } catch (const SortError& e) {
                err(p, e.what());
            }
        }
        if (eat_word("next")) {
            expect(Tok::LParen, "'('");
            TermId t = parse_term();
            expect(Tok::RParen, "')'");
            return a_.next_term(t);
        }
        if (eat_word("prev")) {
            expect(Tok::LParen, "'('");
            TermId t = parse_term();
            expect(Tok::RParen, "')'");
            return a_.prev_term(t);
        }
        if (eat(Tok::LParen)) {
            TermId t = parse_term();
            expect(Tok::RParen, "')'");
            return t;
        }
        if (at(Tok::Ident) && !is_reserved(peek().text)) {
            std::string name = take().text;
            auto sym = ws_.sig.lookup(name);
            if (!sym) err(p, "unknown symbol '" + name + "'");
            const Symbol& sy = ws_.sig.symbol(*sym);
            if (sy.kind == SymbolKind::Function) {
                expect(Tok::LParen, "'('");
                std::vector<TermId> args;
                std::size_t idx = 0;
                if (!at(Tok::RParen)) {
                    do {
                        Sort want =
                            idx < sy.arg_sorts.size() ? sy.arg_sorts[idx] : Sort::real();
                        args.push_back(coerce(parse_term(), want));
                        ++idx;
                    } while (eat(Tok::Comma));
                }
                expect(Tok::RParen, "')'");
                try {
                    TermId t = a_.uf_apply(*sym, std::move(args));
                    note_tpos(t, p);
                    return t;
                } catch (const SortError& e) {
                    err(p, e.what());
                }
            }
            if (sy.kind == SymbolKind::Predicate)
                err(p, "'" + name + "' is a predicate, not a term");
            TermId t = a_.symbol_term(*sym);
            note_tpos(t, p);
            return t;
        }
        err(p, "expected a term");
    }

    void sort_error(SrcPos p, std::string msg) {
        diags_.push_back({Diagnostic::Severity::Error, p, std::move(msg)});
        saw_sort_error_ = true;
    }

    bool saw_sort_error() const { return saw_sort_error_; }

    Workspace& ws_;
    Arena& a_;
    ParseOptions opts_;
    std::vector<Diagnostic>& diags_;
    ProblemFile* pf_;
    Lexer lex_;
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    bool saw_sort_error_ = false;
};

}  // namespace

ParseResult parse_problem(const std::string& text, const ParseOptions& opts) {
    ParseResult res;
    auto ws = std::make_shared<Workspace>();
    ProblemFile pf;
    pf.ws = ws;
    Parser p(*ws, text, opts, res.diagnostics, &pf);
    try {
        p.parse_header();
        p.parse_declarations(pf);
        p.expect_word("formula");
        p.expect(Tok::Colon, "':'");
        pf.formula = p.parse_formula();
        p.expect(Tok::Semi, "';'");
        if (!p.at(Tok::End)) p.err(p.peek().pos, "trailing input after formula");
    } catch (const ParseError& e) {
        res.diagnostics.push_back({Diagnostic::Severity::Error, e.pos, e.message});
        return res;
    } catch (const Lexer::LexError& e) {
        res.diagnostics.push_back({Diagnostic::Severity::Error, e.pos, e.message});
        return res;
    }
    if (p.saw_sort_error()) return res;

    // Time atoms are meaningful in every declared model: discrete models
    // carry real timestamps too (pointwise semantics), so no construct is
    // model-restricted beyond what sort checking already enforced.
    res.problem = std::move(pf);
    return res;
}

FormulaParseResult parse_formula(Workspace& ws, const std::string& text,
                                 const ParseOptions& opts) {
    FormulaParseResult res;
    Parser p(ws, text, opts, res.diagnostics, nullptr);
    try {
        FormulaId f = p.parse_formula();
        if (!p.at(Tok::End)) p.err(p.peek().pos, "trailing input after formula");
        if (!p.saw_sort_error()) res.formula = f;
    } catch (const ParseError& e) {
        res.diagnostics.push_back({Diagnostic::Severity::Error, e.pos, e.message});
    } catch (const Lexer::LexError& e) {
        res.diagnostics.push_back({Diagnostic::Severity::Error, e.pos, e.message});
    }
    return res;
}

}  // namespace xltlef
