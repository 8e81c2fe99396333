#include "uvl2ivml/ivml/parser.hpp"

#include <cctype>
#include <set>
#include <utility>

namespace uvl2ivml::ivml {

namespace {

enum class Tok {
    ident,
    integer,
    real,
    string,
    lbrace,
    rbrace,
    lparen,
    rparen,
    semicolon,
    comma,
    dot,
    eq_eq,
    ne,
    gt,
    ge,
    lt,
    le,
    plus,
    minus,
    star,
    slash,
    end,
};

struct Token {
    Tok kind;
    std::string text;
    long long ival = 0;
    double rval = 0.0;
    SourceLoc loc;
};

// Constructs of the full language the emitted subset never contains.
const std::set<std::string, std::less<>> kUnsupported = {
    "compound", "typedef",   "import",  "annotate", "assign",  "conflicts",
    "if",       "def",       "freeze",  "eval",     "version", "interface",
    "abstract", "refines",   "operation", "attribute", "const", "typeof",
};

class Lexer {
public:
    Lexer(std::string_view text, const std::string& source) : text_(text), source_(source) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\n') {
                ++line_;
                col_ = 1;
                ++pos_;
                continue;
            }
            if (c == ' ' || c == '\t' || c == '\r') {
                bump();
                continue;
            }
            if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
                while (pos_ < text_.size() && text_[pos_] != '\n')
                    bump();
                continue;
            }
            SourceLoc loc{line_, col_};
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                size_t start = pos_;
                while (pos_ < text_.size() &&
                       (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                    bump();
                out.push_back({Tok::ident, std::string(text_.substr(start, pos_ - start)), 0, 0.0, loc});
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c))) {
                size_t start = pos_;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    bump();
                bool is_real = false;
                if (pos_ + 1 < text_.size() && text_[pos_] == '.' &&
                    std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
                    is_real = true;
                    bump();
                    while (pos_ < text_.size() &&
                           std::isdigit(static_cast<unsigned char>(text_[pos_])))
                        bump();
                }
                std::string text(text_.substr(start, pos_ - start));
                Token tok{is_real ? Tok::real : Tok::integer, text, 0, 0.0, loc};
                try {
                    if (is_real)
                        tok.rval = std::stod(text);
                    else
                        tok.ival = std::stoll(text);
                } catch (const std::out_of_range&) {
                    fail(loc, "number literal '" + text + "' is out of range");
                }
                out.push_back(std::move(tok));
                continue;
            }
            if (c == '"' || c == '\'') {
                char quote = c;
                bump();
                size_t start = pos_;
                while (pos_ < text_.size() && text_[pos_] != quote && text_[pos_] != '\n')
                    bump();
                if (pos_ >= text_.size() || text_[pos_] != quote)
                    fail(loc, "unterminated string literal");
                out.push_back({Tok::string, std::string(text_.substr(start, pos_ - start)), 0, 0.0, loc});
                bump();
                continue;
            }
            auto two = [&](const char* op) {
                return text_.compare(pos_, 2, op) == 0;
            };
            if (two("==")) { out.push_back({Tok::eq_eq, "==", 0, 0.0, loc}); bump(); bump(); continue; }
            if (two("<>")) { out.push_back({Tok::ne, "<>", 0, 0.0, loc}); bump(); bump(); continue; }
            if (two(">=")) { out.push_back({Tok::ge, ">=", 0, 0.0, loc}); bump(); bump(); continue; }
            if (two("<=")) { out.push_back({Tok::le, "<=", 0, 0.0, loc}); bump(); bump(); continue; }
            Tok kind;
            switch (c) {
            case '{': kind = Tok::lbrace; break;
            case '}': kind = Tok::rbrace; break;
            case '(': kind = Tok::lparen; break;
            case ')': kind = Tok::rparen; break;
            case ';': kind = Tok::semicolon; break;
            case ',': kind = Tok::comma; break;
            case '.': kind = Tok::dot; break;
            case '>': kind = Tok::gt; break;
            case '<': kind = Tok::lt; break;
            case '+': kind = Tok::plus; break;
            case '-': kind = Tok::minus; break;
            case '*': kind = Tok::star; break;
            case '/': kind = Tok::slash; break;
            default:
                fail(loc, std::string("unexpected character '") + c + "'");
            }
            out.push_back({kind, std::string(1, c), 0, 0.0, loc});
            bump();
        }
        out.push_back({Tok::end, "<eof>", 0, 0.0, {line_, col_}});
        return out;
    }

private:
    void bump() {
        ++pos_;
        ++col_;
    }

    [[noreturn]] void fail(SourceLoc loc, std::string msg) {
        throw ParseError({Severity::error, loc, std::move(msg), source_});
    }

    std::string_view text_;
    const std::string& source_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    Parser(std::vector<Token> toks, std::string source)
        : toks_(std::move(toks)), source_(std::move(source)) {}

    Project run() {
        Project project;
        expect_keyword("project");
        project.name = expect_ident("project name");
        expect(Tok::lbrace, "expected '{'");
        while (!check(Tok::rbrace)) {
            if (check(Tok::end))
                fail(peek().loc, "unexpected end of input inside project");
            project.decls.push_back(parse_decl());
        }
        expect(Tok::rbrace, "expected '}'");
        if (!check(Tok::end))
            fail(peek().loc, "unexpected content after project");
        return project;
    }

private:
    Decl parse_decl() {
        const Token& head = peek();
        if (head.kind == Tok::ident) {
            if (kUnsupported.count(head.text))
                throw UnsupportedConstructError(
                    {Severity::error, head.loc,
                     "unsupported IVML construct '" + head.text + "' (outside the emitted subset)",
                     source_},
                    head.text);
            if (head.text == "enum")
                return parse_enum();
            if (head.text == "setOf")
                return parse_var_decl();
            if (is_type_keyword(head.text) && peek(1).kind == Tok::ident &&
                peek(2).kind == Tok::semicolon)
                return parse_var_decl();
            // `Ident Ident ;` declares a variable of a user enum type.
            if (peek(1).kind == Tok::ident && peek(2).kind == Tok::semicolon)
                return parse_var_decl();
        }
        ConstraintDecl c{parse_expr()};
        expect(Tok::semicolon, "expected ';' after constraint");
        return c;
    }

    Decl parse_enum() {
        advance(); // enum
        EnumDef def;
        def.name = expect_ident("enum name");
        expect(Tok::lbrace, "expected '{'");
        for (;;) {
            def.literals.push_back(expect_ident("enum literal"));
            if (!match(Tok::comma))
                break;
        }
        expect(Tok::rbrace, "expected '}'");
        expect(Tok::semicolon, "expected ';'");
        return def;
    }

    Decl parse_var_decl() {
        VarDecl var;
        const Token& head = peek();
        if (head.text == "setOf") {
            advance();
            expect(Tok::lparen, "expected '(' after setOf");
            var.type = {TypeKind::set_of_enum, expect_ident("element enum name")};
            expect(Tok::rparen, "expected ')'");
        } else if (head.text == "Boolean") {
            advance();
            var.type = {TypeKind::boolean, ""};
        } else if (head.text == "Integer") {
            advance();
            var.type = {TypeKind::integer, ""};
        } else if (head.text == "Real") {
            advance();
            var.type = {TypeKind::real, ""};
        } else if (head.text == "String") {
            advance();
            var.type = {TypeKind::string, ""};
        } else {
            var.type = {TypeKind::enumeration, expect_ident("type name")};
        }
        var.name = expect_ident("variable name");
        expect(Tok::semicolon, "expected ';'");
        return var;
    }

    static bool is_type_keyword(const std::string& word) {
        return word == "Boolean" || word == "Integer" || word == "Real" || word == "String";
    }

    // Expression grammar, loosest to tightest: iff, implies, or, and,
    // comparisons, additive, multiplicative, unary.
    ExprPtr parse_expr() { return parse_iff(); }

    ExprPtr parse_iff() {
        ExprPtr lhs = parse_implies();
        while (match_keyword("iff"))
            lhs = binary(ExprKind::iff, std::move(lhs), parse_implies());
        return lhs;
    }

    ExprPtr parse_implies() {
        ExprPtr lhs = parse_or();
        if (match_keyword("implies"))
            return implies(std::move(lhs), parse_implies());
        return lhs;
    }

    ExprPtr parse_or() {
        ExprPtr lhs = parse_and();
        while (match_keyword("or"))
            lhs = or_op(std::move(lhs), parse_and());
        return lhs;
    }

    ExprPtr parse_and() {
        ExprPtr lhs = parse_comparison();
        while (match_keyword("and"))
            lhs = and_op(std::move(lhs), parse_comparison());
        return lhs;
    }

    ExprPtr parse_comparison() {
        ExprPtr lhs = parse_additive();
        for (;;) {
            ExprKind kind;
            if (match(Tok::eq_eq))
                kind = ExprKind::eq;
            else if (match(Tok::ne))
                kind = ExprKind::ne;
            else if (match(Tok::gt))
                kind = ExprKind::gt;
            else if (match(Tok::ge))
                kind = ExprKind::ge;
            else if (match(Tok::lt))
                kind = ExprKind::lt;
            else if (match(Tok::le))
                kind = ExprKind::le;
            else
                break;
            ExprPtr rhs = parse_additive();
            // Normalize `x <> true` to a plain negation.
            if (kind == ExprKind::ne && rhs->kind == ExprKind::bool_lit && rhs->bval)
                lhs = not_op(std::move(lhs));
            else
                lhs = binary(kind, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    ExprPtr parse_additive() {
        ExprPtr lhs = parse_multiplicative();
        for (;;) {
            ExprKind kind;
            if (match(Tok::plus))
                kind = ExprKind::add;
            else if (match(Tok::minus))
                kind = ExprKind::sub;
            else
                break;
            lhs = binary(kind, std::move(lhs), parse_multiplicative());
        }
        return lhs;
    }

    ExprPtr parse_multiplicative() {
        ExprPtr lhs = parse_unary();
        for (;;) {
            ExprKind kind;
            if (match(Tok::star))
                kind = ExprKind::mul;
            else if (match(Tok::slash))
                kind = ExprKind::divide;
            else
                break;
            lhs = binary(kind, std::move(lhs), parse_unary());
        }
        return lhs;
    }

    ExprPtr parse_unary() {
        if (match_keyword("not"))
            return not_op(parse_unary());
        return parse_primary();
    }

    ExprPtr parse_primary() {
        const Token& tok = peek();
        if (tok.kind == Tok::lparen) {
            advance();
            ExprPtr e = parse_expr();
            expect(Tok::rparen, "expected ')'");
            return e;
        }
        if (tok.kind == Tok::integer) {
            advance();
            return int_lit(tok.ival);
        }
        if (tok.kind == Tok::real) {
            advance();
            return real_lit(tok.rval);
        }
        if (tok.kind == Tok::string) {
            advance();
            return string_lit(tok.text);
        }
        if (tok.kind == Tok::ident) {
            if (kUnsupported.count(tok.text))
                throw UnsupportedConstructError(
                    {Severity::error, tok.loc,
                     "unsupported IVML construct '" + tok.text + "' (outside the emitted subset)",
                     source_},
                    tok.text);
            advance();
            if (tok.text == "true")
                return bool_lit(true);
            if (tok.text == "false")
                return bool_lit(false);
            if (tok.text == "isDefined") {
                expect(Tok::lparen, "expected '('");
                std::string var = expect_ident("variable name");
                expect(Tok::rparen, "expected ')'");
                return is_defined(std::move(var));
            }
            if (tok.text == "size") {
                expect(Tok::lparen, "expected '('");
                std::string var = expect_ident("variable name");
                expect(Tok::rparen, "expected ')'");
                return size_fn(std::move(var));
            }
            if (tok.text == "includes") {
                expect(Tok::lparen, "expected '('");
                std::string var = expect_ident("set variable name");
                expect(Tok::comma, "expected ','");
                std::string enum_name = expect_ident("enum name");
                expect(Tok::dot, "expected '.' in qualified enum literal");
                std::string literal = expect_ident("enum literal");
                expect(Tok::rparen, "expected ')'");
                return includes_fn(std::move(var), std::move(enum_name), std::move(literal));
            }
            if (tok.text == "floor") {
                expect(Tok::lparen, "expected '('");
                ExprPtr arg = parse_expr();
                expect(Tok::rparen, "expected ')'");
                return floor_fn(std::move(arg));
            }
            if (check(Tok::dot)) {
                advance();
                return enum_lit(tok.text, expect_ident("enum literal"));
            }
            return var_ref(tok.text);
        }
        fail(tok.loc, "unexpected token '" + tok.text + "' in expression");
    }

    const Token& peek(size_t ahead = 0) const {
        size_t i = pos_ + ahead;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }

    bool check(Tok kind) const { return peek().kind == kind; }

    bool match(Tok kind) {
        if (check(kind)) {
            advance();
            return true;
        }
        return false;
    }

    bool match_keyword(std::string_view word) {
        if (peek().kind == Tok::ident && peek().text == word) {
            advance();
            return true;
        }
        return false;
    }

    void expect(Tok kind, const std::string& msg) {
        if (!match(kind))
            fail(peek().loc, msg + ", got '" + peek().text + "'");
    }

    void expect_keyword(const std::string& word) {
        if (!match_keyword(word))
            fail(peek().loc, "expected '" + word + "', got '" + peek().text + "'");
    }

    std::string expect_ident(const std::string& what) {
        if (peek().kind != Tok::ident)
            fail(peek().loc, "expected " + what + ", got '" + peek().text + "'");
        std::string text = peek().text;
        advance();
        return text;
    }

    void advance() {
        if (pos_ + 1 < toks_.size())
            ++pos_;
    }

    [[noreturn]] void fail(SourceLoc loc, std::string msg) {
        throw ParseError({Severity::error, loc, std::move(msg), source_});
    }

    std::vector<Token> toks_;
    std::string source_;
    size_t pos_ = 0;
};

} // namespace

Project parse_ivml_subset(std::string_view text, std::string source_name) {
    std::vector<Token> toks = Lexer(text, source_name).run();
    return Parser(std::move(toks), std::move(source_name)).run();
}

} // namespace uvl2ivml::ivml
