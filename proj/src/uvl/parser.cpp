#include "uvl2ivml/uvl/parser.hpp"

#include <cctype>
#include <charconv>
#include <optional>
#include <set>
#include <utility>

namespace uvl2ivml::uvl {

namespace {

enum class Tok {
    ident,
    integer,
    real,
    string,
    lbrace,
    rbrace,
    lbracket,
    rbracket,
    lparen,
    rparen,
    comma,
    dotdot,
    bang,
    amp,
    pipe,
    implies,
    iff,
    gt,
    ge,
    lt,
    le,
    eq_eq,
    bang_eq,
    plus,
    minus,
    star,
    slash,
};

struct Token {
    Tok kind;
    std::string text;
    long long ival = 0;
    double rval = 0.0;
    SourceLoc loc;
};

struct Line {
    std::string indent; // leading whitespace, verbatim
    std::vector<Token> tokens;
    int number = 0;
};

// Structural words that cannot double as feature names.
const std::set<std::string, std::less<>> kReservedWords = {
    "namespace", "features", "constraints", "mandatory", "optional",
    "or",        "alternative", "true",     "false",
};

bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool is_ident_char(char c) {
    return is_ident_start(c) || (c >= '0' && c <= '9');
}

class Lexer {
public:
    Lexer(std::string_view text, std::string source) : text_(text), source_(std::move(source)) {}

    std::vector<Line> run() {
        std::vector<Line> lines;
        int line_no = 0;
        size_t pos = 0;
        while (pos <= text_.size()) {
            size_t eol = text_.find('\n', pos);
            std::string_view raw = eol == std::string_view::npos
                                       ? text_.substr(pos)
                                       : text_.substr(pos, eol - pos);
            ++line_no;
            if (!raw.empty() && raw.back() == '\r')
                raw.remove_suffix(1);
            Line line = lex_line(raw, line_no);
            if (!line.tokens.empty())
                lines.push_back(std::move(line));
            if (eol == std::string_view::npos)
                break;
            pos = eol + 1;
        }
        return lines;
    }

private:
    Line lex_line(std::string_view raw, int line_no) {
        Line line;
        line.number = line_no;
        size_t i = 0;
        while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t'))
            ++i;
        line.indent.assign(raw.substr(0, i));
        while (i < raw.size()) {
            char c = raw[i];
            if (c == ' ' || c == '\t') {
                ++i;
                continue;
            }
            if (c == '/' && i + 1 < raw.size() && raw[i + 1] == '/')
                break; // line comment
            SourceLoc loc{line_no, static_cast<int>(i) + 1};
            if (is_ident_start(c)) {
                size_t start = i;
                while (i < raw.size() && is_ident_char(raw[i]))
                    ++i;
                line.tokens.push_back({Tok::ident, std::string(raw.substr(start, i - start)), 0, 0.0, loc});
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c))) {
                size_t start = i;
                while (i < raw.size() && std::isdigit(static_cast<unsigned char>(raw[i])))
                    ++i;
                bool is_real = false;
                // A '.' starts a real literal only if not the '..' range token.
                if (i + 1 < raw.size() && raw[i] == '.' && raw[i + 1] != '.' &&
                    std::isdigit(static_cast<unsigned char>(raw[i + 1]))) {
                    is_real = true;
                    ++i;
                    while (i < raw.size() && std::isdigit(static_cast<unsigned char>(raw[i])))
                        ++i;
                }
                std::string text(raw.substr(start, i - start));
                Token tok{is_real ? Tok::real : Tok::integer, text, 0, 0.0, loc};
                try {
                    if (is_real)
                        tok.rval = std::stod(text);
                    else
                        tok.ival = std::stoll(text);
                } catch (const std::out_of_range&) {
                    fail(loc, "number literal '" + text + "' is out of range");
                }
                line.tokens.push_back(std::move(tok));
                continue;
            }
            if (c == '\'' || c == '"') {
                char quote = c;
                size_t start = ++i;
                while (i < raw.size() && raw[i] != quote)
                    ++i;
                if (i >= raw.size())
                    fail(loc, "unterminated string literal");
                line.tokens.push_back(
                    {Tok::string, std::string(raw.substr(start, i - start)), 0, 0.0, loc});
                ++i;
                continue;
            }
            auto two = [&](char a, char b) {
                return c == a && i + 1 < raw.size() && raw[i + 1] == b;
            };
            if (c == '<' && i + 2 < raw.size() && raw[i + 1] == '=' && raw[i + 2] == '>') {
                line.tokens.push_back({Tok::iff, "<=>", 0, 0.0, loc});
                i += 3;
                continue;
            }
            if (two('=', '>')) {
                line.tokens.push_back({Tok::implies, "=>", 0, 0.0, loc});
                i += 2;
                continue;
            }
            if (two('=', '=')) {
                line.tokens.push_back({Tok::eq_eq, "==", 0, 0.0, loc});
                i += 2;
                continue;
            }
            if (two('!', '=')) {
                line.tokens.push_back({Tok::bang_eq, "!=", 0, 0.0, loc});
                i += 2;
                continue;
            }
            if (two('>', '=')) {
                line.tokens.push_back({Tok::ge, ">=", 0, 0.0, loc});
                i += 2;
                continue;
            }
            if (two('<', '=')) {
                line.tokens.push_back({Tok::le, "<=", 0, 0.0, loc});
                i += 2;
                continue;
            }
            if (two('.', '.')) {
                line.tokens.push_back({Tok::dotdot, "..", 0, 0.0, loc});
                i += 2;
                continue;
            }
            Tok kind;
            switch (c) {
            case '{': kind = Tok::lbrace; break;
            case '}': kind = Tok::rbrace; break;
            case '[': kind = Tok::lbracket; break;
            case ']': kind = Tok::rbracket; break;
            case '(': kind = Tok::lparen; break;
            case ')': kind = Tok::rparen; break;
            case ',': kind = Tok::comma; break;
            case '!': kind = Tok::bang; break;
            case '&': kind = Tok::amp; break;
            case '|': kind = Tok::pipe; break;
            case '>': kind = Tok::gt; break;
            case '<': kind = Tok::lt; break;
            case '+': kind = Tok::plus; break;
            case '-': kind = Tok::minus; break;
            case '*': kind = Tok::star; break;
            case '/': kind = Tok::slash; break;
            default:
                fail(loc, std::string("unexpected character '") + c + "'");
            }
            line.tokens.push_back({kind, std::string(1, c), 0, 0.0, loc});
            ++i;
        }
        return line;
    }

    [[noreturn]] void fail(SourceLoc loc, std::string msg) {
        throw ParseError({Severity::error, loc, std::move(msg), source_});
    }

    std::string_view text_;
    std::string source_;
};

/// Parses one constraint expression from a token list.
/// Precedence, tightest to loosest: !, * /, + -, comparisons, &, |, =>, <=>.
/// `=>` is right-associative; the other binary operators are left-associative.
class ExprParser {
public:
    ExprParser(const std::vector<Token>& toks, const std::string& source)
        : toks_(toks), source_(source) {}

    ExprPtr parse() {
        ExprPtr e = parse_iff();
        if (pos_ != toks_.size())
            fail(toks_[pos_].loc, "unexpected token '" + toks_[pos_].text + "' after expression");
        return e;
    }

private:
    ExprPtr parse_iff() {
        ExprPtr lhs = parse_implies();
        while (match(Tok::iff)) {
            SourceLoc loc = prev_loc();
            ExprPtr rhs = parse_implies();
            lhs = binary(ExprKind::iff, loc, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    ExprPtr parse_implies() {
        ExprPtr lhs = parse_or();
        if (match(Tok::implies)) {
            SourceLoc loc = prev_loc();
            ExprPtr rhs = parse_implies(); // right-associative
            return binary(ExprKind::implies, loc, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    ExprPtr parse_or() {
        ExprPtr lhs = parse_and();
        while (match(Tok::pipe)) {
            SourceLoc loc = prev_loc();
            lhs = binary(ExprKind::or_op, loc, std::move(lhs), parse_and());
        }
        return lhs;
    }

    ExprPtr parse_and() {
        ExprPtr lhs = parse_comparison();
        while (match(Tok::amp)) {
            SourceLoc loc = prev_loc();
            lhs = binary(ExprKind::and_op, loc, std::move(lhs), parse_comparison());
        }
        return lhs;
    }

    ExprPtr parse_comparison() {
        ExprPtr lhs = parse_additive();
        for (;;) {
            ExprKind kind;
            if (match(Tok::gt))
                kind = ExprKind::gt;
            else if (match(Tok::ge))
                kind = ExprKind::ge;
            else if (match(Tok::lt))
                kind = ExprKind::lt;
            else if (match(Tok::le))
                kind = ExprKind::le;
            else if (match(Tok::eq_eq))
                kind = ExprKind::eq;
            else if (match(Tok::bang_eq))
                kind = ExprKind::ne;
            else
                break;
            SourceLoc loc = prev_loc();
            lhs = binary(kind, loc, std::move(lhs), parse_additive());
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
            SourceLoc loc = prev_loc();
            lhs = binary(kind, loc, std::move(lhs), parse_multiplicative());
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
            SourceLoc loc = prev_loc();
            lhs = binary(kind, loc, std::move(lhs), parse_unary());
        }
        return lhs;
    }

    ExprPtr parse_unary() {
        if (match(Tok::bang)) {
            SourceLoc loc = prev_loc();
            ExprPtr e = make_expr(ExprKind::not_op, loc);
            e->lhs = parse_unary();
            return e;
        }
        return parse_primary();
    }

    ExprPtr parse_primary() {
        if (pos_ >= toks_.size())
            fail(last_loc(), "expected expression");
        const Token& tok = toks_[pos_];
        if (tok.kind == Tok::lparen) {
            ++pos_;
            ExprPtr e = parse_iff();
            expect(Tok::rparen, "expected ')'");
            return e;
        }
        if (tok.kind == Tok::integer) {
            ++pos_;
            ExprPtr e = make_expr(ExprKind::int_lit, tok.loc);
            e->int_value = tok.ival;
            return e;
        }
        if (tok.kind == Tok::real) {
            ++pos_;
            ExprPtr e = make_expr(ExprKind::real_lit, tok.loc);
            e->real_value = tok.rval;
            return e;
        }
        if (tok.kind == Tok::string) {
            ++pos_;
            ExprPtr e = make_expr(ExprKind::string_lit, tok.loc);
            e->text = tok.text;
            return e;
        }
        if (tok.kind == Tok::ident) {
            ++pos_;
            if (tok.text == "true" || tok.text == "false") {
                ExprPtr e = make_expr(ExprKind::bool_lit, tok.loc);
                e->bool_value = tok.text == "true";
                return e;
            }
            if ((tok.text == "len" || tok.text == "floor") && match(Tok::lparen)) {
                ExprPtr e = make_expr(
                    tok.text == "len" ? ExprKind::len_fn : ExprKind::floor_fn, tok.loc);
                e->lhs = parse_iff();
                expect(Tok::rparen, "expected ')' after function argument");
                return e;
            }
            ExprPtr e = make_expr(ExprKind::feature_ref, tok.loc);
            e->text = tok.text;
            return e;
        }
        fail(tok.loc, "unexpected token '" + tok.text + "' in expression");
    }

    static ExprPtr binary(ExprKind kind, SourceLoc loc, ExprPtr lhs, ExprPtr rhs) {
        ExprPtr e = make_expr(kind, loc);
        e->lhs = std::move(lhs);
        e->rhs = std::move(rhs);
        return e;
    }

    bool match(Tok kind) {
        if (pos_ < toks_.size() && toks_[pos_].kind == kind) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(Tok kind, const std::string& msg) {
        if (!match(kind))
            fail(pos_ < toks_.size() ? toks_[pos_].loc : last_loc(), msg);
    }

    SourceLoc prev_loc() const { return toks_[pos_ - 1].loc; }

    SourceLoc last_loc() const {
        if (toks_.empty())
            return {};
        SourceLoc loc = toks_.back().loc;
        loc.column += static_cast<int>(toks_.back().text.size());
        return loc;
    }

    [[noreturn]] void fail(SourceLoc loc, std::string msg) {
        throw ParseError({Severity::error, loc, std::move(msg), source_});
    }

    const std::vector<Token>& toks_;
    const std::string& source_;
    size_t pos_ = 0;
};

/// Line-oriented recursive descent over the lexed lines. Each sibling block's
/// indentation is fixed by its first member; a nested block must be strictly
/// deeper (more leading whitespace characters) than the line that owns it,
/// and a dedent must land exactly on an enclosing block's indentation.
class Parser {
public:
    Parser(std::vector<Line> lines, std::string source)
        : lines_(std::move(lines)), source_(std::move(source)) {}

    UvlModel run() {
        UvlModel model;
        model.source_name = source_;

        if (at_end())
            fail({1, 1}, "empty input: expected a 'features' section");

        if (is_keyword_line("namespace")) {
            const Line& line = current();
            if (line.tokens.size() != 2 || line.tokens[1].kind != Tok::ident)
                fail(line.tokens[0].loc, "expected 'namespace <identifier>'");
            model.namespace_name = line.tokens[1].text;
            advance();
        }

        if (at_end() || !is_keyword_line("features"))
            fail(at_end() ? SourceLoc{1, 1} : current().tokens[0].loc,
                 "expected 'features' section");
        if (!current().indent.empty())
            fail(current().tokens[0].loc, "'features' must not be indented");
        if (current().tokens.size() != 1)
            fail(current().tokens[1].loc, "unexpected token after 'features'");
        std::string features_indent = current().indent;
        advance();

        indent_stack_.push_back(features_indent);
        std::vector<FeatureNode> roots = parse_feature_block(features_indent);
        indent_stack_.pop_back();
        if (roots.empty())
            fail({lines_.back().number, 1}, "expected a root feature under 'features'");
        if (roots.size() > 1)
            fail(roots[1].loc, "exactly one root feature is allowed");
        model.root = std::move(roots[0]);

        if (!at_end() && is_keyword_line("constraints")) {
            const Line& header = current();
            if (!header.indent.empty())
                fail(header.tokens[0].loc, "'constraints' must not be indented");
            if (header.tokens.size() != 1)
                fail(header.tokens[1].loc, "unexpected token after 'constraints'");
            advance();
            if (!at_end()) {
                std::string block_indent = current().indent;
                if (block_indent.empty())
                    fail(current().tokens[0].loc, "constraints must be indented");
                while (!at_end() && current().indent == block_indent) {
                    model.constraints.push_back(
                        ExprParser(current().tokens, source_).parse());
                    advance();
                }
            }
        }

        if (!at_end())
            fail(current().tokens[0].loc,
                 "unexpected content after the model: '" + current().tokens[0].text + "'");
        return model;
    }

private:
    // Parses a run of sibling features. The block's indentation is set by the
    // first line, which must be deeper than `owner_indent`.
    std::vector<FeatureNode> parse_feature_block(const std::string& owner_indent) {
        std::vector<FeatureNode> features;
        if (at_end() || current().indent.size() <= owner_indent.size())
            return features;
        std::string block_indent = current().indent;
        indent_stack_.push_back(block_indent);
        while (!at_end()) {
            if (current().indent != block_indent) {
                check_dedent(block_indent);
                break;
            }
            features.push_back(parse_feature(block_indent));
        }
        indent_stack_.pop_back();
        return features;
    }

    FeatureNode parse_feature(const std::string& my_indent) {
        const Line& line = current();
        size_t t = 0;
        FeatureNode feature;
        feature.loc = line.tokens[0].loc;

        if (line.tokens[t].kind != Tok::ident)
            fail(line.tokens[t].loc, "expected feature name");
        std::string first = line.tokens[t].text;
        FeatureType type = FeatureType::boolean;
        bool typed = false;
        if (first == "String")
            type = FeatureType::string_type, typed = true;
        else if (first == "Integer")
            type = FeatureType::integer, typed = true;
        else if (first == "Real")
            type = FeatureType::real, typed = true;
        else if (first == "Boolean")
            typed = true;
        if (typed) {
            ++t;
            if (t >= line.tokens.size() || line.tokens[t].kind != Tok::ident)
                fail(line.tokens[t - 1].loc, "expected feature name after type keyword");
        }
        feature.type = type;
        const Token& name_tok = line.tokens[t];
        if (kReservedWords.count(name_tok.text))
            fail(name_tok.loc, "'" + name_tok.text + "' is a reserved word and cannot name a feature");
        feature.name = name_tok.text;
        ++t;

        if (t < line.tokens.size() && line.tokens[t].kind == Tok::lbrace) {
            ++t;
            parse_attributes(line, t, feature);
        }
        if (t < line.tokens.size())
            fail(line.tokens[t].loc, "unexpected token '" + line.tokens[t].text + "' after feature");
        advance();

        if (!at_end() && current().indent.size() > my_indent.size())
            parse_group_block(feature);
        return feature;
    }

    void parse_attributes(const Line& line, size_t& t, FeatureNode& feature) {
        for (;;) {
            if (t >= line.tokens.size())
                fail(line.tokens.back().loc, "unterminated attribute block");
            if (line.tokens[t].kind == Tok::rbrace) {
                ++t;
                return;
            }
            if (line.tokens[t].kind != Tok::ident)
                fail(line.tokens[t].loc, "expected attribute name");
            Attribute attr;
            attr.key = line.tokens[t].text;
            ++t;
            if (t < line.tokens.size() && line.tokens[t].kind != Tok::comma &&
                line.tokens[t].kind != Tok::rbrace) {
                const Token& val = line.tokens[t];
                if (val.kind != Tok::ident && val.kind != Tok::integer && val.kind != Tok::real &&
                    val.kind != Tok::string)
                    fail(val.loc, "expected attribute value");
                attr.value = val.kind == Tok::string ? "'" + val.text + "'" : val.text;
                ++t;
            }
            if (attr.key == "abstract" && attr.value == "true")
                feature.is_abstract = true;
            feature.attributes.push_back(std::move(attr));
            if (t < line.tokens.size() && line.tokens[t].kind == Tok::comma)
                ++t;
        }
    }

    // Caller guarantees the current line is deeper than the owning feature.
    void parse_group_block(FeatureNode& feature) {
        std::string block_indent = current().indent;
        indent_stack_.push_back(block_indent);
        while (!at_end()) {
            if (current().indent != block_indent) {
                check_dedent(block_indent);
                break;
            }
            feature.groups.push_back(parse_group(block_indent));
        }
        indent_stack_.pop_back();
    }

    GroupNode parse_group(const std::string& my_indent) {
        const Line& line = current();
        GroupNode group;
        group.loc = line.tokens[0].loc;
        const Token& head = line.tokens[0];
        size_t expected_len = 1;
        if (head.kind == Tok::ident) {
            if (head.text == "mandatory")
                group.kind = GroupKind::mandatory;
            else if (head.text == "optional")
                group.kind = GroupKind::optional;
            else if (head.text == "or")
                group.kind = GroupKind::or_group;
            else if (head.text == "alternative")
                group.kind = GroupKind::alternative;
            else
                fail(head.loc, "expected a group keyword (mandatory, optional, or, alternative) "
                               "or '[lo..hi]', got '" + head.text + "'");
        } else if (head.kind == Tok::lbracket) {
            group.kind = GroupKind::cardinality;
            if (line.tokens.size() < 3 || line.tokens[1].kind != Tok::integer)
                fail(head.loc, "expected '[lo..hi]' or '[n]' cardinality");
            group.lo = static_cast<int>(line.tokens[1].ival);
            size_t t = 2;
            if (line.tokens[t].kind == Tok::dotdot) {
                ++t;
                if (t >= line.tokens.size() || line.tokens[t].kind != Tok::integer)
                    fail(line.tokens[t - 1].loc, "expected upper bound after '..'");
                group.hi = static_cast<int>(line.tokens[t].ival);
                ++t;
            } else {
                group.hi = group.lo; // [n] is shorthand for [n..n]
            }
            if (t >= line.tokens.size() || line.tokens[t].kind != Tok::rbracket)
                fail(line.tokens[t - 1].loc, "expected ']' to close cardinality");
            expected_len = t + 1;
        } else {
            fail(head.loc, "expected a group keyword or cardinality");
        }
        if (line.tokens.size() != expected_len)
            fail(line.tokens[expected_len].loc, "unexpected token after group");
        advance();

        group.children = parse_feature_block(my_indent);
        if (group.children.empty())
            fail(group.loc, "group has no child features");
        return group;
    }

    // A line that leaves the current block must match some enclosing block's
    // indentation exactly; anything else mixes levels.
    void check_dedent(const std::string& block_indent) {
        if (at_end())
            return;
        const std::string& indent = current().indent;
        if (indent.size() > block_indent.size())
            fail(current().tokens[0].loc, "inconsistent indentation: line is deeper than its block");
        for (const std::string& open : indent_stack_)
            if (indent == open)
                return;
        if (indent.empty())
            return; // top level (constraints section or end)
        fail(current().tokens[0].loc,
             "inconsistent indentation: line matches no enclosing block");
    }

    bool is_keyword_line(std::string_view word) const {
        return !at_end() && !current().tokens.empty() &&
               current().tokens[0].kind == Tok::ident && current().tokens[0].text == word;
    }

    const Line& current() const { return lines_[pos_]; }
    bool at_end() const { return pos_ >= lines_.size(); }
    void advance() { ++pos_; }

    [[noreturn]] void fail(SourceLoc loc, std::string msg) {
        throw ParseError({Severity::error, loc, std::move(msg), source_});
    }

    std::vector<Line> lines_;
    std::string source_;
    size_t pos_ = 0;
    std::vector<std::string> indent_stack_;
};

} // namespace

UvlModel parse_uvl(std::string_view text, std::string source_name) {
    std::vector<Line> lines = Lexer(text, source_name).run();
    return Parser(std::move(lines), std::move(source_name)).run();
}

} // namespace uvl2ivml::uvl
