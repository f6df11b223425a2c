#include "mlearn/dot.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace mlearn {

namespace {

struct Token {
    enum Kind { Id, Arrow, LBrace, RBrace, LBracket, RBracket, Equals, Semi, Comma, End } kind;
    std::string text;
    int line, column;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    Token next() {
        skip_space_and_comments();
        int line = line_, col = col_;
        if (pos_ >= text_.size()) return {Token::End, "", line, col};
        char c = text_[pos_];
        switch (c) {
            case '{': advance(); return {Token::LBrace, "{", line, col};
            case '}': advance(); return {Token::RBrace, "}", line, col};
            case '[': advance(); return {Token::LBracket, "[", line, col};
            case ']': advance(); return {Token::RBracket, "]", line, col};
            case '=': advance(); return {Token::Equals, "=", line, col};
            case ';': advance(); return {Token::Semi, ";", line, col};
            case ',': advance(); return {Token::Comma, ",", line, col};
            default: break;
        }
        if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
            advance();
            advance();
            return {Token::Arrow, "->", line, col};
        }
        if (c == '"') {
            advance();
            std::string value;
            while (pos_ < text_.size() && text_[pos_] != '"') {
                if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) advance();
                value += text_[pos_];
                advance();
            }
            if (pos_ >= text_.size()) throw DotParseError("unterminated string", line, col);
            advance();
            return {Token::Id, value, line, col};
        }
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-') {
            std::string value;
            while (pos_ < text_.size()) {
                char d = text_[pos_];
                if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '.' || d == '-')
                    value += d;
                else
                    break;
                advance();
            }
            return {Token::Id, value, line, col};
        }
        throw DotParseError(std::string("unexpected character '") + c + "'", line, col);
    }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_space_and_comments() {
        for (;;) {
            while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
            if (pos_ + 1 < text_.size() && text_[pos_] == '/' && text_[pos_ + 1] == '/') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
                continue;
            }
            if (pos_ + 1 < text_.size() && text_[pos_] == '/' && text_[pos_ + 1] == '*') {
                advance();
                advance();
                while (pos_ + 1 < text_.size() && !(text_[pos_] == '*' && text_[pos_ + 1] == '/')) advance();
                if (pos_ + 1 >= text_.size()) throw DotParseError("unterminated comment", line_, col_);
                advance();
                advance();
                continue;
            }
            break;
        }
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
};

bool is_start_pseudo(const std::string& name) { return name.rfind("__start", 0) == 0; }

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

struct RawEdge {
    std::string from, to, input, output;
    int line, column;
};

}  // namespace

MealyMachine parse_dot(const std::string& text) {
    Lexer lexer(text);
    Token tok = lexer.next();
    if (tok.kind == Token::Id && tok.text == "strict") tok = lexer.next();
    if (tok.kind != Token::Id || tok.text != "digraph")
        throw DotParseError("expected 'digraph'", tok.line, tok.column);
    tok = lexer.next();
    if (tok.kind == Token::Id) tok = lexer.next();  // optional graph name
    if (tok.kind != Token::LBrace) throw DotParseError("expected '{'", tok.line, tok.column);

    std::vector<std::string> node_order;  // declaration order, pseudo-nodes excluded
    std::set<std::string> known;
    std::vector<RawEdge> edges;
    std::string initial_name;

    auto declare = [&](const std::string& name) {
        if (is_start_pseudo(name)) return;
        if (known.insert(name).second) node_order.push_back(name);
    };

    auto parse_attrs = [&](std::map<std::string, std::string>& attrs) {
        // caller consumed '['
        for (;;) {
            Token t = lexer.next();
            if (t.kind == Token::RBracket) return;
            if (t.kind == Token::Comma) continue;
            if (t.kind != Token::Id) throw DotParseError("expected attribute name", t.line, t.column);
            Token eq = lexer.next();
            if (eq.kind != Token::Equals) throw DotParseError("expected '='", eq.line, eq.column);
            Token val = lexer.next();
            if (val.kind != Token::Id) throw DotParseError("expected attribute value", val.line, val.column);
            attrs[t.text] = val.text;
        }
    };

    tok = lexer.next();
    for (;;) {
        if (tok.kind == Token::RBrace) break;
        if (tok.kind == Token::End) throw DotParseError("unexpected end of input", tok.line, tok.column);
        if (tok.kind == Token::Semi) {
            tok = lexer.next();
            continue;
        }
        if (tok.kind != Token::Id) throw DotParseError("expected node or edge statement", tok.line, tok.column);
        Token head = tok;
        tok = lexer.next();
        if (tok.kind == Token::Arrow) {
            Token target = lexer.next();
            if (target.kind != Token::Id) throw DotParseError("expected edge target", target.line, target.column);
            std::map<std::string, std::string> attrs;
            tok = lexer.next();
            if (tok.kind == Token::LBracket) {
                parse_attrs(attrs);
                tok = lexer.next();
            }
            if (is_start_pseudo(head.text)) {
                if (!initial_name.empty() && initial_name != target.text)
                    throw DotParseError("conflicting initial-state designations", head.line, head.column);
                initial_name = target.text;
                declare(target.text);
                continue;
            }
            declare(head.text);
            declare(target.text);
            auto it = attrs.find("label");
            if (it == attrs.end())
                throw DotParseError("edge without label", head.line, head.column);
            std::size_t slash = it->second.find('/');
            if (slash == std::string::npos)
                throw DotParseError("edge label is not of the form \"input / output\"", head.line, head.column);
            std::string in = trim(it->second.substr(0, slash));
            std::string out = trim(it->second.substr(slash + 1));
            if (in.empty() || out.empty())
                throw DotParseError("empty input or output in edge label", head.line, head.column);
            edges.push_back({head.text, target.text, in, out, head.line, head.column});
            continue;
        }
        if (tok.kind == Token::Equals) {  // top-level graph attribute, e.g. rankdir=LR
            Token val = lexer.next();
            if (val.kind != Token::Id) throw DotParseError("expected attribute value", val.line, val.column);
            tok = lexer.next();
            continue;
        }
        // node statement (attributes optional); graph/node/edge defaults are ignored
        if (tok.kind == Token::LBracket) {
            std::map<std::string, std::string> attrs;
            parse_attrs(attrs);
            tok = lexer.next();
        }
        if (head.text != "graph" && head.text != "node" && head.text != "edge") declare(head.text);
    }

    if (node_order.empty()) throw DotParseError("no states declared (missing initial)", 1, 1);
    if (initial_name.empty()) initial_name = node_order.front();

    std::vector<std::string> input_syms;
    {
        std::set<std::string> seen;
        for (const auto& e : edges) seen.insert(e.input);
        input_syms.assign(seen.begin(), seen.end());  // lexicographic
    }
    std::map<std::string, int> state_of;
    for (int i = 0; i < static_cast<int>(node_order.size()); ++i) state_of[node_order[i]] = i;
    if (!state_of.count(initial_name))
        throw DotParseError("initial state '" + initial_name + "' is never declared", 1, 1);

    MealyMachine m(input_syms, static_cast<int>(node_order.size()), state_of[initial_name]);
    m.state_names = node_order;
    for (const auto& e : edges) {
        int q = state_of[e.from];
        int i = m.input_index(e.input);
        if (m.defined(q, i))
            throw DotParseError("nondeterministic edge: duplicate (" + e.from + ", " + e.input + ")",
                                e.line, e.column);
        m.set_edge(q, i, state_of[e.to], m.intern_output(e.output));
    }
    return m;
}

namespace {

std::string quote(const std::string& s) {
    std::string r = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') r += '\\';
        r += c;
    }
    r += '"';
    return r;
}

}  // namespace

std::string write_dot(const MealyMachine& m) {
    std::ostringstream os;
    os << "digraph g {\n";
    os << "  __start0 [label=\"\" shape=\"none\"];\n";
    auto name = [&](int q) {
        if (q < static_cast<int>(m.state_names.size()) && !m.state_names[q].empty())
            return m.state_names[q];
        return "s" + std::to_string(q);
    };
    for (int q = 0; q < m.state_count(); ++q)
        os << "  " << quote(name(q)) << " [shape=\"circle\" label=" << quote(name(q)) << "];\n";
    for (int q = 0; q < m.state_count(); ++q)
        for (int i = 0; i < m.input_count(); ++i)
            if (m.defined(q, i))
                os << "  " << quote(name(q)) << " -> " << quote(name(m.next(q, i))) << " [label="
                   << quote(m.input_symbol(i) + " / " + m.output_symbol(m.output(q, i))) << "];\n";
    os << "  __start0 -> " << quote(name(m.initial())) << ";\n";
    os << "}\n";
    return os.str();
}

MealyMachine load_dot_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_dot(buffer.str());
}

void save_dot_file(const MealyMachine& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << write_dot(m);
}

}  // namespace mlearn
