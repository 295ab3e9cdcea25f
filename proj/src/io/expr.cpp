#include "obslab/io/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace obslab {

namespace {

struct Token {
    enum Kind { Number, Ident, Symbol, End } kind{End};
    double value{0.0};
    std::string text;
};

std::vector<Token> tokenize(const std::string& src) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            char* end = nullptr;
            const double v = std::strtod(src.c_str() + i, &end);
            out.push_back({Token::Number, v, {}});
            i = static_cast<size_t>(end - src.c_str());
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i;
            while (j < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
                ++j;
            out.push_back({Token::Ident, 0.0, src.substr(i, j - i)});
            i = j;
        } else if (std::string("+-*/^(),").find(c) != std::string::npos) {
            out.push_back({Token::Symbol, 0.0, std::string(1, c)});
            ++i;
        } else {
            throw std::invalid_argument(std::string("expression: stray character '") +
                                        c + "'");
        }
    }
    out.push_back({});
    return out;
}

class Parser {
public:
    explicit Parser(const std::string& src) : toks_(tokenize(src)) {}

    ScalarFn parse() {
        ScalarFn e = expr();
        if (toks_[pos_].kind != Token::End)
            throw std::invalid_argument("expression: trailing input");
        return e;
    }

private:
    std::vector<Token> toks_;
    size_t pos_{0};

    const Token& peek() const { return toks_[pos_]; }
    bool eat_symbol(const char* s) {
        if (peek().kind == Token::Symbol && peek().text == s) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect_symbol(const char* s) {
        if (!eat_symbol(s))
            throw std::invalid_argument(std::string("expression: expected '") + s + "'");
    }

    ScalarFn expr() {
        ScalarFn lhs = term();
        for (;;) {
            if (eat_symbol("+")) {
                ScalarFn rhs = term();
                lhs = [lhs, rhs](const Vec& x) { return lhs(x) + rhs(x); };
            } else if (eat_symbol("-")) {
                ScalarFn rhs = term();
                lhs = [lhs, rhs](const Vec& x) { return lhs(x) - rhs(x); };
            } else {
                return lhs;
            }
        }
    }

    ScalarFn term() {
        ScalarFn lhs = unary();
        for (;;) {
            if (eat_symbol("*")) {
                ScalarFn rhs = unary();
                lhs = [lhs, rhs](const Vec& x) { return lhs(x) * rhs(x); };
            } else if (eat_symbol("/")) {
                ScalarFn rhs = unary();
                lhs = [lhs, rhs](const Vec& x) { return lhs(x) / rhs(x); };
            } else {
                return lhs;
            }
        }
    }

    ScalarFn unary() {
        if (eat_symbol("-")) {
            ScalarFn inner = unary();
            return [inner](const Vec& x) { return -inner(x); };
        }
        return power();
    }

    ScalarFn power() {
        ScalarFn base = atom();
        if (eat_symbol("^")) {
            ScalarFn exp = unary();  // right-associative
            return [base, exp](const Vec& x) { return std::pow(base(x), exp(x)); };
        }
        return base;
    }

    ScalarFn call(const std::string& name) {
        expect_symbol("(");
        std::vector<ScalarFn> args;
        if (!eat_symbol(")")) {
            args.push_back(expr());
            while (eat_symbol(",")) args.push_back(expr());
            expect_symbol(")");
        }
        auto arity = [&](size_t n) {
            if (args.size() != n)
                throw std::invalid_argument("expression: " + name + " takes " +
                                            std::to_string(n) + " argument(s)");
        };
        if (name == "abs") {
            arity(1);
            ScalarFn a = args[0];
            return [a](const Vec& x) { return std::abs(a(x)); };
        }
        if (name == "sqrt") {
            arity(1);
            ScalarFn a = args[0];
            return [a](const Vec& x) { return std::sqrt(a(x)); };
        }
        if (name == "step") {
            arity(1);
            ScalarFn a = args[0];
            return [a](const Vec& x) { return a(x) > 0.0 ? 1.0 : 0.0; };
        }
        if (name == "pow") {
            arity(2);
            ScalarFn a = args[0], b = args[1];
            return [a, b](const Vec& x) { return std::pow(a(x), b(x)); };
        }
        if (name == "pospow") {
            arity(2);
            ScalarFn a = args[0], b = args[1];
            return [a, b](const Vec& x) {
                const double s = a(x);
                return s <= 0.0 ? 0.0 : std::pow(s, b(x));
            };
        }
        if (name == "min") {
            arity(2);
            ScalarFn a = args[0], b = args[1];
            return [a, b](const Vec& x) { return std::min(a(x), b(x)); };
        }
        if (name == "max") {
            arity(2);
            ScalarFn a = args[0], b = args[1];
            return [a, b](const Vec& x) { return std::max(a(x), b(x)); };
        }
        throw std::invalid_argument("expression: unknown function " + name);
    }

    ScalarFn atom() {
        const Token t = peek();
        if (t.kind == Token::Number) {
            ++pos_;
            const double v = t.value;
            return [v](const Vec&) { return v; };
        }
        if (t.kind == Token::Ident) {
            ++pos_;
            if (peek().kind == Token::Symbol && peek().text == "(") return call(t.text);
            if (t.text == "x1") return [](const Vec& x) { return x[0]; };
            if (t.text == "x2") return [](const Vec& x) { return x[1]; };
            if (t.text == "x3") return [](const Vec& x) { return x[2]; };
            if (t.text == "r") return [](const Vec& x) { return x.norm(); };
            throw std::invalid_argument("expression: unknown variable " + t.text);
        }
        if (t.kind == Token::Symbol && t.text == "(") {
            ++pos_;
            ScalarFn inner = expr();
            expect_symbol(")");
            return inner;
        }
        throw std::invalid_argument("expression: unexpected token");
    }
};

}  // namespace

ScalarFn parse_expression(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("expression: empty string");
    return Parser(text).parse();
}

}  // namespace obslab
