#include "brach/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <vector>

#include "brach/errors.hpp"
#include "brach/numeric.hpp"

namespace brach::expr {

namespace {

struct Node {
    enum class Kind { number, variable, unary_minus, add, sub, mul, div, pow, call } kind;
    double value = 0.0;
    double (*fn)(double) = nullptr;
    std::unique_ptr<Node> lhs, rhs;

    double eval(double u) const {
        switch (kind) {
            case Kind::number: return value;
            case Kind::variable: return u;
            case Kind::unary_minus: return -lhs->eval(u);
            case Kind::add: return lhs->eval(u) + rhs->eval(u);
            case Kind::sub: return lhs->eval(u) - rhs->eval(u);
            case Kind::mul: return lhs->eval(u) * rhs->eval(u);
            case Kind::div: return lhs->eval(u) / rhs->eval(u);
            case Kind::pow: return std::pow(lhs->eval(u), rhs->eval(u));
            case Kind::call: return fn(lhs->eval(u));
        }
        return 0.0;
    }
};

using NodePtr = std::unique_ptr<Node>;

NodePtr make(Node::Kind k, NodePtr l = nullptr, NodePtr r = nullptr) {
    auto n = std::make_unique<Node>();
    n->kind = k;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
}

class Parser {
  public:
    explicit Parser(const std::string& text) : s_(text) {}

    NodePtr run() {
        auto n = sum();
        skip_ws();
        if (pos_ != s_.size()) fail("trailing characters");
        return n;
    }

  private:
    const std::string& s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) {
        raise(Errc::parse_error, "expression '" + s_ + "' at position " + std::to_string(pos_) +
                                     ": " + what);
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool consume(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    NodePtr sum() {
        auto n = product();
        for (;;) {
            if (consume('+')) {
                n = make(Node::Kind::add, std::move(n), product());
            } else if (consume('-')) {
                n = make(Node::Kind::sub, std::move(n), product());
            } else {
                return n;
            }
        }
    }

    NodePtr product() {
        auto n = power();
        for (;;) {
            if (consume('*')) {
                n = make(Node::Kind::mul, std::move(n), power());
            } else if (consume('/')) {
                n = make(Node::Kind::div, std::move(n), power());
            } else {
                return n;
            }
        }
    }

    NodePtr power() {
        auto base = atom();
        if (consume('^')) return make(Node::Kind::pow, std::move(base), power());
        return base;
    }

    NodePtr atom() {
        skip_ws();
        if (consume('-')) return make(Node::Kind::unary_minus, atom());
        if (consume('(')) {
            auto n = sum();
            if (!consume(')')) fail("expected ')'");
            return n;
        }
        const char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        fail("expected a value");
    }

    NodePtr number() {
        const char* begin = s_.c_str() + pos_;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) fail("bad number");
        pos_ += static_cast<std::size_t>(end - begin);
        auto n = make(Node::Kind::number);
        n->value = v;
        return n;
    }

    NodePtr identifier() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        const std::string name = s_.substr(start, pos_ - start);
        if (name == "u") return make(Node::Kind::variable);
        if (name == "pi") {
            auto n = make(Node::Kind::number);
            n->value = numeric::pi;
            return n;
        }
        double (*fn)(double) = nullptr;
        if (name == "cos") fn = [](double x) { return std::cos(x); };
        else if (name == "sin") fn = [](double x) { return std::sin(x); };
        else if (name == "cosh") fn = [](double x) { return std::cosh(x); };
        else if (name == "sinh") fn = [](double x) { return std::sinh(x); };
        else if (name == "exp") fn = [](double x) { return std::exp(x); };
        else if (name == "sqrt") fn = [](double x) { return std::sqrt(x); };
        else if (name == "log") fn = [](double x) { return std::log(x); };
        else fail("unknown identifier '" + name + "'");
        if (!consume('(')) fail("expected '(' after function name");
        auto arg = sum();
        if (!consume(')')) fail("expected ')'");
        auto n = make(Node::Kind::call, std::move(arg));
        n->fn = fn;
        return n;
    }
};

}  // namespace

std::function<double(double)> parse_unary(const std::string& text) {
    Parser parser(text);
    std::shared_ptr<Node> root(parser.run().release());
    return [root](double u) { return root->eval(u); };
}

}  // namespace brach::expr
