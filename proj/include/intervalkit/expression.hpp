#ifndef INTERVALKIT_EXPRESSION_HPP
#define INTERVALKIT_EXPRESSION_HPP

#include <cctype>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include "intervalkit/errors.hpp"
#include "intervalkit/special_functions.hpp"

namespace intervalkit {

/// Compiles a restricted arithmetic expression in the variable x into a
/// callable. Grammar: operators + - * / ^ (right-associative power), unary
/// minus, parentheses, functions exp/log/sqrt, constants pi and e, decimal
/// literals. Anything else is rejected; this is deliberately not a general
/// interpreter.
class Expression {
public:
    static Expression parse(std::string_view text) {
        Parser p{text, 0};
        Expression e;
        e.root_ = p.parse_sum();
        p.skip_ws();
        if (p.pos != text.size())
            throw DomainError("expression: unexpected trailing input at position " +
                              std::to_string(p.pos));
        return e;
    }

    double operator()(double x) const { return root_->eval(x); }

private:
    struct Node {
        virtual ~Node() = default;
        virtual double eval(double x) const = 0;
    };
    using NodePtr = std::unique_ptr<Node>;

    struct Const : Node {
        double v;
        explicit Const(double v) : v(v) {}
        double eval(double) const override { return v; }
    };
    struct Var : Node {
        double eval(double x) const override { return x; }
    };
    struct Unary : Node {
        double (*fn)(double);
        NodePtr arg;
        Unary(double (*fn)(double), NodePtr a) : fn(fn), arg(std::move(a)) {}
        double eval(double x) const override { return fn(arg->eval(x)); }
    };
    struct Binary : Node {
        char op;
        NodePtr lhs, rhs;
        Binary(char op, NodePtr l, NodePtr r) : op(op), lhs(std::move(l)), rhs(std::move(r)) {}
        double eval(double x) const override {
            const double a = lhs->eval(x);
            const double b = rhs->eval(x);
            switch (op) {
                case '+': return a + b;
                case '-': return a - b;
                case '*': return a * b;
                case '/': return a / b;
                case '^': return std::pow(a, b);
            }
            return 0.0;
        }
    };

    struct Parser {
        std::string_view text;
        std::size_t pos;

        void skip_ws() {
            while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
                ++pos;
        }
        bool consume(char c) {
            skip_ws();
            if (pos < text.size() && text[pos] == c) {
                ++pos;
                return true;
            }
            return false;
        }
        [[noreturn]] void fail(const std::string& why) const {
            throw DomainError("expression: " + why + " at position " + std::to_string(pos));
        }

        NodePtr parse_sum() {
            NodePtr lhs = parse_product();
            for (;;) {
                if (consume('+'))
                    lhs = std::make_unique<Binary>('+', std::move(lhs), parse_product());
                else if (consume('-'))
                    lhs = std::make_unique<Binary>('-', std::move(lhs), parse_product());
                else
                    return lhs;
            }
        }

        NodePtr parse_product() {
            NodePtr lhs = parse_unary();
            for (;;) {
                if (consume('*'))
                    lhs = std::make_unique<Binary>('*', std::move(lhs), parse_unary());
                else if (consume('/'))
                    lhs = std::make_unique<Binary>('/', std::move(lhs), parse_unary());
                else
                    return lhs;
            }
        }

        NodePtr parse_unary() {
            if (consume('-'))
                return std::make_unique<Binary>('-', std::make_unique<Const>(0.0), parse_unary());
            if (consume('+'))
                return parse_unary();
            return parse_power();
        }

        NodePtr parse_power() {
            NodePtr base = parse_atom();
            if (consume('^'))
                return std::make_unique<Binary>('^', std::move(base), parse_unary());
            return base;
        }

        NodePtr parse_atom() {
            skip_ws();
            if (pos >= text.size()) fail("unexpected end of input");
            const char c = text[pos];
            if (c == '(') {
                ++pos;
                NodePtr inner = parse_sum();
                if (!consume(')')) fail("missing ')'");
                return inner;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
                return parse_number();
            if (std::isalpha(static_cast<unsigned char>(c)))
                return parse_name();
            fail(std::string("unexpected character '") + c + "'");
        }

        NodePtr parse_number() {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(std::string(text.substr(pos)), &used);
            } catch (const std::exception&) {
                fail("bad numeric literal");
            }
            pos += used;
            return std::make_unique<Const>(v);
        }

        NodePtr parse_name() {
            const std::size_t start = pos;
            while (pos < text.size() &&
                   std::isalnum(static_cast<unsigned char>(text[pos])))
                ++pos;
            const std::string_view name = text.substr(start, pos - start);
            if (name == "x") return std::make_unique<Var>();
            if (name == "pi") return std::make_unique<Const>(pi);
            if (name == "e") return std::make_unique<Const>(2.718281828459045235360287);
            if (name == "exp" || name == "log" || name == "sqrt") {
                if (!consume('(')) fail("function '" + std::string(name) + "' needs '('");
                NodePtr arg = parse_sum();
                if (!consume(')')) fail("missing ')'");
                double (*fn)(double) = name == "exp"   ? static_cast<double (*)(double)>(std::exp)
                                       : name == "log" ? static_cast<double (*)(double)>(std::log)
                                                       : static_cast<double (*)(double)>(std::sqrt);
                return std::make_unique<Unary>(fn, std::move(arg));
            }
            fail("unknown identifier '" + std::string(name) + "'");
        }
    };

    std::shared_ptr<const Node> root_;
};

} // namespace intervalkit

#endif // INTERVALKIT_EXPRESSION_HPP
