#include "darboux/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "darboux/errors.hpp"

namespace darboux {

class ExpressionParser {
public:
    ExpressionParser(Expression& out, std::string_view text) : out_(out), text_(text) {}

    int parse() {
        const int root = expr();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return root;
    }

private:
    using Op = Expression::Op;

    [[noreturn]] void fail(const std::string& what) const {
        std::ostringstream msg;
        msg << "column " << pos_ + 1 << ": " << what << " in expression \"" << text_ << "\"";
        throw Error(ErrorKind::ParseError, msg.str());
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    int add(Expression::Node node) {
        out_.nodes_.push_back(node);
        return static_cast<int>(out_.nodes_.size()) - 1;
    }

    int binary(Op op, int lhs, int rhs) { return add({op, 0.0, 0, lhs, rhs}); }

    int expr() {
        int lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = binary(Op::Add, lhs, term());
            } else if (accept('-')) {
                lhs = binary(Op::Sub, lhs, term());
            } else {
                return lhs;
            }
        }
    }

    int term() {
        int lhs = unary();
        for (;;) {
            if (accept('*')) {
                lhs = binary(Op::Mul, lhs, unary());
            } else if (accept('/')) {
                lhs = binary(Op::Div, lhs, unary());
            } else {
                return lhs;
            }
        }
    }

    int unary() {
        if (accept('-')) return add({Op::Neg, 0.0, 0, unary(), -1});
        if (accept('+')) return unary();
        return primary();
    }

    int primary() {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        const char c = text_[pos_];
        if (accept('(')) {
            const int inner = expr();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
        fail("unexpected '" + std::string(1, c) + "'");
    }

    int number() {
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc() || ptr == begin) fail("malformed number");
        pos_ += static_cast<std::size_t>(ptr - begin);
        return add({Op::Constant, value, 0, -1, -1});
    }

    int name() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        const std::string id(text_.substr(start, pos_ - start));
        const auto call = [&](Op op) {
            if (!accept('(')) fail("expected '(' after " + id);
            const int arg = expr();
            if (!accept(')')) fail("expected ')'");
            return add({op, 0.0, 0, arg, -1});
        };
        if (id == "sin") return call(Op::Sin);
        if (id == "cos") return call(Op::Cos);
        if (id == "exp") return call(Op::Exp);
        if (id == "pi") return add({Op::Constant, std::numbers::pi, 0, -1, -1});
        for (std::size_t i = 0; i < out_.variables_.size(); ++i) {
            if (out_.variables_[i] == id) return add({Op::Variable, 0.0, i, -1, -1});
        }
        pos_ = start;
        fail("unknown name '" + id + "'");
    }

    Expression& out_;
    std::string_view text_;
    std::size_t pos_ = 0;
};

Expression Expression::parse(std::string_view text, std::vector<std::string> variables) {
    Expression e;
    e.text_ = std::string(text);
    e.variables_ = std::move(variables);
    ExpressionParser parser(e, e.text_);
    e.root_ = parser.parse();
    return e;
}

double Expression::evaluate(std::span<const double> values) const {
    if (values.size() != variables_.size()) throw Error(ErrorKind::ValidationError, "wrong number of variable values");
    return eval(root_, values);
}

bool Expression::uses(std::size_t index) const {
    for (const Node& n : nodes_) {
        if (n.op == Op::Variable && n.variable == index) return true;
    }
    return false;
}

double Expression::eval(int node, std::span<const double> values) const {
    const Node& n = nodes_[static_cast<std::size_t>(node)];
    switch (n.op) {
        case Op::Constant: return n.value;
        case Op::Variable: return values[n.variable];
        case Op::Add: return eval(n.lhs, values) + eval(n.rhs, values);
        case Op::Sub: return eval(n.lhs, values) - eval(n.rhs, values);
        case Op::Mul: return eval(n.lhs, values) * eval(n.rhs, values);
        case Op::Div: return eval(n.lhs, values) / eval(n.rhs, values);
        case Op::Neg: return -eval(n.lhs, values);
        case Op::Sin: return std::sin(eval(n.lhs, values));
        case Op::Cos: return std::cos(eval(n.lhs, values));
        case Op::Exp: return std::exp(eval(n.lhs, values));
    }
    return 0.0;
}

const std::vector<std::string>& flow_variables() {
    static const std::vector<std::string> names{"s", "t", "kg", "kn", "taug", "L"};
    return names;
}

const std::vector<std::string>& height_variables() {
    static const std::vector<std::string> names{"u", "v"};
    return names;
}

}  // namespace darboux
