#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace darboux {

/// Arithmetic expression over a fixed list of variable names.
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('+' | '-') unary | primary
///   primary := number | 'pi' | variable | func '(' expr ')' | '(' expr ')'
///   func    := 'sin' | 'cos' | 'exp'
///
/// Parse failures raise ParseError with the 1-based column.
class Expression {
public:
    static Expression parse(std::string_view text, std::vector<std::string> variables);

    /// `values` follows the order of the variable list given to parse().
    [[nodiscard]] double evaluate(std::span<const double> values) const;

    [[nodiscard]] const std::string& text() const { return text_; }
    [[nodiscard]] const std::vector<std::string>& variables() const { return variables_; }
    /// Whether the expression mentions the variable at `index`.
    [[nodiscard]] bool uses(std::size_t index) const;

private:
    enum class Op { Constant, Variable, Add, Sub, Mul, Div, Neg, Sin, Cos, Exp };
    struct Node {
        Op op = Op::Constant;
        double value = 0.0;
        std::size_t variable = 0;
        int lhs = -1;
        int rhs = -1;
    };
    friend class ExpressionParser;

    [[nodiscard]] double eval(int node, std::span<const double> values) const;

    std::string text_;
    std::vector<std::string> variables_;
    std::vector<Node> nodes_;
    int root_ = -1;
};

/// Variable order for flow coefficients: s, t, kg, kn, taug, L (curve length).
[[nodiscard]] const std::vector<std::string>& flow_variables();
/// Variable order for Monge height fields: u, v.
[[nodiscard]] const std::vector<std::string>& height_variables();

}  // namespace darboux
