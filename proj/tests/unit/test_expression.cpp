#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "darboux/errors.hpp"
#include "darboux/expression.hpp"

using namespace darboux;

namespace {

double eval(const std::string& text, std::vector<double> values = {0, 0, 0, 0, 0, 0}) {
    return Expression::parse(text, flow_variables()).evaluate(values);
}

std::string parse_failure(const std::string& text) {
    try {
        (void)Expression::parse(text, flow_variables());
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ParseError);
        return e.detail();
    }
    FAIL("expected ParseError for " << text);
    return {};
}

}  // namespace

TEST_SUITE("expression") {

TEST_CASE("precedence and associativity") {
    CHECK(eval("1 + 2 * 3") == 7);
    CHECK(eval("(1 + 2) * 3") == 9);
    CHECK(eval("8 / 4 / 2") == 1);
    CHECK(eval("10 - 4 - 3") == 3);
    CHECK(eval("-2 * -3") == 6);
    CHECK(eval("--1") == 1);
    CHECK(eval("+4") == 4);
    CHECK(eval("2.5e-1 * 4") == 1);
}

TEST_CASE("functions, constants and variables") {
    CHECK(eval("sin(pi / 2)") == doctest::Approx(1.0));
    CHECK(eval("cos(0) + exp(0)") == 2);
    const std::vector<double> v{0.5, 2.0, 3.0, -1.0, 0.25, 8.0};
    CHECK(eval("s + t * kg", v) == 6.5);
    CHECK(eval("kn * taug", v) == -0.25);
    CHECK(eval("sin(2 * pi * s / L)", v) == doctest::Approx(std::sin(std::numbers::pi / 8)));
}

TEST_CASE("variable usage") {
    const auto e = Expression::parse("kg * 2", flow_variables());
    CHECK(e.uses(2));
    CHECK_FALSE(e.uses(0));
    CHECK(e.text() == "kg * 2");
}

TEST_CASE("height variables") {
    const auto e = Expression::parse("u*u - v", height_variables());
    const double values[] = {3.0, 1.0};
    CHECK(e.evaluate(values) == 8);
}

TEST_CASE("errors carry the column") {
    CHECK(parse_failure("1 +").find("column 4") != std::string::npos);
    CHECK(parse_failure("sin(s").find("expected ')'") != std::string::npos);
    CHECK(parse_failure("s + q").find("column 5: unknown name 'q'") != std::string::npos);
    CHECK(parse_failure("2 $ 3").find("column 3") != std::string::npos);
    CHECK(parse_failure("tan(s)").find("unknown name 'tan'") != std::string::npos);
    CHECK(parse_failure("").find("unexpected end") != std::string::npos);
    CHECK(parse_failure("sin s").find("expected '('") != std::string::npos);
}

TEST_CASE("wrong number of values") {
    const auto e = Expression::parse("s", flow_variables());
    const double one[] = {1.0};
    CHECK_THROWS_AS((void)e.evaluate(one), Error);
}

}
