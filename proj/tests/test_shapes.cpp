#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>

#include "fixtime/numerics.hpp"
#include "fixtime/shapes.hpp"

using namespace fixtime;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

bool message_contains(const std::exception& e, const char* needle) {
    return std::string(e.what()).find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("registry shapes validate and evaluate") {
    for (const char* name : {"id", "log1p", "sqrt", "pow:0.3", "pow:2.5"}) {
        const ShapeFn s = make_shape(name);
        CHECK_NOTHROW(validate_shape(s));
        CHECK(s.domain_sup == inf);
        CHECK(s.range_sup == inf);
    }

    const ShapeFn id = make_shape("id");
    CHECK(id.value(3.25) == 3.25);
    CHECK(id.deriv(7.0) == 1.0);
    CHECK(id.inverse(0.5) == 0.5);

    const ShapeFn lg = make_shape("log1p");
    CHECK(std::abs(lg.value(1.0) - std::log(2.0)) <= 1e-15);
    CHECK(std::abs(lg.deriv(1.0) - 0.5) <= 1e-15);
    CHECK(std::abs(lg.inverse(std::log(2.0)) - 1.0) <= 1e-15);

    const ShapeFn sq = make_shape("sqrt");
    CHECK(std::abs(sq.value(4.0) - 2.0) <= 1e-15);
    CHECK(std::abs(sq.deriv(4.0) - 0.25) <= 1e-15);
    CHECK(std::abs(sq.inverse(2.0) - 4.0) <= 1e-15);

    const ShapeFn pw = make_shape("pow:2.5");
    CHECK(std::abs(pw.value(2.0) - std::pow(2.0, 2.5)) <= 1e-12);
    CHECK(std::abs(pw.deriv(2.0) - 2.5 * std::pow(2.0, 1.5)) <= 1e-12);
    CHECK(std::abs(pw.inverse(std::pow(2.0, 2.5)) - 2.0) <= 1e-12);
}

TEST_CASE("ramp is the K_{T_c}^1 profile") {
    const ShapeFn r = make_shape("ramp", 2.0);
    CHECK_NOTHROW(validate_shape(r));
    CHECK(r.domain_sup == 2.0);
    CHECK(r.range_sup == 1.0);
    CHECK(r.value(1.0) == 0.5);
    CHECK(r.deriv(0.3) == 0.5);
    CHECK(r.inverse(0.25) == 0.5);
    CHECK_THROWS_AS(make_shape("ramp", 0.0), ValidationError);
}

TEST_CASE("make_shape rejects bad names and exponents") {
    CHECK_THROWS_AS(make_shape("pow:0"), ValidationError);
    CHECK_THROWS_AS(make_shape("pow:-1"), ValidationError);
    CHECK_THROWS_AS(make_shape("pow:abc"), ValidationError);
    try {
        make_shape("cubic");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(message_contains(e, "registry"));
    }
}

TEST_CASE("validate_shape names the broken property") {
    ShapeFn s = make_shape("id");

    SUBCASE("missing callable") {
        s.deriv = nullptr;
        try {
            validate_shape(s);
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(message_contains(e, "missing callable"));
        }
    }

    SUBCASE("nonzero at the origin") {
        s.value = [](double z) { return z + 1.0; };
        try {
            validate_shape(s);
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(message_contains(e, "value(0)"));
        }
    }

    SUBCASE("not increasing") {
        s.value = [](double z) { return -z; };
        try {
            validate_shape(s);
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(message_contains(e, "increasing"));
        }
    }

    SUBCASE("derivative not positive") {
        s.deriv = [](double) { return 0.0; };
        try {
            validate_shape(s);
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(message_contains(e, "deriv"));
        }
    }

    SUBCASE("inverse mismatch") {
        s.inverse = [](double u) { return 2.0 * u; };
        try {
            validate_shape(s);
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(message_contains(e, "roundtrip"));
        }
    }

    SUBCASE("mislabeled finite range bound") {
        ShapeFn r = make_shape("ramp", 2.0);
        r.range_sup = 0.5;
        try {
            validate_shape(r);
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(message_contains(e, "range_sup"));
        }
    }
}
