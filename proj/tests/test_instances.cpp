#include <doctest.h>

#include <cmath>
#include <limits>

#include "instances.hpp"
#include "laws.hpp"

using namespace ow;

TEST_CASE("codecs round trip") {
    for (const auto& name : instance_names()) {
        auto c = make_instance(name);
        Rng rng(11);
        for (int i = 0; i < 100; ++i) {
            Value x = c->sample(rng);
            CAPTURE(name);
            CAPTURE(c->show(x));
            CHECK(c->eq(c->read(c->show(x)), x));
        }
    }
}

TEST_CASE("unknown instances are rejected") {
    CHECK_THROWS_AS(make_instance("nosuch"), DomainError);
    CHECK_THROWS_AS(make_scalar_pair("nat"), DomainError);
}

TEST_CASE("min-plus tables") {
    auto c = make_instance("minplus", {{"cap", 100}});
    auto v = [&](const char* t) { return c->read(t); };
    CHECK(c->add(v("3"), v("5")).i == 3);
    CHECK(c->mul(v("3"), v("5")).i == 8);
    CHECK(c->mul(v("60"), v("70")).i == 100);  // capped
    CHECK(c->is_zero(c->mul(v("inf"), v("1"))));
    CHECK(c->unit().i == 0);
    CHECK(c->show(c->zero()) == "inf");
}

TEST_CASE("lattice of subsets") {
    auto c = make_instance("lattice", {{"base", 2}});
    REQUIRE(c->elements());
    CHECK(c->elements()->size() == 4);
    const auto elems = *c->elements();
    for (const auto& x : elems) {
        CAPTURE(c->show(x));
        CHECK(c->eq(c->star(x), c->unit()));
        CHECK(c->eq(c->plus(x), x));
        CHECK(c->eq(c->mul(x, x), x));
    }
}

TEST_CASE("nat has no star but is a semiring") {
    auto c = make_instance("nat");
    CHECK_FALSE(c->has_star());
    CHECK(c->add(Value::I(2), Value::I(3)).i == 5);
    CHECK(c->mul(Value::I(2), Value::I(3)).i == 6);
    CHECK(c->nat_scale(4, Value::I(3)).i == 12);
}

TEST_CASE("extended reals") {
    auto c = make_instance("extreal");
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(c->is_zero(Value::R(-inf)));
    CHECK(c->add(Value::R(1.5), Value::R(2.0)).r == 2.0);
    CHECK(c->is_zero(c->mul(Value::R(-inf), Value::R(3.0))));
    CHECK(read_real("inf") == inf);
    CHECK(read_real("-inf") == -inf);
    CHECK(read_real(show_real(0.1)) == doctest::Approx(0.1));
}

TEST_CASE("scalar pairs") {
    auto p = make_scalar_pair("minplus");
    CHECK(p->omega(Value::I(0)).i == 0);
    CHECK(p->omega(Value::I(3)).i == kMinPlusInf);
    auto b = make_scalar_pair("bool");
    CHECK(b->omega(Value::I(1)).i == 1);
}
