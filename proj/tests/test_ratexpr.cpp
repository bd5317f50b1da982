#include <doctest.h>

#include "instances.hpp"
#include "ratexpr.hpp"

using namespace ow;

namespace {

MultiPtr nat_multi() { return std::make_shared<CarrierMulti>(nat_carrier()); }

// Oracle: coefficients of finitary expressions in nat by direct recursion on the syntax.
std::int64_t oracle(const ExprPtr& e, const Word& w) {
    using K = ExprNode::Kind;
    if (w.empty()) return 0;
    switch (e->kind) {
        case K::Zero:
            return 0;
        case K::Letter:
            return w.size() == 1 && w[0] == e->letter ? 1 : 0;
        case K::Scalar:
            return static_cast<std::int64_t>(e->n) * oracle(e->a, w);
        case K::Sum:
            return oracle(e->a, w) + oracle(e->b, w);
        case K::Prod: {
            std::int64_t s = 0;
            for (std::size_t k = 1; k < w.size(); ++k) s += oracle(e->a, w.substr(0, k)) * oracle(e->b, w.substr(k));
            return s;
        }
        case K::Plus: {
            std::int64_t s = oracle(e->a, w);
            for (std::size_t k = 1; k < w.size(); ++k) s += oracle(e->a, w.substr(0, k)) * oracle(e, w.substr(k));
            return s;
        }
        default:
            FAIL("omega node in finitary oracle");
            return 0;
    }
}

std::vector<Word> words_upto(std::size_t n) {
    std::vector<Word> out;
    std::vector<Word> layer = {""};
    for (std::size_t len = 1; len <= n; ++len) {
        std::vector<Word> next;
        for (const auto& w : layer) {
            next.push_back(w + 'a');
            next.push_back(w + 'b');
        }
        out.insert(out.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    return out;
}

}  // namespace

TEST_CASE("parsing and printing") {
    CHECK(print_expr(parse_expr("a")) == "a");
    CHECK(print_expr(parse_expr("(a+b)(ab)^w")) == "(a + b)(ab)^w");
    CHECK(print_expr(parse_expr("  a  b ")) == "ab");
    CHECK(print_expr(parse_expr("(2a)^+")) == "2a^+");
    CHECK(print_expr(parse_expr("2(a^+)")) == "2(a^+)");
    CHECK(print_expr(parse_expr("2a^w")) == "2a^w");
    CHECK(is_omega(parse_expr("2a^w")));
    CHECK(print_expr(parse_expr("a^w + b^w")) == "a^w + b^w");
    CHECK(print_expr(parse_expr("a(b+a)")) == "a(b + a)");
    CHECK(print_expr(parse_expr("a^+^+")) == "a^+^+");
    CHECK(print_expr(parse_expr("0 + a")) == "a");
    CHECK(print_expr(parse_expr("3(ab)")) == "3(ab)");
    CHECK(is_omega(parse_expr("a b^w")));
    CHECK_FALSE(is_omega(parse_expr("a b^+")));
}

TEST_CASE("parse errors carry a position") {
    for (std::string bad : {"", "a+", "(a", "a)", "a^", "a^x", "A", "a^w b", "a^w + b", "a^w^w", "(a^w)^+",
                            "a + + b"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(parse_expr(bad), ParseError);
    }
    try {
        parse_expr("ab)");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("position 2") != std::string::npos);
    }
}

TEST_CASE("print then parse is the identity on random expressions") {
    Rng rng(61);
    Alphabet ab{"ab"};
    for (int t = 0; t < 1000; ++t) {
        auto kind = t % 2 == 0 ? ExprKind::Finitary : ExprKind::Omega;
        auto e = random_expr(rng, 1 + rng() % 4, kind, ab);
        std::string s = print_expr(e);
        CAPTURE(s);
        auto back = parse_expr(s);
        CHECK(print_expr(back) == s);
        CHECK(expr_size(back) == expr_size(e));
        CHECK(is_omega(back) == (kind == ExprKind::Omega));
    }
}

TEST_CASE("random expressions are deterministic per seed") {
    Alphabet ab{"ab"};
    Rng r1(5);
    Rng r2(5);
    for (int t = 0; t < 50; ++t) {
        CHECK(print_expr(random_expr(r1, 3, ExprKind::Omega, ab)) ==
              print_expr(random_expr(r2, 3, ExprKind::Omega, ab)));
    }
    Rng r3(1);
    CHECK(print_expr(random_expr(r3, 1, ExprKind::Omega, ab)).find("^w") != std::string::npos);
    CHECK_THROWS_AS(random_expr(r3, 0, ExprKind::Finitary, ab), DomainError);
}

TEST_CASE("evaluation matches a recursive coefficient oracle") {
    auto d = nat_multi();
    Rng rng(62);
    Alphabet ab{"ab"};
    auto words = words_upto(6);
    for (int t = 0; t < 150; ++t) {
        auto e = random_expr(rng, 1 + rng() % 4, ExprKind::Finitary, ab);
        auto s = eval_fin(*d, e);
        CAPTURE(print_expr(e));
        for (const auto& w : words) CHECK(coeff(*d, s, w).i == oracle(e, w));
    }
}

TEST_CASE("structural omega semantics") {
    auto d = std::make_shared<CarrierMulti>(bool_carrier());
    auto v = eval_omega_support(*d, parse_expr("(a + b)^+ (ab)^w"));
    CHECK(lasso_member(*d, v, OmegaWord::parse("b(ab)^w")));
    CHECK(lasso_member(*d, v, OmegaWord::parse("(ab)^w")));
    CHECK_FALSE(lasso_member(*d, v, OmegaWord::parse("a^w")));
    CHECK_THROWS_AS(eval_omega_support(*d, parse_expr("a")), DomainError);
}

TEST_CASE("constructors fold zero") {
    CHECK(is_zero_expr(ex_prod(ex_letter('a'), ex_zero())));
    CHECK(is_zero_expr(ex_plus(ex_zero())));
    CHECK(is_zero_expr(ex_scalar(0, ex_letter('a'))));
    CHECK(print_expr(ex_sum(ex_zero(), ex_letter('b'))) == "b");
    CHECK(print_expr(ex_act(ex_letter('a'), ex_omega(ex_letter('b')))) == "ab^w");
    CHECK_THROWS_AS(ex_plus(ex_omega(ex_letter('a'))), ParseError);
}
