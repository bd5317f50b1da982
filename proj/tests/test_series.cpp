#include <doctest.h>

#include <set>

#include "instances.hpp"
#include "series.hpp"

using namespace ow;

namespace {

std::shared_ptr<const MultiHemiring> nat_multi() { return std::make_shared<CarrierMulti>(nat_carrier()); }
std::shared_ptr<const MultiHemiring> bool_multi() { return std::make_shared<CarrierMulti>(bool_carrier()); }

// Coefficient of a polynomial given as a map.
std::int64_t poly_at(const std::map<Word, std::int64_t>& p, const Word& w) {
    auto it = p.find(w);
    return it == p.end() ? 0 : it->second;
}

// Oracle: sum over all factorizations w = uv with u, v nonempty.
std::int64_t product_oracle(const std::map<Word, std::int64_t>& f, const std::map<Word, std::int64_t>& g,
                            const Word& w) {
    std::int64_t s = 0;
    for (std::size_t k = 1; k < w.size(); ++k) s += poly_at(f, w.substr(0, k)) * poly_at(g, w.substr(k));
    return s;
}

// Oracle: sum over all factorizations into nonempty pieces, by recursion on the first piece.
std::int64_t plus_oracle(const std::map<Word, std::int64_t>& f, const Word& w) {
    if (w.empty()) return 0;
    std::int64_t s = poly_at(f, w);
    for (std::size_t k = 1; k < w.size(); ++k) s += poly_at(f, w.substr(0, k)) * plus_oracle(f, w.substr(k));
    return s;
}

std::map<Word, std::int64_t> random_poly(Rng& rng) {
    std::map<Word, std::int64_t> p;
    const char* letters = "ab";
    int terms = 1 + static_cast<int>(rng() % 3);
    for (int t = 0; t < terms; ++t) {
        Word w;
        std::size_t len = 1 + rng() % 3;
        for (std::size_t i = 0; i < len; ++i) w += letters[rng() % 2];
        p[w] = 1 + static_cast<std::int64_t>(rng() % 3);
    }
    return p;
}

SeriesPtr to_series(const std::map<Word, std::int64_t>& p) {
    std::map<Word, Value> terms;
    for (const auto& [w, c] : p) terms[w] = Value::I(c);
    return polynomial(std::move(terms));
}

}  // namespace

TEST_CASE("Cauchy product and plus match factorization oracles") {
    auto d = nat_multi();
    Rng rng(8);
    WordSpace ws = WordSpace::all_words(Alphabet{"ab"}, 6);
    for (int t = 0; t < 50; ++t) {
        auto f = random_poly(rng);
        auto g = random_poly(rng);
        auto prod = cauchy_mul(to_series(f), to_series(g));
        auto pl = series_plus(to_series(f));
        auto tp = series_table(*d, prod, ws);
        auto tl = series_table(*d, pl, ws);
        for (std::size_t i = 0; i < ws.size(); ++i) {
            CHECK(tp[i].i == product_oracle(f, g, ws.word(i)));
            CHECK(tl[i].i == plus_oracle(f, ws.word(i)));
            CHECK(series_plus_coeff(*d, to_series(f), ws.word(i)).i == tl[i].i);
        }
    }
}

TEST_CASE("sum and scale") {
    auto d = nat_multi();
    auto f = monomial("ab", Value::I(2));
    auto g = polynomial({{"ab", Value::I(3)}, {"b", Value::I(1)}});
    auto s = series_scale(3, series_sum(f, g));
    CHECK(coeff(*d, s, "ab").i == 15);
    CHECK(coeff(*d, s, "b").i == 3);
    CHECK(coeff(*d, s, "a").i == 0);
    CHECK(series_eps(*d, s).i == 0);
}

TEST_CASE("improper series are rejected by plus") {
    CHECK_THROWS_AS(series_plus(monomial("", Value::I(1))), DomainError);
}

TEST_CASE("word spaces") {
    auto ws = WordSpace::all_words(Alphabet{"ab"}, 3);
    CHECK(ws.size() == 2 + 4 + 8);
    auto i = ws.index("aba");
    REQUIRE(i);
    // Splits of aba: a|ba, ab|a.
    CHECK(ws.splits(*i).size() == 2);
    auto fs = WordSpace::factors("abab");
    // Distinct nonempty factors: a, b, ab, ba, aba, bab, abab.
    CHECK(fs.size() == 7);
    CHECK_FALSE(fs.index("bb"));
}

TEST_CASE("omega words are canonical") {
    CHECK(OmegaWord::parse("(ab)^w") == OmegaWord::parse("a(ba)^w"));
    CHECK(OmegaWord::parse("(abab)^w") == OmegaWord::parse("(ab)^w"));
    CHECK(OmegaWord::parse("aaa^w") == OmegaWord::parse("a^w"));
    CHECK(OmegaWord::parse("b(ab)^w").str() == "(ba)^w");
    CHECK(OmegaWord::parse("ab^w").str() == "ab^w");
    auto w = OmegaWord::parse("c(ab)^w");
    CHECK(w.at(0) == 'c');
    CHECK(w.at(1) == 'a');
    CHECK(w.at(4) == 'b');
    CHECK_THROWS_AS(OmegaWord::parse("ab"), ParseError);
    CHECK_THROWS_AS(OmegaWord::parse("()^w"), ParseError);
}

TEST_CASE("lasso enumeration has no duplicates") {
    auto ls = all_lassos(Alphabet{"ab"}, 2, 2);
    std::set<std::string> seen;
    for (const auto& w : ls) CHECK(seen.insert(w.str()).second);
    // Periods: a, b, ab (ba is the same cycle up to stem); stems shift them.
    CHECK(seen.count("a^w"));
    CHECK(seen.count("(ab)^w"));
    CHECK(seen.count("b(ab)^w") == 0);  // canonical form of b(ab)^w is (ba)^w
}

TEST_CASE("omega power of L = {a, ab} on lassos") {
    auto d = bool_multi();
    auto L = polynomial({{"a", Value::I(1)}, {"ab", Value::I(1)}});
    auto v = omega_power(L);
    // L^w: infinite words over a, b starting with a and without bb.
    auto oracle = [](const OmegaWord& w) {
        if (w.at(0) != 'a') return false;
        std::size_t n = w.u.size() + 2 * w.v.size() + 2;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (w.at(i) == 'b' && w.at(i + 1) == 'b') return false;
        }
        return true;
    };
    for (const auto& w : all_lassos(Alphabet{"ab"}, 4, 4)) {
        CAPTURE(w.str());
        CHECK(lasso_member(*d, v, w) == oracle(w));
    }
}

TEST_CASE("mixed omega series") {
    auto d = bool_multi();
    auto a = monomial("a", Value::I(1));
    auto b = monomial("b", Value::I(1));
    // b a^w + a (b^w)
    auto v = omega_sum(omega_act(b, omega_power(a)), omega_act(a, omega_power(b)));
    CHECK(lasso_member(*d, v, OmegaWord::parse("ba^w")));
    CHECK(lasso_member(*d, v, OmegaWord::parse("ab^w")));
    CHECK_FALSE(lasso_member(*d, v, OmegaWord::parse("a^w")));
    CHECK_FALSE(lasso_member(*d, v, OmegaWord::parse("bba^w")));
    CHECK_FALSE(lasso_member(*d, omega_zero(), OmegaWord::parse("a^w")));
}

TEST_CASE("bounded equality of series") {
    auto d = nat_multi();
    auto a = monomial("a", Value::I(1));
    // a+ a = a a+
    auto lhs = cauchy_mul(series_plus(a), a);
    auto rhs = cauchy_mul(a, series_plus(a));
    auto rep = bounded_eq(*d, lhs, rhs, Alphabet{"ab"}, 6);
    CHECK(rep.ok());
    CHECK(rep.bounded);
    auto bad = bounded_eq(*d, lhs, series_plus(a), Alphabet{"ab"}, 6);
    CHECK_FALSE(bad.ok());
}

TEST_CASE("language carrier laws up to the bound") {
    auto lang = language_instance(Alphabet{"ab"}, 5);
    LawOptions o;
    o.trials = 60;
    o.seed = 3;
    CHECK(conway_hemiring_laws(*lang, o).ok());
    auto lp = language_pair(Alphabet{"ab"}, 5, 3, 3);
    CHECK(hemimodule_pair_laws(*lp, o).ok());
}

TEST_CASE("series codec") {
    auto ns = nat_series_instance(Alphabet{"ab"}, 4);
    Value v = ns->read("{a: 2, ab}");
    CHECK(ns->coeff_at(v, "a").i == 2);
    CHECK(ns->coeff_at(v, "ab").i == 1);
    CHECK(ns->eq(ns->read(ns->show(v)), v));
    CHECK_THROWS_AS(ns->read("{c}"), ParseError);
    CHECK_THROWS_AS(ns->read("a"), ParseError);
}
