#include <doctest.h>

#include <cmath>
#include <limits>

#include "automata.hpp"
#include "instances.hpp"

using namespace ow;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

MultiPtr nat_multi() { return std::make_shared<CarrierMulti>(nat_carrier()); }
MultiPtr bool_multi() { return std::make_shared<CarrierMulti>(bool_carrier()); }

MatrixAutomaton make(std::size_t n, std::size_t k, std::vector<std::uint64_t> alpha,
                     std::vector<std::uint64_t> beta, std::vector<Transition> trans,
                     std::string letters = "ab") {
    MatrixAutomaton a;
    a.n = n;
    a.k = k;
    a.alphabet.letters = std::move(letters);
    a.alpha = std::move(alpha);
    a.beta = std::move(beta);
    a.trans = std::move(trans);
    a.check();
    return a;
}

Transition tr(std::size_t from, std::size_t to, char letter, Value w) { return {from, to, letter, std::move(w)}; }

// Buchi automaton for (ab)^w: 0 -a-> 1 -b-> 0, state 0 repeated.
MatrixAutomaton buchi_ab(const Value& one) {
    return make(2, 1, {1, 0}, {0, 0}, {tr(0, 1, 'a', one), tr(1, 0, 'b', one)});
}

MatrixAutomaton random_automaton(Rng& rng, const MultiHemiring& d, std::size_t n, bool omega) {
    MatrixAutomaton a;
    a.n = n;
    a.k = omega ? 1 + rng() % n : 0;
    a.alphabet.letters = "ab";
    for (std::size_t q = 0; q < n; ++q) {
        a.alpha.push_back(rng() % 3 == 0 ? 1 + rng() % 2 : 0);
        a.beta.push_back(rng() % 3 == 0 ? 1 + rng() % 2 : 0);
    }
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
            for (char c : std::string("ab")) {
                if (rng() % 3 == 0) a.trans.push_back(tr(p, q, c, d.sample(rng)));
            }
        }
    }
    // Keep weights nonzero so that runs are not silently dropped.
    for (auto& t : a.trans) {
        if (d.is_zero(t.weight)) t.weight = d.unit();
    }
    return a;
}

// Oracle: enumerate all paths labelled by w and sum alpha * prod(weights) * beta in nat.
std::int64_t nat_paths(const MatrixAutomaton& a, const Word& w) {
    std::int64_t total = 0;
    std::function<void(std::size_t, std::size_t, std::int64_t, std::size_t)> go =
        [&](std::size_t q, std::size_t pos, std::int64_t acc, std::size_t start) {
            if (pos == w.size()) {
                total += static_cast<std::int64_t>(a.alpha[start]) * acc * static_cast<std::int64_t>(a.beta[q]);
                return;
            }
            for (const auto& t : a.trans) {
                if (t.from == q && t.letter == w[pos]) go(t.to, pos + 1, acc * t.weight.i, start);
            }
        };
    for (std::size_t q = 0; q < a.n; ++q) {
        if (a.alpha[q] != 0) go(q, 0, 1, q);
    }
    return total;
}

// Oracle: discounted value of each path computed directly, maximum over paths.
double disc_paths(const MatrixAutomaton& a, const Word& w, double lambda) {
    double best = kNegInf;
    std::function<void(std::size_t, std::size_t, double, double, std::size_t)> go =
        [&](std::size_t q, std::size_t pos, double acc, double disc, std::size_t start) {
            if (pos == w.size()) {
                if (a.alpha[start] != 0 && a.beta[q] != 0) best = std::max(best, acc);
                return;
            }
            for (const auto& t : a.trans) {
                if (t.from == q && t.letter == w[pos] && t.weight.r != kNegInf) {
                    go(t.to, pos + 1, acc + disc * t.weight.r, disc * lambda, start);
                }
            }
        };
    for (std::size_t q = 0; q < a.n; ++q) go(q, 0, 0.0, 1.0, q);
    return best;
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

TEST_CASE("Buchi automaton for (ab)^w") {
    auto v = make_valuation_instance("bool");
    auto a = buchi_ab(v->unit());
    CHECK(infinitary_coeff(*v, a, OmegaWord::parse("(ab)^w")).value.i == 1);
    CHECK(infinitary_coeff(*v, a, OmegaWord::parse("b(ab)^w")).value.i == 0);
    CHECK(infinitary_coeff(*v, a, OmegaWord::parse("a^w")).value.i == 0);
    CHECK(infinitary_coeff(*v, a, OmegaWord::parse("aab^w")).value.i == 0);
    CHECK(matrix_infinitary_member(a, OmegaWord::parse("(ab)^w")));
    CHECK_FALSE(matrix_infinitary_member(a, OmegaWord::parse("(ba)^w")));
}

TEST_CASE("k = 0 has no infinitary behavior") {
    auto v = make_valuation_instance("bool");
    auto a = make(1, 0, {1}, {1}, {tr(0, 0, 'a', v->unit())});
    CHECK(infinitary_coeff(*v, a, OmegaWord::parse("a^w")).value.i == 0);
    CHECK_FALSE(matrix_infinitary_member(a, OmegaWord::parse("a^w")));
    CHECK(finitary_coeff(*v, a, "aaa").i == 1);
}

TEST_CASE("empty initial vector gives zero behaviors") {
    auto d = nat_multi();
    auto a = make(1, 1, {0}, {1}, {tr(0, 0, 'a', Value::I(1))});
    CHECK(finitary_coeff(*d, a, "a").i == 0);
    CHECK(to_run_automata(a).empty());
    CHECK(matrix_finitary_coeff(*d, a, "aa").i == 0);
}

TEST_CASE("single transition automaton") {
    auto d = nat_multi();
    auto a = make(2, 0, {1, 0}, {0, 1}, {tr(0, 1, 'a', Value::I(5))});
    CHECK(finitary_coeff(*d, a, "a").i == 5);
    CHECK(finitary_coeff(*d, a, "b").i == 0);
    CHECK(finitary_coeff(*d, a, "aa").i == 0);
    CHECK_THROWS_AS(finitary_coeff(*d, a, ""), DomainError);
}

TEST_CASE("invalid automata are rejected") {
    CHECK_THROWS_AS(make(1, 2, {1}, {1}, {}), DomainError);
    CHECK_THROWS_AS(make(1, 0, {1}, {1}, {tr(0, 3, 'a', Value::I(1))}), DomainError);
    CHECK_THROWS_AS(make(1, 0, {1}, {1}, {tr(0, 0, 'c', Value::I(1))}), DomainError);
    CHECK_THROWS_AS(make(2, 0, {1}, {1, 0}, {}), DomainError);
    auto d = nat_multi();
    CHECK_THROWS_AS(automaton_from_json(*d, nlohmann::json::parse(R"({"n": 1})")), ParseError);
    CHECK_THROWS_AS(automaton_from_json(*d, nlohmann::json::parse(
                                                R"({"n":1,"alphabet":["a"],"alpha":["-1"],"beta":["0"],"transitions":[]})")),
                    ParseError);
}

TEST_CASE("JSON round trip") {
    auto d = nat_multi();
    Rng rng(41);
    for (int t = 0; t < 50; ++t) {
        auto a = random_automaton(rng, *d, 1 + rng() % 4, true);
        auto b = automaton_from_json(*d, automaton_to_json(*d, a));
        CHECK(automaton_to_json(*d, a) == automaton_to_json(*d, b));
        for (const auto& w : words_upto(4)) CHECK(finitary_coeff(*d, a, w).i == finitary_coeff(*d, b, w).i);
    }
    // Omitted weights default to one.
    auto j = nlohmann::json::parse(
        R"({"n":2,"k":0,"alphabet":["a"],"alpha":["1","0"],"beta":["0","1"],"transitions":[{"from":0,"to":1,"letter":"a"}]})");
    CHECK(finitary_coeff(*d, automaton_from_json(*d, j), "a").i == 1);
}

TEST_CASE("finitary behavior: three routes agree with a path oracle in nat") {
    auto d = nat_multi();
    Rng rng(43);
    for (int t = 0; t < 60; ++t) {
        auto a = random_automaton(rng, *d, 1 + rng() % 4, false);
        auto runs = to_run_automata(a);
        auto f = matrix_finitary_series(*d, a);
        for (const auto& w : words_upto(6)) {
            const std::int64_t o = nat_paths(a, w);
            CHECK(finitary_coeff(*d, a, w).i == o);
            CHECK(matrix_finitary_coeff(*d, a, w).i == o);
            CHECK(coeff(*d, f, w).i == o);
            std::int64_t sum = 0;
            for (const auto& r : runs) sum += finitary_coeff(*d, r, w).i;
            CHECK(sum == o);
        }
    }
}

TEST_CASE("finitary behavior in Booleans and disc") {
    auto b = bool_multi();
    auto disc = make_valuation_instance("disc", {{"lambda", 0.5}});
    Rng rng(44);
    for (int t = 0; t < 40; ++t) {
        auto a = random_automaton(rng, *b, 1 + rng() % 4, false);
        for (const auto& w : words_upto(5)) {
            CHECK(finitary_coeff(*b, a, w).i == (nat_paths(a, w) > 0 ? 1 : 0));
            CHECK(matrix_finitary_coeff(*b, a, w).i == finitary_coeff(*b, a, w).i);
        }
        auto ad = random_automaton(rng, *disc, 1 + rng() % 3, false);
        for (const auto& w : words_upto(5)) {
            double o = disc_paths(ad, w, 0.5);
            double got = finitary_coeff(*disc, ad, w).r;
            if (o == kNegInf) {
                CHECK(got == kNegInf);
            } else {
                CHECK(std::fabs(got - o) <= 1e-9);
                CHECK(std::fabs(matrix_finitary_coeff(*disc, ad, w).r - o) <= 1e-9);
            }
        }
    }
}

TEST_CASE("parallel transitions add up") {
    auto d = nat_multi();
    auto a = make(2, 0, {1, 0}, {0, 1}, {tr(0, 1, 'a', Value::I(1)), tr(0, 1, 'a', Value::I(1))});
    CHECK(finitary_coeff(*d, a, "a").i == 2);
    CHECK(matrix_finitary_coeff(*d, a, "a").i == 2);
}

TEST_CASE("compiled expressions") {
    auto d = nat_multi();
    Alphabet ab{"ab"};
    auto ap = compile(*d, parse_expr("a^+"), ab);
    CHECK(ap.n == 2);
    CHECK(finitary_coeff(*d, ap, "aaa").i == 1);
    CHECK(finitary_coeff(*d, ap, "ab").i == 0);
    CHECK(finitary_coeff(*d, compile(*d, parse_expr("2a"), ab), "a").i == 2);
    CHECK(finitary_coeff(*d, compile(*d, parse_expr("(2a)^+"), ab), "aa").i == 4);
    CHECK(finitary_coeff(*d, compile(*d, parse_expr("a + a"), ab), "a").i == 2);
    CHECK(finitary_coeff(*d, compile(*d, parse_expr("(a + b)^+ b"), ab), "abab").i == 1);
    CHECK_THROWS_AS(compile(*d, parse_expr("c"), ab), DomainError);
}

TEST_CASE("compiled omega expressions under Boolean semantics") {
    auto v = make_valuation_instance("bool");
    Alphabet ab{"ab"};
    auto a = compile(*v, parse_expr("(ab)^w"), ab);
    CHECK(infinitary_coeff(*v, a, OmegaWord::parse("(ab)^w")).value.i == 1);
    CHECK(infinitary_coeff(*v, a, OmegaWord::parse("(ba)^w")).value.i == 0);
    auto c = compile(*v, parse_expr("(a + b)^+ a^w"), ab);
    CHECK(infinitary_coeff(*v, c, OmegaWord::parse("ba^w")).value.i == 1);
    CHECK(infinitary_coeff(*v, c, OmegaWord::parse("a^w")).value.i == 1);
    CHECK(infinitary_coeff(*v, c, OmegaWord::parse("(ab)^w")).value.i == 0);
}

TEST_CASE("disc unit loop: value iteration with a dominating bound") {
    auto v = make_valuation_instance("disc", {{"lambda", 0.5}});
    auto a = make(1, 1, {1}, {0}, {tr(0, 0, 'a', v->unit())});
    auto w = OmegaWord::parse("a^w");
    for (std::size_t n = 1; n <= 40; ++n) {
        ValResult r = infinitary_coeff(*v, a, w, n);
        double expected = 2.0 * (1.0 - std::pow(0.5, static_cast<double>(n)));
        CHECK(r.value.r == doctest::Approx(expected).epsilon(1e-12));
        CHECK(std::fabs(r.value.r - 2.0) <= r.bound);
    }
    ValResult conv = infinitary_coeff(*v, a, w, 0);
    CHECK(std::fabs(conv.value.r - 2.0) <= 1e-6);
    CHECK(infinitary_coeff(*v, a, OmegaWord::parse("b^w")).value.r == kNegInf);
}

TEST_CASE("disc two-state choice") {
    // From state 0: loop a weight 1, or a weight 3 to state 1 which loops a with weight 0.
    // Best run: 3 + 0 = 3 versus 1/(1 - 1/2) = 2.
    auto v = make_valuation_instance("disc", {{"lambda", 0.5}});
    auto a = make(2, 2, {1, 0}, {0, 0},
                  {tr(0, 0, 'a', Value::R(1)), tr(0, 1, 'a', Value::R(3)), tr(1, 1, 'a', Value::R(0))});
    CHECK(infinitary_coeff(*v, a, OmegaWord::parse("a^w")).value.r == doctest::Approx(3.0));
}

TEST_CASE("limit valuations on hand examples") {
    auto loops = [](double x, double y, double z) {
        return make(1, 1, {1}, {0},
                    {tr(0, 0, 'a', Value::R(x)), tr(0, 0, 'a', Value::R(y)), tr(0, 0, 'b', Value::R(z))});
    };
    auto a = loops(1, 3, 2);
    auto ab = OmegaWord::parse("(ab)^w");
    auto aw = OmegaWord::parse("a^w");
    auto avg = make_valuation_instance("limsup-avg");
    auto limsup = make_valuation_instance("limsup");
    auto liminf = make_valuation_instance("liminf");
    auto sup = make_valuation_instance("sup");
    CHECK(infinitary_coeff(*avg, a, ab).value.r == doctest::Approx(2.5));
    CHECK(infinitary_coeff(*avg, a, aw).value.r == doctest::Approx(3.0));
    CHECK(infinitary_coeff(*limsup, a, ab).value.r == 3.0);
    CHECK(infinitary_coeff(*liminf, a, ab).value.r == 2.0);
    CHECK(infinitary_coeff(*liminf, a, aw).value.r == 3.0);
    CHECK(infinitary_coeff(*sup, a, ab).value.r == 3.0);
    // A transient heavy edge counts for sup only.
    auto t = make(2, 1, {0, 1}, {0, 0}, {tr(1, 0, 'b', Value::R(9)), tr(0, 0, 'a', Value::R(1))});
    auto baw = OmegaWord::parse("ba^w");
    CHECK(infinitary_coeff(*sup, t, baw).value.r == 9.0);
    CHECK(infinitary_coeff(*limsup, t, baw).value.r == 1.0);
    CHECK(infinitary_coeff(*liminf, t, baw).value.r == 1.0);
    CHECK(infinitary_coeff(*avg, t, baw).value.r == doctest::Approx(1.0));
}

TEST_CASE("run and matrix routes agree on Boolean infinitary behavior") {
    auto v = make_valuation_instance("bool");
    Rng rng(47);
    auto lassos = all_lassos(Alphabet{"ab"}, 2, 2);
    for (int t = 0; t < 40; ++t) {
        auto a = random_automaton(rng, *v, 1 + rng() % 3, true);
        auto runs = to_run_automata(a);
        for (const auto& w : lassos) {
            bool m = matrix_infinitary_member(a, w);
            CHECK((infinitary_coeff(*v, a, w).value.i == 1) == m);
            bool any = false;
            for (const auto& r : runs) any = any || infinitary_coeff(*v, r, w).value.i == 1;
            CHECK(any == m);
        }
    }
}

TEST_CASE("run automata round trip") {
    auto d = nat_multi();
    auto a = make(2, 1, {2, 0}, {0, 1}, {tr(0, 1, 'a', Value::I(1)), tr(1, 1, 'b', Value::I(1))});
    auto runs = to_run_automata(a);
    CHECK(runs.size() == 2);
    auto back = to_matrix_automaton(runs.front());
    CHECK(back.alpha == std::vector<std::uint64_t>{1, 0});
    CHECK(finitary_coeff(*d, a, "abb").i == 2);
}

TEST_CASE("trim drops unreachable states") {
    auto d = nat_multi();
    auto a = make(3, 0, {1, 0, 0}, {0, 1, 1}, {tr(0, 1, 'a', Value::I(1)), tr(2, 1, 'b', Value::I(1))});
    auto t = trim(a);
    CHECK(t.n == 2);
    CHECK(finitary_coeff(*d, t, "a").i == 1);
}

TEST_CASE("elimination preserves behaviors") {
    auto d = nat_multi();
    Alphabet ab{"ab"};
    auto a = compile(*d, parse_expr("(2a)^+"), ab);
    auto e = eliminate(*d, a);
    REQUIRE(e.finitary);
    auto f = eval_fin(*d, e.finitary);
    for (const auto& w : words_upto(5)) CHECK(coeff(*d, f, w).i == finitary_coeff(*d, a, w).i);
    CHECK(is_zero_expr(e.omega));

    auto b = make_valuation_instance("bool");
    auto o = compile(*b, parse_expr("a(ba)^w + b^w"), ab);
    auto eo = eliminate(*b, o);
    auto sup = eval_omega_support(*b, eo.omega);
    for (const auto& w : all_lassos(ab, 3, 3)) {
        CHECK(lasso_member(*b, sup, w) == (infinitary_coeff(*b, o, w).value.i == 1));
    }
}

TEST_CASE("omega series backed by compilation") {
    auto v = make_valuation_instance("disc");
    Alphabet ab{"ab"};
    auto s = eval_omega(*v, parse_expr("a^w"), ab);
    CHECK(s->query(OmegaWord::parse("a^w")).r == doctest::Approx(2.0));
    CHECK_THROWS_AS(eval_omega(*v, parse_expr("a"), ab), DomainError);
}
