#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "instances.hpp"
#include "valuation.hpp"

using namespace ow;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

LawOptions opts(std::uint64_t trials, std::uint64_t seed = 31) {
    LawOptions o;
    o.trials = trials;
    o.seed = seed;
    return o;
}

WeightedSeq seq(std::vector<std::pair<std::uint64_t, double>> prefix,
                std::vector<std::pair<std::uint64_t, double>> block) {
    WeightedSeq s;
    for (auto [m, d] : prefix) s.prefix.push_back({m, Value::R(d)});
    for (auto [m, d] : block) s.block.push_back({m, Value::R(d)});
    return s;
}

WeightedSeq random_real_seq(Rng& rng) {
    WeightedSeq s;
    std::size_t np = rng() % 4;
    std::size_t nb = 1 + rng() % 3;
    for (std::size_t i = 0; i < np; ++i) s.prefix.push_back({1 + rng() % 3, Value::R((rng() % 9) / 2.0)});
    for (std::size_t i = 0; i < nb; ++i) s.block.push_back({1 + rng() % 3, Value::R((rng() % 9) / 2.0)});
    return s;
}

// Oracles over an explicit unrolling of the sequence.
struct Unrolled {
    std::vector<std::uint64_t> len;
    std::vector<double> val;
};

Unrolled unroll(const WeightedSeq& s, std::size_t periods) {
    Unrolled u;
    for (const auto& e : s.prefix) {
        u.len.push_back(e.first);
        u.val.push_back(e.second.r);
    }
    for (std::size_t p = 0; p < periods; ++p) {
        for (const auto& e : s.block) {
            u.len.push_back(e.first);
            u.val.push_back(e.second.r);
        }
    }
    return u;
}

double oracle(InfKind k, double lambda, const WeightedSeq& s) {
    const std::size_t periods = 400;
    Unrolled u = unroll(s, periods);
    const std::size_t tail_start = s.prefix.size() + (periods / 2) * s.block.size();
    switch (k) {
        case InfKind::Sup:
            return *std::max_element(u.val.begin(), u.val.end());
        case InfKind::Limsup:
            return *std::max_element(u.val.begin() + static_cast<std::ptrdiff_t>(tail_start), u.val.end());
        case InfKind::Liminf:
            return *std::min_element(u.val.begin() + static_cast<std::ptrdiff_t>(tail_start), u.val.end());
        case InfKind::Disc: {
            double sum = 0;
            double disc = 1;
            for (std::size_t i = 0; i < u.val.size(); ++i) {
                sum += disc * u.val[i];
                disc *= std::pow(lambda, static_cast<double>(u.len[i]));
            }
            return sum;
        }
        case InfKind::LimsupAvg: {
            // The running average over a long unrolling; the prefix washes out like 1/length.
            Unrolled big = unroll(s, 100000);
            double total = 0;
            double length = 0;
            for (std::size_t i = 0; i < big.val.size(); ++i) {
                total += static_cast<double>(big.len[i]) * big.val[i];
                length += static_cast<double>(big.len[i]);
            }
            return total / length;
        }
        default:
            return 0;
    }
}

}  // namespace

TEST_CASE("closed forms agree with long unrollings") {
    Rng rng(12);
    for (std::string name : {"sup", "limsup", "liminf", "disc", "limsup-avg"}) {
        auto v = make_valuation_instance(name, {{"lambda", 0.75}});
        for (int t = 0; t < 200; ++t) {
            WeightedSeq s = random_real_seq(rng);
            double exact = val_omega(*v, s).r;
            double o = oracle(v->kind(), v->lambda(), s);
            CAPTURE(name);
            // The average oracle converges like 1/length.
            double tol = v->kind() == InfKind::LimsupAvg ? 1e-3 : 1e-9;
            CHECK(std::fabs(exact - o) <= tol);
        }
    }
}

TEST_CASE("worked values") {
    auto disc = make_valuation_instance("disc");
    CHECK(val_omega(*disc, seq({}, {{1, 1.0}})).r == doctest::Approx(2.0));
    // 1 + 1/2 * 3 + (1/2)^2 * 2 / (1 - 1/2)
    CHECK(val_omega(*disc, seq({{1, 1.0}, {1, 3.0}}, {{1, 2.0}})).r == doctest::Approx(1 + 1.5 + 1.0));
    auto avg = make_valuation_instance("limsup-avg");
    CHECK(val_omega(*avg, seq({{5, 9.0}}, {{1, 0.0}, {3, 1.0}})).r == doctest::Approx(0.75));
    auto lim = make_valuation_instance("liminf");
    CHECK(val_omega(*lim, seq({{1, 0.0}}, {{1, 2.0}, {1, 3.0}})).r == 2.0);
    auto sup = make_valuation_instance("sup");
    CHECK(val_omega(*sup, seq({{1, 0.0}}, {{1, kNegInf}})).r == kNegInf);
}

TEST_CASE("truncated strategies report a dominating error bound") {
    Rng rng(13);
    for (std::string name : {"sup", "disc"}) {
        auto v = make_valuation_instance(name);
        for (int t = 0; t < 100; ++t) {
            WeightedSeq s = random_real_seq(rng);
            double exact = val_omega(*v, s).r;
            for (std::size_t n : {1, 2, 5, 10, 40}) {
                ValResult r = v->val_omega(s, Strategy::Truncate, n);
                CHECK_FALSE(r.exact);
                CHECK(std::fabs(r.value.r - exact) <= r.bound + 1e-12);
            }
        }
    }
    for (std::string name : {"limsup", "liminf"}) {
        auto v = make_valuation_instance(name);
        for (int t = 0; t < 100; ++t) {
            WeightedSeq s = random_real_seq(rng);
            ValResult r = v->val_omega(s, Strategy::Window, 64);
            CHECK(r.bound == 0.0);
            CHECK(r.value.r == val_omega(*v, s).r);
        }
    }
}

TEST_CASE("unsupported strategies are rejected") {
    WeightedSeq s = seq({}, {{1, 1.0}});
    CHECK_THROWS_AS(make_valuation_instance("limsup")->val_omega(s, Strategy::Truncate, 10), DomainError);
    CHECK_THROWS_AS(make_valuation_instance("disc")->val_omega(s, Strategy::Window, 10), DomainError);
    CHECK_THROWS_AS(make_valuation_instance("bool")->val_omega(s, Strategy::Truncate, 10), DomainError);
    CHECK_THROWS_AS(make_valuation_instance("disc", {{"lambda", 1.0}}), DomainError);
    CHECK_THROWS_AS(make_valuation_instance("nosuch"), DomainError);
    CHECK_THROWS_AS(val_omega(*make_valuation_instance("sup"), WeightedSeq{}), DomainError);
}

TEST_CASE("omega-valuation laws hold where regrouping is sound") {
    for (std::string name : {"sup", "limsup", "disc", "bool", "lattice-inf", "from-complete"}) {
        auto v = make_valuation_instance(name);
        CAPTURE(name);
        auto rep = omega_valuation_laws(*v, opts(200));
        CHECK(rep.ok());
        CHECK(v->infinitary_associative());
    }
}

TEST_CASE("liminf and limsup-avg fail infinitary associativity") {
    for (std::string name : {"liminf", "limsup-avg"}) {
        auto v = make_valuation_instance(name);
        CAPTURE(name);
        CHECK_FALSE(v->infinitary_associative());
        auto rep = omega_valuation_laws(*v, opts(200));
        REQUIRE_FALSE(rep.ok());
        bool regroup = false;
        for (const auto& f : rep.failures) regroup = regroup || f.law == "infinitary-associativity";
        CHECK(regroup);
        // The finitary part is still a multi-hemiring.
        CHECK(multi_hemiring_laws(*v, opts(200)).ok());
    }
}

TEST_CASE("complete omega-hemirings") {
    for (const auto& c : {complete_bool(), complete_extreal(), complete_lattice(3)}) {
        auto rep = complete_omega_laws(c, opts(200));
        CHECK(rep.ok());
    }
    auto v = from_complete(complete_lattice(2), "lattice");
    // Infinite meet of {a,b}, {a}, then {a,b} forever.
    WeightedSeq s;
    s.prefix = {{1, Value::I(3)}, {2, Value::I(1)}};
    s.block = {{1, Value::I(3)}};
    CHECK(val_omega(*v, s).i == 1);
}

TEST_CASE("induced valuation equals the ordinary product") {
    for (std::string name : {"bool", "minplus", "lattice", "extreal", "nat"}) {
        auto c = make_instance(name);
        CAPTURE(name);
        CHECK(induced_val_product_check(*c, opts(200)).ok());
    }
    auto disc = make_valuation_instance("disc");
    // 1 + 1/2 (2 + 1/2 * 4) = 3
    CHECK(induced_val(*disc, {Value::R(1), Value::R(2), Value::R(4)}).r == doctest::Approx(3.0));
    CHECK_THROWS_AS(induced_val(*disc, {}), DomainError);
}

TEST_CASE("liminf regrouping witness") {
    auto r = counterexample_liminf();
    CHECK(r.direct == 0.0);
    CHECK(r.regrouped == 1.0);
}

TEST_CASE("average regrouping witness") {
    auto r = counterexample_regroup_avg(24);
    CHECK(std::fabs(r.direct - 2.0 / 3.0) <= 0.02);
    CHECK(std::fabs(r.regrouped - 1.0 / 3.0) <= 0.02);
    CHECK(r.trace.size() == 24);
    CHECK_THROWS_AS(counterexample_regroup_avg(0), DomainError);
}

TEST_CASE("product-omega witness: lhs stays at one half") {
    auto r = counterexample_product_omega(8);
    REQUIRE(r.trace.size() == 8);
    double sum = 0;
    for (std::size_t k = 1; k <= 8; ++k) {
        const auto& p = r.trace[k - 1];
        CHECK(p.direct == 0.5);
        // Independent running average: ones over u_1, zeros over v_1, ones over u_2, ...
        sum += std::pow(4.0, static_cast<double>(k));
        double next = std::pow(4.0, static_cast<double>(k + 1));
        CHECK(p.regrouped == doctest::Approx((sum + next) / (2 * sum + next)));
    }
}

TEST_CASE("omega coefficient of a polynomial times an omega series under disc") {
    auto v = make_valuation_instance("disc");
    auto r = monomial("a", Value::R(1.0));
    // (s, a^w) = 2, so (a s, a^w) = 1 + 1/2 * 2 = 2.
    auto s = [](const OmegaWord& w) { return Value::R(w == OmegaWord::parse("a^w") ? 2.0 : kNegInf); };
    CHECK(omega_left_product(*v, r, s, OmegaWord::parse("a^w")).r == doctest::Approx(2.0));
    CHECK(omega_left_product(*v, r, s, OmegaWord::parse("b^w")).r == kNegInf);
}

TEST_CASE("weighted sequence helpers") {
    WeightedSeq s = seq({{2, 1.0}}, {{1, 2.0}, {3, 3.0}});
    CHECK(s.at(0).first == 2);
    CHECK(s.at(2).second.r == 3.0);
    CHECK(s.at(3).second.r == 2.0);
    WeightedSeq t = s.tail().tail();
    CHECK(t.prefix.empty());
    CHECK(t.block.front().second.r == 3.0);
}
