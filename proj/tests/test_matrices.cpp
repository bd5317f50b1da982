#include <doctest.h>

#include <algorithm>

#include "instances.hpp"
#include "matrix.hpp"
#include "series.hpp"

using namespace ow;

namespace {

LawOptions opts(std::uint64_t trials, std::uint64_t seed = 23) {
    LawOptions o;
    o.trials = trials;
    o.seed = seed;
    return o;
}

Matrix random_minplus(const Carrier& c, std::size_t n, Rng& rng) {
    Matrix m(n, n, c.zero());
    for (auto& x : m.e) x = c.sample(rng);
    return m;
}

// All-pairs shortest paths, 0 on the diagonal (empty path).
std::vector<std::int64_t> floyd_warshall(const Matrix& m) {
    const std::size_t n = m.rows;
    std::vector<std::int64_t> d(n * n, kMinPlusInf);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) d[i * n + j] = m.at(i, j).i;
        d[i * n + i] = 0;
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (d[i * n + k] == kMinPlusInf || d[k * n + j] == kMinPlusInf) continue;
                d[i * n + j] = std::min(d[i * n + j], d[i * n + k] + d[k * n + j]);
            }
        }
    }
    return d;
}

}  // namespace

TEST_CASE("min-plus matrix star is all-pairs shortest paths") {
    auto c = make_instance("minplus");
    Rng rng(1);
    for (int t = 0; t < 300; ++t) {
        std::size_t n = 1 + rng() % 6;
        Matrix m = random_minplus(*c, n, rng);
        auto oracle = floyd_warshall(m);
        for (auto policy : {SplitPolicy::First, SplitPolicy::Balanced}) {
            Matrix s = mat_star(*c, m, SplitOpt{std::nullopt, policy});
            for (std::size_t i = 0; i < n * n; ++i) CHECK(s.e[i].i == oracle[i]);
        }
    }
}

TEST_CASE("Boolean matrix star is reflexive-transitive closure") {
    auto c = make_instance("bool");
    Rng rng(2);
    for (int t = 0; t < 200; ++t) {
        std::size_t n = 1 + rng() % 5;
        Matrix m(n, n, c->zero());
        for (auto& x : m.e) x = Value::I(rng() % 3 == 0 ? 1 : 0);
        std::vector<int> reach(n * n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            reach[i * n + i] = 1;
            for (std::size_t j = 0; j < n; ++j) reach[i * n + j] |= static_cast<int>(m.at(i, j).i);
        }
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) reach[i * n + j] |= reach[i * n + k] & reach[k * n + j];
        Matrix s = mat_star(*c, m);
        for (std::size_t i = 0; i < n * n; ++i) CHECK(s.e[i].i == reach[i]);
    }
}

TEST_CASE("matrix law checks on scalar carriers") {
    for (std::string name : {"bool", "minplus", "lattice"}) {
        auto c = make_instance(name);
        auto p = make_scalar_pair(name);
        for (std::size_t n : {3, 4}) {
            auto rep = matrix_law_checks(*c, p.get(), n, opts(200));
            CAPTURE(name);
            CAPTURE(n);
            CHECK(rep.ok());
            CHECK(rep.trials >= 200);
        }
    }
}

TEST_CASE("matrix law checks on languages") {
    auto lp = language_pair(Alphabet{"ab"}, 4, 2, 2);
    auto rep = matrix_law_checks(*lp->hemiring(), lp.get(), 3, opts(10));
    CHECK(rep.ok());
}

TEST_CASE("block helpers") {
    auto c = make_instance("minplus");
    Rng rng(4);
    Matrix m = random_minplus(*c, 5, rng);
    Matrix x = submatrix(m, 0, 2, 0, 2);
    Matrix y = submatrix(m, 0, 2, 2, 5);
    Matrix u = submatrix(m, 2, 5, 0, 2);
    Matrix v = submatrix(m, 2, 5, 2, 5);
    CHECK(mat_eq(*c, from_blocks(x, y, u, v), m));
    Matrix id = mat_identity(*c, 5);
    CHECK(mat_eq(*c, mat_mul(*c, id, m), m));
    CHECK(mat_eq(*c, mat_mul(*c, m, id), m));
    CHECK(mat_eq(*c, matrix_from_json(*c, matrix_to_json(*c, m)), m));
}

TEST_CASE("permutation helpers") {
    auto c = make_instance("bool");
    Permutation p = {2, 0, 1};
    Matrix pm = permutation_matrix(*c, p);
    // One 1 per row, in column p[i].
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(pm.at(i, j).i == (p[i] == j ? 1 : 0));
}

TEST_CASE("groups") {
    for (const auto& name : builtin_group_names()) {
        auto g = builtin_group(name);
        CAPTURE(name);
        for (std::size_t i = 0; i < g.n; ++i) {
            CHECK(g.mul(i, g.inverse[i]) == g.unit);
            CHECK(g.mul(g.unit, i) == i);
        }
    }
    CHECK(builtin_group("S3").n == 6);
    CHECK(builtin_group("Z4").n == 4);
    CHECK_THROWS_AS(builtin_group("Z9"), DomainError);
    // Boolean meet has a unit but 0 has no inverse: rejected.
    CHECK_THROWS_AS(make_group("bad", 2, {0, 0, 0, 1}), DomainError);
}

TEST_CASE("group identities on scalar carriers") {
    for (std::string name : {"bool", "minplus", "lattice"}) {
        auto c = make_instance(name);
        auto p = make_scalar_pair(name);
        for (const auto& gname : builtin_group_names()) {
            auto g = builtin_group(gname);
            CAPTURE(name);
            CAPTURE(gname);
            CHECK(group_identity_check(g, *c, opts(100)).ok());
            CHECK(group_omega_check(g, *p, opts(100)).ok());
        }
    }
}

TEST_CASE("a wrong plus breaks the group identity") {
    auto b = make_instance("minplus");
    Overrides ov;
    ov.name = "minplus-bad-plus";
    // x+ = 2x is not the Kleene plus.
    ov.plus = [b](const Value& x) { return b->mul(x, x); };
    ov.star = [](const Value&) { return Value::I(0); };
    auto bad = override_carrier(b, ov);
    auto rep = group_identity_check(builtin_group("Z2"), *bad, opts(200));
    CHECK_FALSE(rep.ok());
}

TEST_CASE("omega columns of min-plus matrices") {
    auto c = make_instance("minplus");
    auto p = make_scalar_pair("minplus");
    // A zero-weight cycle gives omega 0; positive cycles give inf.
    Matrix m(2, 2, c->zero());
    m.at(0, 1) = Value::I(3);
    m.at(1, 1) = Value::I(0);
    Column w = mat_omega(*p, m);
    CHECK(w[0].i == 3);
    CHECK(w[1].i == 0);
    m.at(1, 1) = Value::I(1);
    w = mat_omega(*p, m);
    CHECK(w[0].i == kMinPlusInf);
    CHECK(w[1].i == kMinPlusInf);
}
