#include <doctest.h>

#include "extension.hpp"
#include "instances.hpp"
#include "series.hpp"

using namespace ow;

namespace {

LawOptions opts(std::uint64_t trials, std::uint64_t seed = 17) {
    LawOptions o;
    o.trials = trials;
    o.seed = seed;
    return o;
}

struct BoolLang {
    std::shared_ptr<const SeriesCarrier> lang;
    ExtensionPtr e;
};

BoolLang bool_lang(const std::string& letters, std::size_t bound, StarMode mode) {
    auto lang = language_instance(Alphabet{letters}, bound);
    auto e = make_extension(bool_carrier(), lang, biaction_bool(lang), mode);
    return {lang, e};
}

}  // namespace

TEST_CASE("(1 + {a})* = {a}* in the Boolean extension of languages") {
    auto [lang, e] = bool_lang("ab", 8, StarMode::Full);
    Value one_plus_a = e->read("1 ⊕ {a}");
    Value a_star = e->star(e->read("0 ⊕ {a}"));
    CHECK(e->eq(e->star(one_plus_a), a_star));
    // Oracle: {a}* = 1 + {a, aa, aaa, ...}.
    const auto& p = ExtensionCarrier::parts(a_star);
    CHECK(p.x.i == 1);
    WordSpace ws = WordSpace::all_words(lang->alphabet(), 8);
    auto tab = lang->table(p.a, ws);
    for (std::size_t i = 0; i < ws.size(); ++i) {
        const Word& w = ws.word(i);
        bool all_a = w.find_first_not_of('a') == Word::npos;
        CHECK(tab[i].i == (all_a ? 1 : 0));
    }
}

TEST_CASE("star fixed point s s* + 1 = s* on sampled formal sums") {
    auto [lang, e] = bool_lang("ab", 6, StarMode::Full);
    Rng rng(5);
    for (int k = 0; k < 200; ++k) {
        Value s = e->sample(rng);
        Value st = e->star(s);
        CAPTURE(e->show(s));
        CHECK(e->eq(e->add(e->mul(s, st), e->unit()), st));
        CHECK(e->eq(e->add(e->mul(st, s), e->unit()), st));
    }
}

TEST_CASE("Boolean extension satisfies the Conway semiring laws up to the bound") {
    auto [lang, e] = bool_lang("ab", 5, StarMode::Full);
    auto rep = conway_semiring_laws(*e, opts(60));
    CHECK(rep.ok());
    CHECK(biaction_laws(*e, nullptr, nullptr, opts(100)).ok());
}

TEST_CASE("partial star is defined on the ideal only") {
    auto nat_lang = nat_series_instance(Alphabet{"ab"}, 5);
    auto e = make_extension(nat_carrier(), nat_lang, biaction_nat(nat_lang), StarMode::Partial);
    Value ideal = e->read("0 ⊕ {a: 2}");
    Value st = e->partial_star(ideal);
    CHECK(ExtensionCarrier::parts(st).x.i == 1);
    // (2a)+ has coefficient 2^n at a^n.
    CHECK(nat_lang->coeff_at(ExtensionCarrier::parts(st).a, "aaa").i == 8);
    CHECK_THROWS_AS(e->partial_star(e->read("1 ⊕ {a}")), DomainError);
    CHECK_THROWS_AS(e->plus(e->read("2 ⊕ 0")), DomainError);
    auto rep = partial_conway_laws(*e, opts(60));
    CHECK(rep.ok());
}

TEST_CASE("product of formal sums") {
    auto nat_lang = nat_series_instance(Alphabet{"ab"}, 5);
    auto e = make_extension(nat_carrier(), nat_lang, biaction_nat(nat_lang), StarMode::Partial);
    // (2 + a)(3 + b) = 6 + 2b + 3a + ab
    Value p = e->mul(e->read("2 ⊕ {a}"), e->read("3 ⊕ {b}"));
    CHECK(e->eq(p, e->read("6 ⊕ {a: 3, b: 2, ab: 1}")));
}

TEST_CASE("homomorphism onto the Booleans") {
    // Single letter and a generous bound so that nonemptiness is decided exactly
    // for every sampled language and product of two samples.
    auto [lang, e] = bool_lang("a", 20, StarMode::Full);
    auto b = make_instance("bool");
    auto nonempty = [lang = lang](const Value& a) { return Value::I(lang->is_zero(a) ? 0 : 1); };
    auto tau = ext_morphism(*e, b, [](const Value& x) { return x; }, nonempty);
    auto rep = morphism_laws(*e, tau, opts(200));
    CHECK(rep.ok());
    CHECK(tau(*e, e->read("0 ⊕ {a}")).i == 1);
    CHECK(tau(*e, e->zero()).i == 0);
}

TEST_CASE("incompatible morphisms are rejected") {
    auto [lang, e] = bool_lang("a", 6, StarMode::Full);
    auto b = make_instance("bool");
    // psi sends everything to 1, so (0 phi)(a psi) = 0 but (0 a) psi = 1.
    CHECK_THROWS_AS(ext_morphism(*e, b, [](const Value& x) { return x; },
                                 [](const Value&) { return Value::I(1); }),
                    DomainError);
}

TEST_CASE("extension pair: omega of formal sums") {
    auto [lang, e] = bool_lang("ab", 6, StarMode::Full);
    auto lp = language_pair(Alphabet{"ab"}, 6);
    auto pair = make_extension_pair(e, lp, module_action_bool(lp));
    // (1 + {a})^w = {a}^w + 1* 1^w = {a}^w since 1^w is empty.
    Value w = pair->omega(e->read("1 ⊕ {a}"));
    auto v = LanguagePair::unwrap(w);
    auto d = std::make_shared<CarrierMulti>(bool_carrier());
    CHECK(lasso_member(*d, v, OmegaWord::parse("a^w")));
    CHECK(lasso_member(*d, v, OmegaWord::parse("aaa^w")));
    CHECK_FALSE(lasso_member(*d, v, OmegaWord::parse("(ab)^w")));
    CHECK_FALSE(lasso_member(*d, v, OmegaWord::parse("b^w")));
    auto rep = hemimodule_pair_laws(*pair, opts(40));
    CHECK(rep.ok());
    CHECK(biaction_laws(*e, lp.get(), &pair->module_action(), opts(40)).ok());
}
