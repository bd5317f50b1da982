#include "laws.hpp"

#include <cstdlib>

#include "series.hpp"

namespace ow {

Value Domain::read(std::string_view text) const {
    throw ParseError("carrier " + name() + " has no reader for '" + std::string(text) + "'");
}

Value Domain::nat_scale(std::uint64_t n, const Value& a) const {
    Value acc = zero();
    Value base = a;
    while (n > 0) {
        if (n & 1u) acc = add(acc, base);
        n >>= 1u;
        if (n > 0) base = add(base, base);
    }
    return acc;
}

Value Carrier::star(const Value&) const { throw DomainError("carrier " + name() + " has no star"); }
Value Carrier::plus(const Value&) const { throw DomainError("carrier " + name() + " has no plus"); }

Value Carrier::unit() const {
    auto o = one();
    if (!o) throw DomainError("carrier " + name() + " has no unit");
    return *o;
}

void LawReport::absorb(const LawReport& other) {
    trials = std::max(trials, other.trials);
    bounded = bounded || other.bounded;
    failures.insert(failures.end(), other.failures.begin(), other.failures.end());
}

nlohmann::json LawReport::to_json() const {
    nlohmann::json fs = nlohmann::json::array();
    for (const auto& f : failures) {
        fs.push_back({{"law", f.law}, {"inputs", f.inputs}, {"lhs", f.lhs}, {"rhs", f.rhs}});
    }
    return {{"suite", suite}, {"trials", trials}, {"bounded", bounded}, {"failures", fs}};
}

std::uint64_t seed_from_env(std::uint64_t fallback) {
    const char* s = std::getenv("OMEGA_WEIGHTS_SEED");
    if (s == nullptr || *s == '\0') return fallback;
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (end == nullptr || *end != '\0') return fallback;
    return v;
}

namespace {

// Forwards everything to a base carrier; subclasses patch star or plus.
class Forwarding : public Carrier {
public:
    explicit Forwarding(CarrierPtr b) : b_(std::move(b)) {}
    std::string name() const override { return b_->name(); }
    Value zero() const override { return b_->zero(); }
    Value add(const Value& a, const Value& b) const override { return b_->add(a, b); }
    bool eq(const Value& a, const Value& b) const override { return b_->eq(a, b); }
    std::string show(const Value& a) const override { return b_->show(a); }
    Value read(std::string_view t) const override { return b_->read(t); }
    Value sample(Rng& rng) const override { return b_->sample(rng); }
    std::optional<std::vector<Value>> elements() const override { return b_->elements(); }
    bool idempotent() const override { return b_->idempotent(); }
    Value mul(const Value& a, const Value& b) const override { return b_->mul(a, b); }
    std::optional<Value> one() const override { return b_->one(); }
    bool has_star() const override { return b_->has_star(); }
    Value star(const Value& a) const override { return b_->star(a); }
    bool has_plus() const override { return b_->has_plus(); }
    Value plus(const Value& a) const override { return b_->plus(a); }

protected:
    CarrierPtr b_;
};

class StarFromPlus final : public Forwarding {
public:
    using Forwarding::Forwarding;
    bool has_star() const override { return true; }
    Value star(const Value& a) const override { return b_->add(b_->unit(), b_->plus(a)); }
};

class PlusFromStar final : public Forwarding {
public:
    using Forwarding::Forwarding;
    bool has_plus() const override { return true; }
    Value plus(const Value& a) const override { return b_->mul(a, b_->star(a)); }
};

class Overridden final : public Forwarding {
public:
    Overridden(CarrierPtr b, Overrides ov) : Forwarding(std::move(b)), ov_(std::move(ov)) {}
    std::string name() const override { return ov_.name.empty() ? b_->name() : ov_.name; }
    bool has_star() const override { return ov_.star ? true : b_->has_star(); }
    Value star(const Value& a) const override { return ov_.star ? ov_.star(a) : b_->star(a); }
    bool has_plus() const override { return ov_.plus ? true : b_->has_plus(); }
    Value plus(const Value& a) const override { return ov_.plus ? ov_.plus(a) : b_->plus(a); }

private:
    Overrides ov_;
};

std::vector<std::string> shown(const Domain& d, const std::vector<Value>& xs) {
    std::vector<std::string> out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(d.show(x));
    return out;
}

struct Law {
    std::string name;
    int arity;
    std::function<std::pair<Value, Value>(const std::vector<Value>&)> sides;
};

LawReport run_laws(const std::string& suite, const Carrier& c, const LawOptions& opt,
                   Sampler s, const std::vector<Law>& laws) {
    LawReport rep;
    rep.suite = suite;
    TupleSource src(c, std::move(s), opt);
    auto eq = [&c](const Value& a, const Value& b) { return c.eq(a, b); };
    auto show = [&c](const Value& a) { return c.show(a); };
    for (const auto& law : laws) {
        auto ts = src.tuples(law.arity);
        rep.trials = std::max<std::uint64_t>(rep.trials, ts.size());
        for (const auto& t : ts) {
            auto [l, r] = law.sides(t);
            expect_equal(rep, law.name, shown(c, t), l, r, eq, show);
        }
    }
    return rep;
}

}  // namespace

CarrierPtr star_from_plus(CarrierPtr c) {
    if (!c->one()) throw DomainError("star_from_plus: carrier " + c->name() + " has no unit");
    if (!c->has_plus()) throw DomainError("star_from_plus: carrier " + c->name() + " has no plus");
    return std::make_shared<StarFromPlus>(std::move(c));
}

CarrierPtr plus_from_star(CarrierPtr c) {
    if (!c->has_star()) throw DomainError("plus_from_star: carrier " + c->name() + " has no star");
    return std::make_shared<PlusFromStar>(std::move(c));
}

CarrierPtr override_carrier(CarrierPtr base, Overrides ov) {
    return std::make_shared<Overridden>(std::move(base), std::move(ov));
}

Value star_times(const Carrier& c, const Value& x, const Value& y) {
    if (c.has_star()) return c.mul(c.star(x), y);
    return c.add(c.mul(c.plus(x), y), y);
}

Value times_star(const Carrier& c, const Value& y, const Value& x) {
    if (c.has_star()) return c.mul(y, c.star(x));
    return c.add(y, c.mul(y, c.plus(x)));
}

TupleSource::TupleSource(const Domain& d, Sampler s, const LawOptions& opt)
    : d_(d), s_(std::move(s)), opt_(opt), rng_(opt.seed) {
    if (!s_) s_ = [&d](Rng& r) { return d.sample(r); };
    if (opt_.exhaustive) elems_ = d_.elements();
}

std::vector<std::vector<Value>> TupleSource::tuples(int arity) {
    std::vector<std::vector<Value>> out;
    if (arity == 0) return {std::vector<Value>{}};
    if (elems_) {
        std::uint64_t total = 1;
        for (int k = 0; k < arity && total <= kExhaustiveLimit; ++k) total *= elems_->size();
        if (total <= kExhaustiveLimit) {
            std::vector<std::size_t> idx(arity, 0);
            for (std::uint64_t n = 0; n < total; ++n) {
                std::vector<Value> t;
                for (int k = 0; k < arity; ++k) t.push_back((*elems_)[idx[k]]);
                out.push_back(std::move(t));
                for (int k = 0; k < arity; ++k) {
                    if (++idx[k] < elems_->size()) break;
                    idx[k] = 0;
                }
            }
            return out;
        }
    }
    for (std::uint64_t n = 0; n < opt_.trials; ++n) {
        std::vector<Value> t;
        for (int k = 0; k < arity; ++k) t.push_back(s_(rng_));
        out.push_back(std::move(t));
    }
    return out;
}

void expect_equal(LawReport& rep, const std::string& law, const std::vector<std::string>& inputs,
                  const Value& lhs, const Value& rhs,
                  const std::function<bool(const Value&, const Value&)>& eq,
                  const std::function<std::string(const Value&)>& show) {
    if (eq(lhs, rhs)) return;
    rep.failures.push_back({law, inputs, show(lhs), show(rhs)});
}

LawReport semiring_laws(const Carrier& c, const LawOptions& opt, Sampler s) {
    std::vector<Law> laws = {
        {"add-associative", 3,
         [&](const auto& v) {
             return std::pair{c.add(c.add(v[0], v[1]), v[2]), c.add(v[0], c.add(v[1], v[2]))};
         }},
        {"add-commutative", 2,
         [&](const auto& v) { return std::pair{c.add(v[0], v[1]), c.add(v[1], v[0])}; }},
        {"add-zero", 1, [&](const auto& v) { return std::pair{c.add(v[0], c.zero()), v[0]}; }},
        {"mul-associative", 3,
         [&](const auto& v) {
             return std::pair{c.mul(c.mul(v[0], v[1]), v[2]), c.mul(v[0], c.mul(v[1], v[2]))};
         }},
        {"left-distributive", 3,
         [&](const auto& v) {
             return std::pair{c.mul(v[0], c.add(v[1], v[2])),
                              c.add(c.mul(v[0], v[1]), c.mul(v[0], v[2]))};
         }},
        {"right-distributive", 3,
         [&](const auto& v) {
             return std::pair{c.mul(c.add(v[0], v[1]), v[2]),
                              c.add(c.mul(v[0], v[2]), c.mul(v[1], v[2]))};
         }},
        {"zero-annihilates-left", 1,
         [&](const auto& v) { return std::pair{c.mul(c.zero(), v[0]), c.zero()}; }},
        {"zero-annihilates-right", 1,
         [&](const auto& v) { return std::pair{c.mul(v[0], c.zero()), c.zero()}; }},
    };
    if (c.one()) {
        laws.push_back({"one-left", 1, [&](const auto& v) {
                            return std::pair{c.mul(c.unit(), v[0]), v[0]};
                        }});
        laws.push_back({"one-right", 1, [&](const auto& v) {
                            return std::pair{c.mul(v[0], c.unit()), v[0]};
                        }});
    }
    return run_laws("semiring", c, opt, std::move(s), laws);
}

LawReport conway_semiring_laws(const Carrier& c, const LawOptions& opt, Sampler s) {
    if (!c.one() || !c.has_star()) {
        throw DomainError("conway_semiring_laws: carrier " + c.name() + " lacks unit or star");
    }
    const Value one = c.unit();
    auto st = [&](const Value& x) { return c.star(x); };
    auto m = [&](const Value& a, const Value& b) { return c.mul(a, b); };
    auto a = [&](const Value& x, const Value& y) { return c.add(x, y); };
    std::vector<Law> laws = {
        {"sum-star", 2,
         [&](const auto& v) {
             return std::pair{st(a(v[0], v[1])), m(st(m(st(v[0]), v[1])), st(v[0]))};
         }},
        {"product-star", 2,
         [&](const auto& v) {
             return std::pair{st(m(v[0], v[1])),
                              a(one, m(m(v[0], st(m(v[1], v[0]))), v[1]))};
         }},
        {"sum-star-dual", 2,
         [&](const auto& v) {
             return std::pair{st(a(v[0], v[1])), m(st(v[0]), st(m(v[1], st(v[0]))))};
         }},
        {"simplified-product-star", 2,
         [&](const auto& v) {
             return std::pair{m(st(m(v[0], v[1])), v[0]), m(v[0], st(m(v[1], v[0])))};
         }},
        {"fixed-point", 1,
         [&](const auto& v) { return std::pair{a(m(v[0], st(v[0])), one), st(v[0])}; }},
        {"dual-fixed-point", 1,
         [&](const auto& v) { return std::pair{a(m(st(v[0]), v[0]), one), st(v[0])}; }},
        {"unary-product-star", 1,
         [&](const auto& v) { return std::pair{m(v[0], st(v[0])), m(st(v[0]), v[0])}; }},
        {"zero-star", 0, [&](const auto&) { return std::pair{st(c.zero()), one}; }},
    };
    auto rep = run_laws("conway-semiring", c, opt, std::move(s), laws);
    return rep;
}

LawReport conway_hemiring_laws(const Carrier& c, const LawOptions& opt, Sampler s) {
    if (!c.has_plus()) throw DomainError("conway_hemiring_laws: carrier " + c.name() + " lacks plus");
    auto pl = [&](const Value& x) { return c.plus(x); };
    auto m = [&](const Value& a, const Value& b) { return c.mul(a, b); };
    auto a = [&](const Value& x, const Value& y) { return c.add(x, y); };
    // Star-free readings: x*y = x+y + y and yx* = y + yx+.
    auto xs_y = [&](const Value& x, const Value& y) { return a(m(pl(x), y), y); };
    auto y_xs = [&](const Value& y, const Value& x) { return a(y, m(y, pl(x))); };
    std::vector<Law> laws = {
        {"sum-plus", 2,
         [&](const auto& v) {
             return std::pair{pl(a(v[0], v[1])), a(y_xs(pl(xs_y(v[0], v[1])), v[0]), pl(v[0]))};
         }},
        {"simplified-product-plus", 2,
         [&](const auto& v) {
             return std::pair{m(pl(m(v[0], v[1])), v[0]), m(v[0], pl(m(v[1], v[0])))};
         }},
        {"plus-fixed-point", 1,
         [&](const auto& v) { return std::pair{a(m(v[0], pl(v[0])), v[0]), pl(v[0])}; }},
        {"dual-plus-fixed-point", 1,
         [&](const auto& v) { return std::pair{a(m(pl(v[0]), v[0]), v[0]), pl(v[0])}; }},
        {"unary-product-plus", 1,
         [&](const auto& v) { return std::pair{m(pl(v[0]), v[0]), m(v[0], pl(v[0]))}; }},
        {"zero-plus", 0, [&](const auto&) { return std::pair{pl(c.zero()), c.zero()}; }},
    };
    auto rep = run_laws("conway-hemiring", c, opt, std::move(s), laws);
    if (dynamic_cast<const SeriesCarrier*>(&c) != nullptr) rep.bounded = true;
    return rep;
}

LawReport derived_star_laws(const Carrier& c, const LawOptions& opt, Sampler s) {
    if (!c.one() || !c.has_star()) {
        throw DomainError("derived_star_laws: carrier " + c.name() + " lacks unit or star");
    }
    const Value one = c.unit();
    auto st = [&](const Value& x) { return c.star(x); };
    auto pl = [&](const Value& x) { return c.mul(x, c.star(x)); };
    auto m = [&](const Value& a, const Value& b) { return c.mul(a, b); };
    auto a = [&](const Value& x, const Value& y) { return c.add(x, y); };
    std::vector<Law> laws = {
        {"star-product-split", 2,
         [&](const auto& v) {
             return std::pair{st(m(st(v[0]), v[1])), m(st(v[1]), st(m(pl(v[0]), pl(v[1]))))};
         }},
        {"star-product-unfold", 2,
         [&](const auto& v) {
             return std::pair{m(st(v[1]), st(m(pl(v[0]), pl(v[1])))),
                              a(m(m(st(v[0]), pl(v[1])), st(m(pl(v[0]), pl(v[1])))), one)};
         }},
        {"star-product-expand", 2,
         [&](const auto& v) {
             return std::pair{st(m(st(v[0]), v[1])),
                              a(m(m(st(v[0]), pl(v[1])), st(m(pl(v[0]), pl(v[1])))), one)};
         }},
    };
    return run_laws("derived-star", c, opt, std::move(s), laws);
}

LawReport hemimodule_pair_laws(const Hemimodule& p, const LawOptions& opt, Sampler hs,
                               Sampler vs) {
    CarrierPtr hp = p.hemiring();
    const Carrier& h = *hp;
    LawReport rep;
    rep.suite = "hemimodule";
    if (!vs) vs = [&p](Rng& r) { return p.vsample(r); };
    TupleSource src(h, std::move(hs), opt);
    Rng vrng(opt.seed ^ 0x9e3779b97f4a7c15ull);
    auto veq = [&p](const Value& a, const Value& b) { return p.veq(a, b); };
    auto vshow = [&p](const Value& a) { return p.vshow(a); };
    auto om = [&](const Value& x) { return p.omega(x); };
    auto act = [&](const Value& x, const Value& v) { return p.act(x, v); };
    auto m = [&](const Value& a, const Value& b) { return h.mul(a, b); };
    auto a = [&](const Value& x, const Value& y) { return h.add(x, y); };
    auto va = [&](const Value& x, const Value& y) { return p.vadd(x, y); };
    auto pl = [&](const Value& x) { return h.plus(x); };
    auto xs_y = [&](const Value& x, const Value& y) { return a(m(pl(x), y), y); };
    auto y_xs = [&](const Value& y, const Value& x) { return a(y, m(y, pl(x))); };
    // z*v read as z+v + v.
    auto xs_v = [&](const Value& z, const Value& v) { return va(act(pl(z), v), v); };

    struct PLaw {
        std::string name;
        int arity;
        std::function<std::pair<Value, Value>(const std::vector<Value>&)> sides;
    };
    std::vector<PLaw> laws = {
        {"sum-omega", 2,
         [&](const auto& v) {
             Value z = xs_y(v[0], v[1]);
             return std::pair{om(a(v[0], v[1])), va(xs_v(z, om(v[0])), om(z))};
         }},
        {"product-omega", 2,
         [&](const auto& v) { return std::pair{om(m(v[0], v[1])), act(v[0], om(m(v[1], v[0])))}; }},
        {"omega-fixed-point", 1,
         [&](const auto& v) { return std::pair{act(v[0], om(v[0])), om(v[0])}; }},
        {"star-product-omega", 2,
         [&](const auto& v) {
             return std::pair{om(xs_y(v[0], v[1])), xs_v(v[0], om(y_xs(v[1], v[0])))};
         }},
        {"product-star-omega", 2,
         [&](const auto& v) {
             return std::pair{om(y_xs(v[1], v[0])), act(v[1], om(xs_y(v[0], v[1])))};
         }},
        {"zero-omega", 0, [&](const auto&) { return std::pair{om(h.zero()), p.vzero()}; }},
    };
    for (const auto& law : laws) {
        auto ts = src.tuples(law.arity);
        rep.trials = std::max<std::uint64_t>(rep.trials, ts.size());
        for (const auto& t : ts) {
            auto [l, r] = law.sides(t);
            expect_equal(rep, law.name, shown(h, t), l, r, veq, vshow);
        }
    }
    // Action laws mixing hemiring and module samples.
    auto ts = src.tuples(2);
    for (const auto& t : ts) {
        Value u = vs(vrng);
        Value w = vs(vrng);
        std::vector<std::string> in = shown(h, t);
        in.push_back(p.vshow(u));
        in.push_back(p.vshow(w));
        expect_equal(rep, "action-left-distributive", in, act(a(t[0], t[1]), u),
                     va(act(t[0], u), act(t[1], u)), veq, vshow);
        expect_equal(rep, "action-right-distributive", in, act(t[0], va(u, w)),
                     va(act(t[0], u), act(t[0], w)), veq, vshow);
        expect_equal(rep, "action-associative", in, act(m(t[0], t[1]), u),
                     act(t[0], act(t[1], u)), veq, vshow);
        expect_equal(rep, "action-zero-left", in, act(h.zero(), u), p.vzero(), veq, vshow);
        expect_equal(rep, "action-zero-right", in, act(t[0], p.vzero()), p.vzero(), veq, vshow);
    }
    return rep;
}

LawReport iterative_fixed_point_check(const Carrier& c, const Value& a, const Value& b,
                                      std::size_t bound_len) {
    LawReport rep;
    rep.suite = "iterative-fixed-point";
    rep.trials = 1;
    Value x = c.add(c.mul(c.plus(a), b), b);
    std::vector<std::string> in = {c.show(a), c.show(b)};
    auto eq = [&c](const Value& l, const Value& r) { return c.eq(l, r); };
    auto show = [&c](const Value& v) { return c.show(v); };
    expect_equal(rep, "solves-fixed-point", in, x, c.add(c.mul(a, x), b), eq, show);
    if (const auto* sc = dynamic_cast<const SeriesCarrier*>(&c)) {
        rep.bounded = true;
        // Coefficient induction: (x,w) = (b,w) + sum over w = uv, u,v nonempty, of (a,u)(x,v).
        const MultiHemiring& d = *sc->coefficients();
        WordSpace ws = WordSpace::all_words(sc->alphabet(), bound_len);
        auto ta = sc->table(a, ws);
        auto tb = sc->table(b, ws);
        auto tx = sc->table(x, ws);
        std::vector<Value> sol(ws.size(), d.zero());
        for (std::size_t i = 0; i < ws.size(); ++i) {
            Value acc = tb[i];
            for (const auto& sp : ws.splits(i)) {
                acc = d.add(acc, d.prod(ws.length(sp.prefix), ws.length(sp.suffix), ta[sp.prefix],
                                        sol[sp.suffix]));
            }
            sol[i] = acc;
            if (!d.eq(sol[i], tx[i])) {
                rep.failures.push_back({"unique-solution", {c.show(a), c.show(b), ws.word(i)},
                                        d.show(tx[i]), d.show(sol[i])});
            }
        }
    }
    return rep;
}

}  // namespace ow
