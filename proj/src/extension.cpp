#include "extension.hpp"

namespace ow {

BiAction biaction_nat(CarrierPtr h) {
    BiAction b;
    b.name = "nat";
    b.left = [h](const Value& x, const Value& a) { return h->nat_scale(static_cast<std::uint64_t>(x.i), a); };
    b.right = [h](const Value& a, const Value& x) { return h->nat_scale(static_cast<std::uint64_t>(x.i), a); };
    return b;
}

BiAction biaction_bool(CarrierPtr h) {
    BiAction b;
    b.name = "bool";
    b.left = [h](const Value& x, const Value& a) { return x.i ? a : h->zero(); };
    b.right = [h](const Value& a, const Value& x) { return x.i ? a : h->zero(); };
    return b;
}

ModuleAction module_action_nat(HemimodulePtr pair, std::function<Value(const Value&)> omega) {
    ModuleAction m;
    m.name = "nat";
    m.act = [pair](const Value& x, const Value& v) {
        Value acc = pair->vzero();
        for (std::int64_t k = 0; k < x.i; ++k) acc = pair->vadd(acc, v);
        return acc;
    };
    m.omega = std::move(omega);
    return m;
}

ModuleAction module_action_bool(HemimodulePtr pair) {
    ModuleAction m;
    m.name = "bool";
    m.act = [pair](const Value& x, const Value& v) { return x.i ? v : pair->vzero(); };
    m.omega = [pair](const Value&) { return pair->vzero(); };
    return m;
}

// ---------------------------------------------------------------------------

ExtensionCarrier::ExtensionCarrier(CarrierPtr s0, CarrierPtr h, BiAction bi, StarMode mode)
    : s0_(std::move(s0)), h_(std::move(h)), bi_(std::move(bi)), mode_(mode) {
    if (!s0_->one()) throw DomainError("extension: S0 must be a semiring");
    if (!h_->has_plus()) throw DomainError("extension: H must carry a plus operation");
    if (mode_ == StarMode::Full && !s0_->has_star()) {
        throw DomainError("extension: full star needs a star on " + s0_->name());
    }
}

std::string ExtensionCarrier::name() const { return s0_->name() + "+" + h_->name(); }

Value ExtensionCarrier::make(Value x, Value a) {
    auto f = std::make_shared<FormalSum>();
    f->x = std::move(x);
    f->a = std::move(a);
    return Value::P(std::move(f));
}

Value ExtensionCarrier::add(const Value& s, const Value& t) const {
    const auto& p = parts(s);
    const auto& q = parts(t);
    return make(s0_->add(p.x, q.x), h_->add(p.a, q.a));
}

// (x, a)(y, b) = (xy, xb + ay + ab)
Value ExtensionCarrier::mul(const Value& s, const Value& t) const {
    const auto& p = parts(s);
    const auto& q = parts(t);
    Value ideal = h_->add(h_->add(bi_.left(p.x, q.a), bi_.right(p.a, q.x)), h_->mul(p.a, q.a));
    return make(s0_->mul(p.x, q.x), std::move(ideal));
}

Value ExtensionCarrier::partial_star(const Value& s) const {
    const auto& p = parts(s);
    if (!s0_->is_zero(p.x)) {
        throw DomainError("partial star is undefined outside the ideal: " + show(s));
    }
    return make(s0_->unit(), h_->plus(p.a));
}

// (x + a)* = (x*a)* x* = (x*, b+ x*) with b = x* a.
Value ExtensionCarrier::full_star(const Value& s) const {
    const auto& p = parts(s);
    Value xs = s0_->star(p.x);
    Value b = bi_.left(xs, p.a);
    return make(xs, bi_.right(h_->plus(b), xs));
}

Value ExtensionCarrier::star(const Value& s) const {
    return mode_ == StarMode::Full ? full_star(s) : partial_star(s);
}

Value ExtensionCarrier::plus(const Value& s) const {
    if (mode_ == StarMode::Partial) {
        const auto& p = parts(s);
        if (!s0_->is_zero(p.x)) {
            throw DomainError("partial plus is undefined outside the ideal: " + show(s));
        }
        return make(s0_->zero(), h_->plus(p.a));
    }
    return mul(s, full_star(s));
}

bool ExtensionCarrier::eq(const Value& s, const Value& t) const {
    const auto& p = parts(s);
    const auto& q = parts(t);
    return s0_->eq(p.x, q.x) && h_->eq(p.a, q.a);
}

std::string ExtensionCarrier::show(const Value& s) const {
    const auto& p = parts(s);
    return s0_->show(p.x) + " ⊕ " + h_->show(p.a);
}

Value ExtensionCarrier::read(std::string_view text) const {
    static const std::string_view kSep = "⊕";
    auto pos = text.find(kSep);
    if (pos == std::string_view::npos) throw ParseError("formal sum must look like 'x ⊕ a'");
    auto trim = [](std::string_view v) {
        while (!v.empty() && v.front() == ' ') v.remove_prefix(1);
        while (!v.empty() && v.back() == ' ') v.remove_suffix(1);
        return v;
    };
    return make(s0_->read(trim(text.substr(0, pos))), h_->read(trim(text.substr(pos + kSep.size()))));
}

Value ExtensionCarrier::sample(Rng& rng) const {
    Value x = s0_->sample(rng);
    Value a = h_->sample(rng);
    return make(std::move(x), std::move(a));
}

Value ext_mul(const ExtensionCarrier& e, const Value& s, const Value& t) { return e.mul(s, t); }
Value ext_partial_star(const ExtensionCarrier& e, const Value& s) { return e.partial_star(s); }
Value ext_full_star(const ExtensionCarrier& e, const Value& s) { return e.full_star(s); }

// ---------------------------------------------------------------------------

namespace {

struct Check {
    LawReport& rep;
    const Domain& d;

    void operator()(const std::string& law, const std::vector<std::string>& in, const Value& l,
                    const Value& r) const {
        if (!d.eq(l, r)) rep.failures.push_back({law, in, d.show(l), d.show(r)});
    }
};

}  // namespace

LawReport biaction_laws(const ExtensionCarrier& e, const Hemimodule* pair, const ModuleAction* ma,
                        const LawOptions& opt) {
    LawReport rep;
    rep.suite = "biaction";
    rep.trials = opt.trials;
    const Carrier& s0 = *e.s0();
    const Carrier& h = *e.h();
    const BiAction& bi = e.biaction();
    Rng rng(opt.seed);
    Check hc{rep, h};
    auto L = bi.left;
    auto R = bi.right;
    for (std::uint64_t t = 0; t < opt.trials; ++t) {
        Value x = s0.sample(rng);
        Value y = s0.sample(rng);
        Value a = h.sample(rng);
        Value b = h.sample(rng);
        std::vector<std::string> in = {s0.show(x), s0.show(y), h.show(a), h.show(b)};
        hc("left-add-ideal", in, L(x, h.add(a, b)), h.add(L(x, a), L(x, b)));
        hc("left-add-scalar", in, L(s0.add(x, y), a), h.add(L(x, a), L(y, a)));
        hc("left-mul-scalar", in, L(s0.mul(x, y), a), L(x, L(y, a)));
        hc("left-mul-ideal", in, L(x, h.mul(a, b)), h.mul(L(x, a), b));
        hc("left-unit", in, L(s0.unit(), a), a);
        hc("left-zero-scalar", in, L(s0.zero(), a), h.zero());
        hc("left-zero-ideal", in, L(x, h.zero()), h.zero());
        hc("right-add-ideal", in, R(h.add(a, b), x), h.add(R(a, x), R(b, x)));
        hc("right-add-scalar", in, R(a, s0.add(x, y)), h.add(R(a, x), R(a, y)));
        hc("right-mul-scalar", in, R(a, s0.mul(x, y)), R(R(a, x), y));
        hc("right-mul-ideal", in, R(h.mul(a, b), x), h.mul(a, R(b, x)));
        hc("right-unit", in, R(a, s0.unit()), a);
        hc("right-zero-scalar", in, R(a, s0.zero()), h.zero());
        hc("right-zero-ideal", in, R(h.zero(), x), h.zero());
        hc("action-middle", in, R(L(x, a), y), L(x, R(a, y)));
        hc("ideal-middle", in, h.mul(R(a, x), b), h.mul(a, L(x, b)));
        // Plus compatibility: (xa)+ x = x (ax)+ and (ax)+ a = a (xa)+.
        hc("plus-compatible-left", in, R(h.plus(L(x, a)), x), L(x, h.plus(R(a, x))));
        hc("plus-compatible-right", in, h.mul(h.plus(R(a, x)), a), h.mul(a, h.plus(L(x, a))));
        if (pair != nullptr && ma != nullptr) {
            Value v = pair->vsample(rng);
            in.push_back(pair->vshow(v));
            auto veq = [pair](const Value& l, const Value& r) { return pair->veq(l, r); };
            auto vshow = [pair](const Value& u) { return pair->vshow(u); };
            // (xa)^w = x (ax)^w
            expect_equal(rep, "omega-compatible", in, pair->omega(L(x, a)),
                         ma->act(x, pair->omega(R(a, x))), veq, vshow);
            expect_equal(rep, "module-left-ideal", in, pair->act(L(x, a), v), ma->act(x, pair->act(a, v)),
                         veq, vshow);
            expect_equal(rep, "module-right-ideal", in, pair->act(R(a, x), v), pair->act(a, ma->act(x, v)),
                         veq, vshow);
            expect_equal(rep, "module-scalar-associative", in, ma->act(s0.mul(x, y), v),
                         ma->act(x, ma->act(y, v)), veq, vshow);
            expect_equal(rep, "module-unit", in, ma->act(s0.unit(), v), v, veq, vshow);
            if (ma->omega && s0.has_star()) {
                // S0-side omega laws.
                expect_equal(rep, "scalar-omega-fixed-point", in, ma->act(x, ma->omega(x)), ma->omega(x),
                             veq, vshow);
                expect_equal(rep, "scalar-product-omega", in, ma->omega(s0.mul(x, y)),
                             ma->act(x, ma->omega(s0.mul(y, x))), veq, vshow);
                Value z = s0.mul(s0.star(x), y);
                expect_equal(rep, "scalar-sum-omega", in, ma->omega(s0.add(x, y)),
                             pair->vadd(ma->act(s0.star(z), ma->omega(x)), ma->omega(z)), veq, vshow);
            }
        }
    }
    return rep;
}

namespace {

void throw_on_failure(const LawReport& rep, const std::string& what) {
    if (rep.ok()) return;
    const auto& f = rep.failures.front();
    std::string in;
    for (const auto& s : f.inputs) in += (in.empty() ? "" : ", ") + s;
    throw DomainError(what + ": law " + f.law + " fails at (" + in + "): " + f.lhs + " != " + f.rhs);
}

}  // namespace

ExtensionPtr make_extension(CarrierPtr s0, CarrierPtr h, BiAction bi, StarMode mode,
                            std::uint64_t seed) {
    auto e = std::make_shared<ExtensionCarrier>(std::move(s0), std::move(h), std::move(bi), mode);
    LawOptions opt;
    opt.trials = kCompatibilitySamples;
    opt.seed = seed;
    throw_on_failure(biaction_laws(*e, nullptr, nullptr, opt), "incompatible bi-action");
    return e;
}

// ---------------------------------------------------------------------------

ExtensionPair::ExtensionPair(ExtensionPtr e, HemimodulePtr pair, ModuleAction ma)
    : e_(std::move(e)), pair_(std::move(pair)), ma_(std::move(ma)) {
    if (!ma_.act || !ma_.omega) throw DomainError("extension pair: S0 needs an action and an omega on V");
    if (e_->mode() != StarMode::Full) throw DomainError("extension pair: needs the full star");
}

Value ExtensionPair::act(const Value& s, const Value& v) const {
    const auto& p = ExtensionCarrier::parts(s);
    return pair_->vadd(ma_.act(p.x, v), pair_->act(p.a, v));
}

// s^w = (x*a)* x^w + (x*a)^w, and (x*a)* = 1 + (x*a)+ on the ideal.
Value ExtensionPair::omega(const Value& s) const {
    const auto& p = ExtensionCarrier::parts(s);
    const Carrier& s0 = *e_->s0();
    const Carrier& h = *e_->h();
    Value b = e_->biaction().left(s0.star(p.x), p.a);
    Value xw = ma_.omega(p.x);
    Value head = pair_->vadd(xw, pair_->act(h.plus(b), xw));
    return pair_->vadd(head, pair_->omega(b));
}

std::shared_ptr<const ExtensionPair> make_extension_pair(ExtensionPtr e, HemimodulePtr pair,
                                                         ModuleAction ma, std::uint64_t seed) {
    auto p = std::make_shared<ExtensionPair>(e, pair, ma);
    LawOptions opt;
    opt.trials = kCompatibilitySamples;
    opt.seed = seed;
    throw_on_failure(biaction_laws(*e, pair.get(), &ma, opt), "incompatible module action");
    return p;
}

Value ext_full_omega(const ExtensionPair& p, const Value& s) { return p.omega(s); }

// ---------------------------------------------------------------------------

LawReport partial_conway_laws(const ExtensionCarrier& e, const LawOptions& opt) {
    LawReport rep;
    rep.suite = "partial-conway";
    rep.trials = opt.trials;
    Rng rng(opt.seed);
    Check c{rep, e};
    const Value one = e.unit();
    auto st = [&](const Value& s) { return e.partial_star(s); };
    auto pl = [&](const Value& s) { return e.plus(s); };
    auto m = [&](const Value& s, const Value& t) { return e.mul(s, t); };
    auto ad = [&](const Value& s, const Value& t) { return e.add(s, t); };
    for (std::uint64_t t = 0; t < opt.trials; ++t) {
        Value a = e.sample_ideal(rng);
        Value b = e.sample_ideal(rng);
        Value s = e.sample(rng);
        std::vector<std::string> in = {e.show(a), e.show(b), e.show(s)};
        c("ideal-sum-star", in, st(ad(a, b)), m(st(m(st(a), b)), st(a)));
        c("ideal-fixed-point", in, ad(m(a, st(a)), one), st(a));
        c("ideal-zero-star", in, st(e.zero()), one);
        c("mixed-product-star", in, st(m(s, a)), ad(one, m(m(s, st(m(a, s))), a)));
        c("mixed-simplified-product-plus", in, m(pl(m(s, a)), s), m(s, pl(m(a, s))));
        c("mixed-simplified-product-plus-dual", in, m(pl(m(a, s)), a), m(a, pl(m(s, a))));
    }
    return rep;
}

// ---------------------------------------------------------------------------

Value ExtMorphism::operator()(const ExtensionCarrier&, const Value& s) const {
    const auto& p = ExtensionCarrier::parts(s);
    return target->add(phi(p.x), psi(p.a));
}

ExtMorphism ext_morphism(const ExtensionCarrier& e, CarrierPtr target, ScalarMap phi, ScalarMap psi,
                         std::uint64_t seed) {
    ExtMorphism tau{std::move(target), std::move(phi), std::move(psi)};
    LawReport rep;
    rep.suite = "morphism-compatibility";
    rep.trials = kCompatibilitySamples;
    Rng rng(seed);
    const Carrier& t = *tau.target;
    Check c{rep, t};
    for (std::uint64_t k = 0; k < kCompatibilitySamples; ++k) {
        Value x = e.s0()->sample(rng);
        Value a = e.h()->sample(rng);
        std::vector<std::string> in = {e.s0()->show(x), e.h()->show(a)};
        // x phi a psi = (xa) psi and a psi x phi = (ax) psi.
        c("phi-psi-left", in, t.mul(tau.phi(x), tau.psi(a)), tau.psi(e.biaction().left(x, a)));
        c("psi-phi-right", in, t.mul(tau.psi(a), tau.phi(x)), tau.psi(e.biaction().right(a, x)));
    }
    throw_on_failure(rep, "incompatible morphisms");
    return tau;
}

LawReport morphism_laws(const ExtensionCarrier& e, const ExtMorphism& tau, const LawOptions& opt) {
    LawReport rep;
    rep.suite = "ext-morphism";
    rep.trials = opt.trials;
    const Carrier& t = *tau.target;
    Rng rng(opt.seed);
    Check c{rep, t};
    auto f = [&](const Value& s) { return tau(e, s); };
    auto target_star = [&](const Value& v) {
        if (t.has_star()) return t.star(v);
        return t.add(t.unit(), t.plus(v));
    };
    c("preserves-zero", {}, f(e.zero()), t.zero());
    c("preserves-one", {}, f(e.unit()), t.unit());
    for (std::uint64_t k = 0; k < opt.trials; ++k) {
        Value s = e.sample(rng);
        Value u = e.sample(rng);
        Value a = e.sample_ideal(rng);
        std::vector<std::string> in = {e.show(s), e.show(u), e.show(a)};
        c("preserves-add", in, f(e.add(s, u)), t.add(f(s), f(u)));
        c("preserves-mul", in, f(e.mul(s, u)), t.mul(f(s), f(u)));
        c("preserves-ideal-star", in, f(e.partial_star(a)), target_star(f(a)));
    }
    return rep;
}

}  // namespace ow
