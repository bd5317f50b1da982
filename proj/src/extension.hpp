#pragma once

#include "laws.hpp"

namespace ow {

// Left and right action of a semiring S0 on a hemiring H.
struct BiAction {
    std::string name;
    std::function<Value(const Value& x, const Value& a)> left;
    std::function<Value(const Value& a, const Value& x)> right;
};

// n a = a n = n-fold sum of a (S0 = nat).
BiAction biaction_nat(CarrierPtr h);
// 1 a = a, 0 a = 0 (S0 = bool).
BiAction biaction_bool(CarrierPtr h);

// Left action of S0 on the module side together with the S0-side omega.
struct ModuleAction {
    std::string name;
    std::function<Value(const Value& x, const Value& v)> act;
    std::function<Value(const Value& x)> omega;
};

ModuleAction module_action_nat(HemimodulePtr pair, std::function<Value(const Value&)> omega);
// Boolean scalars act by keep/erase; 1^w is the zero of V.
ModuleAction module_action_bool(HemimodulePtr pair);

// Element x + a of S0 (+) H.
struct FormalSum : Obj {
    Value x;
    Value a;
};

enum class StarMode {
    Partial,  // star only on the ideal: (0, a)* = (1, a+)
    Full,     // (x + a)* = (x* a)* x*
};

class ExtensionCarrier final : public Carrier {
public:
    ExtensionCarrier(CarrierPtr s0, CarrierPtr h, BiAction bi, StarMode mode);

    std::string name() const override;
    Value zero() const override { return make(s0_->zero(), h_->zero()); }
    Value add(const Value& s, const Value& t) const override;
    Value mul(const Value& s, const Value& t) const override;
    std::optional<Value> one() const override { return make(s0_->unit(), h_->zero()); }
    bool has_star() const override { return true; }
    Value star(const Value& s) const override;
    bool has_plus() const override { return true; }
    Value plus(const Value& s) const override;
    bool eq(const Value& s, const Value& t) const override;
    std::string show(const Value& s) const override;
    Value read(std::string_view text) const override;
    Value sample(Rng& rng) const override;
    bool idempotent() const override { return s0_->idempotent() && h_->idempotent(); }

    static Value make(Value x, Value a);
    static const FormalSum& parts(const Value& s) { return s.as<FormalSum>(); }
    Value scalar(const Value& x) const { return make(x, h_->zero()); }
    Value ideal(const Value& a) const { return make(s0_->zero(), a); }
    Value sample_ideal(Rng& rng) const { return ideal(h_->sample(rng)); }

    Value partial_star(const Value& s) const;
    Value full_star(const Value& s) const;

    const CarrierPtr& s0() const { return s0_; }
    const CarrierPtr& h() const { return h_; }
    const BiAction& biaction() const { return bi_; }
    StarMode mode() const { return mode_; }

private:
    CarrierPtr s0_;
    CarrierPtr h_;
    BiAction bi_;
    StarMode mode_;
};

using ExtensionPtr = std::shared_ptr<const ExtensionCarrier>;

constexpr std::uint64_t kCompatibilitySamples = 200;

// Action laws, (xa)y = x(ay), plus compatibility (xa)+ x = x (ax)+ and, when a pair
// and module action are given, the mixed module laws and the S0-side omega laws.
LawReport biaction_laws(const ExtensionCarrier& e, const Hemimodule* pair, const ModuleAction* ma,
                        const LawOptions& opt);

// Validates compatibility on kCompatibilitySamples samples; throws DomainError
// carrying the first witness on failure.
ExtensionPtr make_extension(CarrierPtr s0, CarrierPtr h, BiAction bi, StarMode mode,
                            std::uint64_t seed = kDefaultSeed);

Value ext_mul(const ExtensionCarrier& e, const Value& s, const Value& t);
Value ext_partial_star(const ExtensionCarrier& e, const Value& s);
Value ext_full_star(const ExtensionCarrier& e, const Value& s);

// (S0 (+) H, V) with s v = x v + a v and s^w = (x*a)* x^w + (x*a)^w.
class ExtensionPair final : public Hemimodule {
public:
    ExtensionPair(ExtensionPtr e, HemimodulePtr pair, ModuleAction ma);
    std::string name() const override { return "extension-pair(" + pair_->name() + ")"; }
    CarrierPtr hemiring() const override { return e_; }
    Value vzero() const override { return pair_->vzero(); }
    Value vadd(const Value& u, const Value& v) const override { return pair_->vadd(u, v); }
    Value act(const Value& s, const Value& v) const override;
    Value omega(const Value& s) const override;
    bool veq(const Value& u, const Value& v) const override { return pair_->veq(u, v); }
    std::string vshow(const Value& v) const override { return pair_->vshow(v); }
    Value vsample(Rng& rng) const override { return pair_->vsample(rng); }

    const ExtensionPtr& extension() const { return e_; }
    const HemimodulePtr& base() const { return pair_; }
    const ModuleAction& module_action() const { return ma_; }

private:
    ExtensionPtr e_;
    HemimodulePtr pair_;
    ModuleAction ma_;
};

std::shared_ptr<const ExtensionPair> make_extension_pair(ExtensionPtr e, HemimodulePtr pair,
                                                         ModuleAction ma,
                                                         std::uint64_t seed = kDefaultSeed);

Value ext_full_omega(const ExtensionPair& p, const Value& s);

// Star laws restricted to ideal arguments and mixed products s a, a s.
LawReport partial_conway_laws(const ExtensionCarrier& e, const LawOptions& opt);

using ScalarMap = std::function<Value(const Value&)>;

// tau(x + a) = x phi + a psi into a target semiring.
struct ExtMorphism {
    CarrierPtr target;
    ScalarMap phi;
    ScalarMap psi;

    Value operator()(const ExtensionCarrier& e, const Value& s) const;
};

// Checks (x phi)(a psi) = (xa) psi and (a psi)(x phi) = (ax) psi on
// kCompatibilitySamples samples and throws DomainError on a witness.
ExtMorphism ext_morphism(const ExtensionCarrier& e, CarrierPtr target, ScalarMap phi, ScalarMap psi,
                         std::uint64_t seed = kDefaultSeed);

// tau preserves add, mul, 0, 1 and star on ideal elements.
LawReport morphism_laws(const ExtensionCarrier& e, const ExtMorphism& tau, const LawOptions& opt);

}  // namespace ow
