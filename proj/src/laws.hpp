#pragma once

#include "core.hpp"

namespace ow {

using Sampler = std::function<Value(Rng&)>;

// Tuple budget below which finite carriers are checked exhaustively.
constexpr std::uint64_t kExhaustiveLimit = 1u << 16;

// Star from plus (x* = 1 + x+) and plus from star (x+ = x x*).
CarrierPtr star_from_plus(CarrierPtr c);
CarrierPtr plus_from_star(CarrierPtr c);

// Carrier with star and/or plus replaced; used to exhibit law failures.
struct Overrides {
    std::function<Value(const Value&)> star;
    std::function<Value(const Value&)> plus;
    std::string name;
};
CarrierPtr override_carrier(CarrierPtr base, Overrides ov);

// x*y read as x+y + y when only plus exists.
Value star_times(const Carrier& c, const Value& x, const Value& y);
// yx* read as y + yx+ when only plus exists.
Value times_star(const Carrier& c, const Value& y, const Value& x);

struct LawOptions {
    std::uint64_t trials = 1000;
    std::uint64_t seed = kDefaultSeed;
    bool exhaustive = true;  // enumerate finite carriers when cheap enough
};

LawReport semiring_laws(const Carrier& c, const LawOptions& opt, Sampler s = {});
LawReport conway_semiring_laws(const Carrier& c, const LawOptions& opt, Sampler s = {});
LawReport conway_hemiring_laws(const Carrier& c, const LawOptions& opt, Sampler s = {});
// Consequences of the sum and product star identities involving s1*s2.
LawReport derived_star_laws(const Carrier& c, const LawOptions& opt, Sampler s = {});
LawReport hemimodule_pair_laws(const Hemimodule& p, const LawOptions& opt, Sampler hs = {},
                               Sampler vs = {});

// Checks that a+b + b solves x = ax + b. For series carriers the unique
// solution is also rebuilt coefficientwise up to bound_len and compared.
LawReport iterative_fixed_point_check(const Carrier& c, const Value& a, const Value& b,
                                      std::size_t bound_len);

// Enumerates or samples tuples of the given arity.
class TupleSource {
public:
    TupleSource(const Domain& d, Sampler s, const LawOptions& opt);
    std::vector<std::vector<Value>> tuples(int arity);

private:
    const Domain& d_;
    Sampler s_;
    LawOptions opt_;
    Rng rng_;
    std::optional<std::vector<Value>> elems_;
};

// Records a failure when lhs and rhs differ under eq.
void expect_equal(LawReport& rep, const std::string& law, const std::vector<std::string>& inputs,
                  const Value& lhs, const Value& rhs,
                  const std::function<bool(const Value&, const Value&)>& eq,
                  const std::function<std::string(const Value&)>& show);

}  // namespace ow
