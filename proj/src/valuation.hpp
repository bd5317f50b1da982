#pragma once

#include "series.hpp"

namespace ow {

// Eventually periodic sequence of (length, value) pairs: prefix then block repeated forever.
struct WeightedSeq {
    using Entry = std::pair<std::uint64_t, Value>;
    std::vector<Entry> prefix;
    std::vector<Entry> block;

    void check() const;
    // Drops the first entry; the block rotates when the prefix is empty.
    WeightedSeq tail() const;
    // Entry at position i of the infinite sequence.
    const Entry& at(std::size_t i) const;
};

enum class Strategy {
    Exact,     // closed form on eventually periodic input
    Truncate,  // first N entries with an error bound
    Window,    // extremum over the second half of the first N entries
};

struct ValResult {
    Value value;
    double bound = 0.0;  // absolute error bound; 0 for exact results
    bool exact = true;
};

// How infinite runs of an automaton are scored on a lasso product graph.
enum class InfKind { Exists, Sup, Limsup, Liminf, Disc, LimsupAvg, LatticeInf };

// Complete omega-hemiring: infinitary product of an eventually periodic sequence.
struct CompleteOmegaHemiring {
    CarrierPtr h;
    std::function<Value(const std::vector<Value>& prefix, const std::vector<Value>& block)> product;
    InfKind kind;
};

CompleteOmegaHemiring complete_bool();
CompleteOmegaHemiring complete_extreal();
CompleteOmegaHemiring complete_lattice(int base);

class OmegaValuation : public MultiHemiring {
public:
    virtual Value prod_omega(std::uint64_t m, const Value& a, const Value& b) const = 0;
    virtual ValResult val_omega(const WeightedSeq& s, Strategy st, std::size_t depth) const = 0;
    virtual InfKind kind() const = 0;
    virtual double lambda() const { return 0.0; }
    // Whether regrouping invariance is expected to hold.
    virtual bool infinitary_associative() const = 0;
    virtual nlohmann::json manifest() const;
    // Finite sampling range for values (used by law suites).
    virtual std::vector<Value> sample_pool() const;
};
using ValuationPtr = std::shared_ptr<const OmegaValuation>;

// sup, limsup, liminf, disc, limsup-avg, lattice-inf, from-complete, bool.
// Params: {"lambda": 0.5}, {"base": 3}, {"h": "extreal" | "lattice" | "bool"}.
ValuationPtr make_valuation_instance(const std::string& name, const nlohmann::json& params = {});
std::vector<std::string> valuation_names();
ValuationPtr from_complete(CompleteOmegaHemiring c, std::string name);

Value induced_val(const MultiHemiring& mh, const std::vector<Value>& ds);
// Exact val^w: the instance's closed form.
Value val_omega(const OmegaValuation& v, const WeightedSeq& s);

// Multi-hemiring laws: zero annihilation, indexed associativity, distributivity.
LawReport multi_hemiring_laws(const MultiHemiring& d, const LawOptions& opt, Sampler s = {});
// Omega-valuation laws including infinitary associativity; depth bounds the
// truncated witness families (number of doubling blocks).
LawReport omega_valuation_laws(const OmegaValuation& v, const LawOptions& opt, std::size_t depth = 24,
                               Sampler s = {});
// Axioms of a complete omega-hemiring on eventually periodic data.
LawReport complete_omega_laws(const CompleteOmegaHemiring& c, const LawOptions& opt);
// For hemiring-derived multi-hemirings, val(d1..dn) equals the ordinary product.
LawReport induced_val_product_check(const Carrier& c, const LawOptions& opt);

struct TracePoint {
    std::size_t depth;
    double direct;
    double regrouped;
};

struct CounterexampleResult {
    std::string name;
    double direct = 0;
    double regrouped = 0;
    std::vector<TracePoint> trace;
    nlohmann::json to_json() const;
};

// Liminf witness: d = 0,1,0,1,... with m_i = 1, grouped in pairs.
CounterexampleResult counterexample_liminf();
// Doubling blocks (1,0)^1 (1,1)^2 (1,0)^4 ... truncated to `blocks` blocks.
CounterexampleResult counterexample_regroup_avg(std::size_t blocks = 24);
// (r s)^w versus r (s r)^w on w = u1 v1 u2 v2 ..., n_i = 4^i. direct = lhs, regrouped = rhs.
CounterexampleResult counterexample_product_omega(std::size_t depth = 8);

// (r s', w) for a polynomial r and an omega series given by its coefficient function.
Value omega_left_product(const OmegaValuation& v, const SeriesPtr& r,
                         const std::function<Value(const OmegaWord&)>& s, const OmegaWord& w);

}  // namespace ow
