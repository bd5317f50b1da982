#pragma once

#include "automata.hpp"
#include "extension.hpp"

namespace ow {

// Bad command-line or API arguments (unknown names, missing structure).
struct UsageError : Error {
    using Error::Error;
};

// A named instance with whatever structure it supports.
struct Instance {
    std::string name;
    nlohmann::json params;
    CarrierPtr carrier;      // hemiring view, if any
    MultiPtr multi;          // coefficient domain for series and automata
    ValuationPtr valuation;  // omega-valuation view, if any
    HemimodulePtr pair;      // hemiring-hemimodule pair, if any
    Alphabet alphabet;
    std::size_t bound = kDefaultBound;
    std::size_t depth = 24;

    nlohmann::json manifest() const;
};
using InstancePtr = std::shared_ptr<const Instance>;

// Carriers: bool, nat, minplus, extreal, lattice; series: language, nat-series;
// valuations: sup, limsup, liminf, disc, limsup-avg, lattice-inf, from-complete;
// extension: bool-language (full star over the language pair).
// Params: lambda, base, cap, h, alphabet (string), bound, depth.
InstancePtr resolve_instance(const std::string& name, const nlohmann::json& params = {});
std::vector<std::string> all_instance_names();

// conway-semiring, conway-hemiring, semiring, derived-star, hemimodule, matrix,
// multi-hemiring, omega-valuation, complete-omega.
std::vector<std::string> suite_names();
LawReport run_suite(const Instance& inst, const std::string& suite, std::uint64_t trials,
                    std::uint64_t seed);

// Finite words use the instance codec; "u(v)^w" words are omega coefficients.
std::string coeff_command(const Instance& inst, const std::string& expr, const std::string& word);
nlohmann::json compile_command(const Instance& inst, const std::string& expr);
nlohmann::json behavior_command(const Instance& inst, const nlohmann::json& automaton,
                                const std::string& word, std::size_t depth);
nlohmann::json eliminate_command(const Instance& inst, const nlohmann::json& automaton);
LawReport group_command(const Instance& inst, const std::string& group, std::uint64_t trials,
                        std::uint64_t seed);

// liminf-regroup, avg-regroup, avg-product-omega.
std::vector<std::string> counterexample_names();
CounterexampleResult counterexample_command(const std::string& name, std::size_t depth);
// Whether the result witnesses a violated law.
bool counterexample_violates(const CounterexampleResult& r);

}  // namespace ow
