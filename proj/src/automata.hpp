#pragma once

#include "matrix.hpp"
#include "ratexpr.hpp"
#include "valuation.hpp"

namespace ow {

struct Transition {
    std::size_t from = 0;
    std::size_t to = 0;
    char letter = 0;
    Value weight;
};

// (alpha, M, beta, k): states 0..k-1 are the repeated ones. alpha and beta are
// natural-number multiplicities; M is given by its letter-labelled transitions.
struct MatrixAutomaton {
    std::size_t n = 0;
    std::size_t k = 0;
    Alphabet alphabet;
    std::vector<std::uint64_t> alpha;
    std::vector<std::uint64_t> beta;
    std::vector<Transition> trans;

    void check() const;
};

// (n, I, gamma, F, k) with 0/1 initial and final sets.
struct RunAutomaton {
    std::size_t n = 0;
    std::size_t k = 0;
    Alphabet alphabet;
    std::vector<bool> initial;
    std::vector<bool> final;
    std::vector<Transition> trans;

    void check() const;
};

// Sum over successful runs of alpha . val(weights) . beta (right-nested dynamic program).
Value finitary_coeff(const MultiHemiring& d, const MatrixAutomaton& a, const Word& w);
Value finitary_coeff(const MultiHemiring& d, const RunAutomaton& a, const Word& w);
// Coefficient of alpha M+ beta, with M evaluated as a matrix of polynomial series.
Value matrix_finitary_coeff(const MultiHemiring& d, const MatrixAutomaton& a, const Word& w);
// alpha M+ beta as one series (lazy; shares the matrix computation across queries).
SeriesPtr matrix_finitary_series(const MultiHemiring& d, const MatrixAutomaton& a);

// Infinitary coefficient on the product of the automaton with the lasso graph of w.
// depth > 0 fixes the number of value-iteration rounds for disc; 0 iterates to tolerance.
ValResult infinitary_coeff(const OmegaValuation& v, const MatrixAutomaton& a, const OmegaWord& w,
                           std::size_t depth = 0);
ValResult infinitary_coeff(const OmegaValuation& v, const RunAutomaton& a, const OmegaWord& w,
                           std::size_t depth = 0);
// Support of alpha M^{w,k} over the language pair, evaluated on the lasso w.
bool matrix_infinitary_member(const MatrixAutomaton& a, const OmegaWord& w);

MatrixAutomaton to_matrix_automaton(const RunAutomaton& b);
// Disjoint family with 0/1 vectors whose behaviors sum to the behaviors of a.
std::vector<RunAutomaton> to_run_automata(const MatrixAutomaton& a);

// Linear-size constructions; letter weights are the unit, scalars scale by n-fold sums.
MatrixAutomaton compile(const MultiHemiring& d, const ExprPtr& e, const Alphabet& alphabet);
// Drops states not reachable from an initial state.
MatrixAutomaton trim(const MatrixAutomaton& a);

struct Eliminated {
    ExprPtr finitary;  // alpha M+ beta
    ExprPtr omega;     // alpha M^{w,k}
};

// Symbolic evaluation of the behaviors with expression-valued matrices. Transition
// weights must be n-fold sums of the unit (as produced by compile).
Eliminated eliminate(const MultiHemiring& d, const MatrixAutomaton& a);

// Omega series whose coefficients come from compiling the expression.
OmegaPtr eval_omega(const OmegaValuation& v, const ExprPtr& e, const Alphabet& alphabet);

// Automaton JSON: {n, k, alphabet, alpha, beta, transitions: [{from, to, letter, weight}]}.
// Vectors hold natural numbers as strings; weights use the multi-hemiring codec.
nlohmann::json automaton_to_json(const Domain& d, const MatrixAutomaton& a);
MatrixAutomaton automaton_from_json(const Domain& d, const nlohmann::json& j);

}  // namespace ow
