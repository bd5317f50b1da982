#pragma once

#include "series.hpp"

namespace ow {

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

// Rational (finitary) and omega-rational expressions share one node type.
// Zero only arises from elimination and denotes the zero series on either side.
struct ExprNode : Obj {
    enum class Kind { Zero, Letter, Scalar, Sum, Prod, Plus, OmegaPow, ActProd, OmegaSum };
    Kind kind = Kind::Zero;
    char letter = 0;
    std::uint64_t n = 0;  // Scalar coefficient
    ExprPtr a;
    ExprPtr b;
};

enum class ExprKind { Finitary, Omega };

bool is_omega(const ExprPtr& e);
bool is_zero_expr(const ExprPtr& e);

// Constructors; they fold zero operands but otherwise keep the tree as given.
ExprPtr ex_zero();
ExprPtr ex_letter(char c);
ExprPtr ex_scalar(std::uint64_t n, ExprPtr e);
ExprPtr ex_sum(ExprPtr a, ExprPtr b);
ExprPtr ex_prod(ExprPtr a, ExprPtr b);
ExprPtr ex_plus(ExprPtr a);
ExprPtr ex_omega(ExprPtr a);
ExprPtr ex_act(ExprPtr a, ExprPtr f);
ExprPtr ex_omega_sum(ExprPtr f, ExprPtr g);

// expr := term ('+' term)*; term := factor+; factor := atom ('^+' | '^w')*;
// atom := INT? (LETTER | '(' expr ')') | '0'. Whitespace is ignored.
ExprPtr parse_expr(std::string_view text);
std::string print_expr(const ExprPtr& e);
std::size_t expr_size(const ExprPtr& e);

// Letters carry the multi-hemiring's unit weight; scalars act by n-fold sums.
SeriesPtr eval_fin(const MultiHemiring& d, const ExprPtr& e);
// Structural omega series (support-level semantics on lassos).
OmegaPtr eval_omega_support(const MultiHemiring& d, const ExprPtr& e);

// Seeded random expression; depth 1 gives a bare letter (finitary) or a^w (omega).
ExprPtr random_expr(Rng& rng, std::size_t max_depth, ExprKind kind, const Alphabet& a);

}  // namespace ow
