#pragma once

#include "laws.hpp"

namespace ow {

struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Value> e;  // row-major

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, const Value& fill) : rows(r), cols(c), e(r * c, fill) {}

    Value& at(std::size_t i, std::size_t j) { return e[i * cols + j]; }
    const Value& at(std::size_t i, std::size_t j) const { return e[i * cols + j]; }
    bool square() const { return rows == cols; }
};

// Column over the module side of a hemimodule pair.
using Column = std::vector<Value>;

enum class SplitPolicy {
    First,     // X is 1x1 at every level
    Balanced,  // X takes half the rows at every level
};

struct SplitOpt {
    std::optional<std::size_t> top;  // split at the outermost level (1 <= top < n)
    SplitPolicy rest = SplitPolicy::First;
};

Matrix mat_zero(const Domain& d, std::size_t r, std::size_t c);
Matrix mat_identity(const Carrier& c, std::size_t n);
Matrix mat_add(const Carrier& c, const Matrix& a, const Matrix& b);
Matrix mat_mul(const Carrier& c, const Matrix& a, const Matrix& b);
bool mat_eq(const Domain& d, const Matrix& a, const Matrix& b);
Matrix submatrix(const Matrix& m, std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1);
Matrix from_blocks(const Matrix& x, const Matrix& y, const Matrix& u, const Matrix& v);

Matrix mat_star(const Carrier& c, const Matrix& m, const SplitOpt& opt = {});
Matrix mat_plus(const Carrier& c, const Matrix& m, const SplitOpt& opt = {});

Column col_zero(const Hemimodule& p, std::size_t n);
Column col_add(const Hemimodule& p, const Column& a, const Column& b);
Column mat_act(const Hemimodule& p, const Matrix& m, const Column& v);
bool col_eq(const Hemimodule& p, const Column& a, const Column& b);

Column mat_omega(const Hemimodule& p, const Matrix& m, const SplitOpt& opt = {});
// Omega restricted to runs through the first k indices.
Column mat_omega_k(const Hemimodule& p, const Matrix& m, std::size_t k, const SplitOpt& opt = {});

// Permutation i -> perm[i]; its matrix has a 1 at (i, perm[i]).
using Permutation = std::vector<std::size_t>;
Matrix permutation_matrix(const Carrier& c, const Permutation& perm);
// pi^-1 M pi by reindexing.
Matrix permutation_conjugate(const Matrix& m, const Permutation& perm);
// pi^-1 v by reindexing.
Column permute_column(const Column& v, const Permutation& perm);

struct GroupTable {
    std::string name;
    std::size_t n = 0;
    std::vector<std::size_t> table;  // table[i*n+j] = i.j, elements 0..n-1
    std::vector<std::size_t> inverse;
    std::size_t unit = 0;

    std::size_t mul(std::size_t i, std::size_t j) const { return table[i * n + j]; }
};

// Validates the group laws exhaustively and fills in unit and inverses.
GroupTable make_group(std::string name, std::size_t n, std::vector<std::size_t> table);
// Z1..Z6 and S3.
GroupTable builtin_group(const std::string& name);
std::vector<std::string> builtin_group_names();

Matrix group_matrix(const GroupTable& g, const std::vector<Value>& xs);

LawReport group_identity_check(const GroupTable& g, const Carrier& c, const LawOptions& opt,
                               Sampler s = {});
LawReport group_omega_check(const GroupTable& g, const Hemimodule& p, const LawOptions& opt,
                            Sampler s = {});

// Split independence, plus = M M*, and permutation identities on random n x n matrices.
LawReport matrix_law_checks(const Carrier& c, const Hemimodule* pair, std::size_t n,
                            const LawOptions& opt, Sampler s = {});

nlohmann::json matrix_to_json(const Domain& d, const Matrix& m);
Matrix matrix_from_json(const Domain& d, const nlohmann::json& j);

}  // namespace ow
