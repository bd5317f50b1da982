#include "matrix.hpp"

#include <algorithm>
#include <array>
#include <numeric>

namespace ow {

namespace {

std::size_t pick_split(std::size_t n, const SplitOpt& opt) {
    if (opt.top) {
        if (*opt.top < 1 || *opt.top >= n) {
            throw DomainError("split point must satisfy 1 <= k < n");
        }
        return *opt.top;
    }
    return opt.rest == SplitPolicy::First ? 1 : n / 2;
}

SplitOpt inner(const SplitOpt& opt) { return SplitOpt{std::nullopt, opt.rest}; }

void require_square(const Matrix& m, const char* op) {
    if (!m.square()) throw DomainError(std::string(op) + ": matrix must be square");
}

// Y + Y Z+  (that is, Y Z*).
Matrix times_star_m(const Carrier& c, const Matrix& y, const Matrix& zplus) {
    return mat_add(c, y, mat_mul(c, y, zplus));
}

// Z+ W + W  (that is, Z* W).
Matrix star_times_m(const Carrier& c, const Matrix& zplus, const Matrix& w) {
    return mat_add(c, mat_mul(c, zplus, w), w);
}

Column star_times_col(const Hemimodule& p, const Matrix& zplus, const Column& v) {
    return col_add(p, mat_act(p, zplus, v), v);
}

struct Blocks {
    Matrix x, y, u, v;
};

Blocks split(const Matrix& m, std::size_t k) {
    std::size_t n = m.rows;
    return {submatrix(m, 0, k, 0, k), submatrix(m, 0, k, k, n), submatrix(m, k, n, 0, k),
            submatrix(m, k, n, k, n)};
}

std::string matrix_str(const Domain& d, const Matrix& m) { return matrix_to_json(d, m).dump(); }

std::string column_str(const Hemimodule& p, const Column& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += p.vshow(v[i]);
    }
    return s + "]";
}

Matrix random_matrix(std::size_t n, Rng& rng, const Sampler& s) {
    Matrix m(n, n, Value{});
    for (auto& x : m.e) x = s(rng);
    return m;
}

Permutation random_permutation(std::size_t n, Rng& rng) {
    Permutation p(n);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

}  // namespace

Matrix mat_zero(const Domain& d, std::size_t r, std::size_t c) { return Matrix(r, c, d.zero()); }

Matrix mat_identity(const Carrier& c, std::size_t n) {
    Matrix m = mat_zero(c, n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = c.unit();
    return m;
}

Matrix mat_add(const Carrier& c, const Matrix& a, const Matrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) throw DomainError("mat_add: dimension mismatch");
    Matrix r(a.rows, a.cols, Value{});
    for (std::size_t k = 0; k < a.e.size(); ++k) r.e[k] = c.add(a.e[k], b.e[k]);
    return r;
}

Matrix mat_mul(const Carrier& c, const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) throw DomainError("mat_mul: dimension mismatch");
    Matrix r = mat_zero(c, a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t j = 0; j < b.cols; ++j) {
            Value acc = c.zero();
            for (std::size_t k = 0; k < a.cols; ++k) acc = c.add(acc, c.mul(a.at(i, k), b.at(k, j)));
            r.at(i, j) = acc;
        }
    }
    return r;
}

bool mat_eq(const Domain& d, const Matrix& a, const Matrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) return false;
    for (std::size_t k = 0; k < a.e.size(); ++k) {
        if (!d.eq(a.e[k], b.e[k])) return false;
    }
    return true;
}

Matrix submatrix(const Matrix& m, std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) {
    Matrix r(r1 - r0, c1 - c0, Value{});
    for (std::size_t i = r0; i < r1; ++i) {
        for (std::size_t j = c0; j < c1; ++j) r.at(i - r0, j - c0) = m.at(i, j);
    }
    return r;
}

Matrix from_blocks(const Matrix& x, const Matrix& y, const Matrix& u, const Matrix& v) {
    std::size_t k = x.rows;
    std::size_t n = k + v.rows;
    Matrix r(n, n, Value{});
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i < k && j < k) r.at(i, j) = x.at(i, j);
            else if (i < k) r.at(i, j) = y.at(i, j - k);
            else if (j < k) r.at(i, j) = u.at(i - k, j);
            else r.at(i, j) = v.at(i - k, j - k);
        }
    }
    return r;
}

Matrix mat_star(const Carrier& c, const Matrix& m, const SplitOpt& opt) {
    require_square(m, "mat_star");
    std::size_t n = m.rows;
    if (n == 0) return m;
    if (n == 1) return Matrix(1, 1, c.star(m.at(0, 0)));
    std::size_t k = pick_split(n, opt);
    auto [x, y, u, v] = split(m, k);
    SplitOpt in = inner(opt);
    Matrix vs = mat_star(c, v, in);
    Matrix xs = mat_star(c, x, in);
    Matrix alpha = mat_star(c, mat_add(c, x, mat_mul(c, mat_mul(c, y, vs), u)), in);
    Matrix delta = mat_star(c, mat_add(c, v, mat_mul(c, mat_mul(c, u, xs), y)), in);
    Matrix beta = mat_mul(c, mat_mul(c, alpha, y), vs);
    Matrix gamma = mat_mul(c, mat_mul(c, delta, u), xs);
    return from_blocks(alpha, beta, gamma, delta);
}

Matrix mat_plus(const Carrier& c, const Matrix& m, const SplitOpt& opt) {
    require_square(m, "mat_plus");
    std::size_t n = m.rows;
    if (n == 0) return m;
    if (n == 1) return Matrix(1, 1, c.plus(m.at(0, 0)));
    std::size_t k = pick_split(n, opt);
    auto [x, y, u, v] = split(m, k);
    SplitOpt in = inner(opt);
    Matrix yvs = times_star_m(c, y, mat_plus(c, v, in));
    Matrix uxs = times_star_m(c, u, mat_plus(c, x, in));
    Matrix alpha = mat_plus(c, mat_add(c, x, mat_mul(c, yvs, u)), in);
    Matrix delta = mat_plus(c, mat_add(c, v, mat_mul(c, uxs, y)), in);
    Matrix beta = star_times_m(c, alpha, yvs);
    Matrix gamma = star_times_m(c, delta, uxs);
    return from_blocks(alpha, beta, gamma, delta);
}

Column col_zero(const Hemimodule& p, std::size_t n) { return Column(n, p.vzero()); }

Column col_add(const Hemimodule& p, const Column& a, const Column& b) {
    Column r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = p.vadd(a[i], b[i]);
    return r;
}

Column mat_act(const Hemimodule& p, const Matrix& m, const Column& v) {
    if (m.cols != v.size()) throw DomainError("mat_act: dimension mismatch");
    Column r(m.rows);
    for (std::size_t i = 0; i < m.rows; ++i) {
        Value acc = p.vzero();
        for (std::size_t j = 0; j < m.cols; ++j) acc = p.vadd(acc, p.act(m.at(i, j), v[j]));
        r[i] = acc;
    }
    return r;
}

bool col_eq(const Hemimodule& p, const Column& a, const Column& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!p.veq(a[i], b[i])) return false;
    }
    return true;
}

Column mat_omega(const Hemimodule& p, const Matrix& m, const SplitOpt& opt) {
    require_square(m, "mat_omega");
    const Carrier& c = *p.hemiring();
    std::size_t n = m.rows;
    if (n == 0) return {};
    if (n == 1) return Column{p.omega(m.at(0, 0))};
    std::size_t k = pick_split(n, opt);
    auto [x, y, u, v] = split(m, k);
    SplitOpt in = inner(opt);
    Matrix yvs = times_star_m(c, y, mat_plus(c, v, in));
    Matrix uxs = times_star_m(c, u, mat_plus(c, x, in));
    Matrix zx = mat_add(c, x, mat_mul(c, yvs, u));
    Matrix zv = mat_add(c, v, mat_mul(c, uxs, y));
    Column top = col_add(p, star_times_col(p, mat_plus(c, zx, in), mat_act(p, y, mat_omega(p, v, in))),
                         mat_omega(p, zx, in));
    Column bot = col_add(p, star_times_col(p, mat_plus(c, zv, in), mat_act(p, u, mat_omega(p, x, in))),
                         mat_omega(p, zv, in));
    top.insert(top.end(), bot.begin(), bot.end());
    return top;
}

Column mat_omega_k(const Hemimodule& p, const Matrix& m, std::size_t k, const SplitOpt& opt) {
    require_square(m, "mat_omega_k");
    std::size_t n = m.rows;
    if (k > n) throw DomainError("mat_omega_k: k exceeds dimension");
    if (k == 0) return col_zero(p, n);
    if (k == n) return mat_omega(p, m, inner(opt));
    const Carrier& c = *p.hemiring();
    auto [x, y, u, v] = split(m, k);
    SplitOpt in = inner(opt);
    Matrix vplus = mat_plus(c, v, in);
    Matrix zx = mat_add(c, x, mat_mul(c, times_star_m(c, y, vplus), u));
    Column top = mat_omega(p, zx, in);
    Column bot = star_times_col(p, vplus, mat_act(p, u, top));
    top.insert(top.end(), bot.begin(), bot.end());
    return top;
}

Matrix permutation_matrix(const Carrier& c, const Permutation& perm) {
    Matrix m = mat_zero(c, perm.size(), perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) m.at(i, perm[i]) = c.unit();
    return m;
}

namespace {
Permutation invert(const Permutation& perm) {
    Permutation inv(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = i;
    return inv;
}
}  // namespace

Matrix permutation_conjugate(const Matrix& m, const Permutation& perm) {
    require_square(m, "permutation_conjugate");
    if (perm.size() != m.rows) throw DomainError("permutation_conjugate: dimension mismatch");
    Permutation inv = invert(perm);
    Matrix r(m.rows, m.cols, Value{});
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) r.at(i, j) = m.at(inv[i], inv[j]);
    }
    return r;
}

Column permute_column(const Column& v, const Permutation& perm) {
    if (perm.size() != v.size()) throw DomainError("permute_column: dimension mismatch");
    Permutation inv = invert(perm);
    Column r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[inv[i]];
    return r;
}

GroupTable make_group(std::string name, std::size_t n, std::vector<std::size_t> table) {
    if (n == 0 || table.size() != n * n) throw DomainError("group table has wrong size");
    for (auto x : table) {
        if (x >= n) throw DomainError("group table entry out of range");
    }
    GroupTable g{std::move(name), n, std::move(table), {}, 0};
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            for (std::size_t c = 0; c < n; ++c) {
                if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c))) {
                    throw DomainError("group table is not associative");
                }
            }
        }
    }
    bool found = false;
    for (std::size_t e = 0; e < n && !found; ++e) {
        bool ok = true;
        for (std::size_t a = 0; a < n && ok; ++a) ok = g.mul(e, a) == a && g.mul(a, e) == a;
        if (ok) {
            g.unit = e;
            found = true;
        }
    }
    if (!found) throw DomainError("group table has no unit");
    g.inverse.assign(n, n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            if (g.mul(a, b) == g.unit && g.mul(b, a) == g.unit) g.inverse[a] = b;
        }
        if (g.inverse[a] == n) throw DomainError("group table element without inverse");
    }
    return g;
}

GroupTable builtin_group(const std::string& name) {
    if (name.size() == 2 && name[0] == 'Z' && name[1] >= '1' && name[1] <= '6') {
        std::size_t n = static_cast<std::size_t>(name[1] - '0');
        std::vector<std::size_t> t(n * n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) t[i * n + j] = (i + j) % n;
        }
        return make_group(name, n, t);
    }
    if (name == "S3") {
        std::vector<std::array<std::size_t, 3>> perms;
        std::array<std::size_t, 3> p{0, 1, 2};
        do {
            perms.push_back(p);
        } while (std::next_permutation(p.begin(), p.end()));
        std::vector<std::size_t> t(36);
        for (std::size_t i = 0; i < 6; ++i) {
            for (std::size_t j = 0; j < 6; ++j) {
                std::array<std::size_t, 3> comp{};
                for (std::size_t x = 0; x < 3; ++x) comp[x] = perms[i][perms[j][x]];
                t[i * 6 + j] = static_cast<std::size_t>(
                    std::find(perms.begin(), perms.end(), comp) - perms.begin());
            }
        }
        return make_group("S3", 6, t);
    }
    throw DomainError("unknown group '" + name + "'");
}

std::vector<std::string> builtin_group_names() { return {"Z1", "Z2", "Z3", "Z4", "Z5", "Z6", "S3"}; }

Matrix group_matrix(const GroupTable& g, const std::vector<Value>& xs) {
    if (xs.size() != g.n) throw DomainError("group_matrix: expected " + std::to_string(g.n) + " elements");
    Matrix m(g.n, g.n, Value{});
    for (std::size_t i = 0; i < g.n; ++i) {
        for (std::size_t j = 0; j < g.n; ++j) m.at(i, j) = xs[g.mul(g.inverse[i], j)];
    }
    return m;
}

LawReport group_identity_check(const GroupTable& g, const Carrier& c, const LawOptions& opt,
                               Sampler s) {
    LawReport rep;
    rep.suite = "group-identity:" + g.name;
    TupleSource src(c, std::move(s), opt);
    auto ts = src.tuples(static_cast<int>(g.n));
    rep.trials = ts.size();
    auto eq = [&c](const Value& a, const Value& b) { return c.eq(a, b); };
    auto show = [&c](const Value& a) { return c.show(a); };
    for (const auto& xs : ts) {
        Value sum = c.zero();
        for (const auto& x : xs) sum = c.add(sum, x);
        Value expect = c.plus(sum);
        Matrix mp = mat_plus(c, group_matrix(g, xs));
        std::vector<std::string> in;
        for (const auto& x : xs) in.push_back(c.show(x));
        for (std::size_t i = 0; i < g.n; ++i) {
            Value row = c.zero();
            Value col = c.zero();
            for (std::size_t j = 0; j < g.n; ++j) {
                row = c.add(row, mp.at(i, j));
                col = c.add(col, mp.at(j, i));
            }
            expect_equal(rep, "plus-row-sum-" + std::to_string(i + 1), in, row, expect, eq, show);
            expect_equal(rep, "plus-column-sum-" + std::to_string(i + 1), in, col, expect, eq, show);
        }
    }
    return rep;
}

LawReport group_omega_check(const GroupTable& g, const Hemimodule& p, const LawOptions& opt,
                            Sampler s) {
    const Carrier& c = *p.hemiring();
    LawReport rep;
    rep.suite = "group-omega:" + g.name;
    TupleSource src(c, std::move(s), opt);
    auto ts = src.tuples(static_cast<int>(g.n));
    rep.trials = ts.size();
    auto eq = [&p](const Value& a, const Value& b) { return p.veq(a, b); };
    auto show = [&p](const Value& a) { return p.vshow(a); };
    for (const auto& xs : ts) {
        Value sum = c.zero();
        for (const auto& x : xs) sum = c.add(sum, x);
        Value expect = p.omega(sum);
        Column w = mat_omega(p, group_matrix(g, xs));
        std::vector<std::string> in;
        for (const auto& x : xs) in.push_back(c.show(x));
        for (std::size_t i = 0; i < g.n; ++i) {
            expect_equal(rep, "omega-entry-" + std::to_string(i + 1), in, w[i], expect, eq, show);
        }
    }
    return rep;
}

LawReport matrix_law_checks(const Carrier& c, const Hemimodule* pair, std::size_t n,
                            const LawOptions& opt, Sampler s) {
    LawReport rep;
    rep.suite = "matrix-" + std::to_string(n);
    rep.trials = opt.trials;
    if (!s) s = [&c](Rng& r) { return c.sample(r); };
    Rng rng(opt.seed);
    auto fail = [&](const std::string& law, const Matrix& m, const std::string& l,
                    const std::string& r) { rep.failures.push_back({law, {matrix_str(c, m)}, l, r}); };
    for (std::uint64_t t = 0; t < opt.trials; ++t) {
        Matrix m = random_matrix(n, rng, s);
        Permutation perm = random_permutation(n, rng);
        Matrix mp = mat_plus(c, m);
        for (std::size_t k = 2; k < n; ++k) {
            Matrix alt = mat_plus(c, m, SplitOpt{k, SplitPolicy::First});
            if (!mat_eq(c, mp, alt)) fail("plus-split-independence-k" + std::to_string(k), m, matrix_str(c, mp), matrix_str(c, alt));
        }
        Matrix bal = mat_plus(c, m, SplitOpt{std::nullopt, SplitPolicy::Balanced});
        if (!mat_eq(c, mp, bal)) fail("plus-split-independence-balanced", m, matrix_str(c, mp), matrix_str(c, bal));
        if (c.has_star() && c.one()) {
            Matrix ms = mat_star(c, m);
            for (std::size_t k = 2; k < n; ++k) {
                Matrix alt = mat_star(c, m, SplitOpt{k, SplitPolicy::First});
                if (!mat_eq(c, ms, alt)) fail("star-split-independence-k" + std::to_string(k), m, matrix_str(c, ms), matrix_str(c, alt));
            }
            Matrix balst = mat_star(c, m, SplitOpt{std::nullopt, SplitPolicy::Balanced});
            if (!mat_eq(c, ms, balst)) fail("star-split-independence-balanced", m, matrix_str(c, ms), matrix_str(c, balst));
            Matrix prod = mat_mul(c, m, ms);
            if (!mat_eq(c, mp, prod)) fail("plus-equals-m-star", m, matrix_str(c, mp), matrix_str(c, prod));
            Matrix pi = permutation_matrix(c, perm);
            Matrix pinv = permutation_matrix(c, invert(perm));
            Matrix explicit_conj = mat_mul(c, mat_mul(c, pinv, m), pi);
            Matrix conj = permutation_conjugate(m, perm);
            if (!mat_eq(c, conj, explicit_conj)) fail("conjugate-by-reindexing", m, matrix_str(c, conj), matrix_str(c, explicit_conj));
        }
        Matrix conj = permutation_conjugate(m, perm);
        Matrix lhs = mat_plus(c, conj);
        Matrix rhs = permutation_conjugate(mp, perm);
        if (!mat_eq(c, lhs, rhs)) fail("permutation-plus", m, matrix_str(c, lhs), matrix_str(c, rhs));
        if (pair != nullptr) {
            Column w = mat_omega(*pair, m);
            Column wl = mat_omega(*pair, conj);
            Column wr = permute_column(w, perm);
            if (!col_eq(*pair, wl, wr)) fail("permutation-omega", m, column_str(*pair, wl), column_str(*pair, wr));
            for (std::size_t k = 2; k < n; ++k) {
                Column alt = mat_omega(*pair, m, SplitOpt{k, SplitPolicy::First});
                if (!col_eq(*pair, w, alt)) fail("omega-split-independence-k" + std::to_string(k), m, column_str(*pair, w), column_str(*pair, alt));
            }
            Column wk = mat_omega_k(*pair, m, n);
            if (!col_eq(*pair, w, wk)) fail("omega-k-full", m, column_str(*pair, w), column_str(*pair, wk));
        }
    }
    return rep;
}

nlohmann::json matrix_to_json(const Domain& d, const Matrix& m) {
    std::vector<std::string> es;
    es.reserve(m.e.size());
    for (const auto& x : m.e) es.push_back(d.show(x));
    return {{"rows", m.rows}, {"cols", m.cols}, {"entries", es}};
}

Matrix matrix_from_json(const Domain& d, const nlohmann::json& j) {
    std::size_t r = j.at("rows").get<std::size_t>();
    std::size_t c = j.at("cols").get<std::size_t>();
    const auto& es = j.at("entries");
    if (es.size() != r * c) throw ParseError("matrix entries do not match rows*cols");
    Matrix m(r, c, Value{});
    for (std::size_t k = 0; k < es.size(); ++k) m.e[k] = d.read(es[k].get<std::string>());
    return m;
}

}  // namespace ow
