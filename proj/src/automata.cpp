#include "automata.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace ow {

namespace {

void check_common(std::size_t n, std::size_t k, const Alphabet& alphabet,
                  const std::vector<Transition>& trans) {
    if (k > n) throw DomainError("automaton: k exceeds the number of states");
    for (const auto& t : trans) {
        if (t.from >= n || t.to >= n) throw DomainError("automaton: transition state out of range");
        if (!alphabet.contains(t.letter)) {
            throw DomainError(std::string("automaton: letter '") + t.letter + "' not in alphabet");
        }
    }
}

}  // namespace

void MatrixAutomaton::check() const {
    if (alpha.size() != n || beta.size() != n) throw DomainError("automaton: vector length differs from n");
    check_common(n, k, alphabet, trans);
}

void RunAutomaton::check() const {
    if (initial.size() != n || final.size() != n) throw DomainError("automaton: set size differs from n");
    check_common(n, k, alphabet, trans);
}

// ---------------------------------------------------------------------------
// Finitary behavior

namespace {

Value run_dp(const MultiHemiring& d, std::size_t n, const std::vector<std::uint64_t>& alpha,
             const std::vector<std::uint64_t>& beta, const std::vector<Transition>& trans, const Word& w) {
    if (w.empty()) throw DomainError("finitary behaviors are defined on nonempty words");
    const std::size_t len = w.size();
    std::vector<Value> r(n, d.zero());
    for (const auto& t : trans) {
        if (t.letter == w[len - 1] && beta[t.to] != 0) {
            r[t.from] = d.add(r[t.from], d.nat_scale(beta[t.to], t.weight));
        }
    }
    for (std::size_t i = len - 1; i-- > 0;) {
        std::vector<Value> next(n, d.zero());
        const std::uint64_t rest = len - 1 - i;
        for (const auto& t : trans) {
            if (t.letter != w[i] || d.is_zero(r[t.to])) continue;
            next[t.from] = d.add(next[t.from], d.prod(1, rest, t.weight, r[t.to]));
        }
        r = std::move(next);
    }
    Value acc = d.zero();
    for (std::size_t q = 0; q < n; ++q) {
        if (alpha[q] != 0) acc = d.add(acc, d.nat_scale(alpha[q], r[q]));
    }
    return acc;
}

std::vector<std::uint64_t> indicator(const std::vector<bool>& s) {
    std::vector<std::uint64_t> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i] ? 1 : 0;
    return out;
}

MultiPtr borrow(const MultiHemiring& d) {
    return MultiPtr(&d, [](const MultiHemiring*) {});
}

Matrix series_matrix(const MultiHemiring& d, const MatrixAutomaton& a) {
    std::vector<std::map<Word, Value>> cells(a.n * a.n);
    for (const auto& t : a.trans) {
        auto& cell = cells[t.from * a.n + t.to];
        Word x(1, t.letter);
        auto it = cell.find(x);
        if (it == cell.end()) {
            cell.emplace(x, t.weight);
        } else {
            it->second = d.add(it->second, t.weight);
        }
    }
    Matrix m(a.n, a.n, SeriesCarrier::wrap(series_zero()));
    for (std::size_t i = 0; i < a.n * a.n; ++i) {
        if (!cells[i].empty()) m.e[i] = SeriesCarrier::wrap(polynomial(cells[i]));
    }
    return m;
}

const SplitOpt kBalanced{std::nullopt, SplitPolicy::Balanced};

}  // namespace

Value finitary_coeff(const MultiHemiring& d, const MatrixAutomaton& a, const Word& w) {
    a.check();
    a.alphabet.check(w);
    return run_dp(d, a.n, a.alpha, a.beta, a.trans, w);
}

Value finitary_coeff(const MultiHemiring& d, const RunAutomaton& a, const Word& w) {
    a.check();
    a.alphabet.check(w);
    return run_dp(d, a.n, indicator(a.initial), indicator(a.final), a.trans, w);
}

SeriesPtr matrix_finitary_series(const MultiHemiring& d, const MatrixAutomaton& a) {
    a.check();
    SeriesCarrier sc(borrow(d), a.alphabet, kDefaultBound, "automaton-series");
    Matrix plus = mat_plus(sc, series_matrix(d, a), kBalanced);
    SeriesPtr acc = series_zero();
    for (std::size_t i = 0; i < a.n; ++i) {
        if (a.alpha[i] == 0) continue;
        for (std::size_t j = 0; j < a.n; ++j) {
            if (a.beta[j] == 0) continue;
            SeriesPtr cell = SeriesCarrier::unwrap(plus.at(i, j));
            const std::uint64_t m = a.alpha[i] * a.beta[j];
            acc = series_sum(acc, m == 1 ? cell : series_scale(m, cell));
        }
    }
    return acc;
}

Value matrix_finitary_coeff(const MultiHemiring& d, const MatrixAutomaton& a, const Word& w) {
    if (w.empty()) throw DomainError("finitary behaviors are defined on nonempty words");
    a.alphabet.check(w);
    return coeff(d, matrix_finitary_series(d, a), w);
}

// ---------------------------------------------------------------------------
// Infinitary behavior on the lasso product graph

namespace {

struct Edge {
    std::size_t to;
    Value w;
};

struct Product {
    std::size_t nodes = 0;
    std::size_t positions = 0;
    std::vector<std::vector<Edge>> out;
    std::vector<std::size_t> init;
    std::vector<bool> repeated;
};

Product build_product(const Domain& d, const MatrixAutomaton& a, const OmegaWord& w) {
    Product g;
    g.positions = w.u.size() + w.v.size();
    g.nodes = a.n * g.positions;
    g.out.resize(g.nodes);
    g.repeated.resize(g.nodes);
    auto id = [&](std::size_t q, std::size_t p) { return q * g.positions + p; };
    for (std::size_t q = 0; q < a.n; ++q) {
        for (std::size_t p = 0; p < g.positions; ++p) g.repeated[id(q, p)] = q < a.k;
        if (a.alpha[q] != 0) g.init.push_back(id(q, 0));
    }
    for (const auto& t : a.trans) {
        if (d.is_zero(t.weight)) continue;
        for (std::size_t p = 0; p < g.positions; ++p) {
            if (w.at(p) != t.letter) continue;
            const std::size_t np = p + 1 < g.positions ? p + 1 : w.u.size();
            g.out[id(t.from, p)].push_back({id(t.to, np), t.weight});
        }
    }
    return g;
}

using EdgeFilter = std::function<bool(const Edge&)>;

std::vector<bool> reach(const Product& g, const std::vector<std::size_t>& from, const EdgeFilter& keep) {
    std::vector<bool> seen(g.nodes);
    std::vector<std::size_t> stack;
    for (auto s : from) {
        if (!seen[s]) {
            seen[s] = true;
            stack.push_back(s);
        }
    }
    while (!stack.empty()) {
        auto x = stack.back();
        stack.pop_back();
        for (const auto& e : g.out[x]) {
            if (!seen[e.to] && (!keep || keep(e))) {
                seen[e.to] = true;
                stack.push_back(e.to);
            }
        }
    }
    return seen;
}

// Strongly connected components of the subgraph on `alive` nodes using kept edges.
// comp[x] = component id or -1; cyclic[c] tells whether the component has a cycle.
struct Sccs {
    std::vector<int> comp;
    std::vector<bool> cyclic;
    std::vector<bool> accepting;
};

Sccs sccs(const Product& g, const std::vector<bool>& alive, const EdgeFilter& keep) {
    Sccs r;
    r.comp.assign(g.nodes, -1);
    std::vector<int> index(g.nodes, -1);
    std::vector<int> low(g.nodes, 0);
    std::vector<bool> on(g.nodes);
    std::vector<std::size_t> st;
    int counter = 0;
    // Iterative Tarjan.
    struct Frame {
        std::size_t x;
        std::size_t edge;
    };
    for (std::size_t s = 0; s < g.nodes; ++s) {
        if (!alive[s] || index[s] >= 0) continue;
        std::vector<Frame> call{{s, 0}};
        index[s] = low[s] = counter++;
        st.push_back(s);
        on[s] = true;
        while (!call.empty()) {
            auto& f = call.back();
            if (f.edge < g.out[f.x].size()) {
                const Edge& e = g.out[f.x][f.edge++];
                if (!alive[e.to] || (keep && !keep(e))) continue;
                if (index[e.to] < 0) {
                    index[e.to] = low[e.to] = counter++;
                    st.push_back(e.to);
                    on[e.to] = true;
                    call.push_back({e.to, 0});
                } else if (on[e.to]) {
                    low[f.x] = std::min(low[f.x], index[e.to]);
                }
                continue;
            }
            const std::size_t x = f.x;
            call.pop_back();
            if (!call.empty()) low[call.back().x] = std::min(low[call.back().x], low[x]);
            if (low[x] == index[x]) {
                const int c = static_cast<int>(r.cyclic.size());
                std::size_t size = 0;
                bool acc = false;
                for (;;) {
                    std::size_t y = st.back();
                    st.pop_back();
                    on[y] = false;
                    r.comp[y] = c;
                    acc = acc || g.repeated[y];
                    ++size;
                    if (y == x) break;
                }
                bool cyc = size > 1;
                if (!cyc) {
                    for (const auto& e : g.out[x]) cyc = cyc || (e.to == x && (!keep || keep(e)));
                }
                r.cyclic.push_back(cyc);
                r.accepting.push_back(cyc && acc);
            }
        }
    }
    return r;
}

bool in_accepting(const Sccs& s, std::size_t x) {
    return s.comp[x] >= 0 && s.accepting[static_cast<std::size_t>(s.comp[x])];
}

// Nodes from which an accepting cycle (within the kept edges and alive nodes) is reachable.
std::vector<bool> good_nodes(const Product& g, const std::vector<bool>& alive, const EdgeFilter& keep) {
    Sccs s = sccs(g, alive, keep);
    std::vector<std::vector<std::size_t>> rev(g.nodes);
    for (std::size_t x = 0; x < g.nodes; ++x) {
        if (!alive[x]) continue;
        for (const auto& e : g.out[x]) {
            if (alive[e.to] && (!keep || keep(e))) rev[e.to].push_back(x);
        }
    }
    std::vector<bool> good(g.nodes);
    std::vector<std::size_t> stack;
    for (std::size_t x = 0; x < g.nodes; ++x) {
        if (alive[x] && in_accepting(s, x)) {
            good[x] = true;
            stack.push_back(x);
        }
    }
    while (!stack.empty()) {
        auto x = stack.back();
        stack.pop_back();
        for (auto y : rev[x]) {
            if (!good[y]) {
                good[y] = true;
                stack.push_back(y);
            }
        }
    }
    return good;
}

bool any_init(const Product& g, const std::vector<bool>& set) {
    for (auto s : g.init) {
        if (set[s]) return true;
    }
    return false;
}

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kInf = std::numeric_limits<double>::infinity();

// Maximum cycle mean of a strongly connected node set (Karp).
double max_cycle_mean(const Product& g, const std::vector<std::size_t>& members, const std::vector<int>& comp,
                      int c) {
    const std::size_t m = members.size();
    std::unordered_map<std::size_t, std::size_t> local;
    for (std::size_t i = 0; i < m; ++i) local[members[i]] = i;
    std::vector<std::vector<double>> dist(m + 1, std::vector<double>(m, kNegInf));
    dist[0][0] = 0.0;
    for (std::size_t step = 1; step <= m; ++step) {
        for (std::size_t i = 0; i < m; ++i) {
            if (dist[step - 1][i] == kNegInf) continue;
            for (const auto& e : g.out[members[i]]) {
                if (comp[e.to] != c) continue;
                if (std::isinf(e.w.r)) return kInf;
                const std::size_t j = local[e.to];
                dist[step][j] = std::max(dist[step][j], dist[step - 1][i] + e.w.r);
            }
        }
    }
    double best = kNegInf;
    for (std::size_t v = 0; v < m; ++v) {
        if (dist[m][v] == kNegInf) continue;
        double worst = kInf;
        for (std::size_t k = 0; k < m; ++k) {
            if (dist[k][v] == kNegInf) continue;
            worst = std::min(worst, (dist[m][v] - dist[k][v]) / static_cast<double>(m - k));
        }
        best = std::max(best, worst);
    }
    return best;
}

ValResult exact(Value v) {
    ValResult r;
    r.value = std::move(v);
    return r;
}

}  // namespace

ValResult infinitary_coeff(const OmegaValuation& v, const MatrixAutomaton& a, const OmegaWord& w,
                           std::size_t depth) {
    a.check();
    a.alphabet.check(w.u);
    a.alphabet.check(w.v);
    if (a.k == 0) return exact(v.zero());
    Product g = build_product(v, a, w);
    std::vector<bool> all(g.nodes, true);
    std::vector<bool> reachable = reach(g, g.init, nullptr);
    switch (v.kind()) {
        case InfKind::Exists: {
            auto good = good_nodes(g, reachable, nullptr);
            return exact(any_init(g, good) ? v.unit() : v.zero());
        }
        case InfKind::LatticeInf: {
            const std::int64_t top = v.unit().i;
            std::int64_t acc = 0;
            for (int b = 0; b < 63; ++b) {
                const std::int64_t bit = std::int64_t{1} << b;
                if (!(top & bit)) continue;
                EdgeFilter keep = [bit](const Edge& e) { return (e.w.i & bit) != 0; };
                auto r = reach(g, g.init, keep);
                if (any_init(g, good_nodes(g, r, keep))) acc |= bit;
            }
            return exact(Value::I(acc));
        }
        case InfKind::Sup: {
            auto good = good_nodes(g, reachable, nullptr);
            double best = kNegInf;
            for (std::size_t x = 0; x < g.nodes; ++x) {
                if (!reachable[x]) continue;
                for (const auto& e : g.out[x]) {
                    if (good[e.to]) best = std::max(best, e.w.r);
                }
            }
            return exact(best == kNegInf ? v.zero() : Value::R(best));
        }
        case InfKind::Limsup: {
            Sccs s = sccs(g, reachable, nullptr);
            double best = kNegInf;
            for (std::size_t x = 0; x < g.nodes; ++x) {
                if (!reachable[x] || !in_accepting(s, x)) continue;
                for (const auto& e : g.out[x]) {
                    if (s.comp[e.to] == s.comp[x]) best = std::max(best, e.w.r);
                }
            }
            return exact(best == kNegInf ? v.zero() : Value::R(best));
        }
        case InfKind::Liminf: {
            std::vector<double> ts;
            for (std::size_t x = 0; x < g.nodes; ++x) {
                if (!reachable[x]) continue;
                for (const auto& e : g.out[x]) ts.push_back(e.w.r);
            }
            std::sort(ts.begin(), ts.end(), std::greater<>());
            ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
            for (double t : ts) {
                EdgeFilter keep = [t](const Edge& e) { return e.w.r >= t; };
                Sccs s = sccs(g, reachable, keep);
                for (std::size_t x = 0; x < g.nodes; ++x) {
                    if (reachable[x] && in_accepting(s, x)) return exact(Value::R(t));
                }
            }
            return exact(v.zero());
        }
        case InfKind::LimsupAvg: {
            Sccs s = sccs(g, reachable, nullptr);
            std::vector<std::vector<std::size_t>> members(s.cyclic.size());
            for (std::size_t x = 0; x < g.nodes; ++x) {
                if (reachable[x] && s.comp[x] >= 0) members[static_cast<std::size_t>(s.comp[x])].push_back(x);
            }
            double best = kNegInf;
            for (std::size_t c = 0; c < members.size(); ++c) {
                if (!s.accepting[c]) continue;
                best = std::max(best, max_cycle_mean(g, members[c], s.comp, static_cast<int>(c)));
            }
            return exact(best == kNegInf ? v.zero() : Value::R(best));
        }
        case InfKind::Disc: {
            auto good = good_nodes(g, reachable, nullptr);
            if (!any_init(g, good)) return exact(v.zero());
            const double lambda = v.lambda();
            double maxw = 0.0;
            for (std::size_t x = 0; x < g.nodes; ++x) {
                if (!good[x]) continue;
                for (const auto& e : g.out[x]) {
                    if (good[e.to]) maxw = std::max(maxw, e.w.r);
                }
            }
            if (std::isinf(maxw)) return exact(Value::R(kInf));
            std::size_t rounds = depth;
            if (rounds == 0) {
                rounds = 1;
                if (maxw > 0) {
                    const double need = std::log(1e-13 * (1.0 - lambda) / maxw) / std::log(lambda);
                    rounds = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(need)));
                }
            }
            std::vector<double> val(g.nodes, 0.0);
            for (std::size_t it = 0; it < rounds; ++it) {
                std::vector<double> next(g.nodes, 0.0);
                for (std::size_t x = 0; x < g.nodes; ++x) {
                    if (!good[x]) continue;
                    double best = kNegInf;
                    for (const auto& e : g.out[x]) {
                        if (good[e.to]) best = std::max(best, e.w.r + lambda * val[e.to]);
                    }
                    next[x] = best;
                }
                val = std::move(next);
            }
            double best = kNegInf;
            for (auto s : g.init) {
                if (good[s]) best = std::max(best, val[s]);
            }
            ValResult r;
            r.value = Value::R(best);
            r.exact = false;
            // Tail of the geometric series plus an allowance for rounding.
            r.bound = std::pow(lambda, static_cast<double>(rounds)) * maxw / (1.0 - lambda) + 1e-12;
            return r;
        }
    }
    throw DomainError("no infinitary strategy for instance " + v.name());
}

ValResult infinitary_coeff(const OmegaValuation& v, const RunAutomaton& a, const OmegaWord& w,
                           std::size_t depth) {
    return infinitary_coeff(v, to_matrix_automaton(a), w, depth);
}

namespace {

// Bit p set when some run from an initial state at position p is accepting.
LassoSet automaton_lasso(const Domain& d, const MatrixAutomaton& a, const OmegaWord& w) {
    if (w.u.size() + w.v.size() > kMaxLassoPositions) throw DomainError("lasso too long");
    if (a.k == 0) return 0;
    Product g = build_product(d, a, w);
    std::vector<bool> all(g.nodes, true);
    auto good = good_nodes(g, all, nullptr);
    LassoSet out = 0;
    for (std::size_t q = 0; q < a.n; ++q) {
        if (a.alpha[q] == 0) continue;
        for (std::size_t p = 0; p < g.positions; ++p) {
            if (good[q * g.positions + p]) out |= LassoSet{1} << p;
        }
    }
    return out;
}

}  // namespace

bool matrix_infinitary_member(const MatrixAutomaton& a, const OmegaWord& w) {
    a.check();
    auto lp = language_pair(a.alphabet, kDefaultBound, 1, 1);
    auto lang = std::static_pointer_cast<const SeriesCarrier>(lp->hemiring());
    const MultiHemiring& bd = *lang->coefficients();
    MatrixAutomaton b = a;
    for (auto& t : b.trans) t.weight = bd.is_zero(t.weight) ? bd.zero() : bd.unit();
    Column col = mat_omega_k(*lp, series_matrix(bd, b), a.k, kBalanced);
    OmegaPtr acc = omega_zero();
    for (std::size_t i = 0; i < a.n; ++i) {
        if (a.alpha[i] != 0) acc = omega_sum(acc, LanguagePair::unwrap(col[i]));
    }
    return lasso_member(bd, acc, w);
}

// ---------------------------------------------------------------------------
// Conversions

MatrixAutomaton to_matrix_automaton(const RunAutomaton& b) {
    b.check();
    MatrixAutomaton a;
    a.n = b.n;
    a.k = b.k;
    a.alphabet = b.alphabet;
    a.alpha = indicator(b.initial);
    a.beta = indicator(b.final);
    a.trans = b.trans;
    return a;
}

std::vector<RunAutomaton> to_run_automata(const MatrixAutomaton& a) {
    a.check();
    std::vector<std::vector<bool>> inits;
    std::vector<std::vector<bool>> finals;
    for (std::size_t q = 0; q < a.n; ++q) {
        for (std::uint64_t c = 0; c < a.alpha[q]; ++c) {
            std::vector<bool> s(a.n);
            s[q] = true;
            inits.push_back(std::move(s));
        }
        for (std::uint64_t c = 0; c < a.beta[q]; ++c) {
            std::vector<bool> s(a.n);
            s[q] = true;
            finals.push_back(std::move(s));
        }
    }
    if (finals.empty()) finals.emplace_back(a.n, false);
    std::vector<RunAutomaton> out;
    for (const auto& i : inits) {
        for (const auto& f : finals) {
            RunAutomaton r;
            r.n = a.n;
            r.k = a.k;
            r.alphabet = a.alphabet;
            r.initial = i;
            r.final = f;
            r.trans = a.trans;
            out.push_back(std::move(r));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Compilation

namespace {

MatrixAutomaton empty_like(const Alphabet& alphabet) {
    MatrixAutomaton a;
    a.alphabet = alphabet;
    return a;
}

// Disjoint union with the repeated blocks of both operands first.
struct Merged {
    MatrixAutomaton a;
    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
};

Merged merge(const MatrixAutomaton& l, const MatrixAutomaton& r) {
    Merged m;
    m.a.alphabet = l.alphabet;
    m.a.n = l.n + r.n;
    m.a.k = l.k + r.k;
    m.left.resize(l.n);
    m.right.resize(r.n);
    for (std::size_t i = 0; i < l.n; ++i) m.left[i] = i < l.k ? i : r.k + i;
    for (std::size_t j = 0; j < r.n; ++j) m.right[j] = j < r.k ? l.k + j : l.n + j;
    m.a.alpha.assign(m.a.n, 0);
    m.a.beta.assign(m.a.n, 0);
    for (std::size_t i = 0; i < l.n; ++i) {
        m.a.alpha[m.left[i]] = l.alpha[i];
        m.a.beta[m.left[i]] = l.beta[i];
    }
    for (std::size_t j = 0; j < r.n; ++j) {
        m.a.alpha[m.right[j]] = r.alpha[j];
        m.a.beta[m.right[j]] = r.beta[j];
    }
    for (const auto& t : l.trans) m.a.trans.push_back({m.left[t.from], m.left[t.to], t.letter, t.weight});
    for (const auto& t : r.trans) m.a.trans.push_back({m.right[t.from], m.right[t.to], t.letter, t.weight});
    return m;
}

MatrixAutomaton c_letter(const MultiHemiring& d, char c, const Alphabet& alphabet) {
    if (!alphabet.contains(c)) throw DomainError(std::string("letter '") + c + "' not in alphabet");
    MatrixAutomaton a = empty_like(alphabet);
    a.n = 2;
    a.alpha = {1, 0};
    a.beta = {0, 1};
    a.trans.push_back({0, 1, c, d.unit()});
    return a;
}

// Left finitary factor chained into the right factor: finals of l feed initials of r.
MatrixAutomaton c_chain(const MultiHemiring& d, const MatrixAutomaton& l, const MatrixAutomaton& r) {
    Merged m = merge(r, l);
    auto& a = m.a;
    for (std::size_t i = 0; i < r.n; ++i) a.alpha[m.left[i]] = 0;
    for (std::size_t j = 0; j < l.n; ++j) a.beta[m.right[j]] = 0;
    for (const auto& t : l.trans) {
        if (l.beta[t.to] == 0) continue;
        for (std::size_t q = 0; q < r.n; ++q) {
            if (r.alpha[q] == 0) continue;
            a.trans.push_back({m.right[t.from], m.left[q], t.letter, d.nat_scale(l.beta[t.to] * r.alpha[q], t.weight)});
        }
    }
    return a;
}

MatrixAutomaton c_plus(const MultiHemiring& d, const MatrixAutomaton& x) {
    MatrixAutomaton a = x;
    for (const auto& t : x.trans) {
        if (x.beta[t.to] == 0) continue;
        for (std::size_t q = 0; q < x.n; ++q) {
            if (x.alpha[q] == 0) continue;
            a.trans.push_back({t.from, q, t.letter, d.nat_scale(x.beta[t.to] * x.alpha[q], t.weight)});
        }
    }
    return a;
}

// A hub state 0 marks the completion of each factor; it is the only repeated state.
MatrixAutomaton c_omega(const MultiHemiring& d, const MatrixAutomaton& x) {
    MatrixAutomaton a = empty_like(x.alphabet);
    a.n = x.n + 1;
    a.k = 1;
    a.alpha.assign(a.n, 0);
    a.beta.assign(a.n, 0);
    a.alpha[0] = 1;
    for (const auto& t : x.trans) {
        a.trans.push_back({t.from + 1, t.to + 1, t.letter, t.weight});
        if (x.beta[t.to] != 0) a.trans.push_back({t.from + 1, 0, t.letter, d.nat_scale(x.beta[t.to], t.weight)});
        if (x.alpha[t.from] != 0) {
            a.trans.push_back({0, t.to + 1, t.letter, d.nat_scale(x.alpha[t.from], t.weight)});
            if (x.beta[t.to] != 0) {
                a.trans.push_back({0, 0, t.letter, d.nat_scale(x.alpha[t.from] * x.beta[t.to], t.weight)});
            }
        }
    }
    return a;
}

MatrixAutomaton compile_rec(const MultiHemiring& d, const ExprPtr& e, const Alphabet& alphabet) {
    using K = ExprNode::Kind;
    switch (e->kind) {
        case K::Zero:
            return empty_like(alphabet);
        case K::Letter:
            return c_letter(d, e->letter, alphabet);
        case K::Scalar: {
            MatrixAutomaton a = compile_rec(d, e->a, alphabet);
            for (auto& x : a.alpha) x *= e->n;
            return a;
        }
        case K::Sum:
        case K::OmegaSum:
            return merge(compile_rec(d, e->a, alphabet), compile_rec(d, e->b, alphabet)).a;
        case K::Prod:
        case K::ActProd:
            return c_chain(d, compile_rec(d, e->a, alphabet), compile_rec(d, e->b, alphabet));
        case K::Plus:
            return c_plus(d, compile_rec(d, e->a, alphabet));
        case K::OmegaPow:
            return c_omega(d, compile_rec(d, e->a, alphabet));
    }
    throw DomainError("compile: unknown expression node");
}

}  // namespace

MatrixAutomaton trim(const MatrixAutomaton& a) {
    std::vector<bool> keep(a.n);
    std::vector<std::vector<std::size_t>> succ(a.n);
    for (const auto& t : a.trans) succ[t.from].push_back(t.to);
    std::vector<std::size_t> stack;
    for (std::size_t q = 0; q < a.n; ++q) {
        if (a.alpha[q] != 0) {
            keep[q] = true;
            stack.push_back(q);
        }
    }
    while (!stack.empty()) {
        auto q = stack.back();
        stack.pop_back();
        for (auto r : succ[q]) {
            if (!keep[r]) {
                keep[r] = true;
                stack.push_back(r);
            }
        }
    }
    std::vector<std::size_t> id(a.n, SIZE_MAX);
    MatrixAutomaton out = empty_like(a.alphabet);
    for (std::size_t q = 0; q < a.n; ++q) {
        if (!keep[q]) continue;
        id[q] = out.n++;
        if (q < a.k) ++out.k;
        out.alpha.push_back(a.alpha[q]);
        out.beta.push_back(a.beta[q]);
    }
    for (const auto& t : a.trans) {
        if (keep[t.from] && keep[t.to]) out.trans.push_back({id[t.from], id[t.to], t.letter, t.weight});
    }
    return out;
}

MatrixAutomaton compile(const MultiHemiring& d, const ExprPtr& e, const Alphabet& alphabet) {
    return trim(compile_rec(d, e, alphabet));
}

// ---------------------------------------------------------------------------
// State elimination

namespace {

ExprPtr as_expr(const Value& v) { return std::static_pointer_cast<const ExprNode>(v.p); }
Value wrap_expr(ExprPtr e) { return Value::P(std::move(e)); }

// Expressions as a hemiring; operations fold zero and otherwise build syntax.
class ExprCarrier final : public Carrier {
public:
    explicit ExprCarrier(Alphabet a) : a_(std::move(a)) {}
    std::string name() const override { return "expressions"; }
    Value zero() const override { return wrap_expr(ex_zero()); }
    Value add(const Value& x, const Value& y) const override { return wrap_expr(ex_sum(as_expr(x), as_expr(y))); }
    Value mul(const Value& x, const Value& y) const override { return wrap_expr(ex_prod(as_expr(x), as_expr(y))); }
    bool has_plus() const override { return true; }
    Value plus(const Value& x) const override { return wrap_expr(ex_plus(as_expr(x))); }
    bool eq(const Value& x, const Value& y) const override {
        return x.p == y.p || print_expr(as_expr(x)) == print_expr(as_expr(y));
    }
    std::string show(const Value& x) const override { return print_expr(as_expr(x)); }
    Value read(std::string_view t) const override { return wrap_expr(parse_expr(t)); }
    Value sample(Rng& rng) const override { return wrap_expr(random_expr(rng, 2, ExprKind::Finitary, a_)); }

private:
    Alphabet a_;
};

class ExprPair final : public Hemimodule {
public:
    explicit ExprPair(std::shared_ptr<const ExprCarrier> h) : h_(std::move(h)) {}
    std::string name() const override { return "expression-pair"; }
    CarrierPtr hemiring() const override { return h_; }
    Value vzero() const override { return wrap_expr(ex_zero()); }
    Value vadd(const Value& u, const Value& v) const override {
        return wrap_expr(ex_omega_sum(as_expr(u), as_expr(v)));
    }
    Value act(const Value& a, const Value& v) const override { return wrap_expr(ex_act(as_expr(a), as_expr(v))); }
    Value omega(const Value& a) const override { return wrap_expr(ex_omega(as_expr(a))); }
    bool veq(const Value& u, const Value& v) const override { return h_->eq(u, v); }
    std::string vshow(const Value& v) const override { return print_expr(as_expr(v)); }
    Value vsample(Rng& rng) const override {
        return wrap_expr(ex_omega(as_expr(h_->sample(rng))));
    }

private:
    std::shared_ptr<const ExprCarrier> h_;
};

std::uint64_t unit_multiple(const MultiHemiring& d, const Value& w) {
    Value acc = d.zero();
    for (std::uint64_t n = 1; n <= 64; ++n) {
        acc = d.add(acc, d.unit());
        if (d.eq(acc, w)) return n;
    }
    throw DomainError("eliminate: weight " + d.show(w) + " is not a multiple of the unit");
}

ExprPtr scaled(std::uint64_t n, const ExprPtr& e) { return n == 1 ? e : ex_scalar(n, e); }

}  // namespace

Eliminated eliminate(const MultiHemiring& d, const MatrixAutomaton& a) {
    a.check();
    auto ec = std::make_shared<const ExprCarrier>(a.alphabet);
    ExprPair ep(ec);
    Matrix m(a.n, a.n, ec->zero());
    for (const auto& t : a.trans) {
        if (d.is_zero(t.weight)) continue;
        ExprPtr cell = scaled(unit_multiple(d, t.weight), ex_letter(t.letter));
        m.at(t.from, t.to) = wrap_expr(ex_sum(as_expr(m.at(t.from, t.to)), cell));
    }
    Eliminated out{ex_zero(), ex_zero()};
    if (a.n == 0) return out;
    Matrix plus = mat_plus(*ec, m, kBalanced);
    for (std::size_t i = 0; i < a.n; ++i) {
        if (a.alpha[i] == 0) continue;
        for (std::size_t j = 0; j < a.n; ++j) {
            if (a.beta[j] == 0) continue;
            out.finitary = ex_sum(out.finitary, scaled(a.alpha[i] * a.beta[j], as_expr(plus.at(i, j))));
        }
    }
    Column col = mat_omega_k(ep, m, a.k, kBalanced);
    for (std::size_t i = 0; i < a.n; ++i) {
        for (std::uint64_t c = 0; c < a.alpha[i]; ++c) out.omega = ex_omega_sum(out.omega, as_expr(col[i]));
    }
    return out;
}

OmegaPtr eval_omega(const OmegaValuation& v, const ExprPtr& e, const Alphabet& alphabet) {
    if (!is_omega(e) && !is_zero_expr(e)) throw DomainError("eval_omega: finitary expression");
    auto a = std::make_shared<const MatrixAutomaton>(compile(v, e, alphabet));
    const OmegaValuation* vp = &v;
    return omega_query([a, vp](const OmegaWord& w) { return infinitary_coeff(*vp, *a, w).value; },
                       [a, vp](const OmegaWord& w) { return automaton_lasso(*vp, *a, w); },
                       print_expr(e));
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::json automaton_to_json(const Domain& d, const MatrixAutomaton& a) {
    nlohmann::json j;
    j["n"] = a.n;
    j["k"] = a.k;
    j["alphabet"] = nlohmann::json::array();
    for (char c : a.alphabet.letters) j["alphabet"].push_back(std::string(1, c));
    j["alpha"] = nlohmann::json::array();
    j["beta"] = nlohmann::json::array();
    for (auto x : a.alpha) j["alpha"].push_back(std::to_string(x));
    for (auto x : a.beta) j["beta"].push_back(std::to_string(x));
    j["transitions"] = nlohmann::json::array();
    for (const auto& t : a.trans) {
        j["transitions"].push_back(
            {{"from", t.from}, {"to", t.to}, {"letter", std::string(1, t.letter)}, {"weight", d.show(t.weight)}});
    }
    return j;
}

namespace {

std::uint64_t read_nat(const nlohmann::json& x) {
    if (x.is_number_unsigned()) return x.get<std::uint64_t>();
    if (x.is_number_integer()) {
        auto v = x.get<std::int64_t>();
        if (v < 0) throw ParseError("automaton vectors hold natural numbers");
        return static_cast<std::uint64_t>(v);
    }
    if (!x.is_string()) throw ParseError("automaton vectors hold natural numbers");
    const std::string s = x.get<std::string>();
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
        throw ParseError("not a natural number: '" + s + "'");
    }
    return std::stoull(s);
}

}  // namespace

MatrixAutomaton automaton_from_json(const Domain& d, const nlohmann::json& j) {
    try {
        MatrixAutomaton a;
        a.n = j.at("n").get<std::size_t>();
        a.k = j.value("k", std::size_t{0});
        for (const auto& l : j.at("alphabet")) {
            const auto s = l.get<std::string>();
            if (s.size() != 1 || s[0] < 'a' || s[0] > 'z') throw ParseError("letters are single a-z characters");
            a.alphabet.letters += s[0];
        }
        for (const auto& x : j.at("alpha")) a.alpha.push_back(read_nat(x));
        for (const auto& x : j.at("beta")) a.beta.push_back(read_nat(x));
        for (const auto& t : j.at("transitions")) {
            Transition tr;
            tr.from = t.at("from").get<std::size_t>();
            tr.to = t.at("to").get<std::size_t>();
            const auto l = t.at("letter").get<std::string>();
            if (l.size() != 1) throw ParseError("transition letters are single characters");
            tr.letter = l[0];
            if (t.contains("weight")) {
                const auto& w = t.at("weight");
                tr.weight = d.read(w.is_string() ? w.get<std::string>() : w.dump());
            } else {
                tr.weight = d.read("1");
            }
            a.trans.push_back(std::move(tr));
        }
        a.check();
        return a;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("automaton JSON: ") + e.what());
    } catch (const DomainError& e) {
        throw ParseError(e.what());
    }
}

}  // namespace ow
