#include "ratexpr.hpp"

#include <cctype>
#include <unordered_map>

namespace ow {

namespace {

ExprPtr node(ExprNode::Kind k, ExprPtr a = nullptr, ExprPtr b = nullptr) {
    auto e = std::make_shared<ExprNode>();
    e->kind = k;
    e->a = std::move(a);
    e->b = std::move(b);
    return e;
}

}  // namespace

bool is_zero_expr(const ExprPtr& e) { return !e || e->kind == ExprNode::Kind::Zero; }

bool is_omega(const ExprPtr& e) {
    if (!e) return false;
    switch (e->kind) {
        case ExprNode::Kind::OmegaPow:
        case ExprNode::Kind::ActProd:
        case ExprNode::Kind::OmegaSum:
            return true;
        default:
            return false;
    }
}

ExprPtr ex_zero() {
    static const ExprPtr z = node(ExprNode::Kind::Zero);
    return z;
}

ExprPtr ex_letter(char c) {
    if (c < 'a' || c > 'z') throw ParseError(std::string("letters are a-z, got '") + c + "'");
    auto e = std::make_shared<ExprNode>();
    e->kind = ExprNode::Kind::Letter;
    e->letter = c;
    return e;
}

ExprPtr ex_scalar(std::uint64_t n, ExprPtr e) {
    if (is_omega(e)) throw ParseError("scalars apply to finitary expressions only");
    if (n == 0 || is_zero_expr(e)) return ex_zero();
    auto s = std::make_shared<ExprNode>();
    s->kind = ExprNode::Kind::Scalar;
    s->n = n;
    s->a = std::move(e);
    return s;
}

ExprPtr ex_sum(ExprPtr a, ExprPtr b) {
    if (is_zero_expr(a)) return b ? b : ex_zero();
    if (is_zero_expr(b)) return a;
    if (is_omega(a) || is_omega(b)) throw ParseError("cannot add finitary and omega expressions");
    return node(ExprNode::Kind::Sum, std::move(a), std::move(b));
}

ExprPtr ex_prod(ExprPtr a, ExprPtr b) {
    if (is_omega(a)) throw ParseError("an omega expression must end a product");
    if (is_omega(b)) return ex_act(std::move(a), std::move(b));
    if (is_zero_expr(a) || is_zero_expr(b)) return ex_zero();
    return node(ExprNode::Kind::Prod, std::move(a), std::move(b));
}

ExprPtr ex_plus(ExprPtr a) {
    if (is_omega(a)) throw ParseError("^+ applied to an omega expression");
    if (is_zero_expr(a)) return ex_zero();
    return node(ExprNode::Kind::Plus, std::move(a));
}

ExprPtr ex_omega(ExprPtr a) {
    if (is_omega(a)) throw ParseError("^w applied to an omega expression");
    if (is_zero_expr(a)) return ex_zero();
    return node(ExprNode::Kind::OmegaPow, std::move(a));
}

ExprPtr ex_act(ExprPtr a, ExprPtr f) {
    if (is_omega(a)) throw ParseError("an omega expression must end a product");
    if (!is_omega(f) && !is_zero_expr(f)) throw ParseError("right factor of an action must be omega");
    if (is_zero_expr(a) || is_zero_expr(f)) return ex_zero();
    return node(ExprNode::Kind::ActProd, std::move(a), std::move(f));
}

ExprPtr ex_omega_sum(ExprPtr f, ExprPtr g) {
    if (is_zero_expr(f)) return g ? g : ex_zero();
    if (is_zero_expr(g)) return f;
    if (!is_omega(f) || !is_omega(g)) throw ParseError("cannot add finitary and omega expressions");
    return node(ExprNode::Kind::OmegaSum, std::move(f), std::move(g));
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
public:
    explicit Parser(std::string_view t) : t_(t) {}

    ExprPtr run() {
        skip();
        if (pos_ == t_.size()) fail("empty expression");
        ExprPtr e = expr();
        skip();
        if (pos_ != t_.size()) fail(std::string("unexpected '") + t_[pos_] + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("syntax error at position " + std::to_string(pos_) + ": " + msg);
    }

    void skip() {
        while (pos_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[pos_]))) ++pos_;
    }

    bool peek_factor_start() {
        skip();
        if (pos_ >= t_.size()) return false;
        char c = t_[pos_];
        return c == '(' || std::isdigit(static_cast<unsigned char>(c)) || (c >= 'a' && c <= 'z');
    }

    template <class F>
    ExprPtr wrap(F&& f) {
        const std::size_t at = pos_;
        try {
            return f();
        } catch (const ParseError& e) {
            const std::string m = e.what();
            if (m.rfind("syntax error", 0) == 0) throw;
            pos_ = at;
            fail(m);
        }
    }

    ExprPtr expr() {
        ExprPtr acc = term();
        for (;;) {
            skip();
            if (pos_ < t_.size() && t_[pos_] == '+') {
                ++pos_;
                ExprPtr rhs = term();
                if (is_omega(acc) || is_omega(rhs)) {
                    acc = wrap([&] { return ex_omega_sum(acc, rhs); });
                } else {
                    acc = wrap([&] { return ex_sum(acc, rhs); });
                }
            } else {
                return acc;
            }
        }
    }

    ExprPtr term() {
        if (!peek_factor_start()) fail("expected a letter, scalar or '('");
        ExprPtr acc = factor();
        while (peek_factor_start()) {
            ExprPtr next = factor();
            acc = wrap([&] { return ex_prod(acc, next); });
        }
        return acc;
    }

    ExprPtr factor() {
        ExprPtr a = atom();
        for (;;) {
            skip();
            if (pos_ + 1 < t_.size() && t_[pos_] == '^' && t_[pos_ + 1] == '+') {
                a = wrap([&] { return ex_plus(a); });
                pos_ += 2;
            } else if (pos_ + 1 < t_.size() && t_[pos_] == '^' && t_[pos_ + 1] == 'w') {
                a = wrap([&] { return ex_omega(a); });
                pos_ += 2;
            } else if (pos_ < t_.size() && t_[pos_] == '^') {
                fail("expected '^+' or '^w'");
            } else {
                return a;
            }
        }
    }

    ExprPtr atom() {
        skip();
        if (pos_ >= t_.size()) fail("unexpected end of input");
        char c = t_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::uint64_t n = 0;
            while (pos_ < t_.size() && std::isdigit(static_cast<unsigned char>(t_[pos_]))) {
                if (n > (UINT64_MAX - 9) / 10) fail("scalar too large");
                n = n * 10 + static_cast<std::uint64_t>(t_[pos_] - '0');
                ++pos_;
            }
            skip();
            if (pos_ < t_.size() && (t_[pos_] == '(' || (t_[pos_] >= 'a' && t_[pos_] <= 'z'))) {
                ExprPtr inner = bare_atom();
                return wrap([&] { return ex_scalar(n, inner); });
            }
            if (n != 0) fail("a scalar must be followed by a letter or '('");
            return ex_zero();
        }
        return bare_atom();
    }

    ExprPtr bare_atom() {
        skip();
        char c = t_[pos_];
        if (c == '(') {
            ++pos_;
            ExprPtr e = expr();
            skip();
            if (pos_ >= t_.size() || t_[pos_] != ')') fail("expected ')'");
            ++pos_;
            return e;
        }
        if (c >= 'a' && c <= 'z') {
            ++pos_;
            return ex_letter(c);
        }
        fail(std::string("unexpected '") + c + "'");
    }

    std::string_view t_;
    std::size_t pos_ = 0;
};

int prec(const ExprPtr& e) {
    switch (e->kind) {
        case ExprNode::Kind::Sum:
        case ExprNode::Kind::OmegaSum:
            return 0;
        case ExprNode::Kind::Prod:
        case ExprNode::Kind::ActProd:
            return 1;
        default:
            return 2;
    }
}

void print_into(const ExprPtr& e, std::string& out);

void print_at(const ExprPtr& e, int min, std::string& out) {
    if (prec(e) < min) {
        out += '(';
        print_into(e, out);
        out += ')';
    } else {
        print_into(e, out);
    }
}

void print_juxt(const ExprPtr& a, const ExprPtr& b, std::string& out) {
    print_at(a, 1, out);
    std::string rhs;
    print_at(b, 2, rhs);
    if (!rhs.empty() && std::isdigit(static_cast<unsigned char>(rhs[0]))) out += ' ';
    out += rhs;
}

void print_into(const ExprPtr& e, std::string& out) {
    switch (e->kind) {
        case ExprNode::Kind::Zero:
            out += '0';
            break;
        case ExprNode::Kind::Letter:
            out += e->letter;
            break;
        case ExprNode::Kind::Scalar:
            out += std::to_string(e->n);
            if (e->a->kind == ExprNode::Kind::Letter) {
                out += e->a->letter;
            } else {
                out += '(';
                print_into(e->a, out);
                out += ')';
            }
            break;
        case ExprNode::Kind::Sum:
        case ExprNode::Kind::OmegaSum:
            print_at(e->a, 0, out);
            out += " + ";
            print_at(e->b, 1, out);
            break;
        case ExprNode::Kind::Prod:
        case ExprNode::Kind::ActProd:
            print_juxt(e->a, e->b, out);
            break;
        case ExprNode::Kind::Plus:
            print_at(e->a, 2, out);
            out += "^+";
            break;
        case ExprNode::Kind::OmegaPow:
            print_at(e->a, 2, out);
            out += "^w";
            break;
    }
}

}  // namespace

ExprPtr parse_expr(std::string_view text) { return Parser(text).run(); }

std::string print_expr(const ExprPtr& e) {
    std::string out;
    print_into(e ? e : ex_zero(), out);
    return out;
}

std::size_t expr_size(const ExprPtr& e) {
    if (!e) return 0;
    return 1 + expr_size(e->a) + expr_size(e->b);
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

SeriesPtr eval_fin_memo(const MultiHemiring& d, const ExprPtr& e,
                        std::unordered_map<const ExprNode*, SeriesPtr>& memo) {
    if (auto it = memo.find(e.get()); it != memo.end()) return it->second;
    SeriesPtr s;
    switch (e->kind) {
        case ExprNode::Kind::Zero:
            s = series_zero();
            break;
        case ExprNode::Kind::Letter:
            s = monomial(Word(1, e->letter), d.unit());
            break;
        case ExprNode::Kind::Scalar:
            s = series_scale(e->n, eval_fin_memo(d, e->a, memo));
            break;
        case ExprNode::Kind::Sum:
            s = series_sum(eval_fin_memo(d, e->a, memo), eval_fin_memo(d, e->b, memo));
            break;
        case ExprNode::Kind::Prod:
            s = cauchy_mul(eval_fin_memo(d, e->a, memo), eval_fin_memo(d, e->b, memo));
            break;
        case ExprNode::Kind::Plus:
            s = series_plus(eval_fin_memo(d, e->a, memo));
            break;
        default:
            throw DomainError("eval_fin: omega expression '" + print_expr(e) + "'");
    }
    memo.emplace(e.get(), s);
    return s;
}

OmegaPtr eval_omega_memo(const MultiHemiring& d, const ExprPtr& e,
                         std::unordered_map<const ExprNode*, SeriesPtr>& fin,
                         std::unordered_map<const ExprNode*, OmegaPtr>& memo) {
    if (auto it = memo.find(e.get()); it != memo.end()) return it->second;
    OmegaPtr o;
    switch (e->kind) {
        case ExprNode::Kind::Zero:
            o = omega_zero();
            break;
        case ExprNode::Kind::OmegaPow:
            o = omega_power(eval_fin_memo(d, e->a, fin));
            break;
        case ExprNode::Kind::ActProd:
            o = omega_act(eval_fin_memo(d, e->a, fin), eval_omega_memo(d, e->b, fin, memo));
            break;
        case ExprNode::Kind::OmegaSum:
            o = omega_sum(eval_omega_memo(d, e->a, fin, memo), eval_omega_memo(d, e->b, fin, memo));
            break;
        default:
            throw DomainError("eval_omega: finitary expression '" + print_expr(e) + "'");
    }
    memo.emplace(e.get(), o);
    return o;
}

}  // namespace

SeriesPtr eval_fin(const MultiHemiring& d, const ExprPtr& e) {
    std::unordered_map<const ExprNode*, SeriesPtr> memo;
    return eval_fin_memo(d, e, memo);
}

OmegaPtr eval_omega_support(const MultiHemiring& d, const ExprPtr& e) {
    std::unordered_map<const ExprNode*, SeriesPtr> fin;
    std::unordered_map<const ExprNode*, OmegaPtr> memo;
    return eval_omega_memo(d, e, fin, memo);
}

// ---------------------------------------------------------------------------
// Random expressions

namespace {

ExprPtr random_fin(Rng& rng, std::size_t depth, const Alphabet& a) {
    const char letter = a.letters[rng() % a.letters.size()];
    if (depth <= 1) return ex_letter(letter);
    switch (rng() % 5) {
        case 0:
            return ex_letter(letter);
        case 1:
            return ex_scalar(1 + rng() % 3, random_fin(rng, depth - 1, a));
        case 2: {
            ExprPtr l = random_fin(rng, depth - 1, a);
            return ex_sum(l, random_fin(rng, depth - 1, a));
        }
        case 3: {
            ExprPtr l = random_fin(rng, depth - 1, a);
            return ex_prod(l, random_fin(rng, depth - 1, a));
        }
        default:
            return ex_plus(random_fin(rng, depth - 1, a));
    }
}

ExprPtr random_omega(Rng& rng, std::size_t depth, const Alphabet& a) {
    if (depth <= 1) return ex_omega(ex_letter(a.letters[rng() % a.letters.size()]));
    switch (rng() % 3) {
        case 0:
            return ex_omega(random_fin(rng, depth - 1, a));
        case 1: {
            ExprPtr l = random_fin(rng, depth - 1, a);
            return ex_act(l, random_omega(rng, depth - 1, a));
        }
        default: {
            ExprPtr l = random_omega(rng, depth - 1, a);
            return ex_omega_sum(l, random_omega(rng, depth - 1, a));
        }
    }
}

}  // namespace

ExprPtr random_expr(Rng& rng, std::size_t max_depth, ExprKind kind, const Alphabet& a) {
    if (max_depth < 1) throw DomainError("random_expr: depth must be at least 1");
    if (a.letters.empty()) throw DomainError("random_expr: empty alphabet");
    return kind == ExprKind::Finitary ? random_fin(rng, max_depth, a) : random_omega(rng, max_depth, a);
}

}  // namespace ow
