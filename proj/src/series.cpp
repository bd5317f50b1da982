#include "series.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "instances.hpp"

namespace ow {

void Alphabet::check(const Word& w) const {
    for (char c : w) {
        if (!contains(c)) {
            throw DomainError(std::string("letter '") + c + "' is not in the alphabet '" + letters + "'");
        }
    }
}

// ---------------------------------------------------------------------------
// Omega words

namespace {

Word primitive_root(const Word& v) {
    const std::size_t n = v.size();
    for (std::size_t d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        bool ok = true;
        for (std::size_t i = d; i < n && ok; ++i) ok = v[i] == v[i - d];
        if (ok) return v.substr(0, d);
    }
    return v;
}

bool is_letter(char c) { return std::islower(static_cast<unsigned char>(c)) != 0; }

}  // namespace

OmegaWord OmegaWord::make(Word u, Word v) {
    if (v.empty()) throw DomainError("the period of an omega word must be nonempty");
    v = primitive_root(v);
    while (!u.empty() && u.back() == v.back()) {
        u.pop_back();
        std::rotate(v.rbegin(), v.rbegin() + 1, v.rend());
    }
    return OmegaWord{std::move(u), std::move(v)};
}

OmegaWord OmegaWord::parse(std::string_view text) {
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    }
    if (s.size() < 3 || s.compare(s.size() - 2, 2, "^w") != 0) {
        throw ParseError("omega word must end in ^w: '" + std::string(text) + "'");
    }
    s.resize(s.size() - 2);
    Word u;
    Word v;
    if (s.back() == ')') {
        auto open = s.rfind('(');
        if (open == std::string::npos) throw ParseError("unbalanced parenthesis in omega word");
        u = s.substr(0, open);
        v = s.substr(open + 1, s.size() - open - 2);
    } else {
        u = s.substr(0, s.size() - 1);
        v = s.substr(s.size() - 1);
    }
    if (v.empty()) throw ParseError("empty period in omega word");
    for (char c : u + v) {
        if (!is_letter(c)) throw ParseError(std::string("bad letter '") + c + "' in omega word");
    }
    return make(std::move(u), std::move(v));
}

std::string OmegaWord::str() const {
    if (v.size() == 1) return u + v + "^w";
    return u + "(" + v + ")^w";
}

char OmegaWord::at(std::size_t pos) const {
    if (pos < u.size()) return u[pos];
    return v[(pos - u.size()) % v.size()];
}

std::vector<OmegaWord> all_lassos(const Alphabet& a, std::size_t max_u, std::size_t max_v) {
    std::vector<Word> words{""};
    std::size_t begin = 0;
    const std::size_t top = std::max(max_u, max_v);
    for (std::size_t len = 1; len <= top; ++len) {
        std::size_t end = words.size();
        for (std::size_t i = begin; i < end; ++i) {
            for (char c : a.letters) words.push_back(words[i] + c);
        }
        begin = end;
    }
    std::set<OmegaWord> out;
    for (const auto& u : words) {
        if (u.size() > max_u) continue;
        for (const auto& v : words) {
            if (v.empty() || v.size() > max_v) continue;
            out.insert(OmegaWord::make(u, v));
        }
    }
    return {out.begin(), out.end()};
}

// ---------------------------------------------------------------------------
// Word spaces

WordSpace WordSpace::all_words(const Alphabet& a, std::size_t max_len) {
    WordSpace ws;
    std::size_t begin = 0;
    for (char c : a.letters) ws.words_.emplace_back(1, c);
    for (std::size_t len = 2; len <= max_len; ++len) {
        std::size_t end = ws.words_.size();
        for (std::size_t i = begin; i < end; ++i) {
            for (char c : a.letters) ws.words_.push_back(ws.words_[i] + c);
        }
        begin = end;
    }
    if (max_len == 0) ws.words_.clear();
    ws.finish();
    return ws;
}

WordSpace WordSpace::factors(const Word& w) {
    std::set<std::pair<std::size_t, Word>> seen;
    for (std::size_t i = 0; i < w.size(); ++i) {
        for (std::size_t j = i + 1; j <= w.size(); ++j) seen.insert({j - i, w.substr(i, j - i)});
    }
    WordSpace ws;
    for (auto& [len, f] : seen) ws.words_.push_back(f);
    ws.finish();
    return ws;
}

void WordSpace::finish() {
    index_.clear();
    for (std::size_t i = 0; i < words_.size(); ++i) index_.emplace(words_[i], i);
    splits_.assign(words_.size(), {});
    for (std::size_t i = 0; i < words_.size(); ++i) {
        const Word& w = words_[i];
        for (std::size_t k = 1; k < w.size(); ++k) {
            splits_[i].push_back({index_.at(w.substr(0, k)), index_.at(w.substr(k))});
        }
    }
}

std::optional<std::size_t> WordSpace::index(const Word& w) const {
    auto it = index_.find(w);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

// ---------------------------------------------------------------------------
// Series nodes

namespace {

std::shared_ptr<SeriesNode> node(SeriesNode::Kind k) {
    auto n = std::make_shared<SeriesNode>();
    n->kind = k;
    return n;
}

}  // namespace

SeriesPtr series_zero() {
    static const SeriesPtr z = node(SeriesNode::Kind::Zero);
    return z;
}

SeriesPtr monomial(const Word& w, const Value& coeff) { return polynomial({{w, coeff}}); }

SeriesPtr polynomial(std::map<Word, Value> terms) {
    auto n = node(SeriesNode::Kind::Poly);
    n->proper = !terms.contains("");
    n->poly = std::move(terms);
    return n;
}

SeriesPtr series_sum(const SeriesPtr& a, const SeriesPtr& b) {
    auto n = node(SeriesNode::Kind::Sum);
    n->a = a;
    n->b = b;
    n->proper = a->proper && b->proper;
    return n;
}

SeriesPtr cauchy_mul(const SeriesPtr& a, const SeriesPtr& b) {
    auto n = node(SeriesNode::Kind::Prod);
    n->a = a;
    n->b = b;
    n->proper = a->proper || b->proper;
    return n;
}

SeriesPtr series_plus(const SeriesPtr& a) {
    if (!a->proper) throw DomainError("plus is defined on proper series only");
    auto n = node(SeriesNode::Kind::Plus);
    n->a = a;
    return n;
}

SeriesPtr series_scale(std::uint64_t k, const SeriesPtr& a) {
    auto n = node(SeriesNode::Kind::Scale);
    n->a = a;
    n->n = k;
    n->proper = a->proper;
    return n;
}

SeriesPtr series_query(std::function<Value(const MultiHemiring&, const Word&)> q,
                       std::function<LassoRel(const OmegaWord&)> lasso, std::string label,
                       bool proper) {
    auto n = node(SeriesNode::Kind::Query);
    n->query = std::move(q);
    n->lasso = std::move(lasso);
    n->label = std::move(label);
    n->proper = proper;
    return n;
}

// ---------------------------------------------------------------------------
// Evaluation

Value series_eps(const MultiHemiring& d, const SeriesPtr& s) {
    using K = SeriesNode::Kind;
    if (s->proper) return d.zero();
    switch (s->kind) {
        case K::Zero:
        case K::Plus:
            return d.zero();
        case K::Poly: {
            auto it = s->poly.find("");
            return it == s->poly.end() ? d.zero() : it->second;
        }
        case K::Sum:
            return d.add(series_eps(d, s->a), series_eps(d, s->b));
        case K::Prod:
            return d.prod(0, 0, series_eps(d, s->a), series_eps(d, s->b));
        case K::Scale:
            return d.nat_scale(s->n, series_eps(d, s->a));
        case K::Query:
            return s->query(d, "");
    }
    return d.zero();
}

namespace {

class TableEval {
public:
    TableEval(const MultiHemiring& d, const WordSpace& ws) : d_(d), ws_(ws) {}

    const std::vector<Value>& get(const SeriesPtr& s) {
        auto it = memo_.find(s.get());
        if (it != memo_.end()) return it->second;
        auto t = compute(s);
        return memo_.emplace(s.get(), std::move(t)).first->second;
    }

private:
    std::vector<Value> compute(const SeriesPtr& s) {
        using K = SeriesNode::Kind;
        const std::size_t n = ws_.size();
        std::vector<Value> out(n, d_.zero());
        switch (s->kind) {
            case K::Zero:
                break;
            case K::Poly:
                for (const auto& [w, c] : s->poly) {
                    if (w.empty()) continue;
                    if (auto i = ws_.index(w)) out[*i] = c;
                }
                break;
            case K::Sum: {
                const auto& ta = get(s->a);
                const auto& tb = get(s->b);
                for (std::size_t i = 0; i < n; ++i) out[i] = d_.add(ta[i], tb[i]);
                break;
            }
            case K::Prod: {
                const auto& ta = get(s->a);
                const auto& tb = get(s->b);
                for (std::size_t i = 0; i < n; ++i) {
                    Value acc = d_.zero();
                    for (const auto& sp : ws_.splits(i)) {
                        acc = d_.add(acc, d_.prod(ws_.length(sp.prefix), ws_.length(sp.suffix),
                                                  ta[sp.prefix], tb[sp.suffix]));
                    }
                    out[i] = acc;
                }
                Value ea = series_eps(d_, s->a);
                Value eb = series_eps(d_, s->b);
                if (!d_.is_zero(ea)) {
                    for (std::size_t i = 0; i < n; ++i) {
                        out[i] = d_.add(out[i], d_.prod(0, ws_.length(i), ea, tb[i]));
                    }
                }
                if (!d_.is_zero(eb)) {
                    for (std::size_t i = 0; i < n; ++i) {
                        out[i] = d_.add(out[i], d_.prod(ws_.length(i), 0, ta[i], eb));
                    }
                }
                break;
            }
            case K::Plus: {
                // P[w] = f[w] + sum over w = uv (u, v nonempty) of f[u] ._{|u|,|v|} P[v].
                const auto& ta = get(s->a);
                for (std::size_t i = 0; i < n; ++i) {
                    Value acc = ta[i];
                    for (const auto& sp : ws_.splits(i)) {
                        acc = d_.add(acc, d_.prod(ws_.length(sp.prefix), ws_.length(sp.suffix),
                                                  ta[sp.prefix], out[sp.suffix]));
                    }
                    out[i] = acc;
                }
                break;
            }
            case K::Scale: {
                const auto& ta = get(s->a);
                for (std::size_t i = 0; i < n; ++i) out[i] = d_.nat_scale(s->n, ta[i]);
                break;
            }
            case K::Query:
                for (std::size_t i = 0; i < n; ++i) out[i] = s->query(d_, ws_.word(i));
                break;
        }
        return out;
    }

    const MultiHemiring& d_;
    const WordSpace& ws_;
    std::unordered_map<const SeriesNode*, std::vector<Value>> memo_;
};

}  // namespace

std::vector<Value> series_table(const MultiHemiring& d, const SeriesPtr& s, const WordSpace& ws) {
    TableEval ev(d, ws);
    return ev.get(s);
}

std::vector<std::vector<Value>> series_tables(const MultiHemiring& d,
                                              const std::vector<SeriesPtr>& ss, const WordSpace& ws) {
    TableEval ev(d, ws);
    std::vector<std::vector<Value>> out;
    out.reserve(ss.size());
    for (const auto& s : ss) out.push_back(ev.get(s));
    return out;
}

Value coeff(const MultiHemiring& d, const SeriesPtr& s, const Word& w) {
    if (w.empty()) return series_eps(d, s);
    WordSpace ws = WordSpace::factors(w);
    TableEval ev(d, ws);
    return ev.get(s)[*ws.index(w)];
}

Value series_plus_coeff(const MultiHemiring& d, const SeriesPtr& f, const Word& w) {
    return coeff(d, series_plus(f), w);
}

LawReport bounded_eq(const MultiHemiring& d, const SeriesPtr& f, const SeriesPtr& g,
                     const Alphabet& a, std::size_t max_len) {
    LawReport rep;
    rep.suite = "bounded-eq";
    rep.bounded = true;
    Value ef = series_eps(d, f);
    Value eg = series_eps(d, g);
    rep.trials = 1;
    if (!d.eq(ef, eg)) rep.failures.push_back({"coefficient", {""}, d.show(ef), d.show(eg)});
    WordSpace ws = WordSpace::all_words(a, max_len);
    auto t = series_tables(d, {f, g}, ws);
    rep.trials += ws.size();
    for (std::size_t i = 0; i < ws.size(); ++i) {
        if (!d.eq(t[0][i], t[1][i])) {
            rep.failures.push_back({"coefficient", {ws.word(i)}, d.show(t[0][i]), d.show(t[1][i])});
        }
    }
    return rep;
}

std::string show_series(const MultiHemiring& d, const SeriesPtr& s, const Alphabet& a,
                        std::size_t max_len) {
    constexpr std::size_t kShown = 8;
    std::string out = "{";
    std::size_t count = 0;
    auto emit = [&](const Word& w, const Value& c) {
        if (d.is_zero(c)) return;
        if (count == kShown) {
            out += ", ...";
        } else if (count < kShown) {
            if (count > 0) out += ", ";
            out += (w.empty() ? std::string("eps") : w) + ": " + d.show(c);
        }
        ++count;
    };
    emit("", series_eps(d, s));
    WordSpace ws = WordSpace::all_words(a, max_len);
    auto t = series_table(d, s, ws);
    for (std::size_t i = 0; i < ws.size(); ++i) emit(ws.word(i), t[i]);
    return out + "}";
}

// ---------------------------------------------------------------------------
// Omega series

namespace {

std::shared_ptr<OmegaNode> onode(OmegaNode::Kind k) {
    auto n = std::make_shared<OmegaNode>();
    n->kind = k;
    return n;
}

}  // namespace

OmegaPtr omega_zero() {
    static const OmegaPtr z = onode(OmegaNode::Kind::Zero);
    return z;
}

OmegaPtr omega_sum(const OmegaPtr& a, const OmegaPtr& b) {
    auto n = onode(OmegaNode::Kind::Sum);
    n->a = a;
    n->b = b;
    return n;
}

OmegaPtr omega_act(const SeriesPtr& s, const OmegaPtr& v) {
    auto n = onode(OmegaNode::Kind::Act);
    n->s = s;
    n->a = v;
    return n;
}

OmegaPtr omega_power(const SeriesPtr& s) {
    if (!s->proper) throw DomainError("omega power is defined on proper series only");
    auto n = onode(OmegaNode::Kind::Omega);
    n->s = s;
    return n;
}

OmegaPtr omega_scale(std::uint64_t k, const OmegaPtr& v) {
    auto n = onode(OmegaNode::Kind::Scale);
    n->a = v;
    n->n = k;
    return n;
}

OmegaPtr omega_query(std::function<Value(const OmegaWord&)> q,
                     std::function<LassoSet(const OmegaWord&)> lasso, std::string label) {
    auto n = onode(OmegaNode::Kind::Query);
    n->query = std::move(q);
    n->lasso = std::move(lasso);
    n->label = std::move(label);
    return n;
}

namespace {

// Positions 0..P-1 of the lasso u v^w; the successor of the last one is |u|.
class LassoEval {
public:
    LassoEval(const MultiHemiring& d, const OmegaWord& w) : d_(d), w_(w) {
        p_ = w.u.size() + w.v.size();
        if (p_ > kMaxLassoPositions) throw DomainError("omega word too long for lasso evaluation");
    }

    std::size_t positions() const { return p_; }
    std::size_t next(std::size_t p) const { return p + 1 < p_ ? p + 1 : w_.u.size(); }

    const LassoRel& rel(const SeriesPtr& s) {
        auto it = rmemo_.find(s.get());
        if (it != rmemo_.end()) return it->second;
        auto r = compute(s);
        return rmemo_.emplace(s.get(), std::move(r)).first->second;
    }

    LassoSet set(const OmegaPtr& v) {
        auto it = smemo_.find(v.get());
        if (it != smemo_.end()) return it->second;
        LassoSet r = compute(v);
        smemo_.emplace(v.get(), r);
        return r;
    }

private:
    static bool bit(std::uint64_t m, std::size_t i) { return ((m >> i) & 1u) != 0; }

    LassoRel closure(LassoRel r) const {
        for (std::size_t k = 0; k < p_; ++k) {
            for (std::size_t i = 0; i < p_; ++i) {
                if (bit(r[i], k)) r[i] |= r[k];
            }
        }
        return r;
    }

    LassoRel compute(const SeriesPtr& s) {
        using K = SeriesNode::Kind;
        LassoRel out(p_, 0);
        switch (s->kind) {
            case K::Zero:
                break;
            case K::Poly:
                for (const auto& [word, c] : s->poly) {
                    if (word.empty() || d_.is_zero(c)) continue;
                    for (std::size_t p = 0; p < p_; ++p) {
                        std::size_t q = p;
                        bool ok = true;
                        for (char ch : word) {
                            if (w_.at(q) != ch) {
                                ok = false;
                                break;
                            }
                            q = next(q);
                        }
                        if (ok) out[p] |= std::uint64_t{1} << q;
                    }
                }
                break;
            case K::Sum: {
                const auto& ra = rel(s->a);
                const auto& rb = rel(s->b);
                for (std::size_t p = 0; p < p_; ++p) out[p] = ra[p] | rb[p];
                break;
            }
            case K::Prod: {
                const auto& ra = rel(s->a);
                const auto& rb = rel(s->b);
                for (std::size_t p = 0; p < p_; ++p) {
                    for (std::size_t q = 0; q < p_; ++q) {
                        if (bit(ra[p], q)) out[p] |= rb[q];
                    }
                }
                break;
            }
            case K::Plus:
                out = closure(rel(s->a));
                break;
            case K::Scale:
                if (s->n != 0) out = rel(s->a);
                break;
            case K::Query:
                if (!s->lasso) throw DomainError("series '" + s->label + "' has no lasso semantics");
                out = s->lasso(w_);
                break;
        }
        return out;
    }

    LassoSet compute(const OmegaPtr& v) {
        using K = OmegaNode::Kind;
        switch (v->kind) {
            case K::Zero:
                return 0;
            case K::Sum:
                return set(v->a) | set(v->b);
            case K::Act: {
                const auto& r = rel(v->s);
                LassoSet y = set(v->a);
                LassoSet out = 0;
                for (std::size_t p = 0; p < p_; ++p) {
                    if ((r[p] & y) != 0) out |= std::uint64_t{1} << p;
                }
                return out;
            }
            case K::Omega: {
                LassoRel c = closure(rel(v->s));
                LassoSet cyclic = 0;
                for (std::size_t p = 0; p < p_; ++p) {
                    if (bit(c[p], p)) cyclic |= std::uint64_t{1} << p;
                }
                LassoSet out = 0;
                for (std::size_t p = 0; p < p_; ++p) {
                    if (bit(cyclic, p) || (c[p] & cyclic) != 0) out |= std::uint64_t{1} << p;
                }
                return out;
            }
            case K::Scale:
                return v->n == 0 ? 0 : set(v->a);
            case K::Query:
                if (!v->lasso) throw DomainError("omega series '" + v->label + "' has no lasso semantics");
                return v->lasso(w_);
        }
        return 0;
    }

    const MultiHemiring& d_;
    const OmegaWord& w_;
    std::size_t p_ = 0;
    std::unordered_map<const SeriesNode*, LassoRel> rmemo_;
    std::unordered_map<const OmegaNode*, LassoSet> smemo_;
};

}  // namespace

LassoRel lasso_relation(const MultiHemiring& d, const SeriesPtr& s, const OmegaWord& w) {
    LassoEval ev(d, w);
    return ev.rel(s);
}

LassoSet lasso_support(const MultiHemiring& d, const OmegaPtr& v, const OmegaWord& w) {
    LassoEval ev(d, w);
    return ev.set(v);
}

bool lasso_member(const MultiHemiring& d, const OmegaPtr& v, const OmegaWord& w) {
    return (lasso_support(d, v, w) & 1u) != 0;
}

// ---------------------------------------------------------------------------
// Series carrier

SeriesCarrier::SeriesCarrier(MultiPtr d, Alphabet a, std::size_t bound, std::string name)
    : d_(std::move(d)), alpha_(std::move(a)), bound_(bound), name_(std::move(name)) {
    if (alpha_.letters.empty()) throw DomainError("series alphabet must be nonempty");
    for (char c : alpha_.letters) {
        if (!is_letter(c)) throw DomainError(std::string("alphabet letter '") + c + "' is not a-z");
    }
    space_ = std::make_shared<WordSpace>(WordSpace::all_words(alpha_, bound_));
}

SeriesPtr SeriesCarrier::unwrap(const Value& v) {
    if (!v.p) return series_zero();
    return std::static_pointer_cast<const SeriesNode>(v.p);
}

Value SeriesCarrier::zero() const { return wrap(series_zero()); }

Value SeriesCarrier::add(const Value& x, const Value& y) const {
    return wrap(series_sum(unwrap(x), unwrap(y)));
}

Value SeriesCarrier::mul(const Value& x, const Value& y) const {
    return wrap(cauchy_mul(unwrap(x), unwrap(y)));
}

Value SeriesCarrier::plus(const Value& x) const { return wrap(series_plus(unwrap(x))); }

bool SeriesCarrier::eq(const Value& x, const Value& y) const {
    auto sx = unwrap(x);
    auto sy = unwrap(y);
    if (sx == sy) return true;
    if (!d_->eq(series_eps(*d_, sx), series_eps(*d_, sy))) return false;
    auto t = series_tables(*d_, {sx, sy}, *space_);
    for (std::size_t i = 0; i < space_->size(); ++i) {
        if (!d_->eq(t[0][i], t[1][i])) return false;
    }
    return true;
}

std::string SeriesCarrier::show(const Value& x) const {
    return show_series(*d_, unwrap(x), alpha_, std::min<std::size_t>(bound_, 6));
}

std::vector<Value> SeriesCarrier::table(const Value& x, const WordSpace& ws) const {
    return series_table(*d_, unwrap(x), ws);
}

Value SeriesCarrier::coeff_at(const Value& x, const Word& w) const {
    alpha_.check(w);
    return coeff(*d_, unwrap(x), w);
}

// Polynomial literal: "{a: 2, ab}" (a bare word carries the unit), "{}" or "0".
Value SeriesCarrier::read(std::string_view text) const {
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    }
    if (s == "0" || s == "{}") return zero();
    if (s.size() < 2 || s.front() != '{' || s.back() != '}') {
        throw ParseError("series literal must look like {a: 2, ab}: '" + std::string(text) + "'");
    }
    std::map<Word, Value> terms;
    std::string body = s.substr(1, s.size() - 2);
    std::size_t start = 0;
    while (start <= body.size()) {
        auto comma = body.find(',', start);
        std::string item = body.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (item.empty()) throw ParseError("empty term in series literal");
        Word w = item;
        Value c = d_->unit();
        if (auto colon = item.find(':'); colon != std::string::npos) {
            w = item.substr(0, colon);
            c = d_->read(item.substr(colon + 1));
        }
        if (w.empty()) throw ParseError("series literals are proper: no empty word");
        for (char ch : w) {
            if (!alpha_.contains(ch)) throw ParseError(std::string("letter '") + ch + "' not in alphabet");
        }
        auto it = terms.find(w);
        terms[w] = it == terms.end() ? c : d_->add(it->second, c);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return wrap(polynomial(std::move(terms)));
}

namespace {

Value nonzero_sample(const MultiHemiring& d, Rng& rng) {
    for (int tries = 0; tries < 32; ++tries) {
        Value v = d.sample(rng);
        if (!d.is_zero(v)) return v;
    }
    return d.unit();
}

SeriesPtr sample_poly(const MultiHemiring& d, const Alphabet& a, Rng& rng) {
    std::map<Word, Value> terms;
    const int count = 1 + static_cast<int>(rng() % 2);
    for (int k = 0; k < count; ++k) {
        const std::size_t len = 1 + rng() % 2;
        Word w;
        for (std::size_t i = 0; i < len; ++i) w += a.letters[rng() % a.letters.size()];
        terms[w] = nonzero_sample(d, rng);
    }
    return polynomial(std::move(terms));
}

SeriesPtr sample_tree(const MultiHemiring& d, const Alphabet& a, Rng& rng, int depth) {
    if (depth == 0 || rng() % 3 == 0) return sample_poly(d, a, rng);
    switch (rng() % 3) {
        case 0:
            return series_sum(sample_tree(d, a, rng, depth - 1), sample_tree(d, a, rng, depth - 1));
        case 1:
            return cauchy_mul(sample_tree(d, a, rng, depth - 1), sample_tree(d, a, rng, depth - 1));
        default:
            return series_plus(sample_tree(d, a, rng, depth - 1));
    }
}

}  // namespace

Value SeriesCarrier::sample(Rng& rng) const {
    if (rng() % 8 == 0) return zero();
    return wrap(sample_tree(*d_, alpha_, rng, 2));
}

std::shared_ptr<const SeriesCarrier> series_instance(MultiPtr d, const Alphabet& a,
                                                     std::size_t bound) {
    std::string name = d->name() + "-series";
    return std::make_shared<SeriesCarrier>(std::move(d), a, bound, std::move(name));
}

std::shared_ptr<const SeriesCarrier> language_instance(const Alphabet& a, std::size_t bound) {
    auto d = std::make_shared<CarrierMulti>(bool_carrier());
    return std::make_shared<SeriesCarrier>(d, a, bound, "language");
}

namespace {

// Naturals sampled from 1..3 so that nested plus stays far from overflow.
class SmallNat final : public Carrier {
public:
    explicit SmallNat(CarrierPtr base) : base_(std::move(base)) {}
    std::string name() const override { return "nat"; }
    Value zero() const override { return base_->zero(); }
    Value add(const Value& a, const Value& b) const override { return base_->add(a, b); }
    Value mul(const Value& a, const Value& b) const override { return base_->mul(a, b); }
    std::optional<Value> one() const override { return base_->one(); }
    bool eq(const Value& a, const Value& b) const override { return base_->eq(a, b); }
    std::string show(const Value& a) const override { return base_->show(a); }
    Value read(std::string_view t) const override { return base_->read(t); }
    Value sample(Rng& rng) const override { return Value::I(1 + static_cast<std::int64_t>(rng() % 3)); }

private:
    CarrierPtr base_;
};

}  // namespace

std::shared_ptr<const SeriesCarrier> nat_series_instance(const Alphabet& a, std::size_t bound) {
    auto d = std::make_shared<CarrierMulti>(std::make_shared<SmallNat>(nat_carrier()));
    return std::make_shared<SeriesCarrier>(d, a, bound, "nat-series");
}

// ---------------------------------------------------------------------------
// Language pair

LanguagePair::LanguagePair(std::shared_ptr<const SeriesCarrier> h, std::size_t max_u,
                           std::size_t max_v)
    : h_(std::move(h)), lassos_(all_lassos(h_->alphabet(), max_u, max_v)) {}

OmegaPtr LanguagePair::unwrap(const Value& v) {
    if (!v.p) return omega_zero();
    return std::static_pointer_cast<const OmegaNode>(v.p);
}

Value LanguagePair::vzero() const { return Value::P(omega_zero()); }

Value LanguagePair::vadd(const Value& u, const Value& v) const {
    return Value::P(omega_sum(unwrap(u), unwrap(v)));
}

Value LanguagePair::act(const Value& a, const Value& v) const {
    return Value::P(omega_act(SeriesCarrier::unwrap(a), unwrap(v)));
}

Value LanguagePair::omega(const Value& a) const {
    return Value::P(omega_power(SeriesCarrier::unwrap(a)));
}

bool LanguagePair::veq(const Value& u, const Value& v) const {
    auto ou = unwrap(u);
    auto ov = unwrap(v);
    if (ou == ov) return true;
    const auto& d = *h_->coefficients();
    for (const auto& w : lassos_) {
        if (lasso_member(d, ou, w) != lasso_member(d, ov, w)) return false;
    }
    return true;
}

std::string LanguagePair::vshow(const Value& v) const {
    constexpr std::size_t kShown = 6;
    auto ov = unwrap(v);
    const auto& d = *h_->coefficients();
    std::string out = "{";
    std::size_t count = 0;
    for (const auto& w : lassos_) {
        if (!lasso_member(d, ov, w)) continue;
        if (count == kShown) {
            out += ", ...";
            break;
        }
        if (count > 0) out += ", ";
        out += w.str();
        ++count;
    }
    return out + "}";
}

Value LanguagePair::vsample(Rng& rng) const {
    switch (rng() % 4) {
        case 0:
            return vzero();
        case 1:
            return omega(h_->sample(rng));
        case 2:
            return act(h_->sample(rng), omega(h_->sample(rng)));
        default:
            return vadd(omega(h_->sample(rng)), act(h_->sample(rng), omega(h_->sample(rng))));
    }
}

std::shared_ptr<const LanguagePair> language_pair(const Alphabet& a, std::size_t bound,
                                                  std::size_t max_u, std::size_t max_v) {
    return std::make_shared<LanguagePair>(language_instance(a, bound), max_u, max_v);
}

}  // namespace ow
