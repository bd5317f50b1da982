#include "valuation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "instances.hpp"

namespace ow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNegInf = -kInf;

bool real_eq(double a, double b) {
    if (std::isinf(a) || std::isinf(b)) return a == b;
    return std::fabs(a - b) <= kRealTol;
}

}  // namespace

// ---------------------------------------------------------------------------
// Weighted sequences

void WeightedSeq::check() const {
    if (block.empty()) throw DomainError("weighted sequence needs a nonempty repeated block");
    for (const auto* part : {&prefix, &block}) {
        for (const auto& e : *part) {
            if (e.first == 0) throw DomainError("weighted sequence lengths must be positive");
        }
    }
}

WeightedSeq WeightedSeq::tail() const {
    WeightedSeq t;
    if (!prefix.empty()) {
        t.prefix.assign(prefix.begin() + 1, prefix.end());
        t.block = block;
    } else {
        t.block.assign(block.begin() + 1, block.end());
        t.block.push_back(block.front());
    }
    return t;
}

const WeightedSeq::Entry& WeightedSeq::at(std::size_t i) const {
    if (i < prefix.size()) return prefix[i];
    return block[(i - prefix.size()) % block.size()];
}

// ---------------------------------------------------------------------------
// Complete omega-hemirings

CompleteOmegaHemiring complete_bool() {
    CompleteOmegaHemiring c;
    c.h = bool_carrier();
    c.kind = InfKind::Exists;
    c.product = [](const std::vector<Value>& p, const std::vector<Value>& b) {
        std::int64_t r = 1;
        for (const auto& v : p) r &= v.i;
        for (const auto& v : b) r &= v.i;
        return Value::I(r);
    };
    return c;
}

CompleteOmegaHemiring complete_extreal() {
    CompleteOmegaHemiring c;
    c.h = extreal_carrier();
    c.kind = InfKind::Sup;
    c.product = [](const std::vector<Value>& p, const std::vector<Value>& b) {
        double r = 0.0;
        for (const auto* part : {&p, &b}) {
            for (const auto& v : *part) {
                if (v.r == kNegInf) return Value::R(kNegInf);
                r = std::max(r, v.r);
            }
        }
        return Value::R(r);
    };
    return c;
}

CompleteOmegaHemiring complete_lattice(int base) {
    CompleteOmegaHemiring c;
    c.h = lattice_carrier(base);
    c.kind = InfKind::LatticeInf;
    const std::int64_t top = (std::int64_t{1} << base) - 1;
    c.product = [top](const std::vector<Value>& p, const std::vector<Value>& b) {
        std::int64_t r = top;
        for (const auto& v : p) r &= v.i;
        for (const auto& v : b) r &= v.i;
        return Value::I(r);
    };
    return c;
}

// ---------------------------------------------------------------------------
// Instances

nlohmann::json OmegaValuation::manifest() const {
    nlohmann::json j;
    j["name"] = name();
    if (kind() == InfKind::Disc) j["lambda"] = lambda();
    j["infinitary_associative"] = infinitary_associative();
    return j;
}

std::vector<Value> OmegaValuation::sample_pool() const { return {}; }

namespace {

const char* kind_name(InfKind k) {
    switch (k) {
        case InfKind::Exists: return "bool";
        case InfKind::Sup: return "sup";
        case InfKind::Limsup: return "limsup";
        case InfKind::Liminf: return "liminf";
        case InfKind::Disc: return "disc";
        case InfKind::LimsupAvg: return "limsup-avg";
        case InfKind::LatticeInf: return "lattice-inf";
    }
    return "?";
}

// Streaming evaluation of a finite prefix of an infinite weight sequence.
class RealStream {
public:
    RealStream(InfKind kind, double lambda, std::size_t total)
        : kind_(kind), lambda_(lambda), half_(total / 2) {}

    void push(std::uint64_t len, double v) {
        if (v == kNegInf) zero_ = true;
        max_w_ = std::max(max_w_, v);
        const bool late = index_ >= half_;
        switch (kind_) {
            case InfKind::Sup:
                acc_ = std::max(acc_, v);
                break;
            case InfKind::Limsup:
                if (late) acc_ = std::max(acc_, v);
                break;
            case InfKind::Liminf:
                if (late) acc_ = first_late_ ? v : std::min(acc_, v);
                break;
            case InfKind::Disc:
                sum_ += discount_ * v;
                discount_ *= std::pow(lambda_, static_cast<double>(len));
                break;
            case InfKind::LimsupAvg: {
                weighted_ += static_cast<double>(len) * v;
                length_ += static_cast<double>(len);
                if (late) acc_ = first_late_ ? weighted_ / length_ : std::max(acc_, weighted_ / length_);
                if (late && first_late_) late_length_ = length_ - static_cast<double>(len);
                break;
            }
            default:
                throw DomainError("no streaming evaluation for this instance");
        }
        if (late) first_late_ = false;
        ++index_;
    }

    ValResult finish() const {
        ValResult r;
        r.exact = false;
        if (zero_) {
            r.value = Value::R(kNegInf);
            return r;
        }
        switch (kind_) {
            case InfKind::Disc:
                r.value = Value::R(sum_);
                r.bound = max_w_ <= 0 ? 0.0 : discount_ * max_w_ / (1.0 - lambda_);
                break;
            case InfKind::LimsupAvg:
                r.value = Value::R(acc_);
                break;
            default:
                r.value = Value::R(acc_);
                break;
        }
        return r;
    }

    double running_average() const { return length_ > 0 ? weighted_ / length_ : 0.0; }
    double late_length() const { return late_length_; }
    double partial_sum() const { return sum_; }
    double discount() const { return discount_; }

private:
    InfKind kind_;
    double lambda_;
    std::size_t half_;
    std::size_t index_ = 0;
    bool zero_ = false;
    bool first_late_ = true;
    double acc_ = 0.0;
    double max_w_ = 0.0;
    double sum_ = 0.0;
    double discount_ = 1.0;
    double weighted_ = 0.0;
    double length_ = 0.0;
    double late_length_ = 0.0;
};

// The extended nonnegative reals with sup and one of the product tables.
class RealVal final : public OmegaValuation {
public:
    RealVal(InfKind kind, double lambda) : kind_(kind), lambda_(lambda) {}

    std::string name() const override { return kind_name(kind_); }
    Value zero() const override { return Value::R(kNegInf); }
    Value add(const Value& a, const Value& b) const override { return Value::R(std::max(a.r, b.r)); }
    bool eq(const Value& a, const Value& b) const override { return real_eq(a.r, b.r); }
    std::string show(const Value& a) const override { return show_real(a.r); }
    Value read(std::string_view t) const override {
        double v = read_real(t);
        if (v < 0 && v != kNegInf) throw ParseError("weights are >= 0 or -inf");
        return Value::R(v);
    }
    Value sample(Rng& rng) const override {
        if (rng() % 8 == 0) return zero();
        return Value::R(static_cast<double>(rng() % 16) / 4.0);
    }
    bool idempotent() const override { return true; }
    Value unit() const override { return Value::R(1.0); }

    Value prod(std::uint64_t m, std::uint64_t n, const Value& a, const Value& b) const override {
        if (a.r == kNegInf || b.r == kNegInf) return zero();
        switch (kind_) {
            case InfKind::Disc:
                return Value::R(a.r + std::pow(lambda_, static_cast<double>(m)) * b.r);
            case InfKind::LimsupAvg: {
                if (std::isinf(a.r) || std::isinf(b.r)) return Value::R(kInf);
                const double dm = static_cast<double>(m);
                const double dn = static_cast<double>(n);
                return Value::R((dm * a.r + dn * b.r) / (dm + dn));
            }
            default:
                return Value::R(std::max(a.r, b.r));
        }
    }

    Value prod_omega(std::uint64_t m, const Value& a, const Value& b) const override {
        if (a.r == kNegInf || b.r == kNegInf) return zero();
        switch (kind_) {
            case InfKind::Sup:
                return Value::R(std::max(a.r, b.r));
            case InfKind::Disc:
                return Value::R(a.r + std::pow(lambda_, static_cast<double>(m)) * b.r);
            default:
                return b;
        }
    }

    ValResult val_omega(const WeightedSeq& s, Strategy st, std::size_t depth) const override {
        s.check();
        if (st == Strategy::Exact) return exact(s);
        const bool ok = st == Strategy::Truncate
                            ? (kind_ == InfKind::Sup || kind_ == InfKind::Disc)
                            : (kind_ != InfKind::Disc);
        if (!ok) {
            throw DomainError(std::string("strategy unsupported by instance ") + name());
        }
        if (depth == 0) throw DomainError("truncation depth must be positive");
        // A zero entry anywhere makes the value zero; no estimate can bound that gap.
        for (const auto* part : {&s.prefix, &s.block}) {
            for (const auto& e : *part) {
                if (e.second.r == kNegInf) return exact(s);
            }
        }
        RealStream str(kind_, lambda_, st == Strategy::Window ? depth : 0);
        for (std::size_t i = 0; i < depth; ++i) str.push(s.at(i).first, s.at(i).second.r);
        ValResult r = str.finish();
        if (r.value.r == kNegInf) return r;
        // Bounds use the whole (known) sequence, not just the consumed entries.
        double lo = kInf;
        double hi = 0.0;
        for (const auto* part : {&s.prefix, &s.block}) {
            for (const auto& e : *part) {
                if (e.second.r == kNegInf) continue;
                lo = std::min(lo, e.second.r);
                hi = std::max(hi, e.second.r);
            }
        }
        if (kind_ == InfKind::Disc) {
            r.bound = hi <= 0 ? 0.0 : str.discount() * hi / (1.0 - lambda_);
        } else if (kind_ != InfKind::LimsupAvg) {
            r.bound = hi - lo;
        }
        if (kind_ == InfKind::LimsupAvg && r.value.r != kNegInf) {
            double span = 0;
            double maxw = 0;
            for (const auto* part : {&s.prefix, &s.block}) {
                for (const auto& e : *part) {
                    span += static_cast<double>(e.first);
                    maxw = std::max(maxw, e.second.r);
                }
            }
            r.bound = str.late_length() > 0 ? span * maxw / str.late_length() : kInf;
        }
        if ((kind_ == InfKind::Sup || kind_ == InfKind::Limsup || kind_ == InfKind::Liminf) &&
            depth >= 2 * (s.prefix.size() + s.block.size())) {
            r.bound = 0.0;
        }
        return r;
    }

    InfKind kind() const override { return kind_; }
    double lambda() const override { return lambda_; }
    bool infinitary_associative() const override {
        return kind_ != InfKind::Liminf && kind_ != InfKind::LimsupAvg;
    }
    std::vector<Value> sample_pool() const override {
        std::vector<Value> out{zero()};
        for (int k = 0; k < 16; ++k) out.push_back(Value::R(k / 4.0));
        return out;
    }

private:
    ValResult exact(const WeightedSeq& s) const {
        ValResult r;
        for (const auto* part : {&s.prefix, &s.block}) {
            for (const auto& e : *part) {
                if (e.second.r == kNegInf) {
                    r.value = zero();
                    return r;
                }
            }
        }
        double v = 0.0;
        switch (kind_) {
            case InfKind::Sup:
                for (const auto* part : {&s.prefix, &s.block}) {
                    for (const auto& e : *part) v = std::max(v, e.second.r);
                }
                break;
            case InfKind::Limsup:
                for (const auto& e : s.block) v = std::max(v, e.second.r);
                break;
            case InfKind::Liminf:
                v = kInf;
                for (const auto& e : s.block) v = std::min(v, e.second.r);
                break;
            case InfKind::Disc: {
                double head = 0.0;
                double disc = 1.0;
                for (const auto& e : s.prefix) {
                    head += disc * e.second.r;
                    disc *= std::pow(lambda_, static_cast<double>(e.first));
                }
                double per = 0.0;
                double pdisc = 1.0;
                for (const auto& e : s.block) {
                    per += pdisc * e.second.r;
                    pdisc *= std::pow(lambda_, static_cast<double>(e.first));
                }
                v = head + disc * per / (1.0 - pdisc);
                break;
            }
            case InfKind::LimsupAvg: {
                double w = 0.0;
                double len = 0.0;
                bool inf = false;
                for (const auto* part : {&s.prefix, &s.block}) {
                    for (const auto& e : *part) inf = inf || std::isinf(e.second.r);
                }
                for (const auto& e : s.block) {
                    w += static_cast<double>(e.first) * e.second.r;
                    len += static_cast<double>(e.first);
                }
                v = inf ? kInf : w / len;
                break;
            }
            default:
                break;
        }
        r.value = Value::R(v);
        return r;
    }

    InfKind kind_;
    double lambda_;
};

// Valuation derived from a complete omega-hemiring: a ._{m,n} b = ab, val^w = infinite product.
class CompleteVal final : public OmegaValuation {
public:
    CompleteVal(CompleteOmegaHemiring c, std::string name) : c_(std::move(c)), name_(std::move(name)) {}

    std::string name() const override { return name_; }
    Value zero() const override { return c_.h->zero(); }
    Value add(const Value& a, const Value& b) const override { return c_.h->add(a, b); }
    bool eq(const Value& a, const Value& b) const override { return c_.h->eq(a, b); }
    std::string show(const Value& a) const override { return c_.h->show(a); }
    Value read(std::string_view t) const override { return c_.h->read(t); }
    Value sample(Rng& rng) const override { return c_.h->sample(rng); }
    std::optional<std::vector<Value>> elements() const override { return c_.h->elements(); }
    bool idempotent() const override { return c_.h->idempotent(); }
    Value unit() const override {
        if (c_.kind == InfKind::Sup) return Value::R(1.0);
        return c_.h->unit();
    }
    Value prod(std::uint64_t, std::uint64_t, const Value& a, const Value& b) const override {
        return c_.h->mul(a, b);
    }
    Value prod_omega(std::uint64_t, const Value& a, const Value& b) const override {
        return c_.h->mul(a, b);
    }
    ValResult val_omega(const WeightedSeq& s, Strategy st, std::size_t) const override {
        s.check();
        if (st != Strategy::Exact) {
            throw DomainError("strategy unsupported by instance " + name_);
        }
        std::vector<Value> p;
        std::vector<Value> b;
        for (const auto& e : s.prefix) p.push_back(e.second);
        for (const auto& e : s.block) b.push_back(e.second);
        ValResult r;
        r.value = c_.product(p, b);
        return r;
    }
    InfKind kind() const override { return c_.kind; }
    bool infinitary_associative() const override { return true; }
    std::vector<Value> sample_pool() const override {
        if (auto e = c_.h->elements()) return *e;
        return {};
    }
    const CompleteOmegaHemiring& complete() const { return c_; }

private:
    CompleteOmegaHemiring c_;
    std::string name_;
};

}  // namespace

ValuationPtr from_complete(CompleteOmegaHemiring c, std::string name) {
    return std::make_shared<CompleteVal>(std::move(c), std::move(name));
}

std::vector<std::string> valuation_names() {
    return {"bool", "sup", "limsup", "liminf", "disc", "limsup-avg", "lattice-inf", "from-complete"};
}

ValuationPtr make_valuation_instance(const std::string& name, const nlohmann::json& params) {
    auto has = [&](const char* k) { return params.is_object() && params.contains(k); };
    if (name == "sup") return std::make_shared<RealVal>(InfKind::Sup, 0.0);
    if (name == "limsup") return std::make_shared<RealVal>(InfKind::Limsup, 0.0);
    if (name == "liminf") return std::make_shared<RealVal>(InfKind::Liminf, 0.0);
    if (name == "limsup-avg") return std::make_shared<RealVal>(InfKind::LimsupAvg, 0.0);
    if (name == "disc") {
        double lambda = has("lambda") ? params.at("lambda").get<double>() : 0.5;
        if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("disc needs 0 < lambda < 1");
        return std::make_shared<RealVal>(InfKind::Disc, lambda);
    }
    if (name == "bool") return from_complete(complete_bool(), "bool");
    if (name == "lattice-inf") {
        int base = has("base") ? params.at("base").get<int>() : 3;
        return from_complete(complete_lattice(base), "lattice-inf");
    }
    if (name == "from-complete") {
        std::string h = has("h") ? params.at("h").get<std::string>() : "extreal";
        if (h == "extreal") return from_complete(complete_extreal(), "from-complete(extreal)");
        if (h == "bool") return from_complete(complete_bool(), "from-complete(bool)");
        if (h == "lattice") {
            int base = has("base") ? params.at("base").get<int>() : 3;
            return from_complete(complete_lattice(base), "from-complete(lattice)");
        }
        throw DomainError("from-complete: unknown complete omega-hemiring '" + h + "'");
    }
    throw DomainError("unknown valuation instance '" + name + "'");
}

Value induced_val(const MultiHemiring& mh, const std::vector<Value>& ds) {
    if (ds.empty()) throw DomainError("induced_val needs a nonempty sequence");
    Value acc = ds.back();
    for (std::size_t i = ds.size() - 1; i-- > 0;) {
        acc = mh.prod(1, ds.size() - 1 - i, ds[i], acc);
    }
    return acc;
}

Value val_omega(const OmegaValuation& v, const WeightedSeq& s) {
    return v.val_omega(s, Strategy::Exact, 0).value;
}

// ---------------------------------------------------------------------------
// Law suites

namespace {

std::uint64_t len_sample(Rng& rng) { return 1 + rng() % 4; }

Sampler pool_sampler(const MultiHemiring& d, Sampler s) {
    if (s) return s;
    return [&d](Rng& r) { return d.sample(r); };
}

WeightedSeq random_seq(Rng& rng, const Sampler& s, bool allow_zero_free = true) {
    (void)allow_zero_free;
    WeightedSeq q;
    const std::size_t np = rng() % 3;
    const std::size_t nb = 1 + rng() % 2;
    for (std::size_t i = 0; i < np; ++i) q.prefix.push_back({1 + rng() % 3, s(rng)});
    for (std::size_t i = 0; i < nb; ++i) q.block.push_back({1 + rng() % 3, s(rng)});
    return q;
}

std::string show_seq(const Domain& d, const WeightedSeq& q) {
    auto part = [&](const std::vector<WeightedSeq::Entry>& es) {
        std::string out;
        for (const auto& e : es) {
            if (!out.empty()) out += " ";
            out += "(" + std::to_string(e.first) + "," + d.show(e.second) + ")";
        }
        return out;
    };
    return part(q.prefix) + " [" + part(q.block) + "]^w";
}

struct Rec {
    LawReport& rep;
    const Domain& d;
    void operator()(const std::string& law, std::vector<std::string> in, const Value& l, const Value& r) const {
        if (!d.eq(l, r)) rep.failures.push_back({law, std::move(in), d.show(l), d.show(r)});
    }
};

// Left-nested product of consecutive entries: ((d1 . d2) . d3) ...
WeightedSeq::Entry group_entry(const MultiHemiring& d, const std::vector<WeightedSeq::Entry>& es) {
    std::uint64_t len = es.front().first;
    Value acc = es.front().second;
    for (std::size_t i = 1; i < es.size(); ++i) {
        acc = d.prod(len, es[i].first, acc, es[i].second);
        len += es[i].first;
    }
    return {len, acc};
}

std::vector<WeightedSeq::Entry> random_grouping(const MultiHemiring& d, Rng& rng,
                                                const std::vector<WeightedSeq::Entry>& es) {
    std::vector<WeightedSeq::Entry> out;
    std::size_t i = 0;
    while (i < es.size()) {
        std::size_t take = 1 + rng() % std::min<std::size_t>(3, es.size() - i);
        out.push_back(group_entry(d, {es.begin() + static_cast<std::ptrdiff_t>(i),
                                      es.begin() + static_cast<std::ptrdiff_t>(i + take)}));
        i += take;
    }
    return out;
}

}  // namespace

LawReport multi_hemiring_laws(const MultiHemiring& d, const LawOptions& opt, Sampler s) {
    LawReport rep;
    rep.suite = "multi-hemiring";
    Sampler smp = pool_sampler(d, std::move(s));
    Rng rng(opt.seed);
    Rec rec{rep, d};
    rep.trials = opt.trials;
    for (std::uint64_t t = 0; t < opt.trials; ++t) {
        Value a = smp(rng);
        Value b = smp(rng);
        Value c = smp(rng);
        auto k = len_sample(rng);
        auto m = len_sample(rng);
        auto n = len_sample(rng);
        std::vector<std::string> in = {d.show(a), d.show(b), d.show(c), std::to_string(k),
                                       std::to_string(m), std::to_string(n)};
        rec("zero-annihilates-left", in, d.prod(m, n, d.zero(), a), d.zero());
        rec("zero-annihilates-right", in, d.prod(m, n, a, d.zero()), d.zero());
        rec("indexed-associative", in, d.prod(k + m, n, d.prod(k, m, a, b), c),
            d.prod(k, m + n, a, d.prod(m, n, b, c)));
        rec("left-distributive", in, d.prod(m, n, a, d.add(b, c)),
            d.add(d.prod(m, n, a, b), d.prod(m, n, a, c)));
        rec("right-distributive", in, d.prod(m, n, d.add(a, b), c),
            d.add(d.prod(m, n, a, c), d.prod(m, n, b, c)));
        // Split law of the induced valuation.
        std::vector<Value> xs = {a, b};
        std::vector<Value> ys = {c, a, b};
        std::vector<Value> all = {a, b, c, a, b};
        rec("val-split", in, induced_val(d, all), d.prod(2, 3, induced_val(d, xs), induced_val(d, ys)));
    }
    return rep;
}

LawReport omega_valuation_laws(const OmegaValuation& v, const LawOptions& opt, std::size_t depth,
                               Sampler s) {
    if (depth < 2) throw DomainError("omega_valuation_laws: depth must be at least 2");
    LawReport rep = multi_hemiring_laws(v, opt, s);
    rep.suite = "omega-valuation";
    Sampler smp = pool_sampler(v, std::move(s));
    Rng rng(opt.seed ^ 0x5bd1e995u);
    Rec rec{rep, v};
    auto vo = [&](const WeightedSeq& q) { return val_omega(v, q); };
    for (std::uint64_t t = 0; t < opt.trials; ++t) {
        Value a = smp(rng);
        Value b = smp(rng);
        Value c = smp(rng);
        auto m = len_sample(rng);
        auto n = len_sample(rng);
        std::vector<std::string> in = {v.show(a), v.show(b), v.show(c), std::to_string(m),
                                       std::to_string(n)};
        rec("zero-omega-left", in, v.prod_omega(m, v.zero(), a), v.zero());
        rec("zero-omega-right", in, v.prod_omega(m, a, v.zero()), v.zero());
        rec("mixed-associative", in, v.prod_omega(m, a, v.prod_omega(n, b, c)),
            v.prod_omega(m + n, v.prod(m, n, a, b), c));
        rec("omega-left-distributive", in, v.prod_omega(m, a, v.add(b, c)),
            v.add(v.prod_omega(m, a, b), v.prod_omega(m, a, c)));
        rec("omega-right-distributive", in, v.prod_omega(m, v.add(a, b), c),
            v.add(v.prod_omega(m, a, c), v.prod_omega(m, b, c)));

        WeightedSeq q = random_seq(rng, smp);
        std::vector<std::string> qin = {show_seq(v, q)};
        rec("val-omega-unfold", qin, vo(q), v.prod_omega(q.at(0).first, q.at(0).second, vo(q.tail())));

        WeightedSeq z = q;
        auto& part = (z.prefix.empty() || rng() % 2 == 0) ? z.block : z.prefix;
        part[rng() % part.size()].second = v.zero();
        rec("val-omega-zero", {show_seq(v, z)}, vo(z), v.zero());

        // Infinitary distributivity over finite index sets, one set per position.
        {
            std::vector<std::vector<Value>> sets;
            const std::size_t positions = q.prefix.size() + q.block.size();
            for (std::size_t i = 0; i < positions; ++i) {
                std::vector<Value> set;
                const std::size_t size = 1 + rng() % 3;
                for (std::size_t k = 0; k < size; ++k) set.push_back(smp(rng));
                sets.push_back(std::move(set));
            }
            WeightedSeq summed = q;
            for (std::size_t i = 0; i < positions; ++i) {
                Value acc = v.zero();
                for (const auto& x : sets[i]) acc = v.add(acc, x);
                (i < q.prefix.size() ? summed.prefix[i] : summed.block[i - q.prefix.size()]).second = acc;
            }
            // Choice sequences constant on each position of the period suffice here:
            // both sides are monotone and the sum is idempotent.
            Value rhs = v.zero();
            std::vector<std::size_t> idx(positions, 0);
            for (;;) {
                WeightedSeq pick = q;
                for (std::size_t i = 0; i < positions; ++i) {
                    (i < q.prefix.size() ? pick.prefix[i] : pick.block[i - q.prefix.size()]).second =
                        sets[i][idx[i]];
                }
                rhs = v.add(rhs, vo(pick));
                std::size_t i = 0;
                while (i < positions && ++idx[i] == sets[i].size()) idx[i++] = 0;
                if (i == positions) break;
            }
            rec("val-omega-distributive", {show_seq(v, summed)}, vo(summed), rhs);
        }

        // Regrouping of consecutive entries aligned with the period.
        {
            WeightedSeq g;
            std::vector<WeightedSeq::Entry> blk;
            const std::size_t reps = 1 + rng() % 2;
            for (std::size_t r = 0; r < reps; ++r) blk.insert(blk.end(), q.block.begin(), q.block.end());
            if (!q.prefix.empty()) g.prefix = random_grouping(v, rng, q.prefix);
            g.block = random_grouping(v, rng, blk);
            rec("infinitary-associativity", {show_seq(v, q), show_seq(v, g)}, vo(g), vo(q));
        }
    }
    // Witness families.
    if (v.kind() == InfKind::Liminf || v.kind() == InfKind::LimsupAvg || v.kind() == InfKind::Limsup ||
        v.kind() == InfKind::Sup || v.kind() == InfKind::Disc) {
        WeightedSeq direct;
        direct.block = {{1, Value::R(0.0)}, {1, Value::R(1.0)}};
        WeightedSeq grouped;
        grouped.block = {group_entry(v, direct.block)};
        rec("infinitary-associativity", {show_seq(v, direct), show_seq(v, grouped)}, vo(grouped),
            vo(direct));
        if (v.kind() == InfKind::LimsupAvg) {
            auto cx = counterexample_regroup_avg(depth);
            // Truncated estimates on the doubling-block family, compared at the family tolerance.
            if (std::fabs(cx.direct - cx.regrouped) > 0.02) {
                rep.failures.push_back({"infinitary-associativity",
                                        {"doubling blocks", std::to_string(depth)},
                                        show_real(cx.direct), show_real(cx.regrouped)});
            }
        }
    }
    return rep;
}

LawReport complete_omega_laws(const CompleteOmegaHemiring& c, const LawOptions& opt) {
    LawReport rep;
    rep.suite = "complete-omega-hemiring";
    rep.trials = opt.trials;
    const Carrier& h = *c.h;
    Rng rng(opt.seed);
    Rec rec{rep, h};
    auto sample_vec = [&](std::size_t lo, std::size_t hi) {
        std::vector<Value> out;
        const std::size_t n = lo + rng() % (hi - lo + 1);
        for (std::size_t i = 0; i < n; ++i) out.push_back(h.sample(rng));
        return out;
    };
    auto show_vec = [&](const std::vector<Value>& p, const std::vector<Value>& b) {
        std::string out;
        for (const auto& x : p) out += h.show(x) + " ";
        out += "[";
        for (const auto& x : b) out += h.show(x) + " ";
        return out + "]^w";
    };
    for (std::uint64_t t = 0; t < opt.trials; ++t) {
        auto p = sample_vec(0, 2);
        auto b = sample_vec(1, 2);
        auto is = sample_vec(1, 3);
        Value x = h.sample(rng);
        std::vector<std::string> in = {show_vec(p, b), h.show(x)};
        Value sum = h.zero();
        Value lsum = h.zero();
        Value rsum = h.zero();
        for (const auto& a : is) {
            sum = h.add(sum, a);
            lsum = h.add(lsum, h.mul(x, a));
            rsum = h.add(rsum, h.mul(a, x));
        }
        rec("complete-left-distributive", in, h.mul(x, sum), lsum);
        rec("complete-right-distributive", in, h.mul(sum, x), rsum);
        // a1 prod_{j>=2} a_j = prod_{j>=1} a_j
        std::vector<Value> p2 = p;
        p2.insert(p2.begin(), x);
        rec("product-unfold", in, h.mul(x, c.product(p, b)), c.product(p2, b));
        // Regrouping aligned with the period.
        {
            std::vector<Value> blk = b;
            blk.insert(blk.end(), b.begin(), b.end());
            auto group = [&](const std::vector<Value>& es) {
                std::vector<Value> out;
                std::size_t i = 0;
                while (i < es.size()) {
                    std::size_t take = 1 + rng() % std::min<std::size_t>(3, es.size() - i);
                    Value acc = es[i];
                    for (std::size_t k = 1; k < take; ++k) acc = h.mul(acc, es[i + k]);
                    out.push_back(acc);
                    i += take;
                }
                return out;
            };
            rec("product-regroup", in, c.product(group(p), group(blk)), c.product(p, b));
        }
        // Infinite distributivity over periodic choices.
        {
            const std::size_t positions = p.size() + b.size();
            std::vector<std::vector<Value>> sets;
            for (std::size_t i = 0; i < positions; ++i) sets.push_back(sample_vec(1, 3));
            std::vector<Value> sp;
            std::vector<Value> sb;
            for (std::size_t i = 0; i < positions; ++i) {
                Value acc = h.zero();
                for (const auto& v : sets[i]) acc = h.add(acc, v);
                (i < p.size() ? sp : sb).push_back(acc);
            }
            Value rhs = h.zero();
            std::vector<std::size_t> idx(positions, 0);
            for (;;) {
                std::vector<Value> cp;
                std::vector<Value> cb;
                for (std::size_t i = 0; i < positions; ++i) (i < p.size() ? cp : cb).push_back(sets[i][idx[i]]);
                rhs = h.add(rhs, c.product(cp, cb));
                std::size_t i = 0;
                while (i < positions && ++idx[i] == sets[i].size()) idx[i++] = 0;
                if (i == positions) break;
            }
            rec("product-distributive", {show_vec(sp, sb)}, c.product(sp, sb), rhs);
        }
    }
    return rep;
}

LawReport induced_val_product_check(const Carrier& c, const LawOptions& opt) {
    LawReport rep;
    rep.suite = "induced-val-product";
    rep.trials = opt.trials;
    CarrierMulti d(std::shared_ptr<const Carrier>(&c, [](const Carrier*) {}));
    Rng rng(opt.seed);
    Rec rec{rep, c};
    for (std::uint64_t t = 0; t < opt.trials; ++t) {
        const std::size_t n = 1 + rng() % 5;
        std::vector<Value> ds;
        std::vector<std::string> in;
        for (std::size_t i = 0; i < n; ++i) {
            ds.push_back(c.sample(rng));
            in.push_back(c.show(ds.back()));
        }
        Value prod = ds.front();
        for (std::size_t i = 1; i < n; ++i) prod = c.mul(prod, ds[i]);
        rec("induced-val-is-product", in, induced_val(d, ds), prod);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Counterexamples

nlohmann::json CounterexampleResult::to_json() const {
    nlohmann::json j;
    j["name"] = name;
    j["direct"] = direct;
    j["regrouped"] = regrouped;
    j["trace"] = nlohmann::json::array();
    for (const auto& p : trace) {
        j["trace"].push_back({{"depth", p.depth}, {"direct", p.direct}, {"regrouped", p.regrouped}});
    }
    return j;
}

CounterexampleResult counterexample_liminf() {
    auto v = make_valuation_instance("liminf");
    CounterexampleResult r;
    r.name = "liminf-regroup";
    WeightedSeq direct;
    direct.block = {{1, Value::R(0.0)}, {1, Value::R(1.0)}};
    WeightedSeq grouped;
    grouped.block = {group_entry(*v, direct.block)};
    r.direct = val_omega(*v, direct).r;
    r.regrouped = val_omega(*v, grouped).r;
    r.trace.push_back({1, r.direct, r.regrouped});
    return r;
}

CounterexampleResult counterexample_regroup_avg(std::size_t blocks) {
    if (blocks < 1 || blocks > 40) throw DomainError("doubling-block count must be in 1..40");
    auto v = make_valuation_instance("limsup-avg");
    CounterexampleResult r;
    r.name = "avg-regroup";
    // Block b has 2^b entries of value b mod 2. Group 0 is block 0; group j is blocks 2j-1, 2j.
    const std::size_t groups = 1 + (blocks - 1) / 2;
    const std::size_t entries = (std::size_t{1} << blocks) - 1;
    RealStream direct(InfKind::LimsupAvg, 0.0, entries);
    RealStream regrouped(InfKind::LimsupAvg, 0.0, groups);
    std::uint64_t glen = 0;
    Value gval;
    std::size_t done_groups = 0;
    double last_group_avg = 0.0;
    for (std::size_t b = 0; b < blocks; ++b) {
        const double val = static_cast<double>(b % 2);
        for (std::uint64_t k = 0; k < (std::uint64_t{1} << b); ++k) {
            direct.push(1, val);
            if (glen == 0) {
                gval = Value::R(val);
            } else {
                gval = v->prod(glen, 1, gval, Value::R(val));
            }
            ++glen;
        }
        const bool closes = b == 0 || b % 2 == 0;
        if (closes) {
            regrouped.push(glen, gval.r);
            last_group_avg = regrouped.running_average();
            ++done_groups;
            glen = 0;
        }
        r.trace.push_back({b + 1, direct.running_average(), last_group_avg});
    }
    r.direct = direct.finish().value.r;
    r.regrouped = done_groups > 0 ? regrouped.finish().value.r : 0.0;
    return r;
}

CounterexampleResult counterexample_product_omega(std::size_t depth) {
    if (depth < 1 || depth > 10) throw DomainError("depth must be in 1..10");
    auto v = make_valuation_instance("limsup-avg");
    CounterexampleResult r;
    r.name = "avg-product-omega";
    auto n_of = [](std::size_t i) { return std::uint64_t{1} << (2 * i); };
    auto power_of_four = [](std::uint64_t len) {
        return len >= 4 && (len & (len - 1)) == 0 && (std::countr_zero(len) % 2 == 0);
    };
    // (r, a^{4^i}) = 1 and (s, b^{4^i}) = 0; every other coefficient is zero (-inf).
    auto run_query = [power_of_four](char letter, double weight) {
        return series_query(
            [letter, weight, power_of_four](const MultiHemiring& d, const Word& w) {
                if (w.empty() || !power_of_four(w.size())) return d.zero();
                for (char c : w) {
                    if (c != letter) return d.zero();
                }
                return Value::R(weight);
            },
            nullptr, std::string("run-") + letter);
    };
    SeriesPtr rs = run_query('a', 1.0);
    SeriesPtr ss = run_query('b', 0.0);
    std::vector<Word> u(depth + 2);
    std::vector<Word> w(depth + 2);
    for (std::size_t i = 1; i <= depth + 1; ++i) {
        u[i] = Word(n_of(i), 'a');
        w[i] = Word(n_of(i), 'b');
    }
    auto rq = [&](const Word& x) { return rs->query(*v, x); };
    auto sq = [&](const Word& x) { return ss->query(*v, x); };
    // lhs: entries (|u_i v_i|, (r,u_i) ._{|u_i|,|v_i|} (s,v_i)); rhs: (|u_1|, (r,u_1)) then
    // (|v_i u_{i+1}|, (s,v_i) ._{|v_i|,|u_{i+1}|} (r,u_{i+1})). Running averages by the
    // instance's own products.
    Value lhs;
    std::uint64_t llen = 0;
    Value rhs = rq(u[1]);
    std::uint64_t rlen = n_of(1);
    for (std::size_t i = 1; i <= depth; ++i) {
        const std::uint64_t ni = n_of(i);
        const std::uint64_t nj = n_of(i + 1);
        Value le = v->prod(ni, ni, rq(u[i]), sq(w[i]));
        lhs = llen == 0 ? le : v->prod(llen, 2 * ni, lhs, le);
        llen += 2 * ni;
        Value re = v->prod(ni, nj, sq(w[i]), rq(u[i + 1]));
        rhs = v->prod(rlen, ni + nj, rhs, re);
        rlen += ni + nj;
        r.trace.push_back({i, lhs.r, rhs.r});
    }
    r.direct = lhs.r;
    r.regrouped = rhs.r;
    return r;
}

Value omega_left_product(const OmegaValuation& v, const SeriesPtr& r,
                         const std::function<Value(const OmegaWord&)>& s, const OmegaWord& w) {
    if (r->kind == SeriesNode::Kind::Zero) return v.zero();
    if (r->kind != SeriesNode::Kind::Poly) {
        throw DomainError("omega coefficient query needs a polynomial left factor or an automaton");
    }
    Value acc = v.zero();
    for (const auto& [u, c] : r->poly) {
        if (u.empty() || v.is_zero(c)) continue;
        bool prefix = true;
        for (std::size_t i = 0; i < u.size() && prefix; ++i) prefix = w.at(i) == u[i];
        if (!prefix) continue;
        OmegaWord rest;
        if (u.size() <= w.u.size()) {
            rest = OmegaWord::make(w.u.substr(u.size()), w.v);
        } else {
            const std::size_t shift = (u.size() - w.u.size()) % w.v.size();
            rest = OmegaWord::make("", w.v.substr(shift) + w.v.substr(0, shift));
        }
        acc = v.add(acc, v.prod_omega(u.size(), c, s(rest)));
    }
    return acc;
}

}  // namespace ow
