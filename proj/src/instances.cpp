#include "instances.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "laws.hpp"

namespace ow {

std::string show_real(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

double read_real(std::string_view text) {
    if (text == "inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    std::string s(text);
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ParseError("not a real number: '" + s + "'");
    }
    if (used != s.size()) throw ParseError("not a real number: '" + s + "'");
    return v;
}

namespace {

std::int64_t read_int(std::string_view text) {
    std::int64_t v = 0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size() || v < 0) {
        throw ParseError("not a nonnegative integer: '" + std::string(text) + "'");
    }
    return v;
}

class BoolC final : public Carrier {
public:
    std::string name() const override { return "bool"; }
    Value zero() const override { return Value::I(0); }
    Value add(const Value& a, const Value& b) const override { return Value::I(a.i | b.i); }
    Value mul(const Value& a, const Value& b) const override { return Value::I(a.i & b.i); }
    std::optional<Value> one() const override { return Value::I(1); }
    bool has_star() const override { return true; }
    Value star(const Value&) const override { return Value::I(1); }
    bool eq(const Value& a, const Value& b) const override { return a.i == b.i; }
    std::string show(const Value& a) const override { return a.i ? "1" : "0"; }
    Value read(std::string_view t) const override {
        if (t == "0") return Value::I(0);
        if (t == "1") return Value::I(1);
        throw ParseError("not a Boolean: '" + std::string(t) + "'");
    }
    Value sample(Rng& rng) const override { return Value::I(static_cast<std::int64_t>(rng() & 1u)); }
    std::optional<std::vector<Value>> elements() const override {
        return std::vector<Value>{Value::I(0), Value::I(1)};
    }
    bool idempotent() const override { return true; }
};

class NatC final : public Carrier {
public:
    std::string name() const override { return "nat"; }
    Value zero() const override { return Value::I(0); }
    Value add(const Value& a, const Value& b) const override {
        std::int64_t r = 0;
        if (__builtin_add_overflow(a.i, b.i, &r)) throw DomainError("nat overflow in add");
        return Value::I(r);
    }
    Value mul(const Value& a, const Value& b) const override {
        std::int64_t r = 0;
        if (__builtin_mul_overflow(a.i, b.i, &r)) throw DomainError("nat overflow in mul");
        return Value::I(r);
    }
    std::optional<Value> one() const override { return Value::I(1); }
    bool eq(const Value& a, const Value& b) const override { return a.i == b.i; }
    std::string show(const Value& a) const override { return std::to_string(a.i); }
    Value read(std::string_view t) const override { return Value::I(read_int(t)); }
    Value sample(Rng& rng) const override {
        return Value::I(std::uniform_int_distribution<std::int64_t>(0, 5)(rng));
    }
};

class MinPlusC final : public Carrier {
public:
    explicit MinPlusC(std::int64_t cap) : cap_(cap) {}
    std::string name() const override { return "minplus"; }
    Value zero() const override { return Value::I(kMinPlusInf); }
    Value add(const Value& a, const Value& b) const override { return Value::I(std::min(a.i, b.i)); }
    Value mul(const Value& a, const Value& b) const override {
        if (a.i == kMinPlusInf || b.i == kMinPlusInf) return zero();
        return Value::I(std::min(cap_, a.i + b.i));
    }
    std::optional<Value> one() const override { return Value::I(0); }
    bool has_star() const override { return true; }
    Value star(const Value&) const override { return Value::I(0); }
    bool eq(const Value& a, const Value& b) const override { return a.i == b.i; }
    std::string show(const Value& a) const override {
        return a.i == kMinPlusInf ? "inf" : std::to_string(a.i);
    }
    Value read(std::string_view t) const override {
        if (t == "inf") return zero();
        return Value::I(std::min(cap_, read_int(t)));
    }
    Value sample(Rng& rng) const override {
        if (rng() % 5 == 0) return zero();
        return Value::I(std::uniform_int_distribution<std::int64_t>(0, 20)(rng));
    }
    bool idempotent() const override { return true; }

private:
    std::int64_t cap_;
};

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

class ExtRealC final : public Carrier {
public:
    std::string name() const override { return "extreal"; }
    Value zero() const override { return Value::R(kNegInf); }
    Value add(const Value& a, const Value& b) const override { return Value::R(std::max(a.r, b.r)); }
    Value mul(const Value& a, const Value& b) const override {
        if (a.r == kNegInf || b.r == kNegInf) return zero();
        return Value::R(std::max(a.r, b.r));
    }
    std::optional<Value> one() const override { return Value::R(0.0); }
    bool has_star() const override { return true; }
    Value star(const Value& a) const override { return Value::R(std::max(0.0, a.r)); }
    bool eq(const Value& a, const Value& b) const override {
        if (std::isinf(a.r) || std::isinf(b.r)) return a.r == b.r;
        return std::fabs(a.r - b.r) <= kRealTol;
    }
    std::string show(const Value& a) const override { return show_real(a.r); }
    Value read(std::string_view t) const override {
        double v = read_real(t);
        if (v < 0 && v != kNegInf) throw ParseError("extreal values are >= 0 or -inf");
        return Value::R(v);
    }
    Value sample(Rng& rng) const override {
        auto k = rng() % 8;
        if (k == 0) return zero();
        return Value::R(static_cast<double>(rng() % 16) / 4.0);
    }
    bool idempotent() const override { return true; }
};

class LatticeC final : public Carrier {
public:
    explicit LatticeC(int base) : base_(base), top_((std::int64_t{1} << base) - 1) {}
    std::string name() const override { return "lattice"; }
    Value zero() const override { return Value::I(0); }
    Value add(const Value& a, const Value& b) const override { return Value::I(a.i | b.i); }
    Value mul(const Value& a, const Value& b) const override { return Value::I(a.i & b.i); }
    std::optional<Value> one() const override { return Value::I(top_); }
    bool has_star() const override { return true; }
    Value star(const Value&) const override { return Value::I(top_); }
    bool eq(const Value& a, const Value& b) const override { return a.i == b.i; }
    std::string show(const Value& a) const override {
        std::string s = "{";
        bool first = true;
        for (int k = 0; k < base_; ++k) {
            if ((a.i >> k) & 1) {
                if (!first) s += ',';
                s += static_cast<char>('a' + k);
                first = false;
            }
        }
        return s + "}";
    }
    Value read(std::string_view t) const override {
        if (t.size() < 2 || t.front() != '{' || t.back() != '}') {
            throw ParseError("lattice literal must look like {a,c}: '" + std::string(t) + "'");
        }
        std::int64_t m = 0;
        for (char ch : t.substr(1, t.size() - 2)) {
            if (ch == ',' || ch == ' ') continue;
            int k = ch - 'a';
            if (k < 0 || k >= base_) throw ParseError("lattice element outside base set");
            m |= std::int64_t{1} << k;
        }
        return Value::I(m);
    }
    Value sample(Rng& rng) const override { return Value::I(static_cast<std::int64_t>(rng() & top_)); }
    std::optional<std::vector<Value>> elements() const override {
        std::vector<Value> out;
        for (std::int64_t m = 0; m <= top_; ++m) out.push_back(Value::I(m));
        return out;
    }
    bool idempotent() const override { return true; }

private:
    int base_;
    std::int64_t top_;
};

class ScalarPair final : public Hemimodule {
public:
    ScalarPair(CarrierPtr c, std::function<Value(const Value&)> om, std::string name)
        : c_(std::move(c)), om_(std::move(om)), name_(std::move(name)) {}
    std::string name() const override { return name_; }
    CarrierPtr hemiring() const override { return c_; }
    Value vzero() const override { return c_->zero(); }
    Value vadd(const Value& u, const Value& v) const override { return c_->add(u, v); }
    Value act(const Value& a, const Value& v) const override { return c_->mul(a, v); }
    Value omega(const Value& a) const override { return om_(a); }
    bool veq(const Value& u, const Value& v) const override { return c_->eq(u, v); }
    std::string vshow(const Value& v) const override { return c_->show(v); }
    Value vsample(Rng& rng) const override { return c_->sample(rng); }

private:
    CarrierPtr c_;
    std::function<Value(const Value&)> om_;
    std::string name_;
};

}  // namespace

CarrierPtr bool_carrier() { return std::make_shared<BoolC>(); }
CarrierPtr nat_carrier() { return std::make_shared<NatC>(); }
CarrierPtr minplus_carrier(std::int64_t cap) {
    if (cap <= 0) throw DomainError("minplus cap must be positive");
    return std::make_shared<MinPlusC>(cap);
}
CarrierPtr extreal_carrier() { return std::make_shared<ExtRealC>(); }
CarrierPtr lattice_carrier(int base) {
    if (base < 1 || base > 5) throw DomainError("lattice base size must be in 1..5");
    return std::make_shared<LatticeC>(base);
}

std::vector<std::string> instance_names() { return {"bool", "nat", "minplus", "extreal", "lattice"}; }

CarrierPtr make_instance(const std::string& name, const nlohmann::json& params) {
    auto get_int = [&](const char* key, std::int64_t dflt) -> std::int64_t {
        if (params.is_object() && params.contains(key)) return params.at(key).get<std::int64_t>();
        return dflt;
    };
    CarrierPtr c;
    if (name == "bool") {
        c = bool_carrier();
    } else if (name == "nat") {
        return nat_carrier();
    } else if (name == "minplus") {
        c = minplus_carrier(get_int("cap", kMinPlusDefaultCap));
    } else if (name == "extreal") {
        c = extreal_carrier();
    } else if (name == "lattice") {
        c = lattice_carrier(static_cast<int>(get_int("base", 3)));
    } else {
        throw DomainError("unknown instance '" + name + "'");
    }
    return plus_from_star(c);
}

HemimodulePtr scalar_pair(CarrierPtr c, std::function<Value(const Value&)> omega,
                          std::string name) {
    return std::make_shared<ScalarPair>(std::move(c), std::move(omega), std::move(name));
}

HemimodulePtr make_scalar_pair(const std::string& name, const nlohmann::json& params) {
    CarrierPtr c = make_instance(name, params);
    if (name == "bool" || name == "lattice" || name == "extreal") {
        return scalar_pair(c, [](const Value& a) { return a; }, name);
    }
    if (name == "minplus") {
        return scalar_pair(
            c, [](const Value& a) { return Value::I(a.i == 0 ? 0 : kMinPlusInf); }, name);
    }
    throw DomainError("instance '" + name + "' has no omega operation");
}

}  // namespace ow
