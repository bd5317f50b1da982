#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace ow {

using Rng = std::mt19937_64;

constexpr std::uint64_t kDefaultSeed = 42;
constexpr double kRealTol = 1e-9;

// Base for boxed carrier payloads (series, formal sums, ...).
struct Obj {
    virtual ~Obj() = default;
};

// A carrier element. Which field is meaningful is decided by the carrier.
struct Value {
    std::int64_t i = 0;
    double r = 0.0;
    std::shared_ptr<const Obj> p;

    static Value I(std::int64_t v) { Value x; x.i = v; return x; }
    static Value R(double v) { Value x; x.r = v; return x; }
    static Value P(std::shared_ptr<const Obj> o) { Value x; x.p = std::move(o); return x; }

    template <class T>
    const T& as() const { return static_cast<const T&>(*p); }
};

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DomainError : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};

// Commutative monoid with codec, sampler and carrier-supplied equality.
class Domain {
public:
    virtual ~Domain() = default;
    virtual std::string name() const = 0;
    virtual Value zero() const = 0;
    virtual Value add(const Value& a, const Value& b) const = 0;
    virtual bool eq(const Value& a, const Value& b) const = 0;
    virtual std::string show(const Value& a) const = 0;
    virtual Value read(std::string_view text) const;
    virtual Value sample(Rng& rng) const = 0;
    // Full element list for finite carriers (used for exhaustive law checks).
    virtual std::optional<std::vector<Value>> elements() const { return std::nullopt; }
    virtual bool idempotent() const { return false; }

    bool is_zero(const Value& a) const { return eq(a, zero()); }
    // n-fold sum: the natural action of N.
    Value nat_scale(std::uint64_t n, const Value& a) const;
};

// Hemiring with optional unit, star and plus.
class Carrier : public Domain {
public:
    virtual Value mul(const Value& a, const Value& b) const = 0;
    virtual std::optional<Value> one() const { return std::nullopt; }
    virtual bool has_star() const { return false; }
    virtual Value star(const Value& a) const;
    virtual bool has_plus() const { return false; }
    virtual Value plus(const Value& a) const;

    Value unit() const;
};
using CarrierPtr = std::shared_ptr<const Carrier>;

// Commutative monoid with length-indexed products a ._{m,n} b.
class MultiHemiring : public Domain {
public:
    virtual Value prod(std::uint64_t m, std::uint64_t n, const Value& a, const Value& b) const = 0;
    // Weight carried by a bare letter.
    virtual Value unit() const = 0;
};
using MultiPtr = std::shared_ptr<const MultiHemiring>;

// Multi-hemiring whose indexed products all equal the carrier product.
class CarrierMulti final : public MultiHemiring {
public:
    explicit CarrierMulti(CarrierPtr c) : c_(std::move(c)) {}
    std::string name() const override { return c_->name(); }
    Value zero() const override { return c_->zero(); }
    Value add(const Value& a, const Value& b) const override { return c_->add(a, b); }
    bool eq(const Value& a, const Value& b) const override { return c_->eq(a, b); }
    std::string show(const Value& a) const override { return c_->show(a); }
    Value read(std::string_view t) const override { return c_->read(t); }
    Value sample(Rng& rng) const override { return c_->sample(rng); }
    std::optional<std::vector<Value>> elements() const override { return c_->elements(); }
    bool idempotent() const override { return c_->idempotent(); }
    Value prod(std::uint64_t, std::uint64_t, const Value& a, const Value& b) const override {
        return c_->mul(a, b);
    }
    Value unit() const override { return c_->unit(); }
    const CarrierPtr& carrier() const { return c_; }

private:
    CarrierPtr c_;
};

// Hemiring H acting on a commutative monoid V, with omega : H -> V.
class Hemimodule {
public:
    virtual ~Hemimodule() = default;
    virtual std::string name() const = 0;
    virtual CarrierPtr hemiring() const = 0;
    virtual Value vzero() const = 0;
    virtual Value vadd(const Value& u, const Value& v) const = 0;
    virtual Value act(const Value& a, const Value& v) const = 0;
    virtual Value omega(const Value& a) const = 0;
    virtual bool veq(const Value& u, const Value& v) const = 0;
    virtual std::string vshow(const Value& v) const = 0;
    virtual Value vsample(Rng& rng) const = 0;
};
using HemimodulePtr = std::shared_ptr<const Hemimodule>;

struct LawFailure {
    std::string law;
    std::vector<std::string> inputs;
    std::string lhs;
    std::string rhs;
};

struct LawReport {
    std::string suite;
    std::uint64_t trials = 0;
    std::vector<LawFailure> failures;
    // Success only certifies agreement up to a bound (series carriers).
    bool bounded = false;

    bool ok() const { return failures.empty(); }
    void absorb(const LawReport& other);
    nlohmann::json to_json() const;
};

std::uint64_t seed_from_env(std::uint64_t fallback = kDefaultSeed);

}  // namespace ow
