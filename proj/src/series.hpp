#pragma once

#include <map>
#include <unordered_map>

#include "laws.hpp"

namespace ow {

// Words are strings of letters; the empty string is the empty word.
using Word = std::string;

struct Alphabet {
    std::string letters;

    bool contains(char c) const { return letters.find(c) != std::string::npos; }
    void check(const Word& w) const;
};

// Ultimately periodic word u v^w in canonical form (v primitive, u minimal).
struct OmegaWord {
    Word u;
    Word v;

    static OmegaWord make(Word u, Word v);
    // Accepts "u(v)^w" and "u x^w" for a single letter x.
    static OmegaWord parse(std::string_view text);
    std::string str() const;
    char at(std::size_t pos) const;  // letter at a position of the infinite word
    bool operator==(const OmegaWord& o) const { return u == o.u && v == o.v; }
    bool operator<(const OmegaWord& o) const { return u != o.u ? u < o.u : v < o.v; }
};

// All distinct canonical lassos with |u| <= max_u and 1 <= |v| <= max_v.
std::vector<OmegaWord> all_lassos(const Alphabet& a, std::size_t max_u, std::size_t max_v);

// A set of nonempty words closed under nonempty factors, ordered by length.
class WordSpace {
public:
    struct Split {
        std::size_t prefix;
        std::size_t suffix;
    };

    static WordSpace all_words(const Alphabet& a, std::size_t max_len);
    static WordSpace factors(const Word& w);

    std::size_t size() const { return words_.size(); }
    const Word& word(std::size_t i) const { return words_[i]; }
    std::size_t length(std::size_t i) const { return words_[i].size(); }
    const std::vector<Split>& splits(std::size_t i) const { return splits_[i]; }
    std::optional<std::size_t> index(const Word& w) const;

private:
    void finish();
    std::vector<Word> words_;
    std::vector<std::vector<Split>> splits_;
    std::unordered_map<Word, std::size_t> index_;
};

struct SeriesNode;
using SeriesPtr = std::shared_ptr<const SeriesNode>;

// Boolean relation over lasso positions: bit q of row p is set when some nonempty
// factor read from position p and leaving the reader at q is in the support.
using LassoRel = std::vector<std::uint64_t>;
// Set of lasso positions as a bit mask.
using LassoSet = std::uint64_t;
constexpr std::size_t kMaxLassoPositions = 64;

struct SeriesNode : Obj {
    enum class Kind { Zero, Poly, Sum, Prod, Plus, Scale, Query };
    Kind kind = Kind::Zero;
    std::map<Word, Value> poly;
    SeriesPtr a;
    SeriesPtr b;
    std::uint64_t n = 0;
    bool proper = true;
    // Query backing (automata).
    std::function<Value(const MultiHemiring&, const Word&)> query;
    std::function<LassoRel(const OmegaWord&)> lasso;
    std::string label;
};

SeriesPtr series_zero();
SeriesPtr monomial(const Word& w, const Value& coeff);
SeriesPtr polynomial(std::map<Word, Value> terms);
SeriesPtr series_sum(const SeriesPtr& a, const SeriesPtr& b);
SeriesPtr cauchy_mul(const SeriesPtr& a, const SeriesPtr& b);
// Rejects series that are not proper.
SeriesPtr series_plus(const SeriesPtr& a);
SeriesPtr series_scale(std::uint64_t n, const SeriesPtr& a);
SeriesPtr series_query(std::function<Value(const MultiHemiring&, const Word&)> q,
                       std::function<LassoRel(const OmegaWord&)> lasso, std::string label,
                       bool proper = true);

// Coefficients of a series on every word of a word space.
std::vector<Value> series_table(const MultiHemiring& d, const SeriesPtr& s, const WordSpace& ws);
// Tables of several series sharing one memo (common subterms are evaluated once).
std::vector<std::vector<Value>> series_tables(const MultiHemiring& d,
                                              const std::vector<SeriesPtr>& ss, const WordSpace& ws);
Value series_eps(const MultiHemiring& d, const SeriesPtr& s);
Value coeff(const MultiHemiring& d, const SeriesPtr& s, const Word& w);
// (f+, w) by the prefix dynamic program.
Value series_plus_coeff(const MultiHemiring& d, const SeriesPtr& f, const Word& w);

LawReport bounded_eq(const MultiHemiring& d, const SeriesPtr& f, const SeriesPtr& g,
                     const Alphabet& a, std::size_t max_len);

std::string show_series(const MultiHemiring& d, const SeriesPtr& s, const Alphabet& a,
                        std::size_t max_len);

struct OmegaNode;
using OmegaPtr = std::shared_ptr<const OmegaNode>;

struct OmegaNode : Obj {
    enum class Kind { Zero, Sum, Act, Omega, Scale, Query };
    Kind kind = Kind::Zero;
    SeriesPtr s;
    OmegaPtr a;
    OmegaPtr b;
    std::uint64_t n = 0;
    std::function<Value(const OmegaWord&)> query;
    std::function<LassoSet(const OmegaWord&)> lasso;
    std::string label;
};

OmegaPtr omega_zero();
OmegaPtr omega_sum(const OmegaPtr& a, const OmegaPtr& b);
OmegaPtr omega_act(const SeriesPtr& s, const OmegaPtr& v);
OmegaPtr omega_power(const SeriesPtr& s);
OmegaPtr omega_scale(std::uint64_t n, const OmegaPtr& v);
OmegaPtr omega_query(std::function<Value(const OmegaWord&)> q,
                     std::function<LassoSet(const OmegaWord&)> lasso, std::string label);

// Support-level semantics on the lasso graph of w: position p of the
// vector answers whether the suffix of w from p is in the support.
LassoRel lasso_relation(const MultiHemiring& d, const SeriesPtr& s, const OmegaWord& w);
LassoSet lasso_support(const MultiHemiring& d, const OmegaPtr& v, const OmegaWord& w);
bool lasso_member(const MultiHemiring& d, const OmegaPtr& v, const OmegaWord& w);

// Hemiring of proper series over a multi-hemiring, with bounded equality.
class SeriesCarrier final : public Carrier {
public:
    SeriesCarrier(MultiPtr d, Alphabet a, std::size_t bound, std::string name);
    std::string name() const override { return name_; }
    Value zero() const override;
    Value add(const Value& x, const Value& y) const override;
    Value mul(const Value& x, const Value& y) const override;
    bool has_plus() const override { return true; }
    Value plus(const Value& x) const override;
    bool eq(const Value& x, const Value& y) const override;
    std::string show(const Value& x) const override;
    Value read(std::string_view text) const override;
    Value sample(Rng& rng) const override;
    bool idempotent() const override { return d_->idempotent(); }

    const MultiPtr& coefficients() const { return d_; }
    const Alphabet& alphabet() const { return alpha_; }
    std::size_t bound() const { return bound_; }
    std::vector<Value> table(const Value& x, const WordSpace& ws) const;
    Value coeff_at(const Value& x, const Word& w) const;

    static Value wrap(SeriesPtr s) { return Value::P(std::move(s)); }
    static SeriesPtr unwrap(const Value& v);

private:
    MultiPtr d_;
    Alphabet alpha_;
    std::size_t bound_;
    std::string name_;
    std::shared_ptr<const WordSpace> space_;
};

constexpr std::size_t kDefaultBound = 8;

std::shared_ptr<const SeriesCarrier> language_instance(const Alphabet& a,
                                                       std::size_t bound = kDefaultBound);
std::shared_ptr<const SeriesCarrier> nat_series_instance(const Alphabet& a,
                                                         std::size_t bound = kDefaultBound);
std::shared_ptr<const SeriesCarrier> series_instance(MultiPtr d, const Alphabet& a,
                                                     std::size_t bound = kDefaultBound);

// (P(A+), P(A^w)) with lasso-bounded equality on the module side.
class LanguagePair final : public Hemimodule {
public:
    LanguagePair(std::shared_ptr<const SeriesCarrier> h, std::size_t max_u, std::size_t max_v);
    std::string name() const override { return "language-pair"; }
    CarrierPtr hemiring() const override { return h_; }
    Value vzero() const override;
    Value vadd(const Value& u, const Value& v) const override;
    Value act(const Value& a, const Value& v) const override;
    Value omega(const Value& a) const override;
    bool veq(const Value& u, const Value& v) const override;
    std::string vshow(const Value& v) const override;
    Value vsample(Rng& rng) const override;

    const std::vector<OmegaWord>& lassos() const { return lassos_; }
    static OmegaPtr unwrap(const Value& v);

private:
    std::shared_ptr<const SeriesCarrier> h_;
    std::vector<OmegaWord> lassos_;
};

std::shared_ptr<const LanguagePair> language_pair(const Alphabet& a, std::size_t bound = kDefaultBound,
                                                  std::size_t max_u = 4, std::size_t max_v = 4);

}  // namespace ow
