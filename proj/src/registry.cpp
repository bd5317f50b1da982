#include "registry.hpp"

#include <cmath>

#include "instances.hpp"

namespace ow {

namespace {

bool has(const nlohmann::json& p, const char* k) { return p.is_object() && p.contains(k); }

bool is_carrier_name(const std::string& n) {
    for (const auto& x : instance_names()) {
        if (x == n) return true;
    }
    return false;
}

bool is_valuation_name(const std::string& n) {
    for (const auto& x : valuation_names()) {
        if (x == n) return true;
    }
    return false;
}

void add_letters(Alphabet& a, const std::string& s) {
    for (char c : s) {
        if (c >= 'a' && c <= 'z' && !a.contains(c)) a.letters += c;
    }
}

void add_expr_letters(Alphabet& a, const ExprPtr& e) {
    if (!e) return;
    if (e->kind == ExprNode::Kind::Letter) add_letters(a, std::string(1, e->letter));
    add_expr_letters(a, e->a);
    add_expr_letters(a, e->b);
}

bool is_omega_word(const std::string& w) { return w.find("^w") != std::string::npos; }

const MultiHemiring& need_multi(const Instance& inst) {
    if (!inst.multi) throw UsageError("instance " + inst.name + " has no coefficient domain for series");
    return *inst.multi;
}

const OmegaValuation& need_valuation(const Instance& inst) {
    if (!inst.valuation) throw UsageError("instance " + inst.name + " has no omega-valuation structure");
    return *inst.valuation;
}

const Carrier& need_carrier(const Instance& inst) {
    if (!inst.carrier) throw UsageError("instance " + inst.name + " is not a hemiring");
    return *inst.carrier;
}

std::optional<CompleteOmegaHemiring> complete_for(const Instance& inst) {
    const int base = has(inst.params, "base") ? inst.params.at("base").get<int>() : 3;
    if (inst.name == "bool") return complete_bool();
    if (inst.name == "extreal") return complete_extreal();
    if (inst.name == "lattice" || inst.name == "lattice-inf") return complete_lattice(base);
    if (inst.name == "from-complete") {
        const std::string h = has(inst.params, "h") ? inst.params.at("h").get<std::string>() : "extreal";
        if (h == "bool") return complete_bool();
        if (h == "lattice") return complete_lattice(base);
        return complete_extreal();
    }
    return std::nullopt;
}

}  // namespace

nlohmann::json Instance::manifest() const {
    nlohmann::json j;
    j["instance"] = name;
    j["params"] = params.is_object() ? params : nlohmann::json::object();
    j["alphabet"] = alphabet.letters;
    j["bound"] = bound;
    j["depth"] = depth;
    return j;
}

std::vector<std::string> all_instance_names() {
    std::vector<std::string> out = instance_names();
    out.push_back("language");
    out.push_back("nat-series");
    for (const auto& v : valuation_names()) {
        if (v != "bool") out.push_back(v);
    }
    out.push_back("bool-language");
    return out;
}

InstancePtr resolve_instance(const std::string& name, const nlohmann::json& params) {
    auto inst = std::make_shared<Instance>();
    inst->name = name;
    inst->params = params.is_object() ? params : nlohmann::json::object();
    try {
        inst->alphabet.letters = has(params, "alphabet") ? params.at("alphabet").get<std::string>() : "ab";
        if (has(params, "bound")) inst->bound = params.at("bound").get<std::size_t>();
        if (has(params, "depth")) inst->depth = params.at("depth").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("bad instance parameter: ") + e.what());
    }
    if (inst->alphabet.letters.empty()) throw UsageError("alphabet must be nonempty");
    for (char c : inst->alphabet.letters) {
        if (c < 'a' || c > 'z') throw UsageError("alphabet letters are a-z");
    }
    if (is_carrier_name(name)) {
        inst->carrier = make_instance(name, inst->params);
        inst->multi = std::make_shared<CarrierMulti>(inst->carrier);
        if (name != "nat") inst->pair = make_scalar_pair(name, inst->params);
        if (auto c = complete_for(*inst)) inst->valuation = from_complete(*c, name);
    } else if (name == "language") {
        auto sc = language_instance(inst->alphabet, inst->bound);
        inst->carrier = sc;
        inst->multi = sc->coefficients();
        inst->pair = language_pair(inst->alphabet, inst->bound);
        inst->valuation = make_valuation_instance("bool");
    } else if (name == "nat-series") {
        auto sc = nat_series_instance(inst->alphabet, inst->bound);
        inst->carrier = sc;
        inst->multi = sc->coefficients();
    } else if (is_valuation_name(name)) {
        inst->valuation = make_valuation_instance(name, inst->params);
        inst->multi = inst->valuation;
    } else if (name == "bool-language") {
        auto lang = language_instance(inst->alphabet, inst->bound);
        auto lp = language_pair(inst->alphabet, inst->bound);
        auto e = make_extension(bool_carrier(), lang, biaction_bool(lang), StarMode::Full);
        inst->carrier = e;
        inst->pair = make_extension_pair(e, lp, module_action_bool(lp));
    } else {
        throw UsageError("unknown instance '" + name + "'");
    }
    return inst;
}

std::vector<std::string> suite_names() {
    return {"conway-semiring", "conway-hemiring", "semiring",       "derived-star",  "hemimodule",
            "matrix",          "multi-hemiring",  "omega-valuation", "complete-omega", "extension"};
}

LawReport run_suite(const Instance& inst, const std::string& suite, std::uint64_t trials,
                    std::uint64_t seed) {
    LawOptions opt;
    opt.trials = trials;
    opt.seed = seed;
    if (suite == "conway-semiring") {
        const Carrier& c = need_carrier(inst);
        if (!c.one() || !c.has_star()) throw UsageError("instance " + inst.name + " has no star");
        return conway_semiring_laws(c, opt);
    }
    if (suite == "conway-hemiring") {
        const Carrier& c = need_carrier(inst);
        if (!c.has_plus()) throw UsageError("instance " + inst.name + " has no plus");
        return conway_hemiring_laws(c, opt);
    }
    if (suite == "semiring") return semiring_laws(need_carrier(inst), opt);
    if (suite == "derived-star") {
        const Carrier& c = need_carrier(inst);
        if (!c.one() || !c.has_star()) throw UsageError("instance " + inst.name + " has no star");
        return derived_star_laws(c, opt);
    }
    if (suite == "hemimodule") {
        if (!inst.pair) throw UsageError("instance " + inst.name + " has no hemimodule pair");
        return hemimodule_pair_laws(*inst.pair, opt);
    }
    if (suite == "matrix") return matrix_law_checks(need_carrier(inst), inst.pair.get(), 3, opt);
    if (suite == "multi-hemiring") return multi_hemiring_laws(need_multi(inst), opt);
    if (suite == "omega-valuation") return omega_valuation_laws(need_valuation(inst), opt, inst.depth);
    if (suite == "complete-omega") {
        auto c = complete_for(inst);
        if (!c) throw UsageError("instance " + inst.name + " is not a complete omega-hemiring");
        return complete_omega_laws(*c, opt);
    }
    if (suite == "extension") {
        auto e = std::dynamic_pointer_cast<const ExtensionCarrier>(inst.carrier);
        auto p = std::dynamic_pointer_cast<const ExtensionPair>(inst.pair);
        if (!e || !p) throw UsageError("instance " + inst.name + " is not an extension");
        LawReport rep = biaction_laws(*e, p->base().get(), &p->module_action(), opt);
        rep.absorb(partial_conway_laws(*e, opt));
        rep.suite = "extension";
        return rep;
    }
    throw UsageError("unknown suite '" + suite + "'");
}

std::string coeff_command(const Instance& inst, const std::string& expr, const std::string& word) {
    ExprPtr e = parse_expr(expr);
    Alphabet a = inst.alphabet;
    add_expr_letters(a, e);
    if (is_omega_word(word)) {
        if (!is_omega(e) && !is_zero_expr(e)) throw UsageError("omega word given for a finitary expression");
        OmegaWord w = OmegaWord::parse(word);
        add_letters(a, w.u + w.v);
        const OmegaValuation& v = need_valuation(inst);
        MatrixAutomaton m = compile(v, e, a);
        return v.show(infinitary_coeff(v, m, w).value);
    }
    if (is_omega(e)) throw UsageError("finite word given for an omega expression");
    if (word.empty()) throw DomainError("finitary behaviors are defined on nonempty words");
    add_letters(a, word);
    a.check(word);
    const MultiHemiring& d = need_multi(inst);
    return d.show(coeff(d, eval_fin(d, e), word));
}

nlohmann::json compile_command(const Instance& inst, const std::string& expr) {
    ExprPtr e = parse_expr(expr);
    Alphabet a = inst.alphabet;
    add_expr_letters(a, e);
    const MultiHemiring& d = need_multi(inst);
    nlohmann::json j = automaton_to_json(d, compile(d, e, a));
    j["expr"] = print_expr(e);
    return j;
}

nlohmann::json behavior_command(const Instance& inst, const nlohmann::json& automaton,
                                const std::string& word, std::size_t depth) {
    const MultiHemiring& d = need_multi(inst);
    MatrixAutomaton m = automaton_from_json(d, automaton);
    nlohmann::json j;
    j["instance"] = inst.name;
    if (is_omega_word(word)) {
        OmegaWord w = OmegaWord::parse(word);
        const OmegaValuation& v = need_valuation(inst);
        ValResult r = infinitary_coeff(v, m, w, depth);
        j["word"] = w.str();
        j["value"] = v.show(r.value);
        j["exact"] = r.exact;
        j["bound"] = r.bound;
        if (v.kind() == InfKind::Exists) j["matrix_value"] = matrix_infinitary_member(m, w) ? "1" : "0";
        return j;
    }
    if (word.empty()) throw DomainError("finitary behaviors are defined on nonempty words");
    j["word"] = word;
    j["value"] = d.show(finitary_coeff(d, m, word));
    j["matrix_value"] = d.show(matrix_finitary_coeff(d, m, word));
    j["exact"] = true;
    j["bound"] = 0.0;
    return j;
}

nlohmann::json eliminate_command(const Instance& inst, const nlohmann::json& automaton) {
    const MultiHemiring& d = need_multi(inst);
    Eliminated el = eliminate(d, automaton_from_json(d, automaton));
    return {{"finitary", print_expr(el.finitary)}, {"omega", print_expr(el.omega)}};
}

LawReport group_command(const Instance& inst, const std::string& group, std::uint64_t trials,
                        std::uint64_t seed) {
    bool known = false;
    for (const auto& g : builtin_group_names()) known = known || g == group;
    if (!known) throw UsageError("unknown group '" + group + "'");
    GroupTable g = builtin_group(group);
    LawOptions opt;
    opt.trials = trials;
    opt.seed = seed;
    LawReport rep = group_identity_check(g, need_carrier(inst), opt);
    if (inst.pair) rep.absorb(group_omega_check(g, *inst.pair, opt));
    rep.suite = "group-" + group;
    return rep;
}

std::vector<std::string> counterexample_names() {
    return {"liminf-regroup", "avg-regroup", "avg-product-omega"};
}

CounterexampleResult counterexample_command(const std::string& name, std::size_t depth) {
    if (name == "liminf-regroup") return counterexample_liminf();
    if (name == "avg-regroup") return counterexample_regroup_avg(depth == 0 ? 24 : depth);
    if (name == "avg-product-omega") return counterexample_product_omega(depth == 0 ? 8 : depth);
    throw UsageError("unknown counterexample '" + name + "'");
}

bool counterexample_violates(const CounterexampleResult& r) {
    return std::fabs(r.direct - r.regrouped) > 1e-6;
}

}  // namespace ow
