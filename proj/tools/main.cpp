// omega-weights: command-line front end over the C API.
// Machine output (JSON) goes to stdout, summaries and errors to stderr.
// Exit codes: 0 success, 1 a law or property failed, 2 usage or input error.

#include <omega_weights.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Owned {
    char* s = nullptr;
    ~Owned() { ow_string_free(s); }
    std::string str() const { return s ? s : ""; }
};

struct InstanceHandle {
    ow_instance* p = nullptr;
    ~InstanceHandle() { ow_instance_free(p); }
};

struct CallError {
    std::string message;
};

void check(ow_status st) {
    if (st != OW_OK) throw CallError{ow_last_error()};
}

struct InstanceOpts {
    std::string name;
    std::string params;
    double lambda = 0;
    int base = 0;
    std::string alphabet;
    std::size_t bound = 0;
    std::size_t depth = 0;
};

void add_instance_opts(CLI::App* cmd, InstanceOpts& o, bool required = true) {
    auto* opt = cmd->add_option("--instance", o.name, "Instance name (see 'list')");
    if (required) opt->required();
    cmd->add_option("--params", o.params, "Instance parameters as a JSON object");
    cmd->add_option("--lambda", o.lambda, "Discount factor for disc");
    cmd->add_option("--base", o.base, "Base set size for lattice instances");
    cmd->add_option("--alphabet", o.alphabet, "Alphabet letters, e.g. ab");
    cmd->add_option("--bound", o.bound, "Word-length bound for series equality");
}

std::string params_json(const InstanceOpts& o) {
    nlohmann::json j = o.params.empty() ? nlohmann::json::object() : nlohmann::json::parse(o.params);
    if (!j.is_object()) throw CallError{"--params must be a JSON object"};
    if (o.lambda != 0) j["lambda"] = o.lambda;
    if (o.base != 0) j["base"] = o.base;
    if (!o.alphabet.empty()) j["alphabet"] = o.alphabet;
    if (o.bound != 0) j["bound"] = o.bound;
    if (o.depth != 0) j["depth"] = o.depth;
    return j.dump();
}

void open_instance(const InstanceOpts& o, InstanceHandle& h) {
    check(ow_instance_new(o.name.c_str(), params_json(o).c_str(), &h.p));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CallError{"cannot read " + path};
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void print_json(const std::string& text) { std::cout << nlohmann::json::parse(text).dump(2) << "\n"; }

std::uint64_t default_seed() {
    if (const char* env = std::getenv("OMEGA_WEIGHTS_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
            std::cerr << "ignoring malformed OMEGA_WEIGHTS_SEED\n";
        }
    }
    return 42;
}

int report_result(const std::string& report, int passed, const std::string& what) {
    print_json(report);
    auto j = nlohmann::json::parse(report);
    std::cerr << what << ": " << j.value("failures", nlohmann::json::array()).size() << " failure(s) in "
              << j.value("trials", 0) << " trials\n";
    return passed ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weighted omega-automata, Conway hemirings and their law suites"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(ow_version()));

    const std::uint64_t seed0 = default_seed();

    InstanceOpts laws_o;
    std::string suite;
    std::uint64_t samples = 1000;
    std::uint64_t seed = seed0;
    auto* laws = app.add_subcommand("laws", "Run a law suite on an instance");
    add_instance_opts(laws, laws_o);
    laws->add_option("--suite", suite, "Law suite")->required();
    laws->add_option("--samples", samples, "Number of sampled trials");
    laws->add_option("--seed", seed, "Random seed (default from OMEGA_WEIGHTS_SEED or 42)");
    laws->add_option("--depth", laws_o.depth, "Doubling blocks for truncated witness families");

    InstanceOpts coeff_o;
    std::string expr;
    std::string word;
    auto* coeff = app.add_subcommand("coeff", "Coefficient of an expression at a word");
    add_instance_opts(coeff, coeff_o);
    coeff->add_option("--expr", expr, "Rational or omega-rational expression")->required();
    coeff->add_option("--word", word, "Finite word, or u(v)^w")->required();

    InstanceOpts compile_o;
    std::string compile_expr;
    auto* compile = app.add_subcommand("compile", "Compile an expression to an automaton (JSON)");
    add_instance_opts(compile, compile_o);
    compile->add_option("--expr", compile_expr, "Expression")->required();

    InstanceOpts behavior_o;
    std::string aut;
    std::string behavior_word;
    std::uint64_t behavior_depth = 0;
    auto* behavior = app.add_subcommand("behavior", "Behavior of an automaton at a word");
    add_instance_opts(behavior, behavior_o);
    behavior->add_option("--aut", aut, "Automaton JSON file")->required();
    behavior->add_option("--word", behavior_word, "Finite word, or u(v)^w")->required();
    behavior->add_option("--depth", behavior_depth, "Value-iteration rounds for disc (0: to tolerance)");

    InstanceOpts elim_o;
    std::string elim_aut;
    auto* elim = app.add_subcommand("eliminate", "Expressions for the behaviors of an automaton");
    add_instance_opts(elim, elim_o);
    elim->add_option("--aut", elim_aut, "Automaton JSON file")->required();

    InstanceOpts group_o;
    std::string group;
    std::uint64_t group_samples = 200;
    std::uint64_t group_seed = seed0;
    auto* gc = app.add_subcommand("group-check", "Group identities for a builtin group");
    add_instance_opts(gc, group_o);
    gc->add_option("--group", group, "Z1..Z6 or S3")->required();
    gc->add_option("--samples", group_samples, "Number of sampled trials");
    gc->add_option("--seed", group_seed, "Random seed");

    std::string cx_name;
    std::uint64_t cx_depth = 0;
    auto* cx = app.add_subcommand("counterexample", "Trace of a regrouping counterexample");
    cx->add_option("--name", cx_name, "liminf-regroup, avg-regroup or avg-product-omega")->required();
    cx->add_option("--depth", cx_depth, "Truncation depth (0: default)");

    auto* list = app.add_subcommand("list", "List instances and suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*laws) {
            InstanceHandle h;
            open_instance(laws_o, h);
            Owned rep;
            int passed = 0;
            check(ow_run_laws(h.p, suite.c_str(), samples, seed, &passed, &rep.s));
            return report_result(rep.str(), passed, "laws " + suite);
        }
        if (*coeff) {
            InstanceHandle h;
            open_instance(coeff_o, h);
            Owned v;
            check(ow_coeff(h.p, expr.c_str(), word.c_str(), &v.s));
            std::cout << nlohmann::json(v.str()).dump() << "\n";
            return 0;
        }
        if (*compile) {
            InstanceHandle h;
            open_instance(compile_o, h);
            Owned a;
            check(ow_compile(h.p, compile_expr.c_str(), &a.s));
            print_json(a.str());
            return 0;
        }
        if (*behavior) {
            InstanceHandle h;
            open_instance(behavior_o, h);
            Owned r;
            check(ow_behavior(h.p, read_file(aut).c_str(), behavior_word.c_str(), behavior_depth, &r.s));
            print_json(r.str());
            return 0;
        }
        if (*elim) {
            InstanceHandle h;
            open_instance(elim_o, h);
            Owned r;
            check(ow_eliminate(h.p, read_file(elim_aut).c_str(), &r.s));
            print_json(r.str());
            return 0;
        }
        if (*gc) {
            InstanceHandle h;
            open_instance(group_o, h);
            Owned rep;
            int passed = 0;
            check(ow_group_check(h.p, group.c_str(), group_samples, group_seed, &passed, &rep.s));
            return report_result(rep.str(), passed, "group-check " + group);
        }
        if (*cx) {
            Owned t;
            int violated = 0;
            check(ow_counterexample(cx_name.c_str(), cx_depth, &violated, &t.s));
            print_json(t.str());
            auto j = nlohmann::json::parse(t.str());
            std::cerr << cx_name << ": direct " << j["direct"] << ", regrouped " << j["regrouped"]
                      << (violated ? " (regrouping changes the value)" : "") << "\n";
            return violated ? kExitFail : 0;
        }
        if (*list) {
            Owned inst;
            Owned suites;
            check(ow_list_instances(&inst.s));
            check(ow_list_suites(&suites.s));
            nlohmann::json j;
            j["instances"] = nlohmann::json::parse(inst.str());
            j["suites"] = nlohmann::json::parse(suites.str());
            j["counterexamples"] = {"liminf-regroup", "avg-regroup", "avg-product-omega"};
            std::cout << j.dump(2) << "\n";
            return 0;
        }
    } catch (const CallError& e) {
        std::cerr << "error: " << e.message << "\n";
        return kExitUsage;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
