#include "omega_weights.h"

#include <cstdlib>
#include <cstring>
#include <new>

#include "registry.hpp"

struct ow_instance {
    ow::InstancePtr impl;
};

namespace {

thread_local std::string g_last_error;

char* dup(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <class F>
ow_status guard(F&& f) {
    try {
        g_last_error.clear();
        f();
        return OW_OK;
    } catch (const ow::UsageError& e) {
        g_last_error = e.what();
        return OW_ERR_ARGUMENT;
    } catch (const ow::ParseError& e) {
        g_last_error = e.what();
        return OW_ERR_PARSE;
    } catch (const nlohmann::json::exception& e) {
        g_last_error = std::string("JSON: ") + e.what();
        return OW_ERR_PARSE;
    } catch (const ow::DomainError& e) {
        g_last_error = e.what();
        return OW_ERR_DOMAIN;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return OW_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return OW_ERR_INTERNAL;
    }
}

void need(const void* p, const char* what) {
    if (!p) throw ow::UsageError(std::string(what) + " must not be null");
}

nlohmann::json parse_json(const char* text) {
    if (!text || !*text) return nlohmann::json::object();
    return nlohmann::json::parse(text);
}

}  // namespace

extern "C" {

const char* ow_version(void) { return "1.0.0"; }

const char* ow_last_error(void) { return g_last_error.c_str(); }

void ow_string_free(char* s) { std::free(s); }

ow_status ow_instance_new(const char* name, const char* params_json, ow_instance** out) {
    return guard([&] {
        need(name, "name");
        need(out, "out");
        *out = nullptr;
        auto impl = ow::resolve_instance(name, parse_json(params_json));
        *out = new ow_instance{std::move(impl)};
    });
}

void ow_instance_free(ow_instance* inst) { delete inst; }

ow_status ow_instance_manifest(const ow_instance* inst, char** json_out) {
    return guard([&] {
        need(inst, "instance");
        need(json_out, "json_out");
        *json_out = dup(inst->impl->manifest().dump());
    });
}

ow_status ow_list_instances(char** json_out) {
    return guard([&] {
        need(json_out, "json_out");
        *json_out = dup(nlohmann::json(ow::all_instance_names()).dump());
    });
}

ow_status ow_list_suites(char** json_out) {
    return guard([&] {
        need(json_out, "json_out");
        *json_out = dup(nlohmann::json(ow::suite_names()).dump());
    });
}

ow_status ow_run_laws(const ow_instance* inst, const char* suite, uint64_t samples, uint64_t seed,
                      int* passed, char** report_json) {
    return guard([&] {
        need(inst, "instance");
        need(suite, "suite");
        need(passed, "passed");
        need(report_json, "report_json");
        ow::LawReport rep = ow::run_suite(*inst->impl, suite, samples, seed);
        *passed = rep.ok() ? 1 : 0;
        *report_json = dup(rep.to_json().dump());
    });
}

ow_status ow_coeff(const ow_instance* inst, const char* expr, const char* word, char** value_out) {
    return guard([&] {
        need(inst, "instance");
        need(expr, "expr");
        need(word, "word");
        need(value_out, "value_out");
        *value_out = dup(ow::coeff_command(*inst->impl, expr, word));
    });
}

ow_status ow_expr_normalize(const char* expr, char** printed_out) {
    return guard([&] {
        need(expr, "expr");
        need(printed_out, "printed_out");
        *printed_out = dup(ow::print_expr(ow::parse_expr(expr)));
    });
}

ow_status ow_compile(const ow_instance* inst, const char* expr, char** automaton_json) {
    return guard([&] {
        need(inst, "instance");
        need(expr, "expr");
        need(automaton_json, "automaton_json");
        *automaton_json = dup(ow::compile_command(*inst->impl, expr).dump());
    });
}

ow_status ow_behavior(const ow_instance* inst, const char* automaton_json, const char* word,
                      uint64_t depth, char** result_json) {
    return guard([&] {
        need(inst, "instance");
        need(automaton_json, "automaton_json");
        need(word, "word");
        need(result_json, "result_json");
        auto j = ow::behavior_command(*inst->impl, nlohmann::json::parse(automaton_json), word, depth);
        *result_json = dup(j.dump());
    });
}

ow_status ow_eliminate(const ow_instance* inst, const char* automaton_json, char** result_json) {
    return guard([&] {
        need(inst, "instance");
        need(automaton_json, "automaton_json");
        need(result_json, "result_json");
        *result_json = dup(ow::eliminate_command(*inst->impl, nlohmann::json::parse(automaton_json)).dump());
    });
}

ow_status ow_group_check(const ow_instance* inst, const char* group, uint64_t samples, uint64_t seed,
                         int* passed, char** report_json) {
    return guard([&] {
        need(inst, "instance");
        need(group, "group");
        need(passed, "passed");
        need(report_json, "report_json");
        ow::LawReport rep = ow::group_command(*inst->impl, group, samples, seed);
        *passed = rep.ok() ? 1 : 0;
        *report_json = dup(rep.to_json().dump());
    });
}

ow_status ow_counterexample(const char* name, uint64_t depth, int* violated, char** trace_json) {
    return guard([&] {
        need(name, "name");
        need(violated, "violated");
        need(trace_json, "trace_json");
        ow::CounterexampleResult r = ow::counterexample_command(name, depth);
        *violated = ow::counterexample_violates(r) ? 1 : 0;
        *trace_json = dup(r.to_json().dump());
    });
}

}  // extern "C"
