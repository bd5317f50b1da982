#pragma once

#include "core.hpp"

namespace ow {

constexpr std::int64_t kMinPlusInf = INT64_MAX;
constexpr std::int64_t kMinPlusDefaultCap = 2147483647;  // 2^31 - 1

CarrierPtr bool_carrier();
CarrierPtr nat_carrier();
CarrierPtr minplus_carrier(std::int64_t cap = kMinPlusDefaultCap);
// Extended nonnegative reals with sup as sum and the absorbing sup product.
CarrierPtr extreal_carrier();
// Subsets of a base set of the given size; join, meet, bottom, top.
CarrierPtr lattice_carrier(int base = 3);

// Builds a named carrier. Carriers with a star also get the derived plus.
// Known names: bool, nat, minplus, extreal, lattice.
CarrierPtr make_instance(const std::string& name, const nlohmann::json& params = {});
std::vector<std::string> instance_names();

// Pair (C, C, omega) for a carrier acting on itself by multiplication.
HemimodulePtr scalar_pair(CarrierPtr c, std::function<Value(const Value&)> omega,
                          std::string name);
// Known omega conventions: bool and lattice (x^w = x), minplus (0^w = 0, else inf),
// extreal (x^w = x).
HemimodulePtr make_scalar_pair(const std::string& name, const nlohmann::json& params = {});

std::string show_real(double x);
double read_real(std::string_view text);

}  // namespace ow
