#pragma once

#include <string>
#include <vector>

#include "qcg/core.hpp"
#include "qcg/ruleset.hpp"

namespace qcg::detail {

[[noreturn]] inline void schema_error(const std::string& msg) { throw Error(ErrorCode::SchemaError, msg); }
[[noreturn]] inline void invalid(const std::string& msg) { throw Error(ErrorCode::InvalidInstance, msg); }

inline const json& field(const json& j, const char* key) {
    if (!j.is_object()) schema_error("expected an object");
    auto it = j.find(key);
    if (it == j.end()) schema_error(std::string("missing field '") + key + "'");
    return *it;
}

inline std::string as_string(const json& j, const char* what) {
    if (!j.is_string()) schema_error(std::string(what) + " must be a string");
    return j.get<std::string>();
}

inline long long as_int(const json& j, const char* what) {
    if (!j.is_number_integer()) schema_error(std::string(what) + " must be an integer");
    return j.get<long long>();
}

inline bool as_bool(const json& j, const char* what) {
    if (!j.is_boolean()) schema_error(std::string(what) + " must be a boolean");
    return j.get<bool>();
}

inline const json& as_array(const json& j, const char* what) {
    if (!j.is_array()) schema_error(std::string(what) + " must be an array");
    return j;
}

inline std::vector<std::string> string_list(const json& j, const char* what) {
    std::vector<std::string> out;
    for (const auto& e : as_array(j, what)) out.push_back(as_string(e, what));
    return out;
}

// Resolves a vertex or variable name to its index.
template <class Lookup>
int resolve(const Lookup& lookup, const json& j, const char* what) {
    std::string name = as_string(j, what);
    int id = lookup(name);
    if (id < 0) invalid(std::string("unknown ") + what + " '" + name + "'");
    return id;
}

inline int find_name(const std::vector<std::string>& names, const std::string& n) {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == n) return static_cast<int>(i);
    return -1;
}

inline void check_names(const std::vector<std::string>& names, const char* what, std::size_t limit) {
    if (names.size() > limit) invalid(std::string("too many ") + what + "s (limit " + std::to_string(limit) + ")");
    for (std::size_t i = 0; i < names.size(); ++i)
        for (std::size_t k = i + 1; k < names.size(); ++k)
            if (names[i] == names[k]) invalid(std::string("duplicate ") + what + " '" + names[i] + "'");
}

inline json mask_names(std::uint64_t mask, const std::vector<std::string>& names) {
    json a = json::array();
    for (std::size_t i = 0; i < names.size(); ++i)
        if (mask >> i & 1) a.push_back(names[i]);
    return a;
}

}  // namespace qcg::detail
