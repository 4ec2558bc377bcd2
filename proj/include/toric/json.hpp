#pragma once

// Strict JSON subset used by the fan and certificate file formats.
//
// Deviations from ordinary JSON, all deliberate:
//   - numbers are arbitrary-precision integers; any float syntax
//     ('.', 'e', 'E', leading zeros) is a parse error,
//   - object key order is preserved, so serialization is deterministic,
//   - duplicate keys are a parse error.

#include "toric/intlinalg.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace toric {

class JsonValue;

using JsonArray = std::vector<JsonValue>;
/// Insertion-ordered object.
using JsonObject = std::vector<std::pair<std::string, JsonValue>>;

struct JsonTypeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class JsonValue {
public:
    JsonValue() : v_(nullptr) {}
    JsonValue(std::nullptr_t) : v_(nullptr) {}
    JsonValue(bool b) : v_(b) {}
    JsonValue(Int i) : v_(std::move(i)) {}
    JsonValue(int i) : v_(Int(i)) {}
    JsonValue(long long i) : v_(Int(i)) {}
    JsonValue(std::size_t i) : v_(Int(i)) {}
    JsonValue(std::string s) : v_(std::move(s)) {}
    JsonValue(const char* s) : v_(std::string(s)) {}
    JsonValue(JsonArray a) : v_(std::move(a)) {}
    JsonValue(JsonObject o) : v_(std::move(o)) {}

    bool is_null() const { return std::holds_alternative<std::nullptr_t>(v_); }
    bool is_bool() const { return std::holds_alternative<bool>(v_); }
    bool is_int() const { return std::holds_alternative<Int>(v_); }
    bool is_string() const { return std::holds_alternative<std::string>(v_); }
    bool is_array() const { return std::holds_alternative<JsonArray>(v_); }
    bool is_object() const { return std::holds_alternative<JsonObject>(v_); }

    bool as_bool() const { return get<bool>("bool"); }
    const Int& as_int() const { return get<Int>("integer"); }
    const std::string& as_string() const { return get<std::string>("string"); }
    const JsonArray& as_array() const { return get<JsonArray>("array"); }
    const JsonObject& as_object() const { return get<JsonObject>("object"); }
    JsonArray& as_array() { return get<JsonArray>("array"); }
    JsonObject& as_object() { return get<JsonObject>("object"); }

    /// Pointer to the member value, or nullptr when absent / not an object.
    const JsonValue* find(std::string_view key) const;
    /// Member access that throws JsonTypeError when the key is missing.
    const JsonValue& at(std::string_view key) const;

    bool operator==(const JsonValue& o) const = default;

private:
    template <typename T>
    const T& get(const char* what) const {
        if (const T* p = std::get_if<T>(&v_)) return *p;
        throw JsonTypeError(std::string("expected ") + what);
    }
    template <typename T>
    T& get(const char* what) {
        if (T* p = std::get_if<T>(&v_)) return *p;
        throw JsonTypeError(std::string("expected ") + what);
    }

    std::variant<std::nullptr_t, bool, Int, std::string, JsonArray, JsonObject> v_;
};

struct JsonParseError : std::runtime_error {
    JsonParseError(const std::string& msg, std::size_t line, std::size_t column)
        : std::runtime_error(msg + " at line " + std::to_string(line) + ", column " +
                             std::to_string(column)),
          line(line),
          column(column) {}
    std::size_t line;    // 1-based
    std::size_t column;  // 1-based
};

JsonValue parse_json(std::string_view text);

/// Compact serialization, no insignificant whitespace, keys in stored order.
std::string dump_json(const JsonValue& v);

/// Two-space indented serialization with a trailing newline, for files
/// meant to be read by people. Same key order as dump_json.
std::string dump_json_pretty(const JsonValue& v);

}  // namespace toric
