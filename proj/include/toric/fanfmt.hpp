#pragma once

// Fan and certificate document formats (.fan.json / .oka.json): strict
// schema parsing, canonical serialization, content hashing, the built-in
// fan catalog, and the product constructor.

#include "toric/fan.hpp"
#include "toric/json.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace toric {

/// Structural schema violation; `path` is a JSON-pointer-ish field path.
struct SchemaError : std::runtime_error {
    SchemaError(const std::string& path, const std::string& what)
        : std::runtime_error(path + ": " + what), path(path) {}
    std::string path;
};

struct FanDocument {
    Fan fan;
    /// Top-level "x-" extension members, kept verbatim.
    JsonObject extensions;

    bool operator==(const FanDocument& o) const = default;
};

/// Strict parse: integers at arbitrary precision, floats rejected, unknown
/// fields rejected unless prefixed "x-". Throws JsonParseError/SchemaError.
FanDocument parse_fan(std::string_view text);
FanDocument fan_document_from_json(const JsonValue& v);

/// Canonical form: rays sorted lexicographically (cone indices remapped),
/// each cone sorted, cones sorted lexicographically, fixed key order.
FanDocument canonicalize(const FanDocument& d);

/// Canonical compact serialization; parse(serialize(d)) == canonicalize(d).
std::string serialize_fan(const FanDocument& d);
std::string serialize_fan_pretty(const FanDocument& d);
JsonValue fan_to_json(const FanDocument& d);

/// "sha256:<hex>" over the canonical serialization of the geometry alone
/// (name and extensions stripped), so renaming a fan keeps its identity.
std::string subject_hash(const FanDocument& d);

std::string sha256_hex(std::string_view data);

/// Built-in fans. Accepted names: projective(1..4), affine(1..4),
/// torus(0..4), hirzebruch(0..5), p1xp1, blowup_p2, torsion_z2, wps_112,
/// wps_123, plus shorthands p1..p4, f0..f5, c1..c4 (case-insensitive).
std::vector<std::string> catalog_names();
FanDocument catalog_fan(const std::string& name);

/// Product fan: rays of `a` zero-padded, rays of `b` zero-prefixed, max
/// cones all unions of one cone from each factor (a fan without max cones
/// contributes its implicit zero cone).
FanDocument product_fan(const FanDocument& a, const FanDocument& b);

// ---- certificate documents ----

inline constexpr const char* kCertificateFormatVersion = "1";

inline constexpr const char* kRuleLieGroupOka = "LIE_GROUP_OKA";
inline constexpr const char* kRuleCodim2ComplementOka = "CODIM2_COMPLEMENT_OKA";
inline constexpr const char* kRuleQuotientBundle = "QUOTIENT_BUNDLE";
inline constexpr const char* kRuleBundleTransfer = "BUNDLE_TRANSFER";
inline constexpr const char* kRuleProductSplit = "PRODUCT_SPLIT";

bool is_known_rule(std::string_view rule);

/// Derivation step: fixed key order (rule, statement, citation, witness,
/// premises). Witnesses are integer-exact JSON sub-documents.
struct CertificateDocument {
    std::string format_version;  // currently always "1"
    std::string subject_hash;
    std::string subject_name;  // informational, may be empty
    std::string conclusion;
    JsonValue derivation;  // validated step tree
    JsonObject extensions;

    bool operator==(const CertificateDocument& o) const = default;
};

CertificateDocument parse_certificate(std::string_view text);
CertificateDocument certificate_from_json(const JsonValue& v);
std::string serialize_certificate(const CertificateDocument& c);
std::string serialize_certificate_pretty(const CertificateDocument& c);
JsonValue certificate_to_json(const CertificateDocument& c);

}  // namespace toric
