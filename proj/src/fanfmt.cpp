#include "toric/fanfmt.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>

namespace toric {

namespace {

constexpr int kMaxLatticeRank = 64;

bool is_extension_key(std::string_view key) { return key.rfind("x-", 0) == 0; }

int to_bounded_int(const JsonValue& v, const std::string& path, long long lo, long long hi) {
    if (!v.is_int()) throw SchemaError(path, "expected an integer");
    const Int& i = v.as_int();
    if (i < lo || i > hi)
        throw SchemaError(path, "value " + i.str() + " out of range [" +
                                    std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return static_cast<int>(i.convert_to<long long>());
}

}  // namespace

FanDocument fan_document_from_json(const JsonValue& v) {
    if (!v.is_object()) throw SchemaError("$", "fan document must be an object");
    FanDocument doc;
    bool saw_rank = false, saw_rays = false, saw_cones = false;
    for (const auto& [key, value] : v.as_object()) {
        if (key == "name") {
            if (!value.is_string()) throw SchemaError("$.name", "expected a string");
            doc.fan.name = value.as_string();
        } else if (key == "lattice_rank") {
            doc.fan.lattice_rank = to_bounded_int(value, "$.lattice_rank", 0, kMaxLatticeRank);
            saw_rank = true;
        } else if (key == "rays") {
            if (!value.is_array()) throw SchemaError("$.rays", "expected an array");
            for (std::size_t i = 0; i < value.as_array().size(); ++i) {
                const JsonValue& rv = value.as_array()[i];
                std::string path = "$.rays[" + std::to_string(i) + "]";
                if (!rv.is_array()) throw SchemaError(path, "expected an array of integers");
                RayVector ray;
                for (std::size_t j = 0; j < rv.as_array().size(); ++j) {
                    const JsonValue& e = rv.as_array()[j];
                    if (!e.is_int())
                        throw SchemaError(path + "[" + std::to_string(j) + "]",
                                          "expected an integer");
                    ray.push_back(e.as_int());
                }
                doc.fan.rays.push_back(std::move(ray));
            }
            saw_rays = true;
        } else if (key == "max_cones") {
            if (!value.is_array()) throw SchemaError("$.max_cones", "expected an array");
            for (std::size_t i = 0; i < value.as_array().size(); ++i) {
                const JsonValue& cv = value.as_array()[i];
                std::string path = "$.max_cones[" + std::to_string(i) + "]";
                if (!cv.is_array()) throw SchemaError(path, "expected an array of ray indices");
                if (cv.as_array().empty())
                    throw SchemaError(path, "empty cone not allowed; the zero cone is implicit");
                ConeIndexSet cone;
                for (std::size_t j = 0; j < cv.as_array().size(); ++j)
                    cone.push_back(to_bounded_int(cv.as_array()[j],
                                                  path + "[" + std::to_string(j) + "]", 0,
                                                  1 << 20));
                doc.fan.max_cones.push_back(std::move(cone));
            }
            saw_cones = true;
        } else if (is_extension_key(key)) {
            doc.extensions.emplace_back(key, value);
        } else {
            throw SchemaError("$." + key, "unknown field (use an \"x-\" prefix for extensions)");
        }
    }
    if (!saw_rank) throw SchemaError("$.lattice_rank", "missing required field");
    if (!saw_rays) throw SchemaError("$.rays", "missing required field");
    if (!saw_cones) throw SchemaError("$.max_cones", "missing required field");

    const std::size_t n = static_cast<std::size_t>(doc.fan.lattice_rank);
    for (std::size_t i = 0; i < doc.fan.rays.size(); ++i)
        if (doc.fan.rays[i].size() != n)
            throw SchemaError("$.rays[" + std::to_string(i) + "]",
                              "expected " + std::to_string(n) + " entries, found " +
                                  std::to_string(doc.fan.rays[i].size()));
    for (std::size_t i = 0; i < doc.fan.max_cones.size(); ++i)
        for (int idx : doc.fan.max_cones[i])
            if (idx < 0 || static_cast<std::size_t>(idx) >= doc.fan.rays.size())
                throw SchemaError("$.max_cones[" + std::to_string(i) + "]",
                                  "ray index " + std::to_string(idx) + " out of range");
    return doc;
}

FanDocument parse_fan(std::string_view text) {
    return fan_document_from_json(parse_json(text));
}

FanDocument canonicalize(const FanDocument& d) {
    FanDocument out = d;
    const std::size_t m = d.fan.rays.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return d.fan.rays[a] < d.fan.rays[b];
    });
    std::vector<int> remap(m);
    out.fan.rays.clear();
    for (std::size_t pos = 0; pos < m; ++pos) {
        remap[order[pos]] = static_cast<int>(pos);
        out.fan.rays.push_back(d.fan.rays[order[pos]]);
    }
    for (ConeIndexSet& cone : out.fan.max_cones) {
        for (int& idx : cone) idx = remap[idx];
        std::sort(cone.begin(), cone.end());
    }
    std::sort(out.fan.max_cones.begin(), out.fan.max_cones.end());
    std::sort(out.extensions.begin(), out.extensions.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

namespace {

JsonValue rays_to_json(const std::vector<RayVector>& rays) {
    JsonArray arr;
    for (const RayVector& ray : rays) {
        JsonArray rv;
        for (const Int& e : ray) rv.emplace_back(e);
        arr.emplace_back(std::move(rv));
    }
    return JsonValue(std::move(arr));
}

JsonValue cones_to_json(const std::vector<ConeIndexSet>& cones) {
    JsonArray arr;
    for (const ConeIndexSet& cone : cones) {
        JsonArray cv;
        for (int i : cone) cv.emplace_back(i);
        arr.emplace_back(std::move(cv));
    }
    return JsonValue(std::move(arr));
}

JsonValue fan_geometry_to_json(const Fan& f) {
    JsonObject obj;
    obj.emplace_back("lattice_rank", JsonValue(f.lattice_rank));
    obj.emplace_back("rays", rays_to_json(f.rays));
    obj.emplace_back("max_cones", cones_to_json(f.max_cones));
    return JsonValue(std::move(obj));
}

}  // namespace

JsonValue fan_to_json(const FanDocument& d) {
    FanDocument c = canonicalize(d);
    JsonObject obj;
    if (!c.fan.name.empty()) obj.emplace_back("name", JsonValue(c.fan.name));
    obj.emplace_back("lattice_rank", JsonValue(c.fan.lattice_rank));
    obj.emplace_back("rays", rays_to_json(c.fan.rays));
    obj.emplace_back("max_cones", cones_to_json(c.fan.max_cones));
    for (auto& [k, v] : c.extensions) obj.emplace_back(k, v);
    return JsonValue(std::move(obj));
}

std::string serialize_fan(const FanDocument& d) { return dump_json(fan_to_json(d)); }

std::string serialize_fan_pretty(const FanDocument& d) {
    return dump_json_pretty(fan_to_json(d));
}

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx, data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx, digest, &len) != 1) {
        EVP_MD_CTX_free(ctx);
        throw std::runtime_error("sha256_hex: digest failure");
    }
    EVP_MD_CTX_free(ctx);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

std::string subject_hash(const FanDocument& d) {
    FanDocument c = canonicalize(d);
    return "sha256:" + sha256_hex(dump_json(fan_geometry_to_json(c.fan)));
}

// ---- catalog ----

namespace {

RayVector unit_ray(int n, int i) {
    RayVector r(n, 0);
    r[i] = 1;
    return r;
}

Fan projective_space_fan(int n) {
    Fan f;
    f.lattice_rank = n;
    f.name = "projective(" + std::to_string(n) + ")";
    for (int i = 0; i < n; ++i) f.rays.push_back(unit_ray(n, i));
    f.rays.push_back(RayVector(n, -1));
    for (int skip = 0; skip <= n; ++skip) {
        ConeIndexSet cone;
        for (int i = 0; i <= n; ++i)
            if (i != skip) cone.push_back(i);
        f.max_cones.push_back(std::move(cone));
    }
    std::sort(f.max_cones.begin(), f.max_cones.end());
    return f;
}

Fan affine_space_fan(int n) {
    Fan f;
    f.lattice_rank = n;
    f.name = "affine(" + std::to_string(n) + ")";
    ConeIndexSet cone;
    for (int i = 0; i < n; ++i) {
        f.rays.push_back(unit_ray(n, i));
        cone.push_back(i);
    }
    f.max_cones.push_back(std::move(cone));
    return f;
}

Fan torus_fan(int k) {
    Fan f;
    f.lattice_rank = k;
    f.name = "torus(" + std::to_string(k) + ")";
    return f;
}

Fan make_fan_2d(std::string name, std::vector<std::vector<long long>> rays,
                std::vector<ConeIndexSet> cones) {
    Fan f;
    f.lattice_rank = 2;
    f.name = std::move(name);
    for (const auto& r : rays) f.rays.push_back(RayVector(r.begin(), r.end()));
    f.max_cones = std::move(cones);
    return f;
}

std::optional<int> parse_parameter(const std::string& lower, const std::string& prefix,
                                   int lo, int hi) {
    std::string paren = prefix + "(";
    std::string digits;
    if (lower.rfind(paren, 0) == 0 && lower.back() == ')')
        digits = lower.substr(paren.size(), lower.size() - paren.size() - 1);
    if (digits.empty()) return std::nullopt;
    for (char c : digits)
        if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    int k = std::stoi(digits);
    if (k < lo || k > hi) return std::nullopt;
    return k;
}

}  // namespace

std::vector<std::string> catalog_names() {
    std::vector<std::string> names;
    for (int n = 1; n <= 4; ++n) names.push_back("affine(" + std::to_string(n) + ")");
    names.push_back("blowup_p2");
    for (int a = 0; a <= 5; ++a) names.push_back("hirzebruch(" + std::to_string(a) + ")");
    names.push_back("p1xp1");
    for (int n = 1; n <= 4; ++n) names.push_back("projective(" + std::to_string(n) + ")");
    names.push_back("torsion_z2");
    for (int k = 0; k <= 4; ++k) names.push_back("torus(" + std::to_string(k) + ")");
    names.push_back("wps_112");
    names.push_back("wps_123");
    return names;
}

FanDocument catalog_fan(const std::string& name) {
    std::string lower;
    for (char c : name) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));

    // shorthands: p2 -> projective(2), f3 -> hirzebruch(3), c2 -> affine(2)
    if (lower.size() == 2 && std::isdigit(static_cast<unsigned char>(lower[1]))) {
        int k = lower[1] - '0';
        if (lower[0] == 'p' && k >= 1 && k <= 4) lower = "projective(" + std::to_string(k) + ")";
        else if (lower[0] == 'f' && k <= 5) lower = "hirzebruch(" + std::to_string(k) + ")";
        else if (lower[0] == 'c' && k >= 1 && k <= 4) lower = "affine(" + std::to_string(k) + ")";
    }

    Fan fan;
    if (auto n = parse_parameter(lower, "projective", 1, 4)) {
        fan = projective_space_fan(*n);
    } else if (auto n = parse_parameter(lower, "affine", 1, 4)) {
        fan = affine_space_fan(*n);
    } else if (auto k = parse_parameter(lower, "torus", 0, 4)) {
        fan = torus_fan(*k);
    } else if (auto a = parse_parameter(lower, "hirzebruch", 0, 5)) {
        fan = make_fan_2d("hirzebruch(" + std::to_string(*a) + ")",
                          {{1, 0}, {0, 1}, {-1, *a}, {0, -1}},
                          {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    } else if (lower == "p1xp1") {
        fan = make_fan_2d("p1xp1", {{1, 0}, {-1, 0}, {0, 1}, {0, -1}},
                          {{0, 2}, {0, 3}, {1, 2}, {1, 3}});
    } else if (lower == "blowup_p2") {
        fan = make_fan_2d("blowup_p2", {{1, 0}, {0, 1}, {-1, -1}, {1, 1}},
                          {{0, 3}, {3, 1}, {1, 2}, {2, 0}});
    } else if (lower == "torsion_z2") {
        fan = make_fan_2d("torsion_z2", {{1, 1}, {1, -1}}, {{0}, {1}});
    } else if (lower == "wps_112") {
        fan = make_fan_2d("wps_112", {{1, 0}, {0, 1}, {-1, -2}}, {{0, 1}, {1, 2}, {2, 0}});
    } else if (lower == "wps_123") {
        fan = make_fan_2d("wps_123", {{1, 0}, {0, 1}, {-2, -3}}, {{0, 1}, {1, 2}, {2, 0}});
    } else {
        throw std::invalid_argument("unknown catalog fan \"" + name +
                                    "\"; run the catalog command for the list");
    }
    return FanDocument{std::move(fan), {}};
}

FanDocument product_fan(const FanDocument& a, const FanDocument& b) {
    const int na = a.fan.lattice_rank;
    const int nb = b.fan.lattice_rank;
    const int ma = static_cast<int>(a.fan.rays.size());
    FanDocument out;
    out.fan.lattice_rank = na + nb;
    if (!a.fan.name.empty() && !b.fan.name.empty())
        out.fan.name = "product(" + a.fan.name + "," + b.fan.name + ")";
    for (const RayVector& r : a.fan.rays) {
        RayVector padded = r;
        padded.resize(na + nb, 0);
        out.fan.rays.push_back(std::move(padded));
    }
    for (const RayVector& r : b.fan.rays) {
        RayVector padded(na, 0);
        padded.insert(padded.end(), r.begin(), r.end());
        out.fan.rays.push_back(std::move(padded));
    }
    std::vector<ConeIndexSet> ca = a.fan.max_cones.empty()
                                       ? std::vector<ConeIndexSet>{{}}
                                       : a.fan.max_cones;
    std::vector<ConeIndexSet> cb = b.fan.max_cones.empty()
                                       ? std::vector<ConeIndexSet>{{}}
                                       : b.fan.max_cones;
    for (const ConeIndexSet& x : ca)
        for (const ConeIndexSet& y : cb) {
            ConeIndexSet cone = x;
            for (int i : y) cone.push_back(i + ma);
            if (cone.empty()) continue;  // zero cone stays implicit
            std::sort(cone.begin(), cone.end());
            out.fan.max_cones.push_back(std::move(cone));
        }
    return out;
}

// ---- certificate documents ----

bool is_known_rule(std::string_view rule) {
    return rule == kRuleLieGroupOka || rule == kRuleCodim2ComplementOka ||
           rule == kRuleQuotientBundle || rule == kRuleBundleTransfer ||
           rule == kRuleProductSplit;
}

namespace {

void validate_step(const JsonValue& step, const std::string& path) {
    if (!step.is_object()) throw SchemaError(path, "step must be an object");
    bool saw_rule = false, saw_statement = false, saw_citation = false, saw_witness = false,
         saw_premises = false;
    for (const auto& [key, value] : step.as_object()) {
        if (key == "rule") {
            if (!value.is_string() || !is_known_rule(value.as_string()))
                throw SchemaError(path + ".rule", "unknown rule id");
            saw_rule = true;
        } else if (key == "statement") {
            if (!value.is_string()) throw SchemaError(path + ".statement", "expected a string");
            saw_statement = true;
        } else if (key == "citation") {
            if (!value.is_string()) throw SchemaError(path + ".citation", "expected a string");
            saw_citation = true;
        } else if (key == "witness") {
            if (!value.is_object()) throw SchemaError(path + ".witness", "expected an object");
            saw_witness = true;
        } else if (key == "premises") {
            if (!value.is_array()) throw SchemaError(path + ".premises", "expected an array");
            for (std::size_t i = 0; i < value.as_array().size(); ++i)
                validate_step(value.as_array()[i],
                              path + ".premises[" + std::to_string(i) + "]");
            saw_premises = true;
        } else {
            throw SchemaError(path + "." + key, "unknown field in step");
        }
    }
    if (!saw_rule) throw SchemaError(path + ".rule", "missing required field");
    if (!saw_statement) throw SchemaError(path + ".statement", "missing required field");
    if (!saw_citation) throw SchemaError(path + ".citation", "missing required field");
    if (!saw_witness) throw SchemaError(path + ".witness", "missing required field");
    if (!saw_premises) throw SchemaError(path + ".premises", "missing required field");
    // leaves carry Oka facts; internal nodes carry transfers
    const std::string& rule = step.at("rule").as_string();
    bool leaf = step.at("premises").as_array().empty();
    bool leaf_rule = rule == kRuleLieGroupOka || rule == kRuleCodim2ComplementOka;
    if (leaf && !leaf_rule)
        throw SchemaError(path, "rule " + rule + " requires premises");
    if (!leaf && leaf_rule)
        throw SchemaError(path, "leaf rule " + rule + " cannot have premises");
}

}  // namespace

CertificateDocument certificate_from_json(const JsonValue& v) {
    if (!v.is_object()) throw SchemaError("$", "certificate must be an object");
    CertificateDocument doc;
    bool saw_version = false, saw_subject = false, saw_conclusion = false,
         saw_derivation = false;
    for (const auto& [key, value] : v.as_object()) {
        if (key == "format_version") {
            if (!value.is_string()) throw SchemaError("$.format_version", "expected a string");
            doc.format_version = value.as_string();
            if (doc.format_version != kCertificateFormatVersion)
                throw SchemaError("$.format_version",
                                  "unsupported version \"" + doc.format_version + "\"");
            saw_version = true;
        } else if (key == "subject") {
            if (!value.is_object()) throw SchemaError("$.subject", "expected an object");
            for (const auto& [sk, sv] : value.as_object()) {
                if (sk == "hash") {
                    if (!sv.is_string()) throw SchemaError("$.subject.hash", "expected a string");
                    doc.subject_hash = sv.as_string();
                } else if (sk == "name") {
                    if (!sv.is_string()) throw SchemaError("$.subject.name", "expected a string");
                    doc.subject_name = sv.as_string();
                } else {
                    throw SchemaError("$.subject." + sk, "unknown field");
                }
            }
            if (doc.subject_hash.empty())
                throw SchemaError("$.subject.hash", "missing required field");
            saw_subject = true;
        } else if (key == "conclusion") {
            if (!value.is_string()) throw SchemaError("$.conclusion", "expected a string");
            doc.conclusion = value.as_string();
            saw_conclusion = true;
        } else if (key == "derivation") {
            validate_step(value, "$.derivation");
            doc.derivation = value;
            saw_derivation = true;
        } else if (is_extension_key(key)) {
            doc.extensions.emplace_back(key, value);
        } else {
            throw SchemaError("$." + key, "unknown field (use an \"x-\" prefix for extensions)");
        }
    }
    if (!saw_version) throw SchemaError("$.format_version", "missing required field");
    if (!saw_subject) throw SchemaError("$.subject", "missing required field");
    if (!saw_conclusion) throw SchemaError("$.conclusion", "missing required field");
    if (!saw_derivation) throw SchemaError("$.derivation", "missing required field");
    return doc;
}

CertificateDocument parse_certificate(std::string_view text) {
    return certificate_from_json(parse_json(text));
}

JsonValue certificate_to_json(const CertificateDocument& c) {
    JsonObject subject;
    subject.emplace_back("hash", JsonValue(c.subject_hash));
    if (!c.subject_name.empty()) subject.emplace_back("name", JsonValue(c.subject_name));
    JsonObject obj;
    obj.emplace_back("format_version", JsonValue(c.format_version));
    obj.emplace_back("subject", JsonValue(std::move(subject)));
    obj.emplace_back("conclusion", JsonValue(c.conclusion));
    obj.emplace_back("derivation", c.derivation);
    JsonObject ext = c.extensions;
    std::sort(ext.begin(), ext.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [k, v] : ext) obj.emplace_back(k, v);
    return JsonValue(std::move(obj));
}

std::string serialize_certificate(const CertificateDocument& c) {
    return dump_json(certificate_to_json(c));
}

std::string serialize_certificate_pretty(const CertificateDocument& c) {
    return dump_json_pretty(certificate_to_json(c));
}

}  // namespace toric
