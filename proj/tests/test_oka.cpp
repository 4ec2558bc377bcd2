#include "toric/oka.hpp"

#include <doctest.h>

#include "fangen.hpp"
#include "mutate.hpp"
#include "support.hpp"

using namespace toric;
using namespace toric::testsupport;

namespace {

OkaCertificate certify_ok(const FanDocument& doc) {
    CertifyResult r = certify(doc);
    REQUIRE(std::holds_alternative<OkaCertificate>(r));
    return std::get<OkaCertificate>(r);
}

Rejection certify_rejected(const FanDocument& doc) {
    CertifyResult r = certify(doc);
    REQUIRE(std::holds_alternative<Rejection>(r));
    return std::get<Rejection>(r);
}

const JsonValue& premise(const JsonValue& step, std::size_t i) {
    return step.at("premises").as_array()[i];
}

}  // namespace

TEST_CASE("certify: projective plane produces the documented tree") {
    OkaCertificate cert = certify_ok(catalog_fan("projective(2)"));
    CHECK(cert.conclusion == "X is Oka");
    CHECK(cert.subject_hash == subject_hash(catalog_fan("projective(2)")));

    const JsonValue& root = cert.derivation;
    CHECK(root.at("rule").as_string() == kRuleBundleTransfer);
    REQUIRE(root.at("premises").as_array().size() == 2);

    const JsonValue& codim = premise(root, 0);
    CHECK(codim.at("rule").as_string() == kRuleCodim2ComplementOka);
    CHECK(codim.at("witness").at("ambient_dim").as_int() == 3);
    CHECK(codim.at("witness").at("codim_z").as_int() == 3);
    CHECK(codim.at("witness").at("primitive_collections") ==
          cone_list_to_json({{0, 1, 2}}));

    const JsonValue& quotient = premise(root, 1);
    CHECK(quotient.at("rule").as_string() == kRuleQuotientBundle);
    CHECK(quotient.at("witness").at("free_action").at("free").as_bool());
    CHECK(quotient.at("witness").at("reductive").at("holds").as_bool());
    CHECK(quotient.at("witness").at("class_group").at("free_rank").as_int() == 1);
    CHECK(quotient.at("witness").at("degree_matrix") ==
          matrix_rows_to_json(IntMatrix::from_rows({{Int(1), Int(1), Int(1)}})));

    const JsonValue& lie = premise(quotient, 0);
    CHECK(lie.at("rule").as_string() == kRuleLieGroupOka);
    CHECK(lie.at("witness").at("group").at("torus_rank").as_int() == 1);
    CHECK(lie.at("premises").as_array().empty());

    VerifyResult check = verify_certificate(cert, catalog_fan("projective(2)"));
    CHECK(check.accepted);
}

TEST_CASE("certify: trivial fan concludes by the Lie group leaf alone") {
    OkaCertificate cert = certify_ok(catalog_fan("torus(2)"));
    CHECK(cert.derivation.at("rule").as_string() == kRuleLieGroupOka);
    CHECK(cert.derivation.at("premises").as_array().empty());
    CHECK(cert.derivation.at("witness").at("group").at("rank").as_int() == 2);
    CHECK(verify_certificate(cert, catalog_fan("torus(2)")).accepted);
}

TEST_CASE("certify: weighted projective planes are rejected NOT_SMOOTH") {
    Rejection r = certify_rejected(catalog_fan("wps_112"));
    CHECK(r.reason == RejectionReason::NotSmooth);
    CHECK(r.witness.at("multiplicity").as_int() == 2);

    // the witness reproduces: recompute the named cone's multiplicity
    FanDocument canonical = canonicalize(catalog_fan("wps_112"));
    ValidatedFan vf = validate_fan(canonical.fan);
    ConeIndexSet cone;
    for (const JsonValue& idx : r.witness.at("cone").as_array())
        cone.push_back(static_cast<int>(idx.as_int().convert_to<long long>()));
    CHECK(cone_multiplicity(vf, cone) == 2);

    Rejection r123 = certify_rejected(catalog_fan("wps_123"));
    CHECK(r123.reason == RejectionReason::NotSmooth);
    CHECK(r123.witness.at("multiplicity").as_int() >= 2);
}

TEST_CASE("certify: invalid fans are rejected INVALID_FAN") {
    FanDocument overlap;
    overlap.fan = Fan{2,
                      {{Int(1), Int(0)}, {Int(0), Int(1)}, {Int(1), Int(1)}, {Int(1), Int(-1)}},
                      {{0, 1}, {2, 3}},
                      "overlap"};
    Rejection r = certify_rejected(overlap);
    CHECK(r.reason == RejectionReason::InvalidFan);
    CHECK(r.witness.at("error").as_string() == "BAD_INTERSECTION");

    // the witness reproduces: the named pair has no separating functional
    FanDocument canonical = canonicalize(overlap);
    auto to_cone = [](const JsonValue& v) {
        ConeIndexSet cone;
        for (const JsonValue& idx : v.as_array())
            cone.push_back(static_cast<int>(idx.as_int().convert_to<long long>()));
        return cone;
    };
    CHECK(!separating_functional(canonical.fan.rays, to_cone(r.witness.at("subject")),
                                 to_cone(r.witness.at("other")), 2)
               .has_value());

    // non-simplicial max cone short-circuits to NOT_SMOOTH
    FanDocument nonsimp;
    nonsimp.fan = Fan{2, {{Int(1), Int(0)}, {Int(-1), Int(0)}, {Int(0), Int(1)}}, {{0, 1, 2}}, ""};
    Rejection rs = certify_rejected(nonsimp);
    CHECK(rs.reason == RejectionReason::NotSmooth);
    CHECK(rs.witness.at("non_simplicial").as_bool());
}

TEST_CASE("certify: deterministic and canonicalizing") {
    FanDocument p2 = catalog_fan("projective(2)");
    OkaCertificate a = certify_ok(p2);
    OkaCertificate b = certify_ok(p2);
    CHECK(serialize_certificate(a) == serialize_certificate(b));

    // permuted input canonicalizes to the same certificate
    FanDocument shuffled = p2;
    std::swap(shuffled.fan.rays[0], shuffled.fan.rays[2]);
    for (ConeIndexSet& cone : shuffled.fan.max_cones)
        for (int& i : cone) i = (i == 0) ? 2 : (i == 2 ? 0 : i);
    std::swap(shuffled.fan.max_cones[0], shuffled.fan.max_cones[1]);
    CHECK(serialize_certificate(certify_ok(shuffled)) == serialize_certificate(a));
}

TEST_CASE("verify_certificate: subject hash mismatch") {
    OkaCertificate cert = certify_ok(catalog_fan("projective(2)"));
    VerifyResult r = verify_certificate(cert, catalog_fan("p1xp1"));
    CHECK(!r.accepted);
    CHECK(r.mismatch_path == "$.subject.hash");
}

TEST_CASE("verify_certificate: rejects certificates for non-certifiable fans") {
    OkaCertificate cert = certify_ok(catalog_fan("projective(2)"));
    cert.subject_hash = subject_hash(catalog_fan("wps_112"));
    VerifyResult r = verify_certificate(cert, catalog_fan("wps_112"));
    CHECK(!r.accepted);
    CHECK(r.detail.find("NOT_SMOOTH") != std::string::npos);
}

TEST_CASE("verify_certificate: tampered codim witness is located at the leaf") {
    OkaCertificate cert = certify_ok(catalog_fan("projective(2)"));
    // set codim_z to 1 in the first premise
    JsonObject root = cert.derivation.as_object();
    for (auto& [k, v] : root) {
        if (k != "premises") continue;
        JsonArray premises = v.as_array();
        JsonObject leaf = premises[0].as_object();
        for (auto& [lk, lv] : leaf) {
            if (lk != "witness") continue;
            JsonObject w = lv.as_object();
            for (auto& [wk, wv] : w)
                if (wk == "codim_z") wv = JsonValue(1);
            lv = JsonValue(std::move(w));
        }
        premises[0] = JsonValue(std::move(leaf));
        v = JsonValue(std::move(premises));
    }
    cert.derivation = JsonValue(std::move(root));

    VerifyResult r = verify_certificate(cert, catalog_fan("projective(2)"));
    CHECK(!r.accepted);
    CHECK(r.mismatch_path == "$.derivation.premises[0].witness.codim_z");
}

TEST_CASE("certify: torus products embed the core derivation under PRODUCT_SPLIT") {
    FanDocument p2 = catalog_fan("projective(2)");
    FanDocument prod = product_fan(p2, catalog_fan("torus(2)"));
    OkaCertificate inner = certify_ok(p2);
    OkaCertificate outer = certify_ok(prod);

    const JsonValue& root = outer.derivation;
    CHECK(root.at("rule").as_string() == kRuleProductSplit);
    CHECK(root.at("witness").at("torus_rank").as_int() == 2);
    CHECK(root.at("witness").at("core_subject_hash").as_string() == inner.subject_hash);
    CHECK(premise(root, 0) == inner.derivation);

    CHECK(verify_certificate(outer, prod).accepted);

    // the law holds for rejections too
    FanDocument bad = product_fan(catalog_fan("wps_112"), catalog_fan("torus(1)"));
    Rejection r = certify_rejected(bad);
    CHECK(r.reason == RejectionReason::NotSmooth);
}

TEST_CASE("certify: torsion fan certificate carries the finite group") {
    OkaCertificate cert = certify_ok(catalog_fan("torsion_z2"));
    const JsonValue& quotient = premise(cert.derivation, 1);
    const JsonValue& group = quotient.at("witness").at("group");
    CHECK(group.at("torus_rank").as_int() == 0);
    CHECK(group.at("finite_factors").as_array().size() == 1);
    CHECK(group.at("finite_generators").as_array()[0].at("order").as_int() == 2);
    CHECK(verify_certificate(cert, catalog_fan("torsion_z2")).accepted);
}

TEST_CASE("soundness: certify then verify accepts across catalog and random fans") {
    for (const std::string& name : catalog_names()) {
        FanDocument doc = catalog_fan(name);
        CertifyResult r = certify(doc);
        if (std::holds_alternative<Rejection>(r)) {
            CHECK(name.rfind("wps", 0) == 0);
            continue;
        }
        OkaCertificate cert = std::get<OkaCertificate>(r);
        VerifyResult v = verify_certificate(cert, doc);
        CHECK(v.accepted);
        // document layer round trip preserves acceptance
        OkaCertificate reparsed = parse_certificate(serialize_certificate(cert));
        CHECK(verify_certificate(reparsed, doc).accepted);
    }

    std::mt19937_64 rng(606060);
    int certified = 0;
    for (int iter = 0; iter < 40; ++iter) {
        FanDocument doc{random_fan_2d(rng), {}};
        CertifyResult r = certify(doc);
        if (std::holds_alternative<Rejection>(r)) {
            CHECK(std::get<Rejection>(r).reason == RejectionReason::NotSmooth);
            continue;
        }
        ++certified;
        CHECK(verify_certificate(std::get<OkaCertificate>(r), doc).accepted);
    }
    CHECK(certified > 0);
}

TEST_CASE("tamper resistance: every witness mutation is caught at its step") {
    for (const char* name : {"projective(2)", "p1xp1"}) {
        FanDocument doc = catalog_fan(name);
        OkaCertificate cert = certify_ok(doc);
        std::vector<Mutation> mutations = witness_mutations(cert.derivation);
        CHECK(mutations.size() > 20);  // plenty of sites
        for (const Mutation& mutation : mutations) {
            OkaCertificate tampered = cert;
            tampered.derivation = mutation.mutated;
            // exercise the document layer too: serialize and reparse
            tampered = parse_certificate(serialize_certificate(tampered));
            VerifyResult r = verify_certificate(tampered, doc);
            CHECK(!r.accepted);
            CHECK(r.mismatch_path.rfind(mutation.step_path, 0) == 0);
        }
    }
}

TEST_CASE("explain_certificate renders every step") {
    OkaCertificate cert = certify_ok(catalog_fan("projective(2)"));
    std::string text = explain_certificate(cert);
    CHECK(text.find(kRuleBundleTransfer) != std::string::npos);
    CHECK(text.find(kRuleCodim2ComplementOka) != std::string::npos);
    CHECK(text.find(kRuleQuotientBundle) != std::string::npos);
    CHECK(text.find(kRuleLieGroupOka) != std::string::npos);
    CHECK(text.find("Gromov") != std::string::npos);
    CHECK(text.find(cert.subject_hash) != std::string::npos);
}
