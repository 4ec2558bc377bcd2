// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Everything here is exact; there are no tolerances to tune.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "clirun.hpp"
#include "fangen.hpp"
#include "mutate.hpp"
#include "support.hpp"
#include "toric/cox.hpp"
#include "toric/fan.hpp"
#include "toric/fanfmt.hpp"
#include "toric/oka.hpp"

using namespace toric;
using namespace toric::testsupport;

namespace {

struct Checker {
    int failures = 0;
    std::ostringstream first_failure;

    void require(bool ok, const std::string& what) {
        if (ok) return;
        if (failures == 0) first_failure << what;
        ++failures;
    }
};

// ---- corpus: catalog + 200 randomized valid simplicial fans ----

std::vector<FanDocument> catalog_corpus() {
    std::vector<FanDocument> out;
    for (const std::string& name : catalog_names()) out.push_back(catalog_fan(name));
    return out;
}

std::vector<Fan> randomized_corpus(std::size_t count) {
    std::mt19937_64 rng(0xACCE97ED);
    std::vector<Fan> seeds;
    seeds.push_back(catalog_fan("projective(3)").fan);
    seeds.push_back(catalog_fan("affine(3)").fan);
    seeds.push_back(product_fan(catalog_fan("projective(1)"), catalog_fan("projective(2)")).fan);
    seeds.push_back(product_fan(catalog_fan("projective(1)"), catalog_fan("wps_112")).fan);
    seeds.push_back(product_fan(catalog_fan("projective(1)"),
                                product_fan(catalog_fan("projective(1)"),
                                            catalog_fan("projective(1)")))
                        .fan);
    {
        // weighted projective space P(1,1,1,3): a singular rank-3 seed
        Fan wps;
        wps.lattice_rank = 3;
        wps.name = "wps_1113";
        wps.rays = {{Int(1), Int(0), Int(0)},
                    {Int(0), Int(1), Int(0)},
                    {Int(0), Int(0), Int(1)},
                    {Int(-1), Int(-1), Int(-3)}};
        wps.max_cones = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
        seeds.push_back(wps);
    }

    std::vector<Fan> out;
    while (out.size() < count) {
        Fan f = (out.size() % 5 < 3) ? random_fan_2d(rng)
                                     : random_subfan_image(rng, seeds[out.size() % seeds.size()]);
        if (f.rays.size() > 8) continue;
        out.push_back(std::move(f));
    }
    return out;
}

std::string fan_label(const Fan& f) {
    return f.name.empty() ? ("<fan with " + std::to_string(f.rays.size()) + " rays>") : f.name;
}

// ---- criterion 1 ----

void criterion_certification(Checker& c) {
    std::vector<FanDocument> fans;
    for (int n = 1; n <= 4; ++n) fans.push_back(catalog_fan("projective(" + std::to_string(n) + ")"));
    fans.push_back(catalog_fan("p1xp1"));
    for (int a = 0; a <= 5; ++a) fans.push_back(catalog_fan("hirzebruch(" + std::to_string(a) + ")"));
    fans.push_back(catalog_fan("blowup_p2"));
    for (int n = 1; n <= 3; ++n) fans.push_back(catalog_fan("affine(" + std::to_string(n) + ")"));
    for (int k = 1; k <= 3; ++k) fans.push_back(catalog_fan("torus(" + std::to_string(k) + ")"));
    fans.push_back(catalog_fan("torsion_z2"));
    fans.push_back(product_fan(catalog_fan("projective(2)"), catalog_fan("torus(2)")));

    auto dir = std::filesystem::temp_directory_path();
    for (const FanDocument& doc : fans) {
        std::string label = fan_label(doc.fan);
        // library surface
        CertifyResult r = certify(doc);
        c.require(std::holds_alternative<OkaCertificate>(r), label + ": certify rejected");
        if (!std::holds_alternative<OkaCertificate>(r)) continue;
        const OkaCertificate& cert = std::get<OkaCertificate>(r);
        OkaCertificate reparsed = parse_certificate(serialize_certificate(cert));
        c.require(verify_certificate(reparsed, doc).accepted, label + ": check rejected");

        // command surface
        auto fan_path = dir / "acc_fan.json";
        auto cert_path = dir / "acc_cert.json";
        std::ofstream(fan_path) << serialize_fan_pretty(doc);
        CliResult certify_run = run_cli("certify " + fan_path.string() + " -o " + cert_path.string());
        c.require(certify_run.exit_code == 0, label + ": cli certify exit " +
                                                  std::to_string(certify_run.exit_code));
        CliResult check_run = run_cli("check " + cert_path.string() + " " + fan_path.string());
        c.require(check_run.exit_code == 0,
                  label + ": cli check exit " + std::to_string(check_run.exit_code));
        std::filesystem::remove(fan_path);
        std::filesystem::remove(cert_path);
    }
}

// ---- criterion 2 ----

void criterion_negatives(Checker& c) {
    for (const char* name : {"wps_112", "wps_123"}) {
        FanDocument doc = catalog_fan(name);
        CertifyResult r = certify(doc);
        bool rejected = std::holds_alternative<Rejection>(r);
        c.require(rejected, std::string(name) + ": expected rejection");
        if (!rejected) continue;
        const Rejection& rej = std::get<Rejection>(r);
        c.require(rej.reason == RejectionReason::NotSmooth,
                  std::string(name) + ": expected NOT_SMOOTH");
        // the witness cone must reproduce multiplicity >= 2 when recomputed
        ValidatedFan vf = validate_fan(canonicalize(doc).fan);
        ConeIndexSet cone;
        for (const JsonValue& idx : rej.witness.at("cone").as_array())
            cone.push_back(static_cast<int>(idx.as_int().convert_to<long long>()));
        c.require(cone_multiplicity(vf, cone) >= 2,
                  std::string(name) + ": witness multiplicity not >= 2");
    }

    FanDocument overlap;
    overlap.fan = Fan{2,
                      {{Int(1), Int(0)}, {Int(0), Int(1)}, {Int(1), Int(1)}, {Int(1), Int(-1)}},
                      {{0, 1}, {2, 3}},
                      "overlap"};
    CertifyResult r = certify(overlap);
    c.require(std::holds_alternative<Rejection>(r) &&
                  std::get<Rejection>(r).reason == RejectionReason::InvalidFan,
              "overlapping pair: expected INVALID_FAN");
}

// ---- criterion 3 ----

void criterion_known_values(Checker& c) {
    for (int n = 1; n <= 4; ++n) {
        std::string label = "projective(" + std::to_string(n) + ")";
        ValidatedFan vf = validate_fan(canonicalize(catalog_fan(label)).fan);
        CoxPresentation p = cox_presentation(vf);
        c.require(p.m == static_cast<std::size_t>(n) + 1, label + ": m != n+1");
        c.require(p.collections.size() == 1 &&
                      p.collections[0].size() == static_cast<std::size_t>(n) + 1,
                  label + ": primitive collection shape");
        c.require(p.codim_z == CodimZ::finite(n + 1), label + ": codim Z != n+1");
        c.require(p.cl == ClassGroup{1, {}}, label + ": class group != Z");
        IntMatrix ones(1, p.m);
        for (std::size_t j = 0; j < p.m; ++j) ones.at(0, j) = 1;
        c.require(p.degree_matrix == ones, label + ": degrees != (1,...,1)");
    }

    CoxPresentation q = cox_presentation(validate_fan(canonicalize(catalog_fan("p1xp1")).fan));
    c.require(q.codim_z == CodimZ::finite(2), "p1xp1: codim Z != 2");

    CoxPresentation z = cox_presentation(validate_fan(canonicalize(catalog_fan("torsion_z2")).fan));
    c.require(z.cl == ClassGroup{0, {Int(2)}}, "torsion_z2: class group != Z/2");
    c.require(z.group.torus_rank == 0 && z.group.finite_generators.size() == 1,
              "torsion_z2: G not finite of one generator");
    if (z.group.finite_generators.size() == 1) {
        const FiniteGenerator& g = z.group.finite_generators[0];
        c.require(g.order == 2, "torsion_z2: generator order != 2");
        c.require(g.exponents == RayVector{Int(1), Int(1)},
                  "torsion_z2: generator exponents != (1,1)");
    }
}

// ---- criterion 4 ----

bool is_face_of(const ConeIndexSet& s, const std::vector<ConeIndexSet>& cones) {
    if (s.empty()) return true;
    for (const ConeIndexSet& c : cones)
        if (std::includes(c.begin(), c.end(), s.begin(), s.end())) return true;
    return false;
}

std::vector<ConeIndexSet> minimal_non_faces_brute(const ValidatedFan& f) {
    const std::size_t m = f.ray_count();
    std::vector<ConeIndexSet> out;
    for (std::uint32_t bits = 1; bits < (std::uint32_t(1) << m); ++bits) {
        ConeIndexSet s;
        for (std::size_t i = 0; i < m; ++i)
            if (bits & (std::uint32_t(1) << i)) s.push_back(static_cast<int>(i));
        if (is_face_of(s, f.max_cones())) continue;
        bool minimal = true;
        for (std::size_t drop = 0; drop < s.size() && minimal; ++drop) {
            ConeIndexSet t;
            for (std::size_t i = 0; i < s.size(); ++i)
                if (i != drop) t.push_back(s[i]);
            if (!is_face_of(t, f.max_cones())) minimal = false;
        }
        if (minimal) out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end(), [](const ConeIndexSet& a, const ConeIndexSet& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return out;
}

void check_cover_brute(Checker& c, const ValidatedFan& vf, const std::string& label) {
    const std::size_t m = vf.ray_count();
    if (m > 12) return;
    CoverWitness w = verify_cover(vf);
    c.require(w.exhaustive && w.subsets_checked == (std::uint64_t(1) << m),
              label + ": cover witness not exhaustive");
    std::vector<ConeIndexSet> pcs = primitive_collections(vf);
    for (std::uint32_t bits = 0; bits < (std::uint32_t(1) << m); ++bits) {
        ConeIndexSet s;
        for (std::size_t i = 0; i < m; ++i)
            if (bits & (std::uint32_t(1) << i)) s.push_back(static_cast<int>(i));
        bool contains_pc = false;
        for (const ConeIndexSet& pc : pcs)
            contains_pc |= std::includes(s.begin(), s.end(), pc.begin(), pc.end());
        if (contains_pc == is_face_of(s, vf.max_cones())) {
            c.require(false, label + ": cover identity fails on a subset");
            return;
        }
    }
}

void criterion_oracles(Checker& c, const std::vector<ValidatedFan>& corpus) {
    for (const ValidatedFan& vf : corpus) {
        std::string label = fan_label(vf.fan());
        c.require(primitive_collections(vf) == minimal_non_faces_brute(vf),
                  label + ": primitive collections != brute-force minimal non-faces");
        check_cover_brute(c, vf, label);
    }
}

// ---- criterion 5 ----

void criterion_cross_check(Checker& c, const std::vector<ValidatedFan>& corpus) {
    for (const ValidatedFan& raw : corpus) {
        ValidatedFan f = split_torus_factor(raw).core;  // torus_factor_rank 0
        std::string label = fan_label(raw.fan());
        c.require(verify_free_action(f).free == is_smooth(f).smooth,
                  label + ": free action disagrees with smoothness");
        for (const ConeIndexSet& cone : f.max_cones()) {
            if (cone.size() != static_cast<std::size_t>(f.lattice_rank())) continue;
            Int order = 1;
            for (const Int& d : stabilizer_invariants(f, cone)) order *= d;
            c.require(order == cone_multiplicity(f, cone),
                      label + ": stabilizer order != cone multiplicity");
        }
    }
}

// ---- criterion 6 ----

void criterion_linear_algebra(Checker& c) {
    std::mt19937_64 rng(0x11A0);
    std::uniform_int_distribution<std::size_t> dim(1, 6);
    for (int iter = 0; iter < 1000; ++iter) {
        IntMatrix a = random_matrix(rng, dim(rng), dim(rng));
        SmithDecomposition s = smith_normal_form(a);
        c.require(s.u * a * s.v == s.d, "UAV != D");
        c.require(is_unimodular(s.u) && is_unimodular(s.v), "U or V not unimodular");
        c.require(divisibility_chain_holds(s.d), "divisibility chain broken");
        IntMatrix l = random_unimodular(rng, a.rows());
        IntMatrix r = random_unimodular(rng, a.cols());
        c.require(cokernel_invariants(a) == cokernel_invariants(l * a * r),
                  "cokernel invariants changed under unimodular multiplication");
        if (c.failures) return;  // no point flooding
    }
}

// ---- criterion 7 ----

void criterion_torus_laws(Checker& c, const std::vector<ValidatedFan>& corpus) {
    for (const ValidatedFan& vf : corpus) {
        TorusSplit split = split_torus_factor(vf);
        c.require(torus_factor_rank(split.core) == 0,
                  fan_label(vf.fan()) + ": split core still has a torus factor");
    }

    for (const std::string& name : catalog_names()) {
        FanDocument doc = catalog_fan(name);
        for (int k = 1; k <= 2; ++k) {
            FanDocument prod = product_fan(doc, catalog_fan("torus(" + std::to_string(k) + ")"));
            CertifyResult inner = certify(doc);
            CertifyResult outer = certify(prod);
            bool inner_ok = std::holds_alternative<OkaCertificate>(inner);
            bool outer_ok = std::holds_alternative<OkaCertificate>(outer);
            c.require(inner_ok == outer_ok,
                      name + " x torus(" + std::to_string(k) + "): certify outcome differs");
            if (!inner_ok || !outer_ok) continue;
            const OkaCertificate& ic = std::get<OkaCertificate>(inner);
            const OkaCertificate& oc = std::get<OkaCertificate>(outer);
            const JsonValue& root = oc.derivation;
            if (doc.fan.rays.empty()) {
                // pure torus: Y is a point, so the whole certificate is the
                // Lie-group leaf and there is nothing to embed
                c.require(root.at("rule").as_string() == kRuleLieGroupOka,
                          name + ": pure torus product should be a Lie-group leaf");
                continue;
            }
            c.require(root.at("rule").as_string() == kRuleProductSplit,
                      name + ": product certificate root is not PRODUCT_SPLIT");
            if (root.at("rule").as_string() != kRuleProductSplit) continue;
            // inner derivation embedded: for fans without their own torus
            // factor the subtree is the inner derivation verbatim; otherwise
            // the inner certificate itself is a PRODUCT_SPLIT over it
            const JsonValue& subtree = root.at("premises").as_array()[0];
            const JsonValue& inner_tree =
                ic.derivation.at("rule").as_string() == kRuleProductSplit
                    ? ic.derivation.at("premises").as_array()[0]
                    : ic.derivation;
            c.require(subtree == inner_tree,
                      name + ": inner derivation not embedded under PRODUCT_SPLIT");
        }
    }
}

// ---- criterion 8 ----

void criterion_tamper_resistance(Checker& c) {
    for (const char* name : {"projective(2)", "p1xp1"}) {
        FanDocument doc = catalog_fan(name);
        OkaCertificate cert = std::get<OkaCertificate>(certify(doc));
        std::vector<Mutation> mutations = witness_mutations(cert.derivation);
        c.require(!mutations.empty(), std::string(name) + ": no mutation sites found");
        for (const Mutation& mutation : mutations) {
            OkaCertificate tampered = cert;
            tampered.derivation = mutation.mutated;
            tampered = parse_certificate(serialize_certificate(tampered));
            VerifyResult r = verify_certificate(tampered, doc);
            c.require(!r.accepted, std::string(name) + ": undetected mutation at " +
                                       mutation.path);
            c.require(r.mismatch_path.rfind(mutation.step_path, 0) == 0,
                      std::string(name) + ": mismatch at " + r.mismatch_path +
                          " not located at mutated step " + mutation.step_path);
        }
    }
}

// ---- criterion 9 ----

void criterion_round_trip(Checker& c) {
    std::mt19937_64 rng(0x5EED);
    for (const std::string& name : catalog_names()) {
        FanDocument canonical = canonicalize(catalog_fan(name));
        std::string text = serialize_fan(canonical);
        c.require(parse_fan(text) == canonical, name + ": fan parse∘serialize not identity");
        c.require(serialize_fan(parse_fan(text)) == text, name + ": fan text not stable");

        // order insensitivity: shuffle rays (remapping cones) and cones
        FanDocument shuffled = canonical;
        std::vector<int> perm(canonical.fan.rays.size());
        for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
        std::shuffle(perm.begin(), perm.end(), rng);
        for (std::size_t i = 0; i < perm.size(); ++i)
            shuffled.fan.rays[perm[i]] = canonical.fan.rays[i];
        for (std::size_t ci = 0; ci < canonical.fan.max_cones.size(); ++ci)
            for (std::size_t j = 0; j < canonical.fan.max_cones[ci].size(); ++j)
                shuffled.fan.max_cones[ci][j] = perm[canonical.fan.max_cones[ci][j]];
        std::shuffle(shuffled.fan.max_cones.begin(), shuffled.fan.max_cones.end(), rng);
        c.require(serialize_fan(shuffled) == text, name + ": canonical form order-sensitive");

        CertifyResult r = certify(canonical);
        if (std::holds_alternative<OkaCertificate>(r)) {
            const OkaCertificate& cert = std::get<OkaCertificate>(r);
            std::string cert_text = serialize_certificate(cert);
            c.require(parse_certificate(cert_text) == cert,
                      name + ": certificate parse∘serialize not identity");
            c.require(serialize_certificate(parse_certificate(cert_text)) == cert_text,
                      name + ": certificate text not stable");
        }
    }
}

}  // namespace

int main() {
    std::vector<ValidatedFan> corpus;
    for (const FanDocument& doc : catalog_corpus())
        corpus.push_back(validate_fan(canonicalize(doc).fan));
    for (const Fan& f : randomized_corpus(200)) corpus.push_back(validate_fan(f));

    struct Entry {
        int number;
        std::string title;
        std::function<void(Checker&)> run;
    };
    std::vector<Entry> criteria = {
        {1, "certification suite: certify + check on every smooth catalog fan",
         [](Checker& c) { criterion_certification(c); }},
        {2, "negative suite: NOT_SMOOTH and INVALID_FAN with exact reason codes",
         [](Checker& c) { criterion_negatives(c); }},
        {3, "known values: projective spaces, p1xp1, torsion_z2",
         [](Checker& c) { criterion_known_values(c); }},
        {4, "oracle equivalence: primitive collections and cover identity by brute force",
         [&](Checker& c) { criterion_oracles(c, corpus); }},
        {5, "cross-check: free action iff smooth; stabilizer order = multiplicity",
         [&](Checker& c) { criterion_cross_check(c, corpus); }},
        {6, "linear algebra: 1000 random Smith decompositions, exact",
         [](Checker& c) { criterion_linear_algebra(c); }},
        {7, "torus-factor laws: split cores and PRODUCT_SPLIT embedding",
         [&](Checker& c) { criterion_torus_laws(c, corpus); }},
        {8, "tamper resistance: every witness mutation detected at its step",
         [](Checker& c) { criterion_tamper_resistance(c); }},
        {9, "format round trip: byte-exact canonical documents",
         [](Checker& c) { criterion_round_trip(c); }},
    };

    int failed = 0;
    for (const Entry& entry : criteria) {
        Checker c;
        try {
            entry.run(c);
        } catch (const std::exception& e) {
            c.require(false, std::string("exception: ") + e.what());
        }
        if (c.failures == 0) {
            std::cout << "[PASS] criterion " << entry.number << ": " << entry.title << "\n";
        } else {
            ++failed;
            std::cout << "[FAIL] criterion " << entry.number << ": " << entry.title << " — "
                      << c.failures << " failure(s); first: " << c.first_failure.str() << "\n";
        }
    }
    if (failed == 0)
        std::cout << "all 9 acceptance criteria passed\n";
    else
        std::cout << failed << " criterion(s) failed\n";
    return failed;
}
