#include "toric/oka.hpp"

#include <algorithm>
#include <sstream>

namespace toric {

const char* rejection_reason_name(RejectionReason reason) {
    switch (reason) {
        case RejectionReason::InvalidFan: return "INVALID_FAN";
        case RejectionReason::NotSmooth: return "NOT_SMOOTH";
    }
    return "UNKNOWN";
}

JsonValue cone_to_json(const ConeIndexSet& cone) {
    JsonArray arr;
    for (int i : cone) arr.emplace_back(i);
    return JsonValue(std::move(arr));
}

JsonValue cone_list_to_json(const std::vector<ConeIndexSet>& cones) {
    JsonArray arr;
    for (const ConeIndexSet& c : cones) arr.push_back(cone_to_json(c));
    return JsonValue(std::move(arr));
}

JsonValue matrix_rows_to_json(const IntMatrix& m) {
    JsonArray rows;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        JsonArray row;
        for (std::size_t j = 0; j < m.cols(); ++j) row.emplace_back(m.at(i, j));
        rows.emplace_back(std::move(row));
    }
    return JsonValue(std::move(rows));
}

JsonValue class_group_to_json(const ClassGroup& cl) {
    JsonArray torsion;
    for (const Int& d : cl.torsion) torsion.emplace_back(d);
    JsonObject obj;
    obj.emplace_back("free_rank", JsonValue(cl.free_rank));
    obj.emplace_back("torsion", JsonValue(std::move(torsion)));
    return JsonValue(std::move(obj));
}

JsonValue group_description_to_json(const GroupDescription& g) {
    JsonObject obj;
    obj.emplace_back("torus_rank", JsonValue(g.torus_rank));
    JsonArray factors;
    for (const Int& d : g.finite_factors) factors.emplace_back(d);
    obj.emplace_back("finite_factors", JsonValue(std::move(factors)));
    JsonArray weights;
    for (const RayVector& w : g.torus_weights) {
        JsonArray row;
        for (const Int& e : w) row.emplace_back(e);
        weights.emplace_back(std::move(row));
    }
    obj.emplace_back("torus_weights", JsonValue(std::move(weights)));
    JsonArray gens;
    for (const FiniteGenerator& gen : g.finite_generators) {
        JsonArray exps;
        for (const Int& e : gen.exponents) exps.emplace_back(e);
        JsonObject go;
        go.emplace_back("order", JsonValue(gen.order));
        go.emplace_back("exponents", JsonValue(std::move(exps)));
        gens.emplace_back(std::move(go));
    }
    obj.emplace_back("finite_generators", JsonValue(std::move(gens)));
    return JsonValue(std::move(obj));
}

JsonValue codim_to_json(const CodimZ& c) {
    if (c.is_infinite()) return JsonValue("INFINITE");
    return JsonValue(c.value());
}

namespace {

// ---- step builders ----

const char* kCiteLieGroup =
    "Gromov 1989, 0.5.B: a complex Lie group is elliptic, hence Oka";
const char* kCiteCodim2 =
    "Gromov 1989, 0.5.B: the complement in C^n of an algebraic subvariety of "
    "codimension at least 2 is elliptic, hence Oka";
const char* kCiteBundleTransfer =
    "Forstneric 2006, Theorem 1.4 and 2009, Corollary 1.3: for a holomorphic "
    "fibre bundle with Oka fibres, the base is Oka iff the total space is";
const char* kCiteQuotientBundle =
    "Snow 1982, Corollary 5.5 and Luna 1973, Corollaire 5 (slice theory for "
    "reductive group actions on Stein spaces); trusted rule: the analytic "
    "content is an axiom of this certificate system, and only its hypotheses "
    "(reductivity, free action, invariant Stein cover) are checked";

JsonValue make_step(const char* rule, std::string statement, const char* citation,
                    JsonObject witness, JsonArray premises) {
    JsonObject step;
    step.emplace_back("rule", JsonValue(rule));
    step.emplace_back("statement", JsonValue(std::move(statement)));
    step.emplace_back("citation", JsonValue(citation));
    step.emplace_back("witness", JsonValue(std::move(witness)));
    step.emplace_back("premises", JsonValue(std::move(premises)));
    return JsonValue(std::move(step));
}

JsonValue lie_group_torus_leaf(int torus_rank) {
    JsonObject group;
    group.emplace_back("kind", JsonValue("torus"));
    group.emplace_back("rank", JsonValue(torus_rank));
    JsonObject witness;
    witness.emplace_back("group", JsonValue(std::move(group)));
    return make_step(kRuleLieGroupOka,
                     "X is isomorphic to the complex torus (C*)^" +
                         std::to_string(torus_rank) + ", a complex Lie group, hence Oka.",
                     kCiteLieGroup, std::move(witness), {});
}

JsonValue lie_group_g_leaf(const GroupDescription& g) {
    JsonObject group;
    group.emplace_back("kind", JsonValue("diagonalizable"));
    JsonValue fields = group_description_to_json(g);
    for (auto& [k, v] : fields.as_object()) group.emplace_back(k, v);
    JsonObject witness;
    witness.emplace_back("group", JsonValue(std::move(group)));
    std::ostringstream statement;
    statement << "G = Hom(Cl(X), C*), a product of (C*)^" << g.torus_rank;
    if (!g.finite_factors.empty()) {
        statement << " with";
        for (std::size_t i = 0; i < g.finite_factors.size(); ++i)
            statement << (i ? " x Z/" : " Z/") << g.finite_factors[i];
    }
    statement << ", is a complex Lie group, hence Oka.";
    return make_step(kRuleLieGroupOka, statement.str(), kCiteLieGroup, std::move(witness), {});
}

JsonValue codim2_leaf(const CoxPresentation& cox) {
    JsonObject witness;
    witness.emplace_back("ambient_dim", JsonValue(cox.m));
    witness.emplace_back("primitive_collections", cone_list_to_json(cox.collections));
    witness.emplace_back("codim_z", codim_to_json(cox.codim_z));
    witness.emplace_back("codim_at_least_2", JsonValue(cox.codim_z.at_least(2)));
    std::string codim_text = cox.codim_z.is_infinite() ? "Z is empty"
                                                       : "codim Z = " + cox.codim_z.to_string();
    return make_step(kRuleCodim2ComplementOka,
                     "C^" + std::to_string(cox.m) +
                         " minus the union Z of coordinate subspaces indexed by the "
                         "primitive collections is Oka: " +
                         codim_text + " >= 2.",
                     kCiteCodim2, std::move(witness), {});
}

JsonValue quotient_bundle_node(const CoxPresentation& cox, const FreeActionReport& free_action,
                               const CoverWitness& cover, JsonValue g_leaf) {
    JsonObject reductive;
    reductive.emplace_back("holds", JsonValue(true));
    reductive.emplace_back("because",
                           JsonValue("product of a torus and a finite abelian group"));

    JsonObject free_json;
    free_json.emplace_back("free", JsonValue(free_action.free));
    free_json.emplace_back("cones_checked", JsonValue(free_action.cones_checked));

    JsonArray charts;
    for (const CoverChart& chart : cover.charts) {
        JsonObject cj;
        cj.emplace_back("cone", cone_to_json(chart.cone_rays));
        JsonArray removed;
        for (int h : chart.removed_hyperplanes) removed.emplace_back(h);
        cj.emplace_back("removed_hyperplanes", JsonValue(std::move(removed)));
        charts.emplace_back(std::move(cj));
    }
    JsonObject cover_json;
    cover_json.emplace_back("charts", JsonValue(std::move(charts)));
    cover_json.emplace_back("mode", JsonValue(cover.exhaustive ? "exhaustive" : "structural"));
    cover_json.emplace_back("subsets_checked", JsonValue(cover.subsets_checked));

    JsonObject witness;
    witness.emplace_back("group", group_description_to_json(cox.group));
    witness.emplace_back("class_group", class_group_to_json(cox.cl));
    witness.emplace_back("degree_matrix", matrix_rows_to_json(cox.degree_matrix));
    witness.emplace_back("reductive", JsonValue(std::move(reductive)));
    witness.emplace_back("free_action", JsonValue(std::move(free_json)));
    witness.emplace_back("cover", JsonValue(std::move(cover_json)));

    return make_step(
        kRuleQuotientBundle,
        "G is reductive and acts freely on C^" + std::to_string(cox.m) +
            " minus Z, which is covered by G-invariant Stein charts, so the "
            "quotient map onto X is a holomorphic fibre bundle with fibre G.",
        kCiteQuotientBundle, std::move(witness), JsonArray{std::move(g_leaf)});
}

JsonValue bundle_transfer_root(const CoxPresentation& cox, JsonValue codim_leaf,
                               JsonValue quotient_node) {
    JsonObject witness;
    witness.emplace_back("total_space",
                         JsonValue("C^" + std::to_string(cox.m) + " minus Z"));
    witness.emplace_back("ambient_dim", JsonValue(cox.m));
    JsonArray premises;
    premises.push_back(std::move(codim_leaf));
    premises.push_back(std::move(quotient_node));
    return make_step(kRuleBundleTransfer,
                     "The total space of the quotient bundle is Oka and its fibre G is "
                     "Oka, so the base X is Oka.",
                     kCiteBundleTransfer, std::move(witness), std::move(premises));
}

JsonValue product_split_node(const TorusSplit& split, const std::string& core_hash,
                             JsonValue core_tree) {
    JsonObject witness;
    witness.emplace_back("torus_rank", JsonValue(split.torus_rank));
    witness.emplace_back("basis_witness", matrix_rows_to_json(split.basis_witness));
    witness.emplace_back("core_subject_hash", JsonValue(core_hash));
    witness.emplace_back("core_lattice_rank", JsonValue(split.core.lattice_rank()));
    return make_step(kRuleProductSplit,
                     "X splits as Y x (C*)^" + std::to_string(split.torus_rank) +
                         " along a unimodular change of lattice basis; the projection is "
                         "a trivial bundle with Oka fibre, so X is Oka iff Y is Oka.",
                     kCiteBundleTransfer, std::move(witness),
                     JsonArray{std::move(core_tree)});
}

Rejection reject_validation(const FanValidationError& e) {
    JsonObject witness;
    witness.emplace_back("error", JsonValue(fan_error_code_name(e.code)));
    witness.emplace_back("subject", cone_to_json(e.subject));
    witness.emplace_back("other", cone_to_json(e.other));
    if (e.code == FanErrorCode::NonSimplicialCone) {
        // theorem hypothesis fails: smooth cones are simplicial
        JsonObject w2;
        w2.emplace_back("cone", cone_to_json(e.subject));
        w2.emplace_back("non_simplicial", JsonValue(true));
        return Rejection{RejectionReason::NotSmooth,
                         std::string("not smooth: ") + e.what(), JsonValue(std::move(w2))};
    }
    return Rejection{RejectionReason::InvalidFan, std::string("invalid fan: ") + e.what(),
                     JsonValue(std::move(witness))};
}

// Derivation tree for a validated fan, or a rejection. The subject hash is
// attached by certify(); verification recomputes this tree and diffs.
std::variant<JsonValue, Rejection> derive(const ValidatedFan& vf) {
    TorusSplit split = split_torus_factor(vf);

    if (split.core.ray_count() == 0) {
        // Y is a point: X is the torus itself
        return lie_group_torus_leaf(split.torus_rank);
    }

    SmoothnessReport smooth = is_smooth(split.core);
    if (!smooth.smooth) {
        std::size_t idx = *smooth.witness_cone;
        const ConeIndexSet& cone = vf.max_cones()[idx];
        JsonObject witness;
        witness.emplace_back("cone", cone_to_json(cone));
        witness.emplace_back("multiplicity", JsonValue(smooth.multiplicities[idx]));
        JsonArray rays;
        for (int i : cone) {
            JsonArray rv;
            for (const Int& e : vf.fan().rays[i]) rv.emplace_back(e);
            rays.emplace_back(std::move(rv));
        }
        witness.emplace_back("cone_rays", JsonValue(std::move(rays)));
        std::ostringstream msg;
        msg << "not smooth: cone {";
        for (std::size_t i = 0; i < cone.size(); ++i) msg << (i ? "," : "") << cone[i];
        msg << "} has multiplicity " << smooth.multiplicities[idx];
        return Rejection{RejectionReason::NotSmooth, msg.str(), JsonValue(std::move(witness))};
    }

    CoxPresentation cox = cox_presentation(split.core);
    if (!cox.codim_z.at_least(2))
        throw std::logic_error("derive: codim Z < 2 for a validated fan");
    FreeActionReport free_action = verify_free_action(split.core);
    if (!free_action.free)
        throw std::logic_error("derive: smooth fan with non-free action");
    CoverWitness cover = verify_cover(split.core);

    JsonValue tree = bundle_transfer_root(
        cox, codim2_leaf(cox),
        quotient_bundle_node(cox, free_action, cover, lie_group_g_leaf(cox.group)));

    if (split.torus_rank > 0) {
        FanDocument core_doc{split.core.fan(), {}};
        tree = product_split_node(split, subject_hash(core_doc), std::move(tree));
    }
    return tree;
}

}  // namespace

CertifyResult certify(const FanDocument& doc) {
    FanDocument canonical = canonicalize(doc);
    ValidatedFan vf;
    try {
        vf = validate_fan(canonical.fan);
    } catch (const FanValidationError& e) {
        return reject_validation(e);
    }
    auto derived = derive(vf);
    if (std::holds_alternative<Rejection>(derived))
        return std::get<Rejection>(std::move(derived));

    OkaCertificate cert;
    cert.format_version = kCertificateFormatVersion;
    cert.subject_hash = subject_hash(canonical);
    cert.subject_name = canonical.fan.name;
    cert.conclusion = "X is Oka";
    cert.derivation = std::get<JsonValue>(std::move(derived));
    return cert;
}

namespace {

std::string short_dump(const JsonValue& v) {
    std::string s = dump_json(v);
    if (s.size() > 120) s = s.substr(0, 117) + "...";
    return s;
}

// First difference in DFS order, with a JSON-path location.
bool diff_json(const JsonValue& expected, const JsonValue& found, const std::string& path,
               std::string& where, std::string& detail) {
    if (expected == found) return true;
    if (expected.is_object() && found.is_object()) {
        const JsonObject& eo = expected.as_object();
        const JsonObject& fo = found.as_object();
        for (std::size_t i = 0; i < std::min(eo.size(), fo.size()); ++i) {
            if (eo[i].first != fo[i].first) {
                where = path + "." + fo[i].first;
                detail = "unexpected member order or name (expected \"" + eo[i].first + "\")";
                return false;
            }
            if (!diff_json(eo[i].second, fo[i].second, path + "." + eo[i].first, where,
                           detail))
                return false;
        }
        where = path;
        detail = eo.size() < fo.size()
                     ? "extra member \"" + fo[eo.size()].first + "\""
                     : "missing member \"" + eo[fo.size()].first + "\"";
        return false;
    }
    if (expected.is_array() && found.is_array()) {
        const JsonArray& ea = expected.as_array();
        const JsonArray& fa = found.as_array();
        for (std::size_t i = 0; i < std::min(ea.size(), fa.size()); ++i)
            if (!diff_json(ea[i], fa[i], path + "[" + std::to_string(i) + "]", where, detail))
                return false;
        where = path;
        detail = "array length " + std::to_string(fa.size()) + ", expected " +
                 std::to_string(ea.size());
        return false;
    }
    where = path;
    detail = "found " + short_dump(found) + ", expected " + short_dump(expected);
    return false;
}

}  // namespace

VerifyResult verify_certificate(const OkaCertificate& cert, const FanDocument& doc) {
    VerifyResult result;
    if (cert.format_version != kCertificateFormatVersion) {
        result.mismatch_path = "$.format_version";
        result.detail = "unsupported format version \"" + cert.format_version + "\"";
        return result;
    }
    std::string expected_hash = subject_hash(doc);
    if (cert.subject_hash != expected_hash) {
        result.mismatch_path = "$.subject.hash";
        result.detail = "subject hash mismatch: certificate is for a different fan (expected " +
                        expected_hash + ")";
        return result;
    }

    CertifyResult recomputed = certify(doc);
    if (std::holds_alternative<Rejection>(recomputed)) {
        const Rejection& r = std::get<Rejection>(recomputed);
        result.mismatch_path = "$";
        result.detail = std::string("fan does not certify: [") +
                        rejection_reason_name(r.reason) + "] " + r.message;
        return result;
    }
    const OkaCertificate& expected = std::get<OkaCertificate>(recomputed);

    if (cert.conclusion != expected.conclusion) {
        result.mismatch_path = "$.conclusion";
        result.detail = "found \"" + cert.conclusion + "\", expected \"" +
                        expected.conclusion + "\"";
        return result;
    }
    std::string where, detail;
    if (!diff_json(expected.derivation, cert.derivation, "$.derivation", where, detail)) {
        result.mismatch_path = where;
        result.detail = detail;
        return result;
    }
    result.accepted = true;
    return result;
}

namespace {

void explain_step(std::ostream& os, const JsonValue& step, const std::string& index,
                  int depth) {
    std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    os << pad << index << " [" << step.at("rule").as_string() << "] "
       << step.at("statement").as_string() << "\n";
    os << pad << "   by: " << step.at("citation").as_string() << "\n";

    const JsonObject& witness = step.at("witness").as_object();
    if (!witness.empty()) {
        os << pad << "   witness:";
        bool first = true;
        for (const auto& [k, v] : witness) {
            std::string rendered = dump_json(v);
            if (rendered.size() > 64) rendered = rendered.substr(0, 61) + "...";
            os << (first ? " " : ", ") << k << "=" << rendered;
            first = false;
        }
        os << "\n";
    }
    const JsonArray& premises = step.at("premises").as_array();
    for (std::size_t i = 0; i < premises.size(); ++i)
        explain_step(os, premises[i], index + "." + std::to_string(i + 1), depth + 1);
}

}  // namespace

std::string explain_certificate(const OkaCertificate& cert) {
    std::ostringstream os;
    os << "Certificate (format " << cert.format_version << ")\n";
    os << "Subject: " << (cert.subject_name.empty() ? "<unnamed fan>" : cert.subject_name)
       << "\n";
    os << "         " << cert.subject_hash << "\n";
    os << "Conclusion: " << cert.conclusion << "\n\n";
    explain_step(os, cert.derivation, "1", 0);
    return os.str();
}

}  // namespace toric
