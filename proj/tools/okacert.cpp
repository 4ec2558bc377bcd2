// okacert: certifies that the smooth toric variety of a rational polyhedral
// fan is an Oka manifold, or rejects with a concrete witness.
//
// Exit codes: 0 success/certified/accepted, 1 domain rejection (invalid fan,
// not smooth, verification failure), 2 usage/IO/parse error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "toric/cox.hpp"
#include "toric/fan.hpp"
#include "toric/fanfmt.hpp"
#include "toric/json.hpp"
#include "toric/oka.hpp"

using namespace toric;

namespace {

constexpr int kOk = 0;
constexpr int kDomainError = 1;
constexpr int kUsageError = 2;

struct CliError : std::runtime_error {
    CliError(int code, const std::string& msg) : std::runtime_error(msg), code(code) {}
    int code;
};

std::string read_input(const std::string& arg) {
    if (arg == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(arg, std::ios::binary);
    if (!in) throw CliError(kUsageError, "cannot open \"" + arg + "\"");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

FanDocument resolve_fan(const std::string& arg) {
    try {
        if (arg.rfind("catalog:", 0) == 0) return catalog_fan(arg.substr(8));
        return parse_fan(read_input(arg));
    } catch (const std::invalid_argument& e) {
        throw CliError(kUsageError, e.what());
    } catch (const JsonParseError& e) {
        throw CliError(kUsageError, arg + ": " + e.what());
    } catch (const SchemaError& e) {
        throw CliError(kUsageError, arg + ": " + e.what());
    }
}

OkaCertificate resolve_certificate(const std::string& arg) {
    try {
        return parse_certificate(read_input(arg));
    } catch (const JsonParseError& e) {
        throw CliError(kUsageError, arg + ": " + e.what());
    } catch (const SchemaError& e) {
        throw CliError(kUsageError, arg + ": " + e.what());
    }
}

bool g_json = false;

void emit(const JsonValue& machine, const std::string& text) {
    if (g_json)
        std::cout << dump_json_pretty(machine);
    else
        std::cout << text;
}

std::string describe_fan(const FanDocument& d) {
    std::ostringstream os;
    os << (d.fan.name.empty() ? "<unnamed>" : d.fan.name) << ": rank " << d.fan.lattice_rank
       << ", " << d.fan.rays.size() << " rays, " << d.fan.max_cones.size() << " max cones";
    return os.str();
}

int fail_domain(const std::string& kind, const std::string& message, JsonValue witness) {
    JsonObject out;
    out.emplace_back("ok", JsonValue(false));
    out.emplace_back("reason", JsonValue(kind));
    out.emplace_back("message", JsonValue(message));
    out.emplace_back("witness", std::move(witness));
    emit(JsonValue(std::move(out)), "REJECTED [" + kind + "] " + message + "\n");
    return kDomainError;
}

int strict_completeness_gate(const ValidatedFan& vf, bool strict) {
    if (!strict || is_complete(vf) == Completeness::Complete) return kOk;
    return fail_domain("NOT_COMPLETE", "fan is not complete (strict mode)", JsonValue());
}

// ---- subcommands ----

int cmd_validate(const std::string& fan_arg) {
    FanDocument doc = resolve_fan(fan_arg);
    try {
        ValidatedFan vf = validate_fan(canonicalize(doc).fan);
        JsonObject out;
        out.emplace_back("ok", JsonValue(true));
        out.emplace_back("name", JsonValue(doc.fan.name));
        out.emplace_back("lattice_rank", JsonValue(vf.lattice_rank()));
        out.emplace_back("rays", JsonValue(vf.ray_count()));
        out.emplace_back("max_cones", JsonValue(vf.max_cones().size()));
        JsonArray dims;
        for (std::size_t i = 0; i < vf.max_cones().size(); ++i)
            dims.emplace_back(vf.cone_dim(i));
        out.emplace_back("cone_dims", JsonValue(std::move(dims)));
        out.emplace_back("pairwise_intersections_certified",
                         JsonValue(vf.separations().size()));
        emit(JsonValue(std::move(out)),
             "valid fan — " + describe_fan(doc) + "\nall cones simplicial; " +
                 std::to_string(vf.separations().size()) +
                 " pairwise intersections certified by separating functionals\n");
        return kOk;
    } catch (const FanValidationError& e) {
        JsonObject witness;
        witness.emplace_back("error", JsonValue(fan_error_code_name(e.code)));
        witness.emplace_back("subject", cone_to_json(e.subject));
        witness.emplace_back("other", cone_to_json(e.other));
        return fail_domain(fan_error_code_name(e.code), e.what(),
                           JsonValue(std::move(witness)));
    }
}

void analyze_core_into(JsonObject& out, std::ostringstream& text, const ValidatedFan& core) {
    CoxPresentation cox = cox_presentation(core);
    FreeActionReport free_action = verify_free_action(core);
    CoverWitness cover = verify_cover(core);

    out.emplace_back("m", JsonValue(cox.m));
    out.emplace_back("primitive_collections", cone_list_to_json(cox.collections));
    out.emplace_back("codim_z", codim_to_json(cox.codim_z));
    out.emplace_back("class_group", class_group_to_json(cox.cl));
    out.emplace_back("degree_matrix", matrix_rows_to_json(cox.degree_matrix));
    out.emplace_back("group", group_description_to_json(cox.group));
    JsonObject fa;
    fa.emplace_back("free", JsonValue(free_action.free));
    fa.emplace_back("cones_checked", JsonValue(free_action.cones_checked));
    if (free_action.witness_cone)
        fa.emplace_back("witness_cone", cone_to_json(*free_action.witness_cone));
    out.emplace_back("free_action", JsonValue(std::move(fa)));
    JsonObject cw;
    cw.emplace_back("charts", JsonValue(cover.charts.size()));
    cw.emplace_back("mode", JsonValue(cover.exhaustive ? "exhaustive" : "structural"));
    cw.emplace_back("subsets_checked", JsonValue(cover.subsets_checked));
    out.emplace_back("cover", JsonValue(std::move(cw)));

    text << "quotient presentation: X = (C^" << cox.m << " \\ Z) / G\n";
    text << "  primitive collections:";
    if (cox.collections.empty()) text << " none (Z is empty)";
    for (const ConeIndexSet& c : cox.collections) {
        text << " {";
        for (std::size_t i = 0; i < c.size(); ++i) text << (i ? "," : "") << c[i];
        text << "}";
    }
    text << "\n  codim Z: " << cox.codim_z.to_string() << "\n";
    text << "  class group: Z^" << cox.cl.free_rank;
    for (const Int& d : cox.cl.torsion) text << " x Z/" << d;
    text << "\n  G: (C*)^" << cox.group.torus_rank;
    for (const Int& d : cox.group.finite_factors) text << " x Z/" << d;
    text << "\n";
    for (const RayVector& w : cox.group.torus_weights) {
        text << "    torus weight (";
        for (std::size_t i = 0; i < w.size(); ++i) text << (i ? "," : "") << w[i];
        text << ")\n";
    }
    for (const FiniteGenerator& gen : cox.group.finite_generators) {
        text << "    finite generator of order " << gen.order << ", exponents (";
        for (std::size_t i = 0; i < gen.exponents.size(); ++i)
            text << (i ? "," : "") << gen.exponents[i];
        text << ")\n";
    }
    text << "  free action: " << (free_action.free ? "free" : "NOT free") << " ("
         << free_action.cones_checked << " cones checked)\n";
    text << "  cover: " << cover.charts.size() << " Stein charts, "
         << (cover.exhaustive
                 ? "exhaustive over " + std::to_string(cover.subsets_checked) + " subsets"
                 : "structural")
         << "\n";
}

int cmd_analyze(const std::string& fan_arg, bool strict) {
    FanDocument doc = resolve_fan(fan_arg);
    ValidatedFan vf;
    try {
        vf = validate_fan(canonicalize(doc).fan);
    } catch (const FanValidationError& e) {
        return fail_domain(fan_error_code_name(e.code), e.what(), JsonValue());
    }

    JsonObject out;
    std::ostringstream text;
    out.emplace_back("ok", JsonValue(true));
    out.emplace_back("name", JsonValue(doc.fan.name));
    out.emplace_back("lattice_rank", JsonValue(vf.lattice_rank()));
    text << describe_fan(doc) << "\n";

    SmoothnessReport smooth = is_smooth(vf);
    JsonArray mults;
    text << "smoothness: " << (smooth.smooth ? "smooth" : "NOT smooth") << "\n";
    for (std::size_t i = 0; i < vf.max_cones().size(); ++i) {
        JsonObject row;
        row.emplace_back("cone", cone_to_json(vf.max_cones()[i]));
        row.emplace_back("multiplicity", JsonValue(smooth.multiplicities[i]));
        mults.emplace_back(std::move(row));
        text << "  cone {";
        for (std::size_t j = 0; j < vf.max_cones()[i].size(); ++j)
            text << (j ? "," : "") << vf.max_cones()[i][j];
        text << "}: multiplicity " << smooth.multiplicities[i] << "\n";
    }
    out.emplace_back("smooth", JsonValue(smooth.smooth));
    out.emplace_back("multiplicities", JsonValue(std::move(mults)));

    int k = torus_factor_rank(vf);
    out.emplace_back("torus_factor_rank", JsonValue(k));
    text << "torus factor rank: " << k << "\n";

    Completeness complete = is_complete(vf);
    out.emplace_back("complete", JsonValue(complete == Completeness::Complete));
    text << "completeness (metadata): "
         << (complete == Completeness::Complete ? "complete" : "not complete") << "\n";

    if (k == 0) {
        analyze_core_into(out, text, vf);
    } else if (split_torus_factor(vf).core.ray_count() == 0) {
        text << "X is the torus (C*)^" << k << "; no quotient presentation needed\n";
        out.emplace_back("pure_torus", JsonValue(true));
    } else {
        TorusSplit split = split_torus_factor(vf);
        text << "split off torus factor: X = Y x (C*)^" << k << "; analyzing Y (rank "
             << split.core.lattice_rank() << ")\n";
        JsonObject core;
        core.emplace_back("lattice_rank", JsonValue(split.core.lattice_rank()));
        std::ostringstream core_text;
        analyze_core_into(core, core_text, split.core);
        out.emplace_back("core", JsonValue(std::move(core)));
        text << core_text.str();
    }

    int gate = strict_completeness_gate(vf, strict);
    if (gate != kOk) return gate;
    emit(JsonValue(std::move(out)), text.str());
    return kOk;
}

int cmd_certify(const std::string& fan_arg, const std::string& out_path, bool strict) {
    FanDocument doc = resolve_fan(fan_arg);
    if (strict) {
        try {
            ValidatedFan vf = validate_fan(canonicalize(doc).fan);
            int gate = strict_completeness_gate(vf, strict);
            if (gate != kOk) return gate;
        } catch (const FanValidationError&) {
            // fall through; certify() reports the rejection uniformly
        }
    }
    CertifyResult result = certify(doc);
    if (std::holds_alternative<Rejection>(result)) {
        const Rejection& r = std::get<Rejection>(result);
        return fail_domain(rejection_reason_name(r.reason), r.message, r.witness);
    }
    const OkaCertificate& cert = std::get<OkaCertificate>(result);
    std::string pretty = serialize_certificate_pretty(cert);
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out || !(out << pretty))
            throw CliError(kUsageError, "cannot write \"" + out_path + "\"");
        JsonObject summary;
        summary.emplace_back("ok", JsonValue(true));
        summary.emplace_back("conclusion", JsonValue(cert.conclusion));
        summary.emplace_back("subject_hash", JsonValue(cert.subject_hash));
        summary.emplace_back("written", JsonValue(out_path));
        emit(JsonValue(std::move(summary)),
             "certified: " + cert.conclusion + "\nsubject " + cert.subject_hash +
                 "\ncertificate written to " + out_path + "\n");
    } else {
        // the certificate itself is the machine output in both modes
        std::cout << pretty;
    }
    return kOk;
}

int cmd_check(const std::string& cert_arg, const std::string& fan_arg) {
    OkaCertificate cert = resolve_certificate(cert_arg);
    FanDocument doc = resolve_fan(fan_arg);
    VerifyResult result = verify_certificate(cert, doc);
    JsonObject out;
    out.emplace_back("ok", JsonValue(result.accepted));
    if (result.accepted) {
        out.emplace_back("subject_hash", JsonValue(cert.subject_hash));
        emit(JsonValue(std::move(out)),
             "accepted: certificate reproduces exactly from the fan\n");
        return kOk;
    }
    out.emplace_back("mismatch_path", JsonValue(result.mismatch_path));
    out.emplace_back("detail", JsonValue(result.detail));
    emit(JsonValue(std::move(out)),
         "REJECTED at " + result.mismatch_path + ": " + result.detail + "\n");
    return kDomainError;
}

int cmd_catalog(const std::string& name) {
    if (name.empty()) {
        JsonArray names;
        std::ostringstream text;
        for (const std::string& n : catalog_names()) {
            names.emplace_back(n);
            text << n << "\n";
        }
        JsonObject out;
        out.emplace_back("fans", JsonValue(std::move(names)));
        emit(JsonValue(std::move(out)), text.str());
        return kOk;
    }
    FanDocument doc;
    try {
        doc = catalog_fan(name);
    } catch (const std::invalid_argument& e) {
        throw CliError(kUsageError, e.what());
    }
    std::cout << serialize_fan_pretty(doc);
    return kOk;
}

int cmd_explain(const std::string& cert_arg) {
    OkaCertificate cert = resolve_certificate(cert_arg);
    if (g_json)
        std::cout << dump_json_pretty(certificate_to_json(cert));
    else
        std::cout << explain_certificate(cert);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"okacert - Oka-property certifier for smooth toric varieties"};
    app.require_subcommand(1);
    app.fallthrough();  // accept --format after the subcommand name too
    app.failure_message(CLI::FailureMessage::help);

    std::string format = "text";
    app.add_option("--format", format, "Output format: text or json")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();

    std::string fan_arg, cert_arg, out_path, catalog_name;
    bool strict = false;

    CLI::App* validate = app.add_subcommand("validate", "Check the fan axioms");
    validate->add_option("fan", fan_arg, "Fan file, '-' for stdin, or catalog:<name>")
        ->required();

    CLI::App* analyze = app.add_subcommand(
        "analyze", "Smoothness, torus factor, class group, G, collections, cover");
    analyze->add_option("fan", fan_arg, "Fan file, '-' for stdin, or catalog:<name>")
        ->required();
    analyze->add_flag("--strict", strict, "Treat a non-complete fan as an error");

    CLI::App* certify_cmd =
        app.add_subcommand("certify", "Run the pipeline and emit a certificate");
    certify_cmd->add_option("fan", fan_arg, "Fan file, '-' for stdin, or catalog:<name>")
        ->required();
    certify_cmd->add_option("-o,--output", out_path, "Write the certificate here");
    certify_cmd->add_flag("--strict", strict, "Treat a non-complete fan as an error");

    CLI::App* check =
        app.add_subcommand("check", "Independently verify a certificate against a fan");
    check->add_option("certificate", cert_arg, "Certificate file or '-' for stdin")
        ->required();
    check->add_option("fan", fan_arg, "Fan file, '-' for stdin, or catalog:<name>")
        ->required();

    CLI::App* catalog = app.add_subcommand("catalog", "List or emit built-in fans");
    catalog->add_option("name", catalog_name, "Catalog entry to emit");

    CLI::App* explain =
        app.add_subcommand("explain", "Render a certificate's derivation as prose");
    explain->add_option("certificate", cert_arg, "Certificate file or '-' for stdin")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e, std::cout, std::cerr);
        return kUsageError;
    }

    g_json = format == "json";
    try {
        if (app.got_subcommand(validate)) return cmd_validate(fan_arg);
        if (app.got_subcommand(analyze)) return cmd_analyze(fan_arg, strict);
        if (app.got_subcommand(certify_cmd)) return cmd_certify(fan_arg, out_path, strict);
        if (app.got_subcommand(check)) return cmd_check(cert_arg, fan_arg);
        if (app.got_subcommand(catalog)) return cmd_catalog(catalog_name);
        if (app.got_subcommand(explain)) return cmd_explain(cert_arg);
    } catch (const CliError& e) {
        std::cerr << "okacert: " << e.what() << "\n";
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "okacert: internal error: " << e.what() << "\n";
        return kUsageError;
    }
    return kUsageError;
}
