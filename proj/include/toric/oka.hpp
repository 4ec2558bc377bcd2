#pragma once

// Oka certificates: a derivation tree whose leaves are trusted facts about
// Lie groups and codimension-2 complements, and whose internal nodes are
// bundle transfers, the slice-theory quotient step, and torus-factor
// splitting. certify() builds the tree from a fan; verify_certificate()
// recomputes every witness from the fan alone and diffs.

#include "toric/cox.hpp"
#include "toric/fan.hpp"
#include "toric/fanfmt.hpp"
#include "toric/json.hpp"

#include <string>
#include <variant>

namespace toric {

using OkaCertificate = CertificateDocument;

enum class RejectionReason { InvalidFan, NotSmooth };

const char* rejection_reason_name(RejectionReason reason);

/// Refusal to certify, with a witness sufficient to reproduce the failure
/// (offending ray or cone pair, or a cone with its multiplicity).
struct Rejection {
    RejectionReason reason;
    std::string message;
    JsonValue witness;
};

using CertifyResult = std::variant<OkaCertificate, Rejection>;

/// Runs the whole pipeline: validate, split off the torus factor,
/// smoothness gate, quotient presentation, codimension and free-action
/// gates, cover witness; assembles the derivation tree. Deterministic:
/// byte-identical certificates for identical canonical inputs.
CertifyResult certify(const FanDocument& doc);

struct VerifyResult {
    bool accepted = false;
    std::string mismatch_path;  // step path + field of the first mismatch
    std::string detail;
};

/// Independent check: recomputes the expected certificate from the fan
/// alone and compares, reporting the first mismatch location. Subject
/// identity is compared by content hash before anything else.
VerifyResult verify_certificate(const OkaCertificate& cert, const FanDocument& doc);

/// Renders the derivation tree as indented prose using the statement and
/// citation metadata stored in the certificate.
std::string explain_certificate(const OkaCertificate& cert);

// JSON views shared by the certificate builder and the CLI.
JsonValue cone_to_json(const ConeIndexSet& cone);
JsonValue cone_list_to_json(const std::vector<ConeIndexSet>& cones);
JsonValue matrix_rows_to_json(const IntMatrix& m);
JsonValue class_group_to_json(const ClassGroup& cl);
JsonValue group_description_to_json(const GroupDescription& g);
JsonValue codim_to_json(const CodimZ& c);

}  // namespace toric
