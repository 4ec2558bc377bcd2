#pragma once

// Rational polyhedral fans: data model, validation, smoothness,
// torus-factor detection and splitting.

#include "toric/intlinalg.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace toric {

using RayVector = std::vector<Int>;
/// Ray indices of a cone, sorted ascending, no repeats.
using ConeIndexSet = std::vector<int>;

struct Fan {
    int lattice_rank = 0;
    std::vector<RayVector> rays;           // primitive nonzero integer vectors
    std::vector<ConeIndexSet> max_cones;
    std::string name;

    std::size_t ray_count() const { return rays.size(); }
    /// m x n matrix whose rows are the ray generators.
    IntMatrix ray_matrix() const;
    /// |cone| x n matrix of the cone's ray generators.
    IntMatrix cone_matrix(const ConeIndexSet& cone) const;

    bool operator==(const Fan& o) const = default;
};

enum class FanErrorCode {
    RayDimensionMismatch,
    NonPrimitiveRay,    // zero ray or gcd of entries > 1
    DuplicateRay,
    BadConeIndex,       // out of range or repeated inside one cone
    UnusedRay,          // ray listed but member of no max cone
    RedundantMaxCone,   // one max cone's ray set contained in another's
    NonSimplicialCone,  // rationally dependent generators
    BadIntersection,    // no separating functional: not a common face
};

const char* fan_error_code_name(FanErrorCode code);

struct FanValidationError : std::runtime_error {
    FanValidationError(FanErrorCode code, const std::string& message,
                       std::vector<int> subject = {}, std::vector<int> other = {})
        : std::runtime_error(message), code(code),
          subject(std::move(subject)), other(std::move(other)) {}

    FanErrorCode code;
    // Offending datum: a ray index, or a cone's ray-index set, plus the
    // second party for pairwise failures. Enough to reproduce the failure.
    std::vector<int> subject;
    std::vector<int> other;
};

/// Exact separating functional for a pair of max cones: w with
///   w*u = 0 for rays shared by both cones,
///   w*u > 0 for rays only in `a`, w*u < 0 for rays only in `b`.
/// Existence certifies that the cones meet exactly in their common face.
struct SeparationWitness {
    std::size_t cone_a;
    std::size_t cone_b;
    RayVector functional;
};

std::optional<RayVector> separating_functional(const std::vector<RayVector>& rays,
                                               const ConeIndexSet& a,
                                               const ConeIndexSet& b,
                                               int lattice_rank);

class ValidatedFan {
public:
    const Fan& fan() const { return fan_; }
    int lattice_rank() const { return fan_.lattice_rank; }
    std::size_t ray_count() const { return fan_.rays.size(); }
    const std::vector<ConeIndexSet>& max_cones() const { return fan_.max_cones; }

    /// Dimension of max cone i (= its ray count; all cones are simplicial).
    std::size_t cone_dim(std::size_t i) const { return fan_.max_cones[i].size(); }
    bool certified_simplicial() const { return true; }

    const std::vector<SeparationWitness>& separations() const { return separations_; }

private:
    friend ValidatedFan validate_fan(const Fan&);
    Fan fan_;
    std::vector<SeparationWitness> separations_;
};

/// Checks every fan axiom and certifies pairwise intersections with exact
/// separating functionals. Throws FanValidationError.
ValidatedFan validate_fan(const Fan& f);

/// True when `cone` (any sorted ray-index set) is a face of some max cone.
bool is_cone_of(const ValidatedFan& f, const ConeIndexSet& cone);

/// Index of the cone's generator lattice in the lattice points of its
/// rational span; 1 exactly when the cone is smooth.
/// Throws std::invalid_argument for ray sets that are not cones of f.
Int cone_multiplicity(const ValidatedFan& f, const ConeIndexSet& cone);

struct SmoothnessReport {
    bool smooth = false;
    std::vector<Int> multiplicities;           // one per max cone
    std::optional<std::size_t> witness_cone;   // first max cone with mult > 1
};

SmoothnessReport is_smooth(const ValidatedFan& f);

/// n minus the rank of the rational span of all rays; zero exactly when
/// the associated variety has no torus factor.
int torus_factor_rank(const ValidatedFan& f);

struct TorusSplit {
    ValidatedFan core;        // rank n-k, torus_factor_rank 0
    int torus_rank = 0;       // k
    IntMatrix basis_witness;  // unimodular n x n; rows are a basis of Z^n
                              // whose first n-k rows span the saturated
                              // ray-span sublattice
};

/// Splits off the maximal torus factor. Cone structure is preserved
/// index-for-index; when k = 0 the fan is returned unchanged with an
/// identity witness.
TorusSplit split_torus_factor(const ValidatedFan& f);

enum class Completeness { Complete, NotComplete };

/// Metadata only: pure n-dimensional with every facet shared by exactly
/// two max cones. Never gates certification.
Completeness is_complete(const ValidatedFan& f);

}  // namespace toric
