#pragma once

// Quotient presentation X = (C^m \ Z) / G of a fan with no torus factor:
// primitive collections, the irrelevant locus and its codimension, the
// class group, the explicit structure and embedding of G, stabilizers,
// and the Stein cover witness.

#include "toric/fan.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace toric {

struct TorusFactorPresent : std::runtime_error {
    explicit TorusFactorPresent(int k)
        : std::runtime_error("fan has a torus factor of rank " + std::to_string(k) +
                             "; split it off first"),
          torus_rank(k) {}
    int torus_rank;
};

/// codim Z, with a distinguished INFINITE value for Z = empty set.
class CodimZ {
public:
    static CodimZ infinite() { return CodimZ(true, 0); }
    static CodimZ finite(int v) { return CodimZ(false, v); }

    bool is_infinite() const { return infinite_; }
    int value() const {
        if (infinite_) throw std::logic_error("codim Z is infinite");
        return value_;
    }
    /// Vacuously true for INFINITE: an empty Z clears any codimension gate.
    bool at_least(int k) const { return infinite_ || value_ >= k; }

    std::string to_string() const {
        return infinite_ ? "INFINITE" : std::to_string(value_);
    }

    bool operator==(const CodimZ& o) const = default;

private:
    CodimZ(bool inf, int v) : infinite_(inf), value_(v) {}
    bool infinite_;
    int value_;
};

/// Minimal non-faces: subsets of ray indices contained in no max cone whose
/// proper subsets all are. Sorted by size, then lexicographically.
std::vector<ConeIndexSet> primitive_collections(const ValidatedFan& f);

CodimZ irrelevant_codim(const std::vector<ConeIndexSet>& collections, std::size_t m);

struct ClassGroup {
    std::size_t free_rank = 0;
    std::vector<Int> torsion;  // divisibility chain, entries > 1

    bool operator==(const ClassGroup& o) const = default;
};

ClassGroup class_group(const ValidatedFan& f);

/// A generator of the finite part of G: the character t_rho = zeta^e_rho for
/// a primitive `order`-th root of unity zeta, exponents reduced to [0, order).
struct FiniteGenerator {
    RayVector exponents;  // length m
    Int order;            // > 1

    bool operator==(const FiniteGenerator& o) const = default;
};

/// G = Hom(Cl(X), C*) embedded in (C*)^m, described by integral data only.
struct GroupDescription {
    std::size_t torus_rank = 0;
    std::vector<Int> finite_factors;                // divisibility chain
    std::vector<RayVector> torus_weights;           // lambda -> (lambda^w_rho)_rho
    std::vector<FiniteGenerator> finite_generators;

    bool operator==(const GroupDescription& o) const = default;
};

GroupDescription group_G(const ValidatedFan& f);

/// Exact check of G's defining equations: w * R = 0 for every torus weight
/// and g * R = 0 mod order for every finite generator (R = ray matrix).
bool character_equations_hold(const GroupDescription& g, const IntMatrix& ray_matrix);

/// Invariant factors (> 1) of the cone's generator matrix; the stabilizer of
/// the cone's distinguished point is the product of Z/d over these.
std::vector<Int> stabilizer_invariants(const ValidatedFan& f, const ConeIndexSet& cone);

struct FreeActionReport {
    bool free = false;
    std::size_t cones_checked = 0;  // distinct faces enumerated
    std::optional<ConeIndexSet> witness_cone;
    std::vector<Int> witness_invariants;
};

/// Free iff every cone (max cones and all faces) has trivial stabilizer.
FreeActionReport verify_free_action(const ValidatedFan& f);

struct CoverChart {
    std::size_t cone_index;
    ConeIndexSet cone_rays;
    std::vector<int> removed_hyperplanes;  // complement of the cone's rays
};

/// Witness that the G-invariant Stein sets U_sigma cover C^m \ Z: a ray
/// subset avoids every primitive collection iff it lies in some max cone.
/// Checked subset-by-subset for m <= 20; for larger fans the identity holds
/// by the minimal-non-face construction and is recorded as structural.
struct CoverWitness {
    std::vector<CoverChart> charts;
    bool exhaustive = false;
    std::uint64_t subsets_checked = 0;
};

CoverWitness verify_cover(const ValidatedFan& f);

struct CoxPresentation {
    std::size_t m = 0;
    std::vector<ConeIndexSet> collections;
    CodimZ codim_z = CodimZ::infinite();
    ClassGroup cl;
    GroupDescription group;
    /// Grading Z^m -> Cl(X): free coordinate rows first, then one row per
    /// torsion factor (to be read mod that factor).
    IntMatrix degree_matrix;
    /// Structural: a product of a torus and a finite abelian group.
    bool reductive = true;
};

CoxPresentation cox_presentation(const ValidatedFan& f);

}  // namespace toric
