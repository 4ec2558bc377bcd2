#include "toric/fan.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace toric {

using Rational = boost::multiprecision::cpp_rational;

IntMatrix Fan::ray_matrix() const {
    IntMatrix m(rays.size(), lattice_rank);
    for (std::size_t i = 0; i < rays.size(); ++i)
        for (int j = 0; j < lattice_rank; ++j) m.at(i, j) = rays[i][j];
    return m;
}

IntMatrix Fan::cone_matrix(const ConeIndexSet& cone) const {
    IntMatrix m(cone.size(), lattice_rank);
    for (std::size_t i = 0; i < cone.size(); ++i)
        for (int j = 0; j < lattice_rank; ++j) m.at(i, j) = rays[cone[i]][j];
    return m;
}

const char* fan_error_code_name(FanErrorCode code) {
    switch (code) {
        case FanErrorCode::RayDimensionMismatch: return "RAY_DIMENSION_MISMATCH";
        case FanErrorCode::NonPrimitiveRay: return "NON_PRIMITIVE_RAY";
        case FanErrorCode::DuplicateRay: return "DUPLICATE_RAY";
        case FanErrorCode::BadConeIndex: return "BAD_CONE_INDEX";
        case FanErrorCode::UnusedRay: return "UNUSED_RAY";
        case FanErrorCode::RedundantMaxCone: return "REDUNDANT_MAX_CONE";
        case FanErrorCode::NonSimplicialCone: return "NON_SIMPLICIAL_CONE";
        case FanErrorCode::BadIntersection: return "BAD_INTERSECTION";
    }
    return "UNKNOWN";
}

namespace {

std::string cone_to_string(const ConeIndexSet& cone) {
    std::ostringstream os;
    os << "{";
    for (std::size_t i = 0; i < cone.size(); ++i) os << (i ? "," : "") << cone[i];
    os << "}";
    return os.str();
}

Int content(const RayVector& v) {
    Int g = 0;
    for (const Int& e : v) g = gcd(g, e);
    return g;
}

void normalize_by_content(RayVector& v) {
    Int g = content(v);
    if (g > 1)
        for (Int& e : v) e /= g;
}

// ---- exact homogeneous linear feasibility (Fourier-Motzkin) ----
//
// System over x in Q^n: e*x = 0 for each equality, s*x > 0 for each strict
// row. Equalities are removed first by integer pivoting; the remaining
// strict system is eliminated variable by variable, then a rational witness
// is read off level by level and scaled to an integer vector.

struct FeasibilitySystem {
    std::vector<RayVector> equalities;
    std::vector<RayVector> stricts;
};

std::optional<RayVector> solve_feasibility(FeasibilitySystem sys, int n) {
    std::vector<std::pair<RayVector, int>> pivots;  // (equality row, pivot var)
    std::vector<bool> eliminated(n, false);
    for (std::size_t ei = 0; ei < sys.equalities.size(); ++ei) {
        RayVector e = sys.equalities[ei];
        int t = -1;
        for (int j = 0; j < n; ++j) {
            if (e[j] == 0) continue;
            if (t < 0 || abs(e[j]) < abs(e[t])) t = j;
        }
        if (t < 0) continue;  // 0 = 0
        Int et = e[t];
        Int sgn = et > 0 ? 1 : -1;
        // c := |e_t|*c - sign(e_t)*c_t*e keeps inequality directions intact
        auto cancel = [&](RayVector& c) {
            if (c[t] == 0) return;
            Int ct = c[t];
            for (int j = 0; j < n; ++j) c[j] = abs(et) * c[j] - sgn * ct * e[j];
            normalize_by_content(c);
        };
        for (std::size_t k = ei + 1; k < sys.equalities.size(); ++k) cancel(sys.equalities[k]);
        for (RayVector& c : sys.stricts) cancel(c);
        pivots.emplace_back(e, t);
        eliminated[t] = true;
    }

    auto is_zero_row = [](const RayVector& v) {
        return std::all_of(v.begin(), v.end(), [](const Int& e) { return e == 0; });
    };
    for (const RayVector& srow : sys.stricts)
        if (is_zero_row(srow)) return std::nullopt;  // 0 > 0

    std::vector<int> order;
    for (int j = 0; j < n; ++j)
        if (!eliminated[j]) order.push_back(j);

    std::vector<std::vector<RayVector>> snapshots;
    std::vector<RayVector> rows = sys.stricts;
    for (int t : order) {
        snapshots.push_back(rows);
        std::vector<RayVector> pos, neg, next;
        for (const RayVector& r : rows) {
            if (r[t] > 0)
                pos.push_back(r);
            else if (r[t] < 0)
                neg.push_back(r);
            else
                next.push_back(r);
        }
        std::set<RayVector> seen(next.begin(), next.end());
        next.assign(seen.begin(), seen.end());
        for (const RayVector& p : pos)
            for (const RayVector& q : neg) {
                RayVector c(n);
                for (int j = 0; j < n; ++j) c[j] = -q[t] * p[j] + p[t] * q[j];
                if (is_zero_row(c)) return std::nullopt;
                normalize_by_content(c);
                if (seen.insert(c).second) next.push_back(c);
            }
        rows = std::move(next);
    }

    std::vector<Rational> x(n, 0);
    for (std::size_t level = order.size(); level-- > 0;) {
        int t = order[level];
        bool has_lo = false, has_hi = false;
        Rational lo = 0, hi = 0;
        for (const RayVector& r : snapshots[level]) {
            if (r[t] == 0) continue;
            Rational rest = 0;
            for (int j = 0; j < n; ++j)
                if (j != t) rest += Rational(r[j]) * x[j];
            Rational bound = -rest / Rational(r[t]);
            if (r[t] > 0) {  // x_t > bound
                if (!has_lo || bound > lo) lo = bound;
                has_lo = true;
            } else {  // x_t < bound
                if (!has_hi || bound < hi) hi = bound;
                has_hi = true;
            }
        }
        if (has_lo && has_hi)
            x[t] = (lo + hi) / 2;
        else if (has_lo)
            x[t] = lo + 1;
        else if (has_hi)
            x[t] = hi - 1;
        else
            x[t] = 0;
    }
    for (std::size_t level = pivots.size(); level-- > 0;) {
        const auto& [e, t] = pivots[level];
        Rational rest = 0;
        for (int j = 0; j < n; ++j)
            if (j != t) rest += Rational(e[j]) * x[j];
        x[t] = -rest / Rational(e[t]);
    }

    Int lcm_den = 1;
    for (const Rational& r : x) lcm_den = lcm(lcm_den, denominator(r));
    RayVector w(n);
    for (int j = 0; j < n; ++j)
        w[j] = numerator(x[j]) * (lcm_den / denominator(x[j]));
    normalize_by_content(w);
    return w;
}

Int dot(const RayVector& a, const RayVector& b) {
    Int s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

std::optional<RayVector> separating_functional(const std::vector<RayVector>& rays,
                                               const ConeIndexSet& a,
                                               const ConeIndexSet& b,
                                               int lattice_rank) {
    ConeIndexSet common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::back_inserter(common));
    FeasibilitySystem sys;
    for (int i : common) sys.equalities.push_back(rays[i]);
    for (int i : a)
        if (!std::binary_search(common.begin(), common.end(), i))
            sys.stricts.push_back(rays[i]);
    for (int i : b)
        if (!std::binary_search(common.begin(), common.end(), i)) {
            RayVector neg = rays[i];
            for (Int& e : neg) e = -e;
            sys.stricts.push_back(std::move(neg));
        }
    auto w = solve_feasibility(std::move(sys), lattice_rank);
    if (!w) return std::nullopt;

    // Exact re-check before handing the certificate out.
    for (int i : a) {
        Int d = dot(*w, rays[i]);
        bool shared = std::binary_search(common.begin(), common.end(), i);
        if ((shared && d != 0) || (!shared && d <= 0))
            throw std::logic_error("separating_functional: witness failed re-check");
    }
    for (int i : b) {
        Int d = dot(*w, rays[i]);
        bool shared = std::binary_search(common.begin(), common.end(), i);
        if ((shared && d != 0) || (!shared && d >= 0))
            throw std::logic_error("separating_functional: witness failed re-check");
    }
    return w;
}

ValidatedFan validate_fan(const Fan& f) {
    if (f.lattice_rank < 0)
        throw FanValidationError(FanErrorCode::RayDimensionMismatch,
                                 "lattice rank must be non-negative");
    const int n = f.lattice_rank;
    const std::size_t m = f.rays.size();

    for (std::size_t i = 0; i < m; ++i)
        if (f.rays[i].size() != static_cast<std::size_t>(n))
            throw FanValidationError(
                FanErrorCode::RayDimensionMismatch,
                "ray " + std::to_string(i) + " has " + std::to_string(f.rays[i].size()) +
                    " entries, expected " + std::to_string(n),
                {static_cast<int>(i)});

    for (std::size_t i = 0; i < m; ++i) {
        Int g = content(f.rays[i]);
        if (g != 1)
            throw FanValidationError(
                FanErrorCode::NonPrimitiveRay,
                "ray " + std::to_string(i) +
                    (g == 0 ? " is zero" : " is not primitive (content " + g.str() + ")"),
                {static_cast<int>(i)});
    }

    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            if (f.rays[i] == f.rays[j])
                throw FanValidationError(
                    FanErrorCode::DuplicateRay,
                    "rays " + std::to_string(i) + " and " + std::to_string(j) + " coincide",
                    {static_cast<int>(i), static_cast<int>(j)});

    ValidatedFan out;
    out.fan_ = f;
    for (ConeIndexSet& cone : out.fan_.max_cones) {
        std::sort(cone.begin(), cone.end());
        for (std::size_t k = 0; k < cone.size(); ++k) {
            if (cone[k] < 0 || cone[k] >= static_cast<int>(m))
                throw FanValidationError(FanErrorCode::BadConeIndex,
                                         "cone " + cone_to_string(cone) +
                                             " references ray " + std::to_string(cone[k]),
                                         cone);
            if (k > 0 && cone[k] == cone[k - 1])
                throw FanValidationError(FanErrorCode::BadConeIndex,
                                         "cone " + cone_to_string(cone) +
                                             " repeats ray " + std::to_string(cone[k]),
                                         cone);
        }
    }
    const auto& cones = out.fan_.max_cones;

    std::vector<bool> used(m, false);
    for (const ConeIndexSet& cone : cones)
        for (int i : cone) used[i] = true;
    for (std::size_t i = 0; i < m; ++i)
        if (!used[i])
            throw FanValidationError(
                FanErrorCode::UnusedRay,
                "ray " + std::to_string(i) +
                    " belongs to no max cone (standalone rays must be listed as "
                    "1-dimensional cones)",
                {static_cast<int>(i)});

    for (std::size_t i = 0; i < cones.size(); ++i)
        for (std::size_t j = 0; j < cones.size(); ++j) {
            if (i == j) continue;
            if (std::includes(cones[j].begin(), cones[j].end(), cones[i].begin(),
                              cones[i].end()))
                throw FanValidationError(FanErrorCode::RedundantMaxCone,
                                         "max cone " + cone_to_string(cones[i]) +
                                             " is contained in " + cone_to_string(cones[j]),
                                         cones[i], cones[j]);
        }

    for (const ConeIndexSet& cone : cones) {
        IntMatrix cm = out.fan_.cone_matrix(cone);
        if (rank(cm) != cone.size())
            throw FanValidationError(FanErrorCode::NonSimplicialCone,
                                     "cone " + cone_to_string(cone) +
                                         " has rationally dependent generators",
                                     cone);
    }

    for (std::size_t i = 0; i < cones.size(); ++i)
        for (std::size_t j = i + 1; j < cones.size(); ++j) {
            auto w = separating_functional(out.fan_.rays, cones[i], cones[j], n);
            if (!w)
                throw FanValidationError(FanErrorCode::BadIntersection,
                                         "cones " + cone_to_string(cones[i]) + " and " +
                                             cone_to_string(cones[j]) +
                                             " do not meet in a common face",
                                         cones[i], cones[j]);
            out.separations_.push_back({i, j, std::move(*w)});
        }

    return out;
}

bool is_cone_of(const ValidatedFan& f, const ConeIndexSet& cone) {
    ConeIndexSet sorted = cone;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
    if (!sorted.empty() &&
        (sorted.front() < 0 || sorted.back() >= static_cast<int>(f.ray_count())))
        return false;
    for (const ConeIndexSet& mc : f.max_cones())
        if (std::includes(mc.begin(), mc.end(), sorted.begin(), sorted.end())) return true;
    // The zero cone is a face of every fan, even one with no max cones.
    return sorted.empty();
}

Int cone_multiplicity(const ValidatedFan& f, const ConeIndexSet& cone) {
    if (!is_cone_of(f, cone))
        throw std::invalid_argument("cone_multiplicity: " + cone_to_string(cone) +
                                    " is not a cone of this fan");
    ConeIndexSet sorted = cone;
    std::sort(sorted.begin(), sorted.end());
    return saturation_index(f.fan().cone_matrix(sorted));
}

SmoothnessReport is_smooth(const ValidatedFan& f) {
    SmoothnessReport report;
    report.smooth = true;
    for (std::size_t i = 0; i < f.max_cones().size(); ++i) {
        Int mult = saturation_index(f.fan().cone_matrix(f.max_cones()[i]));
        if (mult != 1 && report.smooth) {
            report.smooth = false;
            report.witness_cone = i;
        }
        report.multiplicities.push_back(std::move(mult));
    }
    return report;
}

int torus_factor_rank(const ValidatedFan& f) {
    return f.lattice_rank() - static_cast<int>(rank(f.fan().ray_matrix()));
}

namespace {

// Inverse of a unimodular matrix: its row-style HNF is the identity, so the
// transform of the HNF is exactly the inverse.
IntMatrix unimodular_inverse(const IntMatrix& v) {
    HermiteDecomposition hd = hermite_normal_form(v);
    if (hd.h != IntMatrix::identity(v.rows()))
        throw std::logic_error("unimodular_inverse: matrix is not unimodular");
    return hd.u;
}

}  // namespace

TorusSplit split_torus_factor(const ValidatedFan& f) {
    const int n = f.lattice_rank();
    const int r = static_cast<int>(rank(f.fan().ray_matrix()));
    const int k = n - r;
    if (k == 0) return TorusSplit{f, 0, IntMatrix::identity(n)};

    // Canonical basis of the saturated ray span: the double kernel
    // (perp of the perp) in HNF. It depends only on the span, so padding a
    // fan with torus coordinates splits back to the identical core.
    IntMatrix perp = kernel_basis(transpose(f.fan().ray_matrix()));
    IntMatrix span_basis = kernel_basis(transpose(perp));
    if (span_basis.rows() != static_cast<std::size_t>(r))
        throw std::logic_error("split_torus_factor: saturation rank mismatch");

    // Complete to a basis of Z^n: with U*S*V = [I | 0] (S is saturated),
    // the trailing rows of V^{-1} extend S, and [S; tail] is unimodular.
    SmithDecomposition sd = smith_normal_form(span_basis);
    for (int i = 0; i < r; ++i)
        if (sd.d.at(i, i) != 1)
            throw std::logic_error("split_torus_factor: span basis not saturated");
    IntMatrix w = unimodular_inverse(sd.v);
    IntMatrix basis(n, n);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < n; ++j) basis.at(i, j) = span_basis.at(i, j);
    for (int i = r; i < n; ++i)
        for (int j = 0; j < n; ++j) basis.at(i, j) = w.at(i, j);
    IntMatrix to_new = unimodular_inverse(basis);

    Fan core;
    core.lattice_rank = r;
    core.name = f.fan().name;
    core.max_cones = f.max_cones();
    for (const RayVector& ray : f.fan().rays) {
        RayVector image(n, 0);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) image[j] += ray[i] * to_new.at(i, j);
        for (int j = r; j < n; ++j)
            if (image[j] != 0)
                throw std::logic_error("split_torus_factor: ray not in saturated span");
        image.resize(r);
        core.rays.push_back(std::move(image));
    }

    TorusSplit split;
    split.core = validate_fan(core);
    split.torus_rank = k;
    split.basis_witness = std::move(basis);
    return split;
}

Completeness is_complete(const ValidatedFan& f) {
    const int n = f.lattice_rank();
    if (n == 0) return Completeness::Complete;  // the trivial fan fills rank 0
    const auto& cones = f.max_cones();
    if (cones.empty()) return Completeness::NotComplete;
    for (const ConeIndexSet& cone : cones)
        if (cone.size() != static_cast<std::size_t>(n))
            return Completeness::NotComplete;  // not pure

    std::set<ConeIndexSet> facets;
    for (const ConeIndexSet& cone : cones)
        for (std::size_t drop = 0; drop < cone.size(); ++drop) {
            ConeIndexSet facet;
            for (std::size_t i = 0; i < cone.size(); ++i)
                if (i != drop) facet.push_back(cone[i]);
            facets.insert(std::move(facet));
        }
    for (const ConeIndexSet& facet : facets) {
        int bordering = 0;
        for (const ConeIndexSet& cone : cones)
            if (std::includes(cone.begin(), cone.end(), facet.begin(), facet.end()))
                ++bordering;
        if (bordering != 2) return Completeness::NotComplete;
    }
    return Completeness::Complete;
}

}  // namespace toric
