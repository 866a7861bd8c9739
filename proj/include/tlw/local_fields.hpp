#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tlw/finite_field.hpp"

namespace tlw {

/// Members of the tower. Which of them exist depends on whether E/F is
/// ramified: the unramified tower is F, L0, E, L and the ramified one adds
/// M = LE and its two other quadratic subfields over L0.
enum class FieldId : std::uint8_t { F, L0, L, E, M, L1, L2 };

std::string_view field_label(FieldId id);
FieldId parse_field_label(std::string_view s);

struct LocalFieldDesc {
    FieldId id;
    std::uint32_t f;  // residue degree over F
    std::uint32_t e;  // ramification index over F
};

/// Laurent series truncated at a finite absolute precision: the value is
/// sum_k coeffs[k] * X^{val+k} + O(X^{val+coeffs.size()}). A nonempty series
/// has coeffs[0] != 0; the empty series is a zero known only up to X^val.
struct Series {
    std::int64_t val = 0;
    std::vector<FiniteField::Elem> coeffs;

    bool is_zero() const { return coeffs.empty(); }
    std::int64_t abs_precision() const { return val + static_cast<std::int64_t>(coeffs.size()); }
};

class Tower;
using TowerPtr = std::shared_ptr<const Tower>;

/// An element of one tower field, as a series in that field's uniformizer.
class TruncatedElement {
public:
    TruncatedElement(TowerPtr tower, FieldId field, Series s);

    FieldId field() const { return field_; }
    const Tower& tower() const { return *tower_; }
    const TowerPtr& tower_ptr() const { return tower_; }
    const Series& series() const { return s_; }

    bool is_zero() const { return s_.is_zero(); }
    std::int64_t valuation() const;
    std::int64_t absolute_precision() const { return s_.abs_precision(); }
    std::int64_t relative_precision() const { return static_cast<std::int64_t>(s_.coeffs.size()); }
    /// Coefficient of uniformizer^k; throws PrecisionError beyond the precision.
    FiniteField::Elem coeff(std::int64_t k) const;
    FiniteField::Elem leading() const;

    TruncatedElement operator+(const TruncatedElement& o) const;
    TruncatedElement operator-(const TruncatedElement& o) const;
    TruncatedElement operator-() const;
    TruncatedElement operator*(const TruncatedElement& o) const;
    TruncatedElement operator/(const TruncatedElement& o) const { return *this * o.inverse(); }
    TruncatedElement inverse() const;
    TruncatedElement pow(std::int64_t e) const;

    std::string to_string() const;

private:
    void check_same(const TruncatedElement& o) const;

    TowerPtr tower_;
    FieldId field_;
    Series s_;
};

/// Class of a nonzero element in K^*/(1+P_K): valuation and the discrete log
/// of its residue unit with respect to the generator of k_K^*.
struct TameUnitClass {
    FieldId field;
    std::int64_t valuation;
    std::uint64_t residue_log;
    bool operator==(const TameUnitClass&) const = default;
};

/// Element of Gal(A/F) for the ambient field A (L or M): j-th power of the
/// residue Frobenius, composed with s -> -s when eps = 1.
struct GaloisElt {
    std::uint32_t j = 0;
    std::uint32_t eps = 0;
    bool operator==(const GaloisElt&) const = default;
};

/// The tower of local fields attached to (q, m, e(E/F)), modeled in equal
/// characteristic: F = F_q((t)), L = F_{q^n}((t)) with n = 2m, and for
/// ramified E, M = F_{q^n}((s)) with s^2 = t. All fields live inside the
/// ambient A (L or M), whose residue field F_{q^n} is the single finite field
/// shared by the whole tower.
class Tower : public std::enable_shared_from_this<Tower> {
public:
    static TowerPtr build(std::uint32_t p, std::uint64_t q, std::uint32_t m, std::uint32_t e_E);

    std::uint32_t p() const { return p_; }
    std::uint64_t q() const { return q_; }
    std::uint32_t r() const { return r_; }  // q = p^r
    std::uint32_t m() const { return m_; }
    std::uint32_t n() const { return 2 * m_; }
    std::uint32_t e_E() const { return e_E_; }
    bool ramified() const { return e_E_ == 2; }
    const FiniteField& amb() const { return *amb_; }
    const FieldPtr& amb_ptr() const { return amb_; }

    std::span<const FieldId> fields() const { return fields_; }
    bool has(FieldId k) const;
    const LocalFieldDesc& desc(FieldId k) const;
    /// sub is a subfield of sup.
    bool contains(FieldId sub, FieldId sup) const;
    /// [sup : sub].
    std::uint32_t degree(FieldId sub, FieldId sup) const;

    std::uint64_t residue_size(FieldId k) const;
    std::uint64_t residue_units(FieldId k) const { return residue_size(k) - 1; }
    /// Degree of k_K over F_p.
    std::uint32_t residue_prime_degree(FieldId k) const { return r_ * desc(k).f; }
    FiniteField::Elem residue_generator(FieldId k) const;
    bool in_residue(FieldId k, FiniteField::Elem c) const;
    /// Discrete log of c in k_K^* with respect to residue_generator(k).
    std::uint64_t residue_log(FieldId k, FiniteField::Elem c) const;
    std::uint32_t residue_trace(FieldId k, FiniteField::Elem c) const;

    std::uint32_t galois_order() const { return n() * ambient_e_; }
    std::vector<GaloisElt> galois_group() const;
    bool fixes(const GaloisElt& g, FieldId k) const;
    /// Representatives of Gal(A/K) / Gal(A/K'), i.e. of Gal(K'/K).
    std::vector<GaloisElt> relative_group(FieldId k, FieldId k_sup) const;
    GaloisElt compose(const GaloisElt& a, const GaloisElt& b) const;
    GaloisElt invert(const GaloisElt& g) const;

    std::int64_t default_precision() const { return 3; }

    TruncatedElement make(FieldId k, Series s) const;
    TruncatedElement zero(FieldId k, std::int64_t abs_precision) const;
    TruncatedElement constant(FieldId k, FiniteField::Elem c, std::int64_t precision) const;
    TruncatedElement one(FieldId k, std::int64_t precision) const { return constant(k, 1, precision); }
    TruncatedElement uniformizer(FieldId k, std::int64_t precision) const;
    /// uniformizer^v * teichmuller(residue generator^log).
    TruncatedElement teichmuller(const TameUnitClass& c, std::int64_t precision) const;

    /// delta in E with delta^2 in F and Tr_{E/F}(delta) = 0.
    TruncatedElement delta(std::int64_t precision) const;
    /// v = gamma^{(q^m+1)/2} in k_L, so v^{q^m} = -v. Meaningful in both towers.
    FiniteField::Elem v_residue() const;

    Series embed(const TruncatedElement& x) const;
    TruncatedElement project(const Series& s, FieldId k) const;
    /// x viewed in a field containing its own.
    TruncatedElement coerce(const TruncatedElement& x, FieldId k) const;
    TruncatedElement apply(const GaloisElt& g, const TruncatedElement& x) const;
    TruncatedElement norm(const TruncatedElement& x, FieldId k) const;
    TruncatedElement trace(const TruncatedElement& x, FieldId k) const;

    TameUnitClass tame_class(const TruncatedElement& x) const;

    Series series_mul(const Series& a, const Series& b) const;
    Series series_add(const Series& a, const Series& b) const;
    Series series_neg(const Series& a) const;
    Series series_inv(const Series& a) const;

private:
    Tower() = default;
    // Ambient uniformizer S (t or s): pi_K = unit * S^{e_rel}.
    std::uint32_t e_rel(FieldId k) const;
    FiniteField::Elem uniformizer_unit(FieldId k) const;
    Series apply_ambient(const GaloisElt& g, const Series& s) const;

    std::uint32_t p_ = 0, r_ = 0, m_ = 0, e_E_ = 1, ambient_e_ = 1;
    std::uint64_t q_ = 0;
    FieldPtr amb_;
    std::vector<FieldId> fields_;
    std::array<LocalFieldDesc, 7> desc_{};
};

/// Alias of Tower::tame_class: (valuation, residue log) of a nonzero element.
TameUnitClass jordan_of_unit_class(const TruncatedElement& x);

std::uint64_t ipow64(std::uint64_t b, std::uint32_t e);

}  // namespace tlw
