#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tlw/local_fields.hpp"
#include "tlw/qz.hpp"

namespace tlw {

/// A character of K^* of conductor at most 2 with values in Q/Z:
///   chi(pi_K^v * teich(c0) * (1 + pi_K w + ...))
///     = v * pi_value + a * log(c0)/(|k_K| - 1) + Tr_{k_K/F_p}(beta * w)/p.
struct MultChar {
    FieldId field = FieldId::F;
    QZ pi_value;
    std::uint64_t a = 0;
    std::optional<FiniteField::Elem> beta;

    int conductor() const { return beta ? 2 : (a != 0 ? 1 : 0); }
    bool tame() const { return !beta; }
    bool operator==(const MultChar&) const = default;
};

MultChar make_char(const Tower& t, FieldId k, QZ pi_value, std::int64_t a,
                   std::optional<FiniteField::Elem> beta = std::nullopt);
MultChar trivial_char(FieldId k);
MultChar unramified_char(FieldId k, QZ pi_value);

QZ evaluate(const Tower& t, const MultChar& chi, const TruncatedElement& x);
QZ evaluate(const Tower& t, const MultChar& chi, const TameUnitClass& x);
/// chi(teich(u0) * (1 + pi_K * w)) for u0 in k_K^*, w in k_K.
QZ unit_value(const Tower& t, const MultChar& chi, FiniteField::Elem u0, FiniteField::Elem w);

MultChar multiply(const Tower& t, const MultChar& x, const MultChar& y);
MultChar inverse(const Tower& t, const MultChar& x);
MultChar power(const Tower& t, const MultChar& x, std::int64_t k);

/// Recovers the character of K^* given by a homomorphism f : K^* -> Q/Z,
/// from its values on pi_K, on the residue generator and on 1 + pi_K*b for
/// an F_p-basis b of k_K. Throws ConductorCapError when f is nontrivial on
/// 1 + P_K^2.
MultChar character_from_values(const Tower& t, FieldId k, const std::function<QZ(const TruncatedElement&)>& f);

/// chi o N_{K'/K}.
MultChar compose_with_norm(const Tower& t, const MultChar& chi, FieldId k_sup);
/// chi restricted to a subfield.
MultChar restrict_char(const Tower& t, const MultChar& chi, FieldId k_sub);
/// chi o g.
MultChar galois_conjugate(const Tower& t, const MultChar& chi, const GaloisElt& g);

/// Characters of L^* with trivial stabilizer under Gal(L/F); chi must be tame.
bool is_regular(const Tower& t, const MultChar& chi);
/// Every tame character of K^* with pi_value in (1/pi_order)Z.
std::vector<MultChar> enumerate_tame(const Tower& t, FieldId k, std::uint64_t pi_order);
/// One regular tame character of L^* per Frobenius orbit and pi_value.
std::vector<MultChar> enumerate_admissible_pairs(const Tower& t, std::uint64_t pi_order);
/// Characters of K^* trivial on N_{K'/K}(K'^*).
std::vector<MultChar> galois_characters(const Tower& t, FieldId k, FieldId k_sup);
/// det of Ind 1: the product of galois_characters.
MultChar omega(const Tower& t, FieldId k, FieldId k_sup);
MultChar omega_quadratic(const Tower& t, FieldId k, FieldId k_sup);

nlohmann::json to_json(const Tower& t, const MultChar& chi);
MultChar char_from_json(const Tower& t, const nlohmann::json& j);
std::string to_string(const Tower& t, const MultChar& chi);

/// Additive character x -> psi_F(Tr_{K/F}(twist * x)) where
/// psi_F(sum a_i t^i) = exp(2 pi i Tr_{k_F/F_p}(a_{-1}) / p).
class AddChar {
public:
    static AddChar standard(TowerPtr t, FieldId k);

    FieldId field() const { return twist_.field(); }
    const TruncatedElement& twist() const { return twist_; }
    const Tower& tower() const { return twist_.tower(); }

    /// Smallest d with psi trivial on P_K^d.
    std::int64_t level() const { return level_; }
    /// n(psi) = -level(): psi is trivial on P_K^{-n(psi)}.
    std::int64_t exponent() const { return -level_; }

    /// x -> psi(a x).
    AddChar twisted(const TruncatedElement& a) const;
    /// psi o Tr_{K'/K}.
    AddChar lift(FieldId k_sup) const;
    AddChar inverse() const;
    /// psi o g.
    AddChar conjugate(const GaloisElt& g) const;

    /// psi(c * pi_K^j) as an integer mod p.
    std::uint32_t term(std::int64_t j, FiniteField::Elem c) const;
    QZ value(const TruncatedElement& x) const;

private:
    struct Tables {
        std::mutex mu;
        std::map<std::int64_t, std::vector<std::uint32_t>> by_level;
    };
    explicit AddChar(TruncatedElement twist);

    TruncatedElement twist_;
    std::int64_t level_ = 0;
    std::shared_ptr<Tables> tables_;
};

}  // namespace tlw
