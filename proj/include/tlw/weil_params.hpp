#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tlw/characters.hpp"
#include "tlw/cyclotomic.hpp"
#include "tlw/epsilon.hpp"

namespace tlw {

/// Ind_{W_K'}^{W_F}(chi'); K' = F gives a character of F^*.
struct MonomialParam {
    FieldId field;
    MultChar chi;
};

struct ParamSum {
    std::vector<MonomialParam> parts;
};

std::uint32_t dimension(const Tower& t, const MonomialParam& phi);
std::uint32_t dimension(const Tower& t, const ParamSum& phi);
/// Full Galois orbit of chi' over F.
bool is_irreducible(const Tower& t, const MonomialParam& phi);

/// omega_{K'/F} * chi'|_{F^*}.
MultChar det_param(const Tower& t, const MonomialParam& phi);
MultChar det_param(const Tower& t, const ParamSum& phi);

/// phi = Ind_{W_L}^{W_F}(eta chi) tensored with Ind_{W_E}^{W_F}(mu^{-1}).
ParamSum tensor_with_quadratic(const Tower& t, const MultChar& chi, const MultChar& mu);

enum class SelfDuality { not_selfdual, orthogonal, symplectic };
std::string_view to_string(SelfDuality s);

/// alpha-selfduality of a tame irreducible Ind_{W_L}^{W_F}(chi') via the
/// restriction of chi' to L0^*.
SelfDuality classify_selfduality(const Tower& t, const MonomialParam& phi, const MultChar& alpha);

using CycMatrix = std::vector<std::vector<Cyclotomic>>;

/// Ind_{W_K}^{W_F}(chi) for unramified K of degree d, on the tame quotient:
/// T = diag(chi(gamma_K^{q^i})) and Phi e_i = e_{i+1}, Phi e_{d-1} = chi(pi) e_0,
/// subject to Phi^{-1} T Phi = T^q.
struct FiniteMatrixModel {
    std::uint32_t dim = 0;
    std::vector<QZ> t_diag;
    QZ corner;

    CycMatrix t_matrix() const;
    CycMatrix phi_matrix() const;
};

FiniteMatrixModel build_model(const Tower& t, const MonomialParam& phi);
/// Kronecker product of two models as explicit matrices (T, Phi).
std::pair<CycMatrix, CycMatrix> tensor_models(const FiniteMatrixModel& a, const FiniteMatrixModel& b);

CycMatrix mat_mul(const CycMatrix& a, const CycMatrix& b);
/// Determinant by cofactor expansion skipping zero entries.
Cyclotomic determinant(const CycMatrix& m);
/// Rank of a sparse system; each row maps column index to coefficient.
std::size_t sparse_rank(std::vector<std::map<std::size_t, Cyclotomic>> rows);

struct BruteForceSelfDuality {
    SelfDuality type = SelfDuality::not_selfdual;
    std::size_t dim_total = 0;
    std::size_t dim_symmetric = 0;
    std::size_t dim_alternating = 0;
};

/// Solves T^t B T = alpha(tau) B, Phi^t B Phi = alpha(Phi) B over Q(zeta_N)
/// and classifies the solution space.
BruteForceSelfDuality classify_selfduality_bruteforce(const Tower& t, const MonomialParam& phi, const MultChar& alpha);

/// Dimension and determinant of tensor_with_quadratic agree with the explicit
/// Kronecker product of the two matrix models. E unramified, mu tame.
bool mackey_consistent(const Tower& t, const MultChar& chi, const MultChar& mu);

/// Additive characters and lambda constants over every tower field, for a
/// fixed psi on F. Immutable after construction.
class EpsilonContext {
public:
    EpsilonContext(TowerPtr t, AddChar psi_f);

    const Tower& tower() const { return *tower_; }
    const AddChar& psi(FieldId k) const { return psi_.at(k); }
    const EpsilonValue& lambda(FieldId k) const { return lambda_.at(k); }

private:
    TowerPtr tower_;
    std::map<FieldId, AddChar> psi_;
    std::map<FieldId, EpsilonValue> lambda_;
};

/// lambda(K'/F, psi)^r * eps(chi', psi_{K'}), multiplied over summands.
EpsilonValue epsilon_param(const EpsilonContext& ctx, const MonomialParam& phi);
EpsilonValue epsilon_param(const EpsilonContext& ctx, const ParamSum& phi);

}  // namespace tlw
