#pragma once

#include <cstdint>

#include "tlw/characters.hpp"
#include "tlw/cyclotomic.hpp"

namespace tlw {

/// sum_{x in k_K^*} chi(x) psi(x) with chi(gamma_K) = exp(2 pi i a/(|k_K|-1))
/// and psi(x) = exp(2 pi i Tr_{k_K/F_p}(b x)/p). b = 0 is rejected.
Cyclotomic gauss_sum(const Tower& t, FieldId k, std::uint64_t a, FiniteField::Elem b);

/// Root number eps(1/2, chi, psi) for chi of conductor c <= 2 on K = psi.field().
///
/// c = 0: chi(pi^{n(psi)}). c >= 1, with k = c + n(psi):
///   |k_K|^{-c/2} * sum_{u in (O/P^c)^*} chi^{-1}(pi^{-k} u) psi(pi^{-k} u).
/// Here n(psi) = AddChar::exponent(), so that eps(mu chi, psi) =
/// mu(pi^{n(psi)+c(chi)}) eps(chi, psi) for unramified mu and
/// eps(chi, psi_a) = chi(a) eps(chi, psi).
EpsilonValue epsilon_char(const MultChar& chi, const AddChar& psi);

/// lambda(K'/K, psi) = eps(Ind 1, psi) / eps(1, psi_{K'}), with Ind 1 expanded
/// into the characters of K^*/N(K'^*). psi lives on K.
EpsilonValue lambda_constant(FieldId k_sup, const AddChar& psi);

/// Nonzero element of K' with trace zero to K, for a quadratic step.
TruncatedElement trace_zero_element(const Tower& t, FieldId k, FieldId k_sup);

}  // namespace tlw
