#pragma once

#include "bstab/charges.hpp"
#include "bstab/chern.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace bstab {

class BadIndex : public std::out_of_range {
public:
    BadIndex() : std::out_of_range("mutation index must be 1, 2 or 3") {}
};

class SingularBasis : public std::runtime_error {
public:
    SingularBasis() : std::runtime_error("collection classes do not span the lattice") {}
};

/// Ordered quadruple of numerical classes on P^3.
struct ExcCollection {
    std::array<ChernVector, 4> classes;
    std::array<std::string, 4> names;
};

enum class Mutation { Left, Right };

/// O(k), O(k+1), O(k+2), O(k+3).
ExcCollection beilinson(long k);

/// K-level mutation at the 1-based index i, with [L_E F] = chi(E, F)[E] - [F]:
/// Left:  (E_i, E_{i+1}) -> (L_{E_i} E_{i+1}, E_i)
/// Right: (E_i, E_{i+1}) -> (E_{i+1}, R_{E_{i+1}} E_i), [R_F E] = chi(E, F)[F] - [E].
ExcCollection mutate(const ExcCollection& coll, int i, Mutation kind);

/// Euler-level test: chi(E_i, E_i) = 1 and chi(E_j, E_i) = 0 for j > i.
bool check_exceptional(const ExcCollection& coll, const VarietyData& x = VarietyData::p3());

/// Masses m_i > 0 and phases phi_i of Z(E_i) = m_i exp(i pi phi_i).
struct AlgebraicDatum {
    std::array<double, 4> m{1, 1, 1, 1};
    std::array<double, 4> phi{};
};

struct ThetaMembership {
    bool in_theta = false;
    bool in_theta_star = false;
};

/// in_theta: phi_j - phi_i > (j - i)(j - i + 1)/2 for i < j and all m_i > 0;
/// in_theta_star additionally needs phi_{i+1} - phi_i >= 1.
ThetaMembership theta_membership(const AlgebraicDatum& d);

/// Coefficient-form charge with Z(E_j) = m_j exp(i pi phi_j).
ChargeSpec<double> algebraic_charge(const ExcCollection& coll, const AlgebraicDatum& d);

/// max_j |Z(E_j) - m_j exp(i pi phi_j)|.
double algebraic_residual(const ExcCollection& coll, const AlgebraicDatum& d, const ChargeSpec<double>& spec);

}  // namespace bstab
