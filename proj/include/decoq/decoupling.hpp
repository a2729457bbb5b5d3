#pragma once

#include <string>
#include <vector>

#include "decoq/superop.hpp"

namespace decoq {

/// A finite group of unitaries (v_j), v_0 = 1, whose Ad-average projects
/// every operator onto multiples of the identity.
struct DecouplingSet {
    int dim_h = 0;
    std::vector<Matrix> unitaries;

    int size() const { return static_cast<int>(unitaries.size()); }
};

/// The 4^n tensor-product combinations of {1, s1, s2, s3}; index 0 is the identity.
DecouplingSet pauli_set(int n_qubits);

struct ValidationReport {
    bool ok = true;
    std::string failing_check;  // first failing check
    double residual = 0.0;
};

/// Checks v_0 = 1, unitarity of each member, closure of {Ad(v_j)} under
/// products (modulo phases), and the averaging property on all matrix units.
ValidationReport validate(const DecouplingSet& set);

/// Lbar = (1/|J|) sum_j Ad(v_j) o L o Ad(v_j*).
SuperOp averaged_generator(const SuperOp& l, const DecouplingSet& set);

/// L_j = Ad(v_j) o (L - Lbar) o Ad(v_j*), indexed like the set.
std::vector<SuperOp> fluctuation_generators(const SuperOp& l, const DecouplingSet& set);

/// True iff ||Lbar|| <= 1e-9 * max(||L||, 1).
bool decoupling_condition_holds(const SuperOp& l, const DecouplingSet& set);

}  // namespace decoq
