#pragma once

#include <string>
#include <vector>

#include "decoq/superop.hpp"

namespace decoq {

struct GklsJump {
    Matrix op;
    double rate = 0.0;
};

/// Input description of a Lindblad generator. Admitted forms:
///  - hamiltonian: L = i ad(H)
///  - gkls:        L = i ad(H) + sum_m rate_m (c_m . c_m* - 1/2 {c_m* c_m, .})
///  - kraus_ce:    L(x) = Psi(x) + a x + x a*, Psi given as a Kraus list
///  - builtin:     named model ("amplitude_damping" with parameter gamma)
struct LindbladSpec {
    enum class Form { hamiltonian, gkls, kraus_ce, builtin };

    Form form = Form::hamiltonian;
    int dim = 0;
    Matrix hamiltonian;             // hamiltonian/gkls
    std::vector<GklsJump> jumps;    // gkls
    std::vector<Matrix> kraus;      // kraus_ce: Psi(x) = sum b_i x b_i*
    Matrix drift;                   // kraus_ce: a
    std::string builtin_name;       // builtin
    double gamma = 0.0;             // builtin parameter
};

/// Sampled table of generators over a time grid, interpolated linearly.
struct TimeDependentSpec {
    std::vector<double> times;       // strictly increasing
    std::vector<LindbladSpec> specs; // same length
};

SuperOp compile(const LindbladSpec& spec);

/// Amplitude-damping generator: GKLS with single jump sigma_minus at rate
/// 4*gamma, matching the Pauli-basis closed form
///   L(x) = -gamma (2x + s3 x + x s3 - s1 x s1 - s2 x s2 - i s1 x s2 + i s2 x s1).
SuperOp amplitude_damping(double gamma);

struct CptWitness {
    bool ok = false;
    std::string check;   // violated check when !ok
    double magnitude = 0.0;
};

/// True iff tr o L = 0 and the Choi matrix of e^{tL} at t = 1/max(||L||, 1)
/// has min eigenvalue >= -1e-9.
CptWitness is_cpt_generator(const SuperOp& l);

/// Choi matrix of a superoperator (as a map on density matrices).
Matrix choi_matrix(const SuperOp& m);

enum class UnitarityClass { purely_unitary, purely_dephasing, general };
UnitarityClass classify_unitarity(const SuperOp& l);

/// Piecewise-linear interpolation of the compiled table at time t.
SuperOp sample_time_dependent(const TimeDependentSpec& spec, double t);

/// Remark-style validity diagnostic tau * ||dL/dt|| / ||L(t)||, finite-differenced.
double time_dependence_ratio(const TimeDependentSpec& spec, double t, double tau);

}  // namespace decoq
