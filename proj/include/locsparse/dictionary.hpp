#ifndef LOCSPARSE_DICTIONARY_HPP_
#define LOCSPARSE_DICTIONARY_HPP_

#include <vector>

#include "locsparse/types.hpp"

namespace locsparse {

// Arterial concentration C_A sampled on the dictionary time grid.
struct InputCurve {
  Vector samples;
  std::string description;

  void validate() const {
    require(samples.allFinite() && (samples.array() >= 0.0).all(),
            "InputCurve: samples must be finite and >= 0");
  }
};

// Candidate perfusion-over-lambda decay rates (1/time), one per atom.
struct DecayGrid {
  Vector params;

  void validate() const {
    require(params.size() >= 1, "DecayGrid: empty");
    require(params.allFinite() && (params.array() >= 0.0).all(),
            "DecayGrid: rates must be finite and >= 0");
    for (Index j = 0; j + 1 < params.size(); ++j)
      require(params[j] < params[j + 1],
              "DecayGrid: rates must be strictly increasing");
  }
};

// Column j samples b_j(t_k) = integral_0^{t_k} C_A(tau) e^{-b_j (t_k - tau)} dtau.
// The integral treats C_A as piecewise linear between grid points and is
// evaluated in closed form per segment, so it is exact for constant and
// linear curves and second-order otherwise.
DictionaryMatrix build_kinetic_dictionary(const InputCurve& curve,
                                          const DecayGrid& decays,
                                          const Vector& time_grid);

// Divides every column by its 2-norm (l2) or 1-norm (l1) and sets the flag.
DictionaryMatrix normalize_columns(const DictionaryMatrix& b,
                                   Normalization mode);

// max_{i != j} |<b_i, b_j>| / ||b_i||_2^2; large values mean near-duplicate
// atoms.
double mutual_incoherence(const DictionaryMatrix& b);

struct ScalingViolation {
  Index column;        // offending J(i) column
  Index other;         // -1 for a norm violation, partner index otherwise
  double value;        // measured norm or inner product magnitude
};

struct ScalingReport {
  bool satisfied = true;
  std::vector<ScalingViolation> violations;
};

// Checks, for every used column J(i): ||b_{J(i)}||_2 = 1 (tol 1e-9) and
// |<b_{J(i)}, b_j>| <= 1 + 1e-9 for every j.
ScalingReport check_scaling_condition(const DictionaryMatrix& b,
                                      const std::vector<Index>& row_support,
                                      double tol = 1e-9);

// t * e^{-t/tau0}, rescaled to peak at 1.
InputCurve gamma_variate_curve(const Vector& time_grid, double tau0);

// n log-spaced decay rates in [lo, hi].
DecayGrid log_decay_grid(Index n, double lo, double hi);

}  // namespace locsparse

#endif  // LOCSPARSE_DICTIONARY_HPP_
