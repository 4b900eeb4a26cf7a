#pragma once

// Empirical constants recorded from a verified run (seed-pinned where
// randomness is involved).  Regression checks assert that observed maxima
// stay at or below these values.

namespace gl3ks::calibration {

// max over squarefree q <= 210 and d1, d2 | q of A(d1, d2, q) (d1 d2) / (q (d1, d2)^3)
inline constexpr double kABoundConstant = 2.742858;

// max over p in {2, 3, 5}, k, l <= 3, t of R(t; p^k, p^l) / (p^l Σ_{d|t, d^3|(p^k, p^l)^2} d)
inline constexpr double kRDivisorMajorantConstant = 1.000001;

// Largest |𝒮| / bound over the bilinear-form experiments on N in {4, 8, 16},
// X1 = X2 in {4, 6, 8}, 10 trials, seed 1, adversarial γ; the H-parameter
// experiment uses H1 = H2 in {1, 2, X}.
inline constexpr double kMBoundMaxRatio = 0.3027347;
inline constexpr double kHBoundMaxRatio = 0.0889700;

}  // namespace gl3ks::calibration
