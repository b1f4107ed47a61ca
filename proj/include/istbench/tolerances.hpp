#pragma once

// Numerical tolerance ladder used across the library and its tests.
//
//   kPureIdentity  exact pure-state identities (norms, overlaps, Hermiticity)
//   kChannel       anything that went through a channel or long unitary chain
//   kMonteCarlo    deterministic analytic values quoted to limited precision
//
// Monte Carlo *estimates* are never compared against these; they carry their
// own standard errors and are checked at a stated multiple of sigma.

namespace istbench::tol {

inline constexpr double kPureIdentity = 1e-12;
inline constexpr double kChannel = 1e-10;
inline constexpr double kMonteCarlo = 1e-6;

}  // namespace istbench::tol
