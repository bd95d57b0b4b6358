//! Solver and verifier for the Riemann problem of the one-dimensional cold
//! plasma equations
//!
//! ```text
//! V_t + V V_x = -E,     E_t + V E_x = V,     n = 1 - E_x.
//! ```
//!
//! Characteristics are rigid rotations in the `(V, E)` plane, so every datum
//! evolves `2 pi`-periodically through alternating phases: continuous
//! rarefaction fans where the side characteristics diverge, and singular
//! shocks carrying a delta measure in the density where they collide.
//!
//! Module map:
//!
//! * [`riemann`] — jump data, side states, critical times, phase planning.
//! * [`rarefaction`] — linear, simple-wave and hybrid fans plus energies.
//! * [`shock`] — generalized Rankine-Hugoniot curves and admissibility.
//! * [`solution`] — full-period assembly, sampling and audits.
//! * [`numerics`] — embedded Runge-Kutta integration, root finding and
//!   adaptive quadrature used by the above.
//! * [`cli`] — the `plasma-riemann` command line front end.

pub mod numerics;
pub mod rarefaction;
pub mod riemann;
pub mod shock;
