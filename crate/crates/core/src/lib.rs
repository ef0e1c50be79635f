//! Exact and numeric toolkit for the (2m,1) minimal model.
//!
//! * [`exact`]: rationals, Gaussian rationals, polynomials, rational functions, Laurent series.
//! * [`gd`]: Gelfand–Dikii polynomials, string equations, the Lax tower and its gauge.
//! * [`curve`]: critical potential, temperature, γ, rescaled and Lax spectral curves.
//! * [`toprec`]: residue recursion for the correlators on the Lax curve, loop and pole checks.
//! * [`detform`]: leading kernel, two-point function, cycle sums and determinantal expansions.
//! * [`dscale`]: two-cut endpoint solver, hodograph flow and double-scaling fits (f64).
//! * [`wkb`]: chain rule, Poisson bracket, leading det Ψ and the first WKB correction.

pub mod exact;
pub mod gd;
pub mod curve;
pub mod toprec;
pub mod detform;
pub mod dscale;
pub mod wkb;
