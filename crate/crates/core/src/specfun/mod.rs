//! Scalar special functions: Γ, ln Γ, ψ, ψ⁽ⁿ⁾, Pochhammer symbols and the
//! ₂F₃ series that carries every closed-form residue sum.

mod gamma;
mod hyper;
mod psi;

pub use gamma::{cos_pi, gamma, gamma_complex, is_nonpositive_integer, ln_gamma, ln_gamma_complex, ln_sin_pi, sin_pi};
pub use hyper::{hyp1f2, hyp2f3, hyp2f3_with, pochhammer, SeriesOptions, SeriesResult};
pub use psi::{digamma, polygamma};

/// ζ(2k) for k = 1..4, used by the Laurent expansion of π u / sin(π u).
pub(crate) const ZETA_EVEN: [f64; 4] = [
    1.644_934_066_848_226_4,
    1.082_323_233_711_138_2,
    1.017_343_061_984_449_1,
    1.004_077_356_197_944_3,
];
