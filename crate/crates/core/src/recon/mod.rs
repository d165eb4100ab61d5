//! Fourier inversion: admissible wavenumbers, coefficient extraction from
//! Cauchy data on `Gamma_rho`, the shifted zero mode, and synthesis of `S_N`.

mod coefficients;
mod synthesis;
mod wavenumbers;

pub use coefficients::{
    basis_overlap, boundary_integral, fourier_coefficient, zero_mode_prefactor, zeroth_coefficient, CoefficientTable,
};
pub use synthesis::{synthesize, synthesize_gradient};
pub use wavenumbers::{admissible_wavenumbers, truncation_order, TruncationRule, WavenumberEntry, WavenumberTable};
