//! Integral representations of the kernels: the product-formula measure on
//! `[0, 1]`, the recursive chain `Z_d` for the multivariate Jacobi kernels,
//! and the binomial mixture it induces for Hahn kernels.

mod hahn_rep;
mod koornwinder;
mod zchain;

pub use hahn_rep::{h_tilde, hahn_mixing_weight, hahn_mixing_weights, omega, verify_hahn_representation};
pub use koornwinder::{check_gasper_region, density_k, sample_koornwinder, DensityValue, GasperVerdict, KoornwinderSampler};
pub use zchain::{sample_z_chain, verify_kernel_representation, verify_z_moments, z_chain_region, KernelCheck, ZChain};
