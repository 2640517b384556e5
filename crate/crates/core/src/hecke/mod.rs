//! Weight-2 newforms of prime level via modular symbols.

mod eigen;
mod family;
mod io;
mod linalg;
mod modsym;
mod p1;

pub use eigen::{
    atkin_lehner_sign, decompose, decompose_with_seed, eigen_systems, EigenSystems,
    DEFAULT_MIX_SEED,
};
pub use family::{
    default_weight_horizon, extend_coefficients, harmonic_weights, symmetric_square_proxy,
    weight_coefficient_horizon, Eigenform, FamilySnapshot, Provenance,
};
pub use io::{export_family, import_family, level_dir, COEFF_FILE, META_FILE};
pub use modsym::{build_space, genus_x0, hecke_operator, ModSymSpace};
pub use p1::P1;

use crate::error::Result;

/// Full pipeline for level `q`: modular symbols, eigenforms with
/// coefficients to `nmax`, and harmonic weights at the default horizon
/// (coefficients are computed as far as the weights need, then truncated).
pub fn compute_family(q: u64, nmax: usize) -> Result<FamilySnapshot> {
    compute_family_with(q, nmax, default_weight_horizon(q), DEFAULT_MIX_SEED)
}

pub fn compute_family_with(q: u64, nmax: usize, horizon: f64, mix_seed: u64) -> Result<FamilySnapshot> {
    let space = build_space(q)?;
    let need = nmax.max(weight_coefficient_horizon(horizon));
    let forms = decompose_with_seed(&space, need, mix_seed)?;
    Ok(harmonic_weights(&forms, horizon)?.truncated(nmax))
}
