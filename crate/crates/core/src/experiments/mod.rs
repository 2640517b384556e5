//! Statistical experiments comparing the family of L-functions with the
//! random model: equidistribution, distribution comparison on grids,
//! universality counts, support approximation, and decay/growth diagnostics.

mod compare;
mod decay;
mod equidist;
mod greedy;
mod petersson;
pub mod stats;
mod target;
mod universality;

use serde::{Deserialize, Serialize};

pub use compare::{bagchi_compare, ComparisonReport, PointDistance};
pub use decay::{moment_growth_test, smoothing_decay_test, DecayTable, Generator, GrowthTable};
pub use equidist::{joint_moment_test, sato_tate_test, JointMomentReport, SatoTateReport};
pub use greedy::{greedy_support_approx, SupportApproxTrace};
pub use petersson::{petersson_check, PeterssonReport, PeterssonRow};
pub use target::{TargetFunction, TargetRepr};
pub use universality::{model_support_probability, universality_count, SupportProbability, UniversalityReport};

use crate::hecke::FamilySnapshot;

/// Reproducibility fields embedded in every report.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportMeta {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub q: Option<u64>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none", default)]
    pub n_cut: Option<usize>,
    #[serde(rename = "M", skip_serializing_if = "Option::is_none", default)]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub nmax: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub grid_hash: Option<String>,
}

impl ReportMeta {
    pub fn for_family(s: &FamilySnapshot) -> Self {
        ReportMeta {
            q: Some(s.q),
            m: Some(s.len()),
            nmax: Some(s.nmax),
            ..ReportMeta::default()
        }
    }
}
