//! JSON report documents. Every report carries a versioned `schema` tag and
//! deserializes back into the same type.

use realgw_core::charclass::{Partition2, SchurClass};
use realgw_core::clifford::PinModel;
use realgw_core::signs::{BubbleContext, CancellationReport, DimBalance, SignContext};
use realgw_core::Bit;
use serde::{Deserialize, Serialize};

pub const QUINTIC_REAL: &str = "realgw.quintic-real/1";
pub const QUINTIC_COMPLEX: &str = "realgw.quintic-complex/1";
pub const CANCELLATION: &str = "realgw.cancellation/1";
pub const MASLOV: &str = "realgw.maslov/1";
pub const SIGN_BUBBLE: &str = "realgw.sign-bubble/1";
pub const SIGN_CONTEXT: &str = "realgw.sign-context/1";
pub const SCHUBERT: &str = "realgw.schubert/1";
pub const CLIFFORD: &str = "realgw.clifford/1";
pub const ERROR: &str = "realgw.error/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuinticRealReport {
    pub schema: String,
    pub count: i64,
    pub euler_coeff: i64,
    pub base_integral: i64,
    /// `15 × 2`
    pub trace: String,
    pub orientation_cover_degree: i64,
    pub unoriented_count: i64,
    pub quadric_degree: i64,
    pub pontryagin_coeff: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuinticComplexReport {
    pub schema: String,
    pub count: String,
    pub class: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CancellationDocument {
    pub schema: String,
    pub verified: bool,
    #[serde(flatten)]
    pub report: CancellationReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaslovReport {
    pub schema: String,
    pub n: usize,
    pub samples: usize,
    pub mu: i64,
    pub w1: Bit,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignBubbleReport {
    pub schema: String,
    pub context: BubbleContext,
    /// Sign of `φ'_{L#}` on the bubble.
    pub sign: Bit,
    /// Sign of the involution on the stratum.
    pub stratum_sign: Bit,
    pub orientable_odd: Option<Bit>,
    pub restriction: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignContextReport {
    pub schema: String,
    pub context: SignContext,
    pub s_t_minus: Bit,
    pub s_t_plus: Bit,
    pub sign_phi_l: Bit,
    pub dim_balance: DimBalance,
    pub parity_hypothesis_holds: bool,
    pub maslov_parity_consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchurTerm {
    pub partition: [u32; 2],
    pub coefficient: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchubertReport {
    pub schema: String,
    pub n: usize,
    pub expression: String,
    pub class: String,
    pub terms: Vec<SchurTerm>,
    /// Present only when the class is of top degree (or zero).
    pub integral: Option<String>,
}

impl SchubertReport {
    pub fn terms_of(u: &SchurClass) -> Vec<SchurTerm> {
        u.terms()
            .map(|(&Partition2 { a, b }, c)| SchurTerm {
                partition: [a, b],
                coefficient: c.to_string(),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CliffordReport {
    pub schema: String,
    pub model: PinModel,
    pub n: usize,
    pub element: String,
    pub covering: String,
    pub determinant: i8,
    pub constant_lift: bool,
    /// `None` when the element does not cover `r1 r2`.
    pub conjugation_lift: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorReport {
    pub schema: String,
    pub error: String,
}
