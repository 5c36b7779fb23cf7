//! Codimension-one boundary strata of the invariance cobordism.
//!
//! A stratum is recorded only through the data the sign formulas consume:
//! the boundary component that bubbles, which marked points ride along
//! (`σ`, `ϱ`), and the Maslov and `w1` splits between the main component
//! `d'` and the disk bubble `d''`. Raw subsets are grouped by cardinality
//! and by whether `z_1 ∈ σ`; each descriptor carries the size of its class.
//!
//! Every combinatorial datum is emitted twice, once for `d''` and once for
//! its conjugate `φ_* d''`. Conjugation pairs these; a descriptor flagged
//! self-conjugate is its own image and must instead be disposed of by the
//! weight-zero rule for equivariant multisections.

use std::collections::HashMap;

use num_integer::binomial;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::signs::{
    boundary_action_sign, expected_dim_balance, stratum_dimension_restriction, BubbleContext, DimBalance,
    SignContext,
};
use crate::{bit, par, Bit, Error, Rational, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StratumKind {
    DiskBubble,
    /// Sphere bubble on a constant disk. Not modelled; only ever reported.
    SphereOnConstantDisk,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StratumDescriptor {
    pub kind: StratumKind,
    /// Bubbling boundary component, 1-based.
    pub b: usize,
    /// Canonical representative of the boundary points moving to the bubble.
    pub sigma: Vec<u32>,
    /// Canonical representative of the interior points moving to the bubble.
    pub rho: Vec<u32>,
    /// Number of `(σ, ϱ)` subsets this descriptor stands for.
    pub multiplicity: u64,
    /// `(μ(d'), μ(d''))`
    pub mu_split: (i64, i64),
    /// `(w1(d'_b), w1(∂d''))`
    pub w1_split: (Bit, Bit),
    /// Slack in the dimension restriction.
    pub r: i64,
    /// Whether this is the `φ_* d''` copy.
    pub conjugated: bool,
    pub self_conjugate: bool,
    /// `μ(d'') = 0`: `φ`-multiply covered bubbles cannot be ruled out.
    pub multiply_covered_risk: bool,
}

impl StratumDescriptor {
    pub fn k_dprime(&self) -> u32 {
        self.sigma.len() as u32
    }

    pub fn l_dprime(&self) -> u32 {
        self.rho.len() as u32
    }

    pub fn z1_bubbles(&self) -> bool {
        self.sigma.first() == Some(&1)
    }

    /// Image under conjugation of the bubble.
    pub fn conjugate(&self) -> Self {
        let mut out = self.clone();
        if !self.self_conjugate {
            out.conjugated = !self.conjugated;
        }
        out
    }

    fn pairing_key(&self) -> Self {
        Self {
            conjugated: false,
            ..self.clone()
        }
    }
}

fn canonical_sigma(k_dprime: u32, z1: bool) -> Vec<u32> {
    if z1 {
        (1..=k_dprime).collect()
    } else {
        (2..k_dprime + 2).collect()
    }
}

fn class_multiplicity(k_b: u32, k_dprime: u32, z1: bool, l: u32, l_dprime: u32) -> u64 {
    let sigma = match (k_b, z1) {
        (0, _) => 1,
        (_, true) => binomial(k_b as u64 - 1, k_dprime as u64 - 1),
        (_, false) => binomial(k_b as u64 - 1, k_dprime as u64),
    };
    sigma * binomial(l as u64, l_dprime as u64)
}

fn check_context(ctx: &SignContext) -> Result<()> {
    ctx.validate()?;
    if !(ctx.n == 2 || ctx.n == 3) {
        return Err(Error::UnsupportedDimension(ctx.n));
    }
    if ctx.n == 3 && ctx.w1_da.iter().any(|&w| w != 0) {
        return Err(Error::Precondition("n = 3 requires orientable L (all w1 bits zero)".into()));
    }
    Ok(())
}

/// One `(b, k'', z_1 ∈ σ)` cell of the enumeration.
#[derive(Debug, Clone, Copy)]
struct Cell {
    b: usize,
    k_dprime: u32,
    z1: bool,
}

fn cells(ctx: &SignContext) -> Vec<Cell> {
    let mut out = Vec::new();
    for (i, &k_b) in ctx.k_a.iter().enumerate() {
        for k_dprime in 0..=k_b {
            for z1 in [false, true] {
                let ok = match (k_b, z1) {
                    (0, z1) => !z1,
                    (_, true) => k_dprime >= 1,
                    (_, false) => k_dprime < k_b,
                };
                if ok {
                    out.push(Cell { b: i + 1, k_dprime, z1 });
                }
            }
        }
    }
    out
}

fn enumerate_cell(ctx: &SignContext, mu_bound: i64, cell: &Cell) -> Result<Vec<StratumDescriptor>> {
    let k_b = ctx.k_a[cell.b - 1];
    let w1_db = ctx.w1_da[cell.b - 1];
    let mut out = Vec::new();
    for l_dprime in 0..=ctx.l {
        for mu_dpp in -mu_bound..=mu_bound {
            let Some(r) = stratum_dimension_restriction(ctx.n, mu_dpp, cell.k_dprime, l_dprime)? else {
                continue;
            };
            let w1_bdpp = bit(mu_dpp);
            let base = StratumDescriptor {
                kind: StratumKind::DiskBubble,
                b: cell.b,
                sigma: canonical_sigma(cell.k_dprime, cell.z1),
                rho: (1..=l_dprime).collect(),
                multiplicity: class_multiplicity(k_b, cell.k_dprime, cell.z1, ctx.l, l_dprime),
                mu_split: (ctx.mu_d - mu_dpp, mu_dpp),
                w1_split: (w1_db ^ w1_bdpp, w1_bdpp),
                r,
                conjugated: false,
                self_conjugate: false,
                multiply_covered_risk: mu_dpp == 0,
            };
            let conj = base.conjugate();
            out.push(base);
            out.push(conj);
        }
    }
    Ok(out)
}

fn sphere_strata(ctx: &SignContext) -> Vec<StratumDescriptor> {
    let disk = ctx.g0 == 0 && ctx.m == 1;
    if !disk || ctx.total_k() != 0 || ctx.aod {
        return Vec::new();
    }
    vec![StratumDescriptor {
        kind: StratumKind::SphereOnConstantDisk,
        b: 1,
        sigma: Vec::new(),
        rho: Vec::new(),
        multiplicity: 1,
        mu_split: (0, ctx.mu_d),
        w1_split: (0, 0),
        r: 0,
        conjugated: false,
        self_conjugate: true,
        multiply_covered_risk: false,
    }]
}

/// All disk-bubble strata with `|μ(d'')| ≤ mu_bound` passing the dimension
/// restriction, plus the sphere-on-constant-disk stratum when the disk has no
/// boundary marked points and the exclusion flag is not set.
pub fn enumerate_boundary_strata(ctx: &SignContext, mu_bound: i64) -> Result<Vec<StratumDescriptor>> {
    check_context(ctx)?;
    let cells = cells(ctx);
    let chunks = par::map_collect(&cells, |c| enumerate_cell(ctx, mu_bound.max(0), c));
    let mut out = sphere_strata(ctx);
    for chunk in chunks {
        out.extend(chunk?);
    }
    Ok(out)
}

/// Sequential twin of [`enumerate_boundary_strata`].
pub fn enumerate_boundary_strata_seq(ctx: &SignContext, mu_bound: i64) -> Result<Vec<StratumDescriptor>> {
    check_context(ctx)?;
    let mut out = sphere_strata(ctx);
    for c in cells(ctx) {
        out.extend(enumerate_cell(ctx, mu_bound.max(0), &c)?);
    }
    Ok(out)
}

/// Bubble context of a disk-bubble stratum, after consistency checks.
pub fn bubble_context(s: &StratumDescriptor, ctx: &SignContext) -> Result<BubbleContext> {
    if s.kind != StratumKind::DiskBubble {
        return Err(Error::Precondition("sphere bubbles carry no sign formula".into()));
    }
    if s.b == 0 || s.b > ctx.m {
        return Err(Error::Inconsistent(format!("boundary component {} of {}", s.b, ctx.m)));
    }
    let k_b = ctx.k_a[s.b - 1];
    let k_dprime = s.k_dprime();
    if s.sigma.iter().any(|&i| i == 0 || i > k_b) || k_dprime > k_b {
        return Err(Error::Inconsistent(format!("σ = {:?} not inside [1, {k_b}]", s.sigma)));
    }
    if s.rho.iter().any(|&i| i == 0 || i > ctx.l) {
        return Err(Error::Inconsistent(format!("ϱ = {:?} not inside [1, {}]", s.rho, ctx.l)));
    }
    let (mu_p, mu_pp) = s.mu_split;
    if mu_p + mu_pp != ctx.mu_d {
        return Err(Error::Inconsistent(format!("μ split {mu_p} + {mu_pp} != {}", ctx.mu_d)));
    }
    let (w1_dpb, w1_bdpp) = s.w1_split;
    if w1_dpb ^ w1_bdpp != ctx.w1_da[s.b - 1] {
        return Err(Error::Inconsistent("w1 split does not add up to w1(d_b)".into()));
    }
    let b = BubbleContext {
        n: ctx.n,
        mu_dpp: mu_pp,
        w1_bdpp,
        w1_dpb,
        k_b,
        k_prime: k_b - k_dprime,
        k_dprime,
        l_dprime: s.l_dprime(),
        w2_psi_dpp: 0,
        z1_bubbles: s.z1_bubbles(),
        model: ctx.model,
    };
    b.validate()?;
    match stratum_dimension_restriction(ctx.n, mu_pp, k_dprime, b.l_dprime)? {
        Some(r) if r == s.r => Ok(b),
        Some(r) => Err(Error::Inconsistent(format!("restriction slack {r}, descriptor says {}", s.r))),
        None => Err(Error::Inconsistent(format!(
            "stratum (k''={k_dprime}, l''={}, μ''={mu_pp}) violates the dimension restriction",
            b.l_dprime
        ))),
    }
}

/// Sign of the conjugation involution on a stratum; `1` means orientation
/// reversing.
pub fn stratum_sign(s: &StratumDescriptor, ctx: &SignContext) -> Result<Bit> {
    check_context(ctx)?;
    boundary_action_sign(&bubble_context(s, ctx)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Pairing {
    /// Index pairs `(d'', φ_* d'')`, ordered by first index.
    pub pairs: Vec<(usize, usize)>,
    /// Self-conjugate descriptors.
    pub fixed: Vec<usize>,
    /// Descriptors whose conjugate is missing from the list.
    pub unmatched: Vec<usize>,
}

/// Matches each descriptor with its conjugate.
pub fn involution_pairing(strata: &[StratumDescriptor]) -> Pairing {
    let mut open: HashMap<StratumDescriptor, Vec<usize>> = HashMap::new();
    let mut out = Pairing::default();
    for (i, s) in strata.iter().enumerate() {
        if s.self_conjugate {
            out.fixed.push(i);
            continue;
        }
        let slot = open.entry(s.pairing_key()).or_default();
        match slot.iter().position(|&j| strata[j].conjugated != s.conjugated) {
            Some(pos) => {
                let j = slot.swap_remove(pos);
                out.pairs.push((j, i));
            }
            None => slot.push(i),
        }
    }
    out.unmatched = open.into_values().flatten().collect();
    out.unmatched.sort_unstable();
    out.pairs.sort_unstable();
    out
}

/// Signed branches of a multisection vanishing at a point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultisectionPoint {
    pub branch_signs: Vec<i8>,
}

impl MultisectionPoint {
    pub fn multiplicity(&self) -> usize {
        self.branch_signs.len()
    }
}

/// Signed branch count divided by the multiplicity. At a fixed point of an
/// orientation-reversing involution the branches come in opposite pairs, so
/// the weight is zero.
pub fn multisection_total_weight(p: &MultisectionPoint, at_fixed_point: bool) -> Result<Rational> {
    let l = p.multiplicity();
    if l == 0 {
        return Err(Error::Precondition("multiplicity must be at least 1".into()));
    }
    if p.branch_signs.iter().any(|&s| s != 1 && s != -1) {
        return Err(Error::Precondition("branch signs must be ±1".into()));
    }
    let total: i64 = p.branch_signs.iter().map(|&s| s as i64).sum();
    if at_fixed_point && total != 0 {
        return Err(Error::Precondition(format!(
            "unpaired branches at a fixed point: {:?}",
            p.branch_signs
        )));
    }
    Ok(Rational::new(total.into(), (l as i64).into()))
}

/// Branches at a fixed point of an equivariant multisection: one branch and
/// its image, whose orientation differs by the involution's sign.
pub fn equivariant_branches(sign: Bit) -> MultisectionPoint {
    MultisectionPoint {
        branch_signs: vec![1, if sign == 1 { -1 } else { 1 }],
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumRow {
    pub b: usize,
    pub kind: StratumKind,
    pub k_dprime: u32,
    pub l_dprime: u32,
    pub mu_dprime: i64,
    pub r: i64,
    pub z1_bubbles: bool,
    pub conjugated: bool,
    pub multiplicity: u64,
    pub sign: Option<Bit>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingSummary {
    pub pairs: usize,
    pub fixed: usize,
    pub unmatched: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub schema: String,
    pub context: SignContext,
    pub mu_bound: i64,
    pub dim_balance: DimBalance,
    pub parity_hypothesis_holds: bool,
    pub tuples_checked: usize,
    pub strata: Vec<StratumRow>,
    pub pairing: PairingSummary,
    /// Strata on which conjugation preserves orientation.
    pub sign_failures: Vec<StratumRow>,
    /// Strata the certificate cannot dispose of.
    pub unhandled: Vec<StratumRow>,
    pub multiply_covered_risk: usize,
    /// Signed count of the boundary, `numerator/denominator` form.
    pub formal_total: String,
    pub certified: bool,
}

pub const CERTIFICATE_SCHEMA: &str = "realgw.strata-certificate/1";

/// Checks that the boundary of the cobordism cancels: every paired stratum
/// is orientation reversing and every fixed one has weight zero.
pub fn cancellation_certificate(ctx: &SignContext, mu_bound: i64) -> Result<CertificateReport> {
    let strata = enumerate_boundary_strata(ctx, mu_bound)?;
    let signs: Vec<Option<Bit>> = strata.iter().map(|s| stratum_sign(s, ctx).ok()).collect();
    let row = |i: usize| {
        let s = &strata[i];
        StratumRow {
            b: s.b,
            kind: s.kind,
            k_dprime: s.k_dprime(),
            l_dprime: s.l_dprime(),
            mu_dprime: s.mu_split.1,
            r: s.r,
            z1_bubbles: s.z1_bubbles(),
            conjugated: s.conjugated,
            multiplicity: s.multiplicity,
            sign: signs[i],
        }
    };
    let pairing = involution_pairing(&strata);
    let mut total = Rational::zero();
    let mut sign_failures = Vec::new();
    let mut unhandled = Vec::new();
    let weight = |i: usize| Rational::from_integer(strata[i].multiplicity.into());
    for &(i, j) in &pairing.pairs {
        match signs[i] {
            Some(s) => {
                // The conjugate copy carries orientation (-1)^s relative to i.
                total += weight(i);
                if s == 1 {
                    total -= weight(j);
                } else {
                    total += weight(j);
                    sign_failures.push(row(i));
                    sign_failures.push(row(j));
                }
            }
            None => {
                unhandled.push(row(i));
                unhandled.push(row(j));
            }
        }
    }
    for &i in &pairing.fixed {
        match signs[i].map(|s| multisection_total_weight(&equivariant_branches(s), true)) {
            Some(Ok(w)) => total += w * weight(i),
            Some(Err(_)) => {
                total += weight(i);
                sign_failures.push(row(i));
            }
            None => unhandled.push(row(i)),
        }
    }
    for &i in &pairing.unmatched {
        total += weight(i);
        unhandled.push(row(i));
    }
    let certified = sign_failures.is_empty() && unhandled.is_empty() && total.is_zero();
    let multiply_covered_risk = strata.iter().filter(|s| s.multiply_covered_risk).count();
    Ok(CertificateReport {
        schema: CERTIFICATE_SCHEMA.into(),
        context: ctx.clone(),
        mu_bound,
        dim_balance: expected_dim_balance(ctx),
        parity_hypothesis_holds: ctx.parity_hypothesis_holds(),
        tuples_checked: strata.len(),
        strata: (0..strata.len()).map(row).collect(),
        pairing: PairingSummary {
            pairs: pairing.pairs.len(),
            fixed: pairing.fixed.len(),
            unmatched: pairing.unmatched.len(),
        },
        sign_failures,
        unhandled,
        multiply_covered_risk,
        formal_total: total.to_string(),
        certified,
    })
}

/// Total as an integer, for callers that want a number rather than a string.
pub fn formal_total_value(report: &CertificateReport) -> Option<i64> {
    report.formal_total.parse::<Rational>().ok()?.to_integer().to_i64()
}
