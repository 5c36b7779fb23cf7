//! Mod-2 sign formulas.
//!
//! Every function here consumes integer and mod-2 topological data only:
//! Maslov indices, `w1` bits on boundary components, marked-point counts and
//! the caller-evaluated pairing `w2(V)(ψ(d))`. Terms of the form
//! `x(x ± 1)/2` are divided before reducing mod 2.

use serde::{Deserialize, Serialize};

use crate::clifford::PinModel;
use crate::{bit, half_product_bit, par, Bit, Error, Result};

fn pm_shift(model: PinModel) -> i64 {
    match model {
        PinModel::PinPlus => 1,
        PinModel::PinMinus => -1,
    }
}

/// Topological data of a bordered surface class `d` with marked points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignContext {
    /// `dim L`
    pub n: i64,
    /// genus of `Σ/∂Σ`
    pub g0: i64,
    /// number of boundary components
    pub m: usize,
    pub mu_d: i64,
    pub w1_da: Vec<Bit>,
    pub k_a: Vec<u32>,
    pub l: u32,
    #[serde(default)]
    pub w2_psi_d: Bit,
    pub model: PinModel,
    /// User assertion that `d` is not in the image of `π_2(X)`; never computed.
    #[serde(default)]
    pub aod: bool,
}

impl SignContext {
    /// Disk context with one boundary component; `w1` is taken as `μ mod 2`.
    pub fn disk(n: i64, mu_d: i64, k: u32, l: u32, model: PinModel) -> Self {
        Self {
            n,
            g0: 0,
            m: 1,
            mu_d,
            w1_da: vec![bit(mu_d)],
            k_a: vec![k],
            l,
            w2_psi_d: 0,
            model,
            aod: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::Inconsistent(format!("n = {} < 1", self.n)));
        }
        if self.g0 < 0 {
            return Err(Error::Inconsistent(format!("g0 = {} < 0", self.g0)));
        }
        if self.m < 1 {
            return Err(Error::Inconsistent("m must be at least 1".into()));
        }
        if self.w1_da.len() != self.m || self.k_a.len() != self.m {
            return Err(Error::Inconsistent(format!(
                "m = {} but {} w1 bits and {} k_a entries",
                self.m,
                self.w1_da.len(),
                self.k_a.len()
            )));
        }
        if self.w1_da.iter().chain([&self.w2_psi_d]).any(|&b| b > 1) {
            return Err(Error::Inconsistent("bits must be 0 or 1".into()));
        }
        Ok(())
    }

    pub fn total_k(&self) -> i64 {
        self.k_a.iter().map(|&k| k as i64).sum()
    }

    /// `w1(∂d) = Σ_a w1(d_a)`.
    pub fn w1_boundary(&self) -> Bit {
        bit(self.w1_da.iter().map(|&b| b as i64).sum())
    }

    /// Genus of the doubled surface, `2 g0 + m - 1`.
    pub fn doubled_genus(&self) -> i64 {
        2 * self.g0 + self.m as i64 - 1
    }

    /// `k_a ≡ w1(d_a) + 1 (mod 2)` on every boundary component.
    pub fn parity_hypothesis_holds(&self) -> bool {
        self.k_a
            .iter()
            .zip(&self.w1_da)
            .all(|(&k, &w)| bit(k as i64) == bit(w as i64 + 1))
    }

    /// `Σ_a w1(d_a) ≡ μ(d) (mod 2)`.
    pub fn maslov_parity_consistent(&self) -> bool {
        self.w1_boundary() == bit(self.mu_d)
    }
}

/// Data of a disk bubble `d''` splitting off boundary component `b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BubbleContext {
    pub n: i64,
    pub mu_dpp: i64,
    /// `w1(∂d'')`
    pub w1_bdpp: Bit,
    /// `w1(d'_b)`
    pub w1_dpb: Bit,
    pub k_b: u32,
    pub k_prime: u32,
    pub k_dprime: u32,
    pub l_dprime: u32,
    #[serde(default)]
    pub w2_psi_dpp: Bit,
    /// Whether `1 ∈ σ`.
    pub z1_bubbles: bool,
    pub model: PinModel,
}

impl BubbleContext {
    pub fn validate(&self) -> Result<()> {
        if self.k_prime + self.k_dprime != self.k_b {
            return Err(Error::Inconsistent(format!(
                "k' + k'' = {} + {} != k_b = {}",
                self.k_prime, self.k_dprime, self.k_b
            )));
        }
        if [self.w1_bdpp, self.w1_dpb, self.w2_psi_dpp].iter().any(|&b| b > 1) {
            return Err(Error::Inconsistent("bits must be 0 or 1".into()));
        }
        if self.w1_bdpp != bit(self.mu_dpp) {
            return Err(Error::Inconsistent(format!(
                "w1(∂d'') = {} but μ(d'') = {}",
                self.w1_bdpp, self.mu_dpp
            )));
        }
        Ok(())
    }

    /// `w1(d_b) = w1(d'_b) + w1(∂d'')`.
    pub fn w1_db(&self) -> Bit {
        self.w1_dpb ^ self.w1_bdpp
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimBalance {
    pub lhs: i64,
    pub rhs: i64,
    pub admissible: bool,
}

/// Dimension of the automorphism group of a bordered surface.
pub fn aut_dimension(g0: i64, m: usize) -> i64 {
    match (g0, m) {
        (0, 1) => 3,
        (0, 2) => 1,
        _ => 0,
    }
}

/// `(n-1)(|k| + 2l)` against `n(1-g) + μ(d) - dim Aut(Σ)`. When the two sides
/// differ the integral defining the count vanishes.
pub fn expected_dim_balance(ctx: &SignContext) -> DimBalance {
    let lhs = (ctx.n - 1) * (ctx.total_k() + 2 * ctx.l as i64);
    let rhs = ctx.n * (1 - ctx.doubled_genus()) + ctx.mu_d - aut_dimension(ctx.g0, ctx.m);
    DimBalance {
        lhs,
        rhs,
        admissible: lhs == rhs,
    }
}

fn pairwise_products(w1: &[Bit]) -> i64 {
    let ones = w1.iter().filter(|&&b| b == 1).count() as i64;
    ones * (ones - 1) / 2
}

/// Sign of conjugation `T: det(D) → det(D̄)` relative to the canonical
/// orientation.
pub fn sign_t(mu: i64, n: i64, g0: i64, m: usize, w1: &[Bit], model: PinModel) -> Bit {
    let m = m as i64;
    let mut s = half_product_bit(mu, 1) as i64 + (1 - g0) * n + m * n + pairwise_products(w1);
    if model == PinModel::PinMinus {
        s += w1.iter().map(|&b| b as i64).sum::<i64>();
    }
    bit(s)
}

/// Disk reduction of [`sign_t`]: `μ(μ ± 1)/2`.
pub fn disk_sign_t(mu: i64, model: PinModel) -> Bit {
    half_product_bit(mu, pm_shift(model))
}

/// Sign of the involution `φ'_L` on the twisted determinant line over the
/// moduli of maps in class `d` with `k` boundary and `l` interior points.
pub fn sign_phi_l(ctx: &SignContext) -> Bit {
    let n = ctx.n;
    let mut s = half_product_bit(ctx.mu_d, 1) as i64
        + (1 - ctx.g0) * n
        + ctx.m as i64 * n
        + ctx.total_k()
        + ctx.l as i64
        + ctx.w2_psi_d as i64
        + pairwise_products(&ctx.w1_da);
    for (&w, &k) in ctx.w1_da.iter().zip(&ctx.k_a) {
        let k = k as i64;
        s += w as i64 * (k - 1);
        s += (n + 1) * ((k - 1) * (k - 2) / 2);
    }
    if ctx.model == PinModel::PinMinus {
        s += ctx.w1_boundary() as i64;
    }
    bit(s)
}

/// `Υ'(d'', k'') = μ(d'') k'' mod 2`.
pub fn upsilon_prime(mu_dpp: i64, k_dprime: u32) -> Bit {
    bit(mu_dpp * k_dprime as i64)
}

/// Case table in `(w1(d'_b), w1(∂d''))`.
pub fn upsilon_double_prime(w1_dpb: Bit, w1_bdpp: Bit, k_prime: u32, k_dprime: u32) -> Bit {
    let (kp, kpp) = (k_prime as i64, k_dprime as i64);
    match (w1_dpb & 1, w1_bdpp & 1) {
        (0, 0) => 0,
        (1, 1) => bit(kp),
        (1, 0) => bit(kpp - 1),
        _ => bit(kpp + kp - 1),
    }
}

/// Sign of `φ'_{L#}` when `z_1` stays on the main component.
pub fn sign_boundary_no_z1(b: &BubbleContext) -> Result<Bit> {
    if b.z1_bubbles {
        return Err(Error::Precondition("z1 bubbles off; use sign_boundary_with_z1".into()));
    }
    let kpp = b.k_dprime as i64;
    let s = half_product_bit(b.mu_dpp, pm_shift(b.model)) as i64
        + b.w2_psi_dpp as i64
        + kpp
        + 1
        + b.l_dprime as i64
        + upsilon_prime(b.mu_dpp, b.k_dprime) as i64
        + (b.n + 1) * (kpp * (kpp - 1) / 2);
    Ok(bit(s))
}

/// Sign of `φ'_{L#}` when `z_1` lies on the bubble.
pub fn sign_boundary_with_z1(b: &BubbleContext) -> Result<Bit> {
    if !b.z1_bubbles {
        return Err(Error::Precondition("z1 stays on the main component; use sign_boundary_no_z1".into()));
    }
    let kpp = b.k_dprime as i64;
    let kb = b.k_b as i64;
    let s = half_product_bit(b.mu_dpp, pm_shift(b.model)) as i64
        + b.w2_psi_dpp as i64
        + kpp
        + 1
        + b.l_dprime as i64
        + upsilon_double_prime(b.w1_dpb, b.w1_bdpp, b.k_prime, b.k_dprime) as i64
        + (b.w1_dpb & b.w1_bdpp) as i64
        + (b.n + 1) * ((kpp - 1) * (kpp - 2) / 2 + kb * kpp + kb);
    Ok(bit(s))
}

/// Reduction for orientable `L` of odd dimension: `μ''/2 + w2 + k'' + 1 + l''`.
pub fn sign_orientable_odd(b: &BubbleContext) -> Result<Bit> {
    if b.n.rem_euclid(2) != 1 {
        return Err(Error::Precondition(format!("n = {} is not odd", b.n)));
    }
    if b.mu_dpp.rem_euclid(2) != 0 {
        return Err(Error::Parity(format!(
            "μ(d'') = {} is odd but L is orientable",
            b.mu_dpp
        )));
    }
    Ok(bit(
        b.mu_dpp / 2 + b.w2_psi_dpp as i64 + b.k_dprime as i64 + 1 + b.l_dprime as i64,
    ))
}

/// Sign of `φ'_{L#}`, dispatching on whether `z_1` bubbles.
pub fn sign_boundary(b: &BubbleContext) -> Result<Bit> {
    if b.z1_bubbles {
        sign_boundary_with_z1(b)
    } else {
        sign_boundary_no_z1(b)
    }
}

/// Sign of the involution on a boundary stratum of the cobordism.
///
/// The stratum is a fiber product with `[0,1] × {0,1}^l` over `X^l`, and `φ`
/// acts on `l''` of the `X` factors. Since `φ*ω^n = (-1)^n ω^n`, each such
/// factor contributes `n` to the sign of `φ'_{L#}`.
pub fn boundary_action_sign(b: &BubbleContext) -> Result<Bit> {
    Ok(sign_boundary(b)? ^ bit(b.n * b.l_dprime as i64))
}

/// Slack `r` in the virtual dimension condition for a boundary stratum, or
/// `None` when the stratum is empty.
///
/// * `n = 2`: `μ'' + r = k'' + 2 l''` with `r ∈ {0, -1}`.
/// * `n = 3`: `μ'' = 2 k'' + 4 l''`, reported as `r = 0`.
pub fn stratum_dimension_restriction(n: i64, mu_dpp: i64, k_dprime: u32, l_dprime: u32) -> Result<Option<i64>> {
    let (k, l) = (k_dprime as i64, l_dprime as i64);
    match n {
        2 => {
            let r = k + 2 * l - mu_dpp;
            Ok((r == 0 || r == -1).then_some(r))
        }
        3 => Ok((mu_dpp == 2 * k + 4 * l).then_some(0)),
        other => Err(Error::UnsupportedDimension(other)),
    }
}

/// [`stratum_dimension_restriction`] on a bubble context.
pub fn bubble_restriction(b: &BubbleContext) -> Result<Option<i64>> {
    stratum_dimension_restriction(b.n, b.mu_dpp, b.k_dprime, b.l_dprime)
}

/// How `w1(d_b)` is tied to `k_b` in the sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityHypothesis {
    /// `w1(d_b) ≡ k_b + 1`
    Enforced,
    /// `w1(d_b) ≡ k_b`, to show the identity depends on the hypothesis.
    Broken,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepBounds {
    pub n: i64,
    /// Upper bound `B` for `μ''`, `k'` and `k''`; `l''` runs to `B / 2`.
    pub bound: u32,
    /// Lower bound for `μ''`.
    pub mu_min: i64,
    pub hypothesis: ParityHypothesis,
}

impl SweepBounds {
    pub fn new(n: i64, bound: u32) -> Self {
        Self {
            n,
            bound,
            mu_min: -4,
            hypothesis: ParityHypothesis::Enforced,
        }
    }

    pub fn with_hypothesis(mut self, hypothesis: ParityHypothesis) -> Self {
        self.hypothesis = hypothesis;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CancellationReport {
    pub n: i64,
    pub bound: u32,
    pub hypothesis: ParityHypothesis,
    /// Grid tuples examined, admissible or not, counted once per `z_1` branch.
    pub tuples_checked: u64,
    /// Tuples passing the dimension restriction; each has its sign evaluated.
    pub admissible: u64,
    pub admissible_no_z1: u64,
    pub admissible_with_z1: u64,
    pub failures: Vec<BubbleContext>,
    pub notes: Vec<String>,
}

impl CancellationReport {
    pub fn verified(&self) -> bool {
        self.failures.is_empty()
    }
}

struct CellOutcome {
    checked: u64,
    admissible: [u64; 2],
    failures: Vec<BubbleContext>,
}

fn sweep_cell(bounds: &SweepBounds, mu_dpp: i64, k_dprime: u32) -> Result<CellOutcome> {
    let b = bounds.bound;
    let mut out = CellOutcome {
        checked: 0,
        admissible: [0; 2],
        failures: Vec::new(),
    };
    for k_prime in 0..=b {
        for l_dprime in 0..=b / 2 {
            for z1_bubbles in [false, true] {
                out.checked += 1;
                // 1 ∈ σ needs a marked point on the bubble; 1 ∉ σ with
                // k_b > 0 keeps z_1 on the main component.
                if (z1_bubbles && k_dprime == 0) || (!z1_bubbles && k_prime == 0 && k_dprime > 0) {
                    continue;
                }
                let k_b = k_prime + k_dprime;
                let w1_bdpp = bit(mu_dpp);
                let (w1_dpb, model) = if bounds.n == 2 {
                    let w1_db = match bounds.hypothesis {
                        ParityHypothesis::Enforced => bit(k_b as i64 + 1),
                        ParityHypothesis::Broken => bit(k_b as i64),
                    };
                    (w1_db ^ w1_bdpp, PinModel::PinMinus)
                } else {
                    (0, PinModel::PinMinus)
                };
                let ctx = BubbleContext {
                    n: bounds.n,
                    mu_dpp,
                    w1_bdpp,
                    w1_dpb,
                    k_b,
                    k_prime,
                    k_dprime,
                    l_dprime,
                    w2_psi_dpp: 0,
                    z1_bubbles,
                    model,
                };
                if bubble_restriction(&ctx)?.is_none() {
                    continue;
                }
                out.admissible[z1_bubbles as usize] += 1;
                let ok = if bounds.n == 3 {
                    let reduced = sign_orientable_odd(&ctx)?;
                    sign_boundary(&ctx)? == reduced && boundary_action_sign(&ctx)? == 1
                } else {
                    boundary_action_sign(&ctx)? == 1
                };
                if !ok {
                    out.failures.push(ctx);
                }
            }
        }
    }
    Ok(out)
}

fn sweep_grid(bounds: &SweepBounds) -> Result<Vec<(i64, u32)>> {
    if !(bounds.n == 2 || bounds.n == 3) {
        return Err(Error::UnsupportedDimension(bounds.n));
    }
    let mut cells = Vec::new();
    for mu in bounds.mu_min..=bounds.bound as i64 {
        if bounds.n == 3 && mu.rem_euclid(2) == 1 {
            // Orientable L: odd μ'' never occurs, nothing to examine.
            continue;
        }
        for k in 0..=bounds.bound {
            cells.push((mu, k));
        }
    }
    Ok(cells)
}

fn assemble(bounds: &SweepBounds, cells: Vec<Result<CellOutcome>>) -> Result<CancellationReport> {
    let mut report = CancellationReport {
        n: bounds.n,
        bound: bounds.bound,
        hypothesis: bounds.hypothesis,
        tuples_checked: 0,
        admissible: 0,
        admissible_no_z1: 0,
        admissible_with_z1: 0,
        failures: Vec::new(),
        notes: Vec::new(),
    };
    for cell in cells {
        let cell = cell?;
        report.tuples_checked += cell.checked;
        report.admissible_no_z1 += cell.admissible[0];
        report.admissible_with_z1 += cell.admissible[1];
        report.failures.extend(cell.failures);
    }
    report.admissible = report.admissible_no_z1 + report.admissible_with_z1;
    if bounds.n == 2 {
        report.notes.push("Pin- model, w2 = 0, w1(d'_b) = w1(d_b) + w1(∂d'')".into());
    } else {
        report.notes.push(
            "orientable L: all w1 = 0, w2 = 0; l'' sign from φ reversing X cancels the l'' term".into(),
        );
        if bounds.hypothesis == ParityHypothesis::Broken {
            report.notes.push("parity hypothesis has no w1 to act on when n = 3".into());
        }
    }
    report.notes.push(format!(
        "μ'' in [{}, {}], k', k'' in [0, {}], l'' in [0, {}]",
        bounds.mu_min,
        bounds.bound,
        bounds.bound,
        bounds.bound / 2
    ));
    Ok(report)
}

/// Exhaustive check that every admissible boundary stratum has sign 1.
///
/// Uses rayon over `(μ'', k'')` cells when the `parallel` feature is on.
pub fn verify_cancellation(bounds: &SweepBounds) -> Result<CancellationReport> {
    let cells = sweep_grid(bounds)?;
    let outcomes = par::map_collect(&cells, |&(mu, k)| sweep_cell(bounds, mu, k));
    assemble(bounds, outcomes)
}

/// Sequential twin of [`verify_cancellation`].
pub fn verify_cancellation_seq(bounds: &SweepBounds) -> Result<CancellationReport> {
    let cells = sweep_grid(bounds)?;
    let outcomes = cells.iter().map(|&(mu, k)| sweep_cell(bounds, mu, k)).collect();
    assemble(bounds, outcomes)
}
