//! Maslov index of loops of totally real subspaces of `C^n`.
//!
//! A loop is given by frames `F(t_0), .., F(t_{N-1})` whose columns span the
//! subspace at each sample; the first and last samples span the same
//! subspace. The index is the winding number of `det(F)^2 / |det(F)|^2`,
//! accumulated from principal-branch phase increments. A real change of frame
//! multiplies `det^2` by a positive number, so the winding depends only on
//! the subspaces.

use std::f64::consts::{FRAC_PI_2, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::{bit, Bit, Error, Rational, Result};

/// Determinant below which a frame is treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;
/// Maximum number of bisection levels between two samples.
pub const MAX_REFINEMENT_LEVELS: u32 = 12;
/// Imaginary-part tolerance for the closure witness.
pub const CLOSURE_TOL: f64 = 1e-7;

/// `n` column vectors in `C^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame(DMatrix<Complex64>);

impl Frame {
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::Dimension(format!(
                "frame must be n x n with n >= 1, got {} x {}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(Self(m))
    }

    /// Builds a frame from its columns.
    pub fn from_columns(columns: &[Vec<Complex64>]) -> Result<Self> {
        let n = columns.len();
        if columns.iter().any(|c| c.len() != n) {
            return Err(Error::Dimension(format!(
                "expected {n} columns of length {n}"
            )));
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| columns[j][i]))
    }

    /// The real subspace `R^n ⊂ C^n`.
    pub fn real_standard(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    /// Exact fixture frame with Gaussian-rational entries `(re, im)`, row-major.
    pub fn from_gaussian_rationals(rows: &[Vec<(Rational, Rational)>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("Gaussian-rational frame must be square".into()));
        }
        let to_f = |q: &Rational| -> f64 {
            use num_traits::ToPrimitive;
            q.to_f64().unwrap_or(f64::NAN)
        };
        Self::new(DMatrix::from_fn(n, n, |i, j| {
            Complex64::new(to_f(&rows[i][j].0), to_f(&rows[i][j].1))
        }))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn determinant(&self) -> Complex64 {
        self.0.clone().determinant()
    }

    pub fn conjugate(&self) -> Self {
        Self(self.0.map(|z| z.conj()))
    }

    /// Right multiplication by a real matrix, i.e. a change of basis of the
    /// same subspace.
    pub fn regauge(&self, g: &DMatrix<f64>) -> Result<Self> {
        if g.nrows() != self.dim() || g.ncols() != self.dim() {
            return Err(Error::Dimension("gauge matrix size".into()));
        }
        Ok(Self(&self.0 * g.map(|x| Complex64::new(x, 0.0))))
    }

    fn lerp(&self, other: &Self, s: f64) -> Self {
        Self(self.0.scale(1.0 - s) + other.0.scale(s))
    }

    fn block_sum(&self, other: &Self) -> Self {
        let (a, b) = (self.dim(), other.dim());
        let mut m = DMatrix::zeros(a + b, a + b);
        m.view_mut((0, 0), (a, a)).copy_from(&self.0);
        m.view_mut((a, a), (b, b)).copy_from(&other.0);
        Self(m)
    }
}

/// True iff `|det_C(frame)| > tol`, which for `n` vectors in `C^n` is
/// equivalent to their real span `V` satisfying `V ∩ iV = 0`.
pub fn is_totally_real(frame: &Frame, tol: f64) -> bool {
    frame.determinant().norm() > tol
}

/// Exact version of [`is_totally_real`] with zero tolerance, for fixtures.
pub fn is_totally_real_exact(rows: &[Vec<(Rational, Rational)>]) -> Result<bool> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) || n == 0 {
        return Err(Error::Dimension("Gaussian-rational frame must be square".into()));
    }
    let mut m: Vec<Vec<Gauss>> = rows
        .iter()
        .map(|r| r.iter().map(|(a, b)| Gauss(a.clone(), b.clone())).collect())
        .collect();
    // Fraction-free enough for fixture sizes: plain elimination over Q(i).
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Ok(false);
        };
        m.swap(col, p);
        let inv = m[col][col].inverse();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].mul(&inv);
            for c in col..n {
                let t = f.mul(&m[col][c]);
                m[r][c] = m[r][c].sub(&t);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug)]
struct Gauss(Rational, Rational);

impl Gauss {
    fn is_zero(&self) -> bool {
        self.0.is_zero() && self.1.is_zero()
    }
    fn mul(&self, o: &Gauss) -> Gauss {
        Gauss(
            &self.0 * &o.0 - &self.1 * &o.1,
            &self.0 * &o.1 + &self.1 * &o.0,
        )
    }
    fn sub(&self, o: &Gauss) -> Gauss {
        Gauss(&self.0 - &o.0, &self.1 - &o.1)
    }
    fn inverse(&self) -> Gauss {
        let d = &self.0 * &self.0 + &self.1 * &self.1;
        debug_assert!(!d.is_zero());
        Gauss(&self.0 / &d, -(&self.1 / &d))
    }
}

/// Sampled closed loop of totally real subspaces.
#[derive(Debug, Clone, PartialEq)]
pub struct TotallyRealLoop {
    samples: Vec<Frame>,
    closure: DMatrix<f64>,
}

impl TotallyRealLoop {
    /// Validates the samples and computes the closure witness `g` with
    /// `F(t_0) g = F(t_{N-1})`.
    pub fn new(samples: Vec<Frame>) -> Result<Self> {
        let first = samples
            .first()
            .ok_or_else(|| Error::Precondition("loop needs at least one sample".into()))?;
        let n = first.dim();
        for (i, f) in samples.iter().enumerate() {
            if f.dim() != n {
                return Err(Error::Dimension(format!(
                    "sample {i} has dimension {}, expected {n}",
                    f.dim()
                )));
            }
            let det = f.determinant().norm();
            if det <= DEGENERACY_TOL {
                return Err(Error::DegenerateFrame {
                    det,
                    tol: DEGENERACY_TOL,
                });
            }
        }
        let last = samples.last().expect("nonempty");
        let inv = first
            .0
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::DegenerateFrame {
                det: 0.0,
                tol: DEGENERACY_TOL,
            })?;
        let g = inv * &last.0;
        let scale = g.iter().map(|z| z.norm()).fold(1.0, f64::max);
        if g.iter().any(|z| z.im.abs() > CLOSURE_TOL * scale) {
            return Err(Error::NotClosed(
                "first and last samples span different subspaces".into(),
            ));
        }
        Ok(Self {
            closure: g.map(|z| z.re),
            samples,
        })
    }

    /// Samples `frame_at(t)` at `count` evenly spaced `t` in `[0, 2π]`,
    /// endpoints included.
    pub fn sample(count: usize, frame_at: impl Fn(f64) -> Frame) -> Result<Self> {
        if count < 2 {
            return Err(Error::Precondition("need at least two samples".into()));
        }
        let samples = (0..count)
            .map(|j| frame_at(TAU * j as f64 / (count - 1) as f64))
            .collect();
        Self::new(samples)
    }

    /// Constant loop at `R^n`.
    pub fn constant_real(n: usize, count: usize) -> Self {
        Self::new(vec![Frame::real_standard(n); count.max(2)]).expect("constant loop is valid")
    }

    /// `n = 1` loop `θ ↦ e^{i k θ / 2} R`, with Maslov index `k`.
    pub fn half_twist(k: i64, count: usize) -> Result<Self> {
        Self::sample(count, |t| {
            let z = Complex64::from_polar(1.0, k as f64 * t / 2.0);
            Frame(DMatrix::from_element(1, 1, z))
        })
    }

    pub fn dim(&self) -> usize {
        self.samples[0].dim()
    }

    pub fn samples(&self) -> &[Frame] {
        &self.samples
    }

    pub fn closure(&self) -> &DMatrix<f64> {
        &self.closure
    }

    /// Linear frame interpolation to `count` samples over the same parameter.
    pub fn resample(&self, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::Precondition("need at least two samples".into()));
        }
        let last = self.samples.len() - 1;
        if last == 0 {
            return Self::new(vec![self.samples[0].clone(); count]);
        }
        let frames = (0..count)
            .map(|j| {
                let x = j as f64 * last as f64 / (count - 1) as f64;
                let i = (x.floor() as usize).min(last - 1);
                self.samples[i].lerp(&self.samples[i + 1], x - i as f64)
            })
            .collect();
        Self::new(frames)
    }
}

fn det_squared_phase(f: &Frame) -> Result<Complex64> {
    let d = f.determinant();
    let norm = d.norm();
    if norm <= DEGENERACY_TOL {
        return Err(Error::DegenerateFrame {
            det: norm,
            tol: DEGENERACY_TOL,
        });
    }
    Ok((d * d) / (norm * norm))
}

fn phase_step(a: Complex64, b: Complex64) -> f64 {
    (b * a.conj()).arg()
}

/// Phase accumulated between two samples, bisecting while a step is too large.
fn accumulate_segment(a: &Frame, b: &Frame, index: usize, level: u32) -> Result<f64> {
    let step = phase_step(det_squared_phase(a)?, det_squared_phase(b)?);
    if step.abs() < FRAC_PI_2 {
        return Ok(step);
    }
    if level >= MAX_REFINEMENT_LEVELS {
        return Err(Error::Undersampled {
            index,
            next: index + 1,
            step: step.abs(),
            levels: level,
        });
    }
    let mid = a.lerp(b, 0.5);
    Ok(accumulate_segment(a, &mid, index, level + 1)?
        + accumulate_segment(&mid, b, index, level + 1)?)
}

/// Total phase of `det^2` around the loop, in radians.
pub fn total_phase(l: &TotallyRealLoop) -> Result<f64> {
    l.samples
        .windows(2)
        .enumerate()
        .map(|(i, w)| accumulate_segment(&w[0], &w[1], i, 0))
        .sum()
}

/// Maslov index: winding number of the squared determinant phase.
pub fn maslov_index(l: &TotallyRealLoop) -> Result<i64> {
    let phase = total_phase(l)?;
    let winding = phase / TAU;
    let k = winding.round();
    // Every step is under π/2, so an accumulated total off an integer
    // multiple of 2π means the closure witness lied.
    if (winding - k).abs() > 1e-6 {
        return Err(Error::NotClosed(format!(
            "accumulated phase {phase} is not a multiple of 2π"
        )));
    }
    Ok(k as i64)
}

/// First Stiefel-Whitney class of the boundary loop: `μ mod 2`.
pub fn loop_w1(l: &TotallyRealLoop) -> Result<Bit> {
    Ok(bit(maslov_index(l)?))
}

/// Blockwise sum `a ⊕ b` in `C^{n_a + n_b}`; resamples the shorter loop.
pub fn direct_sum(a: &TotallyRealLoop, b: &TotallyRealLoop) -> Result<TotallyRealLoop> {
    let count = a.samples.len().max(b.samples.len());
    let a = if a.samples.len() == count {
        a.clone()
    } else {
        a.resample(count)?
    };
    let b = if b.samples.len() == count {
        b.clone()
    } else {
        b.resample(count)?
    };
    TotallyRealLoop::new(
        a.samples
            .iter()
            .zip(&b.samples)
            .map(|(x, y)| x.block_sum(y))
            .collect(),
    )
}

/// Entrywise complex conjugate loop.
pub fn conjugate_loop(a: &TotallyRealLoop) -> TotallyRealLoop {
    TotallyRealLoop {
        samples: a.samples.iter().map(Frame::conjugate).collect(),
        closure: a.closure.clone(),
    }
}

/// Rank, total Maslov index and per-boundary-component `w1` of a bundle pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundlePairDescriptor {
    pub rank: usize,
    pub mu: i64,
    pub w1: Vec<Bit>,
}

impl BundlePairDescriptor {
    /// Checks `Σ w1 ≡ μ (mod 2)`.
    pub fn is_consistent(&self) -> bool {
        let s: i64 = self.w1.iter().map(|&b| b as i64).sum();
        bit(s) == bit(self.mu)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsomorphismVerdict {
    pub isomorphic: bool,
    pub diagnostic: Option<String>,
}

/// Bundle pairs over the same surface are isomorphic iff their total Maslov
/// indices agree and `w1` agrees on every boundary component.
pub fn pairs_isomorphic(a: &BundlePairDescriptor, b: &BundlePairDescriptor) -> IsomorphismVerdict {
    let not = |msg: String| IsomorphismVerdict {
        isomorphic: false,
        diagnostic: Some(msg),
    };
    if a.rank != b.rank {
        return not(format!("rank {} vs {}", a.rank, b.rank));
    }
    if a.w1.len() != b.w1.len() {
        return not(format!(
            "{} vs {} boundary components",
            a.w1.len(),
            b.w1.len()
        ));
    }
    if a.mu != b.mu {
        return not(format!("Maslov index {} vs {}", a.mu, b.mu));
    }
    if let Some(i) = (0..a.w1.len()).find(|&i| a.w1[i] != b.w1[i]) {
        return not(format!("w1 differs on boundary component {}", i + 1));
    }
    IsomorphismVerdict {
        isomorphic: true,
        diagnostic: None,
    }
}

/// On-disk loop document: `n` plus row-major `n x n` matrices of `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopDocument {
    pub n: usize,
    pub samples: Vec<Vec<Vec<[f64; 2]>>>,
}

impl LoopDocument {
    pub fn from_loop(l: &TotallyRealLoop) -> Self {
        let n = l.dim();
        Self {
            n,
            samples: l
                .samples
                .iter()
                .map(|f| {
                    (0..n)
                        .map(|i| (0..n).map(|j| [f.0[(i, j)].re, f.0[(i, j)].im]).collect())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn to_loop(&self) -> Result<TotallyRealLoop> {
        let n = self.n;
        let frames = self
            .samples
            .iter()
            .enumerate()
            .map(|(k, m)| {
                if m.len() != n || m.iter().any(|row| row.len() != n) {
                    return Err(Error::Dimension(format!("sample {k} is not {n} x {n}")));
                }
                Frame::new(DMatrix::from_fn(n, n, |i, j| {
                    Complex64::new(m[i][j][0], m[i][j][1])
                }))
            })
            .collect::<Result<Vec<_>>>()?;
        TotallyRealLoop::new(frames)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn totally_real_examples() {
        assert!(is_totally_real(&Frame::real_standard(3), DEGENERACY_TOL));
        let bad = Frame::from_columns(&[vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 1.0), c(0.0, 0.0)]])
            .unwrap();
        assert!(!is_totally_real(&bad, DEGENERACY_TOL));
        let line = Frame::from_columns(&[vec![Complex64::from_polar(1.0, PI / 4.0)]]).unwrap();
        assert!(is_totally_real(&line, DEGENERACY_TOL));
        assert!(Frame::from_columns(&[vec![c(1.0, 0.0)], vec![c(1.0, 0.0)]]).is_err());
    }

    #[test]
    fn exact_fixture_check() {
        let good = vec![
            vec![(q(1), q(0)), (q(0), q(1))],
            vec![(q(0), q(0)), (q(1), q(0))],
        ];
        assert!(is_totally_real_exact(&good).unwrap());
        let bad = vec![
            vec![(q(1), q(0)), (q(0), q(1))],
            vec![(q(0), q(0)), (q(0), q(0))],
        ];
        assert!(!is_totally_real_exact(&bad).unwrap());
        assert!(Frame::from_gaussian_rationals(&good).is_ok());
    }

    #[test]
    fn basic_indices() {
        assert_eq!(maslov_index(&TotallyRealLoop::constant_real(3, 8)).unwrap(), 0);
        let up = TotallyRealLoop::half_twist(1, 64).unwrap();
        let down = TotallyRealLoop::half_twist(-1, 64).unwrap();
        assert_eq!(maslov_index(&up).unwrap(), 1);
        assert_eq!(maslov_index(&down).unwrap(), -1);
        assert_eq!(loop_w1(&up).unwrap(), 1);
        assert_eq!(loop_w1(&TotallyRealLoop::constant_real(2, 4)).unwrap(), 0);
        let both = direct_sum(&up, &up).unwrap();
        assert_eq!(loop_w1(&both).unwrap(), 0);
    }

    #[test]
    fn refinement_rescues_coarse_sampling() {
        // Four samples of e^{iθ}R: each det^2 step is 4π/3.
        let coarse = TotallyRealLoop::half_twist(2, 4).unwrap();
        assert_eq!(maslov_index(&coarse).unwrap(), 2);
        let coarse = TotallyRealLoop::half_twist(1, 3).unwrap();
        assert_eq!(maslov_index(&coarse).unwrap(), 1);
    }

    #[test]
    fn degenerate_bisection_is_reported() {
        // The chord from I to diag(-1, i) passes through diag(0, (1+i)/2).
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let diag = |a: Complex64, b: Complex64| {
            Frame::new(DMatrix::from_row_slice(2, 2, &[a, c(0.0, 0.0), c(0.0, 0.0), b])).unwrap()
        };
        let l = TotallyRealLoop::new(vec![
            diag(c(1.0, 0.0), c(1.0, 0.0)),
            diag(c(-1.0, 0.0), c(0.0, 1.0)),
            diag(c(-1.0, 0.0), c(-1.0, 0.0)),
        ])
        .unwrap();
        assert!(matches!(
            maslov_index(&l),
            Err(Error::DegenerateFrame { .. })
        ));
    }

    #[test]
    fn open_loop_rejected() {
        let frames = vec![
            Frame::real_standard(1),
            Frame::from_columns(&[vec![Complex64::from_polar(1.0, 0.3)]]).unwrap(),
        ];
        assert!(matches!(TotallyRealLoop::new(frames), Err(Error::NotClosed(_))));
    }

    #[test]
    fn direct_sum_with_constant() {
        let tau = TotallyRealLoop::half_twist(-1, 40).unwrap();
        let flat = TotallyRealLoop::constant_real(2, 7);
        let sum = direct_sum(&tau, &flat).unwrap();
        assert_eq!(sum.dim(), 3);
        assert_eq!(maslov_index(&sum).unwrap(), -1);
        let flat2 = direct_sum(&TotallyRealLoop::constant_real(1, 3), &TotallyRealLoop::constant_real(1, 3)).unwrap();
        assert_eq!(flat2, TotallyRealLoop::constant_real(2, 3));
    }

    #[test]
    fn conjugation() {
        let flat = TotallyRealLoop::constant_real(2, 5);
        assert_eq!(conjugate_loop(&flat), flat);
        let up = TotallyRealLoop::half_twist(1, 64).unwrap();
        assert_eq!(maslov_index(&conjugate_loop(&up)).unwrap(), -1);
        assert_eq!(conjugate_loop(&conjugate_loop(&up)), up);
    }

    #[test]
    fn isomorphism_classification() {
        let d = |mu, w1: Vec<Bit>| BundlePairDescriptor { rank: 2, mu, w1 };
        assert!(pairs_isomorphic(&d(-1, vec![1]), &d(-1, vec![1])).isomorphic);
        assert!(!pairs_isomorphic(&d(-1, vec![1]), &d(1, vec![1])).isomorphic);
        assert!(!pairs_isomorphic(&d(0, vec![0]), &d(2, vec![0])).isomorphic);
        let other_rank = BundlePairDescriptor { rank: 3, mu: -1, w1: vec![1] };
        let v = pairs_isomorphic(&d(-1, vec![1]), &other_rank);
        assert!(!v.isomorphic);
        assert!(v.diagnostic.unwrap().contains("rank"));
        assert!(d(-1, vec![1]).is_consistent());
        assert!(!d(0, vec![1]).is_consistent());
    }

    #[test]
    fn loop_document_round_trip() {
        let l = TotallyRealLoop::half_twist(3, 33).unwrap();
        let doc = LoopDocument::from_loop(&l);
        assert_eq!(doc.to_loop().unwrap(), l);
        let bad = LoopDocument {
            n: 2,
            samples: vec![vec![vec![[1.0, 0.0]]]],
        };
        assert!(bad.to_loop().is_err());
    }

    #[test]
    fn gaussian_zero_is_zero() {
        assert!(Gauss(q(0), q(0)).is_zero());
        assert!(!Gauss(Rational::zero(), q(1)).is_zero());
    }
}
