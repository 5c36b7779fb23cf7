use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use realgw_core::maslov::{
    conjugate_loop, direct_sum, loop_w1, maslov_index, total_phase, Frame, LoopDocument, TotallyRealLoop,
};

/// `U(θ) diag(e^{i k_j θ / 2})` with `U(θ) = Q diag(e^{i s sin θ λ_j}) Qᵀ`;
/// `U` is contractible in the loop space, so the index is `Σ k_j`.
struct LoopSpec {
    q: DMatrix<f64>,
    lambda: Vec<f64>,
    s: f64,
    k: Vec<i64>,
}

impl LoopSpec {
    fn random(rng: &mut impl Rng, n: usize) -> Self {
        let m = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        Self {
            q: m.qr().q(),
            lambda: (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            s: rng.gen_range(0.0..2.0),
            k: (0..n).map(|_| rng.gen_range(-3..=3)).collect(),
        }
    }

    fn index(&self) -> i64 {
        self.k.iter().sum()
    }

    fn frame(&self, t: f64) -> Frame {
        let n = self.k.len();
        let c = |x: f64| Complex64::new(x, 0.0);
        let qc = self.q.map(c);
        let d = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::from_polar(1.0, self.s * t.sin() * self.lambda[i])
            } else {
                c(0.0)
            }
        });
        let twist = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::from_polar(1.0, self.k[i] as f64 * t / 2.0)
            } else {
                c(0.0)
            }
        });
        Frame::new(&qc * d * qc.transpose() * twist).unwrap()
    }

    fn sample(&self, count: usize) -> TotallyRealLoop {
        TotallyRealLoop::sample(count, |t| self.frame(t)).unwrap()
    }
}

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0001)
}

#[test]
fn half_twists_return_their_index() {
    for k in -5..=5 {
        for count in [16, 64, 257] {
            let l = TotallyRealLoop::half_twist(k, count).unwrap();
            assert_eq!(maslov_index(&l).unwrap(), k, "k={k} count={count}");
            assert_eq!(loop_w1(&l).unwrap() as i64, k.rem_euclid(2));
        }
    }
}

#[test]
fn random_loops_have_expected_index() {
    let mut rng = rng();
    for _ in 0..100 {
        let n = rng.gen_range(1..=3);
        let spec = LoopSpec::random(&mut rng, n);
        let l = spec.sample(200);
        assert_eq!(maslov_index(&l).unwrap(), spec.index());
        let phase = total_phase(&l).unwrap();
        assert!((phase - TAU * spec.index() as f64).abs() < 1e-6);
    }
}

/// Piecewise-linear path of real matrices `D + A(t)`, diagonally dominant so
/// it stays invertible with positive determinant.
fn random_gauge(rng: &mut impl Rng, n: usize, knots: usize) -> impl Fn(f64) -> DMatrix<f64> {
    let pts: Vec<DMatrix<f64>> = (0..=knots)
        .map(|_| {
            DMatrix::from_fn(n, n, |i, j| {
                let off = rng.gen_range(-1.0..1.0);
                if i == j {
                    n as f64 + 0.5 + rng.gen_range(0.0..2.0)
                } else {
                    off
                }
            })
        })
        .collect();
    move |t: f64| {
        let x = (t / TAU * knots as f64).clamp(0.0, knots as f64);
        let i = (x.floor() as usize).min(knots - 1);
        let s = x - i as f64;
        &pts[i] * (1.0 - s) + &pts[i + 1] * s
    }
}

#[test]
fn gauge_invariance() {
    let mut rng = rng();
    for _ in 0..100 {
        let n = rng.gen_range(1..=3);
        let spec = LoopSpec::random(&mut rng, n);
        let knots = rng.gen_range(1..=6);
        let g = random_gauge(&mut rng, n, knots);
        let base = spec.sample(240);
        let gauged = TotallyRealLoop::sample(240, |t| spec.frame(t).regauge(&g(t)).unwrap()).unwrap();
        assert_eq!(maslov_index(&gauged).unwrap(), maslov_index(&base).unwrap());
    }
}

#[test]
fn additivity_and_conjugation() {
    let mut rng = rng();
    for _ in 0..100 {
        let (na, nb) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let a = LoopSpec::random(&mut rng, na);
        let b = LoopSpec::random(&mut rng, nb);
        let la = a.sample(rng.gen_range(150..=260));
        let lb = b.sample(rng.gen_range(150..=260));
        let sum = direct_sum(&la, &lb).unwrap();
        assert_eq!(
            maslov_index(&sum).unwrap(),
            maslov_index(&la).unwrap() + maslov_index(&lb).unwrap()
        );
        assert_eq!(maslov_index(&conjugate_loop(&la)).unwrap(), -maslov_index(&la).unwrap());
        assert_eq!(maslov_index(&conjugate_loop(&sum)).unwrap(), -a.index() - b.index());
    }
}

#[test]
fn rank_one_w1_is_index_mod_two() {
    let mut rng = rng();
    for _ in 0..50 {
        let spec = LoopSpec::random(&mut rng, 1);
        let l = spec.sample(120);
        assert_eq!(loop_w1(&l).unwrap() as i64, spec.index().rem_euclid(2));
    }
}

#[test]
fn document_round_trip_preserves_index() {
    let mut rng = rng();
    let spec = LoopSpec::random(&mut rng, 3);
    let l = spec.sample(90);
    let doc = LoopDocument::from_loop(&l);
    let text = serde_json::to_string(&doc).unwrap();
    let back: LoopDocument = serde_json::from_str(&text).unwrap();
    assert_eq!(maslov_index(&back.to_loop().unwrap()).unwrap(), spec.index());
}
