use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use realgw_core::charclass::{
    chern_top_sym_dual_taut, oriented_g25_integrate_e3, sym_oriented_rank2, Partition2, RootBundle, SchurClass,
};
use realgw_core::Rational;

type Poly = BTreeMap<(u32, u32), BigInt>;

/// `s_{a,b}(x_1, x_2) = (x_1 x_2)^b h_{a-b}(x_1, x_2)`.
fn schur_poly(a: u32, b: u32) -> Poly {
    (0..=a - b).map(|i| ((b + i, a - i), BigInt::from(1))).collect()
}

fn poly_mul(p: &Poly, q: &Poly) -> Poly {
    let mut out = Poly::new();
    for (&(i, j), c) in p {
        for (&(k, l), d) in q {
            *out.entry((i + k, j + l)).or_default() += c * d;
        }
    }
    out.retain(|_, c| *c != BigInt::from(0));
    out
}

/// Schur expansion of a symmetric polynomial by peeling the leading monomial
/// `x_1^a x_2^b`, `a ≥ b`, in lex order.
fn decompose(mut p: Poly) -> BTreeMap<(u32, u32), BigInt> {
    let mut out = BTreeMap::new();
    while let Some((&(a, b), c)) = p.iter().next_back() {
        assert!(a >= b, "not symmetric: leading x1^{a} x2^{b}");
        let c = c.clone();
        for (m, d) in schur_poly(a, b) {
            *p.entry(m).or_default() -= &c * d;
        }
        p.retain(|_, c| *c != BigInt::from(0));
        out.insert((a, b), c);
    }
    out
}

fn oracle_product(n: usize, p: Partition2, q: Partition2) -> SchurClass {
    let prod = decompose(poly_mul(&schur_poly(p.a, p.b), &schur_poly(q.a, q.b)));
    prod.into_iter().fold(SchurClass::zero(n), |acc, ((a, b), c)| {
        acc.add(&SchurClass::sigma(n, a, b).scale(&Rational::from_integer(c))).unwrap()
    })
}

fn partitions_up_to(d: u32) -> Vec<Partition2> {
    let mut out = Vec::new();
    for a in 0..=d {
        for b in 0..=a {
            if a + b <= d {
                out.push(Partition2 { a, b });
            }
        }
    }
    out
}

fn int(k: i64) -> Rational {
    Rational::from_integer(k.into())
}

#[test]
fn products_agree_with_polynomial_oracle() {
    let parts = partitions_up_to(10);
    let mut checked = 0;
    for n in 3..=12 {
        for &p in &parts {
            for &q in &parts {
                if p.degree() + q.degree() > 10 {
                    continue;
                }
                let lhs = SchurClass::sigma(n, p.a, p.b).mul(&SchurClass::sigma(n, q.a, q.b)).unwrap();
                assert_eq!(lhs, oracle_product(n, p, q), "n={n} {p} * {q}");
                checked += 1;
            }
        }
    }
    assert!(checked > 1000);
}

#[test]
fn poincare_duality() {
    for n in 3..=8 {
        let box_parts = Partition2::box_partitions(n);
        for &p in &box_parts {
            for &q in &box_parts {
                if p.degree() + q.degree() != 2 * (n as u32 - 2) {
                    continue;
                }
                let v = SchurClass::sigma(n, p.a, p.b).mul(&SchurClass::sigma(n, q.a, q.b)).unwrap().integrate();
                let expected = if q == p.complement(n) { 1 } else { 0 };
                assert_eq!(v, int(expected), "n={n} {p} {q}");
            }
        }
    }
}

#[test]
fn ring_laws() {
    for n in 3..=7 {
        let basis: Vec<SchurClass> = Partition2::box_partitions(n)
            .into_iter()
            .map(|p| SchurClass::sigma(n, p.a, p.b))
            .collect();
        for x in &basis {
            assert_eq!(x.mul(&SchurClass::one(n)).unwrap(), *x);
            for y in &basis {
                assert_eq!(x.mul(y).unwrap(), y.mul(x).unwrap());
                for z in &basis {
                    assert_eq!(x.mul(y).unwrap().mul(z).unwrap(), x.mul(&y.mul(z).unwrap()).unwrap());
                    assert_eq!(
                        x.mul(&y.add(z).unwrap()).unwrap(),
                        x.mul(y).unwrap().add(&x.mul(z).unwrap()).unwrap()
                    );
                }
            }
        }
    }
}

#[test]
fn sigma1_powers() {
    assert_eq!(SchurClass::sigma(4, 1, 0).pow(4).integrate(), int(2));
    assert_eq!(SchurClass::sigma(5, 1, 0).pow(6).integrate(), int(5));
    assert_eq!(SchurClass::sigma(6, 1, 0).pow(8).integrate(), int(14));
}

#[test]
fn whitney_sum() {
    let bundles = [
        RootBundle::taut_dual(),
        RootBundle::taut(),
        RootBundle::taut_dual().sym(2),
        RootBundle::taut_dual().sym(3),
        RootBundle::taut().sym(2),
    ];
    for n in 3..=7 {
        for e in &bundles {
            for f in &bundles {
                let lhs = e.direct_sum(f).total_chern().to_schur(n).unwrap();
                let rhs = e
                    .total_chern()
                    .to_schur(n)
                    .unwrap()
                    .mul(&f.total_chern().to_schur(n).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }
}

/// Pairs the roots `i x_1 + (k-i) x_2` and `(k-i) x_1 + i x_2`:
/// their product is `i(k-i) σ_1^2 + (k-2i)^2 σ_{1,1}`.
fn ctop_by_pairing(k: u32, n: usize) -> SchurClass {
    let s1 = SchurClass::sigma(n, 1, 0);
    let s11 = SchurClass::sigma(n, 1, 1);
    let mut out = SchurClass::one(n);
    for i in 0..(k + 1) / 2 {
        let (i, k) = (i as i64, k as i64);
        let factor = s1
            .pow(2)
            .scale(&int(i * (k - i)))
            .add(&s11.scale(&int((k - 2 * i) * (k - 2 * i))))
            .unwrap();
        out = out.mul(&factor).unwrap();
    }
    if k % 2 == 0 {
        out = out.mul(&s1.scale(&int(k as i64 / 2))).unwrap();
    }
    out
}

#[test]
fn top_chern_of_symmetric_powers() {
    for n in 3..=8 {
        for k in 1..=7 {
            assert_eq!(chern_top_sym_dual_taut(k, n).unwrap(), ctop_by_pairing(k, n), "k={k} n={n}");
        }
    }
    assert_eq!(chern_top_sym_dual_taut(3, 4).unwrap().integrate(), int(27));
    assert_eq!(chern_top_sym_dual_taut(5, 5).unwrap().integrate(), int(2875));
}

#[test]
fn oriented_rank_two_symmetric_power() {
    let s = sym_oriented_rank2(5).unwrap();
    assert_eq!(s.weights, [5, 3, 1]);
    assert_eq!(s.euler_coeff, BigInt::from(15));
    assert_eq!(*s.top_pontryagin(), BigInt::from(225));
    assert_eq!(s.euler_coeff.pow(2), *s.top_pontryagin());
    assert!(sym_oriented_rank2(4).is_err());
}

/// Three random hyperplanes of `R^5` cut out a 2-plane; with both
/// orientations that is two points of the oriented Grassmannian.
fn random_hyperplane_count(rng: &mut impl Rng) -> i64 {
    let a = DMatrix::from_fn(3, 5, |_, _| rng.gen_range(-1.0..1.0));
    let rank = a.svd(false, false).singular_values.iter().filter(|&&x| x > 1e-10).count();
    2 * i64::from(5 - rank == 2)
}

#[test]
fn oriented_integral_matches_random_hyperplanes() {
    let exact = oriented_g25_integrate_e3();
    assert_eq!(exact.value, 2);
    assert_eq!(exact.quadric_degree, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        assert_eq!(random_hyperplane_count(&mut rng), exact.value);
    }
}
