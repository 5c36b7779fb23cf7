use num_bigint::BigInt;
use proptest::prelude::*;
use realgw_core::clifford::{
    check_constant_lift, check_conjugation_lift, covering_map, Blade, CliffordElement, CliffordModel, PinModel,
    SignedPermutation,
};
use realgw_core::Rational;

fn q(k: i64) -> Rational {
    Rational::from_integer(BigInt::from(k))
}

/// Reduces a generator word by bubble sort, squaring adjacent repeats.
fn reduce_word(word: &[usize], square: i64) -> (Vec<usize>, i64) {
    let mut w = word.to_vec();
    let mut sign = 1;
    loop {
        let mut changed = false;
        let mut i = 0;
        while i + 1 < w.len() {
            if w[i] > w[i + 1] {
                w.swap(i, i + 1);
                sign = -sign;
                changed = true;
            } else if w[i] == w[i + 1] {
                w.drain(i..i + 2);
                sign *= square;
                changed = true;
                continue;
            }
            i += 1;
        }
        if !changed {
            return (w, sign);
        }
    }
}

fn model_strategy() -> impl Strategy<Value = PinModel> {
    prop_oneof![Just(PinModel::PinPlus), Just(PinModel::PinMinus)]
}

fn element(model: CliffordModel, terms: &[(u64, i64)]) -> CliffordElement {
    let mask = (1u64 << model.dim()) - 1;
    CliffordElement::from_terms(model, terms.iter().map(|&(b, c)| (Blade(b & mask), q(c))))
}

fn terms_strategy() -> impl Strategy<Value = Vec<(u64, i64)>> {
    prop::collection::vec((0u64..64, -5i64..=5), 0..=8)
}

proptest! {
    #[test]
    fn blade_product_matches_word_reduction(model in model_strategy(), a in 0u64..64, b in 0u64..64) {
        let (x, y) = (Blade(a), Blade(b));
        let word: Vec<usize> = x.indices().into_iter().chain(y.indices()).collect();
        let (reduced, sign) = reduce_word(&word, model.generator_square());
        let (blade, s) = x.product(y, model);
        prop_assert_eq!(blade.indices(), reduced);
        prop_assert_eq!(s, sign);
    }

    #[test]
    fn associativity(
        model in model_strategy(),
        n in 1usize..=6,
        a in terms_strategy(),
        b in terms_strategy(),
        c in terms_strategy(),
    ) {
        let m = CliffordModel::new(model, n).unwrap();
        let (a, b, c) = (element(m, &a), element(m, &b), element(m, &c));
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn covering_is_a_homomorphism(model in model_strategy(), n in 1usize..=6, a in 0u64..64, b in 0u64..64) {
        let m = CliffordModel::new(model, n).unwrap();
        let mask = (1u64 << n) - 1;
        let x = CliffordElement::from_terms(m, [(Blade(a & mask), q(1))]);
        let y = CliffordElement::from_terms(m, [(Blade(b & mask), q(1))]);
        let xy = x.mul(&y).unwrap();
        prop_assert_eq!(
            covering_map(&xy).unwrap(),
            covering_map(&x).unwrap().compose(&covering_map(&y).unwrap())
        );
    }
}

#[test]
fn generators_anticommute() {
    for model in [PinModel::PinPlus, PinModel::PinMinus] {
        let m = CliffordModel::new(model, 6).unwrap();
        for i in 1..=6 {
            for j in 1..=6 {
                let ei = m.generator(i).unwrap();
                let ej = m.generator(j).unwrap();
                let sum = ei.mul(&ej).unwrap().add(&ej.mul(&ei).unwrap()).unwrap();
                if i == j {
                    assert_eq!(sum, m.scalar(q(2 * model.generator_square())));
                } else {
                    assert!(sum.is_zero(), "e{i}e{j} + e{j}e{i} = {sum}");
                }
            }
        }
    }
}

#[test]
fn constant_lift_solutions_are_plus_minus_one_and_e1() {
    for model in [PinModel::PinPlus, PinModel::PinMinus] {
        for n in 1..=5 {
            let m = CliffordModel::new(model, n).unwrap();
            let targets = [SignedPermutation::identity(n), SignedPermutation::reflection(n, 1)];
            let mut found = Vec::new();
            for blade in m.blades() {
                for c in [-1, 1] {
                    let a = CliffordElement::from_terms(m, [(blade, q(c))]);
                    if targets.contains(&covering_map(&a).unwrap()) && check_constant_lift(&a).unwrap() {
                        found.push(a.to_string());
                    }
                }
            }
            found.sort();
            assert_eq!(found, ["-1", "-e1", "1", "e1"], "{model} n={n}");
        }
    }
}

#[test]
fn conjugation_lift_distinguishes_models() {
    for n in 2..=5 {
        let minus = CliffordModel::new(PinModel::PinMinus, n).unwrap();
        let plus = CliffordModel::new(PinModel::PinPlus, n).unwrap();
        assert!(check_conjugation_lift(&minus.word(&[1, 2]).unwrap()).unwrap());
        assert!(!check_conjugation_lift(&plus.word(&[1, 2]).unwrap()).unwrap());
        assert!(check_conjugation_lift(&minus.word(&[1]).unwrap()).is_err());
    }
}
