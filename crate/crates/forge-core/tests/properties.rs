//! Randomized cross-checks of the algebra kernels: field axioms verified by
//! property testing over a panel of small fields, plus seeded random sweeps
//! that pit the polynomial, tower and symplectic layers against independent
//! definitions (root counting, Galois invariance, palindromicity).

use std::sync::OnceLock;

use forge_core::field::{batch_invert, FiniteField, Tower};
use forge_core::gsp::{Matrix, SympSpace};
use forge_core::poly::{
    is_irreducible, is_symplectic, poly_trace, quadratic_is_irreducible, symplectic_lift,
    MonicPoly,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PANEL: [(u64, u32); 10] = [
    (2, 1),
    (3, 1),
    (5, 1),
    (7, 1),
    (2, 2),
    (3, 2),
    (2, 3),
    (5, 2),
    (3, 3),
    (7, 2),
];

fn panel() -> &'static [FiniteField] {
    static FIELDS: OnceLock<Vec<FiniteField>> = OnceLock::new();
    FIELDS.get_or_init(|| {
        PANEL
            .iter()
            .map(|&(p, r)| FiniteField::new(p, r).expect("panel field"))
            .collect()
    })
}

proptest! {
    #[test]
    fn field_axioms_hold(
        fi in 0..PANEL.len(),
        a in any::<u128>(),
        b in any::<u128>(),
        c in any::<u128>(),
    ) {
        let f = &panel()[fi];
        let o = f.order();
        let x = f.element_from_index(a % o);
        let y = f.element_from_index(b % o);
        let z = f.element_from_index(c % o);

        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x + &f.zero(), x.clone());
        prop_assert_eq!(&x * &f.one(), x.clone());
        prop_assert!((&x + &(-&x)).is_zero());
        if !x.is_zero() {
            prop_assert!((&x * &x.inv().unwrap()).is_one());
            // Lagrange: the multiplicative group has order q - 1.
            prop_assert!(x.pow(o - 1).is_one());
        }
        // Frobenius x -> x^p is additive in characteristic p.
        let p = u128::from(f.p());
        prop_assert_eq!((&x + &y).pow(p), &x.pow(p) + &y.pow(p));
    }

    #[test]
    fn element_index_round_trips(fi in 0..PANEL.len(), a in any::<u128>()) {
        let f = &panel()[fi];
        let x = f.element_from_index(a % f.order());
        prop_assert_eq!(f.element_from_index(x.index()), x);
    }

    #[test]
    fn batch_inversion_matches_individual(
        fi in 0..PANEL.len(),
        raw in proptest::collection::vec(any::<u128>(), 1..16),
    ) {
        let f = &panel()[fi];
        let o = f.order();
        // Map into nonzero indices 1..o.
        let xs: Vec<_> = raw
            .iter()
            .map(|&k| f.element_from_index(1 + k % (o - 1)))
            .collect();
        let inv = batch_invert(&xs).unwrap();
        for (x, xi) in xs.iter().zip(&inv) {
            prop_assert_eq!(x.inv().unwrap(), xi.clone());
        }
        // Any zero in the list refuses.
        let mut with_zero = xs;
        with_zero.push(f.zero());
        prop_assert!(batch_invert(&with_zero).is_err());
    }
}

/// Low-degree irreducibility agrees with root counting, and the degree-doubling
/// substitution x -> x + 1/x always produces a palindromic polynomial with the
/// same trace coefficient.
#[test]
fn random_monic_polynomials_cross_checked() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x01);
    for (p, r) in [(2u64, 1u32), (3, 1), (5, 1), (7, 1), (2, 2), (3, 2), (5, 2)] {
        let field = FiniteField::new(p, r).unwrap();
        let q = field.order();
        for deg in 2u32..=3 {
            let keys = q.pow(deg);
            for _ in 0..200 {
                let key = rng.gen_range(0..keys);
                let f = MonicPoly::from_encoding(&field, deg, key);
                assert_eq!(f.encoding(), key);
                let has_root = field.elements().any(|x| f.eval(&x).is_zero());
                assert_eq!(
                    is_irreducible(&f),
                    !has_root,
                    "degree-{deg} irreducibility must equal rootlessness over {field}"
                );
                if is_irreducible(&f) {
                    let (g, _) = symplectic_lift(&f).unwrap();
                    assert_eq!(g.degree(), 2 * deg as usize);
                    assert!(is_symplectic(&g));
                    assert_eq!(poly_trace(&g), poly_trace(&f));
                }
            }
        }
    }
}

/// The pointwise quadratic test (discriminant / Artin-Schreier) agrees with
/// generic irreducibility of x^2 - alpha x + 1.
#[test]
fn pointwise_quadratic_test_agrees_with_factoring() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x02);
    for (p, r) in [(2u64, 1u32), (2, 2), (2, 3), (3, 1), (5, 1), (7, 1), (3, 2), (5, 2)] {
        let field = FiniteField::new(p, r).unwrap();
        let q = field.order();
        for _ in 0..100 {
            let alpha = field.element_from_index(rng.gen_range(0..q));
            let quad = MonicPoly::from_lower_coeffs(&field, vec![field.one(), -&alpha]);
            assert_eq!(
                quadratic_is_irreducible(&alpha),
                is_irreducible(&quad),
                "alpha = {alpha:?} over {field}"
            );
        }
    }
}

/// Relative traces are additive and Galois-invariant; minimal polynomials are
/// irreducible over the base, have degree dividing the extension degree, and
/// annihilate the element after embedding their coefficients.
#[test]
fn tower_trace_and_minimal_polynomials() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x03);
    let towers = [
        (2u64, 4u32, 4u64),
        (3, 4, 9),
        (2, 6, 8),
        (5, 2, 5),
        (7, 2, 7),
        (3, 3, 3),
    ];
    for (p, r, q) in towers {
        let big = FiniteField::new(p, r).unwrap();
        let tower = Tower::new(big.clone(), q).unwrap();
        let small = tower.small().clone();
        let ord = big.order();
        for _ in 0..60 {
            let x = big.element_from_index(rng.gen_range(0..ord));
            let y = big.element_from_index(rng.gen_range(0..ord));

            let tx = tower.relative_trace(&x).unwrap();
            let ty = tower.relative_trace(&y).unwrap();
            assert_eq!(tower.relative_trace(&(&x + &y)).unwrap(), &tx + &ty);
            let x_frob = tower.frobenius_power(&x, 1);
            assert_eq!(tower.relative_trace(&x_frob).unwrap(), tx);

            let m = tower.minimal_polynomial(&x).unwrap();
            assert!(is_irreducible(&m));
            assert_eq!(tower.degree() as usize % m.degree(), 0);
            let mut acc = big.zero();
            let mut x_pow = big.one();
            for i in 0..=m.degree() {
                let c = tower.embed(&m.coeff(i)).unwrap();
                acc = &acc + &(&c * &x_pow);
                if i < m.degree() {
                    x_pow = &x_pow * &x;
                }
            }
            assert!(acc.is_zero(), "minimal polynomial must annihilate x");

            let z = small.element_from_index(rng.gen_range(0..small.order()));
            assert_eq!(tower.project(&tower.embed(&z).unwrap()).unwrap(), z);
        }
    }
}

/// Transvections invert to transvections, products of transvections keep
/// multiplier one, and the characteristic polynomial of any multiplier-one
/// element is palindromic with constant term 1.
#[test]
fn random_transvection_products_stay_symplectic() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x04);
    for (l, n) in [(3u64, 1usize), (5, 1), (7, 1), (3, 2), (5, 2)] {
        let space = SympSpace::new(l, n).unwrap();
        let d = space.dim();
        for _ in 0..40 {
            let mut m = Matrix::identity(l, d);
            for _ in 0..rng.gen_range(1..=4) {
                let mut v = vec![0u64; d];
                while v.iter().all(|&c| c == 0) {
                    for c in v.iter_mut() {
                        *c = rng.gen_range(0..l);
                    }
                }
                let lambda = rng.gen_range(1..l);
                let t = space.make_transvection(&v, lambda).unwrap();
                assert!(space.is_transvection(&t));
                assert!(space.is_symplectic_matrix(&t));
                let t_inv = t.inverse().unwrap();
                assert!(space.is_transvection(&t_inv));
                assert!(t.mul(&t_inv).is_identity());
                m = m.mul(&t);
            }
            assert_eq!(space.multiplier(&m), Ok(1));
            let cp = m.char_poly();
            assert_eq!(cp[0], 1);
            assert_eq!(cp[d], 1);
            for i in 0..=d {
                assert_eq!(cp[i], cp[d - i], "characteristic polynomial palindromic");
            }
        }
    }
}
