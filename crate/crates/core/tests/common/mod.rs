//! Property checks shared by the `properties` tests and the acceptance harness.
#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use qtframe::exactnum::GaussRational;
use qtframe::moments::{balanced_assemble, balanced_factorize, balanced_vm, JetMatrix, MomentJet};
use qtframe::qtconstruct::hermitian_split;
use qtframe::{LaurentMatrix, LaurentPoly};

pub const CASES: u32 = 1000;

fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn scalar() -> impl Strategy<Value = GaussRational> {
    (-6i64..=6, 1i64..=4, prop_oneof![3 => Just(0i64), 1 => -3i64..=3]).prop_map(|(n, d, im)| {
        &GaussRational::from_frac(n, d) + &(&GaussRational::i() * &GaussRational::from_frac(im, d))
    })
}

pub fn poly(max_len: usize) -> impl Strategy<Value = LaurentPoly> {
    (-2i64..=2, prop::collection::vec(scalar(), 0..=max_len)).prop_map(|(k, c)| LaurentPoly::from_coeffs(k, c))
}

pub fn matrix(rows: usize, cols: usize, max_len: usize) -> impl Strategy<Value = LaurentMatrix> {
    prop::collection::vec(poly(max_len), rows * cols).prop_map(move |e| {
        let mut it = e.into_iter();
        LaurentMatrix::from_fn(rows, cols, |_, _| it.next().expect("entries"))
    })
}

fn square() -> impl Strategy<Value = (LaurentMatrix, LaurentMatrix)> {
    (1usize..=3).prop_flat_map(|n| (matrix(n, n, 3), matrix(n, n, 3)))
}

fn finish(r: Result<(), proptest::test_runner::TestError<impl std::fmt::Debug>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

/// Splitting into `M` cosets and merging back is the identity, and each coset is `u(gamma + M .)`.
pub fn coset_round_trip(cases: u32) -> Result<(), String> {
    finish(runner(cases).run(&(poly(8), 1usize..=4), |(p, m)| {
        let parts: Vec<LaurentPoly> = (0..m as i64).map(|g| p.coset(g, m)).collect();
        prop_assert_eq!(LaurentPoly::merge(&parts), p.clone());
        for (g, part) in parts.iter().enumerate() {
            for (k, c) in part.terms() {
                prop_assert_eq!(&p.coeff(g as i64 + m as i64 * k), c);
            }
        }
        let mat = LaurentMatrix::scalar(p.clone());
        prop_assert_eq!(mat.coset_split(m).merge(), mat);
        Ok(())
    }))
}

/// `(A^*)^* = A` and `(AB)^* = B^* A^*`.
pub fn adjoint_involution(cases: u32) -> Result<(), String> {
    finish(runner(cases).run(&square(), |(a, b)| {
        prop_assert_eq!(a.star().star(), a.clone());
        prop_assert_eq!((&a * &b).star(), &b.star() * &a.star());
        Ok(())
    }))
}

/// `det(AB) = det(A) det(B)`.
pub fn det_multiplicative(cases: u32) -> Result<(), String> {
    finish(runner(cases).run(&square(), |(a, b)| {
        let lhs = (&a * &b).det().expect("square");
        let rhs = &a.det().expect("square") * &b.det().expect("square");
        prop_assert_eq!(lhs, rhs);
        Ok(())
    }))
}

/// Taking jets commutes with sums and products of polynomials and matrices.
pub fn jet_homomorphism(cases: u32) -> Result<(), String> {
    let strat = (poly(5), poly(5), 1usize..=6, matrix(2, 2, 3), matrix(2, 2, 3));
    finish(runner(cases).run(&strat, |(p, q, n, a, b)| {
        prop_assert_eq!(MomentJet::of(&(&p * &q), n), MomentJet::of(&p, n).mul(&MomentJet::of(&q, n)));
        prop_assert_eq!(MomentJet::of(&(&p + &q), n), MomentJet::of(&p, n).add(&MomentJet::of(&q, n)));
        prop_assert_eq!(MomentJet::of(&p.star(), n), MomentJet::of(&p, n).star());
        let prod = JetMatrix::of(&a, n).mul(&JetMatrix::of(&b, n)).expect("dimensions");
        prop_assert_eq!(JetMatrix::of(&(&a * &b), n), prod);
        Ok(())
    }))
}

/// `Upsilon b^* = O(xi^m)` exactly when `b = [q^[0], ..., q^[r-1]] E_{m;r}` for some filter `q`.
pub fn balanced_equivalence(cases: u32) -> Result<(), String> {
    let strat = (0usize..=2, 2usize..=3, 1usize..=2).prop_flat_map(|(m, r, s)| {
        (Just(m), Just(r), matrix(s, 1, 6), matrix(s, r, 4), any::<bool>())
    });
    finish(runner(cases).run(&strat, |(m, r, q, noise, perturb)| {
        // forward: assembled filters are balanced and factor back to q
        let b = balanced_assemble(&q, m, r);
        prop_assert!(balanced_vm(&b, r, m) >= m);
        prop_assert_eq!(balanced_factorize(&b, m).expect("balanced"), q.clone());
        // backward: any filter passing the moment test factors, any failing one does not
        let c = if perturb { &b + &noise } else { noise.clone() };
        let balanced = balanced_vm(&c, r, m) >= m;
        match balanced_factorize(&c, m) {
            Ok(q2) => {
                prop_assert!(balanced);
                prop_assert_eq!(balanced_assemble(&q2, m, r), c);
            }
            Err(_) => prop_assert!(!balanced),
        }
        Ok(())
    }))
}

/// `hermitian_split(H).gram() = H` for random Hermitian `4 x 4` Laurent matrices.
pub fn hermitian_split_identity(cases: u32) -> Result<(), String> {
    finish(runner(cases).run(&matrix(4, 4, 3), |x| {
        let h = &x + &x.star();
        let split = hermitian_split(&h).expect("hermitian");
        prop_assert_eq!(split.gram(), h);
        prop_assert_eq!(split.signature().len(), split.u_tilde.rows());
        Ok(())
    }))
}

pub type Suite = fn(u32) -> Result<(), String>;

pub const SUITES: &[(&str, Suite)] = &[
    ("laurent coset round trip", coset_round_trip),
    ("laurent adjoint involution", adjoint_involution),
    ("laurent det multiplicativity", det_multiplicative),
    ("moments jet homomorphism", jet_homomorphism),
    ("moments balanced factorization equivalence (m = 0, 1, 2)", balanced_equivalence),
    ("hermitian split identity (4 x 4)", hermitian_split_identity),
];
