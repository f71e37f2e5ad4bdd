//! Real-root counting for rational polynomials and exact Hermitian eigenvalue bounds.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::exactnum::{BigRational, GaussRational};
use crate::linalg::Mat;

/// Dense real polynomial, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealPoly(pub Vec<BigRational>);

impl RealPoly {
    pub fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        RealPoly(c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> BigRational {
        self.0.last().cloned().unwrap_or_default()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        RealPoly::new(
            self.0.iter().enumerate().skip(1).map(|(k, c)| c * BigRational::from_integer(BigInt::from(k))).collect(),
        )
    }

    pub fn rem(&self, d: &RealPoly) -> RealPoly {
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.0.clone();
        let lead = d.lead();
        while r.len() > dd && !r.is_empty() {
            let top = r.len() - 1;
            let f = &r[top] / &lead;
            if !f.is_zero() {
                for (j, c) in d.0.iter().enumerate() {
                    r[top - dd + j] -= &f * c;
                }
            }
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        RealPoly::new(r)
    }

    pub fn gcd(&self, o: &RealPoly) -> RealPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let l = a.lead();
        RealPoly::new(a.0.iter().map(|c| c / &l).collect())
    }
}

pub struct SturmSequence(Vec<RealPoly>);

impl SturmSequence {
    pub fn new(p: &RealPoly) -> Self {
        let mut seq = vec![p.clone(), p.derivative()];
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]);
            seq.push(RealPoly::new(r.0.iter().map(|c| -c).collect()));
        }
        seq.pop();
        SturmSequence(seq)
    }

    fn changes(signs: impl Iterator<Item = i8>) -> usize {
        let mut last = 0i8;
        let mut n = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                n += 1;
            }
            last = s;
        }
        n
    }

    fn sign(q: &BigRational) -> i8 {
        if q.is_positive() {
            1
        } else if q.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn changes_at(&self, x: &BigRational) -> usize {
        Self::changes(self.0.iter().map(|p| Self::sign(&p.eval(x))))
    }

    pub fn changes_at_neg_inf(&self) -> usize {
        Self::changes(self.0.iter().map(|p| {
            let s = Self::sign(&p.lead());
            if p.degree().unwrap_or(0) % 2 == 1 {
                -s
            } else {
                s
            }
        }))
    }

    pub fn changes_at_pos_inf(&self) -> usize {
        Self::changes(self.0.iter().map(|p| Self::sign(&p.lead())))
    }

    /// Distinct real roots in `(-inf, x]`.
    pub fn count_le(&self, x: &BigRational) -> usize {
        self.changes_at_neg_inf() - self.changes_at(x)
    }

    pub fn count_real(&self) -> usize {
        self.changes_at_neg_inf() - self.changes_at_pos_inf()
    }
}

/// Cauchy bound on the modulus of all roots.
pub fn root_bound(p: &RealPoly) -> BigRational {
    let lead = p.lead().abs();
    let mut m = BigRational::zero();
    for c in &p.0[..p.0.len() - 1] {
        let q = c.abs() / &lead;
        if q > m {
            m = q;
        }
    }
    m + BigRational::one()
}

/// Interval `[lo, hi]` of width `<= tol` containing the smallest real root.
pub fn smallest_root(p: &RealPoly, tol: &BigRational) -> Option<(BigRational, BigRational)> {
    let seq = SturmSequence::new(p);
    if seq.count_real() == 0 {
        return None;
    }
    let b = root_bound(p);
    let (mut lo, mut hi) = (-b.clone(), b);
    let two = BigRational::from_integer(BigInt::from(2));
    while &hi - &lo > *tol {
        let mid = (&lo + &hi) / &two;
        if seq.count_le(&mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some((lo, hi))
}

/// Characteristic polynomial `det(x I - A)` by Faddeev-LeVerrier; coefficients lowest first.
pub fn char_poly(a: &Mat) -> Vec<GaussRational> {
    let n = a.len();
    let mut c = vec![GaussRational::zero(); n + 1];
    c[n] = GaussRational::one();
    let mut mk: Mat = crate::linalg::zeros(n, n);
    for k in 1..=n {
        let mut next = crate::linalg::mul(a, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &c[n - k + 1];
        }
        mk = next;
        let am = crate::linalg::mul(a, &mk);
        let mut tr = GaussRational::zero();
        for (i, row) in am.iter().enumerate() {
            tr += &row[i];
        }
        c[n - k] = -tr.scale(&BigRational::new(BigInt::one(), BigInt::from(k)));
    }
    c
}

/// Enclosure of the least eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(h: &Mat, tol: &BigRational) -> (BigRational, BigRational) {
    let cp = char_poly(h);
    debug_assert!(cp.iter().all(|c| c.im.is_zero()), "Hermitian matrix has a real characteristic polynomial");
    let p = RealPoly::new(cp.into_iter().map(|c| c.re).collect());
    smallest_root(&p, tol).expect("Hermitian matrices have real eigenvalues")
}

/// Decimal rendering of a rational with `digits` significant fractional digits.
pub fn to_decimal(q: &BigRational, digits: usize) -> String {
    let neg = q.is_negative();
    let q = q.abs();
    let scale = BigInt::from(10).pow(digits as u32);
    let scaled = (q * BigRational::from_integer(scale.clone())).round().to_integer();
    let int = &scaled / &scale;
    let frac = (&scaled % &scale).to_string();
    let frac = format!("{}{}", "0".repeat(digits.saturating_sub(frac.len())), frac);
    format!("{}{}.{}", if neg { "-" } else { "" }, int, frac)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn poly(c: &[i64]) -> RealPoly {
        RealPoly::new(c.iter().map(|&x| rat(x, 1)).collect())
    }

    #[test]
    fn counts_roots() {
        // (x - 1)(x + 2)(x - 3)
        let p = poly(&[6, -5, -2, 1]);
        let s = SturmSequence::new(&p);
        assert_eq!(s.count_real(), 3);
        assert_eq!(s.count_le(&rat(0, 1)), 1);
        let (lo, hi) = smallest_root(&p, &rat(1, 1000)).unwrap();
        assert!(lo <= rat(-2, 1) && rat(-2, 1) <= hi);
        assert_eq!(SturmSequence::new(&poly(&[1, 0, 1])).count_real(), 0);
    }

    #[test]
    fn gcd_and_eigen() {
        let g = poly(&[-1, 0, 1]).gcd(&poly(&[1, 2, 1]));
        assert_eq!(g, poly(&[1, 1]));
        let h = vec![
            vec![GaussRational::from_int(2), GaussRational::i()],
            vec![-GaussRational::i(), GaussRational::from_int(2)],
        ];
        let (lo, hi) = min_eigenvalue(&h, &rat(1, 1_000_000));
        assert!(lo <= rat(1, 1) && rat(1, 1) <= hi);
        assert_eq!(to_decimal(&rat(-1, 3), 5), "-0.33333");
    }
}
