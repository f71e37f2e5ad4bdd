//! Truncated Taylor jets at `xi = 0` and the moment conditions built on them.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exactnum::{rat, BigRational, GaussRational};
use crate::laurent::{build_e, LaurentMatrix, LaurentPoly};
use crate::linalg::{self, Mat};

/// `[f(0), f'(0), f''(0)/2, ...]`, truncated to `order` entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MomentJet {
    pub coeffs: Vec<GaussRational>,
}

fn factorial(j: usize) -> BigInt {
    (1..=j as u64).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `(-i k)^j / j!`
fn monomial_jet_entry(k: i64, j: usize) -> GaussRational {
    let mag = BigRational::new(BigInt::from(k).pow(j as u32), factorial(j));
    GaussRational::i_pow(-(j as i64)).scale(&mag)
}

impl MomentJet {
    pub fn zero(n: usize) -> Self {
        MomentJet { coeffs: vec![GaussRational::zero(); n] }
    }

    pub fn constant(c: GaussRational, n: usize) -> Self {
        let mut j = Self::zero(n);
        if n > 0 {
            j.coeffs[0] = c;
        }
        j
    }

    pub fn one(n: usize) -> Self {
        Self::constant(GaussRational::one(), n)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn at0(&self) -> GaussRational {
        self.coeffs.first().cloned().unwrap_or_default()
    }

    /// Jet of `sum_k c_k e^{-i k xi}`.
    pub fn of(p: &LaurentPoly, n: usize) -> Self {
        let mut out = Self::zero(n);
        for (k, c) in p.terms() {
            for (j, slot) in out.coeffs.iter_mut().enumerate() {
                *slot += &(c * &monomial_jet_entry(k, j));
            }
        }
        out
    }

    /// Jet of `e^{i t xi}`.
    pub fn exp(t: &BigRational, n: usize) -> Self {
        let mut out = Self::zero(n);
        for (j, slot) in out.coeffs.iter_mut().enumerate() {
            let mag = BigRational::new(t.numer().pow(j as u32), t.denom().pow(j as u32) * factorial(j));
            *slot = GaussRational::i_pow(j as i64).scale(&mag);
        }
        out
    }

    pub fn truncate(&self, n: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.resize(n, GaussRational::zero());
        MomentJet { coeffs: c }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        MomentJet { coeffs: (0..n).map(|j| &self.coeffs[j] + &o.coeffs[j]).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        MomentJet { coeffs: (0..n).map(|j| &self.coeffs[j] - &o.coeffs[j]).collect() }
    }

    pub fn neg(&self) -> Self {
        MomentJet { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        let mut out = Self::zero(n);
        for i in 0..n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..n - i {
                out.coeffs[i + j] += &(&self.coeffs[i] * &o.coeffs[j]);
            }
        }
        out
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        MomentJet { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.order();
        let c0inv = self.at0().inv().map_err(|_| Error::ZeroConstantTerm)?;
        let mut out = Self::zero(n);
        for j in 0..n {
            let mut acc = if j == 0 { GaussRational::one() } else { GaussRational::zero() };
            for l in 1..=j {
                acc -= &(&self.coeffs[l] * &out.coeffs[j - l]);
            }
            out.coeffs[j] = &acc * &c0inv;
        }
        Ok(out)
    }

    /// Jet of `conj(f(xi))` for real `xi`.
    pub fn star(&self) -> Self {
        MomentJet { coeffs: self.coeffs.iter().map(|c| c.conj()).collect() }
    }

    /// Jet of `f(M xi)`.
    pub fn dilate(&self, m: usize) -> Self {
        let mut p = GaussRational::one();
        let step = GaussRational::from_int(m as i64);
        let mut out = Vec::with_capacity(self.order());
        for c in &self.coeffs {
            out.push(c * &p);
            p = &p * &step;
        }
        MomentJet { coeffs: out }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Index of the first nonzero entry, or `order()` if none.
    pub fn valuation(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(self.order())
    }

    /// Agreement with `o` through the first `n` entries.
    pub fn agrees(&self, o: &Self, n: usize) -> bool {
        (0..n).all(|j| {
            let a = self.coeffs.get(j).cloned().unwrap_or_default();
            let b = o.coeffs.get(j).cloned().unwrap_or_default();
            a == b
        })
    }
}

impl fmt::Display for MomentJet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Inverse of the map "degree < n polynomial -> jet of order n", applied to `jet`.
pub fn lift_to_poly(jet: &MomentJet, n: usize) -> LaurentPoly {
    let v: Mat = (0..n).map(|j| (0..n).map(|k| monomial_jet_entry(k as i64, j)).collect()).collect();
    let rhs: Vec<GaussRational> = (0..n).map(|j| jet.coeffs.get(j).cloned().unwrap_or_default()).collect();
    let c = linalg::solve(&v, &rhs).expect("moment matrix is invertible");
    LaurentPoly::from_coeffs(0, c)
}

/// Matrix of jets with a common order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetMatrix {
    rows: usize,
    cols: usize,
    order: usize,
    data: Vec<MomentJet>,
}

pub type JetVector = JetMatrix;

impl JetMatrix {
    pub fn zeros(rows: usize, cols: usize, order: usize) -> Self {
        JetMatrix { rows, cols, order, data: vec![MomentJet::zero(order); rows * cols] }
    }

    pub fn identity(n: usize, order: usize) -> Self {
        let mut m = Self::zeros(n, n, order);
        for i in 0..n {
            m.set(i, i, MomentJet::one(order));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, order: usize, mut f: impl FnMut(usize, usize) -> MomentJet) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j).truncate(order));
            }
        }
        JetMatrix { rows, cols, order, data }
    }

    pub fn of(a: &LaurentMatrix, order: usize) -> Self {
        Self::from_fn(a.rows(), a.cols(), order, |i, j| MomentJet::of(a.get(i, j), order))
    }

    /// `e1 = [1, 0, ..., 0]` as a row (`row = true`) or column.
    pub fn e1(r: usize, order: usize, row: bool) -> Self {
        let mut m = if row { Self::zeros(1, r, order) } else { Self::zeros(r, 1, order) };
        m.data[0] = MomentJet::one(order);
        m
    }

    /// `[1, e^{i xi/r}, ..., e^{i(r-1) xi/r}]` as a row.
    pub fn upsilon(r: usize, order: usize) -> Self {
        Self::from_fn(1, r, order, |_, j| MomentJet::exp(&rat(j as i64, r as i64), order))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> &MomentJet {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: MomentJet) {
        self.data[i * self.cols + j] = v.truncate(self.order);
    }

    /// Entries in row-major order (row or column vectors alike).
    pub fn flat(&self) -> &[MomentJet] {
        &self.data
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_fn(self.rows, self.cols, order, |i, j| self.get(i, j).clone())
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch(format!(
                "jet mul {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let order = self.order.min(o.order);
        let mut out = Self::zeros(self.rows, o.cols, order);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = MomentJet::zero(order);
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).mul(o.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn add(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        Self::from_fn(self.rows, self.cols, order, |i, j| self.get(i, j).add(o.get(i, j)))
    }

    pub fn sub(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        Self::from_fn(self.rows, self.cols, order, |i, j| self.get(i, j).sub(o.get(i, j)))
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        Self::from_fn(self.rows, self.cols, self.order, |i, j| self.get(i, j).scale(c))
    }

    pub fn scale_jet(&self, c: &MomentJet) -> Self {
        Self::from_fn(self.rows, self.cols, self.order.min(c.order()), |i, j| self.get(i, j).mul(c))
    }

    /// Conjugate transpose.
    pub fn star(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.order, |i, j| self.get(j, i).star())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.order, |i, j| self.get(j, i).clone())
    }

    pub fn dilate(&self, m: usize) -> Self {
        Self::from_fn(self.rows, self.cols, self.order, |i, j| self.get(i, j).dilate(m))
    }

    /// Constant matrix of the `t`-th jet coefficients.
    pub fn coeff(&self, t: usize) -> Mat {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).coeffs.get(t).cloned().unwrap_or_default()).collect())
            .collect()
    }

    pub fn at0(&self) -> Mat {
        self.coeff(0)
    }

    pub fn agrees(&self, o: &Self, n: usize) -> bool {
        self.rows == o.rows && self.cols == o.cols && self.data.iter().zip(&o.data).all(|(a, b)| a.agrees(b, n))
    }

    /// Smallest valuation over entries, capped by the order.
    pub fn valuation(&self) -> usize {
        self.data.iter().map(|j| j.valuation()).min().unwrap_or(self.order)
    }

    /// Entrywise lift to polynomials of degree `< n`.
    pub fn lift(&self, n: usize) -> LaurentMatrix {
        LaurentMatrix::from_fn(self.rows, self.cols, |i, j| lift_to_poly(self.get(i, j), n))
    }
}

impl fmt::Display for JetMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join("; "))?;
        }
        Ok(())
    }
}

fn mat_sub_identity(a: &Mat) -> Mat {
    let mut w = a.clone();
    for (i, row) in w.iter_mut().enumerate() {
        row[i] -= &GaussRational::one();
    }
    w
}

/// Checks that 1 is a simple eigenvalue of `a0` and returns its right eigenvector.
fn unit_eigenvector(a0: &Mat) -> Result<Vec<GaussRational>> {
    let r = a0.len();
    let b = mat_sub_identity(a0);
    let ns = linalg::nullspace(&b, r);
    if ns.is_empty() {
        return Err(Error::SpectralConditionViolated("1 is not an eigenvalue of a(0)".into()));
    }
    if ns.len() > 1 || linalg::nullspace(&linalg::mul(&b, &b), r).len() > 1 {
        return Err(Error::SpectralConditionViolated("1 is not a simple eigenvalue of a(0)".into()));
    }
    let mut x = ns.into_iter().next().unwrap();
    let lead = x.iter().find(|c| !c.is_zero()).unwrap().inv()?;
    for c in x.iter_mut() {
        *c = &*c * &lead;
    }
    Ok(x)
}

/// Jets of the refinable vector `phi(M xi) = a(xi) phi(xi)`, first nonzero entry of `phi(0)` set to 1.
pub fn refinable_jets(a: &LaurentMatrix, m_dil: usize, n: usize) -> Result<JetVector> {
    let r = a.rows();
    let aj = JetMatrix::of(a, n);
    let a0 = aj.at0();
    let mut xs: Vec<Vec<GaussRational>> = vec![unit_eigenvector(&a0)?];
    for j in 1..n {
        let mj = GaussRational::from_int((m_dil as i64).pow(j as u32));
        let mut lhs = a0.iter().map(|row| row.iter().map(|c| -c).collect::<Vec<_>>()).collect::<Mat>();
        for (i, row) in lhs.iter_mut().enumerate() {
            row[i] += &mj;
        }
        let mut rhs = vec![GaussRational::zero(); r];
        for l in 1..=j {
            let al = aj.coeff(l);
            for (i, slot) in rhs.iter_mut().enumerate() {
                for k in 0..r {
                    *slot += &(&al[i][k] * &xs[j - l][k]);
                }
            }
        }
        // singular but consistent systems (e.g. a zero component of phi) take free variables = 0
        let x = linalg::solve(&lhs, &rhs).ok_or_else(|| {
            Error::SpectralConditionViolated(format!("M^{j} is an eigenvalue of a(0) and the moment system is inconsistent"))
        })?;
        xs.push(x);
    }
    Ok(JetMatrix::from_fn(r, 1, n, |i, _| MomentJet { coeffs: (0..n).map(|j| xs[j][i].clone()).collect() }))
}

/// Basis of matching-filter jets of order `m` (rows `1 x r`), from the coset form of the sum rules.
fn matching_space(a: &LaurentMatrix, m_dil: usize, m: usize) -> Vec<JetVector> {
    let r = a.rows();
    let unknowns = m * r;
    let mut eqs: Mat = Vec::new();
    let mi = GaussRational::from_frac(1, m_dil as i64);
    for beta in 0..m_dil {
        let cj = JetMatrix::of(&a.coset(beta as i64, m_dil), m);
        let ej = MomentJet::exp(&rat(beta as i64, 1), m);
        for j in 0..m {
            let mj = GaussRational::from_int((m_dil as i64).pow(j as u32));
            for col in 0..r {
                let mut row = vec![GaussRational::zero(); unknowns];
                for l in 0..=j {
                    let c = cj.coeff(j - l);
                    for k in 0..r {
                        row[l * r + k] += &(&mj * &c[k][col]);
                    }
                    let e = &mi * &ej.coeffs[j - l];
                    row[l * r + col] -= &e;
                }
                eqs.push(row);
            }
        }
    }
    linalg::nullspace(&eqs, unknowns)
        .into_iter()
        .map(|x| JetMatrix::from_fn(1, r, m, |_, k| MomentJet { coeffs: (0..m).map(|l| x[l * r + k].clone()).collect() }))
        .collect()
}

/// A matching filter jet of order `m` with nonzero value at 0, if any.
pub fn matching_filter(a: &LaurentMatrix, m_dil: usize, m: usize) -> Option<JetVector> {
    if m == 0 {
        return None;
    }
    let space = matching_space(a, m_dil, m);
    // prefer a combination normalised at the first coordinate with a nonzero value
    space.into_iter().find(|v| v.at0()[0].iter().any(|c| !c.is_zero()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumRuleReport {
    pub order: usize,
    pub matching_jet: JetVector,
    pub normalized: bool,
}

/// Sum-rule order (capped) and a matching filter with `v(0) phi(0) = 1`.
pub fn sum_rules(a: &LaurentMatrix, m_dil: usize, cap: usize) -> Result<SumRuleReport> {
    let r = a.rows();
    let phi = refinable_jets(a, m_dil, 1)?;
    let mut best: Option<(usize, JetVector)> = None;
    for m in 1..=cap {
        match matching_filter(a, m_dil, m) {
            Some(v) => best = Some((m, v)),
            None => break,
        }
    }
    let Some((order, v)) = best else {
        return Ok(SumRuleReport { order: 0, matching_jet: JetMatrix::zeros(1, r, 0), normalized: false });
    };
    let vp = v.mul(&phi)?.get(0, 0).at0();
    if vp.is_zero() {
        return Ok(SumRuleReport { order, matching_jet: v, normalized: false });
    }
    let v = v.scale(&vp.inv()?);
    Ok(SumRuleReport { order, matching_jet: v, normalized: true })
}

/// Normalised matching filter and refinable jets for a given order pair.
pub fn moment_data(a: &LaurentMatrix, m_dil: usize, m: usize, n: usize) -> Result<(JetVector, JetVector)> {
    let phi = refinable_jets(a, m_dil, n.max(1))?;
    let v = matching_filter(a, m_dil, m)
        .ok_or_else(|| Error::HypothesisViolated(format!("mask does not have {m} sum rules")))?;
    let vp = v.mul(&phi)?.get(0, 0).at0();
    if vp.is_zero() {
        return Err(Error::HypothesisViolated("v(0) phi(0) = 0".into()));
    }
    Ok((v.scale(&vp.inv()?), phi))
}

/// Order of vanishing of `b(xi) phi(xi)` at the origin, capped.
pub fn vanishing_moments(b: &LaurentMatrix, phi_jet: &JetVector, cap: usize) -> usize {
    let order = cap.min(phi_jet.order());
    let prod = JetMatrix::of(b, order).mul(&phi_jet.truncate(order)).expect("dimensions");
    prod.valuation().min(cap)
}

/// Largest `m <= cap` with `Upsilon(xi) b(xi)^* = O(xi^m)`.
pub fn balanced_vm(b: &LaurentMatrix, r: usize, cap: usize) -> usize {
    let ups = JetMatrix::upsilon(r, cap);
    let prod = ups.mul(&JetMatrix::of(b, cap).star()).expect("dimensions");
    prod.valuation().min(cap)
}

/// Jets of `c` solving `c Upsilon a^* = Upsilon(M .)` to order `m`, with `c(0) != 0`.
pub fn balancing_c(a: &LaurentMatrix, m_dil: usize, r: usize, m: usize) -> Option<MomentJet> {
    let ups = JetMatrix::upsilon(r, m);
    let lhs = ups.mul(&JetMatrix::of(a, m).star()).ok()?;
    let target = ups.dilate(m_dil);
    let mut eqs: Mat = Vec::new();
    let mut rhs = Vec::new();
    for t in 0..m {
        for k in 0..r {
            let mut row = vec![GaussRational::zero(); m];
            for (j, slot) in row.iter_mut().enumerate().take(t + 1) {
                *slot = lhs.get(0, k).coeffs[t - j].clone();
            }
            eqs.push(row);
            rhs.push(target.get(0, k).coeffs[t].clone());
        }
    }
    let c = linalg::solve(&eqs, &rhs)?;
    (!c[0].is_zero()).then_some(MomentJet { coeffs: c })
}

/// Balancing order of `{a; b}`, capped.
pub fn balancing_order(a: &LaurentMatrix, b: &LaurentMatrix, m_dil: usize, r: usize, cap: usize) -> usize {
    let bvm = balanced_vm(b, r, cap);
    let mut best = 0;
    for m in 1..=bvm {
        if balancing_c(a, m_dil, r, m).is_none() {
            break;
        }
        best = m;
    }
    best
}

/// `E_{nabla^m delta; r}` as an `r x r` matrix.
pub fn e_m_r(m: usize, r: usize) -> LaurentMatrix {
    build_e(&LaurentMatrix::scalar(LaurentPoly::one_minus_z_pow(m)), r)
}

/// Write `b = [q^[0], ..., q^[r-1]] E_{m;r}` and return `q` (`s x 1`).
pub fn balanced_factorize(b: &LaurentMatrix, m: usize) -> Result<LaurentMatrix> {
    let r = b.cols();
    let e = e_m_r(m, r);
    let adj = e.adjugate()?;
    let num = b.checked_mul(&adj)?;
    let q_cosets = num
        .divide_exact(&LaurentPoly::one_minus_z_pow(m))
        .map_err(|e| Error::NotBalanced(e.to_string()))?;
    let parts: Vec<LaurentMatrix> = (0..r).map(|k| q_cosets.col(k)).collect();
    Ok(crate::laurent::CosetSplit { dilation: r, parts }.merge())
}

/// Inverse of [`balanced_factorize`].
pub fn balanced_assemble(q: &LaurentMatrix, m: usize, r: usize) -> LaurentMatrix {
    let cosets = q.coset_row(r);
    &cosets * &e_m_r(m, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn g(n: i64, d: i64) -> GaussRational {
        GaussRational::from_frac(n, d)
    }

    #[test]
    fn jet_examples() {
        let j = MomentJet::of(&LaurentPoly::from_fracs(0, &[1, -1], 1), 2);
        assert_eq!(j.coeffs, vec![g(0, 1), GaussRational::i()]);
        let e = MomentJet::exp(&rat(1, 2), 3);
        assert_eq!(e.coeffs, vec![g(1, 1), GaussRational::i().scale(&rat(1, 2)), g(-1, 8)]);
        let inv = MomentJet { coeffs: vec![g(1, 1), g(1, 1), g(0, 1)] }.inverse().unwrap();
        assert_eq!(inv.coeffs, vec![g(1, 1), g(-1, 1), g(1, 1)]);
        assert_eq!(MomentJet::zero(3).inverse(), Err(Error::ZeroConstantTerm));
        assert_eq!(e.star().star(), e);
        assert_eq!(e.star(), MomentJet::exp(&rat(-1, 2), 3));
    }

    #[test]
    fn lift_reproduces_jet() {
        let e = MomentJet::exp(&rat(1, 3), 5);
        let p = lift_to_poly(&e, 5);
        assert_eq!(MomentJet::of(&p, 5), e);
        assert!(p.kmin().unwrap() >= 0 && p.kmax().unwrap() < 5);
    }

    #[test]
    fn haar_refinable_jet() {
        let a = LaurentMatrix::scalar(LaurentPoly::from_fracs(0, &[1, 1], 2));
        let phi = refinable_jets(&a, 2, 2).unwrap();
        assert_eq!(phi.get(0, 0).coeffs, vec![g(1, 1), GaussRational::i().scale(&rat(-1, 2))]);
    }

    #[test]
    fn hermite_moments() {
        let a = fixtures::hermite();
        let phi = refinable_jets(&a, 2, 4).unwrap();
        assert_eq!(phi.at0(), vec![vec![g(1, 1)], vec![g(0, 1)]]);
        let rep = sum_rules(&a, 2, 6).unwrap();
        assert_eq!(rep.order, 4);
        assert!(rep.normalized);
        let v = &rep.matching_jet;
        assert_eq!(v.get(0, 0), &MomentJet::one(4));
        let ixi = MomentJet { coeffs: vec![g(0, 1), GaussRational::i(), g(0, 1), g(0, 1)] };
        assert_eq!(v.get(0, 1), &ixi);
    }

    #[test]
    fn spectral_violation() {
        let a = LaurentMatrix::scalar(LaurentPoly::from_fracs(0, &[1, 1], 4));
        assert!(matches!(refinable_jets(&a, 2, 2), Err(Error::SpectralConditionViolated(_))));
        let id = LaurentMatrix::identity(2);
        assert!(matches!(refinable_jets(&id, 2, 2), Err(Error::SpectralConditionViolated(_))));
    }

    #[test]
    fn bspline_sum_rules() {
        for m in 1..=4 {
            let a = fixtures::bspline(m, 2);
            assert_eq!(sum_rules(&a, 2, m + 2).unwrap().order, m, "m = {m}");
        }
        assert_eq!(sum_rules(&fixtures::bspline(2, 3), 3, 4).unwrap().order, 2);
    }

    #[test]
    fn vec_bspline_sum_rules() {
        let a = fixtures::vec_bspline2();
        let rep = sum_rules(&a, 2, 4).unwrap();
        assert_eq!(rep.order, 2);
        let ups = JetMatrix::upsilon(2, 2);
        // matching filter is proportional to [1, e^{i xi/2}]
        let c = rep.matching_jet.get(0, 0).at0();
        assert!(rep.matching_jet.agrees(&ups.scale(&c), 2));
    }

    #[test]
    fn haar_orders() {
        let a = LaurentMatrix::scalar(LaurentPoly::from_fracs(0, &[1, 1], 2));
        let b = LaurentMatrix::scalar(LaurentPoly::from_fracs(0, &[1, -1], 2));
        let phi = refinable_jets(&a, 2, 3).unwrap();
        assert_eq!(vanishing_moments(&b, &phi, 3), 1);
        assert_eq!(vanishing_moments(&a, &phi, 3), 0);
        assert_eq!(balanced_vm(&b, 1, 3), 1);
        assert_eq!(balancing_order(&a, &b, 2, 1, 3), 1);
        assert_eq!(balanced_vm(&LaurentMatrix::zeros(1, 2), 2, 5), 5);
    }

    #[test]
    fn balanced_factorize_examples() {
        let b = LaurentMatrix::from_rows(vec![vec![
            LaurentPoly::from_fracs(0, &[1, -1], 1),
            LaurentPoly::from_fracs(0, &[-1, 1], 1),
        ]]);
        assert!(balanced_vm(&b, 2, 4) >= 1);
        let q = balanced_factorize(&b, 1).unwrap();
        assert_eq!(balanced_assemble(&q, 1, 2), b);
        let q0 = balanced_factorize(&b, 0).unwrap();
        assert_eq!(q0.coset_row(2), b);
        let not = LaurentMatrix::from_rows(vec![vec![LaurentPoly::one(), LaurentPoly::zero()]]);
        assert!(matches!(balanced_factorize(&not, 1), Err(Error::NotBalanced(_))));
    }
}
