//! Laurent polynomials in `z = e^{-i xi}` and dense matrices of them.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};


use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{BigRational, GaussRational, QuadScalar};

/// Sparse Laurent polynomial `sum_k c_k z^k`; stored coefficients are nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, GaussRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussRational::one())
    }

    pub fn constant(c: GaussRational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: GaussRational, k: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(k, &c);
        p
    }

    /// `z^k`.
    pub fn z_pow(k: i64) -> Self {
        Self::monomial(GaussRational::one(), k)
    }

    pub fn from_coeffs(kmin: i64, coeffs: Vec<GaussRational>) -> Self {
        let mut p = Self::zero();
        for (j, c) in coeffs.into_iter().enumerate() {
            p.add_term(kmin + j as i64, &c);
        }
        p
    }

    /// `(1/den) * sum_j nums[j] z^{kmin+j}`.
    pub fn from_fracs(kmin: i64, nums: &[i64], den: i64) -> Self {
        Self::from_coeffs(kmin, nums.iter().map(|&n| GaussRational::from_frac(n, den)).collect())
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, GaussRational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (k, c) in terms {
            p.add_term(k, &c);
        }
        p
    }

    /// `(1 - z)^m`.
    pub fn one_minus_z_pow(m: usize) -> Self {
        Self::from_fracs(0, &[1, -1], 1).pow(m)
    }

    pub fn add_term(&mut self, k: i64, c: &GaussRational) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(k).or_default();
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn coeff(&self, k: i64) -> GaussRational {
        self.coeffs.get(&k).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &GaussRational)> + '_ {
        self.coeffs.iter().map(|(&k, c)| (k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeff(0).is_one()
    }

    pub fn kmin(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn kmax(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn support(&self) -> Option<(i64, i64)> {
        Some((self.kmin()?, self.kmax()?))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// `Some((c, k))` when the polynomial is `c z^k` with `c != 0`.
    pub fn as_monomial(&self) -> Option<(GaussRational, i64)> {
        if self.coeffs.len() == 1 {
            let (&k, c) = self.coeffs.iter().next()?;
            Some((c.clone(), k))
        } else {
            None
        }
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { coeffs: self.coeffs.iter().map(|(&k, x)| (k, x * c)).collect() }
    }

    pub fn scale_rat(&self, q: &BigRational) -> Self {
        self.scale(&GaussRational::real(q.clone()))
    }

    /// Multiply by `z^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly { coeffs: self.coeffs.iter().map(|(&j, c)| (j + k, c.clone())).collect() }
    }

    /// Adjoint: `c_k -> conj(c_{-k})`, i.e. the symbol's complex conjugate on the circle.
    pub fn star(&self) -> Self {
        LaurentPoly { coeffs: self.coeffs.iter().map(|(&k, c)| (-k, c.conj())).collect() }
    }

    /// `p(xi) -> p(M xi)`.
    pub fn upsample(&self, m: usize) -> Self {
        let m = m as i64;
        LaurentPoly { coeffs: self.coeffs.iter().map(|(&k, c)| (m * k, c.clone())).collect() }
    }

    /// Coset sequence `u(gamma + M k)` for any integer `gamma`.
    pub fn coset(&self, gamma: i64, m: usize) -> Self {
        let m = m as i64;
        LaurentPoly {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(&k, _)| (k - gamma).rem_euclid(m) == 0)
                .map(|(&k, c)| ((k - gamma).div_euclid(m), c.clone()))
                .collect(),
        }
    }

    /// Inverse of [`LaurentPoly::coset`]: `sum_gamma parts[gamma](z^M) z^gamma`.
    pub fn merge(parts: &[LaurentPoly]) -> Self {
        let m = parts.len();
        let mut out = Self::zero();
        for (g, p) in parts.iter().enumerate() {
            out = &out + &p.upsample(m).shift(g as i64);
        }
        out
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    pub fn eval(&self, z: &GaussRational) -> Result<GaussRational> {
        let mut acc = GaussRational::zero();
        if self.is_zero() {
            return Ok(acc);
        }
        let zinv = if self.kmin().unwrap_or(0) < 0 { Some(z.inv()?) } else { None };
        for (&k, c) in &self.coeffs {
            let p = if k >= 0 { z.pow(k as u32) } else { zinv.as_ref().unwrap().pow((-k) as u32) };
            acc += &(c * &p);
        }
        Ok(acc)
    }

    /// Floating-point value of the symbol at `xi`.
    pub fn eval_xi(&self, xi: f64) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (&k, c) in &self.coeffs {
            let (cr, ci) = c.to_f64();
            let (s, co) = (-(k as f64) * xi).sin_cos();
            re += cr * co - ci * s;
            im += cr * s + ci * co;
        }
        (re, im)
    }

    /// Remove the lowest power: `self = z^k * p` with `p(0) != 0`.
    pub fn strip_monomial(&self) -> (i64, LaurentPoly) {
        match self.kmin() {
            Some(k) => (k, self.shift(-k)),
            None => (0, Self::zero()),
        }
    }

    /// Polynomial division with remainder; both operands must have `kmin >= 0`.
    pub fn div_rem(&self, d: &LaurentPoly) -> Result<(LaurentPoly, LaurentPoly)> {
        let dmax = d.kmax().ok_or(Error::DivisionByZero)?;
        let lead_inv = d.coeff(dmax).inv()?;
        let mut rem = self.clone();
        let mut q = LaurentPoly::zero();
        while let Some(top) = rem.kmax() {
            if top < dmax {
                break;
            }
            let c = &rem.coeff(top) * &lead_inv;
            let t = LaurentPoly::monomial(c, top - dmax);
            rem = &rem - &(&t * d);
            q = &q + &t;
        }
        Ok((q, rem))
    }

    /// Exact quotient `self / d` in the Laurent ring.
    pub fn div_exact(&self, d: &LaurentPoly) -> Result<LaurentPoly> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let (ka, a) = self.strip_monomial();
        let (kd, dd) = d.strip_monomial();
        let (q, r) = a.div_rem(&dd)?;
        if !r.is_zero() {
            return Err(Error::NotDivisible { what: format!("({self}) / ({d})"), remainder: r.to_string() });
        }
        Ok(q.shift(ka - kd))
    }

    pub fn max_abs_degree(&self) -> i64 {
        self.coeffs.keys().map(|k| k.abs()).max().unwrap_or(0)
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&k, c) in &o.coeffs {
            out.add_term(k, c);
        }
        out
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&k, c) in &o.coeffs {
            out.add_term(k, &-c);
        }
        out
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        if self.coeffs.len() <= 2 || o.coeffs.len() <= 2 {
            let mut out = LaurentPoly::zero();
            for (&i, a) in &self.coeffs {
                for (&j, b) in &o.coeffs {
                    out.add_term(i + j, &(a * b));
                }
            }
            return out;
        }
        IntPoly::from_poly(self).mul(&IntPoly::from_poly(o)).to_poly()
    }
}

/// `(1/den) sum_k (re_k + i im_k) z^{kmin + k}` with integer numerators; products skip gcds.
#[derive(Clone, Debug)]
struct IntPoly {
    kmin: i64,
    den: BigInt,
    re: Vec<BigInt>,
    im: Option<Vec<BigInt>>,
}

impl IntPoly {
    fn zero() -> Self {
        IntPoly { kmin: 0, den: BigInt::one(), re: Vec::new(), im: None }
    }

    fn from_poly(p: &LaurentPoly) -> Self {
        let Some((kmin, kmax)) = p.support() else {
            return Self::zero();
        };
        let mut den = BigInt::one();
        for c in p.coeffs.values() {
            den = den.lcm(c.re.denom());
            den = den.lcm(c.im.denom());
        }
        let len = (kmax - kmin + 1) as usize;
        let mut re = vec![BigInt::zero(); len];
        let mut im = vec![BigInt::zero(); len];
        let mut has_im = false;
        for (&k, c) in &p.coeffs {
            let idx = (k - kmin) as usize;
            re[idx] = c.re.numer() * (&den / c.re.denom());
            if !c.im.is_zero() {
                has_im = true;
                im[idx] = c.im.numer() * (&den / c.im.denom());
            }
        }
        IntPoly { kmin, den, re, im: has_im.then_some(im) }
    }

    fn conv(a: &[BigInt], b: &[BigInt], out: &mut [BigInt], sign: bool) {
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if sign {
                    out[i + j] += x * y;
                } else {
                    out[i + j] -= x * y;
                }
            }
        }
    }

    fn mul(&self, o: &IntPoly) -> IntPoly {
        if self.re.is_empty() || o.re.is_empty() {
            return Self::zero();
        }
        let len = self.re.len() + o.re.len() - 1;
        let mut re = vec![BigInt::zero(); len];
        Self::conv(&self.re, &o.re, &mut re, true);
        let mut im = None;
        if self.im.is_some() || o.im.is_some() {
            let mut iv = vec![BigInt::zero(); len];
            if let Some(ai) = &self.im {
                Self::conv(ai, &o.re, &mut iv, true);
                if let Some(bi) = &o.im {
                    Self::conv(ai, bi, &mut re, false);
                }
            }
            if let Some(bi) = &o.im {
                Self::conv(&self.re, bi, &mut iv, true);
            }
            im = Some(iv);
        }
        IntPoly { kmin: self.kmin + o.kmin, den: &self.den * &o.den, re, im }
    }

    /// In-place `self += o`.
    fn add_assign(&mut self, o: &IntPoly) {
        if o.re.is_empty() {
            return;
        }
        if self.re.is_empty() {
            *self = o.clone();
            return;
        }
        let den = self.den.lcm(&o.den);
        let fs = &den / &self.den;
        let fo = &den / &o.den;
        let kmin = self.kmin.min(o.kmin);
        let kmax = (self.kmin + self.re.len() as i64).max(o.kmin + o.re.len() as i64);
        let len = (kmax - kmin) as usize;
        let mut re = vec![BigInt::zero(); len];
        let want_im = self.im.is_some() || o.im.is_some();
        let mut im = if want_im { Some(vec![BigInt::zero(); len]) } else { None };
        for (src, f) in [(&*self, &fs), (o, &fo)] {
            let off = (src.kmin - kmin) as usize;
            for (k, x) in src.re.iter().enumerate() {
                if !x.is_zero() {
                    re[off + k] += x * f;
                }
            }
            if let (Some(si), Some(di)) = (&src.im, im.as_mut()) {
                for (k, x) in si.iter().enumerate() {
                    if !x.is_zero() {
                        di[off + k] += x * f;
                    }
                }
            }
        }
        *self = IntPoly { kmin, den, re, im };
    }

    fn to_poly(&self) -> LaurentPoly {
        let mut coeffs = BTreeMap::new();
        for (k, x) in self.re.iter().enumerate() {
            let y = self.im.as_ref().map(|v| &v[k]);
            if x.is_zero() && y.is_none_or(|y| y.is_zero()) {
                continue;
            }
            let re = BigRational::new(x.clone(), self.den.clone());
            let im = y.map(|y| BigRational::new(y.clone(), self.den.clone())).unwrap_or_default();
            coeffs.insert(self.kmin + k as i64, GaussRational::new(re, im));
        }
        LaurentPoly { coeffs }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { coeffs: self.coeffs.iter().map(|(&k, c)| (k, -c)).collect() }
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: LaurentPoly) -> LaurentPoly {
        &self + &o
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: LaurentPoly) -> LaurentPoly {
        &self - &o
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: LaurentPoly) -> LaurentPoly {
        &self * &o
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl From<GaussRational> for LaurentPoly {
    fn from(c: GaussRational) -> Self {
        LaurentPoly::constant(c)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&k, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{k}")?,
            }
        }
        Ok(())
    }
}

/// Dense row-major matrix of Laurent polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentMatrix {
    rows: usize,
    cols: usize,
    data: Vec<LaurentPoly>,
}

impl LaurentMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        LaurentMatrix { rows, cols, data: vec![LaurentPoly::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, LaurentPoly::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<LaurentPoly>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        LaurentMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> LaurentPoly) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        LaurentMatrix { rows, cols, data }
    }

    pub fn scalar(p: LaurentPoly) -> Self {
        LaurentMatrix { rows: 1, cols: 1, data: vec![p] }
    }

    pub fn diag(entries: Vec<LaurentPoly>) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, p) in entries.into_iter().enumerate() {
            m.set(i, i, p);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: LaurentPoly) {
        self.data[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> impl Iterator<Item = &LaurentPoly> {
        self.data.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|p| p.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.rows)
    }

    pub fn map(&self, f: impl Fn(&LaurentPoly) -> LaurentPoly) -> Self {
        LaurentMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        self.map(|p| p.scale(c))
    }

    pub fn scale_rat(&self, q: &BigRational) -> Self {
        self.map(|p| p.scale_rat(q))
    }

    pub fn scale_poly(&self, q: &LaurentPoly) -> Self {
        self.map(|p| p * q)
    }

    pub fn shift(&self, k: i64) -> Self {
        self.map(|p| p.shift(k))
    }

    pub fn upsample(&self, m: usize) -> Self {
        self.map(|p| p.upsample(m))
    }

    pub fn coset(&self, gamma: i64, m: usize) -> Self {
        self.map(|p| p.coset(gamma, m))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Conjugate transpose of the symbol: `a*(k) = conj(a(-k))^T`.
    pub fn star(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).star())
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        self.same_shape(o, "add")?;
        Ok(LaurentMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self> {
        self.same_shape(o, "sub")?;
        Ok(LaurentMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch(format!(
                "mul {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let left: Vec<IntPoly> = self.data.iter().map(IntPoly::from_poly).collect();
        let right: Vec<IntPoly> = o.data.iter().map(IntPoly::from_poly).collect();
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = IntPoly::zero();
                for k in 0..self.cols {
                    let (a, b) = (&left[i * self.cols + k], &right[k * o.cols + j]);
                    if a.re.is_empty() || b.re.is_empty() {
                        continue;
                    }
                    acc.add_assign(&a.mul(b));
                }
                out.data[i * o.cols + j] = acc.to_poly();
            }
        }
        Ok(out)
    }

    fn same_shape(&self, o: &Self, op: &str) -> Result<()> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(Error::DimensionMismatch(format!(
                "{op} {}x{} with {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(())
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    pub fn hstack(parts: &[LaurentMatrix]) -> Self {
        let rows = parts[0].rows;
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let mut c = 0;
        for p in parts {
            assert_eq!(p.rows, rows, "hstack row mismatch");
            out.set_block(0, c, p);
            c += p.cols;
        }
        out
    }

    pub fn vstack(parts: &[LaurentMatrix]) -> Self {
        let cols = parts[0].cols;
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut out = Self::zeros(rows, cols);
        let mut r = 0;
        for p in parts {
            assert_eq!(p.cols, cols, "vstack column mismatch");
            out.set_block(r, 0, p);
            r += p.rows;
        }
        out
    }

    pub fn block_diag(parts: &[LaurentMatrix]) -> Self {
        let rows = parts.iter().map(|p| p.rows).sum();
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r, mut c) = (0, 0);
        for p in parts {
            out.set_block(r, c, p);
            r += p.rows;
            c += p.cols;
        }
        out
    }

    pub fn row(&self, i: usize) -> Self {
        self.block(i, 0, 1, self.cols)
    }

    pub fn col(&self, j: usize) -> Self {
        self.block(0, j, self.rows, 1)
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn det(&self) -> Result<LaurentPoly> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("det of non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(LaurentPoly::one());
        }
        let mut w: Vec<Vec<LaurentPoly>> =
            (0..n).map(|i| (0..n).map(|j| self.get(i, j).clone()).collect()).collect();
        let mut sign = false;
        let mut prev = LaurentPoly::one();
        for k in 0..n - 1 {
            if w[k][k].is_zero() {
                match (k + 1..n).find(|&i| !w[i][k].is_zero()) {
                    Some(p) => {
                        w.swap(k, p);
                        sign = !sign;
                    }
                    None => return Ok(LaurentPoly::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&w[i][j] * &w[k][k]) - &(&w[i][k] * &w[k][j]);
                    w[i][j] = num.div_exact(&prev)?;
                }
                w[i][k] = LaurentPoly::zero();
            }
            prev = w[k][k].clone();
        }
        let d = w[n - 1][n - 1].clone();
        Ok(if sign { -d } else { d })
    }

    fn minor(&self, skip_r: usize, skip_c: usize) -> Self {
        let n = self.rows;
        Self::from_fn(n - 1, n - 1, |i, j| {
            let ii = if i < skip_r { i } else { i + 1 };
            let jj = if j < skip_c { j } else { j + 1 };
            self.get(ii, jj).clone()
        })
    }

    pub fn adjugate(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("adjugate of non-square matrix".into()));
        }
        let n = self.rows;
        if n == 1 {
            return Ok(Self::identity(1));
        }
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let c = self.minor(j, i).det()?;
                out.set(i, j, if (i + j) % 2 == 0 { c } else { -c });
            }
        }
        Ok(out)
    }

    /// Inverse for matrices whose determinant is a nonzero monomial.
    pub fn strong_inverse(&self) -> Result<Self> {
        let d = self.det()?;
        let Some((c, k)) = d.as_monomial() else {
            return Err(Error::NotStronglyInvertible(d.to_string()));
        };
        let inv = LaurentPoly::monomial(c.inv()?, -k);
        Ok(self.adjugate()?.scale_poly(&inv))
    }

    pub fn is_strongly_invertible(&self) -> bool {
        self.det().map(|d| d.as_monomial().is_some()).unwrap_or(false)
    }

    /// Entrywise exact division by `d`.
    pub fn divide_exact(&self, d: &LaurentPoly) -> Result<Self> {
        let mut data = Vec::with_capacity(self.data.len());
        for (idx, p) in self.data.iter().enumerate() {
            data.push(p.div_exact(d).map_err(|e| match e {
                Error::NotDivisible { remainder, .. } => Error::NotDivisible {
                    what: format!("entry ({}, {})", idx / self.cols, idx % self.cols),
                    remainder,
                },
                other => other,
            })?);
        }
        Ok(LaurentMatrix { rows: self.rows, cols: self.cols, data })
    }

    /// The `M` cosets, `gamma = 0..M-1`.
    pub fn coset_split(&self, m: usize) -> CosetSplit {
        CosetSplit { dilation: m, parts: (0..m as i64).map(|g| self.coset(g, m)).collect() }
    }

    /// `[u^[0], ..., u^[M-1]]` placed side by side.
    pub fn coset_row(&self, m: usize) -> Self {
        Self::hstack(&self.coset_split(m).parts)
    }

    pub fn max_abs_degree(&self) -> i64 {
        self.data.iter().map(|p| p.max_abs_degree()).max().unwrap_or(0)
    }

    pub fn eval_xi(&self, xi: f64) -> Vec<Vec<(f64, f64)>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).eval_xi(xi)).collect()).collect()
    }

    pub fn eval(&self, z: &GaussRational) -> Result<Vec<Vec<GaussRational>>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).eval(z)).collect())
            .collect()
    }

    /// Least and greatest degree over all entries.
    pub fn support(&self) -> Option<(i64, i64)> {
        let lo = self.data.iter().filter_map(|p| p.kmin()).min()?;
        let hi = self.data.iter().filter_map(|p| p.kmax()).max()?;
        Some((lo, hi))
    }

    /// Constant matrix of coefficients at degree `k`.
    pub fn coeff_matrix(&self, k: i64) -> Vec<Vec<GaussRational>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).coeff(k)).collect()).collect()
    }
}

impl<'a> Add<&'a LaurentMatrix> for &'a LaurentMatrix {
    type Output = LaurentMatrix;
    fn add(self, o: &LaurentMatrix) -> LaurentMatrix {
        self.checked_add(o).expect("matrix add")
    }
}

impl<'a> Sub<&'a LaurentMatrix> for &'a LaurentMatrix {
    type Output = LaurentMatrix;
    fn sub(self, o: &LaurentMatrix) -> LaurentMatrix {
        self.checked_sub(o).expect("matrix sub")
    }
}

impl<'a> Mul<&'a LaurentMatrix> for &'a LaurentMatrix {
    type Output = LaurentMatrix;
    fn mul(self, o: &LaurentMatrix) -> LaurentMatrix {
        self.checked_mul(o).expect("matrix mul")
    }
}

impl Neg for &LaurentMatrix {
    type Output = LaurentMatrix;
    fn neg(self) -> LaurentMatrix {
        self.map(|p| -p)
    }
}

impl fmt::Display for LaurentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetSplit {
    pub dilation: usize,
    pub parts: Vec<LaurentMatrix>,
}

impl CosetSplit {
    pub fn merge(&self) -> LaurentMatrix {
        let m = self.dilation;
        let mut out = LaurentMatrix::zeros(self.parts[0].rows(), self.parts[0].cols());
        for (g, p) in self.parts.iter().enumerate() {
            out = &out + &p.upsample(m).shift(g as i64);
        }
        out
    }
}

/// `(Mr) x (Mr)` block matrix with block `(l, k)` equal to the coset `u^[k-l]`.
pub fn build_e(u: &LaurentMatrix, m: usize) -> LaurentMatrix {
    assert!(u.is_square(), "build_e needs a square filter");
    let r = u.rows();
    let mut out = LaurentMatrix::zeros(m * r, m * r);
    for l in 0..m {
        for k in 0..m {
            out.set_block(l * r, k * r, &u.coset(k as i64 - l as i64, m));
        }
    }
    out
}

/// `Delta_m = diag((1-z)^m, 1, ..., 1)`.
pub fn delta_m(m: usize, r: usize) -> LaurentMatrix {
    let mut d = LaurentMatrix::identity(r);
    d.set(0, 0, LaurentPoly::one_minus_z_pow(m));
    d
}

/// A Laurent matrix times a single global scalar, used to carry `sqrt` factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledMatrix {
    pub scale: QuadScalar,
    pub mat: LaurentMatrix,
}

impl ScaledMatrix {
    pub fn new(scale: QuadScalar, mat: LaurentMatrix) -> Self {
        ScaledMatrix { scale, mat }
    }

    pub fn rational(mat: LaurentMatrix) -> Self {
        ScaledMatrix { scale: QuadScalar::one(), mat }
    }

    pub fn mul(&self, o: &ScaledMatrix) -> Result<ScaledMatrix> {
        Ok(ScaledMatrix { scale: self.scale.mul(&o.scale)?, mat: self.mat.checked_mul(&o.mat)? })
    }

    pub fn star(&self) -> ScaledMatrix {
        ScaledMatrix { scale: self.scale.conj(), mat: self.mat.star() }
    }

    /// Fold the scale into the coefficients; requires a rational scale.
    pub fn to_rational(&self) -> Result<LaurentMatrix> {
        match self.scale.to_rational() {
            Some(c) => Ok(self.mat.scale(&c)),
            None => Err(Error::RadicandMismatch(self.scale.radicand.to_string(), "1".into())),
        }
    }

    /// Float entries of the symbol at `xi`, scale included.
    pub fn eval_xi(&self, xi: f64) -> Vec<Vec<(f64, f64)>> {
        let (sr, si) = self.scale.to_f64();
        self.mat
            .eval_xi(xi)
            .into_iter()
            .map(|row| row.into_iter().map(|(a, b)| (a * sr - b * si, a * si + b * sr)).collect())
            .collect()
    }

    pub fn scale2(&self) -> BigRational {
        self.scale.norm_sqr()
    }
}

impl From<LaurentMatrix> for ScaledMatrix {
    fn from(m: LaurentMatrix) -> Self {
        ScaledMatrix::rational(m)
    }
}
