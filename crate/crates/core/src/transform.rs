//! Discrete multiframelet transforms: subdivision and transition operators, multi-level
//! analysis/synthesis, and the convolution-invertibility classes of `Theta`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{rat, BigRational, GaussRational, QuadScalar};
use crate::laurent::{LaurentMatrix, LaurentPoly, ScaledMatrix};
use crate::linalg;
use crate::moments::{matching_filter, refinable_jets};
use crate::qtconstruct::{OepBank, QtFilterBank};
use crate::sturm::{RealPoly, SturmSequence};

type GInt = (BigInt, BigInt);

fn gmul_acc(acc: &mut GInt, x: &GInt, y: &GInt, conj_y: bool) {
    let (a, b) = x;
    let (c, d) = y;
    if !a.is_zero() {
        if !c.is_zero() {
            acc.0 += a * c;
        }
        if !d.is_zero() {
            if conj_y {
                acc.1 -= a * d;
            } else {
                acc.1 += a * d;
            }
        }
    }
    if !b.is_zero() {
        if !c.is_zero() {
            acc.1 += b * c;
        }
        if !d.is_zero() {
            if conj_y {
                acc.0 += b * d;
            } else {
                acc.0 -= b * d;
            }
        }
    }
}

fn gzero() -> GInt {
    (BigInt::zero(), BigInt::zero())
}

/// Numerators of `c` over the common denominator `den` (which must be a multiple of its denominators).
fn to_gint(c: &GaussRational, den: &BigInt) -> GInt {
    (c.re.numer() * (den / c.re.denom()), c.im.numer() * (den / c.im.denom()))
}

fn common_den<'a>(cs: impl Iterator<Item = &'a GaussRational>) -> BigInt {
    cs.fold(BigInt::one(), |d, c| d.lcm(c.re.denom()).lcm(c.im.denom()))
}

/// Finitely supported sequence of `1 x r` rows, all multiplied by one global scale.
///
/// Entries are stored as Gaussian-integer numerators over a shared denominator.
#[derive(Clone, Debug)]
pub struct Signal {
    pub r: usize,
    pub scale: QuadScalar,
    den: BigInt,
    data: BTreeMap<i64, Vec<GInt>>,
}

impl PartialEq for Signal {
    fn eq(&self, o: &Self) -> bool {
        self.same_values(o)
    }
}

impl Eq for Signal {}

impl Signal {
    pub fn zero(r: usize) -> Self {
        Signal { r, scale: QuadScalar::one(), den: BigInt::one(), data: BTreeMap::new() }
    }

    pub fn from_map(r: usize, data: BTreeMap<i64, Vec<GaussRational>>) -> Result<Self> {
        if let Some(v) = data.values().find(|v| v.len() != r) {
            return Err(Error::DimensionMismatch(format!("signal row of width {} in a width-{r} signal", v.len())));
        }
        let den = common_den(data.values().flatten());
        let data = data
            .into_iter()
            .filter(|(_, v)| v.iter().any(|c| !c.is_zero()))
            .map(|(k, v)| (k, v.iter().map(|c| to_gint(c, &den)).collect()))
            .collect();
        Ok(Signal { r, scale: QuadScalar::one(), den, data })
    }

    /// Scalar signal `v(kmin + j) = values[j]`.
    pub fn scalar(kmin: i64, values: Vec<GaussRational>) -> Self {
        let map = values.into_iter().enumerate().map(|(j, c)| (kmin + j as i64, vec![c])).collect();
        Self::from_map(1, map).expect("width 1")
    }

    pub fn with_scale(mut self, scale: QuadScalar) -> Self {
        self.scale = scale;
        self
    }

    fn raise_den(&mut self, den: &BigInt) {
        let f = den / &self.den;
        if f.is_one() {
            return;
        }
        for row in self.data.values_mut() {
            for (a, b) in row.iter_mut() {
                *a *= &f;
                *b *= &f;
            }
        }
        self.den = den.clone();
    }

    /// Divide numerators and denominator by their common content.
    fn normalized(mut self) -> Self {
        let mut g = self.den.clone();
        for (a, b) in self.data.values().flatten() {
            if g.is_one() {
                return self;
            }
            g = g.gcd(a).gcd(b);
        }
        if !g.is_one() {
            for (a, b) in self.data.values_mut().flatten() {
                *a /= &g;
                *b /= &g;
            }
            self.den /= &g;
        }
        self
    }

    pub fn set(&mut self, k: i64, v: Vec<GaussRational>) -> Result<()> {
        if v.len() != self.r {
            return Err(Error::DimensionMismatch(format!("signal row of width {} in a width-{} signal", v.len(), self.r)));
        }
        if v.iter().all(|c| c.is_zero()) {
            self.data.remove(&k);
            return Ok(());
        }
        let den = common_den(v.iter()).lcm(&self.den);
        self.raise_den(&den);
        self.data.insert(k, v.iter().map(|c| to_gint(c, &self.den)).collect());
        Ok(())
    }

    /// Unscaled row at `k`.
    pub fn get(&self, k: i64) -> Vec<GaussRational> {
        match self.data.get(&k) {
            Some(row) => row
                .iter()
                .map(|(a, b)| GaussRational::new(BigRational::new(a.clone(), self.den.clone()), BigRational::new(b.clone(), self.den.clone())))
                .collect(),
            None => vec![GaussRational::zero(); self.r],
        }
    }

    /// Unscaled nonzero rows.
    pub fn entries(&self) -> impl Iterator<Item = (i64, Vec<GaussRational>)> + '_ {
        self.data.keys().map(|&k| (k, self.get(k)))
    }

    pub fn support(&self) -> Option<(i64, i64)> {
        Some((*self.data.keys().next()?, *self.data.keys().next_back()?))
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.data.is_empty() || self.scale.is_zero()
    }

    /// `1 x r` Laurent row `sum_k v(k) z^k` (scale not included).
    pub fn to_row(&self) -> LaurentMatrix {
        LaurentMatrix::from_fn(1, self.r, |_, j| LaurentPoly::from_terms(self.entries().map(|(k, v)| (k, v[j].clone()))))
    }

    pub fn from_row(row: &LaurentMatrix, scale: QuadScalar) -> Self {
        let mut data: BTreeMap<i64, Vec<GaussRational>> = BTreeMap::new();
        for j in 0..row.cols() {
            for (k, c) in row.get(0, j).terms() {
                data.entry(k).or_insert_with(|| vec![GaussRational::zero(); row.cols()])[j] = c.clone();
            }
        }
        Self::from_map(row.cols(), data).expect("consistent widths").with_scale(scale)
    }

    /// `q` with `o.scale = q * self.scale`, when it is a Gaussian rational.
    fn scale_ratio(&self, o: &Signal) -> Option<GaussRational> {
        o.scale.mul(&self.scale.inv().ok()?).ok()?.to_rational()
    }

    /// Same sequence with global scale `scale`; numerators become `q * data` over `den * q_den`.
    fn rescaled(&self, scale: &QuadScalar) -> Result<Signal> {
        let target = Signal { r: self.r, scale: scale.clone(), den: BigInt::one(), data: BTreeMap::new() };
        let q = target
            .scale_ratio(self)
            .ok_or_else(|| Error::RadicandMismatch(self.scale.to_string(), scale.to_string()))?;
        let qd = common_den(std::iter::once(&q));
        let qn = to_gint(&q, &qd);
        let data = self
            .data
            .iter()
            .map(|(&k, row)| {
                (
                    k,
                    row.iter()
                        .map(|x| {
                            let mut acc = gzero();
                            gmul_acc(&mut acc, x, &qn, false);
                            acc
                        })
                        .collect(),
                )
            })
            .collect();
        Ok(Signal { r: self.r, scale: scale.clone(), den: &self.den * qd, data })
    }

    pub fn add(&self, o: &Signal) -> Result<Signal> {
        if self.r != o.r {
            return Err(Error::DimensionMismatch(format!("adding width {} and {} signals", self.r, o.r)));
        }
        if o.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(o.clone());
        }
        let mut o = o.rescaled(&self.scale)?;
        let mut out = self.clone();
        let den = out.den.lcm(&o.den);
        out.raise_den(&den);
        o.raise_den(&den);
        for (k, row) in o.data {
            match out.data.get_mut(&k) {
                Some(cur) => {
                    for (x, y) in cur.iter_mut().zip(row) {
                        x.0 += y.0;
                        x.1 += y.1;
                    }
                    if cur.iter().all(|(a, b)| a.is_zero() && b.is_zero()) {
                        out.data.remove(&k);
                    }
                }
                None => {
                    out.data.insert(k, row);
                }
            }
        }
        Ok(out.normalized())
    }

    /// Equality of the represented sequences (scale included).
    pub fn same_values(&self, o: &Signal) -> bool {
        if self.r != o.r {
            return false;
        }
        if self.is_zero() || o.is_zero() {
            return self.is_zero() && o.is_zero();
        }
        let Ok(o) = o.rescaled(&self.scale) else {
            return false;
        };
        if self.data.len() != o.data.len() {
            return false;
        }
        self.data.iter().zip(&o.data).all(|((k1, r1), (k2, r2))| {
            k1 == k2
                && r1.iter().zip(r2).all(|(x, y)| &x.0 * &o.den == &y.0 * &self.den && &x.1 * &o.den == &y.1 * &self.den)
        })
    }

    /// Scale folded into the data; requires a rational scale.
    pub fn to_rational(&self) -> Result<Signal> {
        self.rescaled(&QuadScalar::one())
    }

    pub fn value_f64(&self, k: i64) -> Vec<(f64, f64)> {
        let (sr, si) = self.scale.to_f64();
        self.get(k)
            .iter()
            .map(|c| {
                let (a, b) = c.to_f64();
                (a * sr - b * si, a * si + b * sr)
            })
            .collect()
    }
}

fn sqrt_m(m_dil: usize) -> QuadScalar {
    QuadScalar::sqrt(&rat(m_dil as i64, 1)).expect("small radicand")
}

/// Integer taps `u(k) = taps[k - kmin] / den`, row-major per tap.
#[derive(Clone, Debug, PartialEq, Eq)]
struct IntFilter {
    rows: usize,
    cols: usize,
    kmin: i64,
    den: BigInt,
    taps: Vec<Vec<GInt>>,
}

impl IntFilter {
    fn of(u: &LaurentMatrix) -> Self {
        let den = common_den(u.entries().flat_map(|p| p.terms().map(|(_, c)| c)));
        let (lo, hi) = u.support().unwrap_or((0, -1));
        let taps = (lo..=hi)
            .map(|k| u.entries().map(|p| to_gint(&p.coeff(k), &den)).collect())
            .collect();
        IntFilter { rows: u.rows(), cols: u.cols(), kmin: lo, den, taps }
    }
}

fn kron_pack(x: &[BigInt], bits: u64) -> BigInt {
    x.iter().rev().fold(BigInt::zero(), |acc, c| (acc << bits) + c)
}

/// Inverse of [`kron_pack`] for `n` coefficients with `|c| < 2^(bits - 1)`.
fn kron_unpack(p: BigInt, bits: u64, n: usize, out: &mut Vec<BigInt>) {
    if n == 1 {
        out.push(p);
        return;
    }
    let h = n / 2;
    let shift = bits * h as u64;
    let modulus = BigInt::one() << shift;
    let mut low = &p & (&modulus - 1u32);
    if low.bit(shift - 1) {
        low -= &modulus;
    }
    let high = (p - &low) >> shift;
    kron_unpack(low, bits, h, out);
    kron_unpack(high, bits, n - h, out);
}

/// Convolution of integer sequences by Kronecker substitution.
fn int_conv(x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
    let n = x.len() + y.len() - 1;
    if x.len().min(y.len()) < 8 {
        let mut out = vec![BigInt::zero(); n];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        return out;
    }
    let bx = x.iter().map(BigInt::bits).max().unwrap_or(0);
    let by = y.iter().map(BigInt::bits).max().unwrap_or(0);
    let bits = bx + by + (usize::BITS - x.len().min(y.len()).leading_zeros()) as u64 + 2;
    let mut out = Vec::with_capacity(n);
    kron_unpack(kron_pack(x, bits) * kron_pack(y, bits), bits, n, &mut out);
    out
}

/// Real and imaginary parts of a Gaussian-integer sequence; `None` when identically zero.
struct Parts {
    re: Option<Vec<BigInt>>,
    im: Option<Vec<BigInt>>,
}

impl Parts {
    fn of<'a>(xs: impl Iterator<Item = &'a GInt> + Clone) -> Self {
        let part = |f: fn(&GInt) -> &BigInt| {
            let v: Vec<BigInt> = xs.clone().map(|x| f(x).clone()).collect();
            v.iter().any(|c| !c.is_zero()).then_some(v)
        };
        Parts { re: part(|x| &x.0), im: part(|x| &x.1) }
    }

    fn is_zero(&self) -> bool {
        self.re.is_none() && self.im.is_none()
    }
}

/// `out[off + i] += (x * y)[i]`, with `y` conjugated on request.
fn gconv_acc(out: &mut [GInt], off: usize, x: &Parts, y: &Parts, conj_y: bool) {
    let mut acc = |a: &Option<Vec<BigInt>>, b: &Option<Vec<BigInt>>, imag: bool, negate: bool| {
        if let (Some(a), Some(b)) = (a, b) {
            for (slot, c) in out[off..].iter_mut().zip(int_conv(a, b)) {
                let t = if imag { &mut slot.1 } else { &mut slot.0 };
                if negate {
                    *t -= c;
                } else {
                    *t += c;
                }
            }
        }
    };
    acc(&x.re, &y.re, false, false);
    acc(&x.im, &y.im, false, !conj_y);
    acc(&x.re, &y.im, true, conj_y);
    acc(&x.im, &y.re, true, false);
}

/// Dense per-channel view of a signal on `[lo, hi]`.
fn dense_channel(v: &Signal, l: usize, lo: i64, hi: i64, step: i64) -> Vec<GInt> {
    let mut k = lo;
    let mut out = Vec::new();
    while k <= hi {
        out.push(v.data.get(&k).map_or_else(gzero, |row| row[l].clone()));
        k += step;
    }
    out
}

fn collect_rows(start: i64, step: i64, chans: Vec<Vec<GInt>>, out: &mut BTreeMap<i64, Vec<GInt>>) {
    let len = chans.first().map_or(0, Vec::len);
    for i in 0..len {
        let row: Vec<GInt> = chans.iter().map(|c| c[i].clone()).collect();
        if row.iter().any(|(a, b)| !a.is_zero() || !b.is_zero()) {
            out.insert(start + step * i as i64, row);
        }
    }
}

/// `[S_{u,M} v](n) = sqrt(M) sum_k v(k) u(n - Mk)`.
pub fn subdivision(v: &Signal, u: &ScaledMatrix, m_dil: usize) -> Result<Signal> {
    subdivision_int(v, &IntFilter::of(&u.mat), &u.scale, m_dil)
}

fn subdivision_int(v: &Signal, f: &IntFilter, u_scale: &QuadScalar, m_dil: usize) -> Result<Signal> {
    if v.r != f.rows {
        return Err(Error::DimensionMismatch(format!("signal width {} vs filter with {} rows", v.r, f.rows)));
    }
    let md = m_dil as i64;
    let mut out: BTreeMap<i64, Vec<GInt>> = BTreeMap::new();
    if let Some((vlo, vhi)) = v.support().filter(|_| !f.taps.is_empty()) {
        let xs: Vec<Parts> = (0..f.rows).map(|l| Parts::of(dense_channel(v, l, vlo, vhi, 1).iter())).collect();
        // n = kmin + rho + M (k + t) for taps j = kmin + rho + M t
        for rho in 0..m_dil.min(f.taps.len()) {
            let coset: Vec<&Vec<GInt>> = f.taps.iter().skip(rho).step_by(m_dil).collect();
            let len = (vhi - vlo) as usize + coset.len();
            let mut chans = vec![vec![gzero(); len]; f.cols];
            for (c, chan) in chans.iter_mut().enumerate() {
                for (l, x) in xs.iter().enumerate() {
                    let y = Parts::of(coset.iter().map(|tap| &tap[l * f.cols + c]));
                    if !x.is_zero() && !y.is_zero() {
                        gconv_acc(chan, 0, x, &y, false);
                    }
                }
            }
            collect_rows(f.kmin + rho as i64 + md * vlo, md, chans, &mut out);
        }
    }
    let scale = v.scale.mul(&sqrt_m(m_dil))?.mul(u_scale)?;
    Ok(Signal { r: f.cols, scale, den: &v.den * &f.den, data: out }.normalized())
}

/// `[T_{u,M} v](n) = sqrt(M) sum_k v(k) conj(u(k - Mn))^T`.
pub fn transition(v: &Signal, u: &ScaledMatrix, m_dil: usize) -> Result<Signal> {
    transition_int(v, &IntFilter::of(&u.mat), &u.scale, m_dil)
}

fn transition_int(v: &Signal, f: &IntFilter, u_scale: &QuadScalar, m_dil: usize) -> Result<Signal> {
    if v.r != f.cols {
        return Err(Error::DimensionMismatch(format!("signal width {} vs filter with {} columns", v.r, f.cols)));
    }
    let md = m_dil as i64;
    let mut out: BTreeMap<i64, Vec<GInt>> = BTreeMap::new();
    if let Some((vlo, vhi)) = v.support().filter(|_| !f.taps.is_empty()) {
        for rho in 0..m_dil.min(f.taps.len()) {
            // v(M n + j) with j = kmin + rho + M t reads w(q) = v(kmin + rho + M q) at q = n + t
            let base = f.kmin + rho as i64;
            let qlo = (vlo - base).div_euclid(md) + i64::from((vlo - base).rem_euclid(md) != 0);
            let qhi = (vhi - base).div_euclid(md);
            if qlo > qhi {
                continue;
            }
            let coset: Vec<&Vec<GInt>> = f.taps.iter().skip(rho).step_by(m_dil).collect();
            let tlen = coset.len();
            let xs: Vec<Parts> =
                (0..f.cols).map(|l| Parts::of(dense_channel(v, l, base + md * qlo, base + md * qhi, md).iter())).collect();
            let len = (qhi - qlo) as usize + tlen;
            let mut chans = vec![vec![gzero(); len]; f.rows];
            for (c, chan) in chans.iter_mut().enumerate() {
                for (l, x) in xs.iter().enumerate() {
                    let y = Parts::of(coset.iter().rev().map(|tap| &tap[c * f.cols + l]));
                    if !x.is_zero() && !y.is_zero() {
                        gconv_acc(chan, 0, x, &y, true);
                    }
                }
            }
            // conv index i pairs q = qlo + i' with t = T - t', so n = qlo + i - T
            let mut partial = BTreeMap::new();
            collect_rows(qlo - (tlen as i64 - 1), 1, chans, &mut partial);
            for (n, row) in partial {
                match out.get_mut(&n) {
                    Some(cur) => {
                        for (x, y) in cur.iter_mut().zip(row) {
                            x.0 += y.0;
                            x.1 += y.1;
                        }
                    }
                    None => {
                        out.insert(n, row);
                    }
                }
            }
        }
    }
    out.retain(|_, row| row.iter().any(|(a, b)| !a.is_zero() || !b.is_zero()));
    let scale = v.scale.mul(&sqrt_m(m_dil))?.mul(&u_scale.conj())?;
    Ok(Signal { r: f.rows, scale, den: &v.den * &f.den, data: out }.normalized())
}

/// [`subdivision`] as the Laurent product `sqrt(M) v(z^M) u(z)`.
pub fn subdivision_conv(v: &Signal, u: &ScaledMatrix, m_dil: usize) -> Result<Signal> {
    if v.r != u.mat.rows() {
        return Err(Error::DimensionMismatch(format!("signal width {} vs filter with {} rows", v.r, u.mat.rows())));
    }
    let row = v.to_row().upsample(m_dil).checked_mul(&u.mat)?;
    Ok(Signal::from_row(&row, v.scale.mul(&sqrt_m(m_dil))?.mul(&u.scale)?))
}

/// [`transition`] as `sqrt(M) [v * u^*](M n)`, the `0`-th coset of a Laurent product.
pub fn transition_conv(v: &Signal, u: &ScaledMatrix, m_dil: usize) -> Result<Signal> {
    if v.r != u.mat.cols() {
        return Err(Error::DimensionMismatch(format!("signal width {} vs filter with {} columns", v.r, u.mat.cols())));
    }
    let row = v.to_row().checked_mul(&u.mat.star())?.coset(0, m_dil);
    Ok(Signal::from_row(&row, v.scale.mul(&sqrt_m(m_dil))?.mul(&u.scale.conj())?))
}

/// `(v * u)(n) = sum_k v(k) u(n - k)`.
pub fn convolve(v: &Signal, u: &ScaledMatrix) -> Result<Signal> {
    let row = v.to_row().checked_mul(&u.mat)?;
    Ok(Signal::from_row(&row, v.scale.mul(&u.scale)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientPyramid {
    pub levels: usize,
    /// `details[j-1] = T_b T_a^{j-1} v`.
    pub details: Vec<Signal>,
    pub approx: Signal,
}

/// A filter converted to integer taps once, for repeated use.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Prepared {
    f: IntFilter,
    scale: QuadScalar,
}

impl Prepared {
    fn of(u: &ScaledMatrix) -> Self {
        Prepared { f: IntFilter::of(&u.mat), scale: u.scale.clone() }
    }
}

fn analyze_prepared(v: &Signal, a: &Prepared, b: &Prepared, m_dil: usize, levels: usize) -> Result<CoefficientPyramid> {
    if levels == 0 {
        return Err(Error::HypothesisViolated("at least one level is needed".into()));
    }
    let mut cur = v.clone();
    let mut details = Vec::with_capacity(levels);
    for _ in 0..levels {
        details.push(transition_int(&cur, &b.f, &b.scale, m_dil)?);
        cur = transition_int(&cur, &a.f, &a.scale, m_dil)?;
    }
    Ok(CoefficientPyramid { levels, details, approx: cur })
}

fn synthesize_prepared(p: &CoefficientPyramid, a: &Prepared, b: &Prepared, m_dil: usize) -> Result<Signal> {
    let mut cur = p.approx.clone();
    for w in p.details.iter().rev() {
        cur = subdivision_int(&cur, &a.f, &a.scale, m_dil)?.add(&subdivision_int(w, &b.f, &b.scale, m_dil)?)?;
    }
    Ok(cur)
}

/// `J`-level analysis with a generic low-pass/high-pass pair.
pub fn analyze_with(v: &Signal, a: &ScaledMatrix, b: &ScaledMatrix, m_dil: usize, levels: usize) -> Result<CoefficientPyramid> {
    analyze_prepared(v, &Prepared::of(a), &Prepared::of(b), m_dil, levels)
}

/// `J`-level synthesis with dual filters; no `Theta` step.
pub fn synthesize_with(p: &CoefficientPyramid, a: &ScaledMatrix, b: &ScaledMatrix, m_dil: usize) -> Result<Signal> {
    synthesize_prepared(p, &Prepared::of(a), &Prepared::of(b), m_dil)
}

/// Analysis and synthesis filters of a quasi-tight bank in its derived (`Theta = I`) form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformFilters {
    pub m_dil: usize,
    pub a: ScaledMatrix,
    pub b: ScaledMatrix,
    pub a_dual: ScaledMatrix,
    pub b_dual: ScaledMatrix,
    /// Integer forms of `a, b, a_dual, b_dual`.
    prepared: [Prepared; 4],
}

impl TransformFilters {
    /// `a~ = a_ring`, `b~ = Diag(eps) b_ring`.
    pub fn from_bank(bank: &QtFilterBank) -> Result<Self> {
        let oep = bank.derived_oep()?;
        let a = ScaledMatrix::rational(oep.a);
        let a_dual = ScaledMatrix::rational(oep.a_dual);
        let prepared = [Prepared::of(&a), Prepared::of(&oep.b), Prepared::of(&a_dual), Prepared::of(&oep.b_dual)];
        Ok(TransformFilters { m_dil: bank.m_dil, a, b: oep.b, a_dual, b_dual: oep.b_dual, prepared })
    }

    pub fn analyze(&self, v: &Signal, levels: usize) -> Result<CoefficientPyramid> {
        analyze_prepared(v, &self.prepared[0], &self.prepared[1], self.m_dil, levels)
    }

    pub fn synthesize(&self, p: &CoefficientPyramid) -> Result<Signal> {
        synthesize_prepared(p, &self.prepared[2], &self.prepared[3], self.m_dil)
    }
}

/// Analysis with the derived filters `a_ring`, `b_ring` of a quasi-tight bank.
pub fn analyze(v: &Signal, bank: &QtFilterBank, levels: usize) -> Result<CoefficientPyramid> {
    TransformFilters::from_bank(bank)?.analyze(v, levels)
}

/// Synthesis with `a~ = a_ring`, `b~ = Diag(eps) b_ring`.
pub fn synthesize(p: &CoefficientPyramid, bank: &QtFilterBank) -> Result<Signal> {
    TransformFilters::from_bank(bank)?.synthesize(p)
}

/// Analysis with the original filters of an OEP bank.
pub fn analyze_oep(v: &Signal, bank: &OepBank, levels: usize) -> Result<CoefficientPyramid> {
    analyze_with(v, &ScaledMatrix::rational(bank.a.clone()), &bank.b, bank.m_dil, levels)
}

/// Synthesis for an OEP bank: convolve the coarse data with `Theta`, reconstruct, then deconvolve.
pub fn synthesize_oep(p: &CoefficientPyramid, bank: &OepBank) -> Result<Signal> {
    let vt = convolve(&p.approx, &bank.theta)?;
    let q = CoefficientPyramid { levels: p.levels, details: p.details.clone(), approx: vt };
    let out = synthesize_with(&q, &ScaledMatrix::rational(bank.a_dual.clone()), &bank.b_dual, bank.m_dil)?;
    if !bank.theta.mat.is_strongly_invertible() {
        return Err(Error::DeconvolutionUnavailable);
    }
    let inv = ScaledMatrix::new(bank.theta.scale.inv()?, bank.theta.mat.strong_inverse()?);
    convolve(&out, &inv)
}

/// Indices `n` whose transition stencil `Mn + [lo, hi]` lies inside `[start, end]`.
pub fn valid_range(range: (i64, i64), support: (i64, i64), m_dil: usize) -> Option<(i64, i64)> {
    let md = m_dil as i64;
    let lo = (range.0 - support.0).div_euclid(md) + i64::from((range.0 - support.0).rem_euclid(md) != 0);
    let hi = (range.1 - support.1).div_euclid(md);
    (lo <= hi).then_some((lo, hi))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThetaClass {
    StronglyInvertible,
    NonvanishingDet,
    Singular,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaClassReport {
    pub class: ThetaClass,
    pub det: LaurentPoly,
    /// Distinct zeros of `det` on the unit circle.
    pub unit_circle_zeros: usize,
    pub method: &'static str,
}

fn gpoly_mul(a: &[GaussRational], b: &[GaussRational]) -> Vec<GaussRational> {
    let mut out = vec![GaussRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += &(x * y);
        }
    }
    out
}

fn gpoly_pow(a: &[GaussRational], e: usize) -> Vec<GaussRational> {
    (0..e).fold(vec![GaussRational::one()], |acc, _| gpoly_mul(&acc, a))
}

/// Distinct zeros on `|z| = 1` of an ordinary polynomial with nonzero constant term.
fn unit_circle_zeros(p: &LaurentPoly) -> usize {
    let d = p.kmax().unwrap_or(0) as usize;
    let at_minus_one = p.eval(&GaussRational::from_int(-1)).map(|v| v.is_zero()).unwrap_or(false);
    // z = (i - t)/(i + t) sweeps the circle minus z = -1 as t runs over the reals
    let i_minus_t = [GaussRational::i(), GaussRational::from_int(-1)];
    let i_plus_t = [GaussRational::i(), GaussRational::one()];
    let mut h = vec![GaussRational::zero(); d + 1];
    for (k, c) in p.terms() {
        let term = gpoly_mul(&gpoly_pow(&i_minus_t, k as usize), &gpoly_pow(&i_plus_t, d - k as usize));
        for (slot, x) in h.iter_mut().zip(&term) {
            *slot += &(c * x);
        }
    }
    let re = RealPoly::new(h.iter().map(|c| c.re.clone()).collect());
    let im = RealPoly::new(h.iter().map(|c| c.im.clone()).collect());
    let g = re.gcd(&im);
    let finite = if g.degree().unwrap_or(0) == 0 { 0 } else { SturmSequence::new(&g).count_real() };
    finite + usize::from(at_minus_one)
}

/// Which of the three convolution-invertibility classes `Theta` belongs to.
pub fn classify_theta_conv(theta: &LaurentMatrix) -> Result<ThetaClassReport> {
    let det = theta.det()?;
    if det.as_monomial().is_some() {
        return Ok(ThetaClassReport { class: ThetaClass::StronglyInvertible, det, unit_circle_zeros: 0, method: "exact" });
    }
    if det.is_zero() {
        return Ok(ThetaClassReport { class: ThetaClass::Singular, det, unit_circle_zeros: 0, method: "exact" });
    }
    let (_, p) = det.strip_monomial();
    let zeros = unit_circle_zeros(&p);
    let class = if zeros == 0 { ThetaClass::NonvanishingDet } else { ThetaClass::Singular };
    Ok(ThetaClassReport { class, det, unit_circle_zeros: zeros, method: "exact" })
}

/// `e^{-i xi0}` for `xi0 = quarter_turns * pi / 2`.
fn unit_point(quarter_turns: i64) -> GaussRational {
    GaussRational::i_pow(-quarter_turns)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnihilatorWitness {
    /// `v(k) = w e^{i k xi0}` on the window.
    pub signal: Signal,
    /// Indices of `v * Theta` whose stencil lies inside the window.
    pub interior: (i64, i64),
    pub verified: bool,
}

/// A windowed nonzero sequence annihilated by convolution with `Theta`, at `xi0 = quarter_turns * pi/2`.
pub fn annihilator_witness(theta: &LaurentMatrix, quarter_turns: i64, half_width: i64) -> Result<AnnihilatorWitness> {
    let r = theta.rows();
    let zeta = unit_point(quarter_turns);
    let val = theta.eval(&zeta)?;
    let transposed: linalg::Mat = (0..r).map(|i| (0..r).map(|j| val[j][i].clone()).collect()).collect();
    let ns = linalg::nullspace(&transposed, r);
    let w = ns.into_iter().next().ok_or(Error::NotSingularAtPoint)?;
    let step = zeta.conj();
    let mut sig = Signal::zero(r);
    for k in -half_width..=half_width {
        let ph = if k >= 0 { step.pow(k as u32) } else { zeta.pow((-k) as u32) };
        sig.set(k, w.iter().map(|c| c * &ph).collect())?;
    }
    let (lo, hi) = theta.support().unwrap_or((0, 0));
    let interior = (-half_width + hi, half_width + lo);
    let conv = convolve(&sig, &ScaledMatrix::rational(theta.clone()))?;
    let verified = interior.0 <= interior.1 && (interior.0..=interior.1).all(|n| conv.get(n).iter().all(|c| c.is_zero()));
    Ok(AnnihilatorWitness { signal: sig, interior, verified })
}

/// `[E v](k) = [v(rk), ..., v(rk + r - 1)]` for a scalar signal.
pub fn vector_convert(v: &Signal, r: usize) -> Result<Signal> {
    if v.r != 1 {
        return Err(Error::DimensionMismatch("vector conversion needs a scalar signal".into()));
    }
    let rr = r as i64;
    let mut out = Signal::zero(r).with_scale(v.scale.clone());
    for (k, x) in v.entries() {
        let (blk, off) = (k.div_euclid(rr), k.rem_euclid(rr) as usize);
        let mut row = out.get(blk);
        row[off] = x[0].clone();
        out.set(blk, row)?;
    }
    Ok(out)
}

pub fn vector_unconvert(v: &Signal) -> Result<Signal> {
    let rr = v.r as i64;
    let mut out = Signal::zero(1).with_scale(v.scale.clone());
    for (k, row) in v.entries() {
        for (j, x) in row.iter().enumerate() {
            out.set(k * rr + j as i64, vec![x.clone()])?;
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Component {
    Phi,
    Psi,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CascadeCurve {
    pub xs: Vec<f64>,
    /// One vector of component values per sample.
    pub ys: Vec<Vec<f64>>,
}

impl CascadeCurve {
    pub fn to_csv(&self) -> String {
        let width = self.ys.first().map_or(0, Vec::len);
        let mut out = String::from("x");
        for j in 1..=width {
            let _ = write!(out, ",y{j}");
        }
        out.push('\n');
        for (x, y) in self.xs.iter().zip(&self.ys) {
            let _ = write!(out, "{x}");
            for v in y {
                let _ = write!(out, ",{v}");
            }
            out.push('\n');
        }
        out
    }

    /// Riemann sum of each component.
    pub fn integral(&self) -> Vec<f64> {
        let h = if self.xs.len() > 1 { self.xs[1] - self.xs[0] } else { 0.0 };
        let width = self.ys.first().map_or(0, Vec::len);
        (0..width).map(|j| self.ys.iter().map(|y| y[j]).sum::<f64>() * h).collect()
    }
}

type CMat = Vec<Vec<(f64, f64)>>;

/// Dense float matrix polynomial `sum_k c[k - kmin] z^k`.
struct FloatPoly {
    kmin: i64,
    c: Vec<CMat>,
}

impl FloatPoly {
    fn of(u: &LaurentMatrix, scale: (f64, f64), stride: i64) -> Self {
        let (lo, hi) = u.support().unwrap_or((0, 0));
        let c = (lo..=hi)
            .map(|k| {
                u.coeff_matrix(k)
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|x| {
                                let (a, b) = x.to_f64();
                                (a * scale.0 - b * scale.1, a * scale.1 + b * scale.0)
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let mut p = FloatPoly { kmin: lo, c };
        if stride > 1 {
            p = p.upsample(stride);
        }
        p
    }

    fn upsample(self, stride: i64) -> Self {
        let (rows, cols) = (self.c[0].len(), self.c[0][0].len());
        let len = (self.c.len() - 1) * stride as usize + 1;
        let mut c = vec![vec![vec![(0.0, 0.0); cols]; rows]; len];
        for (k, m) in self.c.into_iter().enumerate() {
            c[k * stride as usize] = m;
        }
        FloatPoly { kmin: self.kmin * stride, c }
    }

    fn mul(&self, o: &FloatPoly) -> FloatPoly {
        let (rows, inner, cols) = (self.c[0].len(), o.c[0].len(), o.c[0][0].len());
        let mut c = vec![vec![vec![(0.0, 0.0); cols]; rows]; self.c.len() + o.c.len() - 1];
        for (i, x) in self.c.iter().enumerate() {
            for (j, y) in o.c.iter().enumerate() {
                let out = &mut c[i + j];
                for r in 0..rows {
                    for l in 0..inner {
                        let (a, b) = x[r][l];
                        if a == 0.0 && b == 0.0 {
                            continue;
                        }
                        for s in 0..cols {
                            let (p, q) = y[l][s];
                            out[r][s].0 += a * p - b * q;
                            out[r][s].1 += a * q + b * p;
                        }
                    }
                }
            }
        }
        FloatPoly { kmin: self.kmin + o.kmin, c }
    }
}

/// Samples of `phi` or `psi` at `x = n / M^levels` by iterating the refinement relation on `phi(0)`.
pub fn cascade_render(bank: &QtFilterBank, component: Component, levels: usize) -> Result<CascadeCurve> {
    cascade_mask(&bank.a, Some(&bank.b), bank.m_dil, component, levels)
}

/// [`cascade_render`] for a bare mask and optional high-pass filter.
pub fn cascade_mask(
    a: &LaurentMatrix,
    b: Option<&ScaledMatrix>,
    m_dil: usize,
    component: Component,
    levels: usize,
) -> Result<CascadeCurve> {
    if levels == 0 {
        return Err(Error::HypothesisViolated("levels must be at least 1".into()));
    }
    let r = a.rows();
    let phi0 = refinable_jets(a, m_dil, 1)?.at0();
    let mut w: Vec<GaussRational> = phi0.into_iter().map(|row| row[0].clone()).collect();
    if let Some(v) = matching_filter(a, m_dil, 1) {
        let v0 = &v.at0()[0];
        let s: GaussRational = v0.iter().zip(&w).fold(GaussRational::zero(), |acc, (x, y)| &acc + &(x * y));
        if !s.is_zero() {
            let inv = s.inv()?;
            w = w.iter().map(|c| c * &inv).collect();
        }
    }
    let md = m_dil as i64;
    let inner_levels = match component {
        Component::Phi => levels,
        Component::Psi => levels - 1,
    };
    let mut acc = FloatPoly::of(&LaurentMatrix::identity(r), (1.0, 0.0), 1);
    for j in 0..inner_levels {
        acc = FloatPoly::of(a, (1.0, 0.0), md.pow(j as u32)).mul(&acc);
    }
    if component == Component::Psi {
        let b = b.ok_or_else(|| Error::HypothesisViolated("psi needs high-pass filters".into()))?;
        acc = FloatPoly::of(&b.mat, b.scale.to_f64(), md.pow(inner_levels as u32)).mul(&acc);
    }
    let wf: Vec<(f64, f64)> = w.iter().map(|c| c.to_f64()).collect();
    let factor = (m_dil as f64).powi(levels as i32);
    let grid = factor;
    let mut xs = Vec::with_capacity(acc.c.len());
    let mut ys = Vec::with_capacity(acc.c.len());
    for (k, m) in acc.c.iter().enumerate() {
        xs.push((acc.kmin + k as i64) as f64 / grid);
        ys.push(
            m.iter()
                .map(|row| row.iter().zip(&wf).map(|(&(a, b), &(p, q))| a * p - b * q).sum::<f64>() * factor)
                .collect(),
        );
    }
    Ok(CascadeCurve { xs, ys })
}

/// Deterministic pseudo-random rational signal from a seed.
pub fn random_signal(rng: &mut impl rand::Rng, r: usize, len: usize, offset: i64) -> Signal {
    let mut s = Signal::zero(r);
    for k in 0..len as i64 {
        let row = (0..r)
            .map(|_| {
                GaussRational::real(BigRational::new(BigInt::from(rng.gen_range(-50i64..=50)), BigInt::from(rng.gen_range(1i64..=9))))
            })
            .collect();
        s.set(offset + k, row).expect("width r");
    }
    s
}

/// Scalar polynomial sequence `p(k) = sum_j coeffs[j] k^j` on `[start, start + len)`.
pub fn polynomial_signal(coeffs: &[BigRational], start: i64, len: usize) -> Signal {
    let vals = (0..len as i64)
        .map(|j| {
            let k = BigRational::from_integer(BigInt::from(start + j));
            let mut acc = BigRational::zero();
            for c in coeffs.iter().rev() {
                acc = acc * &k + c;
            }
            GaussRational::real(acc)
        })
        .collect();
    Signal::scalar(start, vals)
}

pub fn one_hot(r: usize, k: i64, j: usize) -> Signal {
    let mut s = Signal::zero(r);
    let mut row = vec![GaussRational::zero(); r];
    row[j] = GaussRational::one();
    s.set(k, row).expect("width r");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn kronecker_matches_schoolbook() {
        let x: Vec<BigInt> = (0..20).map(|i| BigInt::from((i * 7919 % 23) - 11) << (i % 5 * 40)).collect();
        let y: Vec<BigInt> = (0..13).map(|i| BigInt::from(5 - (i * 31 % 11)) << (i % 3 * 70)).collect();
        let mut expect = vec![BigInt::zero(); 32];
        for (i, a) in x.iter().enumerate() {
            for (j, b) in y.iter().enumerate() {
                expect[i + j] += a * b;
            }
        }
        assert_eq!(int_conv(&x, &y), expect);
    }
    use rand::SeedableRng;

    fn lp(kmin: i64, nums: &[i64], den: i64) -> LaurentPoly {
        LaurentPoly::from_fracs(kmin, nums, den)
    }

    #[test]
    fn routes_agree() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let a = ScaledMatrix::rational(fixtures::hermite());
        let b = ScaledMatrix::new(
            QuadScalar::sqrt(&rat(2, 1)).unwrap(),
            LaurentMatrix::from_rows(vec![vec![lp(-1, &[1, 2, 1], 3), lp(0, &[1, -1], 2)]]),
        );
        for _ in 0..5 {
            let v = random_signal(&mut rng, 2, 9, -3);
            assert!(transition(&v, &a, 2).unwrap().same_values(&transition_conv(&v, &a, 2).unwrap()));
            assert!(transition(&v, &b, 2).unwrap().same_values(&transition_conv(&v, &b, 2).unwrap()));
            assert!(subdivision(&v, &a, 2).unwrap().same_values(&subdivision_conv(&v, &a, 2).unwrap()));
            let w = random_signal(&mut rng, 1, 5, 2);
            assert!(subdivision(&w, &b, 2).unwrap().same_values(&subdivision_conv(&w, &b, 2).unwrap()));
        }
    }

    #[test]
    fn delta_and_identity() {
        let a = ScaledMatrix::rational(LaurentMatrix::scalar(lp(0, &[1, 2, 1], 4)));
        let d = Signal::scalar(0, vec![GaussRational::one()]);
        let s = subdivision(&d, &a, 2).unwrap();
        let expect = Signal::scalar(0, vec![GaussRational::from_frac(1, 4), GaussRational::from_frac(1, 2), GaussRational::from_frac(1, 4)])
            .with_scale(sqrt_m(2));
        assert!(s.same_values(&expect));
        let id = ScaledMatrix::rational(LaurentMatrix::identity(1));
        let v = Signal::scalar(-2, (1..=6).map(GaussRational::from_int).collect());
        let t = transition(&v, &id, 2).unwrap();
        let expect = Signal::scalar(-1, vec![GaussRational::from_int(1), GaussRational::from_int(3), GaussRational::from_int(5)])
            .with_scale(sqrt_m(2));
        assert!(t.same_values(&expect));
    }

    #[test]
    fn haar_round_trip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let a = ScaledMatrix::rational(LaurentMatrix::scalar(lp(0, &[1, 1], 2)));
        let b = ScaledMatrix::rational(LaurentMatrix::scalar(lp(0, &[1, -1], 2)));
        let v = random_signal(&mut rng, 1, 17, -4);
        let p = analyze_with(&v, &a, &b, 2, 3).unwrap();
        assert!(synthesize_with(&p, &a, &b, 2).unwrap().same_values(&v));
    }

    #[test]
    fn classifies() {
        let t = LaurentMatrix::scalar(lp(-1, &[1, 2, 1], 4));
        let rep = classify_theta_conv(&t).unwrap();
        assert_eq!(rep.class, ThetaClass::Singular);
        assert_eq!(rep.unit_circle_zeros, 1);
        assert_eq!(classify_theta_conv(&LaurentMatrix::identity(2)).unwrap().class, ThetaClass::StronglyInvertible);
        // 2 + z has no zero on the circle
        let t = LaurentMatrix::scalar(lp(0, &[2, 1], 1));
        assert_eq!(classify_theta_conv(&t).unwrap().class, ThetaClass::NonvanishingDet);
        // 1 + z^2 vanishes at +-i
        let t = LaurentMatrix::scalar(lp(0, &[1, 0, 1], 1));
        let rep = classify_theta_conv(&t).unwrap();
        assert_eq!((rep.class, rep.unit_circle_zeros), (ThetaClass::Singular, 2));
    }

    #[test]
    fn annihilates() {
        let t = LaurentMatrix::scalar(lp(-1, &[1, 2, 1], 4));
        let w = annihilator_witness(&t, 2, 6).unwrap();
        assert!(w.verified);
        assert_eq!(w.signal.get(3)[0], -w.signal.get(0)[0].clone());
        assert_eq!(annihilator_witness(&LaurentMatrix::identity(2), 2, 4), Err(Error::NotSingularAtPoint));
        let t2 = LaurentMatrix::from_rows(vec![vec![LaurentPoly::zero(), LaurentPoly::zero()], vec![lp(0, &[1], 1), lp(0, &[1], 1)]]);
        assert!(annihilator_witness(&t2, 0, 3).unwrap().verified);
    }

    #[test]
    fn vector_conversion() {
        let v = Signal::scalar(0, (1..=3).map(GaussRational::from_int).collect());
        let e = vector_convert(&v, 2).unwrap();
        assert_eq!(e.get(0), vec![GaussRational::from_int(1), GaussRational::from_int(2)]);
        assert_eq!(e.get(1), vec![GaussRational::from_int(3), GaussRational::zero()]);
        assert_eq!(vector_unconvert(&e).unwrap(), v);
        assert_eq!(vector_convert(&v, 1).unwrap(), v);
    }

    #[test]
    fn cascades() {
        let haar = LaurentMatrix::scalar(lp(0, &[1, 1], 2));
        let c = cascade_mask(&haar, None, 2, Component::Phi, 8).unwrap();
        assert!(c.ys.iter().all(|y| (y[0] - 1.0).abs() < 1e-12));
        let hat = LaurentMatrix::scalar(lp(-1, &[1, 2, 1], 4));
        let c = cascade_mask(&hat, None, 2, Component::Phi, 8).unwrap();
        let (i, m) = c.ys.iter().enumerate().map(|(i, y)| (i, y[0])).fold((0usize, f64::MIN), |b, x| if x.1 > b.1 { x } else { b });
        assert!((m - 1.0).abs() < 1e-12 && c.xs[i].abs() < 1e-12);
        assert!(c.to_csv().starts_with("x,y1\n"));
    }

    #[test]
    fn valid_ranges() {
        assert_eq!(valid_range((0, 20), (-1, 2), 2), Some((1, 9)));
        assert_eq!(valid_range((0, 3), (0, 5), 2), None);
    }
}
