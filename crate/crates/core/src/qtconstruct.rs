//! Quasi-tight framelet construction, verification and the theta characterization.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{rat, GaussRational, QuadScalar};
use crate::laurent::{build_e, delta_m, LaurentMatrix, LaurentPoly, ScaledMatrix};
use crate::linalg::Mat;
use crate::moments::{
    balanced_vm, balancing_order, e_m_r, moment_data, refinable_jets, sum_rules, vanishing_moments, JetMatrix,
    JetVector, MomentJet,
};
use crate::normalform::{normal_form_general, orthogonal_normal_form};
use crate::sturm;

/// Cap used when measuring orders of sum rules and vanishing moments.
pub const ORDER_CAP: usize = 8;

/// A quasi-tight framelet filter bank `({a; b})_{theta, eps}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QtFilterBank {
    pub m_dil: usize,
    pub r: usize,
    pub s: usize,
    /// Original refinement mask.
    pub a: LaurentMatrix,
    pub theta: ScaledMatrix,
    /// High-pass filters in the original basis.
    pub b: ScaledMatrix,
    pub eps: Vec<i8>,
    /// Order of sum rules / vanishing moments targeted.
    pub m: usize,
    pub n: usize,
}

impl QtFilterBank {
    pub fn theta_inv(&self) -> Result<ScaledMatrix> {
        Ok(ScaledMatrix::new(self.theta.scale.inv()?, self.theta.mat.strong_inverse()?))
    }

    /// `theta(M .) a theta^{-1}`; the scalar factors cancel.
    pub fn a_ring(&self) -> Result<LaurentMatrix> {
        let inv = self.theta.mat.strong_inverse()?;
        Ok(&(&self.theta.mat.upsample(self.m_dil) * &self.a) * &inv)
    }

    /// `b theta^{-1}`.
    pub fn b_ring(&self) -> Result<ScaledMatrix> {
        self.b.mul(&self.theta_inv()?)
    }

    /// `Theta = theta^* theta`.
    pub fn theta_cap(&self) -> Result<ScaledMatrix> {
        self.theta.star().mul(&self.theta)
    }

    /// The equivalent OEP bank `({a; b}, {a; Diag(eps) b})_Theta`.
    pub fn as_oep(&self) -> Result<OepBank> {
        let d = LaurentMatrix::diag(self.eps.iter().map(|&e| LaurentPoly::constant(GaussRational::from_int(e as i64))).collect());
        Ok(OepBank {
            m_dil: self.m_dil,
            a: self.a.clone(),
            a_dual: self.a.clone(),
            b: self.b.clone(),
            b_dual: ScaledMatrix::new(self.b.scale.clone(), &d * &self.b.mat),
            theta: self.theta_cap()?,
        })
    }

    /// The derived bank `({a_ring; b_ring}, {a_ring; Diag(eps) b_ring})_I`.
    pub fn derived_oep(&self) -> Result<OepBank> {
        let a = self.a_ring()?;
        let b = self.b_ring()?;
        let d = LaurentMatrix::diag(self.eps.iter().map(|&e| LaurentPoly::constant(GaussRational::from_int(e as i64))).collect());
        Ok(OepBank {
            m_dil: self.m_dil,
            a: a.clone(),
            a_dual: a,
            b_dual: ScaledMatrix::new(b.scale.clone(), &d * &b.mat),
            b,
            theta: ScaledMatrix::rational(LaurentMatrix::identity(self.r)),
        })
    }
}

/// A generalized dual filter bank `({a; b}, {a~; b~})_Theta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OepBank {
    pub m_dil: usize,
    pub a: LaurentMatrix,
    pub a_dual: LaurentMatrix,
    pub b: ScaledMatrix,
    pub b_dual: ScaledMatrix,
    pub theta: ScaledMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OepReport {
    pub identity: bool,
    /// First nonzero coefficient of the coset-domain defect.
    pub witness: Option<String>,
    /// `phi(0)^* Theta(0) phi~(0) != 0`, so the pair can be normalised.
    pub normalizable: Option<bool>,
    /// `b(0) phi(0) = 0` and `b~(0) phi~(0) = 0`.
    pub vanishing: Option<bool>,
    pub note: Option<String>,
}

impl OepReport {
    pub fn holds(&self) -> bool {
        self.identity && self.normalizable != Some(false) && self.vanishing != Some(false)
    }
}

fn rational_product(x: &QuadScalar, y: &QuadScalar, what: &str) -> Result<GaussRational> {
    x.mul(y)?
        .to_rational()
        .ok_or_else(|| Error::RadicandMismatch(format!("{what}: {x}"), y.to_string()))
}

fn first_nonzero(m: &LaurentMatrix, block: usize) -> Option<String> {
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if let Some((k, c)) = m.get(i, j).terms().next() {
                return Some(format!(
                    "coset block ({}, {}) entry ({}, {}) degree {} coefficient {}",
                    i / block,
                    j / block,
                    i % block + 1,
                    j % block + 1,
                    k,
                    c
                ));
            }
        }
    }
    None
}

/// Coset-domain defect `A^* Theta A~ + B^* B~ - M^{-1} E_{Theta; M}`.
pub fn oep_defect(bank: &OepBank) -> Result<LaurentMatrix> {
    let m = bank.m_dil;
    let r = bank.a.rows();
    let a = bank.a.coset_row(m);
    let ad = bank.a_dual.coset_row(m);
    let b = bank.b.mat.coset_row(m);
    let bd = bank.b_dual.mat.coset_row(m);
    let th_scale = bank
        .theta
        .scale
        .to_rational()
        .ok_or_else(|| Error::RadicandMismatch("Theta scale".into(), bank.theta.scale.to_string()))?;
    let theta = bank.theta.mat.scale(&th_scale);
    let hb = rational_product(&bank.b.scale.conj(), &bank.b_dual.scale, "high-pass scales")?;
    let lhs = (&(&a.star() * &theta) * &ad).checked_add(&(&b.star() * &bd).scale(&hb))?;
    let rhs = build_e(&theta, m).scale(&GaussRational::from_frac(1, m as i64));
    debug_assert_eq!(lhs.rows(), m * r);
    lhs.checked_sub(&rhs)
}

/// Checks of the OEP identity and the moment items of the dual framelet characterization.
pub fn verify_oep(bank: &OepBank) -> Result<OepReport> {
    let r = bank.a.rows();
    let defect = oep_defect(bank)?;
    let witness = first_nonzero(&defect, r);
    let mut report = OepReport { identity: witness.is_none(), witness, normalizable: None, vanishing: None, note: None };
    match (refinable_jets(&bank.a, bank.m_dil, 1), refinable_jets(&bank.a_dual, bank.m_dil, 1)) {
        (Ok(phi), Ok(phid)) => {
            let th = bank.theta.mat.eval(&GaussRational::one())?;
            let p0: Vec<GaussRational> = phi.at0().into_iter().map(|row| row[0].clone()).collect();
            let q0: Vec<GaussRational> = phid.at0().into_iter().map(|row| row[0].clone()).collect();
            let mut val = GaussRational::zero();
            for i in 0..r {
                for j in 0..r {
                    val += &(&(&p0[i].conj() * &th[i][j]) * &q0[j]);
                }
            }
            report.normalizable = Some(!val.is_zero());
            let b0 = bank.b.mat.eval(&GaussRational::one())?;
            let bd0 = bank.b_dual.mat.eval(&GaussRational::one())?;
            let kills = |b: &Mat, p: &[GaussRational]| {
                b.iter().all(|row| row.iter().zip(p).fold(GaussRational::zero(), |acc, (x, y)| &acc + &(x * y)).is_zero())
            };
            report.vanishing = Some(kills(&b0, &p0) && kills(&bd0, &q0));
        }
        (Err(e), _) | (_, Err(e)) => report.note = Some(format!("moment items skipped: {e}")),
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QtReport {
    pub identity: bool,
    pub witness: Option<String>,
    pub theta_strongly_invertible: bool,
    pub sum_rules: usize,
    pub vm: usize,
    pub bvm: usize,
    pub bpo: usize,
}

impl QtReport {
    pub fn holds(&self, m: usize) -> bool {
        self.identity && self.theta_strongly_invertible && self.vm >= m && self.bvm >= m && self.bpo >= m
    }
}

/// Exact check of the quasi-tight identities on the derived bank plus the moment orders.
pub fn verify_quasitight(bank: &QtFilterBank) -> Result<QtReport> {
    verify_quasitight_capped(bank, ORDER_CAP)
}

/// [`verify_quasitight`] with orders searched up to `cap` (at least `m + 1`).
pub fn verify_quasitight_capped(bank: &QtFilterBank, cap: usize) -> Result<QtReport> {
    let theta_ok = bank.theta.mat.is_strongly_invertible() && !bank.theta.scale.is_zero();
    if !theta_ok {
        return Ok(QtReport {
            identity: false,
            witness: Some("theta is not strongly invertible".into()),
            theta_strongly_invertible: false,
            sum_rules: 0,
            vm: 0,
            bvm: 0,
            bpo: 0,
        });
    }
    let oep = verify_oep(&bank.derived_oep()?)?;
    let cap = cap.max(bank.m + 1);
    let sr = sum_rules(&bank.a, bank.m_dil, cap)?.order;
    let phi = refinable_jets(&bank.a, bank.m_dil, cap)?;
    let a_ring = bank.a_ring()?;
    let b_ring = bank.b_ring()?.mat;
    Ok(QtReport {
        identity: oep.identity,
        witness: oep.witness,
        theta_strongly_invertible: true,
        sum_rules: sr,
        vm: vanishing_moments(&bank.b.mat, &phi, cap),
        bvm: balanced_vm(&b_ring, bank.r, cap),
        bpo: balancing_order(&a_ring, &b_ring, bank.m_dil, bank.r, cap),
    })
}

fn root_of_unity_power(m_dil: usize, gamma: usize) -> Result<GaussRational> {
    // e^{-2 pi i gamma / M}
    match m_dil {
        2 => Ok(GaussRational::from_int(if gamma.is_multiple_of(2) { 1 } else { -1 })),
        4 => Ok(GaussRational::i_pow(-(gamma as i64))),
        1 => Ok(GaussRational::one()),
        _ if gamma.is_multiple_of(m_dil) => Ok(GaussRational::one()),
        _ => Err(Error::IrrationalShift(m_dil)),
    }
}

/// `p(xi + 2 pi gamma / M)`: the coefficient of `z^k` picks up `w^k`.
fn twist(p: &LaurentPoly, w: &GaussRational) -> LaurentPoly {
    LaurentPoly::from_terms(p.terms().map(|(k, c)| {
        let wk = if k >= 0 { w.pow(k as u32) } else { w.conj().pow((-k) as u32) };
        (k, c * &wk)
    }))
}

/// Residuals `a_1 = U - a^* U(M .) a` and `a_j = -a^* U(M .) a(. + 2 pi (j-1)/M)`.
///
/// The shifted symbols need the M-th roots of unity to be Gaussian rationals, so only `M` in {2, 4}
/// is supported; [`polyphase_gram`] covers every `M` in the coset domain.
pub fn mask_residuals(a: &LaurentMatrix, ucal: &LaurentMatrix, m_dil: usize) -> Result<Vec<LaurentMatrix>> {
    let left = &a.star() * &ucal.upsample(m_dil);
    let mut out = Vec::with_capacity(m_dil);
    for gamma in 0..m_dil {
        let w = root_of_unity_power(m_dil, gamma)?;
        let shifted = a.map(|p| twist(p, &w));
        let prod = &left * &shifted;
        out.push(if gamma == 0 { ucal - &prod } else { -&prod });
    }
    Ok(out)
}

/// Divide out `Delta_m^*` on the left and the shifted `Delta_m` on the right of each residual.
pub fn delta_factorize(residuals: &[LaurentMatrix], m: usize, m_dil: usize) -> Result<Vec<LaurentMatrix>> {
    let left = LaurentPoly::one_minus_z_pow(m).star();
    residuals
        .iter()
        .enumerate()
        .map(|(gamma, res)| {
            let w = root_of_unity_power(m_dil, gamma)?;
            let right = twist(&LaurentPoly::one_minus_z_pow(m), &w);
            let mut out = res.clone();
            for j in 0..res.cols() {
                out.set(0, j, out.get(0, j).div_exact(&left)?);
            }
            for i in 0..res.rows() {
                out.set(i, 0, out.get(i, 0).div_exact(&right)?);
            }
            Ok(out)
        })
        .collect()
}

/// `M^{-1} E_{U;M} - A^* U A` for the coset row `A` of `a`.
pub fn polyphase_residual(a: &LaurentMatrix, ucal: &LaurentMatrix, m_dil: usize) -> LaurentMatrix {
    let ar = a.coset_row(m_dil);
    let e = build_e(ucal, m_dil).scale(&GaussRational::from_frac(1, m_dil as i64));
    &e - &(&(&ar.star() * ucal) * &ar)
}

/// Coset-domain Gram matrix `E_Delta^{-*} (M^{-1} E_U - A^* U A) E_Delta^{-1}` (`Mr x Mr`, Hermitian).
pub fn polyphase_gram(a: &LaurentMatrix, ucal: &LaurentMatrix, m_dil: usize, m: usize) -> Result<LaurentMatrix> {
    let x = polyphase_residual(a, ucal, m_dil);
    let ed = build_e(&delta_m(m, a.rows()), m_dil);
    let det = ed.det()?;
    let adj = ed.adjugate()?;
    let num = &(&adj.star() * &x) * &adj;
    num.divide_exact(&(&det.star() * &det))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermitianSplit {
    pub u_tilde: LaurentMatrix,
    pub s1: usize,
    pub s2: usize,
}

impl HermitianSplit {
    pub fn signature(&self) -> Vec<i8> {
        let mut eps = vec![1i8; self.s1];
        eps.extend(std::iter::repeat_n(-1i8, self.s2));
        eps
    }

    /// `U~^* Diag(I_{s1}, -I_{s2}) U~`.
    pub fn gram(&self) -> LaurentMatrix {
        let d = LaurentMatrix::diag(
            self.signature().into_iter().map(|e| LaurentPoly::constant(GaussRational::from_int(e as i64))).collect(),
        );
        &(&self.u_tilde.star() * &d) * &self.u_tilde
    }
}

/// Generic split `H = M1^* M1 - M2^* M2` with `M1 = I + H/4`, `M2 = I - H/4`.
pub fn hermitian_split(h: &LaurentMatrix) -> Result<HermitianSplit> {
    if !h.is_square() || h.star() != *h {
        return Err(Error::NotHermitian);
    }
    let n = h.rows();
    let quarter = h.scale_rat(&rat(1, 4));
    let id = LaurentMatrix::identity(n);
    let m1 = &id + &quarter;
    let m2 = &id - &quarter;
    Ok(HermitianSplit { u_tilde: LaurentMatrix::vstack(&[m1, m2]), s1: n, s2: n })
}

/// `b(xi) = U~(M xi) [I_r; e^{-i xi} I_r; ...] Delta_m(xi)` with the matching signature.
pub fn assemble_highpass(split: &HermitianSplit, m: usize, m_dil: usize, r: usize) -> Result<(LaurentMatrix, Vec<i8>)> {
    if split.u_tilde.cols() != m_dil * r {
        return Err(Error::DimensionMismatch(format!(
            "split has {} columns, expected {}",
            split.u_tilde.cols(),
            m_dil * r
        )));
    }
    let lazy = LaurentMatrix::vstack(&(0..m_dil).map(|l| LaurentMatrix::identity(r).shift(l as i64)).collect::<Vec<_>>());
    let b = &(&split.u_tilde.upsample(m_dil) * &lazy) * &delta_m(m, r);
    Ok((b, split.signature()))
}

/// Full quasi-tight construction with `m` vanishing moments / balancing order and `n` (default `2m`).
pub fn construct_quasitight(a: &LaurentMatrix, m_dil: usize, m: Option<usize>, n: Option<usize>) -> Result<QtFilterBank> {
    let r = a.rows();
    if r < 2 {
        return Err(Error::MultiplicityOne);
    }
    if !a.is_square() {
        return Err(Error::DimensionMismatch("mask must be square".into()));
    }
    let m = match m {
        Some(m) => m,
        None => sum_rules(a, m_dil, ORDER_CAP)?.order,
    };
    if m == 0 {
        return Err(Error::HypothesisViolated("the mask has no sum rules".into()));
    }
    let n = n.unwrap_or(2 * m);
    if n < 2 * m {
        return Err(Error::HypothesisViolated(format!("n = {n} must be at least 2m = {}", 2 * m)));
    }
    let (v, phi) = moment_data(a, m_dil, m, n)?;
    let rr = GaussRational::from_frac(1, r as i64);
    let ups_v = JetMatrix::upsilon(r, m).scale(&rr);
    let ups_u = JetMatrix::upsilon(r, n).star();

    let nf = normal_form_general(a, m_dil, m, n, &ups_v, &ups_u, &v, &phi)?;
    let theta0 = nf.u;
    let a_ring = nf.mask;
    let on = orthogonal_normal_form(&a_ring, m_dil, m, n, &ups_v, &ups_u)?;
    let u = on.u;
    let u_inv = on.u_inv;
    let ucal = (&u_inv.star() * &u_inv).scale(&rr);
    let gram = polyphase_gram(&on.mask, &ucal, m_dil, m)?;
    let split = hermitian_split(&gram)?;
    let (b_breve, eps) = assemble_highpass(&split, m, m_dil, r)?;
    let b = &(&b_breve * &u) * &theta0;

    let inv_r = BigRational::new(BigInt::one(), BigInt::from(r));
    Ok(QtFilterBank {
        m_dil,
        r,
        s: b.rows(),
        a: a.clone(),
        theta: ScaledMatrix::new(QuadScalar::sqrt(&inv_r)?, theta0),
        b: ScaledMatrix::rational(b),
        eps,
        m,
        n,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaItemI {
    pub holds: bool,
    /// Jet of `c` including the scale of theta.
    pub c_jet: MomentJet,
    pub d_jet: MomentJet,
    pub c0_abs2: BigRational,
    pub d0_abs2: BigRational,
    /// Radicand-free description of the scale applied to `c` and `d`.
    pub scale: QuadScalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaItemII {
    pub holds: bool,
    /// Block rows of the coset-domain form of `M_0, ..., M_{M-1}`.
    pub m_matrices: Vec<LaurentMatrix>,
    pub failing_entry: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaReport {
    pub item_i: ThetaItemI,
    pub item_ii: ThetaItemII,
}

impl ThetaReport {
    pub fn holds(&self) -> bool {
        self.item_i.holds && self.item_ii.holds
    }
}

/// Whether `theta` meets both conditions characterizing quasi-tight banks with `m` vanishing moments.
pub fn check_theta(
    theta: &ScaledMatrix,
    a: &LaurentMatrix,
    m_dil: usize,
    m: usize,
    v_jet: &JetVector,
    phi_jet: &JetVector,
) -> Result<ThetaReport> {
    let r = a.rows();
    let inv = theta.mat.strong_inverse()?;
    let ups = JetMatrix::upsilon(r, m);
    // scale of theta folds into c as 1/s and into d as s; only |.|^2 is exact
    let s2 = theta.scale2();
    let vt = v_jet.truncate(m).mul(&JetMatrix::of(&inv, m))?;
    let tp = JetMatrix::of(&theta.mat, m).mul(&phi_jet.truncate(m))?;
    let c = vt.get(0, 0).clone();
    let d = tp.get(0, 0).clone();
    let c_ok = vt.agrees(&ups.scale_jet(&c), m);
    let d_ok = tp.agrees(&ups.star().scale_jet(&d), m);
    let c0 = if m > 0 { c.at0().norm_sqr() / &s2 } else { BigRational::zero() };
    let d0 = if m > 0 { d.at0().norm_sqr() * &s2 } else { BigRational::zero() };
    let target = rat(1, r as i64);
    let item_i = ThetaItemI {
        holds: m == 0 || (c_ok && d_ok && c0 == target && d0 == target),
        c_jet: c,
        d_jet: d,
        c0_abs2: c0,
        d0_abs2: d0,
        scale: theta.scale.clone(),
    };

    let a_ring = &(&theta.mat.upsample(m_dil) * a) * &inv;
    let x = polyphase_residual(&a_ring, &LaurentMatrix::identity(r), m_dil);
    let e = build_e(&e_m_r(m, r), m_dil);
    let det = e.det()?;
    let adj = e.adjugate()?;
    let num = &(&adj.star() * &x) * &adj;
    let den = &det.star() * &det;
    let mut failing = None;
    let mut k = LaurentMatrix::zeros(num.rows(), num.cols());
    'outer: for i in 0..num.rows() {
        for j in 0..num.cols() {
            match num.get(i, j).div_exact(&den) {
                Ok(q) => k.set(i, j, q),
                Err(_) => {
                    failing = Some(format!("coset block ({}, {}) entry ({}, {})", i / r, j / r, i % r + 1, j % r + 1));
                    break 'outer;
                }
            }
        }
    }
    let item_ii = match failing {
        Some(f) => ThetaItemII { holds: false, m_matrices: Vec::new(), failing_entry: Some(f) },
        None => ThetaItemII {
            holds: true,
            m_matrices: (0..m_dil).map(|g| k.block(g * r, 0, r, m_dil * r)).collect(),
            failing_entry: None,
        },
    };
    Ok(ThetaReport { item_i, item_ii })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PsdReport {
    /// `(xi, least eigenvalue)` per sample.
    pub samples: Vec<(f64, f64)>,
    pub min_xi: f64,
    /// Enclosure of the least eigenvalue at `min_xi`, as decimals.
    pub min_lower: String,
    pub min_upper: String,
    pub min_value: f64,
}

impl PsdReport {
    pub fn is_psd(&self) -> bool {
        self.min_value >= -1e-12
    }

    /// Least sampled eigenvalue inside `(lo, hi)`.
    pub fn min_in(&self, lo: f64, hi: f64) -> Option<f64> {
        self.samples.iter().filter(|(x, _)| *x > lo && *x < hi).map(|(_, l)| *l).reduce(f64::min)
    }
}

/// Number of decimal digits used to refine the least eigenvalue (`FRAMELET_PRECISION`, default 50).
pub fn precision_digits() -> usize {
    std::env::var("FRAMELET_PRECISION").ok().and_then(|s| s.parse().ok()).filter(|&d| d > 0).unwrap_or(50)
}

/// Exact point `e^{-i eta}` on the unit circle with `tan(eta/2)` rounded to a dyadic grid.
fn circle_point(eta: f64) -> (GaussRational, f64) {
    let grid = (1u64 << 20) as f64;
    let t = BigRational::new(BigInt::from(((eta / 2.0).tan() * grid).round() as i64), BigInt::from(1u64 << 20));
    let t2 = &t * &t;
    let den = BigRational::one() + &t2;
    let re = (BigRational::one() - &t2) / &den;
    let im = -(BigRational::from_integer(BigInt::from(2)) * &t) / &den;
    let tf = num_traits::ToPrimitive::to_f64(&t).unwrap_or(0.0);
    (GaussRational::new(re, im), 2.0 * tf.atan())
}

/// Least eigenvalue of `M_{a, Theta}(xi)` on a sample grid of `(-pi, pi)`.
pub fn psd_probe(a: &LaurentMatrix, theta: &LaurentMatrix, m_dil: usize, samples: usize) -> Result<PsdReport> {
    let g = polyphase_residual(a, theta, m_dil);
    if g.star() != g {
        return Err(Error::NotHermitian);
    }
    let mf = BigRational::from_integer(BigInt::from(m_dil));
    let coarse = BigRational::new(BigInt::one(), BigInt::from(1u64 << 40));
    let eig = |eta: f64, tol: &BigRational| -> Result<(f64, BigRational, BigRational)> {
        let (zeta, eta_exact) = circle_point(eta);
        let (lo, hi) = sturm::min_eigenvalue(&g.eval(&zeta)?, tol);
        Ok((eta_exact / m_dil as f64, lo * &mf, hi * &mf))
    };
    let mut out = Vec::with_capacity(samples);
    let mut best: Option<(f64, f64, f64)> = None;
    for k in 0..samples.max(1) {
        let eta = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / samples.max(1) as f64;
        let (xi, lo, hi) = eig(eta, &coarse)?;
        let val = num_traits::ToPrimitive::to_f64(&((lo + hi) / BigRational::from_integer(BigInt::from(2)))).unwrap_or(f64::NAN);
        out.push((xi, val));
        if best.is_none_or(|(_, _, v)| val < v) {
            best = Some((xi, eta, val));
        }
    }
    let (min_xi, eta, min_value) = best.expect("at least one sample");
    let digits = precision_digits();
    let tol = BigRational::new(BigInt::one(), BigInt::from(10).pow(digits as u32 + 1));
    let (_, lo, hi) = eig(eta, &(&tol / &mf))?;
    Ok(PsdReport {
        samples: out,
        min_xi,
        min_lower: sturm::to_decimal(&lo, digits),
        min_upper: sturm::to_decimal(&hi, digits),
        min_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn lp(kmin: i64, nums: &[i64], den: i64) -> LaurentPoly {
        LaurentPoly::from_fracs(kmin, nums, den)
    }

    fn haar() -> OepBank {
        OepBank {
            m_dil: 2,
            a: LaurentMatrix::scalar(lp(0, &[1, 1], 2)),
            a_dual: LaurentMatrix::scalar(lp(0, &[1, 1], 2)),
            b: ScaledMatrix::rational(LaurentMatrix::scalar(lp(0, &[1, -1], 2))),
            b_dual: ScaledMatrix::rational(LaurentMatrix::scalar(lp(0, &[1, -1], 2))),
            theta: ScaledMatrix::rational(LaurentMatrix::identity(1)),
        }
    }

    #[test]
    fn haar_oep() {
        let rep = verify_oep(&haar()).unwrap();
        assert!(rep.holds(), "{rep:?}");
        let mut bad = haar();
        bad.b.mat.set(0, 0, lp(0, &[1, -1], 2) + lp(1, &[1], 1000));
        let rep = verify_oep(&bad).unwrap();
        assert!(!rep.identity);
        assert!(rep.witness.is_some());
    }

    #[test]
    fn haar_residuals() {
        let a = LaurentMatrix::scalar(lp(0, &[1, 1], 2));
        let res = mask_residuals(&a, &LaurentMatrix::identity(1), 2).unwrap();
        assert_eq!(res[0].get(0, 0), &lp(-1, &[-1, 2, -1], 4));
        let b = delta_factorize(&res, 1, 2).unwrap();
        // (1 - z^{-1})(1 - z) b1 = a1
        assert_eq!(b[0].get(0, 0), &lp(0, &[1], 4));
        let g = polyphase_gram(&a, &LaurentMatrix::identity(1), 2, 0).unwrap();
        assert!(g.det().unwrap().is_zero() && !g.is_zero());
        assert_eq!(g.get(0, 1), &LaurentPoly::constant(GaussRational::from_frac(-1, 4)));
        assert_eq!(mask_residuals(&a, &LaurentMatrix::identity(1), 3), Err(Error::IrrationalShift(3)));
    }

    #[test]
    fn split_identity() {
        let h = LaurentMatrix::from_rows(vec![
            vec![lp(-1, &[1, 3, 1], 1), lp(0, &[2, 5], 3)],
            vec![lp(-1, &[5, 2], 3), LaurentPoly::constant(GaussRational::from_int(-7))],
        ]);
        let sp = hermitian_split(&h).unwrap();
        assert_eq!(sp.gram(), h);
        assert_eq!((sp.s1, sp.s2), (2, 2));
        let nh = LaurentMatrix::scalar(lp(0, &[0, 1], 1));
        assert_eq!(hermitian_split(&nh), Err(Error::NotHermitian));
        let lazy = assemble_highpass(&HermitianSplit { u_tilde: LaurentMatrix::identity(4), s1: 4, s2: 0 }, 0, 2, 2).unwrap();
        assert_eq!(lazy.0.get(2, 0), &LaurentPoly::z_pow(1));
    }

    fn check_construct(name: &str, m: Option<usize>, expect_m: usize) {
        let (a, md) = fixtures::fixture(name).unwrap();
        let bank = construct_quasitight(&a, md, m, None).unwrap();
        assert_eq!(bank.m, expect_m);
        let rep = verify_quasitight(&bank).unwrap();
        assert!(rep.identity, "{name}: {:?}", rep.witness);
        assert!(rep.holds(expect_m), "{name}: {rep:?}");
        let (v, phi) = moment_data(&a, md, bank.m, bank.n).unwrap();
        let th = check_theta(&bank.theta, &a, md, bank.m, &v, &phi).unwrap();
        assert!(th.item_ii.holds, "{name}: {:?}", th.item_ii.failing_entry);
        assert!(th.item_i.holds, "{name}: {:?}", th.item_i);
    }

    #[test]
    fn construct_vec_bspline2() {
        check_construct("vec-bspline2", None, 2);
    }

    #[test]
    fn construct_hermite_m2() {
        check_construct("hermite", Some(2), 2);
    }

    #[test]
    fn rejects_scalar() {
        let a = LaurentMatrix::scalar(lp(0, &[1, 1], 2));
        assert_eq!(construct_quasitight(&a, 2, None, None), Err(Error::MultiplicityOne));
    }

    #[test]
    fn theta_identity_fails_on_hermite() {
        let a = fixtures::hermite();
        let (v, phi) = moment_data(&a, 2, 2, 4).unwrap();
        let th = ScaledMatrix::rational(LaurentMatrix::identity(2));
        assert!(!check_theta(&th, &a, 2, 2, &v, &phi).unwrap().item_i.holds);
    }

    #[test]
    fn hermite_not_psd() {
        let rep = psd_probe(&fixtures::hermite(), &LaurentMatrix::identity(2), 2, 64).unwrap();
        let m = rep.min_in(-std::f64::consts::FRAC_PI_4, std::f64::consts::FRAC_PI_4).unwrap();
        assert!(m < -1e-6, "{m}");
        let haar = LaurentMatrix::scalar(lp(0, &[1, 1], 2));
        assert!(psd_probe(&haar, &LaurentMatrix::identity(1), 2, 32).unwrap().is_psd());
    }
}
