//! Strongly invertible changes of basis that standardise a mask's moments.

use crate::error::{Error, Result};
use crate::exactnum::GaussRational;
use crate::laurent::{LaurentMatrix, LaurentPoly};
use crate::moments::{lift_to_poly, JetMatrix, JetVector, MomentJet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalFormResult {
    pub u: LaurentMatrix,
    pub u_inv: LaurentMatrix,
    /// `U(M xi) a(xi) U(xi)^{-1}`
    pub mask: LaurentMatrix,
    pub matching_jet: JetVector,
    pub phi_jet: JetVector,
}

/// `c, d` with `p c + (1 - z)^{2n} d = 1`.
pub fn bezout_one(p: &LaurentPoly, n: usize) -> Result<(LaurentPoly, LaurentPoly)> {
    let (k, pp) = p.strip_monomial();
    if pp.is_zero() {
        return Err(Error::NotCoprime);
    }
    let q = LaurentPoly::one_minus_z_pow(2 * n);
    let (mut r0, mut r1) = (pp, q);
    let (mut s0, mut s1) = (LaurentPoly::one(), LaurentPoly::zero());
    let (mut t0, mut t1) = (LaurentPoly::zero(), LaurentPoly::one());
    while !r1.is_zero() {
        let (quo, rem) = r0.div_rem(&r1)?;
        let s2 = &s0 - &(&quo * &s1);
        let t2 = &t0 - &(&quo * &t1);
        r0 = std::mem::replace(&mut r1, rem);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    let Some((g, 0)) = r0.as_monomial() else {
        return Err(Error::NotCoprime);
    };
    let ginv = g.inv()?;
    Ok((s0.scale(&ginv).shift(-k), t0.scale(&ginv)))
}

fn swap_matrix(r: usize, p: usize) -> LaurentMatrix {
    let mut m = LaurentMatrix::identity(r);
    if p != 0 {
        m.set(0, 0, LaurentPoly::zero());
        m.set(p, p, LaurentPoly::zero());
        m.set(0, p, LaurentPoly::one());
        m.set(p, 0, LaurentPoly::one());
    }
    m
}

fn jet_of_matrix(m: &LaurentMatrix, n: usize) -> JetMatrix {
    JetMatrix::of(m, n)
}

/// Strongly invertible `U` with `v(xi) U(xi) = [1, 0, ..., 0] + O(xi^n)`.
pub fn row_reduce_to_e1(v: &JetVector, n: usize) -> Result<LaurentMatrix> {
    let r = v.cols();
    if v.rows() != 1 {
        return Err(Error::DimensionMismatch("row_reduce_to_e1 needs a row vector".into()));
    }
    if r < 2 {
        return Err(Error::HypothesisViolated("row reduction needs r >= 2".into()));
    }
    let v = v.truncate(n);
    if v.agrees(&JetMatrix::e1(r, n, true), n) {
        return Ok(LaurentMatrix::identity(r));
    }
    let v0 = v.at0();
    let p = v0[0].iter().position(|c| !c.is_zero()).ok_or(Error::ZeroAtOrigin)?;
    let perm = swap_matrix(r, p);
    let vp = v.mul(&jet_of_matrix(&perm, n))?;
    let v1 = vp.get(0, 0).clone();
    let v1inv = v1.inverse()?;
    let mut u1 = LaurentMatrix::identity(r);
    for j in 1..r {
        let w = vp.get(0, j).mul(&v1inv).neg();
        u1.set(0, j, lift_to_poly(&w, n));
    }
    let v1poly = lift_to_poly(&v1, n);
    let (c, d) = bezout_one(&v1poly, n)?;
    let nab = LaurentPoly::one_minus_z_pow(n);
    let mut u2 = LaurentMatrix::identity(r);
    u2.set(0, 0, c);
    u2.set(0, 1, -&nab);
    u2.set(1, 0, &nab * &d);
    u2.set(1, 1, v1poly);
    Ok(&(&perm * &u1) * &u2)
}

/// Strongly invertible `U` with `v U = u + O(xi^n)`.
pub fn align_vectors(v: &JetVector, u: &JetVector, n: usize) -> Result<LaurentMatrix> {
    let uv = row_reduce_to_e1(v, n)?;
    let uu = row_reduce_to_e1(u, n)?;
    Ok(&uv * &uu.strong_inverse()?)
}

/// Extend `v` (order m, `v u = 1 + O(xi^m)`) to order n with `v u = 1 + O(xi^n)`.
pub fn extend_moment_match(v: &JetVector, u: &JetVector, n: usize) -> Result<JetVector> {
    let m = v.order();
    let r = v.cols();
    let vu = v.mul(u)?;
    if !vu.get(0, 0).agrees(&MomentJet::one(m), m) {
        return Err(Error::HypothesisViolated("v u != 1 + O(xi^m)".into()));
    }
    if n <= m {
        return Ok(v.clone());
    }
    if u.order() < n {
        return Err(Error::HypothesisViolated(format!("u jets known only to order {}", u.order())));
    }
    if r == 1 {
        let inv = u.get(0, 0).truncate(n).inverse()?;
        return Ok(JetMatrix::from_fn(1, 1, n, |_, _| inv.clone()));
    }
    let vt = row_reduce_to_e1(&u.transpose(), n)?;
    let uu = vt.transpose();
    let uu_inv = uu.strong_inverse()?;
    let vpad = JetMatrix::from_fn(1, r, n, |i, j| v.get(i, j).clone());
    let breve = vpad.mul(&JetMatrix::of(&uu_inv, n))?;
    let mut head = breve.clone();
    head.set(0, 0, MomentJet::one(n));
    head.mul(&JetMatrix::of(&uu, n))
}

fn check_pair(v: &JetVector, u: &JetVector, m: usize, what: &str) -> Result<()> {
    let prod = v.mul(u)?;
    if !prod.get(0, 0).agrees(&MomentJet::one(m), m.min(prod.order())) {
        return Err(Error::HypothesisViolated(format!("{what}: v u != 1 + O(xi^{m})")));
    }
    Ok(())
}

/// Theorem-1.4 style normal form: `v U^{-1} = target_v + O(xi^m)`, `U phi = target_u + O(xi^n)`.
#[allow(clippy::too_many_arguments)]
pub fn normal_form_general(
    a: &LaurentMatrix,
    m_dil: usize,
    m: usize,
    n: usize,
    target_v: &JetVector,
    target_u: &JetVector,
    v: &JetVector,
    phi: &JetVector,
) -> Result<NormalFormResult> {
    let r = a.rows();
    if r < 2 {
        return Err(Error::HypothesisViolated("normal form needs r >= 2".into()));
    }
    let nn = m.max(n);
    check_pair(target_v, target_u, m, "targets")?;
    check_pair(v, phi, m, "mask moments")?;
    let v_ext = extend_moment_match(&v.truncate(m), &phi.truncate(nn), nn)?;
    let tv_ext = extend_moment_match(&target_v.truncate(m), &target_u.truncate(nn), nn)?;
    let u1 = row_reduce_to_e1(&tv_ext, nn)?;
    let w = row_reduce_to_e1(&v_ext, nn)?;
    let u2 = w.strong_inverse()?;
    let u1_inv = u1.strong_inverse()?;
    let phi_b = JetMatrix::of(&u2, nn).mul(&phi.truncate(nn))?;
    let u_b = JetMatrix::of(&u1_inv, nn).mul(&target_u.truncate(nn))?;
    let mut u3 = LaurentMatrix::identity(r);
    let mut u3_inv = LaurentMatrix::identity(r);
    for l in 1..r {
        let wl = lift_to_poly(&u_b.get(l, 0).sub(phi_b.get(l, 0)), nn);
        u3_inv.set(l, 0, -&wl);
        u3.set(l, 0, wl);
    }
    let u = &(&u1 * &u3) * &u2;
    let u_inv = &(&w * &u3_inv) * &u1_inv;
    finish(a, m_dil, m, n, u, u_inv, v, phi)
}

#[allow(clippy::too_many_arguments)]
fn finish(
    a: &LaurentMatrix,
    m_dil: usize,
    m: usize,
    n: usize,
    u: LaurentMatrix,
    u_inv: LaurentMatrix,
    v: &JetVector,
    phi: &JetVector,
) -> Result<NormalFormResult> {
    debug_assert!((&u * &u_inv).is_identity());
    let mask = &(&u.upsample(m_dil) * a) * &u_inv;
    let matching_jet = v.truncate(m).mul(&JetMatrix::of(&u_inv, m))?;
    let phi_jet = JetMatrix::of(&u, n).mul(&phi.truncate(n))?;
    Ok(NormalFormResult { u, u_inv, mask, matching_jet, phi_jet })
}

/// Structural checks of the canonical normal form; the error names the failing block.
pub fn check_structure(mask: &LaurentMatrix, m_dil: usize, m: usize, n: usize) -> Result<()> {
    let r = mask.rows();
    let sum = LaurentPoly::from_coeffs(0, vec![GaussRational::one(); m_dil]).pow(m);
    let mut one_minus_zm = LaurentPoly::one();
    one_minus_zm.add_term(m_dil as i64, &GaussRational::from_int(-1));
    let one_minus_zm = one_minus_zm.pow(m);
    let nab_n = LaurentPoly::one_minus_z_pow(n);
    let fail = |what: String| Error::StructureCheckFailed(what);
    mask.get(0, 0).div_exact(&sum).map_err(|_| fail("(1+z+...+z^{M-1})^m does not divide a11".into()))?;
    for j in 1..r {
        mask.get(0, j).div_exact(&one_minus_zm).map_err(|_| fail(format!("(1-z^M)^m does not divide a1{}", j + 1)))?;
        mask.get(j, 0).div_exact(&nab_n).map_err(|_| fail(format!("(1-z)^n does not divide a{}1", j + 1)))?;
    }
    if !MomentJet::of(mask.get(0, 0), n).agrees(&MomentJet::one(n), n) {
        return Err(fail("a11 != 1 + O(xi^n)".into()));
    }
    Ok(())
}

/// Canonical normal form: targets `e1` for both the matching filter and `phi`.
pub fn normal_form_canonical(
    a: &LaurentMatrix,
    m_dil: usize,
    m: usize,
    n: usize,
    v: &JetVector,
    phi: &JetVector,
) -> Result<NormalFormResult> {
    let r = a.rows();
    let nn = m.max(n);
    let res = normal_form_general(a, m_dil, m, n, &JetMatrix::e1(r, m, true), &JetMatrix::e1(r, nn, false), v, phi)?;
    check_structure(&res.mask, m_dil, m, n)?;
    Ok(res)
}

/// Jet of `conj(phi)^T / |phi|^2`.
pub fn dual_of(phi: &JetVector, order: usize) -> Result<JetVector> {
    let phi = phi.truncate(order);
    let norm = phi.star().mul(&phi)?.get(0, 0).clone();
    Ok(phi.star().scale_jet(&norm.inverse()?))
}

/// Normal form whose `U^{-*} U^{-1}` is diagonal to order `max(m, n)`; needs `v = phi^* / |phi|^2`.
pub fn orthogonal_normal_form(
    a: &LaurentMatrix,
    m_dil: usize,
    m: usize,
    n: usize,
    v: &JetVector,
    phi: &JetVector,
) -> Result<NormalFormResult> {
    let r = a.rows();
    let nn = m.max(n);
    if phi.order() < nn {
        return Err(Error::HypothesisViolated(format!("phi jets needed to order {nn}")));
    }
    if !v.agrees(&dual_of(phi, m)?, m) {
        return Err(Error::MomentConditionFailed("v != conj(phi)^T / |phi|^2 + O(xi^m)".into()));
    }
    let base = normal_form_general(a, m_dil, m, nn, &JetMatrix::e1(r, m, true), &JetMatrix::e1(r, nn, false), v, phi)?;
    let vmat = base.u_inv;
    let mut cols: Vec<LaurentMatrix> = Vec::with_capacity(r);
    let mut gs: Vec<LaurentPoly> = Vec::with_capacity(r);
    for j in 0..r {
        let vj = vmat.col(j);
        let mut uj = vj.clone();
        for l in 0..j {
            let ip = (&cols[l].star() * &vj).get(0, 0).clone();
            let coef = &ip * &gs[l];
            uj = &uj - &cols[l].scale_poly(&coef);
        }
        let norm = (&uj.star() * &uj).get(0, 0).clone();
        let g = lift_to_poly(&MomentJet::of(&norm, nn).inverse()?, nn);
        cols.push(uj);
        gs.push(g);
    }
    let u_inv = LaurentMatrix::hstack(&cols);
    let u = u_inv.strong_inverse()?;
    finish(a, m_dil, m, n, u, u_inv, v, phi)
}

/// Whether `U^{-*} U^{-1}` is diagonal through order `k`.
pub fn is_almost_orthogonal(u_inv: &LaurentMatrix, k: usize) -> bool {
    let gram = JetMatrix::of(&(&u_inv.star() * u_inv), k);
    let r = u_inv.cols();
    (0..r).all(|i| (0..r).all(|j| i == j || gram.get(i, j).valuation() >= k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::moments::{moment_data, sum_rules};

    fn lp(kmin: i64, nums: &[i64], den: i64) -> LaurentPoly {
        LaurentPoly::from_fracs(kmin, nums, den)
    }

    #[test]
    fn bezout_examples() {
        let (c, d) = bezout_one(&LaurentPoly::one(), 2).unwrap();
        assert_eq!((c, d), (LaurentPoly::one(), LaurentPoly::zero()));
        let p = lp(0, &[1, 1], 2);
        let (c, d) = bezout_one(&p, 1).unwrap();
        assert_eq!(c, lp(0, &[3, -1], 2));
        assert_eq!(d, lp(0, &[1], 4));
        assert_eq!(bezout_one(&lp(0, &[1, -1], 1), 1), Err(Error::NotCoprime));
        let p = lp(-2, &[3, 1, 4, 1], 5);
        let (c, d) = bezout_one(&p, 3).unwrap();
        assert!((&(&p * &c) + &(&LaurentPoly::one_minus_z_pow(6) * &d)).is_one());
    }

    #[test]
    fn row_reduce_examples() {
        let e1 = JetMatrix::e1(2, 3, true);
        assert!(row_reduce_to_e1(&e1, 3).unwrap().is_identity());
        let v = JetMatrix::of(&LaurentMatrix::from_rows(vec![vec![LaurentPoly::z_pow(1), LaurentPoly::zero()]]), 4);
        let u = row_reduce_to_e1(&v, 4).unwrap();
        assert!(u.is_strongly_invertible());
        assert!(v.mul(&JetMatrix::of(&u, 4)).unwrap().agrees(&JetMatrix::e1(2, 4, true), 4));
        let v3 = JetMatrix::of(
            &LaurentMatrix::from_rows(vec![vec![lp(0, &[0], 1), lp(-1, &[1, 2], 3), lp(0, &[1, 0, 5], 1)]]),
            4,
        );
        let u = row_reduce_to_e1(&v3, 4).unwrap();
        assert!(u.is_strongly_invertible());
        assert!(v3.mul(&JetMatrix::of(&u, 4)).unwrap().agrees(&JetMatrix::e1(3, 4, true), 4));
        let zero = JetMatrix::zeros(1, 2, 2);
        assert_eq!(row_reduce_to_e1(&zero, 2), Err(Error::ZeroAtOrigin));
    }

    #[test]
    fn align_to_upsilon() {
        let v = JetMatrix::e1(2, 2, true);
        let ups = JetMatrix::upsilon(2, 2);
        let u = align_vectors(&v, &ups, 2).unwrap();
        assert!(v.mul(&JetMatrix::of(&u, 2)).unwrap().agrees(&ups, 2));
        let one = JetMatrix::e1(1, 2, true);
        assert!(align_vectors(&one, &one, 2).is_err());
    }

    #[test]
    fn extend_examples() {
        let ups = JetMatrix::upsilon(2, 2).scale(&GaussRational::from_frac(1, 2));
        let uu = JetMatrix::upsilon(2, 4).star();
        let ext = extend_moment_match(&ups, &uu, 4).unwrap();
        assert!(ext.agrees(&ups, 2));
        assert!(ext.mul(&uu).unwrap().get(0, 0).agrees(&MomentJet::one(4), 4));
        assert_eq!(extend_moment_match(&ups, &uu, 2).unwrap(), ups);
        let u1 = JetMatrix::from_fn(1, 1, 3, |_, _| MomentJet::constant(GaussRational::from_int(2), 3));
        let v1 = JetMatrix::from_fn(1, 1, 1, |_, _| MomentJet::constant(GaussRational::from_frac(1, 2), 1));
        let e = extend_moment_match(&v1, &u1, 3).unwrap();
        assert_eq!(e.get(0, 0), &MomentJet::constant(GaussRational::from_frac(1, 2), 3));
        let bad = JetMatrix::from_fn(1, 1, 1, |_, _| MomentJet::constant(GaussRational::from_int(3), 1));
        assert!(matches!(extend_moment_match(&bad, &u1, 3), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn hermite_canonical_form() {
        let a = fixtures::hermite();
        let (v, phi) = moment_data(&a, 2, 2, 4).unwrap();
        let res = normal_form_canonical(&a, 2, 2, 4, &v, &phi).unwrap();
        assert!((&res.u * &res.u_inv).is_identity());
        assert!(res.matching_jet.agrees(&JetMatrix::e1(2, 2, true), 2));
        assert!(res.phi_jet.agrees(&JetMatrix::e1(2, 4, false), 4));
        assert!(sum_rules(&res.mask, 2, 4).unwrap().order >= 2);
        let mut broken = res.mask.clone();
        let bumped = broken.get(0, 1) + &LaurentPoly::one();
        broken.set(0, 1, bumped);
        assert!(matches!(check_structure(&broken, 2, 2, 4), Err(Error::StructureCheckFailed(_))));
    }

    #[test]
    fn example61_already_normal() {
        let a = fixtures::example61(None);
        assert!(check_structure(&a, 2, 2, 2).is_ok());
        let (v, phi) = moment_data(&a, 2, 2, 2).unwrap();
        let res = normal_form_canonical(&a, 2, 2, 2, &v, &phi).unwrap();
        assert!(res.u.is_identity());
        let (v, phi) = moment_data(&a, 2, 2, 4).unwrap();
        let res = normal_form_canonical(&a, 2, 2, 4, &v, &phi).unwrap();
        assert!(res.phi_jet.agrees(&JetMatrix::e1(2, 4, false), 4));
    }

    #[test]
    fn orthogonal_variant_with_upsilon() {
        let a = fixtures::vec_bspline2();
        let (v, phi) = moment_data(&a, 2, 2, 4).unwrap();
        let dual = dual_of(&phi, 2).unwrap();
        assert!(v.agrees(&dual, 2));
        let res = orthogonal_normal_form(&a, 2, 2, 4, &v, &phi).unwrap();
        assert!(is_almost_orthogonal(&res.u_inv, 4));
        assert!(res.phi_jet.agrees(&JetMatrix::e1(2, 4, false), 4));
        assert!(res.matching_jet.agrees(&JetMatrix::e1(2, 2, true), 2));
    }
}
