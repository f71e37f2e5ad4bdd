//! Named masks used throughout the tests and the CLI.

use crate::error::{Error, Result};
use crate::exactnum::{rat, GaussRational, QuadScalar};
use crate::laurent::{LaurentMatrix, LaurentPoly, ScaledMatrix};
use crate::qtconstruct::{OepBank, QtFilterBank};

fn lp(kmin: i64, nums: &[i64], den: i64) -> LaurentPoly {
    LaurentPoly::from_fracs(kmin, nums, den)
}

/// `M^{-m} (1 + z + ... + z^{M-1})^m`.
pub fn bspline_poly(m: usize, m_dil: usize) -> LaurentPoly {
    let base = LaurentPoly::from_coeffs(0, vec![GaussRational::from_frac(1, m_dil as i64); m_dil]);
    base.pow(m)
}

pub fn bspline(m: usize, m_dil: usize) -> LaurentMatrix {
    LaurentMatrix::scalar(bspline_poly(m, m_dil))
}

/// Hermite interpolatory mask with sum-rule order 4.
pub fn hermite() -> LaurentMatrix {
    LaurentMatrix::from_rows(vec![
        vec![lp(-1, &[4, 8, 4], 16), lp(-1, &[6, 0, -6], 16)],
        vec![lp(-1, &[-1, 0, 1], 16), lp(-1, &[-1, 4, -1], 16)],
    ])
}

/// Vectorised hat function `[phi(2.), phi(2. - 1)]`.
pub fn vec_bspline2() -> LaurentMatrix {
    LaurentMatrix::from_rows(vec![
        vec![lp(0, &[2], 4), lp(-1, &[1, 1], 4)],
        vec![lp(1, &[2], 4), lp(0, &[1, 1], 4)],
    ])
}

/// `diag((z^-1 + 2 + z)/4, p)`; the default `p` is `z^-1/4 + 7/2 + z/4`.
pub fn example61(p: Option<LaurentPoly>) -> LaurentMatrix {
    let p = p.unwrap_or_else(|| lp(-1, &[1, 14, 1], 4));
    LaurentMatrix::diag(vec![lp(-1, &[1, 2, 1], 4), p])
}

/// Vectorisation of a scalar mask: `A(l)_{j,i} = a(r l + i - M j)`.
pub fn vectorize_mask(a: &LaurentPoly, r: usize, m_dil: usize) -> LaurentMatrix {
    let (r_i, m_i) = (r as i64, m_dil as i64);
    let mut out = LaurentMatrix::zeros(r, r);
    for (k, c) in a.terms() {
        for j in 0..r_i {
            for i in 0..r_i {
                let t = k - i + m_i * j;
                if t.rem_euclid(r_i) == 0 {
                    let l = t.div_euclid(r_i);
                    let mut e = out.get(j as usize, i as usize).clone();
                    e.add_term(l, c);
                    out.set(j as usize, i as usize, e);
                }
            }
        }
    }
    out
}

/// Scalar tight bank over the hat mask `(1 + z)^2 / 4` with `theta = (1 + z)/2`; `Theta(pi) = 0`.
///
/// `b1 = (z - 1)(z + 1)^3 / 8`, `b2 = (z^2 - 1) / 4`.
pub fn oep_scalar_singular() -> OepBank {
    let a = LaurentMatrix::scalar(lp(0, &[1, 2, 1], 4));
    let theta = lp(0, &[1, 1], 2);
    let b1 = &lp(0, &[-1, 1], 1) * &lp(0, &[1, 1], 1).pow(3);
    let b = ScaledMatrix::new(
        QuadScalar::one(),
        LaurentMatrix::from_rows(vec![vec![b1.scale_rat(&rat(1, 8))], vec![lp(0, &[-1, 0, 1], 4)]]),
    );
    OepBank {
        m_dil: 2,
        a: a.clone(),
        a_dual: a,
        b: b.clone(),
        b_dual: b,
        theta: ScaledMatrix::rational(LaurentMatrix::scalar(&theta.star() * &theta)),
    }
}

/// Vector tight bank over `diag(hat, 1)/4` with `theta = diag((1 + z)/2, 0)`; `det Theta = 0`.
///
/// `b = [z^{-1}(1 - z)(1 + z)^3, 0; 2z(z^2 - 1), 0] / 8`.
pub fn oep_vector_singular() -> OepBank {
    let a = LaurentMatrix::diag(vec![lp(-1, &[1, 2, 1], 4), lp(0, &[1], 4)]);
    let theta = LaurentMatrix::diag(vec![lp(0, &[1, 1], 2), LaurentPoly::zero()]);
    let b11 = (&lp(0, &[1, -1], 1) * &lp(0, &[1, 1], 1).pow(3)).shift(-1);
    let b21 = lp(1, &[-2, 0, 2], 1);
    let b = ScaledMatrix::new(
        QuadScalar::one(),
        LaurentMatrix::from_rows(vec![
            vec![b11.scale_rat(&rat(1, 8)), LaurentPoly::zero()],
            vec![b21.scale_rat(&rat(1, 8)), LaurentPoly::zero()],
        ]),
    );
    OepBank {
        m_dil: 2,
        a: a.clone(),
        a_dual: a,
        b: b.clone(),
        b_dual: b,
        theta: ScaledMatrix::rational(&theta.star() * &theta),
    }
}

/// Orthonormal Haar bank as an OEP bank with `Theta = 1`.
pub fn oep_haar() -> OepBank {
    let a = LaurentMatrix::scalar(lp(0, &[1, 1], 2));
    let b = ScaledMatrix::rational(LaurentMatrix::scalar(lp(0, &[1, -1], 2)));
    OepBank { m_dil: 2, a: a.clone(), a_dual: a, b: b.clone(), b_dual: b, theta: ScaledMatrix::rational(LaurentMatrix::identity(1)) }
}

/// Haar bank `a = (1 + z)/2`, `b = (1 - z)/2`, `theta = 1` as a (tight) quasi-tight bank.
pub fn haar_bank() -> QtFilterBank {
    QtFilterBank {
        m_dil: 2,
        r: 1,
        s: 1,
        a: LaurentMatrix::scalar(lp(0, &[1, 1], 2)),
        theta: ScaledMatrix::rational(LaurentMatrix::identity(1)),
        b: ScaledMatrix::rational(LaurentMatrix::scalar(lp(0, &[1, -1], 2))),
        eps: vec![1],
        m: 1,
        n: 2,
    }
}

pub const OEP_NAMES: &[&str] = &["haar", "scalar-singular", "vector-singular"];

pub fn oep_fixture(name: &str) -> Result<OepBank> {
    match name.trim() {
        "haar" => Ok(oep_haar()),
        "scalar-singular" => Ok(oep_scalar_singular()),
        "vector-singular" => Ok(oep_vector_singular()),
        other => Err(Error::UnknownFixture(other.to_string())),
    }
}

pub const NAMES: &[&str] = &["bspline(m,M)", "hermite", "vec-bspline2", "example61", "vec-bspline(m,M)"];

/// Look up a fixture mask and its dilation by name.
pub fn fixture(name: &str) -> Result<(LaurentMatrix, usize)> {
    let name = name.trim();
    let unknown = || Error::UnknownFixture(name.to_string());
    match name {
        "hermite" => return Ok((hermite(), 2)),
        "vec-bspline2" => return Ok((vec_bspline2(), 2)),
        "example61" => return Ok((example61(None), 2)),
        _ => {}
    }
    let parse_pair = |body: &str| -> Result<(usize, usize)> {
        let (m, d) = body.split_once(',').ok_or_else(unknown)?;
        let m: usize = m.trim().parse().map_err(|_| unknown())?;
        let d: usize = d.trim().parse().map_err(|_| unknown())?;
        if m == 0 || d < 2 {
            return Err(unknown());
        }
        Ok((m, d))
    };
    if let Some(body) = name.strip_prefix("bspline(").and_then(|s| s.strip_suffix(')')) {
        let (m, d) = parse_pair(body)?;
        return Ok((bspline(m, d), d));
    }
    if let Some(body) = name.strip_prefix("vec-bspline(").and_then(|s| s.strip_suffix(')')) {
        let (m, d) = parse_pair(body)?;
        return Ok((vectorize_mask(&bspline_poly(m, d), 2, d), d));
    }
    Err(unknown())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vectorized_hat_matches_printed_mask() {
        let hat = lp(-1, &[1, 2, 1], 4);
        assert_eq!(vectorize_mask(&hat, 2, 2), vec_bspline2());
    }

    #[test]
    fn singular_controls_are_tight() {
        use crate::qtconstruct::verify_oep;
        for name in OEP_NAMES {
            let rep = verify_oep(&oep_fixture(name).unwrap()).unwrap();
            assert!(rep.holds(), "{name}: {rep:?}");
        }
    }

    #[test]
    fn haar_bank_verifies() {
        use crate::moments::moment_data;
        use crate::qtconstruct::{check_theta, verify_quasitight};
        let bank = haar_bank();
        let rep = verify_quasitight(&bank).unwrap();
        assert!(rep.holds(1), "{rep:?}");
        assert_eq!((rep.sum_rules, rep.vm), (1, 1));
        let (v, phi) = moment_data(&bank.a, 2, 1, 2).unwrap();
        assert!(check_theta(&bank.theta, &bank.a, 2, 1, &v, &phi).unwrap().holds());
    }

    #[test]
    fn lookup() {
        assert_eq!(fixture("bspline(2,2)").unwrap().0, LaurentMatrix::scalar(lp(0, &[1, 2, 1], 4)));
        assert_eq!(fixture("hermite").unwrap().0, hermite());
        assert!(matches!(fixture("nope"), Err(Error::UnknownFixture(_))));
        assert_eq!(fixture("vec-bspline(3,2)").unwrap().0.rows(), 2);
    }
}
