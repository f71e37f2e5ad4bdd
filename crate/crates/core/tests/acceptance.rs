//! Acceptance run: one PASS/FAIL line per criterion; exits nonzero if any fails.

mod common;

use std::f64::consts::FRAC_PI_4;
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qtframe::exactnum::GaussRational;
use qtframe::fixtures;
use qtframe::moments::{moment_data, sum_rules};
use qtframe::normalform::{check_structure, is_almost_orthogonal, normal_form_canonical, orthogonal_normal_form};
use qtframe::qtconstruct::{
    check_theta, construct_quasitight, psd_probe, verify_oep, verify_quasitight, QtFilterBank, QtReport,
};
use qtframe::transform::{
    annihilator_witness, classify_theta_conv, polynomial_signal, random_signal, valid_range, vector_convert, Signal,
    ThetaClass, TransformFilters,
};
use qtframe::{JetMatrix, LaurentMatrix, Result, ScaledMatrix};

struct Built {
    label: String,
    bank: QtFilterBank,
    report: QtReport,
    seconds: f64,
}

struct Line {
    pass: bool,
    detail: String,
}

fn line(pass: bool, detail: impl Into<String>) -> Line {
    Line { pass, detail: detail.into() }
}

fn build(name: &str, m: Option<usize>) -> Result<Built> {
    let t0 = Instant::now();
    let (a, m_dil) = fixtures::fixture(name)?;
    let bank = construct_quasitight(&a, m_dil, m, None)?;
    let report = verify_quasitight(&bank)?;
    Ok(Built { label: format!("{name} m={}", bank.m), bank, report, seconds: t0.elapsed().as_secs_f64() })
}

fn identities(built: &[Result<Built>]) -> Line {
    let mut pass = true;
    let mut parts = Vec::new();
    for b in built {
        match b {
            Ok(b) => {
                let ok = b.report.identity && b.report.theta_strongly_invertible && b.seconds < 60.0;
                pass &= ok;
                parts.push(format!("{} {} {:.1}s", b.label, if ok { "exact" } else { "FAILED" }, b.seconds));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("error: {e}"));
            }
        }
    }
    line(pass, format!("quasi-tight identities hold exactly: {}", parts.join("; ")))
}

fn orders(built: &[&Built]) -> Result<Line> {
    let sr = sum_rules(&fixtures::hermite(), 2, 8)?.order;
    let find = |label: &str| built.iter().find(|b| b.label == label);
    let mut pass = sr == 4;
    let mut parts = vec![format!("sr(hermite) = {sr}")];
    for label in ["hermite m=2", "vec-bspline2 m=2"] {
        match find(label) {
            Some(b) => {
                let r = &b.report;
                let ok = if label.starts_with("hermite") {
                    (r.vm, r.bvm, r.bpo) == (2, 2, 2)
                } else {
                    (r.bvm, r.bpo) == (2, 2)
                };
                pass &= ok;
                parts.push(format!("{label}: vm={} bvm={} bpo={}", r.vm, r.bvm, r.bpo));
            }
            None => {
                pass = false;
                parts.push(format!("{label}: not built"));
            }
        }
    }
    Ok(line(pass, format!("orders: {}", parts.join("; "))))
}

fn round_trips(built: &[&Built]) -> Result<Line> {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut failures = 0;
    let mut total = 0;
    for b in built {
        let f = TransformFilters::from_bank(&b.bank)?;
        for _ in 0..20 {
            let offset = rng.gen_range(-8..=8);
            let v = random_signal(&mut rng, b.bank.r, 64, offset);
            let back = f.synthesize(&f.analyze(&v, 3)?)?;
            total += 1;
            if back != v {
                failures += 1;
            }
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    Ok(line(
        failures == 0 && secs < 30.0,
        format!("perfect reconstruction: {}/{total} exact 3-level round trips (support 64) in {secs:.1}s", total - failures),
    ))
}

/// Indices of `details[level - 1]` whose whole stencil sees the input window.
fn interior(f: &TransformFilters, window: (i64, i64), level: usize) -> Option<(i64, i64)> {
    let a = f.a.mat.support()?;
    let b = f.b.mat.support()?;
    let mut range = window;
    for _ in 1..level {
        range = valid_range(range, a, f.m_dil)?;
    }
    valid_range(range, b, f.m_dil)
}

fn interior_zero(f: &TransformFilters, v: &Signal, levels: usize) -> Result<Vec<bool>> {
    let window = v.support().expect("nonempty");
    let p = f.analyze(v, levels)?;
    Ok((1..=levels)
        .map(|j| match interior(f, window, j) {
            Some((lo, hi)) => (lo..=hi).all(|n| p.details[j - 1].get(n).iter().all(GaussRational::is_zero)),
            None => true,
        })
        .collect())
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn sparsity(built: &[&Built]) -> Result<Line> {
    let mut pass = true;
    let mut parts = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for b in built.iter().filter(|b| b.report.bpo == b.bank.m) {
        let f = TransformFilters::from_bank(&b.bank)?;
        let (r, m) = (b.bank.r, b.bank.m);
        // long enough for a nonempty level-3 interior
        let mut len = 64 * r;
        while interior(&f, (0, (len / r) as i64 - 1), 3).is_none() {
            len *= 2;
        }
        let mut inputs: Vec<Vec<BigRational>> = (0..m).map(|d| (0..=d).map(|i| rat(i64::from(i == d))).collect()).collect();
        inputs.push((0..m).map(|_| rat(rng.gen_range(-9..=9))).collect());
        let mut zero_ok = true;
        for (idx, coeffs) in inputs.iter().enumerate() {
            let start = if idx == m { 3 } else { 0 };
            let v = vector_convert(&polynomial_signal(coeffs, start * r as i64, len), r)?;
            zero_ok &= interior_zero(&f, &v, 3)?.into_iter().all(|z| z);
        }
        let top: Vec<BigRational> = (0..=m).map(|i| rat(i64::from(i == m))).collect();
        let v = vector_convert(&polynomial_signal(&top, 0, len), r)?;
        let witness = interior_zero(&f, &v, 3)?.iter().any(|z| !z);
        pass &= zero_ok && witness;
        parts.push(format!(
            "{}: degree<{m} interior details zero={zero_ok}, degree-{m} witness nonzero={witness}",
            b.label
        ));
    }
    if parts.is_empty() {
        pass = false;
        parts.push("no bank with bpo = m".into());
    }
    Ok(line(pass, format!("balancing sparsity: {}", parts.join("; "))))
}

fn normal_form() -> Result<Line> {
    let a = fixtures::hermite();
    let (m, n) = (4, 8);
    let (v, phi) = moment_data(&a, 2, m, n)?;
    let nf = normal_form_canonical(&a, 2, m, n, &v, &phi)?;
    let structure = check_structure(&nf.mask, 2, m, n).is_ok();
    let on = orthogonal_normal_form(&nf.mask, 2, m, n, &JetMatrix::e1(2, m, true), &JetMatrix::e1(2, n, false))?;
    let orth = is_almost_orthogonal(&on.u_inv, m.max(n));
    let orth_structure = check_structure(&on.mask, 2, m, n).is_ok();
    Ok(line(
        structure && orth && orth_structure,
        format!(
            "normal form of hermite (m=4, n=8): structure checks={structure}, orthogonal variant diagonal through order 8={orth}, keeps structure={orth_structure}"
        ),
    ))
}

fn theta_checks(built: &[&Built]) -> Result<Line> {
    let mut pass = true;
    let mut parts = Vec::new();
    for b in built {
        let bank = &b.bank;
        let (v, phi) = moment_data(&bank.a, bank.m_dil, bank.m, bank.n)?;
        let rep = check_theta(&bank.theta, &bank.a, bank.m_dil, bank.m, &v, &phi)?;
        pass &= rep.holds();
        parts.push(format!("{} (i)={} (ii)={}", b.label, rep.item_i.holds, rep.item_ii.holds));
    }
    let a = fixtures::hermite();
    let id = ScaledMatrix::rational(LaurentMatrix::identity(2));
    for m in [2, 4] {
        let (v, phi) = moment_data(&a, 2, m, 2 * m)?;
        let rep = check_theta(&id, &a, 2, m, &v, &phi)?;
        pass &= !rep.item_i.holds;
        parts.push(format!("hermite theta=I m={m} (i)={}", rep.item_i.holds));
    }
    Ok(line(pass, format!("theta characterization: {}", parts.join("; "))))
}

fn negative_controls() -> Result<Line> {
    let scalar = fixtures::oep_scalar_singular();
    let oep_ok = verify_oep(&scalar)?.holds();
    let theta = scalar.theta.to_rational()?;
    let class = classify_theta_conv(&theta)?;
    let det_pi = class.det.eval(&GaussRational::from_int(-1))?;
    let witness = annihilator_witness(&theta, 2, 16)?;
    let vector = fixtures::oep_vector_singular();
    let vec_ok = verify_oep(&vector)?.holds();
    let vclass = classify_theta_conv(&vector.theta.to_rational()?)?;
    let pass = oep_ok
        && class.class == ThetaClass::Singular
        && det_pi.is_zero()
        && witness.verified
        && vec_ok
        && vclass.class == ThetaClass::Singular
        && vclass.det.is_zero();
    Ok(line(
        pass,
        format!(
            "negative controls: scalar OEP holds={oep_ok}, class={:?}, det Theta(pi)={det_pi}, (-1)^k annihilated on {:?}={}; vector OEP holds={vec_ok}, class={:?}, det={}",
            class.class, witness.interior, witness.verified, vclass.class, vclass.det
        ),
    ))
}

fn psd() -> Result<Line> {
    let t0 = Instant::now();
    let rep = psd_probe(&fixtures::hermite(), &LaurentMatrix::identity(2), 2, 64)?;
    let secs = t0.elapsed().as_secs_f64();
    let min = rep.min_in(-FRAC_PI_4, FRAC_PI_4);
    let pass = min.is_some_and(|l| l < -1e-6) && secs < 5.0;
    Ok(line(pass, format!("PSD obstruction for hermite with Theta = I: least eigenvalue on (-pi/4, pi/4) = {} in {secs:.2}s", min.map_or("none".into(), |l| format!("{l:.6}")))))
}

fn properties() -> Line {
    let t0 = Instant::now();
    let mut failed = Vec::new();
    for (name, suite) in common::SUITES {
        if let Err(e) = suite(common::CASES) {
            failed.push(format!("{name}: {e}"));
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    let detail = if failed.is_empty() {
        format!("{} property suites x {} cases exact in {secs:.1}s", common::SUITES.len(), common::CASES)
    } else {
        format!("failures: {}", failed.join("; "))
    };
    line(failed.is_empty() && secs < 60.0, detail)
}

fn or_error(r: Result<Line>) -> Line {
    r.unwrap_or_else(|e| line(false, format!("error: {e}")))
}

fn main() -> ExitCode {
    let built: Vec<Result<Built>> = [
        ("hermite", Some(2)),
        ("hermite", Some(4)),
        ("vec-bspline2", Some(2)),
        ("example61", Some(2)),
        ("vec-bspline(3,2)", None),
    ]
    .into_iter()
    .map(|(name, m)| build(name, m))
    .collect();
    let ok: Vec<&Built> = built.iter().filter_map(|b| b.as_ref().ok()).collect();

    let lines = [
        identities(&built),
        or_error(orders(&ok)),
        or_error(round_trips(&ok)),
        or_error(sparsity(&ok)),
        or_error(normal_form()),
        or_error(theta_checks(&ok)),
        or_error(negative_controls()),
        or_error(psd()),
        properties(),
    ];
    let mut all = true;
    for (i, l) in lines.iter().enumerate() {
        println!("{} criterion {}: {}", if l.pass { "PASS" } else { "FAIL" }, i + 1, l.detail);
        all &= l.pass;
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
