//! `qtframe` command-line front end.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use qtframe::bankio::{self, BankFile, MaskFile, MatrixFile, PyramidFile, SignalFile};
use qtframe::fixtures;
use qtframe::moments::{moment_data, refinable_jets, sum_rules};
use qtframe::normalform::{is_almost_orthogonal, normal_form_canonical, orthogonal_normal_form};
use qtframe::qtconstruct::{
    check_theta, construct_quasitight, psd_probe, verify_oep, verify_quasitight_capped, QtFilterBank, ThetaReport,
    ORDER_CAP,
};
use qtframe::transform::{
    annihilator_witness, cascade_mask, cascade_render, classify_theta_conv, random_signal, Component, ThetaClass,
    TransformFilters,
};
use qtframe::{JetMatrix, LaurentMatrix, ScaledMatrix};

#[derive(Parser)]
#[command(name = "qtframe", version, about = "Exact quasi-tight multiframelet filter banks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a quasi-tight bank from a mask and verify it.
    Construct {
        /// Mask file or `fixture:NAME`.
        #[arg(long)]
        mask: String,
        #[arg(long)]
        dilation: Option<usize>,
        /// Vanishing-moment order `m` (default: sum-rule order).
        #[arg(long)]
        order: Option<usize>,
        /// Smoothness order `n` (default: 2m).
        #[arg(long)]
        smooth_order: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify the identities and moment orders of a bank file.
    Verify {
        #[arg(long)]
        bank: PathBuf,
        #[arg(long, default_value_t = ORDER_CAP)]
        cap: usize,
    },
    /// Check whether theta characterizes a quasi-tight bank with `m` vanishing moments.
    CheckTheta {
        #[arg(long, conflicts_with = "mask")]
        bank: Option<PathBuf>,
        #[arg(long)]
        mask: Option<String>,
        #[arg(long)]
        dilation: Option<usize>,
        #[arg(long)]
        order: Option<usize>,
        /// `identity` or a matrix file.
        #[arg(long, default_value = "identity")]
        theta: String,
    },
    /// Canonical (or almost orthogonal) normal form of a mask.
    NormalForm {
        #[arg(long)]
        mask: String,
        #[arg(long)]
        dilation: Option<usize>,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        smooth_order: Option<usize>,
        #[arg(long)]
        orthogonal: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Multi-level analysis, optionally followed by synthesis.
    Transform {
        #[arg(long)]
        bank: PathBuf,
        #[arg(long, conflicts_with = "random")]
        signal: Option<PathBuf>,
        /// Generate this many random rational samples instead of reading a signal.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        levels: usize,
        #[arg(long)]
        roundtrip: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify theta (or Theta of an OEP bank) for convolution invertibility.
    ClassifyTheta {
        #[arg(long, conflicts_with_all = ["bank", "oep"])]
        theta: Option<PathBuf>,
        #[arg(long, conflicts_with = "oep")]
        bank: Option<PathBuf>,
        /// Built-in OEP bank: haar, scalar-singular, vector-singular.
        #[arg(long)]
        oep: Option<String>,
        /// Also probe `M_{a, Theta}` for positive semidefiniteness; needs a mask.
        #[arg(long)]
        psd: bool,
        #[arg(long)]
        mask: Option<String>,
        #[arg(long)]
        dilation: Option<usize>,
        #[arg(long, default_value_t = 512)]
        samples: usize,
    },
    /// Sample phi or psi by the cascade algorithm and emit CSV.
    Cascade {
        #[arg(long, conflicts_with = "mask")]
        bank: Option<PathBuf>,
        #[arg(long)]
        mask: Option<String>,
        #[arg(long)]
        dilation: Option<usize>,
        #[arg(long, value_enum, default_value_t = Comp::Phi)]
        component: Comp,
        #[arg(long, default_value_t = 6)]
        levels: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the built-in masks, or write them as files.
    Fixtures {
        #[arg(long)]
        write: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Comp {
    Phi,
    Psi,
}

struct Outcome {
    pass: bool,
    text: Vec<String>,
    json: Value,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = command_name(&cli.cmd);
    match run(cli.cmd) {
        Ok(o) => {
            let mut json = o.json;
            json["command"] = json!(name);
            json["status"] = json!(if o.pass { "pass" } else { "fail" });
            emit(&o.text, &json);
            if o.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            let rec = json!({ "command": name, "status": "error", "error": format!("{e:#}") });
            emit(&[], &rec);
            ExitCode::from(2)
        }
    }
}

/// Text lines, a `---` separator, then the JSON report; a closed stdout is not an error.
fn emit(text: &[String], json: &Value) {
    let mut out = std::io::stdout().lock();
    let mut body = String::new();
    for line in text {
        body.push_str(line);
        body.push('\n');
    }
    body.push_str("---\n");
    body.push_str(&serde_json::to_string_pretty(json).expect("json"));
    body.push('\n');
    let _ = out.write_all(body.as_bytes()).and_then(|_| out.flush());
}

fn command_name(c: &Cmd) -> &'static str {
    match c {
        Cmd::Construct { .. } => "construct",
        Cmd::Verify { .. } => "verify",
        Cmd::CheckTheta { .. } => "check-theta",
        Cmd::NormalForm { .. } => "normal-form",
        Cmd::Transform { .. } => "transform",
        Cmd::ClassifyTheta { .. } => "classify-theta",
        Cmd::Cascade { .. } => "cascade",
        Cmd::Fixtures { .. } => "fixtures",
    }
}

fn run(cmd: Cmd) -> anyhow::Result<Outcome> {
    match cmd {
        Cmd::Construct { mask, dilation, order, smooth_order, out } => construct(&mask, dilation, order, smooth_order, out),
        Cmd::Verify { bank, cap } => {
            let b = bankio::load_bank(&bank).with_context(|| format!("loading {}", bank.display()))?;
            verify(&b, cap)
        }
        Cmd::CheckTheta { bank, mask, dilation, order, theta } => cmd_check_theta(bank, mask, dilation, order, &theta),
        Cmd::NormalForm { mask, dilation, order, smooth_order, orthogonal, out } => {
            normal_form(&mask, dilation, order, smooth_order, orthogonal, out)
        }
        Cmd::Transform { bank, signal, random, seed, levels, roundtrip, out } => {
            transform(&bank, signal, random, seed, levels, roundtrip, out)
        }
        Cmd::ClassifyTheta { theta, bank, oep, psd, mask, dilation, samples } => {
            classify(theta, bank, oep, psd, mask, dilation, samples)
        }
        Cmd::Cascade { bank, mask, dilation, component, levels, out } => cascade(bank, mask, dilation, component, levels, out),
        Cmd::Fixtures { write } => cmd_fixtures(write),
    }
}

/// `fixture:NAME` or a mask file; `--dilation` must agree with the source when both give one.
fn load_mask_arg(mask_arg: &str, dilation: Option<usize>) -> anyhow::Result<(LaurentMatrix, usize)> {
    let (a, m_dil) = match mask_arg.strip_prefix("fixture:") {
        Some(name) => fixtures::fixture(name)?,
        None => bankio::load_mask(mask_arg).with_context(|| format!("loading {mask_arg}"))?,
    };
    if let Some(d) = dilation {
        if d != m_dil {
            bail!("--dilation {d} disagrees with the mask's dilation {m_dil}");
        }
    }
    Ok((a, m_dil))
}

fn theta_json(t: &ThetaReport) -> Value {
    json!({
        "holds": t.holds(),
        "item_i": {
            "holds": t.item_i.holds,
            "c_abs2_at_0": t.item_i.c0_abs2.to_string(),
            "d_abs2_at_0": t.item_i.d0_abs2.to_string(),
        },
        "item_ii": {
            "holds": t.item_ii.holds,
            "failing_entry": t.item_ii.failing_entry,
        },
    })
}

fn bank_theta_report(bank: &QtFilterBank) -> anyhow::Result<ThetaReport> {
    let (v, phi) = moment_data(&bank.a, bank.m_dil, bank.m, bank.n.max(2 * bank.m))?;
    Ok(check_theta(&bank.theta, &bank.a, bank.m_dil, bank.m, &v, &phi)?)
}

fn verify(bank: &QtFilterBank, cap: usize) -> anyhow::Result<Outcome> {
    let t0 = Instant::now();
    let rep = verify_quasitight_capped(bank, cap)?;
    let theta = if rep.theta_strongly_invertible { Some(bank_theta_report(bank)?) } else { None };
    let pass = rep.holds(bank.m) && theta.as_ref().is_some_and(ThetaReport::holds);
    let mut text = vec![
        format!("bank: M = {}, r = {}, s = {}, m = {}, n = {}", bank.m_dil, bank.r, bank.s, bank.m, bank.n),
        format!("signature eps: {:?}", bank.eps),
        format!("quasi-tight identities: {}", verdict(rep.identity)),
    ];
    if let Some(w) = &rep.witness {
        text.push(format!("  first defect: {w}"));
    }
    text.push(format!("theta strongly invertible: {}", rep.theta_strongly_invertible));
    text.push(format!("sum rules: {}", rep.sum_rules));
    text.push(format!("vm = {}, bvm = {}, bpo = {} (required {})", rep.vm, rep.bvm, rep.bpo, bank.m));
    if let Some(t) = &theta {
        text.push(format!("theta items: (i) {}, (ii) {}", verdict(t.item_i.holds), verdict(t.item_ii.holds)));
    }
    text.push(format!("elapsed: {:.2} s", t0.elapsed().as_secs_f64()));
    text.push(format!("verdict: {}", verdict(pass)));
    let json = json!({
        "M": bank.m_dil, "r": bank.r, "s": bank.s, "m": bank.m, "n": bank.n,
        "eps": bank.eps,
        "identity": rep.identity,
        "witness": rep.witness,
        "theta_strongly_invertible": rep.theta_strongly_invertible,
        "sum_rules": rep.sum_rules,
        "vm": rep.vm, "bvm": rep.bvm, "bpo": rep.bpo,
        "theta": theta.as_ref().map(theta_json),
        "elapsed_s": t0.elapsed().as_secs_f64(),
    });
    Ok(Outcome { pass, text, json })
}

fn verdict(b: bool) -> &'static str {
    if b {
        "PASS"
    } else {
        "FAIL"
    }
}

fn construct(
    mask: &str,
    dilation: Option<usize>,
    order: Option<usize>,
    smooth_order: Option<usize>,
    out: Option<PathBuf>,
) -> anyhow::Result<Outcome> {
    let (a, m_dil) = load_mask_arg(mask, dilation)?;
    let t0 = Instant::now();
    let bank = construct_quasitight(&a, m_dil, order, smooth_order)?;
    let built = t0.elapsed().as_secs_f64();
    let mut o = verify(&bank, ORDER_CAP)?;
    o.text.insert(0, format!("constructed from {mask} in {built:.2} s"));
    o.json["source"] = json!(mask);
    o.json["construct_s"] = json!(built);
    if let Some(path) = out {
        let file = BankFile::from_bank(&bank, vec![format!("constructed from {mask}")]);
        bankio::save(&path, &file)?;
        o.text.push(format!("wrote {}", path.display()));
        o.json["out"] = json!(path.display().to_string());
    }
    Ok(o)
}

fn cmd_check_theta(
    bank: Option<PathBuf>,
    mask: Option<String>,
    dilation: Option<usize>,
    order: Option<usize>,
    theta: &str,
) -> anyhow::Result<Outcome> {
    let (a, m_dil, m, theta_m) = match (bank, mask) {
        (Some(path), None) => {
            let b = bankio::load_bank(&path)?;
            let th = if theta == "identity" { b.theta.clone() } else { bankio::load_matrix(theta)? };
            (b.a, b.m_dil, order.unwrap_or(b.m), th)
        }
        (None, Some(mask_arg)) => {
            let (a, m_dil) = load_mask_arg(&mask_arg, dilation)?;
            let m = match order {
                Some(m) => m,
                None => sum_rules(&a, m_dil, ORDER_CAP)?.order,
            };
            let th = if theta == "identity" {
                ScaledMatrix::rational(LaurentMatrix::identity(a.rows()))
            } else {
                bankio::load_matrix(theta)?
            };
            (a, m_dil, m, th)
        }
        _ => bail!("give exactly one of --bank or --mask"),
    };
    let (v, phi) = moment_data(&a, m_dil, m, 2 * m)?;
    let rep = check_theta(&theta_m, &a, m_dil, m, &v, &phi)?;
    let text = vec![
        format!("m = {m}, M = {m_dil}, r = {}", a.rows()),
        format!(
            "item (i): {} (|c(0)|^2 = {}, |d(0)|^2 = {}, target 1/{})",
            verdict(rep.item_i.holds),
            rep.item_i.c0_abs2,
            rep.item_i.d0_abs2,
            a.rows()
        ),
        format!(
            "item (ii): {}{}",
            verdict(rep.item_ii.holds),
            rep.item_ii.failing_entry.as_ref().map(|e| format!(" (fails at {e})")).unwrap_or_default()
        ),
        format!("verdict: {}", verdict(rep.holds())),
    ];
    let mut json = theta_json(&rep);
    json["m"] = json!(m);
    Ok(Outcome { pass: rep.holds(), text, json })
}

fn normal_form(
    mask: &str,
    dilation: Option<usize>,
    order: Option<usize>,
    smooth_order: Option<usize>,
    orthogonal: bool,
    out: Option<PathBuf>,
) -> anyhow::Result<Outcome> {
    let (a, m_dil) = load_mask_arg(mask, dilation)?;
    let m = match order {
        Some(m) => m,
        None => sum_rules(&a, m_dil, ORDER_CAP)?.order,
    };
    let n = smooth_order.unwrap_or(2 * m);
    let (v, phi) = moment_data(&a, m_dil, m, n.max(m))?;
    let nf = normal_form_canonical(&a, m_dil, m, n, &v, &phi)?;
    let mut text = vec![format!("m = {m}, n = {n}, M = {m_dil}"), "structure checks: PASS".to_string()];
    let mut json = json!({ "m": m, "n": n, "structure": true });
    let (u, u_inv, mask_out) = if orthogonal {
        let r = a.rows();
        let nn = m.max(n);
        let on = orthogonal_normal_form(&nf.mask, m_dil, m, n, &JetMatrix::e1(r, m, true), &JetMatrix::e1(r, nn, false))?;
        let diag = is_almost_orthogonal(&on.u_inv, nn);
        text.push(format!("U^-* U^-1 diagonal through order {nn}: {}", verdict(diag)));
        json["orthogonal"] = json!(diag);
        (&on.u * &nf.u, &nf.u_inv * &on.u_inv, on.mask)
    } else {
        (nf.u, nf.u_inv, nf.mask)
    };
    let pass = json.get("orthogonal").and_then(Value::as_bool).unwrap_or(true);
    text.push(format!("U = {u}"));
    text.push(format!("normal-form mask = {mask_out}"));
    if let Some(path) = out {
        write_normal_form(&path, &u, &u_inv, &mask_out, m_dil)?;
        text.push(format!("wrote {}", path.display()));
    }
    json["U"] = serde_json::to_value(bankio::MatrixTable::from_matrix(&u))?;
    json["U_inv"] = serde_json::to_value(bankio::MatrixTable::from_matrix(&u_inv))?;
    json["mask"] = serde_json::to_value(bankio::MatrixTable::from_matrix(&mask_out))?;
    Ok(Outcome { pass, text, json })
}

fn write_normal_form(path: &Path, u: &LaurentMatrix, u_inv: &LaurentMatrix, mask: &LaurentMatrix, m_dil: usize) -> anyhow::Result<()> {
    let stem = path.to_string_lossy().trim_end_matches(".json").trim_end_matches(".mask").to_string();
    bankio::save(path, &MaskFile::new(mask, m_dil, vec!["normal form".into()]))?;
    bankio::save(format!("{stem}.U.json"), &MatrixFile::new(&ScaledMatrix::rational(u.clone()), vec!["U".into()]))?;
    bankio::save(
        format!("{stem}.U_inv.json"),
        &MatrixFile::new(&ScaledMatrix::rational(u_inv.clone()), vec!["U^-1".into()]),
    )?;
    Ok(())
}

fn transform(
    bank_path: &Path,
    signal: Option<PathBuf>,
    random: Option<usize>,
    seed: u64,
    levels: usize,
    roundtrip: bool,
    out: Option<PathBuf>,
) -> anyhow::Result<Outcome> {
    let bank = bankio::load_bank(bank_path)?;
    let v = match (signal, random) {
        (Some(p), None) => bankio::load_signal(&p)?,
        (None, Some(len)) => random_signal(&mut ChaCha8Rng::seed_from_u64(seed), bank.r, len, 0),
        _ => bail!("give exactly one of --signal or --random"),
    };
    if v.r != bank.r {
        bail!("signal has width {}, bank has r = {}", v.r, bank.r);
    }
    let t0 = Instant::now();
    let filters = TransformFilters::from_bank(&bank)?;
    let p = filters.analyze(&v, levels)?;
    let mut text = vec![format!("levels: {levels}, input support: {}", show_support(v.support()))];
    for (j, d) in p.details.iter().enumerate() {
        text.push(format!("level {}: detail support {}", j + 1, show_support(d.support())));
    }
    let mut json = json!({ "levels": levels, "seed": seed });
    let mut pass = true;
    if roundtrip {
        let back = filters.synthesize(&p)?;
        let exact = back == v;
        pass = exact;
        text.push(format!("exact: {exact}"));
        json["exact"] = json!(exact);
    }
    if let Some(path) = out {
        bankio::save(&path, &PyramidFile::new(&p, bank.m_dil))?;
        text.push(format!("wrote {}", path.display()));
    }
    json["elapsed_s"] = json!(t0.elapsed().as_secs_f64());
    Ok(Outcome { pass, text, json })
}

fn classify(
    theta: Option<PathBuf>,
    bank: Option<PathBuf>,
    oep: Option<String>,
    psd: bool,
    mask: Option<String>,
    dilation: Option<usize>,
    samples: usize,
) -> anyhow::Result<Outcome> {
    let mut text = Vec::new();
    let mut json = json!({});
    let mut pass = true;
    let mut psd_mask = None;
    let th: LaurentMatrix = match (theta, bank, oep) {
        (Some(p), None, None) => bankio::load_matrix(&p)?.to_rational()?,
        (None, Some(p), None) => {
            let b = bankio::load_bank(&p)?;
            psd_mask = Some((b.a.clone(), b.m_dil));
            b.theta_cap()?.to_rational()?
        }
        (None, None, Some(name)) => {
            let b = fixtures::oep_fixture(&name)?;
            let rep = verify_oep(&b)?;
            text.push(format!("OEP identities ({name}): {}", verdict(rep.holds())));
            json["oep"] = json!({ "identity": rep.identity, "witness": rep.witness, "holds": rep.holds() });
            pass = rep.holds();
            psd_mask = Some((b.a.clone(), b.m_dil));
            b.theta.to_rational()?
        }
        _ => bail!("give exactly one of --theta, --bank or --oep"),
    };
    let rep = classify_theta_conv(&th)?;
    let class = match rep.class {
        ThetaClass::StronglyInvertible => "strongly-invertible",
        ThetaClass::NonvanishingDet => "nonvanishing-det",
        ThetaClass::Singular => "singular",
    };
    text.push(format!("det = {}", rep.det));
    text.push(format!("class: {class} ({} unit-circle zeros, {})", rep.unit_circle_zeros, rep.method));
    json["class"] = json!(class);
    json["det"] = json!(rep.det.to_string());
    json["unit_circle_zeros"] = json!(rep.unit_circle_zeros);
    if rep.class == ThetaClass::Singular {
        let found = (0..4).find_map(|q| annihilator_witness(&th, q, 8).ok().filter(|w| w.verified).map(|w| (q, w)));
        if let Some((q, w)) = found {
            text.push(format!("annihilated: v(k) = w e^(i k {q} pi/2) on interior [{}, {}]", w.interior.0, w.interior.1));
            json["annihilator"] = json!({ "quarter_turns": q, "interior": [w.interior.0, w.interior.1] });
        }
    }
    if psd {
        let (a, m_dil) = match mask {
            Some(mask_arg) => load_mask_arg(&mask_arg, dilation)?,
            None => psd_mask.ok_or_else(|| anyhow!("--psd needs --mask"))?,
        };
        let p = psd_probe(&a, &th, m_dil, samples)?;
        text.push(format!(
            "least eigenvalue of M_(a,Theta): {:.3e} at xi = {:.6} (enclosure [{}, {}])",
            p.min_value, p.min_xi, p.min_lower, p.min_upper
        ));
        text.push(format!("positive semidefinite on samples: {}", p.is_psd()));
        json["psd"] = json!({
            "is_psd": p.is_psd(),
            "min_value": p.min_value,
            "min_xi": p.min_xi,
            "min_lower": p.min_lower,
            "min_upper": p.min_upper,
            "samples": samples,
        });
    }
    Ok(Outcome { pass, text, json })
}

fn cascade(
    bank: Option<PathBuf>,
    mask: Option<String>,
    dilation: Option<usize>,
    component: Comp,
    levels: usize,
    out: Option<PathBuf>,
) -> anyhow::Result<Outcome> {
    let comp = match component {
        Comp::Phi => Component::Phi,
        Comp::Psi => Component::Psi,
    };
    let curve = match (bank, mask) {
        (Some(p), None) => cascade_render(&bankio::load_bank(&p)?, comp, levels)?,
        (None, Some(mask_arg)) => {
            let (a, m_dil) = load_mask_arg(&mask_arg, dilation)?;
            refinable_jets(&a, m_dil, 1)?;
            cascade_mask(&a, None, m_dil, comp, levels)?
        }
        _ => bail!("give exactly one of --bank or --mask"),
    };
    let csv = curve.to_csv();
    let mut text = Vec::new();
    match &out {
        Some(p) => {
            std::fs::write(p, &csv)?;
            text.push(format!("wrote {} samples to {}", curve.xs.len(), p.display()));
        }
        None => text.push(csv.trim_end().to_string()),
    }
    let json = json!({ "samples": curve.xs.len(), "integral": curve.integral() });
    Ok(Outcome { pass: true, text, json })
}

fn cmd_fixtures(write: Option<PathBuf>) -> anyhow::Result<Outcome> {
    let mut text: Vec<String> = fixtures::NAMES.iter().map(|n| format!("mask: {n}")).collect();
    text.extend(fixtures::OEP_NAMES.iter().map(|n| format!("oep: {n}")));
    let mut written = Vec::new();
    if let Some(dir) = write {
        std::fs::create_dir_all(&dir)?;
        for name in ["hermite", "vec-bspline2", "example61", "bspline(2,2)", "vec-bspline(3,2)"] {
            let (a, m_dil) = fixtures::fixture(name)?;
            let file = dir.join(format!("{}.mask.json", name.replace(['(', ')'], "").replace(',', "-")));
            bankio::save(&file, &MaskFile::new(&a, m_dil, vec![format!("fixture {name}")]))?;
            written.push(file);
        }
        let haar = dir.join("haar.bank.json");
        bankio::save(&haar, &BankFile::from_bank(&fixtures::haar_bank(), vec!["Haar".into()]))?;
        written.push(haar);
        let sig = dir.join("rand.sig.json");
        let v = random_signal(&mut ChaCha8Rng::seed_from_u64(0), 2, 32, 0);
        bankio::save(&sig, &SignalFile::from_signal(&v))?;
        written.push(sig);
        text.extend(written.iter().map(|p| format!("wrote {}", p.display())));
    }
    let json = json!({
        "masks": fixtures::NAMES,
        "oep": fixtures::OEP_NAMES,
        "written": written.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
    });
    Ok(Outcome { pass: true, text, json })
}

fn show_support(s: Option<(i64, i64)>) -> String {
    match s {
        Some((lo, hi)) => format!("[{lo}, {hi}]"),
        None => "empty".into(),
    }
}
