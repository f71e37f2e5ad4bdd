//! JSON files for masks, filter banks and signals. Exact scalars are stored as strings.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{BigRational, GaussRational, QuadScalar};
use crate::laurent::{LaurentMatrix, LaurentPoly, ScaledMatrix};
use crate::qtconstruct::QtFilterBank;
use crate::transform::{CoefficientPyramid, Signal};

pub const FORMAT_VERSION: u32 = 1;

/// Coefficient table `scale * sum_k taps[k - kmin] z^k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixTable {
    pub rows: usize,
    pub cols: usize,
    pub scale: String,
    /// `[kmin, kmax]`, absent for the zero matrix.
    pub support: Option<[i64; 2]>,
    pub taps: Vec<Vec<Vec<String>>>,
}

impl MatrixTable {
    pub fn from_scaled(m: &ScaledMatrix) -> Self {
        let support = m.mat.support();
        let taps = match support {
            Some((lo, hi)) => (lo..=hi)
                .map(|k| m.mat.coeff_matrix(k).iter().map(|row| row.iter().map(|c| c.to_string()).collect()).collect())
                .collect(),
            None => Vec::new(),
        };
        MatrixTable {
            rows: m.mat.rows(),
            cols: m.mat.cols(),
            scale: m.scale.to_string(),
            support: support.map(|(a, b)| [a, b]),
            taps,
        }
    }

    pub fn from_matrix(m: &LaurentMatrix) -> Self {
        Self::from_scaled(&ScaledMatrix::rational(m.clone()))
    }

    pub fn to_scaled(&self, field: &str) -> Result<ScaledMatrix> {
        let scale: QuadScalar = self.scale.parse().map_err(|e| parse_err(field, "scale", e))?;
        let mut mat = LaurentMatrix::zeros(self.rows, self.cols);
        let expected = match self.support {
            Some([lo, hi]) if hi >= lo => (hi - lo + 1) as usize,
            Some(_) => return Err(Error::Parse(format!("{field}.support: kmax < kmin"))),
            None => 0,
        };
        if self.taps.len() != expected {
            return Err(Error::Parse(format!("{field}.taps: {} taps for a support of {expected}", self.taps.len())));
        }
        let kmin = self.support.map_or(0, |s| s[0]);
        for (t, tap) in self.taps.iter().enumerate() {
            let k = kmin + t as i64;
            if tap.len() != self.rows || tap.iter().any(|row| row.len() != self.cols) {
                return Err(Error::Parse(format!("{field}.taps[{t}]: expected {}x{}", self.rows, self.cols)));
            }
            for (i, row) in tap.iter().enumerate() {
                for (j, txt) in row.iter().enumerate() {
                    let c: GaussRational =
                        txt.parse().map_err(|e| parse_err(field, &format!("taps[{t}][{i}][{j}]"), e))?;
                    if !c.is_zero() {
                        let p = mat.get(i, j) + &LaurentPoly::monomial(c, k);
                        mat.set(i, j, p);
                    }
                }
            }
        }
        Ok(ScaledMatrix::new(scale, mat))
    }

    pub fn to_matrix(&self, field: &str) -> Result<LaurentMatrix> {
        let s = self.to_scaled(field)?;
        s.to_rational().map_err(|_| Error::Parse(format!("{field}.scale: expected a rational scale")))
    }
}

fn parse_err(field: &str, what: &str, e: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{field}.{what}: {e}"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaskFile {
    pub format_version: u32,
    pub kind: String,
    #[serde(rename = "M")]
    pub m_dil: usize,
    pub r: usize,
    pub mask: MatrixTable,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl MaskFile {
    pub fn new(mask: &LaurentMatrix, m_dil: usize, notes: Vec<String>) -> Self {
        MaskFile {
            format_version: FORMAT_VERSION,
            kind: "mask".into(),
            m_dil,
            r: mask.rows(),
            mask: MatrixTable::from_matrix(mask),
            notes,
        }
    }

    pub fn to_mask(&self) -> Result<(LaurentMatrix, usize)> {
        check_header(self.format_version, &self.kind, "mask")?;
        let m = self.mask.to_matrix("mask")?;
        if m.rows() != self.r || m.cols() != self.r {
            return Err(Error::Parse(format!("mask: expected {0}x{0}", self.r)));
        }
        Ok((m, self.m_dil))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BankFile {
    pub format_version: u32,
    pub kind: String,
    #[serde(rename = "M")]
    pub m_dil: usize,
    pub r: usize,
    pub s: usize,
    pub m: usize,
    pub n: usize,
    /// `|scale of theta|^2`.
    pub scale2: String,
    pub eps: Vec<i8>,
    pub a: MatrixTable,
    pub theta: MatrixTable,
    pub b: MatrixTable,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl BankFile {
    pub fn from_bank(bank: &QtFilterBank, notes: Vec<String>) -> Self {
        BankFile {
            format_version: FORMAT_VERSION,
            kind: "quasi-tight-bank".into(),
            m_dil: bank.m_dil,
            r: bank.r,
            s: bank.s,
            m: bank.m,
            n: bank.n,
            scale2: bank.theta.scale2().to_string(),
            eps: bank.eps.clone(),
            a: MatrixTable::from_matrix(&bank.a),
            theta: MatrixTable::from_scaled(&bank.theta),
            b: MatrixTable::from_scaled(&bank.b),
            notes,
        }
    }

    pub fn to_bank(&self) -> Result<QtFilterBank> {
        check_header(self.format_version, &self.kind, "quasi-tight-bank")?;
        let a = self.a.to_matrix("a")?;
        let theta = self.theta.to_scaled("theta")?;
        let b = self.b.to_scaled("b")?;
        let scale2: BigRational = crate::exactnum::parse_rational(&self.scale2).map_err(|e| parse_err("bank", "scale2", e))?;
        if scale2 != theta.scale2() {
            return Err(Error::Parse(format!("scale2 = {scale2} disagrees with theta.scale = {}", theta.scale)));
        }
        let (r, s) = (self.r, self.s);
        if a.rows() != r || a.cols() != r || theta.mat.rows() != r || theta.mat.cols() != r {
            return Err(Error::Parse(format!("a and theta must be {r}x{r}")));
        }
        if b.mat.rows() != s || b.mat.cols() != r || self.eps.len() != s {
            return Err(Error::Parse(format!("b must be {s}x{r} with {s} signs")));
        }
        if self.eps.iter().any(|&e| e != 1 && e != -1) {
            return Err(Error::Parse("eps entries must be +1 or -1".into()));
        }
        Ok(QtFilterBank { m_dil: self.m_dil, r, s, a, theta, b, eps: self.eps.clone(), m: self.m, n: self.n })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignalFile {
    pub format_version: u32,
    pub kind: String,
    pub r: usize,
    pub scale: String,
    pub support: Option<[i64; 2]>,
    /// Dense rows from `kmin` to `kmax`.
    pub values: Vec<Vec<String>>,
}

impl SignalFile {
    pub fn from_signal(v: &Signal) -> Self {
        let support = v.support();
        let values = match support {
            Some((lo, hi)) => (lo..=hi).map(|k| v.get(k).iter().map(|c| c.to_string()).collect()).collect(),
            None => Vec::new(),
        };
        SignalFile {
            format_version: FORMAT_VERSION,
            kind: "signal".into(),
            r: v.r,
            scale: v.scale.to_string(),
            support: support.map(|(a, b)| [a, b]),
            values,
        }
    }

    pub fn to_signal(&self) -> Result<Signal> {
        check_header(self.format_version, &self.kind, "signal")?;
        let scale: QuadScalar = self.scale.parse().map_err(|e| parse_err("signal", "scale", e))?;
        let kmin = self.support.map_or(0, |s| s[0]);
        let expected = self.support.map_or(0, |[lo, hi]| (hi - lo + 1).max(0) as usize);
        if self.values.len() != expected {
            return Err(Error::Parse(format!("signal.values: {} rows for a support of {expected}", self.values.len())));
        }
        let mut map = BTreeMap::new();
        for (t, row) in self.values.iter().enumerate() {
            let parsed: Result<Vec<GaussRational>> = row
                .iter()
                .enumerate()
                .map(|(j, txt)| txt.parse().map_err(|e| parse_err("signal", &format!("values[{t}][{j}]"), e)))
                .collect();
            map.insert(kmin + t as i64, parsed?);
        }
        Ok(Signal::from_map(self.r, map)?.with_scale(scale))
    }
}

/// A single filter, e.g. a `theta` supplied on its own.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub format_version: u32,
    pub kind: String,
    pub matrix: MatrixTable,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl MatrixFile {
    pub fn new(m: &ScaledMatrix, notes: Vec<String>) -> Self {
        MatrixFile { format_version: FORMAT_VERSION, kind: "matrix".into(), matrix: MatrixTable::from_scaled(m), notes }
    }

    pub fn to_scaled(&self) -> Result<ScaledMatrix> {
        check_header(self.format_version, &self.kind, "matrix")?;
        self.matrix.to_scaled("matrix")
    }
}

/// Output of a multi-level analysis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PyramidFile {
    pub format_version: u32,
    pub kind: String,
    #[serde(rename = "M")]
    pub m_dil: usize,
    pub levels: usize,
    pub approx: SignalFile,
    /// Finest level first.
    pub details: Vec<SignalFile>,
}

impl PyramidFile {
    pub fn new(p: &CoefficientPyramid, m_dil: usize) -> Self {
        PyramidFile {
            format_version: FORMAT_VERSION,
            kind: "pyramid".into(),
            m_dil,
            levels: p.levels,
            approx: SignalFile::from_signal(&p.approx),
            details: p.details.iter().map(SignalFile::from_signal).collect(),
        }
    }

    pub fn to_pyramid(&self) -> Result<CoefficientPyramid> {
        check_header(self.format_version, &self.kind, "pyramid")?;
        if self.details.len() != self.levels {
            return Err(Error::Parse(format!("pyramid: {} detail levels, expected {}", self.details.len(), self.levels)));
        }
        Ok(CoefficientPyramid {
            levels: self.levels,
            approx: self.approx.to_signal()?,
            details: self.details.iter().map(SignalFile::to_signal).collect::<Result<_>>()?,
        })
    }
}

fn check_header(version: u32, kind: &str, expected: &str) -> Result<()> {
    if version != FORMAT_VERSION {
        return Err(Error::Parse(format!("format_version {version} is not supported")));
    }
    if kind != expected {
        return Err(Error::Parse(format!("kind is \"{kind}\", expected \"{expected}\"")));
    }
    Ok(())
}

/// Canonical text: pretty JSON with a trailing newline.
pub fn to_canonical<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

pub fn from_text<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))
}

pub fn save<T: Serialize>(path: impl AsRef<Path>, v: &T) -> Result<()> {
    std::fs::write(path, to_canonical(v)?)?;
    Ok(())
}

pub fn load<T: for<'de> Deserialize<'de>>(path: impl AsRef<Path>) -> Result<T> {
    from_text(&std::fs::read_to_string(path)?)
}

pub fn load_bank(path: impl AsRef<Path>) -> Result<QtFilterBank> {
    load::<BankFile>(path)?.to_bank()
}

pub fn load_mask(path: impl AsRef<Path>) -> Result<(LaurentMatrix, usize)> {
    load::<MaskFile>(path)?.to_mask()
}

pub fn load_signal(path: impl AsRef<Path>) -> Result<Signal> {
    load::<SignalFile>(path)?.to_signal()
}

pub fn load_matrix(path: impl AsRef<Path>) -> Result<ScaledMatrix> {
    load::<MatrixFile>(path)?.to_scaled()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::fixtures;
    use crate::moments::sum_rules;

    #[test]
    fn mask_round_trip() {
        let f = MaskFile::new(&fixtures::hermite(), 2, vec![]);
        let text = to_canonical(&f).unwrap();
        let back: MaskFile = from_text(&text).unwrap();
        assert_eq!(to_canonical(&back).unwrap(), text);
        let (m, md) = back.to_mask().unwrap();
        assert_eq!(m, fixtures::hermite());
        assert_eq!(sum_rules(&m, md, 6).unwrap().order, 4);
    }

    #[test]
    fn scalar_text() {
        let c: GaussRational = "3/4-1/2*i".parse().unwrap();
        assert_eq!(c.to_string(), "3/4-1/2*i");
        let mut s = Signal::zero(1).with_scale(QuadScalar::sqrt(&rat(2, 1)).unwrap());
        s.set(-1, vec![c]).unwrap();
        let f = SignalFile::from_signal(&s);
        let text = to_canonical(&f).unwrap();
        let back: SignalFile = from_text(&text).unwrap();
        assert_eq!(back.to_signal().unwrap(), s);
        assert_eq!(to_canonical(&back).unwrap(), text);
    }

    #[test]
    fn parse_errors_name_fields() {
        let mut f = MaskFile::new(&fixtures::vec_bspline2(), 2, vec![]);
        f.mask.taps[0][0][0] = "1/x".into();
        let err = f.to_mask().unwrap_err().to_string();
        assert!(err.contains("mask.taps[0][0][0]"), "{err}");
        assert!(matches!(from_text::<MaskFile>("{\n  \"kind\": 3\n}"), Err(Error::Parse(e)) if e.contains("line 2")));
    }
}
