//! Anti-Wick (coherent-state) quantization of symbols into banded matrices.
//!
//! For `f = r^k e^{i p theta}` the only nonzero entries are
//! `(n, n+p) = s_n s_{n+p} M((2n+p+k)/2) / (h_n h_{n+p})`, with `M(s)` the
//! radial moment of `omega`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::measure::RadialMeasure;
use crate::states::{coeff_h, Family, FamilyParams};
use crate::{Error, Result};

/// Entries below this fraction of the matrix norm at the truncation edge
/// are not worth a warning.
const EDGE_WARN: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Symbol {
    Constant,
    Z,
    ZBar,
    AbsZ2,
    /// `r^k`
    RadialPower(f64),
    /// `r^k e^{i p theta}`
    AngularHarmonic { p: i64, k: f64 },
}

impl Symbol {
    /// `(p, k)` of `r^k e^{i p theta}`.
    pub fn harmonic(&self) -> (i64, f64) {
        match *self {
            Symbol::Constant => (0, 0.0),
            Symbol::Z => (1, 1.0),
            Symbol::ZBar => (-1, 1.0),
            Symbol::AbsZ2 => (0, 2.0),
            Symbol::RadialPower(k) => (0, k),
            Symbol::AngularHarmonic { p, k } => (p, k),
        }
    }

    pub fn tag(&self) -> String {
        match *self {
            Symbol::Constant => "1".into(),
            Symbol::Z => "z".into(),
            Symbol::ZBar => "zbar".into(),
            Symbol::AbsZ2 => "|z|^2".into(),
            Symbol::RadialPower(k) => format!("r^{k}"),
            Symbol::AngularHarmonic { p, k } => format!("r^{k} e^({p} i theta)"),
        }
    }

    pub fn is_real(&self) -> bool {
        self.harmonic().0 == 0
    }
}

impl std::str::FromStr for Symbol {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "1" | "one" | "constant" => Ok(Symbol::Constant),
            "z" => Ok(Symbol::Z),
            "zbar" => Ok(Symbol::ZBar),
            "absz2" | "|z|^2" => Ok(Symbol::AbsZ2),
            other => {
                if let Some(k) = other.strip_prefix("r^") {
                    let k = k.parse().map_err(|_| Error::InvalidParameter(format!("bad power in '{s}'")))?;
                    return Ok(Symbol::RadialPower(k));
                }
                if let Some(rest) = other.strip_prefix("harmonic:") {
                    let mut it = rest.split(',');
                    let p = it.next().and_then(|v| v.trim().parse().ok());
                    let k = it.next().and_then(|v| v.trim().parse().ok());
                    if let (Some(p), Some(k), None) = (p, k, it.next()) {
                        return Ok(Symbol::AngularHarmonic { p, k });
                    }
                }
                Err(Error::InvalidParameter(format!("unknown symbol '{s}'")))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Provenance {
    Quadrature,
    HRatioClosedForm,
    PaperClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Az,
    AzBar,
    AbsZ2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedSource {
    HRatio,
    Paper,
}

/// Square matrix of size `n_max + 1` stored by diagonals. `bands[d][j]` is
/// the entry at `(j, j + d)` for `d >= 0` and at `(j - d, j)` for `d < 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub dim: usize,
    pub bands: BTreeMap<i64, Vec<Complex64>>,
    pub provenance: Provenance,
    pub symbol: String,
    /// Trailing indices whose rows/columns are affected by truncation.
    pub boundary: usize,
    pub warnings: Vec<String>,
}

impl OperatorMatrix {
    pub fn zeros(dim: usize, provenance: Provenance, symbol: impl Into<String>) -> Self {
        Self { dim, bands: BTreeMap::new(), provenance, symbol: symbol.into(), boundary: 0, warnings: vec![] }
    }

    pub fn n_max(&self) -> usize {
        self.dim - 1
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        let d = col as i64 - row as i64;
        self.bands.get(&d).map_or(Complex64::new(0.0, 0.0), |b| b[row.min(col)])
    }

    fn set_band(&mut self, offset: i64, values: Vec<Complex64>) {
        debug_assert_eq!(values.len(), self.dim - offset.unsigned_abs() as usize);
        self.bands.insert(offset, values);
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (&d, vals) in &self.bands {
            for (j, v) in vals.iter().enumerate() {
                let (r, c) = if d >= 0 { (j, j + d as usize) } else { (j + (-d) as usize, j) };
                m[(r, c)] = *v;
            }
        }
        m
    }

    /// Keeps every diagonal with a nonzero entry.
    pub fn from_dense(m: &DMatrix<Complex64>, provenance: Provenance, symbol: impl Into<String>) -> Self {
        let dim = m.nrows();
        let mut out = Self::zeros(dim, provenance, symbol);
        for d in -(dim as i64 - 1)..(dim as i64) {
            let len = dim - d.unsigned_abs() as usize;
            let vals: Vec<Complex64> = (0..len)
                .map(|j| if d >= 0 { m[(j, j + d as usize)] } else { m[(j + (-d) as usize, j)] })
                .collect();
            if vals.iter().any(|v| v.norm() != 0.0) {
                out.set_band(d, vals);
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let mut out = self.clone();
        out.bands = self.bands.iter().map(|(&d, v)| (-d, v.iter().map(|c| c.conj()).collect())).collect();
        out.symbol = format!("({})^+", self.symbol);
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.bands.values().flatten().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `max |a - b|` over all entries.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::Dimension(self.dim, other.dim));
        }
        let offsets: std::collections::BTreeSet<i64> = self.bands.keys().chain(other.bands.keys()).copied().collect();
        let mut worst: f64 = 0.0;
        for d in offsets {
            let len = self.dim - d.unsigned_abs() as usize;
            for j in 0..len {
                let (r, c) = if d >= 0 { (j, j + d as usize) } else { (j + (-d) as usize, j) };
                worst = worst.max((self.get(r, c) - other.get(r, c)).norm());
            }
        }
        Ok(worst)
    }

    /// `max |a - b| / max(|b|, floor)` entrywise, `b = other`.
    pub fn max_rel_diff(&self, other: &Self) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::Dimension(self.dim, other.dim));
        }
        let floor = 1e-300;
        let mut worst: f64 = 0.0;
        for r in 0..self.dim {
            for c in 0..self.dim {
                let (a, b) = (self.get(r, c), other.get(r, c));
                if a.norm() == 0.0 && b.norm() == 0.0 {
                    continue;
                }
                worst = worst.max((a - b).norm() / b.norm().max(floor));
            }
        }
        Ok(worst)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()).is_ok_and(|d| d <= tol * self.max_abs().max(1.0))
    }

    pub fn to_json(&self, p: &FamilyParams) -> Value {
        let bands: Vec<Value> = self
            .bands
            .iter()
            .map(|(d, v)| json!({"offset": d, "values": v.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>()}))
            .collect();
        json!({
            "symbol": self.symbol,
            "family": p.family.to_string(),
            "m": p.m,
            "nu": p.nu,
            "n_max": self.n_max(),
            "provenance": self.provenance,
            "bands": bands,
        })
    }
}

/// `omega` behaves like `x^{min(0, b-1)}` at the origin.
fn check_integrable(p: &FamilyParams, s_min: f64) -> Result<()> {
    let lead = (p.b() - 1.0).min(0.0);
    if s_min + lead <= -1.0 {
        return Err(Error::InvalidParameter(format!(
            "symbol not integrable: moment order {s_min} against x^{lead} at the origin"
        )));
    }
    Ok(())
}

/// Quantizes `symbol` by mode matching against the measure's radial moments.
pub fn quantize_symbol(p: &FamilyParams, symbol: Symbol, n_max: usize, m: &RadialMeasure) -> Result<OperatorMatrix> {
    if m.params != *p {
        return Err(Error::InvalidParameter("measure built for different parameters".into()));
    }
    let (harm, k) = symbol.harmonic();
    let dim = n_max + 1;
    let mut out = OperatorMatrix::zeros(dim, Provenance::Quadrature, symbol.tag());
    let shift = harm.unsigned_abs() as usize;
    if shift >= dim {
        return Ok(out);
    }
    // smallest moment order among stored entries
    check_integrable(p, (shift as f64 + k) / 2.0)?;
    let h: Vec<f64> = (0..dim).map(|n| coeff_h(p, n)).collect::<Result<_>>()?;
    let vals: Vec<Complex64> = (0..dim - shift)
        .into_par_iter()
        .map(|j| {
            // (row, col) = (n, n + harm)
            let (r, c) = if harm >= 0 { (j, j + shift) } else { (j + shift, j) };
            let s = (r + c) as f64 / 2.0 + k / 2.0;
            let v = p.sign(r) * p.sign(c) * m.moment(s) / (h[r] * h[c]);
            Complex64::new(v, 0.0)
        })
        .collect();
    if vals.iter().any(|v| !v.re.is_finite()) {
        return Err(Error::Quadrature(format!("non-finite entry quantizing {}", symbol.tag())));
    }
    out.set_band(harm, vals);
    out.boundary = shift;
    if shift > 0 {
        // the entry that would couple n_max to n_max + shift is dropped
        let edge = if harm > 0 { (n_max, n_max + shift) } else { (n_max + shift, n_max) };
        let s = (edge.0 + edge.1) as f64 / 2.0 + k / 2.0;
        let hh = coeff_h(p, n_max + shift)? * h[n_max];
        let dropped = m.moment(s) / hh;
        let norm = out.max_abs();
        if dropped.abs() > EDGE_WARN * norm {
            out.warnings.push(format!(
                "truncation: dropped coupling to index {} has size {:.3e} against matrix max {:.3e}",
                n_max + shift,
                dropped.abs(),
                norm
            ));
        }
    }
    Ok(out)
}

/// Closed-form ladder matrices. `HRatio` uses `s_n s_{n+1} h_{n+1}/h_n`
/// (signed for the Jacobi family); `Paper` uses the factors
/// `(-m-nu-n-1) sqrt((n+1)(b+n))` for Jacobi and `sqrt((n+1)(b+n))` for Bessel,
/// and `(n+1)(b+n)` on the diagonal.
pub fn ladder_closed_form(p: &FamilyParams, which: Ladder, n_max: usize, source: ClosedSource) -> Result<OperatorMatrix> {
    let dim = n_max + 1;
    let b = p.b();
    let c = p.m as f64 + p.nu;
    let (prov, tag) = match source {
        ClosedSource::HRatio => (Provenance::HRatioClosedForm, "hratio"),
        ClosedSource::Paper => (Provenance::PaperClosedForm, "paper"),
    };
    let name = match which {
        Ladder::Az => "A_z",
        Ladder::AzBar => "A_zbar",
        Ladder::AbsZ2 => "A_|z|^2",
    };
    let mut out = OperatorMatrix::zeros(dim, prov, format!("{name} ({tag})"));
    let up = |n: usize| -> Result<f64> {
        let nf = n as f64;
        Ok(match source {
            ClosedSource::HRatio => p.sign(n) * p.sign(n + 1) * coeff_h(p, n + 1)? / coeff_h(p, n)?,
            ClosedSource::Paper => {
                let root = ((nf + 1.0) * (b + nf)).sqrt();
                match p.family {
                    Family::Jacobi => (-c - nf - 1.0) * root,
                    Family::Bessel => root,
                }
            }
        })
    };
    match which {
        Ladder::Az | Ladder::AzBar => {
            let vals = (0..n_max).map(|n| up(n).map(|v| Complex64::new(v, 0.0))).collect::<Result<Vec<_>>>()?;
            if n_max > 0 {
                out.set_band(if which == Ladder::Az { 1 } else { -1 }, vals);
            }
            out.boundary = 1;
        }
        Ladder::AbsZ2 => {
            let vals = (0..dim)
                .map(|n| {
                    let nf = n as f64;
                    let v = match source {
                        ClosedSource::HRatio => (coeff_h(p, n + 1)? / coeff_h(p, n)?).powi(2),
                        ClosedSource::Paper => (nf + 1.0) * (b + nf),
                    };
                    Ok(Complex64::new(v, 0.0))
                })
                .collect::<Result<Vec<_>>>()?;
            out.set_band(0, vals);
        }
    }
    Ok(out)
}

/// `AB - BA`; the trailing rows/columns reached by either band width are
/// flagged in `boundary`.
pub fn commutator(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix> {
    if a.dim != b.dim {
        return Err(Error::Dimension(a.dim, b.dim));
    }
    let (da, db) = (a.to_dense(), b.to_dense());
    let c = &da * &db - &db * &da;
    let mut out = OperatorMatrix::from_dense(&c, a.provenance, format!("[{}, {}]", a.symbol, b.symbol));
    let width = |m: &OperatorMatrix| m.bands.keys().map(|d| d.unsigned_abs() as usize).max().unwrap_or(0);
    out.boundary = (width(a) + width(b)).max(a.boundary).max(b.boundary).min(a.dim);
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct DiscrepancyRow {
    pub symbol: String,
    pub quadrature_vs_hratio: f64,
    pub quadrature_vs_paper: f64,
    pub hratio_vs_paper: f64,
    /// Paper entry divided by HRatio entry along the band.
    pub paper_over_hratio: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiscrepancyReport {
    pub family: Family,
    pub m: u32,
    pub nu: f64,
    pub n_max: usize,
    pub rows: Vec<DiscrepancyRow>,
}

/// Relative max-norm differences between the three constructions.
pub fn discrepancy_report(p: &FamilyParams, n_max: usize, m: &RadialMeasure) -> Result<DiscrepancyReport> {
    let mut rows = Vec::new();
    let identity = |prov| {
        let mut o = OperatorMatrix::zeros(n_max + 1, prov, "1");
        o.set_band(0, vec![Complex64::new(1.0, 0.0); n_max + 1]);
        o
    };
    let cases: [(Symbol, Option<Ladder>); 4] = [
        (Symbol::Constant, None),
        (Symbol::Z, Some(Ladder::Az)),
        (Symbol::ZBar, Some(Ladder::AzBar)),
        (Symbol::AbsZ2, Some(Ladder::AbsZ2)),
    ];
    for (sym, ladder) in cases {
        let q = quantize_symbol(p, sym, n_max, m)?;
        let (hr, pa) = match ladder {
            None => (identity(Provenance::HRatioClosedForm), identity(Provenance::PaperClosedForm)),
            Some(l) => (
                ladder_closed_form(p, l, n_max, ClosedSource::HRatio)?,
                ladder_closed_form(p, l, n_max, ClosedSource::Paper)?,
            ),
        };
        let band = sym.harmonic().0;
        let ratio = match (hr.bands.get(&band), pa.bands.get(&band)) {
            (Some(h), Some(pp)) => h.iter().zip(pp).map(|(h, pp)| pp.re / h.re).collect(),
            _ => vec![],
        };
        rows.push(DiscrepancyRow {
            symbol: sym.tag(),
            quadrature_vs_hratio: q.max_rel_diff(&hr)?,
            quadrature_vs_paper: q.max_rel_diff(&pa)?,
            hratio_vs_paper: hr.max_rel_diff(&pa)?,
            paper_over_hratio: ratio,
        });
    }
    Ok(DiscrepancyReport { family: p.family, m: p.m, nu: p.nu, n_max, rows })
}
