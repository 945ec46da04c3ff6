//! JSON file formats for series, measures, Galois measures, presentation
//! matrices and Euler system scenarios.
//!
//! Coefficients are written in the textual form `p^v * m mod p^k` and read
//! back in that form or as plain integers (taken at full precision).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::euler::EulerScenario;
use crate::galois::{DenominatorTerm, FiniteAbelianGroup, GaloisMeasure, PseudoMeasure};
use crate::lambda_modules::PresentedModule;
use crate::mahler::{Support, UnitMeasure};
use crate::padic::{PadicContext, PadicInt};
use crate::series::{Coeff, IwasawaSeries, Series};

/// Values given on the command line that replace those in a file.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Overrides {
    pub p: Option<u64>,
    pub digits: Option<u32>,
    pub tdeg: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffText {
    Int(i64),
    Text(String),
}

/// `{"p": 2, "N": 64, "M": 16, "coeffs": [...]}` with the optional keys
/// `polynomial`, `support` and `finite`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesFile {
    pub p: u64,
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "M")]
    pub m: usize,
    pub coeffs: Vec<CoeffText>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polynomial: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<Support>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finite: Option<bool>,
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn context(p: u64, n: u32, ov: &Overrides) -> Result<PadicContext> {
    PadicContext::new(ov.p.unwrap_or(p), ov.digits.unwrap_or(n))
}

fn read_coeff(ctx: &PadicContext, c: &CoeffText) -> Result<PadicInt> {
    match c {
        CoeffText::Int(v) => Ok(ctx.from_i64(*v)),
        CoeffText::Text(s) => PadicInt::parse_in(ctx, s),
    }
}

/// Coefficients padded with exact zeros or cut to the window `m`.
fn read_coeffs(ctx: &PadicContext, coeffs: &[CoeffText], m: usize) -> Result<IwasawaSeries> {
    if m == 0 {
        return Err(Error::Parse("window M must be at least 1".into()));
    }
    let mut out: Vec<PadicInt> = coeffs.iter().take(m).map(|c| read_coeff(ctx, c)).collect::<Result<_>>()?;
    out.resize(m, ctx.zero());
    Ok(IwasawaSeries::new(ctx.clone(), out))
}

pub fn coeff_strings<R: Coeff + std::fmt::Display>(s: &Series<R>) -> Vec<String> {
    s.coeffs().iter().map(|c| c.to_string()).collect()
}

impl SeriesFile {
    pub fn parse(text: &str) -> Result<Self> {
        parse_json(text)
    }

    pub fn series(&self, ov: &Overrides) -> Result<IwasawaSeries> {
        let ctx = context(self.p, self.n, ov)?;
        read_coeffs(&ctx, &self.coeffs, ov.tdeg.unwrap_or(self.m))
    }

    pub fn polynomial(&self) -> bool {
        self.polynomial.unwrap_or(false)
    }

    pub fn measure(&self, ov: &Overrides) -> Result<UnitMeasure> {
        let series = self.series(ov)?;
        Ok(UnitMeasure {
            series,
            support: self.support.unwrap_or(Support::All),
            finite: self.finite.unwrap_or(false),
        })
    }

    pub fn from_series(s: &IwasawaSeries) -> Self {
        let ctx = s.context();
        SeriesFile {
            p: ctx.p(),
            n: ctx.digits(),
            m: s.len(),
            coeffs: coeff_strings(s).into_iter().map(CoeffText::Text).collect(),
            polynomial: None,
            support: None,
            finite: None,
        }
    }

    pub fn from_measure(nu: &UnitMeasure) -> Self {
        SeriesFile { support: Some(nu.support), finite: Some(nu.finite), ..Self::from_series(&nu.series) }
    }
}

pub fn series_json(s: &IwasawaSeries) -> Value {
    serde_json::to_value(SeriesFile::from_series(s)).expect("serializable")
}

pub fn measure_json(nu: &UnitMeasure) -> Value {
    serde_json::to_value(SeriesFile::from_measure(nu)).expect("serializable")
}

/// A component given either as a bare coefficient list or as a full
/// series object.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComponentText {
    Coeffs(Vec<CoeffText>),
    Series(SeriesFile),
}

/// `{"p", "N", "M", "H": [2, 4], "components": {"(a,b)": ...},
/// "denominator": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisFile {
    pub p: u64,
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "H")]
    pub h: Vec<u64>,
    pub components: BTreeMap<String, ComponentText>,
    #[serde(default)]
    pub denominator: Vec<DenominatorTerm>,
}

/// Reads `(a,b)`, `a,b` or `()`.
pub fn parse_exponents(text: &str) -> Result<Vec<i64>> {
    let inner = text.trim().trim_start_matches('(').trim_end_matches(')').trim();
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad exponent list {text:?}"))))
        .collect()
}

fn format_exponents(e: &[u64]) -> String {
    let parts: Vec<String> = e.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

impl GaloisFile {
    pub fn parse(text: &str) -> Result<Self> {
        parse_json(text)
    }

    pub fn group(&self) -> Result<FiniteAbelianGroup> {
        FiniteAbelianGroup::new(self.h.clone())
    }

    pub fn pseudo_measure(&self, ov: &Overrides) -> Result<PseudoMeasure> {
        let ctx = context(self.p, self.n, ov)?;
        let m = ov.tdeg.unwrap_or(self.m);
        let group = self.group()?;
        let mut comps = Vec::new();
        for (key, c) in &self.components {
            let h = group.normalize(&parse_exponents(key)?)?;
            let s = match c {
                ComponentText::Coeffs(cs) => read_coeffs(&ctx, cs, m)?,
                ComponentText::Series(f) => {
                    if f.p != ctx.p() {
                        return Err(Error::ContextMismatch);
                    }
                    read_coeffs(&ctx, &f.coeffs, m.min(f.m))?
                }
            };
            comps.push((h, s));
        }
        let numerator = GaloisMeasure::from_components(&group, &ctx, m, comps)?;
        Ok(PseudoMeasure { numerator, denominator: self.denominator.clone() })
    }

    pub fn from_pseudo_measure(nu: &PseudoMeasure) -> Self {
        let num = &nu.numerator;
        let ctx = num.context();
        let components = num
            .components()
            .map(|(h, s)| {
                let cs = coeff_strings(s).into_iter().map(CoeffText::Text).collect();
                (format_exponents(h), ComponentText::Coeffs(cs))
            })
            .collect();
        GaloisFile {
            p: ctx.p(),
            n: ctx.digits(),
            m: num.len(),
            h: num.group.orders.clone(),
            components,
            denominator: nu.denominator.clone(),
        }
    }
}

/// `{"p", "N", "M", "matrix": [[coeffs, ...], ...]}`, optional
/// `polynomial`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub p: u64,
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "M")]
    pub m: usize,
    pub matrix: Vec<Vec<Vec<CoeffText>>>,
    #[serde(default)]
    pub polynomial: bool,
}

impl MatrixFile {
    pub fn parse(text: &str) -> Result<Self> {
        parse_json(text)
    }

    pub fn module(&self, ov: &Overrides) -> Result<PresentedModule> {
        let ctx = context(self.p, self.n, ov)?;
        let m = ov.tdeg.unwrap_or(self.m);
        let matrix = self
            .matrix
            .iter()
            .map(|row| row.iter().map(|e| read_coeffs(&ctx, e, m)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        PresentedModule::new(&ctx, matrix, self.polynomial)
    }
}

pub fn parse_scenario(text: &str) -> Result<EulerScenario> {
    parse_json(text)
}

/// `{"error": {"kind": ..., "message": ...}}`.
pub fn error_json(err: &Error) -> Value {
    json!({ "error": { "kind": err.kind(), "message": err.to_string() } })
}
