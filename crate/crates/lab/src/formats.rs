//! JSON documents for distributions and scenarios, with line and field
//! diagnostics on parse failure.

use std::fmt;
use std::path::Path;

use composite_core::mode_dist::{
    DiscreteModeDistribution, GaussianModeDistribution, SpinLabel, ThreeParticleDistribution,
};
use composite_core::pauli::ThreeBodyScenario;
use composite_core::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub source_name: String,
    /// Zero when the error is semantic rather than syntactic.
    pub line: usize,
    pub column: usize,
    /// Dotted path of the offending field, empty for the document root.
    pub field: String,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(f, "{}:{}:{}: ", self.source_name, self.line, self.column)?;
        } else {
            write!(f, "{}: ", self.source_name)?;
        }
        if !self.field.is_empty() {
            write!(f, "field `{}`: ", self.field)?;
        }
        f.write_str(&self.message)
    }
}

impl std::error::Error for ParseError {}

fn semantic_error(source_name: &str, field: &str, message: impl fmt::Display) -> ParseError {
    ParseError {
        source_name: source_name.to_string(),
        line: 0,
        column: 0,
        field: field.to_string(),
        message: message.to_string(),
    }
}

/// Deserializes `text`, reporting the position and field path of the first error.
pub fn parse_json<T: DeserializeOwned>(text: &str, source_name: &str) -> Result<T, ParseError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value: T = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let field = e.path().to_string();
        let inner = e.into_inner();
        ParseError {
            source_name: source_name.to_string(),
            line: inner.line(),
            column: inner.column(),
            field: if field == "." { String::new() } else { field },
            message: inner.to_string(),
        }
    })?;
    de.end().map_err(|e| ParseError {
        source_name: source_name.to_string(),
        line: e.line(),
        column: e.column(),
        field: String::new(),
        message: e.to_string(),
    })?;
    Ok(value)
}

/// `{"na", "nb", "re": [[..]], "im": [[..]], "spin_a", "spin_b"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionDoc {
    pub na: usize,
    pub nb: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default)]
    pub im: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub spin_a: u32,
    #[serde(default)]
    pub spin_b: u32,
}

impl DistributionDoc {
    pub fn from_distribution(f: &DiscreteModeDistribution) -> Self {
        let (na, nb) = f.shape();
        let rows =
            |part: fn(&Complex64) -> f64| (0..na).map(|n| (0..nb).map(|m| part(&f.get(n, m))).collect()).collect();
        Self {
            na,
            nb,
            re: rows(|z| z.re),
            im: Some(rows(|z| z.im)),
            spin_a: f.spin_a().0,
            spin_b: f.spin_b().0,
        }
    }

    /// Checks the shape and normalizes; `field` prefixes error paths.
    pub fn to_distribution(&self, source_name: &str, field: &str) -> Result<DiscreteModeDistribution, ParseError> {
        let re = matrix(&self.re, self.na, self.nb, source_name, &join(field, "re"))?;
        let im = match &self.im {
            Some(im) => matrix(im, self.na, self.nb, source_name, &join(field, "im"))?,
            None => vec![0.0; re.len()],
        };
        let entries = re.into_iter().zip(im).map(|(r, i)| Complex64::new(r, i)).collect();
        DiscreteModeDistribution::normalize(
            self.na,
            self.nb,
            entries,
            SpinLabel(self.spin_a),
            SpinLabel(self.spin_b),
        )
        .map_err(|e| semantic_error(source_name, field, e))
    }
}

fn join(prefix: &str, name: &str) -> String {
    if prefix.is_empty() {
        name.to_string()
    } else {
        format!("{prefix}.{name}")
    }
}

fn matrix(rows: &[Vec<f64>], nr: usize, nc: usize, source_name: &str, field: &str) -> Result<Vec<f64>, ParseError> {
    if rows.len() != nr {
        return Err(semantic_error(
            source_name,
            field,
            format!("expected {nr} rows, found {}", rows.len()),
        ));
    }
    let mut out = Vec::with_capacity(nr * nc);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != nc {
            return Err(semantic_error(
                source_name,
                &format!("{field}[{i}]"),
                format!("expected {nc} entries, found {}", row.len()),
            ));
        }
        out.extend_from_slice(row);
    }
    Ok(out)
}

/// `{"alpha", "beta", "gamma", "spin_a", "spin_b"}`.
pub fn parse_gaussian(text: &str, source_name: &str) -> Result<GaussianModeDistribution, ParseError> {
    let g: GaussianModeDistribution = parse_json(text, source_name)?;
    g.validate().map_err(|e| semantic_error(source_name, "", e))?;
    Ok(g)
}

/// One-particle mode vector `{"re": [..], "im": [..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorDoc {
    pub re: Vec<f64>,
    #[serde(default)]
    pub im: Option<Vec<f64>>,
}

impl VectorDoc {
    fn to_vector(&self, source_name: &str, field: &str) -> Result<Vec<Complex64>, ParseError> {
        let im = match &self.im {
            Some(im) if im.len() != self.re.len() => {
                return Err(semantic_error(
                    source_name,
                    &join(field, "im"),
                    format!("expected {} entries, found {}", self.re.len(), im.len()),
                ))
            }
            Some(im) => im.clone(),
            None => vec![0.0; self.re.len()],
        };
        Ok(self.re.iter().zip(im).map(|(&r, i)| Complex64::new(r, i)).collect())
    }
}

/// A composite plus a free fermion of the composite's fermionic species.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThreeBodyDoc {
    pub composite: DistributionDoc,
    pub free_fermion: VectorDoc,
    #[serde(default)]
    pub free_spin: u32,
}

impl ThreeBodyDoc {
    pub fn to_scenario(&self, source_name: &str) -> Result<ThreeBodyScenario, ParseError> {
        let f = self.composite.to_distribution(source_name, "composite")?;
        let g = self.free_fermion.to_vector(source_name, "free_fermion")?;
        if g.len() != f.na() {
            return Err(semantic_error(
                source_name,
                "free_fermion.re",
                format!("expected {} entries (composite na), found {}", f.na(), g.len()),
            ));
        }
        ThreeBodyScenario::normalized(f, g, SpinLabel(self.free_spin))
            .map_err(|e| semantic_error(source_name, "free_spin", e))
    }
}

/// `{"n_fermion", "n_partner", "re": [[[..]]], "im": [[[..]]], "spin_r", "spin_s"}`,
/// indexed `[n][m][k]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThreeParticleDoc {
    pub n_fermion: usize,
    pub n_partner: usize,
    pub re: Vec<Vec<Vec<f64>>>,
    #[serde(default)]
    pub im: Option<Vec<Vec<Vec<f64>>>>,
    #[serde(default)]
    pub spin_r: u32,
    #[serde(default)]
    pub spin_s: u32,
}

impl ThreeParticleDoc {
    pub fn to_distribution(&self, source_name: &str) -> Result<ThreeParticleDistribution, ParseError> {
        let flat = |t: &Vec<Vec<Vec<f64>>>, field: &str| -> Result<Vec<f64>, ParseError> {
            if t.len() != self.n_fermion {
                return Err(semantic_error(
                    source_name,
                    field,
                    format!("expected {} slices, found {}", self.n_fermion, t.len()),
                ));
            }
            let mut out = Vec::new();
            for (n, slice) in t.iter().enumerate() {
                out.extend(matrix(
                    slice,
                    self.n_fermion,
                    self.n_partner,
                    source_name,
                    &format!("{field}[{n}]"),
                )?);
            }
            Ok(out)
        };
        let re = flat(&self.re, "re")?;
        let im = match &self.im {
            Some(im) => flat(im, "im")?,
            None => vec![0.0; re.len()],
        };
        let entries = re.into_iter().zip(im).map(|(r, i)| Complex64::new(r, i)).collect();
        ThreeParticleDistribution::normalize(
            self.n_fermion,
            self.n_partner,
            entries,
            SpinLabel(self.spin_r),
            SpinLabel(self.spin_s),
        )
        .map_err(|e| semantic_error(source_name, "", e))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Scenario {
    ThreeBody(ThreeBodyScenario),
    Helium(ThreeParticleDistribution),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ThreeBodyFile {
    #[serde(rename = "scenario")]
    _scenario: String,
    composite: DistributionDoc,
    free_fermion: VectorDoc,
    #[serde(default)]
    free_spin: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HeliumFile {
    #[serde(rename = "scenario")]
    _scenario: String,
    n_fermion: usize,
    n_partner: usize,
    re: Vec<Vec<Vec<f64>>>,
    #[serde(default)]
    im: Option<Vec<Vec<Vec<f64>>>>,
    #[serde(default)]
    spin_r: u32,
    #[serde(default)]
    spin_s: u32,
}

/// Parses a scenario file: `"scenario": "three_body"` with the
/// [`ThreeBodyDoc`] fields, or `"scenario": "helium"` with the
/// [`ThreeParticleDoc`] fields.
pub fn parse_scenario(text: &str, source_name: &str) -> Result<Scenario, ParseError> {
    let value: serde_json::Value = parse_json(text, source_name)?;
    let tag = match value.get("scenario") {
        None => return Err(semantic_error(source_name, "scenario", "missing field `scenario`")),
        Some(serde_json::Value::String(s)) => s.as_str(),
        Some(_) => return Err(semantic_error(source_name, "scenario", "expected a string")),
    };
    match tag {
        "three_body" => {
            let file: ThreeBodyFile = parse_json(text, source_name)?;
            let doc = ThreeBodyDoc {
                composite: file.composite,
                free_fermion: file.free_fermion,
                free_spin: file.free_spin,
            };
            Ok(Scenario::ThreeBody(doc.to_scenario(source_name)?))
        }
        "helium" => {
            let h: HeliumFile = parse_json(text, source_name)?;
            let doc = ThreeParticleDoc {
                n_fermion: h.n_fermion,
                n_partner: h.n_partner,
                re: h.re,
                im: h.im,
                spin_r: h.spin_r,
                spin_s: h.spin_s,
            };
            Ok(Scenario::Helium(doc.to_distribution(source_name)?))
        }
        other => Err(semantic_error(
            source_name,
            "scenario",
            format!("unknown scenario `{other}`, expected `three_body` or `helium`"),
        )),
    }
}

pub fn read_scenario(path: &Path) -> anyhow::Result<Scenario> {
    let text = std::fs::read_to_string(path)?;
    Ok(parse_scenario(&text, &path.display().to_string())?)
}
