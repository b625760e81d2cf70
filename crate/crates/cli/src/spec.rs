//! Manifold spec files (TOML).
//!
//! ```toml
//! id = "kim_lee"
//! [chart]
//! coords = ["x1", "y1", "x2", "y2"]
//! [structure]
//! kind = "complex_frame"
//! z1 = ["1/2", "-i/2", "-x1 + i*y1", "y1 + i*x1"]
//! z2 = ["2*i*y1", "0", "-i*(4*x1*y1 + 1)", "-1"]
//! [fields]
//! V1 = ["0", "0", "0", "-2"]
//! ```
//!
//! Structure kinds: `complex_frame`, `j_matrix`, `invariant_model`, `family`.

use std::collections::BTreeMap;
use std::path::Path;

use nijenhuis_core::acstructure::{AlmostComplexStructure, ComplexFrameSpec};
use nijenhuis_core::expr::{self, parse_complex, Chart, RatExpr, Rational, SymbolTable};
use nijenhuis_core::invariant::{self, Family, InvariantModel};
use nijenhuis_core::liealg::{CatalogTag, StructureConstants};
use nijenhuis_core::VectorField;
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub id: String,
    #[serde(default)]
    pub description: Option<String>,
    #[serde(default)]
    pub chart: Option<ChartDecl>,
    pub structure: StructureDecl,
    /// Named vector fields (coordinate charts) or algebra vectors, either
    /// as four components or as a combination `{ name = "coefficient" }` of
    /// built-in and component-declared vectors.
    #[serde(default)]
    pub fields: BTreeMap<String, FieldDecl>,
    /// Analysis point, defaults to the origin.
    #[serde(default)]
    pub point: Option<Vec<String>>,
    #[serde(default)]
    pub expect: Vec<Expectation>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartDecl {
    pub coords: Vec<String>,
    #[serde(default)]
    pub params: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StructureDecl {
    ComplexFrame {
        z1: Vec<String>,
        z2: Vec<String>,
    },
    JMatrix {
        rows: Vec<Vec<String>>,
    },
    InvariantModel {
        #[serde(default)]
        algebra: Option<String>,
        /// `[i, j, k, "c"]` with 1-based indices: `[e_i, e_j]` has `c` on `e_k`.
        #[serde(default)]
        brackets: Vec<(usize, usize, usize, String)>,
        #[serde(default)]
        j_matrix: Option<Vec<Vec<String>>>,
        /// `ξ, Jξ, η, Jη`, named `xi`, `Jxi`, `eta`, `Jeta`.
        #[serde(default)]
        frame: Option<[Vec<String>; 4]>,
        #[serde(default)]
        params: Vec<String>,
        #[serde(default)]
        constraints: Vec<String>,
    },
    Family {
        family: String,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum FieldDecl {
    Components(Vec<String>),
    Combination(BTreeMap<String, String>),
}

/// One expected result. `check` selects the comparison, `args` names its
/// inputs and `value` is the expected outcome.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    pub check: String,
    pub cite: String,
    #[serde(default)]
    pub args: Vec<String>,
    #[serde(default)]
    pub value: Option<toml::Value>,
    /// Known discrepancy with the printed source; the computed value is
    /// reported instead of failing.
    #[serde(default)]
    pub flag: Option<String>,
}

#[derive(Debug, Clone)]
pub enum Body {
    Coordinate { chart: Chart, j: AlmostComplexStructure, frame_spec: Option<ComplexFrameSpec> },
    Invariant { model: InvariantModel, family: Option<Family> },
}

#[derive(Debug, Clone)]
pub struct Loaded {
    pub spec: SpecFile,
    pub source: String,
    pub body: Body,
    pub point: [Rational; 4],
    /// Built-in vectors (`d1..d4`, `ReZ1..ImZ2`, `e1..e4`, `xi..Jeta`) and
    /// the declared fields, as components.
    pub named: BTreeMap<String, Vec<RatExpr>>,
}

impl Loaded {
    pub fn symbols(&self) -> &SymbolTable {
        match &self.body {
            Body::Coordinate { chart, .. } => chart.symbols(),
            Body::Invariant { model, .. } => &model.symbols,
        }
    }
}

fn at(source: &str, path: &str, e: impl std::fmt::Display) -> CliError {
    CliError::Parse(format!("{source}: {path}: {e}"))
}

fn four<T: Clone>(source: &str, path: &str, v: &[T]) -> Result<[T; 4], CliError> {
    v.to_vec().try_into().map_err(|_| at(source, path, format!("expected 4 entries, found {}", v.len())))
}

pub fn parse_point(text: &str) -> Result<[Rational; 4], CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    point_from(&parts.iter().map(|s| s.to_string()).collect::<Vec<_>>(), "--point")
}

fn point_from(parts: &[String], source: &str) -> Result<[Rational; 4], CliError> {
    let empty = SymbolTable::params_only::<&str>(&[]).expect("empty table");
    let vals = parts
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let e = expr::parse(s, &empty).map_err(|e| at(source, &format!("point[{i}]"), e))?;
            e.as_rational().ok_or_else(|| at(source, &format!("point[{i}]"), "not a rational number"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    four(source, "point", &vals)
}

pub fn load_file(path: &Path) -> Result<Loaded, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    load_str(&text, &path.display().to_string())
}

pub fn load_str(text: &str, source: &str) -> Result<Loaded, CliError> {
    let spec: SpecFile = toml::from_str(text).map_err(|e| CliError::Parse(format!("{source}: {e}")))?;
    let point = match &spec.point {
        Some(p) => point_from(p, source)?,
        None => Default::default(),
    };
    let (body, mut named) = match &spec.structure {
        StructureDecl::ComplexFrame { .. } | StructureDecl::JMatrix { .. } => coordinate_body(&spec, source)?,
        StructureDecl::InvariantModel { .. } | StructureDecl::Family { .. } => invariant_body(&spec, source)?,
    };
    let symbols = match &body {
        Body::Coordinate { chart, .. } => chart.symbols().clone(),
        Body::Invariant { model, .. } => model.symbols.clone(),
    };
    let p = |path: &str, s: &str| expr::parse(s, &symbols).map_err(|e| at(source, path, e));
    // components first, so combinations may refer to them
    for (name, decl) in &spec.fields {
        if let FieldDecl::Components(c) = decl {
            let path = format!("fields.{name}");
            let c = four(source, &path, c)?;
            let v = c.iter().enumerate().map(|(i, s)| p(&format!("{path}[{i}]"), s)).collect::<Result<Vec<_>, _>>()?;
            insert_new(&mut named, name, v, source)?;
        }
    }
    // combinations in dependency order
    let mut pending: Vec<(&String, &BTreeMap<String, String>)> = spec
        .fields
        .iter()
        .filter_map(|(n, d)| match d {
            FieldDecl::Combination(t) => Some((n, t)),
            FieldDecl::Components(_) => None,
        })
        .collect();
    while !pending.is_empty() {
        let before = pending.len();
        let mut rest = Vec::new();
        for (name, terms) in pending {
            if terms.keys().all(|k| named.contains_key(k)) {
                let v = combination(&named, terms, &symbols).map_err(|e| at(source, &format!("fields.{name}"), e))?;
                insert_new(&mut named, name, v, source)?;
            } else {
                rest.push((name, terms));
            }
        }
        if rest.len() == before {
            let (name, terms) = rest[0];
            let missing = terms.keys().find(|k| !named.contains_key(*k)).expect("unresolved term");
            return Err(at(source, &format!("fields.{name}"), format!("unknown or circular vector `{missing}`")));
        }
        pending = rest;
    }
    Ok(Loaded { spec, source: source.to_string(), body, point, named })
}

fn insert_new(named: &mut BTreeMap<String, Vec<RatExpr>>, name: &str, v: Vec<RatExpr>, source: &str) -> Result<(), CliError> {
    if named.insert(name.to_string(), v).is_some() {
        return Err(at(source, &format!("fields.{name}"), "name is already taken"));
    }
    Ok(())
}

/// `Σ coefficient · vector` over named vectors.
pub fn combination(
    named: &BTreeMap<String, Vec<RatExpr>>,
    terms: &BTreeMap<String, String>,
    symbols: &SymbolTable,
) -> Result<Vec<RatExpr>, String> {
    let mut out = vec![RatExpr::zero(); 4];
    for (name, coef) in terms {
        let v = named.get(name).ok_or_else(|| format!("unknown vector `{name}`"))?;
        let c = expr::parse(coef, symbols).map_err(|e| format!("coefficient of {name}: {e}"))?;
        for (o, x) in out.iter_mut().zip(v) {
            *o = o.add(&c.mul(x));
        }
    }
    Ok(out)
}

type Named = BTreeMap<String, Vec<RatExpr>>;

fn coordinate_body(spec: &SpecFile, source: &str) -> Result<(Body, Named), CliError> {
    let decl = spec.chart.as_ref().ok_or_else(|| at(source, "chart", "a coordinate structure needs a [chart] section"))?;
    if decl.coords.len() != 4 {
        return Err(at(source, "chart.coords", "exactly four coordinates are required"));
    }
    let chart = Chart::new(&decl.coords, &decl.params).map_err(|e| at(source, "chart", e))?;
    let mut named = Named::new();
    for i in 0..4 {
        named.insert(format!("d{}", i + 1), VectorField::coordinate(i).to_vec());
    }
    let (j, frame_spec) = match &spec.structure {
        StructureDecl::ComplexFrame { z1, z2 } => {
            let fs = ComplexFrameSpec {
                z1: complex_field(&chart, source, "structure.z1", z1)?,
                z2: complex_field(&chart, source, "structure.z2", z2)?,
            };
            let j = AlmostComplexStructure::from_complex_frame(&fs).map_err(|e| at(source, "structure", e))?;
            for (n, f) in ["ReZ1", "ImZ1", "ReZ2", "ImZ2"].iter().zip(fs.real_frame()) {
                named.insert(n.to_string(), f.to_vec());
            }
            (j, Some(fs))
        }
        StructureDecl::JMatrix { rows } => {
            let rows = four(source, "structure.rows", rows)?;
            let mut m = Vec::new();
            for (r, row) in rows.iter().enumerate() {
                let row = four(source, &format!("structure.rows[{r}]"), row)?;
                let mut out = Vec::new();
                for (c, s) in row.iter().enumerate() {
                    out.push(chart.parse(s).map_err(|e| at(source, &format!("structure.rows[{r}][{c}]"), e))?);
                }
                m.push(out);
            }
            (AlmostComplexStructure::from_matrix(m).map_err(|e| at(source, "structure.rows", e))?, None)
        }
        _ => unreachable!("coordinate structures only"),
    };
    Ok((Body::Coordinate { chart, j, frame_spec }, named))
}

/// Real and imaginary parts of a complex field given by components.
pub fn complex_field(chart: &Chart, source: &str, path: &str, comps: &[String]) -> Result<(VectorField, VectorField), CliError> {
    let c = four(source, path, comps)?;
    let (mut re, mut im) = (Vec::new(), Vec::new());
    for (i, s) in c.iter().enumerate() {
        let (r, m) = parse_complex(s, chart.symbols()).map_err(|e| at(source, &format!("{path}[{i}]"), e))?;
        re.push(r);
        im.push(m);
    }
    Ok((VectorField::from_vec(re), VectorField::from_vec(im)))
}

fn invariant_body(spec: &SpecFile, source: &str) -> Result<(Body, Named), CliError> {
    let mut named = Named::new();
    let frame_names = ["xi", "Jxi", "eta", "Jeta"];
    let (model, family) = match &spec.structure {
        StructureDecl::Family { family } => {
            let f = Family::from_name(family).ok_or_else(|| at(source, "structure.family", format!("unknown family `{family}`")))?;
            let fm = invariant::family_model(f).map_err(|e| at(source, "structure", e))?;
            for (n, v) in frame_names.iter().zip(fm.frame) {
                named.insert(n.to_string(), v);
            }
            (fm.model, Some(f))
        }
        StructureDecl::InvariantModel { algebra, brackets, j_matrix, frame, params, constraints } => {
            let symbols = SymbolTable::params_only(params).map_err(|e| at(source, "structure.params", e))?;
            let p = |path: &str, s: &str| expr::parse(s, &symbols).map_err(|e| at(source, path, e));
            let sc = match (algebra, brackets.is_empty()) {
                (Some(name), true) => CatalogTag::from_name(name)
                    .and_then(|t| t.representative())
                    .ok_or_else(|| at(source, "structure.algebra", format!("unknown algebra `{name}`")))?,
                (None, false) => {
                    let mut entries = Vec::new();
                    for (n, (i, j, k, c)) in brackets.iter().enumerate() {
                        let path = format!("structure.brackets[{n}]");
                        if [*i, *j, *k].iter().any(|x| !(1..=4).contains(x)) {
                            return Err(at(source, &path, "indices run from 1 to 4"));
                        }
                        entries.push((i - 1, j - 1, k - 1, p(&path, c)?));
                    }
                    StructureConstants::from_entries(&entries).map_err(|e| at(source, "structure.brackets", e))?
                }
                _ => return Err(at(source, "structure", "give exactly one of `algebra` and `brackets`")),
            };
            let vec4 = |path: &str, v: &[String]| -> Result<Vec<RatExpr>, CliError> {
                let c = four(source, path, v)?;
                c.iter().enumerate().map(|(i, s)| p(&format!("{path}[{i}]"), s)).collect()
            };
            let cons = constraints
                .iter()
                .enumerate()
                .map(|(i, s)| p(&format!("structure.constraints[{i}]"), s))
                .collect::<Result<Vec<_>, _>>()?;
            let model = match (j_matrix, frame) {
                (Some(rows), None) => {
                    let rows = four(source, "structure.j_matrix", rows)?;
                    let mut m = Vec::new();
                    for (r, row) in rows.iter().enumerate() {
                        m.push(vec4(&format!("structure.j_matrix[{r}]"), row)?);
                    }
                    InvariantModel::new(sc, m, cons, symbols.clone())
                }
                (None, Some(fr)) => {
                    let mut vs = Vec::new();
                    for (n, v) in frame_names.iter().zip(fr) {
                        let v = vec4(&format!("structure.frame.{n}"), v)?;
                        named.insert(n.to_string(), v.clone());
                        vs.push(v);
                    }
                    invariant::build_from_frame_spec(sc, vs.try_into().expect("four"), cons, symbols.clone())
                }
                _ => return Err(at(source, "structure", "give exactly one of `j_matrix` and `frame`")),
            }
            .map_err(|e| at(source, "structure", e))?;
            (model, None)
        }
        _ => unreachable!("invariant structures only"),
    };
    for (i, e) in nijenhuis_core::liealg::full_basis().into_iter().enumerate() {
        named.insert(format!("e{}", i + 1), e);
    }
    Ok((Body::Invariant { model, family }, named))
}
