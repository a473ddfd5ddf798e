//! Recipes for building spaces by name, and the verification catalog.
//!
//! A [`VerificationCase`] pairs a [`Recipe`] with a [`Check`]; running it
//! produces a [`CaseReport`] with the computed and expected data. Cases are
//! tagged required or stretch; a suite succeeds iff no required case fails.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::constructions::{
    based_subset3, fat_diagonal, finite_subset_space, reduced, sub3_homology_via_coproduct,
    symmetric_product, w2_chain_model, ConstructionResult, Options, ReducedKind,
};
use crate::error::{Error, Result};
use crate::homology::chain::{normalized_chains, ChainComplex};
use crate::homology::pi1::{fundamental_presentation, tietze_simplify, Pi1Status, TietzeBudget};
use crate::homology::ring::Coefficients;
use crate::homology::{
    groups, homology, induced_map, smith_normal_form, sset_homology,
    universal_coefficients_agree, HomologyGroup, InducedMap,
};
use crate::space::{builtin_space, load_complex, OrderedComplexSpec};
use crate::sset::{cell_cap, collapse, from_ordered_complex, SSetMap, SimplicialSet};
use crate::surface::{sp_chain_complex, SurfacePresentation};

// ---------------------------------------------------------------- recipes

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceRef {
    Builtin(String),
    Complex(OrderedComplexSpec),
    Surface(SurfacePresentation),
}

impl SpaceRef {
    /// `builtin:<name>` or `surface:<sphere|torus|rp2|genus<g>|nonorientable<k>>`.
    pub fn parse(s: &str) -> Result<Self> {
        if let Some(name) = s.strip_prefix("builtin:") {
            builtin_space(name)?;
            return Ok(SpaceRef::Builtin(name.to_string()));
        }
        if let Some(name) = s.strip_prefix("surface:") {
            return Ok(SpaceRef::Surface(named_surface(name)?));
        }
        Err(Error::UnknownSpace(s.to_string()))
    }

    /// A complex `{"name","vertices","simplices"}` or a surface
    /// presentation `{"r","word"}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if v.get("word").is_some() || v.get("attaching_word").is_some() {
            Ok(SpaceRef::Surface(SurfacePresentation::from_json(text)?))
        } else {
            Ok(SpaceRef::Complex(load_complex(text)?))
        }
    }

    pub fn complex(&self) -> Result<OrderedComplexSpec> {
        match self {
            SpaceRef::Builtin(name) => builtin_space(name),
            SpaceRef::Complex(c) => Ok(c.clone()),
            SpaceRef::Surface(_) => Err(Error::InvalidParameter(
                "a surface presentation only supports the sp construction".into(),
            )),
        }
    }
}

impl fmt::Display for SpaceRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceRef::Builtin(n) => write!(f, "builtin:{n}"),
            SpaceRef::Complex(c) => write!(f, "{}", c.name),
            SpaceRef::Surface(p) => write!(f, "surface(r={}, word={:?})", p.r, p.word),
        }
    }
}

fn named_surface(name: &str) -> Result<SurfacePresentation> {
    Ok(match name {
        "sphere" => SurfacePresentation::sphere(),
        "torus" => SurfacePresentation::torus(),
        "rp2" => SurfacePresentation::rp2(),
        _ => {
            if let Some(g) = name.strip_prefix("genus") {
                SurfacePresentation::orientable(g.parse().map_err(|_| Error::UnknownSpace(name.into()))?)
            } else if let Some(k) = name.strip_prefix("nonorientable") {
                SurfacePresentation::nonorientable(k.parse().map_err(|_| Error::UnknownSpace(name.into()))?)
            } else {
                return Err(Error::UnknownSpace(format!("surface:{name}")));
            }
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    /// The space itself.
    Space,
    Sp,
    Sub,
    /// Fat diagonal of `SP^n`.
    Fat,
    BarSp,
    BarSub,
    /// `Sub_3(X, x_0)` as a quotient of `SP^2`.
    Based3,
    /// Chain model `W_2` for `Sub_3(X, x_0)`.
    W2,
    /// `Sub_3(X, x_0)` from the homology of `SP^2` and `X`.
    Coproduct,
}

pub const CONSTRUCTION_NAMES: &[&str] = &[
    "space", "sp", "sub", "fat", "barsp", "barsub", "based3", "w2", "coproduct",
];

impl FromStr for Construction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "space" | "x" => Construction::Space,
            "sp" => Construction::Sp,
            "sub" => Construction::Sub,
            "fat" => Construction::Fat,
            "barsp" => Construction::BarSp,
            "barsub" => Construction::BarSub,
            "based3" => Construction::Based3,
            "w2" => Construction::W2,
            "coproduct" => Construction::Coproduct,
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "unknown construction `{s}` (expected one of {})",
                    CONSTRUCTION_NAMES.join(", ")
                )))
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recipe {
    pub space: SpaceRef,
    pub construction: Construction,
    pub n: usize,
    pub coeff: Coefficients,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
}

/// Homology of a recipe plus the sizes of what was built.
#[derive(Clone, Debug)]
pub struct Computed {
    pub groups: Vec<HomologyGroup>,
    /// Cells per level of the simplicial set, or ranks of the chain complex.
    pub cells: Vec<usize>,
}

impl Recipe {
    pub fn new(space: &str, construction: Construction, n: usize) -> Self {
        Recipe {
            space: SpaceRef::parse(space).expect("catalog spaces are valid"),
            construction,
            n,
            coeff: Coefficients::Integers,
            truncation: None,
        }
    }

    pub fn coeff(mut self, c: Coefficients) -> Self {
        self.coeff = c;
        self
    }

    pub fn truncation(mut self, d: usize) -> Self {
        self.truncation = Some(d);
        self
    }

    fn options(&self, cap: u64) -> Options {
        Options {
            truncation: self.truncation,
            cell_cap: Some(cap),
            auxiliary: false,
        }
    }

    /// The simplicial set built by the recipe, with its named maps.
    pub fn build(&self, cap: u64) -> Result<ConstructionResult> {
        self.build_with(cap, false)
    }

    /// As [`Recipe::build`], also building the maps that need an auxiliary
    /// space (`q`, `pi`, `incl_sub`).
    pub fn build_with(&self, cap: u64, auxiliary: bool) -> Result<ConstructionResult> {
        let opts = Options {
            auxiliary,
            ..self.options(cap)
        };
        let spec = self.space.complex()?;
        match self.construction {
            Construction::Space => {
                let d = self.truncation.unwrap_or(spec.dimension() + 1);
                let s = Arc::new(crate::sset::base::from_ordered_complex_capped(&spec, d, cap)?);
                Ok(ConstructionResult {
                    dimension_bound: s.dimension_bound(),
                    space: s,
                    maps: BTreeMap::new(),
                })
            }
            Construction::Sp => symmetric_product(&spec, self.n, &opts),
            Construction::Sub => finite_subset_space(&spec, self.n, &opts),
            Construction::Fat => fat_diagonal(&spec, self.n, &opts),
            Construction::BarSp => reduced(&spec, self.n, ReducedKind::Sp, &opts),
            Construction::BarSub => reduced(&spec, self.n, ReducedKind::Sub, &opts),
            Construction::Based3 => based_subset3(&spec, &opts),
            Construction::W2 | Construction::Coproduct => Err(Error::InvalidParameter(
                "this construction is a chain model, not a simplicial set".into(),
            )),
        }
    }

    /// The chain complex whose homology the recipe computes, if it has one.
    pub fn chain_complex(&self, cap: u64) -> Result<(ChainComplex, Vec<usize>)> {
        if let SpaceRef::Surface(p) = &self.space {
            if self.construction != Construction::Sp {
                return Err(Error::InvalidParameter(
                    "a surface presentation only supports the sp construction".into(),
                ));
            }
            let c = sp_chain_complex(p, self.n)?;
            let ranks = c.ranks().to_vec();
            return Ok((c, ranks));
        }
        if self.construction == Construction::W2 {
            let c = w2_chain_model(&self.space.complex()?, &self.options(cap))?;
            let ranks = c.ranks().to_vec();
            return Ok((c, ranks));
        }
        let r = self.build(cap)?;
        let c = normalized_chains(&r.space)?.complex;
        Ok((c, r.space.cell_counts()))
    }

    pub fn homology(&self, cap: u64) -> Result<Computed> {
        if self.construction == Construction::Coproduct {
            if self.coeff != Coefficients::Integers {
                return Err(Error::InvalidParameter(
                    "the coproduct model is computed over the integers only".into(),
                ));
            }
            let m = sub3_homology_via_coproduct(&self.space.complex()?, &self.options(cap))?;
            return Ok(Computed {
                groups: m.groups,
                cells: Vec::new(),
            });
        }
        let (c, cells) = self.chain_complex(cap)?;
        Ok(Computed {
            groups: homology(&c, self.coeff)?,
            cells,
        })
    }
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.construction)?;
        if !matches!(self.construction, Construction::Space | Construction::Based3 | Construction::W2 | Construction::Coproduct) {
            write!(f, "{}", self.n)?;
        }
        write!(f, "({}; {})", self.space, self.coeff)?;
        if let Some(d) = self.truncation {
            write!(f, " truncated at {d}")?;
        }
        Ok(())
    }
}

// ------------------------------------------------------------------ cases

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tag {
    Required,
    Stretch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    BoundarySquared,
    SnfCertificates,
    SimplicialIdentities,
    DimensionBound,
    TriangulationInvariance,
    UniversalCoefficients,
    RelativeAgreement,
    PoincareDualityFailure,
    Functoriality,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// Exactly these groups in degrees `0..len`, zero in every other
    /// certified degree.
    Homology(Vec<HomologyGroup>),
    /// These groups in the degrees they name; other degrees unchecked.
    Degrees(Vec<HomologyGroup>),
    /// `Homology(expected)` for the recipe and for every other recipe.
    Agrees {
        others: Vec<Recipe>,
        expected: Vec<HomologyGroup>,
    },
    /// The recipe and the other one build the same simplicial set.
    IdenticalTo(Recipe),
    /// The fundamental group presentation simplifies to the trivial group.
    Pi1Trivial,
    /// The named map induces multiplication by `value` (up to sign) on a
    /// rank-one group.
    MapScalar {
        map: String,
        degree: usize,
        value: u64,
    },
    MapIsomorphism {
        map: String,
        degree: usize,
    },
    /// The image of the first source generator is nonzero.
    ClassNonzero {
        map: String,
        degree: usize,
    },
    /// In `Sub_3(X, x_0)` from the coproduct model, the image of the first
    /// generator of `H_degree(X)` under the diagonal is nonzero.
    BasedDiagonalNonzero {
        degree: usize,
    },
    /// `Δ_*[X] = 2 j_*[X] + 2c` in `H_2(SP^2 X)` with `j_*[X], c` a basis.
    DiagonalFormula,
    Property(Property),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationCase {
    pub id: String,
    /// Acceptance criterion this case belongs to (0 for harness self-tests).
    pub criterion: u8,
    pub tag: Tag,
    pub summary: String,
    pub recipe: Recipe,
    pub check: Check,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub id: String,
    pub criterion: u8,
    pub tag: Tag,
    pub summary: String,
    pub status: Status,
    pub expected: Value,
    pub computed: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    pub wall_ms: u64,
    pub cells: Vec<usize>,
}

impl CaseReport {
    /// Counts against the suite: a required case that did not pass.
    pub fn is_failure(&self) -> bool {
        self.tag == Tag::Required && self.status != Status::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub cases: Vec<CaseReport>,
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
    pub skipped: usize,
    pub success: bool,
}

impl Report {
    fn assemble(suite: &str, cases: Vec<CaseReport>) -> Self {
        let count = |s: Status| cases.iter().filter(|c| c.status == s).count();
        Report {
            suite: suite.to_string(),
            passed: count(Status::Pass),
            failed: count(Status::Fail),
            inconclusive: count(Status::Inconclusive),
            skipped: count(Status::Skipped),
            success: !cases.iter().any(CaseReport::is_failure),
            cases,
        }
    }

    pub fn table(&self) -> String {
        let mut out = String::new();
        for c in &self.cases {
            out.push_str(&format!(
                "{:<12} {:<8} {:<34} {:>8} ms  {}\n",
                format!("{:?}", c.status).to_uppercase(),
                format!("{:?}", c.tag).to_lowercase(),
                c.id,
                c.wall_ms,
                c.summary
            ));
            if c.status != Status::Pass {
                out.push_str(&format!("    expected: {}\n    computed: {}\n", c.expected, c.computed));
                if let Some(d) = &c.detail {
                    out.push_str(&format!("    {d}\n"));
                }
            }
        }
        out.push_str(&format!(
            "{} passed, {} failed, {} inconclusive, {} skipped\n",
            self.passed, self.failed, self.inconclusive, self.skipped
        ));
        out
    }
}

struct Outcome {
    status: Status,
    expected: Value,
    computed: Value,
    detail: Option<String>,
    cells: Vec<usize>,
}

impl Outcome {
    fn judged(ok: bool, expected: Value, computed: Value) -> Self {
        Outcome {
            status: if ok { Status::Pass } else { Status::Fail },
            expected,
            computed,
            detail: None,
            cells: Vec::new(),
        }
    }

    fn cells(mut self, cells: Vec<usize>) -> Self {
        self.cells = cells;
        self
    }

    fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }
}

fn show(groups: &[HomologyGroup]) -> Value {
    json!(groups
        .iter()
        .map(|g| {
            let mut v = json!(g);
            if !g.reliable {
                v["reliable"] = json!(false);
            }
            v
        })
        .collect::<Vec<_>>())
}

/// Differences against `expected` in degrees `0..expected.len()`, and
/// nonzero certified groups beyond it when `rest_zero`.
fn homology_diff(computed: &[HomologyGroup], expected: &[HomologyGroup], rest_zero: bool) -> Vec<String> {
    let mut diff = Vec::new();
    for e in expected {
        match computed.get(e.dim) {
            None => diff.push(format!("H_{} not computed", e.dim)),
            Some(c) if !c.reliable => diff.push(format!("H_{} not certified by the truncation", e.dim)),
            Some(c) if !c.same_group(e) => diff.push(format!("H_{}: expected {e}, got {c}", e.dim)),
            _ => {}
        }
    }
    if rest_zero {
        for c in computed {
            if c.reliable && c.dim >= expected.len() && !c.is_zero() {
                diff.push(format!("H_{}: expected 0, got {c}", c.dim));
            }
        }
    }
    diff
}

fn judge_homology(computed: &Computed, expected: &[HomologyGroup], rest_zero: bool) -> Outcome {
    let diff = homology_diff(&computed.groups, expected, rest_zero);
    let o = Outcome::judged(diff.is_empty(), show(expected), show(&computed.groups))
        .cells(computed.cells.clone());
    if diff.is_empty() {
        o
    } else {
        o.detail(diff.join("; "))
    }
}

fn reliable_prefix(g: &[HomologyGroup]) -> &[HomologyGroup] {
    let n = g.iter().take_while(|x| x.reliable).count();
    &g[..n]
}

fn matrix_json(m: &InducedMap) -> Value {
    m.to_json()
}

fn run_check(case: &VerificationCase, cap: u64) -> Result<Outcome> {
    let recipe = &case.recipe;
    match &case.check {
        Check::Homology(expected) => Ok(judge_homology(&recipe.homology(cap)?, expected, true)),
        Check::Degrees(expected) => Ok(judge_homology(&recipe.homology(cap)?, expected, false)),
        Check::Agrees { others, expected } => {
            let mut results = vec![(recipe.clone(), recipe.homology(cap)?)];
            for r in others {
                results.push((r.clone(), r.homology(cap)?));
            }
            let mut diff = Vec::new();
            for (r, c) in &results {
                for d in homology_diff(&c.groups, expected, true) {
                    diff.push(format!("{r}: {d}"));
                }
            }
            let computed = json!(results
                .iter()
                .map(|(r, c)| json!({"recipe": r.to_string(), "groups": show(&c.groups)}))
                .collect::<Vec<_>>());
            let o = Outcome::judged(diff.is_empty(), show(expected), computed)
                .cells(results[0].1.cells.clone());
            Ok(if diff.is_empty() { o } else { o.detail(diff.join("; ")) })
        }
        Check::IdenticalTo(other) => {
            let (a, b) = (recipe.build(cap)?, other.build(cap)?);
            let same = same_cells(&a.space, &b.space);
            Ok(Outcome::judged(
                same,
                json!({"cells": b.space.cell_counts()}),
                json!({"cells": a.space.cell_counts(), "identical": same}),
            )
            .cells(a.space.cell_counts()))
        }
        Check::Pi1Trivial => {
            let r = recipe.build(cap)?;
            let p = fundamental_presentation(&r.space)?;
            let s = tietze_simplify(&p, TietzeBudget::default());
            let status = match s.status {
                Pi1Status::Trivial => Status::Pass,
                Pi1Status::Nontrivial => Status::Fail,
                Pi1Status::Inconclusive => Status::Inconclusive,
            };
            Ok(Outcome {
                status,
                expected: json!("trivial"),
                computed: json!({
                    "status": s.status,
                    "generators": p.generators,
                    "relators": p.relators.len(),
                    "simplified_generators": s.presentation.generators,
                    "abelianization": p.abelianization(),
                }),
                detail: None,
                cells: r.space.cell_counts(),
            })
        }
        Check::MapScalar { map, degree, value } => {
            let r = recipe.build(cap)?;
            let m = induced_map(r.map(map)?, *degree)?;
            let ok = m.matrix.len() == 1
                && m.matrix[0].len() == 1
                && m.matrix[0][0].abs() == BigInt::from(*value);
            Ok(Outcome::judged(ok, json!({"matrix": [[value]], "up_to_sign": true}), matrix_json(&m))
                .cells(r.space.cell_counts()))
        }
        Check::MapIsomorphism { map, degree } => {
            let r = recipe.build(cap)?;
            let m = induced_map(r.map(map)?, *degree)?;
            Ok(Outcome::judged(m.is_isomorphism(), json!("isomorphism"), matrix_json(&m))
                .cells(r.space.cell_counts()))
        }
        Check::ClassNonzero { map, degree } => {
            let r = recipe.build(cap)?;
            let m = induced_map(r.map(map)?, *degree)?;
            let ok = !m.matrix.is_empty() && m.matrix[0].len() > 0 && m.image_of(0).iter().any(|x| !x.is_zero());
            Ok(Outcome::judged(ok, json!("image of the generator is nonzero"), matrix_json(&m))
                .cells(r.space.cell_counts()))
        }
        Check::BasedDiagonalNonzero { degree } => {
            let spec = recipe.space.complex()?;
            let model = sub3_homology_via_coproduct(&spec, &recipe.options(cap))?;
            let class = model.diagonal_image(*degree, 0);
            let ok = class.iter().any(|x| !x.is_zero());
            let show_big = |v: &[BigInt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
            Ok(Outcome::judged(
                ok,
                json!("class of the diagonal image is nonzero"),
                json!({
                    "group": model.groups[*degree],
                    "class": show_big(&class),
                    "diagonal": model.diag[*degree].to_json(),
                    "j": model.j[*degree].to_json(),
                }),
            ))
        }
        Check::DiagonalFormula => diagonal_formula(recipe, cap),
        Check::Property(p) => run_property(*p, cap),
    }
}

fn same_cells(a: &SimplicialSet, b: &SimplicialSet) -> bool {
    a.cell_counts() == b.cell_counts()
        && (0..=a.truncation()).all(|k| {
            (0..a.len(k)).all(|c| {
                a.payload(k, c) == b.payload(k, c)
                    && (k == 0 || (0..=k).all(|i| a.face(k, c, i) == b.face(k, c, i)))
            })
        })
}

/// `v = Δ_*[X] − 2 j_*[X]` is twice a vector that completes `j_*[X]` to a
/// basis of `H_2(SP^2 X)`.
fn diagonal_formula(recipe: &Recipe, cap: u64) -> Result<Outcome> {
    let r = recipe.build(cap)?;
    let d = induced_map(r.map("diag")?, 2)?;
    let j = induced_map(r.map("j_n")?, 2)?;
    let (dv, jv) = (d.image_of(0), j.image_of(0));
    let v: Vec<BigInt> = dv.iter().zip(&jv).map(|(a, b)| a - b * 2).collect();
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let ok = d.target.torsion.is_empty()
        && d.target.betti == 2
        && g == BigInt::from(2)
        && {
            let c: Vec<BigInt> = v.iter().map(|x| x / &g).collect();
            (&jv[0] * &c[1] - &jv[1] * &c[0]).abs() == BigInt::from(1)
        };
    let s = |v: &[BigInt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    Ok(Outcome::judged(
        ok,
        json!("diag = 2 j + 2 c with (j, c) a basis of H_2 = Z^2"),
        json!({"diag": s(&dv), "j": s(&jv), "target": d.target}),
    )
    .cells(r.space.cell_counts()))
}

// ------------------------------------------------------------- properties

fn property_recipes() -> Vec<Recipe> {
    use Construction::*;
    vec![
        Recipe::new("builtin:sphere2", Sp, 2),
        Recipe::new("builtin:circle3", Sub, 3),
        Recipe::new("builtin:circle3", BarSub, 2),
        Recipe::new("builtin:sphere2", BarSub, 2),
        Recipe::new("builtin:rp2", Sp, 2),
        Recipe::new("builtin:sphere2", Fat, 2),
        Recipe::new("builtin:circle3", Based3, 3),
        Recipe::new("builtin:torus", Sp, 2).truncation(4),
    ]
}

fn run_property(p: Property, cap: u64) -> Result<Outcome> {
    use Construction::*;
    match p {
        Property::BoundarySquared => {
            let mut recipes = property_recipes();
            recipes.push(Recipe::new("builtin:sphere2", W2, 3));
            recipes.push(Recipe::new("builtin:torus", W2, 3).truncation(4));
            recipes.push(Recipe::new("surface:torus", Sp, 3));
            recipes.push(Recipe::new("surface:rp2", Sp, 4));
            recipes.push(Recipe::new("surface:genus2", Sp, 3));
            let mut checked = Vec::new();
            for r in &recipes {
                let (c, _) = r.chain_complex(cap)?;
                c.check_boundary_squared()?;
                checked.push(r.to_string());
            }
            Ok(Outcome::judged(true, json!("d∘d = 0"), json!({ "checked": checked })))
        }
        Property::SnfCertificates => {
            let recipes = [
                Recipe::new("builtin:circle3", Sub, 3),
                Recipe::new("builtin:circle3", BarSub, 2),
                Recipe::new("builtin:rp2", Space, 1),
                Recipe::new("surface:rp2", Sp, 3),
                Recipe::new("surface:nonorientable3", Sp, 2),
            ];
            let mut matrices = 0;
            let mut ok = true;
            for r in &recipes {
                let (c, _) = r.chain_complex(cap)?;
                for k in 1..=c.top_degree() {
                    let m = c.boundary(k);
                    let s = smith_normal_form(m);
                    ok &= s.certify(&m.to_dense());
                    matrices += 1;
                }
            }
            Ok(Outcome::judged(ok, json!("U·M·V = D"), json!({ "matrices": matrices })))
        }
        Property::SimplicialIdentities => {
            let mut checked = Vec::new();
            for r in property_recipes() {
                r.build(cap)?.space.check_identities()?;
                checked.push(r.to_string());
            }
            Ok(Outcome::judged(true, json!("simplicial identities"), json!({ "checked": checked })))
        }
        Property::DimensionBound => {
            let cases = [
                (Recipe::new("builtin:sphere2", Sub, 3), 6),
                (Recipe::new("builtin:sphere3", Sp, 2), 6),
                (Recipe::new("builtin:circle3", Sub, 4), 4),
                (Recipe::new("builtin:circle4", Sp, 3), 3),
                (Recipe::new("builtin:rp2", Sp, 2), 4),
            ];
            let mut rows = Vec::new();
            for (r, bound) in &cases {
                let s = r.build(cap)?.space;
                s.check_dimension_bound(*bound)?;
                rows.push(json!({"recipe": r.to_string(), "bound": bound, "nondegenerate": s.nondegenerate_counts()}));
            }
            Ok(Outcome::judged(true, json!("no nondegenerate cells above n·dim X"), json!(rows)))
        }
        Property::TriangulationInvariance => {
            let a = Recipe::new("builtin:circle3", Sub, 3).homology(cap)?;
            let b = Recipe::new("builtin:circle4", Sub, 3).homology(cap)?;
            let (pa, pb) = (reliable_prefix(&a.groups), reliable_prefix(&b.groups));
            let n = pa.len().min(pb.len());
            Ok(Outcome::judged(
                pa[..n] == pb[..n] && n >= 4,
                show(&pa[..n]),
                show(&pb[..n]),
            )
            .cells(b.cells))
        }
        Property::UniversalCoefficients => {
            let mut recipes = property_recipes();
            recipes.push(Recipe::new("builtin:sphere2", Sub, 3));
            recipes.push(Recipe::new("builtin:sphere3", W2, 3));
            recipes.push(Recipe::new("surface:rp2", Sp, 3));
            recipes.push(Recipe::new("surface:nonorientable2", Sp, 3));
            let rows: Vec<Result<(String, bool)>> = recipes
                .par_iter()
                .map(|r| {
                    let (c, _) = r.chain_complex(cap)?;
                    let z = homology(&c, Coefficients::Integers)?;
                    let z = reliable_prefix(&z);
                    let mut ok = true;
                    for p in [2, 3] {
                        let f = homology(&c, Coefficients::Mod(p))?;
                        ok &= universal_coefficients_agree(z, &f[..z.len()], p);
                    }
                    Ok((r.to_string(), ok))
                })
                .collect();
            let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
            let ok = rows.iter().all(|r| r.1);
            Ok(Outcome::judged(ok, json!("dim H(F_p) from H(Z) for p = 2, 3"), json!(rows)))
        }
        Property::RelativeAgreement => {
            let mut rows = Vec::new();
            let mut ok = true;
            for (space, n) in [("builtin:circle3", 2), ("builtin:circle3", 3), ("builtin:sphere2", 2)] {
                let spec = SpaceRef::parse(space)?.complex()?;
                let opts = Options {
                    cell_cap: Some(cap),
                    ..Options::default()
                };
                let fat = fat_diagonal(&spec, n, &opts)?;
                let incl = fat.map("incl_fat")?;
                let (sp_mod_fat, _) = collapse(incl.target(), incl)?;
                let a = sset_homology(&sp_mod_fat, Coefficients::Integers)?;
                let b = sset_homology(&reduced(&spec, n, ReducedKind::Sub, &opts)?.space, Coefficients::Integers)?;
                let (pa, pb) = (reliable_prefix(&a), reliable_prefix(&b));
                let m = pa.len().min(pb.len());
                let same = m > 0 && pa[..m] == pb[..m];
                ok &= same;
                rows.push(json!({"space": space, "n": n, "sp_mod_fat": show(&pa[..m]), "sub_mod_sub": show(&pb[..m])}));
            }
            Ok(Outcome::judged(ok, json!("SP^n/fat diagonal and Sub_n/Sub_(n-1) have equal homology"), json!(rows)))
        }
        Property::PoincareDualityFailure => {
            let c = Recipe::new("builtin:sphere2", Sub, 3).homology(cap)?;
            let g = &c.groups;
            let ok = g[1].is_zero() && g[1].reliable && !g[4].torsion.is_empty() && g[4].reliable;
            Ok(Outcome::judged(ok, json!("H_1 = 0 and H_4 has torsion"), show(g)).cells(c.cells))
        }
        Property::Functoriality => functoriality(cap),
    }
}

/// `diag = q ∘ Δ` for the torus on `H_2`, compared with the product of the
/// induced matrices.
fn functoriality(cap: u64) -> Result<Outcome> {
    let spec = SpaceRef::parse("builtin:torus")?.complex()?;
    let sp = symmetric_product(
        &spec,
        2,
        &Options {
            truncation: Some(3),
            cell_cap: Some(cap),
            auxiliary: true,
        },
    )?;
    let (q, diag) = (sp.map("q")?, sp.map("diag")?);
    let x = diag.source().clone();
    let square = q.source().clone();
    let delta = SSetMap::from_fn(x.clone(), square.clone(), |k, c| {
        let p = x.payload(k, c);
        let both: Vec<u32> = p.iter().chain(p).copied().collect();
        square.find(k, &both).expect("diagonal cell exists")
    })?;
    let composite = delta.then(q)?;
    let same_map = composite.agrees_with(diag);
    let mq = induced_map(q, 2)?;
    let md = induced_map(&delta, 2)?;
    let direct = induced_map(&composite, 2)?;
    let orders: Vec<Option<BigInt>> = vec![None; mq.matrix.len()];
    let product = mq.compose_after(&md, &orders);
    let ok = same_map && product == direct.matrix;
    Ok(Outcome::judged(ok, matrix_json(&direct), json!({"product": product.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(), "maps_agree": same_map})))
}

// ---------------------------------------------------------------- catalog

fn case(id: &str, criterion: u8, tag: Tag, summary: &str, recipe: Recipe, check: Check) -> VerificationCase {
    VerificationCase {
        id: id.to_string(),
        criterion,
        tag,
        summary: summary.to_string(),
        recipe,
        check,
    }
}

fn z(spec: &[(usize, &[u64])]) -> Vec<HomologyGroup> {
    groups(spec)
}

/// The verification catalog: one or more cases per acceptance criterion.
pub fn catalog() -> Vec<VerificationCase> {
    use Construction::*;
    use Tag::*;
    let e: &[u64] = &[];
    let point = z(&[(1, e)]);
    let mut cases = vec![
        case("sub2-s1", 1, Required, "Sub_2 of the circle is a Moebius band",
            Recipe::new("builtin:circle3", Sub, 2), Check::Homology(z(&[(1, e), (1, e)]))),
        case("sp2-s1", 1, Required, "SP^2 of the circle is a Moebius band",
            Recipe::new("builtin:circle3", Sp, 2), Check::Homology(z(&[(1, e), (1, e)]))),
        case("sub2-equals-sp2", 1, Required, "Sub_2 and SP^2 are the same simplicial set",
            Recipe::new("builtin:circle3", Sub, 2), Check::IdenticalTo(Recipe::new("builtin:circle3", Sp, 2))),
        case("barsub2-s1", 2, Required, "Sub_2/Sub_1 of the circle is RP^2",
            Recipe::new("builtin:circle3", BarSub, 2), Check::Homology(z(&[(1, e), (0, &[2])]))),
        case("barsp2-s1", 2, Required, "SP^2/SP^1 of the circle is acyclic",
            Recipe::new("builtin:circle3", BarSp, 2), Check::Homology(point.clone())),
        case("bott-sub3-s1", 3, Required, "Sub_3 of the circle has the homology of S^3",
            Recipe::new("builtin:circle3", Sub, 3), Check::Homology(z(&[(1, e), (0, e), (0, e), (1, e)]))),
        case("sub3-s1-pi1", 3, Required, "Sub_3 of the circle is simply connected",
            Recipe::new("builtin:circle3", Sub, 3), Check::Pi1Trivial),
        case("sub4-s1", 4, Required, "Sub_4 of the circle has the homology of S^3",
            Recipe::new("builtin:circle3", Sub, 4), Check::Homology(z(&[(1, e), (0, e), (0, e), (1, e)]))),
        case("sub5-s1", 4, Stretch, "Sub_5 of the circle has the homology of S^5",
            Recipe::new("builtin:circle3", Sub, 5), Check::Homology(z(&[(1, e), (0, e), (0, e), (0, e), (0, e), (1, e)]))),
        case("sp2-s2", 5, Required, "SP^2 of S^2 has the homology of CP^2",
            Recipe::new("builtin:sphere2", Sp, 2), Check::Homology(z(&[(1, e), (0, e), (1, e), (0, e), (1, e)]))),
        case("barsp2-s2", 5, Required, "SP^2/SP^1 of S^2 has the homology of S^4",
            Recipe::new("builtin:sphere2", BarSp, 2), Check::Homology(z(&[(1, e), (0, e), (0, e), (0, e), (1, e)]))),
        case("barsub2-s2", 5, Required, "Sub_2/Sub_1 of S^2: H_2 = Z/2, H_4 = Z",
            Recipe::new("builtin:sphere2", BarSub, 2), Check::Homology(z(&[(1, e), (0, e), (0, &[2]), (0, e), (1, e)]))),
        case("sub3-s2", 6, Required, "Sub_3 of S^2: H_4 = Z + Z/2, H_6 = Z",
            Recipe::new("builtin:sphere2", Sub, 3),
            Check::Homology(z(&[(1, e), (0, e), (0, e), (0, e), (1, &[2]), (0, e), (1, e)]))),
        case("sub3-s2-pi1", 6, Required, "Sub_3 of S^2 is simply connected",
            Recipe::new("builtin:sphere2", Sub, 3).truncation(3), Check::Pi1Trivial),
        case("sub4-s2", 6, Stretch, "Sub_4 of S^2: H_6 = Z + Z/3",
            Recipe::new("builtin:sphere2", Sub, 4), Check::Degrees(vec![HomologyGroup::new(6, 1, &[3])])),
        case("sp2-torus", 7, Required, "SP^2 of the torus, simplicial and cellular models agree",
            Recipe::new("builtin:torus", Sp, 2),
            Check::Agrees {
                others: vec![Recipe::new("surface:torus", Sp, 2)],
                expected: z(&[(1, e), (2, e), (2, e), (2, e), (1, e)]),
            }),
    ];
    for (space, expected) in [
        ("circle3", point.clone()),
        ("sphere2", z(&[(1, e), (0, e), (0, e), (0, e), (1, e)])),
        ("torus", z(&[(1, e), (0, e), (1, e), (2, e), (1, e)])),
    ] {
        let builtin = format!("builtin:{space}");
        cases.push(case(
            &format!("based-sub3-{space}"),
            8,
            Required,
            &format!("Sub_3({space}, x0): quotient, chain and coproduct models agree"),
            Recipe::new(&builtin, Based3, 3),
            Check::Agrees {
                others: vec![Recipe::new(&builtin, W2, 3), Recipe::new(&builtin, Coproduct, 3)],
                expected,
            },
        ));
    }
    cases.extend([
        case("diag-s2-h2", 9, Required, "the diagonal S^2 -> SP^2 S^2 is multiplication by 2 on H_2",
            Recipe::new("builtin:sphere2", Sp, 2).truncation(3),
            Check::MapScalar { map: "diag".into(), degree: 2, value: 2 }),
        case("j2-s2-h2", 9, Required, "x -> x x0 induces an isomorphism on H_2",
            Recipe::new("builtin:sphere2", Sp, 2).truncation(3),
            Check::MapIsomorphism { map: "j_n".into(), degree: 2 }),
        case("diag-torus-h2", 9, Required, "diagonal of the torus is 2[T] + 2 e1 e2",
            Recipe::new("builtin:torus", Sp, 2).truncation(3), Check::DiagonalFormula),
        case("j-torus-sub3", 9, Required, "singleton inclusion T -> Sub_3 T is nonzero on H_2",
            Recipe::new("builtin:torus", Sub, 3).truncation(3),
            Check::ClassNonzero { map: "j".into(), degree: 2 }),
        case("jx0-torus-based", 9, Required, "x -> {x, x0} into Sub_3(T, x0) is nonzero on H_2",
            Recipe::new("builtin:torus", Coproduct, 3), Check::BasedDiagonalNonzero { degree: 2 }),
        case("top-sp2-s2", 10, Required, "H_4(SP^2 S^2) = Z",
            Recipe::new("builtin:sphere2", Sp, 2), Check::Degrees(vec![HomologyGroup::free(4, 1)])),
        case("top-sp2-s3", 10, Required, "H_6(SP^2 S^3) = 0",
            Recipe::new("builtin:sphere3", Sp, 2), Check::Degrees(vec![HomologyGroup::free(6, 0)])),
        case("top-sp2-rp2", 10, Required, "H_4(SP^2 RP^2; Z) = 0",
            Recipe::new("builtin:rp2", Sp, 2), Check::Degrees(vec![HomologyGroup::free(4, 0)])),
        case("top-sp2-rp2-f2", 10, Required, "H_4(SP^2 RP^2; F_2) = F_2",
            Recipe::new("builtin:rp2", Sp, 2).coeff(Coefficients::Mod(2)),
            Check::Degrees(vec![HomologyGroup::free(4, 1)])),
        case("top-model-sp3-torus", 10, Required, "cellular model: H_6(SP^3 T) = Z",
            Recipe::new("surface:torus", Sp, 3), Check::Degrees(vec![HomologyGroup::free(6, 1)])),
    ]);
    for (surface, r) in [("torus", 2usize), ("genus2", 4)] {
        for n in [2usize, 3] {
            cases.push(case(
                &format!("below-top-{surface}-n{n}"),
                10,
                Required,
                &format!("cellular model: H_{}(SP^{n}; F_2) = F_2^{r} for {surface}", 2 * n - 1),
                Recipe::new(&format!("surface:{surface}"), Sp, n).coeff(Coefficients::Mod(2)),
                Check::Degrees(vec![HomologyGroup::free(2 * n - 1, r)]),
            ));
        }
    }
    cases.push(case("w2-s3", 11, Required, "Sub_3(S^3, x0) has the homology of the fourth suspension of RP^2",
        Recipe::new("builtin:sphere3", W2, 3),
        Check::Homology(z(&[(1, e), (0, e), (0, e), (0, e), (0, e), (0, &[2])]))));
    let props = [
        ("prop-boundary-squared", Property::BoundarySquared, "boundary squares to zero"),
        ("prop-snf-certificates", Property::SnfCertificates, "Smith form certificates"),
        ("prop-simplicial-identities", Property::SimplicialIdentities, "simplicial identities"),
        ("prop-dimension-bound", Property::DimensionBound, "no nondegenerate cells above n·dim X"),
        ("prop-triangulation-invariance", Property::TriangulationInvariance, "Sub_3 of circle3 and circle4 agree"),
        ("prop-universal-coefficients", Property::UniversalCoefficients, "universal coefficients"),
        ("prop-relative-agreement", Property::RelativeAgreement, "SP^n/fat diagonal vs Sub_n/Sub_(n-1)"),
        ("prop-poincare-failure", Property::PoincareDualityFailure, "Sub_3 S^2 fails Poincare duality"),
        ("prop-functoriality", Property::Functoriality, "induced maps respect composition"),
    ];
    for (id, p, summary) in props {
        cases.push(case(id, 12, Required, summary, Recipe::new("builtin:point", Space, 1), Check::Property(p)));
    }
    cases
}

/// Harness self-tests; they are expected to fail.
pub fn self_test_cases() -> Vec<VerificationCase> {
    vec![case(
        "selftest-wrong-torsion",
        0,
        Tag::Required,
        "RP^2 with a deliberately wrong H_1",
        Recipe::new("builtin:rp2", Construction::Space, 1),
        Check::Homology(groups(&[(1, &[]), (0, &[4])])),
    )]
}

fn glob_match(pattern: &str, s: &str) -> bool {
    let parts: Vec<&str> = pattern.split('*').collect();
    if parts.len() == 1 {
        return pattern == s;
    }
    let mut rest = s;
    for (i, p) in parts.iter().enumerate() {
        if i == 0 {
            let Some(r) = rest.strip_prefix(p) else { return false };
            rest = r;
        } else if i == parts.len() - 1 {
            return rest.ends_with(p);
        } else {
            match rest.find(p) {
                Some(pos) => rest = &rest[pos + p.len()..],
                None => return false,
            }
        }
    }
    true
}

/// `paper` selects the required cases, `stretch` the stretch cases, `all`
/// both, `selftest` the harness self-tests; anything else is a glob over
/// case ids.
pub fn select(filter: &str) -> Vec<VerificationCase> {
    match filter {
        "paper" => catalog().into_iter().filter(|c| c.tag == Tag::Required).collect(),
        "stretch" => catalog().into_iter().filter(|c| c.tag == Tag::Stretch).collect(),
        "all" => catalog(),
        "selftest" => self_test_cases(),
        pattern => catalog()
            .into_iter()
            .chain(self_test_cases())
            .filter(|c| glob_match(pattern, &c.id))
            .collect(),
    }
}

pub fn find_case(id: &str) -> Result<VerificationCase> {
    catalog()
        .into_iter()
        .chain(self_test_cases())
        .find(|c| c.id == id)
        .ok_or_else(|| Error::UnknownCase(id.to_string()))
}

/// Runs one case; a cell-cap overrun is reported as skipped.
pub fn run_case(case: &VerificationCase) -> CaseReport {
    run_case_capped(case, cell_cap())
}

pub fn run_case_capped(case: &VerificationCase, cap: u64) -> CaseReport {
    let start = Instant::now();
    let outcome = match run_check(case, cap) {
        Ok(o) => o,
        Err(Error::CellCap { estimated, cap }) => Outcome {
            status: Status::Skipped,
            expected: Value::Null,
            computed: Value::Null,
            detail: Some(format!("estimated {estimated} cells exceeds the cap of {cap}")),
            cells: Vec::new(),
        },
        Err(e) => Outcome {
            status: Status::Fail,
            expected: Value::Null,
            computed: Value::Null,
            detail: Some(format!("error: {e}")),
            cells: Vec::new(),
        },
    };
    CaseReport {
        id: case.id.clone(),
        criterion: case.criterion,
        tag: case.tag,
        summary: case.summary.clone(),
        status: outcome.status,
        expected: outcome.expected,
        computed: outcome.computed,
        detail: outcome.detail,
        wall_ms: start.elapsed().as_millis() as u64,
        cells: outcome.cells,
    }
}

/// Runs the selected cases on `jobs` threads; the report keeps catalog order.
pub fn run_suite(filter: &str, jobs: usize) -> Result<Report> {
    let cases = select(filter);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let cap = cell_cap();
    let reports = pool.install(|| cases.par_iter().map(|c| run_case_capped(c, cap)).collect());
    Ok(Report::assemble(filter, reports))
}

/// Homology of a base space, for listings.
pub fn base_homology(spec: &OrderedComplexSpec) -> Result<Vec<HomologyGroup>> {
    let s = from_ordered_complex(spec, spec.dimension() + 1)?;
    sset_homology(&s, Coefficients::Integers)
}
