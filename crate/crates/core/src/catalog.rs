//! Named example algebras and the JSON algebra definition format.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::algebra::{GradedLieAlgebra, SparseVector, StructureTable};
use crate::error::{Error, Result};
use crate::predictor::{GrowthBound, Relation, Target};
use crate::rational;
use crate::subspace::Subspace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Builder {
    HeisenbergC,
    HeisenbergH,
    HeisenbergO,
    Unipotent,
    Abelian,
}

impl Builder {
    pub const ALL: [Builder; 5] = [
        Builder::HeisenbergC,
        Builder::HeisenbergH,
        Builder::HeisenbergO,
        Builder::Unipotent,
        Builder::Abelian,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Builder::HeisenbergC => "heisenberg_c",
            Builder::HeisenbergH => "heisenberg_h",
            Builder::HeisenbergO => "heisenberg_o",
            Builder::Unipotent => "unipotent",
            Builder::Abelian => "abelian",
        }
    }

    pub fn min_n(self) -> usize {
        match self {
            Builder::Unipotent => 3,
            _ => 1,
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Builder::HeisenbergC => "complex Heisenberg algebra, dimension 2n+1",
            Builder::HeisenbergH => "quaternionic Heisenberg algebra, dimension 4n+3",
            Builder::HeisenbergO => "octonionic Heisenberg algebra, dimension 8n+7",
            Builder::Unipotent => "strictly upper triangular n x n matrices",
            Builder::Abelian => "abelian algebra R^n",
        }
    }

    pub fn from_id(id: &str) -> Option<Builder> {
        Builder::ALL.into_iter().find(|b| b.id() == id)
    }

    pub fn build(self, n: usize) -> Result<CatalogEntry> {
        match self {
            Builder::HeisenbergC => heisenberg_c(n),
            Builder::HeisenbergH => heisenberg_h(n),
            Builder::HeisenbergO => heisenberg_o(n),
            Builder::Unipotent => unipotent(n),
            Builder::Abelian => abelian(n),
        }
    }
}

impl fmt::Display for Builder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub builder: Builder,
    pub n: usize,
    pub algebra: GradedLieAlgebra,
    pub designated_subspace: Option<Subspace>,
    /// Known maximal dimension of an isotropic subspace of `V_1`.
    pub max_isotropic_dim: Option<usize>,
    /// Known filling bounds not derived from a certified subspace.
    pub literature: Vec<GrowthBound>,
    pub notes: Vec<String>,
}

impl CatalogEntry {
    pub fn id(&self) -> String {
        format!("{}:{}", self.builder.id(), self.n)
    }
}

/// Parses `"builder:n"` and builds the entry.
pub fn build(id: &str) -> Result<CatalogEntry> {
    let (name, n) = id
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("catalog id `{id}` must look like `name:n`")))?;
    let builder = Builder::from_id(name)
        .ok_or_else(|| Error::Parse(format!("unknown catalog builder `{name}`")))?;
    let n: usize = n
        .parse()
        .map_err(|_| Error::Parse(format!("invalid parameter `{n}` in catalog id `{id}`")))?;
    builder.build(n)
}

fn check_n(builder: Builder, n: usize) -> Result<()> {
    if n < builder.min_n() {
        return Err(Error::OutOfRange(format!(
            "{} needs n >= {}, got {n}",
            builder.id(),
            builder.min_n()
        )));
    }
    Ok(())
}

type Entries = Vec<((usize, usize), SparseVector)>;

fn one(w: usize) -> SparseVector {
    vec![(w, rational::one())]
}

/// Builds an algebra from labelled layers and `[left, right] = result` triples.
fn assemble(
    name: String,
    layers: Vec<Vec<String>>,
    relations: &[(String, String, String)],
) -> Result<GradedLieAlgebra> {
    let basis: Vec<String> = layers.iter().flatten().cloned().collect();
    let index: BTreeMap<&str, usize> = basis
        .iter()
        .enumerate()
        .map(|(i, b)| (b.as_str(), i))
        .collect();
    let mut next = 0;
    let layer_idx: Vec<Vec<usize>> = layers
        .iter()
        .map(|l| {
            let v: Vec<usize> = (next..next + l.len()).collect();
            next += l.len();
            v
        })
        .collect();
    let entries: Entries = relations
        .iter()
        .map(|(a, b, c)| {
            (
                (index[a.as_str()], index[b.as_str()]),
                one(index[c.as_str()]),
            )
        })
        .collect();
    let table = StructureTable::new(basis.len(), entries)?;
    GradedLieAlgebra::new(name, basis, layer_idx, table)
}

fn indexed(letters: &str, n: usize) -> Vec<String> {
    letters
        .chars()
        .flat_map(|c| (1..=n).map(move |q| format!("{c}{q}")))
        .collect()
}

fn capitals(letters: &str) -> Vec<String> {
    letters.chars().map(String::from).collect()
}

fn rel(a: char, b: char, q: usize, c: char) -> (String, String, String) {
    (format!("{a}{q}"), format!("{b}{q}"), c.to_string())
}

/// Complex Heisenberg algebra on `j_1..j_n, k_1..k_n, K` with `[k_q, j_q] = K`.
pub fn heisenberg_c(n: usize) -> Result<CatalogEntry> {
    check_n(Builder::HeisenbergC, n)?;
    let relations: Vec<_> = (1..=n).map(|q| rel('k', 'j', q, 'K')).collect();
    let algebra = assemble(
        format!("H^{n}_C"),
        vec![indexed("jk", n), capitals("K")],
        &relations,
    )?;
    let literature = complex_literature(n);
    Ok(CatalogEntry {
        builder: Builder::HeisenbergC,
        n,
        algebra,
        designated_subspace: None,
        max_isotropic_dim: None,
        literature,
        notes: vec![format!("Hausdorff dimension D = {}", 2 * n + 2)],
    })
}

/// Published filling exponents of the complex Heisenberg group of dimension
/// `2n+1`: Euclidean below `n+1`, `(n+2)/n` at `n+1` and `(j+2)/(j+1)` for
/// `F^{j+1}`, `j > n`.
fn complex_literature(n: usize) -> Vec<GrowthBound> {
    const NOTE: &str = "published filling exponents of the complex Heisenberg group";
    let mut out = Vec::new();
    for j in 1..=2 * n {
        let e = match j.cmp(&n) {
            std::cmp::Ordering::Less => rational::frac(j as i64 + 1, j as i64),
            std::cmp::Ordering::Equal => rational::frac(n as i64 + 2, n as i64),
            std::cmp::Ordering::Greater => rational::frac(j as i64 + 2, j as i64 + 1),
        };
        out.push(
            GrowthBound::new(
                Target::Filling,
                j + 1,
                e,
                Relation::Equivalent,
                "Literature",
            )
            .with_note(NOTE),
        );
    }
    out
}

/// Quaternionic Heisenberg algebra on `h, i, j, k` (indexed) and `I, J, K`.
pub fn heisenberg_h(n: usize) -> Result<CatalogEntry> {
    check_n(Builder::HeisenbergH, n)?;
    let mut relations = Vec::new();
    for q in 1..=n {
        relations.push(rel('i', 'h', q, 'I'));
        relations.push(rel('j', 'h', q, 'J'));
        relations.push(rel('k', 'h', q, 'K'));
        relations.push(rel('k', 'j', q, 'I'));
        relations.push(rel('i', 'k', q, 'J'));
        relations.push(rel('j', 'i', q, 'K'));
    }
    let algebra = assemble(
        format!("H^{n}_H"),
        vec![indexed("hijk", n), capitals("IJK")],
        &relations,
    )?;
    let h: Vec<usize> = (0..n).collect();
    let designated_subspace = Some(Subspace::coordinate(&algebra, &h)?);
    Ok(CatalogEntry {
        builder: Builder::HeisenbergH,
        n,
        algebra,
        designated_subspace,
        max_isotropic_dim: None,
        literature: Vec::new(),
        notes: vec![format!(
            "Hausdorff dimension D = 4n + 2*3 = {}; the topological dimension is {}",
            4 * n + 6,
            4 * n + 3
        )],
    })
}

/// The 21 relations among `e..k` of the octonionic Heisenberg algebra, as
/// `(a, b, C)` meaning `[a, b] = C`.
const OCTONION_RELATIONS: [(char, char, char); 21] = [
    ('i', 'f', 'E'),
    ('k', 'h', 'E'),
    ('j', 'g', 'E'),
    ('e', 'i', 'F'),
    ('j', 'h', 'F'),
    ('g', 'k', 'F'),
    ('k', 'f', 'G'),
    ('e', 'j', 'G'),
    ('h', 'i', 'G'),
    ('i', 'g', 'H'),
    ('f', 'j', 'H'),
    ('e', 'k', 'H'),
    ('g', 'h', 'I'),
    ('f', 'e', 'I'),
    ('k', 'j', 'I'),
    ('h', 'f', 'J'),
    ('g', 'e', 'J'),
    ('i', 'k', 'J'),
    ('f', 'g', 'K'),
    ('e', 'h', 'K'),
    ('j', 'i', 'K'),
];

/// Octonionic Heisenberg algebra on `d..k` (indexed) and `E..K`.
pub fn heisenberg_o(n: usize) -> Result<CatalogEntry> {
    check_n(Builder::HeisenbergO, n)?;
    let mut relations = Vec::new();
    for q in 1..=n {
        for a in "efghijk".chars() {
            relations.push(rel(a, 'd', q, a.to_ascii_uppercase()));
        }
        for &(a, b, c) in &OCTONION_RELATIONS {
            relations.push(rel(a, b, q, c));
        }
    }
    let algebra = assemble(
        format!("H^{n}_O"),
        vec![indexed("defghijk", n), capitals("EFGHIJK")],
        &relations,
    )?;
    let d: Vec<usize> = (0..n).collect();
    let designated_subspace = Some(Subspace::coordinate(&algebra, &d)?);
    Ok(CatalogEntry {
        builder: Builder::HeisenbergO,
        n,
        algebra,
        designated_subspace,
        max_isotropic_dim: Some(n),
        literature: Vec::new(),
        notes: vec![
            format!("Hausdorff dimension D = {}", 8 * n + 14),
            "every isotropic subspace of V_1 has dimension at most n".into(),
        ],
    })
}

fn matrix_unit_label(n: usize, u: usize, v: usize) -> String {
    if n < 10 {
        format!("E{u}{v}")
    } else {
        format!("E{u}_{v}")
    }
}

/// Strictly upper triangular `n x n` matrices with basis `E_uv`, graded by
/// superdiagonal.
pub fn unipotent(n: usize) -> Result<CatalogEntry> {
    check_n(Builder::Unipotent, n)?;
    let mut units: Vec<(usize, usize)> = Vec::new();
    let mut layers: Vec<Vec<usize>> = Vec::new();
    for s in 1..n {
        let mut layer = Vec::new();
        for u in 1..=n - s {
            layer.push(units.len());
            units.push((u, u + s));
        }
        layers.push(layer);
    }
    let position: BTreeMap<(usize, usize), usize> =
        units.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut entries: Entries = Vec::new();
    for (a, &(u, v)) in units.iter().enumerate() {
        for (b, &(x, y)) in units.iter().enumerate().skip(a + 1) {
            // [E_uv, E_xy] = δ_vx E_uy - δ_yu E_xv
            let mut result: SparseVector = Vec::new();
            if v == x {
                result.push((position[&(u, y)], rational::one()));
            }
            if y == u {
                result.push((position[&(x, v)], -rational::one()));
            }
            if !result.is_empty() {
                entries.push(((a, b), result));
            }
        }
    }
    let basis: Vec<String> = units
        .iter()
        .map(|&(u, v)| matrix_unit_label(n, u, v))
        .collect();
    let table = StructureTable::new(units.len(), entries)?;
    let algebra = GradedLieAlgebra::new(format!("N_{n}"), basis, layers, table)?;
    let designated: Vec<usize> = (1..=n / 2).map(|k| position[&(2 * k - 1, 2 * k)]).collect();
    let designated_subspace = Some(Subspace::coordinate(&algebra, &designated)?);
    let mut literature = Vec::new();
    if n >= 4 {
        literature.push(
            GrowthBound::new(
                Target::Filling,
                2,
                rational::int(3),
                Relation::AtLeast,
                "Literature",
            )
            .with_note("cubic lower bound on the filling area of N_n for n >= 4"),
        );
    }
    Ok(CatalogEntry {
        builder: Builder::Unipotent,
        n,
        algebra,
        designated_subspace,
        max_isotropic_dim: None,
        literature,
        notes: vec![format!(
            "V_1 is the superdiagonal and has dimension n - 1 = {}",
            n - 1
        )],
    })
}

/// The abelian algebra `R^n` with one layer.
pub fn abelian(n: usize) -> Result<CatalogEntry> {
    check_n(Builder::Abelian, n)?;
    let basis: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let algebra = GradedLieAlgebra::new(
        format!("R^{n}"),
        basis,
        vec![(0..n).collect()],
        StructureTable::new(n, [])?,
    )?;
    let all: Vec<usize> = (0..n).collect();
    let designated_subspace = Some(Subspace::coordinate(&algebra, &all)?);
    Ok(CatalogEntry {
        builder: Builder::Abelian,
        n,
        algebra,
        designated_subspace,
        max_isotropic_dim: Some(n),
        literature: Vec::new(),
        notes: Vec::new(),
    })
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraFile {
    name: String,
    basis: Vec<String>,
    layers: Vec<Vec<String>>,
    #[serde(default)]
    brackets: Vec<BracketEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BracketEntry {
    left: String,
    right: String,
    result: Vec<Term>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Term {
    basis: String,
    coeff: String,
}

/// A definition document resolved to indices, before the grading is checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraDefinition {
    pub name: String,
    pub basis: Vec<String>,
    pub layers: Vec<Vec<usize>>,
    pub table: StructureTable,
}

impl AlgebraDefinition {
    pub fn into_algebra(self) -> Result<GradedLieAlgebra> {
        GradedLieAlgebra::new(self.name, self.basis, self.layers, self.table)
    }
}

/// Parses a definition document without validating the grading.
pub fn parse_definition(text: &str) -> Result<AlgebraDefinition> {
    let file: AlgebraFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("algebra file: {e}")))?;
    let index: BTreeMap<&str, usize> = file
        .basis
        .iter()
        .enumerate()
        .map(|(i, b)| (b.as_str(), i))
        .collect();
    if index.len() != file.basis.len() {
        return Err(Error::InvalidAlgebra("duplicate basis label".into()));
    }
    let lookup = |label: &str| {
        index
            .get(label)
            .copied()
            .ok_or_else(|| Error::InvalidAlgebra(format!("unknown basis label `{label}`")))
    };
    let layers = file
        .layers
        .iter()
        .map(|l| l.iter().map(|b| lookup(b)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let mut seen: BTreeMap<(usize, usize), (String, String)> = BTreeMap::new();
    let mut entries: Entries = Vec::new();
    for entry in &file.brackets {
        let u = lookup(&entry.left)?;
        let v = lookup(&entry.right)?;
        if u == v {
            return Err(Error::InvalidAlgebra(format!(
                "bracket [{0}, {0}] must not be listed",
                entry.left
            )));
        }
        let key = (u.min(v), u.max(v));
        if let Some((a, b)) = seen.get(&key) {
            return Err(Error::InvalidAlgebra(format!(
                "bracket [{}, {}] listed twice (also as [{a}, {b}])",
                entry.left, entry.right
            )));
        }
        seen.insert(key, (entry.left.clone(), entry.right.clone()));
        let mut result: SparseVector = Vec::new();
        for t in &entry.result {
            result.push((lookup(&t.basis)?, rational::parse(&t.coeff)?));
        }
        entries.push(((u, v), result));
    }
    let table = StructureTable::new(file.basis.len(), entries)?;
    Ok(AlgebraDefinition {
        name: file.name,
        basis: file.basis,
        layers,
        table,
    })
}

/// Parses and validates an algebra definition document.
pub fn parse_algebra(text: &str) -> Result<GradedLieAlgebra> {
    parse_definition(text)?.into_algebra()
}

/// Serializes an algebra; brackets are written for `left < right` in basis
/// order with results in basis order.
pub fn algebra_to_json(algebra: &GradedLieAlgebra) -> String {
    let label = |i: usize| algebra.label(i).to_string();
    let file = AlgebraFile {
        name: algebra.name().to_string(),
        basis: algebra.basis().to_vec(),
        layers: algebra
            .layers()
            .iter()
            .map(|l| l.iter().map(|&i| label(i)).collect())
            .collect(),
        brackets: algebra
            .table()
            .constants()
            .iter()
            .map(|(&(u, v), result)| BracketEntry {
                left: label(u),
                right: label(v),
                result: result
                    .iter()
                    .map(|(w, c)| Term {
                        basis: label(*w),
                        coeff: rational::format(c),
                    })
                    .collect(),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("serializable");
    s.push('\n');
    s
}

pub fn load_definition(path: &Path) -> Result<AlgebraDefinition> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_definition(&text)
}

pub fn load_algebra(path: &Path) -> Result<GradedLieAlgebra> {
    load_definition(path)?.into_algebra()
}

pub fn save_algebra(algebra: &GradedLieAlgebra, path: &Path) -> Result<()> {
    std::fs::write(path, algebra_to_json(algebra)).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}
