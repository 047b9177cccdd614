//! Predicted growth exponents of filling and divergence functions.
//!
//! A [`HypothesisBundle`] records what is known about an algebra: an isotropic
//! horizontal subspace `S` with `dim S = k + 1`, whether `S` is regular,
//! whether a scalable lattice is available and optionally the maximal
//! isotropic dimension. [`predict_filling`] and [`predict_divergence`] turn it
//! into one row per bound, with "unknown" rows for uncovered dimensions.

use std::fmt;

use num_traits::One;

use crate::algebra::GradedLieAlgebra;
use crate::error::{Error, Result};
use crate::lattice::{self, GroupClosure, ScalingClosure};
use crate::rational::{self, Rational};
use crate::subspace::{is_isotropic, is_regular, Subspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Target {
    /// Filling function `F^m`.
    Filling,
    /// Divergence function `Div^m`.
    Divergence,
}

impl Target {
    pub fn tag(self) -> &'static str {
        match self {
            Target::Filling => "F",
            Target::Divergence => "Div",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Equivalent,
    AtMost,
    AtLeast,
    /// Bounded below and not equivalent.
    StrictlyAbove,
    Unknown,
}

impl Relation {
    pub fn tag(self) -> &'static str {
        match self {
            Relation::Equivalent => "equivalent",
            Relation::AtMost => "at_most",
            Relation::AtLeast => "at_least",
            Relation::StrictlyAbove => "strictly_above",
            Relation::Unknown => "unknown",
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Relation::Equivalent => "~",
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
            Relation::StrictlyAbove => ">",
            Relation::Unknown => "?",
        }
    }

    fn is_lower(self) -> bool {
        matches!(
            self,
            Relation::Equivalent | Relation::AtLeast | Relation::StrictlyAbove
        )
    }

    fn is_upper(self) -> bool {
        matches!(self, Relation::Equivalent | Relation::AtMost)
    }
}

/// `target^m(x) relation x^exponent`, with the rule that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthBound {
    pub target: Target,
    pub m: usize,
    /// `None` only for [`Relation::Unknown`].
    pub exponent: Option<Rational>,
    pub relation: Relation,
    pub source: String,
    pub note: Option<String>,
}

impl GrowthBound {
    pub fn new(
        target: Target,
        m: usize,
        exponent: Rational,
        relation: Relation,
        source: impl Into<String>,
    ) -> Self {
        GrowthBound {
            target,
            m,
            exponent: Some(exponent),
            relation,
            source: source.into(),
            note: None,
        }
    }

    pub fn unknown(target: Target, m: usize) -> Self {
        GrowthBound {
            target,
            m,
            exponent: None,
            relation: Relation::Unknown,
            source: "unknown".into(),
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

impl fmt::Display for GrowthBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = match self.target {
            Target::Filling => "l",
            Target::Divergence => "r",
        };
        match &self.exponent {
            Some(e) => write!(
                f,
                "{}^{}({var}) {} {var}^{} [{}]",
                self.target.tag(),
                self.m,
                self.relation.symbol(),
                rational::format(e),
                self.source
            ),
            None => write!(f, "{}^{} unknown", self.target.tag(), self.m),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeSource {
    /// Built and checked for an algebra of nilpotency degree at most 2.
    Constructed,
    /// Supplied by the caller.
    Asserted,
    Absent,
}

impl LatticeSource {
    pub fn available(self) -> bool {
        !matches!(self, LatticeSource::Absent)
    }

    pub fn tag(self) -> &'static str {
        match self {
            LatticeSource::Constructed => "constructed",
            LatticeSource::Asserted => "asserted",
            LatticeSource::Absent => "absent",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BundleOptions {
    /// Caller assertion that a lattice `Γ` with `s_2(Γ) ⊂ Γ` exists; only
    /// consulted for algebras of nilpotency degree above 2.
    pub assert_lattice: bool,
    /// Caller assertion of the maximal dimension of an isotropic subspace.
    pub max_isotropic_dim: Option<usize>,
    /// Externally known bounds, merged into the filling table.
    pub literature: Vec<GrowthBound>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisBundle {
    algebra: GradedLieAlgebra,
    subspace: Subspace,
    regular: bool,
    lattice: LatticeSource,
    max_isotropic_dim: Option<usize>,
    literature: Vec<GrowthBound>,
}

impl HypothesisBundle {
    pub fn new(
        algebra: &GradedLieAlgebra,
        subspace: &Subspace,
        options: BundleOptions,
    ) -> Result<Self> {
        if subspace.dim() == 0 {
            return Err(Error::OutOfRange("the subspace must be nonzero".into()));
        }
        if !is_isotropic(algebra, subspace)?.isotropic {
            return Err(Error::Uncertified("isotropic"));
        }
        let regular = is_regular(algebra, subspace)?.regular;
        if let Some(k1) = options.max_isotropic_dim {
            if k1 < subspace.dim() {
                return Err(Error::OutOfRange(format!(
                    "asserted maximal isotropic dimension {k1} is below dim S = {}",
                    subspace.dim()
                )));
            }
        }
        let lattice = if algebra.depth() <= 2 {
            let spec = lattice::build_scalable_lattice(algebra)?;
            let closed = lattice::check_group_closure(algebra, &spec)? == GroupClosure::Pass
                && lattice::check_scaling_closure(algebra, &spec)? == ScalingClosure::Pass;
            if !closed {
                return Err(Error::Inconsistent);
            }
            LatticeSource::Constructed
        } else if options.assert_lattice {
            LatticeSource::Asserted
        } else {
            LatticeSource::Absent
        };
        Ok(HypothesisBundle {
            algebra: algebra.clone(),
            subspace: subspace.clone(),
            regular,
            lattice,
            max_isotropic_dim: options.max_isotropic_dim,
            literature: options.literature,
        })
    }

    pub fn algebra(&self) -> &GradedLieAlgebra {
        &self.algebra
    }

    pub fn subspace(&self) -> &Subspace {
        &self.subspace
    }

    pub fn regular(&self) -> bool {
        self.regular
    }

    pub fn lattice(&self) -> LatticeSource {
        self.lattice
    }

    pub fn max_isotropic_dim(&self) -> Option<usize> {
        self.max_isotropic_dim
    }

    /// `k` with `dim S = k + 1`.
    pub fn k(&self) -> usize {
        self.subspace.dim() - 1
    }

    fn regular_with_lattice(&self) -> bool {
        self.regular && self.lattice.available()
    }
}

fn ratio(num: usize, den: usize) -> Rational {
    rational::frac(num as i64, den as i64)
}

const THM4_NOTE: &str =
    "condition b): asserted maximal isotropic dimension equals dim S; condition a) is not checked";
const THM6_NOTE: &str =
    "Thm6 writes this family at Div^{n-j}; the emitted index m = n-j-1 follows Thm7(ii) and Divup";

/// Derived filling bounds (no unknown rows), in emission order.
fn filling_bounds(bundle: &HypothesisBundle) -> Vec<GrowthBound> {
    let g = &bundle.algebra;
    let n = g.dim();
    let k = bundle.k();
    let d = g.depth();
    let big_d = g.hausdorff_dimension();
    let in_range = |m: usize| (2..=n).contains(&m);
    let mut out = Vec::new();

    for j in 1..=k {
        let m = j + 1;
        if !in_range(m) {
            continue;
        }
        let e = ratio(j + 1, j);
        if bundle.regular_with_lattice() {
            out.push(GrowthBound::new(
                Target::Filling,
                m,
                e,
                Relation::Equivalent,
                "Thm1",
            ));
        } else if bundle.regular {
            out.push(
                GrowthBound::new(Target::Filling, m, e, Relation::AtLeast, "Prop-Propeta")
                    .with_note("no scalable lattice: only the lower bound is available"),
            );
        }
    }

    let m = k + 2;
    if in_range(m) {
        if bundle.regular_with_lattice() {
            out.push(GrowthBound::new(
                Target::Filling,
                m,
                ratio(k + 1 + d, k + 1),
                Relation::AtMost,
                "Thm1-upper",
            ));
        }
        if bundle.regular && bundle.max_isotropic_dim == Some(bundle.subspace.dim()) {
            out.push(
                GrowthBound::new(
                    Target::Filling,
                    m,
                    ratio(k + 2, k + 1),
                    Relation::StrictlyAbove,
                    "Thm4",
                )
                .with_note(THM4_NOTE),
            );
        }
    }

    let high = |j: usize| -> Option<(usize, Rational)> {
        let m = n.checked_sub(j)?;
        let den = big_d.checked_sub(j + 1).filter(|&x| x > 0)?;
        in_range(m).then(|| (m, ratio(big_d - j, den)))
    };
    let thm2 = bundle.regular_with_lattice();
    if thm2 {
        for j in 0..k {
            if let Some((m, e)) = high(j) {
                out.push(GrowthBound::new(
                    Target::Filling,
                    m,
                    e,
                    Relation::Equivalent,
                    "Thm2",
                ));
            }
        }
    }
    let low_from = if thm2 { k } else { 0 };
    for j in low_from..=k {
        if let Some((m, e)) = high(j) {
            out.push(GrowthBound::new(
                Target::Filling,
                m,
                e,
                Relation::AtLeast,
                "Prop-toplow",
            ));
        }
    }

    out.extend(
        bundle
            .literature
            .iter()
            .filter(|b| b.target == Target::Filling && in_range(b.m))
            .cloned(),
    );
    out
}

fn with_unknowns(
    mut bounds: Vec<GrowthBound>,
    target: Target,
    range: std::ops::RangeInclusive<usize>,
) -> Vec<GrowthBound> {
    for m in range {
        if !bounds.iter().any(|b| b.m == m) {
            bounds.push(GrowthBound::unknown(target, m));
        }
    }
    // Stable: keeps emission order within a dimension.
    bounds.sort_by_key(|b| b.m);
    bounds
}

/// Filling bounds for `F^m`, `m = 2..=n`, ordered by `m`.
pub fn predict_filling(bundle: &HypothesisBundle) -> Vec<GrowthBound> {
    let n = bundle.algebra.dim();
    with_unknowns(filling_bounds(bundle), Target::Filling, 2..=n)
}

fn best<'a, I>(candidates: I, prefer_larger: bool) -> Option<&'a GrowthBound>
where
    I: Iterator<Item = &'a GrowthBound>,
{
    let mut best: Option<&GrowthBound> = None;
    for b in candidates {
        let e = b.exponent.as_ref().expect("known bound");
        let better = match best {
            None => true,
            Some(cur) => {
                let c = cur.exponent.as_ref().expect("known bound");
                if prefer_larger {
                    e > c
                } else {
                    e < c
                }
            }
        };
        if better {
            best = Some(b);
        }
    }
    best
}

/// Divergence bounds for `Div^m`, `m = 1..=n-2`, obtained from the filling
/// bounds on `F^{m+1}`: a lower bound `l^e` gives `Div^m >= r^{e m}`, and an
/// upper bound `l^δ` with `δ < (m+1)/m` gives `Div^m <= r^{δ m}`.
pub fn predict_divergence(bundle: &HypothesisBundle) -> Vec<GrowthBound> {
    let n = bundle.algebra.dim();
    let top = n.saturating_sub(2);
    let filling = filling_bounds(bundle);
    let mut out = Vec::new();
    for m in 1..=top {
        let here: Vec<&GrowthBound> = filling.iter().filter(|b| b.m == m + 1).collect();
        let euclid = ratio(m + 1, m);
        let lower = best(here.iter().copied().filter(|b| b.relation.is_lower()), true);
        let upper = best(
            here.iter().copied().filter(|b| {
                b.relation.is_upper() && b.exponent.as_ref().is_some_and(|e| *e < euclid)
            }),
            false,
        );
        let mf = rational::int(m as i64);
        let exp = |b: &GrowthBound| b.exponent.as_ref().expect("known") * &mf;
        match (lower, upper) {
            (Some(lo), Some(up)) if lo.exponent == up.exponent => {
                let bound = if lo.source == "Thm2" && up.source == "Thm2" {
                    GrowthBound::new(Target::Divergence, m, exp(lo), Relation::Equivalent, "Thm6")
                        .with_note(THM6_NOTE)
                } else {
                    GrowthBound::new(
                        Target::Divergence,
                        m,
                        exp(lo),
                        Relation::Equivalent,
                        format!("Divlow[{}]+Divup[{}]", lo.source, up.source),
                    )
                };
                out.push(bound);
            }
            (lo, up) => {
                if let Some(lo) = lo {
                    let source = if lo.source == "Thm1" {
                        "Thm5".to_string()
                    } else {
                        format!("Divlow[{}]", lo.source)
                    };
                    let mut b =
                        GrowthBound::new(Target::Divergence, m, exp(lo), Relation::AtLeast, source);
                    if lo.source == "Thm2" {
                        b = b.with_note(THM6_NOTE);
                    }
                    out.push(b);
                }
                if let Some(up) = up {
                    let mut b = GrowthBound::new(
                        Target::Divergence,
                        m,
                        exp(up),
                        Relation::AtMost,
                        format!("Divup[{}]", up.source),
                    );
                    if up.source == "Thm2" {
                        b = b.with_note(THM6_NOTE);
                    }
                    out.push(b);
                }
            }
        }
    }
    with_unknowns(out, Target::Divergence, 1..=top)
}

/// All bounds for one dimension of one function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageRow {
    pub target: Target,
    pub m: usize,
    pub bounds: Vec<GrowthBound>,
    /// Set when the bounds in this row contradict each other.
    pub conflict: bool,
}

impl CoverageRow {
    pub fn is_unknown(&self) -> bool {
        self.bounds.iter().all(|b| b.relation == Relation::Unknown)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageTable {
    pub rows: Vec<CoverageRow>,
    pub notes: Vec<String>,
}

fn conflicting(bounds: &[GrowthBound]) -> bool {
    let known: Vec<&GrowthBound> = bounds.iter().filter(|b| b.exponent.is_some()).collect();
    for lo in known.iter().filter(|b| b.relation.is_lower()) {
        let e = lo.exponent.as_ref().expect("known");
        for up in known.iter().filter(|b| b.relation.is_upper()) {
            let u = up.exponent.as_ref().expect("known");
            if e > u || (lo.relation == Relation::StrictlyAbove && u <= e) {
                return true;
            }
        }
    }
    false
}

fn rows_for(bounds: Vec<GrowthBound>, target: Target) -> Vec<CoverageRow> {
    let mut rows: Vec<CoverageRow> = Vec::new();
    for b in bounds {
        match rows.last_mut() {
            Some(row) if row.m == b.m => row.bounds.push(b),
            _ => rows.push(CoverageRow {
                target,
                m: b.m,
                bounds: vec![b],
                conflict: false,
            }),
        }
    }
    for row in &mut rows {
        row.conflict = conflicting(&row.bounds);
    }
    rows
}

pub fn coverage_table(bundle: &HypothesisBundle) -> CoverageTable {
    let mut rows = rows_for(predict_filling(bundle), Target::Filling);
    rows.extend(rows_for(predict_divergence(bundle), Target::Divergence));
    let mut notes = vec![format!(
        "dim S = {}, regular = {}, lattice = {}, D = {}, nilpotency degree = {}",
        bundle.subspace.dim(),
        bundle.regular,
        bundle.lattice.tag(),
        bundle.algebra.hausdorff_dimension(),
        bundle.algebra.depth()
    )];
    if !bundle.regular {
        notes.push("S is not regular: bounds that need a regular subspace are omitted".into());
    }
    if !bundle.lattice.available() {
        notes.push("no scalable lattice: upper bounds and equivalences are omitted".into());
    }
    if bundle.max_isotropic_dim.is_some()
        && rows
            .iter()
            .any(|r| r.bounds.iter().any(|b| b.source == "Thm4"))
    {
        notes.push(format!("Thm4: {THM4_NOTE}"));
    }
    for b in bundle.literature.iter().filter_map(|b| b.note.as_ref()) {
        if !notes.contains(b) {
            notes.push(b.clone());
        }
    }
    CoverageTable { rows, notes }
}

impl CoverageTable {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            for (i, b) in row.bounds.iter().enumerate() {
                let head = if i == 0 {
                    format!("{}^{}", row.target.tag(), row.m)
                } else {
                    String::new()
                };
                let body = match &b.exponent {
                    Some(e) => format!(
                        "{:<14} {:<8} {}",
                        b.relation.tag(),
                        rational::format(e),
                        b.source
                    ),
                    None => "unknown".to_string(),
                };
                let flag = if row.conflict && i == 0 {
                    "  CONFLICT"
                } else {
                    ""
                };
                out.push_str(&format!("{head:<7} {body}{flag}\n"));
            }
        }
        for note in &self.notes {
            out.push_str(&format!("note: {note}\n"));
        }
        out
    }
}

/// Exponent `m / (m - 1)` of Euclidean filling in dimension `m`.
pub fn euclidean_exponent(m: usize) -> Rational {
    if m <= 1 {
        Rational::one()
    } else {
        ratio(m, m - 1)
    }
}
