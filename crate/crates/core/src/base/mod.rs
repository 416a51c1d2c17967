//! Small concrete base categories: free categories on finite quivers and
//! piecewise-linear paths in a Euclidean chart.

pub mod path;
pub mod quiver;

use std::fmt::Debug;

use crate::error::Result;
use crate::exec::{Checker, Factor};
use crate::report::LawReport;

pub use path::{compose_paths, format_point, PathCategory, PathFamilyConfig, Point, SampledPath, PATH_TOL};
pub use quiver::{Arrow, QuiverCategory, Word};

/// A category whose objects and morphisms can be handled by value.
pub trait Base: Sync + Send {
    type Obj: Clone + Debug + Send + Sync;
    type Mor: Clone + Debug + Send + Sync;

    fn source(&self, m: &Self::Mor) -> Self::Obj;
    fn target(&self, m: &Self::Mor) -> Self::Obj;
    fn identity(&self, x: &Self::Obj) -> Self::Mor;
    /// `m2 o m1`.
    fn compose(&self, m2: &Self::Mor, m1: &Self::Mor) -> Result<Self::Mor>;
    fn obj_eq(&self, a: &Self::Obj, b: &Self::Obj) -> bool;
    fn mor_eq(&self, a: &Self::Mor, b: &Self::Mor) -> bool;
    fn format_obj(&self, x: &Self::Obj) -> String;
    fn format_mor(&self, m: &Self::Mor) -> String;

    fn is_identity(&self, m: &Self::Mor) -> bool {
        self.mor_eq(m, &self.identity(&self.source(m)))
    }
}

/// A category with finitely many (enumerated) objects and morphisms.
pub trait FiniteBase: Base {
    fn objects(&self) -> &[Self::Obj];
    fn morphisms(&self) -> &[Self::Mor];
    fn obj_index(&self, x: &Self::Obj) -> Option<usize>;
    fn mor_index(&self, m: &Self::Mor) -> Option<usize>;

    /// Every enumerated morphism, with the composable pairs and triples whose
    /// composites are again enumerated.
    fn family(&self) -> Family<Self::Mor> {
        let mors = self.morphisms().to_vec();
        let mut pairs = Vec::new();
        for (i2, m2) in mors.iter().enumerate() {
            for (i1, m1) in mors.iter().enumerate() {
                if let Ok(c) = self.compose(m2, m1) {
                    if self.mor_index(&c).is_some() {
                        pairs.push((i2, i1));
                    }
                }
            }
        }
        let mut triples = Vec::new();
        for &(i3, i2) in &pairs {
            let Ok(m32) = self.compose(&mors[i3], &mors[i2]) else {
                continue;
            };
            let Some(i32_) = self.mor_index(&m32) else { continue };
            for &(j2, i1) in &pairs {
                if j2 != i2 {
                    continue;
                }
                let ok = self
                    .compose(&mors[i32_], &mors[i1])
                    .ok()
                    .and_then(|c| self.mor_index(&c))
                    .is_some();
                if ok {
                    triples.push((i3, i2, i1));
                }
            }
        }
        Family { mors, pairs, triples }
    }
}

/// A finite list of morphisms plus composable index pairs `(i2, i1)` and
/// triples `(i3, i2, i1)`, used as the domain of law checks.
#[derive(Clone, Debug)]
pub struct Family<M> {
    pub mors: Vec<M>,
    pub pairs: Vec<(usize, usize)>,
    pub triples: Vec<(usize, usize, usize)>,
}

/// Associativity, unit and boundary laws over a family.
pub fn verify_category_laws<B: Base>(base: &B, family: &Family<B::Mor>, checker: &Checker) -> LawReport {
    let mut report = LawReport::new("category-laws");
    let mors = &family.mors;

    report.push(
        checker.law("category.units", "§2.2", &[Factor::Range(mors.len())], |d| {
            let m = &mors[d.index(0)];
            let left = base.compose(&base.identity(&base.target(m)), m);
            let right = base.compose(m, &base.identity(&base.source(m)));
            match (left, right) {
                (Ok(l), Ok(r)) if base.mor_eq(&l, m) && base.mor_eq(&r, m) => None,
                _ => Some(format!("m={}", base.format_mor(m))),
            }
        }),
    );

    report.push(checker.law(
        "category.boundaries",
        "§2.2",
        &[Factor::Range(family.pairs.len())],
        |d| {
            let (i2, i1) = family.pairs[d.index(0)];
            let (m2, m1) = (&mors[i2], &mors[i1]);
            match base.compose(m2, m1) {
                Ok(c)
                    if base.obj_eq(&base.source(&c), &base.source(m1))
                        && base.obj_eq(&base.target(&c), &base.target(m2)) =>
                {
                    None
                }
                Ok(_) => Some(format!(
                    "{} o {}: wrong boundary",
                    base.format_mor(m2),
                    base.format_mor(m1)
                )),
                Err(e) => Some(e.to_string()),
            }
        },
    ));

    report.push(checker.law(
        "category.associativity",
        "§2.2",
        &[Factor::Range(family.triples.len())],
        |d| {
            let (i3, i2, i1) = family.triples[d.index(0)];
            let (m3, m2, m1) = (&mors[i3], &mors[i2], &mors[i1]);
            let lhs = base.compose(m3, m2).and_then(|x| base.compose(&x, m1));
            let rhs = base.compose(m2, m1).and_then(|x| base.compose(m3, &x));
            match (lhs, rhs) {
                (Ok(l), Ok(r)) if base.mor_eq(&l, &r) => None,
                _ => Some(format!(
                    "{} o {} o {}",
                    base.format_mor(m3),
                    base.format_mor(m2),
                    base.format_mor(m1)
                )),
            }
        },
    ));
    report.sorted()
}
