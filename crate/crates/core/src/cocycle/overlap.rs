use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::base::{Base, FiniteBase, QuiverCategory, Word};
use crate::error::{Error, Result};

/// A finite cover of the objects of a quiver category by index sets.
#[derive(Clone, Debug, PartialEq)]
pub struct Cover {
    sets: Vec<Vec<usize>>,
    objects: usize,
}

impl Cover {
    pub fn new(base: &QuiverCategory, sets: Vec<Vec<usize>>) -> Result<Self> {
        let n = base.object_count();
        let mut covered = vec![false; n];
        let mut clean = Vec::with_capacity(sets.len());
        for (i, mut s) in sets.into_iter().enumerate() {
            s.sort_unstable();
            s.dedup();
            if let Some(bad) = s.iter().find(|&&x| x >= n) {
                return Err(Error::Input(format!(
                    "cover set {i} names object index {bad} out of range"
                )));
            }
            for &x in &s {
                covered[x] = true;
            }
            clean.push(s);
        }
        if let Some(x) = covered.iter().position(|c| !c) {
            return Err(Error::Input(format!(
                "cover does not contain object {}",
                base.object_names()[x]
            )));
        }
        Ok(Cover {
            sets: clean,
            objects: n,
        })
    }

    pub fn from_names(base: &QuiverCategory, sets: &[Vec<String>]) -> Result<Self> {
        let sets = sets
            .iter()
            .map(|s| s.iter().map(|x| base.object(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Cover::new(base, sets)
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn set(&self, i: usize) -> &[usize] {
        &self.sets[i]
    }

    pub fn contains(&self, i: usize, x: usize) -> bool {
        self.sets[i].binary_search(&x).is_ok()
    }

    /// Objects lying in every `U_i` for `i` in `tag`.
    pub fn intersection(&self, tag: &[usize]) -> Vec<usize> {
        (0..self.objects)
            .filter(|&x| tag.iter().all(|&i| self.contains(i, x)))
            .collect()
    }

    pub fn check_tag(&self, tag: &[usize]) -> Result<()> {
        if tag.is_empty() || tag.len() > 3 {
            return Err(Error::Input(format!(
                "index tuple of length {} (expected 1 to 3)",
                tag.len()
            )));
        }
        match tag.iter().find(|&&i| i >= self.sets.len()) {
            Some(i) => Err(Error::unknown("cover index", i.to_string())),
            None => Ok(()),
        }
    }
}

pub fn format_tag(tag: &[usize]) -> String {
    let parts: Vec<String> = tag.iter().map(|i| i.to_string()).collect();
    if tag.iter().all(|&i| i < 10) {
        parts.concat()
    } else {
        parts.join(",")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Lower,
    Upper,
}

/// A point of the base tagged with the side (lower or upper index tuple) it
/// belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OObj {
    pub side: Side,
    pub point: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum OMor {
    Id(OObj),
    /// A base morphism from the lower intersection to the upper one.
    Cross(Word),
}

/// The category `U_{ik..}^{jl..}`: tagged points of the lower and upper
/// intersections, the base morphisms running from the lower intersection to
/// the upper one, and identities.
pub struct OverlapCategory<'a> {
    base: &'a QuiverCategory,
    lower: Vec<usize>,
    upper: Vec<usize>,
    objects: Vec<OObj>,
    morphisms: Vec<OMor>,
    obj_idx: HashMap<OObj, usize>,
    mor_idx: HashMap<OMor, usize>,
}

impl<'a> OverlapCategory<'a> {
    pub fn new(base: &'a QuiverCategory, cover: &Cover, lower: &[usize], upper: &[usize]) -> Result<Self> {
        cover.check_tag(lower)?;
        cover.check_tag(upper)?;
        if lower.len() != upper.len() {
            return Err(Error::Input(format!(
                "index tuples {} and {} differ in length",
                format_tag(lower),
                format_tag(upper)
            )));
        }
        let merged = lower == upper;
        let lo = cover.intersection(lower);
        let up = cover.intersection(upper);
        let mut objects: Vec<OObj> = lo
            .iter()
            .map(|&p| OObj {
                side: Side::Lower,
                point: p,
            })
            .collect();
        if !merged {
            objects.extend(up.iter().map(|&p| OObj {
                side: Side::Upper,
                point: p,
            }));
        }
        let mut morphisms: Vec<OMor> = objects.iter().map(|&o| OMor::Id(o)).collect();
        for w in base.morphisms() {
            if merged && w.is_empty() {
                continue;
            }
            if lo.binary_search(&w.source).is_ok() && up.binary_search(&w.target).is_ok() {
                morphisms.push(OMor::Cross(w.clone()));
            }
        }
        let obj_idx = objects.iter().enumerate().map(|(i, &o)| (o, i)).collect();
        let mor_idx = morphisms.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        Ok(OverlapCategory {
            base,
            lower: lower.to_vec(),
            upper: upper.to_vec(),
            objects,
            morphisms,
            obj_idx,
            mor_idx,
        })
    }

    pub fn quiver(&self) -> &'a QuiverCategory {
        self.base
    }

    pub fn lower(&self) -> &[usize] {
        &self.lower
    }

    pub fn upper(&self) -> &[usize] {
        &self.upper
    }

    pub fn is_merged(&self) -> bool {
        self.lower == self.upper
    }

    pub fn tag(&self, side: Side) -> &[usize] {
        match side {
            Side::Lower => &self.lower,
            Side::Upper => &self.upper,
        }
    }

    fn upper_side(&self) -> Side {
        if self.is_merged() {
            Side::Lower
        } else {
            Side::Upper
        }
    }

    /// The object `(tag(side), point)` in canonical form.
    pub fn object_at(&self, side: Side, point: usize) -> Option<usize> {
        let side = if side == Side::Upper { self.upper_side() } else { side };
        self.obj_idx.get(&OObj { side, point }).copied()
    }

    /// The morphism with the given base word running from `side0` to `side1`.
    pub fn morphism_at(&self, side0: Side, side1: Side, w: &Word) -> Option<usize> {
        let s0 = self.objects[self.object_at(side0, w.source)?].side;
        let s1 = self.objects[self.object_at(side1, w.target)?].side;
        if w.is_empty() && s0 == s1 {
            return self
                .mor_idx
                .get(&OMor::Id(OObj {
                    side: s0,
                    point: w.source,
                }))
                .copied();
        }
        if s0 != Side::Lower || s1 != self.upper_side() {
            return None;
        }
        self.mor_idx.get(&OMor::Cross(w.clone())).copied()
    }

    /// The underlying base word of a morphism.
    pub fn word(&self, m: &OMor) -> Word {
        match m {
            OMor::Id(o) => Word::identity(o.point),
            OMor::Cross(w) => w.clone(),
        }
    }

    pub fn cross_count(&self) -> usize {
        self.morphisms.len() - self.objects.len()
    }
}

impl Base for OverlapCategory<'_> {
    type Obj = OObj;
    type Mor = OMor;

    fn source(&self, m: &OMor) -> OObj {
        match m {
            OMor::Id(o) => *o,
            OMor::Cross(w) => OObj {
                side: Side::Lower,
                point: w.source,
            },
        }
    }

    fn target(&self, m: &OMor) -> OObj {
        match m {
            OMor::Id(o) => *o,
            OMor::Cross(w) => OObj {
                side: self.upper_side(),
                point: w.target,
            },
        }
    }

    fn identity(&self, x: &OObj) -> OMor {
        OMor::Id(*x)
    }

    fn compose(&self, m2: &OMor, m1: &OMor) -> Result<OMor> {
        let (t1, s2) = (self.target(m1), self.source(m2));
        if t1 != s2 {
            return Err(Error::undefined(
                "overlap morphisms do not meet",
                self.format_obj(&s2),
                self.format_obj(&t1),
            ));
        }
        match (m2, m1) {
            (OMor::Id(_), m) | (m, OMor::Id(_)) => Ok(m.clone()),
            _ => Err(Error::undefined(
                "overlap morphisms compose only with identities",
                self.format_mor(m2),
                self.format_mor(m1),
            )),
        }
    }

    fn obj_eq(&self, a: &OObj, b: &OObj) -> bool {
        a == b
    }

    fn mor_eq(&self, a: &OMor, b: &OMor) -> bool {
        a == b
    }

    fn format_obj(&self, x: &OObj) -> String {
        format!(
            "({}, {})",
            format_tag(self.tag(x.side)),
            self.base.object_names()[x.point]
        )
    }

    fn format_mor(&self, m: &OMor) -> String {
        match m {
            OMor::Id(o) => format!("id_{}", self.format_obj(o)),
            OMor::Cross(w) => self.base.format_mor(w),
        }
    }
}

impl FiniteBase for OverlapCategory<'_> {
    fn objects(&self) -> &[OObj] {
        &self.objects
    }

    fn morphisms(&self) -> &[OMor] {
        &self.morphisms
    }

    fn obj_index(&self, x: &OObj) -> Option<usize> {
        self.obj_idx.get(x).copied()
    }

    fn mor_index(&self, m: &OMor) -> Option<usize> {
        self.mor_idx.get(m).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn four() -> (QuiverCategory, Vec<Vec<usize>>) {
        (
            QuiverCategory::chain(4, 3),
            vec![vec![0, 1, 2], vec![1, 2, 3], vec![2, 3]],
        )
    }

    #[test]
    fn single_index_recovers_base() {
        let q = QuiverCategory::chain(3, 2);
        let cover = Cover::new(&q, vec![vec![0, 1, 2]]).unwrap();
        let ov = OverlapCategory::new(&q, &cover, &[0], &[0]).unwrap();
        assert_eq!(ov.objects().len(), 3);
        assert_eq!(ov.morphisms().len(), q.morphisms().len());
        let names: Vec<String> = ov.morphisms().iter().map(|m| ov.format_mor(m)).collect();
        assert_eq!(names[..3], ["id_(0, o0)", "id_(0, o1)", "id_(0, o2)"]);
        assert_eq!(names[3..], ["f1", "f2", "f2.f1"]);
    }

    #[test]
    fn object_counts_match_intersections() {
        let (q, sets) = four();
        let cover = Cover::new(&q, sets.clone()).unwrap();
        let ov = OverlapCategory::new(&q, &cover, &[0, 1], &[1, 2]).unwrap();
        let inter = |a: usize, b: usize| sets[a].iter().filter(|x| sets[b].contains(x)).count();
        assert_eq!(ov.objects().len(), inter(0, 1) + inter(1, 2));
        // base words from {1, 2} to {2, 3}: id_2, f2, f3, f3.f2
        assert_eq!(ov.cross_count(), 4);
        let f = ov.morphisms().iter().find(|m| ov.format_mor(m) == "f3.f2").unwrap();
        assert_eq!(ov.format_obj(&ov.source(f)), "(01, o1)");
        assert_eq!(ov.format_obj(&ov.target(f)), "(12, o3)");
    }

    #[test]
    fn disjoint_sets_give_empty_lower_side() {
        let q = QuiverCategory::chain(4, 3);
        let cover = Cover::new(&q, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let ov = OverlapCategory::new(&q, &cover, &[0, 1], &[1, 1]).unwrap();
        assert!(ov.objects().iter().all(|o| o.side == Side::Upper));
        assert_eq!(ov.cross_count(), 0);
    }

    #[test]
    fn only_identity_composites_exist() {
        let (q, sets) = four();
        let cover = Cover::new(&q, sets).unwrap();
        let ov = OverlapCategory::new(&q, &cover, &[1], &[1]).unwrap();
        let f2 = OMor::Cross(q.arrow("f2").unwrap());
        let f3 = OMor::Cross(q.arrow("f3").unwrap());
        assert!(matches!(ov.compose(&f3, &f2), Err(Error::CompositionUndefined { .. })));
        let id = ov.identity(&ov.target(&f2));
        assert_eq!(ov.compose(&id, &f2).unwrap(), f2);
    }

    #[test]
    fn cover_must_cover() {
        let q = QuiverCategory::chain(3, 1);
        assert!(Cover::new(&q, vec![vec![0], vec![1]]).is_err());
        assert!(Cover::new(&q, vec![vec![0, 7]]).is_err());
    }
}
