use std::collections::BTreeMap;

use rand::Rng;

use super::overlap::{format_tag, Cover};
use crate::algebra::{CrossedModule, Element};
use crate::base::QuiverCategory;
use crate::error::{Error, Result};
use crate::exec::Checker;
use crate::report::LawReport;

/// The functions `h_ij` on double overlaps and `h_ijk` on triple overlaps.
#[derive(Clone, Debug)]
pub struct CocycleData {
    cover: Cover,
    unit: Element,
    values: BTreeMap<Vec<usize>, BTreeMap<usize, Element>>,
}

impl CocycleData {
    fn empty(cm: &CrossedModule, cover: &Cover) -> Self {
        CocycleData {
            cover: cover.clone(),
            unit: cm.h.identity(),
            values: BTreeMap::new(),
        }
    }

    fn tags(n: usize, len: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|t| {
                    (0..n).map(move |i| {
                        let mut t = t.clone();
                        t.push(i);
                        t
                    })
                })
                .collect();
        }
        out
    }

    /// `h_ijk := h_ij h_jk h_ik^-1` from arbitrary `h_ij`.
    pub fn constructive(cm: &CrossedModule, cover: &Cover, hij: impl Fn(usize, usize, usize) -> Element) -> Self {
        let mut d = Self::empty(cm, cover);
        for t in Self::tags(cover.len(), 2) {
            let vals = cover
                .intersection(&t)
                .into_iter()
                .map(|a| (a, hij(t[0], t[1], a)))
                .collect();
            d.values.insert(t, vals);
        }
        let h = &cm.h;
        for t in Self::tags(cover.len(), 3) {
            let (i, j, k) = (t[0], t[1], t[2]);
            let vals = cover
                .intersection(&t)
                .into_iter()
                .map(|a| {
                    let v = h.multiply(
                        &h.multiply(&d.values[&vec![i, j]][&a], &d.values[&vec![j, k]][&a]),
                        &h.inverse(&d.values[&vec![i, k]][&a]),
                    );
                    (a, v)
                })
                .collect();
            d.values.insert(t, vals);
        }
        d
    }

    /// Random `h_ij` completed constructively.
    pub fn random<R: Rng>(cm: &CrossedModule, cover: &Cover, rng: &mut R) -> Self {
        let mut table = BTreeMap::new();
        for t in Self::tags(cover.len(), 2) {
            for a in cover.intersection(&t) {
                table.insert((t[0], t[1], a), cm.h.sample(rng));
            }
        }
        Self::constructive(cm, cover, |i, j, a| table[&(i, j, a)])
    }

    /// `h_ij = lambda_i lambda_j^-1` and `h_ijk = e`.
    pub fn coboundary(cm: &CrossedModule, cover: &Cover, lambda: impl Fn(usize, usize) -> Element) -> Self {
        let h = &cm.h;
        let mut d = Self::constructive(cm, cover, |i, j, a| {
            h.multiply(&lambda(i, a), &h.inverse(&lambda(j, a)))
        });
        for t in Self::tags(cover.len(), 3) {
            for v in d.values.get_mut(&t).into_iter().flat_map(|m| m.values_mut()) {
                *v = h.identity();
            }
        }
        d
    }

    /// Explicit tables keyed by index tuple and object; every double and
    /// triple overlap point must be present.
    pub fn from_entries(
        cm: &CrossedModule,
        base: &QuiverCategory,
        cover: &Cover,
        entries: impl IntoIterator<Item = (Vec<usize>, usize, Element)>,
    ) -> Result<Self> {
        let mut d = Self::empty(cm, cover);
        for (tag, a, v) in entries {
            if tag.len() < 2 || tag.len() > 3 {
                return Err(Error::Input(format!(
                    "cocycle entry with index tuple {}",
                    format_tag(&tag)
                )));
            }
            cover.check_tag(&tag)?;
            if !cm.h.contains(&v) {
                return Err(Error::Structural(format!(
                    "cocycle value {} is not in H",
                    cm.h.format(&v)
                )));
            }
            d.set(&tag, a, v)?;
        }
        for len in [2, 3] {
            for t in Self::tags(cover.len(), len) {
                for a in cover.intersection(&t) {
                    if d.values.get(&t).and_then(|m| m.get(&a)).is_none() {
                        return Err(Error::Input(format!(
                            "missing cocycle value h_{} at {}",
                            format_tag(&t),
                            base.object_names()[a]
                        )));
                    }
                }
            }
        }
        Ok(d)
    }

    pub fn cover(&self) -> &Cover {
        &self.cover
    }

    /// `h_tag(a)`; a single index stands for the identity transition.
    pub fn h(&self, tag: &[usize], a: usize) -> Result<Element> {
        if tag.len() == 1 {
            return Ok(self.unit);
        }
        self.values
            .get(tag)
            .and_then(|m| m.get(&a))
            .copied()
            .ok_or_else(|| Error::Input(format!("h_{} is not defined at object {a}", format_tag(tag))))
    }

    /// Overwrites one value, e.g. to perturb a cocycle.
    pub fn set(&mut self, tag: &[usize], a: usize, v: Element) -> Result<()> {
        if !self.cover.intersection(tag).contains(&a) {
            return Err(Error::Input(format!(
                "object {a} is not in the overlap {}",
                format_tag(tag)
            )));
        }
        self.values.entry(tag.to_vec()).or_default().insert(a, v);
        Ok(())
    }

    /// All triple-overlap points `(i, j, k, a)`.
    pub fn triple_points(&self) -> Vec<(usize, usize, usize, usize)> {
        Self::tags(self.cover.len(), 3)
            .into_iter()
            .flat_map(|t| {
                self.cover
                    .intersection(&t)
                    .into_iter()
                    .map(move |a| (t[0], t[1], t[2], a))
            })
            .collect()
    }

    /// `Err` with a witness when `h_ijk h_ik != h_ij h_jk` at `a`.
    pub fn condition_at(
        &self,
        cm: &CrossedModule,
        base: &QuiverCategory,
        (i, j, k, a): (usize, usize, usize, usize),
    ) -> std::result::Result<(), String> {
        let h = &cm.h;
        let get = |t: &[usize]| self.h(t, a).map_err(|e| e.to_string());
        let lhs = h.multiply(&get(&[i, j, k])?, &get(&[i, k])?);
        let rhs = h.multiply(&get(&[i, j])?, &get(&[j, k])?);
        if h.eq(&lhs, &rhs) {
            Ok(())
        } else {
            Err(format!(
                "i={i}, j={j}, k={k}, a={}: h_ijk h_ik={} but h_ij h_jk={}",
                base.object_names()[a],
                h.format(&lhs),
                h.format(&rhs)
            ))
        }
    }
}

/// Checks `h_ijk h_ik = h_ij h_jk` at every triple-overlap point.
pub fn verify_cocycle_condition(
    cm: &CrossedModule,
    base: &QuiverCategory,
    data: &CocycleData,
    checker: &Checker,
) -> LawReport {
    let points = data.triple_points();
    let mut report = LawReport::new("cocycle");
    report.push(checker.each("cocycle.condition", "Eq 5.26", &points, |&p| {
        data.condition_at(cm, base, p).err()
    }));
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{lookup, Perm};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup() -> (QuiverCategory, Cover) {
        let q = QuiverCategory::chain(4, 3);
        let c = Cover::new(&q, vec![vec![0, 1, 2], vec![1, 2, 3], vec![0, 2, 3]]).unwrap();
        (q, c)
    }

    #[test]
    fn constructive_cocycle_passes() {
        let (q, c) = setup();
        let cm = lookup("s3-conj").unwrap();
        let d = CocycleData::random(&cm, &c, &mut ChaCha8Rng::seed_from_u64(3));
        let r = verify_cocycle_condition(&cm, &q, &d, &Checker::new(0, 1000));
        assert!(r.passed(), "{}", r.to_table());
        assert_eq!(r.records[0].checked as usize, d.triple_points().len());
    }

    #[test]
    fn additive_abelian_cocycle_passes() {
        let (q, c) = setup();
        let cm = lookup("z4-abelian").unwrap();
        let d = CocycleData::coboundary(&cm, &c, |i, a| Element::Cyclic(((i * 3 + a) % 4) as u32));
        for (i, j, k, a) in d.triple_points() {
            assert_eq!(d.h(&[i, j, k], a).unwrap(), Element::Cyclic(0));
            let sum = |t: &[usize]| match d.h(t, a).unwrap() {
                Element::Cyclic(x) => x,
                _ => unreachable!(),
            };
            assert_eq!(sum(&[i, k]), (sum(&[i, j]) + sum(&[j, k])) % 4);
        }
        assert!(verify_cocycle_condition(&cm, &q, &d, &Checker::new(0, 10)).passed());
    }

    #[test]
    fn perturbation_is_localized() {
        let (q, c) = setup();
        let cm = lookup("s3-conj").unwrap();
        let mut d = CocycleData::random(&cm, &c, &mut ChaCha8Rng::seed_from_u64(5));
        let old = d.h(&[0, 1, 2], 2).unwrap();
        let bumped = cm.h.multiply(&old, &Element::Perm(Perm::parse(3, "(12)").unwrap()));
        d.set(&[0, 1, 2], 2, bumped).unwrap();
        let r = verify_cocycle_condition(&cm, &q, &d, &Checker::new(0, 10));
        let rec = &r.records[0];
        assert_eq!(rec.failures, 1);
        assert!(rec.witness.as_deref().unwrap().starts_with("i=0, j=1, k=2, a=o2"));
    }

    #[test]
    fn tables_must_be_complete() {
        let (q, c) = setup();
        let cm = lookup("z4-abelian").unwrap();
        let err = CocycleData::from_entries(&cm, &q, &c, vec![(vec![0, 1], 1, Element::Cyclic(1))]).unwrap_err();
        assert!(err.to_string().contains("missing"), "{err}");
        assert!(CocycleData::from_entries(&cm, &q, &c, vec![(vec![0, 1], 3, Element::Cyclic(1))]).is_err());
    }
}
