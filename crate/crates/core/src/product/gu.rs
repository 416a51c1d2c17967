//! Certification that functors `U -> G` and their natural transformations
//! form a categorical group under pointwise operations.
//!
//! Functors and transformations are enumerated and indexed once; products
//! and composites are computed with the genuine operations and cached as
//! index tables, so the quadruple-level laws reduce to table lookups.

use std::collections::HashMap;

use super::functor::{all_maps, FunctorSpace, FunctorUG, NatTransf};
use crate::algebra::Element;
use crate::base::FiniteBase;
use crate::error::{Error, Result};
use crate::exec::{Checker, Factor};
use crate::report::LawReport;

const TABLE_LIMIT: usize = 1 << 20;
const INDEX_LIMIT: u128 = 1 << 26;

/// Whether `nf` functors with `nh` component tables are small enough to index.
pub fn index_fits(nf: usize, nh: usize) -> bool {
    let (nf, nh) = (nf as u128, nh as u128);
    nf * nf <= INDEX_LIMIT && nf * nh * nh <= INDEX_LIMIT
}

struct Index<'s, 'a, B> {
    sp: &'s FunctorSpace<'a, B>,
    functors: &'s [FunctorUG],
    fkey: HashMap<Vec<u32>, usize>,
    comps: Vec<Vec<Element>>,
    nh: usize,
    ntgt: Vec<Option<usize>>,
    fprod: Vec<Option<usize>>,
    nprod: Option<Vec<Option<usize>>>,
    vtab: Vec<Option<usize>>,
}

impl<'s, 'a, B: FiniteBase> Index<'s, 'a, B> {
    fn new(sp: &'s FunctorSpace<'a, B>, functors: &'s [FunctorUG], checker: &Checker) -> Result<Self> {
        let nh = sp.cm.h.order().map(|n| (n as f64).powi(sp.object_count() as i32));
        if !nh.is_some_and(|nh| nh < INDEX_LIMIT as f64 && index_fits(functors.len(), nh as usize)) {
            return Err(Error::Input(format!(
                "{} functors on {} objects are too many to index",
                functors.len(),
                sp.object_count()
            )));
        }
        let comps = all_maps(&sp.cm.h, sp.object_count())?;
        if !sp.cm.g.is_finite() {
            return Err(Error::Input(format!("{} is not finite", sp.cm.g.name())));
        }
        let mut idx = Index {
            sp,
            functors,
            fkey: HashMap::new(),
            nh: comps.len(),
            comps,
            ntgt: Vec::new(),
            fprod: Vec::new(),
            nprod: None,
            vtab: Vec::new(),
        };
        for (i, f) in functors.iter().enumerate() {
            let key = idx.functor_key(f).expect("enumerated functors have finite values");
            idx.fkey.insert(key, i);
        }
        let nf = functors.len();
        let nn = idx.nats();
        idx.ntgt = checker.map_range(nn, |k| idx.find_functor(&idx.nat(k).target));
        idx.fprod = checker.map_range(nf * nf, |p| {
            idx.find_functor(&sp.product(&functors[p / nf], &functors[p % nf]))
        });
        idx.vtab = checker.map_range(nn * idx.nh, |p| {
            let (k1, c2) = (p / idx.nh, p % idx.nh);
            let k2 = idx.ntgt[k1]? * idx.nh + c2;
            idx.find_nat(&sp.nat_vertical(&idx.nat(k2), &idx.nat(k1)).ok()?)
        });
        if nn * nn <= TABLE_LIMIT {
            let table = checker.map_range(nn * nn, |p| idx.compute_prod(p / nn, p % nn));
            idx.nprod = Some(table);
        }
        Ok(idx)
    }

    fn nats(&self) -> usize {
        self.functors.len() * self.nh
    }

    fn functor_key(&self, f: &FunctorUG) -> Option<Vec<u32>> {
        let cm = self.sp.cm;
        f.g.iter()
            .map(|x| cm.g.index_of(x))
            .chain(f.h.iter().map(|x| cm.h.index_of(x)))
            .map(|i| i.map(|i| i as u32))
            .collect()
    }

    fn find_functor(&self, f: &FunctorUG) -> Option<usize> {
        self.fkey.get(&self.functor_key(f)?).copied()
    }

    fn comp_key(&self, ht: &[Element]) -> Option<usize> {
        let h = &self.sp.cm.h;
        let n = h.order()?;
        ht.iter().try_fold(0usize, |acc, x| Some(acc * n + h.index_of(x)?))
    }

    fn nat(&self, k: usize) -> NatTransf {
        self.sp
            .nat(&self.functors[k / self.nh], self.comps[k % self.nh].clone())
            .expect("component count matches")
    }

    fn find_nat(&self, t: &NatTransf) -> Option<usize> {
        Some(self.find_functor(&t.source)? * self.nh + self.comp_key(&t.ht)?)
    }

    fn compute_prod(&self, k: usize, l: usize) -> Option<usize> {
        self.find_nat(&self.sp.nat_product(&self.nat(k), &self.nat(l)))
    }

    fn prod(&self, k: usize, l: usize) -> Option<usize> {
        match &self.nprod {
            Some(t) => t[k * self.nats() + l],
            None => self.compute_prod(k, l),
        }
    }

    fn src(&self, k: usize) -> usize {
        k / self.nh
    }

    /// `k2 o k1`, or `None` when they do not compose or leave the index.
    fn vert(&self, k2: usize, k1: usize) -> Option<usize> {
        if self.ntgt[k1]? != self.src(k2) {
            return None;
        }
        self.vtab[k1 * self.nh + k2 % self.nh]
    }

    fn after(&self, k1: usize, c2: usize) -> Option<usize> {
        Some(self.ntgt[k1]? * self.nh + c2)
    }

    fn ident(&self, f: usize) -> usize {
        let e = vec![self.sp.cm.h.identity(); self.sp.object_count()];
        f * self.nh + self.comp_key(&e).expect("identity is indexed")
    }

    fn fmt(&self, k: usize) -> String {
        self.sp.format_nat(&self.nat(k))
    }
}

/// Object-group laws, morphism-group laws, homomorphism properties of
/// source, target and identity assignment, associativity and units of
/// vertical composition, and the exchange law, for the categorical group of
/// functors `U -> G`. `functors` must be every functor (closed under the
/// pointwise operations); `H` and `G` must be finite.
pub fn verify_gu_categorical_group<B: FiniteBase>(
    sp: &FunctorSpace<'_, B>,
    functors: &[FunctorUG],
    checker: &Checker,
) -> Result<LawReport> {
    let idx = Index::new(sp, functors, checker)?;
    let nf = functors.len();
    let nn = idx.nats();
    let nh = idx.nh;
    let ff = |i: usize| sp.format_functor(&functors[i]);
    let mut report = LawReport::new("prop34");

    report.push(checker.each("gu.functor-invariants", "Prop 3.1", functors, |f| {
        sp.check(f).err().map(|e| format!("{}: {e}", sp.format_functor(f)))
    }));

    report.push(checker.law(
        "gu.object-closure",
        "Prop 3.2",
        &[Factor::Range(nf), Factor::Range(nf)],
        |d| {
            let (i, j) = (d.index(0), d.index(1));
            let p = sp.product(&functors[i], &functors[j]);
            let inv = sp.inverse(&functors[i]);
            let err = sp.check(&p).err().or_else(|| sp.check(&inv).err());
            let missing = idx.fprod[i * nf + j].is_none() || idx.find_functor(&inv).is_none();
            match (err, missing) {
                (Some(e), _) => Some(format!("F2={}, F1={}: {e}", ff(i), ff(j))),
                (None, true) => Some(format!("F2={}, F1={}: result is not a listed functor", ff(i), ff(j))),
                _ => None,
            }
        },
    ));

    report.push(checker.law(
        "gu.object-associativity",
        "Prop 3.2",
        &[Factor::Range(nf), Factor::Range(nf), Factor::Range(nf)],
        |d| {
            let (a, b, c) = (d.index(0), d.index(1), d.index(2));
            let p = |x: usize, y: usize| idx.fprod[x * nf + y];
            let lhs = p(a, b).and_then(|ab| p(ab, c));
            let rhs = p(b, c).and_then(|bc| p(a, bc));
            (lhs.is_none() || lhs != rhs).then(|| format!("{} | {} | {}", ff(a), ff(b), ff(c)))
        },
    ));

    let unit = idx.find_functor(&sp.unit());
    report.push(
        checker.law("gu.object-unit-inverse", "Prop 3.2", &[Factor::Range(nf)], |d| {
            let i = d.index(0);
            let Some(u) = unit else {
                return Some("the constant identity functor is not listed".into());
            };
            let inv = idx.find_functor(&sp.inverse(&functors[i]));
            let ok = idx.fprod[u * nf + i] == Some(i)
                && idx.fprod[i * nf + u] == Some(i)
                && inv.is_some_and(|j| idx.fprod[i * nf + j] == Some(u) && idx.fprod[j * nf + i] == Some(u));
            (!ok).then(|| ff(i))
        }),
    );

    report.push(checker.law("gu.nat-invariants", "Prop 3.3", &[Factor::Range(nn)], |d| {
        let k = d.index(0);
        let t = idx.nat(k);
        match (sp.check_nat(&t), idx.ntgt[k]) {
            (Err(e), _) => Some(format!("{}: {e}", idx.fmt(k))),
            (Ok(()), None) => Some(format!("{}: target functor is not listed", idx.fmt(k))),
            _ => None,
        }
    }));

    report.push(checker.law(
        "gu.morphism-closure",
        "Prop 3.4",
        &[Factor::Range(nn), Factor::Range(nn)],
        |d| {
            let (k, l) = (d.index(0), d.index(1));
            let p = sp.nat_product(&idx.nat(k), &idx.nat(l));
            match (sp.check_nat(&p), idx.prod(k, l)) {
                (Err(e), _) => Some(format!("T'={}, T={}: {e}", idx.fmt(k), idx.fmt(l))),
                (Ok(()), None) => Some(format!("T'={}, T={}: product is not listed", idx.fmt(k), idx.fmt(l))),
                _ => None,
            }
        },
    ));

    report.push(checker.law(
        "gu.morphism-associativity",
        "Prop 3.4",
        &[Factor::Range(nn), Factor::Range(nn), Factor::Range(nn)],
        |d| {
            let (a, b, c) = (d.index(0), d.index(1), d.index(2));
            let lhs = idx.prod(a, b).and_then(|ab| idx.prod(ab, c));
            let rhs = idx.prod(b, c).and_then(|bc| idx.prod(a, bc));
            (lhs.is_none() || lhs != rhs).then(|| format!("{} | {} | {}", idx.fmt(a), idx.fmt(b), idx.fmt(c)))
        },
    ));

    report.push(
        checker.law("gu.morphism-unit-inverse", "Prop 3.4", &[Factor::Range(nn)], |d| {
            let k = d.index(0);
            let u = idx.ident(unit?);
            let inv = idx.find_nat(&sp.nat_inverse(&idx.nat(k)));
            let ok = idx.prod(u, k) == Some(k)
                && idx.prod(k, u) == Some(k)
                && inv.is_some_and(|j| idx.prod(k, j) == Some(u) && idx.prod(j, k) == Some(u));
            (!ok).then(|| idx.fmt(k))
        }),
    );

    report.push(checker.law(
        "gu.source-target-hom",
        "Prop 3.4",
        &[Factor::Range(nn), Factor::Range(nn)],
        |d| {
            let (k, l) = (d.index(0), d.index(1));
            let Some(p) = idx.prod(k, l) else {
                return Some(format!("T'={}, T={}: product is not listed", idx.fmt(k), idx.fmt(l)));
            };
            let s_ok = Some(idx.src(p)) == idx.fprod[idx.src(k) * nf + idx.src(l)];
            let t_ok = match (idx.ntgt[p], idx.ntgt[k], idx.ntgt[l]) {
                (Some(tp), Some(tk), Some(tl)) => Some(tp) == idx.fprod[tk * nf + tl],
                _ => false,
            };
            (!(s_ok && t_ok)).then(|| format!("T'={}, T={}", idx.fmt(k), idx.fmt(l)))
        },
    ));

    report.push(checker.law(
        "gu.identity-assignment-hom",
        "Prop 3.4",
        &[Factor::Range(nf), Factor::Range(nf)],
        |d| {
            let (i, j) = (d.index(0), d.index(1));
            let ok =
                idx.fprod[i * nf + j].is_some_and(|ij| idx.prod(idx.ident(i), idx.ident(j)) == Some(idx.ident(ij)));
            (!ok).then(|| format!("F'={}, F={}", ff(i), ff(j)))
        },
    ));

    report.push(checker.law(
        "gu.compose-closure",
        "Eq 3.15",
        &[Factor::Range(nn), Factor::Range(nh)],
        |d| {
            let (k1, c2) = (d.index(0), d.index(1));
            let k2 = idx.after(k1, c2)?;
            match sp.nat_vertical(&idx.nat(k2), &idx.nat(k1)) {
                Ok(t) => sp
                    .check_nat(&t)
                    .err()
                    .or_else(|| idx.vert(k2, k1).is_none().then(|| "composite is not listed".into()))
                    .map(|e| format!("T2={}, T1={}: {e}", idx.fmt(k2), idx.fmt(k1))),
                Err(e) => Some(e.to_string()),
            }
        },
    ));

    report.push(checker.law(
        "gu.compose-associativity",
        "Eq 3.15",
        &[Factor::Range(nn), Factor::Range(nh), Factor::Range(nh)],
        |d| {
            let k1 = d.index(0);
            let k2 = idx.after(k1, d.index(1))?;
            let k3 = idx.after(k2, d.index(2))?;
            let lhs = idx.vert(k2, k1).and_then(|x| idx.vert(k3, x));
            let rhs = idx.vert(k3, k2).and_then(|x| idx.vert(x, k1));
            (lhs.is_none() || lhs != rhs).then(|| format!("{} | {} | {}", idx.fmt(k3), idx.fmt(k2), idx.fmt(k1)))
        },
    ));

    report.push(checker.law("gu.compose-units", "Eq 3.15", &[Factor::Range(nn)], |d| {
        let k = d.index(0);
        let left = idx.ntgt[k].and_then(|t| idx.vert(idx.ident(t), k));
        let right = idx.vert(k, idx.ident(idx.src(k)));
        (left != Some(k) || right != Some(k)).then(|| idx.fmt(k))
    }));

    report.push(checker.law(
        "gu.exchange-law",
        "Eq 3.17",
        &[
            Factor::Range(nn),
            Factor::Range(nh),
            Factor::Range(nn),
            Factor::Range(nh),
        ],
        |d| {
            let (t1, t1p) = (d.index(0), d.index(2));
            let (Some(t2), Some(t2p)) = (idx.after(t1, d.index(1)), idx.after(t1p, d.index(3))) else {
                return Some("target functor is not listed".into());
            };
            let lhs = match (idx.prod(t2p, t2), idx.prod(t1p, t1)) {
                (Some(a), Some(b)) => idx.vert(a, b),
                _ => None,
            };
            let rhs = match (idx.vert(t2p, t1p), idx.vert(t2, t1)) {
                (Some(a), Some(b)) => idx.prod(a, b),
                _ => None,
            };
            (lhs.is_none() || lhs != rhs).then(|| {
                format!(
                    "T1={}, T2={}, T1'={}, T2'={}",
                    idx.fmt(t1),
                    idx.fmt(t2),
                    idx.fmt(t1p),
                    idx.fmt(t2p)
                )
            })
        },
    ));

    Ok(report.sorted())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::lookup;
    use crate::base::QuiverCategory;
    use crate::report::Mode;

    #[test]
    fn single_object_base_reproduces_the_two_group() {
        let q = QuiverCategory::new(&["a"], &[], 0).unwrap();
        let cm = lookup("s3-conj").unwrap();
        let sp = FunctorSpace::new(&q, &cm).unwrap();
        let fs = sp.all_functors().unwrap();
        assert_eq!(fs.len(), 6);
        let r = verify_gu_categorical_group(&sp, &fs, &Checker::new(0, 1_000_000)).unwrap();
        assert!(r.passed(), "{}", r.to_table());
        assert_eq!(r.record("gu.morphism-associativity").unwrap().checked, 36 * 36 * 36);
    }

    #[test]
    fn z4_on_a_chain() {
        let q = QuiverCategory::chain(3, 2);
        let cm = lookup("z4-conj").unwrap();
        let sp = FunctorSpace::new(&q, &cm).unwrap();
        let fs = sp.all_functors().unwrap();
        assert_eq!(fs.len(), 64);
        let r = verify_gu_categorical_group(&sp, &fs, &Checker::new(0, 20_000)).unwrap();
        assert!(r.passed(), "{}", r.to_table());
    }

    #[test]
    fn broken_module_fails_the_exchange_law() {
        let q = QuiverCategory::new(&["a", "b"], &[("f", "a", "b")], 1).unwrap();
        let cm = lookup("z2-s3-broken").unwrap();
        let sp = FunctorSpace::new(&q, &cm).unwrap();
        let fs = sp.all_functors().unwrap();
        let r = verify_gu_categorical_group(&sp, &fs, &Checker::new(3, 20_000)).unwrap();
        let ex = r.record("gu.exchange-law").unwrap();
        assert_eq!(ex.mode, Mode::Sampled);
        assert!(!ex.passed());
        assert!(ex.witness.as_deref().unwrap().contains("T1="));
    }
}
