//! Sections of the product bundle, the trivializations they induce, and the
//! correspondence between bundle automorphisms and functors `U -> G`.

use std::collections::HashSet;

use super::bundle::ProductBundle;
use super::functor::{FunctorSpace, FunctorUG};
use crate::algebra::{Element, TwoGroupMorphism};
use crate::base::{Base, FiniteBase};
use crate::bundle::{BundleMorphism, BundleObject};
use crate::error::{Error, Result};
use crate::exec::{Checker, Draw, Factor};
use crate::report::LawReport;

type Obj<B> = BundleObject<<B as Base>::Obj>;
type Mor<B> = BundleMorphism<<B as Base>::Mor>;
type MapFn<'a, T> = Box<dyn Fn(&T) -> T + Sync + Send + 'a>;

/// A map of the product bundle to itself, given on objects and morphisms.
pub struct BundleMap<'a, B: Base> {
    obj: MapFn<'a, Obj<B>>,
    mor: MapFn<'a, Mor<B>>,
}

impl<'a, B: Base + 'a> BundleMap<'a, B> {
    pub fn new(
        obj: impl Fn(&Obj<B>) -> Obj<B> + Sync + Send + 'a,
        mor: impl Fn(&Mor<B>) -> Mor<B> + Sync + Send + 'a,
    ) -> Self {
        BundleMap {
            obj: Box::new(obj),
            mor: Box::new(mor),
        }
    }

    pub fn identity() -> Self {
        Self::new(|x| x.clone(), |m| m.clone())
    }

    pub fn apply_obj(&self, x: &Obj<B>) -> Obj<B> {
        (self.obj)(x)
    }

    pub fn apply_mor(&self, m: &Mor<B>) -> Mor<B> {
        (self.mor)(m)
    }

    /// `self o first`.
    pub fn after(self, first: BundleMap<'a, B>) -> BundleMap<'a, B> {
        let (o2, m2) = (self.obj, self.mor);
        let (o1, m1) = (first.obj, first.mor);
        BundleMap {
            obj: Box::new(move |x| o2(&o1(x))),
            mor: Box::new(move |m| m2(&m1(m))),
        }
    }
}

/// The trivialization `Psi_sigma` induced by the section `a -> (a, g(a))`,
/// `gamma -> (gamma, F(gamma))` of a functor `F`.
pub struct SectionIso<'s, 'a, B> {
    pub space: &'s FunctorSpace<'a, B>,
    pub functor: FunctorUG,
}

impl<'s, 'a, B: FiniteBase> SectionIso<'s, 'a, B> {
    pub fn new(space: &'s FunctorSpace<'a, B>, functor: FunctorUG) -> Result<Self> {
        space
            .check(&functor)
            .map_err(|e| Error::Precondition(format!("section is not a functor: {e}")))?;
        Ok(SectionIso { space, functor })
    }

    /// The section itself as a morphism of the product bundle.
    pub fn section(&self, m: &B::Mor) -> Result<Mor<B>> {
        Ok(BundleMorphism {
            base: m.clone(),
            arrow: self.space.apply_mor(&self.functor, m)?,
        })
    }

    /// `Psi(a, g) = (a, sigma(a) g)`.
    pub fn apply_obj(&self, x: &Obj<B>) -> Result<Obj<B>> {
        let s = self.space.apply_obj(&self.functor, &x.0)?;
        Ok((x.0.clone(), self.space.cm.g.multiply(&s, &x.1)))
    }

    /// `Psi(gamma, phi) = (gamma, sigma(gamma) phi)`.
    pub fn apply_mor(&self, m: &Mor<B>) -> Result<Mor<B>> {
        let s = self.space.apply_mor(&self.functor, &m.base)?;
        Ok(BundleMorphism {
            base: m.base.clone(),
            arrow: self.space.cm.sdp_multiply(&s, &m.arrow),
        })
    }

    pub fn inverse(&self) -> SectionIso<'s, 'a, B> {
        SectionIso {
            space: self.space,
            functor: self.space.inverse(&self.functor),
        }
    }

    pub fn to_map(&self) -> BundleMap<'s, B>
    where
        'a: 's,
    {
        let (sp, f1, f2) = (self.space, self.functor.clone(), self.functor.clone());
        let sp2 = self.space;
        BundleMap::new(
            move |x| {
                let s = sp.apply_obj(&f1, &x.0).expect("object of the base");
                (x.0.clone(), sp.cm.g.multiply(&s, &x.1))
            },
            move |m| {
                let s = sp2.apply_mor(&f2, &m.base).expect("morphism of the base");
                BundleMorphism {
                    base: m.base.clone(),
                    arrow: sp2.cm.sdp_multiply(&s, &m.arrow),
                }
            },
        )
    }
}

pub fn section_to_iso<'s, 'a, B: FiniteBase>(
    space: &'s FunctorSpace<'a, B>,
    f: &FunctorUG,
) -> Result<SectionIso<'s, 'a, B>> {
    SectionIso::new(space, f.clone())
}

fn arrow(d: &Draw, k: usize) -> TwoGroupMorphism {
    TwoGroupMorphism::new(d.elem(k), d.elem(k + 1))
}

/// Certifies that `Psi_sigma` is a fiber-preserving, equivariant,
/// composition-preserving bijection of the product bundle.
pub fn verify_section_iso<B: FiniteBase>(
    space: &FunctorSpace<'_, B>,
    f: &FunctorUG,
    checker: &Checker,
) -> Result<LawReport> {
    let iso = section_to_iso(space, f)?;
    let inv = iso.inverse();
    let (base, cm) = (space.base, space.cm);
    let pb = ProductBundle::new(base, cm);
    let (g, h) = (&cm.g, &cm.h);
    let (fg, fh) = (Factor::Group(g), Factor::Group(h));
    let objects = base.objects();
    let fam = base.family();
    let mors = &fam.mors;
    let obj_eq = |a: &Obj<B>, b: &Obj<B>| base.obj_eq(&a.0, &b.0) && g.eq(&a.1, &b.1);
    let mor_eq = |a: &Mor<B>, b: &Mor<B>| base.mor_eq(&a.base, &b.base) && cm.mor_eq(&a.arrow, &b.arrow);
    let fmt = |m: &Mor<B>| format!("({}, {})", base.format_mor(&m.base), cm.format_mor(&m.arrow));
    let lift = |i: usize, a: TwoGroupMorphism| BundleMorphism {
        base: mors[i].clone(),
        arrow: a,
    };
    let mut report = LawReport::new("prop41");

    report.push(checker.law(
        "section.is-section",
        "Prop 4.1",
        &[Factor::Range(fam.pairs.len())],
        |d| {
            let (i2, i1) = fam.pairs[d.index(0)];
            let (s2, s1) = (iso.section(&mors[i2]).ok()?, iso.section(&mors[i1]).ok()?);
            let composite = base.compose(&mors[i2], &mors[i1]).ok()?;
            let ok = base.mor_eq(&s1.base, &mors[i1])
                && matches!(pb.pb_compose(&s2, &s1), Ok(c) if iso.section(&composite).is_ok_and(|s| mor_eq(&c, &s)));
            (!ok).then(|| {
                format!(
                    "sigma does not preserve {} o {}",
                    base.format_mor(&mors[i2]),
                    base.format_mor(&mors[i1])
                )
            })
        },
    ));

    report.push(checker.law(
        "section.equivariance-objects",
        "Eq 4.4",
        &[Factor::Range(objects.len()), fg, fg],
        |d| {
            let x = (objects[d.index(0)].clone(), d.elem(1));
            let k = d.elem(2);
            let lhs = iso.apply_obj(&(x.0.clone(), g.multiply(&x.1, &k))).ok()?;
            let y = iso.apply_obj(&x).ok()?;
            let rhs = (y.0, g.multiply(&y.1, &k));
            (!obj_eq(&lhs, &rhs))
                .then(|| format!("x=({}, {}), k={}", base.format_obj(&x.0), g.format(&x.1), g.format(&k)))
        },
    ));

    report.push(checker.law(
        "section.equivariance-morphisms",
        "Eq 4.4",
        &[Factor::Range(mors.len()), fh, fg, fh, fg],
        |d| {
            let m = lift(d.index(0), arrow(d, 1));
            let k = arrow(d, 3);
            let lhs = iso.apply_mor(&pb.pb_act(&m, &k)).ok()?;
            let rhs = pb.pb_act(&iso.apply_mor(&m).ok()?, &k);
            (!mor_eq(&lhs, &rhs)).then(|| format!("m={}, k={}", fmt(&m), cm.format_mor(&k)))
        },
    ));

    report.push(checker.law(
        "section.fiber-preserving",
        "Eq 4.3",
        &[Factor::Range(mors.len()), fh, fg],
        |d| {
            let m = lift(d.index(0), arrow(d, 1));
            let out = iso.apply_mor(&m).ok()?;
            let s = iso.apply_obj(&pb.pb_source(&m)).ok()?;
            let ok = base.mor_eq(&out.base, &m.base) && base.obj_eq(&s.0, &pb.pb_source(&m).0);
            (!ok).then(|| fmt(&m))
        },
    ));

    report.push(checker.law(
        "section.boundaries",
        "Eq 4.3",
        &[Factor::Range(mors.len()), fh, fg],
        |d| {
            let m = lift(d.index(0), arrow(d, 1));
            let out = iso.apply_mor(&m).ok()?;
            let ok = obj_eq(&pb.pb_source(&out), &iso.apply_obj(&pb.pb_source(&m)).ok()?)
                && obj_eq(&pb.pb_target(&out), &iso.apply_obj(&pb.pb_target(&m)).ok()?);
            (!ok).then(|| fmt(&m))
        },
    ));

    report.push(checker.law(
        "section.composition",
        "Eq 4.5",
        &[Factor::Range(fam.pairs.len()), fh, fg, fh],
        |d| {
            let (i2, i1) = fam.pairs[d.index(0)];
            let m1 = lift(i1, arrow(d, 1));
            let m2 = lift(i2, TwoGroupMorphism::new(d.elem(3), pb.pb_target(&m1).1));
            let lhs = pb.pb_compose(&m2, &m1).and_then(|c| iso.apply_mor(&c));
            let rhs = iso
                .apply_mor(&m2)
                .and_then(|a| iso.apply_mor(&m1).and_then(|b| pb.pb_compose(&a, &b)));
            match (lhs, rhs) {
                (Ok(l), Ok(r)) if mor_eq(&l, &r) => None,
                (Ok(l), Ok(r)) => Some(format!("m2={}, m1={}: {} vs {}", fmt(&m2), fmt(&m1), fmt(&l), fmt(&r))),
                (Err(e), _) | (_, Err(e)) => Some(format!("m2={}, m1={}: {e}", fmt(&m2), fmt(&m1))),
            }
        },
    ));

    report.push(checker.law(
        "section.inverse-round-trip",
        "Prop 4.1",
        &[Factor::Range(mors.len()), fh, fg],
        |d| {
            let m = lift(d.index(0), arrow(d, 1));
            let there = iso.apply_mor(&m).ok()?;
            let back = inv.apply_mor(&there).ok()?;
            let again = iso.apply_mor(&inv.apply_mor(&m).ok()?).ok()?;
            let x = pb.pb_source(&m);
            let xo = inv.apply_obj(&iso.apply_obj(&x).ok()?).ok()?;
            (!(mor_eq(&back, &m) && mor_eq(&again, &m) && obj_eq(&xo, &x))).then(|| fmt(&m))
        },
    ));

    if let (Some(ge), Some(he)) = (g.elements(), h.elements()) {
        let injective = || -> std::result::Result<(), String> {
            let mut seen = HashSet::new();
            for (xi, x) in objects.iter().enumerate() {
                for (gi, gv) in ge.iter().enumerate() {
                    let y = iso.apply_obj(&(x.clone(), *gv)).map_err(|e| e.to_string())?;
                    let key = (base.obj_index(&y.0), g.index_of(&y.1));
                    if key.0 != Some(xi) || !seen.insert(key) {
                        return Err(format!(
                            "object collision at ({}, {})",
                            base.format_obj(x),
                            g.format(gv)
                        ));
                    }
                    let _ = gi;
                }
            }
            let mut seen = HashSet::new();
            for (mi, m) in mors.iter().enumerate() {
                for hv in he {
                    for gv in ge {
                        let y = iso
                            .apply_mor(&BundleMorphism::new(m.clone(), *hv, *gv))
                            .map_err(|e| e.to_string())?;
                        let key = (base.mor_index(&y.base), h.index_of(&y.arrow.h), g.index_of(&y.arrow.g));
                        if key.0 != base.mor_index(m) || !seen.insert(key) {
                            return Err(format!("morphism collision at {}", base.format_mor(m)));
                        }
                    }
                }
                let _ = mi;
            }
            Ok(())
        };
        let n = (objects.len() * ge.len() + mors.len() * he.len() * ge.len()) as u64;
        let mut rec = crate::report::LawRecord::single("section.bijective", "Prop 4.1", injective());
        rec.mode = crate::report::Mode::Exhaustive;
        rec.checked = n;
        report.push(rec);
    }

    Ok(report.sorted())
}

/// Reads the functor `sigma_Phi` off an automorphism `Phi` of the product
/// bundle: `sigma(a) = Phi(a, e)` and `sigma(gamma) = Phi(gamma, 1_e)`.
/// Refuses (with a witness) when `Phi` moves base points or is not
/// equivariant.
pub fn automorphism_to_functor<B: FiniteBase>(
    space: &FunctorSpace<'_, B>,
    phi: &BundleMap<'_, B>,
) -> Result<FunctorUG> {
    let (base, cm) = (space.base, space.cm);
    let (g, h) = (&cm.g, &cm.h);
    let pb = ProductBundle::new(base, cm);
    let (ge, he) = match (g.elements(), h.elements()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::Input("extraction needs finite groups".into())),
    };
    for x in base.objects() {
        let at_e = phi.apply_obj(&(x.clone(), g.identity()));
        for k in ge {
            let y = phi.apply_obj(&(x.clone(), *k));
            if !base.obj_eq(&y.0, x) {
                return Err(Error::Precondition(format!(
                    "not fiber preserving at {}",
                    base.format_obj(x)
                )));
            }
            if !g.eq(&y.1, &g.multiply(&at_e.1, k)) {
                return Err(Error::Precondition(format!(
                    "not equivariant at ({}, {})",
                    base.format_obj(x),
                    g.format(k)
                )));
            }
        }
    }
    for m in base.morphisms() {
        let at_e = phi.apply_mor(&BundleMorphism {
            base: m.clone(),
            arrow: cm.unit(),
        });
        for hv in he {
            for gv in ge {
                let k = TwoGroupMorphism::new(*hv, *gv);
                let y = phi.apply_mor(&BundleMorphism {
                    base: m.clone(),
                    arrow: k,
                });
                if !base.mor_eq(&y.base, m) {
                    return Err(Error::Precondition(format!(
                        "not fiber preserving at {}",
                        base.format_mor(m)
                    )));
                }
                if !cm.mor_eq(&y.arrow, &pb.pb_act(&at_e, &k).arrow) {
                    return Err(Error::Precondition(format!(
                        "not equivariant at ({}, {})",
                        base.format_mor(m),
                        cm.format_mor(&k)
                    )));
                }
            }
        }
    }
    let gs: Vec<Element> = base
        .objects()
        .iter()
        .map(|x| phi.apply_obj(&(x.clone(), g.identity())).1)
        .collect();
    let mut hs = Vec::with_capacity(base.morphisms().len());
    for (i, m) in base.morphisms().iter().enumerate() {
        let img = phi.apply_mor(&BundleMorphism {
            base: m.clone(),
            arrow: cm.unit(),
        });
        let (s, _) = space.ends(i);
        if !g.eq(&img.arrow.g, &gs[s]) {
            return Err(Error::Precondition(format!(
                "source of sigma({}) is not sigma of its source",
                base.format_mor(m)
            )));
        }
        hs.push(img.arrow.h);
    }
    let f = space.from_table(gs, hs)?;
    space
        .check(&f)
        .map_err(|e| Error::Precondition(format!("extracted data is not a functor: {e}")))?;
    Ok(f)
}

/// Certifies that composing automorphisms corresponds to multiplying their
/// functors pointwise: `sigma_{Phi2 o Phi1} = sigma_Phi2 sigma_Phi1`.
pub fn verify_composition_correspondence<'a, B: FiniteBase + 'a>(
    space: &FunctorSpace<'_, B>,
    phi2: BundleMap<'a, B>,
    phi1: BundleMap<'a, B>,
) -> Result<LawReport> {
    let s2 = automorphism_to_functor(space, &phi2)?;
    let s1 = automorphism_to_functor(space, &phi1)?;
    let s21 = automorphism_to_functor(space, &phi2.after(phi1))?;
    let expected = space.product(&s2, &s1);
    let outcome = if space.functor_eq(&s21, &expected) {
        Ok(())
    } else {
        Err(format!(
            "sigma of composite {} but product {}",
            space.format_functor(&s21),
            space.format_functor(&expected)
        ))
    };
    let mut report = LawReport::new("prop42");
    report.push(crate::report::LawRecord::single(
        "automorphism.composition-correspondence",
        "Eq 4.11",
        outcome,
    ));
    Ok(report)
}
