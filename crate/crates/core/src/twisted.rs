//! The twisted product `U x_eta G` for a homomorphism `eta: Mor(U) -> G`,
//! the map `E_eta`, and their certifiers.

use std::collections::HashMap;

use crate::algebra::{CrossedModule, Element, TwoGroupMorphism};
use crate::base::{Base, Family, FiniteBase, QuiverCategory, Word};
use crate::bundle::{verify_bundle_axioms, BMor, BObj, Bundle, BundleMorphism};
use crate::error::{Error, Result};
use crate::exec::{Checker, Draw, Factor};
use crate::product::ProductBundle;
use crate::report::LawReport;

/// A map from base morphisms to `G`, expected to be multiplicative.
pub trait Eta<B: Base>: Sync {
    fn eta(&self, m: &B::Mor) -> Element;
}

/// `eta = e` everywhere.
pub struct TrivialEta(pub Element);

impl TrivialEta {
    pub fn new(cm: &CrossedModule) -> Self {
        TrivialEta(cm.g.identity())
    }
}

impl<B: Base> Eta<B> for TrivialEta {
    fn eta(&self, _: &B::Mor) -> Element {
        self.0
    }
}

/// Values on a quiver category: either generated by the arrows (a word
/// maps to the product of its arrows' values, later arrows on the left), or
/// an arbitrary table on enumerated words, which need not be multiplicative.
pub struct EtaTable {
    unit: Element,
    g: crate::algebra::Group,
    arrows: Option<Vec<Element>>,
    table: HashMap<Word, Element>,
}

impl EtaTable {
    pub fn from_generators(cm: &CrossedModule, q: &QuiverCategory, values: &[Element]) -> Result<Self> {
        if values.len() != q.arrow_count() {
            return Err(Error::Mismatch(format!(
                "{} eta values for {} arrows",
                values.len(),
                q.arrow_count()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !cm.g.contains(v)) {
            return Err(Error::Structural(format!("eta value {} is not in G", cm.g.format(bad))));
        }
        Ok(EtaTable {
            unit: cm.g.identity(),
            g: cm.g.clone(),
            arrows: Some(values.to_vec()),
            table: HashMap::new(),
        })
    }

    /// A table given word by word. Words missing from `values` map to `e`.
    pub fn from_words(cm: &CrossedModule, values: impl IntoIterator<Item = (Word, Element)>) -> Self {
        EtaTable {
            unit: cm.g.identity(),
            g: cm.g.clone(),
            arrows: None,
            table: values.into_iter().collect(),
        }
    }
}

impl Eta<QuiverCategory> for EtaTable {
    fn eta(&self, m: &Word) -> Element {
        match &self.arrows {
            Some(vals) => m
                .arrows
                .iter()
                .fold(self.unit, |acc, &a| self.g.multiply(&vals[a], &acc)),
            None => self.table.get(m).copied().unwrap_or(self.unit),
        }
    }
}

impl<B: Base, F: Fn(&B::Mor) -> Element + Sync> Eta<B> for F {
    fn eta(&self, m: &B::Mor) -> Element {
        self(m)
    }
}

/// `U x_eta G`: objects `(a, g)`, morphisms `(gamma, (h, g))` from
/// `(s(gamma), g)` to `(t(gamma), eta(gamma) tau(h) g)`.
pub struct TwistedBundle<'a, B, E> {
    pub base: &'a B,
    pub cm: &'a CrossedModule,
    pub eta: &'a E,
}

impl<'a, B: Base, E: Eta<B>> TwistedBundle<'a, B, E> {
    pub fn new(base: &'a B, cm: &'a CrossedModule, eta: &'a E) -> Self {
        TwistedBundle { base, cm, eta }
    }

    pub fn tw_source(&self, m: &BundleMorphism<B::Mor>) -> (B::Obj, Element) {
        (self.base.source(&m.base), m.arrow.g)
    }

    pub fn tw_target(&self, m: &BundleMorphism<B::Mor>) -> (B::Obj, Element) {
        let g = &self.cm.g;
        (
            self.base.target(&m.base),
            g.multiply(&self.eta.eta(&m.base), &self.cm.target(&m.arrow)),
        )
    }

    pub fn tw_act(&self, m: &BundleMorphism<B::Mor>, k: &TwoGroupMorphism) -> BundleMorphism<B::Mor> {
        BundleMorphism {
            base: m.base.clone(),
            arrow: self.cm.sdp_multiply(&m.arrow, k),
        }
    }

    /// `(gamma2 o gamma1, alpha_{eta(gamma1)^-1}(h2) h1, g1)`, defined when
    /// `g2 = eta(gamma1) tau(h1) g1`.
    pub fn tw_compose(
        &self,
        m2: &BundleMorphism<B::Mor>,
        m1: &BundleMorphism<B::Mor>,
    ) -> Result<BundleMorphism<B::Mor>> {
        let (g, h, cm) = (&self.cm.g, &self.cm.h, self.cm);
        let base = self.base.compose(&m2.base, &m1.base).map_err(|e| match e {
            Error::CompositionUndefined { left, right, .. } => {
                Error::undefined("base component is not composable", left, right)
            }
            other => other,
        })?;
        let t1 = self.tw_target(m1).1;
        if !g.eq(&t1, &m2.arrow.g) {
            return Err(Error::undefined(
                "group component is not composable",
                g.format(&m2.arrow.g),
                g.format(&t1),
            ));
        }
        let eta1 = self.eta.eta(&m1.base);
        Ok(BundleMorphism {
            base,
            arrow: TwoGroupMorphism::new(
                h.multiply(&cm.alpha(&g.inverse(&eta1), &m2.arrow.h), &m1.arrow.h),
                m1.arrow.g,
            ),
        })
    }

    /// `E_eta(phi, gamma) = 1_{eta(gamma)^-1} phi`.
    pub fn e_eta(&self, phi: &TwoGroupMorphism, gamma: &B::Mor) -> TwoGroupMorphism {
        e_eta(self.cm, &self.eta.eta(gamma), phi)
    }
}

pub fn e_eta(cm: &CrossedModule, eta: &Element, phi: &TwoGroupMorphism) -> TwoGroupMorphism {
    cm.sdp_multiply(&cm.identity_at(&cm.g.inverse(eta)), phi)
}

impl<B: Base, E: Eta<B>> Bundle for TwistedBundle<'_, B, E> {
    type B = B;

    fn base(&self) -> &B {
        self.base
    }

    fn cm(&self) -> &CrossedModule {
        self.cm
    }

    fn source(&self, m: &BMor<Self>) -> BObj<Self> {
        self.tw_source(m)
    }

    fn target(&self, m: &BMor<Self>) -> BObj<Self> {
        self.tw_target(m)
    }

    fn compose(&self, m2: &BMor<Self>, m1: &BMor<Self>) -> Result<BMor<Self>> {
        self.tw_compose(m2, m1)
    }

    fn act(&self, m: &BMor<Self>, k: &TwoGroupMorphism) -> BMor<Self> {
        self.tw_act(m, k)
    }
}

fn arrow(d: &Draw, k: usize) -> TwoGroupMorphism {
    TwoGroupMorphism::new(d.elem(k), d.elem(k + 1))
}

/// `eta(gamma2 o gamma1) = eta(gamma2) eta(gamma1)` and `eta(id) = e`.
pub fn verify_eta_homomorphism<B: Base, E: Eta<B>>(
    base: &B,
    cm: &CrossedModule,
    eta: &E,
    family: &Family<B::Mor>,
    checker: &Checker,
) -> LawReport {
    let g = &cm.g;
    let mors = &family.mors;
    let mut report = LawReport::new("eta");
    report.push(checker.each("eta.homomorphism", "Eq 6.18", &family.pairs, |&(i2, i1)| {
        let c = match base.compose(&mors[i2], &mors[i1]) {
            Ok(c) => c,
            Err(e) => return Some(e.to_string()),
        };
        let lhs = eta.eta(&c);
        let rhs = g.multiply(&eta.eta(&mors[i2]), &eta.eta(&mors[i1]));
        (!g.eq(&lhs, &rhs)).then(|| {
            format!(
                "eta({} o {})={} but eta eta={}",
                base.format_mor(&mors[i2]),
                base.format_mor(&mors[i1]),
                g.format(&lhs),
                g.format(&rhs)
            )
        })
    }));
    report.push(checker.each("eta.identity", "Eq 6.18", mors, |m| {
        let id = base.identity(&base.source(m));
        let v = eta.eta(&id);
        (!g.is_identity(&v)).then(|| format!("eta({})={}", base.format_mor(&id), g.format(&v)))
    }));
    report
}

/// Properties (i) to (iv) of `E_eta` and agreement of the composition
/// written through `E_eta` with the direct formula.
pub fn verify_e_properties<B: Base, E: Eta<B>>(
    tb: &TwistedBundle<'_, B, E>,
    family: &Family<B::Mor>,
    checker: &Checker,
) -> LawReport {
    let (base, cm) = (tb.base, tb.cm);
    let (g, h) = (&cm.g, &cm.h);
    let (fg, fh) = (Factor::Group(g), Factor::Group(h));
    let mors = &family.mors;
    let ids: Vec<B::Mor> = mors.iter().filter(|m| base.is_identity(m)).cloned().collect();
    let fmt = |m: &B::Mor| base.format_mor(m);
    let mut report = LawReport::new("e-eta");

    report.push(checker.law(
        "twisted.E-identity-U",
        "Eq 6.21 (i)",
        &[Factor::Range(ids.len()), fh, fg],
        |d| {
            let phi = arrow(d, 1);
            let out = tb.e_eta(&phi, &ids[d.index(0)]);
            (!cm.mor_eq(&out, &phi)).then(|| format!("gamma={}, phi={}", fmt(&ids[d.index(0)]), cm.format_mor(&phi)))
        },
    ));

    report.push(checker.law(
        "twisted.E-identity-G",
        "Eq 6.21 (ii)",
        &[Factor::Range(mors.len()), fg],
        |d| {
            let m = &mors[d.index(0)];
            let x = d.elem(1);
            let out = tb.e_eta(&cm.identity_at(&x), m);
            let want = cm.identity_at(&g.multiply(&g.inverse(&tb.eta.eta(m)), &x));
            (!cm.mor_eq(&out, &want)).then(|| format!("gamma={}, g={}", fmt(m), g.format(&x)))
        },
    ));

    report.push(checker.law(
        "twisted.E-composition-U",
        "Eq 6.21 (iii)",
        &[Factor::Range(family.pairs.len()), fh, fg],
        |d| {
            let (i2, i1) = family.pairs[d.index(0)];
            let phi = arrow(d, 1);
            let c = match base.compose(&mors[i2], &mors[i1]) {
                Ok(c) => c,
                Err(e) => return Some(e.to_string()),
            };
            let lhs = tb.e_eta(&phi, &c);
            let rhs = tb.e_eta(&tb.e_eta(&phi, &mors[i2]), &mors[i1]);
            (!cm.mor_eq(&lhs, &rhs)).then(|| {
                format!(
                    "gamma2={}, gamma1={}, phi={}: {} vs {}",
                    fmt(&mors[i2]),
                    fmt(&mors[i1]),
                    cm.format_mor(&phi),
                    cm.format_mor(&lhs),
                    cm.format_mor(&rhs)
                )
            })
        },
    ));

    report.push(checker.law(
        "twisted.E-composition-G",
        "Eq 6.21 (iv)",
        &[Factor::Range(mors.len()), fh, fg, fh],
        |d| {
            let m = &mors[d.index(0)];
            let phi1 = arrow(d, 1);
            let phi2 = TwoGroupMorphism::new(d.elem(3), cm.target(&phi1));
            let lhs = cm.compose_vertical(&phi2, &phi1).map(|c| tb.e_eta(&c, m));
            let rhs = cm.compose_vertical(&tb.e_eta(&phi2, m), &tb.e_eta(&phi1, m));
            match (lhs, rhs) {
                (Ok(l), Ok(r)) if cm.mor_eq(&l, &r) => None,
                (Ok(l), Ok(r)) => Some(format!(
                    "gamma={}: {} vs {}",
                    fmt(m),
                    cm.format_mor(&l),
                    cm.format_mor(&r)
                )),
                (Err(e), _) | (_, Err(e)) => Some(format!("gamma={}: {e}", fmt(m))),
            }
        },
    ));

    report.push(checker.law(
        "twisted.composition-via-E",
        "Eq 6.22",
        &[Factor::Range(family.pairs.len()), fh, fg, fh],
        |d| {
            let (i2, i1) = family.pairs[d.index(0)];
            let m1 = BundleMorphism {
                base: mors[i1].clone(),
                arrow: arrow(d, 1),
            };
            let m2 = BundleMorphism {
                base: mors[i2].clone(),
                arrow: TwoGroupMorphism::new(d.elem(3), tb.tw_target(&m1).1),
            };
            let direct = tb.tw_compose(&m2, &m1);
            let via_e = cm.compose_vertical(&tb.e_eta(&m2.arrow, &m1.base), &m1.arrow);
            match (direct, via_e) {
                (Ok(a), Ok(b)) if cm.mor_eq(&a.arrow, &b) => None,
                (Ok(a), Ok(b)) => Some(format!(
                    "{} o {}: direct {} but via E {}",
                    fmt(&m2.base),
                    fmt(&m1.base),
                    cm.format_mor(&a.arrow),
                    cm.format_mor(&b)
                )),
                (Err(e), _) | (_, Err(e)) => Some(format!("{} o {}: {e}", fmt(&m2.base), fmt(&m1.base))),
            }
        },
    ));
    report.sorted()
}

/// With `eta = e`, source, target, action and composition of the twisted
/// product agree with those of the product bundle.
pub fn verify_degeneration<B: Base>(
    base: &B,
    cm: &CrossedModule,
    family: &Family<B::Mor>,
    checker: &Checker,
) -> LawReport {
    let trivial = TrivialEta::new(cm);
    let tb = TwistedBundle::new(base, cm, &trivial);
    let pb = ProductBundle::new(base, cm);
    let (g, h) = (&cm.g, &cm.h);
    let (fg, fh) = (Factor::Group(g), Factor::Group(h));
    let mors = &family.mors;
    let mut report = LawReport::new("degeneration");
    report.push(checker.law(
        "twisted.degenerates-to-product",
        "Eq 3.4",
        &[Factor::Range(family.pairs.len()), fh, fg, fh, fh, fg],
        |d| {
            let (i2, i1) = family.pairs[d.index(0)];
            let m1 = BundleMorphism {
                base: mors[i1].clone(),
                arrow: arrow(d, 1),
            };
            let m2 = BundleMorphism {
                base: mors[i2].clone(),
                arrow: TwoGroupMorphism::new(d.elem(3), pb.pb_target(&m1).1),
            };
            let k = arrow(d, 4);
            let obj_eq = |a: &(B::Obj, Element), b: &(B::Obj, Element)| base.obj_eq(&a.0, &b.0) && g.eq(&a.1, &b.1);
            let ends = obj_eq(&tb.tw_source(&m1), &pb.pb_source(&m1)) && obj_eq(&tb.tw_target(&m1), &pb.pb_target(&m1));
            let act = tb.mor_eq(&tb.tw_act(&m1, &k), &pb.pb_act(&m1, &k));
            let comp = match (tb.tw_compose(&m2, &m1), pb.pb_compose(&m2, &m1)) {
                (Ok(a), Ok(b)) => tb.mor_eq(&a, &b),
                _ => false,
            };
            (!(ends && act && comp)).then(|| {
                format!(
                    "{} o {}, k={}",
                    tb.format_mor(&m2),
                    tb.format_mor(&m1),
                    cm.format_mor(&k)
                )
            })
        },
    ));
    report
}

/// Everything certified about a twisted product: `eta` is a homomorphism,
/// the bundle axioms, `E_eta` and the degenerate case.
pub fn verify_twisted_bundle<B: FiniteBase, E: Eta<B>>(
    base: &B,
    cm: &CrossedModule,
    eta: &E,
    checker: &Checker,
) -> LawReport {
    let family = base.family();
    verify_twisted_family(base, cm, eta, base.objects(), &family, checker)
}

pub fn verify_twisted_family<B: Base, E: Eta<B>>(
    base: &B,
    cm: &CrossedModule,
    eta: &E,
    objects: &[B::Obj],
    family: &Family<B::Mor>,
    checker: &Checker,
) -> LawReport {
    let tb = TwistedBundle::new(base, cm, eta);
    let mut report = LawReport::new("prop61");
    report.absorb(verify_eta_homomorphism(base, cm, eta, family, checker));
    report.absorb(verify_bundle_axioms(
        &tb, "twisted", "Prop 6.1", objects, family, checker,
    ));
    report.absorb(verify_e_properties(&tb, family, checker));
    report.absorb(verify_degeneration(base, cm, family, checker));
    report.sorted()
}
