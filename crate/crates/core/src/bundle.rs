//! Categorical principal bundles over a base with objects `(x, g)` and
//! morphisms `(gamma, (h, g))`, and a generic certifier of the bundle axioms.

use crate::algebra::{CrossedModule, Element, TwoGroupMorphism};
use crate::base::{Base, Family};
use crate::error::Result;
use crate::exec::{Checker, Draw, Factor};
use crate::report::LawReport;

#[derive(Clone, Debug, PartialEq)]
pub struct BundleMorphism<M> {
    pub base: M,
    pub arrow: TwoGroupMorphism,
}

impl<M> BundleMorphism<M> {
    pub fn new(base: M, h: Element, g: Element) -> Self {
        BundleMorphism {
            base,
            arrow: TwoGroupMorphism::new(h, g),
        }
    }
}

pub type BundleObject<O> = (O, Element);

/// A bundle `P -> B` with a right action of the categorical group.
pub trait Bundle: Sync {
    type B: Base;

    fn base(&self) -> &Self::B;
    fn cm(&self) -> &CrossedModule;
    fn source(&self, m: &BMor<Self>) -> BObj<Self>;
    fn target(&self, m: &BMor<Self>) -> BObj<Self>;
    fn compose(&self, m2: &BMor<Self>, m1: &BMor<Self>) -> Result<BMor<Self>>;
    fn act(&self, m: &BMor<Self>, k: &TwoGroupMorphism) -> BMor<Self>;

    fn identity(&self, x: &BObj<Self>) -> BMor<Self> {
        BundleMorphism {
            base: self.base().identity(&x.0),
            arrow: self.cm().identity_at(&x.1),
        }
    }

    /// The `k` with `m k = n` for `m`, `n` over the same base morphism.
    fn translation(&self, m: &BMor<Self>, n: &BMor<Self>) -> TwoGroupMorphism {
        let cm = self.cm();
        cm.sdp_multiply(&cm.sdp_inverse(&m.arrow), &n.arrow)
    }

    fn act_obj(&self, x: &BObj<Self>, g: &Element) -> BObj<Self> {
        (x.0.clone(), self.cm().g.multiply(&x.1, g))
    }

    fn obj_eq(&self, a: &BObj<Self>, b: &BObj<Self>) -> bool {
        self.base().obj_eq(&a.0, &b.0) && self.cm().g.eq(&a.1, &b.1)
    }

    fn mor_eq(&self, a: &BMor<Self>, b: &BMor<Self>) -> bool {
        self.base().mor_eq(&a.base, &b.base) && self.cm().mor_eq(&a.arrow, &b.arrow)
    }

    fn format_obj(&self, x: &BObj<Self>) -> String {
        format!("({}, {})", self.base().format_obj(&x.0), self.cm().g.format(&x.1))
    }

    fn format_mor(&self, m: &BMor<Self>) -> String {
        format!(
            "({}, {})",
            self.base().format_mor(&m.base),
            self.cm().format_mor(&m.arrow)
        )
    }
}

pub type BObj<P> = BundleObject<<<P as Bundle>::B as Base>::Obj>;
pub type BMor<P> = BundleMorphism<<<P as Bundle>::B as Base>::Mor>;

fn arrow(d: &Draw, k: usize) -> TwoGroupMorphism {
    TwoGroupMorphism::new(d.elem(k), d.elem(k + 1))
}

/// Certifies that `bundle` is a categorical principal bundle over the given
/// sample of base objects and morphisms: projection is a functor and
/// surjective (b1), the action is free (b2) and fiberwise transitive (b3),
/// the action is functorial, and composition is associative and unital.
pub fn verify_bundle_axioms<P: Bundle>(
    bundle: &P,
    prefix: &str,
    anchor: &str,
    objects: &[<P::B as Base>::Obj],
    family: &Family<<P::B as Base>::Mor>,
    checker: &Checker,
) -> LawReport {
    let base = bundle.base();
    let cm = bundle.cm();
    let (g, h) = (&cm.g, &cm.h);
    let (fg, fh) = (Factor::Group(g), Factor::Group(h));
    let mors = &family.mors;
    let name = |s: &str| format!("{prefix}.{s}");
    let mut report = LawReport::new(format!("{prefix}-bundle"));
    let lift = |i: usize, a: TwoGroupMorphism| BundleMorphism {
        base: mors[i].clone(),
        arrow: a,
    };
    let fm = |m: &BMor<P>| bundle.format_mor(m);

    report.push(checker.law(
        &name("b1-surjective"),
        "§2.2 (b1)",
        &[Factor::Range(mors.len())],
        |d| {
            let i = d.index(0);
            let m = lift(i, cm.unit());
            let ok = base.mor_eq(&m.base, &mors[i])
                && base.obj_eq(&bundle.source(&m).0, &base.source(&mors[i]))
                && base.obj_eq(&bundle.target(&m).0, &base.target(&mors[i]));
            (!ok).then(|| format!("no lift of {}", base.format_mor(&mors[i])))
        },
    ));

    report.push(checker.law(
        &name("b2-free-objects"),
        "§2.2 (b2)",
        &[Factor::Range(objects.len()), fg, fg],
        |d| {
            let x = (objects[d.index(0)].clone(), d.elem(1));
            let k = d.elem(2);
            let moved = bundle.act_obj(&x, &k);
            (bundle.obj_eq(&moved, &x) && !g.is_identity(&k))
                .then(|| format!("{} fixed by {}", bundle.format_obj(&x), g.format(&k)))
        },
    ));

    report.push(checker.law(
        &name("b2-free-morphisms"),
        "§2.2 (b2)",
        &[Factor::Range(mors.len()), fh, fg, fh, fg],
        |d| {
            let m = lift(d.index(0), arrow(d, 1));
            let k = arrow(d, 3);
            (bundle.mor_eq(&bundle.act(&m, &k), &m) && !cm.mor_eq(&k, &cm.unit()))
                .then(|| format!("{} fixed by {}", fm(&m), cm.format_mor(&k)))
        },
    ));

    report.push(checker.law(
        &name("b3-transitive-objects"),
        "§2.2 (b3)",
        &[Factor::Range(objects.len()), fg, fg],
        |d| {
            let o = &objects[d.index(0)];
            let (x, y) = ((o.clone(), d.elem(1)), (o.clone(), d.elem(2)));
            let k = g.multiply(&g.inverse(&x.1), &y.1);
            (!bundle.obj_eq(&bundle.act_obj(&x, &k), &y))
                .then(|| format!("{} not moved to {}", bundle.format_obj(&x), bundle.format_obj(&y)))
        },
    ));

    report.push(checker.law(
        &name("b3-transitive-morphisms"),
        "§2.2 (b3)",
        &[Factor::Range(mors.len()), fh, fg, fh, fg],
        |d| {
            let (m, n) = (lift(d.index(0), arrow(d, 1)), lift(d.index(0), arrow(d, 3)));
            let k = bundle.translation(&m, &n);
            (!bundle.mor_eq(&bundle.act(&m, &k), &n)).then(|| format!("{} not moved to {}", fm(&m), fm(&n)))
        },
    ));

    report.push(checker.law(
        &name("action-boundaries"),
        "Eq 3.2",
        &[Factor::Range(mors.len()), fh, fg, fh, fg],
        |d| {
            let m = lift(d.index(0), arrow(d, 1));
            let k = arrow(d, 3);
            let mk = bundle.act(&m, &k);
            let s_ok = bundle.obj_eq(&bundle.source(&mk), &bundle.act_obj(&bundle.source(&m), &cm.source(&k)));
            let t_ok = bundle.obj_eq(&bundle.target(&mk), &bundle.act_obj(&bundle.target(&m), &cm.target(&k)));
            (!(s_ok && t_ok)).then(|| format!("m={}, k={}", fm(&m), cm.format_mor(&k)))
        },
    ));

    report.push(checker.law(
        &name("action-unit-associativity"),
        "Eq 3.2",
        &[Factor::Range(mors.len()), fh, fg, fh, fg, fh, fg],
        |d| {
            let m = lift(d.index(0), arrow(d, 1));
            let (k, k2) = (arrow(d, 3), arrow(d, 5));
            let unit_ok = bundle.mor_eq(&bundle.act(&m, &cm.unit()), &m);
            let assoc_ok = bundle.mor_eq(
                &bundle.act(&bundle.act(&m, &k), &k2),
                &bundle.act(&m, &cm.sdp_multiply(&k, &k2)),
            );
            (!(unit_ok && assoc_ok))
                .then(|| format!("m={}, k={}, k'={}", fm(&m), cm.format_mor(&k), cm.format_mor(&k2)))
        },
    ));

    // composable chains: the G-part of each later factor is forced by the
    // target of the previous one
    let chain2 = |d: &Draw, pair: (usize, usize)| -> (BMor<P>, BMor<P>) {
        let m1 = lift(pair.1, arrow(d, 1));
        let g2 = bundle.target(&m1).1;
        let m2 = lift(pair.0, TwoGroupMorphism::new(d.elem(3), g2));
        (m2, m1)
    };

    report.push(checker.law(
        &name("action-composition"),
        "Eq 6.14",
        &[Factor::Range(family.pairs.len()), fh, fg, fh, fh, fg, fh],
        |d| {
            let (m2, m1) = chain2(d, family.pairs[d.index(0)]);
            let k1 = arrow(d, 4);
            let k2 = TwoGroupMorphism::new(d.elem(6), cm.target(&k1));
            let lhs = bundle
                .compose(&m2, &m1)
                .and_then(|c| cm.compose_vertical(&k2, &k1).map(|k| bundle.act(&c, &k)));
            let rhs = bundle.compose(&bundle.act(&m2, &k2), &bundle.act(&m1, &k1));
            match (lhs, rhs) {
                (Ok(l), Ok(r)) if bundle.mor_eq(&l, &r) => None,
                (Ok(l), Ok(r)) => Some(format!(
                    "(m2 o m1)(k2 o k1)={} but (m2 k2) o (m1 k1)={}",
                    fm(&l),
                    fm(&r)
                )),
                (Err(e), _) | (_, Err(e)) => Some(format!("m2={}, m1={}: {e}", fm(&m2), fm(&m1))),
            }
        },
    ));

    report.push(checker.law(
        &name("composite-boundaries"),
        anchor,
        &[Factor::Range(family.pairs.len()), fh, fg, fh],
        |d| {
            let (m2, m1) = chain2(d, family.pairs[d.index(0)]);
            match bundle.compose(&m2, &m1) {
                Ok(c)
                    if bundle.obj_eq(&bundle.source(&c), &bundle.source(&m1))
                        && bundle.obj_eq(&bundle.target(&c), &bundle.target(&m2)) =>
                {
                    None
                }
                Ok(c) => Some(format!("{} o {} = {} has wrong boundary", fm(&m2), fm(&m1), fm(&c))),
                Err(e) => Some(e.to_string()),
            }
        },
    ));

    report.push(checker.law(
        &name("projection-functor"),
        "§2.2",
        &[Factor::Range(family.pairs.len()), fh, fg, fh],
        |d| {
            let (m2, m1) = chain2(d, family.pairs[d.index(0)]);
            let projected = base.compose(&m2.base, &m1.base);
            match (bundle.compose(&m2, &m1), projected) {
                (Ok(c), Ok(p)) if base.mor_eq(&c.base, &p) => None,
                _ => Some(format!("{} o {}", fm(&m2), fm(&m1))),
            }
        },
    ));

    report.push(checker.law(
        &name("associativity"),
        anchor,
        &[Factor::Range(family.triples.len()), fh, fg, fh, fh],
        |d| {
            let (i3, i2, i1) = family.triples[d.index(0)];
            let (m2, m1) = chain2(d, (i2, i1));
            let m3 = lift(i3, TwoGroupMorphism::new(d.elem(4), bundle.target(&m2).1));
            let lhs = bundle.compose(&m3, &m2).and_then(|x| bundle.compose(&x, &m1));
            let rhs = bundle.compose(&m2, &m1).and_then(|x| bundle.compose(&m3, &x));
            match (lhs, rhs) {
                (Ok(l), Ok(r)) if bundle.mor_eq(&l, &r) => None,
                (Ok(l), Ok(r)) => Some(format!(
                    "{} o {} o {}: {} vs {}",
                    fm(&m3),
                    fm(&m2),
                    fm(&m1),
                    fm(&l),
                    fm(&r)
                )),
                (Err(e), _) | (_, Err(e)) => Some(format!("{} o {} o {}: {e}", fm(&m3), fm(&m2), fm(&m1))),
            }
        },
    ));

    report.push(
        checker.law(&name("units"), anchor, &[Factor::Range(mors.len()), fh, fg], |d| {
            let m = lift(d.index(0), arrow(d, 1));
            let left = bundle.compose(&bundle.identity(&bundle.target(&m)), &m);
            let right = bundle.compose(&m, &bundle.identity(&bundle.source(&m)));
            match (left, right) {
                (Ok(l), Ok(r)) if bundle.mor_eq(&l, &m) && bundle.mor_eq(&r, &m) => None,
                _ => Some(fm(&m)),
            }
        }),
    );

    report.sorted()
}
