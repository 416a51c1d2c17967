use rand::Rng;

use super::transport::{transport_from, TransportEta};
use crate::algebra::{CrossedModule, Element, GroupKind, TwoGroupMorphism};
use crate::base::{Base, Family, PathCategory, PathFamilyConfig, Point, SampledPath};
use crate::bundle::{BMor, BObj, Bundle, BundleMorphism};
use crate::error::{Error, Result};
use crate::exec::Checker;
use crate::report::{LawRecord, LawReport};
use crate::twisted::{Eta, TwistedBundle};

/// A decorated morphism `(gamma, g_start, h)`: the horizontal lift of `gamma`
/// starting at `(gamma(0), g_start)` together with its decoration `h`.
/// Stored as a [`BundleMorphism`] with `arrow = (h, g_start)`.
pub type DecoratedMorphism = BundleMorphism<SampledPath>;

pub fn decorated(gamma: SampledPath, g_start: Element, h: Element) -> DecoratedMorphism {
    BundleMorphism::new(gamma, h, g_start)
}

/// The decorated bundle over the trivial bundle `R^n x G` with the
/// connection carried by `eta`.
pub struct DecoratedBundle<'a> {
    pub base: PathCategory,
    pub cm: &'a CrossedModule,
    pub eta: &'a TransportEta,
}

impl<'a> DecoratedBundle<'a> {
    pub fn new(cm: &'a CrossedModule, eta: &'a TransportEta) -> Result<Self> {
        let want = GroupKind::SpecialOrthogonal(eta.conn.group_dim());
        if cm.g.kind() != want {
            return Err(Error::Mismatch(format!(
                "connection takes values in {} but G is {}",
                eta.conn.group().name(),
                cm.g.name()
            )));
        }
        Ok(DecoratedBundle {
            base: PathCategory::new(eta.conn.base_dim())?,
            cm,
            eta,
        })
    }

    pub fn transport(&self, gamma: &SampledPath) -> Element {
        self.eta.eta(gamma)
    }

    pub fn dec_source(&self, m: &DecoratedMorphism) -> (Point, Element) {
        (m.base.start(), m.arrow.g)
    }

    /// `(gamma(1), eta(gamma) g_start tau(h))`.
    pub fn dec_target(&self, m: &DecoratedMorphism) -> (Point, Element) {
        let g = &self.cm.g;
        (
            m.base.end(),
            g.product(&[self.transport(&m.base), m.arrow.g, self.cm.tau(&m.arrow.h)]),
        )
    }

    /// `(gamma, g h) (h1, g1) = (gamma, g g1, g1^-1 h h1 g1)`.
    pub fn dec_act(&self, m: &DecoratedMorphism, k: &TwoGroupMorphism) -> DecoratedMorphism {
        let (g, h) = (&self.cm.g, &self.cm.h);
        decorated(
            m.base.clone(),
            g.multiply(&m.arrow.g, &k.g),
            self.cm.alpha(&g.inverse(&k.g), &h.multiply(&m.arrow.h, &k.h)),
        )
    }

    /// `(gamma2 o gamma1, g_start1, h1 h2)`, defined when `t(m1) = s(m2)`.
    pub fn dec_compose(&self, m2: &DecoratedMorphism, m1: &DecoratedMorphism) -> Result<DecoratedMorphism> {
        let g = &self.cm.g;
        let base = self.base.compose(&m2.base, &m1.base).map_err(|e| match e {
            Error::CompositionUndefined { left, right, .. } => {
                Error::undefined("base paths are not composable", left, right)
            }
            other => other,
        })?;
        let t1 = self.dec_target(m1).1;
        if !g.eq(&t1, &m2.arrow.g) {
            return Err(Error::undefined(
                "horizontal lifts do not meet",
                g.format(&m2.arrow.g),
                g.format(&t1),
            ));
        }
        Ok(decorated(
            base,
            m1.arrow.g,
            self.cm.h.multiply(&m1.arrow.h, &m2.arrow.h),
        ))
    }

    /// `Theta(gamma-bar g, h) = (gamma, g h)`, stored as `(alpha_g(h), g)`.
    pub fn theta(&self, m: &DecoratedMorphism) -> BundleMorphism<SampledPath> {
        BundleMorphism {
            base: m.base.clone(),
            arrow: self.cm.from_gh(&m.arrow.g, &m.arrow.h),
        }
    }

    pub fn theta_inverse(&self, t: &BundleMorphism<SampledPath>) -> DecoratedMorphism {
        let (g, h) = self.cm.to_gh(&t.arrow);
        decorated(t.base.clone(), g, h)
    }

    pub fn twisted(&self) -> TwistedBundle<'_, PathCategory, TransportEta> {
        TwistedBundle::new(&self.base, self.cm, self.eta)
    }
}

impl Bundle for DecoratedBundle<'_> {
    type B = PathCategory;

    fn base(&self) -> &PathCategory {
        &self.base
    }

    fn cm(&self) -> &CrossedModule {
        self.cm
    }

    fn source(&self, m: &BMor<Self>) -> BObj<Self> {
        self.dec_source(m)
    }

    fn target(&self, m: &BMor<Self>) -> BObj<Self> {
        self.dec_target(m)
    }

    fn compose(&self, m2: &BMor<Self>, m1: &BMor<Self>) -> Result<BMor<Self>> {
        self.dec_compose(m2, m1)
    }

    fn act(&self, m: &BMor<Self>, k: &TwoGroupMorphism) -> BMor<Self> {
        self.dec_act(m, k)
    }

    fn translation(&self, m: &BMor<Self>, n: &BMor<Self>) -> TwoGroupMorphism {
        let cm = self.cm;
        cm.sdp_multiply(&cm.sdp_inverse(&self.theta(m).arrow), &self.theta(n).arrow)
    }
}

/// A composable pair `m2 o m1` of decorated morphisms and an element `k` to
/// act with.
#[derive(Clone, Debug)]
pub struct DecoratedPair {
    pub m1: DecoratedMorphism,
    pub m2: DecoratedMorphism,
    pub k: TwoGroupMorphism,
}

pub fn path_config(n_pairs: usize) -> PathFamilyConfig {
    PathFamilyConfig {
        chains: n_pairs.div_ceil(2),
        ..PathFamilyConfig::default()
    }
}

/// `n_pairs` seeded composable pairs over the path family drawn from `seed`.
pub fn decorated_pairs(
    db: &DecoratedBundle<'_>,
    n_pairs: usize,
    checker: &Checker,
) -> (Family<SampledPath>, Vec<DecoratedPair>) {
    let family = db.base.family(checker.seed, &path_config(n_pairs));
    let (g, h) = (&db.cm.g, &db.cm.h);
    let pairs = family
        .pairs
        .iter()
        .take(n_pairs)
        .enumerate()
        .map(|(i, &(i2, i1))| {
            let mut rng = checker.rng("prop62", i as u64);
            let m1 = decorated(family.mors[i1].clone(), g.sample(&mut rng), h.sample(&mut rng));
            let g2 = db.dec_target(&m1).1;
            let h2 = if rng.random_bool(0.2) {
                h.identity()
            } else {
                h.sample(&mut rng)
            };
            let m2 = decorated(family.mors[i2].clone(), g2, h2);
            let k = TwoGroupMorphism::new(h.sample(&mut rng), g.sample(&mut rng));
            DecoratedPair { m1, m2, k }
        })
        .collect();
    (family, pairs)
}

/// Certifies that `Theta` is an isomorphism from the decorated bundle onto
/// the twisted product `U x_eta G` on seeded composable pairs, comparing
/// group parts within `eps_iso`.
pub fn verify_prop62(
    cm: &CrossedModule,
    eta: &TransportEta,
    n_pairs: usize,
    eps_iso: f64,
    checker: &Checker,
) -> Result<LawReport> {
    let db = DecoratedBundle::new(cm, eta)?;
    let tb = db.twisted();
    let (g, h) = (&cm.g, &cm.h);
    let (_, pairs) = decorated_pairs(&db, n_pairs, checker);
    let base = &db.base;
    let obj_close =
        |a: &(Point, Element), b: &(Point, Element)| base.obj_eq(&a.0, &b.0) && g.eq_within(&a.1, &b.1, eps_iso);
    let mor_close = |a: &BundleMorphism<SampledPath>, b: &BundleMorphism<SampledPath>| {
        base.mor_eq(&a.base, &b.base) && cm.mor_eq_within(&a.arrow, &b.arrow, eps_iso)
    };
    let fo = |x: &(Point, Element)| db.format_obj(x);
    let fm = |m: &DecoratedMorphism| db.format_mor(m);
    let mut report = LawReport::new("prop62");

    report.push(checker.each("prop62.source", "Eq 6.32", &pairs, |p| {
        [&p.m1, &p.m2].into_iter().find_map(|m| {
            let (s, st) = (db.dec_source(m), tb.tw_source(&db.theta(m)));
            (!obj_close(&s, &st)).then(|| format!("s({}) = {} but s_eta(Theta) = {}", fm(m), fo(&s), fo(&st)))
        })
    }));

    report.push(checker.each("prop62.target", "Eq 6.32", &pairs, |p| {
        [&p.m1, &p.m2].into_iter().find_map(|m| {
            let (t, tt) = (db.dec_target(m), tb.tw_target(&db.theta(m)));
            (!obj_close(&t, &tt)).then(|| format!("t({}) = {} but t_eta(Theta) = {}", fm(m), fo(&t), fo(&tt)))
        })
    }));

    report.push(checker.each("prop62.composition", "Eq 6.38", &pairs, |p| {
        let lhs = db.dec_compose(&p.m2, &p.m1).map(|c| db.theta(&c));
        let rhs = tb.tw_compose(&db.theta(&p.m2), &db.theta(&p.m1));
        match (lhs, rhs) {
            (Ok(l), Ok(r)) if mor_close(&l, &r) => None,
            (Ok(l), Ok(r)) => Some(format!(
                "Theta(m2 o m1) = {} but Theta(m2) o_eta Theta(m1) = {}",
                tb.format_mor(&l),
                tb.format_mor(&r)
            )),
            (Err(e), _) | (_, Err(e)) => Some(format!("{} o {}: {e}", fm(&p.m2), fm(&p.m1))),
        }
    }));

    // (gamma2 o gamma1, g1 h1 h2) read off the twisted composite in gh order
    report.push(checker.each("prop62.composition-formula", "Eq 6.35", &pairs, |p| {
        match tb.tw_compose(&db.theta(&p.m2), &db.theta(&p.m1)) {
            Ok(c) => {
                let (gc, hc) = cm.to_gh(&c.arrow);
                let h12 = h.multiply(&p.m1.arrow.h, &p.m2.arrow.h);
                (!(g.eq_within(&gc, &p.m1.arrow.g, eps_iso) && h.eq_within(&hc, &h12, eps_iso))).then(|| {
                    format!(
                        "composite is {} {} but g1 h1 h2 = {} {}",
                        g.format(&gc),
                        h.format(&hc),
                        g.format(&p.m1.arrow.g),
                        h.format(&h12)
                    )
                })
            }
            Err(e) => Some(e.to_string()),
        }
    }));

    report.push(checker.each("prop62.identities", "Prop 6.2", &pairs, |p| {
        let x = db.dec_source(&p.m1);
        let (id_d, id_t) = (db.identity(&x), tb.identity(&x));
        (!mor_close(&db.theta(&id_d), &id_t))
            .then(|| format!("Theta(1_{}) = {}", fo(&x), tb.format_mor(&db.theta(&id_d))))
    }));

    report.push(checker.each("prop62.equivariance", "Eq 6.24", &pairs, |p| {
        let lhs = db.theta(&db.dec_act(&p.m1, &p.k));
        let rhs = tb.tw_act(&db.theta(&p.m1), &p.k);
        let ends = obj_close(
            &db.dec_target(&db.dec_act(&p.m1, &p.k)),
            &db.act_obj(&db.dec_target(&p.m1), &cm.target(&p.k)),
        );
        (!(mor_close(&lhs, &rhs) && ends)).then(|| {
            format!(
                "Theta({} {}) = {} but Theta(m) k = {}",
                fm(&p.m1),
                cm.format_mor(&p.k),
                tb.format_mor(&lhs),
                tb.format_mor(&rhs)
            )
        })
    }));

    report.push(checker.each("prop62.inverse-round-trip", "Eq 6.31", &pairs, |p| {
        [&p.m1, &p.m2].into_iter().find_map(|m| {
            let back = db.theta_inverse(&db.theta(m));
            let again = db.theta(&back);
            let exact_base = back.base == m.base && again.base == m.base;
            let close = cm.mor_eq(&back.arrow, &m.arrow) && cm.mor_eq(&again.arrow, &db.theta(m).arrow);
            (!(exact_base && close)).then(|| format!("{} comes back as {}", fm(m), fm(&back)))
        })
    }));

    report.push(checker.each("prop62.horizontal-lift", "Eq 6.37", &pairs, |p| {
        let g1 = p.m1.arrow.g;
        let l1 = decorated(p.m1.base.clone(), g1, h.identity());
        let l2 = decorated(p.m2.base.clone(), db.dec_target(&l1).1, h.identity());
        match db.dec_compose(&l2, &l1) {
            Ok(c) => {
                let whole = db.dec_target(&decorated(c.base.clone(), g1, h.identity())).1;
                let split = g.multiply(
                    &transport_from(&eta.conn, &p.m2.base, eta.steps, db.transport(&p.m1.base)).ok()?,
                    &g1,
                );
                (!(h.is_identity(&c.arrow.h) && g.eq(&c.arrow.g, &g1) && g.eq_within(&whole, &split, eps_iso)))
                    .then(|| format!("{} o {} = {}", fm(&l2), fm(&l1), fm(&c)))
            }
            Err(e) => Some(e.to_string()),
        }
    }));

    report.push(LawRecord::single(
        "prop62.sample-size",
        "Prop 6.2",
        if pairs.len() >= n_pairs {
            Ok(())
        } else {
            Err(format!("{} pairs drawn, {n_pairs} requested", pairs.len()))
        },
    ));
    Ok(report.sorted())
}
