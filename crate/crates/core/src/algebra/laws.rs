//! Mechanical certification of group, crossed-module and categorical-group laws.

use super::crossed::CrossedModule;
use super::group::{Element, Group};
use super::morphism::TwoGroupMorphism;
use crate::error::Result;
use crate::exec::{Checker, Factor};
use crate::report::LawReport;

/// Associativity, identity and inverse laws of a single group.
pub fn verify_group_laws(group: &Group, label: &str, checker: &Checker) -> LawReport {
    let mut report = LawReport::new(format!("group-{label}"));
    let f = |s: &Element| group.format(s);
    report.push(checker.law(
        &format!("group.{label}.associativity"),
        "§2.1",
        &[Factor::Group(group), Factor::Group(group), Factor::Group(group)],
        |d| {
            let (a, b, c) = (d.elem(0), d.elem(1), d.elem(2));
            let lhs = group.multiply(&group.multiply(&a, &b), &c);
            let rhs = group.multiply(&a, &group.multiply(&b, &c));
            (!group.eq(&lhs, &rhs)).then(|| format!("a={}, b={}, c={}", f(&a), f(&b), f(&c)))
        },
    ));
    report.push(checker.law(
        &format!("group.{label}.identity-inverse"),
        "§2.1",
        &[Factor::Group(group)],
        |d| {
            let a = d.elem(0);
            let e = group.identity();
            let ok = group.eq(&group.multiply(&e, &a), &a)
                && group.eq(&group.multiply(&a, &e), &a)
                && group.is_identity(&group.multiply(&a, &group.inverse(&a)))
                && group.is_identity(&group.multiply(&group.inverse(&a), &a));
            (!ok).then(|| format!("a={}", f(&a)))
        },
    ));
    report
}

/// Checks every crossed-module axiom. Returns a structural error (not a
/// failing report) when `alpha` or `tau` leave their carriers.
pub fn verify_crossed_module(cm: &CrossedModule, checker: &Checker) -> Result<LawReport> {
    let mut rng = checker.rng("cm.structure", 0);
    cm.check_structure(&mut rng, 64)?;

    let mut report = LawReport::new("crossed-module");
    report.absorb(verify_group_laws(&cm.g, "G", checker));
    report.absorb(verify_group_laws(&cm.h, "H", checker));
    let (g, h) = (&cm.g, &cm.h);
    let fg = |x: &Element| g.format(x);
    let fh = |x: &Element| h.format(x);

    report.push(
        checker.law("cm.tau-hom", "§2.1", &[Factor::Group(h), Factor::Group(h)], |d| {
            let (a, b) = (d.elem(0), d.elem(1));
            let lhs = cm.tau(&h.multiply(&a, &b));
            let rhs = g.multiply(&cm.tau(&a), &cm.tau(&b));
            (!g.eq(&lhs, &rhs)).then(|| format!("h={}, h'={}", fh(&a), fh(&b)))
        }),
    );

    report.push(checker.law(
        "cm.alpha-automorphism",
        "§2.1",
        &[Factor::Group(g), Factor::Group(h), Factor::Group(h)],
        |d| {
            let (x, a, b) = (d.elem(0), d.elem(1), d.elem(2));
            let hom = h.eq(
                &cm.alpha(&x, &h.multiply(&a, &b)),
                &h.multiply(&cm.alpha(&x, &a), &cm.alpha(&x, &b)),
            );
            // alpha_{g^-1} is a two-sided inverse of alpha_g
            let inv = h.eq(&cm.alpha(&g.inverse(&x), &cm.alpha(&x, &a)), &a)
                && h.eq(&cm.alpha(&x, &cm.alpha(&g.inverse(&x), &a)), &a);
            (!(hom && inv)).then(|| format!("g={}, h={}, h'={}", fg(&x), fh(&a), fh(&b)))
        },
    ));

    report.push(checker.law(
        "cm.alpha-hom",
        "§2.1",
        &[Factor::Group(g), Factor::Group(g), Factor::Group(h)],
        |d| {
            let (x, y, a) = (d.elem(0), d.elem(1), d.elem(2));
            let lhs = cm.alpha(&g.multiply(&x, &y), &a);
            let rhs = cm.alpha(&x, &cm.alpha(&y, &a));
            (!h.eq(&lhs, &rhs)).then(|| format!("g={}, g'={}, h={}", fg(&x), fg(&y), fh(&a)))
        },
    ));

    report.push(
        checker.law("cm.peiffer", "Eq 2.4", &[Factor::Group(h), Factor::Group(h)], |d| {
            let (a, b) = (d.elem(0), d.elem(1));
            let lhs = cm.alpha(&cm.tau(&a), &b);
            let rhs = h.conjugate(&a, &b);
            (!h.eq(&lhs, &rhs)).then(|| {
                format!(
                    "h={}, h'={}: alpha_tau(h)(h')={} but h h' h^-1={}",
                    fh(&a),
                    fh(&b),
                    fh(&lhs),
                    fh(&rhs)
                )
            })
        }),
    );

    report.push(checker.law(
        "cm.tau-equivariance",
        "Eq 2.11",
        &[Factor::Group(g), Factor::Group(h)],
        |d| {
            let (x, a) = (d.elem(0), d.elem(1));
            let lhs = cm.tau(&cm.alpha(&x, &a));
            let rhs = g.conjugate(&x, &cm.tau(&a));
            (!g.eq(&lhs, &rhs)).then(|| format!("g={}, h={}", fg(&x), fh(&a)))
        },
    ));

    Ok(report.sorted())
}

fn two(d: &crate::exec::Draw, k: usize) -> TwoGroupMorphism {
    TwoGroupMorphism::new(d.elem(k), d.elem(k + 1))
}

/// Checks `(phi2 psi2) o (phi1 psi1) = (phi2 o phi1)(psi2 o psi1)` over
/// composable quadruples. The quadruple is parametrized freely by
/// `(h1, g1, h2)` for each of `phi` and `psi`, with the source of the second
/// factor forced to the target of the first.
pub fn verify_exchange_law(cm: &CrossedModule, checker: &Checker) -> LawReport {
    let mut report = LawReport::new("exchange-law");
    let (g, h) = (&cm.g, &cm.h);
    let factors = [
        Factor::Group(h),
        Factor::Group(g),
        Factor::Group(h),
        Factor::Group(h),
        Factor::Group(g),
        Factor::Group(h),
    ];
    report.push(checker.law("twogroup.exchange-law", "Eq 2.3", &factors, |d| {
        let phi1 = two(d, 0);
        let phi2 = TwoGroupMorphism::new(d.elem(2), cm.target(&phi1));
        let psi1 = two(d, 3);
        let psi2 = TwoGroupMorphism::new(d.elem(5), cm.target(&psi1));
        let fm = |m| cm.format_mor(m);
        let witness = || {
            format!(
                "phi1={}, phi2={}, psi1={}, psi2={}",
                fm(&phi1),
                fm(&phi2),
                fm(&psi1),
                fm(&psi2)
            )
        };
        let lhs = cm.compose_vertical(&cm.sdp_multiply(&phi2, &psi2), &cm.sdp_multiply(&phi1, &psi1));
        let rhs = cm
            .compose_vertical(&phi2, &phi1)
            .and_then(|a| cm.compose_vertical(&psi2, &psi1).map(|b| cm.sdp_multiply(&a, &b)));
        match (lhs, rhs) {
            (Ok(l), Ok(r)) if cm.mor_eq(&l, &r) => None,
            (Ok(l), Ok(r)) => Some(format!("{}: lhs={}, rhs={}", witness(), fm(&l), fm(&r))),
            (Err(e), _) | (_, Err(e)) => Some(format!("{}: {e}", witness())),
        }
    }));
    report
}

/// Structural properties of the categorical group built from `cm`: the
/// morphism group laws, `s`/`t`/identity-assignment being homomorphisms, and
/// associativity and unit laws of vertical composition.
pub fn verify_two_group(cm: &CrossedModule, checker: &Checker) -> LawReport {
    let mut report = LawReport::new("two-group");
    let (g, h) = (&cm.g, &cm.h);
    let fm = |m: &TwoGroupMorphism| cm.format_mor(m);
    let pair = [Factor::Group(h), Factor::Group(g), Factor::Group(h), Factor::Group(g)];

    report.push(checker.law(
        "twogroup.mor-associativity",
        "Eq 2.8",
        &[
            Factor::Group(h),
            Factor::Group(g),
            Factor::Group(h),
            Factor::Group(g),
            Factor::Group(h),
            Factor::Group(g),
        ],
        |d| {
            let (a, b, c) = (two(d, 0), two(d, 2), two(d, 4));
            let lhs = cm.sdp_multiply(&cm.sdp_multiply(&a, &b), &c);
            let rhs = cm.sdp_multiply(&a, &cm.sdp_multiply(&b, &c));
            (!cm.mor_eq(&lhs, &rhs)).then(|| format!("{} {} {}", fm(&a), fm(&b), fm(&c)))
        },
    ));

    report.push(checker.law(
        "twogroup.mor-inverse",
        "Eq 2.8",
        &[Factor::Group(h), Factor::Group(g)],
        |d| {
            let a = two(d, 0);
            let inv = cm.sdp_inverse(&a);
            let ok = cm.mor_eq(&cm.sdp_multiply(&a, &inv), &cm.unit())
                && cm.mor_eq(&cm.sdp_multiply(&inv, &a), &cm.unit())
                && cm.mor_eq(&cm.sdp_multiply(&cm.unit(), &a), &a);
            (!ok).then(|| fm(&a))
        },
    ));

    report.push(checker.law("twogroup.source-target-hom", "Eq 2.2", &pair, |d| {
        let (a, b) = (two(d, 0), two(d, 2));
        let ab = cm.sdp_multiply(&a, &b);
        let s_ok = g.eq(&cm.source(&ab), &g.multiply(&cm.source(&a), &cm.source(&b)));
        let t_ok = g.eq(&cm.target(&ab), &g.multiply(&cm.target(&a), &cm.target(&b)));
        (!(s_ok && t_ok)).then(|| format!("{} {}", fm(&a), fm(&b)))
    }));

    report.push(checker.law(
        "twogroup.identity-assignment-hom",
        "§2.1",
        &[Factor::Group(g), Factor::Group(g)],
        |d| {
            let (x, y) = (d.elem(0), d.elem(1));
            let lhs = cm.identity_at(&g.multiply(&x, &y));
            let rhs = cm.sdp_multiply(&cm.identity_at(&x), &cm.identity_at(&y));
            (!cm.mor_eq(&lhs, &rhs)).then(|| format!("g={}, g'={}", g.format(&x), g.format(&y)))
        },
    ));

    report.push(checker.law(
        "twogroup.compose-associativity",
        "Eq 2.13",
        &[Factor::Group(h), Factor::Group(g), Factor::Group(h), Factor::Group(h)],
        |d| {
            let m1 = two(d, 0);
            let m2 = TwoGroupMorphism::new(d.elem(2), cm.target(&m1));
            let m3 = TwoGroupMorphism::new(d.elem(3), cm.target(&m2));
            let lhs = cm.compose_vertical(&m3, &m2).and_then(|x| cm.compose_vertical(&x, &m1));
            let rhs = cm.compose_vertical(&m2, &m1).and_then(|x| cm.compose_vertical(&m3, &x));
            match (lhs, rhs) {
                (Ok(l), Ok(r)) if cm.mor_eq(&l, &r) => None,
                _ => Some(format!("{} {} {}", fm(&m3), fm(&m2), fm(&m1))),
            }
        },
    ));

    report.push(checker.law(
        "twogroup.compose-units",
        "Eq 2.13",
        &[Factor::Group(h), Factor::Group(g)],
        |d| {
            let m = two(d, 0);
            let left = cm.compose_vertical(&cm.identity_at(&cm.target(&m)), &m);
            let right = cm.compose_vertical(&m, &cm.identity_at(&cm.source(&m)));
            let inv = cm.compose_vertical(&cm.compositional_inverse(&m), &m);
            let ok = matches!(&left, Ok(x) if cm.mor_eq(x, &m))
                && matches!(&right, Ok(x) if cm.mor_eq(x, &m))
                && matches!(&inv, Ok(x) if cm.mor_eq(x, &cm.identity_at(&m.g)));
            (!ok).then(|| fm(&m))
        },
    ));

    report.sorted()
}
