//! Certifiers for the functor encodings: `functor_from_h` round trips, the
//! pointwise group of functors, and natural transformations.

use super::bundle::ProductBundle;
use super::functor::{all_maps, FunctorSpace, FunctorUG};
use crate::algebra::{CrossedModule, Element};
use crate::base::{Base, Family, FiniteBase};
use crate::bundle::verify_bundle_axioms;
use crate::error::Result;
use crate::exec::{Checker, Draw, Factor};
use crate::report::LawReport;

fn compose_ok<B: FiniteBase>(sp: &FunctorSpace<'_, B>, f: &FunctorUG) -> Option<String> {
    let cm = sp.cm;
    sp.composable().iter().find_map(
        |&(i2, i1, i21)| match cm.compose_vertical(&sp.image(f, i2), &sp.image(f, i1)) {
            Ok(c) if cm.mor_eq(&c, &sp.image(f, i21)) => None,
            Ok(c) => Some(format!(
                "F({}) = {} but F(g2) o F(g1) = {}",
                sp.base.format_mor(&sp.base.morphisms()[i21]),
                cm.format_mor(&sp.image(f, i21)),
                cm.format_mor(&c)
            )),
            Err(e) => Some(e.to_string()),
        },
    )
}

fn ends_ok<B: FiniteBase>(sp: &FunctorSpace<'_, B>, f: &FunctorUG) -> Option<String> {
    let cm = sp.cm;
    (0..sp.morphism_count()).find_map(|i| {
        let (s, t) = sp.ends(i);
        let img = sp.image(f, i);
        (!(cm.g.eq(&cm.source(&img), &f.g[s]) && cm.g.eq(&cm.target(&img), &f.g[t]))).then(|| {
            format!(
                "image of {} is {}",
                sp.base.format_mor(&sp.base.morphisms()[i]),
                cm.format_mor(&img)
            )
        })
    })
}

/// Bundle axioms of `U x G -> U` over the given objects and morphism family.
pub fn verify_product_bundle<B: Base>(
    base: &B,
    cm: &CrossedModule,
    objects: &[B::Obj],
    family: &Family<B::Mor>,
    checker: &Checker,
) -> LawReport {
    verify_bundle_axioms(
        &ProductBundle::new(base, cm),
        "product",
        "Eq 3.4",
        objects,
        family,
        checker,
    )
}

/// For every `h: Ob(U) -> H` (finite `H`), `functor_from_h(h)` satisfies
/// multiplicativity, the boundary relation and identities, is a functor, and
/// reads back unchanged; every functor in `functors` is a functor.
pub fn verify_prop31<B: FiniteBase>(
    sp: &FunctorSpace<'_, B>,
    functors: &[FunctorUG],
    checker: &Checker,
) -> Result<LawReport> {
    let (g, h, cm) = (&sp.cm.g, &sp.cm.h, sp.cm);
    let hs = all_maps(h, sp.object_count())?;
    let built: Vec<(Vec<Element>, FunctorUG)> = hs
        .into_iter()
        .map(|x| sp.functor_from_h(&x).map(|f| (x, f)))
        .collect::<Result<_>>()?;
    let fmt = |f: &FunctorUG| sp.format_functor(f);
    let mname = |i: usize| sp.base.format_mor(&sp.base.morphisms()[i]);
    let mut report = LawReport::new("prop31-roundtrip");

    report.push(checker.each("prop31.from-h", "Eq 3.9", &built, |(x, f)| {
        (0..sp.object_count())
            .find_map(|a| (!g.eq(&f.g[a], &cm.tau(&x[a]))).then(|| format!("g({a}) is not tau(h({a}))")))
            .or_else(|| {
                (0..sp.morphism_count()).find_map(|i| {
                    let (s, t) = sp.ends(i);
                    let want = h.multiply(&x[t], &h.inverse(&x[s]));
                    (!h.eq(&f.h[i], &want)).then(|| {
                        format!(
                            "h({}) = {} but h(t) h(s)^-1 = {}",
                            mname(i),
                            h.format(&f.h[i]),
                            h.format(&want)
                        )
                    })
                })
            })
    }));

    report.push(checker.each("prop31.multiplicativity", "Eq 3.7", &built, |(_, f)| {
        sp.composable().iter().find_map(|&(i2, i1, i21)| {
            let prod = h.multiply(&f.h[i2], &f.h[i1]);
            (!h.eq(&f.h[i21], &prod)).then(|| {
                format!(
                    "{}: h({}) = {} but h({}) h({}) = {}",
                    fmt(f),
                    mname(i21),
                    h.format(&f.h[i21]),
                    mname(i2),
                    mname(i1),
                    h.format(&prod)
                )
            })
        })
    }));

    report.push(checker.each("prop31.boundary", "Eq 3.8", &built, |(_, f)| {
        (0..sp.morphism_count()).find_map(|i| {
            let (s, t) = sp.ends(i);
            let rhs = g.multiply(&f.g[t], &g.inverse(&f.g[s]));
            (!g.eq(&cm.tau(&f.h[i]), &rhs)).then(|| {
                format!(
                    "{}: tau(h({})) = {} but g(t) g(s)^-1 = {}",
                    fmt(f),
                    mname(i),
                    g.format(&cm.tau(&f.h[i])),
                    g.format(&rhs)
                )
            })
        })
    }));

    report.push(checker.each("prop31.identities", "Prop 3.1", &built, |(_, f)| {
        (0..sp.object_count()).find_map(|x| {
            let i = sp.identity_index(x);
            (!h.is_identity(&f.h[i])).then(|| format!("{}: h({}) = {}", fmt(f), mname(i), h.format(&f.h[i])))
        })
    }));

    report.push(checker.each("prop31.functoriality", "Eq 3.6", &built, |(_, f)| {
        ends_ok(sp, f)
            .or_else(|| compose_ok(sp, f))
            .map(|e| format!("{}: {e}", fmt(f)))
    }));

    report.push(checker.each("prop31.read-back", "Prop 3.1", &built, |(_, f)| {
        match sp.from_table(f.g.clone(), f.h.clone()) {
            Ok(back) if sp.functor_eq(&back, f) => None,
            Ok(back) => Some(format!("{} read back as {}", fmt(f), fmt(&back))),
            Err(e) => Some(format!("{}: {e}", fmt(f))),
        }
    }));

    report.push(checker.each("prop31.converse", "Prop 3.1", functors, |f| {
        sp.check(f)
            .err()
            .or_else(|| ends_ok(sp, f))
            .or_else(|| compose_ok(sp, f))
            .map(|e| format!("{}: {e}", fmt(f)))
    }));
    Ok(report.sorted())
}

/// Functors `U -> G` form a group under pointwise multiplication.
pub fn verify_prop32<B: FiniteBase>(sp: &FunctorSpace<'_, B>, functors: &[FunctorUG], checker: &Checker) -> LawReport {
    let cm = sp.cm;
    let n = functors.len();
    let fmt = |f: &FunctorUG| sp.format_functor(f);
    let e = sp.unit();
    let mut report = LawReport::new("prop32-functor-group");

    report.push(checker.law(
        "prop32.closure",
        "Eq 3.27",
        &[Factor::Range(n), Factor::Range(n)],
        |d| {
            let (f2, f1) = (&functors[d.index(0)], &functors[d.index(1)]);
            let p = sp.product(f2, f1);
            sp.check(&p)
                .err()
                .or_else(|| compose_ok(sp, &p))
                .map(|err| format!("F2={}, F1={}: {err}", fmt(f2), fmt(f1)))
        },
    ));

    report.push(checker.law(
        "prop32.associativity",
        "Prop 3.2",
        &[Factor::Range(n), Factor::Range(n), Factor::Range(n)],
        |d| {
            let (a, b, c) = (&functors[d.index(0)], &functors[d.index(1)], &functors[d.index(2)]);
            let lhs = sp.product(&sp.product(a, b), c);
            let rhs = sp.product(a, &sp.product(b, c));
            (!sp.functor_eq(&lhs, &rhs)).then(|| format!("{} | {} | {}", fmt(a), fmt(b), fmt(c)))
        },
    ));

    report.push(checker.each("prop32.unit", "Prop 3.2", functors, |f| {
        (!(sp.functor_eq(&sp.product(&e, f), f) && sp.functor_eq(&sp.product(f, &e), f))).then(|| fmt(f))
    }));

    report.push(checker.each("prop32.inverse", "Eq 3.28", functors, |f| {
        let inv = sp.inverse(f);
        if let Err(err) = sp.check(&inv) {
            return Some(format!("inverse of {}: {err}", fmt(f)));
        }
        let images = (0..sp.morphism_count()).all(|i| cm.mor_eq(&sp.image(&inv, i), &cm.sdp_inverse(&sp.image(f, i))));
        let cancels = sp.functor_eq(&sp.product(f, &inv), &e) && sp.functor_eq(&sp.product(&inv, f), &e);
        (!(images && cancels)).then(|| format!("{} with inverse {}", fmt(f), fmt(&inv)))
    }));
    report.sorted()
}

/// Natural transformations out of each functor: component formulas and
/// naturality, vertical composition, and identities.
pub fn verify_prop33<B: FiniteBase>(
    sp: &FunctorSpace<'_, B>,
    functors: &[FunctorUG],
    checker: &Checker,
) -> Result<LawReport> {
    let h = &sp.cm.h;
    let no = sp.object_count();
    let comps = |d: &Draw, from: usize| -> Vec<Element> { (from..from + no).map(|k| d.elem(k)).collect() };
    let mut one = vec![Factor::Range(functors.len())];
    one.extend((0..no).map(|_| Factor::Group(h)));
    let mut two = one.clone();
    two.extend((0..no).map(|_| Factor::Group(h)));
    let mut report = LawReport::new("prop33-naturality");

    report.push(checker.law("prop33.components", "Eq 3.12", &one, |d| {
        let f = &functors[d.index(0)];
        match sp.nat(f, comps(d, 1)) {
            Ok(t) => sp.check_nat(&t).err().map(|e| format!("{}: {e}", sp.format_nat(&t))),
            Err(e) => Some(e.to_string()),
        }
    }));

    report.push(checker.law("prop33.vertical", "Eq 3.15", &two, |d| {
        let f = &functors[d.index(0)];
        let run = || -> Result<Option<String>> {
            let t1 = sp.nat(f, comps(d, 1))?;
            let t2 = sp.nat(&t1.target, comps(d, 1 + no))?;
            let v = sp.nat_vertical(&t2, &t1)?;
            let direct = sp.nat(f, (0..no).map(|x| h.multiply(&t2.ht[x], &t1.ht[x])).collect())?;
            Ok(match sp.check_nat(&v) {
                Err(e) => Some(e),
                Ok(()) if !sp.nat_eq(&v, &direct) => {
                    Some(format!("{} is not {}", sp.format_nat(&v), sp.format_nat(&direct)))
                }
                Ok(()) => None,
            })
        };
        run().unwrap_or_else(|e| Some(e.to_string()))
    }));

    report.push(checker.law("prop33.identity", "Eq 3.15", &one, |d| {
        let f = &functors[d.index(0)];
        let run = || -> Result<bool> {
            let t = sp.nat(f, comps(d, 1))?;
            let left = sp.nat_vertical(&sp.nat_identity(&t.target), &t)?;
            let right = sp.nat_vertical(&t, &sp.nat_identity(f))?;
            Ok(sp.nat_eq(&left, &t) && sp.nat_eq(&right, &t))
        };
        match run() {
            Ok(true) => None,
            Ok(false) => Some(sp.format_functor(f)),
            Err(e) => Some(e.to_string()),
        }
    }));
    Ok(report.sorted())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{lookup, Perm};
    use crate::base::QuiverCategory;

    #[test]
    fn s3_functor_from_h_single_arrow() {
        let q = QuiverCategory::chain(2, 1);
        let cm = lookup("s3-conj").unwrap();
        let sp = FunctorSpace::new(&q, &cm).unwrap();
        let p = |s: &str| Element::Perm(Perm::parse(3, s).unwrap());
        let f = sp.functor_from_h(&[p("(12)"), p("(123)")]).unwrap();
        let i = sp.base.mor_index(&q.arrow("f1").unwrap()).unwrap();
        // (123)(12)^-1 = (123)(12), composed right to left
        let expected = Perm::parse(3, "(123)")
            .unwrap()
            .compose(&Perm::parse(3, "(12)").unwrap());
        assert_eq!(f.h[i], Element::Perm(expected));
    }

    #[test]
    fn three_object_suites_pass() {
        let q = QuiverCategory::chain(3, 2);
        for id in ["z4-conj", "s3-conj"] {
            let cm = lookup(id).unwrap();
            let sp = FunctorSpace::new(&q, &cm).unwrap();
            let fs = sp.all_functors().unwrap();
            let c = Checker::new(0, 20_000);
            for r in [
                verify_prop31(&sp, &fs, &c).unwrap(),
                verify_prop32(&sp, &fs, &c),
                verify_prop33(&sp, &fs, &c).unwrap(),
            ] {
                assert!(r.passed(), "{id}\n{}", r.to_table());
            }
        }
    }

    #[test]
    fn broken_functor_is_caught() {
        let q = QuiverCategory::chain(3, 2);
        let cm = lookup("s3-conj").unwrap();
        let sp = FunctorSpace::new(&q, &cm).unwrap();
        let mut f = sp.all_functors().unwrap()[7].clone();
        let i = sp.base.mor_index(&q.parse_word("f2.f1").unwrap()).unwrap();
        f.h[i] = cm.h.multiply(&f.h[i], &cm.h.elements().unwrap()[1]);
        let r = verify_prop31(&sp, &[f], &Checker::new(0, 100)).unwrap();
        assert!(!r.record("prop31.converse").unwrap().passed());
        assert!(r.record("prop31.multiplicativity").unwrap().passed());
    }
}
