//! Named verification suites and their dispatch from a scenario.

use crate::algebra::{verify_crossed_module, verify_exchange_law, verify_two_group, CrossedModule, Element, Group};
use crate::base::{verify_category_laws, FiniteBase, Point, QuiverCategory};
use crate::cocycle::{verify_cocycle_condition, verify_prop51, verify_theta_functors, verify_transition_cocycle};
use crate::decorated::{verify_prop62, verify_transport, TransportEta};
use crate::error::{Error, Result};
use crate::exec::Checker;
use crate::product::{
    index_fits, section_to_iso, verify_composition_correspondence, verify_gu_categorical_group, verify_product_bundle,
    verify_prop31, verify_prop32, verify_prop33, verify_section_iso, FunctorSpace, FunctorUG,
};
use crate::report::LawReport;
use crate::scenario::{EtaKind, Scenario};
use crate::twisted::{verify_twisted_bundle, verify_twisted_family};

/// Scenario sections a suite reads.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Need {
    Quiver,
    Base,
    Cover,
    Cocycle,
    Eta,
    Connection,
}

impl Need {
    pub fn name(self) -> &'static str {
        match self {
            Need::Quiver => "quiver",
            Need::Base => "quiver or paths",
            Need::Cover => "cover",
            Need::Cocycle => "cocycle",
            Need::Eta => "eta",
            Need::Connection => "connection",
        }
    }

    fn met(self, sc: &Scenario) -> bool {
        match self {
            Need::Quiver => sc.quiver.is_some(),
            Need::Base => sc.quiver.is_some() || sc.path_dim().is_ok(),
            Need::Cover => sc.cover.is_some(),
            Need::Cocycle => sc.cocycle.is_some(),
            Need::Eta => sc.eta.is_some(),
            Need::Connection => sc.connection.is_some(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteInfo {
    pub name: &'static str,
    pub summary: &'static str,
    pub needs: &'static [Need],
    /// The certifiers the suite runs, directly or through another.
    pub covers: &'static [&'static str],
}

use Need::*;

pub const SUITES: &[SuiteInfo] = &[
    SuiteInfo {
        name: "crossed-module",
        summary: "group laws of G and H, action and boundary homomorphisms, Peiffer identities",
        needs: &[],
        covers: &["verify_crossed_module", "verify_group_laws"],
    },
    SuiteInfo {
        name: "exchange-law",
        summary: "interchange of vertical composition and group multiplication in H x| G",
        needs: &[],
        covers: &["verify_exchange_law"],
    },
    SuiteInfo {
        name: "two-group",
        summary: "source, target, identity and composition of the categorical group",
        needs: &[],
        covers: &["verify_two_group"],
    },
    SuiteInfo {
        name: "category-laws",
        summary: "associativity and units of the base category",
        needs: &[Base],
        covers: &["verify_category_laws"],
    },
    SuiteInfo {
        name: "product-bundle",
        summary: "bundle axioms of the product U x G",
        needs: &[Base],
        covers: &["verify_product_bundle", "verify_bundle_axioms"],
    },
    SuiteInfo {
        name: "prop31-roundtrip",
        summary: "functors from object data: multiplicativity, boundary relation, functoriality",
        needs: &[Quiver],
        covers: &["verify_prop31"],
    },
    SuiteInfo {
        name: "prop32-functor-group",
        summary: "functors U -> G under pointwise multiplication form a group",
        needs: &[Quiver],
        covers: &["verify_prop32"],
    },
    SuiteInfo {
        name: "prop33-naturality",
        summary: "natural transformations: component formulas, naturality, vertical composition",
        needs: &[Quiver],
        covers: &["verify_prop33"],
    },
    SuiteInfo {
        name: "prop34",
        summary: "functors and natural transformations form a categorical group",
        needs: &[Quiver],
        covers: &["verify_gu_categorical_group"],
    },
    SuiteInfo {
        name: "prop41",
        summary: "the trivialization induced by a section is an equivariant bundle isomorphism",
        needs: &[Quiver],
        covers: &["verify_section_iso"],
    },
    SuiteInfo {
        name: "prop42",
        summary: "composing automorphisms multiplies their functors",
        needs: &[Quiver],
        covers: &["verify_composition_correspondence"],
    },
    SuiteInfo {
        name: "cocycle",
        summary: "cocycle condition on triple overlaps and functoriality of theta",
        needs: &[Quiver, Cover, Cocycle],
        covers: &["verify_cocycle_condition", "verify_theta_functors"],
    },
    SuiteInfo {
        name: "prop51",
        summary: "the natural transformation theta_im => theta_ik theta_km on a triple overlap",
        needs: &[Quiver, Cover, Cocycle],
        covers: &["verify_prop51"],
    },
    SuiteInfo {
        name: "transition-cocycle",
        summary: "transition functors from trivializations satisfy the strict cocycle relation",
        needs: &[Quiver, Cover],
        covers: &["verify_transition_cocycle"],
    },
    SuiteInfo {
        name: "prop61",
        summary: "twisted product bundle: eta, bundle axioms, E_eta, degeneration",
        needs: &[Eta],
        covers: &[
            "verify_twisted_bundle",
            "verify_twisted_family",
            "verify_eta_homomorphism",
            "verify_e_properties",
            "verify_degeneration",
            "verify_bundle_axioms",
        ],
    },
    SuiteInfo {
        name: "transport",
        summary: "parallel transport: closed form, multiplicativity, reversal, convergence order",
        needs: &[Connection],
        covers: &["verify_transport"],
    },
    SuiteInfo {
        name: "prop62",
        summary: "Theta from the decorated bundle onto the twisted product is an isomorphism",
        needs: &[Connection],
        covers: &["verify_prop62"],
    },
];

pub fn suite_info(name: &str) -> Result<&'static SuiteInfo> {
    SUITES
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::unknown("suite", name))
}

/// Suites whose required sections are all present.
pub fn applicable_suites(sc: &Scenario) -> Vec<&'static str> {
    SUITES
        .iter()
        .filter(|s| s.needs.iter().all(|n| n.met(sc)))
        .filter(|s| {
            s.name != "prop61"
                || sc
                    .eta_kind()
                    .map(|k| k != EtaKind::Transport || sc.connection.is_some())
                    .unwrap_or(false)
        })
        .filter(|s| !ENUMERATING.contains(&s.name) || enumerable(sc, s.name))
        .map(|s| s.name)
        .collect()
}

/// The scenario's own suite list, or every applicable suite when it has none.
pub fn selected_suites(sc: &Scenario) -> Vec<String> {
    if sc.suites.is_empty() {
        applicable_suites(sc).into_iter().map(String::from).collect()
    } else {
        sc.suites.clone()
    }
}

const ENUMERATION_LIMIT: f64 = 1e6;
const ENUMERATING: [&str; 4] = [
    "prop31-roundtrip",
    "prop32-functor-group",
    "prop33-naturality",
    "prop34",
];

fn enumerable(sc: &Scenario, name: &str) -> bool {
    let (Ok(q), Ok(cm)) = (sc.quiver(), sc.crossed_module()) else {
        return false;
    };
    let Ok(sp) = FunctorSpace::new(&q, &cm) else {
        return false;
    };
    let Ok(fs) = all_functors(&sp) else {
        return false;
    };
    if name != "prop34" {
        return true;
    }
    let nh =
        cm.h.order()
            .map(|n| (n as f64).powi(sp.object_count() as i32))
            .unwrap_or(f64::INFINITY);
    nh < 1e9 && index_fits(fs.len(), nh as usize)
}

fn all_functors(sp: &FunctorSpace<'_, QuiverCategory>) -> Result<Vec<FunctorUG>> {
    let (g, h) = (&sp.cm.g, &sp.cm.h);
    let (Some(ng), Some(nh)) = (g.order(), h.order()) else {
        return Err(Error::Input(format!(
            "enumerating functors needs finite groups, not {} and {}",
            g.name(),
            h.name()
        )));
    };
    let n = sp.object_count() as f64;
    if (ng as f64).powf(n) > ENUMERATION_LIMIT || (nh as f64).powf(n) > ENUMERATION_LIMIT {
        return Err(Error::Input(format!(
            "{} objects are too many to enumerate functors into {} x| {}",
            sp.object_count(),
            h.name(),
            g.name()
        )));
    }
    sp.all_functors()
}

fn random_table(h: &Group, n: usize, checker: &Checker, k: u64) -> Vec<Element> {
    let mut rng = checker.rng("functor", k);
    (0..n).map(|_| h.sample(&mut rng)).collect()
}

fn functor_pair(
    sc: &Scenario,
    sp: &FunctorSpace<'_, QuiverCategory>,
    checker: &Checker,
) -> Result<(FunctorUG, FunctorUG)> {
    let n = sp.object_count();
    let mut tables = if sc.functor.is_some() {
        sc.functor_tables(sp.cm)?
    } else {
        Vec::new()
    };
    while tables.len() < 2 {
        tables.push(random_table(&sp.cm.h, n, checker, tables.len() as u64));
    }
    Ok((sp.functor_from_h(&tables[0])?, sp.functor_from_h(&tables[1])?))
}

fn quiver_suite(sc: &Scenario, cm: &CrossedModule, name: &str, checker: &Checker) -> Result<LawReport> {
    let q = sc.quiver()?;
    let sp = FunctorSpace::new(&q, cm)?;
    match name {
        "prop31-roundtrip" => verify_prop31(&sp, &all_functors(&sp)?, checker),
        "prop32-functor-group" => Ok(verify_prop32(&sp, &all_functors(&sp)?, checker)),
        "prop33-naturality" => verify_prop33(&sp, &all_functors(&sp)?, checker),
        "prop34" => verify_gu_categorical_group(&sp, &all_functors(&sp)?, checker),
        "prop41" => verify_section_iso(&sp, &functor_pair(sc, &sp, checker)?.0, checker),
        "prop42" => {
            let (f2, f1) = functor_pair(sc, &sp, checker)?;
            let (i2, i1) = (section_to_iso(&sp, &f2)?, section_to_iso(&sp, &f1)?);
            verify_composition_correspondence(&sp, i2.to_map(), i1.to_map())
        }
        _ => unreachable!("not a quiver suite: {name}"),
    }
}

fn cover_suite(sc: &Scenario, cm: &CrossedModule, name: &str, checker: &Checker) -> Result<LawReport> {
    let q = sc.quiver()?;
    let cover = sc.cover(&q)?;
    let (lower, upper) = sc.triple()?;
    match name {
        "cocycle" => {
            let data = sc.cocycle(cm, &q, &cover)?;
            let mut r = verify_cocycle_condition(cm, &q, &data, checker);
            r.push(verify_theta_functors(cm, &q, &data, checker)?);
            Ok(r.sorted())
        }
        "prop51" => verify_prop51(cm, &q, &sc.cocycle(cm, &q, &cover)?, lower, upper, checker),
        "transition-cocycle" => {
            let triv = sc.trivializations(cm, &q, &cover)?;
            verify_transition_cocycle(cm, &q, &cover, &triv, lower, upper, checker)
        }
        _ => unreachable!("not a cover suite: {name}"),
    }
}

fn base_suite(sc: &Scenario, cm: &CrossedModule, name: &str, checker: &Checker) -> Result<LawReport> {
    if sc.quiver.is_some() {
        let q = sc.quiver()?;
        let fam = q.family();
        return Ok(match name {
            "category-laws" => verify_category_laws(&q, &fam, checker),
            _ => verify_product_bundle(&q, cm, q.objects(), &fam, checker),
        });
    }
    let p = sc.path_category()?;
    let fam = p.family(sc.seed, &sc.path_config());
    let objects: Vec<Point> = fam.mors.iter().map(|m| m.start()).collect();
    Ok(match name {
        "category-laws" => verify_category_laws(&p, &fam, checker),
        _ => verify_product_bundle(&p, cm, &objects, &fam, checker),
    })
}

fn transport_eta(sc: &Scenario) -> Result<TransportEta> {
    TransportEta::new(sc.connection()?, sc.steps)
}

/// Runs suite `name` on the scenario with its own seed and budget.
pub fn run_suite(sc: &Scenario, name: &str) -> Result<LawReport> {
    run_suite_with(sc, name, &sc.checker())
}

pub fn run_suite_with(sc: &Scenario, name: &str, checker: &Checker) -> Result<LawReport> {
    let info = suite_info(name)?;
    if let Some(n) = info.needs.iter().find(|n| !n.met(sc)) {
        return Err(Error::Input(format!("suite {name} needs a {} section", n.name())));
    }
    let cm = sc.crossed_module()?;
    let report = match name {
        "crossed-module" => verify_crossed_module(&cm, checker)?,
        "exchange-law" => verify_exchange_law(&cm, checker),
        "two-group" => verify_two_group(&cm, checker),
        "category-laws" | "product-bundle" => base_suite(sc, &cm, name, checker)?,
        "prop31-roundtrip" | "prop32-functor-group" | "prop33-naturality" | "prop34" | "prop41" | "prop42" => {
            quiver_suite(sc, &cm, name, checker)?
        }
        "cocycle" | "prop51" | "transition-cocycle" => cover_suite(sc, &cm, name, checker)?,
        "prop61" => match sc.eta_kind()? {
            EtaKind::Transport => {
                let eta = transport_eta(sc)?;
                let p = sc.path_category()?;
                let fam = p.family(sc.seed, &sc.path_config());
                let objects: Vec<Point> = fam.mors.iter().map(|m| m.start()).collect();
                verify_twisted_family(&p, &cm, &eta, &objects, &fam, checker)
            }
            _ => {
                let q = sc.quiver()?;
                verify_twisted_bundle(&q, &cm, &sc.eta_table(&cm, &q)?, checker)
            }
        },
        "transport" => {
            let p = sc.path_category()?;
            verify_transport(
                &sc.connection()?,
                sc.steps,
                &p.family(sc.seed, &sc.path_config()),
                checker,
            )?
        }
        "prop62" => verify_prop62(
            &cm,
            &transport_eta(sc)?,
            sc.decorated_pairs(),
            sc.tolerances.iso,
            checker,
        )?,
        _ => unreachable!("registered suite without a runner: {name}"),
    };
    let mut report = report;
    report.suite = name.to_string();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SOURCES: &[&str] = &[
        include_str!("algebra/laws.rs"),
        include_str!("base/mod.rs"),
        include_str!("bundle.rs"),
        include_str!("product/gu.rs"),
        include_str!("product/props.rs"),
        include_str!("product/section.rs"),
        include_str!("cocycle/data.rs"),
        include_str!("cocycle/theta.rs"),
        include_str!("cocycle/transition.rs"),
        include_str!("twisted.rs"),
        include_str!("decorated/bundle.rs"),
        include_str!("decorated/transport.rs"),
    ];

    fn certifiers() -> Vec<String> {
        let mut out = Vec::new();
        for src in SOURCES {
            for line in src.lines() {
                if let Some(rest) = line.strip_prefix("pub fn verify_") {
                    let name: String = rest.chars().take_while(|c| c.is_alphanumeric() || *c == '_').collect();
                    out.push(format!("verify_{name}"));
                }
            }
        }
        out
    }

    #[test]
    fn every_certifier_is_reachable_from_a_suite() {
        let found = certifiers();
        assert!(found.len() >= 20, "{found:?}");
        for f in &found {
            assert!(
                SUITES.iter().any(|s| s.covers.contains(&f.as_str())),
                "{f} is not covered by any suite"
            );
        }
        for s in SUITES {
            for c in s.covers {
                assert!(
                    found.iter().any(|f| f == c),
                    "suite {} lists unknown certifier {c}",
                    s.name
                );
            }
        }
    }

    #[test]
    fn suite_names_are_unique() {
        let mut names: Vec<_> = SUITES.iter().map(|s| s.name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), SUITES.len());
    }

    #[test]
    fn unknown_suite_and_missing_sections() {
        let sc = Scenario::catalog("s3-conj").unwrap();
        assert!(matches!(run_suite(&sc, "nope"), Err(Error::Unknown { .. })));
        assert!(matches!(run_suite(&sc, "prop51"), Err(Error::Input(_))));
        assert_eq!(
            applicable_suites(&sc),
            vec!["crossed-module", "exchange-law", "two-group"]
        );
    }

    #[test]
    fn catalog_suites_on_s3() {
        let sc = Scenario::catalog("s3-conj").unwrap();
        for name in ["crossed-module", "exchange-law", "two-group"] {
            let r = run_suite(&sc, name).unwrap();
            assert!(r.passed(), "{}", r.to_table());
            assert_eq!(r.suite, name);
        }
    }

    #[test]
    fn quiver_suites_run() {
        let sc = Scenario::from_toml(
            r#"
            crossed_module = "z4-conj"
            budget = 20000
            [quiver]
            chain = 3
            [eta]
            kind = "table"
            generators = { f1 = 1, f2 = 3 }
            "#,
        )
        .unwrap();
        for name in applicable_suites(&sc) {
            let r = run_suite(&sc, name).unwrap();
            assert!(r.passed(), "{name}\n{}", r.to_table());
        }
    }
}
