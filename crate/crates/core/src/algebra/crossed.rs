use serde::{Deserialize, Serialize};

use super::group::{Element, Group, GroupKind};
use crate::error::{Error, Result};

/// How `G` acts on `H`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Action {
    /// `alpha_g = id` for every `g`.
    Trivial,
    /// `alpha_g(h) = g h g^-1`, computed in `H`; requires `G` to sit inside `H`.
    Conjugation,
}

/// The boundary map `tau: H -> G`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    /// Constant map to the identity of `G`.
    Trivial,
    /// `tau(h) = h`; requires `H` to sit inside `G`.
    Identity,
}

/// A crossed module `(G, H, alpha, tau)`.
#[derive(Clone, Debug)]
pub struct CrossedModule {
    pub id: String,
    pub g: Group,
    pub h: Group,
    pub action: Action,
    pub boundary: Boundary,
    /// Catalog entries that are expected to violate an axiom.
    pub negative: bool,
}

impl CrossedModule {
    pub fn new(id: impl Into<String>, g: Group, h: Group, action: Action, boundary: Boundary) -> Self {
        CrossedModule {
            id: id.into(),
            g,
            h,
            action,
            boundary,
            negative: false,
        }
    }

    pub fn is_matrix(&self) -> bool {
        self.g.is_matrix() || self.h.is_matrix()
    }

    /// `alpha_g(h)`, or a structural error when the output would leave `H`.
    pub fn try_alpha(&self, g: &Element, h: &Element) -> Result<Element> {
        let out = match self.action {
            Action::Trivial => *h,
            Action::Conjugation => {
                if !self.h.contains(g) {
                    return Err(Error::Structural(format!(
                        "conjugation by {} is not defined in {}",
                        self.g.format(g),
                        self.h.name()
                    )));
                }
                self.h.conjugate(g, h)
            }
        };
        if !self.h.contains(&out) {
            return Err(Error::Structural(format!(
                "alpha output {} is not in {}",
                self.h.format(&out),
                self.h.name()
            )));
        }
        Ok(out)
    }

    /// `tau(h)`, or a structural error when the output would leave `G`.
    pub fn try_tau(&self, h: &Element) -> Result<Element> {
        let out = match self.boundary {
            Boundary::Trivial => self.g.identity(),
            Boundary::Identity => *h,
        };
        if !self.g.contains(&out) {
            return Err(Error::Structural(format!(
                "tau output {} is not in {}",
                self.g.format(&out),
                self.g.name()
            )));
        }
        Ok(out)
    }

    /// `alpha_g(h)`. Panics on a structurally invalid module; run
    /// [`CrossedModule::check_structure`] first when the module is untrusted.
    pub fn alpha(&self, g: &Element, h: &Element) -> Element {
        match self.action {
            Action::Trivial => *h,
            Action::Conjugation => self.h.conjugate(g, h),
        }
    }

    pub fn tau(&self, h: &Element) -> Element {
        match self.boundary {
            Boundary::Trivial => self.g.identity(),
            Boundary::Identity => *h,
        }
    }

    /// Confirms that `alpha` lands in `H` and `tau` lands in `G`, on every
    /// element for finite groups or on `samples` draws otherwise.
    pub fn check_structure<R: rand::Rng>(&self, rng: &mut R, samples: usize) -> Result<()> {
        let gs: Vec<Element> = match self.g.elements() {
            Some(els) => els.to_vec(),
            None => (0..samples).map(|_| self.g.sample(rng)).collect(),
        };
        let hs: Vec<Element> = match self.h.elements() {
            Some(els) => els.to_vec(),
            None => (0..samples).map(|_| self.h.sample(rng)).collect(),
        };
        for h in &hs {
            self.try_tau(h)?;
        }
        for g in &gs {
            for h in &hs {
                self.try_alpha(g, h)?;
            }
        }
        Ok(())
    }
}

/// Inline crossed-module declaration used by scenario files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossedModuleSpec {
    #[serde(default = "inline_id")]
    pub id: String,
    pub g: GroupKind,
    pub h: GroupKind,
    pub action: Action,
    pub boundary: Boundary,
}

fn inline_id() -> String {
    "inline".into()
}

impl CrossedModuleSpec {
    pub fn build(&self) -> Result<CrossedModule> {
        Ok(CrossedModule::new(
            self.id.clone(),
            Group::new(self.g)?,
            Group::new(self.h)?,
            self.action,
            self.boundary,
        ))
    }
}

/// One entry of the built-in catalog.
#[derive(Clone, Copy, Debug)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub description: &'static str,
    pub negative: bool,
    g: GroupKind,
    h: GroupKind,
    action: Action,
    boundary: Boundary,
}

impl CatalogEntry {
    pub fn build(&self) -> CrossedModule {
        let mut cm = CrossedModule::new(
            self.id,
            Group::new(self.g).expect("catalog groups are valid"),
            Group::new(self.h).expect("catalog groups are valid"),
            self.action,
            self.boundary,
        );
        cm.negative = self.negative;
        cm
    }
}

const fn entry(
    id: &'static str,
    description: &'static str,
    g: GroupKind,
    h: GroupKind,
    action: Action,
    boundary: Boundary,
    negative: bool,
) -> CatalogEntry {
    CatalogEntry {
        id,
        description,
        negative,
        g,
        h,
        action,
        boundary,
    }
}

use Action::{Conjugation, Trivial as TrivialAction};
use Boundary::{Identity, Trivial as TrivialBoundary};
use GroupKind::{Cyclic, SpecialOrthogonal, Symmetric};

/// Built-in crossed modules, in listing order.
pub const CATALOG: &[CatalogEntry] = &[
    entry(
        "s3-conj",
        "G = H = S3, alpha = conjugation, tau = id",
        Symmetric(3),
        Symmetric(3),
        Conjugation,
        Identity,
        false,
    ),
    entry(
        "so2-conj",
        "G = H = SO(2), alpha = conjugation, tau = id",
        SpecialOrthogonal(2),
        SpecialOrthogonal(2),
        Conjugation,
        Identity,
        false,
    ),
    entry(
        "so3-conj",
        "G = H = SO(3), alpha = conjugation, tau = id",
        SpecialOrthogonal(3),
        SpecialOrthogonal(3),
        Conjugation,
        Identity,
        false,
    ),
    entry(
        "z2-s3-broken",
        "G = Z2, H = S3, trivial alpha and tau; violates the Peiffer identity",
        Cyclic(2),
        Symmetric(3),
        TrivialAction,
        TrivialBoundary,
        true,
    ),
    entry(
        "z2-z4-abelian",
        "G = Z2, H = Z4, trivial alpha and tau",
        Cyclic(2),
        Cyclic(4),
        TrivialAction,
        TrivialBoundary,
        false,
    ),
    entry(
        "z3-z2-abelian",
        "G = Z3, H = Z2, trivial alpha and tau",
        Cyclic(3),
        Cyclic(2),
        TrivialAction,
        TrivialBoundary,
        false,
    ),
    entry(
        "z4-abelian",
        "G = H = Z4, trivial alpha and tau",
        Cyclic(4),
        Cyclic(4),
        TrivialAction,
        TrivialBoundary,
        false,
    ),
    entry(
        "z4-conj",
        "G = H = Z4, alpha = conjugation (trivial), tau = id",
        Cyclic(4),
        Cyclic(4),
        Conjugation,
        Identity,
        false,
    ),
];

pub fn catalog_ids() -> Vec<&'static str> {
    CATALOG.iter().map(|e| e.id).collect()
}

pub fn lookup(id: &str) -> Result<CrossedModule> {
    CATALOG
        .iter()
        .find(|e| e.id == id)
        .map(CatalogEntry::build)
        .ok_or_else(|| Error::unknown("crossed module", id))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_ids_are_unique_and_sorted() {
        let ids = catalog_ids();
        let mut sorted = ids.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(ids, sorted);
        assert_eq!(CATALOG.iter().filter(|e| e.negative).count(), 1);
    }

    #[test]
    fn lookup_resolves_ids() {
        assert!(lookup("s3-conj").is_ok());
        assert!(matches!(lookup("nope"), Err(Error::Unknown { .. })));
    }

    #[test]
    fn foreign_conjugation_is_structural() {
        let spec = CrossedModuleSpec {
            id: "bad".into(),
            g: Cyclic(4),
            h: Symmetric(3),
            action: Conjugation,
            boundary: TrivialBoundary,
        };
        let cm = spec.build().unwrap();
        let mut rng = rand::rng();
        assert!(matches!(cm.check_structure(&mut rng, 4), Err(Error::Structural(_))));
    }

    #[test]
    fn foreign_boundary_is_structural() {
        let cm = CrossedModule::new("bad", Group::cyclic(2), Group::symmetric(3), TrivialAction, Identity);
        let mut rng = rand::rng();
        assert!(matches!(cm.check_structure(&mut rng, 4), Err(Error::Structural(_))));
    }
}
