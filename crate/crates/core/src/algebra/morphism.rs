use super::crossed::CrossedModule;
use super::group::Element;
use crate::error::{Error, Result};

/// A morphism of the categorical group, i.e. a pair `(h, g)` in `H x| G`.
///
/// Its source is `g` and its target is `tau(h) g`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoGroupMorphism {
    pub h: Element,
    pub g: Element,
}

impl TwoGroupMorphism {
    pub fn new(h: Element, g: Element) -> Self {
        TwoGroupMorphism { h, g }
    }
}

impl CrossedModule {
    pub fn source(&self, m: &TwoGroupMorphism) -> Element {
        m.g
    }

    pub fn target(&self, m: &TwoGroupMorphism) -> Element {
        self.g.multiply(&self.tau(&m.h), &m.g)
    }

    /// `1_g = (e, g)`.
    pub fn identity_at(&self, g: &Element) -> TwoGroupMorphism {
        TwoGroupMorphism::new(self.h.identity(), *g)
    }

    /// The identity of the morphism group, `1_e`.
    pub fn unit(&self) -> TwoGroupMorphism {
        self.identity_at(&self.g.identity())
    }

    /// The morphism `h` viewed as `(h, e)`.
    pub fn from_h(&self, h: &Element) -> TwoGroupMorphism {
        TwoGroupMorphism::new(*h, self.g.identity())
    }

    /// Group law of `H x| G`: `(h2, g2)(h1, g1) = (h2 alpha_{g2}(h1), g2 g1)`.
    pub fn sdp_multiply(&self, m2: &TwoGroupMorphism, m1: &TwoGroupMorphism) -> TwoGroupMorphism {
        TwoGroupMorphism::new(
            self.h.multiply(&m2.h, &self.alpha(&m2.g, &m1.h)),
            self.g.multiply(&m2.g, &m1.g),
        )
    }

    /// `(h, g)^-1 = (alpha_{g^-1}(h^-1), g^-1)`.
    pub fn sdp_inverse(&self, m: &TwoGroupMorphism) -> TwoGroupMorphism {
        let g_inv = self.g.inverse(&m.g);
        TwoGroupMorphism::new(self.alpha(&g_inv, &self.h.inverse(&m.h)), g_inv)
    }

    /// Categorical composition `m2 o m1 = (h2 h1, g1)`, defined only when
    /// `target(m1) = source(m2)`.
    pub fn compose_vertical(&self, m2: &TwoGroupMorphism, m1: &TwoGroupMorphism) -> Result<TwoGroupMorphism> {
        let t1 = self.target(m1);
        if !self.g.eq(&t1, &m2.g) {
            return Err(Error::undefined(
                "target of right factor differs from source of left factor",
                self.g.format(&m2.g),
                self.g.format(&t1),
            ));
        }
        Ok(TwoGroupMorphism::new(self.h.multiply(&m2.h, &m1.h), m1.g))
    }

    /// Inverse for composition: `(h^-1, tau(h) g)`.
    pub fn compositional_inverse(&self, m: &TwoGroupMorphism) -> TwoGroupMorphism {
        TwoGroupMorphism::new(self.h.inverse(&m.h), self.target(m))
    }

    /// The pair written `g h` (G-element first) in internal `(h, g)`
    /// coordinates: `g h = (g h g^-1) g = (alpha_g(h), g)`.
    pub fn from_gh(&self, g: &Element, h: &Element) -> TwoGroupMorphism {
        TwoGroupMorphism::new(self.alpha(g, h), *g)
    }

    /// Splits a morphism as `g h`, returning `(g, h)`.
    pub fn to_gh(&self, m: &TwoGroupMorphism) -> (Element, Element) {
        (m.g, self.alpha(&self.g.inverse(&m.g), &m.h))
    }

    pub fn mor_eq(&self, a: &TwoGroupMorphism, b: &TwoGroupMorphism) -> bool {
        self.h.eq(&a.h, &b.h) && self.g.eq(&a.g, &b.g)
    }

    pub fn mor_eq_within(&self, a: &TwoGroupMorphism, b: &TwoGroupMorphism, tol: f64) -> bool {
        self.h.eq_within(&a.h, &b.h, tol) && self.g.eq_within(&a.g, &b.g, tol)
    }

    pub fn mor_distance(&self, a: &TwoGroupMorphism, b: &TwoGroupMorphism) -> f64 {
        self.h.distance(&a.h, &b.h).max(self.g.distance(&a.g, &b.g))
    }

    pub fn format_mor(&self, m: &TwoGroupMorphism) -> String {
        format!("({}, {})", self.h.format(&m.h), self.g.format(&m.g))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::crossed::lookup;
    use crate::algebra::perm::Perm;

    fn z(k: u32) -> Element {
        Element::Cyclic(k)
    }

    fn p(s: &str) -> Element {
        Element::Perm(Perm::parse(3, s).unwrap())
    }

    fn m(h: Element, g: Element) -> TwoGroupMorphism {
        TwoGroupMorphism::new(h, g)
    }

    #[test]
    fn abelian_product_is_componentwise_addition() {
        let cm = lookup("z4-abelian").unwrap();
        assert_eq!(cm.sdp_multiply(&m(z(1), z(2)), &m(z(3), z(1))), m(z(0), z(3)));
    }

    #[test]
    fn unit_is_neutral() {
        for id in ["s3-conj", "z4-conj", "z4-abelian"] {
            let cm = lookup(id).unwrap();
            for &h in cm.h.elements().unwrap() {
                for &g in cm.g.elements().unwrap() {
                    let x = m(h, g);
                    assert_eq!(cm.sdp_multiply(&cm.unit(), &x), x);
                    assert_eq!(cm.sdp_multiply(&x, &cm.unit()), x);
                }
            }
        }
    }

    #[test]
    fn s3_product_conjugates_right_factor() {
        let cm = lookup("s3-conj").unwrap();
        // (123)(13)(123)^-1 = (12), and (12)(12) = e
        let out = cm.sdp_multiply(&m(p("(12)"), p("(123)")), &m(p("(13)"), p("e")));
        assert_eq!(out, m(p("e"), p("(123)")));
    }

    #[test]
    fn inverses() {
        let z4 = lookup("z4-abelian").unwrap();
        assert_eq!(z4.sdp_inverse(&m(z(1), z(2))), m(z(3), z(2)));
        assert_eq!(z4.sdp_inverse(&m(z(0), z(3))), m(z(0), z(1)));

        let s3 = lookup("s3-conj").unwrap();
        let x = m(p("(12)"), p("(123)"));
        let inv = s3.sdp_inverse(&x);
        assert_eq!(inv, m(s3.alpha(&p("(132)"), &p("(12)")), p("(132)")));
        assert_eq!(s3.sdp_multiply(&x, &inv), s3.unit());
    }

    #[test]
    fn vertical_composition() {
        let cm = lookup("z4-conj").unwrap();
        assert_eq!(
            cm.compose_vertical(&m(z(1), z(3)), &m(z(2), z(1))).unwrap(),
            m(z(3), z(1))
        );
        let x = m(z(2), z(1));
        assert_eq!(cm.compose_vertical(&cm.identity_at(&cm.target(&x)), &x).unwrap(), x);
        let err = cm.compose_vertical(&m(z(1), z(0)), &m(z(1), z(0))).unwrap_err();
        match err {
            Error::CompositionUndefined { left, right, .. } => {
                assert_eq!(left, "0");
                assert_eq!(right, "1");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn compositional_inverses() {
        let z4 = lookup("z4-conj").unwrap();
        assert_eq!(z4.compositional_inverse(&m(z(1), z(2))), m(z(3), z(3)));
        assert_eq!(z4.compositional_inverse(&m(z(0), z(2))), m(z(0), z(2)));
        let s3 = lookup("s3-conj").unwrap();
        let x = m(p("(12)"), p("e"));
        let inv = s3.compositional_inverse(&x);
        assert_eq!(inv, m(p("(12)"), p("(12)")));
        assert_eq!(s3.compose_vertical(&inv, &x).unwrap(), s3.identity_at(&x.g));
    }

    #[test]
    fn gh_order_round_trips() {
        let s3 = lookup("s3-conj").unwrap();
        for &g in s3.g.elements().unwrap() {
            for &h in s3.h.elements().unwrap() {
                let x = s3.from_gh(&g, &h);
                // g h equals the semidirect product (e, g)(h, e)
                assert_eq!(x, s3.sdp_multiply(&s3.identity_at(&g), &s3.from_h(&h)));
                assert_eq!(s3.to_gh(&x), (g, h));
            }
        }
    }
}
