use crate::algebra::{CrossedModule, Element, TwoGroupMorphism};
use crate::base::Base;
use crate::bundle::{BMor, BObj, Bundle, BundleMorphism};
use crate::error::{Error, Result};

/// The product bundle `U x G -> U`.
pub struct ProductBundle<'a, B> {
    pub base: &'a B,
    pub cm: &'a CrossedModule,
}

pub type ProductMorphism<M> = BundleMorphism<M>;

impl<'a, B: Base> ProductBundle<'a, B> {
    pub fn new(base: &'a B, cm: &'a CrossedModule) -> Self {
        ProductBundle { base, cm }
    }

    pub fn pb_source(&self, pm: &ProductMorphism<B::Mor>) -> (B::Obj, Element) {
        (self.base.source(&pm.base), pm.arrow.g)
    }

    pub fn pb_target(&self, pm: &ProductMorphism<B::Mor>) -> (B::Obj, Element) {
        (self.base.target(&pm.base), self.cm.target(&pm.arrow))
    }

    /// `(gamma, h, g)(h1, g1) = (gamma, h alpha_g(h1), g g1)`.
    pub fn pb_act(&self, pm: &ProductMorphism<B::Mor>, m1: &TwoGroupMorphism) -> ProductMorphism<B::Mor> {
        BundleMorphism {
            base: pm.base.clone(),
            arrow: self.cm.sdp_multiply(&pm.arrow, m1),
        }
    }

    /// Componentwise composition `(gamma2 o gamma1, h2 h1, g1)`.
    pub fn pb_compose(
        &self,
        pm2: &ProductMorphism<B::Mor>,
        pm1: &ProductMorphism<B::Mor>,
    ) -> Result<ProductMorphism<B::Mor>> {
        let base = self.base.compose(&pm2.base, &pm1.base).map_err(|e| match e {
            Error::CompositionUndefined { left, right, .. } => {
                Error::undefined("base component is not composable", left, right)
            }
            other => other,
        })?;
        let arrow = self.cm.compose_vertical(&pm2.arrow, &pm1.arrow).map_err(|e| match e {
            Error::CompositionUndefined { left, right, .. } => {
                Error::undefined("group component is not composable", left, right)
            }
            other => other,
        })?;
        Ok(BundleMorphism { base, arrow })
    }
}

impl<B: Base> Bundle for ProductBundle<'_, B> {
    type B = B;

    fn base(&self) -> &B {
        self.base
    }

    fn cm(&self) -> &CrossedModule {
        self.cm
    }

    fn source(&self, m: &BMor<Self>) -> BObj<Self> {
        self.pb_source(m)
    }

    fn target(&self, m: &BMor<Self>) -> BObj<Self> {
        self.pb_target(m)
    }

    fn compose(&self, m2: &BMor<Self>, m1: &BMor<Self>) -> Result<BMor<Self>> {
        self.pb_compose(m2, m1)
    }

    fn act(&self, m: &BMor<Self>, k: &TwoGroupMorphism) -> BMor<Self> {
        self.pb_act(m, k)
    }
}
