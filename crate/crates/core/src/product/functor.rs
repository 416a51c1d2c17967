use crate::algebra::{CrossedModule, Element, Group, TwoGroupMorphism};
use crate::base::{FiniteBase, QuiverCategory};
use crate::error::{Error, Result};

/// A functor from a finite base into the categorical group, stored as its
/// object part `g` (indexed like `base.objects()`) and the `H`-part `h` of
/// its morphism images (indexed like `base.morphisms()`).
#[derive(Clone, Debug, PartialEq)]
pub struct FunctorUG {
    pub g: Vec<Element>,
    pub h: Vec<Element>,
}

/// A natural transformation between two functors, given by its `H`-valued
/// component on each object.
#[derive(Clone, Debug, PartialEq)]
pub struct NatTransf {
    pub source: FunctorUG,
    pub target: FunctorUG,
    pub ht: Vec<Element>,
}

/// Functors from a finite base into the categorical group of `cm`, with the
/// base's incidence data precomputed.
pub struct FunctorSpace<'a, B> {
    pub base: &'a B,
    pub cm: &'a CrossedModule,
    src: Vec<usize>,
    tgt: Vec<usize>,
    ident: Vec<usize>,
    comp: Vec<(usize, usize, usize)>,
}

impl<'a, B: FiniteBase> FunctorSpace<'a, B> {
    pub fn new(base: &'a B, cm: &'a CrossedModule) -> Result<Self> {
        let obj = |x: &B::Obj| {
            base.obj_index(x)
                .ok_or_else(|| Error::unknown("object", base.format_obj(x)))
        };
        let mors = base.morphisms();
        let src = mors.iter().map(|m| obj(&base.source(m))).collect::<Result<Vec<_>>>()?;
        let tgt = mors.iter().map(|m| obj(&base.target(m))).collect::<Result<Vec<_>>>()?;
        let ident = base
            .objects()
            .iter()
            .map(|x| {
                let id = base.identity(x);
                base.mor_index(&id)
                    .ok_or_else(|| Error::unknown("morphism", base.format_mor(&id)))
            })
            .collect::<Result<Vec<_>>>()?;
        let fam = base.family();
        let comp = fam
            .pairs
            .iter()
            .map(|&(i2, i1)| {
                let c = base.compose(&mors[i2], &mors[i1]).expect("family pairs compose");
                (i2, i1, base.mor_index(&c).expect("family composites are enumerated"))
            })
            .collect();
        Ok(FunctorSpace {
            base,
            cm,
            src,
            tgt,
            ident,
            comp,
        })
    }

    pub fn object_count(&self) -> usize {
        self.ident.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.src.len()
    }

    /// Source and target object indices of morphism `i`.
    pub fn ends(&self, i: usize) -> (usize, usize) {
        (self.src[i], self.tgt[i])
    }

    pub fn identity_index(&self, x: usize) -> usize {
        self.ident[x]
    }

    /// Composable triples `(i2, i1, index of i2 o i1)`.
    pub fn composable(&self) -> &[(usize, usize, usize)] {
        &self.comp
    }

    /// Functor determined by an object-level map `h: Obj -> H`: `g = tau o h`
    /// and `h(gamma) = h(gamma1) h(gamma0)^-1`.
    pub fn functor_from_h(&self, h: &[Element]) -> Result<FunctorUG> {
        if h.len() != self.ident.len() {
            return Err(Error::Mismatch(format!(
                "{} values for {} objects",
                h.len(),
                self.ident.len()
            )));
        }
        let hg = &self.cm.h;
        Ok(FunctorUG {
            g: h.iter().map(|x| self.cm.tau(x)).collect(),
            h: (0..self.src.len())
                .map(|i| hg.multiply(&h[self.tgt[i]], &hg.inverse(&h[self.src[i]])))
                .collect(),
        })
    }

    pub fn from_table(&self, g: Vec<Element>, h: Vec<Element>) -> Result<FunctorUG> {
        if g.len() != self.ident.len() || h.len() != self.src.len() {
            return Err(Error::Mismatch(format!(
                "functor table of size ({}, {}) for a base with {} objects and {} morphisms",
                g.len(),
                h.len(),
                self.ident.len(),
                self.src.len()
            )));
        }
        Ok(FunctorUG { g, h })
    }

    pub fn constant(&self, g: Element) -> FunctorUG {
        FunctorUG {
            g: vec![g; self.ident.len()],
            h: vec![self.cm.h.identity(); self.src.len()],
        }
    }

    /// The identity functor object `E` of the functor group.
    pub fn unit(&self) -> FunctorUG {
        self.constant(self.cm.g.identity())
    }

    pub fn apply_obj(&self, f: &FunctorUG, x: &B::Obj) -> Result<Element> {
        let i = self
            .base
            .obj_index(x)
            .ok_or_else(|| Error::unknown("object", self.base.format_obj(x)))?;
        Ok(f.g[i])
    }

    /// `Psi(gamma) = (h(gamma), g(gamma0))`.
    pub fn apply_mor(&self, f: &FunctorUG, m: &B::Mor) -> Result<TwoGroupMorphism> {
        let i = self
            .base
            .mor_index(m)
            .ok_or_else(|| Error::unknown("morphism", self.base.format_mor(m)))?;
        Ok(self.image(f, i))
    }

    pub fn image(&self, f: &FunctorUG, i: usize) -> TwoGroupMorphism {
        TwoGroupMorphism::new(f.h[i], f.g[self.src[i]])
    }

    /// Checks multiplicativity of `h`, the boundary relation
    /// `tau(h(gamma)) = g(gamma1) g(gamma0)^-1`, identities, and
    /// functoriality of the images in the categorical group.
    pub fn check(&self, f: &FunctorUG) -> std::result::Result<(), String> {
        let (g, h, cm) = (&self.cm.g, &self.cm.h, self.cm);
        let name = |i: usize| self.base.format_mor(&self.base.morphisms()[i]);
        for (i, (&s, &t)) in self.src.iter().zip(&self.tgt).enumerate() {
            let rhs = g.multiply(&f.g[t], &g.inverse(&f.g[s]));
            if !g.eq(&cm.tau(&f.h[i]), &rhs) {
                return Err(format!(
                    "tau(h({})) = {} but g(t) g(s)^-1 = {}",
                    name(i),
                    g.format(&cm.tau(&f.h[i])),
                    g.format(&rhs)
                ));
            }
        }
        for &i in &self.ident {
            if !h.is_identity(&f.h[i]) {
                return Err(format!("h({}) = {} is not the identity", name(i), h.format(&f.h[i])));
            }
        }
        for &(i2, i1, i21) in &self.comp {
            let prod = h.multiply(&f.h[i2], &f.h[i1]);
            if !h.eq(&f.h[i21], &prod) {
                return Err(format!(
                    "h({}) = {} but h({}) h({}) = {}",
                    name(i21),
                    h.format(&f.h[i21]),
                    name(i2),
                    name(i1),
                    h.format(&prod)
                ));
            }
            match cm.compose_vertical(&self.image(f, i2), &self.image(f, i1)) {
                Ok(c) if cm.mor_eq(&c, &self.image(f, i21)) => {}
                _ => return Err(format!("image of {} o {} is not the composite", name(i2), name(i1))),
            }
        }
        Ok(())
    }

    pub fn functor_eq(&self, a: &FunctorUG, b: &FunctorUG) -> bool {
        a.g.len() == b.g.len()
            && a.h.len() == b.h.len()
            && a.g.iter().zip(&b.g).all(|(x, y)| self.cm.g.eq(x, y))
            && a.h.iter().zip(&b.h).all(|(x, y)| self.cm.h.eq(x, y))
    }

    /// Pointwise product in the categorical group: objects multiply in `G`,
    /// morphism images multiply in `H x| G`.
    pub fn product(&self, f2: &FunctorUG, f1: &FunctorUG) -> FunctorUG {
        let (g, h, cm) = (&self.cm.g, &self.cm.h, self.cm);
        FunctorUG {
            g: f2.g.iter().zip(&f1.g).map(|(a, b)| g.multiply(a, b)).collect(),
            h: (0..self.src.len())
                .map(|i| h.multiply(&f2.h[i], &cm.alpha(&f2.g[self.src[i]], &f1.h[i])))
                .collect(),
        }
    }

    pub fn inverse(&self, f: &FunctorUG) -> FunctorUG {
        let (g, h, cm) = (&self.cm.g, &self.cm.h, self.cm);
        FunctorUG {
            g: f.g.iter().map(|a| g.inverse(a)).collect(),
            h: (0..self.src.len())
                .map(|i| cm.alpha(&g.inverse(&f.g[self.src[i]]), &h.inverse(&f.h[i])))
                .collect(),
        }
    }

    /// The transformation out of `source` with components `ht`; its target
    /// is `tau(ht(a)) g(a)` on objects and `ht(b) h(f) ht(a)^-1` on `f: a -> b`.
    pub fn nat(&self, source: &FunctorUG, ht: Vec<Element>) -> Result<NatTransf> {
        if ht.len() != self.ident.len() {
            return Err(Error::Mismatch(format!(
                "{} components for {} objects",
                ht.len(),
                self.ident.len()
            )));
        }
        let target = self.nat_target(source, &ht);
        Ok(NatTransf {
            source: source.clone(),
            target,
            ht,
        })
    }

    fn nat_target(&self, source: &FunctorUG, ht: &[Element]) -> FunctorUG {
        let (g, h, cm) = (&self.cm.g, &self.cm.h, self.cm);
        FunctorUG {
            g: ht
                .iter()
                .zip(&source.g)
                .map(|(t, x)| g.multiply(&cm.tau(t), x))
                .collect(),
            h: (0..self.src.len())
                .map(|i| {
                    h.multiply(
                        &h.multiply(&ht[self.tgt[i]], &source.h[i]),
                        &h.inverse(&ht[self.src[i]]),
                    )
                })
                .collect(),
        }
    }

    pub fn nat_identity(&self, f: &FunctorUG) -> NatTransf {
        NatTransf {
            source: f.clone(),
            target: f.clone(),
            ht: vec![self.cm.h.identity(); self.ident.len()],
        }
    }

    /// Component at object `x` as a morphism `Psi1(x) -> Psi2(x)`.
    pub fn component(&self, t: &NatTransf, x: usize) -> TwoGroupMorphism {
        TwoGroupMorphism::new(t.ht[x], t.source.g[x])
    }

    /// Checks the component formulas for the target functor and that every
    /// naturality square commutes in the categorical group.
    pub fn check_nat(&self, t: &NatTransf) -> std::result::Result<(), String> {
        let cm = self.cm;
        self.check(&t.source).map_err(|e| format!("source: {e}"))?;
        self.check(&t.target).map_err(|e| format!("target: {e}"))?;
        let expected = self.nat_target(&t.source, &t.ht);
        for x in 0..self.ident.len() {
            if !cm.g.eq(&expected.g[x], &t.target.g[x]) {
                return Err(format!(
                    "target object {} is not tau(hT) times the source object",
                    self.base.format_obj(&self.base.objects()[x])
                ));
            }
        }
        for i in 0..self.src.len() {
            let (a, b) = (self.src[i], self.tgt[i]);
            let name = || self.base.format_mor(&self.base.morphisms()[i]);
            if !cm.h.eq(&expected.h[i], &t.target.h[i]) {
                return Err(format!("h-component at {} is not hT(b) h(f) hT(a)^-1", name()));
            }
            let lhs = cm.compose_vertical(&self.image(&t.target, i), &self.component(t, a));
            let rhs = cm.compose_vertical(&self.component(t, b), &self.image(&t.source, i));
            match (lhs, rhs) {
                (Ok(l), Ok(r)) if cm.mor_eq(&l, &r) => {}
                (Ok(l), Ok(r)) => {
                    return Err(format!(
                        "naturality at {}: {} vs {}",
                        name(),
                        cm.format_mor(&l),
                        cm.format_mor(&r)
                    ))
                }
                (Err(e), _) | (_, Err(e)) => return Err(format!("naturality at {}: {e}", name())),
            }
        }
        Ok(())
    }

    /// `(T2 o T1)(a) = T2(a) o T1(a)`, defined when `T1` ends where `T2` starts.
    pub fn nat_vertical(&self, t2: &NatTransf, t1: &NatTransf) -> Result<NatTransf> {
        if !self.functor_eq(&t1.target, &t2.source) {
            return Err(Error::undefined(
                "target functor of the right factor differs from source functor of the left factor",
                format!(
                    "{:?}",
                    t2.source.g.iter().map(|x| self.cm.g.format(x)).collect::<Vec<_>>()
                ),
                format!(
                    "{:?}",
                    t1.target.g.iter().map(|x| self.cm.g.format(x)).collect::<Vec<_>>()
                ),
            ));
        }
        Ok(NatTransf {
            source: t1.source.clone(),
            target: t2.target.clone(),
            ht: t2
                .ht
                .iter()
                .zip(&t1.ht)
                .map(|(a, b)| self.cm.h.multiply(a, b))
                .collect(),
        })
    }

    /// Pointwise product `(T' T)(a) = T'(a) T(a)` in `H x| G`.
    pub fn nat_product(&self, tp: &NatTransf, t: &NatTransf) -> NatTransf {
        let (h, cm) = (&self.cm.h, self.cm);
        NatTransf {
            source: self.product(&tp.source, &t.source),
            target: self.product(&tp.target, &t.target),
            ht: (0..self.ident.len())
                .map(|x| h.multiply(&tp.ht[x], &cm.alpha(&tp.source.g[x], &t.ht[x])))
                .collect(),
        }
    }

    pub fn nat_inverse(&self, t: &NatTransf) -> NatTransf {
        NatTransf {
            source: self.inverse(&t.source),
            target: self.inverse(&t.target),
            ht: (0..self.ident.len())
                .map(|x| self.cm.sdp_inverse(&self.component(t, x)).h)
                .collect(),
        }
    }

    pub fn nat_eq(&self, a: &NatTransf, b: &NatTransf) -> bool {
        self.functor_eq(&a.source, &b.source)
            && self.functor_eq(&a.target, &b.target)
            && a.ht.iter().zip(&b.ht).all(|(x, y)| self.cm.h.eq(x, y))
    }

    pub fn format_functor(&self, f: &FunctorUG) -> String {
        let objs: Vec<String> = f.g.iter().map(|x| self.cm.g.format(x)).collect();
        let mors: Vec<String> =
            f.h.iter()
                .enumerate()
                .filter(|(i, _)| !self.ident.contains(i))
                .map(|(i, x)| {
                    format!(
                        "{}:{}",
                        self.base.format_mor(&self.base.morphisms()[i]),
                        self.cm.h.format(x)
                    )
                })
                .collect();
        format!("g=[{}] h=[{}]", objs.join(", "), mors.join(", "))
    }

    pub fn format_nat(&self, t: &NatTransf) -> String {
        let hs: Vec<String> = t.ht.iter().map(|x| self.cm.h.format(x)).collect();
        format!("hT=[{}] from {}", hs.join(", "), self.format_functor(&t.source))
    }
}

/// Every map from `n` labels into a finite group, in lexicographic order.
pub fn all_maps(group: &Group, n: usize) -> Result<Vec<Vec<Element>>> {
    let els = group
        .elements()
        .ok_or_else(|| Error::Input(format!("{} is not finite", group.name())))?;
    let mut out: Vec<Vec<Element>> = vec![Vec::with_capacity(n)];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                els.iter().map(move |e| {
                    let mut v = prefix.clone();
                    v.push(*e);
                    v
                })
            })
            .collect();
    }
    Ok(out)
}

impl FunctorSpace<'_, QuiverCategory> {
    /// Functor of the free category given on objects and generating arrows;
    /// the value on a word is the ordered product along it.
    pub fn from_generators(&self, g: Vec<Element>, arrows: &[Element]) -> Result<FunctorUG> {
        let q = self.base;
        if g.len() != q.object_count() || arrows.len() != q.arrow_count() {
            return Err(Error::Mismatch(format!(
                "generator table of size ({}, {}) for {} objects and {} arrows",
                g.len(),
                arrows.len(),
                q.object_count(),
                q.arrow_count()
            )));
        }
        let h = &self.cm.h;
        let values = q
            .morphisms()
            .iter()
            .map(|w| {
                w.arrows
                    .iter()
                    .fold(h.identity(), |acc, &a| h.multiply(&arrows[a], &acc))
            })
            .collect();
        Ok(FunctorUG { g, h: values })
    }

    /// Every functor of the free category (finite groups only).
    pub fn all_functors(&self) -> Result<Vec<FunctorUG>> {
        let q = self.base;
        let (g, cm) = (&self.cm.g, self.cm);
        let mut out = Vec::new();
        for gs in all_maps(g, q.object_count())? {
            let mut choices: Vec<Vec<Element>> = vec![Vec::new()];
            for a in 0..q.arrow_count() {
                let (s, t) = q.arrow_ends(a);
                let want = g.multiply(&gs[t], &g.inverse(&gs[s]));
                let fits: Vec<Element> =
                    cm.h.elements()
                        .ok_or_else(|| Error::Input(format!("{} is not finite", cm.h.name())))?
                        .iter()
                        .filter(|x| g.eq(&cm.tau(x), &want))
                        .copied()
                        .collect();
                choices = choices
                    .into_iter()
                    .flat_map(|prefix| {
                        fits.iter().map(move |x| {
                            let mut v = prefix.clone();
                            v.push(*x);
                            v
                        })
                    })
                    .collect();
            }
            for arrows in choices {
                out.push(self.from_generators(gs.clone(), &arrows)?);
            }
        }
        Ok(out)
    }
}
