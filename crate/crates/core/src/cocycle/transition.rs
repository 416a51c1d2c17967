use std::collections::BTreeMap;

use super::overlap::{format_tag, Cover, OverlapCategory, Side};
use super::theta::restrict_theta;
use crate::algebra::{CrossedModule, Element};
use crate::base::{Base, FiniteBase, QuiverCategory};
use crate::bundle::BundleMorphism;
use crate::error::{Error, Result};
use crate::exec::Checker;
use crate::product::{automorphism_to_functor, section_to_iso, BundleMap, FunctorSpace, FunctorUG, SectionIso};
use crate::report::{LawRecord, LawReport};

/// Local trivializations of the product bundle, one per cover index, each
/// induced by an `H`-valued function `lambda_i` on `U_i`: over an overlap
/// category the trivialization `Phi_i^j` is the section iso of the functor
/// with object values `lambda_i` on the lower side and `lambda_j` on the
/// upper side.
#[derive(Clone, Debug)]
pub struct Trivializations {
    lambdas: Vec<BTreeMap<usize, Element>>,
}

impl Trivializations {
    pub fn new(cover: &Cover, lambda: impl Fn(usize, usize) -> Element) -> Self {
        Trivializations {
            lambdas: (0..cover.len())
                .map(|i| cover.set(i).iter().map(|&a| (a, lambda(i, a))).collect())
                .collect(),
        }
    }

    pub fn lambda(&self, i: usize, a: usize) -> Result<Element> {
        self.lambdas
            .get(i)
            .and_then(|m| m.get(&a))
            .copied()
            .ok_or_else(|| Error::Input(format!("trivialization {i} is not defined at object {a}")))
    }

    /// The functor `F_i^j` inducing `Phi_i^j` on `ov`.
    pub fn functor(&self, sp: &FunctorSpace<'_, OverlapCategory<'_>>, i: usize, j: usize) -> Result<FunctorUG> {
        let hs = sp
            .base
            .objects()
            .iter()
            .map(|o| match o.side {
                Side::Lower => self.lambda(i, o.point),
                Side::Upper => self.lambda(j, o.point),
            })
            .collect::<Result<Vec<_>>>()?;
        sp.functor_from_h(&hs)
    }
}

/// `sigma` with `Phi_a^-1 o Phi_b (x, e) = (x, e) sigma(x)`, read off the
/// composite bundle map.
pub fn transition_from_trivializations<B: FiniteBase>(
    space: &FunctorSpace<'_, B>,
    phi_a: &SectionIso<'_, '_, B>,
    phi_b: &SectionIso<'_, '_, B>,
) -> Result<FunctorUG> {
    let inv = phi_a.inverse();
    automorphism_to_functor(space, &inv.to_map().after(phi_b.to_map()))
}

/// Same as [`transition_from_trivializations`] for arbitrary bundle maps.
pub fn transition_from_maps<B: FiniteBase>(
    space: &FunctorSpace<'_, B>,
    phi_a_inverse: BundleMap<'_, B>,
    phi_b: BundleMap<'_, B>,
) -> Result<FunctorUG> {
    automorphism_to_functor(space, &phi_a_inverse.after(phi_b))
}

/// Extracts `sigma_ik^jl`, `sigma_km^ln`, `sigma_im^jn` from trivializations,
/// compares them with the pointwise oracle `F_i^-1 F_k`, and certifies the
/// strict cocycle relation `sigma_ik sigma_km = sigma_im` on the triple
/// overlap, both as functors and by applying both sides of
/// `(Phi_i^-1 Phi_k)(Phi_k^-1 Phi_m) = Phi_i^-1 Phi_m` to `(x, e)`.
pub fn verify_transition_cocycle(
    cm: &CrossedModule,
    base: &QuiverCategory,
    cover: &Cover,
    triv: &Trivializations,
    [i, k, m]: [usize; 3],
    [j, l, n]: [usize; 3],
    checker: &Checker,
) -> Result<LawReport> {
    let small = OverlapCategory::new(base, cover, &[i, k, m], &[j, l, n])?;
    let ssp = FunctorSpace::new(&small, cm)?;
    let pairs = [([i, k], [j, l]), ([k, m], [l, n]), ([i, m], [j, n])];
    let sels = [[0usize, 1], [1, 2], [0, 2]];
    let mut pointwise = Vec::new();
    let mut restricted = Vec::new();
    for (([a, b], [c, d]), sel) in pairs.into_iter().zip(sels) {
        let big = OverlapCategory::new(base, cover, &[a, b], &[c, d])?;
        let sp = FunctorSpace::new(&big, cm)?;
        let fa = triv.functor(&sp, a, c)?;
        let fb = triv.functor(&sp, b, d)?;
        let sigma = transition_from_trivializations(&sp, &section_to_iso(&sp, &fa)?, &section_to_iso(&sp, &fb)?)?;
        let oracle = sp.product(&sp.inverse(&fa), &fb);
        pointwise.push(if sp.functor_eq(&sigma, &oracle) {
            Ok(())
        } else {
            Err(format!(
                "sigma_{}^{} = {} but F^-1 F = {}",
                format_tag(&[a, b]),
                format_tag(&[c, d]),
                sp.format_functor(&sigma),
                sp.format_functor(&oracle)
            ))
        });
        restricted.push(restrict_theta(&sigma, &big, &small, &sel)?);
    }
    let mut report = LawReport::new("transition-cocycle");
    report.push(LawRecord::single(
        "transition.pointwise",
        "Eq 5.11",
        pointwise
            .into_iter()
            .collect::<std::result::Result<Vec<()>, String>>()
            .map(|_| ()),
    ));

    let lhs = ssp.product(&restricted[0], &restricted[1]);
    report.push(LawRecord::single(
        "transition.cocycle",
        "Eq 5.20",
        if ssp.functor_eq(&lhs, &restricted[2]) {
            Ok(())
        } else {
            Err(format!(
                "sigma_ik sigma_km = {} but sigma_im = {}",
                ssp.format_functor(&lhs),
                ssp.format_functor(&restricted[2])
            ))
        },
    ));

    let phi = |a: usize, c: usize| -> Result<FunctorUG> { triv.functor(&ssp, a, c) };
    let (fi, fk, fm) = (phi(i, j)?, phi(k, l)?, phi(m, n)?);
    let (pi, pk, pm) = (
        section_to_iso(&ssp, &fi)?,
        section_to_iso(&ssp, &fk)?,
        section_to_iso(&ssp, &fm)?,
    );
    let (pi_inv, pk_inv) = (pi.inverse(), pk.inverse());
    let (g, h) = (&cm.g, &cm.h);
    let objs: Vec<usize> = (0..small.objects().len()).collect();
    report.push(checker.each("transition.replay-objects", "Eq 5.25", &objs, |&x| {
        let o = small.objects()[x];
        let run = || -> Result<bool> {
            let e = (o, g.identity());
            let left = pi_inv.apply_obj(&pk.apply_obj(&pk_inv.apply_obj(&pm.apply_obj(&e)?)?)?)?;
            let right = pi_inv.apply_obj(&pm.apply_obj(&e)?)?;
            let via_sigma = g.multiply(&restricted[0].g[x], &restricted[1].g[x]);
            Ok(g.eq(&left.1, &right.1) && g.eq(&right.1, &restricted[2].g[x]) && g.eq(&left.1, &via_sigma))
        };
        match run() {
            Ok(true) => None,
            Ok(false) => Some(small.format_obj(&o)),
            Err(e) => Some(e.to_string()),
        }
    }));
    let mors: Vec<usize> = (0..small.morphisms().len()).collect();
    report.push(checker.each("transition.replay-morphisms", "Eq 5.25", &mors, |&x| {
        let mo = &small.morphisms()[x];
        let run = || -> Result<bool> {
            let e = BundleMorphism {
                base: mo.clone(),
                arrow: cm.unit(),
            };
            let left = pi_inv.apply_mor(&pk.apply_mor(&pk_inv.apply_mor(&pm.apply_mor(&e)?)?)?)?;
            let right = pi_inv.apply_mor(&pm.apply_mor(&e)?)?;
            let via_sigma = cm.sdp_multiply(&ssp.image(&restricted[0], x), &ssp.image(&restricted[1], x));
            Ok(cm.mor_eq(&left.arrow, &right.arrow)
                && cm.mor_eq(&right.arrow, &ssp.image(&restricted[2], x))
                && cm.mor_eq(&left.arrow, &via_sigma)
                && h.eq(&left.arrow.h, &via_sigma.h))
        };
        match run() {
            Ok(true) => None,
            Ok(false) => Some(small.format_mor(mo)),
            Err(e) => Some(e.to_string()),
        }
    }));
    Ok(report.sorted())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::lookup;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn six() -> (QuiverCategory, Cover) {
        let q = QuiverCategory::chain(6, 5);
        let sets = vec![
            vec![0, 1, 2, 3],
            vec![0, 1, 2, 3, 4],
            vec![1, 2, 3, 4, 5],
            vec![2, 3, 4, 5],
        ];
        let c = Cover::new(&q, sets).unwrap();
        (q, c)
    }

    #[test]
    fn self_transition_is_identity() {
        let (q, cover) = six();
        let cm = lookup("s3-conj").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let table: Vec<Element> = (0..24).map(|_| cm.h.sample(&mut rng)).collect();
        let triv = Trivializations::new(&cover, |i, a| table[i * 6 + a]);
        let ov = OverlapCategory::new(&q, &cover, &[0, 1], &[1, 2]).unwrap();
        let sp = FunctorSpace::new(&ov, &cm).unwrap();
        let f = triv.functor(&sp, 0, 1).unwrap();
        let iso = section_to_iso(&sp, &f).unwrap();
        assert_eq!(transition_from_trivializations(&sp, &iso, &iso).unwrap(), sp.unit());
    }

    #[test]
    fn transitions_satisfy_strict_cocycle() {
        let (q, cover) = six();
        let cm = lookup("s3-conj").unwrap();
        for seed in 0..3 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let table: Vec<Vec<Element>> = (0..4)
                .map(|_| (0..6).map(|_| cm.h.sample(&mut rng)).collect())
                .collect();
            let triv = Trivializations::new(&cover, |i, a| table[i][a]);
            let r =
                verify_transition_cocycle(&cm, &q, &cover, &triv, [0, 1, 2], [1, 2, 3], &Checker::new(0, 10)).unwrap();
            assert!(r.passed(), "{}", r.to_table());
        }
    }

    #[test]
    fn non_equivariant_input_is_refused() {
        let (q, cover) = six();
        let cm = lookup("s3-conj").unwrap();
        let ov = OverlapCategory::new(&q, &cover, &[0, 1], &[1, 2]).unwrap();
        let sp = FunctorSpace::new(&ov, &cm).unwrap();
        let g = cm.g.clone();
        let k = cm.g.elements().unwrap()[1];
        let bad = BundleMap::new(
            move |x: &(_, Element)| (x.0, g.multiply(&x.1, &k)),
            |m: &BundleMorphism<_>| m.clone(),
        );
        let err = transition_from_maps(&sp, BundleMap::identity(), bad).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }
}
