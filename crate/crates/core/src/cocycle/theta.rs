use super::data::CocycleData;
use super::overlap::{format_tag, OMor, OverlapCategory, Side};
use crate::algebra::{CrossedModule, Element};
use crate::base::{Base, FiniteBase, QuiverCategory};
use crate::error::{Error, Result};
use crate::exec::Checker;
use crate::product::{FunctorSpace, FunctorUG, NatTransf};
use crate::report::{LawRecord, LawReport};

/// `theta` on an overlap category, with values taken from the cocycle
/// functions indexed by `lower_tag` and `upper_tag` (which need not be the
/// category's own tags, so that restrictions can be built directly).
pub fn theta_with(
    cm: &CrossedModule,
    data: &CocycleData,
    ov: &OverlapCategory<'_>,
    lower_tag: &[usize],
    upper_tag: &[usize],
) -> Result<FunctorUG> {
    let hv = |side: Side, a: usize| match side {
        Side::Lower => data.h(lower_tag, a),
        Side::Upper => data.h(upper_tag, a),
    };
    let h = &cm.h;
    let g = ov
        .objects()
        .iter()
        .map(|o| hv(o.side, o.point).map(|x| cm.tau(&x)))
        .collect::<Result<Vec<_>>>()?;
    let hs = ov
        .morphisms()
        .iter()
        .map(|m| match m {
            OMor::Id(_) => Ok(h.identity()),
            OMor::Cross(w) => {
                let up = if ov.is_merged() { Side::Lower } else { Side::Upper };
                Ok(h.multiply(&hv(up, w.target)?, &h.inverse(&hv(Side::Lower, w.source)?)))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FunctorUG { g, h: hs })
}

/// `theta_{ik}^{jl}`: `(mn, a) -> tau(h_mn(a))`,
/// `gamma -> (h_jl(gamma1) h_ik(gamma0)^-1, g_ik(gamma0))`, identities to units.
pub fn build_theta(cm: &CrossedModule, data: &CocycleData, ov: &OverlapCategory<'_>) -> Result<FunctorUG> {
    theta_with(cm, data, ov, ov.lower(), ov.upper())
}

/// Restricts a functor on `big` to `small`, where `big`'s tags are the
/// entries of `small`'s tags at positions `sel`.
pub fn restrict_theta(
    f: &FunctorUG,
    big: &OverlapCategory<'_>,
    small: &OverlapCategory<'_>,
    sel: &[usize],
) -> Result<FunctorUG> {
    let pick = |t: &[usize]| sel.iter().map(|&p| t.get(p).copied()).collect::<Option<Vec<_>>>();
    if pick(small.lower()).as_deref() != Some(big.lower()) || pick(small.upper()).as_deref() != Some(big.upper()) {
        return Err(Error::Mismatch(format!(
            "cannot restrict from {}/{} to {}/{}",
            format_tag(big.lower()),
            format_tag(big.upper()),
            format_tag(small.lower()),
            format_tag(small.upper())
        )));
    }
    let missing = |what: String| Error::Mismatch(format!("{what} is not in the larger overlap"));
    let g = small
        .objects()
        .iter()
        .map(|o| {
            big.object_at(o.side, o.point)
                .map(|i| f.g[i])
                .ok_or_else(|| missing(small.format_obj(o)))
        })
        .collect::<Result<Vec<_>>>()?;
    let h = small
        .morphisms()
        .iter()
        .map(|m| {
            let (s, t) = (small.source(m), small.target(m));
            big.morphism_at(s.side, t.side, &small.word(m))
                .map(|i| f.h[i])
                .ok_or_else(|| missing(small.format_mor(m)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FunctorUG { g, h })
}

/// The triple overlap `U_{ikm}^{jln}` together with the restrictions of
/// `theta_{ik}^{jl}`, `theta_{km}^{ln}` and `theta_{im}^{jn}` to it.
pub struct TripleOverlap<'a> {
    pub category: OverlapCategory<'a>,
    pub theta_ik: FunctorUG,
    pub theta_km: FunctorUG,
    pub theta_im: FunctorUG,
}

const SELECTIONS: [[usize; 2]; 3] = [[0, 1], [1, 2], [0, 2]];

impl<'a> TripleOverlap<'a> {
    pub fn new(
        cm: &CrossedModule,
        base: &'a QuiverCategory,
        data: &CocycleData,
        lower: [usize; 3],
        upper: [usize; 3],
    ) -> Result<Self> {
        let cover = data.cover();
        let category = OverlapCategory::new(base, cover, &lower, &upper)?;
        let mut thetas = Vec::with_capacity(3);
        for sel in SELECTIONS {
            let lo: Vec<usize> = sel.iter().map(|&p| lower[p]).collect();
            let up: Vec<usize> = sel.iter().map(|&p| upper[p]).collect();
            let big = OverlapCategory::new(base, cover, &lo, &up)?;
            let theta = build_theta(cm, data, &big)?;
            thetas.push(restrict_theta(&theta, &big, &category, &sel)?);
        }
        let theta_im = thetas.pop().unwrap();
        let theta_km = thetas.pop().unwrap();
        let theta_ik = thetas.pop().unwrap();
        Ok(TripleOverlap {
            category,
            theta_ik,
            theta_km,
            theta_im,
        })
    }

    /// `h_ikm` on lower objects, `h_jln` on upper ones.
    pub fn components(&self, data: &CocycleData) -> Result<Vec<Element>> {
        self.category
            .objects()
            .iter()
            .map(|o| data.h(self.category.tag(o.side), o.point))
            .collect()
    }
}

fn check_relevant_cocycle(
    cm: &CrossedModule,
    base: &QuiverCategory,
    data: &CocycleData,
    tri: &TripleOverlap<'_>,
) -> Result<()> {
    for o in tri.category.objects() {
        let t = tri.category.tag(o.side);
        if let Err(w) = data.condition_at(cm, base, (t[0], t[1], t[2], o.point)) {
            return Err(Error::Precondition(format!(
                "cocycle condition fails ({w}); run verify_cocycle_condition for the full list"
            )));
        }
    }
    Ok(())
}

/// The transformation `theta_im -> theta_ik theta_km` on the triple overlap,
/// with components `h_ikm` and `h_jln`.
pub fn triple_transformation(
    cm: &CrossedModule,
    base: &QuiverCategory,
    data: &CocycleData,
    tri: &TripleOverlap<'_>,
) -> Result<NatTransf> {
    check_relevant_cocycle(cm, base, data, tri)?;
    let sp = FunctorSpace::new(&tri.category, cm)?;
    sp.nat(&tri.theta_im, tri.components(data)?)
}

/// Certifies the natural transformation between `theta_ik theta_km` and
/// `theta_im` on the triple overlap `lower`/`upper`.
pub fn verify_prop51(
    cm: &CrossedModule,
    base: &QuiverCategory,
    data: &CocycleData,
    lower: [usize; 3],
    upper: [usize; 3],
    checker: &Checker,
) -> Result<LawReport> {
    let tri = TripleOverlap::new(cm, base, data, lower, upper)?;
    let t = triple_transformation(cm, base, data, &tri)?;
    let ov = &tri.category;
    let sp = FunctorSpace::new(ov, cm)?;
    let (g, h) = (&cm.g, &cm.h);
    let product = sp.product(&tri.theta_ik, &tri.theta_km);
    let ht = &t.ht;
    let objs: Vec<usize> = (0..ov.objects().len()).collect();
    let mors: Vec<usize> = (0..ov.morphisms().len()).collect();
    let mname = |i: usize| ov.format_mor(&ov.morphisms()[i]);
    let ends = |i: usize| sp.ends(i);
    let mut report = LawReport::new("prop51");

    let thetas = [("ik", &tri.theta_ik), ("km", &tri.theta_km), ("im", &tri.theta_im)];
    report.push(checker.each("prop51.theta-functors", "Eq 5.37", &thetas, |(name, f)| {
        sp.check(f).err().map(|e| format!("theta_{name}: {e}"))
    }));

    report.push(checker.each("prop51.restriction", "Eq 5.38", &SELECTIONS, |sel| {
        let lo: Vec<usize> = sel.iter().map(|&p| lower[p]).collect();
        let up: Vec<usize> = sel.iter().map(|&p| upper[p]).collect();
        let direct = match theta_with(cm, data, ov, &lo, &up) {
            Ok(f) => f,
            Err(e) => return Some(e.to_string()),
        };
        let restricted = match sel {
            [0, 1] => &tri.theta_ik,
            [1, 2] => &tri.theta_km,
            _ => &tri.theta_im,
        };
        (!sp.functor_eq(&direct, restricted))
            .then(|| format!("theta_{} restricted differs from direct construction", format_tag(&lo)))
    }));

    report.push(checker.each("prop51.objects", "Eq 5.39", &objs, |&x| {
        let lhs = g.multiply(&cm.tau(&ht[x]), &tri.theta_im.g[x]);
        (!g.eq(&lhs, &product.g[x])).then(|| {
            format!(
                "{}: tau(hT) theta_im={} but theta_ik theta_km={}",
                ov.format_obj(&ov.objects()[x]),
                g.format(&lhs),
                g.format(&product.g[x])
            )
        })
    }));

    report.push(checker.each("prop51.h-component", "Eq 5.43", &mors, |&i| {
        let (a, b) = ends(i);
        let gauged = h.multiply(&h.multiply(&h.inverse(&ht[b]), &product.h[i]), &ht[a]);
        (!h.eq(&gauged, &tri.theta_im.h[i])).then(|| {
            format!(
                "{}: gauged product {} but theta_im {}",
                mname(i),
                h.format(&gauged),
                h.format(&tri.theta_im.h[i])
            )
        })
    }));

    let cross: Vec<usize> = mors
        .iter()
        .copied()
        .filter(|&i| matches!(ov.morphisms()[i], OMor::Cross(_)))
        .collect();
    report.push(checker.each("prop51.replay", "Eq 5.45", &cross, |&i| {
        let w = ov.word(&ov.morphisms()[i]);
        replay(cm, data, lower, upper, w.source, w.target)
            .err()
            .map(|e| format!("{}: {e}", mname(i)))
    }));

    let full = NatTransf {
        source: tri.theta_im.clone(),
        target: product.clone(),
        ht: ht.clone(),
    };
    report.push(LawRecord::single("prop51.naturality", "Eq 3.10", sp.check_nat(&full)));
    report.push(LawRecord::single(
        "prop51.transformation",
        "Eq 5.40",
        if sp.functor_eq(&t.target, &product) {
            Ok(())
        } else {
            Err(format!(
                "target {} differs from theta_ik theta_km {}",
                sp.format_functor(&t.target),
                sp.format_functor(&product)
            ))
        },
    ));
    Ok(report.sorted())
}

/// Executes each line of the chain taking the gauge-transformed product to
/// `h_jn(gamma1) h_im(gamma0)^-1`, for a morphism from `a0` to `a1`.
pub fn replay(
    cm: &CrossedModule,
    data: &CocycleData,
    [i, k, m]: [usize; 3],
    [j, l, n]: [usize; 3],
    a0: usize,
    a1: usize,
) -> std::result::Result<(), String> {
    let h = &cm.h;
    let at0 = |t: &[usize]| data.h(t, a0).map_err(|e| e.to_string());
    let at1 = |t: &[usize]| data.h(t, a1).map_err(|e| e.to_string());
    let inv = |x: Element| h.inverse(&x);
    let prod = |xs: &[Element]| h.product(xs);
    let g_ik = cm.tau(&at0(&[i, k])?);

    let first = prod(&[
        inv(at1(&[j, l, n])?),
        at1(&[j, l])?,
        inv(at0(&[i, k])?),
        cm.alpha(&g_ik, &prod(&[at1(&[l, n])?, inv(at0(&[k, m])?)])),
        at0(&[i, k, m])?,
    ]);
    let peiffer = prod(&[
        inv(at1(&[j, l, n])?),
        at1(&[j, l])?,
        inv(at0(&[i, k])?),
        at0(&[i, k])?,
        at1(&[l, n])?,
        inv(at0(&[k, m])?),
        inv(at0(&[i, k])?),
        at0(&[i, k, m])?,
    ]);
    let cancelled = prod(&[
        inv(at1(&[j, l, n])?),
        at1(&[j, l])?,
        at1(&[l, n])?,
        inv(at0(&[k, m])?),
        inv(at0(&[i, k])?),
        at0(&[i, k, m])?,
    ]);
    let regrouped = prod(&[
        at1(&[j, n])?,
        inv(prod(&[inv(at0(&[i, k, m])?), at0(&[i, k])?, at0(&[k, m])?])),
    ]);
    let last = prod(&[at1(&[j, n])?, inv(at0(&[i, m])?)]);
    let lines = [first, peiffer, cancelled, regrouped, last];
    for (s, w) in lines.windows(2).enumerate() {
        if !h.eq(&w[0], &w[1]) {
            return Err(format!(
                "step {} of the chain: {} != {}",
                s + 1,
                h.format(&w[0]),
                h.format(&w[1])
            ));
        }
    }
    Ok(())
}

/// Checks that `theta` is a functor on every overlap `U_{ik}^{jl}` of the
/// cover.
pub fn verify_theta_functors(
    cm: &CrossedModule,
    base: &QuiverCategory,
    data: &CocycleData,
    checker: &Checker,
) -> Result<LawRecord> {
    let n = data.cover().len();
    let mut quads = Vec::new();
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                for l in 0..n {
                    quads.push([i, k, j, l]);
                }
            }
        }
    }
    let checked = checker.each("theta.functor", "Eq 5.35", &quads, |&[i, k, j, l]| {
        let run = || -> Result<std::result::Result<(), String>> {
            let ov = OverlapCategory::new(base, data.cover(), &[i, k], &[j, l])?;
            let sp = FunctorSpace::new(&ov, cm)?;
            let theta = build_theta(cm, data, &ov)?;
            let g = &cm.g;
            for (idx, m) in ov.morphisms().iter().enumerate() {
                let img = sp.image(&theta, idx);
                let tgt = theta.g[ov.obj_index(&ov.target(m)).unwrap()];
                if !g.eq(&cm.target(&img), &tgt) {
                    return Ok(Err(format!("{}: target is not g_jl(gamma1)", ov.format_mor(m))));
                }
            }
            Ok(sp.check(&theta))
        };
        match run() {
            Ok(Ok(())) => None,
            Ok(Err(w)) => Some(format!("theta_{}{}^{}{}: {w}", i, k, j, l)),
            Err(e) => Some(e.to_string()),
        }
    });
    Ok(checked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{lookup, Perm};
    use crate::cocycle::data::verify_cocycle_condition;
    use crate::cocycle::overlap::Cover;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> Element {
        Element::Perm(Perm::parse(3, s).unwrap())
    }

    pub(crate) fn six() -> (QuiverCategory, Vec<Vec<usize>>) {
        let q = QuiverCategory::chain(6, 5);
        let sets = vec![
            vec![0, 1, 2, 3],
            vec![0, 1, 2, 3, 4],
            vec![1, 2, 3, 4, 5],
            vec![2, 3, 4, 5],
        ];
        (q, sets)
    }

    #[test]
    fn theta_on_single_arrow() {
        let q = QuiverCategory::chain(2, 1);
        let cm = lookup("s3-conj").unwrap();
        let cover = Cover::new(&q, vec![vec![0, 1], vec![0, 1]]).unwrap();
        let vals = [p("(12)"), p("(123)"), p("(13)"), p("(132)")];
        let d = CocycleData::constructive(
            &cm,
            &cover,
            |i, j, a| if i == j { p("e") } else { vals[(i + 2 * a) % 4] },
        );
        let ov = OverlapCategory::new(&q, &cover, &[0, 1], &[1, 0]).unwrap();
        let theta = build_theta(&cm, &d, &ov).unwrap();
        let sp = FunctorSpace::new(&ov, &cm).unwrap();
        let f = ov.morphisms().iter().position(|m| ov.format_mor(m) == "f1").unwrap();
        // h_10(o1) h_01(o0)^-1 = (132)(12)
        let expect = cm.h.multiply(&vals[3], &vals[0]);
        assert_eq!(theta.h[f], expect);
        let img = sp.image(&theta, f);
        assert_eq!(cm.target(&img), cm.tau(&vals[3]));
        let id = ov.morphisms().iter().position(|m| matches!(m, OMor::Id(_))).unwrap();
        assert_eq!(theta.h[id], p("e"));
        assert!(sp.check(&theta).is_ok());
    }

    #[test]
    fn theta_is_functor_from_h() {
        let (q, sets) = six();
        let cm = lookup("s3-conj").unwrap();
        let cover = Cover::new(&q, sets).unwrap();
        let d = CocycleData::random(&cm, &cover, &mut ChaCha8Rng::seed_from_u64(1));
        let ov = OverlapCategory::new(&q, &cover, &[0, 2], &[1, 3]).unwrap();
        let sp = FunctorSpace::new(&ov, &cm).unwrap();
        let hs: Vec<Element> = ov
            .objects()
            .iter()
            .map(|o| d.h(ov.tag(o.side), o.point).unwrap())
            .collect();
        assert_eq!(build_theta(&cm, &d, &ov).unwrap(), sp.functor_from_h(&hs).unwrap());
        assert!(verify_theta_functors(&cm, &q, &d, &Checker::new(0, 10))
            .unwrap()
            .passed());
    }

    #[test]
    fn restriction_commutes_with_evaluation() {
        let (q, sets) = six();
        let cm = lookup("s3-conj").unwrap();
        let cover = Cover::new(&q, sets).unwrap();
        let d = CocycleData::random(&cm, &cover, &mut ChaCha8Rng::seed_from_u64(2));
        let tri = TripleOverlap::new(&cm, &q, &d, [0, 1, 2], [1, 2, 3]).unwrap();
        let big = OverlapCategory::new(&q, &cover, &[1, 2], &[2, 3]).unwrap();
        let theta = build_theta(&cm, &d, &big).unwrap();
        for (x, o) in tri.category.objects().iter().enumerate() {
            assert_eq!(tri.theta_km.g[x], theta.g[big.object_at(o.side, o.point).unwrap()]);
        }
        assert!(restrict_theta(&theta, &big, &tri.category, &[0, 1]).is_err());
    }

    #[test]
    fn empty_triple_overlap_gives_empty_functor() {
        let q = QuiverCategory::chain(4, 3);
        let cm = lookup("z4-abelian").unwrap();
        let cover = Cover::new(&q, vec![vec![0, 1], vec![2, 3], vec![1, 2]]).unwrap();
        let d = CocycleData::coboundary(&cm, &cover, |_, _| Element::Cyclic(1));
        let tri = TripleOverlap::new(&cm, &q, &d, [0, 1, 2], [0, 1, 2]).unwrap();
        assert!(tri.theta_ik.g.is_empty() && tri.theta_ik.h.is_empty());
    }

    #[test]
    fn abelian_trivial_cocycle_gives_equality() {
        let (q, sets) = six();
        let cm = lookup("z4-abelian").unwrap();
        let cover = Cover::new(&q, sets).unwrap();
        let d = CocycleData::coboundary(&cm, &cover, |i, a| Element::Cyclic(((i + 2 * a) % 4) as u32));
        let tri = TripleOverlap::new(&cm, &q, &d, [0, 1, 2], [1, 2, 3]).unwrap();
        let sp = FunctorSpace::new(&tri.category, &cm).unwrap();
        assert_eq!(sp.product(&tri.theta_ik, &tri.theta_km), tri.theta_im);
        let t = triple_transformation(&cm, &q, &d, &tri).unwrap();
        assert!(t.ht.iter().all(|x| *x == Element::Cyclic(0)));
        let r = verify_prop51(&cm, &q, &d, [0, 1, 2], [1, 2, 3], &Checker::new(0, 10)).unwrap();
        assert!(r.passed(), "{}", r.to_table());
    }

    #[test]
    fn s3_prop51_exhaustive_on_six_objects() {
        let (q, sets) = six();
        let cm = lookup("s3-conj").unwrap();
        let cover = Cover::new(&q, sets).unwrap();
        for seed in 0..4 {
            let d = CocycleData::random(&cm, &cover, &mut ChaCha8Rng::seed_from_u64(seed));
            let r = verify_prop51(&cm, &q, &d, [0, 1, 2], [1, 2, 3], &Checker::new(0, 10)).unwrap();
            assert!(r.passed(), "{}", r.to_table());
            let replayed = r.record("prop51.replay").unwrap();
            // lower {1,2,3} to upper {2,3,4}: id_o2, id_o3 and six forward words
            assert_eq!(replayed.checked, 8);
        }
    }

    #[test]
    fn nonabelian_theta_product_is_not_strict() {
        let (q, sets) = six();
        let cm = lookup("s3-conj").unwrap();
        let cover = Cover::new(&q, sets).unwrap();
        let strict = (0..8).all(|seed| {
            let d = CocycleData::random(&cm, &cover, &mut ChaCha8Rng::seed_from_u64(seed));
            let tri = TripleOverlap::new(&cm, &q, &d, [0, 1, 2], [1, 2, 3]).unwrap();
            let sp = FunctorSpace::new(&tri.category, &cm).unwrap();
            sp.functor_eq(&sp.product(&tri.theta_ik, &tri.theta_km), &tri.theta_im)
        });
        assert!(!strict);
    }

    #[test]
    fn broken_cocycle_is_refused() {
        let (q, sets) = six();
        let cm = lookup("s3-conj").unwrap();
        let cover = Cover::new(&q, sets).unwrap();
        let mut d = CocycleData::random(&cm, &cover, &mut ChaCha8Rng::seed_from_u64(9));
        let v = d.h(&[0, 1], 2).unwrap();
        d.set(&[0, 1], 2, cm.h.multiply(&v, &p("(23)"))).unwrap();
        assert!(!verify_cocycle_condition(&cm, &q, &d, &Checker::new(0, 10)).passed());
        let err = verify_prop51(&cm, &q, &d, [0, 1, 2], [1, 2, 3], &Checker::new(0, 10)).unwrap_err();
        assert!(
            matches!(err, Error::Precondition(ref s) if s.contains("verify_cocycle_condition")),
            "{err}"
        );
    }
}
