use catbundle::algebra::{lookup, CATALOG};
use catbundle::base::{QuiverCategory, SampledPath};
use catbundle::bundle::Bundle;
use catbundle::decorated::{decorated, parallel_transport, transport_from, Connection, DecoratedBundle, TransportEta};
use catbundle::product::FunctorSpace;
use catbundle::{CrossedModule, Element, Group, TwoGroupMorphism};
use nalgebra::Vector3;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn positive() -> Vec<CrossedModule> {
    CATALOG
        .iter()
        .filter(|e| !e.negative)
        .map(|e| lookup(e.id).unwrap())
        .collect()
}

fn draw(group: &Group, rng: &mut ChaCha8Rng, n: usize) -> Vec<Element> {
    (0..n).map(|_| group.sample(rng)).collect()
}

fn close(group: &Group, a: &Element, b: &Element) -> bool {
    group.eq_within(a, b, 1e-9)
}

fn mor_close(cm: &CrossedModule, a: &TwoGroupMorphism, b: &TwoGroupMorphism) -> bool {
    cm.mor_eq_within(a, b, 1e-9)
}

fn vec3(v: [f64; 3]) -> Vector3<f64> {
    Vector3::new(v[0], v[1], v[2])
}

fn coord() -> impl Strategy<Value = f64> {
    -1.5f64..1.5
}

fn coeffs() -> impl Strategy<Value = [f64; 3]> {
    [coord(), coord(), coord()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn peiffer_and_equivariance(which in 0usize..7, seed in any::<u64>()) {
        let cms = positive();
        let cm = &cms[which % cms.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = draw(&cm.h, &mut rng, 2);
        let g = cm.g.sample(&mut rng);
        let lhs = cm.alpha(&cm.tau(&h[0]), &h[1]);
        prop_assert!(close(&cm.h, &lhs, &cm.h.conjugate(&h[0], &h[1])));
        let lhs = cm.tau(&cm.alpha(&g, &h[0]));
        prop_assert!(close(&cm.g, &lhs, &cm.g.conjugate(&g, &cm.tau(&h[0]))));
    }

    #[test]
    fn semidirect_product_is_a_group(which in 0usize..7, seed in any::<u64>()) {
        let cms = positive();
        let cm = &cms[which % cms.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m: Vec<TwoGroupMorphism> = (0..3)
            .map(|_| TwoGroupMorphism::new(cm.h.sample(&mut rng), cm.g.sample(&mut rng)))
            .collect();
        let lhs = cm.sdp_multiply(&cm.sdp_multiply(&m[2], &m[1]), &m[0]);
        let rhs = cm.sdp_multiply(&m[2], &cm.sdp_multiply(&m[1], &m[0]));
        prop_assert!(mor_close(cm, &lhs, &rhs));
        let one = cm.sdp_multiply(&m[0], &cm.sdp_inverse(&m[0]));
        prop_assert!(mor_close(cm, &one, &cm.unit()));
        let st = cm.sdp_multiply(&m[1], &m[0]);
        prop_assert!(close(&cm.g, &cm.source(&st), &cm.g.multiply(&cm.source(&m[1]), &cm.source(&m[0]))));
        prop_assert!(close(&cm.g, &cm.target(&st), &cm.g.multiply(&cm.target(&m[1]), &cm.target(&m[0]))));
    }

    #[test]
    fn exchange_law(which in 0usize..7, seed in any::<u64>()) {
        let cms = positive();
        let cm = &cms[which % cms.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mor = |rng: &mut ChaCha8Rng| TwoGroupMorphism::new(cm.h.sample(rng), cm.g.sample(rng));
        let phi1 = mor(&mut rng);
        let psi1 = mor(&mut rng);
        let phi2 = TwoGroupMorphism::new(cm.h.sample(&mut rng), cm.target(&phi1));
        let psi2 = TwoGroupMorphism::new(cm.h.sample(&mut rng), cm.target(&psi1));
        let lhs = cm.compose_vertical(&cm.sdp_multiply(&phi2, &psi2), &cm.sdp_multiply(&phi1, &psi1)).unwrap();
        let rhs = cm.sdp_multiply(
            &cm.compose_vertical(&phi2, &phi1).unwrap(),
            &cm.compose_vertical(&psi2, &psi1).unwrap(),
        );
        prop_assert!(mor_close(cm, &lhs, &rhs));
    }

    #[test]
    fn gh_coordinates_round_trip(which in 0usize..7, seed in any::<u64>()) {
        let cms = positive();
        let cm = &cms[which % cms.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, h) = (cm.g.sample(&mut rng), cm.h.sample(&mut rng));
        let m = cm.from_gh(&g, &h);
        prop_assert!(close(&cm.g, &cm.source(&m), &g));
        let (g2, h2) = cm.to_gh(&m);
        prop_assert!(close(&cm.g, &g, &g2));
        prop_assert!(close(&cm.h, &h, &h2));
    }

    #[test]
    fn functors_from_object_data(id in prop::sample::select(vec!["s3-conj", "z4-conj", "z2-z4-abelian"]), seed in any::<u64>()) {
        let cm = lookup(id).unwrap();
        let q = QuiverCategory::new(&["a", "b", "c"], &[("f", "a", "b"), ("g", "b", "c"), ("k", "a", "c")], 3).unwrap();
        let sp = FunctorSpace::new(&q, &cm).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f1 = sp.functor_from_h(&draw(&cm.h, &mut rng, 3)).unwrap();
        let f2 = sp.functor_from_h(&draw(&cm.h, &mut rng, 3)).unwrap();
        prop_assert!(sp.check(&f1).is_ok());
        prop_assert!(sp.check(&sp.product(&f2, &f1)).is_ok());
        prop_assert!(sp.functor_eq(&sp.product(&f1, &sp.inverse(&f1)), &sp.unit()));
        for &(i2, i1, c) in sp.composable() {
            let composed = cm.compose_vertical(&sp.image(&f1, i2), &sp.image(&f1, i1)).unwrap();
            prop_assert!(cm.mor_eq(&composed, &sp.image(&f1, c)));
        }
    }

    #[test]
    fn transport_is_multiplicative(
        a in coeffs(), b in coeffs(), l in coeffs(),
        p0 in coeffs(), p1 in coeffs(), p2 in coeffs(),
        steps in 1usize..40,
    ) {
        let conn = Connection::so3_linear(3, &[vec3(a), vec3(b), vec3(a)], &[vec![vec3(l); 3], vec![vec3(b); 3], vec![vec3(a); 3]]).unwrap();
        let first = SampledPath::new(3, &[p0.to_vec(), p1.to_vec()]).unwrap();
        let second = SampledPath::new(3, &[p1.to_vec(), p2.to_vec()]).unwrap();
        let whole = second.after(&first).unwrap();
        let split = transport_from(&conn, &second, steps, parallel_transport(&conn, &first, steps).unwrap()).unwrap();
        prop_assert_eq!(split, parallel_transport(&conn, &whole, steps).unwrap());
        let g = conn.group();
        let back = g.multiply(&parallel_transport(&conn, &whole.reversed(), 4 * steps).unwrap(), &parallel_transport(&conn, &whole, 4 * steps).unwrap());
        let tol = 1.0 / (steps * steps) as f64;
        prop_assert!(g.distance(&back, &g.identity()) < tol, "{}", g.distance(&back, &g.identity()));
    }

    #[test]
    fn theta_round_trips_and_preserves_structure(theta in -3.0f64..3.0, x in coord(), y in coord(), z in coord(), seed in any::<u64>()) {
        let cm = lookup("so2-conj").unwrap();
        let eta = TransportEta::new(Connection::so2_constant(theta), 64).unwrap();
        let db = DecoratedBundle::new(&cm, &eta).unwrap();
        let tb = db.twisted();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let [g1, h1, h2, k] = [0; 4].map(|_| cm.g.sample(&mut rng));
        let m1 = decorated(SampledPath::new(1, &[vec![x], vec![y]]).unwrap(), g1, h1);
        let m2 = decorated(SampledPath::new(1, &[vec![y], vec![z]]).unwrap(), db.dec_target(&m1).1, h2);
        let back = db.theta_inverse(&db.theta(&m1));
        prop_assert!(cm.g.eq(&back.arrow.g, &m1.arrow.g) && cm.h.eq(&back.arrow.h, &m1.arrow.h));
        prop_assert!(close(&cm.g, &tb.target(&db.theta(&m1)).1, &db.dec_target(&m1).1));
        let lhs = db.theta(&db.dec_compose(&m2, &m1).unwrap());
        let rhs = tb.compose(&db.theta(&m2), &db.theta(&m1)).unwrap();
        prop_assert!(cm.mor_eq_within(&lhs.arrow, &rhs.arrow, 1e-9));
        let k = TwoGroupMorphism::new(cm.h.identity(), k);
        let lhs = db.theta(&db.dec_act(&m1, &k));
        let rhs = tb.act(&db.theta(&m1), &k);
        prop_assert!(cm.mor_eq_within(&lhs.arrow, &rhs.arrow, 1e-9));
    }

    #[test]
    fn decorations_multiply_first_then_second(seed in any::<u64>()) {
        let cm = lookup("so3-conj").unwrap();
        let conn = Connection::so3_constant(1, &[Vector3::new(0.2, -0.4, 0.7)]).unwrap();
        let eta = TransportEta::new(conn, 16).unwrap();
        let db = DecoratedBundle::new(&cm, &eta).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let [g1, h1, h2] = [0; 3].map(|_| cm.g.sample(&mut rng));
        let m1 = decorated(SampledPath::new(1, &[vec![0.0], vec![0.5]]).unwrap(), g1, h1);
        let m2 = decorated(SampledPath::new(1, &[vec![0.5], vec![1.0]]).unwrap(), db.dec_target(&m1).1, h2);
        let c = db.dec_compose(&m2, &m1).unwrap();
        prop_assert!(cm.h.eq(&c.arrow.h, &cm.h.multiply(&h1, &h2)));
        prop_assert!(close(&cm.g, &db.dec_target(&c).1, &db.dec_target(&m2).1));
    }
}
