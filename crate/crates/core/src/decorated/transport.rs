use std::collections::HashMap;
use std::sync::Mutex;

use nalgebra::{Matrix3, Vector3};

use crate::algebra::{exp_skew, hat, Element, Group, Rotation, GROUP_TOL};
use crate::base::{Family, Point, SampledPath};
use crate::error::{Error, Result};
use crate::exec::Checker;
use crate::report::{LawRecord, LawReport};
use crate::twisted::Eta;

const SKEW_TOL: f64 = 1e-12;

/// A connection form `A_0` on the trivial bundle `R^n x SO(k)`:
/// `A_0(x; v) = sum_i v_i (C_i + sum_j x_j L_ij)`, with skew `C_i`, `L_ij`.
#[derive(Clone, Debug, PartialEq)]
pub struct Connection {
    group_dim: usize,
    base_dim: usize,
    constant: Vec<Matrix3<f64>>,
    linear: Vec<Vec<Matrix3<f64>>>,
}

fn check_generator(group_dim: usize, k: &Matrix3<f64>, what: &str) -> Result<()> {
    if (k + k.transpose()).amax() > SKEW_TOL {
        return Err(Error::Structural(format!("{what} is not skew-symmetric")));
    }
    if group_dim == 2 && (k[(0, 2)].abs() + k[(1, 2)].abs() + k[(2, 0)].abs() + k[(2, 1)].abs()) > 0.0 {
        return Err(Error::Structural(format!("{what} leaves the so(2) block")));
    }
    Ok(())
}

/// The `so(2)` generator scaled by `theta`, embedded in a 3x3 matrix.
pub fn so2_generator(theta: f64) -> Matrix3<f64> {
    Matrix3::new(0.0, -theta, 0.0, theta, 0.0, 0.0, 0.0, 0.0, 0.0)
}

impl Connection {
    pub fn new(
        group_dim: usize,
        base_dim: usize,
        constant: Vec<Matrix3<f64>>,
        linear: Vec<Vec<Matrix3<f64>>>,
    ) -> Result<Self> {
        if !(2..=3).contains(&group_dim) {
            return Err(Error::Input(format!(
                "connections take values in so(2) or so(3), not so({group_dim})"
            )));
        }
        if !(1..=3).contains(&base_dim) {
            return Err(Error::Input(format!("base dimension {base_dim} is not 1, 2 or 3")));
        }
        if constant.len() != base_dim {
            return Err(Error::Input(format!(
                "{} constant coefficients for a {base_dim}-dimensional base",
                constant.len()
            )));
        }
        if !linear.is_empty() && (linear.len() != base_dim || linear.iter().any(|r| r.len() != base_dim)) {
            return Err(Error::Input(format!(
                "linear coefficients must form a {base_dim}x{base_dim} array"
            )));
        }
        for (i, c) in constant.iter().enumerate() {
            check_generator(group_dim, c, &format!("constant coefficient {i}"))?;
        }
        for (i, row) in linear.iter().enumerate() {
            for (j, l) in row.iter().enumerate() {
                check_generator(group_dim, l, &format!("linear coefficient ({i}, {j})"))?;
            }
        }
        Ok(Connection {
            group_dim,
            base_dim,
            constant,
            linear,
        })
    }

    pub fn zero(group_dim: usize, base_dim: usize) -> Result<Self> {
        Self::new(group_dim, base_dim, vec![Matrix3::zeros(); base_dim], vec![])
    }

    /// `A_0 = theta J dx` on a line, `J` the `so(2)` generator.
    pub fn so2_constant(theta: f64) -> Self {
        Connection {
            group_dim: 2,
            base_dim: 1,
            constant: vec![so2_generator(theta)],
            linear: vec![],
        }
    }

    /// Constant `so(3)` coefficients given as rotation vectors.
    pub fn so3_constant(base_dim: usize, coeffs: &[Vector3<f64>]) -> Result<Self> {
        Self::new(3, base_dim, coeffs.iter().map(hat).collect(), vec![])
    }

    /// `so(3)` coefficients given as rotation vectors, `linear[i][j]` the
    /// coefficient of `x_j dx_i`.
    pub fn so3_linear(base_dim: usize, constant: &[Vector3<f64>], linear: &[Vec<Vector3<f64>>]) -> Result<Self> {
        Self::new(
            3,
            base_dim,
            constant.iter().map(hat).collect(),
            linear.iter().map(|r| r.iter().map(hat).collect()).collect(),
        )
    }

    pub fn group_dim(&self) -> usize {
        self.group_dim
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn is_linear(&self) -> bool {
        !self.linear.is_empty()
    }

    pub fn group(&self) -> Group {
        Group::special_orthogonal(self.group_dim)
    }

    /// `A_0(x; v)`.
    pub fn eval(&self, x: &Point, v: &Point) -> Matrix3<f64> {
        let mut a = Matrix3::zeros();
        for (i, &vi) in v.iter().enumerate().take(self.base_dim) {
            if vi == 0.0 {
                continue;
            }
            let mut c = self.constant[i];
            if let Some(row) = self.linear.get(i) {
                for (j, l) in row.iter().enumerate() {
                    c += l * x[j];
                }
            }
            a += c * vi;
        }
        a
    }

    fn check_path(&self, path: &SampledPath) -> Result<()> {
        if path.dim() != self.base_dim {
            return Err(Error::Mismatch(format!(
                "path in R^{} for a connection on R^{}",
                path.dim(),
                self.base_dim
            )));
        }
        Ok(())
    }
}

/// Solves `g' g^-1 = -A_0(gamma')` with `g(0) = initial`: on each of `steps`
/// substeps of every linear segment, left-multiplies by
/// `exp(-A_0(midpoint; displacement))`.
pub fn transport_from(conn: &Connection, path: &SampledPath, steps: usize, initial: Element) -> Result<Element> {
    conn.check_path(path)?;
    if steps == 0 {
        return Err(Error::Input("transport needs at least one step per segment".into()));
    }
    let mut acc = match initial {
        Element::Rot(r) if r.dim as usize == conn.group_dim => r.m,
        other => {
            return Err(Error::Structural(format!(
                "initial value {other:?} is not in SO({})",
                conn.group_dim
            )))
        }
    };
    let n = steps as f64;
    for w in path.samples().windows(2) {
        let (a, b) = (w[0], w[1]);
        if a == b {
            continue;
        }
        let mut d = [0.0; 3];
        for i in 0..3 {
            d[i] = (b[i] - a[i]) / n;
        }
        for s in 0..steps {
            let u = (s as f64 + 0.5) / n;
            let mut x = [0.0; 3];
            for i in 0..3 {
                x[i] = a[i] + (b[i] - a[i]) * u;
            }
            acc = exp_skew(&(-conn.eval(&x, &d))) * acc;
        }
    }
    Ok(Element::Rot(Rotation {
        dim: conn.group_dim as u8,
        m: acc,
    }))
}

/// `eta(gamma) = g_gamma(1)`, transport from the identity.
pub fn parallel_transport(conn: &Connection, path: &SampledPath, steps: usize) -> Result<Element> {
    transport_from(conn, path, steps, Element::Rot(Rotation::identity(conn.group_dim)))
}

type PathKey = Vec<[u64; 3]>;

fn key(path: &SampledPath) -> PathKey {
    path.samples()
        .iter()
        .map(|p| [p[0].to_bits(), p[1].to_bits(), p[2].to_bits()])
        .collect()
}

/// Parallel transport as a map `eta` on the path category, memoized per
/// sample list.
pub struct TransportEta {
    pub conn: Connection,
    pub steps: usize,
    cache: Mutex<HashMap<PathKey, Element>>,
}

impl TransportEta {
    pub fn new(conn: Connection, steps: usize) -> Result<Self> {
        if steps == 0 {
            return Err(Error::Input("transport needs at least one step per segment".into()));
        }
        Ok(TransportEta {
            conn,
            steps,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn transport(&self, path: &SampledPath) -> Result<Element> {
        let k = key(path);
        if let Some(v) = self.cache.lock().expect("cache lock").get(&k) {
            return Ok(*v);
        }
        let v = parallel_transport(&self.conn, path, self.steps)?;
        self.cache.lock().expect("cache lock").insert(k, v);
        Ok(v)
    }
}

impl Eta<crate::base::PathCategory> for TransportEta {
    fn eta(&self, m: &SampledPath) -> Element {
        self.transport(m).unwrap_or_else(|e| panic!("{e}"))
    }
}

/// Errors of the transport along `path` against `exact` at
/// `base_steps * 2^r` substeps for `r = 0..=refinements`, and the observed
/// orders `log2(e_r / e_{r+1})`.
#[derive(Clone, Debug, PartialEq)]
pub struct Convergence {
    pub steps: Vec<usize>,
    pub errors: Vec<f64>,
    pub orders: Vec<f64>,
}

/// Errors below this are treated as rounding noise, where no order can be
/// observed.
pub const ROUNDOFF_FLOOR: f64 = 1e-13;

impl Convergence {
    /// True when every observed order is at least `min_order`, counting a
    /// refinement whose coarser error already sits at the rounding floor as
    /// exact.
    pub fn order_at_least(&self, min_order: f64) -> bool {
        self.orders
            .iter()
            .zip(&self.errors)
            .all(|(o, e)| *e <= ROUNDOFF_FLOOR || *o >= min_order)
    }

    pub fn is_exact(&self) -> bool {
        self.errors.iter().all(|e| *e <= ROUNDOFF_FLOOR)
    }
}

pub fn convergence(
    conn: &Connection,
    path: &SampledPath,
    exact: &Element,
    base_steps: usize,
    refinements: usize,
) -> Result<Convergence> {
    let group = conn.group();
    let steps: Vec<usize> = (0..=refinements).map(|r| base_steps << r).collect();
    let errors = steps
        .iter()
        .map(|&n| parallel_transport(conn, path, n).map(|g| group.distance(&g, exact)))
        .collect::<Result<Vec<_>>>()?;
    let orders = errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    Ok(Convergence { steps, errors, orders })
}

/// Minimum observed order accepted by the convergence record.
pub const MIN_ORDER: f64 = 1.9;

/// `exp(-A_0(b - a))` per segment, multiplied in path order: exact for a
/// constant connection.
pub fn constant_closed_form(conn: &Connection, path: &SampledPath) -> Option<Element> {
    if conn.is_linear() {
        return None;
    }
    let mut acc = Matrix3::identity();
    for w in path.samples().windows(2) {
        let d = [w[1][0] - w[0][0], w[1][1] - w[0][1], w[1][2] - w[0][2]];
        acc = exp_skew(&(-conn.eval(&[0.0; 3], &d))) * acc;
    }
    Some(Element::Rot(Rotation {
        dim: conn.group_dim as u8,
        m: acc,
    }))
}

/// Numerical certification of the transport map on a path family: zero
/// connection, closed form for constant connections, multiplicativity on
/// composable pairs, reversal, and the observed order under step-halving.
pub fn verify_transport(
    conn: &Connection,
    steps: usize,
    family: &Family<SampledPath>,
    checker: &Checker,
) -> Result<LawReport> {
    let group = conn.group();
    let zero = Connection::zero(conn.group_dim, conn.base_dim)?;
    let eta = TransportEta::new(conn.clone(), steps)?;
    for m in &family.mors {
        eta.transport(m)?;
    }
    let t = |m: &SampledPath| eta.eta(m);
    let mut report = LawReport::new("transport");

    report.push(checker.each("transport.zero-connection", "Eq 6.29", &family.mors, |m| {
        let g = parallel_transport(&zero, m, steps).ok()?;
        (!group.is_identity(&g)).then(|| format!("zero connection moves {}", group.format(&g)))
    }));

    report.push(checker.each("transport.identity", "Eq 6.18", &family.mors, |m| {
        let c = SampledPath::constant(m.dim(), m.start());
        (t(&c) != group.identity()).then(|| format!("constant path transports to {}", group.format(&t(&c))))
    }));

    if !conn.is_linear() {
        report.push(checker.each("transport.closed-form", "Eq 6.29", &family.mors, |m| {
            let exact = constant_closed_form(conn, m)?;
            let d = group.distance(&t(m), &exact);
            (d > GROUP_TOL).then(|| format!("distance {d:e} from exp(-c L)"))
        }));
    }

    report.push(
        checker.each("transport.multiplicativity", "Eq 6.18", &family.pairs, |&(i2, i1)| {
            let (m2, m1) = (&family.mors[i2], &family.mors[i1]);
            let whole = parallel_transport(conn, &m2.after(m1).ok()?, steps).ok()?;
            let continued = transport_from(conn, m2, steps, t(m1)).ok()?;
            let d = group.distance(&group.multiply(&t(m2), &t(m1)), &whole);
            (continued != whole || d > 1e-12).then(|| {
                format!(
                    "eta(g2 o g1) = {} but continued = {}, eta(g2) eta(g1) off by {d:e}",
                    group.format(&whole),
                    group.format(&continued)
                )
            })
        }),
    );

    report.push(checker.each("transport.reversal", "Eq 6.29", &family.mors, |m| {
        let d = group.distance(&t(&m.reversed()), &group.inverse(&t(m)));
        (d > 1e-10).then(|| format!("eta(reversed) off eta^-1 by {d:e}"))
    }));

    let reference = family
        .mors
        .iter()
        .find(|m| !m.is_constant())
        .cloned()
        .unwrap_or_else(|| SampledPath::segment(conn.base_dim, [0.0; 3], [1.0, 0.0, 0.0]));
    let exact = match constant_closed_form(conn, &reference) {
        Some(e) => e,
        None => parallel_transport(conn, &reference, 16 << 10)?,
    };
    let conv = convergence(conn, &reference, &exact, 16, 3)?;
    let orders: Vec<String> = conv.orders.iter().map(|o| format!("{o:.3}")).collect();
    let note = if conv.is_exact() {
        "exact to rounding at every refinement".to_string()
    } else {
        format!("observed orders {}", orders.join(", "))
    };
    report.push(
        LawRecord::single(
            "transport.convergence",
            "Eq 6.29",
            if conv.order_at_least(MIN_ORDER) {
                Ok(())
            } else {
                Err(format!("errors {:?}, orders {}", conv.errors, orders.join(", ")))
            },
        )
        .with_note(note),
    );
    Ok(report.sorted())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn seg(a: f64, b: f64) -> SampledPath {
        SampledPath::segment(1, [a, 0.0, 0.0], [b, 0.0, 0.0])
    }

    fn rot(t: f64) -> Element {
        Element::Rot(Rotation::so2(t))
    }

    #[test]
    fn zero_connection_is_identity() {
        let c = Connection::zero(3, 2).unwrap();
        let p = SampledPath::new(2, &[vec![0.0, 0.0], vec![1.0, 2.0], vec![-1.0, 0.5]]).unwrap();
        let g = parallel_transport(&c, &p, 10).unwrap();
        assert!(c.group().is_identity(&g));
    }

    #[test]
    fn constant_so2_matches_closed_form() {
        let c = Connection::so2_constant(FRAC_PI_2);
        let g = parallel_transport(&c, &seg(0.0, 1.0), 10_000).unwrap();
        assert!(c.group().distance(&g, &rot(-FRAC_PI_2)) < 1e-9);
        let two = parallel_transport(&c, &seg(1.0, 2.0).after(&seg(0.0, 1.0)).unwrap(), 100).unwrap();
        assert!(c.group().distance(&two, &rot(-2.0 * FRAC_PI_2)) < 1e-12);
    }

    #[test]
    fn split_path_continues_bit_for_bit() {
        let c = Connection::so3_linear(
            2,
            &[Vector3::new(0.3, -0.2, 0.5), Vector3::new(0.1, 0.4, 0.0)],
            &[
                vec![Vector3::new(0.2, 0.0, -0.1), Vector3::new(0.0, 0.3, 0.1)],
                vec![Vector3::new(-0.2, 0.1, 0.0), Vector3::new(0.1, 0.0, 0.2)],
            ],
        )
        .unwrap();
        let a = SampledPath::new(2, &[vec![0.0, 0.0], vec![0.7, 0.2]]).unwrap();
        let b = SampledPath::new(2, &[vec![0.7, 0.2], vec![0.1, -0.9], vec![1.0, 1.0]]).unwrap();
        let whole = parallel_transport(&c, &b.after(&a).unwrap(), 37).unwrap();
        let first = parallel_transport(&c, &a, 37).unwrap();
        assert_eq!(transport_from(&c, &b, 37, first).unwrap(), whole);
        let prod = c.group().multiply(&parallel_transport(&c, &b, 37).unwrap(), &first);
        assert!(c.group().distance(&prod, &whole) < 1e-13);
        let rev = parallel_transport(&c, &b.after(&a).unwrap().reversed(), 37).unwrap();
        assert!(c.group().distance(&rev, &c.group().inverse(&whole)) < 1e-13);
    }

    #[test]
    fn non_skew_input_is_structural() {
        let bad = Matrix3::new(1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        assert!(matches!(
            Connection::new(3, 1, vec![bad], vec![]),
            Err(Error::Structural(_))
        ));
        let out_of_block = hat(&Vector3::new(1.0, 0.0, 0.0));
        assert!(matches!(
            Connection::new(2, 1, vec![out_of_block], vec![]),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn so3_linear_is_second_order() {
        let c = Connection::so3_linear(
            1,
            &[Vector3::new(0.4, -0.7, 0.2)],
            &[vec![Vector3::new(0.9, 0.3, -0.6)]],
        )
        .unwrap();
        let p = seg(0.0, 1.5);
        let exact = parallel_transport(&c, &p, 1 << 16).unwrap();
        let conv = convergence(&c, &p, &exact, 16, 3).unwrap();
        for o in &conv.orders {
            assert!((o - 2.0).abs() < 0.1, "{conv:?}");
        }
    }

    #[test]
    fn transport_suite_passes() {
        use crate::base::{PathCategory, PathFamilyConfig};
        let checker = Checker::new(11, 100);
        let fam = PathCategory::new(1).unwrap().family(11, &PathFamilyConfig::default());
        let r = verify_transport(&Connection::so2_constant(FRAC_PI_2), 10_000, &fam, &checker).unwrap();
        assert!(r.passed(), "{}", r.to_table());
        assert!(r.record("transport.closed-form").is_some());
        let fam2 = PathCategory::new(2).unwrap().family(11, &PathFamilyConfig::default());
        let lin = Connection::so3_linear(
            2,
            &[Vector3::new(0.3, -0.2, 0.5), Vector3::new(0.1, 0.4, 0.0)],
            &[
                vec![Vector3::new(0.2, 0.0, -0.1), Vector3::new(0.0, 0.3, 0.1)],
                vec![Vector3::new(-0.2, 0.1, 0.0), Vector3::new(0.1, 0.0, 0.2)],
            ],
        )
        .unwrap();
        let r = verify_transport(&lin, 64, &fam2, &checker).unwrap();
        assert!(r.passed(), "{}", r.to_table());
        assert!(r.record("transport.closed-form").is_none());
    }
}
