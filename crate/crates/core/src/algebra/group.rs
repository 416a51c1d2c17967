use std::fmt;
use std::sync::Arc;

use nalgebra::{Matrix3, Vector3};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::perm::Perm;
use crate::error::{Error, Result};

/// Default equality tolerance for matrix groups (max-abs entry difference).
pub const GROUP_TOL: f64 = 1e-9;

/// Orthogonality slack accepted by [`Group::contains`] for matrix elements.
const MEMBERSHIP_TOL: f64 = 1e-8;

/// A rotation matrix. `SO(2)` elements live in the upper-left block of a
/// 3x3 matrix whose last row and column are `e_3`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotation {
    pub dim: u8,
    pub m: Matrix3<f64>,
}

impl Rotation {
    pub fn identity(dim: usize) -> Self {
        Rotation {
            dim: dim as u8,
            m: Matrix3::identity(),
        }
    }

    /// Counter-clockwise rotation of the plane by `theta`.
    pub fn so2(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Rotation {
            dim: 2,
            m: Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0),
        }
    }

    /// Rotation about `axis` by `|v|` (Rodrigues).
    pub fn from_rotation_vector(v: Vector3<f64>) -> Self {
        Rotation {
            dim: 3,
            m: exp_skew(&hat(&v)),
        }
    }

    /// Angle of an `SO(2)` element in `(-pi, pi]`.
    pub fn angle(&self) -> f64 {
        self.m[(1, 0)].atan2(self.m[(0, 0)])
    }

    pub fn block(&self) -> Vec<Vec<f64>> {
        let d = self.dim as usize;
        (0..d).map(|r| (0..d).map(|c| self.m[(r, c)]).collect()).collect()
    }
}

/// The skew matrix `v^` with `v^ w = v x w`.
pub fn hat(v: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0)
}

/// Inverse of [`hat`] (reads the skew part only).
pub fn vee(k: &Matrix3<f64>) -> Vector3<f64> {
    Vector3::new(
        0.5 * (k[(2, 1)] - k[(1, 2)]),
        0.5 * (k[(0, 2)] - k[(2, 0)]),
        0.5 * (k[(1, 0)] - k[(0, 1)]),
    )
}

/// Matrix exponential of a skew-symmetric 3x3 matrix, exactly orthogonal up to
/// rounding. A plane generator (only the (0,1)/(1,0) entries set) stays in
/// the embedded `SO(2)` block.
pub fn exp_skew(k: &Matrix3<f64>) -> Matrix3<f64> {
    let w = vee(k);
    let theta = w.norm();
    if theta == 0.0 {
        return Matrix3::identity();
    }
    // Pure plane rotation: use the closed form directly so the block is exact.
    if w.x == 0.0 && w.y == 0.0 {
        let (s, c) = w.z.sin_cos();
        return Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0);
    }
    let kn = k / theta;
    let (s, c) = theta.sin_cos();
    Matrix3::identity() + kn * s + (kn * kn) * (1.0 - c)
}

/// An element of one of the supported groups.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Element {
    /// Residue `k` in `Z_n` (the group is additive).
    Cyclic(u32),
    Perm(Perm),
    Rot(Rotation),
}

impl Element {
    pub fn as_rotation(&self) -> Option<&Rotation> {
        match self {
            Element::Rot(r) => Some(r),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupKind {
    Cyclic(u32),
    Symmetric(usize),
    /// `SO(n)` for `n` in {2, 3}.
    SpecialOrthogonal(usize),
}

/// A finite or matrix group with its law, inverse, equality and sampler.
#[derive(Clone)]
pub struct Group {
    kind: GroupKind,
    tol: f64,
    elements: Option<Arc<[Element]>>,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group({})", self.name())
    }
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Group {
    pub fn new(kind: GroupKind) -> Result<Self> {
        let elements: Option<Arc<[Element]>> = match kind {
            GroupKind::Cyclic(0) => return Err(Error::Input("Z_0 is not a group".into())),
            GroupKind::Cyclic(n) => Some((0..n).map(Element::Cyclic).collect()),
            GroupKind::Symmetric(n) if n == 0 || n > super::perm::MAX_DEGREE => {
                return Err(Error::Input(format!("unsupported symmetric group S{n}")))
            }
            GroupKind::Symmetric(n) => {
                // Listed by cycle notation: e, transpositions, then longer cycles.
                let mut perms = Perm::all(n);
                perms.sort_by_cached_key(|p| {
                    let s = p.to_string();
                    (s.len(), s)
                });
                Some(perms.into_iter().map(Element::Perm).collect())
            }
            GroupKind::SpecialOrthogonal(2 | 3) => None,
            GroupKind::SpecialOrthogonal(n) => return Err(Error::Input(format!("unsupported matrix group SO({n})"))),
        };
        Ok(Group {
            kind,
            tol: GROUP_TOL,
            elements,
        })
    }

    pub fn cyclic(n: u32) -> Self {
        Group::new(GroupKind::Cyclic(n)).expect("n > 0")
    }

    pub fn symmetric(n: usize) -> Self {
        Group::new(GroupKind::Symmetric(n)).expect("supported degree")
    }

    pub fn special_orthogonal(n: usize) -> Self {
        Group::new(GroupKind::SpecialOrthogonal(n)).expect("n in {2, 3}")
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn name(&self) -> String {
        match self.kind {
            GroupKind::Cyclic(n) => format!("Z{n}"),
            GroupKind::Symmetric(n) => format!("S{n}"),
            GroupKind::SpecialOrthogonal(n) => format!("SO({n})"),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.elements.is_some()
    }

    pub fn is_matrix(&self) -> bool {
        matches!(self.kind, GroupKind::SpecialOrthogonal(_))
    }

    pub fn order(&self) -> Option<usize> {
        self.elements.as_ref().map(|e| e.len())
    }

    pub fn elements(&self) -> Option<&[Element]> {
        self.elements.as_deref()
    }

    pub fn identity(&self) -> Element {
        match self.kind {
            GroupKind::Cyclic(_) => Element::Cyclic(0),
            GroupKind::Symmetric(n) => Element::Perm(Perm::identity(n)),
            GroupKind::SpecialOrthogonal(n) => Element::Rot(Rotation::identity(n)),
        }
    }

    /// Whether `x` belongs to this group's carrier.
    pub fn contains(&self, x: &Element) -> bool {
        match (self.kind, x) {
            (GroupKind::Cyclic(n), Element::Cyclic(k)) => *k < n,
            (GroupKind::Symmetric(n), Element::Perm(p)) => p.degree() == n,
            (GroupKind::SpecialOrthogonal(n), Element::Rot(r)) => {
                if r.dim as usize != n {
                    return false;
                }
                let ortho = (r.m.transpose() * r.m - Matrix3::identity()).amax();
                let det = (r.m.determinant() - 1.0).abs();
                let block_ok = n == 3
                    || (r.m[(0, 2)].abs() + r.m[(1, 2)].abs() + r.m[(2, 0)].abs() + r.m[(2, 1)].abs()
                        <= MEMBERSHIP_TOL
                        && (r.m[(2, 2)] - 1.0).abs() <= MEMBERSHIP_TOL);
                ortho <= MEMBERSHIP_TOL && det <= MEMBERSHIP_TOL && block_ok
            }
            _ => false,
        }
    }

    pub fn try_multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        match (self.kind, a, b) {
            (GroupKind::Cyclic(n), Element::Cyclic(x), Element::Cyclic(y)) => Ok(Element::Cyclic((x + y) % n)),
            (GroupKind::Symmetric(_), Element::Perm(x), Element::Perm(y)) if x.degree() == y.degree() => {
                Ok(Element::Perm(x.compose(y)))
            }
            (GroupKind::SpecialOrthogonal(n), Element::Rot(x), Element::Rot(y))
                if x.dim as usize == n && y.dim as usize == n =>
            {
                Ok(Element::Rot(Rotation {
                    dim: x.dim,
                    m: x.m * y.m,
                }))
            }
            _ => Err(Error::Structural(format!(
                "cannot multiply {} and {} in {}",
                self.format(a),
                self.format(b),
                self.name()
            ))),
        }
    }

    /// Group law. Panics when the operands are not in this carrier; callers
    /// that handle foreign values go through [`Group::try_multiply`].
    pub fn multiply(&self, a: &Element, b: &Element) -> Element {
        self.try_multiply(a, b).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn inverse(&self, a: &Element) -> Element {
        match (self.kind, a) {
            (GroupKind::Cyclic(n), Element::Cyclic(x)) => Element::Cyclic((n - x % n) % n),
            (GroupKind::Symmetric(_), Element::Perm(p)) => Element::Perm(p.inverse()),
            (GroupKind::SpecialOrthogonal(_), Element::Rot(r)) => Element::Rot(Rotation {
                dim: r.dim,
                m: r.m.transpose(),
            }),
            _ => panic!("{} is not an element of {}", self.format(a), self.name()),
        }
    }

    /// `a * b * a^-1`.
    pub fn conjugate(&self, a: &Element, b: &Element) -> Element {
        self.multiply(&self.multiply(a, b), &self.inverse(a))
    }

    /// Product of a sequence, left to right.
    pub fn product<'a>(&self, xs: impl IntoIterator<Item = &'a Element>) -> Element {
        xs.into_iter().fold(self.identity(), |acc, x| self.multiply(&acc, x))
    }

    /// Equality: exact for finite groups, max-abs entry difference within
    /// the tolerance for matrix groups.
    pub fn eq(&self, a: &Element, b: &Element) -> bool {
        match (a, b) {
            (Element::Rot(x), Element::Rot(y)) => x.dim == y.dim && (x.m - y.m).amax() <= self.tol,
            _ => a == b,
        }
    }

    pub fn eq_within(&self, a: &Element, b: &Element, tol: f64) -> bool {
        match (a, b) {
            (Element::Rot(x), Element::Rot(y)) => x.dim == y.dim && (x.m - y.m).amax() <= tol,
            _ => a == b,
        }
    }

    /// Max-abs entry distance for matrix elements; 0 or infinity otherwise.
    pub fn distance(&self, a: &Element, b: &Element) -> f64 {
        match (a, b) {
            (Element::Rot(x), Element::Rot(y)) => (x.m - y.m).amax(),
            _ if a == b => 0.0,
            _ => f64::INFINITY,
        }
    }

    pub fn is_identity(&self, a: &Element) -> bool {
        self.eq(a, &self.identity())
    }

    /// Index of `x` in the element list of a finite group.
    pub fn index_of(&self, x: &Element) -> Option<usize> {
        self.elements.as_ref()?.iter().position(|e| e == x)
    }

    /// A uniformly distributed element (Haar measure for matrix groups).
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Element {
        match (&self.elements, self.kind) {
            (Some(els), _) => els[rng.random_range(0..els.len())],
            (None, GroupKind::SpecialOrthogonal(2)) => Element::Rot(Rotation::so2(
                rng.random_range(-std::f64::consts::PI..std::f64::consts::PI),
            )),
            (None, _) => {
                // Normalized Gaussian quaternion is Haar-uniform on SO(3).
                let mut q = [0.0f64; 4];
                for c in q.iter_mut() {
                    *c = StandardNormal.sample(rng);
                }
                let n = q.iter().map(|c| c * c).sum::<f64>().sqrt();
                let [w, x, y, z] = q.map(|c| c / n);
                let m = Matrix3::new(
                    1.0 - 2.0 * (y * y + z * z),
                    2.0 * (x * y - w * z),
                    2.0 * (x * z + w * y),
                    2.0 * (x * y + w * z),
                    1.0 - 2.0 * (x * x + z * z),
                    2.0 * (y * z - w * x),
                    2.0 * (x * z - w * y),
                    2.0 * (y * z + w * x),
                    1.0 - 2.0 * (x * x + y * y),
                );
                Element::Rot(Rotation { dim: 3, m })
            }
        }
    }

    /// Human-readable rendering; matrices use 12 significant digits.
    pub fn format(&self, x: &Element) -> String {
        format_element(x)
    }

    /// Reads an element from its textual or numeric scenario form.
    pub fn parse(&self, spec: &ElementSpec) -> Result<Element> {
        let bad = || Error::Input(format!("{spec:?} is not an element of {}", self.name()));
        let el = match (self.kind, spec) {
            (GroupKind::Cyclic(n), ElementSpec::Int(k)) => Element::Cyclic(k.rem_euclid(n as i64) as u32),
            (GroupKind::Cyclic(n), ElementSpec::Text(t)) => {
                let k: i64 = if t.trim() == "e" {
                    0
                } else {
                    t.trim().parse().map_err(|_| bad())?
                };
                Element::Cyclic(k.rem_euclid(n as i64) as u32)
            }
            (GroupKind::Symmetric(n), ElementSpec::Text(t)) => Element::Perm(Perm::parse(n, t)?),
            (GroupKind::SpecialOrthogonal(2), ElementSpec::Float(a)) => Element::Rot(Rotation::so2(*a)),
            (GroupKind::SpecialOrthogonal(2), ElementSpec::Int(a)) => Element::Rot(Rotation::so2(*a as f64)),
            (GroupKind::SpecialOrthogonal(n), ElementSpec::Text(t)) if t.trim() == "e" => {
                Element::Rot(Rotation::identity(n))
            }
            (GroupKind::SpecialOrthogonal(3), ElementSpec::Vector(v)) if v.len() == 3 => {
                Element::Rot(Rotation::from_rotation_vector(Vector3::new(v[0], v[1], v[2])))
            }
            _ => return Err(bad()),
        };
        Ok(el)
    }
}

/// Scenario-file form of a group element: an integer residue, a cycle string,
/// an `SO(2)` angle, or an `SO(3)` rotation vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementSpec {
    Int(i64),
    Float(f64),
    Text(String),
    Vector(Vec<f64>),
}

pub fn format_float(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn format_element(x: &Element) -> String {
    match x {
        Element::Cyclic(k) => k.to_string(),
        Element::Perm(p) => p.to_string(),
        Element::Rot(r) => {
            let rows: Vec<String> = r
                .block()
                .iter()
                .map(|row| {
                    let cells: Vec<String> = row.iter().map(|v| format_float(*v)).collect();
                    format!("[{}]", cells.join(", "))
                })
                .collect();
            format!("[{}]", rows.join(", "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cyclic_arithmetic() {
        let z4 = Group::cyclic(4);
        assert_eq!(
            z4.multiply(&Element::Cyclic(3), &Element::Cyclic(2)),
            Element::Cyclic(1)
        );
        assert_eq!(z4.inverse(&Element::Cyclic(1)), Element::Cyclic(3));
        assert_eq!(z4.inverse(&Element::Cyclic(0)), Element::Cyclic(0));
        assert_eq!(z4.order(), Some(4));
    }

    #[test]
    fn so2_rotations_compose_by_angle() {
        let so2 = Group::special_orthogonal(2);
        let a = Element::Rot(Rotation::so2(0.3));
        let b = Element::Rot(Rotation::so2(1.1));
        assert!(so2.eq(&so2.multiply(&a, &b), &Element::Rot(Rotation::so2(1.4))));
        assert!(so2.contains(&a));
    }

    #[test]
    fn samples_are_members() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for g in [
            Group::special_orthogonal(2),
            Group::special_orthogonal(3),
            Group::symmetric(3),
        ] {
            for _ in 0..50 {
                let x = g.sample(&mut rng);
                assert!(g.contains(&x), "{}", g.format(&x));
                assert!(g.is_identity(&g.multiply(&x, &g.inverse(&x))));
            }
        }
    }

    #[test]
    fn rodrigues_matches_axis_rotation() {
        let r = Rotation::from_rotation_vector(Vector3::new(0.0, 0.0, 0.7));
        assert!((r.m - Rotation::so2(0.7).m).amax() < 1e-15);
        let k = hat(&Vector3::new(0.3, -0.2, 0.5));
        let e = exp_skew(&k);
        assert!((e.transpose() * e - Matrix3::identity()).amax() < 1e-14);
        assert!((e.determinant() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn membership_rejects_foreign_values() {
        let s3 = Group::symmetric(3);
        assert!(!s3.contains(&Element::Cyclic(1)));
        assert!(!Group::cyclic(2).contains(&Element::Cyclic(2)));
        assert!(s3.try_multiply(&Element::Cyclic(1), &s3.identity()).is_err());
    }

    #[test]
    fn parses_scenario_forms() {
        let s3 = Group::symmetric(3);
        assert_eq!(
            s3.parse(&ElementSpec::Text("(12)".into())).unwrap(),
            Element::Perm(Perm::parse(3, "(1 2)").unwrap())
        );
        assert_eq!(
            Group::cyclic(4).parse(&ElementSpec::Int(-1)).unwrap(),
            Element::Cyclic(3)
        );
        assert!(Group::special_orthogonal(3)
            .parse(&ElementSpec::Vector(vec![0.0, 0.0, 1.0]))
            .is_ok());
        assert!(s3.parse(&ElementSpec::Int(1)).is_err());
    }
}
