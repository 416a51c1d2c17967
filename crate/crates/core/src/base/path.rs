use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Base, Family};
use crate::error::{Error, Result};

/// Endpoint matching tolerance for path composition.
pub const PATH_TOL: f64 = 1e-12;

/// A point of the chart; coordinates past the ambient dimension are zero.
pub type Point = [f64; 3];

fn dist(a: &Point, b: &Point) -> f64 {
    (0..3).map(|k| (a[k] - b[k]).abs()).fold(0.0, f64::max)
}

/// Piecewise-linear path through its samples, parametrized over `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledPath {
    dim: u8,
    samples: Vec<Point>,
    flat_ends: bool,
}

impl SampledPath {
    pub fn new(dim: usize, samples: &[Vec<f64>]) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::Input(format!("path dimension {dim} is not 1, 2 or 3")));
        }
        if samples.len() < 2 {
            return Err(Error::Input("a path needs at least two samples".into()));
        }
        let mut pts = Vec::with_capacity(samples.len());
        for s in samples {
            if s.len() != dim {
                return Err(Error::Input(format!("sample {s:?} does not have {dim} coordinates")));
            }
            if s.iter().any(|c| !c.is_finite()) {
                return Err(Error::Input(format!("sample {s:?} is not finite")));
            }
            let mut p = [0.0; 3];
            p[..dim].copy_from_slice(s);
            pts.push(p);
        }
        Ok(SampledPath {
            dim: dim as u8,
            samples: pts,
            flat_ends: false,
        })
    }

    pub fn from_points(dim: usize, samples: Vec<Point>) -> Result<Self> {
        let rows: Vec<Vec<f64>> = samples.iter().map(|p| p[..dim.min(3)].to_vec()).collect();
        let out = Self::new(dim, &rows)?;
        if samples.iter().zip(&out.samples).any(|(a, b)| a != b) {
            return Err(Error::Input("sample has coordinates beyond the path dimension".into()));
        }
        Ok(out)
    }

    pub fn constant(dim: usize, p: Point) -> Self {
        SampledPath {
            dim: dim as u8,
            samples: vec![p, p],
            flat_ends: false,
        }
    }

    pub fn segment(dim: usize, a: Point, b: Point) -> Self {
        SampledPath {
            dim: dim as u8,
            samples: vec![a, b],
            flat_ends: false,
        }
    }

    /// Repeats the first and last samples so the path is stationary near
    /// both ends.
    pub fn with_flat_ends(mut self) -> Self {
        if !self.flat_ends {
            let first = self.samples[0];
            let last = *self.samples.last().unwrap();
            self.samples.insert(0, first);
            self.samples.push(last);
            self.flat_ends = true;
        }
        self
    }

    pub fn has_flat_ends(&self) -> bool {
        self.flat_ends
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn samples(&self) -> &[Point] {
        &self.samples
    }

    pub fn start(&self) -> Point {
        self.samples[0]
    }

    pub fn end(&self) -> Point {
        *self.samples.last().unwrap()
    }

    pub fn is_constant(&self) -> bool {
        self.samples.iter().all(|p| *p == self.samples[0])
    }

    pub fn length(&self) -> f64 {
        self.samples
            .windows(2)
            .map(|w| (0..3).map(|k| (w[1][k] - w[0][k]).powi(2)).sum::<f64>().sqrt())
            .sum()
    }

    pub fn reversed(&self) -> Self {
        let mut samples = self.samples.clone();
        samples.reverse();
        SampledPath {
            dim: self.dim,
            samples,
            flat_ends: self.flat_ends,
        }
    }

    /// Point at parameter `u` in `[0, 1]`, with samples equally spaced in `u`.
    pub fn at(&self, u: f64) -> Point {
        let n = self.samples.len() - 1;
        let x = u.clamp(0.0, 1.0) * n as f64;
        let k = (x.floor() as usize).min(n - 1);
        let t = x - k as f64;
        let (a, b) = (self.samples[k], self.samples[k + 1]);
        [0, 1, 2].map(|i| a[i] + t * (b[i] - a[i]))
    }

    /// Sample list with consecutive repeats (within `PATH_TOL`) removed.
    pub fn reduced(&self) -> Vec<Point> {
        let mut out: Vec<Point> = Vec::with_capacity(self.samples.len());
        for p in &self.samples {
            if out.last().is_none_or(|q| dist(q, p) > PATH_TOL) {
                out.push(*p);
            }
        }
        out
    }

    /// `self o first`: concatenation with the shared point kept once.
    /// Constant paths are units.
    pub fn after(&self, first: &SampledPath) -> Result<SampledPath> {
        if self.dim != first.dim {
            return Err(Error::Mismatch(format!(
                "paths of dimension {} and {}",
                self.dim, first.dim
            )));
        }
        let d = dist(&first.end(), &self.start());
        if d > PATH_TOL {
            return Err(Error::undefined(
                "path endpoints do not meet",
                format_point(&self.start(), self.dim()),
                format_point(&first.end(), first.dim()),
            ));
        }
        if first.is_constant() {
            return Ok(self.clone());
        }
        if self.is_constant() {
            return Ok(first.clone());
        }
        let mut samples = first.samples.clone();
        samples.extend_from_slice(&self.samples[1..]);
        Ok(SampledPath {
            dim: self.dim,
            samples,
            flat_ends: first.flat_ends && self.flat_ends,
        })
    }
}

pub fn compose_paths(g2: &SampledPath, g1: &SampledPath) -> Result<SampledPath> {
    g2.after(g1)
}

pub fn format_point(p: &Point, dim: usize) -> String {
    let cells: Vec<String> = p[..dim].iter().map(|c| format!("{c}")).collect();
    format!("({})", cells.join(", "))
}

/// Parameters of a seeded family of composable path triples.
#[derive(Clone, Copy, Debug)]
pub struct PathFamilyConfig {
    pub chains: usize,
    pub max_segments: usize,
    /// Coordinates are drawn from `[-scale, scale]`.
    pub scale: f64,
    /// Probability that a generated path is a constant (identity) path.
    pub identity_rate: f64,
}

impl Default for PathFamilyConfig {
    fn default() -> Self {
        PathFamilyConfig {
            chains: 24,
            max_segments: 3,
            scale: 1.0,
            identity_rate: 0.1,
        }
    }
}

/// The category of sampled paths in `R^dim`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PathCategory {
    pub dim: usize,
}

impl PathCategory {
    pub fn new(dim: usize) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::Input(format!("path dimension {dim} is not 1, 2 or 3")));
        }
        Ok(PathCategory { dim })
    }

    pub fn random_point<R: Rng>(&self, rng: &mut R, scale: f64) -> Point {
        let mut p = [0.0; 3];
        for c in p.iter_mut().take(self.dim) {
            *c = rng.random_range(-scale..=scale);
        }
        p
    }

    pub fn random_path<R: Rng>(&self, rng: &mut R, start: Point, cfg: &PathFamilyConfig) -> SampledPath {
        if rng.random_bool(cfg.identity_rate.clamp(0.0, 1.0)) {
            return SampledPath::constant(self.dim, start);
        }
        let segs = rng.random_range(1..=cfg.max_segments.max(1));
        let mut samples = vec![start];
        for _ in 0..segs {
            samples.push(self.random_point(rng, cfg.scale));
        }
        SampledPath {
            dim: self.dim as u8,
            samples,
            flat_ends: false,
        }
    }

    /// `cfg.chains` composable triples `(g1, g2, g3)`, stored consecutively.
    pub fn family(&self, seed: u64, cfg: &PathFamilyConfig) -> Family<SampledPath> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut mors = Vec::with_capacity(3 * cfg.chains);
        let mut pairs = Vec::new();
        let mut triples = Vec::new();
        for k in 0..cfg.chains {
            let mut at = self.random_point(&mut rng, cfg.scale);
            for _ in 0..3 {
                let p = self.random_path(&mut rng, at, cfg);
                at = p.end();
                mors.push(p);
            }
            pairs.push((3 * k + 1, 3 * k));
            pairs.push((3 * k + 2, 3 * k + 1));
            triples.push((3 * k + 2, 3 * k + 1, 3 * k));
        }
        Family { mors, pairs, triples }
    }
}

impl Base for PathCategory {
    type Obj = Point;
    type Mor = SampledPath;

    fn source(&self, m: &SampledPath) -> Point {
        m.start()
    }

    fn target(&self, m: &SampledPath) -> Point {
        m.end()
    }

    fn identity(&self, x: &Point) -> SampledPath {
        SampledPath::constant(self.dim, *x)
    }

    fn compose(&self, m2: &SampledPath, m1: &SampledPath) -> Result<SampledPath> {
        m2.after(m1)
    }

    fn obj_eq(&self, a: &Point, b: &Point) -> bool {
        dist(a, b) <= PATH_TOL
    }

    fn mor_eq(&self, a: &SampledPath, b: &SampledPath) -> bool {
        let (x, y) = (a.reduced(), b.reduced());
        x.len() == y.len() && x.iter().zip(&y).all(|(p, q)| dist(p, q) <= PATH_TOL)
    }

    fn format_obj(&self, x: &Point) -> String {
        format_point(x, self.dim)
    }

    fn format_mor(&self, m: &SampledPath) -> String {
        let pts: Vec<String> = m.samples.iter().map(|p| format_point(p, self.dim)).collect();
        pts.join("->")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::verify_category_laws;
    use crate::exec::Checker;

    fn p1(x: f64) -> Point {
        [x, 0.0, 0.0]
    }

    #[test]
    fn concatenation_dedups_shared_point() {
        let a = SampledPath::segment(1, p1(0.0), p1(1.0));
        let b = SampledPath::segment(1, p1(1.0), p1(2.0));
        assert_eq!(b.after(&a).unwrap().samples(), &[p1(0.0), p1(1.0), p1(2.0)]);
    }

    #[test]
    fn constant_paths_are_units() {
        let a = SampledPath::segment(1, p1(0.0), p1(1.0));
        assert_eq!(a.after(&SampledPath::constant(1, p1(0.0))).unwrap(), a);
        assert_eq!(SampledPath::constant(1, p1(1.0)).after(&a).unwrap(), a);
    }

    #[test]
    fn associativity_is_list_equality() {
        let a = SampledPath::segment(2, [0.0, 0.0, 0.0], [1.0, 0.5, 0.0]);
        let b = SampledPath::segment(2, [1.0, 0.5, 0.0], [0.0, 2.0, 0.0]);
        let c = SampledPath::segment(2, [0.0, 2.0, 0.0], [3.0, 3.0, 0.0]);
        let left = c.after(&b).unwrap().after(&a).unwrap();
        let right = c.after(&b.after(&a).unwrap()).unwrap();
        assert_eq!(left.samples(), right.samples());
    }

    #[test]
    fn endpoint_mismatch_is_an_error() {
        let a = SampledPath::segment(1, p1(0.0), p1(1.0));
        let b = SampledPath::segment(1, p1(1.5), p1(2.0));
        assert!(matches!(b.after(&a), Err(Error::CompositionUndefined { .. })));
        // within tolerance is accepted
        let c = SampledPath::segment(1, p1(1.0 + 1e-13), p1(2.0));
        assert!(c.after(&a).is_ok());
    }

    #[test]
    fn flat_ends_and_validation() {
        let a = SampledPath::new(2, &[vec![0.0, 0.0], vec![1.0, 1.0]])
            .unwrap()
            .with_flat_ends();
        assert!(a.has_flat_ends());
        assert_eq!(a.samples().len(), 4);
        assert_eq!(a.samples()[0], a.samples()[1]);
        assert!(SampledPath::new(2, &[vec![0.0, 0.0]]).is_err());
        assert!(SampledPath::new(2, &[vec![0.0], vec![1.0]]).is_err());
        assert!(SampledPath::new(4, &[vec![0.0; 4], vec![1.0; 4]]).is_err());
    }

    #[test]
    fn interpolation_and_reversal() {
        let a = SampledPath::segment(1, p1(0.0), p1(2.0));
        assert_eq!(a.at(0.25), p1(0.5));
        assert_eq!(a.reversed().start(), p1(2.0));
        assert!((a.length() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn seeded_family_satisfies_category_laws() {
        let cat = PathCategory::new(3).unwrap();
        let fam = cat.family(9, &PathFamilyConfig::default());
        assert_eq!(fam.mors.len(), 72);
        let r = verify_category_laws(&cat, &fam, &Checker::default());
        assert!(r.passed(), "{}", r.to_table());
        let again = cat.family(9, &PathFamilyConfig::default());
        assert_eq!(fam.mors, again.mors);
    }
}
