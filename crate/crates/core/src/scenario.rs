//! Scenario files: a crossed module, a base, and the optional data (functor,
//! cover, cocycle, twist, connection, paths) the suites need.

use std::collections::BTreeMap;
use std::path::Path;

use nalgebra::{Matrix3, Vector3};
use serde::Deserialize;

use crate::algebra::{hat, lookup, CrossedModule, CrossedModuleSpec, Element, ElementSpec, GROUP_TOL};
use crate::base::{PathCategory, PathFamilyConfig, QuiverCategory, SampledPath};
use crate::cocycle::{CocycleData, Cover, Trivializations};
use crate::decorated::{so2_generator, Connection};
use crate::error::{Error, Result};
use crate::exec::{Checker, DEFAULT_BUDGET};
use crate::twisted::EtaTable;

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum CrossedModuleRef {
    Catalog(String),
    Inline(CrossedModuleSpec),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_group_tol")]
    pub group: f64,
    #[serde(default = "default_iso_tol")]
    pub iso: f64,
}

fn default_group_tol() -> f64 {
    GROUP_TOL
}

fn default_iso_tol() -> f64 {
    1e-6
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            group: GROUP_TOL,
            iso: 1e-6,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverSpec {
    /// Shorthand for objects `o0..o{n-1}` with arrows `f_i: o{i-1} -> o{i}`.
    pub chain: Option<usize>,
    #[serde(default)]
    pub objects: Vec<String>,
    /// `[label, source, target]` triples.
    #[serde(default)]
    pub arrows: Vec<(String, String, String)>,
    #[serde(default = "default_max_len")]
    pub max_len: usize,
}

fn default_max_len() -> usize {
    3
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorSpec {
    /// Object values of `h`, in object order; the functor is `functor_from_h(h)`.
    pub h: Vec<ElementSpec>,
    /// A second table, used where two functors are needed.
    pub second: Option<Vec<ElementSpec>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverSpec {
    /// Each set lists object names.
    pub sets: Vec<Vec<String>>,
    /// Index triples `(i, k, m)` and `(j, l, n)` selecting the triple overlap.
    #[serde(default = "default_lower")]
    pub lower: Vec<usize>,
    #[serde(default = "default_upper")]
    pub upper: Vec<usize>,
    /// `lambda_i(a)` for the trivializations; random when absent.
    #[serde(default)]
    pub lambda: Vec<Entry>,
}

fn default_lower() -> Vec<usize> {
    vec![0, 1, 2]
}

fn default_upper() -> Vec<usize> {
    vec![1, 2, 3]
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub tag: Vec<usize>,
    pub at: String,
    pub value: ElementSpec,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CocycleMode {
    /// `h_ij` given (or random), `h_ijk = h_ij h_jk h_ik^-1`.
    #[default]
    Constructive,
    Random,
    /// `h_ij = lambda_i lambda_j^-1`, `h_ijk = e`, from the cover's lambda.
    Coboundary,
    /// Every value given explicitly.
    Table,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleSpec {
    #[serde(default)]
    pub mode: CocycleMode,
    #[serde(default)]
    pub entries: Vec<Entry>,
    /// Values replacing constructed ones after the fact.
    #[serde(default)]
    pub overrides: Vec<Entry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EtaKind {
    Trivial,
    Table,
    Transport,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EtaSpec {
    pub kind: EtaKind,
    /// Values on generating arrows, by label.
    #[serde(default)]
    pub generators: BTreeMap<String, ElementSpec>,
    /// Values on words given verbatim (`g.f` notation); no homomorphism is
    /// imposed.
    #[serde(default)]
    pub words: BTreeMap<String, ElementSpec>,
}

/// A Lie-algebra coefficient: an `so(2)` angle, an `so(3)` rotation vector,
/// or a full skew matrix.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Scalar(f64),
    Vector(Vec<f64>),
    Matrix(Vec<Vec<f64>>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionSpec {
    /// `k` in `SO(k)`.
    pub group: usize,
    /// Dimension of the base `R^n`.
    pub base: usize,
    /// `C_i`, one per base coordinate.
    pub constant: Vec<Coefficient>,
    /// `L_ij`, the coefficient of `x_j dx_i`.
    #[serde(default)]
    pub linear: Vec<Vec<Coefficient>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathsSpec {
    pub dim: Option<usize>,
    #[serde(default = "default_chains")]
    pub chains: usize,
    #[serde(default = "default_segments")]
    pub max_segments: usize,
    #[serde(default = "default_scale")]
    pub scale: f64,
    #[serde(default = "default_identity_rate")]
    pub identity_rate: f64,
    /// Named paths as lists of sample coordinates.
    #[serde(default)]
    pub named: BTreeMap<String, Vec<Vec<f64>>>,
}

fn default_chains() -> usize {
    24
}

fn default_segments() -> usize {
    3
}

fn default_scale() -> f64 {
    1.0
}

fn default_identity_rate() -> f64 {
    0.1
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecoratedSpec {
    #[serde(default = "default_pairs")]
    pub pairs: usize,
}

fn default_pairs() -> usize {
    64
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: Option<String>,
    pub description: Option<String>,
    pub crossed_module: CrossedModuleRef,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_budget")]
    pub budget: u64,
    /// Transport substeps per path segment.
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default)]
    pub suites: Vec<String>,
    #[serde(default)]
    pub tolerances: Tolerances,
    pub quiver: Option<QuiverSpec>,
    pub functor: Option<FunctorSpec>,
    pub cover: Option<CoverSpec>,
    pub cocycle: Option<CocycleSpec>,
    pub eta: Option<EtaSpec>,
    pub connection: Option<ConnectionSpec>,
    pub paths: Option<PathsSpec>,
    pub decorated: Option<DecoratedSpec>,
}

fn default_budget() -> u64 {
    DEFAULT_BUDGET
}

fn default_steps() -> usize {
    256
}

fn missing(section: &str) -> Error {
    Error::Input(format!("scenario has no [{section}] section"))
}

fn parse_all(group: &crate::algebra::Group, specs: &[ElementSpec]) -> Result<Vec<Element>> {
    specs.iter().map(|s| group.parse(s)).collect()
}

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Self> {
        let s: Scenario = toml::from_str(text).map_err(|e| Error::Input(format!("malformed scenario: {e}")))?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// A scenario with nothing but a catalog crossed module.
    pub fn catalog(id: &str) -> Result<Self> {
        Self::from_toml(&format!("crossed_module = {id:?}"))
    }

    fn validate(&self) -> Result<()> {
        for (name, t) in [("group", self.tolerances.group), ("iso", self.tolerances.iso)] {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::Input(format!("tolerance {name} = {t} is not positive")));
            }
        }
        if self.steps == 0 {
            return Err(Error::Input("steps must be at least 1".into()));
        }
        self.crossed_module()?;
        Ok(())
    }

    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| match &self.crossed_module {
            CrossedModuleRef::Catalog(id) => id.clone(),
            CrossedModuleRef::Inline(spec) => spec.id.clone(),
        })
    }

    pub fn checker(&self) -> Checker {
        Checker::new(self.seed, self.budget)
    }

    /// The crossed module with the scenario's group tolerance applied to
    /// matrix groups.
    pub fn crossed_module(&self) -> Result<CrossedModule> {
        let mut cm = match &self.crossed_module {
            CrossedModuleRef::Catalog(id) => lookup(id)?,
            CrossedModuleRef::Inline(spec) => spec.build()?,
        };
        if cm.g.is_matrix() {
            cm.g = cm.g.clone().with_tolerance(self.tolerances.group);
        }
        if cm.h.is_matrix() {
            cm.h = cm.h.clone().with_tolerance(self.tolerances.group);
        }
        Ok(cm)
    }

    pub fn quiver(&self) -> Result<QuiverCategory> {
        let q = self.quiver.as_ref().ok_or_else(|| missing("quiver"))?;
        if let Some(n) = q.chain {
            if !q.objects.is_empty() || !q.arrows.is_empty() {
                return Err(Error::Input("give either chain or objects/arrows, not both".into()));
            }
            if n == 0 {
                return Err(Error::Input("a chain needs at least one object".into()));
            }
            return Ok(QuiverCategory::chain(n, q.max_len));
        }
        let objects: Vec<&str> = q.objects.iter().map(String::as_str).collect();
        let arrows: Vec<(&str, &str, &str)> = q
            .arrows
            .iter()
            .map(|(l, s, t)| (l.as_str(), s.as_str(), t.as_str()))
            .collect();
        QuiverCategory::new(&objects, &arrows, q.max_len)
    }

    /// Object values of the functor tables (`[functor] h`, then `second`).
    pub fn functor_tables(&self, cm: &CrossedModule) -> Result<Vec<Vec<Element>>> {
        let f = self.functor.as_ref().ok_or_else(|| missing("functor"))?;
        let mut out = vec![parse_all(&cm.h, &f.h)?];
        if let Some(s) = &f.second {
            out.push(parse_all(&cm.h, s)?);
        }
        Ok(out)
    }

    pub fn cover(&self, q: &QuiverCategory) -> Result<Cover> {
        let c = self.cover.as_ref().ok_or_else(|| missing("cover"))?;
        Cover::from_names(q, &c.sets)
    }

    /// `(lower, upper)` index triples of the requested triple overlap.
    pub fn triple(&self) -> Result<([usize; 3], [usize; 3])> {
        let c = self.cover.as_ref().ok_or_else(|| missing("cover"))?;
        let arr = |v: &[usize], what: &str| -> Result<[usize; 3]> {
            v.try_into()
                .map_err(|_| Error::Input(format!("cover.{what} must list three indices, got {v:?}")))
        };
        Ok((arr(&c.lower, "lower")?, arr(&c.upper, "upper")?))
    }

    fn entries(
        &self,
        cm: &CrossedModule,
        q: &QuiverCategory,
        list: &[Entry],
    ) -> Result<Vec<(Vec<usize>, usize, Element)>> {
        list.iter()
            .map(|e| Ok((e.tag.clone(), q.object(&e.at)?, cm.h.parse(&e.value)?)))
            .collect()
    }

    fn lambda_table(
        &self,
        cm: &CrossedModule,
        q: &QuiverCategory,
        cover: &Cover,
    ) -> Result<Option<BTreeMap<(usize, usize), Element>>> {
        let c = self.cover.as_ref().ok_or_else(|| missing("cover"))?;
        if c.lambda.is_empty() {
            return Ok(None);
        }
        let mut table = BTreeMap::new();
        for (tag, a, v) in self.entries(cm, q, &c.lambda)? {
            let [i] = tag[..] else {
                return Err(Error::Input(format!("lambda entries take one index, got {tag:?}")));
            };
            cover.check_tag(&[i])?;
            if !cover.contains(i, a) {
                return Err(Error::Input(format!(
                    "lambda_{i} given at {} outside U_{i}",
                    q.object_names()[a]
                )));
            }
            table.insert((i, a), v);
        }
        for i in 0..cover.len() {
            for &a in cover.set(i) {
                if !table.contains_key(&(i, a)) {
                    return Err(Error::Input(format!("missing lambda_{i} at {}", q.object_names()[a])));
                }
            }
        }
        Ok(Some(table))
    }

    pub fn trivializations(&self, cm: &CrossedModule, q: &QuiverCategory, cover: &Cover) -> Result<Trivializations> {
        match self.lambda_table(cm, q, cover)? {
            Some(t) => Ok(Trivializations::new(cover, |i, a| t[&(i, a)])),
            None => {
                let checker = self.checker();
                let n = q.object_count() as u64;
                Ok(Trivializations::new(cover, |i, a| {
                    cm.h.sample(&mut checker.rng("trivialization", i as u64 * n + a as u64))
                }))
            }
        }
    }

    pub fn cocycle(&self, cm: &CrossedModule, q: &QuiverCategory, cover: &Cover) -> Result<CocycleData> {
        let spec = self.cocycle.as_ref().ok_or_else(|| missing("cocycle"))?;
        let entries = self.entries(cm, q, &spec.entries)?;
        let mut data = match spec.mode {
            CocycleMode::Table => {
                return CocycleData::from_entries(
                    cm,
                    q,
                    cover,
                    entries.into_iter().chain(self.entries(cm, q, &spec.overrides)?),
                )
            }
            CocycleMode::Random => {
                if !entries.is_empty() {
                    return Err(Error::Input("a random cocycle takes no entries".into()));
                }
                CocycleData::random(cm, cover, &mut self.checker().rng("cocycle", 0))
            }
            CocycleMode::Coboundary => {
                let t = self
                    .lambda_table(cm, q, cover)?
                    .ok_or_else(|| Error::Input("a coboundary cocycle needs cover.lambda".into()))?;
                CocycleData::coboundary(cm, cover, |i, a| t[&(i, a)])
            }
            CocycleMode::Constructive => {
                let mut pairs = BTreeMap::new();
                for (tag, a, v) in entries {
                    if tag.len() != 2 {
                        return Err(Error::Input(format!("constructive entries are pairs, got {tag:?}")));
                    }
                    cover.check_tag(&tag)?;
                    pairs.insert((tag[0], tag[1], a), v);
                }
                let rng_checker = self.checker();
                let n = q.object_count() as u64;
                let k = cover.len() as u64;
                CocycleData::constructive(cm, cover, |i, j, a| {
                    pairs.get(&(i, j, a)).copied().unwrap_or_else(|| {
                        if i == j {
                            cm.h.identity()
                        } else {
                            cm.h.sample(&mut rng_checker.rng("cocycle", (i as u64 * k + j as u64) * n + a as u64))
                        }
                    })
                })
            }
        };
        for (tag, a, v) in self.entries(cm, q, &spec.overrides)? {
            cover.check_tag(&tag)?;
            data.set(&tag, a, v)?;
        }
        Ok(data)
    }

    pub fn eta_kind(&self) -> Result<EtaKind> {
        Ok(self.eta.as_ref().ok_or_else(|| missing("eta"))?.kind)
    }

    pub fn eta_table(&self, cm: &CrossedModule, q: &QuiverCategory) -> Result<EtaTable> {
        let spec = self.eta.as_ref().ok_or_else(|| missing("eta"))?;
        match spec.kind {
            EtaKind::Trivial => EtaTable::from_generators(cm, q, &vec![cm.g.identity(); q.arrow_count()]),
            EtaKind::Table if !spec.words.is_empty() => {
                if !spec.generators.is_empty() {
                    return Err(Error::Input("give eta.generators or eta.words, not both".into()));
                }
                let pairs = spec
                    .words
                    .iter()
                    .map(|(w, v)| Ok((q.parse_word(w)?, cm.g.parse(v)?)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(EtaTable::from_words(cm, pairs))
            }
            EtaKind::Table => {
                let mut values = vec![cm.g.identity(); q.arrow_count()];
                for (label, v) in &spec.generators {
                    let w = q.arrow(label)?;
                    values[w.arrows[0]] = cm.g.parse(v)?;
                }
                EtaTable::from_generators(cm, q, &values)
            }
            EtaKind::Transport => Err(Error::Input(
                "eta is parallel transport, which needs a path base".into(),
            )),
        }
    }

    pub fn connection(&self) -> Result<Connection> {
        let c = self.connection.as_ref().ok_or_else(|| missing("connection"))?;
        let coef = |k: &Coefficient| -> Result<Matrix3<f64>> {
            match (c.group, k) {
                (2, Coefficient::Scalar(t)) => Ok(so2_generator(*t)),
                (3, Coefficient::Vector(v)) if v.len() == 3 => Ok(hat(&Vector3::new(v[0], v[1], v[2]))),
                (n, Coefficient::Matrix(rows)) if rows.len() == n && rows.iter().all(|r| r.len() == n) => {
                    let mut m = Matrix3::zeros();
                    for (i, r) in rows.iter().enumerate() {
                        for (j, x) in r.iter().enumerate() {
                            m[(i, j)] = *x;
                        }
                    }
                    Ok(m)
                }
                (n, other) => Err(Error::Input(format!("{other:?} is not an so({n}) coefficient"))),
            }
        };
        let constant = c.constant.iter().map(coef).collect::<Result<Vec<_>>>()?;
        let linear = c
            .linear
            .iter()
            .map(|r| r.iter().map(coef).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Connection::new(c.group, c.base, constant, linear)
    }

    pub fn path_dim(&self) -> Result<usize> {
        if let Some(d) = self.paths.as_ref().and_then(|p| p.dim) {
            if let Some(c) = &self.connection {
                if c.base != d {
                    return Err(Error::Input(format!(
                        "paths.dim = {d} but the connection lives on R^{}",
                        c.base
                    )));
                }
            }
            return Ok(d);
        }
        self.connection
            .as_ref()
            .map(|c| c.base)
            .ok_or_else(|| Error::Input("path dimension is unknown: set paths.dim or give a [connection]".into()))
    }

    pub fn path_category(&self) -> Result<PathCategory> {
        PathCategory::new(self.path_dim()?)
    }

    pub fn path_config(&self) -> PathFamilyConfig {
        let d = PathFamilyConfig::default();
        match &self.paths {
            Some(p) => PathFamilyConfig {
                chains: p.chains,
                max_segments: p.max_segments,
                scale: p.scale,
                identity_rate: p.identity_rate,
            },
            None => d,
        }
    }

    pub fn named_path(&self, name: &str) -> Result<SampledPath> {
        let p = self.paths.as_ref().ok_or_else(|| missing("paths"))?;
        let samples = p.named.get(name).ok_or_else(|| Error::unknown("path", name))?;
        SampledPath::new(self.path_dim()?, samples)
    }

    pub fn path_names(&self) -> Vec<String> {
        self.paths.iter().flat_map(|p| p.named.keys().cloned()).collect()
    }

    pub fn decorated_pairs(&self) -> usize {
        self.decorated.as_ref().map_or(64, |d| d.pairs)
    }
}
