use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Base, FiniteBase};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub label: String,
    pub source: String,
    pub target: String,
}

/// A morphism of the free category: a chain of arrows listed in traversal
/// order (the first arrow is applied first). The empty chain is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

impl Word {
    pub fn identity(x: usize) -> Self {
        Word {
            source: x,
            target: x,
            arrows: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }
}

/// Free category on a finite quiver, with morphisms enumerated up to a word
/// length bound.
#[derive(Clone)]
pub struct QuiverCategory {
    objects: Vec<String>,
    arrows: Vec<(String, usize, usize)>,
    obj_ids: Vec<usize>,
    max_len: usize,
    words: Vec<Word>,
    index: HashMap<Word, usize>,
}

impl fmt::Debug for QuiverCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QuiverCategory")
            .field("objects", &self.objects)
            .field("arrows", &self.arrows)
            .field("max_len", &self.max_len)
            .finish()
    }
}

impl QuiverCategory {
    pub fn new(objects: &[&str], arrows: &[(&str, &str, &str)], max_len: usize) -> Result<Self> {
        let arrows: Vec<Arrow> = arrows
            .iter()
            .map(|(l, s, t)| Arrow {
                label: l.to_string(),
                source: s.to_string(),
                target: t.to_string(),
            })
            .collect();
        let objects: Vec<String> = objects.iter().map(|s| s.to_string()).collect();
        Self::from_parts(objects, arrows, max_len)
    }

    pub fn from_parts(objects: Vec<String>, arrows: Vec<Arrow>, max_len: usize) -> Result<Self> {
        let mut seen = HashMap::new();
        for (i, o) in objects.iter().enumerate() {
            if seen.insert(o.clone(), i).is_some() {
                return Err(Error::Input(format!("duplicate object {o}")));
            }
        }
        if objects.is_empty() {
            return Err(Error::Input("a quiver needs at least one object".into()));
        }
        let mut labels = HashMap::new();
        let mut resolved = Vec::with_capacity(arrows.len());
        for a in &arrows {
            if seen.contains_key(&a.label) || labels.insert(a.label.clone(), ()).is_some() {
                return Err(Error::Input(format!("duplicate label {}", a.label)));
            }
            let s = *seen.get(&a.source).ok_or_else(|| Error::unknown("object", &a.source))?;
            let t = *seen.get(&a.target).ok_or_else(|| Error::unknown("object", &a.target))?;
            resolved.push((a.label.clone(), s, t));
        }
        let mut q = QuiverCategory {
            obj_ids: (0..objects.len()).collect(),
            objects,
            arrows: resolved,
            max_len,
            words: Vec::new(),
            index: HashMap::new(),
        };
        q.words = q.morphisms_upto(max_len);
        q.index = q.words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        Ok(q)
    }

    /// `o0 -> o1 -> ... -> o{n-1}` with arrows `f1..f{n-1}`.
    pub fn chain(n: usize, max_len: usize) -> Self {
        let objects: Vec<String> = (0..n).map(|i| format!("o{i}")).collect();
        let arrows = (1..n)
            .map(|i| Arrow {
                label: format!("f{i}"),
                source: objects[i - 1].clone(),
                target: objects[i].clone(),
            })
            .collect();
        Self::from_parts(objects, arrows, max_len).expect("chain quiver is well formed")
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn object(&self, label: &str) -> Result<usize> {
        self.objects
            .iter()
            .position(|o| o == label)
            .ok_or_else(|| Error::unknown("object", label))
    }

    pub fn arrow_index(&self, label: &str) -> Result<usize> {
        self.arrows
            .iter()
            .position(|a| a.0 == label)
            .ok_or_else(|| Error::unknown("arrow", label))
    }

    pub fn arrow_label(&self, a: usize) -> &str {
        &self.arrows[a].0
    }

    /// Endpoints of generating arrow `a`.
    pub fn arrow_ends(&self, a: usize) -> (usize, usize) {
        (self.arrows[a].1, self.arrows[a].2)
    }

    pub fn arrow(&self, label: &str) -> Result<Word> {
        let a = self.arrow_index(label)?;
        let (s, t) = self.arrow_ends(a);
        Ok(Word {
            source: s,
            target: t,
            arrows: vec![a],
        })
    }

    /// Parses `id_a`, a single arrow label, or labels joined by `.` in
    /// composition order (`g.f` is `f` followed by `g`).
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if let Some(obj) = text.strip_prefix("id_") {
            return Ok(Word::identity(self.object(obj)?));
        }
        let mut w: Option<Word> = None;
        for label in text.split('.').rev() {
            let a = self.arrow(label.trim())?;
            w = Some(match w {
                None => a,
                Some(prev) => self.compose(&a, &prev)?,
            });
        }
        w.ok_or_else(|| Error::Input(format!("empty word {text:?}")))
    }

    /// All composable arrow words of length at most `max_len`, identities
    /// first, then by length, then lexicographically by arrow index.
    pub fn morphisms_upto(&self, max_len: usize) -> Vec<Word> {
        let mut out: Vec<Word> = (0..self.objects.len()).map(Word::identity).collect();
        let mut frontier: Vec<Word> = out.clone();
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for (a, (_, s, t)) in self.arrows.iter().enumerate() {
                    if *s == w.target {
                        let mut arrows = w.arrows.clone();
                        arrows.push(a);
                        next.push(Word {
                            source: w.source,
                            target: *t,
                            arrows,
                        });
                    }
                }
            }
            next.sort_by(|x, y| x.arrows.cmp(&y.arrows));
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }
}

impl Base for QuiverCategory {
    type Obj = usize;
    type Mor = Word;

    fn source(&self, m: &Word) -> usize {
        m.source
    }

    fn target(&self, m: &Word) -> usize {
        m.target
    }

    fn identity(&self, x: &usize) -> Word {
        Word::identity(*x)
    }

    fn compose(&self, m2: &Word, m1: &Word) -> Result<Word> {
        if m1.target != m2.source {
            return Err(Error::undefined(
                "base words do not meet",
                self.objects[m2.source].clone(),
                self.objects[m1.target].clone(),
            ));
        }
        let mut arrows = m1.arrows.clone();
        arrows.extend_from_slice(&m2.arrows);
        Ok(Word {
            source: m1.source,
            target: m2.target,
            arrows,
        })
    }

    fn obj_eq(&self, a: &usize, b: &usize) -> bool {
        a == b
    }

    fn mor_eq(&self, a: &Word, b: &Word) -> bool {
        a == b
    }

    fn format_obj(&self, x: &usize) -> String {
        self.objects[*x].clone()
    }

    fn format_mor(&self, m: &Word) -> String {
        if m.arrows.is_empty() {
            return format!("id_{}", self.objects[m.source]);
        }
        let labels: Vec<&str> = m.arrows.iter().rev().map(|&a| self.arrows[a].0.as_str()).collect();
        labels.join(".")
    }
}

impl FiniteBase for QuiverCategory {
    fn objects(&self) -> &[usize] {
        &self.obj_ids
    }

    fn morphisms(&self) -> &[Word] {
        &self.words
    }

    fn obj_index(&self, x: &usize) -> Option<usize> {
        (*x < self.objects.len()).then_some(*x)
    }

    fn mor_index(&self, m: &Word) -> Option<usize> {
        self.index.get(m).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::verify_category_laws;
    use crate::exec::Checker;

    #[test]
    fn single_arrow_enumeration() {
        let q = QuiverCategory::new(&["a", "b"], &[("f", "a", "b")], 1).unwrap();
        let names: Vec<String> = q.morphisms().iter().map(|m| q.format_mor(m)).collect();
        assert_eq!(names, ["id_a", "id_b", "f"]);
    }

    #[test]
    fn chain_enumeration_counts() {
        let q = QuiverCategory::new(&["a", "b", "c"], &[("f", "a", "b"), ("g", "b", "c")], 2).unwrap();
        let names: Vec<String> = q.morphisms().iter().map(|m| q.format_mor(m)).collect();
        assert_eq!(names, ["id_a", "id_b", "id_c", "f", "g", "g.f"]);
        assert_eq!(q.morphisms_upto(0).len(), 3);
        assert!(q.morphisms_upto(0).iter().all(Word::is_empty));
    }

    #[test]
    fn parse_and_compose_words() {
        let q = QuiverCategory::chain(4, 3);
        let w = q.parse_word("f3.f2.f1").unwrap();
        assert_eq!((w.source, w.target, w.len()), (0, 3, 3));
        assert_eq!(q.format_mor(&w), "f3.f2.f1");
        assert!(q.parse_word("f1.f3").is_err());
        assert_eq!(q.parse_word("id_o2").unwrap(), Word::identity(2));
    }

    #[test]
    fn category_laws_hold() {
        let q = QuiverCategory::chain(4, 3);
        let r = verify_category_laws(&q, &q.family(), &Checker::default());
        assert!(r.passed(), "{}", r.to_table());
        assert!(r.record("category.associativity").unwrap().checked > 0);
    }

    #[test]
    fn rejects_unknown_endpoints() {
        assert!(QuiverCategory::new(&["a"], &[("f", "a", "z")], 1).is_err());
    }
}
