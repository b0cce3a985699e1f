use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::BitSet;
use crate::error::{Error, Result};

pub type ElementId = usize;
pub type ColorId = u32;

/// A quadruple `(w, x, y, z)` read as `wx|yz`.
///
/// Values built through [`Quad::canonical`] are normalized under the eight
/// symmetries of the relation: `w <= x`, `y <= z` and `(w, x) <= (y, z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "[ElementId; 4]", from = "[ElementId; 4]")]
pub struct Quad {
    pub w: ElementId,
    pub x: ElementId,
    pub y: ElementId,
    pub z: ElementId,
}

impl Quad {
    pub fn canonical(w: ElementId, x: ElementId, y: ElementId, z: ElementId) -> Quad {
        let (w, x) = if w <= x { (w, x) } else { (x, w) };
        let (y, z) = if y <= z { (y, z) } else { (z, y) };
        if (w, x) <= (y, z) {
            Quad { w, x, y, z }
        } else {
            Quad { w: y, x: z, y: w, z: x }
        }
    }

    pub fn as_array(&self) -> [ElementId; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn is_distinct(&self) -> bool {
        let [w, x, y, z] = self.as_array();
        w != x && w != y && w != z && x != y && x != z && y != z
    }
}

impl From<Quad> for [ElementId; 4] {
    fn from(q: Quad) -> Self {
        q.as_array()
    }
}

impl From<[ElementId; 4]> for Quad {
    fn from(a: [ElementId; 4]) -> Self {
        Quad::canonical(a[0], a[1], a[2], a[3])
    }
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}|{}{}", self.w, self.x, self.y, self.z)
    }
}

/// A finite set `{0, …, n-1}` with a colouring and a D-relation given by its
/// canonical 4-distinct positive quadruples.
///
/// Degenerate quadruples are never stored: `holds` answers them from the
/// equality pattern alone.
#[derive(Clone, PartialEq, Eq)]
pub struct DSet {
    n: usize,
    colors: Vec<ColorId>,
    positives: BTreeSet<Quad>,
    table: BitSet,
}

impl fmt::Debug for DSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DSet")
            .field("n", &self.n)
            .field("colors", &self.colors)
            .field("positives", &self.positives)
            .finish()
    }
}

impl DSet {
    /// Builds a uniformly coloured D-set. Quadruples are canonicalized;
    /// non-distinct, out-of-range or repeated entries are rejected.
    pub fn new<I>(n: usize, quads: I) -> Result<DSet>
    where
        I: IntoIterator<Item = [ElementId; 4]>,
    {
        let mut positives = BTreeSet::new();
        for raw in quads {
            for &id in &raw {
                if id >= n {
                    return Err(Error::OutOfRange { id, n });
                }
            }
            let q = Quad::from(raw);
            if !q.is_distinct() {
                return Err(Error::NotDistinct(raw));
            }
            if !positives.insert(q) {
                return Err(Error::DuplicateQuad(q.as_array()));
            }
        }
        Ok(Self::from_canonical(n, positives))
    }

    /// Builds from quadruples already known to be canonical, distinct and in range.
    pub(crate) fn from_canonical(n: usize, positives: BTreeSet<Quad>) -> DSet {
        let mut table = BitSet::new(n.pow(4));
        for q in &positives {
            let Quad { w, x, y, z } = *q;
            for (a, b, c, d) in [
                (w, x, y, z),
                (x, w, y, z),
                (w, x, z, y),
                (x, w, z, y),
                (y, z, w, x),
                (z, y, w, x),
                (y, z, x, w),
                (z, y, x, w),
            ] {
                table.set(((a * n + b) * n + c) * n + d);
            }
        }
        DSet { n, colors: vec![0; n], positives, table }
    }

    /// The flower on `k` elements: no 4-distinct positive quadruple.
    pub fn flower(k: usize) -> DSet {
        Self::from_canonical(k, BTreeSet::new())
    }

    pub fn with_colors(mut self, colors: Vec<ColorId>) -> Result<DSet> {
        if colors.len() != self.n {
            return Err(Error::Malformed(format!(
                "colour vector has {} entries for {} elements",
                colors.len(),
                self.n
            )));
        }
        self.colors = colors;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn elements(&self) -> std::ops::Range<ElementId> {
        0..self.n
    }

    pub fn colors(&self) -> &[ColorId] {
        &self.colors
    }

    pub fn color(&self, e: ElementId) -> ColorId {
        self.colors[e]
    }

    /// Colours that occur, ascending.
    pub fn palette(&self) -> Vec<ColorId> {
        let set: BTreeSet<ColorId> = self.colors.iter().copied().collect();
        set.into_iter().collect()
    }

    pub fn positives(&self) -> &BTreeSet<Quad> {
        &self.positives
    }

    pub fn check_id(&self, id: ElementId) -> Result<()> {
        if id < self.n {
            Ok(())
        } else {
            Err(Error::OutOfRange { id, n: self.n })
        }
    }

    pub fn check_ids(&self, ids: &[ElementId]) -> Result<()> {
        ids.iter().try_for_each(|&id| self.check_id(id))
    }

    /// Truth value of `D(wx;yz)`. Panics if an id is out of range.
    #[inline]
    pub fn holds(&self, w: ElementId, x: ElementId, y: ElementId, z: ElementId) -> bool {
        let n = self.n;
        assert!(w < n && x < n && y < n && z < n, "element id out of range");
        if w == y || w == z || x == y || x == z {
            return false;
        }
        if w == x || y == z {
            return true;
        }
        self.table.get(((w * n + x) * n + y) * n + z)
    }

    pub fn try_holds(&self, w: ElementId, x: ElementId, y: ElementId, z: ElementId) -> Result<bool> {
        self.check_ids(&[w, x, y, z])?;
        Ok(self.holds(w, x, y, z))
    }

    /// Range-checked canonicalization.
    pub fn normalize_quad(&self, w: ElementId, x: ElementId, y: ElementId, z: ElementId) -> Result<Quad> {
        self.check_ids(&[w, x, y, z])?;
        Ok(Quad::canonical(w, x, y, z))
    }

    /// Restriction to `subset`, renumbered in increasing order. Returns the
    /// substructure together with the map from new ids to old ids.
    pub fn substructure(&self, subset: &[ElementId]) -> Result<(DSet, Vec<ElementId>)> {
        self.check_ids(subset)?;
        let old: Vec<ElementId> = subset.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        let mut new_of = vec![usize::MAX; self.n];
        for (i, &o) in old.iter().enumerate() {
            new_of[o] = i;
        }
        let positives = self
            .positives
            .iter()
            .filter(|q| q.as_array().iter().all(|&e| new_of[e] != usize::MAX))
            .map(|q| Quad::canonical(new_of[q.w], new_of[q.x], new_of[q.y], new_of[q.z]))
            .collect();
        let colors = old.iter().map(|&o| self.colors[o]).collect();
        let sub = Self::from_canonical(old.len(), positives).with_colors(colors)?;
        Ok((sub, old))
    }

    /// The relation on the same set with a new element `n` added, given the
    /// additional canonical positives (all of which must mention `n`).
    pub(crate) fn with_new_point(&self, extra: impl IntoIterator<Item = Quad>, color: ColorId) -> DSet {
        let mut positives = self.positives.clone();
        positives.extend(extra);
        let mut colors = self.colors.clone();
        colors.push(color);
        let mut d = Self::from_canonical(self.n + 1, positives);
        d.colors = colors;
        d
    }
}
