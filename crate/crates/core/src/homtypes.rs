use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::axioms::{check_d6, Verdict};
use crate::dset::{ColorId, DSet, ElementId};
use crate::error::{Error, Result};
use crate::splitting::{
    complementary, enumerate_splittings, induced_splitting, is_regular, node_splittings, Regularity, Splitting,
};

/// How the type of an outside point over a set is read off a small base.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum Scheme {
    /// At most one element: every atom is decided by equality.
    Trivial,
    /// Representatives of three distinct sectors of a node splitting.
    Node { reps: [ElementId; 3] },
    /// A complementary pair from the first sector and the least element of
    /// the second.
    Edge { pair: [ElementId; 2], outside: ElementId },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QftpBase {
    pub base: Vec<ElementId>,
    pub splitting: Option<Splitting>,
    pub scheme: Scheme,
}

impl QftpBase {
    /// Whether `x` and `y` lie in one sector, decided from atoms over the base.
    pub fn same_sector(&self, d: &DSet, x: ElementId, y: ElementId) -> bool {
        if x == y {
            return true;
        }
        match self.scheme {
            Scheme::Trivial => true,
            Scheme::Node { reps: [a, b, c] } => d.holds(x, y, a, b) || d.holds(x, y, a, c) || d.holds(x, y, b, c),
            Scheme::Edge { pair: [b1, b2], outside } => d.holds(b1, b2, outside, x) == d.holds(b1, b2, outside, y),
        }
    }

    fn outside_rep(&self, d: &DSet, y: ElementId) -> ElementId {
        match self.scheme {
            Scheme::Trivial => y,
            Scheme::Node { reps } => {
                *reps.iter().find(|&&r| !self.same_sector(d, r, y)).expect("three sectors cannot all contain y")
            }
            Scheme::Edge { pair: [b1, b2], outside } => {
                if d.holds(b1, b2, outside, y) {
                    b1
                } else {
                    outside
                }
            }
        }
    }

    /// `D(e y1; y2 y3)` for the point `e` this base was built for, computed
    /// only from atoms among the base and the `y`s.
    pub fn predict(&self, d: &DSet, y1: ElementId, y2: ElementId, y3: ElementId) -> bool {
        if y1 == y2 || y1 == y3 {
            return false;
        }
        if y2 == y3 {
            return true;
        }
        let s12 = self.same_sector(d, y1, y2);
        let s13 = self.same_sector(d, y1, y3);
        match (s12, s13) {
            (false, false) => self.same_sector(d, y2, y3),
            (true, true) => d.holds(self.outside_rep(d, y1), y1, y2, y3),
            _ => false,
        }
    }
}

fn sorted_unique(d: &DSet, ids: &[ElementId]) -> Result<Vec<ElementId>> {
    d.check_ids(ids)?;
    let set: BTreeSet<ElementId> = ids.iter().copied().collect();
    if set.len() != ids.len() {
        return Err(Error::Precondition("repeated element in set".into()));
    }
    Ok(set.into_iter().collect())
}

/// A base of at most three elements of `subset` over which the type of `e`
/// is determined. The scheme is verified against direct evaluation.
pub fn qftp_base(d: &DSet, subset: &[ElementId], e: ElementId) -> Result<QftpBase> {
    let a = sorted_unique(d, subset)?;
    d.check_id(e)?;
    if a.contains(&e) {
        return Err(Error::Precondition(format!("{e} belongs to the set")));
    }
    let out = if a.len() < 2 {
        QftpBase { base: a.clone(), splitting: None, scheme: Scheme::Trivial }
    } else {
        let c = induced_splitting(d, &a, e)?;
        let scheme = if c.len() >= 3 {
            let s = c.sectors();
            Scheme::Node { reps: [s[0][0], s[1][0], s[2][0]] }
        } else {
            let first = c.sectors()[0][0];
            let partner = complementary(d, &c, 0, first)?;
            Scheme::Edge { pair: [first, partner], outside: c.sectors()[1][0] }
        };
        let base = match scheme {
            Scheme::Node { reps } => reps.to_vec(),
            Scheme::Edge { pair, outside } => {
                let set: BTreeSet<ElementId> = [pair[0], pair[1], outside].into();
                set.into_iter().collect()
            }
            Scheme::Trivial => unreachable!(),
        };
        QftpBase { base, splitting: Some(c), scheme }
    };
    for &y1 in &a {
        for &y2 in &a {
            for &y3 in &a {
                if out.predict(d, y1, y2, y3) != d.holds(e, y1, y2, y3) {
                    return Err(Error::Inconsistent(format!(
                        "type scheme disagrees with the relation at {e}{y1}|{y2}{y3}"
                    )));
                }
            }
        }
    }
    Ok(out)
}

fn atoms_agree(d: &DSet, a: &[ElementId], e1: ElementId, e2: ElementId) -> bool {
    a.iter()
        .all(|&y1| a.iter().all(|&y2| a.iter().all(|&y3| d.holds(e1, y1, y2, y3) == d.holds(e2, y1, y2, y3))))
}

/// Whether two outside points have the same quantifier-free type over the set.
pub fn same_qftp(d: &DSet, subset: &[ElementId], e1: ElementId, e2: ElementId) -> Result<bool> {
    let a = sorted_unique(d, subset)?;
    d.check_ids(&[e1, e2])?;
    if a.contains(&e1) || a.contains(&e2) {
        return Err(Error::Precondition("points must lie outside the set".into()));
    }
    if e1 == e2 {
        return Ok(true);
    }
    let direct = atoms_agree(d, &a, e1, e2);
    if a.len() >= 2 {
        let via_split = induced_splitting(d, &a, e1)? == induced_splitting(d, &a, e2)?;
        if via_split != direct {
            return Err(Error::Inconsistent("induced splittings disagree with the atoms".into()));
        }
    }
    Ok(direct)
}

/// A finite injective partial map, kept sorted by domain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartialIso {
    pairs: Vec<(ElementId, ElementId)>,
}

impl PartialIso {
    pub fn new(pairs: impl IntoIterator<Item = (ElementId, ElementId)>) -> Result<PartialIso> {
        let mut pairs: Vec<(ElementId, ElementId)> = pairs.into_iter().collect();
        pairs.sort_unstable();
        let dom: BTreeSet<ElementId> = pairs.iter().map(|p| p.0).collect();
        let ran: BTreeSet<ElementId> = pairs.iter().map(|p| p.1).collect();
        if dom.len() != pairs.len() || ran.len() != pairs.len() {
            return Err(Error::Precondition("map is not injective".into()));
        }
        Ok(PartialIso { pairs })
    }

    pub fn pairs(&self) -> &[(ElementId, ElementId)] {
        &self.pairs
    }

    pub fn domain(&self) -> Vec<ElementId> {
        self.pairs.iter().map(|p| p.0).collect()
    }

    pub fn range(&self) -> Vec<ElementId> {
        let mut r: Vec<ElementId> = self.pairs.iter().map(|p| p.1).collect();
        r.sort_unstable();
        r
    }

    pub fn get(&self, x: ElementId) -> Option<ElementId> {
        self.pairs.binary_search_by_key(&x, |p| p.0).ok().map(|i| self.pairs[i].1)
    }

    pub fn with_pair(&self, x: ElementId, y: ElementId) -> Result<PartialIso> {
        PartialIso::new(self.pairs.iter().copied().chain([(x, y)]))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum IsoCheck {
    Ok,
    ColorMismatch { element: ElementId },
    /// Truth of the relation on `quad` (domain side) differs from its image.
    RelationMismatch { quad: [ElementId; 4] },
}

impl IsoCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, IsoCheck::Ok)
    }
}

/// Whether `m` preserves colours and the relation between `d1` and `d2`.
pub fn check_partial_iso(d1: &DSet, d2: &DSet, m: &PartialIso) -> Result<IsoCheck> {
    d1.check_ids(&m.domain())?;
    d2.check_ids(&m.range())?;
    for &(x, y) in m.pairs() {
        if d1.color(x) != d2.color(y) {
            return Ok(IsoCheck::ColorMismatch { element: x });
        }
    }
    let p = m.pairs();
    let k = p.len();
    for i in 0..k {
        for j in i + 1..k {
            for l in j + 1..k {
                for r in l + 1..k {
                    let (a, b, c, e) = (p[i], p[j], p[l], p[r]);
                    for (w, x, y, z) in [(a, b, c, e), (a, c, b, e), (a, e, b, c)] {
                        if d1.holds(w.0, x.0, y.0, z.0) != d2.holds(w.1, x.1, y.1, z.1) {
                            return Ok(IsoCheck::RelationMismatch { quad: [w.0, x.0, y.0, z.0] });
                        }
                    }
                }
            }
        }
    }
    Ok(IsoCheck::Ok)
}

fn admits(d: &DSet, m: &PartialIso, x: ElementId, y: ElementId) -> bool {
    if d.color(x) != d.color(y) {
        return false;
    }
    let p = m.pairs();
    let k = p.len();
    for i in 0..k {
        for j in i + 1..k {
            for l in j + 1..k {
                let (a, b, c) = (p[i], p[j], p[l]);
                if d.holds(a.0, b.0, c.0, x) != d.holds(a.1, b.1, c.1, y)
                    || d.holds(a.0, c.0, b.0, x) != d.holds(a.1, c.1, b.1, y)
                    || d.holds(b.0, c.0, a.0, x) != d.holds(b.1, c.1, a.1, y)
                {
                    return false;
                }
            }
        }
    }
    true
}

fn check_extension_input(d: &DSet, m: &PartialIso, x: ElementId) -> Result<()> {
    d.check_id(x)?;
    d.check_ids(&m.domain())?;
    d.check_ids(&m.range())?;
    if m.get(x).is_some() {
        return Err(Error::Precondition(format!("{x} is already in the domain")));
    }
    Ok(())
}

/// Every `y` outside the range such that `m ∪ {x ↦ y}` is still a partial
/// isomorphism, by exhaustive check.
pub fn extend_partial_iso_brute(d: &DSet, m: &PartialIso, x: ElementId) -> Result<Vec<ElementId>> {
    check_extension_input(d, m, x)?;
    let range = m.range();
    Ok(d.elements().filter(|y| range.binary_search(y).is_err() && admits(d, m, x, *y)).collect())
}

/// As [`extend_partial_iso_brute`], filtering candidates by the image of the
/// splitting that `x` induces on the domain first.
pub fn extend_partial_iso(d: &DSet, m: &PartialIso, x: ElementId) -> Result<Vec<ElementId>> {
    check_extension_input(d, m, x)?;
    if m.len() < 2 {
        return extend_partial_iso_brute(d, m, x);
    }
    let range = m.range();
    let target = induced_splitting(d, &m.domain(), x)?.mapped(|e| m.get(e).expect("domain element"));
    let mut out = Vec::new();
    for y in d.elements() {
        if range.binary_search(&y).is_ok() || d.color(y) != d.color(x) {
            continue;
        }
        if induced_splitting(d, &range, y)? == target && admits(d, m, x, y) {
            out.push(y);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColorMiss {
    pub sector: Vec<ElementId>,
    pub color: ColorId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColorHitting {
    pub holds: bool,
    pub min_sector_size: usize,
    pub misses: Vec<ColorMiss>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomReport {
    pub regularity: Regularity,
    pub dense: Verdict,
    /// Every colour meets every non-singleton sector.
    pub color_hitting: ColorHitting,
    /// Every colour meets every sector of at least `min_sector_size` elements.
    pub color_hitting_sized: ColorHitting,
}

/// Sector size used by [`homogeneity_conditions`] for the sized variant.
pub const DEFAULT_COLOR_SECTOR_SIZE: usize = 3;

pub fn homogeneity_conditions(d: &DSet) -> Result<HomReport> {
    homogeneity_conditions_with(d, DEFAULT_COLOR_SECTOR_SIZE)
}

pub fn homogeneity_conditions_with(d: &DSet, min_sector_size: usize) -> Result<HomReport> {
    let sectors: BTreeSet<Vec<ElementId>> =
        enumerate_splittings(d)?.iter().flat_map(|s| s.sectors().to_vec()).collect();
    let palette = d.palette();
    let hitting = |min: usize| {
        let misses: Vec<ColorMiss> = sectors
            .iter()
            .filter(|s| s.len() >= min)
            .flat_map(|s| {
                palette
                    .iter()
                    .filter(|&&c| s.iter().all(|&e| d.color(e) != c))
                    .map(|&color| ColorMiss { sector: s.clone(), color })
            })
            .collect();
        ColorHitting { holds: misses.is_empty(), min_sector_size: min, misses }
    };
    Ok(HomReport {
        regularity: is_regular(d)?,
        dense: check_d6(d),
        color_hitting: hitting(2),
        color_hitting_sized: hitting(min_sector_size.max(2)),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessKind {
    ColorMissing { sector: Vec<ElementId>, color: ColorId },
    Irregular { larger: Splitting, smaller: Splitting },
}

/// A partial isomorphism and a point it cannot be extended to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonextendableWitness {
    #[serde(flatten)]
    pub kind: WitnessKind,
    pub map: PartialIso,
    pub stuck: ElementId,
}

fn verified(d: &DSet, map: &PartialIso, stuck: ElementId) -> Result<bool> {
    Ok(check_partial_iso(d, d, map)?.is_ok() && extend_partial_iso_brute(d, map, stuck)?.is_empty())
}

/// Searches for a partial isomorphism with no one-point extension, built
/// from a sector missing a colour or from node splittings of different
/// sizes. Only witnesses confirmed by exhaustive search are returned.
pub fn nonextendable_witness(d: &DSet) -> Result<Option<NonextendableWitness>> {
    if let Some(w) = color_missing_witness(d)? {
        return Ok(Some(w));
    }
    irregular_witness(d)
}

fn color_missing_witness(d: &DSet) -> Result<Option<NonextendableWitness>> {
    let sectors: BTreeSet<Vec<ElementId>> =
        enumerate_splittings(d)?.iter().flat_map(|s| s.sectors().to_vec()).filter(|s| s.len() >= 2).collect();
    let mut by_color: BTreeMap<ColorId, Vec<ElementId>> = BTreeMap::new();
    for e in d.elements() {
        by_color.entry(d.color(e)).or_default().push(e);
    }
    for sector in &sectors {
        for (&color, members) in &by_color {
            if sector.iter().any(|&e| d.color(e) == color) {
                continue;
            }
            for &b0 in members {
                for &a1 in sector {
                    for &a2 in sector {
                        if a1 == a2 || d.color(a1) != d.color(a2) {
                            continue;
                        }
                        for a3 in d.elements() {
                            if a3 == a1 || a3 == a2 || !d.holds(b0, a1, a2, a3) {
                                continue;
                            }
                            let map = PartialIso::new([(a1, a2), (a2, a1), (a3, a3)])?;
                            if verified(d, &map, b0)? {
                                let kind = WitnessKind::ColorMissing { sector: sector.clone(), color };
                                return Ok(Some(NonextendableWitness { kind, map, stuck: b0 }));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

fn irregular_witness(d: &DSet) -> Result<Option<NonextendableWitness>> {
    let nodes = node_splittings(d)?;
    let palette = d.palette();
    let least_of = |s: &Splitting, c: ColorId| -> Vec<Option<ElementId>> {
        s.sectors().iter().map(|sec| sec.iter().copied().find(|&e| d.color(e) == c)).collect()
    };
    for larger in &nodes {
        for smaller in &nodes {
            if larger.len() <= smaller.len() {
                continue;
            }
            let n = smaller.len();
            for &c in &palette {
                let bs: Vec<ElementId> = least_of(larger, c).into_iter().flatten().collect();
                let Some(as_): Option<Vec<ElementId>> = least_of(smaller, c).into_iter().collect() else {
                    continue;
                };
                if bs.len() < n + 1 {
                    continue;
                }
                let map = PartialIso::new(bs.iter().copied().zip(as_.iter().copied()))?;
                if verified(d, &map, bs[n])? {
                    let kind = WitnessKind::Irregular { larger: larger.clone(), smaller: smaller.clone() };
                    return Ok(Some(NonextendableWitness { kind, map, stuck: bs[n] }));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cat4() -> DSet {
        DSet::new(4, [[0, 1, 2, 3]]).unwrap()
    }

    #[test]
    fn partial_iso_checks() {
        let d = cat4();
        let swap = PartialIso::new([(0, 2), (1, 3), (2, 0), (3, 1)]).unwrap();
        assert_eq!(check_partial_iso(&d, &d, &swap).unwrap(), IsoCheck::Ok);
        let bad = PartialIso::new([(0, 0), (1, 2), (2, 1), (3, 3)]).unwrap();
        assert_eq!(check_partial_iso(&d, &d, &bad).unwrap(), IsoCheck::RelationMismatch { quad: [0, 1, 2, 3] });
        assert!(PartialIso::new([(0, 1), (2, 1)]).is_err());
    }

    #[test]
    fn extensions() {
        let f = DSet::flower(4);
        let m = PartialIso::new([(0, 1)]).unwrap();
        assert_eq!(extend_partial_iso(&f, &m, 1).unwrap(), vec![0, 2, 3]);
        let d = cat4();
        let fix = PartialIso::new([(0, 0), (1, 1), (2, 2)]).unwrap();
        assert_eq!(extend_partial_iso(&d, &fix, 3).unwrap(), vec![3]);
        let m = PartialIso::new([(0, 2), (1, 3)]).unwrap();
        assert_eq!(extend_partial_iso(&d, &m, 2).unwrap(), vec![0, 1]);
        assert!(extend_partial_iso(&d, &m, 0).is_err());
    }

    #[test]
    fn cat4_report() {
        let r = homogeneity_conditions(&cat4()).unwrap();
        assert!(r.regularity.regular);
        assert!(!r.dense.passed());
        assert!(r.color_hitting.holds);
        let colored = cat4().with_colors(vec![0, 0, 0, 1]).unwrap();
        let r = homogeneity_conditions(&colored).unwrap();
        assert!(!r.color_hitting.holds);
        assert!(r.color_hitting.misses.iter().any(|m| m.color == 1 && m.sector == vec![0, 1]));
    }

    #[test]
    fn colored_cat4_has_stuck_point() {
        let colored = cat4().with_colors(vec![0, 0, 0, 1]).unwrap();
        let w = nonextendable_witness(&colored).unwrap().expect("witness");
        assert_eq!(colored.color(w.stuck), 1);
        assert!(extend_partial_iso_brute(&colored, &w.map, w.stuck).unwrap().is_empty());
        assert!(nonextendable_witness(&cat4()).unwrap().is_none());
    }
}
