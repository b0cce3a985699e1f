use std::collections::BTreeSet;

use serde::Serialize;

use crate::dset::{ColorId, DSet, ElementId, Quad};
use crate::error::{Error, Result};
use crate::tree::{splittings_from_tree, tree_from_dset};

/// Largest set on which partitions are enumerated by brute force unless the
/// caller raises the limit.
pub const BRUTE_FORCE_LIMIT: usize = 10;

/// Size up to which `enumerate_splittings` uses brute force.
pub const BRUTE_FORCE_ROUTE_MAX: usize = 6;

/// A partition into sectors. Stored canonically: each sector ascending, the
/// sectors ordered by their least element.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Splitting {
    sectors: Vec<Vec<ElementId>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SplittingKind {
    Node,
    Edge,
}

/// One sector of a splitting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sector<'a> {
    owner: &'a Splitting,
    index: usize,
}

impl<'a> Sector<'a> {
    pub fn members(&self) -> &'a [ElementId] {
        &self.owner.sectors[self.index]
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn owner(&self) -> &'a Splitting {
        self.owner
    }

    pub fn contains(&self, e: ElementId) -> bool {
        self.members().binary_search(&e).is_ok()
    }
}

impl Splitting {
    pub fn from_sectors(mut sectors: Vec<Vec<ElementId>>) -> Splitting {
        for s in &mut sectors {
            s.sort_unstable();
        }
        sectors.sort();
        Splitting { sectors }
    }

    /// The partition of `universe` into singletons.
    pub fn singletons(universe: &[ElementId]) -> Splitting {
        Splitting::from_sectors(universe.iter().map(|&e| vec![e]).collect())
    }

    pub fn sectors(&self) -> &[Vec<ElementId>] {
        &self.sectors
    }

    pub fn sector(&self, index: usize) -> Sector<'_> {
        assert!(index < self.sectors.len(), "sector index out of range");
        Sector { owner: self, index }
    }

    pub fn iter(&self) -> impl Iterator<Item = Sector<'_>> {
        (0..self.sectors.len()).map(|index| Sector { owner: self, index })
    }

    pub fn len(&self) -> usize {
        self.sectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sectors.is_empty()
    }

    pub fn kind(&self) -> SplittingKind {
        if self.sectors.len() == 2 {
            SplittingKind::Edge
        } else {
            SplittingKind::Node
        }
    }

    pub fn sector_of(&self, e: ElementId) -> Option<usize> {
        self.sectors.iter().position(|s| s.binary_search(&e).is_ok())
    }

    pub fn sector_containing(&self, e: ElementId) -> Option<Sector<'_>> {
        self.sector_of(e).map(|index| Sector { owner: self, index })
    }

    /// Union of the sectors, ascending.
    pub fn elements(&self) -> Vec<ElementId> {
        let mut all: Vec<ElementId> = self.sectors.concat();
        all.sort_unstable();
        all
    }

    /// Every sector of `self` lies inside a sector of `coarser`.
    pub fn refines(&self, coarser: &Splitting) -> bool {
        self.sectors.iter().all(|s| {
            coarser.sector_of(s[0]).is_some_and(|i| s.iter().all(|e| coarser.sectors[i].binary_search(e).is_ok()))
        })
    }

    /// The image under an element map.
    pub fn mapped(&self, f: impl Fn(ElementId) -> ElementId) -> Splitting {
        Splitting::from_sectors(self.sectors.iter().map(|s| s.iter().map(|&e| f(e)).collect()).collect())
    }

    fn index_table(&self, n: usize) -> Vec<usize> {
        let mut idx = vec![usize::MAX; n];
        for (i, s) in self.sectors.iter().enumerate() {
            for &e in s {
                idx[e] = i;
            }
        }
        idx
    }
}

/// Result of testing the two splitting conditions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum SplitVerdict {
    Valid,
    /// `condition` 1: `quad[0], quad[1]` share a sector, `quad[2], quad[3]`
    /// lie outside it, yet the relation fails. `condition` 2: the four lie in
    /// four sectors, yet the relation holds.
    Violation { condition: u8, quad: [ElementId; 4] },
}

impl SplitVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, SplitVerdict::Valid)
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

fn check_partition(d: &DSet, universe: &[ElementId], p: &Splitting) -> Result<()> {
    if p.sectors.iter().any(Vec::is_empty) {
        return Err(Error::NotAPartition("empty sector".into()));
    }
    if p.len() < 2 {
        return Err(Error::NotAPartition("fewer than two sectors".into()));
    }
    let all = p.elements();
    d.check_ids(&all)?;
    if all.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::NotAPartition("sectors overlap".into()));
    }
    if all != universe {
        return Err(Error::NotAPartition(format!("sectors cover {all:?}, expected {universe:?}")));
    }
    Ok(())
}

/// Tests whether `p` is a splitting of the whole of `d`.
pub fn is_splitting(d: &DSet, p: &Splitting) -> Result<SplitVerdict> {
    let universe: Vec<ElementId> = d.elements().collect();
    is_splitting_of(d, &universe, p)
}

/// Tests whether `p` is a splitting of the substructure on `universe`.
pub fn is_splitting_of(d: &DSet, universe: &[ElementId], p: &Splitting) -> Result<SplitVerdict> {
    let universe = sorted_unique(d, universe)?;
    check_partition(d, &universe, p)?;
    let idx = p.index_table(d.len());
    for (ia, &a) in universe.iter().enumerate() {
        for &b in &universe[ia + 1..] {
            if idx[a] != idx[b] {
                continue;
            }
            for (ic, &c) in universe.iter().enumerate() {
                if idx[c] == idx[a] {
                    continue;
                }
                for &e in &universe[ic + 1..] {
                    if idx[e] != idx[a] && !d.holds(a, b, c, e) {
                        return Ok(SplitVerdict::Violation { condition: 1, quad: [a, b, c, e] });
                    }
                }
            }
        }
    }
    let m = universe.len();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                for l in k + 1..m {
                    let (a, b, c, e) = (universe[i], universe[j], universe[k], universe[l]);
                    let s: BTreeSet<usize> = [idx[a], idx[b], idx[c], idx[e]].into();
                    if s.len() < 4 {
                        continue;
                    }
                    for q in [[a, b, c, e], [a, c, b, e], [a, e, b, c]] {
                        if d.holds(q[0], q[1], q[2], q[3]) {
                            return Ok(SplitVerdict::Violation { condition: 2, quad: q });
                        }
                    }
                }
            }
        }
    }
    Ok(SplitVerdict::Valid)
}

/// All set partitions of `universe` with at least two blocks, in
/// restricted-growth order.
pub(crate) fn set_partitions(universe: &[ElementId]) -> Vec<Vec<Vec<ElementId>>> {
    let m = universe.len();
    let mut out = Vec::new();
    if m < 2 {
        return out;
    }
    let mut code = vec![0usize; m];
    loop {
        let blocks = code.iter().max().unwrap() + 1;
        if blocks >= 2 {
            let mut p = vec![Vec::new(); blocks];
            for (i, &c) in code.iter().enumerate() {
                p[c].push(universe[i]);
            }
            out.push(p);
        }
        // next restricted growth string
        let mut i = m - 1;
        loop {
            if i == 0 {
                return out;
            }
            let max_prefix = code[..i].iter().max().copied().unwrap_or(0);
            if code[i] <= max_prefix {
                code[i] += 1;
                for c in &mut code[i + 1..] {
                    *c = 0;
                }
                break;
            }
            i -= 1;
        }
    }
}

/// Every partition of the whole set tested against the two conditions.
pub fn enumerate_splittings_brute(d: &DSet, limit: usize) -> Result<Vec<Splitting>> {
    if d.len() > limit {
        return Err(Error::TooLarge { n: d.len(), limit });
    }
    let universe: Vec<ElementId> = d.elements().collect();
    let mut out = Vec::new();
    for p in set_partitions(&universe) {
        let s = Splitting::from_sectors(p);
        if is_splitting(d, &s)?.is_valid() {
            out.push(s);
        }
    }
    out.sort();
    Ok(out)
}

/// Splittings read from the reconstructed tree.
pub fn enumerate_splittings_tree(d: &DSet) -> Result<Vec<Splitting>> {
    let t = tree_from_dset(d)?;
    Ok(splittings_from_tree(&t).all())
}

/// All splittings, sorted. Brute force up to [`BRUTE_FORCE_ROUTE_MAX`]
/// elements, the tree route beyond.
pub fn enumerate_splittings(d: &DSet) -> Result<Vec<Splitting>> {
    if d.len() <= BRUTE_FORCE_ROUTE_MAX {
        enumerate_splittings_brute(d, BRUTE_FORCE_ROUTE_MAX)
    } else {
        enumerate_splittings_tree(d)
    }
}

/// Node splittings (more than two sectors) among `enumerate_splittings`.
pub fn node_splittings(d: &DSet) -> Result<Vec<Splitting>> {
    Ok(enumerate_splittings(d)?.into_iter().filter(|s| s.kind() == SplittingKind::Node).collect())
}

/// `{x ≠ a : bc|ax}`.
pub fn branch(d: &DSet, a: ElementId, b: ElementId, c: ElementId) -> Result<Vec<ElementId>> {
    d.check_ids(&[a, b, c])?;
    Ok(d.elements().filter(|&x| x != a && d.holds(b, c, a, x)).collect())
}

/// The partition of `subset` cut out by the outside point `e`: `a ~ b` iff
/// `ab|ex` for some `x` in `subset`.
pub fn induced_splitting(d: &DSet, subset: &[ElementId], e: ElementId) -> Result<Splitting> {
    let a = sorted_unique(d, subset)?;
    d.check_id(e)?;
    if a.contains(&e) {
        return Err(Error::Precondition(format!("{e} belongs to the set")));
    }
    if a.len() < 2 {
        return Err(Error::Precondition("the set needs at least two elements".into()));
    }
    let m = a.len();
    let rel: Vec<Vec<bool>> = (0..m)
        .map(|i| (0..m).map(|j| i == j || a.iter().any(|&x| d.holds(a[i], a[j], e, x))).collect())
        .collect();
    for i in 0..m {
        for j in 0..m {
            if !rel[i][j] {
                continue;
            }
            if let Some(k) = (0..m).find(|&k| rel[j][k] && !rel[i][k]) {
                return Err(Error::Inconsistent(format!(
                    "induced relation is not transitive at {}, {}, {}",
                    a[i], a[j], a[k]
                )));
            }
        }
    }
    let mut class = vec![usize::MAX; m];
    let mut sectors: Vec<Vec<ElementId>> = Vec::new();
    for i in 0..m {
        if class[i] != usize::MAX {
            continue;
        }
        let c = sectors.len();
        let mut block = Vec::new();
        for j in i..m {
            if rel[i][j] {
                class[j] = c;
                block.push(a[j]);
            }
        }
        sectors.push(block);
    }
    if sectors.len() < 2 {
        return Err(Error::Inconsistent(format!("{e} does not separate the set")));
    }
    for i in 0..m {
        for j in i + 1..m {
            if class[i] != class[j] {
                continue;
            }
            if let Some(k) = (0..m).find(|&k| class[k] != class[i] && !d.holds(a[i], a[j], a[k], e)) {
                return Err(Error::Inconsistent(format!(
                    "{}{}|{}{} fails although {} and {} are related",
                    a[i], a[j], a[k], e, a[i], a[j]
                )));
            }
        }
    }
    Ok(Splitting::from_sectors(sectors))
}

/// Least `b` in sector `sector` of `s` such that `ab|cx` fails for every
/// `c` in the sector and `x` outside it. Equals `a` exactly for singletons.
pub fn complementary(d: &DSet, s: &Splitting, sector: usize, a: ElementId) -> Result<ElementId> {
    let inside = s
        .sectors
        .get(sector)
        .ok_or_else(|| Error::Precondition(format!("no sector with index {sector}")))?;
    d.check_ids(&s.elements())?;
    if inside.binary_search(&a).is_err() {
        return Err(Error::Precondition(format!("{a} is not in the sector")));
    }
    let outside: Vec<ElementId> =
        s.sectors.iter().enumerate().filter(|&(i, _)| i != sector).flat_map(|(_, v)| v.iter().copied()).collect();
    inside
        .iter()
        .copied()
        .find(|&b| inside.iter().all(|&c| outside.iter().all(|&x| !d.holds(a, b, c, x))))
        .ok_or_else(|| Error::Inconsistent(format!("no complementary element for {a}")))
}

/// Adds a new element, numbered `d.len()` and coloured `0`, whose induced
/// splitting is `s`.
pub fn extend_by_point(d: &DSet, s: &Splitting) -> Result<DSet> {
    extend_by_point_colored(d, s, 0)
}

pub fn extend_by_point_colored(d: &DSet, s: &Splitting, color: ColorId) -> Result<DSet> {
    if let SplitVerdict::Violation { condition, quad } = is_splitting(d, s)? {
        return Err(Error::Precondition(format!("not a splitting: condition ({condition}) fails at {quad:?}")));
    }
    let e = d.len();
    let idx = s.index_table(d.len());
    let mut extra = Vec::new();
    for sector in &s.sectors {
        let outside: Vec<ElementId> = d.elements().filter(|&x| idx[x] != idx[sector[0]]).collect();
        for (i, &a) in sector.iter().enumerate() {
            for &b in &sector[i + 1..] {
                for c in d.elements() {
                    if c == a || c == b {
                        continue;
                    }
                    if idx[c] != idx[a] || outside.iter().any(|&x| d.holds(a, b, c, x)) {
                        extra.push(Quad::canonical(a, b, c, e));
                    }
                }
            }
        }
    }
    Ok(d.with_new_point(extra, color))
}

/// How an edge splitting treats a point that fits both sectors.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgePolicy {
    /// Join the suitable sector holding the least element.
    #[default]
    JoinLeast,
    /// Join the other suitable sector.
    JoinOther,
    /// Open a new singleton sector.
    NewSingleton,
}

/// Extends a splitting of `subset` to the whole set, adding the remaining
/// elements in increasing order.
pub fn extend_splitting(d: &DSet, subset: &[ElementId], s: &Splitting, policy: EdgePolicy) -> Result<Splitting> {
    let inside = sorted_unique(d, subset)?;
    let order: Vec<ElementId> = d.elements().filter(|e| inside.binary_search(e).is_err()).collect();
    extend_splitting_in_order(d, &inside, s, policy, &order)
}

/// As [`extend_splitting`] with an explicit processing order for the
/// remaining elements.
pub fn extend_splitting_in_order(
    d: &DSet,
    subset: &[ElementId],
    s: &Splitting,
    policy: EdgePolicy,
    order: &[ElementId],
) -> Result<Splitting> {
    let inside = sorted_unique(d, subset)?;
    if let SplitVerdict::Violation { condition, quad } = is_splitting_of(d, &inside, s)? {
        return Err(Error::Precondition(format!("not a splitting: condition ({condition}) fails at {quad:?}")));
    }
    let mut expected: Vec<ElementId> = d.elements().filter(|e| inside.binary_search(e).is_err()).collect();
    let mut given = sorted_unique(d, order)?;
    expected.sort_unstable();
    given.sort_unstable();
    if given != expected {
        return Err(Error::Precondition("order must list exactly the elements outside the set".into()));
    }
    let mut sectors: Vec<Vec<ElementId>> = s.sectors.clone();
    for &x in order {
        let suitable: Vec<usize> = (0..sectors.len()).filter(|&i| is_suitable(d, &sectors, i, x)).collect();
        let target = match (sectors.len(), suitable.len()) {
            (_, 1) => Some(suitable[0]),
            (2, 0) => return Err(Error::Inconsistent(format!("no sector accepts {x}"))),
            (2, _) => {
                let mut by_min = suitable.clone();
                by_min.sort_by_key(|&i| sectors[i].iter().min().copied());
                match policy {
                    EdgePolicy::JoinLeast => Some(by_min[0]),
                    EdgePolicy::JoinOther => Some(by_min[1]),
                    EdgePolicy::NewSingleton => None,
                }
            }
            (_, 0) => None,
            (_, k) => return Err(Error::Inconsistent(format!("{k} sectors accept {x}"))),
        };
        match target {
            Some(i) => sectors[i].push(x),
            None => sectors.push(vec![x]),
        }
    }
    let out = Splitting::from_sectors(sectors);
    if let SplitVerdict::Violation { condition, quad } = is_splitting(d, &out)? {
        return Err(Error::Inconsistent(format!("extension violates condition ({condition}) at {quad:?}")));
    }
    Ok(out)
}

fn is_suitable(d: &DSet, sectors: &[Vec<ElementId>], i: usize, x: ElementId) -> bool {
    let outside: Vec<ElementId> =
        sectors.iter().enumerate().filter(|&(j, _)| j != i).flat_map(|(_, v)| v.iter().copied()).collect();
    sectors[i].iter().all(|&a| {
        outside
            .iter()
            .enumerate()
            .all(|(k, &b)| outside[k + 1..].iter().all(|&c| d.holds(a, x, b, c)))
    })
}

/// The sector of `c2` containing all but one sector of `c1`.
pub fn one_sector<'a>(d: &DSet, c1: &Splitting, c2: &'a Splitting) -> Result<Sector<'a>> {
    for c in [c1, c2] {
        if let SplitVerdict::Violation { condition, quad } = is_splitting(d, c)? {
            return Err(Error::Precondition(format!("not a splitting: condition ({condition}) fails at {quad:?}")));
        }
    }
    if c1 == c2 {
        return Err(Error::Precondition("the splittings coincide".into()));
    }
    let need = c1.len() - 1;
    let hits: Vec<usize> = (0..c2.len())
        .filter(|&j| {
            let target = &c2.sectors[j];
            c1.sectors.iter().filter(|s| s.iter().all(|e| target.binary_search(e).is_ok())).count() >= need
        })
        .collect();
    match hits[..] {
        [j] => Ok(c2.sector(j)),
        _ => Err(Error::Inconsistent(format!("{} candidate sectors", hits.len()))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Regularity {
    pub regular: bool,
    /// Common sector count when regular and at least one node splitting exists.
    pub degree: Option<usize>,
    /// Sector counts of the node splittings, ascending.
    pub node_sizes: Vec<usize>,
}

pub fn is_regular(d: &DSet) -> Result<Regularity> {
    let mut node_sizes: Vec<usize> = node_splittings(d)?.iter().map(Splitting::len).collect();
    node_sizes.sort_unstable();
    let regular = node_sizes.windows(2).all(|w| w[0] == w[1]);
    let degree = if regular { node_sizes.first().copied() } else { None };
    Ok(Regularity { regular, degree, node_sizes })
}

/// Two non-singleton sectors and no node splitting refining it.
pub fn is_true_edge_splitting(d: &DSet, p: &Splitting) -> Result<bool> {
    if p.len() != 2 || p.sectors.iter().any(|s| s.len() < 2) {
        return Ok(false);
    }
    match is_splitting(d, p) {
        Ok(v) if v.is_valid() => {}
        _ => return Ok(false),
    }
    Ok(!node_splittings(d)?.iter().any(|c| c.refines(p)))
}

/// All `v` with `vx|yz`, `wv|yz`, `wx|vz` and `wx|yv`.
pub fn density_witnesses(d: &DSet, w: ElementId, x: ElementId, y: ElementId, z: ElementId) -> Result<Vec<ElementId>> {
    if !d.try_holds(w, x, y, z)? {
        return Err(Error::Precondition(format!("{w}{x}|{y}{z} does not hold")));
    }
    Ok(d.elements().filter(|&v| crate::axioms::is_density_witness(d, w, x, y, z, v)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cat4() -> DSet {
        DSet::new(4, [[0, 1, 2, 3]]).unwrap()
    }

    fn sp(v: &[&[ElementId]]) -> Splitting {
        Splitting::from_sectors(v.iter().map(|s| s.to_vec()).collect())
    }

    #[test]
    fn partitions_count_bell_numbers() {
        // Bell numbers minus the one-block partition.
        let counts: Vec<usize> = (0..7).map(|m| set_partitions(&(0..m).collect::<Vec<_>>()).len()).collect();
        assert_eq!(counts, vec![0, 0, 1, 4, 14, 51, 202]);
    }

    #[test]
    fn splitting_checks_on_cat4() {
        let d = cat4();
        assert!(is_splitting(&d, &sp(&[&[0, 1], &[2, 3]])).unwrap().is_valid());
        match is_splitting(&d, &sp(&[&[0, 2], &[1, 3]])).unwrap() {
            SplitVerdict::Violation { condition: 1, quad } => assert!(!d.holds(quad[0], quad[1], quad[2], quad[3])),
            v => panic!("{v:?}"),
        }
        let star = DSet::flower(4);
        assert!(is_splitting(&star, &Splitting::singletons(&[0, 1, 2, 3])).unwrap().is_valid());
        assert!(matches!(is_splitting(&d, &sp(&[&[0, 1, 2, 3]])), Err(Error::NotAPartition(_))));
        assert!(matches!(is_splitting(&d, &sp(&[&[0, 1], &[1, 2, 3]])), Err(Error::NotAPartition(_))));
    }

    #[test]
    fn enumerations() {
        assert_eq!(enumerate_splittings(&cat4()).unwrap().len(), 7);
        assert_eq!(enumerate_splittings(&DSet::flower(2)).unwrap().len(), 1);
        let flw = enumerate_splittings(&DSet::flower(4)).unwrap();
        assert_eq!(flw.len(), 5);
        assert!(flw.iter().all(|s| s.len() == 4 || s.sectors().iter().any(|x| x.len() == 1)));
    }

    #[test]
    fn branches() {
        assert_eq!(branch(&cat4(), 2, 0, 1).unwrap(), vec![3]);
        assert!(branch(&DSet::flower(4), 0, 1, 2).unwrap().is_empty());
    }

    #[test]
    fn complementary_elements() {
        let d = cat4();
        let s = sp(&[&[0, 1], &[2, 3]]);
        assert_eq!(complementary(&d, &s, 0, 0).unwrap(), 1);
        let s = sp(&[&[0], &[1], &[2, 3]]);
        assert_eq!(complementary(&d, &s, 0, 0).unwrap(), 0);
    }

    #[test]
    fn induced_by_flower_point() {
        let s = induced_splitting(&DSet::flower(4), &[0, 1, 2], 3).unwrap();
        assert_eq!(s, Splitting::singletons(&[0, 1, 2]));
        assert!(induced_splitting(&cat4(), &[0, 1, 2], 2).is_err());
    }

    #[test]
    fn one_sector_on_cat4() {
        let d = cat4();
        let n1 = sp(&[&[0], &[1], &[2, 3]]);
        let n2 = sp(&[&[0, 1], &[2], &[3]]);
        assert_eq!(one_sector(&d, &n1, &n2).unwrap().members(), &[0, 1]);
        assert_eq!(one_sector(&d, &n2, &n1).unwrap().members(), &[2, 3]);
        let e = sp(&[&[0], &[1, 2, 3]]);
        assert_eq!(one_sector(&d, &n1, &e).unwrap().members(), &[1, 2, 3]);
        assert!(one_sector(&d, &n1, &n1).is_err());
    }

    #[test]
    fn regularity_and_true_edges() {
        let r = is_regular(&cat4()).unwrap();
        assert_eq!((r.regular, r.degree), (true, Some(3)));
        assert!(!is_true_edge_splitting(&cat4(), &sp(&[&[0, 1], &[2, 3]])).unwrap());
        assert!(!is_true_edge_splitting(&DSet::flower(2), &sp(&[&[0], &[1]])).unwrap());
    }

    #[test]
    fn density_requires_positive() {
        assert!(density_witnesses(&cat4(), 0, 2, 1, 3).is_err());
        assert!(density_witnesses(&cat4(), 0, 1, 2, 3).unwrap().is_empty());
    }
}
