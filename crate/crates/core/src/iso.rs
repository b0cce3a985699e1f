use crate::dset::{DSet, ElementId};
use crate::error::{Error, Result};
use crate::tree::{canonical_form, tree_from_dset};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IsoOptions {
    /// Largest size searched by plain backtracking when the inputs are not
    /// both tree-representable.
    pub max_n: usize,
}

impl Default for IsoOptions {
    fn default() -> Self {
        IsoOptions { max_n: 10 }
    }
}

/// The lexicographically least isomorphism `d1 -> d2` (as the image list of
/// `0..n`), or `None`.
pub fn are_isomorphic(d1: &DSet, d2: &DSet, respect_colors: bool) -> Result<Option<Vec<ElementId>>> {
    are_isomorphic_with(d1, d2, respect_colors, &IsoOptions::default())
}

pub fn are_isomorphic_with(
    d1: &DSet,
    d2: &DSet,
    respect_colors: bool,
    opts: &IsoOptions,
) -> Result<Option<Vec<ElementId>>> {
    if d1.len() != d2.len() || d1.positives().len() != d2.positives().len() {
        return Ok(None);
    }
    match (tree_from_dset(d1), tree_from_dset(d2)) {
        (Ok(t1), Ok(t2)) => {
            let key1 = |e: ElementId| if respect_colors { d1.color(e).to_string() } else { String::new() };
            let key2 = |e: ElementId| if respect_colors { d2.color(e).to_string() } else { String::new() };
            if canonical_form(&t1, &key1) != canonical_form(&t2, &key2) {
                return Ok(None);
            }
        }
        (Ok(_), Err(_)) | (Err(_), Ok(_)) => return Ok(None),
        (Err(_), Err(_)) => {
            if d1.len() > opts.max_n {
                return Err(Error::TooLarge { n: d1.len(), limit: opts.max_n });
            }
        }
    }
    Ok(Search::new(d1, d2, respect_colors).run())
}

struct Search<'a> {
    d1: &'a DSet,
    d2: &'a DSet,
    colors: bool,
    deg1: Vec<usize>,
    deg2: Vec<usize>,
    image: Vec<ElementId>,
    used: Vec<bool>,
}

fn positive_degrees(d: &DSet) -> Vec<usize> {
    let mut deg = vec![0; d.len()];
    for q in d.positives() {
        for e in q.as_array() {
            deg[e] += 1;
        }
    }
    deg
}

impl<'a> Search<'a> {
    fn new(d1: &'a DSet, d2: &'a DSet, colors: bool) -> Self {
        Search {
            d1,
            d2,
            colors,
            deg1: positive_degrees(d1),
            deg2: positive_degrees(d2),
            image: Vec::with_capacity(d1.len()),
            used: vec![false; d2.len()],
        }
    }

    fn run(mut self) -> Option<Vec<ElementId>> {
        if self.extend() {
            Some(self.image)
        } else {
            None
        }
    }

    fn consistent(&self, y: ElementId) -> bool {
        let x = self.image.len();
        if self.deg1[x] != self.deg2[y] || (self.colors && self.d1.color(x) != self.d2.color(y)) {
            return false;
        }
        let f = &self.image;
        for a in 0..x {
            for b in a + 1..x {
                for c in b + 1..x {
                    let (fa, fb, fc) = (f[a], f[b], f[c]);
                    if self.d1.holds(a, b, c, x) != self.d2.holds(fa, fb, fc, y)
                        || self.d1.holds(a, c, b, x) != self.d2.holds(fa, fc, fb, y)
                        || self.d1.holds(b, c, a, x) != self.d2.holds(fb, fc, fa, y)
                    {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn extend(&mut self) -> bool {
        if self.image.len() == self.d1.len() {
            return true;
        }
        for y in 0..self.d2.len() {
            if self.used[y] || !self.consistent(y) {
                continue;
            }
            self.used[y] = true;
            self.image.push(y);
            if self.extend() {
                return true;
            }
            self.image.pop();
            self.used[y] = false;
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_iso(d1: &DSet, d2: &DSet, f: &[ElementId]) -> bool {
        let n = d1.len();
        (0..n).all(|w| {
            (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| d1.holds(w, x, y, z) == d2.holds(f[w], f[x], f[y], f[z]))))
        })
    }

    #[test]
    fn cat4_and_star4_differ() {
        let cat = DSet::new(4, [[0, 1, 2, 3]]).unwrap();
        assert_eq!(are_isomorphic(&cat, &DSet::flower(4), false).unwrap(), None);
    }

    #[test]
    fn least_bijection_is_found() {
        let a = DSet::new(4, [[0, 1, 2, 3]]).unwrap();
        let b = DSet::new(4, [[0, 2, 1, 3]]).unwrap();
        let f = are_isomorphic(&a, &b, false).unwrap().unwrap();
        assert_eq!(f, vec![0, 2, 1, 3]);
        assert!(is_iso(&a, &b, &f));
    }

    #[test]
    fn colours_matter_when_asked() {
        let a = DSet::flower(3).with_colors(vec![0, 0, 1]).unwrap();
        let b = DSet::flower(3).with_colors(vec![1, 0, 0]).unwrap();
        assert_eq!(are_isomorphic(&a, &b, true).unwrap(), Some(vec![1, 2, 0]));
        assert_eq!(are_isomorphic(&a, &b, false).unwrap(), Some(vec![0, 1, 2]));
    }

    #[test]
    fn non_dsets_use_capped_backtracking() {
        let bad = DSet::new(4, [[0, 1, 2, 3], [0, 2, 1, 3]]).unwrap();
        assert!(are_isomorphic(&bad, &bad, false).unwrap().is_some());
        let opts = IsoOptions { max_n: 3 };
        assert!(matches!(are_isomorphic_with(&bad, &bad, false, &opts), Err(Error::TooLarge { .. })));
    }
}
