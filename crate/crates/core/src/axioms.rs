use serde::Serialize;

use crate::dset::{DSet, ElementId};

/// Outcome of checking one axiom. Witnesses are the lexicographically first
/// failing tuple in the order the variables are quantified.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail { witness: Vec<ElementId> },
    NotApplicable { reason: String },
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn witness(&self) -> Option<&[ElementId]> {
        match self {
            Verdict::Fail { witness } => Some(witness),
            _ => None,
        }
    }

    fn from_search(found: Option<Vec<ElementId>>) -> Verdict {
        match found {
            None => Verdict::Pass,
            Some(witness) => Verdict::Fail { witness },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub d1: Verdict,
    pub d2: Verdict,
    pub d3: Verdict,
    pub d4: Verdict,
    pub d5: Verdict,
    pub d6: Verdict,
}

impl AxiomReport {
    /// D1–D4 all pass.
    pub fn is_dset(&self) -> bool {
        self.d1.passed() && self.d2.passed() && self.d3.passed() && self.d4.passed()
    }

    pub fn is_proper(&self) -> bool {
        self.is_dset() && self.d5.passed()
    }

    pub fn is_dense(&self) -> bool {
        self.is_dset() && self.d6.passed()
    }

    pub fn verdicts(&self) -> [(&'static str, &Verdict); 6] {
        [
            ("D1", &self.d1),
            ("D2", &self.d2),
            ("D3", &self.d3),
            ("D4", &self.d4),
            ("D5", &self.d5),
            ("D6", &self.d6),
        ]
    }
}

fn tuples4(n: usize) -> impl Iterator<Item = [ElementId; 4]> {
    (0..n).flat_map(move |w| {
        (0..n).flat_map(move |x| (0..n).flat_map(move |y| (0..n).map(move |z| [w, x, y, z])))
    })
}

pub fn check_d1(d: &DSet) -> Verdict {
    Verdict::from_search(
        tuples4(d.len())
            .find(|&[w, x, y, z]| d.holds(w, x, y, z) && !(d.holds(x, w, y, z) && d.holds(y, z, w, x)))
            .map(Vec::from),
    )
}

pub fn check_d2(d: &DSet) -> Verdict {
    Verdict::from_search(
        tuples4(d.len())
            .find(|&[w, x, y, z]| d.holds(w, x, y, z) && d.holds(w, y, x, z))
            .map(Vec::from),
    )
}

pub fn check_d3(d: &DSet) -> Verdict {
    let n = d.len();
    for [w, x, y, z] in tuples4(n) {
        if !d.holds(w, x, y, z) {
            continue;
        }
        if let Some(v) = (0..n).find(|&v| !d.holds(v, x, y, z) && !d.holds(w, x, y, v)) {
            return Verdict::Fail { witness: vec![w, x, y, z, v] };
        }
    }
    Verdict::Pass
}

pub fn check_d4(d: &DSet) -> Verdict {
    let n = d.len();
    for w in 0..n {
        for x in 0..n {
            for y in 0..n {
                if w != y && x != y && !d.holds(w, x, y, y) {
                    return Verdict::Fail { witness: vec![w, x, y] };
                }
            }
        }
    }
    Verdict::Pass
}

pub fn check_d5(d: &DSet) -> Verdict {
    let n = d.len();
    if n < 3 {
        return Verdict::NotApplicable { reason: "fewer than three elements".into() };
    }
    for w in 0..n {
        for x in 0..n {
            for y in 0..n {
                if w == x || w == y || x == y {
                    continue;
                }
                if !(0..n).any(|z| z != y && d.holds(w, x, y, z)) {
                    return Verdict::Fail { witness: vec![w, x, y] };
                }
            }
        }
    }
    Verdict::Pass
}

pub fn check_d6(d: &DSet) -> Verdict {
    let n = d.len();
    if n < 2 {
        return Verdict::NotApplicable { reason: "fewer than two elements".into() };
    }
    Verdict::from_search(
        tuples4(n)
            .find(|&[w, x, y, z]| d.holds(w, x, y, z) && !has_density_witness(d, w, x, y, z))
            .map(Vec::from),
    )
}

pub(crate) fn is_density_witness(d: &DSet, w: ElementId, x: ElementId, y: ElementId, z: ElementId, v: ElementId) -> bool {
    d.holds(v, x, y, z) && d.holds(w, v, y, z) && d.holds(w, x, v, z) && d.holds(w, x, y, v)
}

fn has_density_witness(d: &DSet, w: ElementId, x: ElementId, y: ElementId, z: ElementId) -> bool {
    (0..d.len()).any(|v| is_density_witness(d, w, x, y, z, v))
}

/// Exhaustive check of D1–D6.
pub fn check_axioms(d: &DSet) -> AxiomReport {
    AxiomReport {
        d1: check_d1(d),
        d2: check_d2(d),
        d3: check_d3(d),
        d4: check_d4(d),
        d5: check_d5(d),
        d6: check_d6(d),
    }
}

/// D1–D4 only; the cheaper gate used by constructions.
pub fn is_dset(d: &DSet) -> bool {
    check_d1(d).passed() && check_d2(d).passed() && check_d4(d).passed() && check_d3(d).passed()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cat4() -> DSet {
        DSet::new(4, [[0, 1, 2, 3]]).unwrap()
    }

    #[test]
    fn flower_is_improper() {
        let r = check_axioms(&DSet::flower(4));
        assert!(r.is_dset());
        assert!(!r.d5.passed());
    }

    #[test]
    fn cat4_fails_d5_and_d6() {
        let r = check_axioms(&cat4());
        assert!(r.is_dset());
        assert!(matches!(r.d5, Verdict::Fail { .. }));
        assert!(matches!(r.d6, Verdict::Fail { .. }));
    }

    #[test]
    fn crossing_pair_violates_d2() {
        let d = DSet::new(4, [[0, 1, 2, 3], [0, 2, 1, 3]]).unwrap();
        let r = check_axioms(&d);
        assert_eq!(r.d2.witness(), Some(&[0, 1, 2, 3][..]));
        assert!(d.holds(0, 1, 2, 3) && d.holds(0, 2, 1, 3));
    }

    #[test]
    fn empty_set_is_vacuous() {
        let r = check_axioms(&DSet::flower(0));
        assert!(r.is_dset());
        assert!(matches!(r.d5, Verdict::NotApplicable { .. }));
        assert!(matches!(r.d6, Verdict::NotApplicable { .. }));
    }

    #[test]
    fn d3_failure_is_reported() {
        // ab|cd together with ac|?? missing: 5 points, only 01|23 and 01|34.
        let d = DSet::new(5, [[0, 1, 2, 3], [0, 1, 3, 4]]).unwrap();
        let r = check_axioms(&d);
        let w = r.d3.witness().expect("D3 must fail");
        let (a, b, c, e, v) = (w[0], w[1], w[2], w[3], w[4]);
        assert!(d.holds(a, b, c, e));
        assert!(!d.holds(v, b, c, e) && !d.holds(a, b, c, v));
    }
}
