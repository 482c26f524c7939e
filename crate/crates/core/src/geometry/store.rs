//! Archive of mutually nondominated points and segments.

use alloc::vec::Vec;
use core::cmp::Ordering;

use super::point::{FrontElement, ObjPoint};

/// Slack granted to the dominating element when computing dominated
/// parameter intervals. Kept well below the objective tolerance so that trim
/// points stay accurate; near-coincident remnants are removed afterwards by
/// the objective-tolerance test on piece length.
#[inline]
fn eps(v: f64) -> f64 {
    1e-9 * (1.0 + 2.0 * v.abs())
}

/// `{t ∈ R : alpha + beta·t >= 0}` as a closed interval.
fn halfline(alpha: f64, beta: f64) -> (f64, f64) {
    if beta.abs() <= 1e-300 {
        if alpha >= 0.0 {
            (f64::NEG_INFINITY, f64::INFINITY)
        } else {
            (f64::INFINITY, f64::NEG_INFINITY)
        }
    } else if beta > 0.0 {
        (-alpha / beta, f64::INFINITY)
    } else {
        (f64::NEG_INFINITY, -alpha / beta)
    }
}

fn meet(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0.max(b.0), a.1.min(b.1))
}

fn nonempty(a: (f64, f64)) -> bool {
    a.0 <= a.1
}

/// Parameters `t ∈ [0,1]` for which `e.at(t)` lies in `by + R²≥0`,
/// with the objective tolerance applied in favour of dominance.
/// The set is always an interval because the dominated region of a single
/// element is convex.
pub(crate) fn dominated_interval(e: &FrontElement, by: &FrontElement) -> Option<(f64, f64)> {
    let l = e.left();
    let r = e.right();
    let (d1, d2) = (r.f1 - l.f1, r.f2 - l.f2);
    let unit = (0.0, 1.0);
    let iv = match by {
        FrontElement::Point(q) => {
            let a = halfline(l.f1 - q.f1 + eps(q.f1), d1);
            let b = halfline(l.f2 - q.f2 + eps(q.f2), d2);
            meet(meet(a, b), unit)
        }
        FrontElement::Segment(s) => {
            let (a, b) = (s.left, s.right);
            let sigma = s.slope();
            let e2 = eps(a.f2.abs().max(b.f2.abs()));
            let right_of_a = halfline(l.f1 - a.f1 + eps(a.f1), d1);
            let left_of_b = halfline(b.f1 - l.f1, -d1);
            let above = halfline(l.f2 - a.f2 - (l.f1 - a.f1) * sigma + e2, d2 - d1 * sigma);
            let ia = meet(meet(meet(right_of_a, left_of_b), above), unit);
            let right_of_b = halfline(l.f1 - b.f1, d1);
            let above_b = halfline(l.f2 - b.f2 + e2, d2);
            let ib = meet(meet(right_of_b, above_b), unit);
            match (nonempty(ia), nonempty(ib)) {
                (true, true) => (ia.0.min(ib.0), ia.1.max(ib.1)),
                (true, false) => ia,
                (false, true) => ib,
                (false, false) => return None,
            }
        }
    };
    nonempty(iv).then_some(iv)
}

/// Pieces of `e` left after removing the given dominated parameter
/// intervals; pieces that are negligible in objective space are dropped.
fn subtract(e: &FrontElement, mut ivs: Vec<(f64, f64)>) -> Vec<FrontElement> {
    if let FrontElement::Point(_) = e {
        return if ivs.is_empty() { alloc::vec![*e] } else { Vec::new() };
    }
    ivs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));
    let mut out = Vec::new();
    let mut cur = 0.0_f64;
    let push = |s: f64, t: f64, out: &mut Vec<FrontElement>| {
        if t <= s {
            return;
        }
        let (a, b) = (e.at(s), e.at(t));
        if a.approx_eq(&b) {
            return;
        }
        out.push(FrontElement::from_endpoints(a, b));
    };
    for (s, t) in ivs {
        if s > cur {
            push(cur, s, &mut out);
        }
        cur = cur.max(t);
        if cur >= 1.0 {
            break;
        }
    }
    if cur < 1.0 {
        push(cur, 1.0, &mut out);
    }
    out
}

/// Nondominated archive backing the primal bound.
///
/// Elements are kept sorted by `f1` and are pairwise nondominated; the union
/// of their dominated regions `S + R²≥0` is the primal bound set.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParetoStore {
    elems: Vec<FrontElement>,
}

impl ParetoStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn elements(&self) -> &[FrontElement] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn into_elements(self) -> Vec<FrontElement> {
        self.elems
    }

    /// The parts of `e` not dominated by the store.
    pub fn undominated_pieces(&self, e: &FrontElement) -> Vec<FrontElement> {
        let e = canonical(e);
        match e {
            FrontElement::Point(p) => {
                if self.dominates_point(&p) {
                    Vec::new()
                } else {
                    alloc::vec![e]
                }
            }
            FrontElement::Segment(_) => {
                let ivs = self
                    .candidates(&e)
                    .filter_map(|s| dominated_interval(&e, s))
                    .collect();
                subtract(&e, ivs)
            }
        }
    }

    /// True iff every point of `e` lies in the dominated region.
    pub fn is_dominated(&self, e: &FrontElement) -> bool {
        !self.elems.is_empty() && self.undominated_pieces(e).is_empty()
    }

    /// True iff `y` lies in the dominated region.
    pub fn dominates_point(&self, y: &ObjPoint) -> bool {
        if self.elems.is_empty() {
            return false;
        }
        // Because the envelope is nonincreasing, only the elements starting
        // just left of y.f1 can matter; a small window absorbs tolerance.
        let k = self
            .elems
            .partition_point(|e| e.left().f1 <= y.f1 + eps(y.f1));
        let lo = k.saturating_sub(2);
        let hi = (k + 1).min(self.elems.len());
        self.elems[lo..hi].iter().any(|e| e.dominates_point(y))
    }

    /// Lower envelope of the dominated region at abscissa `f1`
    /// (`+inf` left of the first element).
    pub fn envelope_at(&self, f1: f64) -> f64 {
        let k = self.elems.partition_point(|e| e.left().f1 <= f1);
        if k == 0 {
            return f64::INFINITY;
        }
        self.elems[k - 1].envelope_at(f1)
    }

    /// Inserts `e`, returning exactly the pieces of it that were added.
    pub fn insert(&mut self, e: FrontElement) -> Vec<FrontElement> {
        let pieces = self.undominated_pieces(&e);
        if pieces.is_empty() {
            return pieces;
        }
        let f1_lo = pieces[0].left().f1;
        let mut kept = Vec::with_capacity(self.elems.len() + pieces.len());
        for s in self.elems.drain(..) {
            // Only elements reaching right of f1_lo can be dominated by a piece.
            if s.right().f1 + eps(s.right().f1) < f1_lo {
                kept.push(s);
                continue;
            }
            let ivs: Vec<(f64, f64)> = match s {
                FrontElement::Point(p) => {
                    if pieces.iter().any(|q| q.dominates_point(&p)) {
                        alloc::vec![(0.0, 1.0)]
                    } else {
                        Vec::new()
                    }
                }
                FrontElement::Segment(_) => pieces
                    .iter()
                    .filter_map(|q| dominated_interval(&s, q))
                    .collect(),
            };
            if ivs.is_empty() {
                kept.push(s);
            } else {
                kept.extend(subtract(&s, ivs));
            }
        }
        kept.extend(pieces.iter().copied());
        kept.sort_by(cmp_elem);
        self.elems = kept;
        pieces
    }

    /// Inserts every element of `other`.
    pub fn merge(&mut self, other: &ParetoStore) {
        for e in other.elements() {
            self.insert(*e);
        }
    }

    fn candidates<'a>(&'a self, e: &FrontElement) -> impl Iterator<Item = &'a FrontElement> + 'a {
        let hi = e.right().f1;
        let lim = hi + eps(hi);
        let end = self.elems.partition_point(|s| s.left().f1 <= lim);
        self.elems[..end].iter()
    }
}

fn canonical(e: &FrontElement) -> FrontElement {
    match e {
        FrontElement::Point(_) => *e,
        FrontElement::Segment(s) => FrontElement::from_endpoints(s.left, s.right),
    }
}

fn cmp_elem(a: &FrontElement, b: &FrontElement) -> Ordering {
    let ka = (a.left().f1, a.right().f1);
    let kb = (b.left().f1, b.right().f1);
    ka.partial_cmp(&kb).unwrap_or(Ordering::Equal)
}

/// Nondominated filter of an arbitrary collection of elements.
pub fn nd_filter<I: IntoIterator<Item = FrontElement>>(elems: I) -> ParetoStore {
    let mut s = ParetoStore::new();
    for e in elems {
        s.insert(e);
    }
    s
}
