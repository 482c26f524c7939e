use crate::tol;

/// An image `(f1, f2)` in objective space.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ObjPoint {
    pub f1: f64,
    pub f2: f64,
}

impl ObjPoint {
    #[inline]
    pub const fn new(f1: f64, f2: f64) -> Self {
        Self { f1, f2 }
    }

    /// Coordinate-wise equality under [`tol::obj_eq`].
    pub fn approx_eq(&self, o: &ObjPoint) -> bool {
        tol::obj_eq(self.f1, o.f1) && tol::obj_eq(self.f2, o.f2)
    }

    /// Componentwise minimum of two points.
    pub fn ideal(&self, o: &ObjPoint) -> ObjPoint {
        ObjPoint::new(self.f1.min(o.f1), self.f2.min(o.f2))
    }

    pub fn lerp(&self, o: &ObjPoint, t: f64) -> ObjPoint {
        ObjPoint::new(
            self.f1 + t * (o.f1 - self.f1),
            self.f2 + t * (o.f2 - self.f2),
        )
    }

    pub fn dist(&self, o: &ObjPoint) -> f64 {
        let (a, b) = (self.f1 - o.f1, self.f2 - o.f2);
        tol::sqrt(a * a + b * b)
    }
}

/// Weak dominance: `y <= y2` componentwise (equality counts).
#[inline]
pub fn dominates(y: &ObjPoint, y2: &ObjPoint) -> bool {
    y.f1 <= y2.f1 && y.f2 <= y2.f2
}

/// Weak dominance up to the objective tolerance.
#[inline]
pub fn dominates_tol(y: &ObjPoint, y2: &ObjPoint) -> bool {
    tol::obj_le(y.f1, y2.f1) && tol::obj_le(y.f2, y2.f2)
}

/// A line segment with strictly increasing `f1` and strictly decreasing `f2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjSegment {
    pub left: ObjPoint,
    pub right: ObjPoint,
}

impl ObjSegment {
    pub fn new(left: ObjPoint, right: ObjPoint) -> Self {
        Self { left, right }
    }

    /// `f2` on the segment's supporting line at abscissa `f1`.
    pub fn f2_at(&self, f1: f64) -> f64 {
        let d = self.right.f1 - self.left.f1;
        if d == 0.0 {
            return self.right.f2;
        }
        let t = (f1 - self.left.f1) / d;
        self.left.f2 + t * (self.right.f2 - self.left.f2)
    }

    pub fn slope(&self) -> f64 {
        (self.right.f2 - self.left.f2) / (self.right.f1 - self.left.f1)
    }
}

/// One element of a nondominated frontier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FrontElement {
    Point(ObjPoint),
    Segment(ObjSegment),
}

impl FrontElement {
    /// Builds the canonical element for the closed segment `a`–`b` (in any
    /// order). Degenerate, horizontal and vertical inputs collapse to their
    /// single nondominated point; increasing segments (which are dominated
    /// except at their lower-left end) collapse likewise.
    pub fn from_endpoints(a: ObjPoint, b: ObjPoint) -> Self {
        let (l, r) = if a.f1 <= b.f1 { (a, b) } else { (b, a) };
        let flat1 = tol::obj_eq(l.f1, r.f1);
        let flat2 = tol::obj_eq(l.f2, r.f2);
        if flat1 && flat2 {
            return FrontElement::Point(l.ideal(&r));
        }
        if flat1 {
            // vertical: the lower end dominates the rest
            return FrontElement::Point(if l.f2 <= r.f2 { l } else { r });
        }
        if flat2 || r.f2 >= l.f2 {
            return FrontElement::Point(l);
        }
        FrontElement::Segment(ObjSegment::new(l, r))
    }

    #[inline]
    pub fn left(&self) -> ObjPoint {
        match self {
            FrontElement::Point(p) => *p,
            FrontElement::Segment(s) => s.left,
        }
    }

    #[inline]
    pub fn right(&self) -> ObjPoint {
        match self {
            FrontElement::Point(p) => *p,
            FrontElement::Segment(s) => s.right,
        }
    }

    pub fn is_point(&self) -> bool {
        matches!(self, FrontElement::Point(_))
    }

    /// Point at parameter `t ∈ [0,1]` from left to right.
    pub fn at(&self, t: f64) -> ObjPoint {
        self.left().lerp(&self.right(), t)
    }

    /// The sub-element between parameters `s <= t`.
    pub fn sub(&self, s: f64, t: f64) -> FrontElement {
        match self {
            FrontElement::Point(p) => FrontElement::Point(*p),
            FrontElement::Segment(_) => FrontElement::from_endpoints(self.at(s), self.at(t)),
        }
    }

    /// Lower boundary of the dominated region restricted to this element's
    /// `f1` range, extended horizontally to the right.
    pub fn envelope_at(&self, f1: f64) -> f64 {
        match self {
            FrontElement::Point(p) => {
                if f1 >= p.f1 {
                    p.f2
                } else {
                    f64::INFINITY
                }
            }
            FrontElement::Segment(s) => {
                if f1 < s.left.f1 {
                    f64::INFINITY
                } else if f1 >= s.right.f1 {
                    s.right.f2
                } else {
                    s.f2_at(f1)
                }
            }
        }
    }

    /// True if `y` lies in `self + R²≥0` (up to tolerance).
    pub fn dominates_point(&self, y: &ObjPoint) -> bool {
        match self {
            FrontElement::Point(p) => dominates_tol(p, y),
            FrontElement::Segment(s) => {
                if !tol::obj_le(s.left.f1, y.f1) {
                    return false;
                }
                let f1 = y.f1.min(s.right.f1).max(s.left.f1);
                tol::obj_le(s.f2_at(f1), y.f2)
            }
        }
    }

    /// Euclidean distance from `p` to the region `self + R²≥0`.
    pub fn dist_to_region(&self, p: &ObjPoint) -> f64 {
        match self {
            FrontElement::Point(q) => {
                let a = (q.f1 - p.f1).max(0.0);
                let b = (q.f2 - p.f2).max(0.0);
                tol::sqrt(a * a + b * b)
            }
            FrontElement::Segment(s) => {
                if p.f1 >= s.left.f1 && p.f2 >= self.envelope_at(p.f1) {
                    return 0.0;
                }
                // boundary: upward ray from left, the segment, rightward ray from right
                let up = {
                    let dy = (s.left.f2 - p.f2).max(0.0);
                    let dx = s.left.f1 - p.f1;
                    tol::sqrt(dx * dx + dy * dy)
                };
                let right = {
                    let dx = (s.right.f1 - p.f1).max(0.0);
                    let dy = s.right.f2 - p.f2;
                    tol::sqrt(dx * dx + dy * dy)
                };
                let seg = dist_point_segment(p, &s.left, &s.right);
                up.min(right).min(seg)
            }
        }
    }
}

pub(crate) fn dist_point_segment(p: &ObjPoint, a: &ObjPoint, b: &ObjPoint) -> f64 {
    let (dx, dy) = (b.f1 - a.f1, b.f2 - a.f2);
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = (((p.f1 - a.f1) * dx + (p.f2 - a.f2) * dy) / len2).clamp(0.0, 1.0);
    p.dist(&a.lerp(b, t))
}
