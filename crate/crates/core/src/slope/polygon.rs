use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::zeta::IntPoly;

pub type Slope = Ratio<i64>;

/// p-adic valuation of a nonzero integer.
pub fn vp_int(c: &BigInt, p: u64) -> Option<u64> {
    if c.is_zero() {
        return None;
    }
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut cur = c.abs();
    loop {
        let (q, r) = cur.div_rem(&pb);
        if !r.is_zero() {
            return Some(v);
        }
        cur = q;
        v += 1;
    }
}

/// A lower convex polygon starting at `(0, 0)`, heights in `ord_q` units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    vertices: Vec<(usize, Slope)>,
}

impl NewtonPolygon {
    /// Polygon with the given slopes and multiplicities, sorted.
    pub fn from_slopes(slopes: &[(Slope, usize)]) -> Self {
        let mut sorted: Vec<(Slope, usize)> =
            slopes.iter().copied().filter(|&(_, m)| m > 0).collect();
        sorted.sort();
        let mut vertices = vec![(0usize, Slope::zero())];
        for (s, m) in sorted {
            let &(x, y) = vertices.last().expect("nonempty");
            if vertices.len() >= 2 {
                let (px, py) = vertices[vertices.len() - 2];
                if (y - py) / Slope::from((x - px) as i64) == s {
                    vertices.pop();
                    vertices.push((x + m, y + s * m as i64));
                    continue;
                }
            }
            vertices.push((x + m, y + s * m as i64));
        }
        NewtonPolygon { vertices }
    }

    pub fn vertices(&self) -> &[(usize, Slope)] {
        &self.vertices
    }

    /// Length of the horizontal extent.
    pub fn degree(&self) -> usize {
        self.vertices.last().map_or(0, |v| v.0)
    }

    /// `(slope, horizontal length)` per segment, slopes increasing.
    pub fn segments(&self) -> Vec<(Slope, usize)> {
        self.vertices
            .windows(2)
            .map(|w| {
                let len = w[1].0 - w[0].0;
                ((w[1].1 - w[0].1) / Slope::from(len as i64), len)
            })
            .collect()
    }

    /// Slopes with multiplicity, one entry per unit of horizontal length.
    pub fn slope_list(&self) -> Vec<Slope> {
        self.segments()
            .into_iter()
            .flat_map(|(s, len)| std::iter::repeat_n(s, len))
            .collect()
    }

    /// Height of the polygon at integer abscissa `x`.
    pub fn height_at(&self, x: usize) -> Slope {
        let mut h = Slope::zero();
        for (i, s) in self.slope_list().into_iter().enumerate() {
            if i >= x {
                break;
            }
            h += s;
        }
        h
    }

    /// Whether `self` lies on or above `other` everywhere with the same
    /// endpoints.
    pub fn lies_above(&self, other: &NewtonPolygon) -> bool {
        let d = self.degree();
        d == other.degree()
            && self.height_at(d) == other.height_at(d)
            && (0..=d).all(|x| self.height_at(x) >= other.height_at(x))
    }
}

impl Serialize for NewtonPolygon {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.vertices.len()))?;
        for (x, y) in &self.vertices {
            seq.serialize_element(&(x, format!("{}/{}", y.numer(), y.denom())))?;
        }
        seq.end()
    }
}

/// Lower convex hull of `(i, v_p(c_i)/r)` over the nonzero coefficients.
pub fn newton_polygon(poly: &IntPoly, p: u64, r: u32) -> NewtonPolygon {
    let points: Vec<(usize, Slope)> = poly
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(i, c)| vp_int(c, p).map(|v| (i, Slope::new(v as i64, r as i64))))
        .collect();
    let mut hull: Vec<(usize, Slope)> = Vec::new();
    for pt in points {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            // drop the middle point when it is not strictly below the chord
            let lhs = (y2 - y1) * Slope::from((pt.0 - x1) as i64);
            let rhs = (pt.1 - y1) * Slope::from((x2 - x1) as i64);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    NewtonPolygon { vertices: hull }
}
