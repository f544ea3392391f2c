use serde::Serialize;

use super::polygon::{NewtonPolygon, Slope};
use super::{SlopeError, SlopeZeta};

/// Hodge diamond of a smooth projective variety of dimension d.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HodgeData {
    pub d: usize,
    /// `h[i][j] = h^{i,j}`.
    pub h: Vec<Vec<i64>>,
    /// Primitive middle row `h^{j, d-j}_prim`.
    pub primitive_middle: Vec<i64>,
}

impl HodgeData {
    /// Diamond from a full matrix; asserts `h^{i,j} = h^{j,i}`.
    pub fn new(h: Vec<Vec<i64>>, primitive_middle: Vec<i64>) -> Self {
        let d = h.len() - 1;
        for (i, row) in h.iter().enumerate() {
            assert_eq!(row.len(), d + 1, "square diamond");
            for (j, &v) in row.iter().enumerate() {
                assert_eq!(v, h[j][i], "Hodge symmetry at ({i}, {j})");
            }
        }
        HodgeData {
            d,
            h,
            primitive_middle,
        }
    }

    /// `e = sum (-1)^(i+j) h^{i,j}`.
    pub fn euler_characteristic(&self) -> i64 {
        let mut e = 0;
        for (i, row) in self.h.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                e += if (i + j) % 2 == 0 { v } else { -v };
            }
        }
        e
    }

    /// `e_j = (-1)^j sum_i (-1)^(i-1) h^{j,i}`.
    pub fn e_vector(&self) -> Vec<i64> {
        (0..=self.d)
            .map(|j| {
                let inner: i64 = (0..=self.d)
                    .map(|i| {
                        if i % 2 == 1 {
                            self.h[j][i]
                        } else {
                            -self.h[j][i]
                        }
                    })
                    .sum();
                if j % 2 == 0 {
                    inner
                } else {
                    -inner
                }
            })
            .collect()
    }

    /// Middle row `h^{j, d-j}`, j = 0..=d.
    pub fn middle_row(&self) -> Vec<i64> {
        (0..=self.d).map(|j| self.h[j][self.d - j]).collect()
    }
}

/// Lattice points `a in [1, n]^(n+1)` with `sum a = target`.
fn compositions(parts: usize, max: usize, target: usize) -> i64 {
    // dp over the number of parts used
    let mut ways = vec![0i64; target + 1];
    ways[0] = 1;
    for _ in 0..parts {
        let mut next = vec![0i64; target + 1];
        for (s, &w) in ways.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for a in 1..=max {
                if s + a <= target {
                    next[s + a] += w;
                }
            }
        }
        ways = next;
    }
    ways[target]
}

/// Hodge numbers of a smooth degree-(n+1) hypersurface in `P^n`.
pub fn hodge_numbers_dwork(n: usize) -> HodgeData {
    assert!(n >= 2, "n >= 2");
    let d = n - 1;
    let primitive_middle: Vec<i64> = (0..=d)
        .map(|j| compositions(n + 1, n, (j + 1) * (n + 1)))
        .collect();
    let mut h = vec![vec![0i64; d + 1]; d + 1];
    for (i, row) in h.iter_mut().enumerate() {
        row[i] = 1;
    }
    for j in 0..=d {
        h[j][d - j] = primitive_middle[j] + i64::from(2 * j == d);
    }
    HodgeData::new(h, primitive_middle)
}

/// `prod_j (1 - u^j T)^(e_j)`.
pub fn ordinary_slope_zeta(h: &HodgeData) -> SlopeZeta {
    SlopeZeta::from_terms(
        h.e_vector()
            .into_iter()
            .enumerate()
            .map(|(j, e)| (Slope::from(j as i64), e)),
    )
}

/// Polygon with slope j repeated `row[j]` times.
pub fn hodge_polygon(row: &[i64]) -> NewtonPolygon {
    let slopes: Vec<(Slope, usize)> = row
        .iter()
        .enumerate()
        .map(|(j, &m)| (Slope::from(j as i64), m.max(0) as usize))
        .collect();
    NewtonPolygon::from_slopes(&slopes)
}

/// The Hodge row matching a numerator of the given degree: the full middle
/// row, or the primitive part when the hyperplane class sits in a trivial
/// factor.
pub fn matching_row(h: &HodgeData, degree: usize) -> Result<Vec<i64>, SlopeError> {
    let full = h.middle_row();
    if full.iter().sum::<i64>() as usize == degree {
        return Ok(full);
    }
    if h.primitive_middle.iter().sum::<i64>() as usize == degree {
        return Ok(h.primitive_middle.clone());
    }
    Err(SlopeError::DimensionMismatch {
        numerator: degree,
        hodge: full.iter().sum::<i64>() as usize,
    })
}

/// Whether the Newton polygon equals the Hodge polygon of the row for
/// weight `middle_weight`.
pub fn ordinarity_test(
    np: &NewtonPolygon,
    h: &HodgeData,
    middle_weight: usize,
) -> Result<bool, SlopeError> {
    if middle_weight != h.d {
        return Err(SlopeError::DimensionMismatch {
            numerator: middle_weight,
            hodge: h.d,
        });
    }
    let row = matching_row(h, np.degree())?;
    Ok(*np == hodge_polygon(&row))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slope::newton_polygon;
    use crate::zeta::IntPoly;

    #[test]
    fn diamonds() {
        let quintic = hodge_numbers_dwork(4);
        assert_eq!(quintic.middle_row(), vec![1, 101, 101, 1]);
        assert_eq!(quintic.euler_characteristic(), -200);
        assert_eq!(quintic.e_vector(), vec![0, 100, 100, 0]);
        let k3 = hodge_numbers_dwork(3);
        assert_eq!(k3.middle_row(), vec![1, 20, 1]);
        assert_eq!(k3.primitive_middle, vec![1, 19, 1]);
        assert_eq!(k3.euler_characteristic(), 24);
        assert_eq!(k3.e_vector(), vec![-2, -20, -2]);
        let cubic = hodge_numbers_dwork(2);
        assert_eq!(cubic.h[1][0], 1);
        assert_eq!(cubic.euler_characteristic(), 0);
    }

    #[test]
    fn elliptic_ordinarity() {
        let h = hodge_numbers_dwork(2);
        let ord = newton_polygon(&IntPoly::from_i64(&[1, -3, 7]).unwrap(), 7, 1);
        assert!(ordinarity_test(&ord, &h, 1).unwrap());
        let ss = newton_polygon(&IntPoly::from_i64(&[1, 0, 7]).unwrap(), 7, 1);
        assert!(!ordinarity_test(&ss, &h, 1).unwrap());
        assert!(ordinarity_test(&ss, &h, 2).is_err());
    }
}
