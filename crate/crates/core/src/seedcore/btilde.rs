use num_integer::Integer;
use serde::Serialize;

use super::{Quiver, VertexKind};
use crate::error::{Error, Result};

/// Extended exchange matrix `B̃` with rows on mutable vertices and columns
/// on all non-isolated vertices, together with the degrees `d`.
///
/// Row `i`, mutable column `j`: `d_i · (#(i→j) - #(j→i))`.
/// Row `i`, stable column `j`: `#(i→j) - #(j→i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtendedExchangeMatrix {
    /// Quiver vertex index of each row.
    pub rows: Vec<usize>,
    /// Quiver vertex index of each column.
    pub cols: Vec<usize>,
    pub entries: Vec<Vec<i64>>,
    pub d: Vec<u32>,
}

impl ExtendedExchangeMatrix {
    pub fn from_quiver(q: &Quiver) -> Result<Self> {
        let rows = q.mutable();
        let cols = q.non_isolated();
        let d: Vec<u32> = rows.iter().map(|&v| q.vertices[v].order).collect();
        let entries = rows
            .iter()
            .zip(&d)
            .map(|(&i, &di)| {
                cols.iter()
                    .map(|&j| {
                        let m = q.multiplicity(i, j) as i64 - q.multiplicity(j, i) as i64;
                        if q.vertices[j].kind == VertexKind::Mutable {
                            m * di as i64
                        } else {
                            m
                        }
                    })
                    .collect()
            })
            .collect();
        let b = Self {
            rows,
            cols,
            entries,
            d,
        };
        b.check_skew_symmetrizable()?;
        b.check_degrees()?;
        Ok(b)
    }

    pub fn row_of_vertex(&self, v: usize) -> Option<usize> {
        self.rows.iter().position(|&r| r == v)
    }

    pub fn col_of_vertex(&self, v: usize) -> Option<usize> {
        self.cols.iter().position(|&c| c == v)
    }

    /// Column holding the vertex of row `r`.
    pub fn col_of_row(&self, r: usize) -> usize {
        self.col_of_vertex(self.rows[r]).expect("mutable vertex has a column")
    }

    pub fn is_mutable_col(&self, c: usize) -> bool {
        self.rows.contains(&self.cols[c])
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.entries[r][c]
    }

    /// `b_ij / d_i = -b_ji / d_j` on the principal part.
    pub fn check_skew_symmetrizable(&self) -> Result<()> {
        for (r, &vi) in self.rows.iter().enumerate() {
            for (s, &vj) in self.rows.iter().enumerate() {
                let bij = self.entries[r][self.col_of_vertex(vj).unwrap()];
                let bji = self.entries[s][self.col_of_vertex(vi).unwrap()];
                // bij/d_i == -bji/d_j  <=>  bij·d_j == -bji·d_i
                if bij * self.d[s] as i64 != -bji * self.d[r] as i64 {
                    return Err(Error::Structural(format!(
                        "rescaled principal part not skew-symmetric at rows {r}, {s}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// gcd of the mutable-column entries of row `r`.
    pub fn row_gcd(&self, r: usize) -> i64 {
        (0..self.cols.len())
            .filter(|&c| self.is_mutable_col(c))
            .fold(0i64, |g, c| g.gcd(&self.entries[r][c]))
    }

    /// Rows where `d_i` fails to divide the mutable-column gcd.
    pub fn degree_violations(&self) -> Vec<usize> {
        (0..self.rows.len())
            .filter(|&r| self.row_gcd(r) % self.d[r] as i64 != 0)
            .collect()
    }

    fn check_degrees(&self) -> Result<()> {
        match self.degree_violations().first() {
            Some(r) => Err(Error::Structural(format!(
                "d = {} does not divide row {} gcd {}",
                self.d[*r],
                r,
                self.row_gcd(*r)
            ))),
            None => Ok(()),
        }
    }

    /// Arrows encoded by the matrix, on the vertices of `template`.
    ///
    /// Arrows between two stable vertices are not recorded in `B̃` and are
    /// copied from the template unchanged.
    pub fn to_quiver(&self, template: &Quiver) -> Result<Quiver> {
        let mut q = Quiver::new(template.n, template.vertices.clone());
        for (a, b, m) in template.arrows() {
            if template.vertices[a].kind != VertexKind::Mutable
                && template.vertices[b].kind != VertexKind::Mutable
            {
                q.add_arrow(a, b, m)?;
            }
        }
        for (r, &vi) in self.rows.iter().enumerate() {
            for (c, &vj) in self.cols.iter().enumerate() {
                let b = self.entries[r][c];
                if self.is_mutable_col(c) {
                    if b > 0 {
                        q.add_arrow(vi, vj, (b / self.d[r] as i64) as u32)?;
                    }
                } else if b > 0 {
                    q.add_arrow(vi, vj, b as u32)?;
                } else if b < 0 {
                    q.add_arrow(vj, vi, (-b) as u32)?;
                }
            }
        }
        Ok(q)
    }
}

#[cfg(test)]
mod tests {
    use super::super::build_qn;
    use super::*;

    #[test]
    fn n2_rows_and_degrees() {
        let q = build_qn(2).unwrap();
        let b = ExtendedExchangeMatrix::from_quiver(&q).unwrap();
        let names: Vec<String> = b.rows.iter().map(|&v| q.vertices[v].name()).collect();
        assert_eq!(names, ["g_2_2", "h_2_2", "phi_1_1"]);
        assert_eq!(b.d, [1, 1, 2]);
        let phi = b.row_of_vertex(q.find("phi_1_1").unwrap()).unwrap();
        let entry = |name: &str| b.get(phi, b.col_of_vertex(q.find(name).unwrap()).unwrap());
        assert_eq!(entry("g_1_1"), 1);
        assert_eq!(entry("h_1_1"), -1);
        assert_eq!(entry("g_2_2"), -2);
        assert_eq!(entry("h_2_2"), 2);
    }

    #[test]
    fn special_row_for_larger_n() {
        for n in 3..=5 {
            let q = build_qn(n).unwrap();
            let b = ExtendedExchangeMatrix::from_quiver(&q).unwrap();
            let phi = b.row_of_vertex(q.find("phi_1_1").unwrap()).unwrap();
            let nonzero: Vec<(String, i64)> = (0..b.cols.len())
                .filter(|&c| b.get(phi, c) != 0)
                .map(|c| (q.vertices[b.cols[c]].name(), b.get(phi, c)))
                .collect();
            let n = n as i64;
            let mut expected = vec![
                ("g_1_1".to_string(), -1),
                ("h_1_1".to_string(), 1),
                ("phi_1_2".to_string(), -n),
                ("phi_2_1".to_string(), n),
            ];
            let mut got = nonzero.clone();
            got.sort();
            expected.sort();
            assert_eq!(got, expected);
        }
    }

    #[test]
    fn round_trip() {
        for n in 2..=5 {
            let q = build_qn(n).unwrap();
            let b = ExtendedExchangeMatrix::from_quiver(&q).unwrap();
            assert_eq!(b.to_quiver(&q).unwrap(), q);
        }
    }
}
