//! Exact linear algebra over the rationals: reduced row echelon form,
//! solving, nullspaces, and span arithmetic. Everything here is dense; the
//! systems produced by degree-capped cochain solves are tiny.

use num::{One, Zero};

use crate::poly::Rat;

#[derive(Clone, Debug)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rat>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Matrix::zero(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c);
            for (j, v) in row.into_iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    /// In-place Gauss-Jordan elimination. Returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row >= self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&i| !self[(i, col)].is_zero()) else {
                continue;
            };
            self.swap_rows(row, p);
            let inv = {
                let pv = self[(row, col)].clone();
                Rat::one() / pv
            };
            for j in col..self.cols {
                let v = &self[(row, j)] * &inv;
                self[(row, j)] = v;
            }
            for i in 0..self.rows {
                if i != row && !self[(i, col)].is_zero() {
                    let f = self[(i, col)].clone();
                    for j in col..self.cols {
                        let v = &self[(i, j)] - &(&f * &self[(row, j)]);
                        self[(i, j)] = v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Basis of the right nullspace.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::new();
        for &f in &free {
            let mut v = vec![Rat::zero(); self.cols];
            v[f] = Rat::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[(r, f)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Solve `A x = b` exactly. Returns one solution if the system is
    /// consistent, `None` otherwise.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zero(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // a row reduces to 0 = 1
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = aug[(r, self.cols)].clone();
        }
        Some(x)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

/// dim(span(u) ∩ span(w)) for row vectors over a common coordinate space.
pub fn intersection_dim(u: &[Vec<Rat>], w: &[Vec<Rat>]) -> usize {
    if u.is_empty() || w.is_empty() {
        return 0;
    }
    let du = Matrix::from_rows(u.to_vec()).rank();
    let dw = Matrix::from_rows(w.to_vec()).rank();
    let mut all = u.to_vec();
    all.extend(w.iter().cloned());
    let duw = Matrix::from_rows(all).rank();
    du + dw - duw
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat_int;

    #[test]
    fn solve_and_nullspace() {
        // x + y = 3, x - y = 1 -> x = 2, y = 1
        let m = Matrix::from_rows(vec![
            vec![rat_int(1), rat_int(1)],
            vec![rat_int(1), rat_int(-1)],
        ]);
        let x = m.solve(&[rat_int(3), rat_int(1)]).unwrap();
        assert_eq!(x, vec![rat_int(2), rat_int(1)]);
        assert!(m.nullspace().is_empty());

        // singular system
        let m = Matrix::from_rows(vec![
            vec![rat_int(1), rat_int(2)],
            vec![rat_int(2), rat_int(4)],
        ]);
        assert!(m.solve(&[rat_int(1), rat_int(3)]).is_none());
        assert_eq!(m.nullspace().len(), 1);
    }

    #[test]
    fn span_intersection() {
        let e1 = vec![rat_int(1), rat_int(0), rat_int(0)];
        let e2 = vec![rat_int(0), rat_int(1), rat_int(0)];
        let e3 = vec![rat_int(0), rat_int(0), rat_int(1)];
        let d = intersection_dim(&[e1.clone(), e2.clone()], &[e2.clone(), e3.clone()]);
        assert_eq!(d, 1);
        assert_eq!(intersection_dim(&[e1], &[e3]), 0);
    }
}
