//! Dense Gaussian elimination over `GaussRational`.

use crate::exactnum::GaussRational;

pub type Mat = Vec<Vec<GaussRational>>;

pub fn zeros(rows: usize, cols: usize) -> Mat {
    vec![vec![GaussRational::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Mat {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = GaussRational::one();
    }
    m
}

pub fn mul(a: &Mat, b: &Mat) -> Mat {
    let n = b.first().map_or(0, |r| r.len());
    let mut out = zeros(a.len(), n);
    for (i, row) in a.iter().enumerate() {
        for (k, x) in row.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] += &(x * &b[k][j]);
                }
            }
        }
    }
    out
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(m: &mut Mat) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = m[r].clone();
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &(&f * y);
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Mat) -> usize {
    let mut w = m.clone();
    rref(&mut w).len()
}

/// Basis of `{x : m x = 0}`.
pub fn nullspace(m: &Mat, cols: usize) -> Vec<Vec<GaussRational>> {
    let mut w = m.clone();
    let pivots = rref(&mut w);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![GaussRational::zero(); cols];
            x[f] = GaussRational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                x[pc] = -&w[row][f];
            }
            x
        })
        .collect()
}

/// One solution of `m x = b`, if consistent.
pub fn solve(m: &Mat, b: &[GaussRational]) -> Option<Vec<GaussRational>> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut aug: Mat = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![GaussRational::zero(); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[row][cols].clone();
    }
    Some(x)
}

pub fn det(m: &Mat) -> GaussRational {
    let n = m.len();
    let mut w = m.clone();
    let mut d = GaussRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !w[i][c].is_zero()) else {
            return GaussRational::zero();
        };
        if p != c {
            w.swap(p, c);
            d = -d;
        }
        d = &d * &w[c][c];
        let inv = w[c][c].inv().expect("nonzero pivot");
        for i in c + 1..n {
            if w[i][c].is_zero() {
                continue;
            }
            let f = &w[i][c] * &inv;
            for j in c..n {
                let t = &f * &w[c][j];
                w[i][j] -= &t;
            }
        }
    }
    d
}

pub fn inverse(m: &Mat) -> Option<Mat> {
    let n = m.len();
    let mut aug: Mat = m
        .iter()
        .zip(identity(n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: i64) -> GaussRational {
        GaussRational::from_int(n)
    }

    #[test]
    fn nullspace_and_solve() {
        let m = vec![vec![g(1), g(2), g(3)], vec![g(2), g(4), g(6)]];
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let p = mul(&m, &v.iter().map(|x| vec![x.clone()]).collect());
            assert!(p.iter().all(|r| r[0].is_zero()));
        }
        let x = solve(&m, &[g(6), g(12)]).unwrap();
        assert_eq!(&x[0] + &(&g(2) * &x[1]) + &g(3) * &x[2], g(6));
        assert!(solve(&m, &[g(1), g(1)]).is_none());
    }

    #[test]
    fn det_and_inverse() {
        let m = vec![vec![g(2), g(1)], vec![g(5), g(3)]];
        assert_eq!(det(&m), g(1));
        let inv = inverse(&m).unwrap();
        assert_eq!(mul(&m, &inv), identity(2));
        assert!(inverse(&vec![vec![g(1), g(2)], vec![g(2), g(4)]]).is_none());
    }
}
