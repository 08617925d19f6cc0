//! Dense linear algebra over Q, sized for the small systems the engine solves.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::QPoly;

pub type QVec = Vec<BigRational>;
pub type QMat = Vec<Vec<BigRational>>;

pub fn zeros(n: usize) -> QVec {
    vec![BigRational::zero(); n]
}

pub fn unit(n: usize, i: usize) -> QVec {
    let mut v = zeros(n);
    v[i] = BigRational::one();
    v
}

pub fn from_ints(rows: &[Vec<i64>]) -> QMat {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect()
}

pub fn mat_vec(m: &QMat, v: &[BigRational]) -> QVec {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn mat_mul(a: &QMat, b: &QMat) -> QMat {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b).map(|(x, brow)| x * &brow[j]).sum())
                .collect()
        })
        .collect()
}

pub fn transpose(m: &QMat) -> QMat {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(m: &mut QMat) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
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
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &QMat) -> usize {
    let mut m = m.clone();
    rref(&mut m).len()
}

/// Basis of `{x : m x = 0}` for a matrix with `ncols` columns.
pub fn nullspace(m: &QMat, ncols: usize) -> Vec<QVec> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = zeros(ncols);
            v[f] = BigRational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[row][f].clone();
            }
            v
        })
        .collect()
}

/// One solution of `a x = b`, if any.
pub fn solve(a: &QMat, b: &[BigRational]) -> Option<QVec> {
    let ncols = a.first().map_or(0, Vec::len);
    let mut aug: QMat = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut x = zeros(ncols);
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[row][ncols].clone();
    }
    Some(x)
}

pub fn det(m: &QMat) -> BigRational {
    let n = m.len();
    let mut a = m.clone();
    let mut d = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        let inv = a[c][c].recip();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
        }
    }
    d
}

pub fn inverse(m: &QMat) -> Option<QMat> {
    let n = m.len();
    let mut aug: QMat = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend(unit(n, i));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Monic minimal polynomial of the operator `apply` on the cyclic subspace
/// generated by `start`.
pub fn krylov_minpoly(start: QVec, mut apply: impl FnMut(&[BigRational]) -> QVec) -> QPoly {
    // stored: (pivot, reduced vector with 1 at pivot, combination of Krylov vectors)
    let mut stored: Vec<(usize, QVec, QVec)> = Vec::new();
    let mut v = start;
    let mut k = 0;
    loop {
        let mut w = v.clone();
        let mut combo = zeros(k + 1);
        combo[k] = BigRational::one();
        for (p, sv, sc) in &stored {
            if w[*p].is_zero() {
                continue;
            }
            let f = w[*p].clone();
            for (x, y) in w.iter_mut().zip(sv) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            for (x, y) in combo.iter_mut().zip(sc) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        match w.iter().position(|x| !x.is_zero()) {
            None => return QPoly::new(combo),
            Some(p) => {
                let inv = w[p].recip();
                for x in w.iter_mut() {
                    *x *= &inv;
                }
                for x in combo.iter_mut() {
                    *x *= &inv;
                }
                stored.push((p, w, combo));
            }
        }
        v = apply(&v);
        k += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::poly::{rat, ZPoly};

    #[test]
    fn solve_and_inverse_agree() {
        let a = from_ints(&[vec![2, 1, 0], vec![1, 3, 1], vec![0, 1, 4]]);
        let b = vec![rat(1, 1), rat(2, 1), rat(3, 1)];
        let x = solve(&a, &b).unwrap();
        assert_eq!(mat_vec(&a, &x), b);
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_vec(&inv, &b), x);
        assert_eq!(det(&a), rat(18, 1));
    }

    #[test]
    fn nullspace_of_rank_one() {
        let a = from_ints(&[vec![1, 2, 3], vec![2, 4, 6]]);
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(mat_vec(&a, &v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn krylov_companion() {
        // multiplication by x on Q[x]/(x^3 - 2)
        let apply = |v: &[BigRational]| vec![rat(2, 1) * &v[2], v[0].clone(), v[1].clone()];
        let m = krylov_minpoly(unit(3, 0), apply);
        assert_eq!(m.to_zpoly_primitive(), ZPoly::from_i64(&[-2, 0, 0, 1]));
    }
}
