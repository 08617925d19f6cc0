//! Integer matrices of determinant +-1 and their fractional-linear actions.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exactnum::linalg;
use crate::exactnum::{common_field, AlgebraicReal, Coords, FieldContext, NumError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GlError {
    #[error("determinant {0} is not +-1")]
    NotUnimodular(BigInt),
    #[error(transparent)]
    Num(#[from] NumError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Unimodular<const N: usize> {
    rows: [[BigInt; N]; N],
}

pub type Gl2 = Unimodular<2>;
pub type Gl3 = Unimodular<3>;

impl<const N: usize> Unimodular<N> {
    pub fn new(rows: [[BigInt; N]; N]) -> Result<Self, GlError> {
        let m = Unimodular { rows };
        let d = m.det();
        if d.abs().is_one() {
            Ok(m)
        } else {
            Err(GlError::NotUnimodular(d))
        }
    }

    pub fn from_i64(rows: [[i64; N]; N]) -> Result<Self, GlError> {
        Self::new(std::array::from_fn(|i| std::array::from_fn(|j| BigInt::from(rows[i][j]))))
    }

    pub fn identity() -> Self {
        Unimodular {
            rows: std::array::from_fn(|i| {
                std::array::from_fn(|j| if i == j { BigInt::one() } else { BigInt::zero() })
            }),
        }
    }

    pub fn rows(&self) -> &[[BigInt; N]; N] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    fn to_q(&self) -> linalg::QMat {
        self.rows
            .iter()
            .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
            .collect()
    }

    pub fn det(&self) -> BigInt {
        linalg::det(&self.to_q()).to_integer()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Unimodular {
            rows: std::array::from_fn(|i| {
                std::array::from_fn(|j| (0..N).map(|k| &self.rows[i][k] * &other.rows[k][j]).sum())
            }),
        }
    }

    pub fn inverse(&self) -> Self {
        let inv = linalg::inverse(&self.to_q()).expect("unimodular matrices are invertible");
        Unimodular {
            rows: std::array::from_fn(|i| std::array::from_fn(|j| inv[i][j].to_integer())),
        }
    }

    pub fn neg(&self) -> Self {
        Unimodular {
            rows: std::array::from_fn(|i| std::array::from_fn(|j| -&self.rows[i][j])),
        }
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect()
    }

    pub fn from_strings(rows: &[Vec<String>]) -> Result<Self, GlError> {
        let bad = || GlError::NotUnimodular(BigInt::zero());
        if rows.len() != N || rows.iter().any(|r| r.len() != N) {
            return Err(bad());
        }
        let mut parsed = Vec::with_capacity(N);
        for r in rows {
            let mut row = Vec::with_capacity(N);
            for s in r {
                row.push(s.parse::<BigInt>().map_err(|_| bad())?);
            }
            parsed.push(row);
        }
        Self::new(std::array::from_fn(|i| std::array::from_fn(|j| parsed[i][j].clone())))
    }
}

impl<const N: usize> fmt::Display for Unimodular<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let s: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            write!(f, "{}", s.join(" "))?;
        }
        write!(f, ")")
    }
}

/// `(a x + b) / (c x + d)`.
pub fn gl2_act(a: &Gl2, x: &AlgebraicReal) -> Result<AlgebraicReal, NumError> {
    let r = a.rows();
    x.mobius(&r[0][0], &r[0][1], &r[1][0], &r[1][1])
}

/// The GL3 action on parameter pairs:
/// `2mu' = (2a mu + 2b nu + c) / D`, `2nu' = (2d mu + 2e nu + f) / D`,
/// `D = 2g mu + 2h nu + i`.
pub fn gl3_act(a: &Gl3, mu: &AlgebraicReal, nu: &AlgebraicReal) -> Result<(AlgebraicReal, AlgebraicReal), NumError> {
    let (ctx, cs) = common_field(&[mu.clone(), nu.clone()])?;
    let (m, n) = gl3_act_coords(&ctx, a, &cs[0], &cs[1])?;
    Ok((ctx.to_algebraic(&m), ctx.to_algebraic(&n)))
}

/// The GL3 action on coordinates in a fixed field.
pub fn gl3_act_coords(
    ctx: &FieldContext,
    a: &Gl3,
    mu: &[BigRational],
    nu: &[BigRational],
) -> Result<(Coords, Coords), NumError> {
    let two = BigRational::from_integer(BigInt::from(2));
    let v = [ctx.scale(mu, &two), ctx.scale(nu, &two), ctx.one()];
    let row = |i: usize| -> Coords {
        let mut acc = ctx.zero();
        for (k, vk) in v.iter().enumerate() {
            let c = a.get(i, k);
            if !c.is_zero() {
                acc = ctx.add(&acc, &ctx.scale(vk, &BigRational::from_integer(c.clone())));
            }
        }
        acc
    };
    let den = row(2);
    let inv = ctx.inv(&den)?;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let m = ctx.scale(&ctx.mul(&row(0), &inv), &half);
    let n = ctx.scale(&ctx.mul(&row(1), &inv), &half);
    Ok((m, n))
}

/// A letter of a word in the generators `A1 = (1 1; 0 1)` and `A2 = (0 1; 1 0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Letter {
    /// `A1^k`.
    A1(BigInt),
    A2,
}

impl Letter {
    pub fn matrix(&self) -> Gl2 {
        match self {
            Letter::A1(k) => Unimodular {
                rows: [[BigInt::one(), k.clone()], [BigInt::zero(), BigInt::one()]],
            },
            Letter::A2 => Gl2::from_i64([[0, 1], [1, 0]]).unwrap(),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::A1(k) if k.is_one() => write!(f, "A1"),
            Letter::A1(k) => write!(f, "A1^{}", k),
            Letter::A2 => write!(f, "A2"),
        }
    }
}

pub fn word_product(word: &[Letter]) -> Gl2 {
    word.iter()
        .fold(Gl2::identity(), |acc, l| acc.mul(&l.matrix()))
}

/// Write `a` as a word in `A1^k` and `A2`. The result is verified by
/// multiplication before it is returned.
pub fn gl2_decompose(a: &Gl2) -> Vec<Letter> {
    let mut m = a.rows().clone();
    // left multiplications applied to reach a diagonal matrix
    let mut ops: Vec<Letter> = Vec::new();
    while !m[1][0].is_zero() {
        let q = m[0][0].div_floor(&m[1][0]);
        if !q.is_zero() {
            // A1^-q: row0 -= q row1
            for j in 0..2 {
                let t = &q * &m[1][j];
                m[0][j] -= t;
            }
            ops.push(Letter::A1(-q));
        }
        m.swap(0, 1);
        ops.push(Letter::A2);
    }
    // now upper triangular with +-1 on the diagonal
    let k = &m[0][1] * &m[1][1];
    if !k.is_zero() {
        for j in 0..2 {
            let t = &k * &m[1][j];
            m[0][j] -= t;
        }
        ops.push(Letter::A1(-k));
    }
    let diag = (m[0][0].to_i64().unwrap(), m[1][1].to_i64().unwrap());
    // a = ops_1^-1 ... ops_n^-1 * diag
    let mut word: Vec<Letter> = ops
        .iter()
        .map(|l| match l {
            Letter::A1(k) => Letter::A1(-k),
            Letter::A2 => Letter::A2,
        })
        .collect();
    word.extend(diagonal_word(diag));
    let word = simplify(word);
    assert_eq!(&word_product(&word), a, "decomposition failed to verify");
    word
}

fn simplify(word: Vec<Letter>) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for l in word {
        match (out.last_mut(), &l) {
            (Some(Letter::A1(k)), Letter::A1(j)) => {
                *k += j;
                if k.is_zero() {
                    out.pop();
                }
            }
            (Some(Letter::A2), Letter::A2) => {
                out.pop();
            }
            _ => {
                if !matches!(&l, Letter::A1(k) if k.is_zero()) {
                    out.push(l);
                }
            }
        }
    }
    out
}

/// Shortest words for the four sign matrices, found once by breadth-first search.
fn diagonal_word(diag: (i64, i64)) -> Vec<Letter> {
    static TABLE: OnceLock<HashMap<(i64, i64), Vec<i8>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        type M = [[i64; 2]; 2];
        let mul = |a: &M, b: &M| -> M {
            [
                [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
                [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
            ]
        };
        // letters: 1 = A1, -1 = A1^-1, 0 = A2
        let gens: [(i8, M); 3] = [(1, [[1, 1], [0, 1]]), (-1, [[1, -1], [0, 1]]), (0, [[0, 1], [1, 0]])];
        let mut seen: HashMap<M, Vec<i8>> = HashMap::new();
        let mut queue = VecDeque::new();
        seen.insert([[1, 0], [0, 1]], Vec::new());
        queue.push_back([[1, 0], [0, 1]]);
        while let Some(m) = queue.pop_front() {
            let w = seen[&m].clone();
            if w.len() >= 10 {
                continue;
            }
            for (l, g) in &gens {
                let n = mul(&m, g);
                if n.iter().flatten().any(|x| x.abs() > 3) || seen.contains_key(&n) {
                    continue;
                }
                let mut w2 = w.clone();
                w2.push(*l);
                seen.insert(n, w2);
                queue.push_back(n);
            }
        }
        let mut t = HashMap::new();
        for (a, d) in [(1, 1), (-1, -1), (1, -1), (-1, 1)] {
            t.insert((a, d), seen[&[[a, 0], [0, d]]].clone());
        }
        t
    });
    table[&diag]
        .iter()
        .map(|&l| match l {
            0 => Letter::A2,
            k => Letter::A1(BigInt::from(k)),
        })
        .collect()
}
