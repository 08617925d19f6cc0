//! Finitely generated subgroups of R, stored as Z-modules of rational
//! coordinate vectors in a number field.
//!
//! A lattice is `(1/denom) * rowspan_Z(basis)` with `basis` in row Hermite
//! normal form (positive pivots, entries above a pivot reduced into
//! `[0, pivot)`) and `gcd(denom, basis) = 1`, so equal lattices are
//! structurally equal.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactnum::linalg::{self, mat_vec};
use crate::exactnum::{common_field, AlgebraicReal, Coords, FieldContext, NumError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("lattices live in different field contexts")]
    ContextMismatch,
    #[error("not a sublattice")]
    NotSublattice,
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("scaling by zero")]
    ZeroScale,
    #[error("expected rank 2, got {0}")]
    NotRank2(usize),
    #[error(transparent)]
    Num(#[from] NumError),
}

#[derive(Clone, Debug)]
pub struct RatLattice {
    context: FieldContext,
    gens: Vec<Coords>,
    denom: BigInt,
    basis: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl PartialEq for RatLattice {
    fn eq(&self, other: &Self) -> bool {
        self.context == other.context && self.denom == other.denom && self.basis == other.basis
    }
}

impl Eq for RatLattice {}

impl RatLattice {
    pub fn new(context: FieldContext, gens: Vec<Coords>) -> Self {
        let d = context.degree();
        let l = gens
            .iter()
            .flatten()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let rows: Vec<Vec<BigInt>> = gens
            .iter()
            .map(|g| {
                assert_eq!(g.len(), d, "coordinate vector length");
                g.iter()
                    .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
                    .collect()
            })
            .collect();
        let (mut basis, pivots) = hnf(rows, d);
        let g = basis
            .iter()
            .flatten()
            .fold(l.clone(), |g, c| g.gcd(c));
        for row in basis.iter_mut() {
            for c in row.iter_mut() {
                *c = &*c / &g;
            }
        }
        RatLattice {
            context,
            gens,
            denom: l / g,
            basis,
            pivots,
        }
    }

    pub fn context(&self) -> &FieldContext {
        &self.context
    }

    pub fn gens(&self) -> &[Coords] {
        &self.gens
    }

    pub fn denom(&self) -> &BigInt {
        &self.denom
    }

    pub fn hnf_basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Basis vectors as rational coordinates.
    pub fn basis_coords(&self) -> Vec<Coords> {
        self.basis
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| BigRational::new(c.clone(), self.denom.clone()))
                    .collect()
            })
            .collect()
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        let scaled: Vec<BigRational> = v
            .iter()
            .map(|c| c * BigRational::from_integer(self.denom.clone()))
            .collect();
        if !scaled.iter().all(BigRational::is_integer) {
            return false;
        }
        let mut w: Vec<BigInt> = scaled.into_iter().map(|c| c.to_integer()).collect();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let (q, r) = w[p].div_rem(&row[p]);
            if !r.is_zero() {
                return false;
            }
            if !q.is_zero() {
                for (x, y) in w.iter_mut().zip(row) {
                    *x -= &q * y;
                }
            }
        }
        w.iter().all(Zero::is_zero)
    }

    /// `r * L`, via the regular representation of `r`.
    pub fn scale(&self, r: &[BigRational]) -> Result<RatLattice, LatticeError> {
        if self.context.is_zero(r) {
            return Err(LatticeError::ZeroScale);
        }
        let m = self.context.regular_matrix(r);
        let gens = self.basis_coords().iter().map(|g| mat_vec(&m, g)).collect();
        Ok(RatLattice::new(self.context.clone(), gens))
    }

    /// Scale by an algebraic real, which must lie in the lattice's field.
    pub fn scale_by(&self, r: &AlgebraicReal) -> Result<RatLattice, LatticeError> {
        let c = self.context.express(r)?;
        self.scale(&c)
    }
}

pub fn lattice_equal(a: &RatLattice, b: &RatLattice) -> Result<bool, LatticeError> {
    if a.context != b.context {
        return Err(LatticeError::ContextMismatch);
    }
    Ok(a == b)
}

/// `[sup : sub]` for a full-rank sublattice.
pub fn index(sub: &RatLattice, sup: &RatLattice) -> Result<BigInt, LatticeError> {
    if sub.context != sup.context {
        return Err(LatticeError::ContextMismatch);
    }
    if sub.rank() != sup.rank() {
        return Err(LatticeError::RankMismatch(sub.rank(), sup.rank()));
    }
    let sub_basis = sub.basis_coords();
    if !sub_basis.iter().all(|v| sup.contains(v)) {
        return Err(LatticeError::NotSublattice);
    }
    let block = |rows: &[Coords]| -> BigRational {
        let m: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| sup.pivots.iter().map(|&p| r[p].clone()).collect())
            .collect();
        linalg::det(&m)
    };
    let ratio = block(&sub_basis) / block(&sup.basis_coords());
    let ratio = ratio.abs();
    debug_assert!(ratio.is_integer());
    Ok(ratio.to_integer())
}

/// Row Hermite normal form; returns nonzero rows and their pivot columns.
pub fn hnf(mut rows: Vec<Vec<BigInt>>, ncols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        loop {
            let best = (r..rows.len())
                .filter(|&i| !rows[i][c].is_zero())
                .min_by(|&i, &j| rows[i][c].abs().cmp(&rows[j][c].abs()));
            let Some(b) = best else { break };
            rows.swap(r, b);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[r][c]);
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
                if !rows[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if rows[r][c].is_zero() {
            continue;
        }
        if rows[r][c].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -&*x;
            }
        }
        let pivot_row = rows[r].clone();
        for i in 0..r {
            let q = rows[i][c].div_floor(&pivot_row[c]);
            if !q.is_zero() {
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// `G = Z + 2 mu Z + 2 nu Z` with its designated generators.
#[derive(Clone, Debug)]
pub struct TraceGroup {
    pub lattice: RatLattice,
    pub mu: AlgebraicReal,
    pub nu: AlgebraicReal,
    /// Coordinates of `1, 2 mu, 2 nu`.
    pub gens: [Coords; 3],
}

impl TraceGroup {
    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn context(&self) -> &FieldContext {
        self.lattice.context()
    }
}

pub fn trace_group(mu: &AlgebraicReal, nu: &AlgebraicReal) -> Result<TraceGroup, NumError> {
    let (ctx, cs) = common_field(&[mu.clone(), nu.clone()])?;
    Ok(trace_group_in(&ctx, &cs[0], &cs[1], mu, nu))
}

/// Trace group from coordinates already placed in `ctx`.
pub fn trace_group_in(
    ctx: &FieldContext,
    mu_c: &[BigRational],
    nu_c: &[BigRational],
    mu: &AlgebraicReal,
    nu: &AlgebraicReal,
) -> TraceGroup {
    let two = BigRational::from_integer(BigInt::from(2));
    let gens = [ctx.one(), ctx.scale(mu_c, &two), ctx.scale(nu_c, &two)];
    TraceGroup {
        lattice: RatLattice::new(ctx.clone(), gens.to_vec()),
        mu: mu.clone(),
        nu: nu.clone(),
        gens,
    }
}

/// `G = alpha Z + (1/q) Z` with `0 < alpha < 1/q`.
#[derive(Clone, Debug)]
pub struct Rank2Basis {
    pub alpha: AlgebraicReal,
    pub alpha_coords: Coords,
    pub q: BigInt,
}

pub fn basis_rank2(g: &TraceGroup) -> Result<Rank2Basis, LatticeError> {
    rank2_basis_of(&g.lattice)
}

pub fn rank2_basis_of(lat: &RatLattice) -> Result<Rank2Basis, LatticeError> {
    if lat.rank() != 2 {
        return Err(LatticeError::NotRank2(lat.rank()));
    }
    let ctx = lat.context();
    let b = lat.basis_coords();
    let j = (1..ctx.degree())
        .find(|&j| !b[0][j].is_zero() || !b[1][j].is_zero())
        .expect("rank 2 lattice containing 1 has an irrational element");
    // integer kernel of phi(x b0 + y b1) = x b0[j] + y b1[j]
    let l = b[0][j].denom().lcm(b[1][j].denom());
    let lq = BigRational::from_integer(l);
    let f0 = (&b[0][j] * &lq).to_integer();
    let f1 = (&b[1][j] * &lq).to_integer();
    let g = f0.gcd(&f1);
    let (x0, y0) = (&f1 / &g, -(&f0 / &g));
    let z0 = ctx.add(
        &ctx.scale(&b[0], &BigRational::from_integer(x0.clone())),
        &ctx.scale(&b[1], &BigRational::from_integer(y0.clone())),
    );
    let r0 = ctx.as_rational(&z0).expect("kernel element is rational");
    let q = r0.recip().abs();
    debug_assert!(q.is_integer());
    let q = q.to_integer();
    // complete (x0, y0) to a unimodular pair: x0 v - y0 u = 1
    let e = x0.extended_gcd(&-y0.clone());
    debug_assert!(e.gcd.is_one());
    let (v, u) = (e.x, e.y);
    let mut a0 = ctx.add(
        &ctx.scale(&b[0], &BigRational::from_integer(u)),
        &ctx.scale(&b[1], &BigRational::from_integer(v)),
    );
    let lead = a0[1..].iter().find(|c| !c.is_zero()).expect("irrational");
    if lead.is_negative() {
        a0 = ctx.neg(&a0);
    }
    let qr = BigRational::from_integer(q.clone());
    let fl = ctx.floor(&ctx.scale(&a0, &qr));
    let alpha_coords = ctx.sub(&a0, &ctx.from_rational(&BigRational::new(fl, q.clone())));
    Ok(Rank2Basis {
        alpha: ctx.to_algebraic(&alpha_coords),
        alpha_coords,
        q,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::parse_algebraic;

    fn a(s: &str) -> AlgebraicReal {
        parse_algebraic(s).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn q_lattice(gens: &[(i64, i64)]) -> RatLattice {
        RatLattice::new(
            FieldContext::rational(),
            gens.iter().map(|&(n, d)| vec![rat(n, d)]).collect(),
        )
    }

    #[test]
    fn hnf_is_canonical() {
        let rows = vec![
            vec![BigInt::from(4), BigInt::from(6)],
            vec![BigInt::from(2), BigInt::from(-1)],
        ];
        let (h, p) = hnf(rows, 2);
        assert_eq!(p, vec![0, 1]);
        assert_eq!(h, vec![vec![BigInt::from(2), BigInt::from(7)], vec![BigInt::zero(), BigInt::from(8)]]);
    }

    #[test]
    fn trace_group_ranks() {
        assert_eq!(trace_group(&a("0"), &a("0")).unwrap().rank(), 1);
        let g = trace_group(&a("1/4"), &a("1/6")).unwrap();
        assert_eq!(g.rank(), 1);
        assert_eq!(g.lattice, q_lattice(&[(1, 6)]));
        assert_eq!(trace_group(&a("sqrt(2)/2"), &a("1/4")).unwrap().rank(), 2);
        assert_eq!(trace_group(&a("sqrt(2)/2"), &a("sqrt(3)/2")).unwrap().rank(), 3);
    }

    #[test]
    fn equality_of_rational_lattices() {
        assert_eq!(q_lattice(&[(1, 1), (1, 2)]), q_lattice(&[(1, 2)]));
        assert_ne!(q_lattice(&[(1, 1)]), q_lattice(&[(1, 2)]));
    }

    #[test]
    fn sqrt2_lattices() {
        let s2 = a("sqrt(2)");
        let (ctx, cs) = common_field(&[s2.clone()]).unwrap();
        let l1 = RatLattice::new(ctx.clone(), vec![ctx.one(), cs[0].clone()]);
        let l2 = RatLattice::new(ctx.clone(), vec![ctx.one(), ctx.scale(&cs[0], &rat(2, 1))]);
        assert!(!lattice_equal(&l1, &l2).unwrap());
        assert_eq!(index(&l2, &l1).unwrap(), BigInt::from(2));
        assert_eq!(index(&l1, &l1).unwrap(), BigInt::one());
        assert_eq!(index(&l1, &l2), Err(LatticeError::NotSublattice));
        // sqrt2 * (Z + sqrt2 Z) = 2Z + sqrt2 Z
        let scaled = l1.scale(&cs[0]).unwrap();
        let expect = RatLattice::new(ctx.clone(), vec![ctx.from_int(2), cs[0].clone()]);
        assert_eq!(scaled, expect);
        let back = scaled.scale(&ctx.inv(&cs[0]).unwrap()).unwrap();
        assert_eq!(back, l1);
    }

    #[test]
    fn index_of_2z_in_z() {
        assert_eq!(index(&q_lattice(&[(2, 1)]), &q_lattice(&[(1, 1)])).unwrap(), BigInt::from(2));
    }

    #[test]
    fn rank2_basis_examples() {
        let g = trace_group(&a("sqrt(2)/2"), &a("1/4")).unwrap();
        let b = basis_rank2(&g).unwrap();
        assert_eq!(b.q, BigInt::from(2));
        assert_eq!(b.alpha, a("sqrt(2) - 1"));
        let g2 = trace_group(&a("1/4"), &a("sqrt(2)/2")).unwrap();
        let b2 = basis_rank2(&g2).unwrap();
        assert_eq!((b2.alpha, b2.q), (b.alpha.clone(), b.q.clone()));
        let g3 = trace_group(&a("0"), &a("sqrt(3)/2")).unwrap();
        let b3 = basis_rank2(&g3).unwrap();
        assert_eq!(b3.q, BigInt::one());
        assert_eq!(b3.alpha, a("sqrt(3) - 1"));
    }

    #[test]
    fn rank2_basis_regenerates_group() {
        let g = trace_group(&a("sqrt(2)/3 + 1/5"), &a("sqrt(8)/7 - 1/4")).unwrap();
        let b = basis_rank2(&g).unwrap();
        let ctx = g.context();
        let span = RatLattice::new(
            ctx.clone(),
            vec![b.alpha_coords.clone(), ctx.from_rational(&BigRational::new(BigInt::one(), b.q.clone()))],
        );
        assert_eq!(span, g.lattice);
        assert!(b.alpha.sign() > 0);
        assert!(b.alpha < AlgebraicReal::from_rational(&BigRational::new(BigInt::one(), b.q)));
    }
}
