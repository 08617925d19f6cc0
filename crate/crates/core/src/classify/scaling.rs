//! Searching for `r` with `G = r G'`, and extracting unimodular witnesses
//! from a found `r`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cf2::{gl2_act, gl3_act_coords, Gl2, Gl3};
use crate::exactnum::linalg::{self, QMat};
use crate::exactnum::{Coords, FieldContext};
use crate::lattice::Rank2Basis;

#[derive(Clone, Debug)]
pub enum ScalingOutcome {
    /// `r > 0` with `G = r G'`; `transition[k]` holds `r b'_k` in the basis of `G`.
    Found {
        r: Coords,
        dim: usize,
        transition: Vec<Vec<BigInt>>,
    },
    None {
        dim: usize,
        reason: String,
    },
    Unknown {
        dim: usize,
        bound: i64,
    },
}

impl ScalingOutcome {
    pub fn dim(&self) -> usize {
        match self {
            ScalingOutcome::Found { dim, .. }
            | ScalingOutcome::None { dim, .. }
            | ScalingOutcome::Unknown { dim, .. } => *dim,
        }
    }
}

/// Solve `G = r G'` for lattices of equal rank given by bases `b` and `b'`.
/// Since `r b'_0` lies in `G`, candidates are `r = (sum z_j b_j) / b'_0` with
/// integral `z`; the rational constraint `r span(G') = span(G)` cuts out a
/// subspace `S` of `z`-space. With `b'_0 = 1` this is `r = sum z_j b_j`.
pub fn scaling_search(ctx: &FieldContext, g: &[Coords], gp: &[Coords], bound: i64) -> ScalingOutcome {
    let n = g.len();
    let d = ctx.degree();
    assert_eq!(n, gp.len());
    let ann = linalg::nullspace(&g.to_vec(), d);
    let inv0 = ctx.inv(&gp[0]).expect("basis vectors are nonzero");
    let gt: Vec<Coords> = g.iter().map(|b| ctx.mul(b, &inv0)).collect();
    // products[j][k] = b_j b'_k / b'_0
    let products: Vec<Vec<Coords>> = gt
        .iter()
        .map(|bj| gp.iter().map(|bk| ctx.mul(bj, bk)).collect())
        .collect();
    let dot = |h: &Coords, v: &Coords| -> BigRational { h.iter().zip(v).map(|(a, b)| a * b).sum() };
    let mut constraints: QMat = Vec::new();
    for h in &ann {
        for k in 0..n {
            constraints.push((0..n).map(|j| dot(h, &products[j][k])).collect());
        }
    }
    let s_basis = if constraints.is_empty() {
        (0..n).map(|i| linalg::unit(n, i)).collect()
    } else {
        linalg::nullspace(&constraints, n)
    };
    let dim = s_basis.len();
    if dim == 0 {
        return ScalingOutcome::None {
            dim,
            reason: "the only rational solution of r span(G') = span(G) is r = 0".into(),
        };
    }

    // coordinates in the basis of G through n independent columns
    let pivots = linalg::rref(&mut g.to_vec());
    let sub: QMat = g.iter().map(|b| pivots.iter().map(|&p| b[p].clone()).collect()).collect();
    let sub_inv = linalg::inverse(&linalg::transpose(&sub)).expect("basis is independent");
    let project = |v: &Coords| -> Vec<BigRational> {
        let vs: Vec<BigRational> = pivots.iter().map(|&p| v[p].clone()).collect();
        linalg::mat_vec(&sub_inv, &vs)
    };
    // tj[j][k][i]: contribution of z_j to coefficient i of r b'_k
    let tj: Vec<Vec<Vec<BigRational>>> = products
        .iter()
        .map(|row| row.iter().map(&project).collect())
        .collect();
    let transition = |z: &[BigRational]| -> Vec<Vec<BigRational>> {
        (0..n)
            .map(|k| {
                (0..n)
                    .map(|i| (0..n).map(|j| &z[j] * &tj[j][k][i]).sum())
                    .collect()
            })
            .collect()
    };
    let r_of = |z: &[BigRational]| -> Coords {
        let mut acc = ctx.zero();
        for (zj, bj) in z.iter().zip(&gt) {
            if !zj.is_zero() {
                acc = ctx.add(&acc, &ctx.scale(bj, zj));
            }
        }
        acc
    };
    let finish = |z: Vec<BigRational>, t: Vec<Vec<BigRational>>| -> ScalingOutcome {
        let mut r = r_of(&z);
        let mut t: Vec<Vec<BigInt>> = t
            .into_iter()
            .map(|row| row.into_iter().map(|x| x.to_integer()).collect())
            .collect();
        if ctx.sign(&r) < 0 {
            r = ctx.neg(&r);
            for x in t.iter_mut().flatten() {
                *x = -&*x;
            }
        }
        ScalingOutcome::Found { r, dim, transition: t }
    };

    if dim == 1 {
        let z0 = primitive_integer(&s_basis[0]);
        let t0 = transition(&z0);
        let delta = linalg::det(&t0);
        if delta.is_zero() {
            return ScalingOutcome::None {
                dim,
                reason: "transition determinant vanishes on the solution line".into(),
            };
        }
        // |t|^n |delta| = 1 with t an integer
        let inv = delta.recip().abs();
        let root = inv.is_integer().then(|| inv.to_integer().nth_root(n as u32));
        let t = match root {
            Some(m) if m.pow(n as u32) == inv.to_integer() => BigRational::from_integer(m),
            _ => {
                return ScalingOutcome::None {
                    dim,
                    reason: format!("unimodularity needs |t|^{} = {}, which has no integer solution", n, inv),
                }
            }
        };
        let tm: Vec<Vec<BigRational>> = t0.iter().map(|row| row.iter().map(|x| x * &t).collect()).collect();
        if !tm.iter().flatten().all(BigRational::is_integer) {
            return ScalingOutcome::None {
                dim,
                reason: "the unique unimodular candidate has a non-integral transition matrix".into(),
            };
        }
        let z: Vec<BigRational> = z0.iter().map(|x| x * &t).collect();
        return finish(z, tm);
    }

    // dim >= 2: bounded enumeration by max-norm, then lexicographic
    let membership: Vec<Vec<BigInt>> = if dim < n {
        let mut c = constraints.clone();
        let p = linalg::rref(&mut c);
        c.iter().take(p.len()).map(|r| integer_row(r)).collect()
    } else {
        Vec::new()
    };
    let fast = FastTransition::new(&tj, &membership);
    let mut found = None;
    for h in 1..=bound {
        let mut z = Vec::with_capacity(n);
        let hit = shell(&mut z, n, h, false, &mut |z: &[i64]| {
            if let Some(f) = &fast {
                if !f.admissible(z) {
                    return false;
                }
            } else if !membership.iter().all(|row| {
                row.iter()
                    .zip(z)
                    .map(|(a, b)| a * BigInt::from(*b))
                    .sum::<BigInt>()
                    .is_zero()
            }) {
                return false;
            }
            let zq: Vec<BigRational> = z.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect();
            let t = transition(&zq);
            if t.iter().flatten().all(BigRational::is_integer) && linalg::det(&t).abs().is_one() {
                found = Some((zq, t));
                return true;
            }
            false
        });
        if hit {
            let (zq, t) = found.take().unwrap();
            return finish(zq, t);
        }
    }
    ScalingOutcome::Unknown { dim, bound }
}

/// Visit integer vectors of max-norm exactly `h` in lexicographic order until
/// `f` returns true.
fn shell(z: &mut Vec<i64>, n: usize, h: i64, on_boundary: bool, f: &mut dyn FnMut(&[i64]) -> bool) -> bool {
    if z.len() == n {
        return on_boundary && f(z);
    }
    let last = z.len() + 1 == n;
    for v in -h..=h {
        if last && !on_boundary && v.abs() != h {
            continue;
        }
        z.push(v);
        let stop = shell(z, n, h, on_boundary || v.abs() == h, f);
        z.pop();
        if stop {
            return true;
        }
    }
    false
}

/// Machine-integer prefilter: `S`-membership and integrality of the
/// transition matrix, before the exact determinant.
struct FastTransition {
    membership: Vec<Vec<i128>>,
    /// `num[j][k][i] / den` is the contribution of `z_j` to entry `(k, i)`.
    num: Vec<Vec<Vec<i128>>>,
    den: i128,
}

impl FastTransition {
    fn new(tj: &[Vec<Vec<BigRational>>], membership: &[Vec<BigInt>]) -> Option<Self> {
        const LIMIT: i128 = 1 << 60;
        let small = |x: &BigInt| x.to_i128().filter(|v| v.abs() < LIMIT);
        let den = tj.iter().flatten().flatten().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        let num = tj
            .iter()
            .map(|a| {
                a.iter()
                    .map(|b| {
                        b.iter()
                            .map(|x| small(&(x * BigRational::from_integer(den.clone())).to_integer()))
                            .collect::<Option<Vec<_>>>()
                    })
                    .collect::<Option<Vec<_>>>()
            })
            .collect::<Option<Vec<_>>>()?;
        let membership = membership
            .iter()
            .map(|r| r.iter().map(small).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        Some(FastTransition {
            membership,
            num,
            den: small(&den)?,
        })
    }

    fn admissible(&self, z: &[i64]) -> bool {
        let in_s = self
            .membership
            .iter()
            .all(|row| row.iter().zip(z).map(|(a, &b)| a * b as i128).sum::<i128>() == 0);
        if !in_s {
            return false;
        }
        let n = z.len();
        (0..n).all(|k| {
            (0..n).all(|i| {
                let v: i128 = (0..n).map(|j| z[j] as i128 * self.num[j][k][i]).sum();
                v % self.den == 0
            })
        })
    }
}

fn integer_row(r: &[BigRational]) -> Vec<BigInt> {
    let l = r.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    r.iter()
        .map(|x| (x * BigRational::from_integer(l.clone())).to_integer())
        .collect()
}

fn primitive_integer(v: &[BigRational]) -> Vec<BigRational> {
    let row = integer_row(v);
    let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    row.into_iter()
        .map(|x| BigRational::from_integer(x / &g))
        .collect()
}

/// The matrix whose rows are `(2 r mu', 2 r nu', r)` in the basis
/// `(2 mu, 2 nu, 1)`, checked to be unimodular and to map `(mu, nu)` to
/// `(mu', nu')`.
pub fn gl3_witness(
    ctx: &FieldContext,
    mu: &Coords,
    nu: &Coords,
    mu2: &Coords,
    nu2: &Coords,
    r: &Coords,
) -> Result<Gl3, String> {
    let two = BigRational::from_integer(BigInt::from(2));
    let cols = [ctx.scale(mu, &two), ctx.scale(nu, &two), ctx.one()];
    let a: QMat = linalg::transpose(&cols.to_vec());
    let targets = [
        ctx.mul(r, &ctx.scale(mu2, &two)),
        ctx.mul(r, &ctx.scale(nu2, &two)),
        r.clone(),
    ];
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for t in &targets {
        let x = linalg::solve(&a, t).ok_or("target outside span(2mu, 2nu, 1)")?;
        if !x.iter().all(BigRational::is_integer) {
            return Err("transition matrix is not integral".into());
        }
        rows.push(x.iter().map(|v| v.to_integer()).collect());
    }
    let m = Gl3::new(std::array::from_fn(|i| std::array::from_fn(|j| rows[i][j].clone())))
        .map_err(|e| e.to_string())?;
    let (m2, n2) = gl3_act_coords(ctx, &m, mu, nu).map_err(|e| e.to_string())?;
    if &m2 != mu2 || &n2 != nu2 {
        return Err("witness does not reproduce the target parameters".into());
    }
    Ok(m)
}

/// GL2 witness sending `q alpha` to `q' alpha'`, derived from `G = r G'`.
pub fn gl2_from_scaling(ctx: &FieldContext, b: &Rank2Basis, bp: &Rank2Basis, r: &Coords) -> Option<Gl2> {
    let inv_q = ctx.from_rational(&BigRational::new(BigInt::one(), b.q.clone()));
    let inv_qp = ctx.from_rational(&BigRational::new(BigInt::one(), bp.q.clone()));
    let a: QMat = linalg::transpose(&vec![b.alpha_coords.clone(), inv_q]);
    let row = |v: Coords| -> Option<Vec<BigInt>> {
        let x = linalg::solve(&a, &v)?;
        x.iter()
            .all(BigRational::is_integer)
            .then(|| x.iter().map(|v| v.to_integer()).collect())
    };
    let r1 = row(ctx.mul(r, &bp.alpha_coords))?;
    let r2 = row(ctx.mul(r, &inv_qp))?;
    let w = Gl2::new([[r1[0].clone(), r1[1].clone()], [r2[0].clone(), r2[1].clone()]]).ok()?;
    let qr = BigRational::from_integer(b.q.clone());
    let qpr = BigRational::from_integer(bp.q.clone());
    let x = ctx.to_algebraic(&ctx.scale(&b.alpha_coords, &qr));
    let y = ctx.to_algebraic(&ctx.scale(&bp.alpha_coords, &qpr));
    (gl2_act(&w, &x).ok()? == y).then_some(w)
}
