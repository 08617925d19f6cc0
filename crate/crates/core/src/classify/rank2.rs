//! Reduction of rank-2 parameters: first to `(p/(2q), nu)`, then along the
//! Euclidean chain of `(q, p)` to `(0, q nu)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::json;

use super::{alg_json, ClassifyError, QhmParams, TraceStep};
use crate::cf2::Gl2;
use crate::exactnum::{common_field, AlgebraicReal};
use crate::lattice::{lattice_equal, trace_group_in};

#[derive(Clone, Debug)]
pub struct Normalized {
    pub params: QhmParams,
    /// Acts linearly on `(2 mu, 2 nu)`.
    pub matrix: Gl2,
    pub p: BigInt,
    pub q: BigInt,
    pub trace: Vec<TraceStep>,
}

/// Move a rank-2 parameter pair within its GL2(Z) orbit to `mu = p/(2q)`.
pub fn normalize_rank2(params: &QhmParams) -> Result<Normalized, ClassifyError> {
    let (ctx, cs) = common_field(&[params.mu.clone(), params.nu.clone()])?;
    let g = trace_group_in(&ctx, &cs[0], &cs[1], &params.mu, &params.nu);
    if g.rank() != 2 {
        return Err(ClassifyError::NotRank2(g.rank()));
    }
    let mut trace = Vec::new();
    let (mut mu0, mut nu0) = (g.gens[1].clone(), g.gens[2].clone());
    let mut total = Gl2::identity();
    if ctx.as_rational(&nu0).is_some() {
        std::mem::swap(&mut mu0, &mut nu0);
        total = Gl2::from_i64([[0, 1], [1, 0]]).unwrap();
        trace.push(TraceStep::new("sorb-orbit", json!({ "move": "swap", "matrix": total.to_strings() })));
    }
    let j = (1..ctx.degree()).find(|&j| !nu0[j].is_zero()).expect("nu is irrational");
    let s = &mu0[j] / &nu0[j];
    let t = ctx
        .as_rational(&ctx.sub(&mu0, &ctx.scale(&nu0, &s)))
        .expect("rank 2 puts 2 mu in Q + Q 2 nu");
    let (k, l) = (s.numer().clone(), s.denom().clone());
    let (m, mu1, nu1) = if k.is_zero() {
        (Gl2::identity(), t.clone(), nu0.clone())
    } else {
        let e = k.extended_gcd(&l);
        let (a, b) = (e.x, e.y);
        let m = Gl2::new([[-l.clone(), k.clone()], [a.clone(), b]]).expect("det -1");
        let mu1 = -BigRational::from_integer(l.clone()) * &t;
        let nu1 = ctx.add(
            &ctx.scale(&nu0, &BigRational::new(BigInt::one(), l.clone())),
            &ctx.from_rational(&(BigRational::from_integer(a) * &t)),
        );
        (m, mu1, nu1)
    };
    total = m.mul(&total);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let out = QhmParams {
        c: params.c,
        mu: AlgebraicReal::from_rational(&(&mu1 * &half)),
        nu: ctx.to_algebraic(&ctx.scale(&nu1, &half)),
    };
    let mu1c = ctx.from_rational(&mu1);
    let g2 = trace_group_in(&ctx, &ctx.scale(&mu1c, &half), &ctx.scale(&nu1, &half), &out.mu, &out.nu);
    debug_assert!(lattice_equal(&g.lattice, &g2.lattice).unwrap_or(false));
    trace.push(TraceStep::new(
        "rank12-normalize",
        json!({
            "slope": s.to_string(),
            "offset": t.to_string(),
            "matrix": total.to_strings(),
            "mu": alg_json(&out.mu),
            "nu": alg_json(&out.nu),
        }),
    ));
    Ok(Normalized {
        params: out,
        matrix: total,
        p: mu1.numer().clone(),
        q: mu1.denom().clone(),
        trace,
    })
}

#[derive(Clone, Debug)]
pub struct Reduced {
    /// `(0, q nu)`.
    pub params: QhmParams,
    /// Nonzero remainders `r0 = q, r1 = p, ..., 1`.
    pub chain: Vec<BigInt>,
    pub flips: usize,
    pub trace: Vec<TraceStep>,
}

/// Walk `(p/(2q), nu)` down to `(0, q nu)` by alternating `mu -> 1/(4 mu)`
/// flips and integer translations of `2 mu`.
pub fn reduce_dif(params: &QhmParams) -> Result<Reduced, ClassifyError> {
    let mu0 = params
        .mu
        .as_rational()
        .ok_or(ClassifyError::IrrationalMu)?
        * BigRational::from_integer(BigInt::from(2));
    let (mut p, q) = (mu0.numer().clone(), mu0.denom().clone());
    let mut trace = Vec::new();
    if p.is_zero() {
        return Ok(Reduced {
            params: params.clone(),
            chain: vec![q],
            flips: 0,
            trace,
        });
    }
    if p.is_negative() {
        p = -p;
        trace.push(TraceStep::new(
            "sorb-orbit",
            json!({ "move": "reflect", "matrix": [["-1", "0"], ["0", "1"]] }),
        ));
    }
    let mut chain = vec![q.clone(), p.clone()];
    let (mut r0, mut r1) = (q.clone(), p);
    let mut factor = BigRational::one();
    let mut flips = 0;
    loop {
        // (r1/(2 r0), k) -> (r0/(2 r1), k r0/r1)
        factor *= BigRational::new(r0.clone(), r1.clone());
        flips += 1;
        trace.push(TraceStep::new(
            "fmu-flip",
            json!({
                "from_2mu": BigRational::new(r1.clone(), r0.clone()).to_string(),
                "to_2mu": BigRational::new(r0.clone(), r1.clone()).to_string(),
                "nu_factor": factor.to_string(),
            }),
        ));
        let (m, r2) = r0.div_mod_floor(&r1);
        trace.push(TraceStep::new(
            "sorb-orbit",
            json!({ "move": "translate", "shift_2mu": (-&m).to_string(), "to_2mu": BigRational::new(r2.clone(), r1.clone()).to_string() }),
        ));
        if r2.is_zero() {
            break;
        }
        chain.push(r2.clone());
        r0 = r1;
        r1 = r2;
    }
    debug_assert_eq!(factor, BigRational::from_integer(q.clone()));
    let out = QhmParams {
        c: params.c,
        mu: AlgebraicReal::zero(),
        nu: params.nu.mul_rational(&factor),
    };
    trace.push(TraceStep::new(
        "dif-chain",
        json!({
            "chain": chain.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "flips": flips,
            "nu": alg_json(&out.nu),
        }),
    ));
    Ok(Reduced {
        params: out,
        chain,
        flips,
        trace,
    })
}
