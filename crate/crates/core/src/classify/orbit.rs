//! Bounded search for the isomorphism relation: `(2mu', 2nu') = M (2mu, 2nu) + s`
//! with `M` in GL2(Z) and `s` integral.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{ClassifyError, QhmParams};
use crate::cf2::Gl2;
use crate::exactnum::{common_field, Coords, FieldContext};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitMatch {
    pub matrix: Gl2,
    pub shift: [BigInt; 2],
}

pub fn orbit_isomorphic(p: &QhmParams, p2: &QhmParams, bound: i64) -> Result<Option<OrbitMatch>, ClassifyError> {
    if p.c != p2.c {
        return Ok(None);
    }
    let (ctx, cs) = common_field(&[p.mu.clone(), p.nu.clone(), p2.mu.clone(), p2.nu.clone()])?;
    Ok(orbit_isomorphic_in(&ctx, [&cs[0], &cs[1], &cs[2], &cs[3]], bound))
}

/// Candidate rows are filtered separately, then paired; the unimodular pair
/// with the smallest max-entry wins, ties broken lexicographically.
pub fn orbit_isomorphic_in(ctx: &FieldContext, cs: [&Coords; 4], bound: i64) -> Option<OrbitMatch> {
    let two = BigRational::from_integer(BigInt::from(2));
    let m = ctx.scale(cs[0], &two);
    let n = ctx.scale(cs[1], &two);
    let rows_for = |target: &Coords| -> Vec<(i64, i64, BigInt)> {
        let t = ctx.scale(target, &two);
        let mut out = Vec::new();
        for a in -bound..=bound {
            let am = ctx.scale(&m, &BigRational::from_integer(a.into()));
            for b in -bound..=bound {
                let v = ctx.sub(&t, &ctx.add(&am, &ctx.scale(&n, &BigRational::from_integer(b.into()))));
                if let Some(s) = ctx.as_rational(&v) {
                    if s.is_integer() {
                        out.push((a, b, s.to_integer()));
                    }
                }
            }
        }
        out
    };
    let top = rows_for(cs[2]);
    if top.is_empty() {
        return None;
    }
    let bottom = rows_for(cs[3]);
    let mut best: Option<((i64, [i64; 4]), OrbitMatch)> = None;
    for (a, b, s) in &top {
        for (c, d, t) in &bottom {
            if (a * d - b * c).abs() != 1 {
                continue;
            }
            let key = (a.abs().max(b.abs()).max(c.abs()).max(d.abs()), [*a, *b, *c, *d]);
            if best.as_ref().map_or(true, |(k, _)| key < *k) {
                let matrix = Gl2::from_i64([[*a, *b], [*c, *d]]).unwrap();
                let m = OrbitMatch {
                    matrix,
                    shift: [s.clone(), t.clone()],
                };
                best = Some((key, m));
            }
        }
    }
    best.map(|(_, m)| m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::parse_algebraic;

    fn params(mu: &str, nu: &str) -> QhmParams {
        QhmParams::new(2, parse_algebraic(mu).unwrap(), parse_algebraic(nu).unwrap()).unwrap()
    }

    #[test]
    fn swap_and_translate() {
        let m = orbit_isomorphic(&params("sqrt(2)", "1/3"), &params("1/3 + 1/2", "sqrt(2)"), 8)
            .unwrap()
            .unwrap();
        // 2mu' = 2nu + 1, 2nu' = 2mu
        assert_eq!(m.matrix, Gl2::from_i64([[0, 1], [1, 0]]).unwrap());
        assert_eq!(m.shift, [BigInt::from(1), BigInt::from(0)]);
    }

    #[test]
    fn flip_is_not_an_isomorphism_here() {
        let a = params("sqrt(2)", "sqrt(3)");
        let flipped = params("1/(4*sqrt(2))", "sqrt(3)/(2*sqrt(2))");
        assert_eq!(orbit_isomorphic(&a, &flipped, 8).unwrap(), None);
    }

    #[test]
    fn c_must_agree() {
        let a = params("sqrt(2)", "0");
        let b = QhmParams::new(3, a.mu.clone(), a.nu.clone()).unwrap();
        assert_eq!(orbit_isomorphic(&a, &b, 8).unwrap(), None);
    }
}
