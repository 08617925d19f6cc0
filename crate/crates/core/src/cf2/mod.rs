//! Continued fractions, GL2(Z)-equivalence of reals, and the GL2/GL3
//! fractional-linear actions.

pub mod gl;
pub mod serret;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::exactnum::AlgebraicReal;

pub use gl::{gl2_act, gl2_decompose, gl3_act, gl3_act_coords, word_product, Gl2, Gl3, GlError, Letter, Unimodular};
pub use serret::{serret_equivalent, SerretResult};

pub const DEFAULT_CF_TERMS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfExpansion {
    /// `a0; a1, a2, ...`
    pub quotients: Vec<BigInt>,
    /// `(start, length)` of the period, for quadratic irrationals.
    pub period: Option<(usize, usize)>,
    pub exact: bool,
}

impl CfExpansion {
    pub fn to_json(&self) -> Value {
        json!({
            "quotients": self.quotients.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
            "period_start": self.period.map(|p| p.0),
            "period_len": self.period.map(|p| p.1),
            "exact": self.exact,
        })
    }

    pub fn period_word(&self) -> Option<&[BigInt]> {
        self.period.map(|(s, l)| &self.quotients[s..s + l])
    }

    /// Convergent matrix `M(k) = (p_{k-1} p_{k-2}; q_{k-1} q_{k-2})`, so that
    /// `x = M(k) . x_k` for the k-th complete quotient `x_k`.
    pub fn convergent_matrix(&self, k: usize) -> Gl2 {
        convergent_matrix(&self.quotients[..k])
    }

    /// Value reconstructed from the expansion, when it is exact.
    pub fn value(&self) -> Option<AlgebraicReal> {
        if !self.exact {
            return None;
        }
        match self.period {
            None => {
                let m = convergent_matrix(&self.quotients);
                let r = m.rows();
                Some(AlgebraicReal::from_rational(&BigRational::new(
                    r[0][0].clone(),
                    r[1][0].clone(),
                )))
            }
            Some((s, l)) => {
                let p = convergent_matrix(&self.quotients[s..s + l]);
                let r = p.rows();
                // y = (r00 y + r01) / (r10 y + r11), y > 1
                let poly = crate::exactnum::ZPoly::new(vec![
                    -r[0][1].clone(),
                    &r[1][1] - &r[0][0],
                    r[1][0].clone(),
                ]);
                let bound = poly.root_bound();
                let y = AlgebraicReal::from_root(&poly, &BigRational::one(), &bound).ok()?;
                gl2_act(&convergent_matrix(&self.quotients[..s]), &y).ok()
            }
        }
    }

    pub fn render(&self) -> String {
        let q: Vec<String> = self.quotients.iter().map(|x| x.to_string()).collect();
        match self.period {
            Some((s, l)) => {
                let pre = &q[1..s.max(1)];
                let per = q[s..s + l].join(",");
                if s == 0 {
                    format!("[period ({})]", per)
                } else if pre.is_empty() {
                    format!("[{}; period ({})]", q[0], per)
                } else {
                    format!("[{}; {}, period ({})]", q[0], pre.join(", "), per)
                }
            }
            None => {
                let tail = if self.exact { "" } else { ", ..." };
                if q.len() == 1 {
                    format!("[{}{}]", q[0], tail)
                } else {
                    format!("[{}; {}{}]", q[0], q[1..].join(", "), tail)
                }
            }
        }
    }
}

pub fn convergent_matrix(quotients: &[BigInt]) -> Gl2 {
    let mut m = Gl2::identity();
    for a in quotients {
        let step = Unimodular::new([[a.clone(), BigInt::one()], [BigInt::one(), BigInt::zero()]]).unwrap();
        m = m.mul(&step);
    }
    m
}

/// Continued fraction of `a`. Rationals terminate; quadratic irrationals are
/// expanded until the surd state repeats regardless of `max_terms`; higher
/// degrees stop after `max_terms` quotients.
pub fn cf_expand(a: &AlgebraicReal, max_terms: usize) -> CfExpansion {
    if let Some(r) = a.as_rational() {
        return expand_rational(&r);
    }
    if a.degree() == 2 {
        return expand_quadratic(a);
    }
    let mut quotients = Vec::new();
    let mut x = a.clone();
    for _ in 0..max_terms.max(1) {
        let f = x.floor();
        quotients.push(f.clone());
        x = x
            .mobius(&BigInt::zero(), &BigInt::one(), &BigInt::one(), &-f)
            .expect("irrational complete quotient");
    }
    CfExpansion {
        quotients,
        period: None,
        exact: false,
    }
}

fn expand_rational(r: &BigRational) -> CfExpansion {
    let (mut n, mut d) = (r.numer().clone(), r.denom().clone());
    let mut quotients = Vec::new();
    while !d.is_zero() {
        let (q, rem) = n.div_mod_floor(&d);
        quotients.push(q);
        n = d;
        d = rem;
    }
    CfExpansion {
        quotients,
        period: None,
        exact: true,
    }
}

/// Surd state `(P + sqrt(D)) / Q` with `Q | D - P^2`.
fn expand_quadratic(a: &AlgebraicReal) -> CfExpansion {
    let p = a.minpoly();
    let (c, b, lead) = (p.coeff(0), p.coeff(1), p.coeff(2));
    let disc = &b * &b - BigInt::from(4) * &lead * &c;
    // which root: compare with the midpoint -b / 2a
    let mid = BigRational::new(-b.clone(), BigInt::from(2) * &lead);
    let plus = a.add_rational(&-mid).sign() > 0;
    let (mut pp, mut qq) = if plus {
        (-b, BigInt::from(2) * &lead)
    } else {
        (b, BigInt::from(-2) * &lead)
    };
    let s = disc.sqrt();
    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    let mut quotients = Vec::new();
    loop {
        if let Some(&i) = seen.get(&(pp.clone(), qq.clone())) {
            let len = quotients.len() - i;
            return CfExpansion {
                quotients,
                period: Some((i, len)),
                exact: true,
            };
        }
        seen.insert((pp.clone(), qq.clone()), quotients.len());
        let q = if qq.is_positive() {
            (&pp + &s).div_floor(&qq)
        } else {
            -((&pp + &s).div_floor(&-qq.clone()) + BigInt::one())
        };
        let p_next = &q * &qq - &pp;
        let q_next = (&disc - &p_next * &p_next) / &qq;
        quotients.push(q);
        pp = p_next;
        qq = q_next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::parse_algebraic;

    fn a(s: &str) -> AlgebraicReal {
        parse_algebraic(s).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn ten_sevenths() {
        let e = cf_expand(&a("10/7"), 10);
        assert_eq!(e.quotients, ints(&[1, 2, 3]));
        assert!(e.exact);
        assert_eq!(e.value().unwrap(), a("10/7"));
        assert_eq!(cf_expand(&a("-5"), 10).quotients, ints(&[-5]));
    }

    #[test]
    fn sqrt2_and_sqrt3() {
        let e = cf_expand(&a("sqrt(2)"), 1);
        assert_eq!(e.quotients, ints(&[1, 2]));
        assert_eq!(e.period, Some((1, 1)));
        assert_eq!(e.render(), "[1; period (2)]");
        assert_eq!(e.value().unwrap(), a("sqrt(2)"));
        let e3 = cf_expand(&a("sqrt(3)"), 1);
        assert_eq!(e3.render(), "[1; period (1,2)]");
    }

    #[test]
    fn golden_ratio() {
        let e = cf_expand(&a("(1+sqrt(5))/2"), 5);
        assert_eq!(e.quotients, ints(&[1]));
        assert_eq!(e.period, Some((0, 1)));
        assert_eq!(e.value().unwrap(), a("(1+sqrt(5))/2"));
    }

    #[test]
    fn negative_conjugate_root() {
        let x = a("(1-sqrt(5))/2");
        let e = cf_expand(&x, 5);
        assert_eq!(e.value().unwrap(), x);
        assert_eq!(e.quotients[0], BigInt::from(-1));
    }

    #[test]
    fn cube_root_is_inexact() {
        let x = a("root(x^3-2; 1, 2)");
        let e = cf_expand(&x, 8);
        // 2^(1/3) = [1; 3, 1, 5, 1, 1, 4, 1, ...]
        assert_eq!(e.quotients, ints(&[1, 3, 1, 5, 1, 1, 4, 1]));
        assert!(!e.exact);
    }

    #[test]
    fn convergent_determinants() {
        let e = cf_expand(&a("sqrt(7)"), 1);
        for k in 0..=e.quotients.len() {
            assert!(e.convergent_matrix(k).det().abs().is_one());
        }
    }
}
