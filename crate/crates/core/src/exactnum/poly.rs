//! Dense univariate polynomials over Z and Q, plus Sturm chains for
//! counting real roots on rational intervals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Integer polynomial, coefficients in ascending order, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZPoly {
    coeffs: Vec<BigInt>,
}

/// Rational polynomial, coefficients in ascending order, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl ZPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        ZPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        ZPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        ZPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        ZPoly::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        ZPoly::from_i64(&[0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Leading coefficient (zero for the zero polynomial).
    pub fn lc(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> ZPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        ZPoly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Divide out the content, keeping the sign of every coefficient.
    pub fn sign_preserving_primitive(&self) -> ZPoly {
        if self.is_zero() {
            return self.clone();
        }
        let g = self.content();
        ZPoly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn derivative(&self) -> ZPoly {
        ZPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn neg(&self) -> ZPoly {
        ZPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &ZPoly) -> ZPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        ZPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &ZPoly) -> ZPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        ZPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &ZPoly) -> ZPoly {
        if self.is_zero() || other.is_zero() {
            return ZPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ZPoly::new(out)
    }

    pub fn scale(&self, k: &BigInt) -> ZPoly {
        ZPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// `p(x) -> p(-x)`.
    pub fn reflect(&self) -> ZPoly {
        ZPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// `p(x) -> p(x^2)`.
    pub fn compose_square(&self) -> ZPoly {
        let mut out = vec![BigInt::zero(); 2 * self.coeffs.len()];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[2 * i] = c.clone();
        }
        ZPoly::new(out)
    }

    /// Polynomial whose roots are `(a r + b) / (c r + d)` for the roots `r`
    /// of `self`, i.e. `(-c y + a)^n p((d y - b) / (-c y + a))`. The matrix must
    /// be invertible. The result is primitive with positive leading coefficient.
    pub fn mobius(&self, a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) -> ZPoly {
        let n = self.degree();
        let num = ZPoly::new(vec![-b, d.clone()]);
        let den = ZPoly::new(vec![a.clone(), -c]);
        let mut num_pows = vec![ZPoly::constant(BigInt::one())];
        let mut den_pows = vec![ZPoly::constant(BigInt::one())];
        for i in 1..=n {
            num_pows.push(num_pows[i - 1].mul(&num));
            den_pows.push(den_pows[i - 1].mul(&den));
        }
        let mut acc = ZPoly::zero();
        for (i, coef) in self.coeffs.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            acc = acc.add(&num_pows[i].mul(&den_pows[n - i]).scale(coef));
        }
        acc.primitive()
    }

    /// Sign of `p(x)` at a rational point, exact.
    pub fn sign_at(&self, x: &BigRational) -> i8 {
        let v = self.eval_homogeneous(x);
        sign_of(&v)
    }

    /// `den^deg * p(num/den)` as an integer; same sign as `p(x)` since `den > 0`.
    fn eval_homogeneous(&self, x: &BigRational) -> BigInt {
        let n = x.numer();
        let d = x.denom();
        let mut acc = BigInt::zero();
        let mut dpow = BigInt::one();
        // Horner on the homogenized form sum c_i n^i d^(deg - i)
        for (k, c) in self.coeffs.iter().rev().enumerate() {
            if k == 0 {
                acc = c.clone();
            } else {
                dpow *= d;
                acc = acc * n + c * &dpow;
            }
        }
        acc
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + bigint_to_f64(c))
    }

    pub fn to_q(&self) -> QPoly {
        QPoly::new(
            self.coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    /// Exact quotient over Z, if `divisor` divides `self`.
    pub fn exact_div(&self, divisor: &ZPoly) -> Option<ZPoly> {
        let (q, r) = self.to_q().div_rem(&divisor.to_q());
        if !r.is_zero() {
            return None;
        }
        if q.coeffs().iter().all(|c| c.is_integer()) {
            Some(ZPoly::new(q.coeffs().iter().map(|c| c.to_integer()).collect()))
        } else {
            None
        }
    }

    /// Gcd over Q, returned primitive with positive leading coefficient.
    pub fn gcd(&self, other: &ZPoly) -> ZPoly {
        self.to_q().gcd(&other.to_q()).to_zpoly_primitive()
    }

    /// Product of the distinct irreducible factors (primitive).
    pub fn squarefree_part(&self) -> ZPoly {
        if self.degree() < 1 {
            return self.primitive();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            return self.primitive();
        }
        self.exact_div(&g)
            .map(|p| p.primitive())
            .unwrap_or_else(|| self.primitive())
    }

    /// Cauchy bound: every real root has absolute value strictly below it.
    pub fn root_bound(&self) -> BigRational {
        let lc = self.lc().abs();
        let max = self
            .coeffs
            .iter()
            .take(self.degree())
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero);
        BigRational::from_integer(BigInt::one()) + BigRational::new(max, lc)
    }
}

impl fmt::Display for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{}", mag)?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{}", i)?,
            }
        }
        Ok(())
    }
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPoly::new(vec![BigRational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn lc(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    pub fn scale(&self, k: &BigRational) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.lc();
        QPoly::new(self.coeffs.iter().map(|c| c / &lc).collect())
    }

    /// Euclidean division. Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &QPoly) -> (QPoly, QPoly) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let mut rem = self.coeffs.clone();
        let dd = divisor.degree();
        if self.coeffs.len() < divisor.coeffs.len() {
            return (QPoly::zero(), self.clone());
        }
        let lc_inv = divisor.lc().recip();
        let mut quot = vec![BigRational::zero(); self.coeffs.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &c * dc;
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (QPoly::new(quot), QPoly::new(rem))
    }

    pub fn rem(&self, divisor: &QPoly) -> QPoly {
        self.div_rem(divisor).1
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Extended gcd: returns `(g, s, t)` with `s a + t b = g`, `g` monic.
    pub fn xgcd(&self, other: &QPoly) -> (QPoly, QPoly, QPoly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (QPoly::one(), QPoly::zero());
        let (mut t0, mut t1) = (QPoly::zero(), QPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lc().recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Clear denominators and divide out the content; positive leading coefficient.
    pub fn to_zpoly_primitive(&self) -> ZPoly {
        self.to_zpoly_sign_preserving().primitive()
    }

    /// Multiply by a positive integer so all coefficients are integral and
    /// coprime, without changing signs.
    pub fn to_zpoly_sign_preserving(&self) -> ZPoly {
        let l = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        ZPoly::new(
            self.coeffs
                .iter()
                .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
                .collect(),
        )
        .sign_preserving_primitive()
    }
}

/// Sturm chain of a squarefree polynomial.
#[derive(Clone, Debug)]
pub struct Sturm {
    chain: Vec<ZPoly>,
}

impl Sturm {
    pub fn new(p: &ZPoly) -> Self {
        let mut chain = vec![p.sign_preserving_primitive()];
        if p.degree() == 0 {
            return Sturm { chain };
        }
        chain.push(p.derivative().sign_preserving_primitive());
        loop {
            let n = chain.len();
            let r = chain[n - 2].to_q().rem(&chain[n - 1].to_q());
            if r.is_zero() {
                break;
            }
            chain.push(r.to_zpoly_sign_preserving().neg());
        }
        Sturm { chain }
    }

    fn variations(&self, x: &BigRational) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for p in &self.chain {
            let s = p.sign_at(x);
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Number of distinct real roots in the closed interval `[lo, hi]`.
    pub fn count_closed(&self, lo: &BigRational, hi: &BigRational) -> usize {
        if lo > hi {
            return 0;
        }
        let half_open = self.variations(lo).saturating_sub(self.variations(hi));
        let at_lo = usize::from(self.chain[0].sign_at(lo) == 0);
        half_open + at_lo
    }

    /// Number of distinct real roots.
    pub fn count_all(&self) -> usize {
        let b = self.chain[0].root_bound();
        self.count_closed(&-b.clone(), &b)
    }
}

pub(crate) fn sign_of(v: &BigInt) -> i8 {
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

pub(crate) fn bigint_to_f64(v: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    v.to_f64().unwrap_or(if v.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

pub(crate) fn rat_to_f64(v: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    if let Some(x) = v.to_f64() {
        return x;
    }
    // Scale down huge numerators and denominators before dividing.
    let nb = v.numer().bits() as i64;
    let db = v.denom().bits() as i64;
    let shift = (nb.max(db) - 1000).max(0) as u64;
    let n = v.numer() >> shift;
    let d = v.denom() >> shift;
    bigint_to_f64(&n) / bigint_to_f64(&d)
}

#[cfg(test)]
pub(crate) fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_degree() {
        let p = ZPoly::from_i64(&[-2, 0, 1]);
        assert_eq!(p.degree(), 2);
        assert_eq!(p.to_string(), "x^2 - 2");
        assert_eq!(ZPoly::from_i64(&[1, -1, 0, 3]).to_string(), "3x^3 - x + 1");
    }

    #[test]
    fn sturm_counts_sqrt2_roots() {
        let p = ZPoly::from_i64(&[-2, 0, 1]);
        let s = Sturm::new(&p);
        assert_eq!(s.count_all(), 2);
        assert_eq!(s.count_closed(&rat(1, 1), &rat(2, 1)), 1);
        assert_eq!(s.count_closed(&rat(-2, 1), &rat(2, 1)), 2);
        assert_eq!(s.count_closed(&rat(0, 1), &rat(1, 1)), 0);
    }

    #[test]
    fn sturm_counts_root_at_endpoints() {
        // (x - 1)(x - 2)
        let p = ZPoly::from_i64(&[2, -3, 1]);
        let s = Sturm::new(&p);
        assert_eq!(s.count_closed(&rat(1, 1), &rat(2, 1)), 2);
        assert_eq!(s.count_closed(&rat(1, 1), &rat(3, 2)), 1);
        assert_eq!(s.count_closed(&rat(3, 2), &rat(2, 1)), 1);
    }

    #[test]
    fn mobius_inverts_roots() {
        // roots of x^2 - 2 under x -> 1/x are roots of 2x^2 - 1
        let p = ZPoly::from_i64(&[-2, 0, 1]);
        let one = BigInt::one();
        let zero = BigInt::zero();
        assert_eq!(p.mobius(&zero, &one, &one, &zero), ZPoly::from_i64(&[-1, 0, 2]));
        // x -> x + 5
        let five = BigInt::from(5);
        assert_eq!(p.mobius(&one, &five, &zero, &one), ZPoly::from_i64(&[23, -10, 1]));
    }

    #[test]
    fn squarefree_part_drops_repeats() {
        // (x-1)^2 (x+2)
        let p = ZPoly::from_i64(&[2, -3, 0, 1]);
        assert_eq!(p.squarefree_part(), ZPoly::from_i64(&[-2, 1, 1]));
    }

    #[test]
    fn xgcd_identity() {
        let a = ZPoly::from_i64(&[-2, 0, 1]).to_q();
        let b = ZPoly::from_i64(&[1, 1]).to_q();
        let (g, s, t) = a.xgcd(&b);
        assert_eq!(g, QPoly::one());
        assert_eq!(s.mul(&a).add(&t.mul(&b)), QPoly::one());
    }
}
