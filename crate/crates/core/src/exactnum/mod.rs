//! Exact real algebraic numbers.
//!
//! A value is stored as its irreducible primitive minimal polynomial over Z
//! together with a canonical isolating interval: start from `[floor, floor+1]`
//! and bisect dyadically to the coarsest interval holding exactly one root.
//! Since the representation is canonical, structural equality is value
//! equality.

pub mod factor;
pub mod field;
pub mod linalg;
pub mod parse;
pub mod poly;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use factor::irreducible_factors;
pub use field::{common_field, common_field_with_cap, Coords, FieldContext, DEFAULT_DEGREE_CAP};
pub use parse::parse_algebraic;
pub use poly::{QPoly, Sturm, ZPoly};

use linalg::{krylov_minpoly, unit, QVec};
use poly::{rat_to_f64, sign_of};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root of a negative number")]
    NegativeSqrt,
    #[error("polynomial {0} has no roots")]
    Constant(String),
    #[error("interval [{lo}, {hi}] holds {count} real roots of {poly}, expected 1")]
    NotIsolating {
        poly: String,
        lo: String,
        hi: String,
        count: usize,
    },
    #[error("field degree {degree} exceeds cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("no primitive element found among the tried multipliers")]
    NoPrimitiveElement,
    #[error("value is not in the field")]
    NotInField,
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraicReal {
    minpoly: ZPoly,
    lo: BigRational,
    hi: BigRational,
}

#[derive(Clone, Copy)]
enum BinOp {
    Add,
    Mul,
}

impl AlgebraicReal {
    pub fn from_rational(r: &BigRational) -> Self {
        let minpoly = ZPoly::new(vec![-r.numer().clone(), r.denom().clone()]);
        let f = BigRational::from_integer(r.floor().to_integer());
        AlgebraicReal {
            minpoly,
            hi: &f + BigRational::one(),
            lo: f,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        Self::from_rational(&BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The unique root of `poly` in the closed interval `[lo, hi]`.
    pub fn from_root(poly: &ZPoly, lo: &BigRational, hi: &BigRational) -> Result<Self, NumError> {
        if poly.degree() == 0 {
            return Err(NumError::Constant(poly.to_string()));
        }
        let sf = poly.squarefree_part();
        let count = Sturm::new(&sf).count_closed(lo, hi);
        if count != 1 {
            return Err(NumError::NotIsolating {
                poly: poly.to_string(),
                lo: lo.to_string(),
                hi: hi.to_string(),
                count,
            });
        }
        Ok(Self::pick_factor(&sf, lo, hi))
    }

    /// Factor `f` (squarefree, exactly one root in `[lo, hi]`) and keep the
    /// factor owning that root.
    fn pick_factor(f: &ZPoly, lo: &BigRational, hi: &BigRational) -> Self {
        let factors = irreducible_factors(f);
        let g = factors
            .into_iter()
            .find(|g| Sturm::new(g).count_closed(lo, hi) > 0)
            .expect("isolated root belongs to some factor");
        Self::from_isolated(g, lo, hi)
    }

    /// Canonical form of the root of irreducible `g` isolated by `[lo, hi]`.
    pub(crate) fn from_isolated(g: ZPoly, lo: &BigRational, hi: &BigRational) -> Self {
        let g = g.primitive();
        if g.degree() == 1 {
            let r = BigRational::new(-g.coeff(0), g.coeff(1));
            return Self::from_rational(&r);
        }
        let (mut lo, mut hi) = (lo.clone(), hi.clone());
        let s_lo = g.sign_at(&lo);
        debug_assert!(s_lo != 0 && g.sign_at(&hi) == -s_lo);
        // integer part by bisection on integer points
        let two = BigRational::from_integer(BigInt::from(2));
        let floor = loop {
            let n = lo.floor();
            let n1 = &n + BigRational::one();
            if n1 >= hi {
                break n;
            }
            let mut m = ((&lo + &hi) / &two).floor();
            if m <= lo {
                m = n1;
            }
            if g.sign_at(&m) == s_lo {
                lo = m;
            } else {
                hi = m;
            }
        };
        let sturm = Sturm::new(&g);
        let mut a = floor.clone();
        let mut b = floor + BigRational::one();
        while sturm.count_closed(&a, &b) > 1 {
            let m = (&a + &b) / &two;
            let right = if m <= lo {
                true
            } else if m >= hi {
                false
            } else if g.sign_at(&m) == s_lo {
                lo = m.clone();
                true
            } else {
                hi = m.clone();
                false
            };
            if right {
                a = m;
            } else {
                b = m;
            }
        }
        AlgebraicReal {
            minpoly: g,
            lo: a,
            hi: b,
        }
    }

    pub fn minpoly(&self) -> &ZPoly {
        &self.minpoly
    }

    pub fn interval(&self) -> (&BigRational, &BigRational) {
        (&self.lo, &self.hi)
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree()
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_rational() {
            Some(BigRational::new(
                -self.minpoly.coeff(0),
                self.minpoly.coeff(1),
            ))
        } else {
            None
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational()
            .filter(BigRational::is_integer)
            .map(|r| r.to_integer())
    }

    pub fn is_zero(&self) -> bool {
        self.is_rational() && self.minpoly.coeff(0).is_zero()
    }

    /// An isolating interval of width at most `2^-bits`; degenerate for rationals.
    pub fn refine(&self, bits: u32) -> (BigRational, BigRational) {
        if let Some(r) = self.as_rational() {
            return (r.clone(), r);
        }
        let width = BigRational::new(BigInt::one(), BigInt::one() << bits);
        let (mut lo, mut hi) = (self.lo.clone(), self.hi.clone());
        let s_lo = self.minpoly.sign_at(&lo);
        let two = BigRational::from_integer(BigInt::from(2));
        while &hi - &lo > width {
            let m = (&lo + &hi) / &two;
            if self.minpoly.sign_at(&m) == s_lo {
                lo = m;
            } else {
                hi = m;
            }
        }
        (lo, hi)
    }

    /// Rational approximation within `2^-bits`.
    pub fn approx(&self, bits: u32) -> BigRational {
        let (lo, hi) = self.refine(bits);
        (lo + hi) / BigRational::from_integer(BigInt::from(2))
    }

    pub fn to_f64(&self) -> f64 {
        rat_to_f64(&self.approx(64))
    }

    pub fn sign(&self) -> i8 {
        if let Some(r) = self.as_rational() {
            return sign_of(r.numer());
        }
        if self.lo.is_negative() {
            -1
        } else {
            1
        }
    }

    pub fn floor(&self) -> BigInt {
        match self.as_rational() {
            Some(r) => r.floor().to_integer(),
            None => self.lo.floor().to_integer(),
        }
    }

    /// `(a x + b) / (c x + d)`.
    pub fn mobius(&self, a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) -> Result<Self, NumError> {
        if let Some(x) = self.as_rational() {
            let den = BigRational::from_integer(c.clone()) * &x + BigRational::from_integer(d.clone());
            if den.is_zero() {
                return Err(NumError::DivisionByZero);
            }
            let num = BigRational::from_integer(a.clone()) * &x + BigRational::from_integer(b.clone());
            return Ok(Self::from_rational(&(num / den)));
        }
        if c.is_zero() && d.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        let det = a * d - b * c;
        if det.is_zero() {
            // constant map
            let v = if c.is_zero() {
                BigRational::new(b.clone(), d.clone())
            } else {
                BigRational::new(a.clone(), c.clone())
            };
            return Ok(Self::from_rational(&v));
        }
        let (mut lo, mut hi) = (self.lo.clone(), self.hi.clone());
        if !c.is_zero() {
            let pole = BigRational::new(-d.clone(), c.clone());
            let mut bits = 1;
            while lo <= pole && pole <= hi {
                (lo, hi) = self.refine(bits);
                bits += 1;
            }
        }
        let map = |x: &BigRational| {
            (BigRational::from_integer(a.clone()) * x + BigRational::from_integer(b.clone()))
                / (BigRational::from_integer(c.clone()) * x + BigRational::from_integer(d.clone()))
        };
        let (u, v) = (map(&lo), map(&hi));
        let (u, v) = if u <= v { (u, v) } else { (v, u) };
        Ok(Self::from_isolated(self.minpoly.mobius(a, b, c, d), &u, &v))
    }

    fn mobius_q(&self, a: &BigRational, b: &BigRational, c: &BigRational, d: &BigRational) -> Result<Self, NumError> {
        let l = [a, b, c, d]
            .iter()
            .fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        let z = |x: &BigRational| (x * BigRational::from_integer(l.clone())).to_integer();
        self.mobius(&z(a), &z(b), &z(c), &z(d))
    }

    pub fn neg(&self) -> Self {
        if let Some(r) = self.as_rational() {
            return Self::from_rational(&-r);
        }
        Self::from_isolated(self.minpoly.reflect(), &-self.hi.clone(), &-self.lo.clone())
    }

    pub fn add_rational(&self, r: &BigRational) -> Self {
        let one = BigRational::one();
        let zero = BigRational::zero();
        self.mobius_q(&one, r, &zero, &one).expect("translation is total")
    }

    pub fn mul_rational(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        let one = BigRational::one();
        let zero = BigRational::zero();
        self.mobius_q(r, &zero, &zero, &one).expect("scaling is total")
    }

    pub fn recip(&self) -> Result<Self, NumError> {
        if self.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        self.mobius(&BigInt::zero(), &BigInt::one(), &BigInt::one(), &BigInt::zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        if let Some(r) = other.as_rational() {
            return self.add_rational(&r);
        }
        if let Some(r) = self.as_rational() {
            return other.add_rational(&r);
        }
        self.binop(other, BinOp::Add)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if let Some(r) = other.as_rational() {
            return self.mul_rational(&r);
        }
        if let Some(r) = self.as_rational() {
            return other.mul_rational(&r);
        }
        self.binop(other, BinOp::Mul)
    }

    pub fn div(&self, other: &Self) -> Result<Self, NumError> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn sqrt(&self) -> Result<Self, NumError> {
        match self.sign() {
            -1 => return Err(NumError::NegativeSqrt),
            0 => return Ok(Self::zero()),
            _ => {}
        }
        if let Some(r) = self.as_rational() {
            let (n, d) = (r.numer(), r.denom());
            let (sn, sd) = (n.sqrt(), d.sqrt());
            if &(&sn * &sn) == n && &(&sd * &sd) == d {
                return Ok(Self::from_rational(&BigRational::new(sn, sd)));
            }
        }
        let f = self.minpoly.compose_square().squarefree_part();
        let sturm = Sturm::new(&f);
        let mut bits = 4;
        loop {
            let (lo, hi) = self.refine(bits);
            let lo = if lo.is_negative() { BigRational::zero() } else { lo };
            let a = sqrt_bound(&lo, bits, false);
            let b = sqrt_bound(&hi, bits, true);
            if sturm.count_closed(&a, &b) == 1 {
                return Ok(Self::pick_factor(&f, &a, &b));
            }
            bits += 4;
        }
    }

    fn binop(&self, other: &Self, op: BinOp) -> Self {
        let f = tensor_minpoly(&self.minpoly, &other.minpoly, op);
        let sturm = Sturm::new(&f);
        let mut bits = 4;
        loop {
            let a = self.refine(bits);
            let b = other.refine(bits);
            let (lo, hi) = match op {
                BinOp::Add => (&a.0 + &b.0, &a.1 + &b.1),
                BinOp::Mul => interval_mul(&a, &b),
            };
            if sturm.count_closed(&lo, &hi) == 1 {
                return Self::pick_factor(&f, &lo, &hi);
            }
            bits += 4;
        }
    }

    /// Exact comparison by refining both intervals until they separate.
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        if let (Some(a), Some(b)) = (self.as_rational(), other.as_rational()) {
            return a.cmp(&b);
        }
        let mut bits = 2;
        loop {
            let a = self.refine(bits);
            let b = other.refine(bits);
            if a.1 < b.0 {
                return Ordering::Less;
            }
            if b.1 < a.0 {
                return Ordering::Greater;
            }
            bits += 4;
        }
    }

    /// Decimal approximation with `digits` fractional digits (truncated toward -inf).
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = BigInt::from(10).pow(digits as u32);
        let bits = (digits as f64 * 3.33) as u32 + 8;
        let v = self.approx(bits) * BigRational::from_integer(scale.clone());
        let n = v.floor().to_integer();
        let neg = n.is_negative();
        let (ip, fp) = n.abs().div_rem(&scale);
        let fs = format!("{:0>width$}", fp, width = digits);
        format!("{}{}.{}", if neg { "-" } else { "" }, ip, fs)
    }
}

impl PartialOrd for AlgebraicReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AlgebraicReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_value(other)
    }
}

impl fmt::Display for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(r) => write!(f, "{}", r),
            None => write!(f, "root({}; {}, {})", self.minpoly, self.lo, self.hi),
        }
    }
}

fn sqrt_bound(t: &BigRational, bits: u32, upper: bool) -> BigRational {
    // sqrt(n/d) = sqrt(n d) / d
    let nd = t.numer() * t.denom();
    let scaled: BigInt = (nd << (2 * bits)).sqrt();
    let s = if upper { scaled + BigInt::one() } else { scaled };
    BigRational::new(s, t.denom() << bits)
}

pub(crate) fn interval_mul(
    a: &(BigRational, BigRational),
    b: &(BigRational, BigRational),
) -> (BigRational, BigRational) {
    let p = [&a.0 * &b.0, &a.0 * &b.1, &a.1 * &b.0, &a.1 * &b.1];
    let lo = p.iter().min().unwrap().clone();
    let hi = p.iter().max().unwrap().clone();
    (lo, hi)
}

/// Interval enclosure of `sum c_i x^i` for `x` in `[lo, hi]`.
pub(crate) fn eval_interval(
    coeffs: &[BigRational],
    x: &(BigRational, BigRational),
) -> (BigRational, BigRational) {
    let mut acc = (BigRational::zero(), BigRational::zero());
    for c in coeffs.iter().rev() {
        let m = interval_mul(&acc, x);
        acc = (m.0 + c, m.1 + c);
    }
    acc
}

/// Multiplication by the generator on `Q[x]/(p)`, coordinates ascending.
fn mul_gen(v: &[BigRational], p: &ZPoly) -> QVec {
    let m = p.degree();
    let top = v[m - 1].clone();
    let mut out = Vec::with_capacity(m);
    out.push(BigRational::zero());
    out.extend_from_slice(&v[..m - 1]);
    if !top.is_zero() {
        let lc = BigRational::from_integer(p.lc());
        for (i, o) in out.iter_mut().enumerate() {
            let c = p.coeff(i);
            if !c.is_zero() {
                *o -= &top * BigRational::from_integer(c) / &lc;
            }
        }
    }
    out
}

/// Minimal polynomial of `x + y` or `x y` in `Q[x]/(p) (x) Q[y]/(q)`.
fn tensor_minpoly(p: &ZPoly, q: &ZPoly, op: BinOp) -> ZPoly {
    let (m, n) = (p.degree(), q.degree());
    let mul_x = |v: &[BigRational]| -> QVec {
        // index i*n + j: apply along i for each fixed j
        let mut out = vec![BigRational::zero(); m * n];
        for j in 0..n {
            let col: QVec = (0..m).map(|i| v[i * n + j].clone()).collect();
            for (i, c) in mul_gen(&col, p).into_iter().enumerate() {
                out[i * n + j] = c;
            }
        }
        out
    };
    let mul_y = |v: &[BigRational]| -> QVec {
        let mut out = Vec::with_capacity(m * n);
        for i in 0..m {
            out.extend(mul_gen(&v[i * n..(i + 1) * n], q));
        }
        out
    };
    let apply = |v: &[BigRational]| -> QVec {
        match op {
            BinOp::Add => mul_x(v)
                .into_iter()
                .zip(mul_y(v))
                .map(|(a, b)| a + b)
                .collect(),
            BinOp::Mul => mul_x(&mul_y(v)),
        }
    };
    krylov_minpoly(unit(m * n, 0), apply).to_zpoly_primitive()
}
