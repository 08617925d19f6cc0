//! Number fields `Q(theta)` with a chosen real embedding, and the
//! primitive-element construction that places several algebraic reals in a
//! common field.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::linalg::{self, krylov_minpoly, unit, QMat};
use super::poly::{sign_of, QPoly, Sturm, ZPoly};
use super::{eval_interval, AlgebraicReal, NumError};

/// Coordinates in the power basis `1, theta, ..., theta^(d-1)`.
pub type Coords = Vec<BigRational>;

pub const DEFAULT_DEGREE_CAP: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldContext {
    theta: AlgebraicReal,
    modulus: QPoly,
}

impl FieldContext {
    /// `Q` itself, as `Q(0)` with defining polynomial `x`.
    pub fn rational() -> Self {
        Self::from_generator(AlgebraicReal::zero())
    }

    pub fn from_generator(theta: AlgebraicReal) -> Self {
        let modulus = theta.minpoly().to_q().monic();
        FieldContext { theta, modulus }
    }

    pub fn degree(&self) -> usize {
        self.theta.degree()
    }

    pub fn minpoly(&self) -> &ZPoly {
        self.theta.minpoly()
    }

    pub fn theta(&self) -> &AlgebraicReal {
        &self.theta
    }

    pub fn zero(&self) -> Coords {
        vec![BigRational::zero(); self.degree()]
    }

    pub fn one(&self) -> Coords {
        self.from_rational(&BigRational::one())
    }

    pub fn from_rational(&self, r: &BigRational) -> Coords {
        let mut v = self.zero();
        v[0] = r.clone();
        v
    }

    pub fn from_int(&self, n: i64) -> Coords {
        self.from_rational(&BigRational::from_integer(BigInt::from(n)))
    }

    /// The generator's own coordinates.
    pub fn gen(&self) -> Coords {
        self.reduce(&QPoly::new(vec![BigRational::zero(), BigRational::one()]))
    }

    pub fn reduce(&self, p: &QPoly) -> Coords {
        let r = p.rem(&self.modulus);
        (0..self.degree()).map(|i| r.coeff(i)).collect()
    }

    fn poly(&self, a: &[BigRational]) -> QPoly {
        QPoly::new(a.to_vec())
    }

    pub fn add(&self, a: &[BigRational], b: &[BigRational]) -> Coords {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(&self, a: &[BigRational], b: &[BigRational]) -> Coords {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn neg(&self, a: &[BigRational]) -> Coords {
        a.iter().map(|x| -x).collect()
    }

    pub fn scale(&self, a: &[BigRational], k: &BigRational) -> Coords {
        a.iter().map(|x| x * k).collect()
    }

    pub fn mul(&self, a: &[BigRational], b: &[BigRational]) -> Coords {
        self.reduce(&self.poly(a).mul(&self.poly(b)))
    }

    pub fn is_zero(&self, a: &[BigRational]) -> bool {
        a.iter().all(Zero::is_zero)
    }

    pub fn inv(&self, a: &[BigRational]) -> Result<Coords, NumError> {
        if self.is_zero(a) {
            return Err(NumError::DivisionByZero);
        }
        let (g, s, _) = self.poly(a).xgcd(&self.modulus);
        debug_assert_eq!(g, QPoly::one());
        Ok(self.reduce(&s))
    }

    pub fn div(&self, a: &[BigRational], b: &[BigRational]) -> Result<Coords, NumError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// The rational value, if the element lies in `Q`.
    pub fn as_rational(&self, a: &[BigRational]) -> Option<BigRational> {
        if a[1..].iter().all(Zero::is_zero) {
            Some(a[0].clone())
        } else {
            None
        }
    }

    /// Matrix of multiplication by `a`: column `j` holds `a * theta^j`.
    pub fn regular_matrix(&self, a: &[BigRational]) -> QMat {
        let d = self.degree();
        let cols: Vec<Coords> = (0..d).map(|j| self.mul(a, &unit(d, j))).collect();
        linalg::transpose(&cols)
    }

    /// Enclosure of the element's value from an enclosure of theta at `bits`.
    fn enclose(&self, a: &[BigRational], bits: u32) -> (BigRational, BigRational) {
        eval_interval(a, &self.theta.refine(bits))
    }

    pub fn sign(&self, a: &[BigRational]) -> i8 {
        if let Some(r) = self.as_rational(a) {
            return sign_of(r.numer());
        }
        let mut bits = 8;
        loop {
            let (lo, hi) = self.enclose(a, bits);
            if lo > BigRational::zero() {
                return 1;
            }
            if hi < BigRational::zero() {
                return -1;
            }
            bits += 8;
        }
    }

    pub fn to_algebraic(&self, a: &[BigRational]) -> AlgebraicReal {
        if let Some(r) = self.as_rational(a) {
            return AlgebraicReal::from_rational(&r);
        }
        let d = self.degree();
        let m = krylov_minpoly(unit(d, 0), |v| self.mul(a, v)).to_zpoly_primitive();
        let sturm = Sturm::new(&m);
        let mut bits = 8;
        loop {
            let (lo, hi) = self.enclose(a, bits);
            if sturm.count_closed(&lo, &hi) == 1 {
                return AlgebraicReal::from_isolated(m, &lo, &hi);
            }
            bits += 8;
        }
    }

    pub fn floor(&self, a: &[BigRational]) -> BigInt {
        self.to_algebraic(a).floor()
    }

    pub fn to_f64(&self, a: &[BigRational]) -> f64 {
        let t = self.theta.to_f64();
        a.iter()
            .rev()
            .fold(0.0, |acc, c| acc * t + super::poly::rat_to_f64(c))
    }

    /// Evaluate coordinates at a rational approximation of theta.
    pub fn approx(&self, a: &[BigRational], bits: u32) -> BigRational {
        QPoly::new(a.to_vec()).eval(&self.theta.approx(bits))
    }

    /// Coordinates of `x` if it lies in this field.
    pub fn express(&self, x: &AlgebraicReal) -> Result<Coords, NumError> {
        if let Some(r) = x.as_rational() {
            return Ok(self.from_rational(&r));
        }
        if self.degree() % x.degree() != 0 {
            return Err(NumError::NotInField);
        }
        let mut ctx = self.clone();
        let mut regs = Vec::new();
        let c = ctx.adjoin(&mut regs, x, self.degree())
            .map_err(|_| NumError::NotInField)?;
        if ctx.degree() == self.degree() {
            Ok(c)
        } else {
            Err(NumError::NotInField)
        }
    }

    /// Multiplication-table check: theta's coordinates raised through the
    /// table agree with direct reduction of `x^k`.
    pub fn check_table(&self) -> bool {
        let d = self.degree();
        let t = self.gen();
        let mut p = self.one();
        for k in 0..=2 * d {
            let mut mono = vec![BigRational::zero(); k + 1];
            mono[k] = BigRational::one();
            if self.reduce(&QPoly::new(mono)) != p {
                return false;
            }
            p = self.mul(&p, &t);
        }
        true
    }

    /// Extend the field by `beta`, rewriting `regs` into the new basis.
    /// Returns the coordinates of `beta`.
    fn adjoin(&mut self, regs: &mut [Coords], beta: &AlgebraicReal, cap: usize) -> Result<Coords, NumError> {
        if let Some(r) = beta.as_rational() {
            return Ok(self.from_rational(&r));
        }
        if self.degree() == 1 {
            if beta.degree() > cap {
                return Err(NumError::DegreeCap { degree: beta.degree(), cap });
            }
            let next = FieldContext::from_generator(beta.clone());
            for r in regs.iter_mut() {
                *r = next.from_rational(&r[0]);
            }
            *self = next;
            return Ok(self.gen());
        }
        let d = self.degree();
        for k in MULTIPLIERS {
            let kq = BigRational::from_integer(BigInt::from(k));
            let theta_new = self.theta.add(&beta.mul_rational(&kq));
            let m = theta_new.degree();
            if m > cap {
                return Err(NumError::DegreeCap { degree: m, cap });
            }
            if m < d.max(beta.degree()) {
                continue;
            }
            let next = FieldContext::from_generator(theta_new);
            // beta is the common root of g(y) and f(theta' - k y)
            let g: Vec<Coords> = beta
                .minpoly()
                .coeffs()
                .iter()
                .map(|c| next.from_rational(&BigRational::from_integer(c.clone())))
                .collect();
            let lin = vec![next.gen(), next.from_rational(&-kq.clone())];
            let mut h: Vec<Coords> = Vec::new();
            for c in self.minpoly().coeffs().iter().rev() {
                h = kpoly_mul(&next, &h, &lin);
                let cc = next.from_rational(&BigRational::from_integer(c.clone()));
                if h.is_empty() {
                    h.push(cc);
                } else {
                    h[0] = next.add(&h[0], &cc);
                }
                kpoly_trim(&next, &mut h);
            }
            let gcd = kpoly_gcd(&next, g, h);
            if gcd.len() != 2 {
                continue;
            }
            let beta_c = next.neg(&gcd[0]);
            let theta_old = next.sub(&next.gen(), &next.scale(&beta_c, &kq));
            // powers of the old generator in the new basis
            let mut pows = vec![next.one()];
            for _ in 1..d {
                let last = pows.last().unwrap();
                pows.push(next.mul(last, &theta_old));
            }
            if m == d {
                // same field: keep the old basis
                let a = linalg::transpose(&pows);
                let c = linalg::solve(&a, &beta_c).expect("old basis spans the field");
                return Ok(c);
            }
            let convert = |old: &Coords| -> Coords {
                let mut acc = next.zero();
                for (c, p) in old.iter().zip(&pows) {
                    if !c.is_zero() {
                        acc = next.add(&acc, &next.scale(p, c));
                    }
                }
                acc
            };
            for r in regs.iter_mut() {
                *r = convert(r);
            }
            *self = next;
            return Ok(beta_c);
        }
        Err(NumError::NoPrimitiveElement)
    }
}

const MULTIPLIERS: [i64; 20] = [1, -1, 2, -2, 3, -3, 4, -4, 5, -5, 6, -6, 7, -7, 8, -8, 9, -9, 10, -10];

/// Field containing every input, with the coordinates of each input.
pub fn common_field(elems: &[AlgebraicReal]) -> Result<(FieldContext, Vec<Coords>), NumError> {
    common_field_with_cap(elems, DEFAULT_DEGREE_CAP)
}

pub fn common_field_with_cap(
    elems: &[AlgebraicReal],
    cap: usize,
) -> Result<(FieldContext, Vec<Coords>), NumError> {
    let mut ctx = FieldContext::rational();
    let mut regs: Vec<Coords> = Vec::with_capacity(elems.len());
    for (i, e) in elems.iter().enumerate() {
        let c = if let Some(j) = elems[..i].iter().position(|x| x == e) {
            regs[j].clone()
        } else {
            ctx.adjoin(&mut regs, e, cap)?
        };
        regs.push(c);
    }
    Ok((ctx, regs))
}

// Polynomials over the field, coefficients ascending.

fn kpoly_trim(ctx: &FieldContext, p: &mut Vec<Coords>) {
    while p.last().is_some_and(|c| ctx.is_zero(c)) {
        p.pop();
    }
}

fn kpoly_mul(ctx: &FieldContext, a: &[Coords], b: &[Coords]) -> Vec<Coords> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![ctx.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = ctx.add(&out[i + j], &ctx.mul(x, y));
        }
    }
    out
}

fn kpoly_rem(ctx: &FieldContext, a: &[Coords], b: &[Coords]) -> Vec<Coords> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let inv = ctx.inv(&b[db]).expect("nonzero leading coefficient");
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let f = ctx.mul(r.last().unwrap(), &inv);
        for (j, bc) in b.iter().enumerate() {
            r[shift + j] = ctx.sub(&r[shift + j], &ctx.mul(&f, bc));
        }
        r.pop();
        kpoly_trim(ctx, &mut r);
    }
    r
}

/// Monic gcd.
fn kpoly_gcd(ctx: &FieldContext, mut a: Vec<Coords>, mut b: Vec<Coords>) -> Vec<Coords> {
    kpoly_trim(ctx, &mut a);
    kpoly_trim(ctx, &mut b);
    while !b.is_empty() {
        let r = kpoly_rem(ctx, &a, &b);
        a = b;
        b = r;
    }
    let inv = ctx.inv(a.last().unwrap()).expect("nonzero");
    a.iter().map(|c| ctx.mul(c, &inv)).collect()
}
