//! Factorization of integer polynomials into irreducibles over Q.
//!
//! Classic Zassenhaus: factor modulo a small prime (distinct-degree then
//! Cantor–Zassenhaus equal-degree splitting), Hensel-lift the factorization
//! to a prime power exceeding a coefficient bound, and recombine subsets of
//! lifted factors by trial division over Z.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::ZPoly;

/// Irreducible factors of `f` over Q, each primitive with positive leading
/// coefficient, without multiplicities. Constants are dropped.
pub fn irreducible_factors(f: &ZPoly) -> Vec<ZPoly> {
    if f.degree() == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut g = f.squarefree_part();
    if g.coeff(0).is_zero() {
        out.push(ZPoly::x());
        // squarefree, so x divides exactly once
        g = ZPoly::new(g.coeffs()[1..].to_vec());
    }
    if g.degree() > 0 {
        out.extend(factor_squarefree(&g));
    }
    out.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)));
    out
}

/// Factor a primitive squarefree polynomial with nonzero constant term.
fn factor_squarefree(f: &ZPoly) -> Vec<ZPoly> {
    let f = f.primitive();
    match f.degree() {
        0 => return Vec::new(),
        1 => return vec![f],
        2 => return factor_quadratic(&f),
        _ => {}
    }
    let n = f.degree();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_u64 ^ n as u64);

    // Try a few primes; keep the one with the fewest modular factors and use
    // the intersection of achievable factor degrees as an irreducibility test.
    let mut best: Option<(u64, Vec<(Vec<u64>, usize)>)> = None;
    let mut possible: Vec<bool> = vec![true; n + 1];
    let mut tried = 0;
    for p in PrimeIter::starting_at(1009) {
        if tried >= 5 {
            break;
        }
        let fp = Fp::new(p);
        if (f.lc().mod_floor(&BigInt::from(p))).is_zero() {
            continue;
        }
        let fbar = fp.monic(&fp.reduce(&f));
        let d = fp.derivative(&fbar);
        if fp.gcd(&fbar, &d).len() != 1 {
            continue;
        }
        tried += 1;
        let ddf = fp.distinct_degree(&fbar);
        let mut sums = vec![false; n + 1];
        sums[0] = true;
        let mut count = 0;
        for (g, d) in &ddf {
            for _ in 0..(g.len() - 1) / d {
                count += 1;
                for s in (0..=n).rev() {
                    if sums[s] && s + d <= n {
                        sums[s + d] = true;
                    }
                }
            }
        }
        for k in 0..=n {
            possible[k] &= sums[k];
        }
        if count == 1 || (1..n).all(|k| !possible[k]) {
            return vec![f];
        }
        let better = match &best {
            None => true,
            Some((_, b)) => count < b.iter().map(|(g, d)| (g.len() - 1) / d).sum::<usize>(),
        };
        if better {
            best = Some((p, ddf));
        }
    }
    let (p, ddf) = best.expect("no usable prime found");
    let fp = Fp::new(p);
    let mut local = Vec::new();
    for (g, d) in ddf {
        local.extend(fp.equal_degree(&g, d, &mut rng));
    }
    if local.len() == 1 {
        return vec![f];
    }

    // Coefficient bound for factors, times the leading coefficient.
    let norm_sq: BigInt = f.coeffs().iter().map(|c| c * c).sum();
    let norm = norm_sq.sqrt() + BigInt::one();
    let bound = BigInt::from(2) * f.lc().abs() * (BigInt::one() << n) * norm;
    let mut modulus = BigInt::from(p);
    let mut steps = 0;
    while modulus <= bound {
        modulus = &modulus * &modulus;
        steps += 1;
    }
    let lifted = hensel_lift(&f, &local, p, steps);
    recombine(&f, lifted, &modulus)
}

fn factor_quadratic(f: &ZPoly) -> Vec<ZPoly> {
    let (c, b, a) = (f.coeff(0), f.coeff(1), f.coeff(2));
    let disc = &b * &b - BigInt::from(4) * &a * &c;
    if disc.is_negative() {
        return vec![f.clone()];
    }
    let s = disc.sqrt();
    if &s * &s != disc {
        return vec![f.clone()];
    }
    // roots (-b +- s) / 2a
    let two_a = BigInt::from(2) * &a;
    let r1 = ZPoly::new(vec![-(-&b + &s), two_a.clone()]).primitive();
    let r2 = ZPoly::new(vec![-(-&b - &s), two_a]).primitive();
    vec![r1, r2]
}

fn recombine(f: &ZPoly, mut lifted: Vec<Vec<BigInt>>, modulus: &BigInt) -> Vec<ZPoly> {
    let mut rest = f.clone();
    let mut found = Vec::new();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut hit = None;
        for combo in Combinations::new(lifted.len(), size) {
            let lc = rest.lc();
            let mut cand = vec![lc.mod_floor(modulus)];
            for &i in &combo {
                cand = zp_mul(&cand, &lifted[i], modulus);
            }
            let cand = ZPoly::new(symmetric(&cand, modulus)).primitive();
            if cand.degree() == 0 {
                continue;
            }
            // cheap filter on constant terms
            if !rest.coeff(0).is_zero() && !(rest.coeff(0).mod_floor(&cand.coeff(0).abs())).is_zero() {
                continue;
            }
            if let Some(q) = rest.exact_div(&cand) {
                hit = Some((combo, cand, q));
                break;
            }
        }
        match hit {
            Some((combo, cand, q)) => {
                found.push(cand);
                rest = q.primitive();
                for &i in combo.iter().rev() {
                    lifted.remove(i);
                }
            }
            None => size += 1,
        }
    }
    if rest.degree() > 0 {
        found.push(rest.primitive());
    }
    found
}

fn symmetric(v: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let half = m >> 1;
    v.iter()
        .map(|c| {
            let c = c.mod_floor(m);
            if c > half {
                c - m
            } else {
                c
            }
        })
        .collect()
}

/// Lift `f = lc * prod(factors) mod p` to modulus `p^(2^steps)`; returns monic lifts.
fn hensel_lift(f: &ZPoly, factors: &[Vec<u64>], p: u64, steps: u32) -> Vec<Vec<BigInt>> {
    let fp = Fp::new(p);
    let mut target = BigInt::from(p);
    for _ in 0..steps {
        target = &target * &target;
    }
    let mut cur: Vec<BigInt> = zp_reduce(f.coeffs(), &target);
    let mut out = Vec::new();
    for i in 0..factors.len() - 1 {
        let h0 = factors[i].clone();
        let lc_p = (cur.last().unwrap().mod_floor(&BigInt::from(p))).to_u64().unwrap();
        let mut g0 = vec![lc_p];
        for fac in &factors[i + 1..] {
            g0 = fp.mul(&g0, fac);
        }
        let (gcd, s0, t0) = fp.xgcd(&g0, &h0);
        debug_assert_eq!(gcd, vec![1]);
        let mut m = BigInt::from(p);
        let mut g = to_big(&g0);
        let mut h = to_big(&h0);
        let mut s = to_big(&s0);
        let mut t = to_big(&t0);
        for _ in 0..steps {
            let m2 = &m * &m;
            let f_m2 = zp_reduce(&cur, &m2);
            (g, h, s, t) = hensel_step(&m2, &f_m2, &g, &h, &s, &t);
            m = m2;
        }
        out.push(h);
        cur = g;
    }
    let lc = cur.last().unwrap().clone();
    let inv = mod_inverse(&lc, &target);
    out.push(zp_reduce(
        &cur.iter().map(|c| c * &inv).collect::<Vec<_>>(),
        &target,
    ));
    out
}

/// One quadratic Hensel step: inputs valid mod `m`, outputs mod `m2 = m^2`.
fn hensel_step(
    m2: &BigInt,
    f: &[BigInt],
    g: &[BigInt],
    h: &[BigInt],
    s: &[BigInt],
    t: &[BigInt],
) -> (Vec<BigInt>, Vec<BigInt>, Vec<BigInt>, Vec<BigInt>) {
    let e = zp_sub(f, &zp_mul(g, h, m2), m2);
    let (q, r) = zp_divrem_monic(&zp_mul(s, &e, m2), h, m2);
    let g_new = zp_add(
        g,
        &zp_add(&zp_mul(t, &e, m2), &zp_mul(&q, g, m2), m2),
        m2,
    );
    let h_new = zp_add(h, &r, m2);
    let b = zp_sub(
        &zp_add(&zp_mul(s, &g_new, m2), &zp_mul(t, &h_new, m2), m2),
        &[BigInt::one()],
        m2,
    );
    let (c, d) = zp_divrem_monic(&zp_mul(s, &b, m2), &h_new, m2);
    let s_new = zp_sub(s, &d, m2);
    let t_new = zp_sub(
        t,
        &zp_add(&zp_mul(t, &b, m2), &zp_mul(&c, &g_new, m2), m2),
        m2,
    );
    (g_new, h_new, s_new, t_new)
}

fn to_big(v: &[u64]) -> Vec<BigInt> {
    v.iter().map(|&c| BigInt::from(c)).collect()
}

fn zp_trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn zp_reduce(v: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    zp_trim(v.iter().map(|c| c.mod_floor(m)).collect())
}

fn zp_add(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    zp_trim(
        (0..n)
            .map(|i| (a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).mod_floor(m))
            .collect(),
    )
}

fn zp_sub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    zp_trim(
        (0..n)
            .map(|i| (a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).mod_floor(m))
            .collect(),
    )
}

fn zp_mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    zp_reduce(&out, m)
}

/// Division by a monic polynomial modulo `m`.
fn zp_divrem_monic(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    let db = b.len() - 1;
    if a.len() < b.len() {
        return (Vec::new(), a.to_vec());
    }
    let mut rem = a.to_vec();
    let mut quot = vec![BigInt::zero(); a.len() - db];
    for i in (0..quot.len()).rev() {
        let c = rem[i + db].mod_floor(m);
        if c.is_zero() {
            continue;
        }
        for (j, bc) in b.iter().enumerate() {
            rem[i + j] = (&rem[i + j] - &c * bc).mod_floor(m);
        }
        quot[i] = c;
    }
    rem.truncate(db);
    (zp_trim(quot), zp_reduce(&rem, m))
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

/// Arithmetic in F_p[x] for a word-sized prime `p < 2^32`.
struct Fp {
    p: u64,
}

impl Fp {
    fn new(p: u64) -> Self {
        debug_assert!(p < (1 << 32));
        Fp { p }
    }

    fn reduce(&self, f: &ZPoly) -> Vec<u64> {
        let pb = BigInt::from(self.p);
        trim(
            f.coeffs()
                .iter()
                .map(|c| c.mod_floor(&pb).to_u64().unwrap())
                .collect(),
        )
    }

    fn add_s(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    fn sub_s(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn mul_s(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    fn pow_s(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul_s(r, a);
            }
            a = self.mul_s(a, a);
            e >>= 1;
        }
        r
    }

    fn inv_s(&self, a: u64) -> u64 {
        self.pow_s(a, self.p - 2)
    }

    fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| self.sub_s(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
                .collect(),
        )
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = self.add_s(out[i + j], self.mul_s(x, y));
            }
        }
        trim(out)
    }

    fn scale(&self, a: &[u64], k: u64) -> Vec<u64> {
        trim(a.iter().map(|&c| self.mul_s(c, k)).collect())
    }

    fn monic(&self, a: &[u64]) -> Vec<u64> {
        match a.last() {
            None => Vec::new(),
            Some(&lc) => self.scale(a, self.inv_s(lc)),
        }
    }

    fn derivative(&self, a: &[u64]) -> Vec<u64> {
        trim(
            a.iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| self.mul_s(c, i as u64 % self.p))
                .collect(),
        )
    }

    fn divrem(&self, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
        assert!(!b.is_empty());
        if a.len() < b.len() {
            return (Vec::new(), a.to_vec());
        }
        let db = b.len() - 1;
        let inv = self.inv_s(*b.last().unwrap());
        let mut rem = a.to_vec();
        let mut quot = vec![0u64; a.len() - db];
        for i in (0..quot.len()).rev() {
            let c = self.mul_s(rem[i + db], inv);
            if c == 0 {
                continue;
            }
            for (j, &bc) in b.iter().enumerate() {
                rem[i + j] = self.sub_s(rem[i + j], self.mul_s(c, bc));
            }
            quot[i] = c;
        }
        rem.truncate(db);
        (trim(quot), trim(rem))
    }

    fn rem(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.divrem(a, b).1
    }

    fn gcd(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    fn xgcd(&self, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
        let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
        let (mut s0, mut s1) = (vec![1u64], Vec::new());
        let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
        while !r1.is_empty() {
            let (q, r) = self.divrem(&r0, &r1);
            let s2 = self.sub(&s0, &self.mul(&q, &s1));
            let t2 = self.sub(&t0, &self.mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        let inv = self.inv_s(*r0.last().unwrap());
        (self.scale(&r0, inv), self.scale(&s0, inv), self.scale(&t0, inv))
    }

    fn powmod(&self, base: &[u64], exp: &BigUint, m: &[u64]) -> Vec<u64> {
        let mut result = vec![1u64];
        let base = self.rem(base, m);
        for i in (0..exp.bits()).rev() {
            result = self.rem(&self.mul(&result, &result), m);
            if exp.bit(i) {
                result = self.rem(&self.mul(&result, &base), m);
            }
        }
        result
    }

    /// Distinct-degree factorization of a monic squarefree polynomial.
    fn distinct_degree(&self, f: &[u64]) -> Vec<(Vec<u64>, usize)> {
        let mut out = Vec::new();
        let mut f = f.to_vec();
        let x = vec![0u64, 1];
        let mut h = self.rem(&x, &f);
        let p = BigUint::from(self.p);
        let mut i = 0;
        while f.len() - 1 >= 2 * (i + 1) {
            i += 1;
            h = self.powmod(&h, &p, &f);
            let g = self.gcd(&self.sub(&h, &x), &f);
            if g.len() > 1 {
                f = self.divrem(&f, &g).0;
                h = self.rem(&h, &f);
                out.push((g, i));
            }
        }
        if f.len() > 1 {
            let d = f.len() - 1;
            out.push((self.monic(&f), d));
        }
        out
    }

    /// Split a product of distinct monic irreducibles of degree `d`.
    fn equal_degree(&self, g: &[u64], d: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<u64>> {
        let n = g.len() - 1;
        if n == d {
            return vec![g.to_vec()];
        }
        let exp = (BigUint::from(self.p).pow(d as u32) - 1u32) >> 1;
        loop {
            let a: Vec<u64> = trim((0..n).map(|_| rng.gen_range(0..self.p)).collect());
            if a.len() < 2 {
                continue;
            }
            let b = self.sub(&self.powmod(&a, &exp, g), &[1]);
            let h = self.gcd(&b, g);
            let dh = h.len().saturating_sub(1);
            if dh > 0 && dh < n {
                let other = self.divrem(g, &h).0;
                let mut out = self.equal_degree(&h, d, rng);
                out.extend(self.equal_degree(&self.monic(&other), d, rng));
                return out;
            }
        }
    }
}

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

struct PrimeIter {
    next: u64,
}

impl PrimeIter {
    fn starting_at(n: u64) -> Self {
        PrimeIter { next: n }
    }
}

impl Iterator for PrimeIter {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        loop {
            let n = self.next;
            self.next += 1;
            if n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0) {
                return Some(n);
            }
        }
    }
}

/// Lexicographic k-subsets of `0..n`.
struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            idx: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn product(fs: &[ZPoly]) -> ZPoly {
        fs.iter()
            .fold(ZPoly::constant(BigInt::one()), |acc, f| acc.mul(f))
    }

    #[test]
    fn factors_product_of_quadratics() {
        let a = ZPoly::from_i64(&[-2, 0, 1]);
        let b = ZPoly::from_i64(&[-3, 0, 1]);
        let c = ZPoly::from_i64(&[1, 1, 1]);
        let f = product(&[a.clone(), b.clone(), c.clone()]);
        let fs = irreducible_factors(&f);
        assert_eq!(fs.len(), 3);
        assert_eq!(product(&fs), f);
        for g in [a, b, c] {
            assert!(fs.contains(&g));
        }
    }

    #[test]
    fn swinnerton_dyer_quartic_is_irreducible() {
        // minimal polynomial of sqrt(2) + sqrt(3); splits into quadratics mod every prime
        let f = ZPoly::from_i64(&[1, 0, -10, 0, 1]);
        assert_eq!(irreducible_factors(&f), vec![f]);
    }

    #[test]
    fn swinnerton_dyer_octic_is_irreducible() {
        // sqrt(2) + sqrt(3) + sqrt(5)
        let f = ZPoly::from_i64(&[576, 0, -960, 0, 352, 0, -40, 0, 1]);
        assert_eq!(irreducible_factors(&f), vec![f]);
    }

    #[test]
    fn non_monic_factors() {
        let a = ZPoly::from_i64(&[1, 0, 0, 6]); // 6x^3 + 1
        let b = ZPoly::from_i64(&[-5, 3, 0, 0, 2]); // 2x^4 + 3x - 5
        let f = a.mul(&b);
        let fs = irreducible_factors(&f);
        assert_eq!(product(&fs), f);
        // 2x^4 + 3x - 5 has the root x = 1
        assert!(fs.contains(&ZPoly::from_i64(&[-1, 1])));
    }

    #[test]
    fn repeated_and_zero_roots_are_reported_once() {
        let f = ZPoly::from_i64(&[0, 0, -2, 0, 1]); // x^2 (x^2 - 2)
        let fs = irreducible_factors(&f);
        assert_eq!(fs, vec![ZPoly::x(), ZPoly::from_i64(&[-2, 0, 1])]);
    }

    #[test]
    fn cyclotomic_split() {
        // x^12 - 1 = product of cyclotomic polynomials of orders 1,2,3,4,6,12
        let mut c = vec![0i64; 13];
        c[0] = -1;
        c[12] = 1;
        let fs = irreducible_factors(&ZPoly::from_i64(&c));
        assert_eq!(fs.len(), 6);
        assert_eq!(product(&fs), ZPoly::from_i64(&c));
    }
}
