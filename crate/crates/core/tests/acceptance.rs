//! Acceptance suite. Runs without the libtest harness so that every criterion
//! prints exactly one PASS/FAIL line.

use std::collections::{BTreeMap, HashSet};
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use qhm_core::bimodule::{verify_all, GeometrySpec};
use qhm_core::cf2::{gl2_act, gl3_act, serret_equivalent, Gl2, Gl3, SerretResult};
use qhm_core::classify::{
    check_witness, decide_equivalence, decision_to_json, reduce_dif, Budget, Certificate, Decision, QhmParams,
    Verdict,
};
use qhm_core::exactnum::{parse_algebraic, AlgebraicReal, FieldContext};
use qhm_core::lattice::{trace_group, RatLattice};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

type Pair = (QhmParams, QhmParams, Decision);

fn alg(s: &str) -> AlgebraicReal {
    parse_algebraic(s).unwrap_or_else(|e| panic!("{}: {}", s, e))
}

const SQUAREFREE: [i64; 7] = [2, 3, 5, 6, 7, 10, 11];

fn surd_in(rng: &mut ChaCha8Rng, d: i64, max_den: i64) -> AlgebraicReal {
    let a = rng.gen_range(-5..=5);
    let b = loop {
        let b = rng.gen_range(-5..=5);
        if b != 0 {
            break b;
        }
    };
    let den = rng.gen_range(1..=max_den);
    alg(&format!("({} + ({})*sqrt({}))/{}", a, b, d, den))
}

fn surd(rng: &mut ChaCha8Rng, max_den: i64) -> AlgebraicReal {
    let d = SQUAREFREE[rng.gen_range(0..SQUAREFREE.len())];
    surd_in(rng, d, max_den)
}

fn rational(rng: &mut ChaCha8Rng) -> AlgebraicReal {
    AlgebraicReal::from_frac(rng.gen_range(-20..=20), rng.gen_range(1..=12))
}

fn witness_ok(d: &Decision) -> Result<(), String> {
    let text = serde_json::to_string(&decision_to_json(d)).map_err(|e| e.to_string())?;
    let back: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    check_witness(&back).map(|_| ()).map_err(|e| e.to_string())
}

fn equivalent_verified(d: &Decision) -> Result<(), String> {
    if !matches!(d.verdict, Verdict::Equivalent { .. }) {
        return Err(format!("verdict {}", d.verdict.kind()));
    }
    witness_ok(d)
}

fn fmu_suite(rng: &mut ChaCha8Rng, pool: &mut Vec<Pair>) -> Outcome {
    let start = Instant::now();
    let budget = Budget::default();
    let mut bad = Vec::new();
    let mut ranks = BTreeMap::new();
    for i in 0..100 {
        let c = rng.gen_range(1..=3u64);
        let mu = surd(rng, 10);
        let nu = surd(rng, 10);
        let two_mu = mu.mul_rational(&BigRational::from_integer(2.into()));
        let mu2 = two_mu.mul_rational(&BigRational::from_integer(2.into())).recip().unwrap();
        let nu2 = nu.div(&two_mu).unwrap();
        let p = QhmParams::new(c, mu, nu).unwrap();
        let p2 = QhmParams::new(c, mu2, nu2).unwrap();
        let d = decide_equivalence(&p, &p2, &budget);
        *ranks.entry(d.rank().unwrap_or(0)).or_insert(0) += 1;
        if let Err(e) = equivalent_verified(&d) {
            bad.push(format!("#{} ({}, {}, {}): {}", i, c, p.mu, p.nu, e));
        }
        pool.push((p, p2, d));
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = bad.is_empty() && secs < 60.0;
    outcome(
        pass,
        format!("{}/100 verified, ranks {:?}, {:.1} s (limit 60 s){}", 100 - bad.len(), ranks, secs, first(&bad)),
    )
}

fn first(bad: &[String]) -> String {
    bad.first().map(|b| format!("; first failure {}", b)).unwrap_or_default()
}

fn random_gl2(rng: &mut ChaCha8Rng) -> [[i64; 2]; 2] {
    loop {
        let m: [[i64; 2]; 2] =
            [[rng.gen_range(-2..=2), rng.gen_range(-2..=2)], [rng.gen_range(-2..=2), rng.gen_range(-2..=2)]];
        if (m[0][0] * m[1][1] - m[0][1] * m[1][0]).abs() == 1 {
            return m;
        }
    }
}

fn random_block(rng: &mut ChaCha8Rng) -> Gl3 {
    let m = random_gl2(rng);
    let rows = match rng.gen_range(0..3) {
        0 => [
            [m[0][0], m[0][1], rng.gen_range(-2..=2)],
            [m[1][0], m[1][1], rng.gen_range(-2..=2)],
            [0, 0, 1],
        ],
        1 => [[m[0][0], 0, m[0][1]], [0, 1, 0], [m[1][0], 0, m[1][1]]],
        _ => [[m[0][0], m[0][1], 0], [m[1][0], m[1][1], 0], [0, 0, 1]],
    };
    Gl3::from_i64(rows).unwrap()
}

const CUBICS: [&str; 3] = ["root(x^3 - 2; 1, 2)", "root(x^3 - 3*x - 1; 1, 2)", "root(x^3 - x - 1; 1, 2)"];

fn cubic_element(rng: &mut ChaCha8Rng, theta: &AlgebraicReal) -> AlgebraicReal {
    let sq = theta.mul(theta);
    let c: Vec<i64> = (0..3).map(|_| rng.gen_range(-3..=3)).collect();
    let den = BigRational::new(1.into(), BigInt::from(rng.gen_range(1..=6)));
    AlgebraicReal::from_int(c[0])
        .add(&theta.mul_rational(&BigRational::from_integer(c[1].into())))
        .add(&sq.mul_rational(&BigRational::from_integer(c[2].into())))
        .mul_rational(&den)
}

fn rank3_params(rng: &mut ChaCha8Rng) -> (AlgebraicReal, AlgebraicReal) {
    loop {
        let (mu, nu) = if rng.gen_bool(0.5) {
            let i = rng.gen_range(0..SQUAREFREE.len());
            let j = (i + rng.gen_range(1..SQUAREFREE.len())) % SQUAREFREE.len();
            (surd_in(rng, SQUAREFREE[i], 10), surd_in(rng, SQUAREFREE[j], 10))
        } else {
            let theta = alg(CUBICS[rng.gen_range(0..CUBICS.len())]);
            (cubic_element(rng, &theta), cubic_element(rng, &theta))
        };
        if trace_group(&mu, &nu).map(|g| g.rank()) == Ok(3) {
            return (mu, nu);
        }
    }
}

fn gl3_suite(rng: &mut ChaCha8Rng, pool: &mut Vec<Pair>) -> Outcome {
    let start = Instant::now();
    let budget = Budget::default();
    let mut bad = Vec::new();
    // dim S -> (equivalent, unknown)
    let mut by_dim: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for i in 0..50 {
        let (mu, nu) = rank3_params(rng);
        let len = rng.gen_range(1..=4);
        let w = (0..len).fold(Gl3::identity(), |acc, _| acc.mul(&random_block(rng)));
        let (mu2, nu2) = gl3_act(&w, &mu, &nu).expect("independent 1, mu, nu keep the denominator nonzero");
        let c = rng.gen_range(1..=3u64);
        let p = QhmParams::new(c, mu, nu).unwrap();
        let p2 = QhmParams::new(c, mu2, nu2).unwrap();
        let d = decide_equivalence(&p, &p2, &budget);
        let dim = d.scaling_dim.unwrap_or(usize::MAX);
        let slot = by_dim.entry(dim).or_insert((0, 0));
        match &d.verdict {
            Verdict::Equivalent { gl3, .. } => {
                slot.0 += 1;
                match gl3 {
                    Some(m) => match gl3_act(m, &p.mu, &p.nu) {
                        Ok(img) if img == (p2.mu.clone(), p2.nu.clone()) => {}
                        _ => bad.push(format!("#{}: gl3 witness does not map the pair", i)),
                    },
                    None => bad.push(format!("#{}: no gl3 witness", i)),
                }
                if let Err(e) = witness_ok(&d) {
                    bad.push(format!("#{}: {}", i, e));
                }
            }
            Verdict::Unknown { reason } => {
                slot.1 += 1;
                if dim <= 1 {
                    bad.push(format!("#{}: Unknown with dim S = {}: {}", i, dim, reason));
                }
            }
            Verdict::NotEquivalent(c) => bad.push(format!("#{}: NotEquivalent {}", i, c.kind())),
        }
        pool.push((p, p2, d));
    }
    let rates: Vec<String> = by_dim
        .iter()
        .map(|(dim, (eq, unk))| format!("dim {}: {} equivalent, {} unknown ({:.0}%)", dim, eq, unk, 100.0 * *unk as f64 / (*eq + *unk) as f64))
        .collect();
    outcome(
        bad.is_empty(),
        format!("{}; {:.1} s{}", rates.join(", "), start.elapsed().as_secs_f64(), first(&bad)),
    )
}

fn random_params(rng: &mut ChaCha8Rng, c: u64) -> QhmParams {
    let (mu, nu) = match rng.gen_range(0..3) {
        0 => (rational(rng), rational(rng)),
        1 => (rational(rng), surd(rng, 10)),
        _ => rank3_params(rng),
    };
    QhmParams::new(c, mu, nu).unwrap()
}

fn c_obstruction(rng: &mut ChaCha8Rng, pool: &mut Vec<Pair>) -> Outcome {
    let budget = Budget::default();
    let mut bad = Vec::new();
    for i in 0..50 {
        let c = rng.gen_range(1..=6u64);
        let c2 = loop {
            let c2 = rng.gen_range(1..=6u64);
            if c2 != c {
                break c2;
            }
        };
        let p = random_params(rng, c);
        let p2 = random_params(rng, c2);
        let d = decide_equivalence(&p, &p2, &budget);
        match &d.verdict {
            Verdict::NotEquivalent(Certificate::CMismatch { c: cs }) if cs[0] == c && cs[1] == c2 => {
                if let Err(e) = witness_ok(&d) {
                    bad.push(format!("#{}: {}", i, e));
                }
            }
            other => bad.push(format!("#{}: {}", i, other.kind())),
        }
        pool.push((p, p2, d));
    }
    outcome(bad.is_empty(), format!("{}/50 CMismatch{}", 50 - bad.len(), first(&bad)))
}

/// Generator of Z + aZ + bZ for rationals a, b, computed with integer gcds.
fn rational_generator(a: &BigRational, b: &BigRational) -> BigRational {
    let l = a.denom().lcm(b.denom());
    let na = a.numer() * (&l / a.denom());
    let nb = b.numer() * (&l / b.denom());
    let g = l.gcd(&na).gcd(&nb);
    BigRational::new(g, l)
}

fn rank1_collapse(rng: &mut ChaCha8Rng, pool: &mut Vec<Pair>) -> Outcome {
    let budget = Budget::default();
    let two = BigRational::from_integer(2.into());
    let mut bad = Vec::new();
    for i in 0..50 {
        let c = rng.gen_range(1..=3u64);
        let p = QhmParams::new(c, rational(rng), rational(rng)).unwrap();
        let p2 = QhmParams::new(c, AlgebraicReal::zero(), AlgebraicReal::zero()).unwrap();
        let d = decide_equivalence(&p, &p2, &budget);
        let expect = rational_generator(&(p.mu.as_rational().unwrap() * &two), &(p.nu.as_rational().unwrap() * &two));
        match &d.verdict {
            Verdict::Equivalent { r, .. } if r.as_rational().as_ref() == Some(&expect) => {
                if let Err(e) = witness_ok(&d) {
                    bad.push(format!("#{}: {}", i, e));
                }
            }
            Verdict::Equivalent { r, .. } => bad.push(format!("#{}: r = {}, oracle {}", i, r, expect)),
            other => bad.push(format!("#{}: {}", i, other.kind())),
        }
        pool.push((p, p2, d));
    }
    outcome(bad.is_empty(), format!("{}/50 equivalent to (c, 0, 0) with r = gcd oracle{}", 50 - bad.len(), first(&bad)))
}

fn euclid_remainders(q: i64, p: i64) -> Vec<i64> {
    let mut seq = vec![q, p];
    while seq[seq.len() - 1] != 0 {
        let n = seq.len();
        seq.push(seq[n - 2] % seq[n - 1]);
    }
    seq.pop();
    seq
}

fn dif_chain() -> Outcome {
    let nus = [alg("sqrt(2)"), alg("(1 + sqrt(5))/2"), alg("root(x^3 - 2; 1, 2)")];
    let mut count = 0;
    let mut bad = Vec::new();
    for q in 2..=60i64 {
        for p in 1..q {
            if p.gcd(&q) != 1 {
                continue;
            }
            let nu = &nus[count % nus.len()];
            count += 1;
            let params = QhmParams::new(1, AlgebraicReal::from_frac(p, 2 * q), nu.clone()).unwrap();
            let oracle = euclid_remainders(q, p);
            match reduce_dif(&params) {
                Ok(red) => {
                    let chain: Vec<BigInt> = oracle.iter().map(|&x| BigInt::from(x)).collect();
                    let final_nu = nu.mul_rational(&BigRational::from_integer(q.into()));
                    if red.chain != chain
                        || red.flips != oracle.len() - 1
                        || !red.params.mu.is_zero()
                        || red.params.nu != final_nu
                    {
                        bad.push(format!("{}/{}: chain {:?} flips {}", p, q, red.chain, red.flips));
                    }
                }
                Err(e) => bad.push(format!("{}/{}: {}", p, q, e)),
            }
        }
    }
    outcome(bad.is_empty(), format!("{}/{} coprime pairs match the Euclid oracle{}", count - bad.len(), count, first(&bad)))
}

fn serret_suite(rng: &mut ChaCha8Rng, pool: &mut Vec<Pair>) -> Outcome {
    let mut bad = Vec::new();
    if !matches!(serret_equivalent(&alg("sqrt(2)"), &alg("sqrt(3)"), 64), SerretResult::NotEquivalent(_)) {
        bad.push("(sqrt 2, sqrt 3) not separated".to_string());
    }
    let budget = Budget::default();
    let half = BigRational::new(1.into(), 2.into());
    for i in 0..100 {
        let x = surd(rng, 10);
        let a = loop {
            let m: [[i64; 2]; 2] =
                [[rng.gen_range(-3..=3), rng.gen_range(-3..=3)], [rng.gen_range(-3..=3), rng.gen_range(-3..=3)]];
            if (m[0][0] * m[1][1] - m[0][1] * m[1][0]).abs() == 1 {
                break Gl2::from_i64(m).unwrap();
            }
        };
        let y = gl2_act(&a, &x).unwrap();
        match serret_equivalent(&x, &y, 64) {
            SerretResult::Equivalent(w) => {
                if gl2_act(&w, &x).ok().as_ref() != Some(&y) {
                    bad.push(format!("#{}: witness does not map {} to {}", i, x, y));
                }
            }
            other => bad.push(format!("#{}: {} for {} and {}", i, other.kind(), x, y)),
        }
        if i % 4 == 0 {
            let p = QhmParams::new(1, AlgebraicReal::zero(), x.mul_rational(&half)).unwrap();
            let p2 = QhmParams::new(1, AlgebraicReal::zero(), y.mul_rational(&half)).unwrap();
            let d = decide_equivalence(&p, &p2, &budget);
            if let Err(e) = equivalent_verified(&d) {
                bad.push(format!("#{} via decide: {}", i, e));
            }
            pool.push((p, p2, d));
        }
    }
    outcome(bad.is_empty(), format!("{} failures over 1 + 100 Serret cases and 25 rank-2 decisions{}", bad.len(), first(&bad)))
}

fn bimodule_residuals() -> Outcome {
    let start = Instant::now();
    let mut worst = 0f64;
    let mut bad = Vec::new();
    let params = [(1.0 / 2f64.sqrt(), 1.0 / 3f64.sqrt()), (0.3, 0.7)];
    for (mu, nu) in params {
        for c in 1..=3 {
            let spec = GeometrySpec::new(mu, nu, c).unwrap();
            let (reports, _) = verify_all(&spec, 10_000, 2024 + c as u64);
            for r in reports {
                worst = worst.max(r.max_residual);
                if !(r.max_residual < 1e-9) {
                    bad.push(format!("({}, {}, c={}) {}: {:e}", mu, nu, c, r.identity_name, r.max_residual));
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        bad.is_empty() && secs < 30.0,
        format!("max residual {:.2e} over 6 geometries x 10^4 samples, {:.1} s (limit 30 s){}", worst, secs, first(&bad)),
    )
}

const BOX: i64 = 40;

fn reachable(gens: &[i64]) -> HashSet<i64> {
    let mut set = HashSet::from([0i64]);
    for &g in gens {
        let mut next = HashSet::with_capacity(set.len() * (2 * BOX as usize + 1));
        for &s in &set {
            for k in -BOX..=BOX {
                next.insert(s + k * g);
            }
        }
        set = next;
    }
    set
}

fn lattice_oracle(rng: &mut ChaCha8Rng) -> Outcome {
    let ctx = FieldContext::rational();
    let mut checked = 0;
    let mut members = 0;
    let mut bad = Vec::new();
    for i in 0..30 {
        // trace groups Z + 2mu Z + 2nu Z of rational parameters
        let mut gens = vec![BigRational::from_integer(1.into())];
        for _ in 0..2 {
            gens.push(BigRational::new(rng.gen_range(-12..=12i64).into(), rng.gen_range(1..=12i64).into()));
        }
        // a finer denominator than the lattice's own, so that non-members occur
        let l: BigInt = gens.iter().fold(BigInt::from(1), |l, g| l.lcm(g.denom())) * 2;
        let ints: Vec<i64> = gens
            .iter()
            .map(|g| i64::try_from(g.numer() * (&l / g.denom())).unwrap())
            .collect();
        let set = reachable(&ints);
        let lat = RatLattice::new(ctx.clone(), gens.iter().map(|g| vec![g.clone()]).collect());
        for n in -20..=20i64 {
            let v = BigRational::new(n.into(), l.clone());
            let hnf = lat.contains(&[v.clone()]);
            let brute = set.contains(&n);
            checked += 1;
            members += brute as usize;
            if hnf != brute {
                bad.push(format!("lattice #{} {:?}: {} hnf={} brute={}", i, ints, v, hnf, brute));
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("{} vectors ({} members) agree with brute force{}", checked - bad.len(), members, first(&bad)),
    )
}

fn symmetry(pool: &[Pair]) -> Outcome {
    let budget = Budget::default();
    let mut bad = Vec::new();
    let mut equivalent = 0;
    for (i, (p, p2, d)) in pool.iter().enumerate() {
        let back = decide_equivalence(p2, p, &budget);
        if back.verdict.kind() != d.verdict.kind() {
            bad.push(format!("#{}: {} vs {}", i, d.verdict.kind(), back.verdict.kind()));
            continue;
        }
        if let (Verdict::Equivalent { r, .. }, Verdict::Equivalent { r: r2, .. }) = (&d.verdict, &back.verdict) {
            equivalent += 1;
            if r.mul(r2) != AlgebraicReal::one() {
                bad.push(format!("#{}: r r' = {} * {} != 1", i, r, r2));
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("{} pairs, {} equivalent with r r' = 1{}", pool.len(), equivalent, first(&bad)),
    )
}

fn report(name: &str, o: Outcome) -> bool {
    println!("criterion {}: {} ({})", name, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    o.pass
}

fn main() -> ExitCode {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e37_79b9);
    let mut pool = Vec::new();
    let passed = [
        report("1 fmu metamorphic suite", fmu_suite(&mut rng, &mut pool)),
        report("2 GL3 metamorphic suite", gl3_suite(&mut rng, &mut pool)),
        report("3 c-obstruction", c_obstruction(&mut rng, &mut pool)),
        report("4 rank-1 collapse", rank1_collapse(&mut rng, &mut pool)),
        report("5 dif-chain", dif_chain()),
        report("6 Serret suite", serret_suite(&mut rng, &mut pool)),
        report("7 bimodule residuals", bimodule_residuals()),
        report("8 lattice oracle", lattice_oracle(&mut rng)),
        report("9 symmetry", symmetry(&pool)),
    ];
    let ok = passed.iter().filter(|&&p| p).count();
    println!("acceptance: {}/{} criteria passed", ok, passed.len());
    if ok == passed.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
