//! Deciding Morita equivalence of `D^c_{mu nu}` from the trace group
//! `G = Z + 2 mu Z + 2 nu Z`.

mod orbit;
mod rank2;
mod scaling;
pub mod witness;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Value};
use thiserror::Error;

use crate::cf2::{cf_expand, serret_equivalent, Gl2, Gl3, SerretResult, DEFAULT_CF_TERMS};
use crate::exactnum::{common_field_with_cap, AlgebraicReal, Coords, FieldContext, NumError, DEFAULT_DEGREE_CAP};
use crate::lattice::{lattice_equal, rank2_basis_of, trace_group_in, LatticeError, Rank2Basis, TraceGroup};

pub use orbit::{orbit_isomorphic, orbit_isomorphic_in, OrbitMatch};
pub use rank2::{normalize_rank2, reduce_dif, Normalized, Reduced};
pub use scaling::{gl2_from_scaling, gl3_witness, scaling_search, ScalingOutcome};
pub use witness::{check_witness, decision_to_json};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("c must be a positive integer")]
    ZeroC,
    #[error("trace group has rank {0}, expected 2")]
    NotRank2(usize),
    #[error("mu must be rational here")]
    IrrationalMu,
    #[error("malformed witness: {0}")]
    Witness(String),
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QhmParams {
    pub c: u64,
    pub mu: AlgebraicReal,
    pub nu: AlgebraicReal,
}

impl QhmParams {
    pub fn new(c: u64, mu: AlgebraicReal, nu: AlgebraicReal) -> Result<Self, ClassifyError> {
        if c == 0 {
            return Err(ClassifyError::ZeroC);
        }
        Ok(QhmParams { c, mu, nu })
    }

    pub fn parse(c: u64, mu: &str, nu: &str) -> Result<Self, ClassifyError> {
        Self::new(
            c,
            crate::exactnum::parse_algebraic(mu)?,
            crate::exactnum::parse_algebraic(nu)?,
        )
    }

    fn order(&self, other: &Self) -> Ordering {
        self.c
            .cmp(&other.c)
            .then_with(|| self.mu.cmp_value(&other.mu))
            .then_with(|| self.nu.cmp_value(&other.nu))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    pub cf_terms: usize,
    pub orbit_bound: i64,
    pub height_bound: i64,
    pub degree_cap: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            cf_terms: DEFAULT_CF_TERMS,
            orbit_bound: 8,
            height_bound: 50,
            degree_cap: DEFAULT_DEGREE_CAP,
        }
    }
}

impl Budget {
    pub fn to_json(&self) -> Value {
        json!({
            "cf_terms": self.cf_terms,
            "orbit_bound": self.orbit_bound,
            "height_bound": self.height_bound,
            "degree_cap": self.degree_cap,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceStep {
    pub rule: String,
    pub data: Value,
}

impl TraceStep {
    pub fn new(rule: &str, data: Value) -> Self {
        TraceStep {
            rule: rule.to_string(),
            data,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    CMismatch { c: [u64; 2] },
    RankMismatch { ranks: [usize; 2] },
    NoScaling { dim: usize, reason: String },
    CfInequivalent { expansions: [String; 2], reason: String },
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::CMismatch { .. } => "CMismatch",
            Certificate::RankMismatch { .. } => "RankMismatch",
            Certificate::NoScaling { .. } => "NoScaling",
            Certificate::CfInequivalent { .. } => "CFInequivalent",
        }
    }

    pub fn values(&self) -> Value {
        match self {
            Certificate::CMismatch { c } => json!({ "c": c }),
            Certificate::RankMismatch { ranks } => json!({ "ranks": ranks }),
            Certificate::NoScaling { dim, reason } => json!({ "dim": dim, "reason": reason }),
            Certificate::CfInequivalent { expansions, reason } => {
                json!({ "expansions": expansions, "reason": reason })
            }
        }
    }

    fn swapped(self) -> Self {
        match self {
            Certificate::CMismatch { c } => Certificate::CMismatch { c: [c[1], c[0]] },
            Certificate::RankMismatch { ranks } => Certificate::RankMismatch {
                ranks: [ranks[1], ranks[0]],
            },
            Certificate::CfInequivalent { expansions: [a, b], reason } => Certificate::CfInequivalent {
                expansions: [b, a],
                reason,
            },
            other => other,
        }
    }
}

/// `gl2_act(matrix, x) == y` with `x = q alpha`, `y = q' alpha'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gl2Witness {
    pub matrix: Gl2,
    pub x: AlgebraicReal,
    pub y: AlgebraicReal,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    /// `G = r G'`.
    Equivalent {
        r: AlgebraicReal,
        r_coords: Coords,
        gl3: Option<Gl3>,
        gl2: Option<Gl2Witness>,
    },
    NotEquivalent(Certificate),
    Unknown { reason: String },
}

impl Verdict {
    pub fn kind(&self) -> &'static str {
        match self {
            Verdict::Equivalent { .. } => "Equivalent",
            Verdict::NotEquivalent(_) => "NotEquivalent",
            Verdict::Unknown { .. } => "Unknown",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Decision {
    pub params: [QhmParams; 2],
    pub verdict: Verdict,
    pub ranks: Option<[usize; 2]>,
    pub context: Option<FieldContext>,
    /// Dimension of the rational solution space of `r span(G') = span(G)`,
    /// when the scaling search ran.
    pub scaling_dim: Option<usize>,
    pub trace: Vec<TraceStep>,
    pub diagnostics: Vec<String>,
    pub budget: Budget,
}

impl Decision {
    fn new(p: &QhmParams, p2: &QhmParams, budget: &Budget) -> Self {
        Decision {
            params: [p.clone(), p2.clone()],
            verdict: Verdict::Unknown {
                reason: "undecided".into(),
            },
            ranks: None,
            context: None,
            scaling_dim: None,
            trace: Vec::new(),
            diagnostics: Vec::new(),
            budget: budget.clone(),
        }
    }

    pub fn rank(&self) -> Option<usize> {
        self.ranks.filter(|r| r[0] == r[1]).map(|r| r[0])
    }

    fn step(&mut self, rule: &str, data: Value) {
        self.trace.push(TraceStep::new(rule, data));
    }

    /// The same decision read with the two parameter sets exchanged.
    fn reversed(mut self) -> Self {
        self.params.swap(0, 1);
        if let Some(r) = self.ranks.as_mut() {
            r.swap(0, 1);
        }
        self.verdict = match self.verdict {
            Verdict::Equivalent { r, r_coords, gl3, gl2 } => {
                let ctx = self.context.as_ref().expect("equivalence carries a field");
                let inv = ctx.inv(&r_coords).expect("r is nonzero");
                Verdict::Equivalent {
                    r: r.recip().expect("r is nonzero"),
                    r_coords: inv,
                    gl3: gl3.map(|m| m.inverse()),
                    gl2: gl2.map(|w| Gl2Witness {
                        matrix: w.matrix.inverse(),
                        x: w.y,
                        y: w.x,
                    }),
                }
            }
            Verdict::NotEquivalent(c) => Verdict::NotEquivalent(c.swapped()),
            u => u,
        };
        self.step(
            "symmetry-swap",
            json!({ "note": "decided on the exchanged pair; r, matrices and certificate inverted back" }),
        );
        self
    }
}

pub fn alg_json(a: &AlgebraicReal) -> Value {
    let (lo, hi) = a.interval();
    json!({
        "minpoly": a.minpoly().coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "interval": [lo.to_string(), hi.to_string()],
        "approx": a.to_decimal(20),
    })
}

/// Decide Morita equivalence of `D^c_{mu nu}` and `D^{c'}_{mu' nu'}`.
///
/// The pair is first put in a fixed order so that exchanging the arguments
/// yields exactly inverse witnesses.
pub fn decide_equivalence(p: &QhmParams, p2: &QhmParams, budget: &Budget) -> Decision {
    if p.order(p2) == Ordering::Greater {
        decide_ordered(p2, p, budget).reversed()
    } else {
        decide_ordered(p, p2, budget)
    }
}

fn decide_ordered(p: &QhmParams, p2: &QhmParams, budget: &Budget) -> Decision {
    let mut d = Decision::new(p, p2, budget);
    if p.c != p2.c {
        d.verdict = Verdict::NotEquivalent(Certificate::CMismatch { c: [p.c, p2.c] });
        return d;
    }
    let elems = [p.mu.clone(), p.nu.clone(), p2.mu.clone(), p2.nu.clone()];
    let (ctx, cs) = match common_field_with_cap(&elems, budget.degree_cap) {
        Ok(v) => v,
        Err(e) => {
            d.verdict = Verdict::Unknown {
                reason: format!("no common number field: {}", e),
            };
            return d;
        }
    };
    d.context = Some(ctx.clone());
    let g = trace_group_in(&ctx, &cs[0], &cs[1], &p.mu, &p.nu);
    let g2 = trace_group_in(&ctx, &cs[2], &cs[3], &p2.mu, &p2.nu);
    d.ranks = Some([g.rank(), g2.rank()]);
    if g.rank() != g2.rank() {
        d.verdict = Verdict::NotEquivalent(Certificate::RankMismatch {
            ranks: [g.rank(), g2.rank()],
        });
        return d;
    }
    match g.rank() {
        1 => rank1(&mut d, &ctx, &g, &g2),
        2 => rank2_case(&mut d, &ctx, &g, &g2),
        _ => rank3(&mut d, &ctx, &cs, &g, &g2),
    }
    if matches!(d.verdict, Verdict::Equivalent { .. }) {
        if let Some(m) = orbit_isomorphic_in(&ctx, [&cs[0], &cs[1], &cs[2], &cs[3]], budget.orbit_bound) {
            d.step(
                "sorb-orbit",
                json!({
                    "isomorphic": true,
                    "matrix": m.matrix.to_strings(),
                    "shift": [m.shift[0].to_string(), m.shift[1].to_string()],
                }),
            );
        }
    }
    d
}

fn verify_scale(d: &mut Decision, ctx: &FieldContext, g: &TraceGroup, g2: &TraceGroup, r: &Coords) -> bool {
    match g2.lattice.scale(r).and_then(|s| lattice_equal(&g.lattice, &s)) {
        Ok(true) => true,
        Ok(false) => {
            d.diagnostics
                .push(format!("G = r G' fails for r = {}", ctx.to_algebraic(r)));
            false
        }
        Err(e) => {
            d.diagnostics.push(format!("lattice check failed: {}", e));
            false
        }
    }
}

fn rank1(d: &mut Decision, ctx: &FieldContext, g: &TraceGroup, g2: &TraceGroup) {
    // G = (1/n) Z
    let n = ctx.as_rational(&g.lattice.basis_coords()[0]).unwrap().recip();
    let n2 = ctx.as_rational(&g2.lattice.basis_coords()[0]).unwrap().recip();
    for (side, k) in [(0, &n), (1, &n2)] {
        let c = d.params[side].c;
        d.step(
            "trace-rank1-iso",
            json!({ "side": side, "group": format!("(1/{})Z", k), "isomorphic_to": ["0", format!("1/{}", BigRational::from_integer(BigInt::from(2)) * k)] }),
        );
        d.step("sorb-orbit", json!({ "side": side, "move": "swap", "to": [format!("1/{}", BigRational::from_integer(BigInt::from(2)) * k), "0"] }));
        let start = QhmParams {
            c,
            mu: AlgebraicReal::from_rational(&(BigRational::one() / (BigRational::from_integer(BigInt::from(2)) * k))),
            nu: AlgebraicReal::zero(),
        };
        let red = reduce_dif(&start).expect("rational mu");
        debug_assert!(red.params.nu.is_zero());
        d.trace.extend(red.trace);
    }
    let r = &n2 / &n;
    let rc = ctx.from_rational(&r);
    if verify_scale(d, ctx, g, g2, &rc) {
        d.step("rank1-scale", json!({ "r": r.to_string() }));
        d.verdict = Verdict::Equivalent {
            r: AlgebraicReal::from_rational(&r),
            r_coords: rc,
            gl3: None,
            gl2: None,
        };
    } else {
        d.verdict = Verdict::Unknown {
            reason: "rank-1 scaling failed verification".into(),
        };
    }
}

fn basis_pair(d: &mut Decision, g: &TraceGroup, g2: &TraceGroup) -> Option<(Rank2Basis, Rank2Basis)> {
    match (rank2_basis_of(&g.lattice), rank2_basis_of(&g2.lattice)) {
        (Ok(b), Ok(b2)) => Some((b, b2)),
        (Err(e), _) | (_, Err(e)) => {
            d.diagnostics.push(format!("rank-2 basis: {}", e));
            None
        }
    }
}

fn rank2_case(d: &mut Decision, ctx: &FieldContext, g: &TraceGroup, g2: &TraceGroup) {
    let Some((b, b2)) = basis_pair(d, g, g2) else {
        d.verdict = Verdict::Unknown {
            reason: "rank-2 basis unavailable".into(),
        };
        return;
    };
    let q = BigRational::from_integer(b.q.clone());
    let q2 = BigRational::from_integer(b2.q.clone());
    let xc = ctx.scale(&b.alpha_coords, &q);
    let yc = ctx.scale(&b2.alpha_coords, &q2);
    let x = ctx.to_algebraic(&xc);
    let y = ctx.to_algebraic(&yc);
    for (side, bb) in [(0, &b), (1, &b2)] {
        d.step(
            "rank2-basis",
            json!({ "side": side, "alpha": alg_json(&bb.alpha), "q": bb.q.to_string() }),
        );
    }
    // reductions of both sides to the (0, q nu) normal form
    for side in 0..2 {
        let p = d.params[side].clone();
        match normalize_rank2(&p).and_then(|n| {
            let red = reduce_dif(&n.params)?;
            Ok((n, red))
        }) {
            Ok((n, red)) => {
                d.trace.extend(n.trace);
                d.trace.extend(red.trace);
            }
            Err(e) => d.diagnostics.push(format!("side {} reduction: {}", side, e)),
        }
    }

    let budget = d.budget.clone();
    let serret = serret_equivalent(&x, &y, budget.cf_terms);
    // the relation is read as q alpha = W(q' alpha'); the displayed variant
    // compares q alpha' with q' alpha' instead
    let proof_reading = match &serret {
        SerretResult::Equivalent(w) => json!({ "relation": "q alpha = (a y + b)/(c y + d), y = q' alpha'", "result": "Equivalent", "matrix": w.inverse().to_strings() }),
        other => json!({ "relation": "q alpha = (a y + b)/(c y + d), y = q' alpha'", "result": other.kind() }),
    };
    d.step("rank2-relation-primary", proof_reading);
    let displayed = serret_equivalent(&ctx.to_algebraic(&ctx.scale(&b2.alpha_coords, &q)), &y, budget.cf_terms);
    d.step(
        "rank2-relation-alternate",
        json!({ "relation": "q' alpha' = (a q alpha' + b)/(c q alpha' + d)", "result": displayed.kind(), "used": false }),
    );

    let dual = scaled_group_equal(g, g2, &budget);
    d.scaling_dim = Some(dual.dim());
    match serret {
        SerretResult::Equivalent(w) => {
            // y = (a x + b)/(c x + d)  =>  G = (q'(c x + d)/q) G'
            let (c, dd) = (w.get(1, 0).clone(), w.get(1, 1).clone());
            let lin = ctx.add(&ctx.scale(&xc, &BigRational::from_integer(c)), &ctx.from_rational(&BigRational::from_integer(dd)));
            let mut r = ctx.scale(&lin, &(&q2 / &q));
            if ctx.sign(&r) < 0 {
                r = ctx.neg(&r);
            }
            if !matches!(dual, ScalingOutcome::Found { .. }) {
                d.diagnostics.push(format!(
                    "dual check: bounded scaling search did not find r (outcome {:?})",
                    dual_kind(&dual)
                ));
            }
            if verify_scale(d, ctx, g, g2, &r) {
                d.step("rank2-scale", json!({ "r": alg_json(&ctx.to_algebraic(&r)) }));
                d.verdict = Verdict::Equivalent {
                    r: ctx.to_algebraic(&r),
                    r_coords: r,
                    gl3: None,
                    gl2: Some(Gl2Witness { matrix: w, x, y }),
                };
            } else {
                d.verdict = Verdict::Unknown {
                    reason: "continued-fraction witness failed the lattice check".into(),
                };
            }
        }
        SerretResult::NotEquivalent(reason) => {
            if let ScalingOutcome::Found { r, .. } = &dual {
                d.diagnostics.push(format!(
                    "dual check disagrees: scaling search found r = {}",
                    ctx.to_algebraic(r)
                ));
            }
            d.verdict = Verdict::NotEquivalent(Certificate::CfInequivalent {
                expansions: [
                    cf_expand(&x, budget.cf_terms).render(),
                    cf_expand(&y, budget.cf_terms).render(),
                ],
                reason,
            });
        }
        SerretResult::Unknown { terms } => match dual {
            ScalingOutcome::Found { r, .. } => {
                if verify_scale(d, ctx, g, g2, &r) {
                    let gl2 = gl2_from_scaling(ctx, &b, &b2, &r).map(|m| Gl2Witness { matrix: m, x, y });
                    d.step("rank2-scale", json!({ "r": alg_json(&ctx.to_algebraic(&r)), "source": "scaling search" }));
                    d.verdict = Verdict::Equivalent {
                        r: ctx.to_algebraic(&r),
                        r_coords: r,
                        gl3: None,
                        gl2,
                    };
                } else {
                    d.verdict = Verdict::Unknown {
                        reason: "scaling candidate failed the lattice check".into(),
                    };
                }
            }
            ScalingOutcome::None { dim, reason } => {
                d.verdict = Verdict::NotEquivalent(Certificate::NoScaling { dim, reason });
            }
            ScalingOutcome::Unknown { dim, bound } => {
                d.verdict = Verdict::Unknown {
                    reason: format!(
                        "continued fractions undecided after {} terms; scaling search (dim {}) exhausted height {}",
                        terms, dim, bound
                    ),
                };
            }
        },
    }
}

fn dual_kind(o: &ScalingOutcome) -> &'static str {
    match o {
        ScalingOutcome::Found { .. } => "Found",
        ScalingOutcome::None { .. } => "None",
        ScalingOutcome::Unknown { .. } => "Unknown",
    }
}

fn rank3(d: &mut Decision, ctx: &FieldContext, cs: &[Coords], g: &TraceGroup, g2: &TraceGroup) {
    let out = scaled_group_equal(g, g2, &d.budget);
    d.scaling_dim = Some(out.dim());
    match out {
        ScalingOutcome::Found { r, dim, transition } => {
            if !verify_scale(d, ctx, g, g2, &r) {
                d.verdict = Verdict::Unknown {
                    reason: "scaling candidate failed the lattice check".into(),
                };
                return;
            }
            d.step(
                "rank3-scale",
                json!({
                    "r": alg_json(&ctx.to_algebraic(&r)),
                    "dim": dim,
                    "transition": transition.iter().map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                }),
            );
            let gl3 = match gl3_witness(ctx, &cs[0], &cs[1], &cs[2], &cs[3], &r) {
                Ok(m) => Some(m),
                Err(e) => {
                    d.diagnostics.push(format!("gl3 witness: {}", e));
                    None
                }
            };
            d.verdict = Verdict::Equivalent {
                r: ctx.to_algebraic(&r),
                r_coords: r,
                gl3,
                gl2: None,
            };
        }
        ScalingOutcome::None { dim, reason } => {
            d.verdict = Verdict::NotEquivalent(Certificate::NoScaling { dim, reason });
        }
        ScalingOutcome::Unknown { dim, bound } => {
            d.verdict = Verdict::Unknown {
                reason: format!("scaling search (dim {}) exhausted height {}", dim, bound),
            };
        }
    }
}

/// Search for `r > 0` with `G = r G'`; both groups must share a field.
/// In rank 3 candidates are `r = x + 2 mu y + 2 nu z`, otherwise they run over
/// the Hermite basis.
pub fn scaled_group_equal(g: &TraceGroup, g2: &TraceGroup, budget: &Budget) -> ScalingOutcome {
    assert!(g.context() == g2.context(), "trace groups live in different fields");
    let basis = |t: &TraceGroup| -> Vec<Coords> {
        if t.rank() == 3 {
            t.gens.to_vec()
        } else {
            t.lattice.basis_coords()
        }
    };
    scaling_search(g.context(), &basis(g), &basis(g2), budget.height_bound)
}

/// Whether `G = r G'` for the trace groups of two parameter sets.
pub fn is_scaling(p: &QhmParams, p2: &QhmParams, r: &AlgebraicReal) -> Result<bool, ClassifyError> {
    if r.is_zero() {
        return Ok(false);
    }
    let (ctx, cs) = common_field_with_cap(
        &[p.mu.clone(), p.nu.clone(), p2.mu.clone(), p2.nu.clone(), r.clone()],
        DEFAULT_DEGREE_CAP,
    )?;
    let g = trace_group_in(&ctx, &cs[0], &cs[1], &p.mu, &p.nu);
    let g2 = trace_group_in(&ctx, &cs[2], &cs[3], &p2.mu, &p2.nu);
    Ok(lattice_equal(&g.lattice, &g2.lattice.scale(&cs[4])?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf2::gl3_act;

    fn params(c: u64, mu: &str, nu: &str) -> QhmParams {
        QhmParams::parse(c, mu, nu).unwrap()
    }

    fn decide(a: &QhmParams, b: &QhmParams) -> Decision {
        decide_equivalence(a, b, &Budget::default())
    }

    #[test]
    fn c_mismatch() {
        let d = decide(&params(1, "sqrt(2)", "sqrt(3)"), &params(2, "sqrt(2)", "sqrt(3)"));
        assert_eq!(d.verdict, Verdict::NotEquivalent(Certificate::CMismatch { c: [1, 2] }));
        let d = decide(&params(2, "sqrt(2)", "sqrt(3)"), &params(1, "sqrt(2)", "sqrt(3)"));
        assert_eq!(d.verdict, Verdict::NotEquivalent(Certificate::CMismatch { c: [2, 1] }));
    }

    #[test]
    fn rank_mismatch() {
        let d = decide(&params(1, "sqrt(2)", "1/3"), &params(1, "sqrt(2)", "sqrt(3)"));
        assert_eq!(d.verdict.kind(), "NotEquivalent");
        assert_eq!(d.ranks, Some([2, 3]));
    }

    #[test]
    fn fmu_flip_is_equivalent() {
        let a = params(1, "sqrt(2)", "sqrt(3)");
        let (m2, n2) = gl3_act(&Gl3::from_i64([[0, 0, 1], [0, 1, 0], [1, 0, 0]]).unwrap(), &a.mu, &a.nu).unwrap();
        let b = QhmParams::new(1, m2, n2).unwrap();
        let d = decide(&a, &b);
        let Verdict::Equivalent { r, gl3, .. } = &d.verdict else { panic!("{:?}", d.verdict) };
        assert!(is_scaling(&a, &b, r).unwrap());
        let m = gl3.as_ref().unwrap();
        assert_eq!(gl3_act(m, &a.mu, &a.nu).unwrap(), (b.mu.clone(), b.nu.clone()));
    }

    #[test]
    fn symmetric_inverse_scalars() {
        let a = params(1, "sqrt(2)", "sqrt(3)");
        let b = params(1, "1/(4*sqrt(2))", "sqrt(3)/(2*sqrt(2))");
        let d1 = decide(&a, &b);
        let d2 = decide(&b, &a);
        let (Verdict::Equivalent { r: r1, .. }, Verdict::Equivalent { r: r2, .. }) = (&d1.verdict, &d2.verdict) else {
            panic!()
        };
        assert_eq!(r1.mul(r2), AlgebraicReal::one());
    }

    #[test]
    fn rank1_scales_by_denominators() {
        let d = decide(&params(3, "1/6", "1/4"), &params(3, "1/10", "0"));
        // G = (1/6)Z, G' = (1/5)Z
        let Verdict::Equivalent { r, .. } = &d.verdict else { panic!() };
        assert_eq!(*r, AlgebraicReal::from_frac(5, 6));
        assert!(d.trace.iter().any(|s| s.rule == "dif-chain"));
    }

    #[test]
    fn rank2_quadratic() {
        let a = params(1, "1/6", "sqrt(2)");
        let b = params(1, "3/2", "3*sqrt(2)");
        let d = decide(&a, &b);
        let Verdict::Equivalent { r, gl2, .. } = &d.verdict else { panic!("{:?}", d.verdict) };
        assert!(is_scaling(&a, &b, r).unwrap());
        let w = gl2.as_ref().unwrap();
        assert_eq!(crate::cf2::gl2_act(&w.matrix, &w.x).unwrap(), w.y);
        let d = decide(&params(1, "0", "sqrt(2)"), &params(1, "0", "sqrt(3)"));
        assert!(matches!(d.verdict, Verdict::NotEquivalent(Certificate::CfInequivalent { .. })));
        assert!(d.diagnostics.is_empty(), "{:?}", d.diagnostics);
    }

    #[test]
    fn scaling_recovers_a_third() {
        let p = params(1, "sqrt(2)", "sqrt(3)");
        let (ctx, cs) = crate::exactnum::common_field(&[p.mu.clone(), p.nu.clone()]).unwrap();
        let g = trace_group_in(&ctx, &cs[0], &cs[1], &p.mu, &p.nu);
        let third = BigRational::new(BigInt::one(), BigInt::from(3));
        let mut g2 = g.clone();
        g2.gens = g.gens.clone().map(|v| ctx.scale(&v, &third));
        g2.lattice = g.lattice.scale(&ctx.from_rational(&third)).unwrap();
        let ScalingOutcome::Found { r, dim, .. } = scaled_group_equal(&g, &g2, &Budget::default()) else { panic!() };
        assert_eq!(ctx.as_rational(&r), Some(BigRational::from_integer(BigInt::from(3))));
        assert_eq!(dim, 1);
        let ScalingOutcome::Found { r, .. } = scaled_group_equal(&g, &g, &Budget::default()) else { panic!() };
        assert_eq!(r, ctx.one());
    }

    #[test]
    fn rank3_no_scaling() {
        let d = decide(&params(1, "sqrt(2)", "sqrt(3)"), &params(1, "sqrt(2)", "sqrt(5)"));
        assert!(matches!(d.verdict, Verdict::NotEquivalent(Certificate::NoScaling { dim: 0, .. })), "{:?}", d.verdict);
    }
}
