//! GL2(Z)-equivalence under the fractional-linear action, decided through
//! continued-fraction tails.

use num_bigint::BigInt;
use num_integer::Integer;

use super::{cf_expand, gl2_act, CfExpansion, Gl2};
use crate::exactnum::AlgebraicReal;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SerretResult {
    /// `gl2_act(witness, a) == b`.
    Equivalent(Gl2),
    NotEquivalent(String),
    Unknown { terms: usize },
}

impl SerretResult {
    pub fn kind(&self) -> &'static str {
        match self {
            SerretResult::Equivalent(_) => "Equivalent",
            SerretResult::NotEquivalent(_) => "NotEquivalent",
            SerretResult::Unknown { .. } => "Unknown",
        }
    }
}

pub fn serret_equivalent(a: &AlgebraicReal, b: &AlgebraicReal, budget: usize) -> SerretResult {
    match (a.as_rational(), b.as_rational()) {
        (Some(x), Some(y)) => {
            let w = rational_matrix(y.numer(), y.denom()).mul(&rational_matrix(x.numer(), x.denom()).inverse());
            return verified(w, a, b).unwrap_or_else(|| panic!("rational witness failed"));
        }
        (Some(_), None) | (None, Some(_)) => {
            return SerretResult::NotEquivalent("exactly one of the two numbers is rational".into());
        }
        _ => {}
    }
    if a.degree() != b.degree() {
        return SerretResult::NotEquivalent(format!(
            "degrees differ: {} vs {}",
            a.degree(),
            b.degree()
        ));
    }
    let ea = cf_expand(a, budget);
    let eb = cf_expand(b, budget);
    if a.degree() == 2 {
        return quadratic(a, b, &ea, &eb);
    }
    tail_match(a, b, &ea, &eb, budget)
}

/// `(p x; q y)` with `p y - x q = 1`, sending infinity to `p/q`.
fn rational_matrix(p: &BigInt, q: &BigInt) -> Gl2 {
    let e = p.extended_gcd(q);
    // p * e.x + q * e.y = 1  ->  y = e.x, x = -e.y
    Gl2::new([[p.clone(), -e.y], [q.clone(), e.x]]).expect("coprime column")
}

fn verified(w: Gl2, a: &AlgebraicReal, b: &AlgebraicReal) -> Option<SerretResult> {
    match gl2_act(&w, a) {
        Ok(v) if &v == b => Some(SerretResult::Equivalent(w)),
        _ => None,
    }
}

fn quadratic(a: &AlgebraicReal, b: &AlgebraicReal, ea: &CfExpansion, eb: &CfExpansion) -> SerretResult {
    let (sa, la) = ea.period.expect("quadratic expansions are periodic");
    let (sb, lb) = eb.period.expect("quadratic expansions are periodic");
    let wa = ea.period_word().unwrap();
    let wb = eb.period_word().unwrap();
    if la == lb {
        for r in 0..lb {
            let rotated = (0..lb).map(|i| &wb[(i + r) % lb]);
            if rotated.eq(wa.iter()) {
                let w = eb.convergent_matrix(sb + r).mul(&ea.convergent_matrix(sa).inverse());
                return verified(w, a, b).expect("period match yields a verified witness");
            }
        }
    }
    SerretResult::NotEquivalent(format!(
        "periods differ as cyclic words: ({}) vs ({})",
        join(wa),
        join(wb)
    ))
}

fn join(w: &[BigInt]) -> String {
    w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn tail_match(a: &AlgebraicReal, b: &AlgebraicReal, ea: &CfExpansion, eb: &CfExpansion, budget: usize) -> SerretResult {
    let n = ea.quotients.len().min(eb.quotients.len());
    let half = n / 2;
    // offsets ordered by i + j, then i
    for s in 0..=2 * half {
        for i in 0..=s.min(half) {
            let j = s - i;
            if j > half {
                continue;
            }
            let len = (ea.quotients.len() - i).min(eb.quotients.len() - j);
            if ea.quotients[i..i + len] != eb.quotients[j..j + len] {
                continue;
            }
            let w = eb.convergent_matrix(j).mul(&ea.convergent_matrix(i).inverse());
            if let Some(res) = verified(w, a, b) {
                return res;
            }
        }
    }
    SerretResult::Unknown { terms: budget }
}
