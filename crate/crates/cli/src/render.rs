//! String forms for rationals, nodes, witnesses and verdicts.

use mstiff::diophantine::is_perfect_square;
use mstiff::exact::RootWitness;
use mstiff::stiffness::{Decision, Special, StiffVerdict};
use mstiff::{Rational, Witness};
use num_traits::One;
use serde_json::{json, Value};

pub fn rat(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rat_list(qs: &[Rational]) -> Vec<String> {
    qs.iter().map(rat).collect()
}

/// A positive node `x` given `x²`, with radicals left unsimplified.
///
/// `1/45 → 1/sqrt(45)`, `1/441 → 1/21`, `3/4 → sqrt(3)/2`, `3/208 → sqrt(3/208)`.
pub fn node(sq: &Rational) -> String {
    let (a, b) = (sq.numer(), sq.denom());
    match (is_perfect_square(a), is_perfect_square(b)) {
        (Some(ra), Some(rb)) => rat(&Rational::new(ra, rb)),
        (Some(ra), None) => format!("{ra}/sqrt({b})"),
        (None, Some(rb)) if rb.is_one() => format!("sqrt({a})"),
        (None, Some(rb)) => format!("sqrt({a})/{rb}"),
        (None, None) => format!("sqrt({a}/{b})"),
    }
}

/// Symmetric node list, outermost first: `±x_1, ±x_2, …` and `0` for odd degree.
pub fn zeros(node_sq_desc: &[Rational], odd: bool) -> Vec<String> {
    let mut v: Vec<String> = node_sq_desc.iter().map(|s| format!("±{}", node(s))).collect();
    if odd {
        v.push("0".into());
    }
    v
}

/// Chebyshev zeros of the circle case, outermost first.
pub fn circle_zeros(m: u64) -> Vec<String> {
    let mut v: Vec<String> = (0..m / 2).map(|k| format!("±cos({}pi/{})", 2 * k + 1, 2 * m).replace("±cos(1pi", "±cos(pi")).collect();
    if m % 2 == 1 {
        v.push("0".into());
    }
    v
}

pub fn verdict_word(v: &StiffVerdict) -> &'static str {
    if v.exists() {
        "exists"
    } else {
        "not_exists"
    }
}

pub fn witness_json(w: &Witness) -> Value {
    let mut v = match w {
        Witness::NonIntegralCoefficient { r, prime, valuation, value } => json!({
            "kind": "non_integer_coefficient",
            "r": r,
            "prime": prime,
            "valuation": valuation,
            "u_r": value.as_ref().map(rat),
        }),
        Witness::NewtonSlope { prime, from, to, slope } => json!({
            "kind": "newton_slope",
            "prime": prime,
            "from": [from.0, from.1],
            "to": [to.0, to.1],
            "slope": rat(slope),
        }),
        Witness::Root(RootWitness::IrrationalRoot { interval }) => json!({
            "kind": "irrational_root",
            "interval": [rat(&interval.lo), rat(&interval.hi)],
        }),
        Witness::Root(RootWitness::NonIntegralCoefficient { index, value }) => json!({
            "kind": "non_integer_scaled_coefficient",
            "index": index,
            "value": rat(value),
        }),
        Witness::Root(RootWitness::ModularObstruction { prime, linear_factors, degree }) => json!({
            "kind": "modular_obstruction",
            "prime": prime,
            "linear_factors": linear_factors,
            "degree": degree,
        }),
        Witness::Root(RootWitness::NonRealRoots { real, degree }) => json!({
            "kind": "non_real_roots",
            "real": real,
            "degree": degree,
        }),
        Witness::BoundExceeded { tag } => json!({ "kind": "bound_exceeded", "tag": tag }),
    };
    v["text"] = Value::String(w.to_string());
    v
}

/// Full JSON object for one decision.
pub fn verdict_json(v: &StiffVerdict) -> Value {
    match &v.decision {
        Decision::Exists(c) => json!({
            "m": v.m,
            "d": v.dim,
            "verdict": "exists",
            "roots": rat_list(&c.roots),
            "lambdas": rat_list(&c.lambdas),
            "witness": null,
        }),
        Decision::NotExists(w) => json!({
            "m": v.m,
            "d": v.dim,
            "verdict": "not_exists",
            "roots": [],
            "lambdas": [],
            "witness": witness_json(w),
        }),
    }
}

/// One-line summary stored in checkpoints and cell records.
pub fn digest(v: &StiffVerdict) -> String {
    match &v.decision {
        Decision::Exists(c) if c.special == Some(Special::Circle) => {
            format!("regular {}-gon; lambda {}", 2 * v.m, rat_list(&c.lambdas).join(","))
        }
        Decision::Exists(c) if c.roots.is_empty() => format!("node 0; lambda {}", rat_list(&c.lambdas).join(",")),
        Decision::Exists(c) => {
            format!("roots {}; lambda {}", rat_list(&c.roots).join(","), rat_list(&c.lambdas).join(","))
        }
        Decision::NotExists(w) => w.to_string(),
    }
}

/// `x` as a decimal with `digits` places.
pub fn decimal(x: &Rational, digits: usize) -> String {
    mstiff::exact::rational::to_decimal(x, digits)
}
