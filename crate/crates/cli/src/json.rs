//! JSON encodings: rationals as `"p/q"` strings, polynomials as
//! `{"x3*x4": "p/q"}`, multivectors as `{"deg": m, "terms": {"123": "p/q"}}`.
//! Objects are `BTreeMap`-backed, so keys come out sorted.

use darbouxlie::exactmath::fmt_q;
use darbouxlie::{Blade, MultiVector, Poly, RatMatrix, Q};
use serde_json::{json, Map, Value};

pub fn q(x: &Q) -> Value {
    Value::String(fmt_q(x))
}

pub fn vector(v: &[Q]) -> Value {
    Value::Array(v.iter().map(q).collect())
}

pub fn poly(p: &Poly) -> Value {
    Value::Object(
        p.to_pairs()
            .into_iter()
            .map(|(m, c)| (m, Value::String(c)))
            .collect(),
    )
}

pub fn polys(ps: &[Poly]) -> Value {
    Value::Array(ps.iter().map(poly).collect())
}

/// Blade key `123` for `e123`.
pub fn blade_key(b: Blade) -> String {
    b.indices().iter().map(|i| (i + 1).to_string()).collect()
}

pub fn multivector(w: &MultiVector) -> Value {
    let terms: Map<String, Value> = w.terms().map(|(b, c)| (blade_key(*b), q(c))).collect();
    json!({ "deg": w.degree(), "terms": terms })
}

pub fn matrix(m: &RatMatrix) -> Value {
    Value::Array(m.row_vecs().iter().map(|r| vector(r)).collect())
}
