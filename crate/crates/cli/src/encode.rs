use grfit_core::group_algebra::{CentralElement, GrMatrix, GroupAlgebra, GroupRingElement};
use grfit_core::scalars::{CycloElement, Rational};
use serde_json::{json, Map, Value};

pub fn rat(q: &Rational) -> Value {
    Value::String(format!("{}/{}", q.numer(), q.denom()))
}

pub fn scalar(c: &CycloElement) -> Value {
    match c.to_rational() {
        Some(q) => rat(&q),
        None => {
            json!({ "m": c.conductor(), "coeffs": c.coeffs().iter().map(rat).collect::<Vec<_>>() })
        }
    }
}

pub fn gr(x: &GroupRingElement) -> Value {
    let mut m = Map::new();
    for (g, c) in x.coeffs().iter().enumerate() {
        if !c.is_zero() {
            m.insert(g.to_string(), scalar(c));
        }
    }
    json!({ "coeffs": m })
}

pub fn gr_matrix(m: &GrMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(gr).collect()))
            .collect(),
    )
}

/// Both the per-character components and the group-ring coefficients.
pub fn central(ga: &GroupAlgebra, z: &CentralElement) -> Value {
    json!({
        "components": z.comps().iter().map(scalar).collect::<Vec<_>>(),
        "coefficients": gr(&ga.to_group_ring(z)),
    })
}

pub fn opt_central(ga: &GroupAlgebra, z: Option<&CentralElement>) -> Value {
    z.map_or(Value::Null, |z| central(ga, z))
}

pub fn serde<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serialisable")
}
