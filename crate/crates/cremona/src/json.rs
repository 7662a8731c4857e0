//! JSON encodings of fields, elements, polynomials, matrices and maps, a compact
//! text syntax for field towers, and the report envelope used by the CLI.

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::algebra::{poly_ring, Coef, Elem, Field, Mat, Poly, Ring, Scalar};
use crate::error::{Error, Result};
use crate::maps::{AffinePairMap, ProjectiveMap};

pub const SCHEMA: u32 = 1;

pub fn coef_to_json(c: &Coef) -> Value {
    match c {
        Coef::M(v) => json!(v),
        Coef::Q(_) => json!(c.to_string()),
    }
}

fn coef_from_json(f: &Field, v: &Value) -> Result<Coef> {
    let s = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        _ => return Err(Error::parse("coefficient", v.to_string())),
    };
    Ok(f.prime().parse(&s)?)
}

/// An element as its coefficient array over the prime field.
pub fn elem_to_json(e: &Elem) -> Value {
    Value::Array(e.coeffs().iter().map(coef_to_json).collect())
}

pub fn elem_from_json(f: &Field, v: &Value) -> Result<Elem> {
    let arr = v.as_array().ok_or_else(|| Error::parse("element", "expected a coefficient array"))?;
    f.elem(arr.iter().map(|c| coef_from_json(f, c)).collect::<Result<_>>()?)
}

/// `{"char": p, "steps": [[c0, ..., cd], ...], "names": [...]}` where each `ci` is a
/// coefficient array over the field built by the previous steps.
pub fn field_to_json(f: &Field) -> Value {
    let mut dim = 1usize;
    let mut steps = Vec::new();
    for i in 0..f.num_steps() {
        let coeffs: Vec<Value> = f.step_poly(i).iter().map(|c| Value::Array(c.coeffs()[..dim].iter().map(coef_to_json).collect())).collect();
        steps.push(Value::Array(coeffs));
        dim *= f.step_degree(i);
    }
    json!({ "char": f.characteristic(), "steps": steps, "names": f.names() })
}

pub fn field_from_json(v: &Value) -> Result<Field> {
    let p = v.get("char").and_then(Value::as_u64).ok_or_else(|| Error::parse("field spec", "missing \"char\""))?;
    let mut f = Field::base(p)?;
    let empty = vec![];
    for step in v.get("steps").and_then(Value::as_array).unwrap_or(&empty) {
        let cs = step.as_array().ok_or_else(|| Error::parse("field spec", "a step is not an array"))?;
        let coeffs = cs.iter().map(|c| elem_from_json(&f, c)).collect::<Result<Vec<_>>>()?;
        f = f.extend(&coeffs)?;
    }
    if let Some(names) = v.get("names").and_then(Value::as_array) {
        let ns: Vec<&str> = names.iter().filter_map(Value::as_str).collect();
        if ns.len() != f.num_steps() {
            return Err(Error::parse("field spec", "one name per step is required"));
        }
        f = f.with_names(&ns);
    }
    Ok(f)
}

/// Parses a field from JSON (when the text starts with `{`) or from the text syntax
/// `Q`, `F5`, `F3[i]/(i^2+1)`, `Q[s]/(s^2-2)[r]/(r^2-3)`.
pub fn parse_field(src: &str) -> Result<Field> {
    let src = src.trim();
    if src.starts_with('{') {
        let v: Value = serde_json::from_str(src).map_err(|e| Error::parse("field spec", e.to_string()))?;
        return field_from_json(&v);
    }
    let bad = |m: &str| Error::parse(format!("field '{src}'"), m.to_string());
    let (base, mut rest) = match src.find('[') {
        Some(i) => (&src[..i], &src[i..]),
        None => (src, ""),
    };
    let mut f = match base {
        "Q" => Field::rationals(),
        b if b.starts_with('F') => Field::prime_field(b[1..].parse().map_err(|_| bad("bad characteristic"))?)?,
        _ => return Err(bad("expected Q or F<p>")),
    };
    let mut names: Vec<String> = Vec::new();
    while !rest.is_empty() {
        let close = rest.find(']').ok_or_else(|| bad("missing ']'"))?;
        let name = rest[1..close].trim().to_string();
        let after = rest[close + 1..].strip_prefix("/(").ok_or_else(|| bad("expected '/(' after the generator name"))?;
        let mut depth = 1;
        let end = after
            .char_indices()
            .find(|&(_, c)| {
                depth += match c {
                    '(' => 1,
                    ')' => -1,
                    _ => 0,
                };
                depth == 0
            })
            .map(|(i, _)| i)
            .ok_or_else(|| bad("unbalanced parentheses"))?;
        let ring = poly_ring(&f, &[name.as_str()]);
        let p = crate::algebra::parse::parse_poly(&ring, &after[..end])?;
        let deg = p.degree_in(0);
        let coeffs: Vec<Elem> = (0..=deg).map(|e| p.coeffs_in(0).get(&e).and_then(|c| c.as_constant()).unwrap_or_else(|| f.zero())).collect();
        f = f.extend(&coeffs)?;
        names.push(name);
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        f = f.with_names(&refs);
        rest = &after[end + 1..];
    }
    Ok(f)
}

/// `{"vars": [...], "terms": [[e1, ..., en, coeff], ...]}` with terms in decreasing order.
pub fn poly_to_json(p: &Poly<Elem>) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .rev()
        .map(|(m, c)| {
            let mut t: Vec<Value> = m.0.iter().map(|e| json!(e)).collect();
            t.push(elem_to_json(c));
            Value::Array(t)
        })
        .collect();
    json!({ "vars": p.ring().names(), "terms": terms })
}

pub fn poly_from_json(ring: &Ring<Elem>, v: &Value) -> Result<Poly<Elem>> {
    let f = ring.base();
    let terms = v.get("terms").and_then(Value::as_array).ok_or_else(|| Error::parse("polynomial", "missing \"terms\""))?;
    let n = ring.nvars();
    let mut out = ring.zero();
    for t in terms {
        let t = t.as_array().filter(|t| t.len() == n + 1).ok_or_else(|| Error::parse("polynomial", "term of the wrong length"))?;
        let exps = t[..n].iter().map(|e| e.as_u64().map(|e| e as u32)).collect::<Option<Vec<u32>>>().ok_or_else(|| Error::parse("polynomial", "bad exponent"))?;
        let c = elem_from_json(f, &t[n])?;
        out = out.add(&ring.term(crate::algebra::Mono(exps), c));
    }
    Ok(out)
}

/// Rows of coefficient arrays.
pub fn mat_to_json(m: &Mat<Elem>) -> Value {
    Value::Array(m.to_rows().iter().map(|r| Value::Array(r.iter().map(elem_to_json).collect())).collect())
}

/// Rows of printed entries, for matrices over function fields.
pub fn mat_to_strings<S: Scalar + std::fmt::Display>(m: &Mat<S>) -> Value {
    Value::Array(m.to_rows().iter().map(|r| Value::Array(r.iter().map(|e| json!(e.to_string())).collect())).collect())
}

pub fn map_to_json(f: &ProjectiveMap) -> Value {
    json!({
        "degree": f.degree(),
        "components": f.components().iter().map(poly_to_json).collect::<Vec<_>>(),
        "text": f.to_string(),
    })
}

pub fn affine_to_json(f: &AffinePairMap) -> Value {
    json!({
        "x": { "num": poly_to_json(f.fx.numer()), "den": poly_to_json(f.fx.denom()) },
        "y": { "num": poly_to_json(f.fy.numer()), "den": poly_to_json(f.fy.denom()) },
        "text": f.to_string(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub value: Value,
}

/// The machine-readable outcome of a CLI run. Field order and contents depend only on
/// the inputs, so identical runs give identical bytes.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub command: String,
    pub inputs: Map<String, Value>,
    pub results: Vec<CheckResult>,
    pub pass: bool,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport { schema: SCHEMA, command: command.into(), inputs: Map::new(), results: vec![], pass: true }
    }

    pub fn input(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.inputs.insert(key.into(), v.into());
        self
    }

    /// Records a check; the report passes only if every check does.
    pub fn check(&mut self, name: &str, pass: bool, value: impl Into<Value>) -> &mut Self {
        self.pass &= pass;
        self.results.push(CheckResult { name: name.into(), pass, value: value.into() });
        self
    }

    /// Records a value that is reported but not judged.
    pub fn value(&mut self, name: &str, value: impl Into<Value>) -> &mut Self {
        self.check(name, true, value)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly;

    #[test]
    fn field_specs_round_trip() {
        for s in ["Q", "F5", "F3[i]/(i^2+1)", "Q[s]/(s^2-2)[r]/(r^2-3)", "F2[a]/(a^2+a+1)"] {
            let f = parse_field(s).unwrap();
            let g = field_from_json(&field_to_json(&f)).unwrap();
            assert_eq!(f.describe(), g.describe(), "{s}");
            assert_eq!(parse_field(&field_to_json(&f).to_string()).unwrap().describe(), f.describe());
        }
        assert_eq!(parse_field("F3[i]/(i^2+1)").unwrap().order(), Some(9));
        assert!(parse_field("F3[i]/(i^2-1)").is_err());
        assert!(parse_field("F4").is_err());
    }

    #[test]
    fn rationals_are_strings() {
        let q = Field::rationals();
        let e = q.parse_coef("-3/4").unwrap();
        assert_eq!(elem_to_json(&e), json!(["-3/4"]));
        assert_eq!(elem_from_json(&q, &json!(["-3/4"])).unwrap(), e);
    }

    #[test]
    fn polys_round_trip() {
        let f = parse_field("F3[i]/(i^2+1)").unwrap();
        let r = poly_ring(&f, &["x", "y", "z"]);
        let p = parse_poly(&r, "x^2 + i*y*z - z^2").unwrap();
        let v = poly_to_json(&p);
        assert_eq!(poly_from_json(&r, &v).unwrap(), p);
        assert_eq!(v["vars"], json!(["x", "y", "z"]));
    }

    #[test]
    fn report_passes_only_if_all_checks_do() {
        let mut r = RunReport::new("test");
        r.input("a", 1).check("one", true, 1).value("info", "x");
        assert!(r.pass);
        r.check("two", false, json!(null));
        assert!(!r.pass);
        assert!(r.to_json().starts_with("{\n  \"schema\": 1"));
    }
}
