//! JSON model files. The layout is published in `schema/model.schema.json`.
//!
//! Parsing walks a `serde_json::Value` by hand so that every rejection names
//! the offending field path.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::linalg::{c, CMat, C64};
use crate::model::{build_lattice, Bond, BondLabel, Boundary, DiagTerm, Geometry, IsingModel, Lattice, OnsiteTerm, PauliOp, PauliTerm, QubitModel};
use crate::qudit::QuditOperator;
use crate::transmute::{FieldKind, FieldSpec, LowSide};

pub const SCHEMA: &str = include_str!("../schema/model.schema.json");

#[derive(Debug, Clone, PartialEq)]
pub enum ModelFile {
    Qubit(QubitModel),
    Ising(IsingModel),
}

fn err(path: &str, message: impl Into<String>) -> Error {
    Error::Schema { path: path.to_string(), message: message.into() }
}

fn complex_json(z: C64) -> Value {
    json!([z.re, z.im])
}

fn lattice_json(lat: &Lattice) -> Value {
    let mut m = Map::new();
    m.insert("geometry".into(), json!(lat.geometry.name()));
    m.insert("boundary".into(), json!(lat.boundary.name()));
    match lat.geometry {
        Geometry::Chain => {
            m.insert("L".into(), json!(lat.sizes[0]));
            m.insert("stagger_b".into(), json!(lat.stagger_b));
        }
        Geometry::Custom => {
            m.insert("nsites".into(), json!(lat.nsites));
            let bonds: Vec<Value> = lat.bonds.iter().map(|b| json!({"i": b.i, "j": b.j, "label": b.label.name(), "weight": b.weight})).collect();
            m.insert("bonds".into(), Value::Array(bonds));
        }
        _ => {
            m.insert("Lx".into(), json!(lat.sizes[0]));
            m.insert("Ly".into(), json!(lat.sizes[1]));
        }
    }
    Value::Object(m)
}

fn matrix_json(m: &CMat) -> Value {
    Value::Array((0..m.nrows()).map(|i| Value::Array((0..m.ncols()).map(|j| complex_json(m[(i, j)])).collect())).collect())
}

fn field_json(f: &FieldSpec) -> Value {
    let mut m = Map::new();
    m.insert("kind".into(), json!(f.kind.name()));
    m.insert("phi".into(), json!(f.phi));
    m.insert("low".into(), json!(if f.low == LowSide::Bottom { "bottom" } else { "top" }));
    match f.kind {
        FieldKind::XofQ(q) => {
            m.insert("q".into(), json!(q));
        }
        FieldKind::ThetaField(t) => {
            m.insert("theta".into(), json!(t));
        }
        FieldKind::Custom => {
            m.insert("matrix".into(), matrix_json(&f.matrix.entries));
        }
        _ => {}
    }
    Value::Object(m)
}

pub fn to_json(model: &ModelFile) -> Value {
    match model {
        ModelFile::Qubit(q) => {
            let terms: Vec<Value> = q
                .terms
                .iter()
                .map(|t| {
                    let f: Vec<Value> = t.factors.iter().map(|(s, o)| json!({"site": s, "op": o.name()})).collect();
                    json!({"coeff": complex_json(t.coeff), "factors": f})
                })
                .collect();
            json!({"lattice": lattice_json(&q.lattice), "site_dim": 2, "constant": q.constant, "terms": terms})
        }
        ModelFile::Ising(m) => {
            let terms: Vec<Value> = m
                .diag_terms
                .iter()
                .map(|t| {
                    let f: Vec<Value> = t
                        .factors
                        .iter()
                        .map(|(s, op)| {
                            let d: Vec<Value> = (0..op.dim()).map(|k| complex_json(op.entries[(k, k)])).collect();
                            json!({"site": s, "diag": d})
                        })
                        .collect();
                    json!({"coeff": complex_json(t.coeff), "factors": f})
                })
                .collect();
            let onsite: Vec<Value> = m.onsite.iter().map(|o| json!({"site": o.site, "coeff": o.coeff, "matrix": matrix_json(&o.op.entries)})).collect();
            json!({
                "lattice": lattice_json(&m.lattice),
                "site_dim": m.site_dim,
                "constant": m.constant,
                "terms": terms,
                "onsite": onsite,
                "field": field_json(&m.field),
                "lambda": m.lambda,
            })
        }
    }
}

pub fn to_string(model: &ModelFile) -> String {
    serde_json::to_string_pretty(&to_json(model)).expect("values are finite")
}

fn get<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| err(&join(path, key), "missing field"))
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| err(path, "expected an object"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| err(path, "expected an array"))
}

fn as_f64(v: &Value, path: &str) -> Result<f64> {
    v.as_f64().filter(|x| x.is_finite()).ok_or_else(|| err(path, "expected a finite number"))
}

fn as_usize(v: &Value, path: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| err(path, "expected a non-negative integer"))
}

fn as_str<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| err(path, "expected a string"))
}

fn as_complex(v: &Value, path: &str) -> Result<C64> {
    let a = as_array(v, path)?;
    if a.len() != 2 {
        return Err(err(path, "expected [re, im]"));
    }
    Ok(c(as_f64(&a[0], &format!("{path}[0]"))?, as_f64(&a[1], &format!("{path}[1]"))?))
}

fn as_matrix(v: &Value, path: &str) -> Result<CMat> {
    let rows = as_array(v, path)?;
    let n = rows.len();
    let mut m = CMat::zeros(n, n);
    for (i, r) in rows.iter().enumerate() {
        let rp = format!("{path}[{i}]");
        let cols = as_array(r, &rp)?;
        if cols.len() != n {
            return Err(err(&rp, format!("expected {n} entries")));
        }
        for (j, z) in cols.iter().enumerate() {
            m[(i, j)] = as_complex(z, &format!("{rp}[{j}]"))?;
        }
    }
    Ok(m)
}

fn wrap<T>(r: Result<T>, path: &str) -> Result<T> {
    r.map_err(|e| match e {
        Error::Schema { .. } => e,
        other => err(path, other.to_string()),
    })
}

fn parse_lattice(v: &Value) -> Result<Lattice> {
    let path = "lattice";
    let o = as_object(v, path)?;
    let gp = join(path, "geometry");
    let geometry: Geometry = wrap(as_str(get(o, "geometry", path)?, &gp)?.parse(), &gp)?;
    let boundary = match o.get("boundary") {
        Some(b) => {
            let bp = join(path, "boundary");
            wrap(as_str(b, &bp)?.parse::<Boundary>(), &bp)?
        }
        None => Boundary::Open,
    };
    match geometry {
        Geometry::Chain => {
            let l = as_usize(get(o, "L", path)?, &join(path, "L"))?;
            let b = match o.get("stagger_b") {
                Some(x) => as_f64(x, &join(path, "stagger_b"))?,
                None => 0.0,
            };
            wrap(build_lattice(geometry, &[l], boundary, b), path)
        }
        Geometry::Custom => {
            let n = as_usize(get(o, "nsites", path)?, &join(path, "nsites"))?;
            let bp = join(path, "bonds");
            let mut bonds = Vec::new();
            for (k, b) in as_array(get(o, "bonds", path)?, &bp)?.iter().enumerate() {
                let p = format!("{bp}[{k}]");
                let bo = as_object(b, &p)?;
                let lp = join(&p, "label");
                let label: BondLabel = match bo.get("label") {
                    Some(l) => wrap(as_str(l, &lp)?.parse(), &lp)?,
                    None => BondLabel::Plain,
                };
                let weight = match bo.get("weight") {
                    Some(w) => as_f64(w, &join(&p, "weight"))?,
                    None => 1.0,
                };
                bonds.push(Bond { i: as_usize(get(bo, "i", &p)?, &join(&p, "i"))?, j: as_usize(get(bo, "j", &p)?, &join(&p, "j"))?, label, weight });
            }
            wrap(Lattice::custom(n, bonds), path)
        }
        _ => {
            let lx = as_usize(get(o, "Lx", path)?, &join(path, "Lx"))?;
            let ly = as_usize(get(o, "Ly", path)?, &join(path, "Ly"))?;
            wrap(build_lattice(geometry, &[lx, ly], boundary, 0.0), path)
        }
    }
}

fn parse_field(v: &Value) -> Result<FieldSpec> {
    let path = "field";
    let o = as_object(v, path)?;
    let kp = join(path, "kind");
    let kind = as_str(get(o, "kind", path)?, &kp)?;
    let phi = match o.get("phi") {
        Some(p) => as_f64(p, &join(path, "phi"))?,
        None => 0.0,
    };
    let low = match o.get("low").map(|l| as_str(l, &join(path, "low"))).transpose()? {
        None | Some("bottom") => LowSide::Bottom,
        Some("top") => LowSide::Top,
        Some(other) => return Err(err(&join(path, "low"), format!("unknown side `{other}`"))),
    };
    let f = match kind {
        "four_state_x" => FieldSpec::four_state_x(phi),
        "three_state_sym" => FieldSpec::three_state_sym(phi),
        "x_of_q" => wrap(FieldSpec::x_of_q(as_f64(get(o, "q", path)?, &join(path, "q"))?), path)?,
        "tilde_x" => FieldSpec::tilde_x(),
        "theta" => wrap(FieldSpec::theta(as_f64(get(o, "theta", path)?, &join(path, "theta"))?), path)?,
        "custom" => {
            let mp = join(path, "matrix");
            let m = as_matrix(get(o, "matrix", path)?, &mp)?;
            wrap(FieldSpec::custom(QuditOperator { entries: m }, low), &mp)?
        }
        other => return Err(err(&kp, format!("unknown field kind `{other}`"))),
    };
    Ok(f)
}

fn parse_qubit_terms(v: &Value, nsites: usize) -> Result<Vec<PauliTerm>> {
    let mut terms = Vec::new();
    for (k, t) in as_array(v, "terms")?.iter().enumerate() {
        let p = format!("terms[{k}]");
        let o = as_object(t, &p)?;
        let coeff = as_complex(get(o, "coeff", &p)?, &join(&p, "coeff"))?;
        let fp = join(&p, "factors");
        let mut factors = Vec::new();
        for (m, f) in as_array(get(o, "factors", &p)?, &fp)?.iter().enumerate() {
            let q = format!("{fp}[{m}]");
            let fo = as_object(f, &q)?;
            let site = as_usize(get(fo, "site", &q)?, &join(&q, "site"))?;
            if site >= nsites {
                return Err(err(&join(&q, "site"), format!("site {site} outside {nsites} sites")));
            }
            let op_path = join(&q, "op");
            let op: PauliOp = wrap(as_str(get(fo, "op", &q)?, &op_path)?.parse(), &op_path)?;
            factors.push((site, op));
        }
        terms.push(wrap(PauliTerm::new(coeff, factors), &p)?);
    }
    Ok(terms)
}

fn parse_ising_terms(v: &Value, nsites: usize, site_dim: usize) -> Result<Vec<DiagTerm>> {
    let mut terms = Vec::new();
    for (k, t) in as_array(v, "terms")?.iter().enumerate() {
        let p = format!("terms[{k}]");
        let o = as_object(t, &p)?;
        let coeff = as_complex(get(o, "coeff", &p)?, &join(&p, "coeff"))?;
        let fp = join(&p, "factors");
        let mut factors = Vec::new();
        for (m, f) in as_array(get(o, "factors", &p)?, &fp)?.iter().enumerate() {
            let q = format!("{fp}[{m}]");
            let fo = as_object(f, &q)?;
            let site = as_usize(get(fo, "site", &q)?, &join(&q, "site"))?;
            if site >= nsites {
                return Err(err(&join(&q, "site"), format!("site {site} outside {nsites} sites")));
            }
            let dp = join(&q, "diag");
            let diag = as_array(get(fo, "diag", &q)?, &dp)?;
            if diag.len() != site_dim {
                return Err(err(&dp, format!("expected {site_dim} entries")));
            }
            let vals = diag.iter().enumerate().map(|(i, z)| as_complex(z, &format!("{dp}[{i}]"))).collect::<Result<Vec<_>>>()?;
            factors.push((site, QuditOperator::diagonal(&vals)));
        }
        if factors.is_empty() {
            return Err(err(&fp, "a term needs at least one factor"));
        }
        terms.push(DiagTerm { coeff, factors });
    }
    Ok(terms)
}

fn parse_onsite(v: Option<&Value>) -> Result<Vec<OnsiteTerm>> {
    let Some(v) = v else { return Ok(Vec::new()) };
    let mut out = Vec::new();
    for (k, t) in as_array(v, "onsite")?.iter().enumerate() {
        let p = format!("onsite[{k}]");
        let o = as_object(t, &p)?;
        out.push(OnsiteTerm {
            site: as_usize(get(o, "site", &p)?, &join(&p, "site"))?,
            coeff: as_f64(get(o, "coeff", &p)?, &join(&p, "coeff"))?,
            op: QuditOperator { entries: as_matrix(get(o, "matrix", &p)?, &join(&p, "matrix"))? },
        });
    }
    Ok(out)
}

pub fn from_json(v: &Value) -> Result<ModelFile> {
    let o = as_object(v, "")?;
    for key in o.keys() {
        if !["lattice", "site_dim", "constant", "terms", "onsite", "field", "lambda"].contains(&key.as_str()) {
            return Err(err(key, "unknown top-level field"));
        }
    }
    let lattice = parse_lattice(get(o, "lattice", "")?)?;
    let site_dim = match o.get("site_dim") {
        Some(d) => as_usize(d, "site_dim")?,
        None => 2,
    };
    let constant = match o.get("constant") {
        Some(x) => as_f64(x, "constant")?,
        None => 0.0,
    };
    if site_dim == 2 {
        for key in ["field", "lambda", "onsite"] {
            if o.contains_key(key) {
                return Err(err(key, "only valid for site_dim 3 or 4"));
            }
        }
        let terms = parse_qubit_terms(get(o, "terms", "")?, lattice.nsites)?;
        let model = QubitModel { lattice, terms, constant };
        wrap(model.validate(), "terms")?;
        return Ok(ModelFile::Qubit(model));
    }
    if !(3..=4).contains(&site_dim) && !o.get("field").map(|f| f.get("kind") == Some(&json!("custom"))).unwrap_or(false) {
        return Err(err("site_dim", format!("unsupported site dimension {site_dim}")));
    }
    let field = parse_field(get(o, "field", "")?)?;
    let lambda = match o.get("lambda") {
        None | Some(Value::Null) => None,
        Some(x) => Some(as_f64(x, "lambda")?),
    };
    let diag_terms = parse_ising_terms(get(o, "terms", "")?, lattice.nsites, site_dim)?;
    let onsite = parse_onsite(o.get("onsite"))?;
    let model = IsingModel { lattice, site_dim, diag_terms, onsite, constant, field, lambda };
    wrap(model.validate(), "terms")?;
    Ok(ModelFile::Ising(model))
}

pub fn from_str(text: &str) -> Result<ModelFile> {
    let v: Value = serde_json::from_str(text).map_err(|e| err(&format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    from_json(&v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{standard_model, StandardModel};
    use crate::transmute::{transmute_qubit_model, TransmutePath};

    fn heisenberg4() -> QubitModel {
        let lat = build_lattice(Geometry::Chain, &[4], Boundary::Periodic, 0.0).unwrap();
        standard_model(StandardModel::Heisenberg { j: 1.0 }, &lat).unwrap()
    }

    #[test]
    fn qubit_roundtrip() {
        let m = ModelFile::Qubit(heisenberg4());
        assert_eq!(from_str(&to_string(&m)).unwrap(), m);
    }

    #[test]
    fn ising_roundtrip() {
        let q = heisenberg4();
        let ising = transmute_qubit_model(&q, 0.3, TransmutePath::FourState).unwrap().with_lambda(5.0);
        let m = ModelFile::Ising(ising);
        assert_eq!(from_str(&to_string(&m)).unwrap(), m);
        let lat = build_lattice(Geometry::Chain, &[3], Boundary::Open, 0.0).unwrap();
        let xy = standard_model(StandardModel::Xy { j: 1.0 }, &lat).unwrap();
        let three = ModelFile::Ising(transmute_qubit_model(&xy, 0.0, TransmutePath::ThreeState).unwrap());
        assert_eq!(from_str(&to_string(&three)).unwrap(), three);
    }

    #[test]
    fn custom_lattice_roundtrip() {
        let lat = Lattice::custom(3, vec![Bond { i: 0, j: 2, label: BondLabel::Axis(crate::model::Axis::Y), weight: 0.5 }]).unwrap();
        let m = ModelFile::Qubit(QubitModel::new(lat, vec![PauliTerm::real(1.0, &[(0, PauliOp::Y), (2, PauliOp::Y)])]).unwrap());
        assert_eq!(from_str(&to_string(&m)).unwrap(), m);
    }

    #[test]
    fn bad_op_names_the_field() {
        let text = r#"{"lattice":{"geometry":"chain","L":2},"terms":[{"coeff":[1,0],"factors":[{"site":0,"op":"sq"}]}]}"#;
        match from_str(text) {
            Err(Error::Schema { path, message }) => {
                assert_eq!(path, "terms[0].factors[0].op");
                assert!(message.contains("sq"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn non_hermitian_file_rejected() {
        let text = r#"{"lattice":{"geometry":"chain","L":2},"terms":[{"coeff":[1,0],"factors":[{"site":0,"op":"plus"},{"site":1,"op":"minus"}]}]}"#;
        match from_str(text) {
            Err(Error::Schema { path, message }) => {
                assert_eq!(path, "terms");
                assert!(message.contains("hermitian"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn syntax_errors_report_position() {
        match from_str("{\n  \"lattice\": ,\n}") {
            Err(Error::Schema { path, .. }) => assert!(path.starts_with("line 2")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn schema_lists_every_emitted_key() {
        let schema: Value = serde_json::from_str(SCHEMA).unwrap();
        let props = schema["properties"].as_object().unwrap();
        let q = heisenberg4();
        let ising = transmute_qubit_model(&q, 0.0, TransmutePath::FourState).unwrap();
        for m in [ModelFile::Qubit(q), ModelFile::Ising(ising)] {
            for key in to_json(&m).as_object().unwrap().keys() {
                assert!(props.contains_key(key), "schema lacks `{key}`");
            }
        }
        let lattice_props = schema["$defs"]["lattice"]["properties"].as_object().unwrap();
        for key in ["geometry", "L", "Lx", "Ly", "boundary", "stagger_b", "nsites", "bonds"] {
            assert!(lattice_props.contains_key(key));
        }
    }
}
