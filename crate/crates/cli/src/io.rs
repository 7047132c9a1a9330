//! File formats: Gram matrices as JSON, enumeration tables as CSV, numeric
//! Maass coefficient files, and exact values as JSON strings.

use std::path::Path;

use anyhow::{bail, Context, Result};
use ortho_lift::coeffs::{parse_numeric_maass, NumericMaassData};
use ortho_lift::exactnum::{rat_string, HeckeScalar, Rat, RationalFunction, TPoly};
use ortho_lift::lattice::{GramLattice, LatticeVector};
use serde_json::{json, Value};

/// Accepts either a bare matrix `[[2, -1, …], …]` or `{"gram": [[…]]}`.
pub fn parse_gram_json(text: &str) -> Result<GramLattice> {
    let v: Value = serde_json::from_str(text).context("Gram file is not valid JSON")?;
    let rows = match &v {
        Value::Array(_) => &v,
        Value::Object(m) => m.get("gram").context("Gram JSON object needs a \"gram\" field")?,
        _ => bail!("Gram JSON must be a matrix or an object with a \"gram\" field"),
    };
    let gram: Vec<Vec<i64>> = serde_json::from_value(rows.clone()).context("Gram matrix must hold integers")?;
    Ok(GramLattice::new(gram)?)
}

pub fn load_gram(path: &Path) -> Result<GramLattice> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_gram_json(&text).with_context(|| format!("in {}", path.display()))
}

pub fn gram_json(lat: &GramLattice) -> Value {
    json!({ "gram": lat.gram() })
}

/// Columns `norm,content,x1,…,xN`.
pub fn enumeration_csv(rank: usize, vectors: &[LatticeVector]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["norm".to_string(), "content".to_string()];
    header.extend((1..=rank).map(|i| format!("x{i}")));
    w.write_record(&header)?;
    for v in vectors {
        let mut rec = vec![v.norm().to_string(), v.content().to_string()];
        rec.extend(v.coords().iter().map(|c| c.to_string()));
        w.write_record(&rec)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn parse_enumeration_csv(text: &str) -> Result<Vec<(u64, u64, Vec<i64>)>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let mut it = rec.iter();
        let norm = it.next().context("missing norm")?.parse()?;
        let content = it.next().context("missing content")?.parse()?;
        let coords = it.map(|c| c.parse()).collect::<Result<_, _>>()?;
        out.push((norm, content, coords));
    }
    Ok(out)
}

pub fn load_maass_data(path: &Path) -> Result<NumericMaassData> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_numeric_maass(&text).with_context(|| format!("in {}", path.display()))
}

pub fn rat_json(x: &Rat) -> Value {
    Value::String(rat_string(x))
}

/// `{"display": "16Λ^2 + 238", "coeffs": ["238", "0", "16"]}`, lowest degree first.
pub fn scalar_json(x: &HeckeScalar) -> Value {
    json!({ "display": x.to_string(), "coeffs": x.to_strings() })
}

pub fn tpoly_json(p: &TPoly) -> Value {
    json!({ "display": p.to_string(), "coeffs": p.to_strings(), "degree": p.degree() })
}

pub fn ratfunc_json(f: &RationalFunction) -> Value {
    json!({ "numerator": tpoly_json(f.numerator()), "denominator": tpoly_json(f.denominator()) })
}

/// Round-trip for [`scalar_json`].
pub fn scalar_from_json(v: &Value) -> Result<HeckeScalar> {
    let coeffs: Vec<String> = serde_json::from_value(v.get("coeffs").context("missing \"coeffs\"")?.clone())?;
    Ok(HeckeScalar::from_strings(&coeffs)?)
}
