//! The interchange document format.
//!
//! A document is a JSON object with fields `format` ("jetdoc/1"), `kind`
//! ("metric" or "hpoly"), `dim`, `order`, an optional `label`, and one
//! coefficient table: `entries` (metric: keys "i,j" with 1 <= i <= j,
//! values are multi-index -> rational tables) or `coeffs` (hpoly: a single
//! multi-index -> rational table).
//!
//! Multi-index keys are comma-separated exponent lists ("2,1"); rationals
//! are canonical "p/q" or integer strings and are never converted to
//! floats. Serialization is canonical — fixed field order, entry keys by
//! (i, j), multi-index keys in graded lexicographic order — so round trips
//! are byte-identical. Loading rejects duplicate keys, non-canonical
//! rationals, degrees above the order, and asymmetric metric keys, naming
//! the offending key.

use std::fmt;
use std::path::Path;

use serde::de::{self, Deserialize, Deserializer, MapAccess, Visitor};
use serde_json::{Map, Value};

use jetmoduli::jet::{JetScalar, MultiIndex};
use jetmoduli::metric::MetricJet;
use jetmoduli::normal_form::HPoly;
use jetmoduli::rational::{format_canonical, parse_canonical};

pub const FORMAT_TAG: &str = "jetdoc/1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    Metric(MetricJet),
    HPoly(HPoly),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetDocument {
    pub label: Option<String>,
    pub payload: Payload,
}

impl JetDocument {
    pub fn metric(g: MetricJet, label: Option<String>) -> Self {
        JetDocument {
            label,
            payload: Payload::Metric(g),
        }
    }

    pub fn hpoly(h: HPoly, label: Option<String>) -> Self {
        JetDocument {
            label,
            payload: Payload::HPoly(h),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match &self.payload {
            Payload::Metric(_) => "metric",
            Payload::HPoly(_) => "hpoly",
        }
    }

    pub fn as_metric(&self) -> Result<&MetricJet, String> {
        match &self.payload {
            Payload::Metric(g) => Ok(g),
            Payload::HPoly(_) => Err("this command expects a metric document".into()),
        }
    }
}

// ---------------------------------------------------------------------------
// Raw layer: JSON structure with duplicate detection, before validation.
// ---------------------------------------------------------------------------

struct RawTable(Vec<(String, String)>);

impl<'de> Deserialize<'de> for RawTable {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = RawTable;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a coefficient table (object of rational strings)")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Self::Value, A::Error> {
                let mut out: Vec<(String, String)> = Vec::new();
                while let Some((k, v)) = map.next_entry::<String, String>()? {
                    if out.iter().any(|(seen, _)| *seen == k) {
                        return Err(de::Error::custom(format!("duplicate key `{k}`")));
                    }
                    out.push((k, v));
                }
                Ok(RawTable(out))
            }
        }
        d.deserialize_map(V)
    }
}

struct RawEntries(Vec<(String, RawTable)>);

impl<'de> Deserialize<'de> for RawEntries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = RawEntries;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a table of metric entries")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Self::Value, A::Error> {
                let mut out: Vec<(String, RawTable)> = Vec::new();
                while let Some(k) = map.next_key::<String>()? {
                    if out.iter().any(|(seen, _)| *seen == k) {
                        return Err(de::Error::custom(format!("duplicate key `{k}`")));
                    }
                    let v = map.next_value::<RawTable>()?;
                    out.push((k, v));
                }
                Ok(RawEntries(out))
            }
        }
        d.deserialize_map(V)
    }
}

#[derive(Default)]
struct RawDoc {
    format: Option<String>,
    kind: Option<String>,
    dim: Option<u64>,
    order: Option<u64>,
    label: Option<String>,
    entries: Option<RawEntries>,
    coeffs: Option<RawTable>,
}

impl<'de> Deserialize<'de> for RawDoc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = RawDoc;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a jet document object")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Self::Value, A::Error> {
                let mut doc = RawDoc::default();
                while let Some(key) = map.next_key::<String>()? {
                    macro_rules! set {
                        ($field:ident, $ty:ty) => {{
                            if doc.$field.is_some() {
                                return Err(de::Error::custom(format!(
                                    "duplicate key `{key}`"
                                )));
                            }
                            doc.$field = Some(map.next_value::<$ty>()?);
                        }};
                    }
                    match key.as_str() {
                        "format" => set!(format, String),
                        "kind" => set!(kind, String),
                        "dim" => set!(dim, u64),
                        "order" => set!(order, u64),
                        "label" => set!(label, String),
                        "entries" => set!(entries, RawEntries),
                        "coeffs" => set!(coeffs, RawTable),
                        other => {
                            return Err(de::Error::custom(format!("unknown field `{other}`")))
                        }
                    }
                }
                Ok(doc)
            }
        }
        d.deserialize_map(V)
    }
}

// ---------------------------------------------------------------------------
// Validation into typed payloads.
// ---------------------------------------------------------------------------

fn parse_multi_index(key: &str, dim: usize, order: u32, at: &str) -> Result<MultiIndex, String> {
    let parts: Vec<&str> = key.split(',').collect();
    if parts.len() != dim {
        return Err(format!(
            "{at}[\"{key}\"]: multi-index has {} entries, expected {dim}",
            parts.len()
        ));
    }
    let mut exps = Vec::with_capacity(dim);
    for p in &parts {
        let e: u32 = p
            .parse()
            .map_err(|_| format!("{at}[\"{key}\"]: invalid exponent `{p}`"))?;
        exps.push(e);
    }
    let idx = MultiIndex::new(exps);
    if idx.degree() > order {
        return Err(format!(
            "{at}[\"{key}\"]: degree {} is above the jet order {order}",
            idx.degree()
        ));
    }
    Ok(idx)
}

fn parse_table(
    table: &RawTable,
    dim: usize,
    order: u32,
    at: &str,
) -> Result<JetScalar, String> {
    let mut coeffs = Vec::with_capacity(table.0.len());
    for (key, value) in &table.0 {
        let idx = parse_multi_index(key, dim, order, at)?;
        let c = parse_canonical(value).map_err(|e| format!("{at}[\"{key}\"]: {e}"))?;
        coeffs.push((idx, c));
    }
    JetScalar::from_coeffs(dim, order, coeffs).map_err(|e| format!("{at}: {e}"))
}

pub fn parse_document(text: &str) -> Result<JetDocument, String> {
    let mut de = serde_json::Deserializer::from_str(text);
    let raw = RawDoc::deserialize(&mut de).map_err(|e| e.to_string())?;
    de.end().map_err(|e| e.to_string())?;

    let format = raw.format.ok_or("missing field `format`")?;
    if format != FORMAT_TAG {
        return Err(format!("unsupported format `{format}` (expected `{FORMAT_TAG}`)"));
    }
    let kind = raw.kind.ok_or("missing field `kind`")?;
    let dim = raw.dim.ok_or("missing field `dim`")? as usize;
    if dim == 0 {
        return Err("`dim` must be at least 1".into());
    }
    let order_u64 = raw.order.ok_or("missing field `order`")?;
    let order: u32 = order_u64
        .try_into()
        .map_err(|_| format!("`order` {order_u64} is out of range"))?;

    match kind.as_str() {
        "metric" => {
            if raw.coeffs.is_some() {
                return Err("metric documents use `entries`, not `coeffs`".into());
            }
            let entries = raw.entries.ok_or("missing field `entries`")?;
            let mut slots: Vec<JetScalar> =
                vec![JetScalar::zero(dim, order); dim * (dim + 1) / 2];
            for (key, table) in &entries.0 {
                let (i, j) = parse_pair_key(key, dim)?;
                let at = format!("entries[\"{key}\"]");
                let series = parse_table(table, dim, order, &at)?;
                let slot = pair_slot(dim, i, j);
                if !slots[slot].is_zero() {
                    return Err(format!("entries[\"{key}\"]: duplicate metric entry"));
                }
                slots[slot] = series;
            }
            let g = MetricJet::new(dim, order, slots).map_err(|e| e.to_string())?;
            Ok(JetDocument::metric(g, raw.label))
        }
        "hpoly" => {
            if raw.entries.is_some() {
                return Err("hpoly documents use `coeffs`, not `entries`".into());
            }
            if dim != 2 {
                return Err("hpoly documents must have dim = 2".into());
            }
            let coeffs = raw.coeffs.ok_or("missing field `coeffs`")?;
            let series = parse_table(&coeffs, 2, order, "coeffs")?;
            let h = HPoly::new(series).map_err(|e| e.to_string())?;
            Ok(JetDocument::hpoly(h, raw.label))
        }
        other => Err(format!("unknown kind `{other}` (expected `metric` or `hpoly`)")),
    }
}

fn parse_pair_key(key: &str, dim: usize) -> Result<(usize, usize), String> {
    let err = || format!("entries[\"{key}\"]: expected a metric key \"i,j\" with 1 <= i <= j <= {dim}");
    let (a, b) = key.split_once(',').ok_or_else(err)?;
    let i: usize = a.parse().map_err(|_| err())?;
    let j: usize = b.parse().map_err(|_| err())?;
    if i < 1 || j < i || j > dim {
        return Err(err());
    }
    Ok((i - 1, j - 1))
}

fn pair_slot(dim: usize, i: usize, j: usize) -> usize {
    i * dim - i * (i + 1) / 2 + j
}

// ---------------------------------------------------------------------------
// Canonical rendering.
// ---------------------------------------------------------------------------

fn table_value(series: &JetScalar) -> Value {
    let mut table = Map::new();
    for (idx, c) in series.terms() {
        table.insert(idx.to_string(), Value::String(format_canonical(c)));
    }
    Value::Object(table)
}

/// The document as a canonical JSON value (fixed field order; coefficient
/// keys in graded-lex order; zero series omitted).
pub fn document_value(doc: &JetDocument) -> Value {
    let mut root = Map::new();
    root.insert("format".into(), Value::String(FORMAT_TAG.into()));
    root.insert("kind".into(), Value::String(doc.kind_name().into()));
    match &doc.payload {
        Payload::Metric(g) => {
            root.insert("dim".into(), Value::from(g.dim() as u64));
            root.insert("order".into(), Value::from(u64::from(g.order())));
            if let Some(label) = &doc.label {
                root.insert("label".into(), Value::String(label.clone()));
            }
            let mut entries = Map::new();
            for i in 0..g.dim() {
                for j in i..g.dim() {
                    let series = g.entry(i, j);
                    if series.is_zero() {
                        continue;
                    }
                    entries.insert(format!("{},{}", i + 1, j + 1), table_value(series));
                }
            }
            root.insert("entries".into(), Value::Object(entries));
        }
        Payload::HPoly(h) => {
            root.insert("dim".into(), Value::from(2u64));
            root.insert("order".into(), Value::from(u64::from(h.order())));
            if let Some(label) = &doc.label {
                root.insert("label".into(), Value::String(label.clone()));
            }
            root.insert("coeffs".into(), table_value(h.series()));
        }
    }
    Value::Object(root)
}

pub fn render(doc: &JetDocument) -> String {
    let mut out = serde_json::to_string_pretty(&document_value(doc)).expect("valid JSON value");
    out.push('\n');
    out
}

pub fn load(path: &Path) -> Result<JetDocument, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    parse_document(&text).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn save(doc: &JetDocument, path: &Path) -> Result<(), String> {
    std::fs::write(path, render(doc)).map_err(|e| format!("{}: {e}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use jetmoduli::rational::rat;

    fn flat_doc_text() -> String {
        r#"{
  "format": "jetdoc/1",
  "kind": "metric",
  "dim": 2,
  "order": 2,
  "entries": {
    "1,1": {
      "0,0": "1"
    },
    "2,2": {
      "0,0": "1"
    }
  }
}
"#
        .to_string()
    }

    #[test]
    fn flat_document_loads_to_identity_constant_term() {
        let doc = parse_document(&flat_doc_text()).unwrap();
        let g = doc.as_metric().unwrap();
        assert!(g.is_identity_frame());
        assert_eq!(*g, MetricJet::flat(2, 2));
    }

    #[test]
    fn save_load_round_trip_is_byte_identical() {
        let text = flat_doc_text();
        let doc = parse_document(&text).unwrap();
        assert_eq!(render(&doc), text);
        // And for something with labels and fractions:
        let h = HPoly::constant(rat(-1, 3), 2);
        let g = jetmoduli::normal_form::metric_from_h(&h, 4);
        let doc = JetDocument::metric(g, Some("sphere-ish".into()));
        let rendered = render(&doc);
        let reparsed = parse_document(&rendered).unwrap();
        assert_eq!(reparsed, doc);
        assert_eq!(render(&reparsed), rendered);
    }

    #[test]
    fn non_canonical_rational_is_rejected_naming_the_key() {
        let text = flat_doc_text().replace("\"0,0\": \"1\"", "\"0,0\": \"2/4\"");
        let err = parse_document(&text).unwrap_err();
        assert!(err.contains("entries[\"1,1\"][\"0,0\"]"), "{err}");
        assert!(err.contains("2/4"), "{err}");
    }

    #[test]
    fn duplicate_keys_are_rejected() {
        let text = flat_doc_text().replace(
            "\"0,0\": \"1\"\n    },\n    \"2,2\"",
            "\"0,0\": \"1\"\n    },\n    \"1,1\": {\n      \"0,0\": \"1\"\n    },\n    \"2,2\"",
        );
        let err = parse_document(&text).unwrap_err();
        assert!(err.contains("duplicate key `1,1`"), "{err}");
        let text = flat_doc_text().replace("\"dim\": 2,", "\"dim\": 2,\n  \"dim\": 2,");
        assert!(parse_document(&text).unwrap_err().contains("duplicate"));
    }

    #[test]
    fn degree_above_order_is_rejected() {
        let text = flat_doc_text().replace("\"0,0\": \"1\"", "\"0,0\": \"1\", \"3,0\": \"1\"");
        let err = parse_document(&text).unwrap_err();
        assert!(err.contains("degree 3 is above the jet order 2"), "{err}");
    }

    #[test]
    fn asymmetric_metric_keys_are_rejected() {
        let text = flat_doc_text().replace("\"2,2\"", "\"2,1\"");
        let err = parse_document(&text).unwrap_err();
        assert!(err.contains("1 <= i <= j"), "{err}");
    }

    #[test]
    fn non_spd_constant_term_is_rejected() {
        let text = flat_doc_text().replace("\"0,0\": \"1\"", "\"0,0\": \"-1\"");
        let err = parse_document(&text).unwrap_err();
        assert!(err.contains("positive definite"), "{err}");
    }

    #[test]
    fn hpoly_documents_round_trip() {
        let h = HPoly::new(
            JetScalar::from_coeffs(
                2,
                3,
                vec![(MultiIndex::new(vec![1, 0]), rat(1, 2))],
            )
            .unwrap(),
        )
        .unwrap();
        let doc = JetDocument::hpoly(h, None);
        let rendered = render(&doc);
        assert_eq!(parse_document(&rendered).unwrap(), doc);
        assert!(rendered.contains("\"coeffs\""));
    }

    #[test]
    fn trailing_garbage_is_rejected() {
        let text = format!("{}{}", flat_doc_text(), "{}");
        assert!(parse_document(&text).is_err());
    }

    #[test]
    fn structural_mistakes_are_rejected() {
        // Unknown kind.
        let text = flat_doc_text().replace("\"metric\"", "\"tensor\"");
        assert!(parse_document(&text).unwrap_err().contains("unknown kind"));
        // Unknown field.
        let text = flat_doc_text().replace("\"dim\": 2,", "\"dim\": 2,\n  \"extra\": 1,");
        assert!(parse_document(&text).unwrap_err().contains("unknown field"));
        // Wrong multi-index arity for the stated dimension.
        let text = flat_doc_text().replace("\"0,0\": \"1\"", "\"0,0,0\": \"1\"");
        let err = parse_document(&text).unwrap_err();
        assert!(err.contains("3 entries, expected 2"), "{err}");
        // hpoly documents must be two-dimensional.
        let text = r#"{
  "format": "jetdoc/1",
  "kind": "hpoly",
  "dim": 3,
  "order": 1,
  "coeffs": {}
}
"#;
        assert!(parse_document(text).unwrap_err().contains("dim = 2"));
        // Wrong format tag.
        let text = flat_doc_text().replace("jetdoc/1", "jetdoc/9");
        assert!(parse_document(&text).unwrap_err().contains("unsupported format"));
    }
}
