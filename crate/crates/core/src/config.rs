//! JSON run configurations: a field, named roots of unity, generator
//! matrices for both groups and the two points.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::criterion::Configuration;
use crate::error::{Error, Result};
use crate::field::expr::{self, Expr};
use crate::field::{make_field, Field, FieldDescription, FieldElement, RootBindings};
use crate::pgl2::{Moebius, ProjPoint, Subgroup, DEFAULT_CAP};

pub const SCHEMA: &str = "1";

/// An element expression, syntax-checked while the JSON is read so that
/// errors carry the document position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementExpr {
    source: String,
    expr: Expr,
}

impl ElementExpr {
    pub fn parse(source: &str) -> Result<Self> {
        let expr = expr::parse(source).map_err(|e| Error::Parse(format!("{source:?}: {e}")))?;
        Ok(ElementExpr { source: source.to_string(), expr })
    }

    pub fn from_element(x: &FieldElement, roots: &RootBindings) -> Self {
        Self::parse(&roots.pretty(x)).expect("pretty-printed elements parse")
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn eval(&self, field: Field, roots: &RootBindings) -> Result<FieldElement> {
        self.expr
            .eval(field, roots)
            .map_err(|e| match e {
                Error::Parse(m) => Error::Parse(format!("{:?}: {m}", self.source)),
                other => other,
            })
    }
}

impl<'de> Deserialize<'de> for ElementExpr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        match expr::parse(&s) {
            Ok(expr) => Ok(ElementExpr { source: s, expr }),
            Err(e) => Err(serde::de::Error::custom(format!(
                "in expression {s:?}: {} at expression column {}",
                e.message, e.column
            ))),
        }
    }
}

impl Serialize for ElementExpr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.source)
    }
}

/// `"inf"`, a single affine coordinate, or a homogeneous pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum PointSpec {
    Pair([ElementExpr; 2]),
    Single(ElementExpr),
}

impl<'de> Deserialize<'de> for PointSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> serde::de::Visitor<'de> for V {
            type Value = PointSpec;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("\"inf\", an element expression, or a pair of them")
            }
            fn visit_str<E: serde::de::Error>(self, s: &str) -> std::result::Result<PointSpec, E> {
                ElementExpr::deserialize(serde::de::value::StrDeserializer::<E>::new(s)).map(PointSpec::Single)
            }
            fn visit_seq<A: serde::de::SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<PointSpec, A::Error> {
                let a = seq.next_element()?.ok_or_else(|| serde::de::Error::invalid_length(0, &self))?;
                let b = seq.next_element()?.ok_or_else(|| serde::de::Error::invalid_length(1, &self))?;
                if seq.next_element::<serde::de::IgnoredAny>()?.is_some() {
                    return Err(serde::de::Error::invalid_length(3, &self));
                }
                Ok(PointSpec::Pair([a, b]))
            }
        }
        d.deserialize_any(V)
    }
}

impl PointSpec {
    pub fn resolve(&self, field: Field, roots: &RootBindings) -> Result<ProjPoint> {
        match self {
            PointSpec::Single(e) if e.source.trim() == "inf" => Ok(ProjPoint::infinity(field)),
            PointSpec::Single(e) => Ok(ProjPoint::affine(e.eval(field, roots)?)),
            PointSpec::Pair([a, b]) => ProjPoint::new(a.eval(field, roots)?, b.eval(field, roots)?),
        }
    }

    pub fn from_point(q: &ProjPoint, roots: &RootBindings) -> Self {
        match q.affine_coord() {
            None => PointSpec::Single(ElementExpr::parse("inf").unwrap()),
            Some(a) => PointSpec::Single(ElementExpr::from_element(a, roots)),
        }
    }
}

pub type MatrixSpec = [[ElementExpr; 2]; 2];

pub fn resolve_matrix(m: &MatrixSpec, field: Field, roots: &RootBindings) -> Result<Moebius> {
    Moebius::new(
        m[0][0].eval(field, roots)?,
        m[0][1].eval(field, roots)?,
        m[1][0].eval(field, roots)?,
        m[1][1].eval(field, roots)?,
    )
}

pub fn matrix_spec(m: &Moebius, roots: &RootBindings) -> MatrixSpec {
    let [a, b, c, d] = m.entries();
    let e = |x: &FieldElement| ElementExpr::from_element(x, roots);
    [[e(a), e(b)], [e(c), e(d)]]
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    #[default]
    One,
    Both,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Json,
    Text,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default)]
    pub orientation: Orientation,
    #[serde(default)]
    pub implicitize: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    #[serde(default)]
    pub output: OutputFormat,
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: String,
    pub field: FieldDescription,
    #[serde(default)]
    pub roots: BTreeMap<String, u64>,
    pub g1: Vec<MatrixSpec>,
    pub g2: Vec<MatrixSpec>,
    pub p1: PointSpec,
    pub p2: PointSpec,
    #[serde(default)]
    pub options: Options,
}

/// A configuration ready for the criterion, with the root names used to
/// print it.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub configuration: Configuration,
    pub roots: RootBindings,
    pub options: Options,
}

/// Wraps a JSON error with its line and column.
pub fn json_error(e: serde_json::Error) -> Error {
    let msg = e.to_string();
    let suffix = format!(" at line {} column {}", e.line(), e.column());
    let msg = msg.strip_suffix(&suffix).unwrap_or(&msg);
    Error::Parse(format!("line {}, column {}: {msg}", e.line(), e.column()))
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(json_error)?;
        if cfg.schema != SCHEMA {
            return Err(Error::Parse(format!("unsupported schema {:?}", cfg.schema)));
        }
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn root_list(&self) -> Vec<(String, u64)> {
        self.roots.iter().map(|(k, v)| (k.clone(), *v)).collect()
    }

    /// Builds the groups and points. `cap_override` takes precedence over
    /// the cap in the options.
    pub fn resolve(&self, cap_override: Option<usize>) -> Result<Resolved> {
        let field = make_field(&self.field)?;
        let roots = RootBindings::resolve(field, &self.root_list())?;
        let cap = cap_override.or(self.options.cap).unwrap_or(DEFAULT_CAP);
        let group = |gens: &[MatrixSpec]| -> Result<Subgroup> {
            let ms = gens.iter().map(|m| resolve_matrix(m, field, &roots)).collect::<Result<Vec<_>>>()?;
            Subgroup::generate(field, &ms, cap)
        };
        let configuration = Configuration::new(
            group(&self.g1)?,
            group(&self.g2)?,
            self.p1.resolve(field, &roots)?,
            self.p2.resolve(field, &roots)?,
        )?;
        Ok(Resolved { configuration, roots, options: self.options.clone() })
    }

    /// A config reproducing `cfg` from its generators.
    pub fn from_configuration(cfg: &Configuration, roots: &RootBindings) -> Self {
        let gens = |g: &Subgroup| g.generators().iter().map(|m| matrix_spec(m, roots)).collect();
        RunConfig {
            schema: SCHEMA.into(),
            field: cfg.field.description().clone(),
            roots: roots.orders().into_iter().collect(),
            g1: gens(&cfg.g1),
            g2: gens(&cfg.g2),
            p1: PointSpec::from_point(&cfg.p1, roots),
            p2: PointSpec::from_point(&cfg.p2, roots),
            options: Options::default(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CONIC: &str = r#"{
  "schema": "1",
  "field": {"kind": "finite", "p": 41, "ext_degree": 1, "modulus": "auto"},
  "roots": {"xi": 5},
  "g1": [],
  "g2": [],
  "p1": "0",
  "p2": "inf"
}"#;

    #[test]
    fn parses_and_resolves() {
        let cfg = RunConfig::from_json(CONIC).unwrap();
        let r = cfg.resolve(None).unwrap();
        assert!(r.configuration.p2.is_infinity());
        assert_eq!(r.configuration.g1.order(), 1);
        let again = RunConfig::from_json(&cfg.to_json()).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn bad_expression_has_position() {
        let text = CONIC.replace(r#""p1": "0""#, r#""p1": "z^^2""#);
        let err = RunConfig::from_json(&text).unwrap_err();
        let Error::Parse(msg) = err else { panic!() };
        assert!(msg.starts_with("line 7, column 14"), "{msg}");
        assert!(msg.contains("column 3"), "{msg}");
    }

    #[test]
    fn unknown_root_and_schema() {
        let text = CONIC.replace(r#""p1": "0""#, r#""p1": "eta""#);
        assert!(matches!(RunConfig::from_json(&text).unwrap().resolve(None), Err(Error::Parse(_))));
        let text = CONIC.replace(r#""schema": "1""#, r#""schema": "2""#);
        assert!(RunConfig::from_json(&text).is_err());
    }

    #[test]
    fn pair_points() {
        let text = CONIC.replace(r#""p1": "0""#, r#""p1": ["xi", "1"]"#);
        let r = RunConfig::from_json(&text).unwrap().resolve(None).unwrap();
        assert!(!r.configuration.p1.is_infinity());
    }
}
