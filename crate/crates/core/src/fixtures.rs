//! The three embedded reference configurations and their expected values,
//! compared quantity by quantity against fresh computations.

use serde::{Deserialize, Serialize};

use crate::config::{PointSpec, RunConfig};
use crate::criterion::{check, CriterionReport};
use crate::divisor::Divisor;
use crate::error::Result;
use crate::field::{Field, FieldDescription, RootBindings};
use crate::model::{build_model, compare_orders, verify_galois, OrderComparison, PlaneModel};
use crate::pgl2::{Fingerprint, ProjPoint};

const SOURCES: [&str; 3] = [
    include_str!("../fixtures/fixture1.json"),
    include_str!("../fixtures/fixture2.json"),
    include_str!("../fixtures/fixture3.json"),
];

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedOrder {
    pub point: PointSpec,
    pub second: Option<i64>,
    pub third: Option<i64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedImplicit {
    pub degree: usize,
    pub mult_p1: usize,
    pub mult_p2: usize,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    pub degree: i64,
    pub m_p1: i64,
    pub m_p2: i64,
    pub g1: Fingerprint,
    pub g2: Fingerprint,
    pub tangent_at_p1: bool,
    pub tangent_at_p2: bool,
    pub orbit_g1_p2: Vec<PointSpec>,
    pub orbit_g2_p1: Vec<PointSpec>,
    pub bs_p1: Vec<(PointSpec, i64)>,
    pub bs_p2: Vec<(PointSpec, i64)>,
    pub d: Vec<(PointSpec, i64)>,
    pub orders: Vec<ExpectedOrder>,
    pub implicit: Option<ExpectedImplicit>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fixture {
    pub name: String,
    pub summary: String,
    pub config: RunConfig,
    pub char0_field: Option<FieldDescription>,
    pub expected: Expected,
}

impl Fixture {
    /// The config over its default field, or over the characteristic-zero
    /// field when `char0` is set and one is recorded.
    pub fn config(&self, char0: bool) -> Option<RunConfig> {
        match (char0, &self.char0_field) {
            (false, _) => Some(self.config.clone()),
            (true, Some(f)) => Some(RunConfig { field: f.clone(), ..self.config.clone() }),
            (true, None) => None,
        }
    }
}

impl<'de> Deserialize<'de> for Fingerprint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            order: usize,
            element_orders: Vec<usize>,
        }
        let r = Raw::deserialize(d)?;
        Ok(Fingerprint { order: r.order, element_orders: r.element_orders })
    }
}

pub fn all() -> Vec<Fixture> {
    SOURCES.iter().map(|s| serde_json::from_str(s).expect("embedded fixture parses")).collect()
}

pub fn by_name(name: &str) -> Option<Fixture> {
    all().into_iter().find(|f| f.name == name)
}

/// One compared quantity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub quantity: String,
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}

impl Comparison {
    fn new(quantity: impl Into<String>, expected: impl ToString, actual: impl ToString) -> Self {
        let (expected, actual) = (expected.to_string(), actual.to_string());
        Comparison { quantity: quantity.into(), ok: expected == actual, expected, actual }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FixtureRun {
    pub fixture: String,
    pub field: String,
    pub comparisons: Vec<Comparison>,
    pub orders: Vec<OrderComparison>,
    pub report: CriterionReport,
    #[serde(skip)]
    pub model: PlaneModel,
    #[serde(skip)]
    pub roots: RootBindings,
}

impl FixtureRun {
    pub fn passes(&self) -> bool {
        self.comparisons.iter().all(|c| c.ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Comparison> {
        self.comparisons.iter().filter(|c| !c.ok)
    }
}

fn points_string(points: &[ProjPoint], roots: &RootBindings) -> String {
    points.iter().map(|q| q.pretty(roots)).collect::<Vec<_>>().join(", ")
}

fn divisor_from(terms: &[(PointSpec, i64)], field: Field, roots: &RootBindings) -> Result<Divisor> {
    let mut d = Divisor::zero();
    for (p, m) in terms {
        d.add_term(p.resolve(field, roots)?, *m);
    }
    Ok(d)
}

/// Checks, constructs and verifies one fixture and compares every
/// expected quantity.
pub fn run_fixture(fixture: &Fixture, char0: bool) -> Result<Option<FixtureRun>> {
    let Some(config) = fixture.config(char0) else {
        return Ok(None);
    };
    let resolved = config.resolve(None)?;
    let cfg = &resolved.configuration;
    let roots = &resolved.roots;
    let field = cfg.field;
    let e = &fixture.expected;
    let report = check(cfg)?;
    let mut cmp = vec![Comparison::new("passes", true, report.passes)];
    cmp.push(Comparison::new("degree", e.degree, report.degree));
    cmp.push(Comparison::new("m_P1", e.m_p1, report.m_p1));
    cmp.push(Comparison::new("m_P2", e.m_p2, report.m_p2));
    cmp.push(Comparison::new("G1 fingerprint", &e.g1, &report.g1.fingerprint));
    cmp.push(Comparison::new("G2 fingerprint", &e.g2, &report.g2.fingerprint));
    cmp.push(Comparison::new("tangent at P1", e.tangent_at_p1, report.tangent_at_p1));
    cmp.push(Comparison::new("tangent at P2", e.tangent_at_p2, report.tangent_at_p2));
    let resolve_all = |v: &[PointSpec]| -> Result<Vec<ProjPoint>> {
        let mut out = v.iter().map(|p| p.resolve(field, roots)).collect::<Result<Vec<_>>>()?;
        out.sort();
        Ok(out)
    };
    cmp.push(Comparison::new(
        "G1.P2",
        points_string(&resolve_all(&e.orbit_g1_p2)?, roots),
        points_string(&report.orbits.g1_p2, roots),
    ));
    cmp.push(Comparison::new(
        "G2.P1",
        points_string(&resolve_all(&e.orbit_g2_p1)?, roots),
        points_string(&report.orbits.g2_p1, roots),
    ));
    cmp.push(Comparison::new(
        "Bs_P1",
        divisor_from(&e.bs_p1, field, roots)?.pretty(roots),
        report.bs_p1.pretty(roots),
    ));
    cmp.push(Comparison::new(
        "Bs_P2",
        divisor_from(&e.bs_p2, field, roots)?.pretty(roots),
        report.bs_p2.pretty(roots),
    ));

    let model = build_model(cfg, &report)?;
    cmp.push(Comparison::new("model degree", e.degree, model.degree));
    let verification = verify_galois(&model, cfg, &report)?;
    cmp.push(Comparison::new("D", divisor_from(&e.d, field, roots)?.pretty(roots), verification.d.pretty(roots)));

    let z_line = [field.zero(), field.zero(), field.one()];
    for (name, point, m, tangent) in [
        ("P1", &model.image_p1, e.m_p1, e.tangent_at_p1),
        ("P2", &model.image_p2, e.m_p2, e.tangent_at_p2),
    ] {
        let mult = model.multiplicity(point)?;
        let inter = model.intersection(point, &z_line)?;
        cmp.push(Comparison::new(format!("multiplicity at image of {name} (parameter side)"), m, mult));
        cmp.push(Comparison::new(format!("tangent at image of {name} (parameter side)"), tangent, mult < inter));
    }

    let orders = compare_orders(&model, &report)?;
    for o in &orders {
        cmp.push(Comparison::new(
            format!("prediction agrees with order oracle at {}", o.point.pretty(roots)),
            true,
            o.agrees,
        ));
    }
    for eo in &e.orders {
        let q = eo.point.resolve(field, roots)?;
        let name = q.pretty(roots);
        let row = orders.iter().find(|o| o.point == q);
        let (alpha, beta) = row.map_or((None, None), |o| (Some(o.alpha), Some(o.beta)));
        let show = |v: Option<i64>| v.map_or_else(|| "-".to_string(), |x| x.to_string());
        if let Some(s) = eo.second {
            cmp.push(Comparison::new(format!("second order at {name}"), s, show(alpha)));
        }
        if let Some(t) = eo.third {
            cmp.push(Comparison::new(format!("third order at {name}"), t, show(beta)));
        }
    }

    Ok(Some(FixtureRun {
        fixture: fixture.name.clone(),
        field: field.to_string(),
        comparisons: cmp,
        orders,
        report,
        model,
        roots: roots.clone(),
    }))
}

/// All fixtures over their default fields, plus the characteristic-zero
/// runs when `char0` is set.
pub fn verify_paper(char0: bool) -> Result<Vec<FixtureRun>> {
    let mut runs = Vec::new();
    for fx in all() {
        runs.extend(run_fixture(&fx, false)?);
        if char0 {
            runs.extend(run_fixture(&fx, true)?);
        }
    }
    Ok(runs)
}
