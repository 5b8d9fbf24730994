//! Acceptance criteria 1-8. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use tempfile::TempDir;

use galois_forge::config::{matrix_spec, PointSpec, Resolved, RunConfig, SCHEMA};
use galois_forge::criterion::{check, CriterionReport};
use galois_forge::field::{make_field, Field, FieldDescription, RootBindings};
use galois_forge::fixtures::{self, Fixture};
use galois_forge::model::{build_model, compare_orders, implicitize, order_sequence_at, verify_galois, PlanePoint};
use galois_forge::pgl2::{Moebius, ProjPoint};
use galois_forge::search::{search, GeneratorPool, Limits, PointPool, SearchSpace};

const LIMIT_FIXTURE_1: Duration = Duration::from_secs(5);
const LIMIT_FIXTURE_2: Duration = Duration::from_secs(5);
const LIMIT_FIXTURE_2_CHAR0: Duration = Duration::from_secs(120);
const LIMIT_FIXTURE_3: Duration = Duration::from_secs(10);
const LIMIT_IMPLICIT: Duration = Duration::from_secs(120);
const RANDOM_CONFIGS: usize = 50;
const RANDOM_LINES: usize = 100;
const SEED: u64 = 0x6a1015;

struct Outcome {
    ok: bool,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { ok: true, notes: Vec::new() }
    }

    fn require(&mut self, cond: bool, what: impl Into<String>) {
        if !cond {
            self.ok = false;
            self.notes.push(what.into());
        }
    }

    fn expect_eq<T: PartialEq + std::fmt::Debug>(&mut self, what: &str, expected: T, actual: T) {
        if expected != actual {
            self.ok = false;
            self.notes.push(format!("{what}: expected {expected:?}, got {actual:?}"));
        }
    }

    fn fail(&mut self, what: impl Into<String>) {
        self.require(false, what);
    }
}

fn fixture(name: &str) -> Fixture {
    fixtures::by_name(name).unwrap()
}

fn resolve(fx: &Fixture, char0: bool) -> Resolved {
    fx.config(char0).unwrap().resolve(None).unwrap()
}

struct Reference {
    degree: i64,
    m_p1: i64,
    m_p2: i64,
    g1: (usize, &'static str),
    g2: (usize, &'static str),
    tangent_p1: bool,
}

/// Check, construct and verify, then compare against the published values.
fn reproduce(out: &mut Outcome, label: &str, r: &Resolved, want: &Reference, limit: Duration) {
    let start = Instant::now();
    let cfg = &r.configuration;
    let report = match check(cfg) {
        Ok(rep) => rep,
        Err(e) => return out.fail(format!("{label}: check failed: {e}")),
    };
    out.require(report.passes, format!("{label}: criterion does not pass"));
    let built = build_model(cfg, &report).and_then(|m| verify_galois(&m, cfg, &report).map(|v| (m, v)));
    let elapsed = start.elapsed();
    let Ok((model, _)) = built else {
        return out.fail(format!("{label}: construction failed: {:?}", built.err()));
    };
    out.expect_eq(&format!("{label} degree"), want.degree, report.degree);
    out.expect_eq(&format!("{label} model degree"), want.degree, model.degree as i64);
    out.expect_eq(&format!("{label} m_P1"), want.m_p1, report.m_p1);
    out.expect_eq(&format!("{label} m_P2"), want.m_p2, report.m_p2);
    out.expect_eq(&format!("{label} |G1|"), want.g1.0, report.g1.fingerprint.order);
    out.expect_eq(&format!("{label} |G2|"), want.g2.0, report.g2.fingerprint.order);
    out.expect_eq(&format!("{label} G1 type"), Some(want.g1.1.to_string()), report.g1.name.clone());
    out.expect_eq(&format!("{label} G2 type"), Some(want.g2.1.to_string()), report.g2.name.clone());
    out.expect_eq(&format!("{label} tangent at P1"), want.tangent_p1, report.tangent_at_p1);
    out.expect_eq(&format!("{label} tangent at P2"), false, report.tangent_at_p2);
    // the same facts on the parameter side of the constructed model
    let z = [cfg.field.zero(), cfg.field.zero(), cfg.field.one()];
    for (name, p, m, t) in [("P1", &model.image_p1, want.m_p1, want.tangent_p1), ("P2", &model.image_p2, want.m_p2, false)] {
        match (model.multiplicity(p), model.intersection(p, &z)) {
            (Ok(mult), Ok(inter)) => {
                out.expect_eq(&format!("{label} multiplicity at image of {name}"), m, mult);
                out.expect_eq(&format!("{label} tangency at image of {name}"), t, mult < inter);
            }
            other => out.fail(format!("{label}: {other:?}")),
        }
    }
    out.require(elapsed < limit, format!("{label}: {elapsed:?} exceeds {limit:?}"));
    out.notes.push(format!("{label}: {:.3}s", elapsed.as_secs_f64()));
}

fn criterion_1() -> Outcome {
    let mut out = Outcome::new();
    let want = Reference { degree: 14, m_p1: 8, m_p2: 4, g1: (6, "S3 = AGL(1,F3)"), g2: (10, "D5"), tangent_p1: false };
    let r = resolve(&fixture("fixture1"), false);
    let fp = r.configuration.g1.fingerprint();
    out.expect_eq("G1 fingerprint", (6, vec![1, 2, 2, 2, 3, 3]), (fp.order, fp.element_orders));
    let fp = r.configuration.g2.fingerprint();
    out.expect_eq("G2 fingerprint", (10, vec![1, 2, 2, 2, 2, 2, 5, 5, 5, 5]), (fp.order, fp.element_orders));
    reproduce(&mut out, "F_81", &r, &want, LIMIT_FIXTURE_1);
    out
}

fn criterion_2() -> Outcome {
    let mut out = Outcome::new();
    let want = Reference { degree: 16, m_p1: 11, m_p2: 4, g1: (5, "Z/5Z"), g2: (12, "A4"), tangent_p1: true };
    let fx = fixture("fixture2");
    reproduce(&mut out, "F_41", &resolve(&fx, false), &want, LIMIT_FIXTURE_2);
    reproduce(&mut out, "Q(zeta_20)", &resolve(&fx, true), &want, LIMIT_FIXTURE_2_CHAR0);
    out
}

fn criterion_3() -> Outcome {
    let mut out = Outcome::new();
    let want = Reference { degree: 28, m_p1: 23, m_p2: 4, g1: (5, "Z/5Z"), g2: (24, "S4"), tangent_p1: true };
    reproduce(&mut out, "F_41", &resolve(&fixture("fixture3"), false), &want, LIMIT_FIXTURE_3);
    out
}

fn criterion_4() -> Outcome {
    let mut out = Outcome::new();
    for fx in fixtures::all() {
        for char0 in [false, true] {
            let Some(cfg) = fx.config(char0) else { continue };
            let r = cfg.resolve(None).unwrap();
            let c = &r.configuration;
            let label = format!("{} over {}", fx.name, c.field);
            let report = check(c).unwrap();
            let model = build_model(c, &report).unwrap();
            for row in compare_orders(&model, &report).unwrap() {
                out.require(
                    row.agrees,
                    format!("{label}: prediction disagrees with the order oracle at {}", row.point.pretty(&r.roots)),
                );
            }
            for eo in &fx.expected.orders {
                let q = eo.point.resolve(c.field, &r.roots).unwrap();
                let s = order_sequence_at(&model, &q).unwrap();
                let name = q.pretty(&r.roots);
                if let Some(v) = eo.second {
                    out.expect_eq(&format!("{label}: second order at {name}"), v, s.alpha);
                    if v != s.alpha {
                        out.notes.push(format!(
                            "    image {:?}, (alpha, beta) = ({}, {}), osculating line {:?}",
                            model.image(&q),
                            s.alpha,
                            s.beta,
                            s.osculating_line
                        ));
                    }
                }
                if let Some(v) = eo.third {
                    out.expect_eq(&format!("{label}: third order at {name}"), v, s.beta);
                }
            }
        }
    }
    out
}

fn criterion_5() -> Outcome {
    let mut out = Outcome::new();
    for name in ["fixture1", "fixture2"] {
        let fx = fixture(name);
        let r = resolve(&fx, false);
        let c = &r.configuration;
        let report = check(c).unwrap();
        let start = Instant::now();
        let model = build_model(c, &report).unwrap();
        let curve = match implicitize(&model) {
            Ok(curve) => curve,
            Err(e) => {
                out.fail(format!("{name}: {e}"));
                continue;
            }
        };
        let elapsed = start.elapsed();
        let y = PlanePoint::y_axis_point(c.field);
        let x = PlanePoint::x_axis_point(c.field);
        out.expect_eq(&format!("{name} implicit degree"), report.degree, curve.degree as i64);
        out.expect_eq(&format!("{name} multiplicity at (0:1:0)"), report.m_p1, curve.f.multiplicity_at(&y) as i64);
        out.expect_eq(&format!("{name} multiplicity at (1:0:0)"), report.m_p2, curve.f.multiplicity_at(&x) as i64);
        let published = fx.expected.implicit.as_ref().unwrap();
        out.expect_eq(
            &format!("{name} published values"),
            (published.degree, published.mult_p1, published.mult_p2),
            (curve.degree, curve.f.multiplicity_at(&y), curve.f.multiplicity_at(&x)),
        );
        out.require(elapsed < LIMIT_IMPLICIT, format!("{name}: {elapsed:?} exceeds {LIMIT_IMPLICIT:?}"));
        out.notes.push(format!("{name}: {:.3}s", elapsed.as_secs_f64()));
    }
    out
}

fn random_unit_matrix(rng: &mut ChaCha8Rng, field: Field, elems: &[galois_forge::field::FieldElement]) -> Moebius {
    loop {
        let e: Vec<_> = (0..4).map(|_| elems[rng.gen_range(0..elems.len())].clone()).collect();
        let Ok(m) = Moebius::new(e[0].clone(), e[1].clone(), e[2].clone(), e[3].clone()) else { continue };
        if m.order(12).is_some_and(|k| k > 1) {
            assert_eq!(m.field(), field);
            return m;
        }
    }
}

/// Catalogs of passing configurations from seeded random search spaces.
fn random_catalog(rng: &mut ChaCha8Rng) -> Vec<(u64, Vec<RunConfig>)> {
    let fields = [
        (7, FieldDescription::finite(7, 1)),
        (9, FieldDescription::finite(3, 2)),
        (11, FieldDescription::finite(11, 1)),
        (13, FieldDescription::finite(13, 1)),
        (41, FieldDescription::finite(41, 1)),
    ];
    let mut out = Vec::new();
    for (q, desc) in fields {
        let field = make_field(&desc).unwrap();
        let roots = RootBindings::resolve(field, &[]).unwrap();
        let elems: Vec<_> = field.elements().unwrap().collect();
        let pool: Vec<_> = (0..5).map(|_| matrix_spec(&random_unit_matrix(rng, field, &elems), &roots)).collect();
        let points = if q <= 13 {
            PointPool::All(galois_forge::search::AllPoints::All)
        } else {
            let mut pts: Vec<ProjPoint> = ProjPoint::all_points(field).unwrap();
            pts.shuffle(rng);
            PointPool::List(pts[..14].iter().map(|p| PointSpec::from_point(p, &roots)).collect())
        };
        let space = SearchSpace {
            schema: SCHEMA.into(),
            field: desc,
            roots: BTreeMap::new(),
            generators: GeneratorPool::Matrices(pool),
            max_generators: 1,
            points,
            limits: Limits::default(),
            dedup: false,
        };
        let catalog = search(&space, None).unwrap();
        out.push((q, catalog.entries.into_iter().map(|e| e.config).collect()));
    }
    out
}

fn criterion_6() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut configs: Vec<(String, RunConfig)> = Vec::new();
    for fx in fixtures::all() {
        for char0 in [false, true] {
            if let Some(c) = fx.config(char0) {
                configs.push((format!("{} char0={char0}", fx.name), c));
            }
        }
    }
    let per_field = RANDOM_CONFIGS.div_ceil(5);
    for (q, entries) in random_catalog(&mut rng) {
        out.require(entries.len() >= per_field, format!("F_{q}: only {} passing configurations", entries.len()));
        for (k, c) in entries.choose_multiple(&mut rng, per_field).enumerate() {
            configs.push((format!("F_{q} sample {k}"), c.clone()));
        }
    }
    let random = configs.len() - 5;
    out.require(random >= RANDOM_CONFIGS, format!("only {random} random configurations"));
    for (label, c) in &configs {
        let r = c.resolve(None).unwrap();
        let cfg = &r.configuration;
        let report = check(cfg).unwrap();
        if !report.passes {
            out.fail(format!("{label}: catalog entry does not re-pass"));
            continue;
        }
        let model = build_model(cfg, &report).unwrap();
        match verify_galois(&model, cfg, &report) {
            Ok(v) => {
                out.expect_eq(&format!("{label} deg f"), cfg.g1.order(), v.degree_f);
                out.expect_eq(&format!("{label} deg g"), cfg.g2.order(), v.degree_g);
                out.require(
                    v.ramification.iter().all(|x| x.e_f == x.stab_g1 && x.e_g == x.stab_g2),
                    format!("{label}: ramification differs from stabilizer order"),
                );
                let z = [cfg.field.zero(), cfg.field.zero(), cfg.field.one()];
                let pb = model.line_pullback(&z).unwrap();
                out.require(pb.residual.is_constant() && pb.rational == v.d, format!("{label}: pullback of Z = 0 differs from D"));
                out.expect_eq(&format!("{label} deg D"), report.degree, v.d.degree());
            }
            Err(e) => out.fail(format!("{label}: {e}")),
        }
    }
    out.notes.push(format!("{} configurations verified ({random} random)", configs.len()));
    out
}

fn cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_galois-forge")).env_remove("GALOIS_FORGE_CAP").args(args).output().unwrap()
}

fn criterion_7() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    let dir = TempDir::new().unwrap();
    let mut reports: Vec<CriterionReport> = Vec::new();
    for fx in fixtures::all() {
        let r = resolve(&fx, false);
        let c = &r.configuration;
        for g in [&c.g1, &c.g2] {
            for q in ProjPoint::all_points(c.field).unwrap() {
                let ok = g.orbit(&q).len() * g.stabilizer_order(&q) == g.order();
                out.require(ok, format!("{}: orbit-stabilizer fails at {q:?}", fx.name));
            }
        }
        let report = check(c).unwrap();
        let model = build_model(c, &report).unwrap();
        let elems: Vec<_> = c.field.elements().unwrap().collect();
        let mut lines = 0;
        while lines < RANDOM_LINES {
            let l = [0, 1, 2].map(|_| elems[rng.gen_range(0..elems.len())].clone());
            if l.iter().all(|x| x.is_zero()) {
                continue;
            }
            lines += 1;
            match model.line_pullback(&l) {
                Ok(pb) => out.expect_eq(&format!("{}: deg pullback of {l:?}", fx.name), report.degree, pb.degree()),
                Err(e) => out.fail(format!("{}: {e}", fx.name)),
            }
        }
        // byte-identical replay through the command line
        let path = dir.path().join(format!("{}.json", fx.name));
        std::fs::write(&path, fx.config.to_json()).unwrap();
        let a = cli(&["check", path.to_str().unwrap()]);
        let b = cli(&["check", path.to_str().unwrap()]);
        out.require(a.status.success() && a.stdout == b.stdout, format!("{}: replay differs", fx.name));
        let again = check(c).unwrap();
        out.require(
            serde_json::to_string(&report).unwrap() == serde_json::to_string(&again).unwrap(),
            format!("{}: library replay differs", fx.name),
        );
        reports.push(report);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for (_, entries) in random_catalog(&mut rng) {
        for c in entries {
            let r = c.resolve(None).unwrap();
            let (p, s) = galois_forge::criterion::both_orientations(&r.configuration).unwrap();
            reports.extend([p, s].into_iter().filter(|x| x.passes));
        }
    }
    let both = reports.iter().filter(|r| r.passes && r.tangent_at_p1 && r.tangent_at_p2).count();
    out.expect_eq("passing reports tangent at both points", 0, both);
    out.notes.push(format!("{} passing reports checked for the tangency invariant", reports.len()));
    out
}

fn criterion_8() -> Outcome {
    let mut out = Outcome::new();
    let dir = TempDir::new().unwrap();
    let mut moved: Value = serde_json::to_value(&fixture("fixture2").config).unwrap();
    moved["p2"] = json!("1");
    let mut equal: Value = serde_json::to_value(&fixture("fixture1").config).unwrap();
    equal["g1"] = equal["g2"].clone();
    for (name, cfg) in [("moved", &moved), ("equal", &equal)] {
        let path = dir.path().join(format!("{name}.json"));
        std::fs::write(&path, serde_json::to_string(cfg).unwrap()).unwrap();
        let o = cli(&["check", path.to_str().unwrap()]);
        out.expect_eq(&format!("{name}: exit code"), Some(1), o.status.code());
        let Ok(v) = serde_json::from_slice::<Value>(&o.stdout) else {
            out.fail(format!("{name}: no JSON report"));
            continue;
        };
        let rep = &v["report"];
        if name == "moved" {
            out.expect_eq("moved: (c) holds", json!(false), rep["cond_c"]["holds"].clone());
            let named = rep["cond_c"]["witnesses"]
                .as_array()
                .is_some_and(|w| w.iter().any(|x| x["point"] == json!(["1", "1"])));
            out.require(named, "moved: no (c) witness at Q_1");
        } else {
            out.expect_eq("equal: (b) holds", json!(false), rep["cond_b"]["holds"].clone());
            out.require(rep["cond_b"]["witness"].is_array(), "equal: no (b) witness");
        }
    }
    out
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("fixture reproduction over F_81", criterion_1),
        ("fixture reproduction over F_41 and Q(zeta_20)", criterion_2),
        ("fixture reproduction with S4", criterion_3),
        ("order tables against the first-principles oracle", criterion_4),
        ("implicitization oracle", criterion_5),
        ("Galois verification on fixtures and random configurations", criterion_6),
        ("structural property suite", criterion_7),
        ("negative controls", criterion_8),
    ];
    let mut all = true;
    for (k, (title, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = f();
        all &= out.ok;
        let mark = if out.ok { "PASS" } else { "FAIL" };
        println!("criterion {}: {mark} {title} ({:.2}s)", k + 1, start.elapsed().as_secs_f64());
        for n in &out.notes {
            println!("    {n}");
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
