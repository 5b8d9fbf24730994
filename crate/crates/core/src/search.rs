//! Exhaustive search over finite pools of groups and points.
//!
//! Candidate groups are the closures of the subsets of a generator pool
//! with at most `max_generators` elements, deduplicated by element set
//! (first subset in enumeration order wins). Configurations are ordered
//! pairs of distinct candidate groups and ordered pairs of distinct points,
//! enumerated lexicographically in that order.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{json_error, resolve_matrix, MatrixSpec, PointSpec, RunConfig, SCHEMA};
use crate::criterion::{both_orientations, Configuration, CriterionReport};
use crate::error::{Error, Result};
use crate::field::{make_field, Field, FieldDescription, RootBindings};
use crate::pgl2::{Fingerprint, Moebius, ProjPoint, Subgroup};

const CHUNK: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum GeneratorPool {
    Matrices(Vec<MatrixSpec>),
    Cyclic { cyclic_max_order: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum PointPool {
    All(AllPoints),
    List(Vec<PointSpec>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AllPoints {
    All,
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Limits {
    #[serde(default = "default_max_group_order")]
    pub max_group_order: usize,
    #[serde(default)]
    pub max_results: Option<usize>,
    /// Upper bound on generator subsets closed and on configurations checked.
    #[serde(default = "default_budget")]
    pub budget: u128,
}

fn default_max_group_order() -> usize {
    120
}

fn default_budget() -> u128 {
    2_000_000
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_group_order: default_max_group_order(), max_results: None, budget: default_budget() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SearchSpace {
    pub schema: String,
    pub field: FieldDescription,
    #[serde(default)]
    pub roots: BTreeMap<String, u64>,
    pub generators: GeneratorPool,
    #[serde(default = "default_max_generators")]
    pub max_generators: usize,
    pub points: PointPool,
    #[serde(default)]
    pub limits: Limits,
    #[serde(default)]
    pub dedup: bool,
}

fn default_max_generators() -> usize {
    2
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub config: RunConfig,
    pub report: CriterionReport,
    /// The configuration with the roles of the two points exchanged also
    /// passes.
    pub swapped_passes: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Catalog {
    pub schema: &'static str,
    pub groups: usize,
    pub points: usize,
    pub space_size: u128,
    pub checked: u128,
    pub truncated: bool,
    pub entries: Vec<CatalogEntry>,
}

impl SearchSpace {
    pub fn from_json(text: &str) -> Result<Self> {
        let s: SearchSpace = serde_json::from_str(text).map_err(json_error)?;
        if s.schema != SCHEMA {
            return Err(Error::Parse(format!("unsupported schema {:?}", s.schema)));
        }
        Ok(s)
    }
}

/// One generator per cyclic subgroup of PGL(2, F_q) of order in `2..=n`.
pub fn cyclic_generators(field: Field, n: usize) -> Result<Vec<Moebius>> {
    let elems: Vec<_> = field
        .elements()
        .ok_or_else(|| Error::UnsupportedKind("cyclic generator pools need a finite field".into()))?
        .collect();
    let one = field.one();
    let zero = field.zero();
    let mut all = Vec::new();
    for b in &elems {
        for c in &elems {
            for d in &elems {
                if let Ok(m) = Moebius::new(one.clone(), b.clone(), c.clone(), d.clone()) {
                    all.push(m);
                }
            }
        }
    }
    for c in &elems {
        for d in &elems {
            if let Ok(m) = Moebius::new(zero.clone(), one.clone(), c.clone(), d.clone()) {
                all.push(m);
            }
        }
    }
    all.sort();
    let mut covered: HashSet<Moebius> = HashSet::new();
    let mut out = Vec::new();
    for m in all {
        if covered.contains(&m) {
            continue;
        }
        let Some(k) = m.order(n) else { continue };
        if k < 2 {
            continue;
        }
        // every generator of <m> is a power m^j with gcd(j, k) = 1
        let mut p = m.clone();
        for j in 1..k {
            if num_integer::gcd(j, k) == 1 {
                covered.insert(p.clone());
            }
            p = p.compose(&m);
        }
        out.push(m);
    }
    Ok(out)
}

fn subsets(n: usize, max_k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_k {
        let mut next = Vec::new();
        for s in &frontier {
            let start = s.last().map_or(0, |&l| l + 1);
            for i in start..n {
                let mut t = s.clone();
                t.push(i);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn count_subsets(n: usize, max_k: usize) -> u128 {
    let mut total = 0u128;
    let mut binom = 1u128;
    for k in 0..=max_k.min(n) {
        total += binom;
        binom = binom * (n - k) as u128 / (k + 1) as u128;
    }
    total
}

/// Candidate groups in enumeration order, deduplicated by element set.
pub fn candidate_groups(field: Field, pool: &[Moebius], max_generators: usize, max_order: usize) -> Vec<Subgroup> {
    let mut seen: HashSet<Vec<Moebius>> = HashSet::new();
    let mut out = Vec::new();
    for s in subsets(pool.len(), max_generators) {
        let gens: Vec<Moebius> = s.iter().map(|&i| pool[i].clone()).collect();
        let Ok(g) = Subgroup::generate(field, &gens, max_order) else { continue };
        if seen.insert(g.elements().to_vec()) {
            out.push(g);
        }
    }
    out
}

type DedupKey = (i64, i64, i64, Fingerprint, Fingerprint);

/// Runs the enumeration. Results are in enumeration order regardless of
/// `max_results_override` and thread count.
pub fn search(space: &SearchSpace, max_results_override: Option<usize>) -> Result<Catalog> {
    let field = make_field(&space.field)?;
    let roots = RootBindings::resolve(field, &space.roots.iter().map(|(k, v)| (k.clone(), *v)).collect::<Vec<_>>())?;
    let limits = &space.limits;
    let max_results = max_results_override.or(limits.max_results);

    let pool = match &space.generators {
        GeneratorPool::Matrices(ms) => ms.iter().map(|m| resolve_matrix(m, field, &roots)).collect::<Result<Vec<_>>>()?,
        GeneratorPool::Cyclic { cyclic_max_order } => {
            let q = field.size().unwrap_or(u64::MAX) as u128;
            let elements = q * q * q;
            if elements > limits.budget {
                return Err(Error::SpaceTooLarge { size: elements, budget: limits.budget });
            }
            cyclic_generators(field, *cyclic_max_order)?
        }
    };
    let subset_count = count_subsets(pool.len(), space.max_generators);
    if subset_count > limits.budget {
        return Err(Error::SpaceTooLarge { size: subset_count, budget: limits.budget });
    }
    let groups = candidate_groups(field, &pool, space.max_generators, limits.max_group_order);

    let points: Vec<ProjPoint> = match &space.points {
        PointPool::All(_) => ProjPoint::all_points(field)
            .ok_or_else(|| Error::UnsupportedKind("\"points\": \"all\" needs a finite field".into()))?,
        PointPool::List(ps) => {
            let set: BTreeSet<ProjPoint> = ps.iter().map(|p| p.resolve(field, &roots)).collect::<Result<_>>()?;
            set.into_iter().collect()
        }
    };

    let g = groups.len() as u128;
    let n = points.len() as u128;
    let space_size = g * g.saturating_sub(1) * n * n.saturating_sub(1);
    if space_size > limits.budget {
        return Err(Error::SpaceTooLarge { size: space_size, budget: limits.budget });
    }

    let indices = (0..groups.len())
        .flat_map(|i| (0..groups.len()).filter(move |&j| j != i).map(move |j| (i, j)))
        .flat_map(|(i, j)| {
            let n = points.len();
            (0..n).flat_map(move |a| (0..n).filter(move |&b| b != a).map(move |b| (i, j, a, b)))
        });

    let mut entries = Vec::new();
    let mut seen: HashSet<DedupKey> = HashSet::new();
    let mut checked = 0u128;
    let mut truncated = false;
    let mut batch = Vec::with_capacity(CHUNK);
    let mut iter = indices.peekable();
    'outer: while iter.peek().is_some() {
        batch.clear();
        batch.extend(iter.by_ref().take(CHUNK));
        let results: Vec<Result<Option<CatalogEntry>>> = batch
            .par_iter()
            .map(|&(i, j, a, b)| {
                let cfg = Configuration::new(groups[i].clone(), groups[j].clone(), points[a].clone(), points[b].clone())?;
                let (primary, swapped) = both_orientations(&cfg)?;
                if !primary.passes {
                    return Ok(None);
                }
                Ok(Some(CatalogEntry {
                    config: RunConfig::from_configuration(&cfg, &roots),
                    report: primary,
                    swapped_passes: swapped.passes,
                }))
            })
            .collect();
        for r in results {
            checked += 1;
            let Some(entry) = r? else { continue };
            if space.dedup {
                let rep = &entry.report;
                let key = (rep.degree, rep.m_p1, rep.m_p2, rep.g1.fingerprint.clone(), rep.g2.fingerprint.clone());
                if !seen.insert(key) {
                    continue;
                }
            }
            if max_results.is_some_and(|m| entries.len() >= m) {
                truncated = true;
                break 'outer;
            }
            entries.push(entry);
        }
    }

    Ok(Catalog {
        schema: SCHEMA,
        groups: groups.len(),
        points: points.len(),
        space_size,
        checked,
        truncated,
        entries,
    })
}
