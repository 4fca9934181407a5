//! Type sets, periodicity with quotient reconstruction, and shape checks.
//!
//! A type set is only known through the census horizon. Profiles whose
//! observed maximal type reaches the horizon, or whose radius-`N` class also
//! occurs deep in a periodic tail, are marked censored and never treated as
//! exact.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::canon::{self, CanonicalKey};
use crate::census::{self, BallCensus, CensusOptions};
use crate::cover;
use crate::error::{Error, Result};
use crate::graph::{FiniteEdge, IndexPair, Kind, Pos, Presentation, Vertex};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeProfile {
    pub position: Pos,
    /// Radii `n <= N` at which this position's ball class is special.
    pub type_set: Vec<usize>,
    /// `max(type_set)`, or -1 when empty.
    pub max_type: i64,
    /// The observed maximal type may not be the true one.
    pub censored: bool,
    /// Class id of the radius-`N` ball.
    pub class_id: u32,
}

fn profile_at(p: &Presentation, c: &BallCensus, pos: Pos, horizon: usize) -> TypeProfile {
    let type_set: Vec<usize> = (0..=horizon)
        .filter(|&n| c.class_of(p, pos, n).is_some_and(|id| c.is_special(n, id)))
        .collect();
    let max_type = type_set.last().map_or(-1, |&n| n as i64);
    let class_id = c.class_of(p, pos, horizon).expect("position resolves");
    let deep_class = c.classes(horizon)[class_id as usize].deep;
    TypeProfile {
        position: pos,
        type_set,
        max_type,
        censored: max_type == horizon as i64 || deep_class,
        class_id,
    }
}

/// Census to radius `horizon + 1` together with profiles (type sets within
/// `[0, horizon]`) for every census center.
pub fn type_profiles(p: &Presentation, horizon: usize) -> Result<(BallCensus, Vec<TypeProfile>)> {
    type_profiles_with(p, horizon, CensusOptions::default())
}

pub fn type_profiles_with(
    p: &Presentation,
    horizon: usize,
    opts: CensusOptions,
) -> Result<(BallCensus, Vec<TypeProfile>)> {
    let c = census::ball_census_with(p, horizon + 1, opts)?;
    let profiles = profiles_from(p, &c, horizon)?;
    Ok((c, profiles))
}

/// Profiles from an existing census, which must reach past `horizon`.
pub fn profiles_from(p: &Presentation, c: &BallCensus, horizon: usize) -> Result<Vec<TypeProfile>> {
    if c.max_radius() <= horizon {
        return Err(Error::RadiusMismatch(format!(
            "type sets through radius {horizon} need a census to radius {}",
            horizon + 1
        )));
    }
    Ok(c.centers().map(|x| profile_at(p, c, x, horizon)).collect())
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct NeighborReport {
    pub horizon: usize,
    /// No special balls at all, so every check passes trivially.
    pub vacuous: bool,
    pub checked: usize,
    pub censored: usize,
    /// Positions where part (2) or (3) could not be decided because a needed
    /// neighbor is censored.
    pub inconclusive: usize,
    pub violations: Vec<String>,
}

/// Checks, at every uncensored census center of maximal type `m`: all
/// neighbors have maximal type within one of `m`; some neighbor has `m + 1`;
/// and some neighbor has `m - 1` unless `m` is the least maximal type seen.
/// Same-fiber neighbors count as neighbors.
pub fn neighbor_type_check(p: &Presentation, horizon: usize) -> Result<NeighborReport> {
    let (c, profiles) = type_profiles(p, horizon)?;
    Ok(neighbor_type_check_from(p, &c, &profiles, horizon))
}

/// Largest number of distinct truncated type sets seen among a position and
/// its quotient neighbors, over every uncensored census center.
pub fn unit_ball_type_sets(p: &Presentation, c: &BallCensus, profiles: &[TypeProfile], horizon: usize) -> usize {
    profiles
        .iter()
        .filter(|x| !x.censored)
        .map(|x| {
            let mut sets: Vec<Vec<usize>> = p
                .quotient_neighbors(x.position)
                .into_iter()
                .map(|q| profile_at(p, c, q, horizon).type_set)
                .collect();
            sets.push(x.type_set.clone());
            sets.sort();
            sets.dedup();
            sets.len()
        })
        .max()
        .unwrap_or(0)
}

pub fn neighbor_type_check_from(
    p: &Presentation,
    c: &BallCensus,
    profiles: &[TypeProfile],
    horizon: usize,
) -> NeighborReport {
    let mut report = NeighborReport {
        horizon,
        ..Default::default()
    };
    if (0..c.max_radius()).all(|n| c.special_count(n) == 0) {
        report.vacuous = true;
        return report;
    }
    let min_type = profiles
        .iter()
        .filter(|q| !q.censored)
        .map(|q| q.max_type)
        .min()
        .unwrap_or(-1);
    for x in profiles {
        if x.censored {
            report.censored += 1;
            continue;
        }
        report.checked += 1;
        let m = x.max_type;
        let nbrs: Vec<TypeProfile> = p
            .quotient_neighbors(x.position)
            .into_iter()
            .map(|q| profile_at(p, c, q, horizon))
            .collect();
        let any_censored = nbrs.iter().any(|q| q.censored);
        for q in nbrs.iter().filter(|q| !q.censored) {
            if (q.max_type - m).abs() > 1 {
                report.violations.push(format!(
                    "position {} (type {m}) has neighbor {} of type {}",
                    x.position, q.position, q.max_type
                ));
            }
        }
        let has = |t: i64| nbrs.iter().any(|q| !q.censored && q.max_type == t);
        let mut undecided = false;
        if !has(m + 1) {
            if any_censored {
                undecided = true;
            } else {
                report.violations.push(format!(
                    "position {} (type {m}) has no neighbor of type {}",
                    x.position,
                    m + 1
                ));
            }
        }
        if m > min_type && !has(m - 1) {
            if any_censored {
                undecided = true;
            } else {
                report.violations.push(format!(
                    "position {} (type {m}) has no neighbor of type {}",
                    x.position,
                    m - 1
                ));
            }
        }
        if undecided {
            report.inconclusive += 1;
        }
    }
    report
}

/// Smallest `n` with `b(n + 1) = b(n)`.
pub fn detect_periodic(c: &BallCensus) -> Option<usize> {
    (0..c.max_radius()).find(|&n| c.b(n + 1) == c.b(n))
}

/// `b(n) = n + 2` for every `0 <= n <= horizon`.
pub fn is_sturmian_up_to(c: &BallCensus, horizon: usize) -> bool {
    horizon <= c.max_radius() && (0..=horizon).all(|n| c.b(n) == n + 2)
}

/// Rebuilds a finite quotient from the radius-`n` classes. Each class
/// becomes a vertex, and the index toward another class counts the tree
/// neighbors of a representative whose `n`-balls lie in that class.
pub fn reconstruct_quotient(p: &Presentation, n: usize) -> Result<Presentation> {
    let c = census::ball_census(p, n + 1)?;
    reconstruct_from(p, &c, n)
}

// the class-count matrix reads best with explicit indices
#[allow(clippy::needless_range_loop)]
pub fn reconstruct_from(p: &Presentation, c: &BallCensus, n: usize) -> Result<Presentation> {
    if c.max_radius() <= n {
        return Err(Error::RadiusMismatch(format!(
            "reconstruction at radius {n} needs a census to radius {}",
            n + 1
        )));
    }
    match detect_periodic(c) {
        Some(m) if m <= n => {}
        _ => return Err(Error::NotPeriodic(n)),
    }
    let classes = c.classes(n);
    let size = classes.len();
    let mut counts = vec![vec![0u32; size]; size];
    let mut colors = Vec::with_capacity(size);
    for (i, class) in classes.iter().enumerate() {
        let ball = cover::lift_ball(p, class.representative, n + 1)?;
        colors.push(ball.node(0).color);
        for child in ball.children(0) {
            let key = canon::canonical_key(&ball.sub_ball(child, n)?);
            let j = c.level(n).find(&key).ok_or_else(|| {
                Error::Reconstruction(format!(
                    "neighbor of class {i} has a radius-{n} ball missing from the census"
                ))
            })?;
            counts[i][j as usize] += 1;
        }
    }
    let mut edges = Vec::new();
    for i in 0..size {
        for j in i + 1..size {
            match (counts[i][j], counts[j][i]) {
                (0, 0) => {}
                (a, b) if a > 0 && b > 0 => edges.push(FiniteEdge {
                    u: i,
                    v: j,
                    pair: IndexPair::new(a, b),
                }),
                (a, b) => {
                    return Err(Error::Reconstruction(format!(
                        "classes {i} and {j} see each other {a} and {b} times"
                    )))
                }
            }
        }
    }
    let vertices = (0..size).map(|i| Vertex::new(colors[i], counts[i][i])).collect();
    Ok(Presentation::finite(p.degree(), p.alphabet().to_vec(), vertices, edges)?)
}

/// Whether two censuses have the same class keys at every radius through
/// `horizon`.
pub fn same_classes(a: &BallCensus, b: &BallCensus, horizon: usize) -> bool {
    (0..=horizon).all(|n| {
        let ka: BTreeSet<&CanonicalKey> = a.classes(n).iter().map(|c| &c.key).collect();
        let kb: BTreeSet<&CanonicalKey> = b.classes(n).iter().map(|c| &c.key).collect();
        ka == kb
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Shape {
    FiniteGraph,
    RayWithLoops,
    LineWithLoops,
    EventuallyPeriodicTypeA,
    EventuallyPeriodicTypeB,
    Other,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShapeVerdict {
    pub shape: Shape,
    pub evidence: Vec<String>,
}

impl ShapeVerdict {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("verdict serializes")
    }
}

/// Syntactic match against the ray shapes of the eventually periodic
/// classification: type A has a leading half-edge (self count 1) and index
/// pairs `(k-1, 1)` throughout; type B has no loop, leading pair `(k, 1)` and
/// `(k-1, 1)` after it.
pub fn classify_shape(p: &Presentation) -> ShapeVerdict {
    let k = p.degree();
    match p.kind() {
        Kind::Finite => ShapeVerdict {
            shape: Shape::FiniteGraph,
            evidence: vec![format!("{} vertices", p.finite_len().unwrap_or(0))],
        },
        Kind::Line => {
            let loops = (0..p.period() as Pos).filter(|&q| p.vertex(q).self_adjacency > 0).count();
            ShapeVerdict {
                shape: Shape::LineWithLoops,
                evidence: vec![format!("line, {loops} looped positions in one period")],
            }
        }
        Kind::Ray => {
            let tail = p.tails()[0];
            let span = (tail.offset as usize + tail.period()).max(p.explicit_len()) as Pos;
            let s0 = p.vertex(0).self_adjacency;
            let e0 = p.edge(0);
            let rest_loopless = (1..=span).all(|q| p.vertex(q).self_adjacency == 0);
            let rest_pairs = |from: Pos| (from..=span).all(|q| p.edge(q) == IndexPair::new(k - 1, 1));
            let mut evidence = vec![
                format!("position 0: self {s0}, edge ({}, {})", e0.fwd, e0.bwd),
                format!("positions 1..={span} loopless: {rest_loopless}"),
            ];
            let shape = if s0 == 1 && rest_loopless && rest_pairs(0) {
                evidence.push(format!("edges 0..={span} all ({}, 1)", k - 1));
                Shape::EventuallyPeriodicTypeA
            } else if s0 == 0 && e0 == IndexPair::new(k, 1) && rest_loopless && rest_pairs(1) {
                evidence.push(format!("edges 1..={span} all ({}, 1)", k - 1));
                Shape::EventuallyPeriodicTypeB
            } else {
                Shape::RayWithLoops
            };
            ShapeVerdict { shape, evidence }
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct NestingReport {
    pub checked: usize,
    /// `(n, l)` pairs where the witness ball of a special `n`-class holds no
    /// vertex whose `l`-ball is special.
    pub missing: Vec<(usize, usize)>,
}

/// For each special `n`-class (`1 <= n <= horizon`) and each `l < n`, looks
/// inside the representative's `n`-ball for a vertex whose `l`-ball is a
/// special `l`-class.
pub fn special_nesting(p: &Presentation, horizon: usize) -> Result<NestingReport> {
    let c = census::ball_census(p, horizon + 1)?;
    special_nesting_from(p, &c, horizon)
}

pub fn special_nesting_from(p: &Presentation, c: &BallCensus, horizon: usize) -> Result<NestingReport> {
    let mut report = NestingReport::default();
    let special_keys: Vec<BTreeSet<&CanonicalKey>> = (0..=horizon)
        .map(|l| c.special_classes(l).into_iter().map(|i| &c.classes(l)[i as usize].key).collect())
        .collect();
    for n in 1..=horizon {
        for id in c.special_classes(n) {
            let ball = cover::lift_ball(p, c.classes(n)[id as usize].representative, n)?;
            for (l, specials) in special_keys.iter().enumerate().take(n) {
                report.checked += 1;
                let mut found = false;
                for y in 0..ball.len() as u32 {
                    if ball.node(y).depth as usize + l > n {
                        break;
                    }
                    let key = canon::canonical_key(&ball.sub_ball(y, l)?);
                    if specials.contains(&key) {
                        found = true;
                        break;
                    }
                }
                if !found {
                    report.missing.push((n, l));
                }
            }
        }
    }
    Ok(report)
}

/// Among uncensored profiles, equal maximal type should mean equal
/// radius-`N` class. Returns the offending type values.
pub fn max_type_class_violations(profiles: &[TypeProfile]) -> Vec<i64> {
    let mut by_type: BTreeMap<i64, BTreeSet<u32>> = BTreeMap::new();
    for q in profiles.iter().filter(|q| !q.censored) {
        by_type.entry(q.max_type).or_default().insert(q.class_id);
    }
    by_type
        .into_iter()
        .filter(|(_, ids)| ids.len() > 1)
        .map(|(t, _)| t)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::example;

    #[test]
    fn bounded_type_root_has_empty_type() {
        let p = example("sec2-bounded-type").unwrap();
        let (c, profiles) = type_profiles(&p, 10).unwrap();
        assert!(is_sturmian_up_to(&c, 10));
        assert_eq!(profiles[0].position, 0);
        assert!(profiles[0].type_set.is_empty());
        assert_eq!(profiles[0].max_type, -1);
    }

    #[test]
    fn constant_profiles() {
        let p = example("constant").unwrap();
        let (c, profiles) = type_profiles(&p, 5).unwrap();
        assert!(profiles.iter().all(|q| q.max_type == -1));
        assert_eq!(detect_periodic(&c), Some(0));
        let r = neighbor_type_check(&p, 5).unwrap();
        assert!(r.vacuous && r.violations.is_empty());
        let q = reconstruct_quotient(&p, 3).unwrap();
        assert_eq!(q.finite_len(), Some(1));
        assert_eq!(q.vertex(0).self_adjacency, 3);
    }

    #[test]
    fn arbitrary_quotient_types_are_distances() {
        let p = example("arbitrary-quotient").unwrap();
        let n = 8;
        let (_, profiles) = type_profiles(&p, n).unwrap();
        for (d, q) in profiles.iter().enumerate().take(n) {
            assert_eq!(q.max_type, d as i64, "position {d}");
        }
    }

    #[test]
    fn alternating_reconstructs() {
        let p = example("alternating").unwrap();
        let c = census::ball_census(&p, 6).unwrap();
        assert_eq!(detect_periodic(&c), Some(0));
        assert!(!is_sturmian_up_to(&c, 6));
        let q = reconstruct_quotient(&p, 4).unwrap();
        assert_eq!(q.finite_len(), Some(2));
        assert_eq!(q.finite_edges().unwrap()[0].pair, IndexPair::new(3, 3));
        let c2 = census::ball_census(&q, 6).unwrap();
        assert!(same_classes(&c, &c2, 6));
    }

    #[test]
    fn sturmian_has_no_plateau() {
        let p = example("ex31-sturmian").unwrap();
        let c = census::ball_census(&p, 10).unwrap();
        assert_eq!(detect_periodic(&c), None);
        assert!(is_sturmian_up_to(&c, 10));
        assert!(matches!(reconstruct_from(&p, &c, 5), Err(Error::NotPeriodic(5))));
    }

    #[test]
    fn shapes() {
        let s = |n: &str| classify_shape(&example(n).unwrap()).shape;
        assert_eq!(s("ep-typeA"), Shape::EventuallyPeriodicTypeA);
        assert_eq!(s("ep-typeA-alternating"), Shape::EventuallyPeriodicTypeA);
        assert_eq!(s("ep-typeB"), Shape::EventuallyPeriodicTypeB);
        assert_eq!(s("sec2-bounded-type"), Shape::RayWithLoops);
        assert_eq!(s("fib-uniform"), Shape::LineWithLoops);
        assert_eq!(s("constant"), Shape::FiniteGraph);
        let v = classify_shape(&example("ep-typeB").unwrap());
        assert!(v.to_json().starts_with(r#"{"shape":"EventuallyPeriodicTypeB","evidence":["#));
    }

    #[test]
    fn nesting_holds_on_sturmian_rays() {
        for name in ["ex31-sturmian", "sec2-bounded-type"] {
            let r = special_nesting(&example(name).unwrap(), 7).unwrap();
            assert!(r.checked > 0 && r.missing.is_empty(), "{name}: {:?}", r.missing);
        }
    }
}
