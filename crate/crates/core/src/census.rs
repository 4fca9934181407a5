//! Ball census: the classes of colored `n`-balls for every radius up to a
//! horizon, how they extend, and which are special.
//!
//! Centers come from [`Presentation::census_centers`]. Centers whose
//! quotient neighborhoods agree up to the horizon get identical lifts, so only
//! one representative per neighborhood signature is lifted; that lift's keys
//! at every smaller radius are read off by truncation. Lifting and keying run
//! in the parallel map, class assembly is sequential.

use std::collections::HashMap;

use serde::Serialize;

use crate::canon::{self, CanonicalKey};
use crate::cover::{self, ball_size, DEFAULT_CAP};
use crate::error::{Error, Result};
use crate::graph::{Kind, Pos, Presentation};
use crate::par::{self, Parallelism};

#[derive(Clone, Copy, Debug)]
pub struct CensusOptions {
    pub cap: usize,
    pub parallelism: Parallelism,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            cap: DEFAULT_CAP,
            parallelism: Parallelism::default(),
        }
    }
}

impl CensusOptions {
    pub fn sequential() -> Self {
        CensusOptions {
            parallelism: Parallelism::Sequential,
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug)]
pub struct BallClass {
    pub key: CanonicalKey,
    /// Smallest center position whose ball is in this class.
    pub representative: Pos,
    /// The class of radius `n - 1` this one truncates to.
    pub restriction: Option<u32>,
    /// Classes of radius `n + 1` extending this one, in first-seen order.
    pub extensions: Vec<u32>,
    /// Some center in this class lies deep in a periodic tail.
    pub deep: bool,
}

#[derive(Clone, Debug, Default)]
pub struct Level {
    pub classes: Vec<BallClass>,
    index: HashMap<CanonicalKey, u32>,
}

impl Level {
    pub fn find(&self, key: &CanonicalKey) -> Option<u32> {
        self.index.get(key).copied()
    }
}

/// Centers sharing one neighborhood signature.
#[derive(Clone, Debug)]
struct Group {
    representative: Pos,
    classes: Vec<u32>,
    deep: bool,
}

#[derive(Clone, Debug)]
pub struct BallCensus {
    degree: u32,
    kind: Kind,
    max_radius: usize,
    levels: Vec<Level>,
    first_center: Pos,
    center_group: Vec<u32>,
    groups: Vec<Group>,
}

/// Builds the census through radius `n_max`.
pub fn ball_census(p: &Presentation, n_max: usize) -> Result<BallCensus> {
    ball_census_with(p, n_max, CensusOptions::default())
}

pub fn ball_census_with(p: &Presentation, n_max: usize, opts: CensusOptions) -> Result<BallCensus> {
    let needed = ball_size(p.degree(), n_max).unwrap_or(u64::MAX);
    if needed > opts.cap as u64 {
        return Err(Error::CapExceeded {
            needed,
            cap: opts.cap,
        });
    }
    let centers = p.census_centers(n_max);
    let first_center = centers[0];

    let mut center_group = Vec::with_capacity(centers.len());
    let mut groups: Vec<Group> = Vec::new();
    if p.kind() == Kind::Finite {
        for &c in &centers {
            center_group.push(groups.len() as u32);
            groups.push(Group {
                representative: c,
                classes: Vec::new(),
                deep: false,
            });
        }
    } else {
        let mut by_sig: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut sig = Vec::new();
        for &c in &centers {
            p.local_signature(c, n_max, &mut sig);
            let deep = p.is_deep(c, n_max);
            let g = match by_sig.get(&sig) {
                Some(&g) => g,
                None => {
                    let g = groups.len() as u32;
                    by_sig.insert(sig.clone(), g);
                    groups.push(Group {
                        representative: c,
                        classes: Vec::new(),
                        deep: false,
                    });
                    g
                }
            };
            groups[g as usize].deep |= deep;
            center_group.push(g);
        }
    }

    let reps: Vec<Pos> = groups.iter().map(|g| g.representative).collect();
    let keyed: Vec<Result<Vec<CanonicalKey>>> = par::map(opts.parallelism, &reps, |&c| {
        let ball = cover::lift_ball_capped(p, c, n_max, opts.cap)?;
        Ok(canon::keys_by_radius(&ball))
    });

    let mut levels: Vec<Level> = (0..=n_max).map(|_| Level::default()).collect();
    for (g, keys) in keyed.into_iter().enumerate() {
        let keys = keys?;
        let group = &mut groups[g];
        let mut prev: Option<u32> = None;
        for (n, key) in keys.into_iter().enumerate() {
            let level = &mut levels[n];
            let id = match level.index.get(&key) {
                Some(&id) => id,
                None => {
                    let id = level.classes.len() as u32;
                    level.index.insert(key.clone(), id);
                    level.classes.push(BallClass {
                        key,
                        representative: group.representative,
                        restriction: prev,
                        extensions: Vec::new(),
                        deep: false,
                    });
                    id
                }
            };
            let class = &mut level.classes[id as usize];
            class.deep |= group.deep;
            if class.restriction != prev {
                return Err(Error::Inconsistent(format!(
                    "radius-{n} class {id} truncates to two different classes"
                )));
            }
            if let Some(r) = prev {
                let below = &mut levels[n - 1].classes[r as usize];
                if !below.extensions.contains(&id) {
                    below.extensions.push(id);
                }
            }
            group.classes.push(id);
            prev = Some(id);
        }
    }

    Ok(BallCensus {
        degree: p.degree(),
        kind: p.kind(),
        max_radius: n_max,
        levels,
        first_center,
        center_group,
        groups,
    })
}

/// `b(n)`.
pub fn complexity(p: &Presentation, n: usize) -> Result<usize> {
    Ok(ball_census(p, n)?.b(n))
}

/// Keys of the special classes at radius `n` (requires `n < N`).
pub fn special_balls(c: &BallCensus, n: usize) -> Result<Vec<&CanonicalKey>> {
    if n >= c.max_radius {
        return Err(Error::RadiusMismatch(format!(
            "special balls at radius {n} need a census beyond radius {}",
            c.max_radius
        )));
    }
    Ok(c.levels[n]
        .classes
        .iter()
        .filter(|cl| cl.extensions.len() >= 2)
        .map(|cl| &cl.key)
        .collect())
}

impl BallCensus {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn max_radius(&self) -> usize {
        self.max_radius
    }

    pub fn b(&self, n: usize) -> usize {
        self.levels[n].classes.len()
    }

    /// `b(0), ..., b(N)`.
    pub fn values(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.classes.len()).collect()
    }

    pub fn level(&self, n: usize) -> &Level {
        &self.levels[n]
    }

    pub fn classes(&self, n: usize) -> &[BallClass] {
        &self.levels[n].classes
    }

    /// Special flags exist only below the horizon.
    pub fn is_special(&self, n: usize, class: u32) -> bool {
        n < self.max_radius && self.levels[n].classes[class as usize].extensions.len() >= 2
    }

    pub fn special_count(&self, n: usize) -> usize {
        if n >= self.max_radius {
            return 0;
        }
        self.levels[n]
            .classes
            .iter()
            .filter(|c| c.extensions.len() >= 2)
            .count()
    }

    /// Indices of the special classes at radius `n`.
    pub fn special_classes(&self, n: usize) -> Vec<u32> {
        (0..self.b(n) as u32).filter(|&c| self.is_special(n, c)).collect()
    }

    pub fn center_count(&self) -> usize {
        self.center_group.len()
    }

    /// The census centers, in ascending order.
    pub fn centers(&self) -> impl Iterator<Item = Pos> + '_ {
        (0..self.center_group.len() as Pos).map(move |i| self.first_center + i)
    }

    fn group_of(&self, center: Pos) -> Option<&Group> {
        let i = center - self.first_center;
        if i < 0 {
            return None;
        }
        self.center_group
            .get(i as usize)
            .map(|&g| &self.groups[g as usize])
    }

    /// Class id at radius `n` of a census center.
    pub fn center_class(&self, center: Pos, n: usize) -> Option<u32> {
        self.group_of(center).map(|g| g.classes[n])
    }

    /// Whether a census center lies deep in a periodic tail.
    pub fn center_is_deep(&self, center: Pos) -> bool {
        self.group_of(center).is_some_and(|g| g.deep)
    }

    /// Class id at radius `n` of any position, folding into the window.
    pub fn class_of(&self, p: &Presentation, pos: Pos, n: usize) -> Option<u32> {
        if !p.contains(pos) {
            return None;
        }
        self.center_class(p.fold_position(pos, self.max_radius), n)
    }

    /// Extension pairs `(n-class, (n+1)-class)` for `n < N`.
    pub fn extension_pairs(&self, n: usize) -> Vec<(&CanonicalKey, &CanonicalKey)> {
        if n >= self.max_radius {
            return Vec::new();
        }
        let up = &self.levels[n + 1].classes;
        self.levels[n]
            .classes
            .iter()
            .flat_map(|c| c.extensions.iter().map(move |&e| (&c.key, &up[e as usize].key)))
            .collect()
    }

    /// TSV rows `n  b(n)  #special`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("n\tb(n)\tspecial\n");
        for n in 0..=self.max_radius {
            out.push_str(&format!("{n}\t{}\t{}\n", self.b(n), self.special_count(n)));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct ClassOut<'a> {
            key: String,
            representative: Pos,
            special: bool,
            extensions: &'a [u32],
        }
        #[derive(Serialize)]
        struct LevelOut<'a> {
            n: usize,
            b: usize,
            special: usize,
            classes: Vec<ClassOut<'a>>,
        }
        let levels: Vec<LevelOut> = (0..=self.max_radius)
            .map(|n| LevelOut {
                n,
                b: self.b(n),
                special: self.special_count(n),
                classes: self.levels[n]
                    .classes
                    .iter()
                    .enumerate()
                    .map(|(i, c)| ClassOut {
                        key: c.key.hex(),
                        representative: c.representative,
                        special: self.is_special(n, i as u32),
                        extensions: &c.extensions,
                    })
                    .collect(),
            })
            .collect();
        serde_json::json!({
            "k": self.degree,
            "kind": self.kind,
            "max_radius": self.max_radius,
            "levels": levels,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::example;

    #[test]
    fn constant_is_one_class() {
        let c = ball_census(&example("constant").unwrap(), 6).unwrap();
        assert_eq!(c.values(), vec![1; 7]);
        for n in 0..6 {
            assert!(special_balls(&c, n).unwrap().is_empty());
        }
        assert!(special_balls(&c, 6).is_err());
    }

    #[test]
    fn bounded_type_is_n_plus_two() {
        let c = ball_census(&example("sec2-bounded-type").unwrap(), 10).unwrap();
        assert_eq!(c.values(), (2..=12).collect::<Vec<_>>());
    }

    #[test]
    fn sturmian_small_levels() {
        let p = example("ex31-sturmian").unwrap();
        let c = ball_census(&p, 9).unwrap();
        assert_eq!((c.b(0), c.b(1), c.b(2)), (2, 3, 4));
        for n in 0..9 {
            assert_eq!(special_balls(&c, n).unwrap().len(), 1, "n = {n}");
        }
    }

    #[test]
    fn alternating_is_two() {
        let c = ball_census(&example("alternating").unwrap(), 8).unwrap();
        assert_eq!(c.values(), vec![2; 9]);
        assert_eq!(complexity(&example("alternating").unwrap(), 0).unwrap(), 2);
        assert_eq!(complexity(&example("constant").unwrap(), 0).unwrap(), 1);
    }

    #[test]
    fn sequential_matches_parallel() {
        let p = example("arbitrary-quotient").unwrap();
        let a = ball_census_with(&p, 8, CensusOptions::sequential()).unwrap();
        let b = ball_census(&p, 8).unwrap();
        for n in 0..=8 {
            let ka: Vec<_> = a.classes(n).iter().map(|c| &c.key).collect();
            let kb: Vec<_> = b.classes(n).iter().map(|c| &c.key).collect();
            assert_eq!(ka, kb);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let p = example("constant").unwrap();
        let opts = CensusOptions {
            cap: 100,
            ..Default::default()
        };
        assert!(matches!(
            ball_census_with(&p, 8, opts),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn class_lookup_folds() {
        let p = example("ex31-sturmian").unwrap();
        let c = ball_census(&p, 5).unwrap();
        for q in 0..40 {
            let direct = crate::canon::canonical_key(&crate::cover::lift_ball(&p, q, 5).unwrap());
            let id = c.class_of(&p, q, 5).unwrap();
            assert_eq!(c.classes(5)[id as usize].key, direct, "position {q}");
        }
    }
}
