//! Brute-force census, kept independent of the fast path.
//!
//! No signature folding and no window arithmetic: every tree vertex near a
//! lifted base is re-rooted out of a large patch and keyed directly, classes
//! live in ordered maps, and the result is accepted only when enlarging the
//! search radius changes nothing.

use std::collections::{BTreeMap, BTreeSet};

use crate::canon::{self, CanonicalKey};
use crate::census::BallCensus;
use crate::cover::{self, ColoredBall, DEFAULT_CAP};
use crate::error::Result;
use crate::graph::{Kind, Pos, Presentation};

/// Per radius: class key to the keys of its extensions one radius up.
pub type OracleLevels = Vec<BTreeMap<CanonicalKey, BTreeSet<CanonicalKey>>>;

#[derive(Clone, Debug)]
pub struct OracleCensus {
    pub max_radius: usize,
    /// Search radius that produced `levels`.
    pub search_radius: usize,
    /// Result unchanged at the enlarged search radius.
    pub saturated: bool,
    pub levels: OracleLevels,
}

impl OracleCensus {
    pub fn b(&self, n: usize) -> usize {
        self.levels[n].len()
    }

    pub fn values(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.len()).collect()
    }

    pub fn special_count(&self, n: usize) -> usize {
        if n >= self.max_radius {
            return 0;
        }
        self.levels[n].values().filter(|e| e.len() >= 2).count()
    }
}

type LevelsFn = fn(&Presentation, usize, usize, usize) -> Result<OracleLevels>;

fn record(levels: &mut OracleLevels, keys: Vec<CanonicalKey>) {
    let mut keys = keys.into_iter().peekable();
    let mut n = 0;
    while let Some(k) = keys.next() {
        let ext = levels[n].entry(k).or_default();
        if let Some(up) = keys.peek() {
            ext.insert(up.clone());
        }
        n += 1;
    }
}

fn finite_levels(p: &Presentation, n_max: usize, r: usize, cap: usize) -> Result<OracleLevels> {
    let mut levels: OracleLevels = vec![BTreeMap::new(); n_max + 1];
    let patch = cover::lift_patch_capped(p, 0, r, n_max, cap)?;
    for &c in patch.centers() {
        let ball = patch.sub_ball(c, n_max)?;
        record(&mut levels, canon::keys_by_radius(&ball));
    }
    Ok(levels)
}

fn positional_levels(p: &Presentation, n_max: usize, r: usize, cap: usize) -> Result<OracleLevels> {
    let mut levels: OracleLevels = vec![BTreeMap::new(); n_max + 1];
    let r = r as Pos;
    let lo = if p.kind() == Kind::Ray { 0 } else { -r };
    for base in lo..=r {
        let patch = cover::lift_patch_capped(p, base, 1, n_max, cap)?;
        for &c in patch.centers() {
            let ball = patch.sub_ball(c, n_max)?;
            record(&mut levels, canon::keys_by_radius(&ball));
        }
    }
    Ok(levels)
}

/// Census over every tree vertex within distance `r` of a lifted base
/// point, then again at `r` plus one period (rays, lines) or one diameter
/// (finite graphs) to certify saturation.
///
/// For rays and lines a single lifted patch of radius `r + N` is out of
/// reach for the radii involved, so the search visits each quotient position
/// within distance `r` of position 0 and lifts a radius-1 patch around it;
/// the root and its tree neighbors are the centers. Every tree vertex within
/// tree distance `r` of a base lift projects into that range.
pub fn brute_force_census(p: &Presentation, n_max: usize, r: usize) -> Result<OracleCensus> {
    brute_force_census_capped(p, n_max, r, DEFAULT_CAP)
}

pub fn brute_force_census_capped(p: &Presentation, n_max: usize, r: usize, cap: usize) -> Result<OracleCensus> {
    let (step, run): (usize, LevelsFn) = match p.kind() {
        Kind::Finite => (p.finite_diameter().unwrap_or(1).max(1), finite_levels),
        _ => (p.period(), positional_levels),
    };
    let levels = run(p, n_max, r, cap)?;
    let wider = run(p, n_max, r + step, cap)?;
    Ok(OracleCensus {
        max_radius: n_max,
        search_radius: r,
        saturated: levels == wider,
        levels,
    })
}

/// A search radius that reaches every position of the fast census window
/// (the diameter for finite graphs).
pub fn default_search_radius(p: &Presentation, n_max: usize) -> usize {
    match p.kind() {
        Kind::Finite => p.finite_diameter().unwrap_or(0),
        _ => {
            let l = p.period();
            let reach = match p.kind() {
                Kind::Ray => p.explicit_len() + n_max + l,
                _ => match p.line_period() {
                    Some(l) => l,
                    None => p.explicit_len() + n_max + 2 * l,
                },
            };
            reach.max(1)
        }
    }
}

/// Differences between a fast census and an oracle result, as readable
/// lines; empty when they agree on keys, counts and extensions.
pub fn compare(fast: &BallCensus, oracle: &OracleCensus) -> Vec<String> {
    let mut out = Vec::new();
    if fast.max_radius() != oracle.max_radius {
        out.push(format!(
            "horizons differ: {} vs {}",
            fast.max_radius(),
            oracle.max_radius
        ));
        return out;
    }
    for n in 0..=fast.max_radius() {
        if fast.b(n) != oracle.b(n) {
            out.push(format!("b({n}): fast {} vs oracle {}", fast.b(n), oracle.b(n)));
        }
        let up = (n < fast.max_radius()).then(|| fast.classes(n + 1));
        for class in fast.classes(n) {
            match oracle.levels[n].get(&class.key) {
                None => out.push(format!("radius {n}: class {} missing from oracle", class.key.short_hex())),
                Some(ext) => {
                    if let Some(up) = up {
                        let mine: BTreeSet<&CanonicalKey> =
                            class.extensions.iter().map(|&e| &up[e as usize].key).collect();
                        let theirs: BTreeSet<&CanonicalKey> = ext.iter().collect();
                        if mine != theirs {
                            out.push(format!(
                                "radius {n}: class {} has {} extensions, oracle {}",
                                class.key.short_hex(),
                                mine.len(),
                                theirs.len()
                            ));
                        }
                    }
                }
            }
        }
        for key in oracle.levels[n].keys() {
            if fast.level(n).find(key).is_none() {
                out.push(format!("radius {n}: oracle class {} missing from census", key.short_hex()));
            }
        }
    }
    if !oracle.saturated {
        out.push(format!("oracle UNSATURATED at search radius {}", oracle.search_radius));
    }
    out
}

/// Root-fixing color-preserving isomorphism by exhaustive backtracking over
/// child bijections. Exponential in the worst case; meant for small balls.
pub fn isomorphic_brute_force(a: &ColoredBall, b: &ColoredBall) -> bool {
    fn iso(a: &ColoredBall, u: u32, b: &ColoredBall, v: u32) -> bool {
        if a.color_name(u) != b.color_name(v) {
            return false;
        }
        let cu: Vec<u32> = a.children(u).collect();
        let cv: Vec<u32> = b.children(v).collect();
        if cu.len() != cv.len() {
            return false;
        }
        let mut used = vec![false; cv.len()];
        assign(a, &cu, b, &cv, 0, &mut used)
    }
    fn assign(a: &ColoredBall, cu: &[u32], b: &ColoredBall, cv: &[u32], i: usize, used: &mut [bool]) -> bool {
        if i == cu.len() {
            return true;
        }
        for j in 0..cv.len() {
            if !used[j] && iso(a, cu[i], b, cv[j]) {
                used[j] = true;
                if assign(a, cu, b, cv, i + 1, used) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
    a.len() == b.len() && iso(a, a.root(), b, b.root())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::example;
    use crate::census::ball_census;

    #[test]
    fn constant_any_radius() {
        let p = example("constant").unwrap();
        for r in 0..3 {
            let o = brute_force_census(&p, 4, r).unwrap();
            assert_eq!(o.values(), vec![1; 5]);
            assert!(o.saturated);
        }
    }

    #[test]
    fn bounded_type_matches_fast_path() {
        let p = example("sec2-bounded-type").unwrap();
        let o = brute_force_census(&p, 8, default_search_radius(&p, 8)).unwrap();
        let c = ball_census(&p, 8).unwrap();
        assert!(compare(&c, &o).is_empty(), "{:?}", compare(&c, &o));
        assert_eq!(o.values(), (2..=10).collect::<Vec<_>>());
    }

    #[test]
    fn sturmian_oracle_values() {
        let p = example("ex31-sturmian").unwrap();
        let o = brute_force_census(&p, 8, default_search_radius(&p, 8)).unwrap();
        assert!(o.saturated);
        assert_eq!(o.values(), (2..=10).collect::<Vec<_>>());
    }

    #[test]
    fn too_small_radius_is_unsaturated() {
        let p = example("ex31-sturmian").unwrap();
        let o = brute_force_census(&p, 6, 1).unwrap();
        assert!(!o.saturated);
    }

    #[test]
    fn alternating_has_no_special_balls() {
        let p = example("alternating").unwrap();
        let o = brute_force_census(&p, 8, 1).unwrap();
        assert_eq!(o.values(), vec![2; 9]);
        assert!((0..8).all(|n| o.special_count(n) == 0));
    }
}
