//! Bi-infinite words, factor complexity, and the constructions that lift a
//! word on the line to a coloring of a regular tree.
//!
//! Letters are small integers. When a word colors a presentation, letter `i`
//! becomes the color token `'a' + i`, so binary words use `a` and `b`.

use std::collections::HashSet;

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{ColorId, IndexPair, Pos, Presentation, Vertex};

pub type Rational = Ratio<i128>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InfiniteWord {
    /// `s(n) = floor((n+1)α + ρ) - floor(nα + ρ)` with `0 <= α < 1`.
    Mechanical { alpha: Rational, rho: Rational },
    /// `block[n mod len]`.
    Periodic(Vec<u8>),
    /// `core` at positions `0..core.len()`, `left` repeating below 0 (so
    /// `left[n mod left.len()]` for `n < 0`) and `right` repeating from
    /// `core.len()` on.
    Explicit {
        core: Vec<u8>,
        left: Vec<u8>,
        right: Vec<u8>,
    },
}

/// Where a word repeats: `(left_offset, left_period, right_offset, right_period)`
/// in the sense of [`Presentation::line_from_fn`].
pub type Structure = (Pos, usize, Pos, usize);

fn letters_of(text: &str) -> Result<Vec<u8>> {
    text.bytes()
        .map(|c| {
            if c.is_ascii_lowercase() {
                Ok(c - b'a')
            } else if c.is_ascii_digit() {
                Ok(c - b'0')
            } else {
                Err(Error::Parameter(format!("letter {:?} is not a-z or 0-9", c as char)))
            }
        })
        .collect()
}

impl InfiniteWord {
    pub fn mechanical(alpha: Rational, rho: Rational) -> Result<Self> {
        if alpha < Rational::zero() || alpha >= Rational::one() {
            return Err(Error::Parameter(format!("slope {alpha} must lie in [0, 1)")));
        }
        Ok(InfiniteWord::Mechanical { alpha, rho })
    }

    /// Periodic word from a block such as `"ab"`.
    pub fn periodic(block: &str) -> Result<Self> {
        let b = letters_of(block)?;
        if b.is_empty() {
            return Err(Error::Parameter("periodic block is empty".into()));
        }
        Ok(InfiniteWord::Periodic(b))
    }

    pub fn explicit(left: &str, core: &str, right: &str) -> Result<Self> {
        let (left, core, right) = (letters_of(left)?, letters_of(core)?, letters_of(right)?);
        if left.is_empty() || right.is_empty() {
            return Err(Error::Parameter("explicit word tails must be nonempty".into()));
        }
        Ok(InfiniteWord::Explicit { core, left, right })
    }

    /// Mechanical word whose slope is the first Fibonacci convergent
    /// `[0; 1, 1, 1, ...]` with denominator at least `min_den`.
    pub fn fibonacci(min_den: i128) -> Self {
        InfiniteWord::Mechanical {
            alpha: golden_convergent(min_den),
            rho: Rational::zero(),
        }
    }

    pub fn letter(&self, i: i64) -> u8 {
        match self {
            InfiniteWord::Mechanical { alpha, rho } => {
                // floor(nα + ρ) over the common denominator, without
                // renormalizing a rational per letter
                let den = alpha.denom() * rho.denom();
                let at = |n: i128| {
                    (n * alpha.numer() * rho.denom() + rho.numer() * alpha.denom()).div_euclid(den)
                };
                let n = i as i128;
                (at(n + 1) - at(n)) as u8
            }
            InfiniteWord::Periodic(block) => block[i.rem_euclid(block.len() as i64) as usize],
            InfiniteWord::Explicit { core, left, right } => {
                if i < 0 {
                    left[i.rem_euclid(left.len() as i64) as usize]
                } else if (i as usize) < core.len() {
                    core[i as usize]
                } else {
                    right[(i - core.len() as i64).rem_euclid(right.len() as i64) as usize]
                }
            }
        }
    }

    /// Letters at positions `lo..hi`.
    pub fn window(&self, lo: i64, hi: i64) -> Vec<u8> {
        (lo..hi).map(|i| self.letter(i)).collect()
    }

    /// Period of a mechanical word (the reduced denominator) or of a
    /// periodic block.
    pub fn period(&self) -> Option<usize> {
        match self {
            InfiniteWord::Mechanical { alpha, .. } => Some(*alpha.denom() as usize),
            InfiniteWord::Periodic(b) => Some(b.len()),
            InfiniteWord::Explicit { .. } => None,
        }
    }

    pub fn structure(&self) -> Structure {
        match self {
            InfiniteWord::Mechanical { .. } | InfiniteWord::Periodic(_) => {
                let l = self.period().expect("periodic");
                (0, l, 0, l)
            }
            InfiniteWord::Explicit { core, left, right } => {
                (0, left.len(), core.len() as Pos, right.len())
            }
        }
    }

    /// Positions that together contain every factor of length up to `len`.
    fn covering_range(&self, len: usize) -> (i64, i64) {
        let (lo, lp, ro, rp) = self.structure();
        (lo - lp as i64 - len as i64, ro + rp as i64 + len as i64)
    }

    /// For a rational approximation of an irrational slope, factors of length
    /// `len` are only trusted while `len` stays below the denominator.
    pub fn check_factor_window(&self, len: usize) -> Result<()> {
        if let InfiniteWord::Mechanical { alpha, .. } = self {
            if len as i128 >= *alpha.denom() {
                return Err(Error::Parameter(format!(
                    "factor length {len} reaches the slope denominator {}",
                    alpha.denom()
                )));
            }
        }
        Ok(())
    }

    /// Largest letter plus one.
    pub fn alphabet_size(&self) -> usize {
        let (lo, hi) = self.covering_range(1);
        self.window(lo, hi).into_iter().max().map_or(1, |m| m as usize + 1)
    }

    /// Image under a substitution, materialized as a periodic word. The
    /// image of the letter at position 0 starts at position 0.
    pub fn substitute(&self, images: &[&str]) -> Result<Self> {
        let Some(l) = self.period() else {
            return Err(Error::Parameter("substitution needs a periodic word".into()));
        };
        let images: Vec<Vec<u8>> = images.iter().map(|s| letters_of(s)).collect::<Result<_>>()?;
        let mut block = Vec::new();
        for c in self.window(0, l as i64) {
            let img = images
                .get(c as usize)
                .ok_or_else(|| Error::Parameter(format!("no image for letter {c}")))?;
            block.extend_from_slice(img);
        }
        if block.is_empty() {
            return Err(Error::Parameter("substitution image is empty".into()));
        }
        Ok(InfiniteWord::Periodic(block))
    }
}

/// Letter as a string token: 0 is `a`, 1 is `b`, and so on.
pub fn letter_name(letter: u8) -> String {
    ((b'a' + letter) as char).to_string()
}

/// Color token of the letter at `i`.
pub fn word_letter(w: &InfiniteWord, i: i64) -> String {
    letter_name(w.letter(i))
}

/// Convergent `p/q` of a finite continued fraction `[a0; a1, a2, ...]`.
pub fn convergent(digits: &[u64]) -> Result<Rational> {
    let (mut h, mut h1) = (1i128, 0i128);
    let (mut k, mut k1) = (0i128, 1i128);
    if digits.is_empty() {
        return Err(Error::Parameter("continued fraction has no digits".into()));
    }
    for (i, &a) in digits.iter().enumerate() {
        if i > 0 && a == 0 {
            return Err(Error::Parameter("continued fraction digits after the first must be >= 1".into()));
        }
        let a = a as i128;
        let next_h = a.checked_mul(h).and_then(|x| x.checked_add(h1));
        let next_k = a.checked_mul(k).and_then(|x| x.checked_add(k1));
        let (Some(nh), Some(nk)) = (next_h, next_k) else {
            return Err(Error::Parameter("continued fraction convergent overflows".into()));
        };
        (h1, h) = (h, nh);
        (k1, k) = (k, nk);
    }
    Ok(Rational::new(h, k))
}

/// First convergent of `[0; 1, 1, 1, ...]` (ratios of consecutive Fibonacci
/// numbers, tending to the inverse golden ratio) with denominator `>= min_den`.
pub fn golden_convergent(min_den: i128) -> Rational {
    let (mut p, mut q) = (1i128, 1i128);
    while q < min_den {
        (p, q) = (q, p + q);
    }
    Rational::new(p, q)
}

/// Parses `"p/q"`, an integer, or a continued fraction `"[a0; a1, a2]"`
/// (also accepted without brackets as `"a0;a1,a2"`).
pub fn parse_slope(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::Parameter(format!("cannot parse slope {text:?}"));
    if t.contains(';') || t.starts_with('[') {
        let inner = t.trim_start_matches('[').trim_end_matches(']');
        let digits: Vec<u64> = inner
            .split([';', ','])
            .map(|d| d.trim())
            .filter(|d| !d.is_empty())
            .map(|d| d.parse::<u64>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        return convergent(&digits);
    }
    match t.split_once('/') {
        Some((p, q)) => {
            let p: i128 = p.trim().parse().map_err(|_| bad())?;
            let q: i128 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

fn factors(w: &InfiniteWord, n: usize, lo: i64, hi: i64) -> usize {
    let letters = w.window(lo, hi + n as i64);
    if n == 0 {
        return 1;
    }
    letters[..]
        .windows(n)
        .take((hi - lo) as usize)
        .collect::<HashSet<_>>()
        .len()
}

/// Number of distinct length-`n` factors starting in `[-window, window)`,
/// checked against the window `[-2 window, 2 window)`.
pub fn word_complexity(w: &InfiniteWord, n: usize, window: usize) -> Result<usize> {
    let w1 = window as i64;
    let small = factors(w, n, -w1, w1);
    let large = factors(w, n, -2 * w1, 2 * w1);
    if small != large {
        return Err(Error::Unstable { small, large });
    }
    Ok(small)
}

/// Factor complexity of the one-sided word `w[0..]`: factors starting in
/// `[0, window)`, checked against `[0, 2 window)`.
pub fn right_word_complexity(w: &InfiniteWord, n: usize, window: usize) -> Result<usize> {
    let w1 = window as i64;
    let small = factors(w, n, 0, w1);
    let large = factors(w, n, 0, 2 * w1);
    if small != large {
        return Err(Error::Unstable { small, large });
    }
    Ok(small)
}

fn binary_alphabet(size: usize) -> Vec<String> {
    (0..size as u8).map(letter_name).collect()
}

fn line_for(
    w: &InfiniteWord,
    degree: u32,
    alphabet: Vec<String>,
    scale: usize,
    site: impl Fn(Pos) -> (Vertex, IndexPair),
) -> Result<Presentation> {
    let (lo, lp, ro, rp) = w.structure();
    let s = scale as Pos;
    Ok(Presentation::line_from_fn(
        degree,
        alphabet,
        lo * s,
        lp * scale,
        ro * s,
        rp * scale,
        site,
    )?)
}

/// The 2-regular tree (a line) colored by the word.
pub fn line_from_word(w: &InfiniteWord) -> Result<Presentation> {
    lift_word_uniform(w, 0, 1, 2)
}

/// Every position gets `s` same-fiber neighbors and index `t` toward both
/// line neighbors, so `k = s + 2t`.
pub fn lift_word_uniform(w: &InfiniteWord, s: u32, t: u32, k: u32) -> Result<Presentation> {
    if t == 0 || s + 2 * t != k {
        return Err(Error::Parameter(format!(
            "uniform lift needs t >= 1 and s + 2t = k, got s = {s}, t = {t}, k = {k}"
        )));
    }
    let alphabet = binary_alphabet(w.alphabet_size());
    line_for(w, k, alphabet, 1, |p| {
        (Vertex::new(ColorId(w.letter(p) as u16), s), IndexPair::new(t, t))
    })
}

/// Colors alternate `a` (even positions) and `b` (odd positions). The
/// `a`-vertex at `2j` takes `(t1, s1)` when the word letter at `j` is the
/// first letter (`c`) and `(t2, s2)` otherwise (`d`); every `b`-vertex takes
/// `(t3, s3)`. A vertex's `t` is its index toward both line neighbors.
#[allow(clippy::too_many_arguments)]
pub fn lift_word_alternating(
    w: &InfiniteWord,
    s1: u32,
    s2: u32,
    s3: u32,
    t1: u32,
    t2: u32,
    t3: u32,
    k: u32,
) -> Result<Presentation> {
    for (i, (s, t)) in [(s1, t1), (s2, t2), (s3, t3)].into_iter().enumerate() {
        if t == 0 || s + 2 * t != k {
            return Err(Error::Parameter(format!(
                "alternating lift needs t{0} >= 1 and s{0} + 2 t{0} = k",
                i + 1
            )));
        }
    }
    if s1 == s2 {
        return Err(Error::Parameter("alternating lift needs s1 != s2".into()));
    }
    let local = |p: Pos| -> (u16, u32, u32) {
        if p.rem_euclid(2) == 1 {
            (1, t3, s3)
        } else if w.letter(p.div_euclid(2)) == 0 {
            (0, t1, s1)
        } else {
            (0, t2, s2)
        }
    };
    line_for(w, k, binary_alphabet(2), 2, |p| {
        let (c, t, s) = local(p);
        let (_, t_next, _) = local(p + 1);
        (Vertex::new(ColorId(c), s), IndexPair::new(t, t_next))
    })
}

/// Colors follow the word (`a` = letter 0, `b` = letter 1). An `a`-vertex
/// has index `t1` toward each neighbor and `s1` to its own fiber; a
/// `b`-vertex has `t1` toward an `a`, `t2` toward a `b` and `s2` to its own
/// fiber. The word must avoid `aba` and `bbb`.
pub fn lift_word_ab(w: &InfiniteWord, s1: u32, s2: u32, t1: u32, t2: u32, k: u32) -> Result<Presentation> {
    if t1 == 0 || t2 == 0 || 2 * t1 + s1 != k || t1 + t2 + s2 != k {
        return Err(Error::Parameter(format!(
            "ab lift needs t1, t2 >= 1, 2 t1 + s1 = k and t1 + t2 + s2 = k \
             (s1 = {s1}, s2 = {s2}, t1 = {t1}, t2 = {t2}, k = {k})"
        )));
    }
    if s1 == s2 {
        return Err(Error::Parameter("ab lift needs s1 != s2".into()));
    }
    let (lo, hi) = w.covering_range(3);
    let letters = w.window(lo, hi);
    if let Some(l) = letters.iter().find(|&&l| l > 1) {
        return Err(Error::Parameter(format!("ab lift needs a binary word, found letter {l}")));
    }
    for (i, f) in letters.windows(3).enumerate() {
        if f == [0, 1, 0] || f == [1, 1, 1] {
            return Err(Error::ForbiddenFactor {
                factor: f.iter().map(|&l| letter_name(l)).collect(),
                index: lo + i as i64,
            });
        }
    }
    let out = |from: u8, to: u8| if from == 1 && to == 1 { t2 } else { t1 };
    line_for(w, k, binary_alphabet(2), 1, |p| {
        let (here, next) = (w.letter(p), w.letter(p + 1));
        let s = if here == 0 { s1 } else { s2 };
        (Vertex::new(ColorId(here as u16), s), IndexPair::new(out(here, next), out(next, here)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periodic_letter() {
        let w = InfiniteWord::periodic("ab").unwrap();
        assert_eq!(word_letter(&w, 5), "b");
        assert_eq!(word_letter(&w, -1), "b");
        assert_eq!(word_letter(&w, -2), "a");
    }

    #[test]
    fn explicit_tails() {
        let w = InfiniteWord::explicit("b", "ba", "aab").unwrap();
        assert_eq!(w.window(-2, 9), letters_of("bbbaaabaaba").unwrap());
        assert_eq!(word_letter(&w, 100), word_letter(&w, 103));
    }

    #[test]
    fn mechanical_formula() {
        // independent evaluation of the floor formula with integer arithmetic
        let w = InfiniteWord::mechanical(Rational::new(13, 21), Rational::zero()).unwrap();
        for n in -50i128..50 {
            let expect = ((n + 1) * 13).div_euclid(21) - (n * 13).div_euclid(21);
            assert_eq!(w.letter(n as i64) as i128, expect);
        }
        assert_eq!(w.window(0, 8), [0, 1, 0, 1, 1, 0, 1, 0]);
    }

    #[test]
    fn convergents() {
        assert_eq!(convergent(&[0, 1, 1, 1, 1, 1, 1, 1]).unwrap(), Rational::new(13, 21));
        assert_eq!(golden_convergent(34), Rational::new(21, 34));
        assert_eq!(golden_convergent(1_000_000), Rational::new(832040, 1346269));
        assert_eq!(parse_slope("[0;1,1,1,1,1,1,1]").unwrap(), Rational::new(13, 21));
        assert_eq!(parse_slope("21/34").unwrap(), Rational::new(21, 34));
        assert!(parse_slope("x").is_err());
        assert!(convergent(&[0, 0]).is_err());
    }

    #[test]
    fn complexity_periodic() {
        let w = InfiniteWord::periodic("ab").unwrap();
        for n in 1..10 {
            assert_eq!(word_complexity(&w, n, 64).unwrap(), 2);
        }
    }

    #[test]
    fn unstable_window() {
        let w = InfiniteWord::explicit("a", "", "b").unwrap();
        assert!(matches!(word_complexity(&w, 3, 1), Err(Error::Unstable { .. })));
        assert_eq!(word_complexity(&w, 3, 16).unwrap(), 4);
    }

    #[test]
    fn lift_parameters() {
        let w = InfiniteWord::fibonacci(34);
        assert!(lift_word_uniform(&w, 1, 1, 4).is_err());
        assert!(lift_word_alternating(&w, 1, 1, 1, 1, 1, 1, 3).is_err());
        assert!(lift_word_alternating(&w, 2, 0, 2, 1, 2, 1, 4).is_ok());
        assert!(lift_word_ab(&w, 1, 1, 1, 1, 3).is_err());
        let bad = InfiniteWord::periodic("abab").unwrap();
        assert!(matches!(
            lift_word_ab(&bad, 2, 1, 1, 2, 4),
            Err(Error::ForbiddenFactor { .. })
        ));
        let good = w.substitute(&["a", "abb"]).unwrap();
        let p = lift_word_ab(&good, 2, 1, 1, 2, 4).unwrap();
        assert_eq!(p.degree(), 4);
    }

    #[test]
    fn uniform_degenerates_to_line() {
        let w = InfiniteWord::fibonacci(34);
        assert_eq!(lift_word_uniform(&w, 0, 1, 2).unwrap(), line_from_word(&w).unwrap());
    }
}
