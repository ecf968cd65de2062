//! Lee-metric primitives: words, distances, spheres and double-spheres.
//!
//! A [`Word`] is an integer vector. Sets of words are returned as sorted,
//! duplicate-free vectors so that output is reproducible line for line.

use std::fmt;
use std::ops::{Add, Deref, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An integer vector of fixed length, an element of `Z^n` (or of `Z_q^n`
/// when reduced).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<i64>);

impl Word {
    pub fn new(coords: Vec<i64>) -> Self {
        Word(coords)
    }

    pub fn zero(n: usize) -> Self {
        Word(vec![0; n])
    }

    /// The unit vector `e_axis`, with `axis` counted from 1.
    pub fn unit(n: usize, axis: usize) -> Self {
        assert!(axis >= 1 && axis <= n, "axis {axis} out of range 1..={n}");
        let mut w = vec![0; n];
        w[axis - 1] = 1;
        Word(w)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<i64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Lee weight in `Z^n`, i.e. the distance to the origin.
    pub fn weight(&self) -> u64 {
        self.0.iter().map(|c| c.unsigned_abs()).sum()
    }

    /// Parity of the Lee weight, computed without summing magnitudes.
    pub fn has_even_weight(&self) -> bool {
        self.0.iter().fold(0i64, |acc, c| acc ^ (c & 1)) == 0
    }

    /// Canonical representative modulo `q`, every coordinate in `[0, q)`.
    pub fn reduce(&self, q: u64) -> Word {
        let q = q as i64;
        Word(self.0.iter().map(|c| c.rem_euclid(q)).collect())
    }

    pub fn checked_add(&self, other: &Word) -> Result<Word> {
        check_dims(self, other)?;
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow("word addition")))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn checked_sub(&self, other: &Word) -> Result<Word> {
        check_dims(self, other)?;
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b).ok_or(Error::Overflow("word subtraction")))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    /// Largest absolute coordinate.
    pub fn max_abs(&self) -> u64 {
        self.0.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0)
    }
}

impl Deref for Word {
    type Target = [i64];

    fn deref(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for Word {
    fn from(v: Vec<i64>) -> Self {
        Word(v)
    }
}

impl<const N: usize> From<[i64; N]> for Word {
    fn from(v: [i64; N]) -> Self {
        Word(v.to_vec())
    }
}

// The operator impls panic on length mismatch or overflow; use the checked
// methods where either can happen.
impl Add for &Word {
    type Output = Word;

    fn add(self, rhs: &Word) -> Word {
        self.checked_add(rhs).expect("word addition")
    }
}

impl Sub for &Word {
    type Output = Word;

    fn sub(self, rhs: &Word) -> Word {
        self.checked_sub(rhs).expect("word subtraction")
    }
}

impl Neg for &Word {
    type Output = Word;

    fn neg(self) -> Word {
        Word(
            self.0
                .iter()
                .map(|c| c.checked_neg().expect("word negation"))
                .collect(),
        )
    }
}

/// Comma-separated integers, e.g. `5,-4,0`.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty word".into()));
        }
        s.split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<i64>()
                    .map_err(|e| Error::Parse(format!("bad coordinate {tok:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

fn check_dims(u: &Word, v: &Word) -> Result<()> {
    if u.dim() != v.dim() {
        return Err(Error::Dimension {
            expected: u.dim(),
            got: v.dim(),
        });
    }
    Ok(())
}

/// Formats a set of words as newline-separated lines in lexicographic order.
pub fn format_word_set(words: &[Word]) -> String {
    let mut sorted: Vec<&Word> = words.iter().collect();
    sorted.sort();
    sorted.dedup();
    let mut out = String::new();
    for w in sorted {
        out.push_str(&w.to_string());
        out.push('\n');
    }
    out
}

/// Parses newline-separated word lines. Blank lines and `#` comments are
/// skipped. All words must share one dimension.
pub fn parse_word_set(text: &str) -> Result<Vec<Word>> {
    let mut words = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let w: Word = line.parse()?;
        if let Some(first) = words.first() {
            check_dims(first, &w)?;
        }
        words.push(w);
    }
    if words.is_empty() {
        return Err(Error::Parse("no words in set".into()));
    }
    words.sort();
    words.dedup();
    Ok(words)
}

/// Lee distance between two words of `Z^n`, or of `Z_q^n` when `q` is given.
pub fn lee_distance(u: &Word, v: &Word, q: Option<u64>) -> Result<u64> {
    check_dims(u, v)?;
    match q {
        None => u.iter().zip(v.iter()).try_fold(0u64, |acc, (a, b)| {
            let d = (*a as i128 - *b as i128).unsigned_abs();
            let d = u64::try_from(d).map_err(|_| Error::Overflow("lee distance"))?;
            acc.checked_add(d).ok_or(Error::Overflow("lee distance"))
        }),
        Some(q) => {
            if q < 2 {
                return Err(Error::Domain(format!(
                    "modulus must be at least 2, got {q}"
                )));
            }
            let qi = q as i128;
            Ok(u.iter()
                .zip(v.iter())
                .map(|(a, b)| {
                    let d = (*a as i128 - *b as i128).rem_euclid(qi);
                    d.min(qi - d) as u64
                })
                .sum())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AnticodeKind {
    Sphere,
    DoubleSphere,
}

/// Describes one of the two maximal anticode shapes. `axis` (counted from 1)
/// is the direction of the second center for a double-sphere.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AnticodeSpec {
    pub kind: AnticodeKind,
    #[serde(skip)]
    pub n: usize,
    pub r: u64,
    pub axis: usize,
}

impl AnticodeSpec {
    pub fn sphere(n: usize, r: u64) -> Self {
        AnticodeSpec {
            kind: AnticodeKind::Sphere,
            n,
            r,
            axis: 1,
        }
    }

    pub fn double_sphere(n: usize, r: u64) -> Self {
        AnticodeSpec {
            kind: AnticodeKind::DoubleSphere,
            n,
            r,
            axis: 1,
        }
    }

    /// Minimum distance of a perfect code tiled by this anticode.
    pub fn code_distance(&self) -> u64 {
        match self.kind {
            AnticodeKind::Sphere => 2 * self.r + 1,
            AnticodeKind::DoubleSphere => 2 * self.r + 2,
        }
    }

    pub fn points(&self) -> Result<Vec<Word>> {
        match self.kind {
            AnticodeKind::Sphere => Ok(lee_sphere(self.n, self.r)),
            AnticodeKind::DoubleSphere => double_sphere(self.n, self.r, self.axis),
        }
    }

    pub fn size(&self) -> Result<u128> {
        match self.kind {
            AnticodeKind::Sphere => sphere_size(self.n, self.r),
            AnticodeKind::DoubleSphere => double_sphere_size(self.n, self.r),
        }
    }
}

/// All words within Lee distance `r` of the origin in `Z^n`, in
/// lexicographic order.
pub fn lee_sphere(n: usize, r: u64) -> Vec<Word> {
    assert!(n >= 1, "dimension must be positive");
    let r = r as i64;
    let mut out = Vec::new();
    let mut cur = vec![0i64; n];
    fn rec(i: usize, budget: i64, cur: &mut Vec<i64>, out: &mut Vec<Word>) {
        if i == cur.len() {
            out.push(Word(cur.clone()));
            return;
        }
        for c in -budget..=budget {
            cur[i] = c;
            rec(i + 1, budget - c.abs(), cur, out);
        }
        cur[i] = 0;
    }
    rec(0, r, &mut cur, &mut out);
    out
}

/// `S_{n,r}(O) ∪ S_{n,r}(e_axis)` in lexicographic order.
pub fn double_sphere(n: usize, r: u64, axis: usize) -> Result<Vec<Word>> {
    if n == 0 {
        return Err(Error::Domain("dimension must be positive".into()));
    }
    if axis == 0 || axis > n {
        return Err(Error::Domain(format!("axis {axis} out of range 1..={n}")));
    }
    let shift = Word::unit(n, axis);
    let base = lee_sphere(n, r);
    let mut out: Vec<Word> = base.iter().map(|w| w + &shift).collect();
    out.extend(base);
    out.sort();
    out.dedup();
    Ok(out)
}

fn binomial(n: u64, k: u64) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is always divisible by (i + 1) at this point
        acc = acc
            .checked_mul((n - i) as u128)
            .ok_or(Error::Overflow("binomial"))?
            / (i as u128 + 1);
    }
    Ok(acc)
}

/// Volume of the double-sphere,
/// `sum_{i=0}^{min(n-1,r)} 2^{i+1} C(n-1,i) C(r+1,i+1)`.
pub fn double_sphere_size(n: usize, r: u64) -> Result<u128> {
    if n == 0 {
        return Err(Error::Domain("dimension must be positive".into()));
    }
    let n = n as u64;
    let top = (n - 1).min(r);
    let mut total: u128 = 0;
    for i in 0..=top {
        let pow = 1u128
            .checked_shl((i + 1) as u32)
            .filter(|_| i + 1 < 128)
            .ok_or(Error::Overflow("double-sphere volume"))?;
        let term = pow
            .checked_mul(binomial(n - 1, i)?)
            .and_then(|t| t.checked_mul(binomial(r + 1, i + 1).ok()?))
            .ok_or(Error::Overflow("double-sphere volume"))?;
        total = total
            .checked_add(term)
            .ok_or(Error::Overflow("double-sphere volume"))?;
    }
    Ok(total)
}

/// Volume of the Lee sphere, `sum_i 2^i C(n,i) C(r,i)`.
pub fn sphere_size(n: usize, r: u64) -> Result<u128> {
    let n = n as u64;
    let mut total: u128 = 0;
    for i in 0..=n.min(r) {
        let term = (1u128 << i)
            .checked_mul(binomial(n, i)?)
            .and_then(|t| t.checked_mul(binomial(r, i).ok()?))
            .ok_or(Error::Overflow("sphere volume"))?;
        total = total
            .checked_add(term)
            .ok_or(Error::Overflow("sphere volume"))?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(c: &[i64]) -> Word {
        Word::new(c.to_vec())
    }

    #[test]
    fn distance_examples() {
        assert_eq!(lee_distance(&w(&[0, 0]), &w(&[2, 3]), None).unwrap(), 5);
        assert_eq!(
            lee_distance(&w(&[7, -1, 4]), &w(&[7, -1, 4]), None).unwrap(),
            0
        );
        assert_eq!(lee_distance(&w(&[0]), &w(&[4]), Some(5)).unwrap(), 1);
    }

    #[test]
    fn distance_rejects_length_mismatch() {
        let err = lee_distance(&w(&[0, 0]), &w(&[1]), None).unwrap_err();
        assert!(matches!(err, Error::Dimension { .. }));
    }

    #[test]
    fn sphere_examples() {
        let s = lee_sphere(2, 1);
        assert_eq!(
            s,
            vec![w(&[-1, 0]), w(&[0, -1]), w(&[0, 0]), w(&[0, 1]), w(&[1, 0])]
        );
        assert_eq!(lee_sphere(3, 1).len(), 7);
        // [-2,2]^2 filtered by weight
        let brute = (-2..=2i64)
            .flat_map(|a| (-2..=2i64).map(move |b| (a, b)))
            .filter(|(a, b)| a.abs() + b.abs() <= 2)
            .count();
        assert_eq!(brute, 13);
        assert_eq!(lee_sphere(2, 2).len(), brute);
    }

    #[test]
    fn sphere_is_sorted_and_symmetric() {
        let s = lee_sphere(3, 2);
        let mut sorted = s.clone();
        sorted.sort();
        assert_eq!(s, sorted);
        for p in &s {
            assert!(s.binary_search(&-p).is_ok());
        }
    }

    #[test]
    fn double_sphere_examples() {
        let ds = double_sphere(2, 1, 1).unwrap();
        let mut expect = vec![
            w(&[0, 0]),
            w(&[1, 0]),
            w(&[-1, 0]),
            w(&[2, 0]),
            w(&[0, 1]),
            w(&[0, -1]),
            w(&[1, 1]),
            w(&[1, -1]),
        ];
        expect.sort();
        assert_eq!(ds, expect);
        assert_eq!(double_sphere(3, 1, 1).unwrap().len(), 12);
        assert_eq!(double_sphere(1, 0, 1).unwrap(), vec![w(&[0]), w(&[1])]);
        assert!(double_sphere(2, 1, 3).is_err());
        assert!(double_sphere(2, 1, 0).is_err());
    }

    #[test]
    fn double_sphere_volume_examples() {
        assert_eq!(double_sphere_size(2, 1).unwrap(), 8);
        assert_eq!(double_sphere_size(2, 2).unwrap(), 18);
        for r in 0..6u64 {
            assert_eq!(
                double_sphere_size(2, r).unwrap(),
                2 * (r as u128 + 1).pow(2)
            );
        }
        for n in 1..10usize {
            assert_eq!(double_sphere_size(n, 1).unwrap(), 4 * n as u128);
        }
    }

    #[test]
    fn volume_matches_enumeration() {
        for n in 1..=4 {
            for r in 0..=3 {
                for axis in 1..=n {
                    let ds = double_sphere(n, r, axis).unwrap();
                    assert_eq!(ds.len() as u128, double_sphere_size(n, r).unwrap());
                }
                assert_eq!(lee_sphere(n, r).len() as u128, sphere_size(n, r).unwrap());
            }
        }
    }

    #[test]
    fn double_sphere_diameter() {
        for n in 1..=3 {
            for r in 1..=3u64 {
                let ds = double_sphere(n, r, 1).unwrap();
                let diam = ds
                    .iter()
                    .flat_map(|a| ds.iter().map(move |b| lee_distance(a, b, None).unwrap()))
                    .max()
                    .unwrap();
                assert_eq!(diam, 2 * r + 1, "n={n} r={r}");
            }
        }
    }

    #[test]
    fn word_set_format_round_trip() {
        let s = double_sphere(2, 1, 1).unwrap();
        let text = format_word_set(&s);
        assert!(text.starts_with("-1,0\n"));
        assert_eq!(parse_word_set(&text).unwrap(), s);
        assert!(parse_word_set("1,2\n3\n").is_err());
        assert!(parse_word_set("1,x").is_err());
    }

    #[test]
    fn parity_matches_weight() {
        for v in lee_sphere(3, 3) {
            assert_eq!(v.has_even_weight(), v.weight() % 2 == 0);
        }
    }

    proptest! {
        #[test]
        fn triangle_inequality(
            a in prop::collection::vec(-50i64..50, 4),
            b in prop::collection::vec(-50i64..50, 4),
            c in prop::collection::vec(-50i64..50, 4),
            q in prop::option::of(2u64..20),
        ) {
            let (a, b, c) = (Word::new(a), Word::new(b), Word::new(c));
            let ab = lee_distance(&a, &b, q).unwrap();
            let bc = lee_distance(&b, &c, q).unwrap();
            let ac = lee_distance(&a, &c, q).unwrap();
            prop_assert!(ac <= ab + bc);
            prop_assert_eq!(ab, lee_distance(&b, &a, q).unwrap());
        }

        #[test]
        fn zero_distance_iff_equal(a in prop::collection::vec(-30i64..30, 3), q in 2u64..9) {
            let a = Word::new(a);
            let b = Word::new(a.iter().map(|c| c + q as i64 * 3).collect());
            prop_assert_eq!(lee_distance(&a, &b, Some(q)).unwrap(), 0);
            prop_assert!(lee_distance(&a, &b, None).unwrap() > 0);
        }
    }
}
