//! Finite Abelian groups written as products of cyclic groups.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> Result<u64> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    (a / gcd(a, b)).checked_mul(b).ok_or(Error::Overflow("lcm"))
}

/// Prime factorization as ascending `(prime, exponent)` pairs.
pub fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= m {
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// `Z_{t_1} x ... x Z_{t_s}`. The trivial group has no factors.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct FiniteAbelianGroup {
    factors: Vec<u64>,
}

/// Residue tuple aligned with the factors of its group.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(pub Vec<u64>);

impl GroupElement {
    pub fn residues(&self) -> &[u64] {
        &self.0
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

impl TryFrom<Vec<u64>> for FiniteAbelianGroup {
    type Error = Error;

    fn try_from(factors: Vec<u64>) -> Result<Self> {
        FiniteAbelianGroup::new(factors)
    }
}

impl From<FiniteAbelianGroup> for Vec<u64> {
    fn from(g: FiniteAbelianGroup) -> Vec<u64> {
        g.factors
    }
}

impl FiniteAbelianGroup {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if let Some(t) = factors.iter().find(|&&t| t < 2) {
            return Err(Error::Domain(format!("cyclic factor {t} is below 2")));
        }
        factors
            .iter()
            .try_fold(1u64, |acc, &t| acc.checked_mul(t))
            .ok_or(Error::Overflow("group order"))?;
        Ok(FiniteAbelianGroup { factors })
    }

    pub fn cyclic(t: u64) -> Result<Self> {
        Self::new(vec![t])
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    /// Number of cyclic factors, `s`.
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    /// Least common multiple of the factors; every element order divides it.
    pub fn exponent(&self) -> u64 {
        self.factors.iter().fold(1, |acc, &t| {
            lcm(acc, t).expect("exponent divides the order")
        })
    }

    pub fn is_cyclic_of_prime_order(&self) -> bool {
        self.factors.len() == 1 && factorize(self.factors[0]).len() == 1 && {
            let (_, e) = factorize(self.factors[0])[0];
            e == 1
        }
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(vec![0; self.factors.len()])
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.0.len() == self.factors.len() && g.0.iter().zip(&self.factors).all(|(a, t)| a < t)
    }

    pub fn check(&self, g: &GroupElement) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::InvalidElement(g.0.clone()))
        }
    }

    /// Reduces arbitrary integers into a valid element.
    pub fn element(&self, residues: &[i64]) -> Result<GroupElement> {
        if residues.len() != self.factors.len() {
            return Err(Error::Dimension {
                expected: self.factors.len(),
                got: residues.len(),
            });
        }
        Ok(GroupElement(
            residues
                .iter()
                .zip(&self.factors)
                .map(|(&a, &t)| a.rem_euclid(t as i64) as u64)
                .collect(),
        ))
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.factors)
                .map(|((x, y), t)| (x + y) % t)
                .collect(),
        )
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&self.factors)
                .map(|(x, t)| (t - x) % t)
                .collect(),
        )
    }

    /// `k * a` for any integer `k`.
    pub fn scale(&self, k: i64, a: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&self.factors)
                .map(|(x, &t)| {
                    let k = k.rem_euclid(t as i64) as u128;
                    ((k * *x as u128) % t as u128) as u64
                })
                .collect(),
        )
    }

    /// `lcm_j t_j / gcd(t_j, g_j)`.
    pub fn element_order(&self, g: &GroupElement) -> u64 {
        g.0.iter()
            .zip(&self.factors)
            .map(|(&a, &t)| t / gcd(t, a))
            .fold(1, |acc, o| {
                lcm(acc, o).expect("order divides the group order")
            })
    }

    /// Rank in lexicographic order, in `[1, |G|]`, evaluated in nested
    /// Horner form: `1 + (...((a_1 t_2 + a_2) t_3 + a_3)...) t_s + a_s`.
    pub fn lex_rank(&self, a: &GroupElement) -> u64 {
        debug_assert!(self.contains(a));
        1 + a
            .0
            .iter()
            .zip(&self.factors)
            .fold(0u64, |acc, (&x, &t)| acc * t + x)
    }

    pub fn lex_unrank(&self, rank: u64) -> Result<GroupElement> {
        if rank == 0 || rank > self.order() {
            return Err(Error::Domain(format!(
                "rank {rank} outside 1..={}",
                self.order()
            )));
        }
        let mut rest = rank - 1;
        let mut out = vec![0u64; self.factors.len()];
        for (slot, &t) in out.iter_mut().zip(&self.factors).rev() {
            *slot = rest % t;
            rest /= t;
        }
        Ok(GroupElement(out))
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (1..=self.order()).map(move |r| self.lex_unrank(r).expect("rank in range"))
    }
}

/// Serializes as the factor list, e.g. `[4,3]`.
impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, t) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for FiniteAbelianGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("group descriptor {s:?} must be bracketed")))?;
        if inner.trim().is_empty() {
            return FiniteAbelianGroup::new(Vec::new());
        }
        let factors = inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|e| Error::Parse(format!("bad factor {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteAbelianGroup::new(factors)
    }
}

/// Partitions of `e` with parts in non-increasing order.
fn partitions(e: u32) -> Vec<Vec<u32>> {
    fn rec(left: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=max.min(left)).rev() {
            cur.push(part);
            rec(left - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(e, e, &mut Vec::new(), &mut out);
    out
}

/// One representative per isomorphism class of Abelian groups of order `m`.
///
/// Factors are grouped by ascending prime, each prime's prime-power factors
/// in decreasing size; the resulting list is sorted lexicographically by
/// factor sequence.
pub fn enumerate_abelian_groups(m: u64) -> Vec<FiniteAbelianGroup> {
    assert!(m >= 1, "group order must be positive");
    let mut seqs: Vec<Vec<u64>> = vec![Vec::new()];
    for (p, e) in factorize(m) {
        let mut next = Vec::new();
        for seq in &seqs {
            for part in partitions(e) {
                let mut s = seq.clone();
                s.extend(part.iter().map(|&k| p.pow(k)));
                next.push(s);
            }
        }
        seqs = next;
    }
    seqs.sort();
    seqs.into_iter()
        .map(|f| FiniteAbelianGroup::new(f).expect("prime powers are at least 2"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grp(f: &[u64]) -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(f.to_vec()).unwrap()
    }

    /// Order by repeated addition.
    fn order_by_iteration(g: &FiniteAbelianGroup, a: &GroupElement) -> u64 {
        let mut acc = a.clone();
        let mut m = 1;
        while acc != g.identity() {
            acc = g.add(&acc, a);
            m += 1;
        }
        m
    }

    /// Number of partitions of `e` by the classical recurrence on the
    /// largest part, independent of the enumerator above.
    fn partition_count(e: u32) -> u64 {
        let e = e as usize;
        let mut p = vec![0u64; e + 1];
        p[0] = 1;
        for part in 1..=e {
            for total in part..=e {
                p[total] += p[total - part];
            }
        }
        p[e]
    }

    #[test]
    fn order_examples() {
        assert_eq!(grp(&[8]).element_order(&GroupElement(vec![2])), 4);
        assert_eq!(grp(&[2, 3]).element_order(&GroupElement(vec![0, 0])), 1);
        let g = grp(&[2, 4]);
        let a = GroupElement(vec![1, 1]);
        assert_eq!(order_by_iteration(&g, &a), 4);
        assert_eq!(g.element_order(&a), 4);
    }

    #[test]
    fn order_formula_matches_iteration_and_divides_order() {
        for f in [vec![12], vec![2, 6], vec![4, 3], vec![2, 2, 2], vec![9, 3]] {
            let g = grp(&f);
            for a in g.elements() {
                let o = g.element_order(&a);
                assert_eq!(o, order_by_iteration(&g, &a));
                assert_eq!(g.order() % o, 0);
            }
        }
    }

    #[test]
    fn group_enumeration_examples() {
        let four = enumerate_abelian_groups(4);
        assert_eq!(four, vec![grp(&[2, 2]), grp(&[4])]);
        assert_eq!(enumerate_abelian_groups(8).len(), 3);
        assert_eq!(
            enumerate_abelian_groups(12),
            vec![grp(&[2, 2, 3]), grp(&[4, 3])]
        );
        assert_eq!(enumerate_abelian_groups(1), vec![grp(&[])]);
    }

    #[test]
    fn group_count_matches_partition_oracle() {
        for m in 1..=256u64 {
            let expect: u64 = factorize(m)
                .iter()
                .map(|&(_, e)| partition_count(e))
                .product();
            let groups = enumerate_abelian_groups(m);
            assert_eq!(groups.len() as u64, expect, "m={m}");
            assert!(groups.iter().all(|g| g.order() == m));
        }
    }

    #[test]
    fn rank_examples() {
        let g = grp(&[2, 3]);
        assert_eq!(g.lex_rank(&GroupElement(vec![0, 0])), 1);
        assert_eq!(g.lex_rank(&GroupElement(vec![1, 2])), 6);
        let h = grp(&[4, 3, 5]);
        assert_eq!(h.lex_rank(&GroupElement(vec![3, 2, 4])), h.order());
    }

    #[test]
    fn rank_matches_summation_form() {
        // r(a) = 1 + a_s + sum_{i<s} a_i prod_{j>i} t_j
        let g = grp(&[3, 4, 2, 5]);
        for a in g.elements() {
            let s = g.rank();
            let mut r = 1 + a.0[s - 1];
            for i in 0..s - 1 {
                r += a.0[i] * g.factors()[i + 1..].iter().product::<u64>();
            }
            assert_eq!(g.lex_rank(&a), r);
        }
    }

    #[test]
    fn rank_is_bijective() {
        for f in [
            vec![10000],
            vec![100, 100],
            vec![2, 2, 2, 2, 5, 5, 5, 5],
            vec![7, 11, 13],
        ] {
            let g = grp(&f);
            let mut seen = vec![false; g.order() as usize];
            for a in g.elements() {
                let r = g.lex_rank(&a);
                assert!(!seen[(r - 1) as usize]);
                seen[(r - 1) as usize] = true;
                assert_eq!(g.lex_unrank(r).unwrap(), a);
            }
            assert!(seen.iter().all(|&b| b));
        }
    }

    #[test]
    fn descriptor_round_trip() {
        let g: FiniteAbelianGroup = "[4,3]".parse().unwrap();
        assert_eq!(g, grp(&[4, 3]));
        assert_eq!(g.to_string(), "[4,3]");
        assert_eq!(serde_json::to_string(&g).unwrap(), "[4,3]");
        assert!("[1,3]".parse::<FiniteAbelianGroup>().is_err());
        assert!("4,3".parse::<FiniteAbelianGroup>().is_err());
    }

    #[test]
    fn prime_cyclic_detection() {
        assert!(grp(&[5]).is_cyclic_of_prime_order());
        assert!(!grp(&[4]).is_cyclic_of_prime_order());
        assert!(!grp(&[2, 2]).is_cyclic_of_prime_order());
    }
}
