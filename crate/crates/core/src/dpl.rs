//! Linear diameter-perfect Lee codes.
//!
//! A [`LinearLeeCode`] is a homomorphism that is bijective on an anticode,
//! the kernel lattice it defines, and a rule that picks one codeword per
//! tile. For double-spheres the rule takes the even-weight center of each
//! tile, which gives minimum distance `2r + 2`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::abelian::{factorize, FiniteAbelianGroup, GroupElement};
use crate::error::{Error, Result};
use crate::lee::{lee_distance, lee_sphere, AnticodeKind, AnticodeSpec, Word};
use crate::tiling::{box_points, first_collision, kernel_basis, Homomorphism, KernelBasis};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Transversal {
    /// Keep the center of even Lee weight from each center pair.
    EvenWeight,
    /// The tile translation vector itself is the codeword.
    Identity,
}

/// A run of consecutive coordinates whose images share one element `b` of
/// the complement subgroup `H` (coordinates are counted from 1).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageBlock {
    pub start: usize,
    pub len: usize,
    pub element: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearLeeCode {
    n: usize,
    anticode: AnticodeSpec,
    hom: Homomorphism,
    basis: KernelBasis,
    transversal: Transversal,
    q: Option<u64>,
    blocks: Vec<ImageBlock>,
}

impl LinearLeeCode {
    /// Assembles a code and checks every structural invariant: bijectivity
    /// on the anticode, kernel basis, even basis weights for the even-weight
    /// rule and periodicity when a modulus is given.
    pub fn new(
        anticode: AnticodeSpec,
        hom: Homomorphism,
        basis: KernelBasis,
        transversal: Transversal,
        q: Option<u64>,
    ) -> Result<Self> {
        let n = hom.dim();
        if anticode.n != n {
            return Err(Error::Dimension {
                expected: n,
                got: anticode.n,
            });
        }
        let points = anticode.points()?;
        if let Some((a, b)) = first_collision(&hom, &points)? {
            return Err(Error::Collision {
                first: a,
                second: b,
            });
        }
        if basis.rows.len() != n || basis.det_abs != hom.group().order() as u128 {
            return Err(Error::Invariant(
                "kernel basis does not span the kernel".into(),
            ));
        }
        for r in &basis.rows {
            if !hom.is_in_kernel(r)? {
                return Err(Error::NotInKernel(r.clone()));
            }
        }
        if transversal == Transversal::EvenWeight {
            if anticode.kind != AnticodeKind::DoubleSphere {
                return Err(Error::Domain(
                    "even-weight transversal needs a double-sphere anticode".into(),
                ));
            }
            if let Some(r) = basis.rows.iter().find(|r| !r.has_even_weight()) {
                return Err(Error::Invariant(format!("basis row {r} has odd weight")));
            }
        }
        if let Some(q) = q {
            check_period(&hom, q)?;
        }
        Ok(LinearLeeCode {
            n,
            anticode,
            hom,
            basis,
            transversal,
            q,
            blocks: Vec::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn anticode(&self) -> &AnticodeSpec {
        &self.anticode
    }

    pub fn hom(&self) -> &Homomorphism {
        &self.hom
    }

    pub fn basis(&self) -> &KernelBasis {
        &self.basis
    }

    pub fn transversal(&self) -> Transversal {
        self.transversal
    }

    pub fn modulus(&self) -> Option<u64> {
        self.q
    }

    pub fn blocks(&self) -> &[ImageBlock] {
        &self.blocks
    }

    pub fn period(&self) -> u64 {
        self.hom.period()
    }

    /// Minimum distance the code is designed for.
    pub fn distance(&self) -> u64 {
        self.anticode.code_distance()
    }

    /// The codeword chosen from the tile `V + l`.
    pub fn codeword_of_tile(&self, l: &Word) -> Result<Word> {
        if !self.hom.is_in_kernel(l)? {
            return Err(Error::NotInKernel(l.clone()));
        }
        Ok(self.transversal_point(l))
    }

    /// Transversal rule without the kernel membership test.
    pub(crate) fn transversal_point(&self, l: &Word) -> Word {
        match self.transversal {
            Transversal::Identity => l.clone(),
            Transversal::EvenWeight if l.has_even_weight() => l.clone(),
            Transversal::EvenWeight => l + &Word::unit(self.n, self.anticode.axis),
        }
    }

    /// Codewords lying in `[-r, r]^n`, sorted.
    pub fn codewords_in_window(&self, radius: u64) -> Result<Vec<Word>> {
        let r = radius as i64;
        let reach = 1 + self.anticode.r as i64;
        let mut out = Vec::new();
        for p in box_points(self.n, r + reach) {
            if self.hom.is_in_kernel(&p)? {
                let c = self.transversal_point(&Word::new(p));
                if c.max_abs() <= radius {
                    out.push(c);
                }
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Codewords of the restricted code in `Z_q^n`, reduced into `[0, q)`.
    pub fn codewords_mod_q(&self) -> Result<Vec<Word>> {
        let q = self
            .q
            .ok_or_else(|| Error::Domain("code has no modulus; restrict it first".into()))?;
        let mut out = Vec::new();
        let side = q as i64;
        let total = (q as u128).pow(self.n as u32);
        if total > 50_000_000 {
            return Err(Error::Domain(format!(
                "Z_{q}^{} is too large to enumerate",
                self.n
            )));
        }
        let mut p = vec![0i64; self.n];
        loop {
            if self.hom.is_in_kernel(&p)? {
                out.push(self.transversal_point(&Word::new(p.clone())).reduce(q));
            }
            let mut i = 0;
            while i < self.n {
                p[i] += 1;
                if p[i] < side {
                    break;
                }
                p[i] = 0;
                i += 1;
            }
            if i == self.n {
                break;
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    pub fn descriptor(&self) -> CodeDescriptor {
        CodeDescriptor {
            n: self.n,
            anticode: self.anticode,
            group: self.hom.group().factors().to_vec(),
            images: self.hom.images().iter().map(|g| g.0.clone()).collect(),
            transversal: self.transversal,
            q: self.q,
            basis: self.basis.rows.iter().map(|r| r.to_vec()).collect(),
            blocks: self.blocks.clone(),
        }
    }

    pub fn from_descriptor(d: &CodeDescriptor) -> Result<Self> {
        let group = FiniteAbelianGroup::new(d.group.clone())?;
        let images = d.images.iter().map(|g| GroupElement(g.clone())).collect();
        let hom = Homomorphism::new(group, images)?;
        if hom.dim() != d.n {
            return Err(Error::Dimension {
                expected: d.n,
                got: hom.dim(),
            });
        }
        let mut anticode = d.anticode;
        anticode.n = d.n;
        let rows = d.basis.iter().cloned().map(Word::new).collect();
        let basis = KernelBasis::verified(&hom, rows)?;
        let mut code = LinearLeeCode::new(anticode, hom, basis, d.transversal, d.q)?;
        code.blocks = d.blocks.clone();
        Ok(code)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.descriptor()).expect("descriptor serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let d: CodeDescriptor =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_descriptor(&d)
    }
}

/// Canonical JSON form of a code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeDescriptor {
    pub n: usize,
    pub anticode: AnticodeSpec,
    pub group: Vec<u64>,
    pub images: Vec<Vec<u64>>,
    pub transversal: Transversal,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    pub basis: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub blocks: Vec<ImageBlock>,
}

fn check_period(hom: &Homomorphism, q: u64) -> Result<()> {
    let period = hom.period();
    if q == 0 || !q.is_multiple_of(period) {
        return Err(Error::Periodicity { period, q });
    }
    Ok(())
}

/// `n = 2^alpha * p_1^alpha_1 * ... * p_k^alpha_k` with odd `p_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationProfile {
    pub n: u64,
    pub alpha: u32,
    pub odd: Vec<(u64, u32)>,
}

impl FactorizationProfile {
    pub fn of(n: u64) -> Self {
        assert!(n >= 1);
        let mut alpha = 0;
        let mut odd = Vec::new();
        for (p, e) in factorize(n) {
            if p == 2 {
                alpha = e;
            } else {
                odd.push((p, e));
            }
        }
        FactorizationProfile { n, alpha, odd }
    }

    /// Product of the distinct odd primes.
    pub fn odd_radical(&self) -> u64 {
        self.odd.iter().map(|&(p, _)| p).product()
    }

    pub fn reconstruct(&self) -> u64 {
        self.odd
            .iter()
            .fold(1u64 << self.alpha, |acc, &(p, e)| acc * p.pow(e))
    }
}

/// Whether a linear non-periodic DPL(n, 4, q) code exists:
/// `q = 2^beta * prod p_i^beta_i` with `2 <= beta <= alpha + 2` and
/// `1 <= beta_i <= alpha_i`, and no other prime dividing `q`.
pub fn is_admissible_q(n: u64, q: u64) -> bool {
    if n == 0 || q < 2 {
        return false;
    }
    let prof = FactorizationProfile::of(n);
    let qf = FactorizationProfile::of(q);
    if qf.alpha < 2 || qf.alpha > prof.alpha + 2 {
        return false;
    }
    if qf.odd.len() != prof.odd.len() {
        return false;
    }
    qf.odd
        .iter()
        .zip(&prof.odd)
        .all(|(&(pq, bq), &(pn, an))| pq == pn && bq >= 1 && bq <= an)
}

/// Smallest admissible modulus, `4 * p` with `p` the odd radical of `n`.
pub fn minimal_admissible_q(n: u64) -> u64 {
    4 * FactorizationProfile::of(n).odd_radical()
}

/// Squarefree factors of the complement subgroup `H` of order `m`: factor
/// `j` is the product of the primes whose exponent in `m` is at least `j`.
fn complement_factors(m: u64) -> Vec<u64> {
    let f = factorize(m);
    let top = f.iter().map(|&(_, e)| e).max().unwrap_or(0);
    (1..=top)
        .map(|j| {
            f.iter()
                .filter(|&&(_, e)| e >= j)
                .map(|&(p, _)| p)
                .product()
        })
        .collect()
}

/// Linear DPL(n, 4) code over the double-sphere `{±e_i, ±e_i + e_1}` whose
/// tiling has period exactly `q`.
///
/// The group is `Z_q x H` with `|H| = 4n / q`. Coordinates are assigned in
/// blocks: `q/4` coordinates with images `(2i-1, 0)`, then `q/4` for every
/// element of order two in `H`, then `q/2` for every pair `{b, -b}` of
/// higher order, keyed by the lexicographically smaller member.
pub fn construct_dpl4(n: usize, q: u64) -> Result<LinearLeeCode> {
    if !is_admissible_q(n as u64, q) {
        return Err(Error::Domain(format!(
            "q = {q} is not admissible for n = {n}"
        )));
    }
    let h_factors = complement_factors(4 * n as u64 / q);
    let h = FiniteAbelianGroup::new(h_factors.clone())?;
    let mut factors = vec![q];
    factors.extend(&h_factors);
    let group = FiniteAbelianGroup::new(factors)?;

    let quarter = (q / 4) as usize;
    let mut blocks = vec![ImageBlock {
        start: 1,
        len: quarter,
        element: h.identity().0,
    }];
    let mut next = 1 + quarter;
    let nonzero: Vec<GroupElement> = h.elements().skip(1).collect();
    for b in nonzero.iter().filter(|b| h.element_order(b) == 2) {
        blocks.push(ImageBlock {
            start: next,
            len: quarter,
            element: b.0.clone(),
        });
        next += quarter;
    }
    for b in nonzero.iter().filter(|b| h.element_order(b) > 2) {
        if *b < h.neg(b) {
            blocks.push(ImageBlock {
                start: next,
                len: 2 * quarter,
                element: b.0.clone(),
            });
            next += 2 * quarter;
        }
    }
    if next - 1 != n {
        return Err(Error::Invariant(format!(
            "image blocks cover {} coordinates instead of {n}",
            next - 1
        )));
    }

    let mut images = Vec::with_capacity(n);
    for blk in &blocks {
        for i in 1..=blk.len as u64 {
            let mut g = vec![(2 * i - 1) % q];
            g.extend(&blk.element);
            images.push(GroupElement(g));
        }
    }
    let hom = Homomorphism::new(group, images)?;

    // coordinate (0-based) whose image is (1, unit vector j of H)
    let unit_coords: Vec<usize> = (0..h.rank())
        .map(|j| {
            let mut unit = vec![0u64; h.rank()];
            unit[j] = 1;
            blocks
                .iter()
                .find(|b| b.element == unit)
                .map(|b| b.start - 1)
                .ok_or_else(|| Error::Invariant(format!("no block for unit element {j}")))
        })
        .collect::<Result<_>>()?;

    let mut rows: Vec<Vec<i64>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut v = vec![0i64; n];
        if i == 0 {
            v[0] = q as i64;
        } else if i < quarter {
            v[0] = 2 * i as i64 + 1;
            v[i] = -1;
        } else if let Some(j) = unit_coords.iter().position(|&m| m == i) {
            let t = h_factors[j] as i64;
            v[0] = t;
            v[i] = -t;
        } else {
            let img = &hom.images()[i].0;
            let b1 = img[0] as i64;
            let tail: i64 = img[1..].iter().map(|&b| b as i64).sum();
            v[0] = b1 - tail;
            for (j, &m) in unit_coords.iter().enumerate() {
                v[m] += img[1 + j] as i64;
            }
            v[i] -= 1;
        }
        rows.push(v);
    }
    let rows: Vec<Word> = rows.into_iter().map(Word::new).collect();
    let basis = KernelBasis::verified(&hom, rows)?;
    let anticode = AnticodeSpec::double_sphere(n, 1);
    let mut code = LinearLeeCode::new(anticode, hom, basis, Transversal::EvenWeight, None)?;
    if code.period() != q {
        return Err(Error::Invariant(format!(
            "tiling has period {} instead of {q}",
            code.period()
        )));
    }
    code.blocks = blocks;
    Ok(code)
}

/// Perfect code of radius one: `Z_{2n+1}` with `phi(e_i) = i`.
pub fn construct_pl1(n: usize) -> Result<LinearLeeCode> {
    if n == 0 {
        return Err(Error::Domain("dimension must be positive".into()));
    }
    let t = 2 * n as u64 + 1;
    let images: Vec<u64> = (1..=n as u64).collect();
    let hom = Homomorphism::cyclic(t, &images)?;
    let basis = kernel_basis(&hom)?;
    LinearLeeCode::new(
        AnticodeSpec::sphere(n, 1),
        hom,
        basis,
        Transversal::Identity,
        None,
    )
}

/// The same code read in `Z_q^n`. Requires the period to divide `q`.
pub fn restrict_to_zq(code: &LinearLeeCode, q: u64) -> Result<LinearLeeCode> {
    check_period(code.hom(), q)?;
    let mut out = code.clone();
    out.q = Some(q);
    Ok(out)
}

/// Periodic extension of a set of residues to `[-r, r]^n`.
pub fn extend_periodically(residues: &[Word], q: u64, n: usize, radius: u64) -> Vec<Word> {
    let set: HashSet<&Word> = residues.iter().collect();
    let mut out: Vec<Word> = box_points(n, radius as i64)
        .map(Word::new)
        .filter(|p| set.contains(&p.reduce(q)))
        .collect();
    out.sort();
    out
}

/// Minimum Lee distance among a set of distinct words, found by growing a
/// search radius around every word. `q` selects the modular metric.
pub fn min_distance_of(words: &[Word], q: Option<u64>) -> Result<u64> {
    if words.len() < 2 {
        return Err(Error::Domain(
            "minimum distance needs at least two codewords".into(),
        ));
    }
    let n = words[0].dim();
    let set: HashSet<&Word> = words.iter().collect();
    let diameter = words
        .iter()
        .map(|w| lee_distance(w, &words[0], q))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max()
        .unwrap_or(0)
        * 2;
    for d in 1..=diameter.max(1) {
        let shell: Vec<Word> = lee_sphere(n, d)
            .into_iter()
            .filter(|s| s.weight() == d)
            .collect();
        for w in words {
            for s in &shell {
                let mut cand = w + s;
                if let Some(q) = q {
                    cand = cand.reduce(q);
                    if &cand == w {
                        continue;
                    }
                }
                if set.contains(&cand) && lee_distance(w, &cand, q)? == d {
                    return Ok(d);
                }
            }
        }
    }
    Err(Error::Invariant("no pair of codewords found".into()))
}

/// Minimum pairwise Lee distance among the codewords in `[-r, r]^n`.
pub fn min_distance_window(code: &LinearLeeCode, radius: u64) -> Result<u64> {
    if radius == 0 {
        return Err(Error::Window("radius must be at least 1".into()));
    }
    min_distance_of(&code.codewords_in_window(radius)?, None)
}
