//! Lattice tilings of `Z^n` from homomorphisms onto finite Abelian groups.
//!
//! A homomorphism `phi: Z^n -> G` whose restriction to a finite set `V` is a
//! bijection yields the lattice tiling `{V + l : l in ker phi}`. This module
//! evaluates such maps, extracts kernel bases, checks tilings on finite
//! windows and searches for tiling homomorphisms.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::abelian::{enumerate_abelian_groups, lcm, FiniteAbelianGroup, GroupElement};
use crate::error::{Error, Result};
use crate::lattice;
use crate::lee::Word;

/// `phi: Z^n -> G` given by the images of the unit vectors. When
/// `half_image` is present the map is defined on the lattice generated by
/// `e_1 / 2, e_2, ..., e_n` and `half_image` is the image of `e_1 / 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Homomorphism {
    group: FiniteAbelianGroup,
    images: Vec<GroupElement>,
    half_image: Option<GroupElement>,
    /// `columns[j][i]` is component `j` of the image of `e_{i+1}`.
    columns: Vec<Vec<u64>>,
}

impl Homomorphism {
    pub fn new(group: FiniteAbelianGroup, images: Vec<GroupElement>) -> Result<Self> {
        Self::build(group, images, None)
    }

    pub fn with_half_image(
        group: FiniteAbelianGroup,
        images: Vec<GroupElement>,
        half_image: GroupElement,
    ) -> Result<Self> {
        Self::build(group, images, Some(half_image))
    }

    fn build(
        group: FiniteAbelianGroup,
        images: Vec<GroupElement>,
        half_image: Option<GroupElement>,
    ) -> Result<Self> {
        if images.is_empty() {
            return Err(Error::Domain(
                "homomorphism needs at least one generator".into(),
            ));
        }
        for g in images.iter().chain(half_image.iter()) {
            group.check(g)?;
        }
        if let Some(h) = &half_image {
            let doubled = group.add(h, h);
            if doubled != images[0] {
                return Err(Error::Structure(format!(
                    "image of e_1/2 is {h}, which doubles to {doubled}, not the image {} of e_1",
                    images[0]
                )));
            }
        }
        let columns = (0..group.rank())
            .map(|j| images.iter().map(|g| g.0[j]).collect())
            .collect();
        Ok(Homomorphism {
            group,
            images,
            half_image,
            columns,
        })
    }

    /// Convenience constructor for cyclic targets `Z_t`.
    pub fn cyclic(t: u64, images: &[u64]) -> Result<Self> {
        let group = FiniteAbelianGroup::cyclic(t)?;
        let images = images.iter().map(|&g| GroupElement(vec![g % t])).collect();
        Self::new(group, images)
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn images(&self) -> &[GroupElement] {
        &self.images
    }

    pub fn half_image(&self) -> Option<&GroupElement> {
        self.half_image.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.images.len()
    }

    fn check_dim(&self, a: &[i64]) -> Result<()> {
        if a.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: a.len(),
            });
        }
        Ok(())
    }

    /// `phi(a) = sum_i a_i phi(e_i)`. Coordinates are reduced modulo each
    /// cyclic factor before the multiply-accumulate, so every intermediate
    /// value stays below `t_j^2`.
    pub fn apply(&self, a: &[i64]) -> Result<GroupElement> {
        self.check_dim(a)?;
        Ok(GroupElement(
            self.columns
                .iter()
                .zip(self.group.factors())
                .map(|(col, &t)| accumulate(a, col, t))
                .collect(),
        ))
    }

    /// Evaluates `phi` on `doubled_first / 2 * e_1 + sum_{i>=2} rest_i e_i`.
    pub fn apply_half(&self, doubled_first: i64, rest: &[i64]) -> Result<GroupElement> {
        let h = self
            .half_image
            .as_ref()
            .ok_or_else(|| Error::Structure("homomorphism has no image for e_1/2".into()))?;
        if rest.len() + 1 != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim() - 1,
                got: rest.len(),
            });
        }
        Ok(GroupElement(
            self.columns
                .iter()
                .zip(self.group.factors())
                .zip(&h.0)
                .map(|((col, &t), &hj)| {
                    let head = mulmod(doubled_first.rem_euclid(t as i64) as u64, hj, t);
                    (head + accumulate(rest, &col[1..], t)) % t
                })
                .collect(),
        ))
    }

    pub fn is_in_kernel(&self, a: &[i64]) -> Result<bool> {
        Ok(self.apply(a)?.0.iter().all(|&c| c == 0))
    }

    /// Least common multiple of the orders of the generator images.
    pub fn period(&self) -> u64 {
        self.images
            .iter()
            .map(|g| self.group.element_order(g))
            .fold(1, |acc, o| {
                lcm(acc, o).expect("orders divide the group order")
            })
    }
}

fn mulmod(a: u64, b: u64, t: u64) -> u64 {
    ((a as u128 * b as u128) % t as u128) as u64
}

fn accumulate(a: &[i64], col: &[u64], t: u64) -> u64 {
    let ti = t as i64;
    if t.is_power_of_two() {
        // two's-complement masking is reduction modulo t, sign included
        let mask = t - 1;
        return a.iter().zip(col).fold(0u64, |acc, (&x, &g)| {
            acc.wrapping_add((x as u64 & mask).wrapping_mul(g)) & mask
        });
    }
    if t <= u32::MAX as u64 {
        // products of reduced values fit in 64 bits
        return a.iter().zip(col).fold(0u64, |acc, (&x, &g)| {
            (acc + x.rem_euclid(ti) as u64 * g % t) % t
        });
    }
    a.iter().zip(col).fold(0u64, |acc, (&x, &g)| {
        if x == 0 {
            acc
        } else {
            (acc + mulmod(x.rem_euclid(ti) as u64, g, t)) % t
        }
    })
}

/// Whether `phi` restricted to `points` is a bijection onto the group.
pub fn is_bijection_on(phi: &Homomorphism, points: &[Word]) -> Result<bool> {
    Ok(first_collision(phi, points)?.is_none())
}

/// The first pair of points sharing an image, scanning in the given order.
pub fn first_collision(phi: &Homomorphism, points: &[Word]) -> Result<Option<(Word, Word)>> {
    let order = phi.group().order();
    if points.len() as u64 != order {
        return Err(Error::Size {
            set: points.len(),
            group: order,
        });
    }
    let mut seen: HashMap<GroupElement, &Word> = HashMap::with_capacity(points.len());
    for p in points {
        let g = phi.apply(p)?;
        if let Some(prev) = seen.insert(g, p) {
            return Ok(Some((prev.clone(), p.clone())));
        }
    }
    Ok(None)
}

/// A basis of `ker phi`, one vector per row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelBasis {
    pub rows: Vec<Word>,
    pub det_abs: u128,
}

impl KernelBasis {
    /// Checks every row against `phi` and computes `|det|` exactly.
    pub fn verified(phi: &Homomorphism, rows: Vec<Word>) -> Result<Self> {
        let dense: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        let det = lattice::abs_determinant(&dense)?;
        Self::checked(phi, rows, det)
    }

    /// Like [`KernelBasis::verified`] but with a determinant obtained
    /// elsewhere (e.g. from a known triangular structure).
    pub fn checked(phi: &Homomorphism, rows: Vec<Word>, det_abs: u128) -> Result<Self> {
        if rows.len() != phi.dim() {
            return Err(Error::Dimension {
                expected: phi.dim(),
                got: rows.len(),
            });
        }
        for r in &rows {
            if !phi.is_in_kernel(r)? {
                return Err(Error::NotInKernel(r.clone()));
            }
        }
        if det_abs != phi.group().order() as u128 {
            return Err(Error::Invariant(format!(
                "basis determinant {det_abs} differs from group order {}",
                phi.group().order()
            )));
        }
        Ok(KernelBasis { rows, det_abs })
    }
}

/// Lower-triangular Hermite basis of `ker phi`.
///
/// Requires `phi` to be onto (so that the kernel has index `|G|`); for maps
/// that are not onto the returned basis still spans the kernel but its
/// determinant is the size of the image.
pub fn kernel_basis(phi: &Homomorphism) -> Result<KernelBasis> {
    let images: Vec<Vec<u64>> = phi.images().iter().map(|g| g.0.clone()).collect();
    let rows = lattice::kernel_hnf(&images, phi.group().factors())?;
    let det_abs = rows.iter().enumerate().map(|(i, r)| r[i] as u128).product();
    let rows: Vec<Word> = rows.into_iter().map(Word::new).collect();
    for r in &rows {
        debug_assert!(phi.is_in_kernel(r)?);
    }
    Ok(KernelBasis { rows, det_abs })
}

/// Points of `[-radius, radius]^n` in lexicographic order.
pub(crate) fn box_points(n: usize, radius: i64) -> impl Iterator<Item = Vec<i64>> {
    let side = 2 * radius + 1;
    let total = (side as u128).pow(n as u32);
    let total = usize::try_from(total).expect("window too large to enumerate");
    (0..total).map(move |mut idx| {
        let mut p = vec![0i64; n];
        for slot in p.iter_mut().rev() {
            *slot = (idx % side as usize) as i64 - radius;
            idx /= side as usize;
        }
        p
    })
}

/// Outcome of covering a window with kernel translates of a tile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowCover {
    pub points: usize,
    pub translates: usize,
    pub gaps: Vec<Word>,
    pub overlaps: Vec<Word>,
}

impl WindowCover {
    pub fn is_exact(&self) -> bool {
        self.gaps.is_empty() && self.overlaps.is_empty()
    }
}

/// Counts how often each point of `[-r, r]^n` is covered by the translates
/// `tile + c` over the given centers.
pub fn cover_window<'a>(
    n: usize,
    radius: i64,
    tile: &[Word],
    centers: impl IntoIterator<Item = &'a Word>,
) -> WindowCover {
    let side = (2 * radius + 1) as usize;
    let total = side.pow(n as u32);
    let mut counts = vec![0u8; total];
    let mut translates = 0;
    for c in centers {
        translates += 1;
        for v in tile {
            let mut idx = 0usize;
            let mut inside = true;
            for (a, b) in c.iter().zip(v.iter()) {
                let x = a + b;
                if x < -radius || x > radius {
                    inside = false;
                    break;
                }
                idx = idx * side + (x + radius) as usize;
            }
            if inside {
                counts[idx] = counts[idx].saturating_add(1);
            }
        }
    }
    let mut gaps = Vec::new();
    let mut overlaps = Vec::new();
    for (p, &c) in box_points(n, radius).zip(&counts) {
        match c {
            0 => gaps.push(Word::new(p)),
            1 => {}
            _ => overlaps.push(Word::new(p)),
        }
    }
    WindowCover {
        points: total,
        translates,
        gaps,
        overlaps,
    }
}

/// Covers `[-r, r]^n` with translates `V + l`, `l in ker phi`, found by
/// brute-force kernel membership over the enlarged box.
pub fn window_cover(phi: &Homomorphism, tile: &[Word], radius: u64) -> Result<WindowCover> {
    let n = phi.dim();
    if let Some(p) = tile.iter().find(|p| p.dim() != n) {
        return Err(Error::Dimension {
            expected: n,
            got: p.dim(),
        });
    }
    let radius = radius as i64;
    let margin = tile.iter().map(|p| p.max_abs()).max().unwrap_or(0) as i64;
    let mut centers = Vec::new();
    for p in box_points(n, radius + margin) {
        if phi.is_in_kernel(&p)? {
            centers.push(Word::new(p));
        }
    }
    Ok(cover_window(n, radius, tile, &centers))
}

/// True iff every point of `[-r, r]^n` lies in exactly one kernel translate
/// of `tile`. Independent of [`is_bijection_on`].
pub fn verify_window_tiling(phi: &Homomorphism, tile: &[Word], radius: u64) -> Result<bool> {
    Ok(window_cover(phi, tile, radius)?.is_exact())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Maximum number of assignment nodes per candidate group.
    pub budget: u64,
    pub parallel: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: 10_000_000,
            parallel: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupAttempt {
    pub group: FiniteAbelianGroup,
    pub nodes: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found {
        hom: Homomorphism,
        /// Translation applied to the input set before searching.
        offset: Word,
        attempts: Vec<GroupAttempt>,
    },
    NotFound {
        attempts: Vec<GroupAttempt>,
    },
    BudgetExceeded {
        group: FiniteAbelianGroup,
        nodes: u64,
        attempts: Vec<GroupAttempt>,
    },
}

impl SearchOutcome {
    pub fn attempts(&self) -> &[GroupAttempt] {
        match self {
            SearchOutcome::Found { attempts, .. }
            | SearchOutcome::NotFound { attempts }
            | SearchOutcome::BudgetExceeded { attempts, .. } => attempts,
        }
    }

    pub fn groups_tried(&self) -> usize {
        self.attempts().len()
    }

    pub fn assignments_tried(&self) -> u64 {
        self.attempts().iter().map(|a| a.nodes).sum()
    }

    /// Certificate in its serialized form.
    pub fn certificate(&self) -> SearchCertificate {
        match self {
            SearchOutcome::Found { hom, .. } => SearchCertificate::Found {
                group: hom.group().factors().to_vec(),
                images: hom.images().iter().map(|g| g.0.clone()).collect(),
            },
            SearchOutcome::NotFound { .. } => SearchCertificate::NotFound {
                groups_tried: self.groups_tried() as u64,
                assignments_tried: self.assignments_tried(),
            },
            SearchOutcome::BudgetExceeded { group, nodes, .. } => {
                SearchCertificate::BudgetExceeded {
                    group: group.factors().to_vec(),
                    nodes: *nodes,
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result")]
pub enum SearchCertificate {
    Found {
        group: Vec<u64>,
        images: Vec<Vec<u64>>,
    },
    NotFound {
        groups_tried: u64,
        assignments_tried: u64,
    },
    BudgetExceeded {
        group: Vec<u64>,
        nodes: u64,
    },
}

enum GroupResult {
    Found(Vec<GroupElement>, u64),
    Exhausted(u64),
    OverBudget(u64),
}

/// Translates `points` so that the lexicographically smallest one lands on
/// the origin. Bijectivity is translation invariant, so this only fixes a
/// canonical representative.
pub fn normalize_translation(points: &[Word]) -> (Vec<Word>, Word) {
    let min = points.iter().min().expect("nonempty set").clone();
    let mut shifted: Vec<Word> = points.iter().map(|p| p - &min).collect();
    shifted.sort();
    (shifted, min)
}

/// Searches every Abelian group of order `|V|` and every assignment of
/// generator images for a homomorphism that is bijective on `V`.
///
/// Assignments are explored depth-first in lexicographic rank order, and a
/// branch is cut as soon as two points whose support lies in the assigned
/// coordinates collide. For cyclic groups of prime order the image of `e_1`
/// is restricted to `{0, 1}`, since every nonzero element is carried to `1`
/// by an automorphism. The budget caps nodes per group; the reported result
/// is the first success in canonical group order, independent of
/// `options.parallel`.
pub fn search_lattice_tiling(points: &[Word], options: SearchOptions) -> Result<SearchOutcome> {
    if points.is_empty() {
        return Err(Error::Domain("cannot tile with an empty set".into()));
    }
    let n = points[0].dim();
    if let Some(p) = points.iter().find(|p| p.dim() != n) {
        return Err(Error::Dimension {
            expected: n,
            got: p.dim(),
        });
    }
    let mut dedup = points.to_vec();
    dedup.sort();
    dedup.dedup();
    let (tile, offset) = normalize_translation(&dedup);
    let groups = enumerate_abelian_groups(tile.len() as u64);

    let run = |g: &FiniteAbelianGroup| search_group(g, &tile, n, options.budget);
    let results: Vec<GroupResult> = if options.parallel {
        groups.par_iter().map(run).collect()
    } else {
        // stop early on the first decisive group
        let mut out = Vec::new();
        for g in &groups {
            let r = run(g);
            let stop = !matches!(r, GroupResult::Exhausted(_));
            out.push(r);
            if stop {
                break;
            }
        }
        out
    };

    let mut attempts = Vec::new();
    for (g, r) in groups.into_iter().zip(results) {
        match r {
            GroupResult::Exhausted(nodes) => attempts.push(GroupAttempt { group: g, nodes }),
            GroupResult::Found(images, nodes) => {
                attempts.push(GroupAttempt {
                    group: g.clone(),
                    nodes,
                });
                let hom = Homomorphism::new(g, images)?;
                debug_assert!(is_bijection_on(&hom, &tile)?);
                return Ok(SearchOutcome::Found {
                    hom,
                    offset,
                    attempts,
                });
            }
            GroupResult::OverBudget(nodes) => {
                attempts.push(GroupAttempt {
                    group: g.clone(),
                    nodes,
                });
                return Ok(SearchOutcome::BudgetExceeded {
                    group: g,
                    nodes,
                    attempts,
                });
            }
        }
    }
    Ok(SearchOutcome::NotFound { attempts })
}

/// Backtracking over image assignments for one group. Elements are handled
/// as lexicographic ranks minus one.
fn search_group(group: &FiniteAbelianGroup, tile: &[Word], n: usize, budget: u64) -> GroupResult {
    let order = group.order() as usize;
    let elements: Vec<GroupElement> = group.elements().collect();
    let index_of = |g: &GroupElement| (group.lex_rank(g) - 1) as usize;

    // points grouped by the last coordinate in their support
    let mut by_depth: Vec<Vec<&Word>> = vec![Vec::new(); n + 1];
    for p in tile {
        let depth = p.iter().rposition(|&c| c != 0).map_or(0, |i| i + 1);
        by_depth[depth].push(p);
    }
    // all points supported on no coordinate are the origin, at most one
    let mut used = vec![false; order];
    if !by_depth[0].is_empty() {
        used[index_of(&group.identity())] = true;
    }

    let first_choices: Vec<usize> = if group.is_cyclic_of_prime_order() {
        vec![0, 1]
    } else {
        (0..order).collect()
    };

    struct State<'a> {
        group: &'a FiniteAbelianGroup,
        elements: &'a [GroupElement],
        by_depth: &'a [Vec<&'a Word>],
        first_choices: &'a [usize],
        assigned: Vec<usize>,
        used: Vec<bool>,
        nodes: u64,
        budget: u64,
    }

    enum Step {
        Done,
        Exhausted,
        Budget,
    }

    fn image_of(st: &State, p: &Word) -> usize {
        let mut acc = st.group.identity();
        for (i, &c) in p.iter().enumerate() {
            if c != 0 {
                let term = st.group.scale(c, &st.elements[st.assigned[i]]);
                acc = st.group.add(&acc, &term);
            }
        }
        (st.group.lex_rank(&acc) - 1) as usize
    }

    fn rec(st: &mut State, depth: usize) -> Step {
        let n = st.by_depth.len() - 1;
        if depth == n {
            return Step::Done;
        }
        let choices: Vec<usize> = if depth == 0 {
            st.first_choices.to_vec()
        } else {
            (0..st.elements.len()).collect()
        };
        for c in choices {
            if st.nodes >= st.budget {
                return Step::Budget;
            }
            st.nodes += 1;
            st.assigned.push(c);
            let mut marked = Vec::new();
            let mut ok = true;
            for p in &st.by_depth[depth + 1] {
                let img = image_of(st, p);
                if st.used[img] {
                    ok = false;
                    break;
                }
                st.used[img] = true;
                marked.push(img);
            }
            if ok {
                match rec(st, depth + 1) {
                    Step::Exhausted => {}
                    other => return other,
                }
            }
            for m in marked {
                st.used[m] = false;
            }
            st.assigned.pop();
        }
        Step::Exhausted
    }

    let mut st = State {
        group,
        elements: &elements,
        by_depth: &by_depth,
        first_choices: &first_choices,
        assigned: Vec::with_capacity(n),
        used,
        nodes: 0,
        budget,
    };
    match rec(&mut st, 0) {
        Step::Done => {
            let images = st.assigned.iter().map(|&i| elements[i].clone()).collect();
            GroupResult::Found(images, st.nodes)
        }
        Step::Exhausted => GroupResult::Exhausted(st.nodes),
        Step::Budget => GroupResult::OverBudget(st.nodes),
    }
}
