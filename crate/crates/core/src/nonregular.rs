//! Double-cross tilings on the half-integer lattice and the non-lattice
//! codes obtained by shifting their components.
//!
//! Points of the lattice generated by `e_1 / 2, e_2, ..., e_n` are stored as
//! [`HalfWord`]s with the first coordinate doubled, so all arithmetic stays
//! integral.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::abelian::{FiniteAbelianGroup, GroupElement};
use crate::error::{Error, Result};
use crate::lattice::determinant;
use crate::lee::{double_sphere, Word};
use crate::tiling::{cover_window, Homomorphism, WindowCover};

/// `(doubled_first / 2, rest...)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HalfWord {
    pub doubled_first: i64,
    pub rest: Vec<i64>,
}

impl HalfWord {
    pub fn new(doubled_first: i64, rest: Vec<i64>) -> Self {
        HalfWord {
            doubled_first,
            rest,
        }
    }

    pub fn from_word(w: &Word) -> Self {
        HalfWord {
            doubled_first: 2 * w[0],
            rest: w[1..].to_vec(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rest.len() + 1
    }

    pub fn is_integral(&self) -> bool {
        self.doubled_first % 2 == 0
    }

    /// The integer word, if the first coordinate is integral.
    pub fn to_word(&self) -> Option<Word> {
        self.is_integral().then(|| {
            let mut c = vec![self.doubled_first / 2];
            c.extend(&self.rest);
            Word::new(c)
        })
    }

    /// Coordinates with the first one doubled.
    pub fn doubled_coords(&self) -> Vec<i64> {
        let mut c = vec![self.doubled_first];
        c.extend(&self.rest);
        c
    }
}

impl fmt::Display for HalfWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integral() {
            write!(f, "{}", self.doubled_first / 2)?;
        } else {
            write!(f, "{}/2", self.doubled_first)?;
        }
        for c in &self.rest {
            write!(f, ",{c}")?;
        }
        Ok(())
    }
}

/// `n = 2^t (2k + 1)` with `k > 0`.
fn split_odd(n: usize) -> Result<(u32, u64)> {
    if n < 2 {
        return Err(Error::Domain(format!("dimension {n} is below 2")));
    }
    let t = n.trailing_zeros();
    let odd = (n >> t) as u64;
    if odd == 1 {
        return Err(Error::Domain(format!(
            "dimension {n} is a power of two; no double-cross homomorphism of this form"
        )));
    }
    Ok((t, (odd - 1) / 2))
}

/// Homomorphism onto `Z_{8n}` from the half-integer lattice with
/// `phi(e_1/2) = 2k + 1`; bijective on the double-cross pair
/// `V ∪ (V + e_1/2)`.
pub fn construct_double_cross_hom(n: usize) -> Result<Homomorphism> {
    let (t, k) = split_odd(n)?;
    let order = 8 * n as u64;
    let h = 2 * k + 1;
    let mut images = vec![0u64; n];
    images[0] = (2 * h) % order;
    let low = 1usize << t;
    for i in 2..=low {
        images[i - 1] = ((4 * i as u64 - 2) * h) % order;
    }
    for j in 1..=k {
        let c = low + (j as usize - 1) * (low << 1);
        for i in 1..=(low << 1) {
            images[i + c - 1] = (j + 4 * (i as u64 - 1) * h) % order;
        }
    }
    let group = FiniteAbelianGroup::cyclic(order)?;
    Homomorphism::with_half_image(
        group,
        images.into_iter().map(|g| GroupElement(vec![g])).collect(),
        GroupElement(vec![h]),
    )
}

/// `V ∪ (V + e_1/2)` for the double-sphere `V = {±e_i, ±e_i + e_1}`.
pub fn double_cross_pair(n: usize) -> Result<Vec<HalfWord>> {
    let v = double_sphere(n, 1, 1)?;
    let mut out: Vec<HalfWord> = v.iter().map(HalfWord::from_word).collect();
    out.extend(v.iter().map(|w| {
        let mut h = HalfWord::from_word(w);
        h.doubled_first += 1;
        h
    }));
    out.sort();
    Ok(out)
}

/// Checks that `phi` is bijective on `V ∪ (V + e_1/2)` and that some
/// `phi(e_i)`, `i >= 2`, generates the target group of order `8n`.
pub fn verify_nonregular(phi: &Homomorphism) -> Result<bool> {
    if phi.half_image().is_none() {
        return Err(Error::Structure(
            "homomorphism has no image for e_1/2".into(),
        ));
    }
    let n = phi.dim();
    let order = phi.group().order();
    if order != 8 * n as u64 {
        return Err(Error::Domain(format!(
            "target group has order {order}, expected {}",
            8 * n
        )));
    }
    let mut seen = HashSet::with_capacity(order as usize);
    for p in double_cross_pair(n)? {
        if !seen.insert(phi.apply_half(p.doubled_first, &p.rest)?) {
            return Ok(false);
        }
    }
    let generator = phi.images()[1..]
        .iter()
        .any(|g| phi.group().element_order(g) == order);
    Ok(generator)
}

/// Kernel basis of the double-cross homomorphism inside the half-integer
/// lattice: `v_1 = -e_1/2 + (2k+1) e_j`, `v_j = 8n e_j` and
/// `v_i = phi(e_i) e_j - e_i` otherwise, where `j = 2^t + 1` and
/// `phi(e_j) = 1`.
pub fn half_kernel_basis(n: usize) -> Result<Vec<HalfWord>> {
    let (t, k) = split_odd(n)?;
    let phi = construct_double_cross_hom(n)?;
    let j = (1usize << t) + 1;
    debug_assert_eq!(phi.images()[j - 1].0, vec![1]);
    let mut rows = Vec::with_capacity(n);
    for i in 1..=n {
        let mut rest = vec![0i64; n - 1];
        let doubled_first = if i == 1 {
            rest[j - 2] = 2 * k as i64 + 1;
            -1
        } else if i == j {
            rest[j - 2] = 8 * n as i64;
            0
        } else {
            rest[j - 2] = phi.images()[i - 1].0[0] as i64;
            rest[i - 2] = -1;
            0
        };
        let row = HalfWord::new(doubled_first, rest);
        debug_assert!(phi
            .apply_half(row.doubled_first, &row.rest)?
            .0
            .iter()
            .all(|&c| c == 0));
        rows.push(row);
    }
    Ok(rows)
}

/// Volume of the cell spanned by half-lattice vectors, in units of `Z^n`:
/// the determinant in doubled coordinates, halved.
pub fn half_lattice_volume(rows: &[HalfWord]) -> Result<u128> {
    let dense: Vec<Vec<i64>> = rows.iter().map(HalfWord::doubled_coords).collect();
    let det = determinant(&dense)?.unsigned_abs();
    if det % 2 != 0 {
        return Err(Error::Invariant("doubled determinant is odd".into()));
    }
    Ok(det / 2)
}

/// Which prism of the three-dimensional double-cross tiling a column of
/// cubes belongs to: the integral part `K1`, or component `m` of the
/// half-integral part `K2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Component {
    K1,
    K2(i64),
}

/// Classifies the column through `(x_2, x_3)`. `K1` covers the diagonal
/// stripes `x_2 + x_3 = 0, ±1 (mod 6)`; each stripe `6m+2 ..= 6m+4` is a
/// separate component of `K2`.
pub fn component_of_column(x2: i64, x3: i64) -> Component {
    let s = x2 + x3;
    match s.rem_euclid(6) {
        0 | 1 | 5 => Component::K1,
        _ => Component::K2((s - 2).div_euclid(6)),
    }
}

/// [`component_of_column`] for a three-dimensional center; `x_1` plays no
/// role since components are prisms along the first axis.
pub fn component_index_n3(center: &Word) -> Result<Component> {
    if center.dim() != 3 {
        return Err(Error::Dimension {
            expected: 3,
            got: center.dim(),
        });
    }
    Ok(component_of_column(center[1], center[2]))
}

/// Centers of the n = 3 double-cross lattice tiling whose cubes can meet
/// `[-r, r]^3`, as half-lattice points. For each column `(x_2, x_3)` the
/// admissible doubled first coordinates form residue classes modulo 24,
/// read off a table of `phi(d e_1 / 2)`.
pub fn lattice_tile_centers_n3(radius: u64) -> Result<Vec<HalfWord>> {
    Ok(lattice_centers_raw(radius)?
        .into_iter()
        .map(|(d, x2, x3)| HalfWord::new(d, vec![x2, x3]))
        .collect())
}

/// `(doubled x_1, x_2, x_3)`, sorted.
fn lattice_centers_raw(radius: u64) -> Result<Vec<(i64, i64, i64)>> {
    let phi = construct_double_cross_hom(3)?;
    let order = phi.group().order() as i64;
    let mut by_image: Vec<Vec<i64>> = vec![Vec::new(); order as usize];
    for d in 0..order {
        by_image[phi.apply_half(d, &[0, 0])?.0[0] as usize].push(d);
    }
    let reach = radius as i64 + 2;
    let (lo, hi) = (-2 * (reach + 1), 2 * (reach + 1));
    let mut out = Vec::new();
    for x2 in -reach..=reach {
        for x3 in -reach..=reach {
            let g = phi.apply_half(0, &[x2, x3])?.0[0] as i64;
            for &d0 in &by_image[((order - g) % order) as usize] {
                let mut d = lo + (d0 - lo).rem_euclid(order);
                while d <= hi {
                    out.push((d, x2, x3));
                    d += order;
                }
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// A finite window of a Z-tiling of `R^3` by 3-double-crosses, obtained by
/// shifting every `K2` component by `±e_1/2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftedWindowTiling {
    pub radius: u64,
    pub bits: Vec<bool>,
    pub centers: Vec<Word>,
}

#[derive(Serialize, Deserialize)]
struct TilingRecord {
    #[serde(rename = "R")]
    radius: u64,
    bits: String,
    centers: Vec<Vec<i64>>,
}

pub fn parse_bits(text: &str) -> Result<Vec<bool>> {
    text.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::Parse(format!("bit string contains {other:?}"))),
        })
        .collect()
}

pub fn format_bits(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

impl ShiftedWindowTiling {
    /// The double-sphere tile shared by all centers.
    pub fn tile() -> Vec<Word> {
        double_sphere(3, 1, 1).expect("valid dimension")
    }

    pub fn cover(&self) -> WindowCover {
        cover_window(3, self.radius as i64, &Self::tile(), &self.centers)
    }

    pub fn to_json(&self) -> String {
        let rec = TilingRecord {
            radius: self.radius,
            bits: format_bits(&self.bits),
            centers: self.centers.iter().map(|c| c.to_vec()).collect(),
        };
        serde_json::to_string(&rec).expect("tiling serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let rec: TilingRecord =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut centers: Vec<Word> = rec.centers.into_iter().map(Word::new).collect();
        if centers.iter().any(|c| c.dim() != 3) {
            return Err(Error::Parse("centers must be three-dimensional".into()));
        }
        centers.sort();
        Ok(ShiftedWindowTiling {
            radius: rec.radius,
            bits: parse_bits(&rec.bits)?,
            centers,
        })
    }
}

/// Shifts `K2` component `m` by `+e_1/2` when `1 <= m <= len` and bit `m`
/// is set, by `-e_1/2` otherwise.
pub fn shifted_tiling_n3(bits: &[bool], radius: u64) -> Result<ShiftedWindowTiling> {
    let need = 6 * bits.len() as u64 + 6;
    if radius < need {
        return Err(Error::Window(format!(
            "radius {radius} cannot hold {} components; need at least {need}",
            bits.len()
        )));
    }
    let r = radius as i64;
    let mut centers = Vec::new();
    for (d, x2, x3) in lattice_centers_raw(radius)? {
        let d = if d % 2 == 0 {
            d
        } else {
            let up = match component_of_column(x2, x3) {
                Component::K2(m) if m >= 1 && (m as usize) <= bits.len() => bits[m as usize - 1],
                Component::K2(_) => false,
                Component::K1 => {
                    return Err(Error::Invariant(format!(
                        "half-integral center ({d}/2,{x2},{x3}) lies in the integral prism"
                    )))
                }
            };
            d + if up { 1 } else { -1 }
        };
        if d % 2 != 0 {
            return Err(Error::Invariant(format!(
                "shifted center ({d}/2,{x2},{x3}) is not integral"
            )));
        }
        let c = [d / 2, x2, x3];
        // cubes sit at c + v with v_1 in [-1, 2] and |v_2|, |v_3| <= 1
        if c[0] >= -r - 2 && c[0] <= r + 1 && c[1].abs() <= r + 1 && c[2].abs() <= r + 1 {
            centers.push(c);
        }
    }
    centers.sort_unstable();
    Ok(ShiftedWindowTiling {
        radius,
        bits: bits.to_vec(),
        centers: centers.into_iter().map(|c| Word::new(c.to_vec())).collect(),
    })
}

/// Even-weight center of every tile, restricted to the window.
pub fn code_from_window_tiling(t: &ShiftedWindowTiling) -> Vec<Word> {
    let r = t.radius as i64;
    let mut out: Vec<[i64; 3]> = t
        .centers
        .iter()
        .map(|c| [c[0] + i64::from(!c.has_even_weight()), c[1], c[2]])
        .filter(|c| c.iter().all(|x| x.abs() <= r))
        .collect();
    out.sort_unstable();
    out.into_iter().map(|c| Word::new(c.to_vec())).collect()
}

/// A pair of codewords whose difference, although inside the window, is
/// not a codeword. Only words with all coordinates within `inner` are
/// considered, so differences stay within `2 * inner`.
pub fn non_lattice_witness(code: &[Word], radius: u64, inner: u64) -> Option<(Word, Word)> {
    if 2 * inner > radius {
        return None;
    }
    let set: HashSet<&Word> = code.iter().collect();
    let small: Vec<&Word> = code.iter().filter(|c| c.max_abs() <= inner).collect();
    for u in &small {
        for v in &small {
            let diff = *u - *v;
            if !set.contains(&diff) {
                return Some(((*u).clone(), (*v).clone()));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dpl::min_distance_of;

    fn w(c: &[i64]) -> Word {
        Word::new(c.to_vec())
    }

    #[test]
    fn double_cross_examples() {
        let phi = construct_double_cross_hom(3).unwrap();
        assert_eq!(phi.group().factors(), &[24]);
        assert_eq!(phi.half_image(), Some(&GroupElement(vec![3])));
        let imgs: Vec<u64> = phi.images().iter().map(|g| g.0[0]).collect();
        assert_eq!(imgs, vec![6, 1, 13]);

        assert!(matches!(
            construct_double_cross_hom(4),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            construct_double_cross_hom(1),
            Err(Error::Domain(_))
        ));

        let phi = construct_double_cross_hom(6).unwrap();
        assert_eq!(phi.group().factors(), &[48]);
        let imgs: Vec<u64> = phi.images()[1..].iter().map(|g| g.0[0]).collect();
        assert_eq!(imgs, vec![18, 1, 13, 25, 37]);
        assert!(verify_nonregular(&phi).unwrap());
    }

    #[test]
    fn nonregular_checks() {
        let phi = construct_double_cross_hom(3).unwrap();
        assert!(verify_nonregular(&phi).unwrap());

        let g = phi.group().clone();
        let mut imgs = phi.images().to_vec();
        imgs[1] = GroupElement(vec![2]);
        let broken = Homomorphism::with_half_image(g.clone(), imgs, GroupElement(vec![3])).unwrap();
        assert!(!verify_nonregular(&broken).unwrap());

        let plain = Homomorphism::new(g, phi.images().to_vec()).unwrap();
        assert!(matches!(
            verify_nonregular(&plain),
            Err(Error::Structure(_))
        ));
    }

    #[test]
    fn pair_has_8n_points() {
        for n in [3, 5, 6, 7] {
            let w = double_cross_pair(n).unwrap();
            assert_eq!(w.len(), 8 * n);
            let set: HashSet<_> = w.iter().collect();
            assert_eq!(set.len(), 8 * n);
        }
    }

    #[test]
    fn n3_kernel_basis() {
        let rows = half_kernel_basis(3).unwrap();
        assert_eq!(
            rows,
            vec![
                HalfWord::new(-1, vec![3, 0]),
                HalfWord::new(0, vec![24, 0]),
                HalfWord::new(0, vec![13, -1]),
            ]
        );
        let phi = construct_double_cross_hom(3).unwrap();
        for r in &rows {
            assert_eq!(phi.apply_half(r.doubled_first, &r.rest).unwrap().0, vec![0]);
        }
        assert_eq!(half_lattice_volume(&rows).unwrap(), 12);
        assert_eq!(rows[0].to_string(), "-1/2,3,0");
    }

    #[test]
    fn kernel_basis_volume_general() {
        for n in [5, 6, 7, 10, 12] {
            let rows = half_kernel_basis(n).unwrap();
            assert_eq!(half_lattice_volume(&rows).unwrap(), 4 * n as u128);
        }
    }

    #[test]
    fn component_examples() {
        assert_eq!(component_index_n3(&w(&[0, 0, 0])).unwrap(), Component::K1);
        assert_eq!(
            component_index_n3(&w(&[0, 9, 0])).unwrap(),
            Component::K2(1)
        );
        assert_eq!(component_index_n3(&w(&[0, 7, -1])).unwrap(), Component::K1);
        for m in -5..5 {
            assert_eq!(
                component_index_n3(&w(&[0, 3 * (2 * m + 1), 0])).unwrap(),
                Component::K2(m)
            );
        }
        // the first coordinate never matters
        for x1 in -10..10 {
            for x2 in -10..10 {
                assert_eq!(
                    component_index_n3(&w(&[x1, x2, 4])).unwrap(),
                    component_index_n3(&w(&[0, x2, 4])).unwrap()
                );
            }
        }
    }

    #[test]
    fn lattice_centers_match_direct_scan() {
        let phi = construct_double_cross_hom(3).unwrap();
        let mut direct = Vec::new();
        for d in -18..=18 {
            for x2 in -8..=8 {
                for x3 in -8..=8 {
                    if phi.apply_half(d, &[x2, x3]).unwrap().0 == vec![0] {
                        direct.push(HalfWord::new(d, vec![x2, x3]));
                    }
                }
            }
        }
        assert_eq!(lattice_tile_centers_n3(6).unwrap(), direct);
    }

    #[test]
    fn lattice_centers_split_by_parity() {
        for l in lattice_tile_centers_n3(6).unwrap() {
            let comp = component_of_column(l.rest[0], l.rest[1]);
            assert_eq!(l.is_integral(), comp == Component::K1, "{l}");
        }
    }

    #[test]
    fn shifted_tiling_covers_window() {
        for bits in ["", "1", "0", "10"] {
            let bits = parse_bits(bits).unwrap();
            let t = shifted_tiling_n3(&bits, 18).unwrap();
            assert!(t.cover().is_exact());
        }
        assert!(matches!(
            shifted_tiling_n3(&parse_bits("111").unwrap(), 20),
            Err(Error::Window(_))
        ));
    }

    #[test]
    fn distinct_bits_give_distinct_tilings() {
        let a = shifted_tiling_n3(&parse_bits("101").unwrap(), 24).unwrap();
        let b = shifted_tiling_n3(&parse_bits("011").unwrap(), 24).unwrap();
        assert_ne!(a.centers, b.centers);
    }

    #[test]
    fn shifted_code_is_not_a_lattice() {
        let t = shifted_tiling_n3(&[true], 18).unwrap();
        let code = code_from_window_tiling(&t);
        assert!(code.contains(&w(&[0, 0, 0])));
        assert_eq!(min_distance_of(&code, None).unwrap(), 4);
        let (u, v) = non_lattice_witness(&code, 18, 9).expect("witness");
        assert!(!code.contains(&(&u - &v)));
    }

    #[test]
    fn tiling_json_round_trip() {
        let t = shifted_tiling_n3(&parse_bits("1").unwrap(), 12).unwrap();
        let json = t.to_json();
        assert!(json.starts_with(r#"{"R":12,"bits":"1","centers":[["#));
        assert_eq!(ShiftedWindowTiling::from_json(&json).unwrap(), t);
        assert!(parse_bits("102").is_err());
    }
}
