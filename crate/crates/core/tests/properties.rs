use std::collections::{HashMap, HashSet};

use proptest::prelude::*;

use dpl_lee::abelian::{enumerate_abelian_groups, GroupElement};
use dpl_lee::decoder::DecoderTable;
use dpl_lee::dpl::{construct_dpl4, construct_pl1, is_admissible_q, LinearLeeCode, Transversal};
use dpl_lee::lee::{double_sphere, double_sphere_size, lee_distance, lee_sphere, Word};
use dpl_lee::nonregular::{code_from_window_tiling, shifted_tiling_n3};
use dpl_lee::tiling::{is_bijection_on, kernel_basis, window_cover, Homomorphism};

fn tiles() -> Vec<Vec<Word>> {
    let pentomino = [[0, 0], [1, 0], [2, 0], [0, 1], [1, -1]]
        .iter()
        .map(|c| Word::new(c.to_vec()))
        .collect();
    vec![
        lee_sphere(2, 1),
        double_sphere(2, 1, 1).unwrap(),
        pentomino,
        lee_sphere(3, 1),
        double_sphere(3, 1, 2).unwrap(),
    ]
}

/// A tile, a group of its size and images drawn from that group.
fn tile_and_hom() -> impl Strategy<Value = (Vec<Word>, Homomorphism)> {
    (
        0..5usize,
        any::<u64>(),
        prop::collection::vec(any::<u64>(), 3),
    )
        .prop_map(|(t, pick, raw)| {
            let tile = tiles().swap_remove(t);
            let n = tile[0].dim();
            let groups = enumerate_abelian_groups(tile.len() as u64);
            let g = groups[(pick % groups.len() as u64) as usize].clone();
            let images = raw[..n]
                .iter()
                .enumerate()
                .map(|(i, &x)| {
                    GroupElement(g.factors().iter().map(|&f| (x >> (8 * i)) % f).collect())
                })
                .collect();
            (tile, Homomorphism::new(g, images).unwrap())
        })
}

fn dpl_code() -> impl Strategy<Value = LinearLeeCode> {
    let pairs: Vec<(usize, u64)> = (1..=12usize)
        .flat_map(|n| {
            (4..=4 * n as u64)
                .filter(move |&q| is_admissible_q(n as u64, q))
                .map(move |q| (n, q))
        })
        .collect();
    prop::sample::select(pairs).prop_map(|(n, q)| construct_dpl4(n, q).unwrap())
}

proptest! {
    #[test]
    fn volume_is_axis_independent(n in 1..=4usize, r in 0..=3u64, axis in 1..=4usize) {
        let axis = axis.min(n);
        prop_assert_eq!(
            double_sphere(n, r, axis).unwrap().len() as u128,
            double_sphere_size(n, r).unwrap()
        );
    }

    #[test]
    fn sphere_is_symmetric(n in 1..=4usize, r in 0..=3u64) {
        let s: HashSet<Word> = lee_sphere(n, r).into_iter().collect();
        for w in &s {
            prop_assert!(s.contains(&-w));
        }
    }

    #[test]
    fn double_sphere_is_an_anticode(n in 1..=3usize, r in 1..=3u64) {
        let v = double_sphere(n, r, 1).unwrap();
        let diam = v
            .iter()
            .flat_map(|a| v.iter().map(move |b| lee_distance(a, b, None).unwrap()))
            .max()
            .unwrap();
        prop_assert_eq!(diam, 2 * r + 1);
    }

    #[test]
    fn bijection_iff_window_tiling((tile, phi) in tile_and_hom(), r in 2..=8u64) {
        let n = tile[0].dim();
        let r = if n == 3 { r.min(5) } else { r };
        let bij = is_bijection_on(&phi, &tile).unwrap();
        let cover = window_cover(&phi, &tile, r).unwrap();
        prop_assert_eq!(bij, cover.is_exact(), "gaps {} overlaps {}", cover.gaps.len(), cover.overlaps.len());
    }

    #[test]
    fn kernel_index_is_image_size((_, phi) in tile_and_hom()) {
        // closure of the images under addition
        let g = phi.group();
        let mut image = HashSet::from([g.identity()]);
        let mut frontier = vec![g.identity()];
        while let Some(x) = frontier.pop() {
            for e in phi.images() {
                let y = g.add(&x, e);
                if image.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        let b = kernel_basis(&phi).unwrap();
        prop_assert_eq!(b.det_abs, image.len() as u128);
        for row in &b.rows {
            prop_assert!(phi.is_in_kernel(row).unwrap());
        }
    }

    #[test]
    fn codewords_have_even_weight(code in dpl_code(), seed in prop::collection::vec(-30i64..30, 12)) {
        let n = code.n();
        // project an arbitrary vector onto the kernel via the decoder
        let table = DecoderTable::build(&code).unwrap();
        let d = table.decode(&Word::new(seed[..n].to_vec())).unwrap();
        prop_assert!(code.hom().is_in_kernel(&d.tile_vector).unwrap());
        prop_assert_eq!(code.transversal(), Transversal::EvenWeight);
        prop_assert!(d.codeword.has_even_weight());
        prop_assert!(lee_distance(&d.codeword, &Word::new(seed[..n].to_vec()), None).unwrap() <= 2);
    }

    #[test]
    fn table_inverts_anticode(code in dpl_code()) {
        let table = DecoderTable::build(&code).unwrap();
        for w in code.anticode().points().unwrap() {
            let g = code.hom().apply(&w).unwrap();
            prop_assert_eq!(table.entry(code.hom().group().lex_rank(&g)), Some(&w));
        }
    }

    #[test]
    fn decoding_a_codeword_is_identity(code in dpl_code(), seed in prop::collection::vec(-30i64..30, 12)) {
        let n = code.n();
        let table = DecoderTable::build(&code).unwrap();
        let c = table.decode(&Word::new(seed[..n].to_vec())).unwrap().codeword;
        prop_assert_eq!(table.decode(&c).unwrap().codeword, c);
    }

    #[test]
    fn pl1_decodes_within_radius_one(n in 1..=6usize, seed in prop::collection::vec(-50i64..50, 6)) {
        let code = construct_pl1(n).unwrap();
        let table = DecoderTable::build(&code).unwrap();
        let a = Word::new(seed[..n].to_vec());
        let d = table.decode(&a).unwrap();
        prop_assert!(lee_distance(&a, &d.codeword, None).unwrap() <= 1);
    }
}

fn bits_of(mask: u32) -> Vec<bool> {
    (0..8).map(|i| mask >> (7 - i) & 1 == 1).collect()
}

/// Tilings are injective in the bits. Codes are not: in component m the
/// pre-shift centers have `x_2 + x_3 = 6m + 3`, and the even-weight member
/// of `{c, c + e_1}` is shift-invariant exactly when m is odd, so the code
/// sees only the bits of even-indexed components.
#[test]
fn length_eight_family() {
    let even_positions = 0b0101_0101u32; // bits for m = 2, 4, 6, 8
    let mut tilings = HashSet::new();
    let mut codes: HashMap<Vec<Word>, u32> = HashMap::new();
    for mask in 0..256u32 {
        let t = shifted_tiling_n3(&bits_of(mask), 54).unwrap();
        let code = code_from_window_tiling(&t);
        assert!(tilings.insert(t.centers), "bits {mask:08b} repeat a tiling");
        let key = mask & even_positions;
        if let Some(&prev) = codes.get(&code) {
            assert_eq!(
                prev, key,
                "bits {mask:08b} share a code with a different even part"
            );
        }
        codes.insert(code, key);
    }
    assert_eq!(codes.len(), 16);
}

#[test]
fn trailing_zero_bits_do_not_change_the_tiling() {
    let a = shifted_tiling_n3(&[true], 30).unwrap();
    let b = shifted_tiling_n3(&[true, false], 30).unwrap();
    assert_eq!(a.centers, b.centers);
}
