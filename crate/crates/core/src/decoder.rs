//! Table-driven decoding of linear perfect Lee codes.
//!
//! The inverse `f: G -> V` of the homomorphism restricted to the anticode is
//! stored in an array indexed by lexicographic rank. A received word `a`
//! lies in the tile `V + l` with `l = a - f(phi(a))`, so decoding costs one
//! evaluation of `phi` (a multiply-accumulate per coordinate and group
//! component), one rank and one table read.

use std::fmt::Write as _;
use std::hint::black_box;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dpl::{construct_dpl4, minimal_admissible_q, LinearLeeCode};
use crate::error::{Error, Result};
use crate::lee::Word;

#[derive(Clone, Debug)]
pub struct DecoderTable {
    code: LinearLeeCode,
    table: Vec<Word>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoded {
    pub codeword: Word,
    pub tile_vector: Word,
}

impl DecoderTable {
    /// Fills slot `rank(phi(w)) - 1` with `w` for every anticode point.
    pub fn build(code: &LinearLeeCode) -> Result<Self> {
        let group = code.hom().group();
        let order = usize::try_from(group.order()).map_err(|_| Error::Overflow("table size"))?;
        let mut slots: Vec<Option<Word>> = vec![None; order];
        for w in code.anticode().points()? {
            let g = code.hom().apply(&w)?;
            let slot = &mut slots[(group.lex_rank(&g) - 1) as usize];
            if let Some(prev) = slot.take() {
                return Err(Error::Collision {
                    first: prev,
                    second: w,
                });
            }
            *slot = Some(w);
        }
        let table = slots
            .into_iter()
            .enumerate()
            .map(|(i, s)| {
                s.ok_or_else(|| Error::Invariant(format!("table slot {} is empty", i + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DecoderTable {
            code: code.clone(),
            table,
        })
    }

    pub fn code(&self) -> &LinearLeeCode {
        &self.code
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// The anticode point stored at `rank` (counted from 1).
    pub fn entry(&self, rank: u64) -> Option<&Word> {
        rank.checked_sub(1).and_then(|r| self.table.get(r as usize))
    }

    pub fn decode(&self, a: &Word) -> Result<Decoded> {
        let hom = self.code.hom();
        let g = hom.apply(a)?;
        let f = &self.table[(hom.group().lex_rank(&g) - 1) as usize];
        let tile_vector = a.checked_sub(f)?;
        let codeword = self.code.codeword_of_tile(&tile_vector)?;
        Ok(Decoded {
            codeword,
            tile_vector,
        })
    }

    /// Decodes a word of `Z_q^n`; the result is reduced into `[0, q)`.
    pub fn decode_modular(&self, a: &Word, q: u64) -> Result<Word> {
        let period = self.code.period();
        if q == 0 || !q.is_multiple_of(period) {
            return Err(Error::Periodicity { period, q });
        }
        Ok(self.decode(&a.reduce(q))?.codeword.reduce(q))
    }

    /// `rank: word` lines, one per group element.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, w) in self.table.iter().enumerate() {
            writeln!(out, "{}: {w}", i + 1).expect("writing to a string");
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub mean_ns: f64,
}

/// Mean wall time of `decode` on the smallest-modulus DPL4 code of each
/// length. Tables are built up front and excluded from the timing; inputs
/// are `reps` pseudo-random words drawn from a fixed seed, decoded once as
/// a warm-up and then timed.
pub fn bench_decode(n_list: &[usize], reps: usize, seed: u64) -> Result<Vec<BenchRow>> {
    if reps == 0 {
        return Err(Error::Domain("reps must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let code = construct_dpl4(n, minimal_admissible_q(n as u64))?;
        let table = DecoderTable::build(&code)?;
        let words: Vec<Word> = (0..reps)
            .map(|_| Word::new((0..n).map(|_| rng.gen_range(-1000..=1000)).collect()))
            .collect();
        for a in &words {
            black_box(table.decode(a)?);
        }
        let start = Instant::now();
        for a in &words {
            black_box(table.decode(black_box(a))?);
        }
        let elapsed = start.elapsed().as_nanos() as f64;
        rows.push(BenchRow {
            n,
            mean_ns: elapsed / reps as f64,
        });
    }
    Ok(rows)
}

pub fn format_bench_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("n,mean_ns\n");
    for r in rows {
        writeln!(out, "{},{:.1}", r.n, r.mean_ns).expect("writing to a string");
    }
    out
}
