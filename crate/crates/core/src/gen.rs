//! Seeded instance generators used by tests, benches and the CLI.

use std::ops::RangeInclusive;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::wstring::{SolidString, Sym, WString, WILDCARD};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Uniform text and pattern.
    Random,
    /// Pattern and text follow one short period, with sparse noise.
    Periodic,
    /// Pattern made of periodic blocks with different periods.
    Blocks,
    /// Uniform text with mutated copies of the pattern planted in it.
    Planted,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Random,
        Family::Periodic,
        Family::Blocks,
        Family::Planted,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenParams {
    pub n: usize,
    pub m: usize,
    /// Wildcards in the pattern.
    pub d: usize,
    /// Wildcard groups; `1 <= g <= d` unless `d == 0`.
    pub g: usize,
    pub k: usize,
    pub sigma: u32,
}

pub fn random_symbols<R: Rng>(rng: &mut R, len: usize, sigma: u32) -> Vec<Sym> {
    (0..len)
        .map(|_| b'a' as Sym + rng.gen_range(0..sigma.max(1)))
        .collect()
}

/// Overwrites `d` positions of `p` with wildcards forming exactly `g` groups.
pub fn place_wildcards<R: Rng>(rng: &mut R, p: &mut [Sym], d: usize, g: usize) {
    let m = p.len();
    if d == 0 {
        return;
    }
    let g = g.clamp(1, d).min((m + 1 - d).max(1));
    assert!(
        d + g - 1 <= m,
        "cannot fit {d} wildcards in {g} groups into {m}"
    );
    // group lengths: a composition of d into g parts
    let mut lens = vec![1usize; g];
    for _ in 0..d - g {
        lens[rng.gen_range(0..g)] += 1;
    }
    // g + 1 gaps, interior ones at least 1
    let free = m - d - (g - 1);
    let mut gaps = vec![0usize; g + 1];
    for _ in 0..free {
        gaps[rng.gen_range(0..=g)] += 1;
    }
    for gap in gaps.iter_mut().take(g).skip(1) {
        *gap += 1;
    }
    let mut pos = gaps[0];
    for (i, &l) in lens.iter().enumerate() {
        p[pos..pos + l].fill(WILDCARD);
        pos += l + gaps[i + 1];
    }
}

fn mutate<R: Rng>(rng: &mut R, s: &mut [Sym], count: usize, sigma: u32) {
    if s.is_empty() {
        return;
    }
    for i in sample(rng, s.len(), count.min(s.len())) {
        let old = s[i];
        let mut c = old;
        while c == old && sigma > 1 {
            c = b'a' as Sym + rng.gen_range(0..sigma);
        }
        s[i] = c;
    }
}

fn periodic_symbols(base: &[Sym], shift: usize, len: usize) -> Vec<Sym> {
    (0..len).map(|i| base[(i + shift) % base.len()]).collect()
}

/// A pattern/text pair from the given family.
pub fn generate(family: Family, prm: GenParams, seed: u64) -> (WString, SolidString) {
    let mut r = rng(seed);
    let GenParams {
        n,
        m,
        d,
        g,
        k,
        sigma,
    } = prm;
    let sigma = sigma.max(2);
    let (mut p, t) = match family {
        Family::Random => (
            random_symbols(&mut r, m, sigma),
            random_symbols(&mut r, n, sigma),
        ),
        Family::Periodic => {
            let q = r.gen_range(1..=4usize);
            periodic_pair(&mut r, q, prm)
        }
        Family::Blocks => {
            let mut p = Vec::with_capacity(m);
            while p.len() < m {
                let q = r.gen_range(1..=3usize);
                let base = random_symbols(&mut r, q, sigma);
                let len = r.gen_range(m / 64 + 1..=m / 8 + 2);
                p.extend(periodic_symbols(&base, 0, len));
                let noise = r.gen_range(0..=4usize);
                p.extend(random_symbols(&mut r, noise, sigma));
            }
            p.truncate(m);
            let mut t = random_symbols(&mut r, n, sigma);
            plant(&mut r, &mut t, &p, k, sigma);
            (p, t)
        }
        Family::Planted => {
            let p = random_symbols(&mut r, m, sigma);
            let mut t = random_symbols(&mut r, n, sigma);
            plant(&mut r, &mut t, &p, k, sigma);
            (p, t)
        }
    };
    place_wildcards(&mut r, &mut p, d, g);
    (WString::from_symbols(p), SolidString::from_symbols(t))
}

/// Draws parameters for a differential-testing case. Wildcards are kept
/// to at most `(m - 1) / d_div`; `n` ranges over `[m/2 .. 4m]`.
pub fn sample_params<R: Rng>(
    rng: &mut R,
    m_range: RangeInclusive<usize>,
    ks: &[usize],
    d_div: usize,
) -> GenParams {
    let m = rng.gen_range(m_range);
    let n = rng.gen_range(m / 2..=4 * m);
    let sigma = [2, 4, 26][rng.gen_range(0..3)];
    let d = rng.gen_range(0..=(m - 1) / d_div);
    let g = if d == 0 {
        0
    } else {
        rng.gen_range(1..=d.min(8))
    };
    let k = ks[rng.gen_range(0..ks.len())];
    GenParams {
        n,
        m,
        d,
        g,
        k,
        sigma,
    }
}

/// Pattern and text following one period of length `q`, with up to `k`
/// pattern and `2k + 2` text mismatches and the requested wildcards.
pub fn periodic_with_noise(q: usize, prm: GenParams, seed: u64) -> (WString, SolidString) {
    let mut r = rng(seed);
    let (mut p, t) = periodic_pair(&mut r, q, prm);
    place_wildcards(&mut r, &mut p, prm.d, prm.g);
    (WString::from_symbols(p), SolidString::from_symbols(t))
}

fn periodic_pair<R: Rng>(r: &mut R, q: usize, prm: GenParams) -> (Vec<Sym>, Vec<Sym>) {
    let sigma = prm.sigma.max(2);
    let base = random_symbols(r, q, sigma);
    let mut p = periodic_symbols(&base, r.gen_range(0..q), prm.m);
    let mut t = periodic_symbols(&base, 0, prm.n);
    let (ep, et) = (r.gen_range(0..=prm.k), r.gen_range(0..=2 * prm.k + 2));
    mutate(r, &mut p, ep, sigma);
    mutate(r, &mut t, et, sigma);
    (p, t)
}

// Copies of `p` with up to `k + 1` mutations, a handful per text.
fn plant<R: Rng>(rng: &mut R, t: &mut [Sym], p: &[Sym], k: usize, sigma: u32) {
    if p.len() > t.len() {
        return;
    }
    let copies = rng.gen_range(1..=3);
    for _ in 0..copies {
        let at = rng.gen_range(0..=t.len() - p.len());
        let mut c = p.to_vec();
        let e = rng.gen_range(0..=k + 1);
        mutate(rng, &mut c, e, sigma);
        t[at..at + p.len()].copy_from_slice(&c);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wildcard_counts_are_exact() {
        let mut r = rng(7);
        for (m, d, g) in [(10, 3, 3), (10, 5, 1), (100, 30, 7), (5, 5, 1), (9, 5, 5)] {
            let mut p = vec![b'a' as Sym; m];
            place_wildcards(&mut r, &mut p, d, g);
            let w = WString::from_symbols(p);
            assert_eq!((w.d_count(), w.g_count()), (d, g), "m={m} d={d} g={g}");
        }
    }

    #[test]
    fn same_seed_same_instance() {
        let prm = GenParams {
            n: 300,
            m: 200,
            d: 4,
            g: 2,
            k: 3,
            sigma: 4,
        };
        for f in Family::ALL {
            assert_eq!(generate(f, prm, 11), generate(f, prm, 11));
            let (p, t) = generate(f, prm, 11);
            assert_eq!(
                (p.len(), t.len(), p.d_count(), p.g_count()),
                (200, 300, 4, 2)
            );
        }
    }
}
