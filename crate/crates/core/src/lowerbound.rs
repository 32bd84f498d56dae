//! Instances whose k-mismatch occurrences form a progression-free set, so
//! any cover by arithmetic progressions needs at least half as many
//! progressions as there are occurrences.

use std::collections::HashMap;

use serde::Serialize;

use crate::driver::match_full;
use crate::error::{Error, Result};
use crate::oracle::{ap_free_check, naive_occurrences};
use crate::wstring::{SolidString, Sym, WString, WILDCARD};

/// A set of positive integers without three-term progressions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProgressionFreeSet {
    pub elements: Vec<usize>,
    pub universe: usize,
}

// Largest number of lattice points enumerated per (dimension, digit bound).
const ENUM_CAP: usize = 1 << 16;

/// Behrend's sphere construction: vectors with digits in `[0..=b]` and a
/// fixed squared norm, read in base `2b + 1`. Adding two such numbers causes
/// no carries, and a sphere contains no three collinear points, so the
/// encodings are progression-free. Among all spheres tried, the one whose
/// `size` smallest elements end lowest is used.
pub fn progression_free_set(size: usize) -> ProgressionFreeSet {
    assert!(size >= 1);
    if size == 1 {
        return ProgressionFreeSet {
            elements: vec![1],
            universe: 1,
        };
    }
    let mut best: Option<Vec<usize>> = None;
    for dim in 2..=8u32 {
        for b in 1usize.. {
            let count = (b + 1).checked_pow(dim).unwrap_or(usize::MAX);
            if count > ENUM_CAP {
                break;
            }
            let base = 2 * b + 1;
            let mut spheres: HashMap<usize, Vec<usize>> = HashMap::new();
            for code in 0..count {
                let (mut c, mut value, mut norm, mut scale) = (code, 0, 0, 1);
                for _ in 0..dim {
                    let digit = c % (b + 1);
                    c /= b + 1;
                    value += digit * scale;
                    norm += digit * digit;
                    scale *= base;
                }
                spheres.entry(norm).or_default().push(value + 1);
            }
            let mut done = false;
            for mut sphere in spheres.into_values().filter(|s| s.len() >= size) {
                sphere.sort_unstable();
                sphere.truncate(size);
                if best
                    .as_ref()
                    .is_none_or(|cur| sphere[size - 1] < cur[size - 1])
                {
                    best = Some(sphere);
                }
                done = true;
            }
            if done {
                break;
            }
        }
    }
    let elements = best.expect("some sphere is large enough");
    let universe = *elements.last().unwrap();
    ProgressionFreeSet { elements, universe }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LowerBoundInstance {
    #[serde(skip)]
    pub p: WString,
    #[serde(skip)]
    pub t: SolidString,
    pub k: usize,
    pub d: usize,
    pub ell: usize,
    pub t_block: usize,
    /// Length of the middle part of the pattern (even, at least `max S`).
    pub n_m: usize,
    /// Number of text blocks (`max S' + 1`).
    pub n_m_prime: usize,
    pub s: ProgressionFreeSet,
    pub s_prime: ProgressionFreeSet,
    pub expected_min_occs: usize,
}

const ZERO: Sym = b'0' as Sym;
const ONE: Sym = b'1' as Sym;

/// Builds the instance for `d` wildcards and even threshold `k`.
pub fn build_instance(d: usize, k: usize) -> Result<LowerBoundInstance> {
    if k % 2 == 1 {
        return Err(Error::InvalidLowerBoundParams("k must be even"));
    }
    if d + k / 2 == 0 {
        return Err(Error::InvalidLowerBoundParams("need D + k/2 >= 1"));
    }
    let s = progression_free_set(d + k / 2);
    let s_prime = progression_free_set(k / 2 + 1);
    let n_m = s.universe + s.universe % 2;
    let n_m_prime = s_prime.universe + 1;
    let ell = (0usize..)
        .find(|&ell| {
            let m = 2 * ell + n_m;
            m.is_multiple_of(2 * n_m_prime) && m / (2 * n_m_prime) >= 10 * n_m
        })
        .unwrap();
    let m = 2 * ell + n_m;
    let t_block = m / (2 * n_m_prime);

    let mut p = vec![ZERO; m];
    for (i, &x) in s.elements.iter().enumerate() {
        p[ell + x - 1] = if i < d { WILDCARD } else { ONE };
    }
    let mut t = vec![ZERO; m / 2];
    for i in 1..=n_m_prime {
        t.extend(std::iter::repeat_n(ZERO, t_block - 1));
        t.push(if s_prime.elements.contains(&i) {
            ONE
        } else {
            ZERO
        });
    }
    t.extend(std::iter::repeat_n(ZERO, m / 2));

    Ok(LowerBoundInstance {
        p: WString::from_symbols(p),
        t: SolidString::from_symbols(t),
        k,
        d,
        ell,
        t_block,
        n_m,
        n_m_prime,
        expected_min_occs: (d + k / 2) * (k / 2 + 1),
        s,
        s_prime,
    })
}

impl LowerBoundInstance {
    /// Shape checks: lengths, divisibility, block spacing of the text 1s.
    pub fn check_shape(&self) -> std::result::Result<(), String> {
        let (m, n) = (self.p.len(), self.t.len());
        if 2 * n > 3 * m {
            return Err(format!("text length {n} exceeds 3m/2 for m = {m}"));
        }
        if m % (2 * self.n_m_prime) != 0 {
            return Err(format!("2 * {} does not divide m = {m}", self.n_m_prime));
        }
        if self.t_block < 10 * self.n_m {
            return Err(format!(
                "block length {} below 10 * {}",
                self.t_block, self.n_m
            ));
        }
        if m != 2 * self.ell + self.n_m {
            return Err("pattern length is not 2 ell + n_M".into());
        }
        let specials: Vec<usize> = (1..=m).filter(|&i| self.p.at(i) != ZERO).collect();
        if specials.len() != self.d + self.k / 2 || self.p.d_count() != self.d {
            return Err("wrong number of pattern 1s or wildcards".into());
        }
        if specials
            .iter()
            .any(|&i| i <= self.ell || i > self.ell + self.n_m)
        {
            return Err("pattern 1s or wildcards outside the middle part".into());
        }
        let ones: Vec<usize> = (1..=n).filter(|&i| self.t.at(i) == ONE).collect();
        if ones.len() != self.k / 2 + 1 {
            return Err(format!(
                "text has {} ones, expected {}",
                ones.len(),
                self.k / 2 + 1
            ));
        }
        if ones.windows(2).any(|w| w[1] - w[0] < self.t_block) {
            return Err("two text 1s closer than the block length".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LowerBoundCertificate {
    pub d: usize,
    pub k: usize,
    pub m: usize,
    pub n: usize,
    pub ell: usize,
    pub t_block: usize,
    pub n_m: usize,
    pub n_m_prime: usize,
    pub s: Vec<usize>,
    pub s_prime: Vec<usize>,
    pub expected_min_occs: usize,
    pub occurrence_count: usize,
    pub occurrences: Vec<usize>,
    pub progression_free: bool,
    /// A progression meets a progression-free set in at most two points.
    pub cover_lower_bound: usize,
    pub algorithm_agrees: bool,
}

/// Checks the instance against the brute-force oracle and the matcher.
pub fn certify_instance(inst: &LowerBoundInstance) -> Result<LowerBoundCertificate> {
    inst.check_shape().map_err(Error::CertificationFailed)?;
    let occ = naive_occurrences(&inst.p, &inst.t, inst.k).occurrences;
    if occ.len() < inst.expected_min_occs {
        return Err(Error::CertificationFailed(format!(
            "{} occurrences, expected at least {}",
            occ.len(),
            inst.expected_min_occs
        )));
    }
    if !ap_free_check(&occ) {
        return Err(Error::CertificationFailed(
            "occurrences contain a 3-term progression".into(),
        ));
    }
    if match_full(&inst.p, &inst.t, inst.k)?.materialize() != occ {
        return Err(Error::CertificationFailed(
            "matcher disagrees with the oracle".into(),
        ));
    }
    Ok(LowerBoundCertificate {
        d: inst.d,
        k: inst.k,
        m: inst.p.len(),
        n: inst.t.len(),
        ell: inst.ell,
        t_block: inst.t_block,
        n_m: inst.n_m,
        n_m_prime: inst.n_m_prime,
        s: inst.s.elements.clone(),
        s_prime: inst.s_prime.elements.clone(),
        expected_min_occs: inst.expected_min_occs,
        occurrence_count: occ.len(),
        cover_lower_bound: occ.len().div_ceil(2),
        occurrences: occ,
        progression_free: true,
        algorithm_agrees: true,
    })
}
