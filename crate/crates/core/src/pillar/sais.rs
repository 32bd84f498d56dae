//! Suffix array by induced sorting over an integer alphabet, and Kasai's LCP.

const EMPTY: u32 = u32::MAX;

/// Suffix array of `s`. The last symbol must be a unique `0` sentinel and all
/// symbols must be `< alphabet`.
pub fn suffix_array(s: &[u32], alphabet: usize) -> Vec<u32> {
    assert!(!s.is_empty());
    debug_assert_eq!(*s.last().unwrap(), 0);
    debug_assert!(s[..s.len() - 1]
        .iter()
        .all(|&c| c > 0 && (c as usize) < alphabet));
    let mut sa = vec![0u32; s.len()];
    sais(s, alphabet, &mut sa);
    sa
}

fn bucket_heads(cnt: &[u32]) -> Vec<u32> {
    let mut sum = 0;
    cnt.iter()
        .map(|&c| {
            let h = sum;
            sum += c;
            h
        })
        .collect()
}

fn bucket_tails(cnt: &[u32]) -> Vec<u32> {
    let mut sum = 0;
    cnt.iter()
        .map(|&c| {
            sum += c;
            sum
        })
        .collect()
}

#[inline]
fn is_lms(stype: &[bool], i: usize) -> bool {
    i > 0 && stype[i] && !stype[i - 1]
}

fn induce(s: &[u32], sa: &mut [u32], stype: &[bool], cnt: &[u32]) {
    let n = s.len();
    let mut heads = bucket_heads(cnt);
    for i in 0..n {
        let j = sa[i];
        if j != EMPTY && j > 0 && !stype[j as usize - 1] {
            let c = s[j as usize - 1] as usize;
            sa[heads[c] as usize] = j - 1;
            heads[c] += 1;
        }
    }
    let mut tails = bucket_tails(cnt);
    for i in (0..n).rev() {
        let j = sa[i];
        if j != EMPTY && j > 0 && stype[j as usize - 1] {
            let c = s[j as usize - 1] as usize;
            tails[c] -= 1;
            sa[tails[c] as usize] = j - 1;
        }
    }
}

fn lms_substrings_equal(s: &[u32], stype: &[bool], a: usize, b: usize) -> bool {
    let n = s.len();
    let mut d = 0;
    loop {
        if a + d == n || b + d == n {
            return false;
        }
        if s[a + d] != s[b + d] || stype[a + d] != stype[b + d] {
            return false;
        }
        if d > 0 {
            let ea = is_lms(stype, a + d);
            let eb = is_lms(stype, b + d);
            if ea || eb {
                return ea && eb;
            }
        }
        d += 1;
    }
}

fn sais(s: &[u32], alphabet: usize, sa: &mut [u32]) {
    let n = s.len();
    if n == 1 {
        sa[0] = 0;
        return;
    }
    let mut stype = vec![false; n];
    stype[n - 1] = true;
    for i in (0..n - 1).rev() {
        stype[i] = s[i] < s[i + 1] || (s[i] == s[i + 1] && stype[i + 1]);
    }
    let mut cnt = vec![0u32; alphabet];
    for &c in s {
        cnt[c as usize] += 1;
    }

    sa.fill(EMPTY);
    let mut tails = bucket_tails(&cnt);
    for (i, &sym) in s.iter().enumerate().skip(1) {
        if is_lms(&stype, i) {
            let c = sym as usize;
            tails[c] -= 1;
            sa[tails[c] as usize] = i as u32;
        }
    }
    induce(s, sa, &stype, &cnt);

    // Compact the sorted LMS positions and name their substrings.
    let mut n1 = 0;
    for i in 0..n {
        let j = sa[i];
        if is_lms(&stype, j as usize) {
            sa[n1] = j;
            n1 += 1;
        }
    }
    sa[n1..].fill(EMPTY);
    let mut names = 0u32;
    let mut prev: Option<usize> = None;
    for i in 0..n1 {
        let pos = sa[i] as usize;
        let fresh = match prev {
            None => true,
            Some(p) => !lms_substrings_equal(s, &stype, p, pos),
        };
        if fresh {
            names += 1;
            prev = Some(pos);
        }
        sa[n1 + pos / 2] = names - 1;
    }
    let mut j = n;
    for i in (n1..n).rev() {
        if sa[i] != EMPTY {
            j -= 1;
            sa[j] = sa[i];
        }
    }

    let reduced: Vec<u32> = sa[n - n1..].to_vec();
    let mut sa1 = vec![0u32; n1];
    if (names as usize) < n1 {
        sais(&reduced, names as usize, &mut sa1);
    } else {
        for (i, &c) in reduced.iter().enumerate() {
            sa1[c as usize] = i as u32;
        }
    }

    let lms_positions: Vec<u32> = (1..n)
        .filter(|&i| is_lms(&stype, i))
        .map(|i| i as u32)
        .collect();
    for v in sa1.iter_mut() {
        *v = lms_positions[*v as usize];
    }
    sa.fill(EMPTY);
    let mut tails = bucket_tails(&cnt);
    for &p in sa1.iter().rev() {
        let c = s[p as usize] as usize;
        tails[c] -= 1;
        sa[tails[c] as usize] = p;
    }
    induce(s, sa, &stype, &cnt);
}

/// Inverse permutation of `sa`.
pub fn rank_array(sa: &[u32]) -> Vec<u32> {
    let mut rank = vec![0u32; sa.len()];
    for (r, &p) in sa.iter().enumerate() {
        rank[p as usize] = r as u32;
    }
    rank
}

/// `lcp[r]` = longest common prefix of suffixes `sa[r-1]` and `sa[r]`; `lcp[0] = 0`.
pub fn lcp_array(s: &[u32], sa: &[u32], rank: &[u32]) -> Vec<u32> {
    let n = s.len();
    let mut lcp = vec![0u32; n];
    let mut h = 0usize;
    for i in 0..n {
        let r = rank[i] as usize;
        if r == 0 {
            h = 0;
            continue;
        }
        let j = sa[r - 1] as usize;
        while i + h < n && j + h < n && s[i + h] == s[j + h] {
            h += 1;
        }
        lcp[r] = h as u32;
        h = h.saturating_sub(1);
    }
    lcp
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive_sa(s: &[u32]) -> Vec<u32> {
        let mut sa: Vec<u32> = (0..s.len() as u32).collect();
        sa.sort_by(|&a, &b| s[a as usize..].cmp(&s[b as usize..]));
        sa
    }

    #[test]
    fn banana() {
        let mut s: Vec<u32> = b"banana".iter().map(|&c| c as u32).collect();
        s.push(0);
        let sa = suffix_array(&s, 256);
        assert_eq!(sa, vec![6, 5, 3, 1, 0, 4, 2]);
        let rank = rank_array(&sa);
        assert_eq!(lcp_array(&s, &sa, &rank), vec![0, 0, 1, 3, 0, 0, 2]);
    }

    proptest! {
        #[test]
        fn matches_naive_sort(v in proptest::collection::vec(1u32..4, 0..300)) {
            let mut s = v;
            s.push(0);
            prop_assert_eq!(suffix_array(&s, 4), naive_sa(&s));
        }

        #[test]
        fn lcp_matches_naive(v in proptest::collection::vec(1u32..3, 1..200)) {
            let mut s = v;
            s.push(0);
            let sa = suffix_array(&s, 3);
            let rank = rank_array(&sa);
            let lcp = lcp_array(&s, &sa, &rank);
            for r in 1..s.len() {
                let (a, b) = (sa[r - 1] as usize, sa[r] as usize);
                let naive = s[a..].iter().zip(&s[b..]).take_while(|(x, y)| x == y).count();
                prop_assert_eq!(lcp[r] as usize, naive);
            }
        }
    }
}
