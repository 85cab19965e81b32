//! The index sets `D_{2k,l}` and the compositions that parametrise them.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

/// `(i_1, j_1, ..., i_k, j_k)` stored as pairs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct IndexTuple(pub Vec<(i32, i32)>);

impl IndexTuple {
    pub fn k(&self) -> usize {
        self.0.len()
    }

    /// `sum_s (j_s - i_s)`.
    pub fn weight(&self) -> i32 {
        self.0.iter().map(|(i, j)| j - i).sum()
    }

    /// Flat `[i_1, j_1, ..., i_k, j_k]`.
    pub fn flat(&self) -> Vec<i32> {
        self.0.iter().flat_map(|&(i, j)| [i, j]).collect()
    }

    /// Membership test for `D_{2k,l}`.
    pub fn is_valid(&self, l: i32) -> bool {
        let k = self.0.len();
        if k == 0 || self.0[0].0 != 0 || self.weight() != l {
            return false;
        }
        (0..k).all(|s| {
            let (i, j) = self.0[s];
            j >= i && j > self.0[(s + 1) % k].0
        })
    }
}

/// All `v` with `k` parts summing to `l`; parts `>= 1` when `positive`.
/// Lexicographic order.
pub fn compositions(k: usize, l: u32, positive: bool) -> Vec<Vec<u32>> {
    fn rec(k: usize, l: u32, min: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == 1 {
            if l >= min {
                cur.push(l);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        let reserve = min * (k as u32 - 1);
        if l < reserve {
            return;
        }
        for v in min..=l - reserve {
            cur.push(v);
            rec(k - 1, l - v, min, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k > 0 {
        rec(k, l, u32::from(positive), &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// `i_p = sum_{s<p} (v_s - vt_s)`, `j_p = i_p + v_p`.
pub fn tuple_from_compositions(v: &[u32], vt: &[u32]) -> IndexTuple {
    let mut i = 0i32;
    let mut out = Vec::with_capacity(v.len());
    for (a, b) in v.iter().zip(vt) {
        out.push((i, i + *a as i32));
        i += *a as i32 - *b as i32;
    }
    IndexTuple(out)
}

/// `D_{2k,l}` through the composition bijection, in `(v, vt)` lexicographic order.
pub fn enum_d(k: usize, l: u32) -> Vec<IndexTuple> {
    let e = compositions(k, l, false);
    let et = compositions(k, l, true);
    let mut out = Vec::with_capacity(e.len() * et.len());
    for v in &e {
        for vt in &et {
            out.push(tuple_from_compositions(v, vt));
        }
    }
    out
}

/// `D_{2k,l}` by filtering the integer box `[-l, 2l]^{2k}` (with `i_1 = 0`).
pub fn enum_d_filter(k: usize, l: u32) -> BTreeSet<IndexTuple> {
    let l = l as i32;
    let mut out = BTreeSet::new();
    if k == 0 {
        return out;
    }
    let mut flat = vec![0i32; 2 * k];
    fn rec(pos: usize, k: usize, l: i32, used: i32, flat: &mut Vec<i32>, out: &mut BTreeSet<IndexTuple>) {
        if pos == 2 * k {
            let t = IndexTuple(flat.chunks(2).map(|c| (c[0], c[1])).collect());
            if t.is_valid(l) {
                out.insert(t);
            }
            return;
        }
        for x in -l..=2 * l {
            if pos % 2 == 1 {
                // j_s >= i_s, and the running weight may not exceed l
                let w = x - flat[pos - 1];
                if w < 0 || used + w > l {
                    continue;
                }
                flat[pos] = x;
                rec(pos + 1, k, l, used + w, flat, out);
            } else {
                if pos > 0 && flat[pos - 1] <= x {
                    continue;
                }
                flat[pos] = x;
                rec(pos + 1, k, l, used, flat, out);
            }
        }
    }
    flat[0] = 0;
    rec(1, k, l, 0, &mut flat, &mut out);
    out
}

pub fn binomial(n: u64, r: u64) -> u64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// `C(l+k-1, k-1) * C(l-1, k-1)`.
pub fn d_count(k: usize, l: u32) -> u64 {
    if k == 0 || l == 0 {
        return 0;
    }
    let (k, l) = (k as u64, l as u64);
    binomial(l + k - 1, k - 1) * binomial(l - 1, k - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(v: &[i32]) -> IndexTuple {
        IndexTuple(v.chunks(2).map(|c| (c[0], c[1])).collect())
    }

    #[test]
    fn small_sets() {
        assert_eq!(enum_d(1, 3), vec![t(&[0, 3])]);
        let d22: BTreeSet<_> = enum_d(2, 2).into_iter().collect();
        let want: BTreeSet<_> = [t(&[0, 2, 1, 1]), t(&[0, 1, 0, 1]), t(&[0, 0, -1, 1])].into_iter().collect();
        assert_eq!(d22, want);
        assert!(enum_d(2, 1).is_empty());
        assert!(enum_d_filter(2, 1).is_empty());
    }

    #[test]
    fn bijection_matches_filter_and_count() {
        for k in 1..=3 {
            for l in 1..=6 {
                let list = enum_d(k, l);
                let set: BTreeSet<_> = list.iter().cloned().collect();
                assert_eq!(set.len(), list.len(), "bijection produced duplicates at k={k} l={l}");
                assert_eq!(set, enum_d_filter(k, l), "k={k} l={l}");
                assert_eq!(list.len() as u64, d_count(k, l));
                assert!(list.iter().all(|t| t.is_valid(l as i32)));
            }
        }
    }

    #[test]
    fn composition_counts() {
        assert_eq!(compositions(3, 4, false).len(), 15);
        assert_eq!(compositions(3, 4, true).len(), 3);
        assert!(compositions(3, 2, true).is_empty());
    }
}
