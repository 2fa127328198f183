//! Equivalence of RLEMs under renaming of states and input/output symbols.

use std::collections::BTreeSet;

use crate::table::{MoveTable, RlemId, TableError};

/// A relabelling: states swap iff `state_swap`, input `a` becomes
/// `input_perm[a]` and output `s` becomes `output_perm[s]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Renaming {
    pub state_swap: bool,
    pub input_perm: Vec<u8>,
    pub output_perm: Vec<u8>,
}

impl Renaming {
    pub fn identity(k: usize) -> Self {
        Self {
            state_swap: false,
            input_perm: (0..k as u8).collect(),
            output_perm: (0..k as u8).collect(),
        }
    }

    pub fn k(&self) -> usize {
        self.input_perm.len()
    }

    pub fn apply(&self, t: &MoveTable) -> MoveTable {
        let k = t.k();
        assert_eq!(k, self.k(), "renaming arity");
        let sw = self.state_swap as usize;
        let mut out = vec![0u8; 2 * k];
        for q in 0..2 {
            for a in 0..k {
                let (q2, s) = t.step(q, a);
                let pos = (q ^ sw) * k + self.input_perm[a] as usize;
                out[pos] = ((q2 ^ sw) * k + self.output_perm[s] as usize) as u8;
            }
        }
        MoveTable::new(k, out).expect("renaming preserves bijectivity")
    }

    pub fn inverse(&self) -> Self {
        Self {
            state_swap: self.state_swap,
            input_perm: invert(&self.input_perm),
            output_perm: invert(&self.output_perm),
        }
    }

    /// `self` followed by `then`.
    pub fn then(&self, then: &Renaming) -> Self {
        Self {
            state_swap: self.state_swap ^ then.state_swap,
            input_perm: self.input_perm.iter().map(|&a| then.input_perm[a as usize]).collect(),
            output_perm: self.output_perm.iter().map(|&s| then.output_perm[s as usize]).collect(),
        }
    }

    /// Every one of the `2·(k!)²` renamings.
    pub fn all(k: usize) -> impl Iterator<Item = Renaming> {
        let perms = permutations(k);
        let perms2 = perms.clone();
        [false, true].into_iter().flat_map(move |state_swap| {
            let perms2 = perms2.clone();
            perms.clone().into_iter().flat_map(move |input_perm| {
                perms2.clone().into_iter().map(move |output_perm| Renaming {
                    state_swap,
                    input_perm: input_perm.clone(),
                    output_perm,
                })
            })
        })
    }
}

fn invert(p: &[u8]) -> Vec<u8> {
    let mut inv = vec![0u8; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x as usize] = i as u8;
    }
    inv
}

/// All permutations of `0..k` in lexicographic order.
pub fn permutations(k: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut p: Vec<u8> = (0..k as u8).collect();
    loop {
        out.push(p.clone());
        let mut i = k;
        while i > 1 && p[i - 2] >= p[i - 1] {
            i -= 1;
        }
        if i <= 1 {
            return out;
        }
        let mut j = k - 1;
        while p[j] <= p[i - 2] {
            j -= 1;
        }
        p.swap(i - 2, j);
        p[i - 1..].reverse();
    }
}

/// Completes a state swap and input permutation with the unique output
/// permutation that carries `t1` onto `t2`, if there is one.
fn forced_output_perm(t1: &MoveTable, t2: &MoveTable, swap: bool, input_perm: &[u8]) -> Option<Vec<u8>> {
    let k = t1.k();
    let sw = swap as usize;
    let mut out = vec![u8::MAX; k];
    let mut used = vec![false; k];
    for q in 0..2 {
        for a in 0..k {
            let (q1, s1) = t1.step(q, a);
            let (q2, s2) = t2.step(q ^ sw, input_perm[a] as usize);
            if q1 ^ sw != q2 {
                return None;
            }
            if out[s1] == u8::MAX {
                if used[s2] {
                    return None;
                }
                out[s1] = s2 as u8;
                used[s2] = true;
            } else if out[s1] as usize != s2 {
                return None;
            }
        }
    }
    Some(out)
}

/// A renaming carrying `t1` onto `t2`, if the two are equivalent.
pub fn find_renaming(t1: &MoveTable, t2: &MoveTable) -> Result<Option<Renaming>, TableError> {
    if t1.k() != t2.k() {
        return Err(TableError::Arity(t1.k(), t2.k()));
    }
    let k = t1.k();
    for swap in [false, true] {
        for input_perm in permutations(k) {
            if let Some(output_perm) = forced_output_perm(t1, t2, swap, &input_perm) {
                return Ok(Some(Renaming { state_swap: swap, input_perm, output_perm }));
            }
        }
    }
    Ok(None)
}

pub fn are_equivalent(t1: &MoveTable, t2: &MoveTable) -> bool {
    matches!(find_renaming(t1, t2), Ok(Some(_)))
}

/// Lexicographically least table reachable by choosing output labels
/// greedily for a fixed state swap and input permutation.
fn greedy_min(t: &MoveTable, swap: bool, input_perm: &[u8], buf: &mut [u8]) {
    let k = t.k();
    let sw = swap as usize;
    let inv_in = invert(input_perm);
    let mut label = [u8::MAX; 16];
    let mut next = 0u8;
    for pos in 0..2 * k {
        let (q, a_new) = (pos / k, pos % k);
        let (q2, s) = t.step(q ^ sw, inv_in[a_new] as usize);
        if label[s] == u8::MAX {
            label[s] = next;
            next += 1;
        }
        buf[pos] = ((q2 ^ sw) * k) as u8 + label[s];
    }
}

/// The least member of the equivalence class of `t`.
pub fn canonical_table(t: &MoveTable) -> MoveTable {
    let k = t.k();
    let mut best: Option<Vec<u8>> = None;
    let mut buf = vec![0u8; 2 * k];
    for swap in [false, true] {
        for p in permutations(k) {
            greedy_min(t, swap, &p, &mut buf);
            if best.as_ref().is_none_or(|b| buf < *b) {
                best = Some(buf.clone());
            }
        }
    }
    MoveTable::new(k, best.expect("at least one renaming")).expect("valid")
}

/// Minimum serial over the orbit of `t`.
pub fn canonical_serial(t: &MoveTable) -> RlemId {
    canonical_table(t).id()
}

/// The set of serials equivalent to `t`.
pub fn orbit(t: &MoveTable) -> BTreeSet<u64> {
    Renaming::all(t.k()).map(|r| r.apply(t).serial()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_counts() {
        assert_eq!(permutations(1).len(), 1);
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(permutations(3)[1], vec![0, 2, 1]);
    }

    #[test]
    fn re_equivalent_to_4_289() {
        let re = MoveTable::rotary_element();
        let t = MoveTable::from_serial(4, 289).unwrap();
        let r = find_renaming(&re, &t).unwrap().expect("equivalent");
        assert_eq!(r.apply(&re), t);
        assert_eq!(canonical_serial(&re).serial, 289);
    }

    #[test]
    fn self_renaming_is_identity_for_asymmetric_table() {
        let t = MoveTable::from_serial(3, 10).unwrap();
        let r = find_renaming(&t, &t).unwrap().unwrap();
        assert_eq!(r.apply(&t), t);
    }

    #[test]
    fn distinct_representatives_inequivalent() {
        let a = MoveTable::from_serial(2, 3).unwrap();
        let b = MoveTable::from_serial(2, 4).unwrap();
        assert_eq!(find_renaming(&a, &b).unwrap(), None);
    }

    #[test]
    fn arity_mismatch() {
        let a = MoveTable::from_serial(2, 3).unwrap();
        let b = MoveTable::from_serial(3, 3).unwrap();
        assert!(find_renaming(&a, &b).is_err());
    }

    #[test]
    fn greedy_canonical_matches_orbit_minimum() {
        for s in 0..720 {
            let t = MoveTable::from_serial(3, s).unwrap();
            let by_orbit = *orbit(&t).iter().next().unwrap();
            assert_eq!(canonical_serial(&t).serial, by_orbit, "serial {s}");
        }
    }

    #[test]
    fn representative_is_own_canonical() {
        let t = MoveTable::from_serial(2, 3).unwrap();
        assert_eq!(canonical_serial(&t).serial, 3);
    }

    #[test]
    fn compose_and_inverse() {
        let t = MoveTable::from_serial(3, 451).unwrap();
        let all: Vec<_> = Renaming::all(3).collect();
        assert_eq!(all.len(), 72);
        let r1 = &all[17];
        let r2 = &all[50];
        assert_eq!(r1.then(r2).apply(&t), r2.apply(&r1.apply(&t)));
        assert_eq!(r1.inverse().apply(&r1.apply(&t)), t);
    }
}
