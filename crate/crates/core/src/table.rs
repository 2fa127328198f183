//! Two-state k-symbol RLEMs as permutations of their (state, symbol) pairs.
//!
//! Domain position `j` encodes (state `j / k`, input `j % k`) and code `c`
//! encodes (state `c / k`, output `c % k`). A table is valid iff its entries
//! form a permutation of `0..2k`.
//!
//! Serial numbers are lexicographic ranks of the entry sequence, so the
//! identity table is `k-0` and the move table of the element written
//! `4-289` has entries `0,1,4,5,2,3,7,6`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::rsm::Rsm;

/// Largest symbol count for which `(2k)!` fits in a `u64`.
pub const MAX_SYMBOLS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("symbol count {0} is outside 1..={MAX_SYMBOLS}")]
    SymbolCount(usize),
    #[error("serial {serial} is out of range for k={k} (must be < {limit})")]
    SerialRange { k: usize, serial: u64, limit: u64 },
    #[error("entries are not a permutation of 0..{0}")]
    NotPermutation(usize),
    #[error("cannot parse RLEM `{0}`")]
    Syntax(String),
    #[error("symbol counts differ: {0} vs {1}")]
    Arity(usize, usize),
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Identifies an RLEM as `k-serial`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RlemId {
    pub k: usize,
    pub serial: u64,
}

impl RlemId {
    pub fn new(k: usize, serial: u64) -> Result<Self, TableError> {
        if k == 0 || k > MAX_SYMBOLS {
            return Err(TableError::SymbolCount(k));
        }
        let limit = factorial(2 * k);
        if serial >= limit {
            return Err(TableError::SerialRange { k, serial, limit });
        }
        Ok(Self { k, serial })
    }
}

impl fmt::Display for RlemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.k, self.serial)
    }
}

impl FromStr for RlemId {
    type Err = TableError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (k, n) = s
            .split_once('-')
            .ok_or_else(|| TableError::Syntax(s.to_string()))?;
        let k = k.trim().parse().map_err(|_| TableError::Syntax(s.to_string()))?;
        let n = n.trim().parse().map_err(|_| TableError::Syntax(s.to_string()))?;
        RlemId::new(k, n)
    }
}

/// The move function of a 2-state k-symbol RLEM.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MoveTable {
    k: usize,
    entries: Vec<u8>,
}

impl MoveTable {
    pub fn new(k: usize, entries: Vec<u8>) -> Result<Self, TableError> {
        if k == 0 || k > MAX_SYMBOLS {
            return Err(TableError::SymbolCount(k));
        }
        if entries.len() != 2 * k {
            return Err(TableError::NotPermutation(2 * k));
        }
        let mut seen = vec![false; 2 * k];
        for &c in &entries {
            let c = c as usize;
            if c >= 2 * k || seen[c] {
                return Err(TableError::NotPermutation(2 * k));
            }
            seen[c] = true;
        }
        Ok(Self { k, entries })
    }

    pub fn identity(k: usize) -> Result<Self, TableError> {
        Self::new(k, (0..2 * k as u8).collect())
    }

    /// The rotary element with states H=0, V=1 and symbols n, e, s, w = 0..4.
    pub fn rotary_element() -> Self {
        Self {
            k: 4,
            entries: vec![7, 3, 5, 1, 6, 0, 4, 2],
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    /// `(next state, output)` for `(state, input)`.
    #[inline]
    pub fn step(&self, state: usize, input: usize) -> (usize, usize) {
        let c = self.entries[state * self.k + input] as usize;
        (c / self.k, c % self.k)
    }

    /// `(previous state, input)` that produced `(state, output)`.
    pub fn step_back(&self, state: usize, output: usize) -> (usize, usize) {
        let code = (state * self.k + output) as u8;
        let j = self.entries.iter().position(|&c| c == code).expect("bijection");
        (j / self.k, j % self.k)
    }

    pub fn from_id(id: RlemId) -> Self {
        let n = 2 * id.k;
        let mut remaining: Vec<u8> = (0..n as u8).collect();
        let mut rest = id.serial;
        let mut entries = Vec::with_capacity(n);
        for i in 0..n {
            let f = factorial(n - 1 - i);
            let idx = (rest / f) as usize;
            rest %= f;
            entries.push(remaining.remove(idx));
        }
        Self { k: id.k, entries }
    }

    pub fn from_serial(k: usize, serial: u64) -> Result<Self, TableError> {
        Ok(Self::from_id(RlemId::new(k, serial)?))
    }

    /// Lexicographic (Lehmer) rank of the entry sequence.
    pub fn id(&self) -> RlemId {
        let n = self.entries.len();
        let mut serial = 0u64;
        for i in 0..n {
            let smaller_after = self.entries[i + 1..]
                .iter()
                .filter(|&&c| c < self.entries[i])
                .count() as u64;
            serial += smaller_after * factorial(n - 1 - i);
        }
        RlemId { k: self.k, serial }
    }

    pub fn serial(&self) -> u64 {
        self.id().serial
    }

    /// Returns true when no transition changes the state.
    pub fn never_changes_state(&self) -> bool {
        (0..2).all(|q| (0..self.k).all(|a| self.step(q, a).0 == q))
    }

    pub fn input_name(i: usize) -> String {
        if i < 18 {
            ((b'a' + i as u8) as char).to_string()
        } else {
            format!("a{i}")
        }
    }

    pub fn output_name(i: usize) -> String {
        if i < 8 {
            ((b's' + i as u8) as char).to_string()
        } else {
            format!("o{i}")
        }
    }

    /// The table as a general sequential machine with states `q0`, `q1`.
    pub fn to_rsm(&self) -> Rsm {
        let delta = (0..2)
            .flat_map(|q| (0..self.k).map(move |a| (q, a)))
            .map(|(q, a)| self.step(q, a))
            .collect();
        Rsm::new(
            vec!["q0".into(), "q1".into()],
            (0..self.k).map(Self::input_name).collect(),
            (0..self.k).map(Self::output_name).collect(),
            delta,
        )
        .expect("a move table is a total machine")
    }

    /// Recognises `rlem k=<k> perm=<c0>,...`, `<k>-<serial>` and `RE`.
    pub fn parse_spec(s: &str) -> Result<Self, TableError> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("re") {
            return Ok(Self::rotary_element());
        }
        if let Some(rest) = s.strip_prefix("rlem") {
            let mut k = None;
            let mut perm = None;
            for tok in rest.split_whitespace() {
                if let Some(v) = tok.strip_prefix("k=") {
                    k = Some(v.parse::<usize>().map_err(|_| TableError::Syntax(s.into()))?);
                } else if let Some(v) = tok.strip_prefix("perm=") {
                    perm = Some(parse_codes(v).ok_or_else(|| TableError::Syntax(s.into()))?);
                } else {
                    return Err(TableError::Syntax(s.into()));
                }
            }
            let (k, perm) = k.zip(perm).ok_or_else(|| TableError::Syntax(s.into()))?;
            return Self::new(k, perm);
        }
        if let Some(v) = s.strip_prefix("perm=") {
            let perm = parse_codes(v).ok_or_else(|| TableError::Syntax(s.into()))?;
            if perm.len() % 2 != 0 {
                return Err(TableError::NotPermutation(perm.len()));
            }
            return Self::new(perm.len() / 2, perm);
        }
        Ok(Self::from_id(s.parse()?))
    }
}

fn parse_codes(v: &str) -> Option<Vec<u8>> {
    v.split(',').map(|c| c.trim().parse::<u8>().ok()).collect()
}

impl fmt::Display for MoveTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rlem k={} perm=", self.k)?;
        for (i, c) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for MoveTable {
    type Err = TableError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_spec(s)
    }
}
