//! A directory of construction netlists named
//! `<target-id>__from__<part-id>+<part-id>.ckt`.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use crate::circuit::{Netlist, SimulationMaps, DEFAULT_MAX_STEPS};
use crate::renaming::canonical_serial;
use crate::table::{MoveTable, RlemId};

pub fn file_name(target: RlemId, parts: &[RlemId]) -> String {
    let mut parts: Vec<RlemId> = parts.to_vec();
    parts.sort_by_key(|p| (p.k, p.serial));
    parts.dedup();
    let joined: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
    format!("{target}__from__{}.ckt", joined.join("+"))
}

/// Outcome of checking one library entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinkStatus {
    Verified(PathBuf),
    Missing(PathBuf),
    Failed(PathBuf, String),
}

impl LinkStatus {
    pub fn is_verified(&self) -> bool {
        matches!(self, LinkStatus::Verified(_))
    }
}

#[derive(Debug, Clone)]
pub struct Library {
    dir: PathBuf,
}

impl Library {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, target: RlemId, parts: &[RlemId]) -> PathBuf {
        self.dir.join(file_name(target, parts))
    }

    pub fn save(&self, target: RlemId, parts: &[RlemId], n: &Netlist) -> io::Result<PathBuf> {
        fs::create_dir_all(&self.dir)?;
        let p = self.path(target, parts);
        fs::write(&p, n.to_text())?;
        Ok(p)
    }

    /// Loads and checks the construction of `target` from `parts`, all
    /// given by canonical id. Every element must be equivalent to one of
    /// the parts and the recorded state map must pass verification.
    pub fn check(&self, target: RlemId, parts: &[RlemId]) -> LinkStatus {
        let path = self.path(target, parts);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(_) => return LinkStatus::Missing(path),
        };
        match check_text(&text, target, parts) {
            Ok(()) => LinkStatus::Verified(path),
            Err(msg) => LinkStatus::Failed(path, msg),
        }
    }
}

fn check_text(text: &str, target: RlemId, parts: &[RlemId]) -> Result<(), String> {
    let n = Netlist::parse(text).map_err(|e| e.to_string())?;
    for e in &n.elements {
        let t = e.spec.table().ok_or_else(|| format!("element {} is not an RLEM", e.name))?;
        if !parts.contains(&canonical_serial(&t)) {
            return Err(format!("element {} is not one of the parts", e.name));
        }
    }
    let c = n.compile().map_err(|v| format!("{} netlist violations", v.len()))?;
    let t = MoveTable::from_id(target).to_rsm();
    let maps = SimulationMaps::positional(&c, &t);
    c.verify_simulation(&t, &maps, DEFAULT_MAX_STEPS).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthesis::{search_circuit, SearchOptions};

    #[test]
    fn names() {
        let re = RlemId { k: 4, serial: 289 };
        let p = [RlemId { k: 3, serial: 10 }];
        assert_eq!(file_name(re, &p), "4-289__from__3-10.ckt");
        let two = [RlemId { k: 2, serial: 4 }, RlemId { k: 2, serial: 3 }];
        assert_eq!(file_name(RlemId { k: 3, serial: 10 }, &two), "3-10__from__2-3+2-4.ckt");
    }

    #[test]
    fn save_then_check() {
        let dir = tempfile::tempdir().unwrap();
        let lib = Library::new(dir.path());
        let id = RlemId { k: 2, serial: 4 };
        assert!(matches!(lib.check(id, &[id]), LinkStatus::Missing(_)));
        let t = MoveTable::from_id(id);
        let r = search_circuit(&t, std::slice::from_ref(&t), &SearchOptions { max_elems: 1, ..Default::default() });
        lib.save(id, &[id], r.netlist().unwrap()).unwrap();
        assert!(lib.check(id, &[id]).is_verified());
        // wrong part list
        let other = RlemId { k: 2, serial: 3 };
        fs::copy(lib.path(id, &[id]), lib.path(id, &[other])).unwrap();
        assert!(matches!(lib.check(id, &[other]), LinkStatus::Failed(..)));
    }
}
