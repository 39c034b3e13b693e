//! Matrix-level cosimplicial identity checks shared by test targets.

use gw_tower::braid::{InducedMap, MemoryPresentations, PiKey, PresentationSource, StructureMap};
use gw_tower::linalg::IntMatrix;

use StructureMap::Coface as D;

pub fn s(j: usize) -> StructureMap {
    StructureMap::codegeneracy(j)
}

#[derive(Default)]
pub struct Maps {
    pub src: MemoryPresentations,
}

impl Maps {
    pub fn matrix(&mut self, map: StructureMap, from: PiKey) -> Result<IntMatrix, String> {
        let to = from.on(map.target_points(from.n));
        let a = self.src.presentation(from);
        let b = self.src.presentation(to);
        if !InducedMap::well_defined(map, &a, &b).map_err(|e| e.to_string())? {
            return Err(format!("{map:?} on {from} not well defined"));
        }
        Ok(InducedMap::compute(map, &a, &b).map_err(|e| e.to_string())?.matrix)
    }

    pub fn compose(&mut self, second: StructureMap, first: StructureMap, from: PiKey) -> Result<IntMatrix, String> {
        let a = self.matrix(first, from)?;
        let mid = from.on(first.target_points(from.n));
        let b = self.matrix(second, mid)?;
        Ok(b.mul(&a).unwrap())
    }

    /// `d^j d^i = d^i d^{j-1}` for all `i < j`; returns the number checked.
    pub fn coface_identities(&mut self, key: PiKey) -> Result<usize, String> {
        let n = key.n;
        let mut checked = 0;
        for j in 0..=n + 2 {
            for i in 0..j {
                if self.compose(D(j), D(i), key)? != self.compose(D(i), D(j - 1), key)? {
                    return Err(format!("d^{j} d^{i} != d^{i} d^{} on {key}", j - 1));
                }
                checked += 1;
            }
        }
        Ok(checked)
    }

    /// The mixed and pure codegeneracy identities on `key`.
    pub fn codegeneracy_identities(&mut self, key: PiKey) -> Result<usize, String> {
        let n = key.n;
        let up = key.on(n + 1);
        let id = IntMatrix::identity(self.src.presentation(key).rank());
        let mut checked = 0;
        for j in 0..=n {
            for i in 0..=n + 1 {
                let lhs = self.compose(s(j), D(i), key)?;
                let (rhs, what) = if i == j || i == j + 1 {
                    (id.clone(), "id".to_string())
                } else if i < j {
                    (self.compose(D(i), s(j - 1), key)?, format!("d^{i} s^{}", j - 1))
                } else {
                    (self.compose(D(i - 1), s(j), key)?, format!("d^{} s^{j}", i - 1))
                };
                if lhs != rhs {
                    return Err(format!("s^{j} d^{i} != {what} on {key}"));
                }
                checked += 1;
            }
        }
        for j in 0..n {
            for i in 0..=j {
                if self.compose(s(j), s(i), up)? != self.compose(s(i), s(j + 1), up)? {
                    return Err(format!("s^{j} s^{i} != s^{i} s^{} on {up}", j + 1));
                }
                checked += 1;
            }
        }
        Ok(checked)
    }
}
