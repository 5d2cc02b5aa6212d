use alloc::format;
use alloc::vec::Vec;

use super::GridPatch;
use crate::{Error, Result};

/// Closed lattice path on a patch, stored as unwrapped node indices.
///
/// Consecutive nodes are grid neighbours. The end node equals the start node
/// shifted by whole periods; the shift counts are the winding numbers, which
/// identify the deck transformation the loop represents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopPath {
    nodes: Vec<(isize, isize)>,
    winding: (i64, i64),
}

impl LoopPath {
    /// Validates a node list.
    pub fn new(patch: &GridPatch, nodes: Vec<(isize, isize)>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidLoop("a loop needs at least two nodes".into()));
        }
        for (k, w) in nodes.windows(2).enumerate() {
            let d = (w[1].0 - w[0].0).abs() + (w[1].1 - w[0].1).abs();
            if d != 1 {
                return Err(Error::InvalidLoop(format!("step {k} is not a single grid edge")));
            }
        }
        for &(i, j) in &nodes {
            if patch.wrap(i, j).is_none() {
                return Err(Error::InvalidLoop(format!("node ({i}, {j}) lies off the patch")));
            }
        }
        let (s, e) = (nodes[0], nodes[nodes.len() - 1]);
        let lap = |d: isize, n: usize, periodic: bool| -> Result<i64> {
            if d == 0 {
                Ok(0)
            } else if periodic && d % n as isize == 0 {
                Ok((d / n as isize) as i64)
            } else {
                Err(Error::InvalidLoop("end node does not match start node modulo periods".into()))
            }
        };
        let wu = lap(e.0 - s.0, patch.nu(), patch.periodic_u())?;
        let wv = lap(e.1 - s.1, patch.nv(), patch.periodic_v())?;
        Ok(Self { nodes, winding: (wu, wv) })
    }

    /// One lap in `+u` starting at node `start`.
    pub fn generator_u(patch: &GridPatch, start: (isize, isize)) -> Result<Self> {
        if !patch.periodic_u() {
            return Err(Error::InvalidLoop("u axis is not periodic".into()));
        }
        let n = patch.nu() as isize;
        Self::new(patch, (0..=n).map(|k| (start.0 + k, start.1)).collect())
    }

    /// One lap in `+v` starting at node `start`.
    pub fn generator_v(patch: &GridPatch, start: (isize, isize)) -> Result<Self> {
        if !patch.periodic_v() {
            return Err(Error::InvalidLoop("v axis is not periodic".into()));
        }
        let n = patch.nv() as isize;
        Self::new(patch, (0..=n).map(|k| (start.0, start.1 + k)).collect())
    }

    /// Counter-clockwise boundary of the `width × height` cell block whose
    /// lower-left node is `start`. Contractible.
    pub fn rectangle(patch: &GridPatch, start: (isize, isize), width: isize, height: isize) -> Result<Self> {
        if width < 1 || height < 1 {
            return Err(Error::InvalidLoop("rectangle needs positive sides".into()));
        }
        let (i0, j0) = start;
        let mut nodes = Vec::new();
        nodes.extend((0..width).map(|k| (i0 + k, j0)));
        nodes.extend((0..height).map(|k| (i0 + width, j0 + k)));
        nodes.extend((0..width).map(|k| (i0 + width - k, j0 + height)));
        nodes.extend((0..=height).map(|k| (i0, j0 + height - k)));
        Self::new(patch, nodes)
    }

    /// `self` followed by `other`, with `other` translated to start where
    /// `self` ends.
    pub fn then(&self, patch: &GridPatch, other: &LoopPath) -> Result<Self> {
        let end = *self.nodes.last().expect("non-empty");
        let o0 = other.nodes[0];
        let mut nodes = self.nodes.clone();
        nodes.extend(other.nodes[1..].iter().map(|&(i, j)| (i - o0.0 + end.0, j - o0.1 + end.1)));
        Self::new(patch, nodes)
    }

    pub fn nodes(&self) -> &[(isize, isize)] {
        &self.nodes
    }

    pub fn start(&self) -> (isize, isize) {
        self.nodes[0]
    }

    /// Laps around the `(u, v)` periods.
    pub fn winding(&self) -> (i64, i64) {
        self.winding
    }

    pub fn is_contractible(&self) -> bool {
        self.winding == (0, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_have_unit_winding() {
        let p = GridPatch::torus(16, 8, 1.0, 1.0).unwrap();
        assert_eq!(LoopPath::generator_u(&p, (0, 0)).unwrap().winding(), (1, 0));
        assert_eq!(LoopPath::generator_v(&p, (3, 2)).unwrap().winding(), (0, 1));
        let both = LoopPath::generator_u(&p, (0, 0)).unwrap().then(&p, &LoopPath::generator_v(&p, (0, 0)).unwrap()).unwrap();
        assert_eq!(both.winding(), (1, 1));
        let r = LoopPath::rectangle(&p, (2, 2), 3, 4).unwrap();
        assert!(r.is_contractible());
        assert_eq!(r.nodes().len(), 2 * (3 + 4) + 1);
    }

    #[test]
    fn rejects_broken_loops() {
        let p = GridPatch::torus(16, 8, 1.0, 1.0).unwrap();
        assert!(LoopPath::new(&p, alloc::vec![(0, 0), (2, 0)]).is_err());
        assert!(LoopPath::new(&p, alloc::vec![(0, 0), (1, 0)]).is_err());
    }
}
